//! Polyanalytic Newton iteration and the zero atlas.
//!
//! Linearizing `P(z + Δ) ≈ P + aΔ + b·conj(Δ)` with `a = ∂_z P`,
//! `b = ∂_z̄ P` gives the 2×2 real system whose solution is
//! `Δ = (b·conj(P) − conj(a)·P) / J`, `J = |a|² − |b|²`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::{PolyJet, PolyPoly};
use crate::winding::{self, Curve};

const MAX_HALVINGS: u32 = 20;
/// Relative dedupe radius `1e-8 · (1 + |z|)`.
pub const DEDUPE_RTOL: f64 = 1e-8;
/// Multiple of the last Newton step treated as position uncertainty when
/// merging candidates (matters only at singular zeros, where convergence is linear).
const UNCERTAINTY_STEPS: f64 = 10.0;
/// `|J| ≤ SINGULAR_RTOL · (|a|² + |b|²)` classifies a zero as singular.
pub const SINGULAR_RTOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonOptions {
    pub max_iter: usize,
    /// Stop when `|Δ| ≤ tol_step · |z|`.
    pub tol_step: f64,
    /// Converged iff `|P(z)| ≤ tol_residual · scale(z)` at exit.
    pub tol_residual: f64,
    pub jacobian_floor: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            max_iter: 100,
            tol_step: 1e-14,
            tol_residual: 1e-12,
            jacobian_floor: 1e-300,
        }
    }
}

impl NewtonOptions {
    pub fn validate(&self) -> Result<()> {
        let ok = self.max_iter > 0 && self.tol_step > 0.0 && self.tol_residual > 0.0 && self.jacobian_floor > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "Newton options must be positive: {self:?}"
            )))
        }
    }
}

/// Sign of the Jacobian: orientation of `P` at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum JacobianSign {
    /// Sense-preserving, `J > 0`.
    Positive,
    /// Sense-reversing, `J < 0`.
    Negative,
    Singular,
}

impl JacobianSign {
    pub fn as_i8(self) -> i8 {
        match self {
            JacobianSign::Positive => 1,
            JacobianSign::Negative => -1,
            JacobianSign::Singular => 0,
        }
    }

    /// Classifies with a relative band `|J| ≤ rtol (|a|² + |b|²)` and an
    /// absolute `floor`.
    pub fn classify(a: Complex64, b: Complex64, rtol: f64, floor: f64) -> Self {
        let (pa, pb) = (a.norm_sqr(), b.norm_sqr());
        let j = pa - pb;
        if j.abs() <= floor || j.abs() <= rtol * (pa + pb) {
            JacobianSign::Singular
        } else if j > 0.0 {
            JacobianSign::Positive
        } else {
            JacobianSign::Negative
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootResult {
    pub z: Complex64,
    pub converged: bool,
    pub iters: usize,
    /// `|P(z)| / scale(z)`.
    pub residual: f64,
    pub jacobian_sign: JacobianSign,
    /// Length of the Newton correction at `z`, or of the last move when
    /// that is undefined; serves as a position uncertainty.
    pub last_step: f64,
}

/// Default residual scale `Σ |α_{j,k}| max(1, |z|)^{j+k}`.
pub fn default_scale(p: &PolyPoly, z: Complex64) -> f64 {
    p.abs_eval(z.norm().max(1.0))
}

fn newton_delta(p: Complex64, a: Complex64, b: Complex64, floor: f64) -> Option<Complex64> {
    let j = a.norm_sqr() - b.norm_sqr();
    if j.abs() <= floor || !j.is_finite() {
        return None;
    }
    Some((b * p.conj() - a.conj() * p) / j)
}

/// One undamped Newton step `z + Δ`.
pub fn newton_step(p: &PolyPoly, z: Complex64) -> Result<Complex64> {
    newton_step_jet(&PolyJet::new(p), z, NewtonOptions::default().jacobian_floor)
}

pub fn newton_step_jet(jet: &PolyJet, z: Complex64, floor: f64) -> Result<Complex64> {
    let (pv, a, b) = jet.eval(z);
    newton_delta(pv, a, b, floor).map(|d| z + d).ok_or(Error::Singular(z))
}

/// Damped Newton iteration from `z0` with the default residual scale.
pub fn newton(p: &PolyPoly, z0: Complex64, opts: &NewtonOptions) -> RootResult {
    let jet = PolyJet::new(p);
    newton_with_scale(&jet, z0, opts, |z| default_scale(p, z))
}

/// Damped Newton iteration with a caller-supplied residual scale.
///
/// Steps are halved (up to 20 times) until `|P|` decreases. Iteration
/// continues past the residual tolerance until the step is relatively tiny,
/// no halving decreases `|P|`, or `max_iter` is reached; at singular zeros
/// this lets the linearly converging iterates keep approaching the zero.
pub fn newton_with_scale<S>(jet: &PolyJet, z0: Complex64, opts: &NewtonOptions, scale: S) -> RootResult
where
    S: Fn(Complex64) -> f64,
{
    let mut z = z0;
    let mut pz = jet.p.eval_compensated(z);
    let mut iters = 0;
    let mut last_step = 0.0;
    let mut finite = z.re.is_finite() && z.im.is_finite() && pz.norm().is_finite();
    while finite && iters < opts.max_iter && pz.norm() > 0.0 {
        let a = jet.dz.eval(z);
        let b = jet.dzbar.eval(z);
        let Some(delta) = newton_delta(pz, a, b, opts.jacobian_floor) else {
            break;
        };
        if !delta.norm().is_finite() {
            break;
        }
        iters += 1;
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let cand = z + delta * t;
            let pc = jet.p.eval_compensated(cand);
            if pc.norm() < pz.norm() {
                accepted = Some((cand, pc));
                break;
            }
            t *= 0.5;
        }
        let Some((znew, pnew)) = accepted else {
            break;
        };
        last_step = (znew - z).norm();
        let small = last_step <= opts.tol_step * znew.norm();
        z = znew;
        pz = pnew;
        finite = z.re.is_finite() && z.im.is_finite() && pz.norm().is_finite();
        if small {
            break;
        }
    }
    let pn = pz.norm();
    let residual = if pn == 0.0 {
        0.0
    } else {
        pn / scale(z).max(f64::MIN_POSITIVE)
    };
    let converged = finite && residual <= opts.tol_residual;
    let jacobian_sign = if finite {
        let (_, a, b) = jet.eval(z);
        if let Some(d) = newton_delta(pz, a, b, opts.jacobian_floor).filter(|d| d.norm().is_finite()) {
            last_step = d.norm();
        }
        JacobianSign::classify(a, b, SINGULAR_RTOL, opts.jacobian_floor)
    } else {
        JacobianSign::Singular
    };
    RootResult {
        z,
        converged,
        iters,
        residual,
        jacobian_sign,
        last_step,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CensusZero {
    pub z: Complex64,
    /// `None` when no isolating circle could be certified.
    pub index: Option<i64>,
    pub jacobian_sign: JacobianSign,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroCensus {
    pub zeros: Vec<CensusZero>,
    pub disk_radius: f64,
    /// Winding of `P` on `|z| = disk_radius`.
    pub total_winding: i64,
    /// True iff every index is known and they sum to `total_winding`.
    pub certified: bool,
}

impl ZeroCensus {
    pub fn index_sum(&self) -> Option<i64> {
        self.zeros.iter().map(|z| z.index).sum()
    }

    /// `max |z|` over the census (the optimal inclusion radius when certified).
    pub fn max_modulus(&self) -> f64 {
        self.zeros.iter().map(|z| z.z.norm()).fold(0.0, f64::max)
    }
}

/// Hexagonal seed lattice covering the closed disk.
pub fn hex_seeds(radius: f64, spacing: f64) -> Vec<Complex64> {
    let dy = spacing * 3f64.sqrt() / 2.0;
    let rows = (radius / dy).floor() as i64;
    let mut seeds = Vec::new();
    for r in -rows..=rows {
        let y = r as f64 * dy;
        let shift = if r.rem_euclid(2) == 1 { 0.5 * spacing } else { 0.0 };
        let cols = ((radius + spacing) / spacing).ceil() as i64;
        for c in -cols..=cols {
            let z = Complex64::new(c as f64 * spacing + shift, y);
            if z.norm() <= radius {
                seeds.push(z);
            }
        }
    }
    seeds
}

/// Finds, deduplicates, indexes and certifies the zeros of `P` in the disk
/// `|z| < disk_radius`, seeding Newton on a hexagonal grid of spacing
/// `disk_radius / (4·deg P)` plus `extra_seeds`.
pub fn zero_atlas(
    p: &PolyPoly,
    disk_radius: f64,
    opts: &NewtonOptions,
    extra_seeds: &[Complex64],
) -> Result<ZeroCensus> {
    zero_atlas_spaced(p, disk_radius, opts, extra_seeds, None)
}

pub fn zero_atlas_spaced(
    p: &PolyPoly,
    disk_radius: f64,
    opts: &NewtonOptions,
    extra_seeds: &[Complex64],
    spacing: Option<f64>,
) -> Result<ZeroCensus> {
    opts.validate()?;
    let deg = p.degrees().ok_or(Error::ZeroPolynomial)?.deg.max(1);
    if !(disk_radius > 0.0) || !disk_radius.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "disk radius must be positive, got {disk_radius}"
        )));
    }
    let spacing = spacing.unwrap_or(disk_radius / (4.0 * deg as f64));
    if !(spacing > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "seed spacing must be positive, got {spacing}"
        )));
    }
    let boundary = winding::winding(p, &Curve::circle(Complex64::new(0.0, 0.0), disk_radius)?, None)?;

    let mut seeds = hex_seeds(disk_radius, spacing);
    seeds.extend_from_slice(extra_seeds);
    let jet = PolyJet::new(p);
    let runs: Vec<RootResult> = seeds
        .par_iter()
        .map(|&s| newton_with_scale(&jet, s, opts, |z| default_scale(p, z)))
        .collect();
    let candidates = runs.into_iter().filter(|r| r.converged && r.z.norm() < disk_radius);
    let found = dedupe(candidates);
    let zeros = classify(p, &found);
    let certified = zeros.iter().map(|z| z.index).sum::<Option<i64>>() == Some(boundary.wind);
    Ok(ZeroCensus {
        zeros,
        disk_radius,
        total_winding: boundary.wind,
        certified,
    })
}

/// Merges converged runs, best-located first: a candidate within
/// `1e-8(1 + |z|)` plus the position uncertainty of either run of its
/// nearest kept zero is that zero; the lower-residual representative stays.
pub(crate) fn dedupe<I>(candidates: I) -> Vec<RootResult>
where
    I: IntoIterator<Item = RootResult>,
{
    let mut sorted: Vec<RootResult> = candidates.into_iter().collect();
    sorted.sort_by(|x, y| {
        x.last_step
            .total_cmp(&y.last_step)
            .then(x.residual.total_cmp(&y.residual))
    });
    let u = |r: &RootResult| UNCERTAINTY_STEPS * r.last_step;
    let mut kept: Vec<RootResult> = Vec::new();
    for cand in sorted {
        let nearest = kept
            .iter_mut()
            .map(|k| ((k.z - cand.z).norm(), k))
            .min_by(|x, y| x.0.total_cmp(&y.0));
        match nearest {
            Some((d, k)) if d <= DEDUPE_RTOL * (1.0 + cand.z.norm().max(k.z.norm())) + u(k) + u(&cand) => {
                if cand.residual < k.residual {
                    *k = cand;
                }
            }
            _ => kept.push(cand),
        }
    }
    kept
}

/// Computes indices with isolating circles of a third of the distance to
/// the nearest other zero.
pub(crate) fn classify(p: &PolyPoly, found: &[RootResult]) -> Vec<CensusZero> {
    let radii: Vec<f64> = found
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let nearest = found
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, o)| (o.z - r.z).norm())
                .fold(f64::INFINITY, f64::min);
            if nearest.is_finite() {
                nearest / 3.0
            } else {
                0.25 * (1.0 + r.z.norm())
            }
        })
        .collect();
    let mut zeros: Vec<CensusZero> = found
        .par_iter()
        .zip(radii.par_iter())
        .map(|(r, &rad)| CensusZero {
            z: r.z,
            index: winding::index(p, r.z, rad).ok(),
            jacobian_sign: r.jacobian_sign,
            residual: r.residual,
        })
        .collect();
    zeros.sort_by(|a, b| a.z.re.total_cmp(&b.z.re).then(a.z.im.total_cmp(&b.z.im)));
    zeros
}

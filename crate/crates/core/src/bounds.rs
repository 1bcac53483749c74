//! Inclusion disks for the zeros of a polyanalytic polynomial whose top-degree
//! form has one strictly dominant coefficient.
//!
//! With `α_n = |α_{ℓ,n−ℓ}| − Σ_{j≠ℓ} |α_{j,n−j}| > 0` and
//! `c_k = Σ_j |α_{j,k−j}| / α_n`, every zero satisfies `|z| ≤ r0`, where `r0`
//! is the unique positive root of `q(t) = tⁿ − Σ c_k t^k`. The closed forms
//! `r1 = max(1, Σ c_k)` (Lagrange) and `r2 = 1 + max c_k` (Cauchy) bound `r0`.

use crate::error::{Error, Result};
use crate::poly::PolyPoly;

/// Relative guard band: ties within this fraction of the top-form mass are
/// not treated as strict dominance.
pub const DOMINANCE_GUARD: f64 = 1e-12;

const BISECTION_STEPS: usize = 40;
const NEWTON_RTOL: f64 = 1e-14;

/// Index and surplus of the dominant top-degree coefficient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dominance {
    pub ell: usize,
    pub alpha_n: f64,
}

/// The radii of a polynomial with a dominant top-degree term.
#[derive(Clone, Debug, PartialEq)]
pub struct InclusionRadii {
    pub ell: usize,
    pub alpha_n: f64,
    /// Auxiliary coefficients `c_0 … c_{n−1}`.
    pub c: Vec<f64>,
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundsReport {
    pub degree: usize,
    /// `None` when no top-degree coefficient strictly dominates.
    pub radii: Option<InclusionRadii>,
}

impl BoundsReport {
    pub fn applicable(&self) -> bool {
        self.radii.is_some()
    }
}

/// Picks `ℓ` maximizing `|α_{ℓ,n−ℓ}|` and returns the surplus if positive.
pub fn dominance_surplus(p: &PolyPoly) -> Option<Dominance> {
    if p.is_zero() || p.degree_bound() == 0 {
        return None;
    }
    let top: Vec<f64> = p.top_form().iter().map(|c| c.norm()).collect();
    let (ell, &lead) = top
        .iter()
        .enumerate()
        .fold((0, &top[0]), |best, (j, v)| if *v > *best.1 { (j, v) } else { best });
    let total: f64 = top.iter().sum();
    let alpha_n = lead - (total - lead);
    (alpha_n > DOMINANCE_GUARD * total).then_some(Dominance { ell, alpha_n })
}

/// `c_k = Σ_{j=0}^{k} |α_{j,k−j}| / α_n` for `k < n`.
pub fn auxiliary_poly(p: &PolyPoly) -> Result<Vec<f64>> {
    let dom = dominance_surplus(p).ok_or(Error::NotDominant)?;
    Ok(aux_coeffs(p, dom.alpha_n))
}

fn aux_coeffs(p: &PolyPoly, alpha_n: f64) -> Vec<f64> {
    (0..p.degree_bound())
        .map(|k| (0..=k).map(|j| p.coeff(j, k - j).norm()).sum::<f64>() / alpha_n)
        .collect()
}

/// `q(t) = tⁿ − Σ c_k t^k` with `n = c.len()`, and its derivative.
fn eval_q(c: &[f64], t: f64) -> (f64, f64) {
    let mut q = 1.0;
    let mut dq = 0.0;
    for &ck in c.iter().rev() {
        dq = dq * t + q;
        q = q * t - ck;
    }
    (q, dq)
}

pub fn lagrange_radius(c: &[f64]) -> f64 {
    c.iter().sum::<f64>().max(1.0)
}

pub fn cauchy_radius(c: &[f64]) -> f64 {
    1.0 + c.iter().copied().fold(0.0, f64::max)
}

/// Unique positive root of `q(t) = tⁿ − Σ c_k t^k`, or 0 when all `c_k` vanish.
///
/// Bisection on `[0, min(r1, r2)]` followed by safeguarded Newton.
pub fn radius_r0(c: &[f64]) -> Result<f64> {
    if let Some(bad) = c.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "auxiliary coefficients must be finite and nonnegative, got {bad}"
        )));
    }
    if c.iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut hi = lagrange_radius(c).min(cauchy_radius(c));
    // q < 0 on (0, r0) and q > 0 beyond
    if eval_q(c, hi).0 == 0.0 {
        return Ok(hi);
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if eval_q(c, mid).0 > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..60 {
        let (q, dq) = eval_q(c, t);
        if q == 0.0 {
            return Ok(t);
        }
        if q > 0.0 {
            hi = hi.min(t);
        } else {
            lo = lo.max(t);
        }
        let step = q / dq;
        let mut next = t - step;
        if !(next >= lo && next <= hi) {
            next = 0.5 * (lo + hi);
        }
        let done = (next - t).abs() <= NEWTON_RTOL * t;
        t = next;
        if done {
            break;
        }
    }
    Ok(t)
}

/// Assembles all radii. Inapplicable polynomials yield `radii = None`.
pub fn bounds_report(p: &PolyPoly) -> Result<BoundsReport> {
    let degree = match p.degrees() {
        Some(d) if d.deg >= 1 => d.deg,
        Some(_) => return Err(Error::InvalidArgument("bounds need degree >= 1".into())),
        None => return Err(Error::ZeroPolynomial),
    };
    let radii = match dominance_surplus(p) {
        None => None,
        Some(Dominance { ell, alpha_n }) => {
            let c = aux_coeffs(p, alpha_n);
            let (r0, r1, r2) = if c.iter().all(|&v| v == 0.0) {
                (0.0, 1.0, 1.0)
            } else {
                (radius_r0(&c)?, lagrange_radius(&c), cauchy_radius(&c))
            };
            Some(InclusionRadii {
                ell,
                alpha_n,
                c,
                r0,
                r1,
                r2,
            })
        }
    };
    Ok(BoundsReport { degree, radii })
}

//! Harmonic polynomials with the maximal number `n²` of zeros.
//!
//! `P_1 = a_1 z̄` and `P_k = P_{k−1} + a_k z^k` (k even) or `+ a_k z̄^k`
//! (k odd). For small enough `|a_k|`, each zero of `P_{k−1}` persists and
//! `2k − 1` new zeros appear near the circle `|z| = |a_{k−1}/a_k|`.
//! Smallness is checked through the two Rouché inequalities
//!
//! * `|a_k| < min_j min_{|z−z_j|=δ_j} |P_{k−1}(z)| / |z|^k`,
//! * `|a_k| < r_{k−1}^{−k} min_{|z|=r_{k−1}} |P_{k−1}(z)|`,
//!
//! sampled on circles, with the census of `P_k` verified before moving on.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::{PolyJet, PolyPoly};
use crate::rootfind::{self, CensusZero, NewtonOptions, RootResult, ZeroCensus};
use crate::winding::{self, Curve};

pub const CIRCLE_SAMPLES: usize = 1024;
/// Generated coefficients must satisfy both inequalities with this factor.
pub const MARGIN: f64 = 0.5;
pub const SHRINK_FACTOR: f64 = 0.1;
pub const MAX_SHRINKS: usize = 200;
/// Ratio of `r_k` to the radius of the stage-`k` seed circle.
pub const RADIUS_FACTOR: f64 = 2.0;
/// Magnitudes beyond `10^±RANGE_EXP` are rejected.
pub const RANGE_EXP: i32 = 290;

/// Fixed degree-10 coefficients `1, 1, 1e-1, 1e-3, …, 1e-47`, used as a regression reference.
pub fn reference_coefficients() -> Vec<Complex64> {
    [0, 0, -1, -3, -6, -10, -16, -24, -34, -47]
        .iter()
        .map(|&e| Complex64::new(10f64.powi(e), 0.0))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalSchedule {
    /// `a_1, …, a_n`.
    pub a: Vec<Complex64>,
    /// `r_1 < … < r_n`; the zeros of `P_k` lie in `|z| < r_k`.
    pub r: Vec<f64>,
    /// Rouché slack `1 − |a_k| / bound_k`; 1 where no condition applies.
    pub margins: Vec<f64>,
}

impl ExtremalSchedule {
    pub fn degree(&self) -> usize {
        self.a.len()
    }

    /// Checks nonzero coefficients, increasing radii and positive margins.
    pub fn validate(&self) -> Result<()> {
        let n = self.a.len();
        if n == 0 || self.r.len() != n || self.margins.len() != n {
            return Err(Error::Schedule(format!(
                "inconsistent lengths a={}, r={}, margins={}",
                n,
                self.r.len(),
                self.margins.len()
            )));
        }
        if let Some(k) = self
            .a
            .iter()
            .position(|a| *a == Complex64::new(0.0, 0.0) || !a.norm().is_finite())
        {
            return Err(Error::Schedule(format!("a_{} must be finite and nonzero", k + 1)));
        }
        if self.r.windows(2).any(|w| !(w[1] > w[0])) || !(self.r[0] > 0.0) {
            return Err(Error::Schedule("radii must be positive and strictly increasing".into()));
        }
        if self.margins.iter().any(|m| !(*m > 0.0)) {
            return Err(Error::Schedule("margins must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Seed {
    pub k: usize,
    pub j: usize,
    pub zeta: Complex64,
}

/// `a_k z^k` for even `k`, `a_k z̄^k` for odd `k`.
fn stage_term(k: usize, a: Complex64) -> PolyPoly {
    if k % 2 == 0 {
        PolyPoly::monomial(k, 0, a)
    } else {
        PolyPoly::monomial(0, k, a)
    }
}

/// `Σ a_{2k} z^{2k} + Σ a_{2k−1} z̄^{2k−1}`.
pub fn extremal_poly(schedule: &ExtremalSchedule) -> PolyPoly {
    extremal_poly_from(&schedule.a)
}

pub fn extremal_poly_from(a: &[Complex64]) -> PolyPoly {
    PolyPoly::from_terms(a.iter().enumerate().map(|(i, &c)| {
        let k = i + 1;
        if k % 2 == 0 {
            (k, 0, c)
        } else {
            (0, k, c)
        }
    }))
    .expect("finite coefficients")
}

/// Zeros of the two-term truncation at stage `k`: `ζ = 0` for `k = 1`,
/// otherwise `2k − 1` points on `|z| = |a_{k−1}/a_k|`.
fn stage_seeds(a: &[Complex64], k: usize) -> Vec<Seed> {
    if k == 1 {
        return vec![Seed {
            k: 1,
            j: 1,
            zeta: Complex64::new(0.0, 0.0),
        }];
    }
    let ratio = a[k - 2] / a[k - 1];
    let m = (2 * k - 1) as f64;
    // the odd stage pairs z̄^k with z^{k−1}, which conjugates the angles
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    (1..2 * k)
        .map(|j| {
            let theta = sign * (ratio.arg() + (2 * j + 1) as f64 * PI) / m;
            Seed {
                k,
                j,
                zeta: Complex64::from_polar(ratio.norm(), theta),
            }
        })
        .collect()
}

/// All `n²` truncation seeds, stage by stage.
pub fn truncation_seeds(schedule: &ExtremalSchedule) -> Vec<Seed> {
    (1..=schedule.degree())
        .flat_map(|k| stage_seeds(&schedule.a, k))
        .collect()
}

fn circle_min(p: &PolyPoly, center: Complex64, radius: f64, k: usize) -> f64 {
    (0..CIRCLE_SAMPLES)
        .map(|i| {
            let z = center + Complex64::from_polar(radius, 2.0 * PI * i as f64 / CIRCLE_SAMPLES as f64);
            p.eval(z).norm() / z.norm().powi(k as i32)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Upper bound on `|a_k|` from the two Rouché inequalities, given the
/// zeros of `P_{k−1}` and its enclosing radius.
fn rouche_bound(prev: &PolyPoly, zeros: &[Complex64], r_prev: f64, k: usize) -> f64 {
    let local = zeros
        .par_iter()
        .enumerate()
        .map(|(i, &zj)| {
            let nearest = zeros
                .iter()
                .enumerate()
                .filter(|(l, _)| *l != i)
                .map(|(_, zl)| (zl - zj).norm())
                .fold(f64::INFINITY, f64::min);
            circle_min(prev, zj, 0.5 * nearest, k)
        })
        .reduce(|| f64::INFINITY, f64::min);
    let outer = circle_min(prev, Complex64::new(0.0, 0.0), r_prev, k);
    local.min(outer)
}

fn check_range(what: &str, x: f64) -> Result<()> {
    let lim = 10f64.powi(RANGE_EXP);
    if x.is_finite() && x < lim && x > 1.0 / lim {
        Ok(())
    } else {
        Err(Error::Range(format!(
            "{what} = {x:e} outside [1e-{RANGE_EXP}, 1e{RANGE_EXP}]"
        )))
    }
}

/// Newton from `seeds` (with per-stage residual scale `|a_k z^k|`),
/// deduplicated.
fn solve_from_seeds(p: &PolyPoly, a: &[Complex64], seeds: &[Seed], opts: &NewtonOptions) -> Vec<(RootResult, usize)> {
    let jet = PolyJet::new(p);
    let runs: Vec<(RootResult, usize)> = seeds
        .par_iter()
        .map(|s| {
            let ak = a[s.k - 1].norm();
            let r = rootfind::newton_with_scale(&jet, s.zeta, opts, |z| ak * z.norm().powi(s.k as i32));
            (r, s.k)
        })
        .collect();
    let kept = rootfind::dedupe(runs.iter().filter(|(r, _)| r.converged).map(|(r, _)| *r));
    kept.into_iter()
        .map(|r| {
            let k = runs.iter().find(|(q, _)| q.z == r.z).map(|(_, k)| *k).unwrap_or(0);
            (r, k)
        })
        .collect()
}

struct Stage {
    zeros: Vec<(Complex64, usize)>,
    max_modulus: f64,
}

/// Stage of origin for each classified zero.
fn stages_of(zeros: &[CensusZero], found: &[(RootResult, usize)]) -> Vec<usize> {
    zeros
        .iter()
        .map(|z| found.iter().find(|(r, _)| r.z == z.z).map(|(_, k)| *k).unwrap_or(0))
        .collect()
}

/// Census of `P_k` seeded from the previous zeros and the new seed circle.
/// Fails unless there are `k²` zeros whose indices sum to `±k`.
fn stage_census(
    p: &PolyPoly,
    a: &[Complex64],
    prev: &[(Complex64, usize)],
    k: usize,
    opts: &NewtonOptions,
) -> Option<Stage> {
    let mut seeds: Vec<Seed> = prev.iter().map(|&(zeta, k)| Seed { k, j: 0, zeta }).collect();
    seeds.extend(stage_seeds(a, k));
    let found = solve_from_seeds(p, a, &seeds, opts);
    if found.len() != k * k {
        return None;
    }
    let roots: Vec<RootResult> = found.iter().map(|(r, _)| *r).collect();
    let zeros = rootfind::classify(p, &roots);
    let expect = if k % 2 == 0 { k as i64 } else { -(k as i64) };
    let sum: Option<i64> = zeros.iter().map(|z| z.index).sum();
    if sum != Some(expect) {
        return None;
    }
    let max_modulus = zeros.iter().map(|z| z.z.norm()).fold(0.0, f64::max);
    let stages = stages_of(&zeros, &found);
    Some(Stage {
        zeros: zeros.iter().map(|z| z.z).zip(stages).collect(),
        max_modulus,
    })
}

/// Builds a schedule of degree `n`. Caller-supplied coefficients in `base`
/// are kept when they satisfy both inequalities; generated ones start at
/// `|a_{k−1}| 10^{−(k+1)}` and must satisfy them with margin 0.5. Either is
/// shrunk by 10 until the conditions hold and the stage census has `k²`
/// zeros.
pub fn extremal_coefficients(n: usize, base: Option<&[Complex64]>) -> Result<ExtremalSchedule> {
    if n == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    if let Some(b) = base {
        if b.len() > n {
            return Err(Error::InvalidArgument(format!(
                "{} base coefficients for degree {n}",
                b.len()
            )));
        }
        if let Some(i) = b.iter().position(|c| !c.norm().is_finite() || c.norm() == 0.0) {
            return Err(Error::InvalidArgument(format!(
                "base coefficient a_{} must be finite and nonzero",
                i + 1
            )));
        }
    }
    let given = |k: usize| base.and_then(|b| b.get(k - 1)).copied();
    let opts = NewtonOptions::default();

    let a1 = given(1).unwrap_or(Complex64::new(1.0, 0.0));
    check_range("|a_1|", a1.norm())?;
    let mut a = vec![a1];
    let mut margins = vec![1.0];
    let mut r = vec![0.0];
    let mut zeros = vec![(Complex64::new(0.0, 0.0), 1)];
    let mut p = stage_term(1, a1);

    for k in 2..=n {
        let (mut ak, margin) = match given(k) {
            Some(c) => (c, 1.0),
            None => (
                Complex64::new(a[k - 2].norm() * 10f64.powi(-(k as i32 + 1)), 0.0),
                MARGIN,
            ),
        };
        // P_2 has four zeros for any nonzero a_1, a_2
        let bound = if k == 2 {
            f64::INFINITY
        } else {
            let pts: Vec<Complex64> = zeros.iter().map(|z| z.0).collect();
            rouche_bound(&p, &pts, r[k - 2], k)
        };
        let mut shrinks = 0;
        loop {
            check_range(&format!("|a_{k}|"), ak.norm())?;
            if ak.norm() < margin * bound {
                a.push(ak);
                let cand = &p + &stage_term(k, ak);
                if let Some(stage) = stage_census(&cand, &a, &zeros, k, &opts) {
                    let seed_radius = (a[k - 2] / ak).norm();
                    let rk = (RADIUS_FACTOR * seed_radius).max(1.25 * stage.max_modulus);
                    check_range(&format!("r_{k}^{k}"), rk.powi(k as i32))?;
                    if k == 2 {
                        r[0] = rk / 4.0;
                    }
                    r.push(rk);
                    margins.push(if bound.is_finite() {
                        1.0 - ak.norm() / bound
                    } else {
                        1.0
                    });
                    zeros = stage.zeros;
                    p = cand;
                    break;
                }
                a.pop();
            }
            shrinks += 1;
            if shrinks > MAX_SHRINKS {
                return Err(Error::Schedule(format!(
                    "a_{k} not accepted after {MAX_SHRINKS} shrinks"
                )));
            }
            ak *= SHRINK_FACTOR;
        }
    }
    if n == 1 {
        r[0] = 1.0;
    }
    let schedule = ExtremalSchedule { a, r, margins };
    schedule.validate()?;
    Ok(schedule)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalVerification {
    pub census: ZeroCensus,
    /// `max |P(z)| / |a_k z^k|` over the zeros, `k` the originating stage.
    pub max_relative_residual: f64,
    /// Stage of each census zero, aligned with `census.zeros`.
    pub stages: Vec<usize>,
}

/// Solves from every truncation seed and checks the `n²` zeros, their
/// index sum against the winding on `|z| = r_n`, and the `2k − 1` zeros
/// per annulus `r_{k−1} < |z| < r_k` with index `(−1)^k`.
pub fn verify_extremal(schedule: &ExtremalSchedule) -> Result<ExtremalVerification> {
    schedule.validate()?;
    let n = schedule.degree();
    let p = extremal_poly(schedule);
    let seeds = truncation_seeds(schedule);
    let found = solve_from_seeds(&p, &schedule.a, &seeds, &NewtonOptions::default());
    if found.len() != n * n {
        return Err(Error::Verification(format!(
            "found {} distinct zeros, expected {}",
            found.len(),
            n * n
        )));
    }
    let max_relative_residual = found.iter().map(|(r, _)| r.residual).fold(0.0, f64::max);
    let roots: Vec<RootResult> = found.iter().map(|(r, _)| *r).collect();
    let zeros = rootfind::classify(&p, &roots);
    let stages = stages_of(&zeros, &found);

    let rn = *schedule.r.last().expect("validated");
    let total = winding::winding(&p, &Curve::circle(Complex64::new(0.0, 0.0), rn)?, None)?.wind;
    let expect = if n % 2 == 0 { n as i64 } else { -(n as i64) };
    let sum: Option<i64> = zeros.iter().map(|z| z.index).sum();
    if sum != Some(expect) || total != expect {
        return Err(Error::Verification(format!(
            "index sum {sum:?} and boundary winding {total}, expected {expect}"
        )));
    }
    for k in 1..=n {
        let lo = if k == 1 { 0.0 } else { schedule.r[k - 2] };
        let hi = schedule.r[k - 1];
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let ring: Vec<&CensusZero> = zeros.iter().filter(|z| z.z.norm() >= lo && z.z.norm() < hi).collect();
        if ring.len() != 2 * k - 1 || ring.iter().any(|z| z.index != Some(sign)) {
            return Err(Error::Verification(format!(
                "annulus {k} ({lo:e} <= |z| < {hi:e}) holds {} zeros with indices {:?}",
                ring.len(),
                ring.iter().map(|z| z.index).collect::<Vec<_>>()
            )));
        }
    }
    Ok(ExtremalVerification {
        census: ZeroCensus {
            zeros,
            disk_radius: rn,
            total_winding: total,
            certified: true,
        },
        max_relative_residual,
        stages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::tests::c;

    fn sched(a: &[Complex64]) -> ExtremalSchedule {
        extremal_coefficients(a.len(), Some(a)).unwrap()
    }

    #[test]
    fn degree_one() {
        let s = extremal_coefficients(1, None).unwrap();
        assert_eq!(s.a, vec![c(1.0, 0.0)]);
        let v = verify_extremal(&s).unwrap();
        assert_eq!(v.census.zeros.len(), 1);
        assert_eq!(v.census.zeros[0].z, c(0.0, 0.0));
        assert_eq!(v.census.zeros[0].index, Some(-1));
    }

    #[test]
    fn degree_two_with_unit_base() {
        let s = sched(&[c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(s.a, vec![c(1.0, 0.0), c(1.0, 0.0)]);
        let p = extremal_poly(&s);
        assert_eq!(
            p,
            PolyPoly::monomial(2, 0, c(1.0, 0.0)) + PolyPoly::monomial(0, 1, c(1.0, 0.0))
        );
        let v = verify_extremal(&s).unwrap();
        assert_eq!(v.census.zeros.len(), 4);
        assert_eq!(v.census.total_winding, 2);
    }

    #[test]
    fn parity_placement() {
        let a = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)];
        let p = extremal_poly_from(&a);
        assert_eq!(p.coeff(0, 1), a[0]);
        assert_eq!(p.coeff(2, 0), a[1]);
        assert_eq!(p.coeff(0, 3), a[2]);
        assert_eq!(p.nonzero_count(), 3);
        assert_eq!(extremal_poly_from(&reference_coefficients()).nonzero_count(), 10);
    }

    #[test]
    fn seeds_for_unit_pair() {
        let s = ExtremalSchedule {
            a: vec![c(1.0, 0.0), c(1.0, 0.0)],
            r: vec![0.5, 2.0],
            margins: vec![1.0, 1.0],
        };
        let seeds = truncation_seeds(&s);
        assert_eq!(seeds.len(), 4);
        assert_eq!(seeds[0].zeta, c(0.0, 0.0));
        let angles: Vec<f64> = seeds[1..].iter().map(|s| s.zeta.arg().rem_euclid(2.0 * PI)).collect();
        for (got, want) in angles.iter().zip([PI, 5.0 * PI / 3.0, PI / 3.0]) {
            assert!((got - want).abs() < 1e-14, "{angles:?}");
        }
        assert!(seeds.iter().skip(1).all(|s| (s.zeta.norm() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn seeds_are_truncation_zeros_for_complex_coefficients() {
        let a = [c(0.3, -1.2), c(0.7, 0.4), c(-0.02, 0.05), c(1e-4, 3e-4)];
        let s = ExtremalSchedule {
            a: a.to_vec(),
            r: vec![1.0, 2.0, 3.0, 4.0],
            margins: vec![1.0; 4],
        };
        for seed in truncation_seeds(&s).into_iter().filter(|s| s.k >= 2) {
            let q = stage_term(seed.k, a[seed.k - 1]) + stage_term(seed.k - 1, a[seed.k - 2]);
            let scale = (a[seed.k - 1] * seed.zeta.powi(seed.k as i32)).norm();
            assert!(q.eval(seed.zeta).norm() < 1e-13 * scale, "{seed:?}");
        }
    }

    #[test]
    fn seed_symmetry_for_real_ratio() {
        let s = extremal_coefficients(4, None).unwrap();
        for k in 2..=4 {
            let ring: Vec<Complex64> = truncation_seeds(&s)
                .into_iter()
                .filter(|x| x.k == k)
                .map(|x| x.zeta)
                .collect();
            for z in &ring {
                assert!(ring.iter().any(|w| (w - z.conj()).norm() < 1e-12 * z.norm()));
            }
        }
    }

    #[test]
    fn reference_schedule_is_accepted_unchanged() {
        let base = reference_coefficients();
        let s = extremal_coefficients(10, Some(&base)).unwrap();
        assert_eq!(s.a, base);
        assert!(s.r.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn adaptive_schedule_small_degrees() {
        for n in 1..=5 {
            let s = extremal_coefficients(n, None).unwrap();
            s.validate().unwrap();
            let v = verify_extremal(&s).unwrap();
            assert_eq!(v.census.zeros.len(), n * n);
            assert!(v.max_relative_residual < 1e-13, "n={n}: {}", v.max_relative_residual);
            assert_eq!(extremal_poly(&s).nonzero_count(), n);
        }
    }

    #[test]
    fn degree_three_indices() {
        let s = extremal_coefficients(3, None).unwrap();
        let v = verify_extremal(&s).unwrap();
        let neg = v.census.zeros.iter().filter(|z| z.index == Some(-1)).count();
        let pos = v.census.zeros.iter().filter(|z| z.index == Some(1)).count();
        assert_eq!((neg, pos), (6, 3));
        assert_eq!(v.census.index_sum(), Some(-3));
    }

    /// Each zero's nearest seed is distinct and within 15% relative distance.
    fn assert_seed_fidelity(s: &ExtremalSchedule) {
        let seeds = truncation_seeds(s);
        let v = verify_extremal(s).unwrap();
        let mut used = vec![false; seeds.len()];
        for z in &v.census.zeros {
            let (i, d) = seeds
                .iter()
                .map(|s| (s.zeta - z.z).norm() / s.zeta.norm().max(f64::MIN_POSITIVE))
                .enumerate()
                .fold((0, f64::INFINITY), |b, (i, d)| if d < b.1 { (i, d) } else { b });
            assert!(!used[i], "two zeros share seed {:?}", seeds[i]);
            used[i] = true;
            assert!(z.z == c(0.0, 0.0) || d < 0.15, "{z:?} at relative distance {d}");
        }
    }

    #[test]
    fn zeros_stay_near_seeds() {
        assert_seed_fidelity(&extremal_coefficients(6, None).unwrap());
        assert_seed_fidelity(&extremal_coefficients(10, Some(&reference_coefficients())).unwrap());
    }

    #[test]
    fn oversized_base_is_shrunk() {
        // a_3 = 1 violates the conditions around the P_2 zeros
        let s = extremal_coefficients(3, Some(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)])).unwrap();
        assert!(s.a[2].norm() < 1.0);
        assert_eq!(verify_extremal(&s).unwrap().census.zeros.len(), 9);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(extremal_coefficients(0, None).is_err());
        assert!(extremal_coefficients(2, Some(&[c(1.0, 0.0), c(0.0, 0.0)])).is_err());
        let bad = ExtremalSchedule {
            a: vec![c(1.0, 0.0), c(1.0, 0.0)],
            r: vec![2.0, 1.0],
            margins: vec![1.0, 1.0],
        };
        assert!(matches!(verify_extremal(&bad), Err(Error::Schedule(_))));
    }

    #[test]
    fn extreme_range_is_rejected() {
        let base = [c(1.0, 0.0), c(1e-200, 0.0), c(1e-250, 0.0)];
        assert!(matches!(extremal_coefficients(3, Some(&base)), Err(Error::Range(_))));
    }
}

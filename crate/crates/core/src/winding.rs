//! Winding numbers by adaptive argument continuation.
//!
//! The curve is sampled, principal-branch phase increments between
//! consecutive samples are accumulated, and any segment whose increment
//! exceeds π/2 is bisected until it does not. The accumulated change divided
//! by 2π must lie within [`ROUNDING_GATE`] of an integer.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::PolyPoly;

pub const INITIAL_CIRCLE_SAMPLES: usize = 256;
pub const SAMPLES_PER_EDGE: usize = 32;
pub const MAX_DEPTH: u32 = 24;
pub const PHASE_JUMP_LIMIT: f64 = FRAC_PI_2;
pub const ROUNDING_GATE: f64 = 1e-6;
/// Relative factor of the default zero-on-curve threshold.
pub const SAFETY_FACTOR: f64 = 1e-13;
const INDEX_SHRINKS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    Positive,
    Negative,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurveKind {
    Circle {
        center: Complex64,
        radius: f64,
    },
    /// Closed: the first vertex is repeated as the last.
    ClosedPolyline(Vec<Complex64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    kind: CurveKind,
    orientation: Orientation,
}

impl Curve {
    pub fn circle(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() || !(center.re.is_finite() && center.im.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "circle radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Curve {
            kind: CurveKind::Circle { center, radius },
            orientation: Orientation::Positive,
        })
    }

    /// A closed polyline; the first vertex must equal the last and at least
    /// three vertices must be distinct.
    pub fn polyline(vertices: Vec<Complex64>) -> Result<Self> {
        if vertices.len() < 4 || vertices.first() != vertices.last() {
            return Err(Error::InvalidArgument(
                "polyline must be closed (first = last vertex)".into(),
            ));
        }
        let mut distinct: Vec<Complex64> = Vec::new();
        for v in &vertices {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite("polyline vertex"));
            }
            if !distinct.contains(v) {
                distinct.push(*v);
            }
        }
        if distinct.len() < 3 {
            return Err(Error::InvalidArgument(
                "polyline needs at least 3 distinct vertices".into(),
            ));
        }
        Ok(Curve {
            kind: CurveKind::ClosedPolyline(vertices),
            orientation: Orientation::Positive,
        })
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn reversed(self) -> Self {
        let o = match self.orientation {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        };
        self.with_orientation(o)
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Largest `|z|` on the curve.
    pub fn max_modulus(&self) -> f64 {
        match &self.kind {
            CurveKind::Circle { center, radius } => center.norm() + radius,
            CurveKind::ClosedPolyline(v) => v.iter().map(|z| z.norm()).fold(0.0, f64::max),
        }
    }

    fn segments(&self) -> usize {
        match &self.kind {
            CurveKind::Circle { .. } => INITIAL_CIRCLE_SAMPLES,
            CurveKind::ClosedPolyline(v) => (v.len() - 1) * SAMPLES_PER_EDGE,
        }
    }

    /// Point at parameter `t ∈ [0, 1]`, traversed in the curve's orientation.
    pub fn point(&self, t: f64) -> Complex64 {
        let t = match self.orientation {
            Orientation::Positive => t,
            Orientation::Negative => 1.0 - t,
        };
        match &self.kind {
            CurveKind::Circle { center, radius } => {
                if t == 1.0 {
                    return center + radius;
                }
                center + Complex64::from_polar(*radius, TAU * t)
            }
            CurveKind::ClosedPolyline(v) => {
                let edges = v.len() - 1;
                let s = t * edges as f64;
                let i = (s.floor() as usize).min(edges - 1);
                let f = s - i as f64;
                v[i] + (v[i + 1] - v[i]) * f
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindingResult {
    pub wind: i64,
    /// Smallest `|P|` seen on the curve.
    pub min_modulus: f64,
    pub samples: usize,
}

/// Default zero-on-curve threshold: `1e-13 · Σ |α_{j,k}| ρ^{j+k}` with `ρ`
/// the largest modulus on the curve.
pub fn default_safety_tol(p: &PolyPoly, curve: &Curve) -> f64 {
    SAFETY_FACTOR * p.abs_eval(curve.max_modulus())
}

#[derive(Clone, Copy)]
struct Sample {
    t: f64,
    z: Complex64,
    unit: Complex64,
}

/// Winding number of `P` along `curve`.
///
/// `safety_tol` overrides [`default_safety_tol`].
pub fn winding(p: &PolyPoly, curve: &Curve, safety_tol: Option<f64>) -> Result<WindingResult> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let tol = safety_tol.unwrap_or_else(|| default_safety_tol(p, curve));
    let mut min_modulus = f64::INFINITY;
    let mut samples = 0usize;
    let mut sample = |t: f64| -> Result<Sample> {
        let z = curve.point(t);
        let w = p.eval(z);
        let m = w.norm();
        samples += 1;
        if !m.is_finite() {
            return Err(Error::Range(format!("|P| overflows at {z}")));
        }
        min_modulus = min_modulus.min(m);
        if m < tol || m == 0.0 {
            return Err(Error::ZeroOnCurve { at: z, modulus: m });
        }
        Ok(Sample { t, z, unit: w / m })
    };

    let n = curve.segments();
    let first = sample(0.0)?;
    let mut total = 0.0;
    let mut prev = first;
    for i in 1..=n {
        let t1 = if i == n { 1.0 } else { i as f64 / n as f64 };
        // the curve is closed: t = 1 is the first sample again
        let end = if i == n {
            Sample { t: 1.0, ..first }
        } else {
            sample(t1)?
        };
        // depth-first over [prev, end], left to right
        let mut stack: Vec<(Sample, u32)> = vec![(end, 0)];
        while let Some((right, depth)) = stack.pop() {
            let jump = (right.unit * prev.unit.conj()).arg();
            if jump.abs() <= PHASE_JUMP_LIMIT {
                total += jump;
                prev = right;
                continue;
            }
            if depth >= MAX_DEPTH {
                return Err(Error::CannotCertify(format!(
                    "phase jump {jump:.3} persists at depth {MAX_DEPTH} near {}",
                    prev.z
                )));
            }
            let mid = sample(0.5 * (prev.t + right.t))?;
            stack.push((right, depth + 1));
            stack.push((mid, depth + 1));
        }
    }
    let turns = total / TAU;
    let wind = turns.round();
    if (turns - wind).abs() > ROUNDING_GATE {
        return Err(Error::CannotCertify(format!(
            "accumulated {turns} turns is not integral"
        )));
    }
    Ok(WindingResult {
        wind: wind as i64,
        min_modulus,
        samples,
    })
}

/// Index of an isolated zero: winding on a small circle about `z0`, halving
/// the radius (up to 20 times) while a zero sits on the circle.
pub fn index(p: &PolyPoly, z0: Complex64, radius_hint: f64) -> Result<i64> {
    let mut r = radius_hint;
    for _ in 0..=INDEX_SHRINKS {
        let curve = Curve::circle(z0, r)?;
        match winding(p, &curve, None) {
            Ok(res) => return Ok(res.wind),
            Err(Error::ZeroOnCurve { .. }) | Err(Error::CannotCertify(_)) => r *= 0.5,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NonIsolatedZero(z0))
}

/// `wind(P; |z| = r_outer) − wind(P; |z| = r_inner)`: the boundary winding of
/// the annulus with the region on the left.
pub fn winding_annulus(p: &PolyPoly, r_inner: f64, r_outer: f64) -> Result<i64> {
    if !(r_inner > 0.0 && r_outer > r_inner) {
        return Err(Error::InvalidArgument(format!(
            "annulus needs 0 < r_inner < r_outer, got {r_inner}, {r_outer}"
        )));
    }
    let outer = winding(p, &Curve::circle(Complex64::new(0.0, 0.0), r_outer)?, None)?;
    let inner = winding(p, &Curve::circle(Complex64::new(0.0, 0.0), r_inner)?, None)?;
    Ok(outer.wind - inner.wind)
}

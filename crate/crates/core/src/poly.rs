//! Polyanalytic polynomials `P(z, z̄) = Σ α_{j,k} z^j z̄^k` with `j + k ≤ n`.
//!
//! Coefficients live in a dense triangular array ordered by total degree
//! `d = j + k`, then by `j`. Every constructor normalizes: the stored degree
//! bound equals `deg(P)` (trailing all-zero top degrees are trimmed with an
//! exact zero test), so structural equality is coefficient identity.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[inline]
fn tri_index(j: usize, k: usize) -> usize {
    let d = j + k;
    d * (d + 1) / 2 + j
}

#[inline]
fn tri_len(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Unevaluated sum `hi + lo` of complex values.
#[derive(Clone, Copy)]
struct Dd {
    hi: Complex64,
    lo: Complex64,
}

impl From<Complex64> for Dd {
    fn from(hi: Complex64) -> Self {
        Dd { hi, lo: ZERO }
    }
}

impl Dd {
    const ZERO: Dd = Dd { hi: ZERO, lo: ZERO };

    /// `self · w + c`, the rounding errors of the leading part kept in `lo`.
    #[inline]
    fn mul_add(self, w: Complex64, c: Dd) -> Dd {
        let (p1, e1) = two_prod(self.hi.re, w.re);
        let (p2, e2) = two_prod(self.hi.im, w.im);
        let (p3, e3) = two_prod(self.hi.re, w.im);
        let (p4, e4) = two_prod(self.hi.im, w.re);
        let (re, e5) = two_sum(p1, -p2);
        let (im, e6) = two_sum(p3, p4);
        let (re, e7) = two_sum(re, c.hi.re);
        let (im, e8) = two_sum(im, c.hi.im);
        let err = Complex64::new(e1 - e2 + e5 + e7, e3 + e4 + e6 + e8);
        Dd {
            hi: Complex64::new(re, im),
            lo: self.lo * w + c.lo + err,
        }
    }
}

/// Which Wirtinger derivative to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Wirtinger {
    /// `∂/∂z`
    Dz,
    /// `∂/∂z̄`
    Dzbar,
}

/// Total, analytic and anti-analytic degree of a nonzero polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeTriple {
    pub deg: usize,
    pub deg_z: usize,
    pub deg_zbar: usize,
}

/// A polyanalytic polynomial in normalized dense triangular storage.
#[derive(Clone, PartialEq)]
pub struct PolyPoly {
    n: usize,
    coeffs: Vec<Complex64>,
}

impl PolyPoly {
    pub fn zero() -> Self {
        PolyPoly {
            n: 0,
            coeffs: vec![ZERO],
        }
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn constant(c: Complex64) -> Self {
        PolyPoly { n: 0, coeffs: vec![c] }
    }

    /// `c · z^j z̄^k`.
    pub fn monomial(j: usize, k: usize, c: Complex64) -> Self {
        let mut p = Self::with_bound(j + k);
        p.coeffs[tri_index(j, k)] = c;
        p.normalized()
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        Self::monomial(1, 0, ONE)
    }

    /// The polynomial `z̄`.
    pub fn zbar() -> Self {
        Self::monomial(0, 1, ONE)
    }

    /// Builds a polynomial from sparse `(j, k, α_{j,k})` terms.
    ///
    /// Repeated index pairs are summed. Non-finite coefficients are rejected.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        let terms: Vec<_> = terms.into_iter().collect();
        let n = terms.iter().map(|&(j, k, _)| j + k).max().unwrap_or(0);
        let mut p = Self::with_bound(n);
        for (j, k, c) in terms {
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::NonFinite("coefficient"));
            }
            p.coeffs[tri_index(j, k)] += c;
        }
        Ok(p.normalized())
    }

    fn with_bound(n: usize) -> Self {
        PolyPoly {
            n,
            coeffs: vec![ZERO; tri_len(n)],
        }
    }

    fn normalized(mut self) -> Self {
        while self.n > 0 {
            let d = self.n;
            let top = &self.coeffs[tri_index(0, d)..tri_len(d)];
            if top.iter().any(|c| *c != ZERO) {
                break;
            }
            self.n -= 1;
            self.coeffs.truncate(tri_len(self.n));
        }
        self
    }

    /// The degree bound of the storage; equals `deg(P)` for nonzero `P`.
    pub fn degree_bound(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.n == 0 && self.coeffs[0] == ZERO
    }

    /// `α_{j,k}`, zero outside the stored triangle.
    pub fn coeff(&self, j: usize, k: usize) -> Complex64 {
        if j + k > self.n {
            ZERO
        } else {
            self.coeffs[tri_index(j, k)]
        }
    }

    /// Nonzero terms `(j, k, α_{j,k})` in storage order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..=self.n)
            .flat_map(|d| (0..=d).map(move |j| (j, d - j)))
            .map(|(j, k)| (j, k, self.coeffs[tri_index(j, k)]))
            .filter(|&(_, _, c)| c != ZERO)
    }

    pub fn nonzero_count(&self) -> usize {
        self.terms().count()
    }

    /// Coefficients `α_{j,n-j}` of the top-degree form, indexed by `j`.
    pub fn top_form(&self) -> Vec<Complex64> {
        let n = self.n;
        (0..=n).map(|j| self.coeffs[tri_index(j, n - j)]).collect()
    }

    /// Largest coefficient modulus.
    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Evaluates `P(z, z̄)` by nested Horner: outer in `z̄`, inner in `z`.
    ///
    /// The nesting order is fixed, so results are bit-reproducible. A
    /// non-finite `z` yields a non-finite result; see [`checked_eval`](Self::checked_eval).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let n = self.n;
        let zb = z.conj();
        let mut acc = ZERO;
        for k in (0..=n).rev() {
            let mut inner = ZERO;
            for j in (0..=n - k).rev() {
                inner = inner * z + self.coeffs[tri_index(j, k)];
            }
            acc = acc * zb + inner;
        }
        acc
    }

    /// Compensated nested Horner: as accurate as evaluation in twice the
    /// working precision, then rounded. Near multiple zeros, where plain
    /// Horner returns rounding noise or exact zeros, this keeps `|P|` meaningful.
    pub fn eval_compensated(&self, z: Complex64) -> Complex64 {
        let n = self.n;
        let zb = z.conj();
        let mut acc = Dd::ZERO;
        for k in (0..=n).rev() {
            let mut inner = Dd::ZERO;
            for j in (0..=n - k).rev() {
                inner = inner.mul_add(z, Dd::from(self.coeffs[tri_index(j, k)]));
            }
            acc = acc.mul_add(zb, inner);
        }
        acc.hi + acc.lo
    }

    pub fn checked_eval(&self, z: Complex64) -> Result<Complex64> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite("evaluation point"));
        }
        Ok(self.eval(z))
    }

    /// `Σ |α_{j,k}| r^{j+k}`, the natural magnitude of `P` on `|z| = r`.
    pub fn abs_eval(&self, r: f64) -> f64 {
        let mut acc = 0.0;
        for d in (0..=self.n).rev() {
            let s: f64 = (0..=d).map(|j| self.coeffs[tri_index(j, d - j)].norm()).sum();
            acc = acc * r + s;
        }
        acc
    }

    pub fn wirtinger(&self, which: Wirtinger) -> Self {
        if self.n == 0 {
            return Self::zero();
        }
        let mut out = Self::with_bound(self.n - 1);
        for (j, k, c) in self.terms() {
            match which {
                Wirtinger::Dz if j > 0 => out.coeffs[tri_index(j - 1, k)] = c * j as f64,
                Wirtinger::Dzbar if k > 0 => out.coeffs[tri_index(j, k - 1)] = c * k as f64,
                _ => {}
            }
        }
        out.normalized()
    }

    pub fn dz(&self) -> Self {
        self.wirtinger(Wirtinger::Dz)
    }

    pub fn dzbar(&self) -> Self {
        self.wirtinger(Wirtinger::Dzbar)
    }

    /// `J_P(z) = |∂_z P|² − |∂_z̄ P|²`. Positive means sense-preserving.
    ///
    /// Builds the derivative polynomials on every call; use [`PolyJet`] in loops.
    pub fn jacobian(&self, z: Complex64) -> f64 {
        PolyJet::new(self).jacobian(z)
    }

    /// `None` for the zero polynomial.
    pub fn degrees(&self) -> Option<DegreeTriple> {
        if self.is_zero() {
            return None;
        }
        let mut t = DegreeTriple {
            deg: 0,
            deg_z: 0,
            deg_zbar: 0,
        };
        for (j, k, _) in self.terms() {
            t.deg = t.deg.max(j + k);
            t.deg_z = t.deg_z.max(j);
            t.deg_zbar = t.deg_zbar.max(k);
        }
        Some(t)
    }

    /// The polynomial with coefficients `β_{j,k} = conj(α_{k,j})`, so that
    /// `conjugate(P)(z) = conj(P(z))`.
    pub fn conjugate(&self) -> Self {
        let mut out = Self::with_bound(self.n);
        for (j, k, c) in self.terms() {
            out.coeffs[tri_index(k, j)] = c.conj();
        }
        out
    }

    /// Coefficient-wise complex conjugation `α_{j,k} ↦ conj(α_{j,k})`, i.e.
    /// the polynomial `z ↦ conj(P(z̄))`.
    pub fn conj_coeffs(&self) -> Self {
        PolyPoly {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    /// Finds `λ` with `|λ| = 1` and `α_{j,k} = λ·conj(α_{k,j})` for all index
    /// pairs, comparing coefficients within `tol` relative to the largest
    /// coefficient modulus.
    ///
    /// `λ` is taken from the largest coefficient and verified against all
    /// others. Returns `Ok(None)` for the zero polynomial.
    pub fn self_conjugate_lambda(&self, tol: f64) -> Result<Option<Complex64>> {
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
        }
        let scale = self.max_coeff_norm();
        if scale == 0.0 {
            return Ok(None);
        }
        let (pj, pk, pivot) = self
            .terms()
            .fold(None::<(usize, usize, Complex64)>, |best, t| match best {
                Some(b) if b.2.norm() >= t.2.norm() => Some(b),
                _ => Some(t),
            })
            .expect("nonzero polynomial has a term");
        let mirror = self.coeff(pk, pj);
        if mirror == ZERO {
            return Ok(None);
        }
        let lambda = pivot / mirror.conj();
        if (lambda.norm() - 1.0).abs() > tol {
            return Ok(None);
        }
        let lambda = lambda / lambda.norm();
        for d in 0..=self.n {
            for j in 0..=d {
                let k = d - j;
                let lhs = self.coeff(j, k);
                let rhs = lambda * self.coeff(k, j).conj();
                if (lhs - rhs).norm() > tol * scale {
                    return Ok(None);
                }
            }
        }
        Ok(Some(lambda))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        PolyPoly {
            n: self.n,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
        .normalized()
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Composition with an analytic polynomial `z ↦ q(z)` substituted for
    /// `z` (and `conj(q(z))` for `z̄`).
    pub fn compose_analytic(&self, q: &PolyPoly) -> Self {
        let qb = q.conjugate();
        let mut out = Self::zero();
        for (j, k, c) in self.terms() {
            let term = &q.pow(j as u32) * &qb.pow(k as u32);
            out = &out + &term.scale(c);
        }
        out
    }
}

impl Default for PolyPoly {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Debug for PolyPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyPoly(n={}", self.n)?;
        for (j, k, c) in self.terms() {
            write!(f, ", ({j},{k})={c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &PolyPoly {
    type Output = PolyPoly;

    fn add(self, rhs: &PolyPoly) -> PolyPoly {
        let n = self.n.max(rhs.n);
        let mut out = PolyPoly::with_bound(n);
        for (i, c) in self.coeffs.iter().enumerate() {
            out.coeffs[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out.coeffs[i] += c;
        }
        out.normalized()
    }
}

impl Neg for &PolyPoly {
    type Output = PolyPoly;

    fn neg(self) -> PolyPoly {
        PolyPoly {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &PolyPoly {
    type Output = PolyPoly;

    fn sub(self, rhs: &PolyPoly) -> PolyPoly {
        self + &(-rhs)
    }
}

impl Mul for &PolyPoly {
    type Output = PolyPoly;

    /// Cauchy product over both indices.
    fn mul(self, rhs: &PolyPoly) -> PolyPoly {
        let mut out = PolyPoly::with_bound(self.n + rhs.n);
        for (j1, k1, a) in self.terms() {
            for (j2, k2, b) in rhs.terms() {
                out.coeffs[tri_index(j1 + j2, k1 + k2)] += a * b;
            }
        }
        out.normalized()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PolyPoly {
            type Output = PolyPoly;
            fn $m(self, rhs: PolyPoly) -> PolyPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&PolyPoly> for PolyPoly {
            type Output = PolyPoly;
            fn $m(self, rhs: &PolyPoly) -> PolyPoly {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PolyPoly {
    type Output = PolyPoly;
    fn neg(self) -> PolyPoly {
        -&self
    }
}

/// A polynomial together with its two Wirtinger derivatives, for repeated
/// evaluation of value, derivatives and Jacobian.
#[derive(Clone, Debug)]
pub struct PolyJet {
    pub p: PolyPoly,
    pub dz: PolyPoly,
    pub dzbar: PolyPoly,
}

impl PolyJet {
    pub fn new(p: &PolyPoly) -> Self {
        PolyJet {
            p: p.clone(),
            dz: p.dz(),
            dzbar: p.dzbar(),
        }
    }

    /// `(P(z), ∂_z P(z), ∂_z̄ P(z))`.
    #[inline]
    pub fn eval(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        (self.p.eval(z), self.dz.eval(z), self.dzbar.eval(z))
    }

    pub fn jacobian(&self, z: Complex64) -> f64 {
        self.dz.eval(z).norm_sqr() - self.dzbar.eval(z).norm_sqr()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Independent evaluator: direct monomial summation with `powu`.
    pub fn naive_eval(p: &PolyPoly, z: Complex64) -> Complex64 {
        p.terms()
            .map(|(j, k, a)| a * z.powu(j as u32) * z.conj().powu(k as u32))
            .sum()
    }

    /// Independent O(n⁴) convolution over a dense square grid.
    fn naive_mul(p: &PolyPoly, q: &PolyPoly) -> Vec<((usize, usize), Complex64)> {
        let np = p.degree_bound();
        let nq = q.degree_bound();
        let mut grid = vec![vec![ZERO; np + nq + 1]; np + nq + 1];
        for j1 in 0..=np {
            for k1 in 0..=np {
                for j2 in 0..=nq {
                    for k2 in 0..=nq {
                        grid[j1 + j2][k1 + k2] += p.coeff(j1, k1) * q.coeff(j2, k2);
                    }
                }
            }
        }
        let mut out = Vec::new();
        for (j, row) in grid.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                if *v != ZERO {
                    out.push(((j, k), *v));
                }
            }
        }
        out
    }

    fn p(terms: &[(usize, usize, f64, f64)]) -> PolyPoly {
        PolyPoly::from_terms(terms.iter().map(|&(j, k, re, im)| (j, k, c(re, im)))).unwrap()
    }

    #[test]
    fn unit_circle_polynomial_vanishes_at_i() {
        let q = p(&[(1, 1, 1.0, 0.0), (0, 0, -1.0, 0.0)]);
        assert_eq!(q.eval(c(0.0, 1.0)), ZERO);
    }

    #[test]
    fn zero_polynomial_evaluates_to_zero() {
        assert_eq!(PolyPoly::zero().eval(c(3.0, -2.0)), ZERO);
        assert!(PolyPoly::zero().is_zero());
        assert_eq!(PolyPoly::zero().degrees(), None);
    }

    #[test]
    fn horner_matches_monomial_sum() {
        let q = p(&[(3, 0, 1.0, 0.0), (2, 2, 1.0, 0.0)]);
        let z = c(1.0, 1.0);
        // (1+i)^3 = -2+2i, |1+i|^4 = 4
        let expected = c(-2.0, 2.0) + c(4.0, 0.0);
        assert_eq!(naive_eval(&q, z), expected);
        assert!((q.eval(z) - expected).norm() < 1e-14);
    }

    #[test]
    fn checked_eval_rejects_nan() {
        assert!(PolyPoly::z().checked_eval(c(f64::NAN, 0.0)).is_err());
        assert!(PolyPoly::from_terms([(0, 0, c(f64::INFINITY, 0.0))]).is_err());
    }

    #[test]
    fn wirtinger_examples() {
        let z5 = PolyPoly::monomial(5, 0, ONE);
        assert!(z5.dzbar().is_zero());
        let z2zb = PolyPoly::monomial(2, 1, ONE);
        assert_eq!(z2zb.dz(), PolyPoly::monomial(1, 1, c(2.0, 0.0)));
        // Σ_{k≤m} f_k(z) z̄^k is killed by m+1 applications of ∂_z̄
        let m = 3;
        let f = p(&[(0, 0, 1.0, 0.0), (2, 1, 0.5, 1.0), (1, 2, -1.0, 0.0), (4, 3, 2.0, 0.0)]);
        let mut g = f.clone();
        for _ in 0..m {
            g = g.dzbar();
            assert!(!g.is_zero());
        }
        assert!(g.dzbar().is_zero());
    }

    #[test]
    fn jacobian_examples() {
        let a1 = c(0.3, -1.2);
        let p1 = PolyPoly::monomial(0, 1, a1);
        assert!((p1.jacobian(c(0.7, 0.1)) + a1.norm_sqr()).abs() < 1e-15);

        let a2 = c(2.0, 0.5);
        let p2 = &PolyPoly::monomial(2, 0, a2) + &p1;
        let z = c(-0.4, 0.9);
        let expected = (a2 * z * 2.0).norm_sqr() - a1.norm_sqr();
        assert!((p2.jacobian(z) - expected).abs() < 1e-13);

        let analytic = p(&[(3, 0, 1.0, 0.0), (1, 0, -2.0, 0.0), (0, 0, 1.0, 0.0)]);
        let z = c(0.5, 0.25);
        let dp = z * z * 3.0 - 2.0;
        assert!((analytic.jacobian(z) - dp.norm_sqr()).abs() < 1e-14);
    }

    #[test]
    fn degree_examples() {
        let q = p(&[(3, 0, 1.0, 0.0), (2, 2, 1.0, 0.0)]);
        assert_eq!(
            q.degrees(),
            Some(DegreeTriple {
                deg: 4,
                deg_z: 3,
                deg_zbar: 2
            })
        );
        assert_eq!(
            PolyPoly::constant(c(5.0, 0.0)).degrees(),
            Some(DegreeTriple {
                deg: 0,
                deg_z: 0,
                deg_zbar: 0
            })
        );
        assert_eq!(
            PolyPoly::monomial(0, 7, ONE).degrees(),
            Some(DegreeTriple {
                deg: 7,
                deg_z: 0,
                deg_zbar: 7
            })
        );
    }

    #[test]
    fn normalization_trims_cancelled_top_degree() {
        let a = p(&[(2, 0, 1.0, 0.0), (0, 0, 1.0, 0.0)]);
        let b = p(&[(2, 0, -1.0, 0.0), (1, 0, 1.0, 0.0)]);
        let s = &a + &b;
        assert_eq!(s.degree_bound(), 1);
        assert_eq!(s, p(&[(1, 0, 1.0, 0.0), (0, 0, 1.0, 0.0)]));
    }

    #[test]
    fn difference_of_squares() {
        let z = PolyPoly::z();
        let zb = PolyPoly::zbar();
        let prod = &(&z - &zb) * &(&z + &zb);
        assert_eq!(prod, p(&[(2, 0, 1.0, 0.0), (0, 2, -1.0, 0.0)]));
        assert_eq!(&prod * &PolyPoly::one(), prod);
    }

    #[test]
    fn balk_sharpness_product_matches_convolution_oracle() {
        // (z + z̄ + i)^{2k-n} (z z̄ + 1)^{n-k} with k = 2, n = 3
        let lin = p(&[(1, 0, 1.0, 0.0), (0, 1, 1.0, 0.0), (0, 0, 0.0, 1.0)]);
        let quad = p(&[(1, 1, 1.0, 0.0), (0, 0, 1.0, 0.0)]);
        let prod = &lin * &quad;
        let oracle = naive_mul(&lin, &quad);
        assert_eq!(prod.nonzero_count(), oracle.len());
        for ((j, k), v) in oracle {
            assert_eq!(prod.coeff(j, k), v, "coefficient ({j},{k})");
        }
        assert_eq!(prod.degree_bound(), 3);
    }

    #[test]
    fn conjugate_examples() {
        let q = p(&[(1, 1, 1.0, 0.0), (0, 0, -1.0, 0.0)]);
        assert_eq!(q.conjugate(), q);
        let d = &PolyPoly::z() - &PolyPoly::zbar();
        assert_eq!(d.conjugate(), &PolyPoly::zbar() - &PolyPoly::z());
    }

    #[test]
    fn self_conjugate_examples() {
        let q = p(&[(1, 1, 1.0, 0.0), (0, 0, -1.0, 0.0)]);
        assert_eq!(q.self_conjugate_lambda(1e-12).unwrap(), Some(ONE));
        let d = &PolyPoly::z() - &PolyPoly::zbar();
        assert_eq!(d.self_conjugate_lambda(1e-12).unwrap(), Some(-ONE));
        let p3 = p(&[(2, 0, 1.0, 0.0), (1, 0, 1.0, 0.0), (0, 1, 1.0, 0.0), (0, 0, 1.0, 0.0)]);
        assert_eq!(p3.self_conjugate_lambda(1e-12).unwrap(), None);
        assert!(p3.self_conjugate_lambda(0.0).is_err());
        assert!(p3.self_conjugate_lambda(-1.0).is_err());
    }

    #[test]
    fn self_conjugate_with_complex_lambda() {
        // P = i·(z z̄ − 1) satisfies P = −conj(P)
        let q = p(&[(1, 1, 0.0, 1.0), (0, 0, 0.0, -1.0)]);
        let lam = q.self_conjugate_lambda(1e-12).unwrap().unwrap();
        assert!((lam + ONE).norm() < 1e-15);
    }

    #[test]
    fn compose_with_shift() {
        // (z - 1) substituted into z z̄ gives |z - 1|^2
        let shift = p(&[(1, 0, 1.0, 0.0), (0, 0, -1.0, 0.0)]);
        let q = PolyPoly::monomial(1, 1, ONE).compose_analytic(&shift);
        let z = c(0.3, 2.0);
        assert!((q.eval(z) - c((z - 1.0).norm_sqr(), 0.0)).norm() < 1e-14);
    }

    pub fn arb_poly(max_n: usize) -> impl Strategy<Value = PolyPoly> {
        (0..=max_n).prop_flat_map(|n| {
            prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), tri_len(n)).prop_map(move |v| {
                let terms = (0..=n)
                    .flat_map(|d| (0..=d).map(move |j| (j, d - j)))
                    .zip(v)
                    .map(|((j, k), (re, im))| (j, k, c(re, im)));
                PolyPoly::from_terms(terms).unwrap()
            })
        })
    }

    fn arb_point() -> impl Strategy<Value = Complex64> {
        (0.0f64..2.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    fn rel_close(a: Complex64, b: Complex64, scale: f64, tol: f64) -> bool {
        (a - b).norm() <= tol * scale.max(1.0)
    }

    #[test]
    fn compensated_eval_resolves_double_zero() {
        // on the real axis z² + z + z̄ + 1 = (x + 1)²
        let p = PolyPoly::from_terms([(2, 0, ONE), (1, 0, ONE), (0, 1, ONE), (0, 0, ONE)]).unwrap();
        for d in [1e-6, 1e-9, 3e-12] {
            let x = -1.0 + d;
            let exact = (x + 1.0) * (x + 1.0);
            let got = p.eval_compensated(c(x, 0.0));
            assert!((got.re - exact).abs() <= 1e-10 * exact && got.im == 0.0, "d={d}: {got}");
        }
        assert_eq!(p.eval(c(-1.0 + 3e-12, 0.0)), ZERO);
    }

    proptest! {
        #[test]
        fn compensated_eval_matches_horner(p in arb_poly(6), re in -2.0f64..2.0, im in -2.0f64..2.0) {
            let z = c(re, im);
            let scale = p.abs_eval(z.norm()).max(f64::MIN_POSITIVE);
            prop_assert!((p.eval_compensated(z) - p.eval(z)).norm() <= 1e-13 * scale);
            prop_assert!((p.eval_compensated(z) - naive_eval(&p, z)).norm() <= 1e-13 * scale);
        }

        #[test]
        fn eval_is_an_algebra_homomorphism(p in arb_poly(8), q in arb_poly(8), z in arb_point()) {
            let r = z.norm();
            let sum = &p + &q;
            prop_assert!(rel_close(sum.eval(z), p.eval(z) + q.eval(z), sum.abs_eval(r) + p.abs_eval(r), 1e-12));
            let prod = &p * &q;
            prop_assert!(rel_close(prod.eval(z), p.eval(z) * q.eval(z), p.abs_eval(r) * q.abs_eval(r), 1e-12));
        }

        #[test]
        fn horner_agrees_with_naive_sum(p in arb_poly(8), z in arb_point()) {
            prop_assert!(rel_close(p.eval(z), naive_eval(&p, z), p.abs_eval(z.norm()), 1e-12));
        }

        #[test]
        fn degree_is_additive_under_products(p in arb_poly(6), q in arb_poly(6)) {
            prop_assume!(!p.is_zero() && !q.is_zero());
            let d = (&p * &q).degrees().unwrap().deg;
            prop_assert_eq!(d, p.degrees().unwrap().deg + q.degrees().unwrap().deg);
        }

        #[test]
        fn product_matches_convolution(p in arb_poly(4), q in arb_poly(4)) {
            let prod = &p * &q;
            for ((j, k), v) in naive_mul(&p, &q) {
                prop_assert!((prod.coeff(j, k) - v).norm() <= 1e-12 * (1.0 + v.norm()));
            }
        }

        #[test]
        fn conjugation_is_an_isometric_involution(p in arb_poly(8), z in arb_point()) {
            let cp = p.conjugate();
            prop_assert_eq!(&cp.conjugate(), &p);
            prop_assert_eq!(cp.max_coeff_norm(), p.max_coeff_norm());
            prop_assert!(rel_close(cp.eval(z), p.eval(z).conj(), p.abs_eval(z.norm()), 1e-12));
        }

        #[test]
        fn repeated_dzbar_vanishes(p in arb_poly(8)) {
            prop_assume!(!p.is_zero());
            let m = p.degrees().unwrap().deg_zbar;
            let mut g = p.clone();
            for _ in 0..m { g = g.dzbar(); }
            prop_assert!(!g.is_zero());
            prop_assert!(g.dzbar().is_zero());
        }

        #[test]
        fn jacobian_matches_real_system_determinant(p in arb_poly(6), z in arb_point()) {
            // det of the 2x2 real derivative of (Re P, Im P)(x, y), central differences
            let h = 1e-6;
            let f = |x: f64, y: f64| p.eval(c(x, y));
            let px = (f(z.re + h, z.im) - f(z.re - h, z.im)) / (2.0 * h);
            let py = (f(z.re, z.im + h) - f(z.re, z.im - h)) / (2.0 * h);
            let det = px.re * py.im - px.im * py.re;
            let jac = p.jacobian(z);
            let jet = PolyJet::new(&p);
            let (_, a, b) = jet.eval(z);
            let scale = a.norm_sqr() + b.norm_sqr();
            prop_assert!((det - jac).abs() <= 1e-5 * scale.max(1.0), "det {} jac {}", det, jac);
        }
    }
}

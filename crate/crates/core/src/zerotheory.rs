//! Existence, finiteness and counting of zeros.

use num_complex::Complex64;

use crate::bounds;
use crate::error::{Error, Result};
use crate::extremal;
use crate::poly::PolyPoly;

/// Relative tolerance for coefficient symmetry tests.
pub const SYMMETRY_RTOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExistenceVerdict {
    /// `deg P > 2 deg_z P` or `deg P > 2 deg_z̄ P`.
    pub balk: bool,
    /// Index `ℓ` of a strictly dominant top-degree coefficient, `2ℓ ≠ n`.
    pub dominant_ell: Option<usize>,
    /// At least one zero is guaranteed.
    pub guaranteed: bool,
}

pub fn balk_existence(p: &PolyPoly) -> Result<bool> {
    let d = p.degrees().ok_or(Error::ZeroPolynomial)?;
    Ok(d.deg > 2 * d.deg_z || d.deg > 2 * d.deg_zbar)
}

/// `ℓ` such that `|α_{ℓ,n−ℓ}|` exceeds the sum of the other top-degree
/// moduli, provided `2ℓ ≠ n`. The winding on a large circle is then `2ℓ − n`.
pub fn dominant_existence(p: &PolyPoly) -> Option<usize> {
    let n = p.degrees()?.deg;
    bounds::dominance_surplus(p).map(|d| d.ell).filter(|&ell| 2 * ell != n)
}

pub fn existence(p: &PolyPoly) -> Result<ExistenceVerdict> {
    let balk = balk_existence(p)?;
    let dominant_ell = dominant_existence(p);
    Ok(ExistenceVerdict {
        balk,
        dominant_ell,
        guaranteed: balk || dominant_ell.is_some(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FinitenessCertificate {
    /// Top-degree form is `α_{n,0} zⁿ`.
    MonicInZ,
    /// Top-degree form is `α_{0,n} z̄ⁿ`.
    MonicInZbar,
    /// `P` was declared irreducible and `|α_{j,k}| ≠ |α_{k,j}|`.
    AsymmetricCoefficient {
        j: usize,
        k: usize,
    },
    /// `α_{j,k} = λ conj(α_{k,j})`; infinitely many zeros if irreducible and any exist.
    SelfConjugate {
        lambda: Complex64,
    },
    Inconclusive,
}

impl FinitenessCertificate {
    pub fn establishes_finiteness(&self) -> bool {
        matches!(
            self,
            Self::MonicInZ | Self::MonicInZbar | Self::AsymmetricCoefficient { .. }
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::MonicInZ => "monic-in-z",
            Self::MonicInZbar => "monic-in-zbar",
            Self::AsymmetricCoefficient { .. } => "asymmetric-coefficient",
            Self::SelfConjugate { .. } => "self-conjugate",
            Self::Inconclusive => "inconclusive",
        }
    }
}

/// Certificate for finiteness of the zero set. `irreducible_hint` asserts
/// that `P` is irreducible, which enables the asymmetric-coefficient test.
pub fn finiteness_certificate(p: &PolyPoly, irreducible_hint: bool) -> Result<FinitenessCertificate> {
    let deg = p.degrees().ok_or(Error::ZeroPolynomial)?.deg;
    let top = p.top_form();
    let single = |at: usize| {
        top.iter()
            .enumerate()
            .all(|(j, c)| (j == at) == (*c != Complex64::new(0.0, 0.0)))
    };
    if single(deg) {
        return Ok(FinitenessCertificate::MonicInZ);
    }
    if single(0) {
        return Ok(FinitenessCertificate::MonicInZbar);
    }
    if let Some(lambda) = p.self_conjugate_lambda(SYMMETRY_RTOL)? {
        return Ok(FinitenessCertificate::SelfConjugate { lambda });
    }
    if irreducible_hint {
        let tol = SYMMETRY_RTOL * p.max_coeff_norm();
        for (j, k, c) in p.terms() {
            if (c.norm() - p.coeff(k, j).norm()).abs() > tol {
                return Ok(FinitenessCertificate::AsymmetricCoefficient { j, k });
            }
        }
    }
    Ok(FinitenessCertificate::Inconclusive)
}

/// `deg(P)²` when finiteness is certified without an irreducibility hint.
pub fn max_zero_bound(p: &PolyPoly) -> Result<usize> {
    max_zero_bound_with(p, &finiteness_certificate(p, false)?)
}

/// `deg(P)²` given an already computed certificate.
pub fn max_zero_bound_with(p: &PolyPoly, cert: &FinitenessCertificate) -> Result<usize> {
    if !cert.establishes_finiteness() {
        return Err(Error::FinitenessNotEstablished(cert.name().into()));
    }
    let n = p.degrees().ok_or(Error::ZeroPolynomial)?.deg;
    Ok(n * n)
}

/// A polynomial of degree `n` with at least `n² − 2n + 3` zeros is irreducible.
pub fn irreducibility_certificate(n: usize, verified_zero_count: usize) -> Result<bool> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "irreducibility test needs n >= 2, got {n}"
        )));
    }
    Ok(verified_zero_count + 2 * n >= n * n + 3)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroCount {
    Finite(usize),
    Infinite,
}

impl std::fmt::Display for ZeroCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ZeroCount::Finite(k) => write!(f, "{k}"),
            ZeroCount::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for ZeroCount {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "inf" | "infinite" | "∞" => Ok(ZeroCount::Infinite),
            _ => s
                .parse()
                .map(ZeroCount::Finite)
                .map_err(|e| format!("expected a count or `inf`, got {s:?}: {e}")),
        }
    }
}

/// A degree-`n` polynomial with exactly `k` zeros, for `k ∈ {0, …, n, n², ∞}`.
///
/// `(z − z̄ − 1)` has no zeros, so `(z^k − 1)(z − z̄ − 1)^{n−k}` vanishes
/// exactly at the `k`-th roots of unity.
pub fn poly_with_k_zeros(n: usize, k: ZeroCount) -> Result<PolyPoly> {
    if n == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let one = Complex64::new(1.0, 0.0);
    let zero_free = PolyPoly::z() - PolyPoly::zbar() - PolyPoly::one();
    match k {
        ZeroCount::Infinite => Ok(PolyPoly::monomial(n, 0, one) - PolyPoly::monomial(0, n, one)),
        ZeroCount::Finite(0) => Ok(zero_free.pow(n as u32)),
        ZeroCount::Finite(k) if k <= n => {
            Ok((PolyPoly::monomial(k, 0, one) - PolyPoly::one()) * zero_free.pow((n - k) as u32))
        }
        ZeroCount::Finite(k) if k == n * n => {
            let schedule = extremal::extremal_coefficients(n, None)?;
            Ok(extremal::extremal_poly(&schedule))
        }
        ZeroCount::Finite(k) => Err(Error::UnsupportedCount { n, k }),
    }
}

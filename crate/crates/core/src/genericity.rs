//! Generic-position predicates for skew matrices.
//!
//! `A_m` is the set of `Z ∈ so(q)` whose eigenvalues are distinct and no ratio
//! of two distinct nonzero eigenvalues equals `m`; `O_m = A_m ∩ A_{−m}` and
//! `O = ⋂_{m≥2} O_m`. A matrix is in `O` exactly when its central geodesic has
//! the maximal number `⌊q/2⌋` of primitive conjugate values.
//!
//! The exact path certifies membership with discriminants:
//!
//! * distinct eigenvalues ⇔ `disc(det(tI − Z)) ≠ 0`;
//! * given that, no ratio `m` ⇔ `disc(ψ_m) ≠ 0`, where
//!   `ψ_m = det(tI − Z)·det(tI − mZ)`, divided by `t²` when `q` is odd (the
//!   kernel contributes the common root `0` to both factors).
//!
//! Discriminants are computed from the Sylvester resultant `Res(f, f′)` with a
//! fraction-free (Bareiss) determinant over the integers.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::conjugate::INTEGER_TOL;
use crate::error::{Error, Result};
use crate::exact::{self, bareiss_determinant, integer, Rational, RationalPolynomial, RationalSkewMatrix};
use crate::fmath::{ceil, round};
use crate::spectral::{spectral_decompose, SkewMatrix, SpectralData, SpectralTolerances};

/// `det(tI − Z)` in exact arithmetic.
pub fn char_poly_exact(z: &RationalSkewMatrix) -> RationalPolynomial {
    exact::char_poly(z.matrix())
}

/// `ψ_m(Z)`: degree `2q` for even `q`, `2q − 2` for odd `q`.
pub fn psi_m(z: &RationalSkewMatrix, m: i64) -> Result<RationalPolynomial> {
    if m.abs() < 2 {
        return Err(Error::InvalidParameter("|m| must be at least 2"));
    }
    let phi = char_poly_exact(z);
    let phi_m = exact::char_poly(&z.matrix().scaled(&integer(m)));
    let product = &phi * &phi_m;
    if z.dim() % 2 == 1 {
        product.div_t_squared()
    } else {
        Ok(product)
    }
}

fn sylvester(f: &[BigInt], g: &[BigInt]) -> Vec<Vec<BigInt>> {
    // coefficient slices ascending; rows use descending order
    let df = f.len() - 1;
    let dg = g.len() - 1;
    let size = df + dg;
    let mut rows = Vec::with_capacity(size);
    for i in 0..dg {
        let mut row = alloc::vec![BigInt::zero(); size];
        for (k, c) in f.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..df {
        let mut row = alloc::vec![BigInt::zero(); size];
        for (k, c) in g.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// `Res(f, g)` as the determinant of the Sylvester matrix.
pub fn resultant(f: &RationalPolynomial, g: &RationalPolynomial) -> Result<Rational> {
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return Err(Error::ZeroPolynomial);
    };
    let (fi, lf) = f.clear_denominators();
    let (gi, lg) = g.clear_denominators();
    let res_int = if df == 0 {
        num_traits::pow(fi[0].clone(), dg)
    } else if dg == 0 {
        num_traits::pow(gi[0].clone(), df)
    } else {
        bareiss_determinant(sylvester(&fi, &gi))
    };
    // Res(L_f f, L_g g) = L_f^{deg g} L_g^{deg f} Res(f, g)
    let scale = num_traits::pow(lf, dg) * num_traits::pow(lg, df);
    Ok(Rational::new(res_int, scale))
}

/// Discriminant `Π_{i<j} (α_i − α_j)²·a_k^{2k−2}`; zero iff `f` has a
/// repeated root.
pub fn discriminant(f: &RationalPolynomial) -> Result<Rational> {
    let k = match f.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::ConstantPolynomial),
        Some(k) => k,
    };
    if k == 1 {
        return Ok(Rational::one());
    }
    let lead = f.leading().expect("nonzero polynomial").clone();
    let res = resultant(f, &f.derivative())?;
    let sign = if (k * (k - 1) / 2) % 2 == 0 { Rational::one() } else { -Rational::one() };
    Ok(sign * res / lead)
}

/// Exact membership in `A_m`.
pub fn in_a_m_exact(z: &RationalSkewMatrix, m: i64) -> Result<bool> {
    if !has_distinct_eigenvalues(z)? {
        return Ok(false);
    }
    Ok(!discriminant(&psi_m(z, m)?)?.is_zero())
}

fn has_distinct_eigenvalues(z: &RationalSkewMatrix) -> Result<bool> {
    Ok(!discriminant(&char_poly_exact(z))?.is_zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

/// Frequencies `larger ≈ m · smaller`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BadRatio {
    pub larger: f64,
    pub smaller: f64,
    pub m: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenericityReport {
    pub distinct: bool,
    pub bad_ratios: Vec<BadRatio>,
    pub m_max_tested: u64,
    pub exact: bool,
}

impl GenericityReport {
    /// Member of `O_m` for every tested `m`, hence of `O`.
    pub fn member(&self) -> bool {
        self.distinct && self.bad_ratios.is_empty()
    }

    pub fn in_o_m(&self, m: u64) -> bool {
        self.distinct && !self.bad_ratios.iter().any(|b| b.m == m)
    }
}

/// Largest `m` for which a ratio of positive frequencies could equal `m`.
pub fn ratio_bound(spec: &SpectralData) -> u64 {
    match (spec.frequencies.first(), spec.frequencies.last()) {
        (Some(lo), Some(hi)) => (ceil(hi.value / lo.value * (1.0 + 1e-9)) as u64).max(2),
        _ => 2,
    }
}

/// Floating eigenvalues are distinct: simple frequencies and a kernel of
/// dimension `q mod 2`.
pub fn float_distinct(spec: &SpectralData) -> bool {
    spec.kernel_dim() == spec.dim % 2 && spec.frequencies.iter().all(|f| f.multiplicity == 1)
}

/// All frequency pairs with `|λ_a/λ_b − m| < tol` for an integer `m ≥ 2`.
pub fn float_bad_ratios(spec: &SpectralData, tol: f64) -> Vec<BadRatio> {
    let f = spec.frequency_values();
    let mut out = Vec::new();
    for (a, &hi) in f.iter().enumerate() {
        for &lo in &f[..a] {
            let r = hi / lo;
            let m = round(r);
            if m >= 2.0 && (r - m).abs() < tol {
                out.push(BadRatio { larger: hi, smaller: lo, m: m as u64 });
            }
        }
    }
    out
}

/// `O`-membership from a floating spectral decomposition.
pub fn o_membership_float(z: &SkewMatrix, tol: f64, spectral: &SpectralTolerances) -> Result<GenericityReport> {
    let spec = spectral_decompose(z, spectral)?;
    Ok(GenericityReport {
        distinct: float_distinct(&spec),
        bad_ratios: float_bad_ratios(&spec, tol),
        m_max_tested: ratio_bound(&spec),
        exact: false,
    })
}

/// `O`-membership certified by discriminants for every `2 ≤ m ≤` the ratio
/// bound. The floating decomposition is used only to bound `m` and to label
/// offending frequency pairs; when the eigenvalues are not distinct the
/// per-`m` tests carry no information and `bad_ratios` stays empty.
pub fn o_membership_exact(z: &RationalSkewMatrix, spectral: &SpectralTolerances) -> Result<GenericityReport> {
    let spec = spectral_decompose(&z.to_f64(), spectral)?;
    let m_max = ratio_bound(&spec);
    let distinct = has_distinct_eigenvalues(z)?;
    let mut bad_ratios = Vec::new();
    if distinct {
        let freqs = spec.frequency_values();
        for m in 2..=m_max {
            if discriminant(&psi_m(z, m as i64)?)?.is_zero() {
                bad_ratios.push(closest_pair(&freqs, m as f64));
            }
        }
    }
    Ok(GenericityReport { distinct, bad_ratios, m_max_tested: m_max, exact: true })
}

fn closest_pair(freqs: &[f64], m: f64) -> BadRatio {
    let mut best = BadRatio { larger: f64::NAN, smaller: f64::NAN, m: m as u64 };
    let mut gap = f64::INFINITY;
    for (a, &hi) in freqs.iter().enumerate() {
        for &lo in &freqs[..a] {
            let d = (hi / lo - m).abs();
            if d < gap {
                gap = d;
                best.larger = hi;
                best.smaller = lo;
            }
        }
    }
    best
}

/// Dispatches on `mode`; the float path uses `tol` as the integer-ratio band.
pub fn in_o_membership(
    z: &RationalSkewMatrix,
    mode: Mode,
    tol: f64,
    spectral: &SpectralTolerances,
) -> Result<GenericityReport> {
    match mode {
        Mode::Exact => o_membership_exact(z, spectral),
        Mode::Float => o_membership_float(&z.to_f64(), tol, spectral),
    }
}

/// Float-mode `A_m` check for a single `m`.
pub fn in_a_m_float(spec: &SpectralData, m: u64, tol: f64) -> bool {
    float_distinct(spec) && !float_bad_ratios(spec, tol).iter().any(|b| b.m == m)
}

/// Default float-mode ratio band.
pub const RATIO_TOL: f64 = INTEGER_TOL;

/// Sign of a rational, for reporting.
pub fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational;
    use alloc::vec;

    fn ints(v: &[i64]) -> RationalPolynomial {
        RationalPolynomial::from_integers(v)
    }

    fn blocks(q: usize, l: &[i64]) -> RationalSkewMatrix {
        let f: Vec<Rational> = l.iter().map(|&x| integer(x)).collect();
        RationalSkewMatrix::canonical(q, &f).unwrap()
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi_m(&blocks(2, &[1]), 2).unwrap(), &ints(&[1, 0, 1]) * &ints(&[4, 0, 1]));
        assert_eq!(psi_m(&blocks(3, &[1]), 2).unwrap(), &ints(&[1, 0, 1]) * &ints(&[4, 0, 1]));
        assert_eq!(psi_m(&blocks(2, &[]), 2).unwrap(), ints(&[0, 0, 0, 0, 1]));
        assert!(psi_m(&blocks(2, &[1]), 1).is_err());
        assert_eq!(psi_m(&blocks(4, &[1, 2]), -3).unwrap(), psi_m(&blocks(4, &[1, 2]), 3).unwrap());
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&ints(&[1, 0, 1])).unwrap(), integer(-4));
        assert_eq!(discriminant(&ints(&[1, -2, 1])).unwrap(), integer(0));
        assert_eq!(discriminant(&ints(&[4, 0, 5, 0, 1])).unwrap(), integer(5184));
        // disc(t² + bt + c) = b² − 4c for non-integer coefficients
        let f = RationalPolynomial::new(vec![rational(1, 3), rational(-1, 2), integer(1)]);
        assert_eq!(discriminant(&f).unwrap(), rational(1, 4) - rational(4, 3));
        // non-monic: disc(2t² + 1) = −8
        assert_eq!(discriminant(&ints(&[1, 0, 2])).unwrap(), integer(-8));
        assert_eq!(discriminant(&ints(&[5, 3])).unwrap(), integer(1));
        assert_eq!(discriminant(&RationalPolynomial::zero()), Err(Error::ZeroPolynomial));
        assert_eq!(discriminant(&ints(&[7])), Err(Error::ConstantPolynomial));
    }

    #[test]
    fn a_m_examples() {
        assert!(!in_a_m_exact(&blocks(4, &[1, 2]), 2).unwrap());
        assert!(in_a_m_exact(&blocks(4, &[1, 2]), 3).unwrap());
        for m in [2, 3, 5, -2] {
            assert!(in_a_m_exact(&blocks(2, &[1]), m).unwrap());
        }
        assert!(!in_a_m_exact(&blocks(4, &[1, 1]), 3).unwrap());
    }

    #[test]
    fn o_membership_examples() {
        let tols = SpectralTolerances::default();
        let r2 = SkewMatrix::canonical(4, &[1.0, 2f64.sqrt()]).unwrap();
        let rep = o_membership_float(&r2, RATIO_TOL, &tols).unwrap();
        assert!(rep.member() && !rep.exact && rep.m_max_tested == 2);

        let b = blocks(4, &[1, 2]);
        for mode in [Mode::Exact, Mode::Float] {
            let rep = in_o_membership(&b, mode, RATIO_TOL, &tols).unwrap();
            assert!(!rep.member());
            assert!(rep.distinct);
            assert_eq!(rep.bad_ratios.len(), 1);
            let bad = rep.bad_ratios[0];
            assert_eq!(bad.m, 2);
            assert!((bad.larger - 2.0).abs() < 1e-12 && (bad.smaller - 1.0).abs() < 1e-12);
        }

        let rep = in_o_membership(&blocks(4, &[1, 1]), Mode::Exact, RATIO_TOL, &tols).unwrap();
        assert!(!rep.distinct && !rep.member());
        let rep = in_o_membership(&blocks(4, &[1, 1]), Mode::Float, RATIO_TOL, &tols).unwrap();
        assert!(!rep.distinct && !rep.member());

        let rep = in_o_membership(&blocks(5, &[2, 7]), Mode::Exact, RATIO_TOL, &tols).unwrap();
        assert!(rep.member());
        assert_eq!(rep.m_max_tested, 4);
    }

    #[test]
    fn sign_helper() {
        assert_eq!(sign(&integer(-3)), -1);
        assert_eq!(sign(&integer(0)), 0);
        assert_eq!(sign(&rational(1, 9)), 1);
    }
}

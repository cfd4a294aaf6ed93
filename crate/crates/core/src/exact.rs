//! Exact rational arithmetic: univariate polynomials over ℚ, rational skew
//! matrices, characteristic polynomials and fraction-free determinants.
//!
//! Coefficients are `BigRational`, which keeps every value reduced with a
//! positive denominator. No floating-point value ever enters these routines
//! except through the explicit `to_f64` conversions.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::spectral::SkewMatrix;

pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Univariate polynomial with exact rational coefficients in ascending degree.
/// Trailing zeros are never stored, so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalPolynomial {
    coeffs: Vec<Rational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| integer(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c · t^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `Π (t − r)` over the given roots.
    pub fn from_roots(roots: &[Rational]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| {
            &acc * &Self::new(vec![-r.clone(), Rational::one()])
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// `p(s·t)`
    pub fn compose_scale(&self, s: &Rational) -> Self {
        let mut pow = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &pow);
            pow *= s;
        }
        Self::new(out)
    }

    /// Quotient by `t²`; fails unless the `t⁰` and `t¹` coefficients are zero.
    pub fn div_t_squared(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() || !self.coeff(1).is_zero() {
            return Err(Error::NotDivisible);
        }
        Ok(Self::new(self.coeffs.iter().skip(2).cloned().collect()))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Integer polynomial `L·self` with `L` the lcm of the denominators,
    /// returned together with `L`.
    pub fn clear_denominators(&self) -> (Vec<BigInt>, BigInt) {
        let l = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        (ints, l)
    }
}

impl fmt::Debug for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => {}
                _ => write!(f, "{a}*")?,
            }
            match k {
                0 => {}
                1 => f.write_str("t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn add(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn sub(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn mul(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RationalPolynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPolynomial::new(out)
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> RationalPolynomial {
        RationalPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Square matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, entries: vec![Rational::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::BadShape { rows: n, cols: bad.len(), min: 1 });
        }
        Ok(Self { n, entries: rows.into_iter().flatten().collect() })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        let n = self.n;
        let mut out = RationalMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Rational {
        (0..self.n).fold(Rational::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut out = RationalMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn scaled(&self, s: &Rational) -> RationalMatrix {
        RationalMatrix { n: self.n, entries: self.entries.iter().map(|x| x * s).collect() }
    }

    pub fn to_f64(&self) -> Matrix {
        Matrix::from_fn(self.n, self.n, |i, j| self.get(i, j).to_f64().unwrap_or(f64::NAN))
    }

    /// Determinant by Gaussian elimination over ℚ.
    pub fn determinant(&self) -> Rational {
        let n = self.n;
        let mut m = self.entries.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m[r * n + col].is_zero()) else {
                return Rational::zero();
            };
            if piv != col {
                for j in 0..n {
                    m.swap(col * n + j, piv * n + j);
                }
                det = -det;
            }
            let d = m[col * n + col].clone();
            det *= &d;
            for r in (col + 1)..n {
                if m[r * n + col].is_zero() {
                    continue;
                }
                let f = &m[r * n + col] / &d;
                for j in col..n {
                    let v = &f * &m[col * n + j];
                    m[r * n + j] -= v;
                }
            }
        }
        det
    }
}

/// Exact skew-symmetric matrix, `q ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSkewMatrix(RationalMatrix);

impl RationalSkewMatrix {
    /// Requires `m_ij = −m_ji` exactly.
    pub fn new(m: RationalMatrix) -> Result<Self> {
        let q = m.dim();
        if q < 2 {
            return Err(Error::BadShape { rows: q, cols: q, min: 2 });
        }
        for i in 0..q {
            for j in i..q {
                if *m.get(i, j) != -m.get(j, i) {
                    let residual = (m.get(i, j) + m.get(j, i)).abs().to_f64().unwrap_or(f64::INFINITY);
                    return Err(Error::NotSkew { residual, tol: 0.0 });
                }
            }
        }
        Ok(Self(m))
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        Self::new(RationalMatrix::from_rows(rows)?)
    }

    /// Strict upper triangle, row by row.
    pub fn from_upper(q: usize, upper: &[Rational]) -> Result<Self> {
        if q < 2 {
            return Err(Error::BadShape { rows: q, cols: q, min: 2 });
        }
        if upper.len() != q * (q - 1) / 2 {
            return Err(Error::DimensionMismatch { expected: q * (q - 1) / 2, found: upper.len() });
        }
        let mut m = RationalMatrix::zeros(q);
        let mut k = 0;
        for i in 0..q {
            for j in (i + 1)..q {
                m.set(i, j, upper[k].clone());
                m.set(j, i, -upper[k].clone());
                k += 1;
            }
        }
        Ok(Self(m))
    }

    /// `blockdiag(λ₁J, λ₂J, …)` padded with zeros.
    pub fn canonical(q: usize, freqs: &[Rational]) -> Result<Self> {
        if q < 2 || 2 * freqs.len() > q {
            return Err(Error::BadShape { rows: q, cols: q, min: (2 * freqs.len()).max(2) });
        }
        let mut m = RationalMatrix::zeros(q);
        for (k, l) in freqs.iter().enumerate() {
            m.set(2 * k, 2 * k + 1, l.clone());
            m.set(2 * k + 1, 2 * k, -l.clone());
        }
        Ok(Self(m))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.0
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        Self(self.0.scaled(s))
    }

    /// `g Z gᵀ` for a signed permutation `g e_i = signs[i] · e_perm[i]`.
    pub fn conjugate_signed_permutation(&self, perm: &[usize], signs: &[i8]) -> Result<Self> {
        let q = self.dim();
        if perm.len() != q || signs.len() != q {
            return Err(Error::DimensionMismatch { expected: q, found: perm.len() });
        }
        let mut seen = vec![false; q];
        for &p in perm {
            if p >= q || core::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter("not a permutation"));
            }
        }
        let mut m = RationalMatrix::zeros(q);
        for i in 0..q {
            for j in 0..q {
                let s = i64::from(signs[i]) * i64::from(signs[j]);
                m.set(perm[i], perm[j], self.0.get(i, j) * integer(s));
            }
        }
        Ok(Self(m))
    }

    pub fn to_f64(&self) -> SkewMatrix {
        SkewMatrix::new(self.0.to_f64(), 1e-12).expect("exact skew matrix converts to a skew float matrix")
    }
}

/// `det(tI − A)` by the Faddeev–LeVerrier recurrence over ℚ.
pub fn char_poly(a: &RationalMatrix) -> RationalPolynomial {
    let n = a.dim();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = RationalMatrix::zeros(n);
    for k in 1..=n {
        let mut next = a.mul(&m);
        for i in 0..n {
            let v = next.get(i, i) + &coeffs[n - k + 1];
            next.set(i, i, v);
        }
        m = next;
        coeffs[n - k] = -a.mul(&m).trace() / integer(k as i64);
    }
    RationalPolynomial::new(coeffs)
}

/// Bareiss fraction-free determinant of a square integer matrix.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match ((k + 1)..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> RationalPolynomial {
        RationalPolynomial::from_integers(v)
    }

    #[test]
    fn polynomial_arithmetic() {
        let a = ints(&[1, 0, 1]);
        let b = ints(&[4, 0, 1]);
        assert_eq!(&a * &b, ints(&[4, 0, 5, 0, 1]));
        assert_eq!(&a - &a, RationalPolynomial::zero());
        assert_eq!((&a - &a).degree(), None);
        assert_eq!(a.derivative(), ints(&[0, 2]));
        assert_eq!(a.eval(&integer(3)), integer(10));
        assert_eq!(ints(&[0, 0, 3, 1]).div_t_squared().unwrap(), ints(&[3, 1]));
        assert_eq!(ints(&[0, 1, 1]).div_t_squared(), Err(Error::NotDivisible));
        assert_eq!(ints(&[1, 1]).compose_scale(&integer(2)), ints(&[1, 2]));
    }

    #[test]
    fn display_is_readable() {
        let p = RationalPolynomial::new(vec![rational(-1, 2), integer(0), integer(1)]);
        assert_eq!(alloc::format!("{p}"), "t^2 - 1/2");
    }

    #[test]
    fn char_poly_examples() {
        let j = RationalSkewMatrix::canonical(2, &[integer(1)]).unwrap();
        assert_eq!(char_poly(j.matrix()), ints(&[1, 0, 1]));
        let z = RationalSkewMatrix::from_upper(3, &[integer(0), integer(0), integer(0)]).unwrap();
        assert_eq!(char_poly(z.matrix()), ints(&[0, 0, 0, 1]));
        let b = RationalSkewMatrix::canonical(4, &[integer(1), integer(2)]).unwrap();
        assert_eq!(char_poly(b.matrix()), ints(&[4, 0, 5, 0, 1]));
    }

    #[test]
    fn bareiss_matches_rational_elimination() {
        let rows = [vec![2, -1, 0, 3], vec![1, 0, 4, -2], vec![0, 5, 1, 1], vec![-3, 2, 2, 0]];
        let big: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let rat = RationalMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| integer(x)).collect()).collect(),
        )
        .unwrap();
        assert_eq!(Rational::from_integer(bareiss_determinant(big)), rat.determinant());

        let zero_pivot = vec![
            vec![BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(0)],
        ];
        assert_eq!(bareiss_determinant(zero_pivot), BigInt::from(-1));
    }

    #[test]
    fn exact_skewness_enforced() {
        let rows = vec![vec![integer(0), integer(1)], vec![integer(1), integer(0)]];
        assert!(matches!(RationalSkewMatrix::from_rows(rows), Err(Error::NotSkew { .. })));
    }

    #[test]
    fn signed_permutation_conjugation() {
        let b = RationalSkewMatrix::canonical(4, &[integer(1), integer(2)]).unwrap();
        let swapped = b.conjugate_signed_permutation(&[2, 3, 0, 1], &[1, 1, 1, 1]).unwrap();
        assert_eq!(swapped, RationalSkewMatrix::canonical(4, &[integer(2), integer(1)]).unwrap());
        let flipped = b.conjugate_signed_permutation(&[0, 1, 2, 3], &[-1, 1, 1, 1]).unwrap();
        assert_eq!(*flipped.matrix().get(0, 1), integer(-1));
        assert!(b.conjugate_signed_permutation(&[0, 0, 1, 2], &[1; 4]).is_err());
    }
}

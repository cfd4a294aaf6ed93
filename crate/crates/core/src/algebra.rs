//! Metric 2-step nilpotent Lie algebras `ℝ^q ⊕ W` in standard form.
//!
//! `W` is a `p`-dimensional space of skew `q×q` matrices, orthonormal for the
//! trace form `⟨X, Y⟩₀ = trace(XYᵀ)`. The bracket of `v, w ∈ ℝ^q` is the
//! element of `W` with `⟨[v,w], Z⟩ = (Z v)·w`, so that `j(Z) = Z`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fmath::sqrt;
use crate::linalg::{self, Matrix};
use crate::rng;
use crate::spectral::SkewMatrix;

/// Dependence threshold for Gram–Schmidt and the type-(p,q) rank test.
pub const DEPENDENCE_TOL: f64 = 1e-10;
/// Allowed deviation of `gᵀg` from the identity.
pub const ORTHOGONAL_TOL: f64 = 1e-10;
/// Default relative tolerance on characteristic-polynomial coefficients.
pub const CHARPOLY_TOL: f64 = 1e-8;

/// A `p`-plane in `so(q)` with a trace-orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceW {
    q: usize,
    basis: Vec<SkewMatrix>,
}

impl SubspaceW {
    /// Gram–Schmidt (two passes) under the trace form.
    pub fn orthonormalize(q: usize, raw: &[SkewMatrix]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::InvalidParameter("W needs at least one basis element"));
        }
        if q < 2 {
            return Err(Error::BadShape { rows: q, cols: q, min: 2 });
        }
        if let Some(bad) = raw.iter().find(|z| z.dim() != q) {
            return Err(Error::DimensionMismatch { expected: q, found: bad.dim() });
        }
        let max_p = q * (q - 1) / 2;
        let mut basis: Vec<SkewMatrix> = Vec::with_capacity(raw.len());
        for z in raw {
            let scale = z.frobenius_norm();
            let mut w = z.clone();
            for _ in 0..2 {
                for e in &basis {
                    let d = w.trace_dot(e);
                    w.add_scaled(e, -d);
                }
            }
            let n = w.frobenius_norm();
            if scale == 0.0 || n <= DEPENDENCE_TOL * scale || basis.len() == max_p {
                let rank = basis.len();
                return Err(Error::DependentBasis { rank, len: raw.len() });
            }
            basis.push(w.scaled(1.0 / n));
        }
        Ok(Self { q, basis })
    }

    /// Accepts an already orthonormal basis (checked to `DEPENDENCE_TOL`).
    pub fn from_orthonormal(basis: Vec<SkewMatrix>) -> Result<Self> {
        let q = basis.first().map(SkewMatrix::dim).ok_or(Error::InvalidParameter("empty basis"))?;
        if let Some(bad) = basis.iter().find(|z| z.dim() != q) {
            return Err(Error::DimensionMismatch { expected: q, found: bad.dim() });
        }
        for (a, x) in basis.iter().enumerate() {
            for (b, y) in basis.iter().enumerate() {
                let want = if a == b { 1.0 } else { 0.0 };
                if (x.trace_dot(y) - want).abs() > DEPENDENCE_TOL {
                    return Err(Error::InvalidParameter(
                        "basis is not orthonormal under the trace form",
                    ));
                }
            }
        }
        Ok(Self { q, basis })
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SkewMatrix] {
        &self.basis
    }

    /// `Σ coords[k] · basis[k]`.
    pub fn element(&self, coords: &[f64]) -> Result<SkewMatrix> {
        SkewMatrix::combination(&self.basis, coords)
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn gram_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, x) in self.basis.iter().enumerate() {
            for (b, y) in self.basis.iter().enumerate() {
                let want = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((x.trace_dot(y) - want).abs());
            }
        }
        worst
    }

    /// Trace-form Gram matrix `⟨self_a, other_b⟩₀`.
    pub fn cross_gram(&self, other: &SubspaceW) -> Matrix {
        Matrix::from_fn(self.p(), other.p(), |a, b| self.basis[a].trace_dot(&other.basis[b]))
    }

    /// Distance between the orthogonal projectors onto the two planes
    /// (Frobenius norm on the coordinate space). Zero iff the planes coincide.
    ///
    /// Uses `‖P₁ − P₂‖² = ‖(I − P₁)P₂‖² + ‖(I − P₂)P₁‖²`, which sums residuals
    /// directly instead of cancelling `p₁ + p₂ − 2‖G‖²`.
    pub fn projector_distance(&self, other: &SubspaceW) -> f64 {
        sqrt(self.residual_sq(other) + other.residual_sq(self))
    }

    /// `Σ_b ‖(I − P_self) other_b‖²`.
    fn residual_sq(&self, other: &SubspaceW) -> f64 {
        other
            .basis
            .iter()
            .map(|y| {
                let mut r = y.clone();
                for _ in 0..2 {
                    for e in &self.basis {
                        let d = r.trace_dot(e);
                        r.add_scaled(e, -d);
                    }
                }
                r.trace_dot(&r)
            })
            .sum()
    }
}

/// `ℝ^q ⊕ W` with its type-(p,q) verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardAlgebra {
    w: SubspaceW,
    bracket_rank: usize,
}

/// An element of the center `W`, stored both as coordinates and as a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralElement {
    pub coords: Vec<f64>,
    pub matrix: SkewMatrix,
}

/// Orthonormalizes `raw` and builds the algebra.
pub fn make_standard(q: usize, raw_basis: &[SkewMatrix]) -> Result<StandardAlgebra> {
    StandardAlgebra::new(SubspaceW::orthonormalize(q, raw_basis)?)
}

impl StandardAlgebra {
    pub fn new(w: SubspaceW) -> Result<Self> {
        let q = w.q();
        // rows: basis elements; columns: coordinates of [e_i, e_j], i < j
        let mut coeffs = Matrix::zeros(w.p(), q * (q - 1) / 2);
        for (k, z) in w.basis().iter().enumerate() {
            let mut col = 0;
            for i in 0..q {
                for j in (i + 1)..q {
                    // (Z e_i)·e_j
                    coeffs[(k, col)] = z.get(j, i);
                    col += 1;
                }
            }
        }
        let bracket_rank = linalg::rank(&coeffs, DEPENDENCE_TOL);
        Ok(Self { w, bracket_rank })
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.w.q()
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.w.p()
    }

    /// Total dimension `q + p`.
    pub fn n(&self) -> usize {
        self.q() + self.p()
    }

    pub fn w(&self) -> &SubspaceW {
        &self.w
    }

    /// Rank of the span of all brackets `[e_i, e_j]`.
    pub fn bracket_rank(&self) -> usize {
        self.bracket_rank
    }

    /// `[𝔑, 𝔑] = W`, i.e. the algebra really has type `(p, q)`.
    pub fn is_type_pq(&self) -> bool {
        self.bracket_rank == self.p()
    }

    pub fn central(&self, coords: &[f64]) -> Result<CentralElement> {
        let matrix = self.w.element(coords)?;
        Ok(CentralElement { coords: coords.to_vec(), matrix })
    }

    /// Bilinear, antisymmetric bracket `ℝ^q × ℝ^q → W`.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Result<CentralElement> {
        let q = self.q();
        for v in [x, y] {
            if v.len() != q {
                return Err(Error::DimensionMismatch { expected: q, found: v.len() });
            }
        }
        let coords: Vec<f64> =
            self.w.basis().iter().map(|z| linalg::dot(&z.apply(x), y)).collect();
        self.central(&coords)
    }

    /// `j(Z)`; in standard form this is the matrix of `Z` itself.
    pub fn j_map(&self, z: &CentralElement) -> Result<SkewMatrix> {
        if z.coords.len() != self.p() || z.matrix.dim() != self.q() {
            return Err(Error::DimensionMismatch { expected: self.p(), found: z.coords.len() });
        }
        Ok(z.matrix.clone())
    }
}

/// `g W gᵀ` for orthogonal `g`; the basis stays trace-orthonormal.
pub fn conjugate_plane(g: &Matrix, w: &SubspaceW) -> Result<SubspaceW> {
    if !g.is_square() || g.rows() != w.q() {
        return Err(Error::DimensionMismatch { expected: w.q(), found: g.rows() });
    }
    let residual = g.transpose().matmul(g).sub(&Matrix::identity(g.rows())).max_abs();
    if residual > ORTHOGONAL_TOL {
        return Err(Error::NotOrthogonal { residual });
    }
    let basis = w.basis().iter().map(|z| z.conjugated_by(g)).collect();
    Ok(SubspaceW { q: w.q(), basis })
}

/// Outcome of [`weak_conjugacy_compare`].
#[derive(Debug, Clone, PartialEq)]
pub enum WeakConjugacy {
    /// Every tested point had matching characteristic polynomials.
    Consistent { tested: usize },
    /// `Z = Σ coords·W₁` and `φ(Z)` have different characteristic polynomials.
    Refuted {
        coords: Vec<f64>,
        witness: SkewMatrix,
        image: SkewMatrix,
        /// Largest scaled coefficient difference.
        discrepancy: f64,
        tested: usize,
    },
}

impl WeakConjugacy {
    pub fn is_consistent(&self) -> bool {
        matches!(self, WeakConjugacy::Consistent { .. })
    }
}

/// Largest `|a_k − b_k| / max(1, |a_k|, |b_k|)` over the coefficients.
pub fn char_poly_discrepancy(a: &SkewMatrix, b: &SkewMatrix) -> f64 {
    let pa = linalg::char_poly(a.matrix());
    let pb = linalg::char_poly(b.matrix());
    pa.iter()
        .zip(&pb)
        .map(|(x, y)| (x - y).abs() / 1f64.max(x.abs()).max(y.abs()))
        .fold(0.0, f64::max)
}

/// Sampled test of whether `φ : W₁ → W₂` sends every `Z` to a matrix with the
/// same characteristic polynomial (equivalently, an `O(q)`-conjugate).
///
/// Tests the basis directions, all pairwise sums of basis directions, then
/// `samples` Gaussian coordinate vectors drawn from `(seed, i)` streams.
/// Refutation is certain; consistency is probabilistic.
pub fn weak_conjugacy_compare(
    w1: &SubspaceW,
    w2: &SubspaceW,
    phi: &Matrix,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<WeakConjugacy> {
    let p = w1.p();
    if w2.p() != p {
        return Err(Error::DimensionMismatch { expected: p, found: w2.p() });
    }
    if w2.q() != w1.q() {
        return Err(Error::DimensionMismatch { expected: w1.q(), found: w2.q() });
    }
    if phi.rows() != p || phi.cols() != p {
        return Err(Error::DimensionMismatch { expected: p, found: phi.rows() });
    }
    if linalg::invert(phi).is_none() {
        return Err(Error::SingularPhi);
    }

    let unit = |k: usize| {
        let mut v = alloc::vec![0.0; p];
        v[k] = 1.0;
        v
    };
    let mut points: Vec<Vec<f64>> = (0..p).map(unit).collect();
    for a in 0..p {
        for b in (a + 1)..p {
            let mut v = unit(a);
            v[b] = 1.0;
            points.push(v);
        }
    }
    for i in 0..samples {
        let mut r = rng::stream_rng(seed ^ rng::DOMAIN_COMPARE, i as u64);
        points.push(rng::gaussian_vec(&mut r, p));
    }

    for (tested, c) in points.iter().enumerate() {
        let z = w1.element(c)?;
        let image = w2.element(&phi.matvec(c))?;
        let discrepancy = char_poly_discrepancy(&z, &image);
        if discrepancy > tol {
            return Ok(WeakConjugacy::Refuted {
                coords: c.clone(),
                witness: z,
                image,
                discrepancy,
                tested: tested + 1,
            });
        }
    }
    Ok(WeakConjugacy::Consistent { tested: points.len() })
}

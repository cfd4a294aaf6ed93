//! Spectral structure of skew-symmetric matrices.
//!
//! A real skew-symmetric `Z` has eigenvalues `±iλ` (λ > 0) and `0`. We never
//! touch complex arithmetic: the frequencies come from the symmetric positive
//! semidefinite matrix `S = −Z² = ZᵀZ`, whose eigenvalues are the `λ²` (each
//! twice) plus zeros for the kernel. The adapted real frame pairs each unit
//! vector `B` of a `λ²`-eigenspace with `C = Z·B`, which has length `λ`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fmath::sqrt;
use crate::linalg::{self, Matrix};

/// Default relative skewness tolerance for floating input.
pub const SKEW_TOL: f64 = 1e-12;
/// Frequencies closer than this (relative) are merged.
pub const GROUP_TOL: f64 = 1e-7;
/// Eigenvalues of `−Z²` below `KERNEL_TOL · max(‖S‖, 1)` count as zero.
pub const KERNEL_TOL: f64 = 1e-10;
/// Stopping threshold for the cyclic Jacobi sweeps.
pub const JACOBI_TOL: f64 = 1e-12;

/// A real `q×q` skew-symmetric matrix, `q ≥ 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix(Matrix);

impl SkewMatrix {
    /// Validates `m` and stores its exact antisymmetric part `(m − mᵀ)/2`.
    ///
    /// The skewness residual `max |m_ij + m_ji|` must not exceed
    /// `tol · max(1, max |m_ij|)`.
    pub fn new(m: Matrix, tol: f64) -> Result<Self> {
        if !m.is_square() || m.rows() < 2 {
            return Err(Error::BadShape { rows: m.rows(), cols: m.cols(), min: 2 });
        }
        let q = m.rows();
        let mut residual: f64 = 0.0;
        for i in 0..q {
            for j in i..q {
                residual = residual.max((m[(i, j)] + m[(j, i)]).abs());
            }
        }
        let bound = tol * m.max_abs().max(1.0);
        if residual > bound {
            return Err(Error::NotSkew { residual, tol: bound });
        }
        Ok(Self(Matrix::from_fn(q, q, |i, j| 0.5 * (m[(i, j)] - m[(j, i)]))))
    }

    pub fn from_rows(rows: &[Vec<f64>], tol: f64) -> Result<Self> {
        let m = Matrix::from_rows(rows).ok_or(Error::BadShape {
            rows: rows.len(),
            cols: 0,
            min: 2,
        })?;
        Self::new(m, tol)
    }

    pub fn zeros(q: usize) -> Self {
        Self(Matrix::zeros(q, q))
    }

    /// Matrix from its strict upper triangle, listed row by row
    /// (`(0,1), (0,2), …, (q−2,q−1)`).
    pub fn from_upper(q: usize, upper: &[f64]) -> Result<Self> {
        if q < 2 {
            return Err(Error::BadShape { rows: q, cols: q, min: 2 });
        }
        let len = q * (q - 1) / 2;
        if upper.len() != len {
            return Err(Error::DimensionMismatch { expected: len, found: upper.len() });
        }
        let mut m = Matrix::zeros(q, q);
        let mut k = 0;
        for i in 0..q {
            for j in (i + 1)..q {
                m[(i, j)] = upper[k];
                m[(j, i)] = -upper[k];
                k += 1;
            }
        }
        Ok(Self(m))
    }

    /// Block-diagonal normal form `blockdiag(λ₁J, λ₂J, …, 0…)` with
    /// `J = [[0,1],[−1,0]]`; remaining rows are zero.
    pub fn canonical(q: usize, freqs: &[f64]) -> Result<Self> {
        if q < 2 || 2 * freqs.len() > q {
            return Err(Error::BadShape { rows: q, cols: q, min: (2 * freqs.len()).max(2) });
        }
        let mut m = Matrix::zeros(q, q);
        for (k, &l) in freqs.iter().enumerate() {
            m[(2 * k, 2 * k + 1)] = l;
            m[(2 * k + 1, 2 * k)] = -l;
        }
        Ok(Self(m))
    }

    pub fn upper(&self) -> Vec<f64> {
        let q = self.dim();
        let mut out = Vec::with_capacity(q * (q - 1) / 2);
        for i in 0..q {
            for j in (i + 1)..q {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.0.matvec(v)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }

    /// Trace form `⟨X, Y⟩₀ = trace(X Yᵀ)`.
    pub fn trace_dot(&self, other: &SkewMatrix) -> f64 {
        self.0.frobenius_dot(&other.0)
    }

    pub fn scaled(&self, s: f64) -> SkewMatrix {
        SkewMatrix(self.0.scaled(s))
    }

    pub fn add_scaled(&mut self, other: &SkewMatrix, s: f64) {
        self.0.add_scaled(&other.0, s);
    }

    /// `g Z gᵀ`, antisymmetrized against rounding.
    pub fn conjugated_by(&self, g: &Matrix) -> SkewMatrix {
        let m = g.matmul(&self.0).matmul(&g.transpose());
        let q = m.rows();
        SkewMatrix(Matrix::from_fn(q, q, |i, j| 0.5 * (m[(i, j)] - m[(j, i)])))
    }

    /// Linear combination `Σ c_k · basis_k`.
    pub fn combination(basis: &[SkewMatrix], coords: &[f64]) -> Result<SkewMatrix> {
        let first = basis.first().ok_or(Error::InvalidParameter("empty basis"))?;
        if coords.len() != basis.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), found: coords.len() });
        }
        let mut z = SkewMatrix::zeros(first.dim());
        for (b, &c) in basis.iter().zip(coords) {
            z.add_scaled(b, c);
        }
        Ok(z)
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }
}

/// Tolerances used by [`spectral_decompose`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralTolerances {
    pub group: f64,
    pub kernel: f64,
    pub jacobi: f64,
}

impl Default for SpectralTolerances {
    fn default() -> Self {
        Self { group: GROUP_TOL, kernel: KERNEL_TOL, jacobi: JACOBI_TOL }
    }
}

/// A distinct positive frequency λ with the number of `±iλ` pairs carrying it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frequency {
    pub value: f64,
    pub multiplicity: usize,
}

/// One invariant plane of `Z`: unit `b` and `c = Z·b` (so `|c| = λ`).
#[derive(Debug, Clone, PartialEq)]
pub struct FramePair {
    pub lambda: f64,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

/// Eigenstructure of a skew matrix with its adapted real frame.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub dim: usize,
    /// Distinct frequencies, ascending.
    pub frequencies: Vec<Frequency>,
    /// Orthonormal basis of `ker Z`.
    pub kernel: Vec<Vec<f64>>,
    /// `M` pairs, grouped by frequency in ascending order.
    pub pairs: Vec<FramePair>,
    pub norm: f64,
}

impl SpectralData {
    /// `M`, the total number of `±iλ` pairs.
    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// `r = dim ker Z`.
    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }

    pub fn frequency_values(&self) -> Vec<f64> {
        self.frequencies.iter().map(|f| f.value).collect()
    }

    /// Spectral data of a block normal form, built without any eigensolver.
    /// Kernel vectors and planes are standard basis vectors.
    pub fn from_frequencies(dim: usize, freqs: &[Frequency]) -> Result<Self> {
        let pairs_total: usize = freqs.iter().map(|f| f.multiplicity).sum();
        if 2 * pairs_total > dim || freqs.iter().any(|f| !(f.value > 0.0) || f.multiplicity == 0) {
            return Err(Error::InvalidParameter("frequencies do not fit the dimension"));
        }
        let mut sorted: Vec<Frequency> = freqs.to_vec();
        sorted.sort_by(|a, b| a.value.total_cmp(&b.value));
        let unit = |k: usize| {
            let mut v = alloc::vec![0.0; dim];
            v[k] = 1.0;
            v
        };
        let mut pairs = Vec::with_capacity(pairs_total);
        let mut next = 0;
        let mut norm_sq = 0.0;
        for f in &sorted {
            for _ in 0..f.multiplicity {
                // Z e_{2k} = −λ e_{2k+1} for blockdiag(λJ)
                let mut c = alloc::vec![0.0; dim];
                c[next + 1] = -f.value;
                pairs.push(FramePair { lambda: f.value, b: unit(next), c });
                next += 2;
                norm_sq += 2.0 * f.value * f.value;
            }
        }
        let kernel = (next..dim).map(unit).collect();
        Ok(Self { dim, frequencies: sorted, kernel, pairs, norm: sqrt(norm_sq) })
    }

    /// The block normal form this data describes: `Σ (C Bᵀ − B Cᵀ)`.
    pub fn reconstruct(&self) -> Matrix {
        let q = self.dim;
        let mut m = Matrix::zeros(q, q);
        for p in &self.pairs {
            for i in 0..q {
                for j in 0..q {
                    m[(i, j)] += p.c[i] * p.b[j] - p.b[i] * p.c[j];
                }
            }
        }
        m
    }

    /// Largest violation of the frame invariants against `z`:
    /// `‖Z A‖`, `‖−Z²B − λ²B‖`, `‖C − Z B‖` and the Gram residual of
    /// `{A, B, C/λ}`.
    pub fn frame_residual(&self, z: &SkewMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for a in &self.kernel {
            worst = worst.max(linalg::norm(&z.apply(a)));
        }
        let mut ortho: Vec<Vec<f64>> = self.kernel.clone();
        for p in &self.pairs {
            let zb = z.apply(&p.b);
            let zzb = z.apply(&zb);
            let eig: Vec<f64> =
                zzb.iter().zip(&p.b).map(|(x, b)| -x - p.lambda * p.lambda * b).collect();
            worst = worst.max(linalg::norm(&eig));
            let diff: Vec<f64> = zb.iter().zip(&p.c).map(|(x, c)| x - c).collect();
            worst = worst.max(linalg::norm(&diff));
            ortho.push(p.b.clone());
            ortho.push(p.c.iter().map(|x| x / p.lambda).collect());
        }
        for (i, u) in ortho.iter().enumerate() {
            for (j, v) in ortho.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((linalg::dot(u, v) - want).abs());
            }
        }
        worst
    }
}

/// Frequencies, multiplicities, kernel and adapted frame of `z`.
pub fn spectral_decompose(z: &SkewMatrix, tol: &SpectralTolerances) -> Result<SpectralData> {
    let q = z.dim();
    let zm = z.matrix();
    let s = zm.transpose().matmul(zm);
    let s_norm = s.frobenius_norm();
    let eig = linalg::symmetric_eigen(&s, tol.jacobi);

    let mut order: Vec<usize> = (0..q).collect();
    order.sort_by(|&a, &b| eig.values[a].total_cmp(&eig.values[b]));

    let zero_below = tol.kernel * s_norm.max(1.0);
    let split = order.iter().position(|&i| eig.values[i] >= zero_below).unwrap_or(q);

    let kernel: Vec<Vec<f64>> = order[..split].iter().map(|&i| eig.vectors.column(i)).collect();

    // Chain-merge neighbouring λ into groups.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut prev: Option<f64> = None;
    for &i in &order[split..] {
        let l = sqrt(eig.values[i].max(0.0));
        match (prev, groups.last_mut()) {
            (Some(p), Some(g)) if (l - p).abs() < tol.group * l.max(p).max(1.0) => g.push(i),
            _ => groups.push(alloc::vec![i]),
        }
        prev = Some(l);
    }

    let mut frequencies = Vec::with_capacity(groups.len());
    let mut pairs = Vec::new();
    let mut chosen: Vec<Vec<f64>> = Vec::new();
    for g in &groups {
        if g.len() % 2 != 0 {
            return Err(Error::DegenerateFrame("eigenvalue cluster of odd size"));
        }
        let mean_sq = g.iter().map(|&i| eig.values[i]).sum::<f64>() / g.len() as f64;
        let lambda = sqrt(mean_sq);
        let m = g.len() / 2;
        frequencies.push(Frequency { value: lambda, multiplicity: m });

        let candidates: Vec<Vec<f64>> = g.iter().map(|&i| eig.vectors.column(i)).collect();
        chosen.clear();
        for _ in 0..m {
            let mut best: Option<(f64, Vec<f64>)> = None;
            for u in &candidates {
                let mut w = u.clone();
                for _ in 0..2 {
                    for e in &chosen {
                        let d = linalg::dot(e, &w);
                        linalg::axpy_neg(&mut w, d, e);
                    }
                }
                let n = linalg::norm(&w);
                if best.as_ref().is_none_or(|(bn, _)| n > *bn) {
                    best = Some((n, w));
                }
            }
            let (n, w) = best.ok_or(Error::DegenerateFrame("empty eigenspace"))?;
            if n < 1e-3 {
                return Err(Error::DegenerateFrame("eigenspace exhausted before pairing"));
            }
            let b: Vec<f64> = w.iter().map(|x| x / n).collect();
            let c = z.apply(&b);
            let cn = linalg::norm(&c);
            if cn < 0.5 * lambda {
                return Err(Error::DegenerateFrame("Z·B too short for its eigenvalue"));
            }
            chosen.push(b.clone());
            chosen.push(c.iter().map(|x| x / cn).collect());
            pairs.push(FramePair { lambda, b, c });
        }
    }

    Ok(SpectralData { dim: q, frequencies, kernel, pairs, norm: z.frobenius_norm() })
}

/// `Ric(Z,Z) = trace(−¼Z²) = ¼‖Z‖_F²`.
pub fn ricci_central(z: &SkewMatrix) -> f64 {
    let n = z.frobenius_norm();
    0.25 * n * n
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn j() -> SkewMatrix {
        SkewMatrix::canonical(2, &[1.0]).unwrap()
    }

    #[test]
    fn rotation_generator() {
        let sd = spectral_decompose(&j(), &SpectralTolerances::default()).unwrap();
        assert_eq!(sd.frequencies.len(), 1);
        assert!((sd.frequencies[0].value - 1.0).abs() < 1e-14);
        assert_eq!(sd.frequencies[0].multiplicity, 1);
        assert_eq!((sd.kernel_dim(), sd.pair_count()), (0, 1));
    }

    #[test]
    fn zero_matrix_is_all_kernel() {
        let sd = spectral_decompose(&SkewMatrix::zeros(4), &SpectralTolerances::default()).unwrap();
        assert!(sd.frequencies.is_empty());
        assert_eq!((sd.kernel_dim(), sd.pair_count()), (4, 0));
    }

    #[test]
    fn two_blocks() {
        let z = SkewMatrix::canonical(4, &[1.0, 2.0]).unwrap();
        let sd = spectral_decompose(&z, &SpectralTolerances::default()).unwrap();
        let f: Vec<(f64, usize)> = sd.frequencies.iter().map(|f| (f.value, f.multiplicity)).collect();
        assert_eq!(f.len(), 2);
        assert!((f[0].0 - 1.0).abs() < 1e-13 && f[0].1 == 1);
        assert!((f[1].0 - 2.0).abs() < 1e-13 && f[1].1 == 1);
        assert_eq!(sd.kernel_dim(), 0);
        assert!(sd.frame_residual(&z) < 1e-12);
    }

    #[test]
    fn repeated_frequency_pairs_up() {
        let z = SkewMatrix::canonical(5, &[3.0, 3.0]).unwrap();
        let sd = spectral_decompose(&z, &SpectralTolerances::default()).unwrap();
        assert_eq!(sd.frequencies.len(), 1);
        assert_eq!(sd.frequencies[0].multiplicity, 2);
        assert_eq!(sd.kernel_dim(), 1);
        assert!(sd.frame_residual(&z) < 1e-12);
        assert!(sd.reconstruct().sub(z.matrix()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn rejects_non_skew() {
        let m = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(SkewMatrix::new(m, SKEW_TOL), Err(Error::NotSkew { .. })));
        let d = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(SkewMatrix::new(d, SKEW_TOL), Err(Error::NotSkew { .. })));
        let tiny = Matrix::zeros(1, 1);
        assert!(matches!(SkewMatrix::new(tiny, SKEW_TOL), Err(Error::BadShape { .. })));
    }

    #[test]
    fn ricci_values() {
        assert!((ricci_central(&j()) - 0.5).abs() < 1e-15);
        assert_eq!(ricci_central(&SkewMatrix::zeros(3)), 0.0);
        let z = SkewMatrix::canonical(4, &[1.0, 2.0]).unwrap();
        assert!((ricci_central(&z) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn from_frequencies_matches_decomposition() {
        let freqs = [Frequency { value: 0.5, multiplicity: 1 }, Frequency { value: 2.0, multiplicity: 2 }];
        let sd = SpectralData::from_frequencies(7, &freqs).unwrap();
        let z = SkewMatrix::new(sd.reconstruct(), SKEW_TOL).unwrap();
        assert!(sd.frame_residual(&z) < 1e-15);
        let dec = spectral_decompose(&z, &SpectralTolerances::default()).unwrap();
        assert_eq!(dec.frequencies.len(), 2);
        assert_eq!(dec.kernel_dim(), 1);
    }
}

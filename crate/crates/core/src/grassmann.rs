//! Uniform sampling on the Grassmannian `G(p, so(q))`, Haar-random orthogonal
//! matrices, and Monte Carlo estimates of how often sampled central elements
//! are in generic position.
//!
//! The trace form `trace(XYᵀ)` equals twice the Euclidean product of the
//! strict upper triangles, so independent standard Gaussian upper-triangle
//! coordinates give an `O(q)`-invariant distribution on `so(q)`; the span of
//! `p` such draws is uniform on the Grassmannian.
//!
//! Streams: plane `i` uses `(seed ⊕ PLANE, i)`, the orthogonal matrix `i` uses
//! `(seed ⊕ ORTHOGONAL, i)`, and direction `j` uses `(seed ⊕ DIRECTION, j)`;
//! inside [`estimate_u_fraction`] direction `j` of plane `i` uses stream
//! `(i + 1)·2³² + j`.

use alloc::vec::Vec;

use crate::algebra::SubspaceW;
use crate::conjugate::is_maximally_primitive;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm, Matrix};
use crate::rng::{self, gaussian_vec, stream_rng};
use crate::spectral::{spectral_decompose, SkewMatrix, SpectralTolerances};

/// Resampling budget for degenerate Gram–Schmidt draws.
pub const MAX_ATTEMPTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub p: usize,
    pub q: usize,
    pub samples: usize,
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.q < 2 {
            return Err(Error::InvalidParameter("q must be at least 2"));
        }
        if self.p < 1 || self.p > self.q * (self.q - 1) / 2 {
            return Err(Error::InvalidParameter("p must lie in 1..=q(q-1)/2"));
        }
        if self.samples < 1 {
            return Err(Error::InvalidParameter("samples must be at least 1"));
        }
        Ok(())
    }
}

/// A uniformly distributed `p`-plane in `so(q)`; the same `(cfg.seed,
/// draw_index)` always yields the same plane.
pub fn sample_plane(cfg: &SamplerConfig, draw_index: u64) -> Result<SubspaceW> {
    cfg.validate()?;
    let dim = cfg.q * (cfg.q - 1) / 2;
    let mut r = stream_rng(cfg.seed ^ rng::DOMAIN_PLANE, draw_index);
    for _ in 0..MAX_ATTEMPTS {
        let raw = (0..cfg.p)
            .map(|_| SkewMatrix::from_upper(cfg.q, &gaussian_vec(&mut r, dim)))
            .collect::<Result<Vec<_>>>()?;
        match SubspaceW::orthonormalize(cfg.q, &raw) {
            Ok(w) => return Ok(w),
            Err(Error::DependentBasis { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegenerateDraw { attempts: MAX_ATTEMPTS })
}

/// Haar-distributed orthogonal `q×q` matrix: Gram–Schmidt QR of a Gaussian
/// matrix, which fixes the diagonal of `R` positive.
pub fn random_orthogonal(q: usize, seed: u64, draw_index: u64) -> Result<Matrix> {
    if q < 1 {
        return Err(Error::InvalidParameter("q must be at least 1"));
    }
    let mut r = stream_rng(seed ^ rng::DOMAIN_ORTHOGONAL, draw_index);
    'attempt: for _ in 0..MAX_ATTEMPTS {
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(q);
        for _ in 0..q {
            let mut v = gaussian_vec(&mut r, q);
            let scale = norm(&v);
            for _ in 0..2 {
                for c in &cols {
                    let d = dot(&v, c);
                    crate::linalg::axpy_neg(&mut v, d, c);
                }
            }
            let n = norm(&v);
            if n <= 1e-10 * scale {
                continue 'attempt;
            }
            v.iter_mut().for_each(|x| *x /= n);
            cols.push(v);
        }
        return Ok(Matrix::from_columns(&cols));
    }
    Err(Error::DegenerateDraw { attempts: MAX_ATTEMPTS })
}

/// Unit coordinate vector (Gaussian, normalized) for direction `stream`.
pub fn sample_direction(p: usize, seed: u64, stream: u64) -> Vec<f64> {
    let mut r = stream_rng(seed ^ rng::DOMAIN_DIRECTION, stream);
    loop {
        let mut c = gaussian_vec(&mut r, p);
        let n = norm(&c);
        if n > 0.0 {
            c.iter_mut().for_each(|x| *x /= n);
            return c;
        }
    }
}

/// Float-mode verdict: the central geodesic of `z` has `⌊q/2⌋` distinct
/// primitive conjugate values (equivalently `z ∈ O`). A matrix whose spectrum
/// cannot be resolved into an adapted frame is counted as not generic.
pub fn is_generic(z: &SkewMatrix, tol: f64) -> bool {
    match spectral_decompose(z, &SpectralTolerances::default()) {
        Ok(spec) => is_maximally_primitive(&spec, tol),
        Err(_) => false,
    }
}

/// Per-direction verdicts for `samples` random unit directions in `w`.
pub fn direction_verdicts(w: &SubspaceW, samples: usize, seed: u64, tol: f64) -> Result<Vec<bool>> {
    (0..samples as u64)
        .map(|j| Ok(is_generic(&w.element(&sample_direction(w.p(), seed, j))?, tol)))
        .collect()
}

/// Share of `true` verdicts (0 for an empty slice).
pub fn fraction(verdicts: &[bool]) -> f64 {
    if verdicts.is_empty() {
        return 0.0;
    }
    verdicts.iter().filter(|&&v| v).count() as f64 / verdicts.len() as f64
}

/// Fraction of random unit directions in `w` that lie in `O`.
pub fn estimate_o_fraction_in_plane(w: &SubspaceW, samples: usize, seed: u64, tol: f64) -> Result<f64> {
    if samples < 1 {
        return Err(Error::InvalidParameter("samples must be at least 1"));
    }
    Ok(fraction(&direction_verdicts(w, samples, seed, tol)?))
}

/// Per-plane verdicts: plane `i` counts when at least one of `dir_samples`
/// random directions in it lies in `O` (a finite proxy for meeting `O`).
pub fn plane_verdicts(cfg: &SamplerConfig, dir_samples: usize, tol: f64) -> Result<Vec<bool>> {
    cfg.validate()?;
    if dir_samples < 1 {
        return Err(Error::InvalidParameter("dir_samples must be at least 1"));
    }
    let mut verdicts = Vec::with_capacity(cfg.samples);
    for i in 0..cfg.samples as u64 {
        let w = sample_plane(cfg, i)?;
        let mut hit = false;
        for j in 0..dir_samples as u64 {
            let z = w.element(&sample_direction(cfg.p, cfg.seed, ((i + 1) << 32) | j))?;
            if is_generic(&z, tol) {
                hit = true;
                break;
            }
        }
        verdicts.push(hit);
    }
    Ok(verdicts)
}

/// Fraction of `plane_samples` random planes that meet `O`, see
/// [`plane_verdicts`].
pub fn estimate_u_fraction(
    p: usize,
    q: usize,
    plane_samples: usize,
    dir_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<f64> {
    let cfg = SamplerConfig { seed, p, q, samples: plane_samples };
    Ok(fraction(&plane_verdicts(&cfg, dir_samples, tol)?))
}

/// Per-sample verdicts for independent `(W, Z)` pairs: plane `i` and
/// direction `i` in it.
pub fn joint_verdicts(cfg: &SamplerConfig, tol: f64) -> Result<Vec<bool>> {
    cfg.validate()?;
    (0..cfg.samples as u64)
        .map(|i| {
            let w = sample_plane(cfg, i)?;
            Ok(is_generic(&w.element(&sample_direction(cfg.p, cfg.seed, i))?, tol))
        })
        .collect()
}

/// Fraction of sampled `(W, Z)` pairs with `Z ∈ O`.
pub fn estimate_joint_fraction(cfg: &SamplerConfig, tol: f64) -> Result<f64> {
    Ok(fraction(&joint_verdicts(cfg, tol)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::conjugate_plane;
    use crate::conjugate::INTEGER_TOL;

    fn cfg(p: usize, q: usize) -> SamplerConfig {
        SamplerConfig { seed: 11, p, q, samples: 1 }
    }

    #[test]
    fn planes_are_orthonormal_and_deterministic() {
        let a = sample_plane(&cfg(3, 5), 4).unwrap();
        assert!(a.gram_residual() < 1e-12);
        assert_eq!(a, sample_plane(&cfg(3, 5), 4).unwrap());
        assert_ne!(a, sample_plane(&cfg(3, 5), 5).unwrap());
    }

    #[test]
    fn trivial_planes() {
        let w = sample_plane(&cfg(1, 2), 0).unwrap();
        let j = SkewMatrix::canonical(2, &[1.0 / 2f64.sqrt()]).unwrap();
        assert!((w.basis()[0].trace_dot(&j).abs() - 1.0).abs() < 1e-12);

        let full = sample_plane(&cfg(6, 4), 0).unwrap();
        assert_eq!(full.p(), 6);
        assert!(full.gram_residual() < 1e-12);
    }

    #[test]
    fn invalid_configs() {
        assert!(sample_plane(&cfg(0, 4), 0).is_err());
        assert!(sample_plane(&cfg(7, 4), 0).is_err());
        assert!(sample_plane(&SamplerConfig { samples: 0, ..cfg(1, 4) }, 0).is_err());
    }

    #[test]
    fn orthogonal_matrices() {
        for q in 1..7 {
            let g = random_orthogonal(q, 3, q as u64).unwrap();
            let e = g.transpose().matmul(&g).sub(&Matrix::identity(q)).max_abs();
            assert!(e < 1e-12, "q={q} residual {e}");
            assert_eq!(g, random_orthogonal(q, 3, q as u64).unwrap());
        }
        let g = random_orthogonal(1, 9, 0).unwrap();
        assert_eq!(g[(0, 0)].abs(), 1.0);
    }

    #[test]
    fn fraction_examples() {
        let so2 = sample_plane(&cfg(1, 2), 0).unwrap();
        assert_eq!(estimate_o_fraction_in_plane(&so2, 50, 1, INTEGER_TOL).unwrap(), 1.0);

        let line = SkewMatrix::canonical(4, &[1.0, 2.0]).unwrap();
        let w = SubspaceW::orthonormalize(4, &[line]).unwrap();
        assert_eq!(estimate_o_fraction_in_plane(&w, 50, 1, INTEGER_TOL).unwrap(), 0.0);

        assert_eq!(estimate_u_fraction(1, 2, 5, 3, 2, INTEGER_TOL).unwrap(), 1.0);
        assert_eq!(estimate_u_fraction(3, 3, 5, 3, 2, INTEGER_TOL).unwrap(), 1.0);
    }

    #[test]
    fn verdicts_are_conjugation_invariant() {
        let w = sample_plane(&cfg(2, 5), 1).unwrap();
        let g = random_orthogonal(5, 1, 0).unwrap();
        let gw = conjugate_plane(&g, &w).unwrap();
        assert_eq!(
            direction_verdicts(&w, 40, 8, INTEGER_TOL).unwrap(),
            direction_verdicts(&gw, 40, 8, INTEGER_TOL).unwrap()
        );
    }

    #[test]
    fn verdict_is_scale_invariant() {
        let z = SkewMatrix::canonical(5, &[1.0, 2f64.sqrt()]).unwrap();
        for s in [1e-3, 1.0, 1e3] {
            assert!(is_generic(&z.scaled(s), INTEGER_TOL));
        }
        let z = SkewMatrix::canonical(4, &[1.0, 3.0]).unwrap();
        for s in [1e-3, 1.0, -7.0] {
            assert!(!is_generic(&z.scaled(s), INTEGER_TOL));
        }
        assert!(!is_generic(&SkewMatrix::zeros(3), INTEGER_TOL));
    }
}

//! Jacobi fields along a central geodesic in the adapted left-invariant frame.
//!
//! A field is written in the frame `{A_i, B_j, C_j = Z B_j, Z_α}` as
//! `Y(t) = Σ a_i A_i + Σ b_j B_j + Σ c_j C_j + Σ d_α Z_α`. The Jacobi equation
//! reduces to
//!
//! ```text
//! a_i'' = 0,   d_α'' = 0,   b_j'' + λ_j² c_j' = 0,   c_j'' − b_j' = 0
//! ```
//!
//! whose solutions are affine `a_i`, `d_α` and
//!
//! ```text
//! b_j(t) =  α cos λt + β sin λt + γ
//! c_j(t) = −(β/λ) cos λt + (α/λ) sin λt + δ
//! ```
//!
//! Everything here lives in frame coordinates; the group itself is never built.
//! The endpoint matrix (vanishing fields evaluated at `t`) gives a conjugate
//! point oracle that is independent of the closed-form conjugate locus.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::StandardAlgebra;
use crate::error::{Error, Result};
use crate::fmath::{cos, sin};
use crate::linalg::{self, Matrix};
use crate::spectral::{spectral_decompose, SkewMatrix, SpectralData, SpectralTolerances};

/// Singular values below `NULLITY_TOL · σ_max` count as zero.
pub const NULLITY_TOL: f64 = 1e-8;
/// Default central-difference step.
pub const FD_STEP: f64 = 1e-4;

/// Adapted frame along `γ_Z`: spectral frame of `j(Z)` plus a basis of the center.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameBasis {
    pub spec: SpectralData,
    pub center: Vec<SkewMatrix>,
}

impl FrameBasis {
    pub fn new(spec: SpectralData, center: Vec<SkewMatrix>) -> Self {
        Self { spec, center }
    }

    /// Frame for `Z = Σ coords·W.basis` in `alg`.
    pub fn from_algebra(
        alg: &StandardAlgebra,
        coords: &[f64],
        tol: &SpectralTolerances,
    ) -> Result<Self> {
        let z = alg.j_map(&alg.central(coords)?)?;
        let spec = spectral_decompose(&z, tol)?;
        Ok(Self { spec, center: alg.w().basis().to_vec() })
    }

    /// `r`
    pub fn r(&self) -> usize {
        self.spec.kernel_dim()
    }

    /// `M`
    pub fn m(&self) -> usize {
        self.spec.pair_count()
    }

    /// `s`
    pub fn s(&self) -> usize {
        self.center.len()
    }

    /// `n = r + 2M + s`
    pub fn n(&self) -> usize {
        self.r() + 2 * self.m() + self.s()
    }

    pub fn lambda(&self, j: usize) -> f64 {
        self.spec.pairs[j].lambda
    }

    fn idx_b(&self, j: usize) -> usize {
        self.r() + j
    }

    fn idx_c(&self, j: usize) -> usize {
        self.r() + self.m() + j
    }

    fn idx_d(&self, alpha: usize) -> usize {
        self.r() + 2 * self.m() + alpha
    }
}

/// `value + slope·t`
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Affine {
    pub value: f64,
    pub slope: f64,
}

/// Parameters `(α, β, γ, δ)` of one oscillating pair.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PairCoeffs {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

/// A point of the `2n`-dimensional solution space.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct JacobiCoeffs {
    pub kernel: Vec<Affine>,
    pub center: Vec<Affine>,
    pub pairs: Vec<PairCoeffs>,
}

impl JacobiCoeffs {
    pub fn zero(frame: &FrameBasis) -> Self {
        Self {
            kernel: vec![Affine::default(); frame.r()],
            center: vec![Affine::default(); frame.s()],
            pairs: vec![PairCoeffs::default(); frame.m()],
        }
    }

    fn check(&self, frame: &FrameBasis) -> Result<()> {
        if self.kernel.len() != frame.r()
            || self.center.len() != frame.s()
            || self.pairs.len() != frame.m()
        {
            return Err(Error::SizeMismatch);
        }
        Ok(())
    }
}

/// Coefficients `(a_1..a_r, b_1..b_M, c_1..c_M, d_1..d_s)` of the field at `t`.
pub fn eval_jacobi(coeffs: &JacobiCoeffs, frame: &FrameBasis, t: f64) -> Result<Vec<f64>> {
    coeffs.check(frame)?;
    let mut out = vec![0.0; frame.n()];
    for (i, a) in coeffs.kernel.iter().enumerate() {
        out[i] = a.value + a.slope * t;
    }
    for (j, p) in coeffs.pairs.iter().enumerate() {
        let l = frame.lambda(j);
        let (s, c) = (sin(l * t), cos(l * t));
        out[frame.idx_b(j)] = p.alpha * c + p.beta * s + p.gamma;
        out[frame.idx_c(j)] = -(p.beta / l) * c + (p.alpha / l) * s + p.delta;
    }
    for (k, d) in coeffs.center.iter().enumerate() {
        out[frame.idx_d(k)] = d.value + d.slope * t;
    }
    Ok(out)
}

/// Exact `t`-derivative of the coefficient functions.
pub fn eval_jacobi_rate(coeffs: &JacobiCoeffs, frame: &FrameBasis, t: f64) -> Result<Vec<f64>> {
    coeffs.check(frame)?;
    let mut out = vec![0.0; frame.n()];
    for (i, a) in coeffs.kernel.iter().enumerate() {
        out[i] = a.slope;
    }
    for (j, p) in coeffs.pairs.iter().enumerate() {
        let l = frame.lambda(j);
        let (s, c) = (sin(l * t), cos(l * t));
        out[frame.idx_b(j)] = l * (-p.alpha * s + p.beta * c);
        out[frame.idx_c(j)] = p.beta * s + p.alpha * c;
    }
    for (k, d) in coeffs.center.iter().enumerate() {
        out[frame.idx_d(k)] = d.slope;
    }
    Ok(out)
}

/// Which named field a [`JacobiField`] is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    /// `A_i`
    Kernel(usize),
    /// `t A_i`
    KernelLinear(usize),
    /// `Z_α`
    Center(usize),
    /// `t Z_α`
    CenterLinear(usize),
    /// `V_j = B_j`
    V(usize),
    /// `W_j = j(Z) B_j`
    W(usize),
    /// `X_j = cos(λt) B_j + sin(λt)/λ · j(Z)B_j`
    X(usize),
    /// `Y_j = sin(λt) B_j − cos(λt)/λ · j(Z)B_j`
    Y(usize),
    /// `ξ_j = X_j − V_j`
    Xi(usize),
    /// `η_j = Y_j + W_j/λ`
    Eta(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiField {
    pub kind: FieldKind,
    pub coeffs: JacobiCoeffs,
}

fn field(frame: &FrameBasis, kind: FieldKind) -> JacobiField {
    let mut c = JacobiCoeffs::zero(frame);
    match kind {
        FieldKind::Kernel(i) => c.kernel[i].value = 1.0,
        FieldKind::KernelLinear(i) => c.kernel[i].slope = 1.0,
        FieldKind::Center(a) => c.center[a].value = 1.0,
        FieldKind::CenterLinear(a) => c.center[a].slope = 1.0,
        FieldKind::V(j) => c.pairs[j].gamma = 1.0,
        FieldKind::W(j) => c.pairs[j].delta = 1.0,
        FieldKind::X(j) => c.pairs[j].alpha = 1.0,
        FieldKind::Y(j) => c.pairs[j].beta = 1.0,
        FieldKind::Xi(j) => {
            c.pairs[j].alpha = 1.0;
            c.pairs[j].gamma = -1.0;
        }
        FieldKind::Eta(j) => {
            c.pairs[j].beta = 1.0;
            c.pairs[j].delta = 1.0 / frame.lambda(j);
        }
    }
    JacobiField { kind, coeffs: c }
}

/// The `2n` fields `A_i, tA_i, Z_α, tZ_α, V_j, W_j, X_j, Y_j`.
pub fn basis_fields(frame: &FrameBasis) -> Vec<JacobiField> {
    let mut out = Vec::with_capacity(2 * frame.n());
    for i in 0..frame.r() {
        out.push(field(frame, FieldKind::Kernel(i)));
        out.push(field(frame, FieldKind::KernelLinear(i)));
    }
    for a in 0..frame.s() {
        out.push(field(frame, FieldKind::Center(a)));
        out.push(field(frame, FieldKind::CenterLinear(a)));
    }
    for j in 0..frame.m() {
        for kind in [FieldKind::V(j), FieldKind::W(j), FieldKind::X(j), FieldKind::Y(j)] {
            out.push(field(frame, kind));
        }
    }
    out
}

/// The `n` fields `tA_i, tZ_α, ξ_j, η_j` spanning the fields that vanish at 0.
pub fn vanishing_basis(frame: &FrameBasis) -> Vec<JacobiField> {
    let mut out = Vec::with_capacity(frame.n());
    out.extend((0..frame.r()).map(|i| field(frame, FieldKind::KernelLinear(i))));
    out.extend((0..frame.s()).map(|a| field(frame, FieldKind::CenterLinear(a))));
    out.extend((0..frame.m()).map(|j| field(frame, FieldKind::Xi(j))));
    out.extend((0..frame.m()).map(|j| field(frame, FieldKind::Eta(j))));
    out
}

/// Vanishing basis evaluated at `t`, one column per field.
#[derive(Debug, Clone, PartialEq)]
pub struct EndpointMatrix {
    pub t: f64,
    pub matrix: Matrix,
    /// Descending.
    pub singular_values: Vec<f64>,
    pub determinant: f64,
    pub nullity: usize,
}

pub fn endpoint_matrix(frame: &FrameBasis, t: f64, tol: f64) -> Result<EndpointMatrix> {
    let cols = vanishing_basis(frame)
        .iter()
        .map(|f| eval_jacobi(&f.coeffs, frame, t))
        .collect::<Result<Vec<_>>>()?;
    let matrix = Matrix::from_columns(&cols);
    let singular_values = linalg::singular_values(&matrix);
    let top = singular_values.first().copied().unwrap_or(0.0);
    let nullity = singular_values.iter().filter(|&&s| s <= tol * top).count();
    let determinant = linalg::determinant(&matrix);
    Ok(EndpointMatrix { t, matrix, singular_values, determinant, nullity })
}

struct Differences {
    first: Vec<f64>,
    second: Vec<f64>,
}

fn central_differences(coeffs: &JacobiCoeffs, frame: &FrameBasis, t: f64, h: f64) -> Result<Differences> {
    let minus = eval_jacobi(coeffs, frame, t - h)?;
    let mid = eval_jacobi(coeffs, frame, t)?;
    let plus = eval_jacobi(coeffs, frame, t + h)?;
    let first = plus.iter().zip(&minus).map(|(p, m)| (p - m) / (2.0 * h)).collect();
    let second = plus
        .iter()
        .zip(&mid)
        .zip(&minus)
        .map(|((p, c), m)| (p - 2.0 * c + m) / (h * h))
        .collect();
    Ok(Differences { first, second })
}

/// Largest residual of the coefficient ODE system at `t`, with derivatives
/// taken by central differences of step `h`.
pub fn ode_residual(coeffs: &JacobiCoeffs, frame: &FrameBasis, t: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter("finite-difference step must be positive"));
    }
    let d = central_differences(coeffs, frame, t, h)?;
    let mut worst: f64 = 0.0;
    for i in 0..frame.r() {
        worst = worst.max(d.second[i].abs());
    }
    for a in 0..frame.s() {
        worst = worst.max(d.second[frame.idx_d(a)].abs());
    }
    for j in 0..frame.m() {
        let l2 = frame.lambda(j) * frame.lambda(j);
        let (b, c) = (frame.idx_b(j), frame.idx_c(j));
        worst = worst.max((d.second[b] + l2 * d.first[c]).abs());
        worst = worst.max((d.second[c] - d.first[b]).abs());
    }
    Ok(worst)
}

fn covariant_from(mut first: Vec<f64>, y: &[f64], frame: &FrameBasis) -> Vec<f64> {
    for j in 0..frame.m() {
        let l = frame.lambda(j);
        let (b, c) = (frame.idx_b(j), frame.idx_c(j));
        first[b] += 0.5 * l * l * y[c];
        first[c] -= 0.5 * y[b];
    }
    first
}

/// Covariant derivative of a field along `γ_Z`, in frame coefficients:
/// `(a', b' + ½λ²c, −½b + c', d')`, with the coefficient derivatives taken
/// from the closed forms.
pub fn covariant_derivative(coeffs: &JacobiCoeffs, frame: &FrameBasis, t: f64) -> Result<Vec<f64>> {
    let rate = eval_jacobi_rate(coeffs, frame, t)?;
    let y = eval_jacobi(coeffs, frame, t)?;
    Ok(covariant_from(rate, &y, frame))
}

/// [`covariant_derivative`] with coefficient derivatives by central
/// differences of step `h`.
pub fn covariant_derivative_fd(
    coeffs: &JacobiCoeffs,
    frame: &FrameBasis,
    t: f64,
    h: f64,
) -> Result<Vec<f64>> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter("finite-difference step must be positive"));
    }
    let d = central_differences(coeffs, frame, t, h)?;
    let y = eval_jacobi(coeffs, frame, t)?;
    Ok(covariant_from(d.first, &y, frame))
}

/// Which derivative [`derivative_relations_check`] uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Derivative {
    ClosedForm,
    CentralDifference(f64),
}

/// Checks `V' = −½W`, `W' = ½λ²V`, `X' = −½λY`, `Y' = ½λX` at `t`; returns
/// the largest coefficient residual (0 when there are no pairs).
pub fn derivative_relations_check(frame: &FrameBasis, t: f64, how: Derivative) -> Result<f64> {
    if let Derivative::CentralDifference(h) = how {
        if !(h > 0.0) {
            return Err(Error::InvalidParameter("finite-difference step must be positive"));
        }
    }
    let mut worst: f64 = 0.0;
    for j in 0..frame.m() {
        let l = frame.lambda(j);
        let relations = [
            (FieldKind::V(j), FieldKind::W(j), -0.5),
            (FieldKind::W(j), FieldKind::V(j), 0.5 * l * l),
            (FieldKind::X(j), FieldKind::Y(j), -0.5 * l),
            (FieldKind::Y(j), FieldKind::X(j), 0.5 * l),
        ];
        for (of, target, factor) in relations {
            let coeffs = &field(frame, of).coeffs;
            let lhs = match how {
                Derivative::ClosedForm => covariant_derivative(coeffs, frame, t)?,
                Derivative::CentralDifference(h) => covariant_derivative_fd(coeffs, frame, t, h)?,
            };
            let rhs = eval_jacobi(&field(frame, target).coeffs, frame, t)?;
            for (x, y) in lhs.iter().zip(&rhs) {
                worst = worst.max((x - factor * y).abs());
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_standard;
    use crate::spectral::{Frequency, SKEW_TOL};
    use core::f64::consts::PI;

    fn frame_for(q: usize, freqs: &[f64]) -> FrameBasis {
        let f: Vec<Frequency> = freqs.iter().map(|&value| Frequency { value, multiplicity: 1 }).collect();
        let spec = SpectralData::from_frequencies(q, &f).unwrap();
        let z = SkewMatrix::new(spec.reconstruct(), SKEW_TOL).unwrap();
        let n = z.frobenius_norm();
        FrameBasis::new(spec, vec![z.scaled(1.0 / n)])
    }

    fn heisenberg_frame() -> FrameBasis {
        let alg = make_standard(2, &[SkewMatrix::canonical(2, &[1.0]).unwrap()]).unwrap();
        FrameBasis::from_algebra(&alg, &[1.0], &SpectralTolerances::default()).unwrap()
    }

    #[test]
    fn zero_parameters_give_zero_field() {
        let fr = frame_for(5, &[1.0, 2.5]);
        let z = JacobiCoeffs::zero(&fr);
        for t in [0.0, 1.3, -7.0] {
            assert!(eval_jacobi(&z, &fr, t).unwrap().iter().all(|&x| x == 0.0));
        }
        assert_eq!(ode_residual(&z, &fr, 2.0, 1e-4).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_examples() {
        let fr = frame_for(2, &[1.0]);
        let x = field(&fr, FieldKind::X(0));
        assert_eq!(eval_jacobi(&x.coeffs, &fr, 0.0).unwrap(), vec![1.0, 0.0, 0.0]);

        let fr2 = frame_for(2, &[2.0]);
        let xi = field(&fr2, FieldKind::Xi(0));
        let v = eval_jacobi(&xi.coeffs, &fr2, PI).unwrap();
        assert!(v.iter().all(|x| x.abs() < 1e-15), "{v:?}");
    }

    #[test]
    fn basis_counts_and_shapes() {
        let fr = heisenberg_frame();
        assert_eq!((fr.r(), fr.m(), fr.s()), (0, 1, 1));
        assert_eq!(basis_fields(&fr).len(), 6);

        let w = field(&fr, FieldKind::W(0));
        let a = eval_jacobi(&w.coeffs, &fr, 0.0).unwrap();
        let b = eval_jacobi(&w.coeffs, &fr, 9.1).unwrap();
        assert_eq!(a, b);

        assert!(eval_jacobi(&JacobiCoeffs::default(), &fr, 0.0).is_err());
    }

    #[test]
    fn vanishing_fields() {
        let fr = frame_for(5, &[0.7, 1.9]);
        let vb = vanishing_basis(&fr);
        assert_eq!(vb.len(), fr.n());
        for f in &vb {
            assert!(eval_jacobi(&f.coeffs, &fr, 0.0).unwrap().iter().all(|x| x.abs() < 1e-15));
        }
        for j in 0..fr.m() {
            let t = 2.0 * PI / fr.lambda(j);
            let xi = field(&fr, FieldKind::Xi(j));
            assert!(eval_jacobi(&xi.coeffs, &fr, t).unwrap().iter().all(|x| x.abs() < 1e-14));
        }
        let ta = field(&fr, FieldKind::KernelLinear(0));
        let v = eval_jacobi(&ta.coeffs, &fr, 1.0).unwrap();
        assert_eq!(v[0], 1.0);
        assert!(v[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn endpoint_examples() {
        let fr = heisenberg_frame();
        let t = 2.0 * 2f64.sqrt() * PI;
        assert_eq!(endpoint_matrix(&fr, t, NULLITY_TOL).unwrap().nullity, 2);
        let small = 0.01 * 2.0 * PI / fr.lambda(0);
        assert_eq!(endpoint_matrix(&fr, small, NULLITY_TOL).unwrap().nullity, 0);

        let fr = frame_for(4, &[1.0, 2.0]);
        assert_eq!(endpoint_matrix(&fr, 2.0 * PI, NULLITY_TOL).unwrap().nullity, 4);
        assert_eq!(endpoint_matrix(&fr, PI, NULLITY_TOL).unwrap().nullity, 2);
        let e = endpoint_matrix(&fr, 1.0, NULLITY_TOL).unwrap();
        assert_eq!(e.nullity, 0);
        assert!(e.determinant.abs() > 1e-6);
    }

    #[test]
    fn residual_examples() {
        let fr = frame_for(6, &[0.5, 1.5, 4.0]);
        for f in basis_fields(&fr) {
            for t in [0.0, 3.3, 10.0] {
                assert!(ode_residual(&f.coeffs, &fr, t, 1e-4).unwrap() < 1e-6);
            }
        }
        let h = heisenberg_frame();
        for t in [0.0, 1.0, PI] {
            assert!(derivative_relations_check(&h, t, Derivative::ClosedForm).unwrap() < 1e-12);
            assert!(derivative_relations_check(&h, t, Derivative::CentralDifference(1e-5)).unwrap() < 1e-8);
        }
        let fr = frame_for(4, &[1.0, 2.0]);
        assert!(derivative_relations_check(&fr, 0.7, Derivative::CentralDifference(1e-5)).unwrap() < 1e-8);
        let flat = frame_for(3, &[]);
        assert_eq!(derivative_relations_check(&flat, 0.7, Derivative::ClosedForm).unwrap(), 0.0);
    }

    #[test]
    fn bad_step_rejected() {
        let fr = frame_for(2, &[1.0]);
        let z = JacobiCoeffs::zero(&fr);
        assert!(ode_residual(&z, &fr, 0.0, 0.0).is_err());
        assert!(derivative_relations_check(&fr, 0.0, Derivative::CentralDifference(-1.0)).is_err());
    }
}

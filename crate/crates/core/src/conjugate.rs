//! Conjugate values of central geodesics `γ_Z(t) = exp(tZ)`.
//!
//! `t > 0` is conjugate exactly when `t = 2πk/λ` for a frequency `λ` of
//! `j(Z)` and an integer `k ≥ 1`. Its multiplicity is `2 Σ m(λ)` over the
//! frequencies that reach `t`. A conjugate value is primitive when it is not an
//! integer multiple `≥ 2` of another one; there are at most `⌊q/2⌋` of them.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fmath::{floor, round};
use crate::spectral::SpectralData;

/// Absolute distance to the nearest integer for `λt/2π` and `λ′/λ`.
pub const INTEGER_TOL: f64 = 1e-7;
/// Relative tolerance for merging coincident conjugate values.
pub const MERGE_TOL: f64 = 1e-9;

const TAU: f64 = 2.0 * PI;

/// A frequency that produces a given conjugate value, `t = 2πk/λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contributor {
    pub lambda: f64,
    pub k: u64,
}

/// One conjugate value with its multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateValue {
    pub t: f64,
    pub mult: usize,
    pub contributors: Vec<Contributor>,
}

/// `(t, λ)` with `t = 2π/λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub t: f64,
    pub lambda: f64,
}

/// Entry of `c(Z, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CEntry {
    pub lambda: f64,
    pub multiplicity: usize,
    pub k: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateLocusReport {
    pub horizon: f64,
    pub values: Vec<ConjugateValue>,
    pub primitives: Vec<Primitive>,
    /// `P = ⌊q/2⌋`
    pub max_primitives: usize,
    pub maximal: bool,
}

fn nearest_integer(x: f64) -> (f64, f64) {
    let k = round(x);
    (k, (x - k).abs())
}

/// Frequencies with `λt/2π` within `tol` of a positive integer.
pub fn c_set(spec: &SpectralData, t: f64, tol: f64) -> Vec<CEntry> {
    if !(t > 0.0) {
        return Vec::new();
    }
    spec.frequencies
        .iter()
        .filter_map(|f| {
            let (k, dist) = nearest_integer(f.value * t / TAU);
            (k >= 1.0 && dist <= tol).then_some(CEntry {
                lambda: f.value,
                multiplicity: f.multiplicity,
                k: k as u64,
            })
        })
        .collect()
}

/// Every conjugate value in `(0, horizon]`, ascending, with multiplicities.
pub fn conjugate_values(spec: &SpectralData, horizon: f64, merge_tol: f64) -> Vec<ConjugateValue> {
    let mut raw: Vec<(f64, usize, Contributor)> = Vec::new();
    for f in &spec.frequencies {
        let kmax = floor(horizon * f.value / TAU * (1.0 + 1e-12)) as u64;
        for k in 1..=kmax {
            raw.push((TAU * k as f64 / f.value, f.multiplicity, Contributor { lambda: f.value, k }));
        }
    }
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut out: Vec<ConjugateValue> = Vec::new();
    for (t, m, c) in raw {
        match out.last_mut() {
            Some(last) if (t - last.t).abs() <= merge_tol * t.max(last.t) => {
                last.mult += 2 * m;
                last.contributors.push(c);
            }
            _ => out.push(ConjugateValue { t, mult: 2 * m, contributors: alloc::vec![c] }),
        }
    }
    out
}

/// `t = 2π/λ` for each frequency `λ` with no other frequency at an integer
/// multiple `≥ 2` of it. Ordered by ascending `λ`.
pub fn primitive_values(spec: &SpectralData, tol: f64) -> Vec<Primitive> {
    let freqs = spec.frequency_values();
    freqs
        .iter()
        .filter(|&&l| {
            !freqs.iter().any(|&other| {
                let (k, dist) = nearest_integer(other / l);
                k >= 2.0 && dist <= tol
            })
        })
        .map(|&l| Primitive { t: TAU / l, lambda: l })
        .collect()
}

/// `P = ⌊q/2⌋` distinct primitive conjugate values.
pub fn is_maximally_primitive(spec: &SpectralData, tol: f64) -> bool {
    let p = spec.dim / 2;
    let by_count = primitive_values(spec, tol).len() == p;
    let by_spectrum = spec.frequencies.len() == p
        && spec.frequencies.iter().all(|f| f.multiplicity == 1)
        && !has_integer_ratio(&spec.frequency_values(), tol);
    debug_assert_eq!(by_count, by_spectrum);
    by_count && by_spectrum
}

fn has_integer_ratio(freqs: &[f64], tol: f64) -> bool {
    freqs.iter().enumerate().any(|(a, &x)| {
        freqs.iter().enumerate().any(|(b, &y)| {
            let (k, dist) = nearest_integer(x / y);
            a != b && k >= 2.0 && dist <= tol
        })
    })
}

/// Recovers the frequencies `λ_k = 2π/t_k` from exactly `⌊q/2⌋` distinct
/// primitive values, ascending. For odd `q` the remaining eigenvalue is a
/// simple zero.
pub fn spectrum_from_primitives(primitives: &[f64], q: usize) -> Result<Vec<f64>> {
    let p = q / 2;
    if primitives.len() != p {
        return Err(Error::WrongCount { expected: p, found: primitives.len() });
    }
    if primitives.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
        return Err(Error::InvalidParameter("primitive values must be positive and finite"));
    }
    let mut lambdas: Vec<f64> = primitives.iter().map(|&t| TAU / t).collect();
    lambdas.sort_by(f64::total_cmp);
    if lambdas.windows(2).any(|w| (w[1] - w[0]).abs() <= MERGE_TOL * w[1]) {
        return Err(Error::InvalidParameter("primitive values must be distinct"));
    }
    Ok(lambdas)
}

/// Default horizon: three periods of the slowest frequency.
pub fn default_horizon(spec: &SpectralData) -> Option<f64> {
    spec.frequencies.first().map(|f| 3.0 * TAU / f.value)
}

/// Full report up to `horizon` (default: [`default_horizon`]). A zero matrix
/// gives an empty locus with horizon `0`.
pub fn locus_report(spec: &SpectralData, horizon: Option<f64>, tol: f64) -> ConjugateLocusReport {
    let horizon = horizon.or_else(|| default_horizon(spec)).unwrap_or(0.0);
    ConjugateLocusReport {
        horizon,
        values: conjugate_values(spec, horizon, MERGE_TOL),
        primitives: primitive_values(spec, tol),
        max_primitives: spec.dim / 2,
        maximal: is_maximally_primitive(spec, tol),
    }
}

//! Serializable reports. Each one embeds the effective configuration that
//! produced it and parses back to an equal value.

use conjloc_core::algebra::WeakConjugacy;
use conjloc_core::conjugate::ConjugateLocusReport;
use conjloc_core::genericity::GenericityReport;
use conjloc_core::spectral::SpectralData;
use serde::{Deserialize, Serialize};

use crate::csv;

/// Every flag value in force for a run, defaults included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveConfig {
    pub command: String,
    pub inputs: Vec<String>,
    pub seed: u64,
    pub horizon: Option<f64>,
    pub tol_group: f64,
    pub tol_kernel: f64,
    pub tol_integer: f64,
    pub tol_nullity: f64,
    pub tol_charpoly: f64,
    pub samples: Option<usize>,
    pub dir_samples: Option<usize>,
    pub points: Option<usize>,
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub mode: String,
    pub format: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyDto {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContributorDto {
    pub lambda: f64,
    pub k: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugateValueDto {
    pub t: f64,
    pub mult: usize,
    pub contributors: Vec<ContributorDto>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimitiveDto {
    pub t: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BadRatioDto {
    pub larger: f64,
    pub smaller: f64,
    pub m: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenericityDto {
    pub exact: bool,
    pub distinct: bool,
    pub bad_ratios: Vec<BadRatioDto>,
    pub m_max_tested: u64,
    pub member: bool,
    /// Exact characteristic polynomial, ascending coefficients, exact mode only.
    pub char_poly: Option<Vec<String>>,
    /// Exact discriminant of the characteristic polynomial, exact mode only.
    pub discriminant: Option<String>,
}

impl From<&GenericityReport> for GenericityDto {
    fn from(r: &GenericityReport) -> Self {
        Self {
            exact: r.exact,
            distinct: r.distinct,
            bad_ratios: r
                .bad_ratios
                .iter()
                .map(|b| BadRatioDto { larger: b.larger, smaller: b.smaller, m: b.m })
                .collect(),
            m_max_tested: r.m_max_tested,
            member: r.member(),
            char_poly: None,
            discriminant: None,
        }
    }
}

pub fn frequencies(spec: &SpectralData) -> Vec<FrequencyDto> {
    spec.frequencies
        .iter()
        .map(|f| FrequencyDto { value: f.value, multiplicity: f.multiplicity })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub config: EffectiveConfig,
    pub q: usize,
    pub frequencies: Vec<FrequencyDto>,
    pub kernel_dim: usize,
    /// `M`, the number of oscillating frame pairs.
    pub pair_count: usize,
    pub norm: f64,
    pub ricci: f64,
    pub first_conjugate: Option<f64>,
    pub summary: String,
    pub primitives: Vec<PrimitiveDto>,
    pub max_primitives: usize,
    pub maximal: bool,
    pub genericity: GenericityDto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocusReport {
    pub config: EffectiveConfig,
    pub horizon: f64,
    pub values: Vec<ConjugateValueDto>,
    pub primitives: Vec<PrimitiveDto>,
    pub max_primitives: usize,
    pub maximal: bool,
}

impl LocusReport {
    pub fn new(config: EffectiveConfig, r: &ConjugateLocusReport) -> Self {
        Self {
            config,
            horizon: r.horizon,
            values: r
                .values
                .iter()
                .map(|v| ConjugateValueDto {
                    t: v.t,
                    mult: v.mult,
                    contributors: v
                        .contributors
                        .iter()
                        .map(|c| ContributorDto { lambda: c.lambda, k: c.k })
                        .collect(),
                })
                .collect(),
            primitives: r.primitives.iter().map(|p| PrimitiveDto { t: p.t, lambda: p.lambda }).collect(),
            max_primitives: r.max_primitives,
            maximal: r.maximal,
        }
    }

    pub fn to_csv(&self) -> String {
        csv::table(
            &["t", "mult", "primitive", "contributors"],
            self.values.iter().map(|v| {
                let primitive = self.primitives.iter().any(|p| p.t == v.t && v.contributors.iter().any(|c| c.k == 1 && c.lambda == p.lambda));
                let contributors: Vec<String> =
                    v.contributors.iter().map(|c| format!("{}:{}", csv::num(c.lambda), c.k)).collect();
                vec![csv::num(v.t), v.mult.to_string(), u8::from(primitive).to_string(), contributors.join(";")]
            }),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub t: f64,
    /// `true` for the predicted conjugate values, `false` for grid points.
    pub conjugate: bool,
    pub expected_nullity: usize,
    pub nullity: usize,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub determinant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiScan {
    pub config: EffectiveConfig,
    pub horizon: f64,
    pub rows: Vec<ScanRow>,
    pub mismatches: usize,
}

impl JacobiScan {
    pub fn to_csv(&self) -> String {
        csv::table(
            &["t", "conjugate", "expected_nullity", "nullity", "sigma_min", "sigma_max", "determinant"],
            self.rows.iter().map(|r| {
                vec![
                    csv::num(r.t),
                    u8::from(r.conjugate).to_string(),
                    r.expected_nullity.to_string(),
                    r.nullity.to_string(),
                    csv::num(r.sigma_min),
                    csv::num(r.sigma_max),
                    csv::num(r.determinant),
                ]
            }),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenericityFileReport {
    pub config: EffectiveConfig,
    #[serde(flatten)]
    pub report: GenericityDto,
}

impl GenericityFileReport {
    pub fn to_csv(&self) -> String {
        csv::table(
            &["larger", "smaller", "m"],
            self.report
                .bad_ratios
                .iter()
                .map(|b| vec![csv::num(b.larger), csv::num(b.smaller), b.m.to_string()]),
        )
    }
}

/// Monte Carlo result for `sample` and `measure`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionReport {
    pub config: EffectiveConfig,
    /// `joint`, `planes` or `directions`.
    pub estimator: String,
    pub fraction: f64,
    pub samples: usize,
    pub seed: u64,
    pub p: usize,
    pub q: usize,
    #[serde(skip)]
    pub verdicts: Vec<bool>,
}

impl FractionReport {
    pub fn to_csv(&self) -> String {
        csv::table(
            &["index", "generic"],
            self.verdicts.iter().enumerate().map(|(i, &v)| vec![i.to_string(), u8::from(v).to_string()]),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub config: EffectiveConfig,
    /// `consistent` or `refuted`.
    pub verdict: String,
    pub tested: usize,
    pub coords: Option<Vec<f64>>,
    pub witness: Option<Vec<Vec<f64>>>,
    pub image: Option<Vec<Vec<f64>>>,
    pub discrepancy: Option<f64>,
}

impl CompareReport {
    pub fn new(config: EffectiveConfig, v: &WeakConjugacy) -> Self {
        match v {
            WeakConjugacy::Consistent { tested } => Self {
                config,
                verdict: "consistent".into(),
                tested: *tested,
                coords: None,
                witness: None,
                image: None,
                discrepancy: None,
            },
            WeakConjugacy::Refuted { coords, witness, image, discrepancy, tested } => Self {
                config,
                verdict: "refuted".into(),
                tested: *tested,
                coords: Some(coords.clone()),
                witness: Some(witness.matrix().to_rows()),
                image: Some(image.matrix().to_rows()),
                discrepancy: Some(*discrepancy),
            },
        }
    }

    pub fn to_csv(&self) -> String {
        csv::table(
            &["verdict", "tested", "discrepancy"],
            [vec![
                self.verdict.clone(),
                self.tested.to_string(),
                self.discrepancy.map(csv::num).unwrap_or_default(),
            ]],
        )
    }
}

//! Command-line interface and subcommand implementations.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use conjloc_core::algebra::{make_standard, weak_conjugacy_compare, CHARPOLY_TOL};
use conjloc_core::conjugate::{conjugate_values, default_horizon, locus_report, INTEGER_TOL, MERGE_TOL};
use conjloc_core::genericity::{char_poly_exact, discriminant, o_membership_exact, o_membership_float};
use conjloc_core::grassmann::{self, SamplerConfig};
use conjloc_core::jacobi::{endpoint_matrix, FrameBasis, NULLITY_TOL};
use conjloc_core::linalg::Matrix;
use conjloc_core::spectral::{ricci_central, spectral_decompose, SkewMatrix, SpectralTolerances, GROUP_TOL, KERNEL_TOL};
use serde::Serialize;

use crate::io;
use crate::report::{
    frequencies, AnalyzeReport, CompareReport, EffectiveConfig, FractionReport, GenericityDto,
    GenericityFileReport, JacobiScan, LocusReport, PrimitiveDto, ScanRow,
};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "conjloc", version, about = "Conjugate loci of central geodesics in 2-step nilpotent Lie groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for every random stream.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Report format (default: csv for jacobi-verify, json otherwise).
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Relative tolerance for grouping equal frequencies.
    #[arg(long, default_value_t = GROUP_TOL, global = true)]
    pub tol_group: f64,
    /// Relative threshold below which eigenvalues of ZᵀZ count as zero.
    #[arg(long, default_value_t = KERNEL_TOL, global = true)]
    pub tol_kernel: f64,
    /// Distance to the nearest integer accepted for λt/2π and frequency ratios.
    #[arg(long, default_value_t = INTEGER_TOL, global = true)]
    pub tol_integer: f64,
    /// Relative singular-value threshold for the endpoint-matrix nullity.
    #[arg(long, default_value_t = NULLITY_TOL, global = true)]
    pub tol_nullity: f64,
    /// Scaled coefficient tolerance of the weak-conjugacy comparator.
    #[arg(long, default_value_t = CHARPOLY_TOL, global = true)]
    pub tol_charpoly: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectral data, Ricci term and genericity summary for one matrix.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Float)]
        mode: ModeArg,
        #[command(flatten)]
        common: Common,
    },
    /// Conjugate values, multiplicities and primitive values up to a horizon.
    Locus {
        #[arg(long)]
        input: PathBuf,
        /// Default: three periods of the slowest frequency.
        #[arg(long)]
        horizon: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Endpoint-matrix nullity on a time grid and at every predicted conjugate value.
    JacobiVerify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        horizon: Option<f64>,
        /// Number of grid points in (0, horizon].
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Membership in the generic set O, exact or floating.
    Genericity {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo over random planes: fraction of sampled (W, Z) pairs with
    /// Z generic, or with --dir-samples the fraction of planes meeting O.
    Sample {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long)]
        dir_samples: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Fraction of random unit directions in a given plane that are generic.
    Measure {
        /// Algebra file describing W.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Sampled weak-conjugacy test of φ: W₁ → W₂.
    Compare {
        /// Two algebra files, W₁ then W₂.
        #[arg(long, num_args = 2, required = true)]
        input: Vec<PathBuf>,
        /// p×p coordinate map (default: identity).
        #[arg(long)]
        phi: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
}

impl Common {
    fn validate(&self) -> Result<(), CliError> {
        for (name, v) in [
            ("--tol-group", self.tol_group),
            ("--tol-kernel", self.tol_kernel),
            ("--tol-integer", self.tol_integer),
            ("--tol-nullity", self.tol_nullity),
            ("--tol-charpoly", self.tol_charpoly),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Input(format!("{name}: must be positive, got {v}")));
            }
        }
        Ok(())
    }

    fn spectral(&self) -> SpectralTolerances {
        SpectralTolerances { group: self.tol_group, kernel: self.tol_kernel, ..SpectralTolerances::default() }
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn config(&self, command: &str, inputs: &[&Path], default: Format) -> EffectiveConfig {
        EffectiveConfig {
            command: command.into(),
            inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
            seed: self.seed,
            horizon: None,
            tol_group: self.tol_group,
            tol_kernel: self.tol_kernel,
            tol_integer: self.tol_integer,
            tol_nullity: self.tol_nullity,
            tol_charpoly: self.tol_charpoly,
            samples: None,
            dir_samples: None,
            points: None,
            p: None,
            q: None,
            mode: "float".into(),
            format: match self.format_or(default) {
                Format::Json => "json".into(),
                Format::Csv => "csv".into(),
            },
        }
    }
}

/// Result of one run: the bytes to write and where.
pub struct Output {
    pub text: String,
    pub path: Option<PathBuf>,
}

impl Output {
    pub fn emit(&self) -> Result<(), CliError> {
        match &self.path {
            Some(p) => fs::write(p, &self.text)
                .map_err(|e| CliError::Input(format!("--output {}: {e}", p.display()))),
            None => std::io::stdout()
                .write_all(self.text.as_bytes())
                .map_err(|e| CliError::Input(format!("stdout: {e}"))),
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn render<T: Serialize>(format: Format, value: &T, csv: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => json(value),
        Format::Csv => csv(),
    }
}

fn positive_horizon(h: Option<f64>) -> Result<Option<f64>, CliError> {
    match h {
        Some(h) if !(h > 0.0 && h.is_finite()) => {
            Err(CliError::Input(format!("--horizon: must be positive, got {h}")))
        }
        h => Ok(h),
    }
}

fn at_least_one(name: &str, n: usize) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Input(format!("{name}: must be at least 1")));
    }
    Ok(())
}

/// Frame for `Z` viewed as the central element of the `p = 1` algebra spanned
/// by `Z`; a zero matrix gets the frame of the whole of `ℝ^q` as kernel.
fn single_frame(z: &SkewMatrix, tol: &SpectralTolerances) -> Result<FrameBasis, CliError> {
    let n = z.frobenius_norm();
    if n == 0.0 {
        return Ok(FrameBasis::new(spectral_decompose(z, tol)?, Vec::new()));
    }
    let alg = make_standard(z.dim(), &[z.scaled(1.0 / n)])?;
    Ok(FrameBasis::from_algebra(&alg, &[n], tol)?)
}

pub fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Analyze { input, mode, common } => analyze(&input, mode, &common),
        Command::Locus { input, horizon, common } => locus(&input, horizon, &common),
        Command::JacobiVerify { input, horizon, points, common } => jacobi_verify(&input, horizon, points, &common),
        Command::Genericity { input, mode, common } => genericity_cmd(&input, mode, &common),
        Command::Sample { p, q, samples, dir_samples, common } => sample(p, q, samples, dir_samples, &common),
        Command::Measure { input, samples, common } => measure(&input, samples, &common),
        Command::Compare { input, phi, samples, common } => compare(&input, phi.as_deref(), samples, &common),
    }
}

fn genericity_dto(input: &Path, z: &SkewMatrix, mode: ModeArg, common: &Common) -> Result<GenericityDto, CliError> {
    match mode {
        ModeArg::Float => Ok(GenericityDto::from(&o_membership_float(z, common.tol_integer, &common.spectral())?)),
        ModeArg::Exact => {
            let zr = io::read_rational_skew(input)?;
            let mut dto = GenericityDto::from(&o_membership_exact(&zr, &common.spectral())?);
            let cp = char_poly_exact(&zr);
            dto.char_poly = Some(cp.coeffs().iter().map(ToString::to_string).collect());
            dto.discriminant = Some(discriminant(&cp)?.to_string());
            Ok(dto)
        }
    }
}

fn mode_name(mode: ModeArg) -> String {
    match mode {
        ModeArg::Exact => "exact".into(),
        ModeArg::Float => "float".into(),
    }
}

pub fn analyze(input: &Path, mode: ModeArg, common: &Common) -> Result<Output, CliError> {
    common.validate()?;
    let z = io::read_skew(input)?;
    let spec = spectral_decompose(&z, &common.spectral())?;
    let locus = locus_report(&spec, None, common.tol_integer);
    let first_conjugate = locus.values.first().map(|v| v.t);
    let summary = match first_conjugate {
        None => "no conjugate points".to_string(),
        Some(t) => format!("first conjugate value at t = {t}"),
    };
    let mut config = common.config("analyze", &[input], Format::Json);
    config.mode = mode_name(mode);
    config.q = Some(z.dim());
    let report = AnalyzeReport {
        q: z.dim(),
        frequencies: frequencies(&spec),
        kernel_dim: spec.kernel_dim(),
        pair_count: spec.pair_count(),
        norm: spec.norm,
        ricci: ricci_central(&z),
        first_conjugate,
        summary,
        primitives: locus.primitives.iter().map(|p| PrimitiveDto { t: p.t, lambda: p.lambda }).collect(),
        max_primitives: locus.max_primitives,
        maximal: locus.maximal,
        genericity: genericity_dto(input, &z, mode, common)?,
        config,
    };
    let text = render(common.format_or(Format::Json), &report, || {
        crate::csv::table(
            &["value", "multiplicity"],
            report.frequencies.iter().map(|f| vec![crate::csv::num(f.value), f.multiplicity.to_string()]),
        )
    });
    Ok(Output { text, path: common.output.clone() })
}

pub fn locus(input: &Path, horizon: Option<f64>, common: &Common) -> Result<Output, CliError> {
    common.validate()?;
    let horizon = positive_horizon(horizon)?;
    let z = io::read_skew(input)?;
    let spec = spectral_decompose(&z, &common.spectral())?;
    let r = locus_report(&spec, horizon, common.tol_integer);
    let mut config = common.config("locus", &[input], Format::Json);
    config.horizon = Some(r.horizon);
    config.q = Some(z.dim());
    let report = LocusReport::new(config, &r);
    let text = render(common.format_or(Format::Json), &report, || report.to_csv());
    Ok(Output { text, path: common.output.clone() })
}

pub fn jacobi_verify(input: &Path, horizon: Option<f64>, points: usize, common: &Common) -> Result<Output, CliError> {
    common.validate()?;
    at_least_one("--points", points)?;
    let horizon = positive_horizon(horizon)?;
    let z = io::read_skew(input)?;
    let frame = single_frame(&z, &common.spectral())?;
    let horizon = horizon.or_else(|| default_horizon(&frame.spec)).unwrap_or(1.0);
    let predicted = conjugate_values(&frame.spec, horizon, MERGE_TOL);

    let expected_at = |t: f64| -> usize {
        conjloc_core::conjugate::c_set(&frame.spec, t, common.tol_integer)
            .iter()
            .map(|e| 2 * e.multiplicity)
            .sum()
    };
    let mut samples: Vec<(f64, bool)> =
        (1..=points).map(|i| (horizon * i as f64 / points as f64, false)).collect();
    samples.extend(predicted.iter().map(|v| (v.t, true)));
    samples.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut rows = Vec::with_capacity(samples.len());
    let mut mismatches = 0;
    for (t, conjugate) in samples {
        let e = endpoint_matrix(&frame, t, common.tol_nullity)?;
        let expected_nullity = expected_at(t);
        // Grid points that are not themselves conjugate values are only
        // checked for a trivial kernel.
        if e.nullity != expected_nullity {
            mismatches += 1;
        }
        rows.push(ScanRow {
            t,
            conjugate,
            expected_nullity,
            nullity: e.nullity,
            sigma_min: e.singular_values.last().copied().unwrap_or(0.0),
            sigma_max: e.singular_values.first().copied().unwrap_or(0.0),
            determinant: e.determinant,
        });
    }
    let mut config = common.config("jacobi-verify", &[input], Format::Csv);
    config.horizon = Some(horizon);
    config.points = Some(points);
    config.q = Some(z.dim());
    let report = JacobiScan { config, horizon, rows, mismatches };
    let text = render(common.format_or(Format::Csv), &report, || report.to_csv());
    if mismatches > 0 {
        let out = Output { text, path: common.output.clone() };
        out.emit()?;
        return Err(CliError::Numerical(format!(
            "endpoint-matrix nullity disagrees with the predicted multiplicity at {mismatches} time(s)"
        )));
    }
    Ok(Output { text, path: common.output.clone() })
}

pub fn genericity_cmd(input: &Path, mode: ModeArg, common: &Common) -> Result<Output, CliError> {
    common.validate()?;
    let z = io::read_skew(input)?;
    let mut config = common.config("genericity", &[input], Format::Json);
    config.mode = mode_name(mode);
    config.q = Some(z.dim());
    let report = GenericityFileReport { report: genericity_dto(input, &z, mode, common)?, config };
    let text = render(common.format_or(Format::Json), &report, || report.to_csv());
    Ok(Output { text, path: common.output.clone() })
}

pub fn sample(p: usize, q: usize, samples: usize, dir_samples: Option<usize>, common: &Common) -> Result<Output, CliError> {
    common.validate()?;
    let cfg = SamplerConfig { seed: common.seed, p, q, samples };
    cfg.validate()?;
    let (estimator, verdicts) = match dir_samples {
        Some(d) => {
            at_least_one("--dir-samples", d)?;
            ("planes", grassmann::plane_verdicts(&cfg, d, common.tol_integer)?)
        }
        None => ("joint", grassmann::joint_verdicts(&cfg, common.tol_integer)?),
    };
    let mut config = common.config("sample", &[], Format::Json);
    config.samples = Some(samples);
    config.dir_samples = dir_samples;
    config.p = Some(p);
    config.q = Some(q);
    let report = FractionReport {
        config,
        estimator: estimator.into(),
        fraction: grassmann::fraction(&verdicts),
        samples,
        seed: common.seed,
        p,
        q,
        verdicts,
    };
    let text = render(common.format_or(Format::Json), &report, || report.to_csv());
    Ok(Output { text, path: common.output.clone() })
}

pub fn measure(input: &Path, samples: usize, common: &Common) -> Result<Output, CliError> {
    common.validate()?;
    at_least_one("--samples", samples)?;
    let w = io::read_algebra(input)?;
    let verdicts = grassmann::direction_verdicts(&w, samples, common.seed, common.tol_integer)?;
    let mut config = common.config("measure", &[input], Format::Json);
    config.samples = Some(samples);
    config.p = Some(w.p());
    config.q = Some(w.q());
    let report = FractionReport {
        config,
        estimator: "directions".into(),
        fraction: grassmann::fraction(&verdicts),
        samples,
        seed: common.seed,
        p: w.p(),
        q: w.q(),
        verdicts,
    };
    let text = render(common.format_or(Format::Json), &report, || report.to_csv());
    Ok(Output { text, path: common.output.clone() })
}

pub fn compare(inputs: &[PathBuf], phi: Option<&Path>, samples: usize, common: &Common) -> Result<Output, CliError> {
    common.validate()?;
    let [a, b] = inputs else {
        return Err(CliError::Input("--input: compare needs exactly two algebra files".into()));
    };
    let w1 = io::read_algebra(a)?;
    let w2 = io::read_algebra(b)?;
    let phi_m = match phi {
        Some(p) => io::read_phi(p)?,
        None => Matrix::identity(w1.p()),
    };
    let v = weak_conjugacy_compare(&w1, &w2, &phi_m, samples, common.seed, common.tol_charpoly)?;
    let mut paths: Vec<&Path> = vec![a.as_path(), b.as_path()];
    if let Some(p) = phi {
        paths.push(p);
    }
    let mut config = common.config("compare", &paths, Format::Json);
    config.samples = Some(samples);
    config.p = Some(w1.p());
    config.q = Some(w1.q());
    let report = CompareReport::new(config, &v);
    let text = render(common.format_or(Format::Json), &report, || report.to_csv());
    Ok(Output { text, path: common.output.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn defaults_are_the_library_defaults() {
        let cli = Cli::parse_from(["conjloc", "locus", "--input", "z.json"]);
        let Command::Locus { common, horizon, .. } = cli.command else { panic!("wrong subcommand") };
        assert_eq!(horizon, None);
        assert_eq!(common.tol_group, GROUP_TOL);
        assert_eq!(common.tol_integer, INTEGER_TOL);
        assert_eq!(common.tol_nullity, NULLITY_TOL);
        assert_eq!(common.seed, 0);
        assert_eq!(common.format_or(Format::Json), Format::Json);
    }

    #[test]
    fn error_classes_map_to_exit_codes() {
        use conjloc_core::Error;
        assert_eq!(CliError::from(Error::DegenerateFrame("x")).exit_code(), 2);
        assert_eq!(CliError::from(Error::SingularPhi).exit_code(), 1);
        assert_eq!(CliError::from(Error::DegenerateDraw { attempts: 8 }).exit_code(), 2);
    }
}

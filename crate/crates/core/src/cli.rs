//! The `hulam` command line.
//!
//! Exit codes: 0 when a command completes with a verdict, 2 when the verdict is
//! Undetermined, 1 on any error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::classify::{classify, Criterion, HorizonConfig, StabilityVerdict, Status};
use crate::dynamics::{iterate, shadow_contracting, shadow_expanding, PerturbedOrbit, Shadow, ShadowKind};
use crate::error::{Error, Result};
use crate::products::build_ledger;
use crate::sequences::{builtin_example, CoefficientSpec, Complex, ExampleParams, BUILTIN_NAMES};
use crate::witness::{run_witness, witness_template, PerturbationPlan};

/// Largest extrapolated tail accepted by the expanding shadow.
pub const TAIL_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "hulam", version, about = "Hyers-Ulam stability of z_{n+1} = a_n z_n + b_n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a coefficient spec and print the verdict.
    Classify {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        horizon: HorizonArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Iterate the recursion, optionally with seeded random perturbations.
    Simulate {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        horizon: HorizonArgs,
        #[command(flatten)]
        noise: NoiseArgs,
        /// Starting value, `re` or `re,im`.
        #[arg(long, default_value = "0", value_parser = parse_complex, allow_hyphen_values = true)]
        z1: Complex,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Shadow a randomly perturbed orbit and compare with the tracking bound.
    Shadow {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        horizon: HorizonArgs,
        #[command(flatten)]
        noise: NoiseArgs,
        /// Starting value of the perturbed orbit.
        #[arg(long, default_value = "0", value_parser = parse_complex, allow_hyphen_values = true)]
        w1: Complex,
        /// Run even when the spec is not classified Stable.
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the instability witness and report the best-shadow divergence.
    Witness {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        horizon: HorizonArgs,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, default_value = "0", value_parser = parse_complex, allow_hyphen_values = true)]
        w1: Complex,
        /// Run even when the spec is classified Stable.
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print built-in specs as loadable JSON.
    Examples {
        /// Print one example instead of all of them.
        #[arg(long)]
        builtin: Option<String>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// Built-in example name.
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    pub builtin: Option<String>,
    /// Path to a JSON spec.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 3)]
    pub period: usize,
    #[arg(long, default_value = "1", value_parser = parse_complex, allow_hyphen_values = true)]
    pub a: Complex,
    #[arg(long, default_value = "0", value_parser = parse_complex, allow_hyphen_values = true)]
    pub b: Complex,
}

impl ParamArgs {
    fn example_params(&self) -> ExampleParams {
        ExampleParams {
            alpha: self.alpha,
            period: self.period,
            a: self.a,
            b: self.b,
        }
    }
}

#[derive(Debug, Args, Clone, Copy)]
pub struct HorizonArgs {
    #[arg(long, default_value_t = 10_000)]
    pub horizon: usize,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.02)]
    pub band: f64,
    #[arg(long, default_value_t = 0.5)]
    pub window: f64,
}

impl HorizonArgs {
    fn config(&self) -> HorizonConfig {
        HorizonConfig {
            horizon: self.horizon,
            window: self.window,
            band: self.band,
            delta: self.delta,
        }
    }
}

#[derive(Debug, Args, Clone, Copy)]
pub struct NoiseArgs {
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `re` or `re,im`.
pub fn parse_complex(text: &str) -> std::result::Result<Complex, String> {
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
    match text.split_once(',') {
        Some((re, im)) => Ok(Complex::new(parse(re)?, parse(im)?)),
        None => Ok(Complex::new(parse(text)?, 0.0)),
    }
}

fn io_error(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

fn load_spec(args: &SpecArgs) -> Result<CoefficientSpec> {
    match (&args.builtin, &args.spec) {
        (Some(name), None) => builtin_example(name, &args.params.example_params()),
        (None, Some(path)) => CoefficientSpec::from_json(&fs::read_to_string(path).map_err(io_error)?),
        _ => Err(Error::InvalidConfig("give exactly one of --builtin and --spec".into())),
    }
}

fn check_run(horizon: usize, epsilon: f64) -> Result<()> {
    if horizon < 2 {
        return Err(Error::HorizonTooSmall { got: horizon, need: 2 });
    }
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidConfig(format!("epsilon must be finite and >= 0, got {epsilon}")));
    }
    Ok(())
}

/// `epsilon u` with `u` uniform on the closed unit disc, one draw per `r_1..r_{len-1}`.
pub fn random_perturbations(epsilon: f64, seed: u64, len: usize) -> Vec<Complex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (1..len)
        .map(|_| {
            let radius = rng.gen_range(0.0..=1.0f64).sqrt();
            let angle = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = Complex::from_polar(epsilon * radius, angle);
            if r.norm() > epsilon {
                r * (epsilon / r.norm())
            } else {
                r
            }
        })
        .collect()
}

fn complex_json(z: Complex) -> serde_json::Value {
    json!([z.re, z.im])
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

fn emit(output: &OutputArgs, text: &[u8], stdout: &mut dyn Write) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(io_error),
        None => stdout.write_all(text).map_err(io_error),
    }
}

fn exit_code(verdict: &StabilityVerdict) -> i32 {
    if verdict.status == Status::Undetermined {
        2
    } else {
        0
    }
}

fn cmd_classify(spec: &SpecArgs, horizon: &HorizonArgs, output: &OutputArgs, stdout: &mut dyn Write) -> Result<i32> {
    let spec = load_spec(spec)?;
    let cfg = horizon.config();
    let verdict = classify(&spec, &cfg)?;
    let text = match output.format {
        Format::Json => to_pretty(&verdict).into_bytes(),
        Format::Csv => {
            let mut buf = Vec::new();
            build_ledger(&spec, cfg.horizon)?.write_csv(&mut buf).map_err(io_error)?;
            buf
        }
    };
    emit(output, &text, stdout)?;
    Ok(exit_code(&verdict))
}

fn orbit_csv(z: &[Complex], w: &[Complex]) -> Result<Vec<u8>> {
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(["n", "re_z", "im_z", "re_w", "im_w", "abs_diff", "log10_abs_diff"])
        .map_err(io_error)?;
    for (i, (z, w)) in z.iter().zip(w).enumerate() {
        let d = (w - z).norm();
        out.write_record([
            (i + 1).to_string(),
            z.re.to_string(),
            z.im.to_string(),
            w.re.to_string(),
            w.im.to_string(),
            d.to_string(),
            d.log10().to_string(),
        ])
        .map_err(io_error)?;
    }
    out.into_inner().map_err(io_error)
}

fn cmd_simulate(
    spec: &SpecArgs,
    horizon: &HorizonArgs,
    noise: &NoiseArgs,
    z1: Complex,
    output: &OutputArgs,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let spec = load_spec(spec)?;
    let len = horizon.horizon;
    check_run(len, noise.epsilon)?;
    let clean = iterate(&spec, z1, len)?;
    let r = random_perturbations(noise.epsilon, noise.seed, len);
    let orbit = PerturbedOrbit::generate(&spec, z1, r, noise.epsilon)?;
    let text = match output.format {
        Format::Csv => orbit_csv(clean.values(), orbit.values())?,
        Format::Json => {
            let sup_diff = clean
                .values()
                .iter()
                .zip(orbit.values())
                .map(|(z, w)| (w - z).norm())
                .fold(0.0, f64::max);
            let sup_abs = clean.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
            to_pretty(&json!({
                "horizon": len,
                "z1": complex_json(z1),
                "epsilon": noise.epsilon,
                "seed": noise.seed,
                "final_z": complex_json(clean.at(len)),
                "final_w": complex_json(orbit.at(len)),
                "sup_abs_z": sup_abs,
                "sup_abs_diff": sup_diff,
            }))
            .into_bytes()
        }
    };
    emit(output, &text, stdout)?;
    Ok(0)
}

fn build_shadow(
    spec: &CoefficientSpec,
    orbit: &PerturbedOrbit,
    verdict: &StabilityVerdict,
    force: bool,
) -> Result<Shadow> {
    let expanding = verdict.criterion.is_some_and(Criterion::is_expanding);
    if !expanding {
        return shadow_contracting(orbit, spec);
    }
    let ledger = build_ledger(spec, orbit.len())?;
    match shadow_expanding(orbit, spec, &ledger, TAIL_TOL) {
        Err(Error::TailNotConvergent { .. }) if force => shadow_contracting(orbit, spec),
        other => other,
    }
}

fn shadow_csv(shadow: &Shadow, orbit: &PerturbedOrbit) -> Result<Vec<u8>> {
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(["n", "re_z", "im_z", "re_w", "im_w", "abs_diff", "log10_abs_diff"])
        .map_err(io_error)?;
    for n in 1..=orbit.len() {
        let (z, w) = (shadow.trajectory.at(n), orbit.at(n));
        out.write_record([
            n.to_string(),
            z.re.to_string(),
            z.im.to_string(),
            w.re.to_string(),
            w.im.to_string(),
            shadow.errors.abs(n).to_string(),
            shadow.errors.log10(n).to_string(),
        ])
        .map_err(io_error)?;
    }
    out.into_inner().map_err(io_error)
}

fn cmd_shadow(
    spec: &SpecArgs,
    horizon: &HorizonArgs,
    noise: &NoiseArgs,
    w1: Complex,
    force: bool,
    output: &OutputArgs,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let spec = load_spec(spec)?;
    let cfg = horizon.config();
    check_run(cfg.horizon, noise.epsilon)?;
    let verdict = classify(&spec, &cfg)?;
    if verdict.status != Status::Stable && !force {
        return Err(Error::NotStable);
    }
    let len = cfg.horizon;
    let r = random_perturbations(noise.epsilon, noise.seed, len);
    let orbit = PerturbedOrbit::generate(&spec, w1, r, noise.epsilon)?;
    let shadow = build_shadow(&spec, &orbit, &verdict, force)?;

    let text = match output.format {
        Format::Csv => shadow_csv(&shadow, &orbit)?,
        Format::Json => {
            let sup = shadow.errors.sup();
            let bound = verdict.constant.map(|c| c * noise.epsilon);
            let truncation = shadow.tail.map_or(0.0, |t| t.truncation_bound);
            to_pretty(&json!({
                "status": verdict.status,
                "criterion": verdict.criterion,
                "construction": shadow.kind,
                "horizon": len,
                "epsilon": noise.epsilon,
                "seed": noise.seed,
                "w1": complex_json(w1),
                "z1": complex_json(shadow.trajectory.z1()),
                "constant": verdict.constant,
                "bound": bound,
                "sup_error": sup,
                "log10_sup_error": shadow.errors.log10_sup(),
                "bound_satisfied": bound.map(|b| sup <= b + truncation),
                "residual_mismatch": match shadow.kind {
                    ShadowKind::Contracting => Some(shadow.residual_mismatch),
                    ShadowKind::Expanding => None,
                },
                "tail": shadow.tail,
            }))
            .into_bytes()
        }
    };
    emit(output, &text, stdout)?;
    Ok(exit_code(&verdict))
}

#[allow(clippy::too_many_arguments)]
fn cmd_witness(
    spec: &SpecArgs,
    horizon: &HorizonArgs,
    epsilon: f64,
    w1: Complex,
    force: bool,
    output: &OutputArgs,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let spec = load_spec(spec)?;
    let cfg = horizon.config();
    check_run(cfg.horizon, epsilon)?;
    let verdict = classify(&spec, &cfg)?;
    let template = match verdict.witness {
        Some(template) => template,
        None if force => witness_template(&spec, &build_ledger(&spec, cfg.horizon)?, None)?,
        None => {
            let name = verdict.criterion.map_or("undetermined", Criterion::name);
            return Err(Error::NotUnstable(name.to_string()));
        }
    };
    let plan = PerturbationPlan::new(template, epsilon)?;
    let (_, curve) = run_witness(&spec, &plan, w1, cfg.horizon)?;

    let text = match output.format {
        Format::Csv => {
            let mut buf = Vec::new();
            curve.write_csv(&mut buf).map_err(io_error)?;
            buf
        }
        Format::Json => to_pretty(&json!({
            "status": verdict.status,
            "criterion": verdict.criterion,
            "plan": plan,
            "horizon": cfg.horizon,
            "w1": complex_json(w1),
            "divergence": curve.last().map(|p| p.value),
            "growth_factor_2x": curve.growth_factor(2),
            "growth_factor_4x": curve.growth_factor(4),
            "curve": curve.points,
        }))
        .into_bytes(),
    };
    emit(output, &text, stdout)?;
    Ok(exit_code(&verdict))
}

fn cmd_examples(builtin: Option<&str>, params: &ParamArgs, out: Option<PathBuf>, stdout: &mut dyn Write) -> Result<i32> {
    let params = params.example_params();
    let text = match builtin {
        Some(name) => {
            let mut text = builtin_example(name, &params)?.to_json();
            text.push('\n');
            text
        }
        None => {
            let mut all = Vec::new();
            for name in BUILTIN_NAMES {
                let spec: serde_json::Value = serde_json::from_str(&builtin_example(name, &params)?.to_json())
                    .map_err(|e| Error::Format(e.to_string()))?;
                all.push(json!({ "name": name, "spec": spec }));
            }
            to_pretty(&all)
        }
    };
    let output = OutputArgs {
        format: Format::Json,
        out,
    };
    emit(&output, text.as_bytes(), stdout)?;
    Ok(0)
}

/// Runs one parsed command, writing its primary output to `stdout` unless `--out` is set.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Classify { spec, horizon, output } => cmd_classify(&spec, &horizon, &output, stdout),
        Command::Simulate {
            spec,
            horizon,
            noise,
            z1,
            output,
        } => cmd_simulate(&spec, &horizon, &noise, z1, &output, stdout),
        Command::Shadow {
            spec,
            horizon,
            noise,
            w1,
            force,
            output,
        } => cmd_shadow(&spec, &horizon, &noise, w1, force, &output, stdout),
        Command::Witness {
            spec,
            horizon,
            epsilon,
            w1,
            force,
            output,
        } => cmd_witness(&spec, &horizon, epsilon, w1, force, &output, stdout),
        Command::Examples { builtin, params, out } => cmd_examples(builtin.as_deref(), &params, out, stdout),
    }
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return 1;
            }
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    match run(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

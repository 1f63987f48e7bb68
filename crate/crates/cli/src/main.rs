//! Command-line surface for the dagger Weyl algebra kernel.
//!
//! Every subcommand writes JSON artifacts into --out and finishes by
//! writing a manifest with digests and timings. Artifacts are
//! byte-deterministic for a fixed command line (timings live only in the
//! manifest). Exit codes: 0 success/verified, 2 failed check, 3
//! indeterminate or precondition, 64 usage, 74 I/O.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use daggerhyp::{
    chain_verify, decompose, diagnose, fourier_identity_check, hyp_operator, hyp_theta_form,
    injectivity_witness, inversion_identity_check, kummer_identity_check, radius_estimate,
    run_suite, sigma_scan, solve_x_inverse, DigitStream, ExactScalar, FieldCtx, Flavor,
    HypParams, IdentityReport, IdentityStatus, LiouvilleDiagnosis, PadicConfig, PadicParameter,
    PadicScalar, PiVariant, Scalar, SolveError, SolveOptions, Window,
};
use num::rational::Ratio;
use num::BigRational;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

const EXIT_FAILED: u8 = 2;
const EXIT_INDETERMINATE: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;

#[derive(Parser)]
#[command(name = "daggerhyp", version, about = "p-adic dagger Weyl algebra toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    globals: Globals,
}

#[derive(Args, Clone)]
struct Globals {
    /// Prime p.
    #[arg(long, global = true, default_value_t = 3)]
    p: u64,
    /// Residue field size q = p^f; defaults to p.
    #[arg(long, global = true)]
    q: Option<u64>,
    /// Working precision (digits) for the float scalar mode.
    #[arg(long, global = true, default_value_t = 24)]
    precision: u32,
    /// Window bound on |x-degree|.
    #[arg(long, global = true, default_value_t = 12)]
    lmax: i64,
    /// Window bound on the divided-power order.
    #[arg(long, global = true, default_value_t = 16)]
    kmax: u32,
    /// Scan/estimation horizon for diagnostics.
    #[arg(long, global = true, default_value_t = 256)]
    horizon: u64,
    /// Coefficient height for sigma scans.
    #[arg(long, global = true, default_value_t = 1)]
    height: i64,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory for artifacts and the manifest.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Scalar arithmetic backend.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Exact rational coordinates in the pi power basis.
    Exact,
    /// Capped-relative-precision p-adic floats.
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Standard,
    Flipped,
}

impl From<VariantArg> for PiVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Standard => PiVariant::Standard,
            VariantArg::Flipped => PiVariant::Flipped,
        }
    }
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Upper parameters, comma-separated rationals (e.g. "0,1/2").
    #[arg(long, default_value = "")]
    alpha: String,
    /// Lower parameters, comma-separated rationals.
    #[arg(long, default_value = "")]
    beta: String,
    /// Expected count of upper parameters (validated when given).
    #[arg(long)]
    m: Option<usize>,
    /// Expected count of lower parameters (validated when given).
    #[arg(long)]
    n: Option<usize>,
    /// Square-root convention for the twisting constant.
    #[arg(long, value_enum, default_value_t = VariantArg::Standard)]
    variant: VariantArg,
}

#[derive(Subcommand)]
enum Command {
    /// Hypergeometric operators and their identity checks.
    Hyp {
        #[command(subcommand)]
        action: HypAction,
    },
    /// Liouville-type diagnostics for p-adic parameters.
    Liouville {
        #[command(subcommand)]
        action: LiouvilleAction,
    },
    /// Solving against a hypergeometric operator.
    Solve {
        #[command(subcommand)]
        action: SolveAction,
    },
    /// Seeded randomized law checking.
    Fuzz {
        /// Which suite to run.
        #[arg(long)]
        suite: String,
        /// Number of trials.
        #[arg(long, default_value_t = 100)]
        count: u64,
    },
    /// Re-digest artifacts in --out and render a human-readable report.
    Report,
}

#[derive(Subcommand)]
enum HypAction {
    /// Construct the operator and emit its theta form and expansion.
    Build(ParamArgs),
    /// Check the inversion identity on the Laurent flavor.
    CheckInv(ParamArgs),
    /// Check the twist identity theta -> theta - gamma.
    CheckKummer {
        #[command(flatten)]
        params: ParamArgs,
        /// Twist exponent.
        #[arg(long)]
        gamma: String,
    },
    /// Check the Fourier gluing identity (requires alpha_1 = 0).
    CheckFourier(ParamArgs),
    /// Peel the parameters into a rank-one chain.
    Decompose(ParamArgs),
    /// Decompose, replay, and verify every step identity.
    VerifyChain(ParamArgs),
}

#[derive(Subcommand)]
enum LiouvilleAction {
    /// Classify one parameter.
    Diagnose {
        /// Rational parameter (mutually exclusive with --stream-digits).
        #[arg(long)]
        alpha: Option<String>,
        /// Little-endian base-p digits of a stream parameter.
        #[arg(long)]
        stream_digits: Option<String>,
    },
    /// Scan small integer combinations of several parameters.
    SigmaScan {
        /// Generators, comma-separated rationals.
        #[arg(long)]
        alpha: String,
    },
    /// Chord estimate of the inverse-product series radius.
    Radius {
        #[arg(long)]
        alpha: String,
    },
}

#[derive(Subcommand)]
enum SolveAction {
    /// Solve P + R*H in x * (ambient algebra) for R.
    XInverse {
        #[command(flatten)]
        params: ParamArgs,
        /// Coefficients of P in the divided-power basis, comma-separated.
        #[arg(long)]
        c: String,
        /// Accept stream parameters of indeterminate Liouville status.
        #[arg(long, default_value_t = false)]
        assume_non_liouville: bool,
        /// Also certify a valuation-divergence injectivity witness.
        #[arg(long, default_value_t = false)]
        witness: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: msg.into(),
        }
    }
    fn io(err: std::io::Error) -> Self {
        Failure {
            code: EXIT_IO,
            message: err.to_string(),
        }
    }
}

/// Collects artifacts, then writes them plus a manifest.
struct Emitter {
    out_dir: PathBuf,
    command: String,
    config: Value,
    seed: u64,
    artifacts: BTreeMap<String, Value>,
    timings: BTreeMap<String, u128>,
}

impl Emitter {
    fn new(globals: &Globals) -> Self {
        Emitter {
            out_dir: globals.out.clone(),
            command: std::env::args().skip(1).collect::<Vec<_>>().join(" "),
            config: json!({
                "p": globals.p,
                "q": globals.q.unwrap_or(globals.p),
                "precision": globals.precision,
                "lmax": globals.lmax,
                "kmax": globals.kmax,
                "horizon": globals.horizon,
                "height": globals.height,
                "mode": match globals.mode { Mode::Exact => "exact", Mode::Float => "float" },
            }),
            seed: globals.seed,
            artifacts: BTreeMap::new(),
            timings: BTreeMap::new(),
        }
    }

    fn add(&mut self, name: &str, body: Value) {
        // Every artifact embeds the config it was produced under.
        self.artifacts.insert(
            name.to_string(),
            json!({ "config": self.config, "body": body }),
        );
    }

    fn time(&mut self, stage: &str, ms: u128) {
        self.timings.insert(stage.to_string(), ms);
    }

    fn flush(&self) -> Result<(), Failure> {
        std::fs::create_dir_all(&self.out_dir).map_err(Failure::io)?;
        let mut outputs = BTreeMap::new();
        for (name, value) in &self.artifacts {
            let path = self.out_dir.join(name);
            let bytes = render(value);
            std::fs::write(&path, &bytes).map_err(Failure::io)?;
            outputs.insert(name.clone(), hex_digest(&bytes));
        }
        let manifest = json!({
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "inputs": {},
            "outputs": outputs,
            "timings_ms": self.timings,
        });
        std::fs::write(self.out_dir.join("manifest.json"), render(&manifest))
            .map_err(Failure::io)?;
        Ok(())
    }
}

fn render(value: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s.into_bytes()
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn parse_rational(s: &str) -> Result<BigRational, Failure> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|e| Failure::usage(format!("cannot parse rational '{s}': {e}")))
}

fn parse_rational_list(s: &str) -> Result<Vec<BigRational>, Failure> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rational).collect()
}

fn parse_param_list(s: &str) -> Result<Vec<PadicParameter>, Failure> {
    Ok(parse_rational_list(s)?
        .into_iter()
        .map(PadicParameter::Rational)
        .collect())
}

fn build_params(args: &ParamArgs) -> Result<HypParams, Failure> {
    let alpha = parse_param_list(&args.alpha)?;
    let beta = parse_param_list(&args.beta)?;
    if let Some(m) = args.m {
        if m != alpha.len() {
            return Err(Failure::usage(format!(
                "--m {m} does not match {} alpha parameters",
                alpha.len()
            )));
        }
    }
    if let Some(n) = args.n {
        if n != beta.len() {
            return Err(Failure::usage(format!(
                "--n {n} does not match {} beta parameters",
                beta.len()
            )));
        }
    }
    Ok(HypParams::new(alpha, beta).with_variant(args.variant.into()))
}

fn context(globals: &Globals) -> Result<Arc<FieldCtx>, Failure> {
    let q = globals.q.unwrap_or(globals.p);
    PadicConfig::new(globals.p, q, globals.precision)
        .map_err(|e| Failure::usage(e.to_string()))?
        .context()
        .map_err(|e| Failure::usage(e.to_string()))
}

fn status_exit(status: IdentityStatus) -> u8 {
    match status {
        IdentityStatus::Verified | IdentityStatus::VerifiedToPrecision => 0,
        IdentityStatus::Failed => EXIT_FAILED,
        IdentityStatus::Indeterminate => EXIT_INDETERMINATE,
    }
}

fn identity_artifact<S: Scalar>(
    emitter: &mut Emitter,
    name: &str,
    report: &IdentityReport<S>,
) -> u8 {
    emitter.add(name, report.to_json());
    status_exit(report.status)
}

/// Run an identity check in whichever scalar mode was requested.
macro_rules! with_scalar {
    ($mode:expr, $f:ident, $($arg:expr),*) => {
        match $mode {
            Mode::Exact => $f::<ExactScalar>($($arg),*),
            Mode::Float => $f::<PadicScalar>($($arg),*),
        }
    };
}

fn cmd_hyp(
    action: &HypAction,
    globals: &Globals,
    emitter: &mut Emitter,
) -> Result<u8, Failure> {
    let window = Window::new(globals.lmax, globals.kmax);
    let started = Instant::now();
    let code = match action {
        HypAction::Build(args) => {
            let params = build_params(args)?;
            fn build<S: Scalar>(
                ctx: &Arc<FieldCtx>,
                params: &HypParams,
                window: Window,
            ) -> Result<Value, Failure> {
                let tf = hyp_theta_form::<S>(ctx, params, Flavor::A1, window)
                    .map_err(|e| Failure::usage(e.to_string()))?;
                let op = hyp_operator::<S>(ctx, params, Flavor::A1, window)
                    .map_err(|e| Failure::usage(e.to_string()))?;
                Ok(json!({
                    "params": params.to_json(),
                    "theta_form": tf.to_json(),
                    "operator": op.to_json(),
                }))
            }
            let ctx = context(globals)?;
            let body = with_scalar!(globals.mode, build, &ctx, &params, window)?;
            emitter.add("hyp_build.json", body);
            0
        }
        HypAction::CheckInv(args) => {
            let params = build_params(args)?;
            let ctx = context(globals)?;
            fn check<S: Scalar>(
                ctx: &Arc<FieldCtx>,
                params: &HypParams,
                window: Window,
            ) -> Result<IdentityReport<S>, Failure> {
                inversion_identity_check::<S>(ctx, params, window)
                    .map_err(|e| Failure::usage(e.to_string()))
            }
            match globals.mode {
                Mode::Exact => {
                    let rep = check::<ExactScalar>(&ctx, &params, window)?;
                    identity_artifact(emitter, "check_inv.json", &rep)
                }
                Mode::Float => {
                    let rep = check::<PadicScalar>(&ctx, &params, window)?;
                    identity_artifact(emitter, "check_inv.json", &rep)
                }
            }
        }
        HypAction::CheckKummer { params, gamma } => {
            let hp = build_params(params)?;
            let gamma = PadicParameter::Rational(parse_rational(gamma)?);
            let ctx = context(globals)?;
            match globals.mode {
                Mode::Exact => {
                    let rep = kummer_identity_check::<ExactScalar>(
                        &ctx, &hp, &gamma, Flavor::A1, window,
                    )
                    .map_err(|e| Failure::usage(e.to_string()))?;
                    identity_artifact(emitter, "check_kummer.json", &rep)
                }
                Mode::Float => {
                    let rep = kummer_identity_check::<PadicScalar>(
                        &ctx, &hp, &gamma, Flavor::A1, window,
                    )
                    .map_err(|e| Failure::usage(e.to_string()))?;
                    identity_artifact(emitter, "check_kummer.json", &rep)
                }
            }
        }
        HypAction::CheckFourier(args) => {
            let params = build_params(args)?;
            let ctx = context(globals)?;
            match globals.mode {
                Mode::Exact => {
                    match fourier_identity_check::<ExactScalar>(&ctx, &params, window) {
                        Ok(rep) => identity_artifact(emitter, "check_fourier.json", &rep),
                        Err(e) => {
                            emitter.add("check_fourier.json", json!({ "error": e.to_string() }));
                            EXIT_INDETERMINATE
                        }
                    }
                }
                Mode::Float => {
                    match fourier_identity_check::<PadicScalar>(&ctx, &params, window) {
                        Ok(rep) => identity_artifact(emitter, "check_fourier.json", &rep),
                        Err(e) => {
                            emitter.add("check_fourier.json", json!({ "error": e.to_string() }));
                            EXIT_INDETERMINATE
                        }
                    }
                }
            }
        }
        HypAction::Decompose(args) => {
            let params = build_params(args)?;
            match decompose(globals.p, &params, globals.horizon as i64) {
                Ok(chain) => {
                    emitter.add("decompose.json", chain.to_json());
                    0
                }
                Err(e) => {
                    emitter.add("decompose.json", json!({ "error": e.to_string() }));
                    EXIT_INDETERMINATE
                }
            }
        }
        HypAction::VerifyChain(args) => {
            let params = build_params(args)?;
            let ctx = context(globals)?;
            let chain = match decompose(globals.p, &params, globals.horizon as i64) {
                Ok(chain) => chain,
                Err(e) => {
                    emitter.add("verify_chain.json", json!({ "error": e.to_string() }));
                    emitter.time("hyp", started.elapsed().as_millis());
                    return Ok(EXIT_INDETERMINATE);
                }
            };
            fn verify<S: Scalar>(
                ctx: &Arc<FieldCtx>,
                chain: &daggerhyp::DecompositionChain,
                window: Window,
            ) -> Result<(Value, bool), Failure> {
                let report = chain_verify::<S>(ctx, chain, window)
                    .map_err(|e| Failure::usage(e.to_string()))?;
                Ok((report.to_json(), report.passes()))
            }
            let (body, passes) = with_scalar!(globals.mode, verify, &ctx, &chain, window)?;
            emitter.add("verify_chain.json", body);
            if passes {
                0
            } else {
                EXIT_FAILED
            }
        }
    };
    emitter.time("hyp", started.elapsed().as_millis());
    Ok(code)
}

fn cmd_liouville(
    action: &LiouvilleAction,
    globals: &Globals,
    emitter: &mut Emitter,
) -> Result<u8, Failure> {
    let started = Instant::now();
    let code = match action {
        LiouvilleAction::Diagnose {
            alpha,
            stream_digits,
        } => {
            let param = match (alpha, stream_digits) {
                (Some(a), None) => PadicParameter::Rational(parse_rational(a)?),
                (None, Some(ds)) => {
                    let digits: Result<Vec<u32>, _> =
                        ds.split(',').map(|d| d.trim().parse::<u32>()).collect();
                    let digits =
                        digits.map_err(|e| Failure::usage(format!("bad digit: {e}")))?;
                    PadicParameter::Stream(
                        DigitStream::new(globals.p, digits)
                            .map_err(Failure::usage)?,
                    )
                }
                _ => {
                    return Err(Failure::usage(
                        "pass exactly one of --alpha or --stream-digits",
                    ))
                }
            };
            match diagnose(globals.p, &param, globals.horizon) {
                Ok(diag) => {
                    emitter.add(
                        "liouville_diagnose.json",
                        json!({ "param": param.to_json(), "diagnosis": diag.to_json() }),
                    );
                    match diag {
                        LiouvilleDiagnosis::Indeterminate { .. } => EXIT_INDETERMINATE,
                        _ => 0,
                    }
                }
                Err(e) => return Err(Failure::usage(e.to_string())),
            }
        }
        LiouvilleAction::SigmaScan { alpha } => {
            let generators = parse_param_list(alpha)?;
            if generators.is_empty() {
                return Err(Failure::usage("--alpha must list at least one generator"));
            }
            let entries = sigma_scan(globals.p, &generators, globals.height, globals.horizon)
                .map_err(|e| Failure::usage(e.to_string()))?;
            let indeterminate = entries.iter().any(|e| {
                matches!(
                    &e.outcome,
                    daggerhyp::ScanOutcome::Diagnosis(LiouvilleDiagnosis::Indeterminate { .. })
                )
            });
            emitter.add(
                "sigma_scan.json",
                json!({
                    "generators": generators.iter().map(|g| g.to_json()).collect::<Vec<_>>(),
                    "height": globals.height,
                    "entries": entries.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
                }),
            );
            if indeterminate {
                EXIT_INDETERMINATE
            } else {
                0
            }
        }
        LiouvilleAction::Radius { alpha } => {
            let param = PadicParameter::Rational(parse_rational(alpha)?);
            let est = radius_estimate(globals.p, &param, globals.horizon)
                .map_err(|e| Failure::usage(e.to_string()))?;
            emitter.add(
                "radius.json",
                json!({ "param": param.to_json(), "estimate": est.to_json() }),
            );
            0
        }
    };
    emitter.time("liouville", started.elapsed().as_millis());
    Ok(code)
}

fn cmd_solve(
    action: &SolveAction,
    globals: &Globals,
    emitter: &mut Emitter,
) -> Result<u8, Failure> {
    let started = Instant::now();
    let SolveAction::XInverse {
        params,
        c,
        assume_non_liouville,
        witness,
    } = action;
    let hp = build_params(params)?;
    let coeffs = parse_rational_list(c)?;
    if coeffs.is_empty() {
        return Err(Failure::usage("--c must list at least one coefficient"));
    }
    let ctx = context(globals)?;
    let opts = SolveOptions {
        assume_non_liouville: *assume_non_liouville,
        liouville_scan: globals.horizon,
        min_tail_floor: None,
    };

    fn run<S: Scalar>(
        ctx: &Arc<FieldCtx>,
        hp: &HypParams,
        coeffs: &[BigRational],
        opts: &SolveOptions,
    ) -> Result<Value, SolveError> {
        let c: Vec<S> = coeffs.iter().map(|r| S::from_rational(ctx, r)).collect();
        let report = solve_x_inverse(ctx, hp, &c, opts)?;
        Ok(report.to_json())
    }

    let solved = match globals.mode {
        Mode::Exact => run::<ExactScalar>(&ctx, &hp, &coeffs, &opts),
        Mode::Float => run::<PadicScalar>(&ctx, &hp, &coeffs, &opts),
    };
    let code = match solved {
        Ok(mut body) => {
            if *witness {
                match injectivity_witness(
                    globals.p,
                    &hp,
                    0,
                    globals.horizon.max(64),
                    Ratio::new(1, 2),
                    6,
                ) {
                    Ok(rep) => {
                        body["injectivity"] = rep.to_json();
                        let passes = rep.passes();
                        emitter.add("solve_x_inverse.json", body);
                        if passes {
                            0
                        } else {
                            EXIT_INDETERMINATE
                        }
                    }
                    Err(e) => {
                        body["injectivity"] = json!({ "error": e.to_string() });
                        emitter.add("solve_x_inverse.json", body);
                        EXIT_INDETERMINATE
                    }
                }
            } else {
                emitter.add("solve_x_inverse.json", body);
                0
            }
        }
        Err(e) => {
            emitter.add("solve_x_inverse.json", json!({ "error": e.to_string() }));
            match e {
                SolveError::ResidualNonzero(_) => EXIT_FAILED,
                SolveError::Weyl(_) | SolveError::Scalar(_) => EXIT_FAILED,
                _ => EXIT_INDETERMINATE,
            }
        }
    };
    emitter.time("solve", started.elapsed().as_millis());
    Ok(code)
}

fn cmd_fuzz(
    suite: &str,
    count: u64,
    globals: &Globals,
    emitter: &mut Emitter,
) -> Result<u8, Failure> {
    let started = Instant::now();
    let outcome = run_suite(suite, count, globals.seed).ok_or_else(|| {
        Failure::usage(format!(
            "unknown suite '{suite}' (expected valuation-bounds, solver-residual, or automorphism)"
        ))
    })?;
    emitter.add("fuzz.json", outcome.to_json());
    emitter.time("fuzz", started.elapsed().as_millis());
    Ok(if outcome.passed() { 0 } else { EXIT_FAILED })
}

fn cmd_report(globals: &Globals) -> Result<u8, Failure> {
    let manifest_path = globals.out.join("manifest.json");
    let raw = std::fs::read_to_string(&manifest_path).map_err(Failure::io)?;
    let manifest: Value =
        serde_json::from_str(&raw).map_err(|e| Failure::usage(format!("bad manifest: {e}")))?;
    let mut lines = Vec::new();
    lines.push(format!("command: {}", manifest["command"].as_str().unwrap_or("?")));
    lines.push(format!("config: {}", manifest["config"]));
    let mut all_ok = true;
    if let Some(outputs) = manifest["outputs"].as_object() {
        for (name, digest) in outputs {
            let path = globals.out.join(name);
            let status = match std::fs::read(&path) {
                Ok(bytes) => {
                    let actual = hex_digest(&bytes);
                    if Some(actual.as_str()) == digest.as_str() {
                        let body: Value = serde_json::from_slice(&bytes).unwrap_or(Value::Null);
                        let verdict = body["body"]["status"]
                            .as_str()
                            .map(String::from)
                            .or_else(|| {
                                body["body"]["diagnosis"]["status"].as_str().map(String::from)
                            })
                            .or_else(|| {
                                body["body"]["passes"]
                                    .as_bool()
                                    .map(|b| if b { "passes".into() } else { "FAILS".into() })
                            })
                            .unwrap_or_else(|| "ok".into());
                        format!("digest ok, {verdict}")
                    } else {
                        all_ok = false;
                        "DIGEST MISMATCH".to_string()
                    }
                }
                Err(_) => {
                    all_ok = false;
                    "MISSING".to_string()
                }
            };
            lines.push(format!("{name}: {status}"));
        }
    }
    lines.push(format!("digests: {}", if all_ok { "ok" } else { "MISMATCH" }));
    let mut text = lines.join("\n");
    text.push('\n');
    std::fs::write(globals.out.join("report.txt"), text.as_bytes()).map_err(Failure::io)?;
    print!("{text}");
    Ok(if all_ok { 0 } else { EXIT_FAILED })
}

fn run() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let globals = &cli.globals;
    let mut emitter = Emitter::new(globals);
    let result = match &cli.command {
        Command::Hyp { action } => cmd_hyp(action, globals, &mut emitter),
        Command::Liouville { action } => cmd_liouville(action, globals, &mut emitter),
        Command::Solve { action } => cmd_solve(action, globals, &mut emitter),
        Command::Fuzz { suite, count } => cmd_fuzz(suite, *count, globals, &mut emitter),
        Command::Report => return match cmd_report(globals) {
            Ok(code) => code,
            Err(f) => {
                eprintln!("error: {}", f.message);
                f.code
            }
        },
    };
    match result {
        Ok(code) => {
            if let Err(f) = emitter.flush() {
                eprintln!("error: {}", f.message);
                return f.code;
            }
            code
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run())
}

//! The `symm` command line: argument parsing, JSON ingestion with
//! path-precise errors, and deterministic report emission.
//!
//! Exit codes: 0 when every verdict passes, 1 when a check fails, 2 on any
//! input error (unreadable file, malformed JSON, schema violation, unknown
//! suite check). A report is written in every case.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::algebra::Polynomial;
use crate::extension::{ext_interval, LowerWitness};
use crate::hilbert_scale::{dominance_witness, quasi_nuclear_embedding, scale_dominance, PointJson, ScaleIndex};
use crate::modules2d::{
    archimedean_witness, certificate_search, jacobi_epsilon_check, CertificateJson, PowerModule, PowerModuleJson,
    SearchOutcome,
};
use crate::moments::{
    distinguish_measures, hurwitz_reznick_check, m_positivity_check, mk_sequence, positivity_check,
    quasi_analytic_classify, reconstruct_univariate, support_radius, support_radius_estimate, table_from_measure,
    AtomicMeasure, Distinction, MeasureJson, MomentTable, TableJson,
};
use crate::rational::{self, Exact, Rational, Real};
use crate::seminorm::Seminorm;
use crate::spectrum::{sample_ball, SpectrumBall};

mod report;
pub mod suite;

pub use report::{InputDigest, Report, Verdict};

/// Default slack for floating comparisons.
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "symm", version, about = "Seminorms, spectra, power modules and moment functionals on polynomial algebras")]
pub struct Cli {
    /// Slack for floating-point comparisons.
    #[arg(long, global = true, env = "SYMM_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Seed for every random choice (ChaCha8).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, env = "SYMM_FORMAT", value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Directory that relative input paths are resolved against.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Seminorms on V.
    #[command(subcommand)]
    Norm(NormCmd),
    /// Projective extensions to the polynomial algebra.
    #[command(subcommand)]
    Ext(ExtCmd),
    /// Dual-norm balls (spectrum of the extension).
    #[command(subcommand)]
    Spectrum(SpectrumCmd),
    /// 2d-power modules.
    #[command(subcommand)]
    Module(ModuleCmd),
    /// Moment functionals and atomic measures.
    #[command(subcommand)]
    Moments(MomentsCmd),
    /// Hilbert-scale embeddings.
    #[command(subcommand)]
    Nuclear(NuclearCmd),
    /// Batch checks.
    #[command(subcommand)]
    Suite(SuiteCmd),
}

#[derive(Debug, Args)]
pub struct SeminormArg {
    /// Seminorm JSON file.
    #[arg(long)]
    pub seminorm: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum NormCmd {
    /// `ρ(v)` for a vector given by coordinates.
    Eval {
        #[command(flatten)]
        seminorm: SeminormArg,
        /// Comma-separated rational coordinates, e.g. `1,-1/2,0.25`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Dual norm `ρ′(v*)`.
    Dual {
        #[command(flatten)]
        seminorm: SeminormArg,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExtCmd {
    /// Certified interval for `ρ̄(f)`.
    Eval {
        #[command(flatten)]
        seminorm: SeminormArg,
        /// Polynomial JSON file.
        #[arg(long)]
        poly: PathBuf,
        /// Number of sampled characters for the lower bound.
        #[arg(long, default_value_t = 256)]
        budget: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum SpectrumCmd {
    /// Is `v*` in `B̄_i(ρ′)`?
    Test {
        #[command(flatten)]
        seminorm: SeminormArg,
        #[arg(long, default_value = "1")]
        radius: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Deterministic sample of `B̄_i(ρ′)`.
    Sample {
        #[command(flatten)]
        seminorm: SeminormArg,
        #[arg(long, default_value = "1")]
        radius: String,
        #[arg(long)]
        nvars: usize,
        #[arg(long, default_value_t = 16)]
        count: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ModuleCmd {
    /// Search for a certificate of `a (+ ε) ∈ M`.
    Cert {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        epsilon: Option<String>,
        /// Maximal degree of the bases `p`.
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Smallest `k` with a certificate for `k - Σ x_i^{2d} ∈ M`.
    Arch {
        #[arg(long)]
        module: PathBuf,
        #[arg(long, default_value_t = 1)]
        degree: u32,
    },
}

#[derive(Debug, Args)]
pub struct FunctionalArg {
    /// Moment table JSON file.
    #[arg(long, conflicts_with = "measure")]
    pub table: Option<PathBuf>,
    /// Atomic measure JSON file, tabulated up to `--max-degree`.
    #[arg(long)]
    pub measure: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    pub max_degree: u32,
}

#[derive(Debug, Subcommand)]
pub enum MomentsCmd {
    /// Positivity, M-positivity and Hurwitz–Reznick checks.
    Check {
        #[command(flatten)]
        functional: FunctionalArg,
        /// Power parameter of `ΣA^{2d}`.
        #[arg(long, default_value_t = 1)]
        d: u32,
        /// Module JSON for an M-positivity check.
        #[arg(long)]
        module: Option<PathBuf>,
        /// Also check the Hurwitz–Reznick bound at this `k`.
        #[arg(long)]
        hr: Option<u32>,
    },
    /// `m_k` sequence and quasi-analyticity verdict.
    Mk {
        #[command(flatten)]
        functional: FunctionalArg,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Recover a univariate atomic measure from its moments.
    Reconstruct {
        #[command(flatten)]
        functional: FunctionalArg,
        /// Largest number of atoms.
        #[arg(long, default_value_t = 8)]
        atoms: usize,
    },
    /// Support radius for weighted ℓ1 duals: exact from a measure, estimated from a table.
    Radius {
        #[command(flatten)]
        functional: FunctionalArg,
        /// Comma-separated positive weights `r`.
        #[arg(long)]
        weights: String,
    },
    /// First monomial separating two measures.
    Distinguish {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        other: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_degree: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum NuclearCmd {
    /// Dominance and quasi-nuclearity of `H_{s2} ↪ H_{s1}`.
    Check {
        #[arg(long, allow_hyphen_values = true)]
        s1: String,
        #[arg(long, allow_hyphen_values = true)]
        s2: String,
        /// Optional point JSON to evaluate both norms on.
        #[arg(long)]
        point: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SuiteCmd {
    /// Run named checks from a config file (all checks by default).
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

/// Input problems; always exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct InputError(pub String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

/// What a command produced before formatting.
pub struct Outcome {
    pub verdicts: Vec<Verdict>,
    pub witnesses: Option<Value>,
}

impl Outcome {
    fn new(verdicts: Vec<Verdict>) -> Self {
        Outcome { verdicts, witnesses: None }
    }

    fn with_witnesses(mut self, w: Value) -> Self {
        self.witnesses = Some(w);
        self
    }
}

/// Shared state for one invocation: global flags and the running digest.
pub struct Context {
    pub tol: f64,
    pub seed: u64,
    pub base: Option<PathBuf>,
    pub digest: InputDigest,
}

impl Context {
    pub fn new(tol: f64, seed: u64, base: Option<PathBuf>) -> Self {
        Context { tol, seed, base, digest: InputDigest::default() }
    }

    fn resolve(&self, path: &Path) -> PathBuf {
        match &self.base {
            Some(b) if path.is_relative() => b.join(path),
            _ => path.to_path_buf(),
        }
    }

    pub fn read(&mut self, label: &str, path: &Path) -> Result<Vec<u8>, InputError> {
        let full = self.resolve(path);
        let bytes = std::fs::read(&full).map_err(|e| InputError(format!("cannot read {}: {e}", full.display())))?;
        self.digest.add(label, &bytes);
        Ok(bytes)
    }

    /// Reads and deserializes a JSON file; errors name the offending path
    /// inside the document.
    pub fn load<T: DeserializeOwned>(&mut self, label: &str, path: &Path) -> Result<T, InputError> {
        let bytes = self.read(label, path)?;
        parse_json(&bytes).map_err(|e| InputError(format!("{}: {}", path.display(), e.0)))
    }

    pub fn arg(&mut self, label: &str, value: &str) {
        self.digest.add(label, value.as_bytes());
    }
}

/// Deserializes with the JSON path of the first error in the message.
pub fn parse_json<T: DeserializeOwned>(bytes: &[u8]) -> Result<T, InputError> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        InputError(format!("at `{path}`: {}", e.into_inner()))
    })
}

fn parse_point(text: &str) -> Result<Vec<Rational>, InputError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .enumerate()
        .map(|(i, s)| rational::parse_rational(s).map_err(|_| InputError(format!("coordinate {i}: cannot parse `{}`", s.trim()))))
        .collect()
}

fn parse_scalar(name: &str, text: &str) -> Result<Rational, InputError> {
    rational::parse_rational(text).map_err(|_| InputError(format!("--{name}: cannot parse `{text}`")))
}

fn real_json(r: &Real) -> Value {
    serde_json::to_value(r).expect("reals serialize")
}

fn exact_json(q: &Rational) -> Value {
    serde_json::to_value(Exact(q.clone())).expect("rationals serialize")
}

fn point_json(p: &[Rational]) -> Value {
    Value::Array(p.iter().map(exact_json).collect())
}

fn f64_json(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

fn load_seminorm(ctx: &mut Context, arg: &SeminormArg) -> Result<Seminorm, InputError> {
    ctx.load("seminorm", &arg.seminorm)
}

fn load_functional(ctx: &mut Context, f: &FunctionalArg) -> Result<(MomentTable, Option<AtomicMeasure>), InputError> {
    match (&f.table, &f.measure) {
        (Some(path), None) => {
            let j: TableJson = ctx.load("table", path)?;
            Ok((MomentTable::try_from(j).map_err(|e| InputError(format!("{}: {e}", path.display())))?, None))
        }
        (None, Some(path)) => {
            let j: MeasureJson = ctx.load("measure", path)?;
            let mu = AtomicMeasure::try_from(j).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            ctx.arg("max_degree", &f.max_degree.to_string());
            Ok((table_from_measure(&mu, f.max_degree), Some(mu)))
        }
        _ => Err(InputError("exactly one of --table or --measure is required".into())),
    }
}

fn load_measure(ctx: &mut Context, label: &str, path: &Path) -> Result<AtomicMeasure, InputError> {
    let j: MeasureJson = ctx.load(label, path)?;
    AtomicMeasure::try_from(j).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_module(ctx: &mut Context, path: &Path, nvars: Option<usize>) -> Result<PowerModule, InputError> {
    let j: PowerModuleJson = ctx.load("module", path)?;
    j.build(nvars).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn certificate_witness(outcome: &SearchOutcome) -> Value {
    match outcome {
        SearchOutcome::Found(c) => serde_json::to_value(CertificateJson::from(c)).expect("serializes"),
        SearchOutcome::NotFound { negativity_witness } => json!({
            "found": false,
            "witness": negativity_witness.as_ref().map(|p| point_json(p)),
        }),
    }
}

fn norm_cmd(ctx: &mut Context, cmd: &NormCmd) -> Result<Outcome, InputError> {
    match cmd {
        NormCmd::Eval { seminorm, point } => {
            let rho = load_seminorm(ctx, seminorm)?;
            ctx.arg("point", point);
            let v = parse_point(point)?;
            let value = rho.eval_coords(&v)?;
            Ok(Outcome::new(vec![Verdict::info("value", real_json(&value))]))
        }
        NormCmd::Dual { seminorm, point } => {
            let rho = load_seminorm(ctx, seminorm)?;
            ctx.arg("point", point);
            let v = parse_point(point)?;
            let value = rho.dual_norm_real(&v)?;
            Ok(Outcome::new(vec![Verdict::info("dual_norm", real_json(&value))]))
        }
    }
}

fn ext_cmd(ctx: &mut Context, cmd: &ExtCmd) -> Result<Outcome, InputError> {
    let ExtCmd::Eval { seminorm, poly, budget } = cmd;
    let rho = load_seminorm(ctx, seminorm)?;
    let f: Polynomial = ctx.load("poly", poly)?;
    ctx.arg("budget", &budget.to_string());
    let iv = ext_interval(&rho, &f, *budget, ctx.seed)?;
    let verified = iv.verify(&rho, &f)?;
    let mut verdicts = Vec::new();
    if iv.is_exact() {
        verdicts.push(Verdict::info("value", exact_json(&iv.upper)));
    }
    verdicts.push(Verdict::info("lower", real_json(&iv.lower)));
    verdicts.push(Verdict::info("upper", exact_json(&iv.upper)));
    verdicts.push(Verdict::new("interval_verified", verified, json!(verified)));
    let lower = match &iv.lower_witness {
        LowerWitness::Character { point } => json!({"kind": "character", "point": point_json(point)}),
        LowerWitness::ClosedForm { best_character } => json!({
            "kind": "closed_form",
            "best_character": best_character.as_ref().map(|p| point_json(p)),
        }),
    };
    let upper: Vec<Value> = iv
        .upper_witness
        .terms
        .iter()
        .map(|t| json!({"coefficient": exact_json(&t.coefficient), "factors": t.factors}))
        .collect();
    Ok(Outcome::new(verdicts).with_witnesses(json!({"lower": lower, "upper_decomposition": upper})))
}

fn spectrum_cmd(ctx: &mut Context, cmd: &SpectrumCmd) -> Result<Outcome, InputError> {
    match cmd {
        SpectrumCmd::Test { seminorm, radius, point } => {
            let rho = load_seminorm(ctx, seminorm)?;
            ctx.arg("radius", radius);
            ctx.arg("point", point);
            let ball = SpectrumBall::new(rho.clone(), parse_scalar("radius", radius)?)?;
            let v = parse_point(point)?;
            let dual = rho.dual_norm_real(&v)?;
            let (contains, exact) = match rho.dual_ball_contains_exact(&v, ball.radius())? {
                Some(b) => (b, true),
                None => (dual.to_f64() <= rational::to_f64(ball.radius()) + ctx.tol, false),
            };
            let mut verdict = Verdict::new("contains", contains, json!({"dual_norm": real_json(&dual), "exact": exact}));
            if !exact {
                verdict = verdict.with_tolerance(ctx.tol);
            }
            Ok(Outcome::new(vec![verdict]))
        }
        SpectrumCmd::Sample { seminorm, radius, nvars, count } => {
            let rho = load_seminorm(ctx, seminorm)?;
            ctx.arg("radius", radius);
            ctx.arg("nvars", &nvars.to_string());
            ctx.arg("count", &count.to_string());
            let ball = SpectrumBall::new(rho, parse_scalar("radius", radius)?)?;
            let samples = sample_ball(&ball, *nvars, *count, ctx.seed)?;
            let inside = samples.iter().map(|s| ball.contains(s)).collect::<Result<Vec<_>, _>>()?;
            let all = inside.iter().all(|b| *b);
            Ok(Outcome::new(vec![Verdict::new("all_inside", all, json!(samples.len()))])
                .with_witnesses(json!({"samples": samples})))
        }
    }
}

fn module_cmd(ctx: &mut Context, cmd: &ModuleCmd) -> Result<Outcome, InputError> {
    match cmd {
        ModuleCmd::Cert { module, poly, epsilon, degree } => {
            let a: Polynomial = ctx.load("poly", poly)?;
            let m = load_module(ctx, module, Some(a.nvars()))?;
            ctx.arg("degree", &degree.to_string());
            let outcome = match epsilon {
                Some(e) => {
                    ctx.arg("epsilon", e);
                    jacobi_epsilon_check(&m, &a, &parse_scalar("epsilon", e)?, *degree)?
                }
                None => certificate_search(&m, &a, *degree)?,
            };
            let verified = outcome.certificate().is_some_and(|c| c.verify(&m));
            let mut verdicts = vec![Verdict::new("found", outcome.is_found(), json!(outcome.is_found()))];
            if outcome.is_found() {
                verdicts.push(Verdict::new("certificate_verified", verified, json!(verified)));
            }
            Ok(Outcome::new(verdicts).with_witnesses(certificate_witness(&outcome)))
        }
        ModuleCmd::Arch { module, degree } => {
            let m = load_module(ctx, module, None)?;
            ctx.arg("degree", &degree.to_string());
            match archimedean_witness(&m, *degree)? {
                Some(w) => Ok(Outcome::new(vec![
                    Verdict::new("found", true, json!(w.k)),
                    Verdict::info("heuristic", json!(w.heuristic)),
                ])
                .with_witnesses(json!({"k": w.k, "certificate": CertificateJson::from(&w.certificate)}))),
                None => Ok(Outcome::new(vec![Verdict::new("found", false, Value::Null)])),
            }
        }
    }
}

fn moments_cmd(ctx: &mut Context, cmd: &MomentsCmd) -> Result<Outcome, InputError> {
    match cmd {
        MomentsCmd::Check { functional, d, module, hr } => {
            let (table, _) = load_functional(ctx, functional)?;
            ctx.arg("d", &d.to_string());
            let mut verdicts = Vec::new();
            let pos = positivity_check(&table, *d)?;
            let min = pos.blocks.iter().map(|b| b.min_value).fold(f64::INFINITY, f64::min);
            let tol = pos.blocks.iter().map(|b| b.tolerance).fold(0.0, f64::max);
            verdicts.push(Verdict::new("positive", pos.pass, json!({"min_value": f64_json(min), "t": pos.t})).with_tolerance(tol));
            if let Some(path) = module {
                let m = load_module(ctx, path, Some(table.nvars()))?;
                let t = table.max_degree() / (2 * m.d());
                let r = m_positivity_check(&table, &m, t)?;
                let blocks: Vec<Value> = r
                    .blocks
                    .iter()
                    .map(|b| json!({"generator": b.generator, "min_value": f64_json(b.min_value), "pass": b.pass}))
                    .collect();
                verdicts.push(Verdict::new("m_positive", r.pass, Value::Array(blocks)));
            }
            if let Some(k) = hr {
                ctx.arg("hr", &k.to_string());
                let r = hurwitz_reznick_check(&table, *k)?;
                verdicts.push(Verdict::new("hurwitz_reznick", r.violations == 0, json!({"violations": r.violations, "checked": r.entries.len()})));
            }
            Ok(Outcome::new(verdicts))
        }
        MomentsCmd::Mk { functional, k } => {
            let (table, _) = load_functional(ctx, functional)?;
            let k = k.unwrap_or(table.max_degree() / 2);
            ctx.arg("k", &k.to_string());
            let m = mk_sequence(&table, k)?;
            let d = quasi_analytic_classify(&m);
            Ok(Outcome::new(vec![
                Verdict::info("mk", json!(m.values.iter().map(|x| f64_json(*x)).collect::<Vec<_>>())),
                Verdict::info("quasi_analytic", json!(d.verdict.as_str())),
            ])
            .with_witnesses(json!({"slope": d.slope.map(f64_json), "partial_sums": d.partial_sums})))
        }
        MomentsCmd::Reconstruct { functional, atoms } => {
            let (table, _) = load_functional(ctx, functional)?;
            ctx.arg("atoms", &atoms.to_string());
            match reconstruct_univariate(&table, *atoms) {
                Ok(mu) => Ok(Outcome::new(vec![Verdict::new("reconstructed", true, json!(mu.atoms().len()))])
                    .with_witnesses(serde_json::to_value(MeasureJson::from(&mu)).expect("serializes"))),
                Err(e @ crate::moments::MomentError::Reconstruction(_))
                | Err(e @ crate::moments::MomentError::NotPositive(_)) => {
                    Ok(Outcome::new(vec![Verdict::new("reconstructed", false, json!(e.to_string()))]))
                }
                Err(e) => Err(e.into()),
            }
        }
        MomentsCmd::Radius { functional, weights } => {
            let (table, measure) = load_functional(ctx, functional)?;
            ctx.arg("weights", weights);
            let r = parse_point(weights)?;
            let mut verdicts = Vec::new();
            if let Some(mu) = &measure {
                verdicts.push(Verdict::info("exact", exact_json(&support_radius(mu, &r)?)));
            }
            let est = support_radius_estimate(&table, &r)?;
            verdicts.push(Verdict::info(
                "estimate",
                json!({"estimate": f64_json(est.estimate), "root_test": f64_json(est.root_test), "quadrature": est.quadrature.map(f64_json)}),
            ));
            Ok(Outcome::new(verdicts))
        }
        MomentsCmd::Distinguish { measure, other, max_degree } => {
            let a = load_measure(ctx, "measure", measure)?;
            let b = load_measure(ctx, "other", other)?;
            ctx.arg("max_degree", &max_degree.to_string());
            let v = match distinguish_measures(&a, &b, *max_degree)? {
                Distinction::Differ { monomial, first, second } => json!({
                    "agree": false,
                    "monomial": monomial.to_string(),
                    "exp": monomial.exponents(),
                    "values": [exact_json(&first), exact_json(&second)],
                }),
                Distinction::AgreeToDegree(d) => json!({"agree": true, "degree": d}),
            };
            Ok(Outcome::new(vec![Verdict::info("distinguish", v)]))
        }
    }
}

fn nuclear_cmd(ctx: &mut Context, cmd: &NuclearCmd) -> Result<Outcome, InputError> {
    let NuclearCmd::Check { s1, s2, point } = cmd;
    ctx.arg("s1", s1);
    ctx.arg("s2", s2);
    let a = ScaleIndex::new(parse_scalar("s1", s1)?);
    let b = ScaleIndex::new(parse_scalar("s2", s2)?);
    let dominates = scale_dominance(&b, &a);
    let mut verdicts = vec![
        Verdict::info("dominates", json!(dominates)),
        Verdict::info("quasi_nuclear", json!(quasi_nuclear_embedding(&b, &a))),
    ];
    let mut witnesses = json!({"dominance_counterexample": dominance_witness(&b, &a).map(|p| serde_json::to_value(PointJson::from(&p)).expect("serializes"))});
    if let Some(path) = point {
        let p: PointJson = ctx.load("point", path)?;
        let p = p.into();
        let n1 = crate::hilbert_scale::hs_norm(&a, &p);
        let n2 = crate::hilbert_scale::hs_norm(&b, &p);
        let consistent = !dominates || n1.to_f64() <= n2.to_f64() * (1.0 + ctx.tol);
        verdicts.push(Verdict::new("norms_ordered", consistent, json!({"s1": real_json(&n1), "s2": real_json(&n2)})));
        witnesses["point"] = json!(true);
    }
    Ok(Outcome::new(verdicts).with_witnesses(witnesses))
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Norm(NormCmd::Eval { .. }) => "norm eval",
        Command::Norm(NormCmd::Dual { .. }) => "norm dual",
        Command::Ext(ExtCmd::Eval { .. }) => "ext eval",
        Command::Spectrum(SpectrumCmd::Test { .. }) => "spectrum test",
        Command::Spectrum(SpectrumCmd::Sample { .. }) => "spectrum sample",
        Command::Module(ModuleCmd::Cert { .. }) => "module cert",
        Command::Module(ModuleCmd::Arch { .. }) => "module arch",
        Command::Moments(MomentsCmd::Check { .. }) => "moments check",
        Command::Moments(MomentsCmd::Mk { .. }) => "moments mk",
        Command::Moments(MomentsCmd::Reconstruct { .. }) => "moments reconstruct",
        Command::Moments(MomentsCmd::Radius { .. }) => "moments radius",
        Command::Moments(MomentsCmd::Distinguish { .. }) => "moments distinguish",
        Command::Nuclear(NuclearCmd::Check { .. }) => "nuclear check",
        Command::Suite(SuiteCmd::Run { .. }) => "suite run",
    }
}

fn dispatch(ctx: &mut Context, cmd: &Command) -> Result<Outcome, InputError> {
    match cmd {
        Command::Norm(c) => norm_cmd(ctx, c),
        Command::Ext(c) => ext_cmd(ctx, c),
        Command::Spectrum(c) => spectrum_cmd(ctx, c),
        Command::Module(c) => module_cmd(ctx, c),
        Command::Moments(c) => moments_cmd(ctx, c),
        Command::Nuclear(c) => nuclear_cmd(ctx, c),
        Command::Suite(SuiteCmd::Run { config }) => suite::run_command(ctx, config.as_deref()),
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one command line (including the program name) without touching the
/// process: the caller prints `stdout`/`stderr` and exits with `code`.
pub fn run<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return RunOutput { code: 0, stdout: e.to_string(), stderr: String::new() };
            }
            let report = Report {
                command: "".into(),
                inputs_digest: InputDigest::default().hex(),
                verdicts: Vec::new(),
                witnesses: None,
                error: Some(e.kind().to_string()),
            };
            return RunOutput { code: 2, stdout: report.to_json(), stderr: e.to_string() };
        }
    };
    let mut ctx = Context::new(cli.tol, cli.seed, cli.input.clone());
    ctx.arg("seed", &cli.seed.to_string());
    ctx.arg("tol", &format!("{:e}", cli.tol));
    let command = command_name(&cli.command).to_string();
    let (code, report, stderr) = match dispatch(&mut ctx, &cli.command) {
        Ok(out) => {
            let report = Report {
                command,
                inputs_digest: ctx.digest.hex(),
                verdicts: out.verdicts,
                witnesses: out.witnesses,
                error: None,
            };
            (if report.all_pass() { 0 } else { 1 }, report, String::new())
        }
        Err(InputError(msg)) => {
            let report = Report {
                command,
                inputs_digest: ctx.digest.hex(),
                verdicts: Vec::new(),
                witnesses: None,
                error: Some(msg.clone()),
            };
            (2, report, format!("error: {msg}\n"))
        }
    };
    let stdout = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    RunOutput { code, stdout, stderr }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_parse_exactly() {
        assert_eq!(parse_point("1, -1/2,0.25").unwrap(), vec![rational::int(1), rational::rat(-1, 2), rational::rat(1, 4)]);
        assert!(parse_point("1,x").is_err());
    }

    #[test]
    fn json_errors_carry_paths() {
        let e = parse_json::<MeasureJson>(br#"{"atoms":[{"point":[1],"weight":true}]}"#).unwrap_err();
        assert!(e.0.contains("atoms[0].weight"), "{}", e.0);
    }

    #[test]
    fn nuclear_check_in_process() {
        let out = run(["symm", "nuclear", "check", "--s1", "0", "--s2", "1"]);
        assert_eq!(out.code, 0);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["verdicts"][1]["value"], json!(true));
    }

    #[test]
    fn bad_flags_exit_two() {
        assert_eq!(run(["symm", "frobnicate"]).code, 2);
        assert_eq!(run(["symm", "nuclear", "check", "--s1", "x", "--s2", "1"]).code, 2);
    }
}

//! Command-line front end.
//!
//! Exit codes: 0 when every exact check passes, 1 when a check fails (or a
//! parameter lies outside the positivity domain), 2 for usage and config errors.
//! Values from `--config FILE` override flags, flags override defaults.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hchain_core::fit::{build_casimir, fit_ternary};
use hchain_core::spectrum::{ladder, Spacing};
use hchain_core::systems::{build_chain, classical_c_system, classical_q_system, quantum_c_system, quantum_q_system};
use hchain_core::systems::{ChainLabel, Family, Regime, SystemKind};
use hchain_core::{reference, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::json;

use crate::checks::{verify_all, verify_chain, verify_system, Verification};
use crate::numeric::action::quantum_action_check;
use crate::numeric::float::Params;
use crate::numeric::grid::{default_domain, grid_study, GridSpec, Stencil};
use crate::numeric::integrator::{convergence_study, TrajectorySetup};
use crate::numeric::oracle::{compare_with_oracle, SeparableOracle};
use crate::output::{spectrum_csv, spectrum_json, spectrum_svg};
use crate::report::{Report, RunManifest};

#[derive(Parser, Debug)]
#[command(name = "hchain", version, about = "Exact verification and spectra of anisotropic-oscillator Hamiltonian chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Run every exact check for a system or chain.
    Verify,
    /// Fit the ternary algebra of a system.
    Fit,
    /// Casimir of a system reduced to a polynomial in H.
    Casimir,
    /// Enumerate a chain spectrum.
    Spectrum,
    /// Integrate a classical system or chain and report drift of its integrals.
    Simulate,
    /// Numerical oracles: separable spectrum and 1D grids (chains), operator action (quantum systems).
    Oracle,
    /// Every finding of every verification run.
    Report,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Fit => "fit",
            Command::Casimir => "casimir",
            Command::Spectrum => "spectrum",
            Command::Simulate => "simulate",
            Command::Oracle => "oracle",
            Command::Report => "report",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
    Md,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpacingArg {
    Oscillator,
    Unit,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Flags {
    /// TOML file whose keys override the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// q-classical, c-classical, q-quantum or c-quantum.
    #[arg(long, global = true)]
    pub system: Option<String>,
    /// 1,1,2 1,2,2 1,2,4 or 1,2,4,8.
    #[arg(long, global = true)]
    pub chain: Option<String>,
    /// Base frequency μ (exact decimal or fraction).
    #[arg(long, global = true)]
    pub mu: Option<String>,
    #[arg(long, global = true)]
    pub mu1: Option<String>,
    #[arg(long, global = true)]
    pub mu2: Option<String>,
    #[arg(long, global = true)]
    pub mu3: Option<String>,
    #[arg(long, global = true)]
    pub mu4: Option<String>,
    #[arg(long, global = true)]
    pub hbar: Option<String>,
    /// Largest quantum-number label enumerated.
    #[arg(long, global = true)]
    pub bound: Option<u32>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Directory for output files; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Compare spectrum rows with the separable oracle.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Also write an SVG level diagram.
    #[arg(long, global = true)]
    pub plot: bool,
    #[arg(long, value_enum, global = true)]
    pub spacing: Option<SpacingArg>,
    /// Integrator step.
    #[arg(long, global = true)]
    pub step: Option<f64>,
    /// Integration horizon.
    #[arg(long, global = true)]
    pub horizon: Option<f64>,
    /// Initial phase point `x1,…,p1,…`.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub state: Option<Vec<f64>>,
    /// Extra numeric parameter `name=value` (repeatable).
    #[arg(long = "param", global = true)]
    pub params: Vec<String>,
    #[arg(long, global = true)]
    pub grid_points: Option<usize>,
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    #[arg(long, global = true)]
    pub length: Option<f64>,
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Number of lowest levels compared by the grid oracle.
    #[arg(long, global = true)]
    pub count: Option<usize>,
}

/// Keys accepted in the config file.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    system: Option<String>,
    chain: Option<String>,
    mu: Option<String>,
    mu1: Option<String>,
    mu2: Option<String>,
    mu3: Option<String>,
    mu4: Option<String>,
    hbar: Option<String>,
    bound: Option<u32>,
    format: Option<Format>,
    out: Option<PathBuf>,
    seed: Option<u64>,
    spacing: Option<SpacingArg>,
    step: Option<f64>,
    horizon: Option<f64>,
    state: Option<Vec<f64>>,
    grid_points: Option<usize>,
    eps: Option<f64>,
    length: Option<f64>,
    tolerance: Option<f64>,
    count: Option<usize>,
    params: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Check(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Flags after the config file has been applied.
#[derive(Debug, Clone)]
pub struct Settings {
    pub flags: Flags,
    pub extra: BTreeMap<String, f64>,
}

macro_rules! overlay {
    ($f:expr, $c:expr, $($field:ident),*) => {
        $( if let Some(v) = $c.$field { $f.$field = Some(v); } )*
    };
}

impl Settings {
    pub fn load(flags: Flags) -> Result<Self, CliError> {
        let mut f = flags;
        let mut extra = BTreeMap::new();
        for p in &f.params {
            let (k, v) = p.split_once('=').ok_or_else(|| usage(format!("--param expects name=value, got `{p}`")))?;
            let v: f64 = v.trim().parse().map_err(|_| usage(format!("--param {k}: `{v}` is not a number")))?;
            extra.insert(k.trim().to_string(), v);
        }
        if let Some(path) = f.config.clone() {
            let text = fs::read_to_string(&path).map_err(|e| usage(format!("config {}: {e}", path.display())))?;
            let c: ConfigFile = toml::from_str(&text).map_err(|e| usage(format!("config {}: {e}", path.display())))?;
            extra.extend(c.params.clone().unwrap_or_default());
            overlay!(
                f, c, system, chain, mu, mu1, mu2, mu3, mu4, hbar, bound, format, out, seed, spacing, step, horizon,
                state, grid_points, eps, length, tolerance, count
            );
        }
        Ok(Settings { flags: f, extra })
    }

    fn system(&self) -> Result<Option<SystemKind>, CliError> {
        self.flags.system.as_deref().map(|s| s.parse::<SystemKind>().map_err(usage)).transpose()
    }

    fn chain(&self) -> Result<Option<ChainLabel>, CliError> {
        self.flags.chain.as_deref().map(|s| s.parse::<ChainLabel>().map_err(usage)).transpose()
    }

    fn exact(&self, name: &str, v: &Option<String>, default: &str) -> Result<Scalar, CliError> {
        v.as_deref().unwrap_or(default).parse::<Scalar>().map_err(|_| usage(format!("--{name}: not an exact number")))
    }

    /// `μ₁ … μ_n`, defaulting to ½.
    fn couplings(&self, n: usize) -> Result<Vec<Scalar>, CliError> {
        let f = &self.flags;
        let all = [&f.mu1, &f.mu2, &f.mu3, &f.mu4];
        (0..n).map(|i| self.exact(&format!("mu{}", i + 1), all[i], "1/2")).collect()
    }

    fn spacing(&self) -> Spacing {
        match self.flags.spacing {
            Some(SpacingArg::Unit) => Spacing::Unit,
            _ => Spacing::Oscillator,
        }
    }

    fn manifest(&self, cmd: Command, selector: &str) -> RunManifest {
        let f = &self.flags;
        let mut m = RunManifest::new(cmd.name(), selector).seed(f.seed);
        let named = [
            ("mu", &f.mu),
            ("mu1", &f.mu1),
            ("mu2", &f.mu2),
            ("mu3", &f.mu3),
            ("mu4", &f.mu4),
            ("hbar", &f.hbar),
        ];
        for (k, v) in named {
            if let Some(v) = v {
                m = m.param(k, v);
            }
        }
        if let Some(b) = f.bound {
            m = m.param("bound", b);
        }
        for (k, v) in &self.extra {
            m = m.param(k, v);
        }
        m
    }
}

fn write_or_print(out: &Option<PathBuf>, name: &str, body: &str) -> Result<(), CliError> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(Path::new(dir).join(name), body)?;
        }
        None => print!("{body}"),
    }
    Ok(())
}

fn file_stem(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect()
}

fn emit_report(s: &Settings, report: &Report, stem: &str) -> Result<(), CliError> {
    match s.flags.format.unwrap_or(Format::Json) {
        Format::Md => write_or_print(&s.flags.out, &format!("{stem}.md"), &report.to_markdown()),
        Format::Json => write_or_print(&s.flags.out, &format!("{stem}.json"), &report.to_json()),
        other => Err(usage(format!("{other:?} is not a report format (json or md)"))),
    }
}

fn require_passed(report: &Report) -> Result<(), CliError> {
    match report.exact_failures.first() {
        None => Ok(()),
        Some(f) => Err(CliError::Check(format!("{}: {} ({})", f.selector, f.item.name, f.item.detail))),
    }
}

fn one_selector(s: &Settings) -> Result<(String, Verification), CliError> {
    match (s.system()?, s.chain()?) {
        (Some(k), None) => Ok((k.to_string(), verify_system(k))),
        (None, Some(c)) => Ok((format!("chain-{c}"), verify_chain(c))),
        _ => Err(usage("give exactly one of --system or --chain")),
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let s = Settings::load(cli.flags)?;
    let cmd = cli.command;
    match cmd {
        Command::Verify => {
            let (sel, v) = one_selector(&s)?;
            let report = Report::new(s.manifest(cmd, &sel), vec![v]);
            emit_report(&s, &report, &format!("verify-{}", file_stem(&sel)))?;
            require_passed(&report)
        }
        Command::Report => {
            let report = Report::new(s.manifest(cmd, "all"), verify_all());
            emit_report(&s, &report, "report")?;
            require_passed(&report)
        }
        Command::Fit | Command::Casimir => fit_or_casimir(&s, cmd),
        Command::Spectrum => spectrum(&s),
        Command::Simulate => simulate(&s),
        Command::Oracle => oracle(&s),
    }
}

fn fit_or_casimir(s: &Settings, cmd: Command) -> Result<(), CliError> {
    let kind = s.system()?.ok_or_else(|| usage("--system is required"))?;
    macro_rules! go {
        ($sys:expr) => {{
            let sys = $sys.map_err(|e| CliError::Check(e.to_string()))?;
            let fit = fit_ternary(&sys).map_err(|e| CliError::Check(e.to_string()))?;
            if cmd == Command::Fit {
                let cmp: Vec<_> = reference::compare_constants(&fit, kind)
                    .iter()
                    .map(|c| json!({"name": c.name, "published": c.expected.to_string(), "matches": c.matches()}))
                    .collect();
                json!({
                    "constants": fit.constants.iter().map(|(n, c)| json!({"name": n, "value": c.to_string()})).collect::<Vec<_>>(),
                    "ties": fit.ties.iter().map(|t| json!({"term": t.term, "constant": t.constant, "holds": t.holds})).collect::<Vec<_>>(),
                    "published": cmp,
                })
            } else {
                let cas = build_casimir(&fit, &sys).map_err(|e| CliError::Check(e.to_string()))?;
                json!({
                    "reduction": cas.reduction.to_string(),
                    "coefficients": (0..=5).map(|i| cas.coefficient(i).to_string()).collect::<Vec<_>>(),
                    "regeneration": cas.regeneration,
                })
            }
        }};
    }
    let body = match (kind.family, kind.regime) {
        (Family::Cubic, Regime::Classical) => go!(classical_c_system()),
        (Family::Quadratic, Regime::Classical) => go!(classical_q_system()),
        (Family::Cubic, Regime::Quantum) => go!(quantum_c_system()),
        (Family::Quadratic, Regime::Quantum) => go!(quantum_q_system()),
    };
    let doc = json!({"manifest": s.manifest(cmd, &kind.to_string()), "result": body});
    let text = serde_json::to_string_pretty(&doc).expect("json") + "\n";
    write_or_print(&s.flags.out, &format!("{}-{}.json", cmd.name(), kind), &text)
}

fn spectrum(s: &Settings) -> Result<(), CliError> {
    let chain = s.chain()?.ok_or_else(|| usage("--chain is required"))?;
    let l = ladder(chain, s.spacing()).map_err(|e| CliError::Check(e.to_string()))?;
    let mu = s.couplings(chain.dim())?;
    let table = l.enumerate(&mu, s.flags.bound.unwrap_or(3)).map_err(|e| {
        let bounds: Vec<String> = l.bounds.iter().map(|b| format!("mu{} > {}", b.mu, b.above)).collect();
        CliError::Check(format!("{e}; domain: {}", bounds.join(", ")))
    })?;
    let cmp = if s.flags.oracle {
        let n = chain.dim();
        let next = l.energies_at(&vec![s.flags.bound.unwrap_or(3) as i64 + 1; n], &mu).pop().expect("energies");
        Some(compare_with_oracle(&table, &next))
    } else {
        None
    };
    let stem = format!("spectrum-{}", file_stem(&chain.to_string()));
    let manifest = s.manifest(Command::Spectrum, &chain.to_string()).param("spacing", s.spacing().name());
    match s.flags.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let csv = spectrum_csv(&table, cmp.as_ref()).map_err(|e| CliError::Io(std::io::Error::other(e)))?;
            write_or_print(&s.flags.out, &format!("{stem}.csv"), &csv)?;
        }
        Format::Json => {
            let v = spectrum_json(&table, &manifest, cmp.as_ref());
            write_or_print(&s.flags.out, &format!("{stem}.json"), &(serde_json::to_string_pretty(&v).expect("json") + "\n"))?;
        }
        Format::Svg => write_or_print(&s.flags.out, &format!("{stem}.svg"), &spectrum_svg(&table))?,
        Format::Md => return Err(usage("spectrum formats are csv, json and svg")),
    }
    if s.flags.plot && s.flags.format != Some(Format::Svg) {
        let dir = s.flags.out.clone().unwrap_or_else(|| PathBuf::from("."));
        write_or_print(&Some(dir), &format!("{stem}.svg"), &spectrum_svg(&table))?;
    }
    match cmp {
        Some(c) if !c.all_ok() => Err(CliError::Check(format!("oracle: missing {:?}, not joint {:?}", c.missing, c.not_joint))),
        _ => Ok(()),
    }
}

/// Default numeric parameters of each selector.
pub fn default_params(system: Option<SystemKind>, chain: Option<ChainLabel>) -> Params {
    let mut p = Params::new();
    let mut set = |k: &str, v: f64| {
        p.insert(k.to_string(), v);
    };
    if let Some(k) = system {
        match k.family {
            Family::Cubic => {
                set("kappa", 0.5);
                set("kappa1", 0.375);
                set("kappa2", 0.375);
                set("r", 0.0);
            }
            Family::Quadratic => {
                set("lambda", 0.5);
                set("lambda1", 0.375);
                set("lambda2", 0.625);
                set("s", 0.0);
            }
        }
        if k.regime == Regime::Quantum {
            set("hbar", 1.0);
        }
    }
    if chain.is_some() {
        set("k", 0.5);
        for (i, v) in [0.375, 0.625, 0.5, 0.75].iter().enumerate() {
            set(&format!("k{}", i + 1), *v);
        }
    }
    p
}

pub fn default_state(dim: usize) -> Vec<f64> {
    let x = [1.0, 0.7, 0.9, 1.1];
    let p = [0.3, -0.2, 0.25, -0.15];
    x[..dim].iter().chain(&p[..dim]).copied().collect()
}

fn simulate(s: &Settings) -> Result<(), CliError> {
    let (setup, sel) = match (s.system()?, s.chain()?) {
        (Some(k), None) if k.regime == Regime::Classical => {
            let sys = match k.family {
                Family::Cubic => classical_c_system(),
                Family::Quadratic => classical_q_system(),
            }
            .map_err(|e| CliError::Check(e.to_string()))?;
            (TrajectorySetup::system(&sys), k.to_string())
        }
        (None, Some(c)) => {
            let chain = build_chain(c).map_err(|e| CliError::Check(e.to_string()))?;
            (TrajectorySetup::chain(&chain), format!("chain-{c}"))
        }
        _ => return Err(usage("simulate takes a classical --system or a --chain")),
    };
    let mut params = default_params(s.system()?, s.chain()?);
    params.extend(s.extra.clone());
    let mut state = s.flags.state.clone().unwrap_or_else(|| default_state(setup.table.dim()));
    if let Some(seed) = s.flags.seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for z in &mut state {
            *z += rng.gen_range(-0.05..0.05);
        }
    }
    let h = s.flags.step.unwrap_or(1e-4);
    let horizon = s.flags.horizon.unwrap_or(10.0);
    let tol = s.flags.tolerance.unwrap_or(1e-9);
    let study = convergence_study(&setup, &params, &state, h, horizon, 1e-3).map_err(|e| CliError::Check(e.to_string()))?;
    let doc = json!({
        "manifest": s.manifest(Command::Simulate, &sel).param("step", h).param("horizon", horizon).param("tolerance", tol),
        "params": params,
        "convergence": study,
    });
    write_or_print(&s.flags.out, &format!("simulate-{}.json", file_stem(&sel)), &(serde_json::to_string_pretty(&doc).expect("json") + "\n"))?;
    let worst = study.coarse.max_drift();
    if worst < tol {
        Ok(())
    } else {
        Err(CliError::Check(format!("drift {worst:e} exceeds tolerance {tol:e} at step {h}")))
    }
}

fn oracle(s: &Settings) -> Result<(), CliError> {
    let tol = s.flags.tolerance.unwrap_or(1e-4);
    match (s.system()?, s.chain()?) {
        (Some(k), None) if k.regime == Regime::Quantum => {
            let sys = match k.family {
                Family::Cubic => quantum_c_system(),
                Family::Quadratic => quantum_q_system(),
            }
            .map_err(|e| CliError::Check(e.to_string()))?;
            let mut params = default_params(Some(k), None);
            params.extend(s.extra.clone());
            let tests = match k.family {
                Family::Cubic => ["x1^3*x2^2", "x1^2*x2 + x2^3"],
                Family::Quadratic => ["q1^2*q2", "q1*q2^3 + q1^2"],
            };
            let tests: Vec<_> = tests.iter().map(|t| hchain_core::parse::poly(&sys.table, t)).collect();
            let pts = vec![vec![0.7, 1.3], vec![1.1, -0.4], vec![-0.9, 0.6]];
            let r = quantum_action_check(&sys, &tests, &params, &pts).map_err(|e| CliError::Check(e.to_string()))?;
            let doc = json!({"manifest": s.manifest(Command::Oracle, &k.to_string()), "action": r});
            write_or_print(&s.flags.out, &format!("oracle-{k}.json"), &(serde_json::to_string_pretty(&doc).expect("json") + "\n"))?;
            if r.max_residual() < 1e-12 {
                Ok(())
            } else {
                Err(CliError::Check(format!("operator action residual {:e}", r.max_residual())))
            }
        }
        (None, Some(c)) => {
            let mu_i = s.couplings(c.dim())?;
            let mu = s.exact("mu", &s.flags.mu, "1")?.to_f64();
            let hbar = s.exact("hbar", &s.flags.hbar, "1")?.to_f64();
            let count = s.flags.count.unwrap_or(3);
            let oracle = SeparableOracle::new(c, &mu_i);
            let levels = oracle.float_levels(c.dim(), hbar, mu, 10);
            let mut grids = Vec::new();
            let mut worst = 0.0f64;
            for (i, m) in mu_i.iter().enumerate() {
                let omega = c.ratios()[i] as f64 * mu;
                let nu = m.to_f64();
                let (eps0, len0) = default_domain(omega, nu, hbar, count);
                let spec = GridSpec {
                    points: s.flags.grid_points.unwrap_or(201),
                    eps: s.flags.eps.unwrap_or(eps0),
                    length: s.flags.length.unwrap_or(len0),
                    stencil: Stencil::Numerov,
                };
                let g = grid_study(omega, nu, hbar, spec, count).map_err(|e| CliError::Check(e.to_string()))?;
                worst = worst.max(g.max_relative_error);
                grids.push(g);
            }
            let doc = json!({
                "manifest": s.manifest(Command::Oracle, &c.to_string()),
                "separable_levels": levels,
                "grids": grids,
            });
            write_or_print(
                &s.flags.out,
                &format!("oracle-{}.json", file_stem(&c.to_string())),
                &(serde_json::to_string_pretty(&doc).expect("json") + "\n"),
            )?;
            if worst < tol {
                Ok(())
            } else {
                Err(CliError::Check(format!("grid error {worst:e} exceeds {tol:e}")))
            }
        }
        _ => Err(usage("oracle takes a quantum --system or a --chain")),
    }
}

//! Command-line front end of the laboratory.
//!
//! Every command writes `report.json` (inputs, outputs, library version,
//! seed) and `data.csv` (long format, header [`CSV_HEADER`]) into the output
//! directory. Exit codes: 0 success, 1 I/O failure, 2 configuration error,
//! 3 failed check under `--assert`.

pub mod args;
pub mod config;

use std::fmt::Write as _;
use std::path::Path;

use clap::Parser;
use serde_json::{json, Value};

use lqlab_core::applications::{
    dm_upper_bound, rip_certify, rip_certify_batch, section_diameter, RadiusChoice, SectionOptions,
};
use lqlab_core::bounds::{
    calibrate_constant, evaluate, fit_scaling_exponent, theorem_main_rhs, Observation,
};
use lqlab_core::chaining::{
    build_admissible_sequence, chain_diagnostics, gamma2_upper_dudley, gamma2_upper_from_sequence,
    ChainMetric, DEFAULT_EPS_LEVELS,
};
use lqlab_core::ensembles::sample_batch;
use lqlab_core::index_sets::{epsilon_net_with, mean_width, NetMetric, NetOptions};
use lqlab_core::process::{run_trials, SearchOptions};
use lqlab_core::rng::mix;
use lqlab_core::{
    BoundInputs, EnsembleSpec, Family, IndexSet, LabError, ProcessConfig, RhsForm, SampleBatch,
    TrialSummary, Verdict,
};

use args::{
    BoundArgs, CalibrateArgs, Cli, Command, DiagArgs, EnsembleName, FormName, RipArgs,
    ScalingArgs, SearchArgs, SectionsArgs, SetArgs, SetName, SimulateArgs,
};
use config::RunConfig;

pub const CSV_HEADER: &str = "trial,N,d,q,statistic,value,seed";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_ASSERT: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Lab(LabError),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Lab(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<LabError> for CliError {
    fn from(e: LabError) -> Self {
        CliError::Lab(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<config::ConfigError> for CliError {
    fn from(e: config::ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => EXIT_IO,
            _ => EXIT_CONFIG,
        }
    }
}

fn config_err<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Config(msg.into()))
}

/// One long-format CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub trial: usize,
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub q: f64,
    pub statistic: &'static str,
    pub value: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub passed: bool,
    pub detail: String,
}

/// Result of a command before it is written to disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub outputs: Value,
    pub rows: Vec<Row>,
    pub check: Check,
}

/// Parse `argv` (program name first), run the command and return the exit
/// code.
pub fn run(argv: Vec<String>) -> i32 {
    let program = argv.first().cloned().unwrap_or_else(|| "lqlab".into());
    let resolved = match RunConfig::resolve(argv.get(1..).unwrap_or(&[])) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let cli = match Cli::try_parse_from(clap_argv(&resolved, &program)) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command, &resolved) {
        Ok(check) => {
            if cli.command.common().assert && !check.passed {
                eprintln!("assertion failed: {}", check.detail);
                EXIT_ASSERT
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Canonical argv for clap; help and version switches take no value.
fn clap_argv(cfg: &RunConfig, program: &str) -> Vec<String> {
    cfg.to_argv(program)
        .into_iter()
        .map(|a| match a.as_str() {
            "--help=true" => "--help".into(),
            "--version=true" => "--version".into(),
            _ => a,
        })
        .collect()
}

fn configure_threads(requested: Option<usize>) {
    let threads = requested.or_else(|| {
        std::env::var("LQLAB_THREADS")
            .ok()
            .and_then(|v| v.trim().parse().ok())
    });
    if let Some(t) = threads.filter(|&t| t > 0) {
        // Only fails if the pool already exists; the hint is then ignored.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
}

/// Run a parsed command and write its artifacts.
pub fn execute(command: &Command, resolved: &RunConfig) -> Result<Check, CliError> {
    let common = command.common();
    configure_threads(common.threads);
    let outcome = match command {
        Command::Simulate(a) => simulate(a)?,
        Command::Bound(a) => bound(a)?,
        Command::Scaling(a) => scaling(a)?,
        Command::Rip(a) => rip(a)?,
        Command::Sections(a) => sections(a)?,
        Command::Diag(a) => diag(a)?,
        Command::Calibrate(a) => calibrate(a)?,
    };
    let mut echo = resolved.params.clone();
    echo.remove("out");
    let report = json!({
        "command": command.name(),
        "version": VERSION,
        "seed": common.seed,
        "config": echo,
        "inputs": command,
        "outputs": outcome.outputs,
        "assertion": {
            "requested": common.assert,
            "passed": outcome.check.passed,
            "detail": outcome.check.detail,
        },
    });
    write_artifacts(&common.out, &report, &outcome.rows)?;
    Ok(outcome.check)
}

fn write_artifacts(dir: &Path, report: &Value, rows: &[Row]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    let mut text = serde_json::to_string_pretty(report).map_err(std::io::Error::other)?;
    text.push('\n');
    std::fs::write(dir.join("report.json"), text)?;
    std::fs::write(dir.join("data.csv"), render_csv(rows))?;
    Ok(())
}

pub fn render_csv(rows: &[Row]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.trial,
            opt(r.n),
            opt(r.d),
            r.q,
            r.statistic,
            r.value,
            r.seed
        );
    }
    out
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| CliError::Config(format!("bad {what} entry `{t}`")))
        })
        .collect()
}

/// `start:stop:xFACTOR` (geometric, stop included when hit) or a
/// comma-separated list.
pub fn parse_grid(s: &str) -> Result<Vec<usize>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [start, stop, step] => {
            let start: usize = start
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("bad grid start in `{s}`")))?;
            let stop: usize = stop
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("bad grid stop in `{s}`")))?;
            let factor: usize = step
                .trim()
                .strip_prefix('x')
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| CliError::Config(format!("grid step must be `xK` in `{s}`")))?;
            if start == 0 || factor < 2 || stop < start {
                return config_err(format!("grid `{s}` needs 1 <= start <= stop and K >= 2"));
            }
            let mut g = Vec::new();
            let mut n = start;
            while n <= stop {
                g.push(n);
                n = match n.checked_mul(factor) {
                    Some(next) => next,
                    None => break,
                };
            }
            g
        }
        [_] => parse_list(s, "grid")?,
        _ => return config_err(format!("cannot parse grid `{s}`")),
    };
    if grid.is_empty() || grid.contains(&0) {
        return config_err(format!("grid `{s}` must list positive sample sizes"));
    }
    Ok(grid)
}

fn parse_p(s: &str) -> Result<f64, CliError> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        t => t
            .parse()
            .map_err(|_| CliError::Config(format!("bad exponent `{s}`"))),
    }
}

pub fn build_set(a: &SetArgs) -> Result<IndexSet, CliError> {
    let set = match a.set {
        SetName::Sphere => IndexSet::sphere(a.d, a.radius),
        SetName::Ball => IndexSet::ball(a.d, a.radius),
        SetName::L1 => IndexSet::l1_ball(a.d, a.radius),
        SetName::Sparse => IndexSet::sparse_sphere(a.d, a.sparsity, a.radius),
        SetName::Ellipsoid => {
            let axes = match &a.semiaxes {
                Some(s) => parse_list(s, "semiaxis")?,
                None => vec![1.0; a.d],
            };
            if axes.len() != a.d {
                return config_err(format!("{} semiaxes given for d = {}", axes.len(), a.d));
            }
            IndexSet::ellipsoid(axes)
        }
    };
    set.validate()?;
    Ok(set)
}

pub fn build_ensemble(a: &SetArgs) -> EnsembleSpec {
    let family = match a.ensemble {
        EnsembleName::Gaussian => Family::Gaussian,
        EnsembleName::Rademacher => Family::Rademacher,
        EnsembleName::BoundedUniform => Family::BoundedUniform,
    };
    EnsembleSpec::new(family, a.d)
}

/// Dense comma-separated matrix, one observation per line.
pub fn read_matrix(path: &Path) -> Result<SampleBatch, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read matrix {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = parse_list(line, "matrix")
            .map_err(|e| CliError::Config(format!("matrix line {}: {e}", i + 1)))?;
        rows.push(row);
    }
    Ok(SampleBatch::from_rows(rows)?)
}

fn matrix_for(path: &Path, set: &IndexSet) -> Result<SampleBatch, CliError> {
    let batch = read_matrix(path)?;
    if batch.dim() != set.dim {
        return config_err(format!(
            "matrix has {} columns but the set lives in dimension {}",
            batch.dim(),
            set.dim
        ));
    }
    Ok(batch)
}

fn form_of(f: FormName) -> RhsForm {
    match f {
        FormName::Tail => RhsForm::Tail,
        FormName::Moment => RhsForm::Moment,
    }
}

/// Chaining functional and diameter of the set in the sub-Gaussian
/// increment metric of the ensemble.
fn complexity(set: &IndexSet, ens: &EnsembleSpec) -> Result<(f64, f64), CliError> {
    let kappa = ens.psi2_constant();
    let gamma2 = gamma2_upper_dudley(set, ChainMetric::Psi2Proxy { kappa }, DEFAULT_EPS_LEVELS)?;
    Ok((gamma2.value, kappa * set.l2_diameter()))
}

fn process_config(
    set: &SetArgs,
    search: &SearchArgs,
    q: f64,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<ProcessConfig, CliError> {
    let mut cfg = ProcessConfig::new(build_set(set)?, build_ensemble(set), q, n);
    cfg.trials = trials;
    cfg.net_max_points = search.net_max_points;
    cfg.ascent_restarts = search.restarts;
    cfg.ascent_steps = search.steps;
    cfg.seed = seed;
    cfg.validate()?;
    Ok(cfg)
}

fn trial_rows(s: &TrialSummary, d: usize, rows: &mut Vec<Row>) {
    let c = &s.config;
    for (t, (&v, &seed)) in s.values.iter().zip(&s.seeds).enumerate() {
        rows.push(Row {
            trial: t,
            n: Some(c.n_samples),
            d: Some(d),
            q: c.q,
            statistic: "sup_deviation",
            value: v,
            seed,
        });
    }
}

fn summary_json(s: &TrialSummary) -> Value {
    json!({
        "N": s.config.n_samples,
        "median": s.median,
        "q90": s.q90,
        "q95": s.quantile(0.95),
        "q99": s.q99,
        "tail": s.tail,
        "net_size": s.net_size,
    })
}

fn simulate(a: &SimulateArgs) -> Result<Outcome, CliError> {
    let mut cfg = process_config(&a.set, &a.search, a.q, a.n, a.trials, a.common.seed)?;
    if let Some(t) = &a.thresholds {
        let mut th: Vec<f64> = parse_list(t, "threshold")?;
        th.sort_by(f64::total_cmp);
        cfg.tail_thresholds = th;
    }
    let summary = run_trials(&cfg)?;
    let (gamma2, diam) = complexity(&cfg.set, &cfg.ensemble)?;
    let rhs = theorem_main_rhs(&BoundInputs::new(gamma2, diam, a.n, a.q, a.u).with_constant(a.c))?;
    let q95 = summary.quantile(0.95);
    let mut rows = Vec::new();
    trial_rows(&summary, a.set.d, &mut rows);
    let check = Check {
        passed: q95 <= rhs.value,
        detail: format!("q95 {q95:.6} vs bound {:.6} (C = {}, u = {})", rhs.value, a.c, a.u),
    };
    Ok(Outcome {
        outputs: json!({
            "summary": summary_json(&summary),
            "values": summary.values,
            "gamma2": gamma2,
            "diam": diam,
            "bound": rhs,
        }),
        rows,
        check,
    })
}

fn bound(a: &BoundArgs) -> Result<Outcome, CliError> {
    let inputs = BoundInputs::new(a.gamma2, a.diam, a.n, a.q, a.u).with_constant(a.c);
    let report = evaluate(&inputs, form_of(a.form))?;
    let row = |statistic, value| Row {
        trial: 0,
        n: Some(a.n),
        d: None,
        q: a.q,
        statistic,
        value,
        seed: a.common.seed,
    };
    let rows = vec![
        row("bound", report.value),
        row("complexity_terminal", report.terms.complexity_terminal),
        row("complexity_initial", report.terms.complexity_initial),
        row("deviation", report.terms.deviation),
    ];
    Ok(Outcome {
        check: Check {
            passed: report.value.is_finite(),
            detail: format!("bound value {}", report.value),
        },
        outputs: json!({ "bound": report.value, "report": report }),
        rows,
    })
}

/// Independent trials at each sample size; sizes share the root seed.
fn sweep(
    set: &SetArgs,
    search: &SearchArgs,
    q: f64,
    grid: &[usize],
    trials: usize,
    seed: u64,
) -> Result<Vec<TrialSummary>, CliError> {
    grid.iter()
        .map(|&n| {
            let cfg = process_config(set, search, q, n, trials, seed)?;
            Ok(run_trials(&cfg)?)
        })
        .collect()
}

fn scaling(a: &ScalingArgs) -> Result<Outcome, CliError> {
    let grid = parse_grid(&a.n_grid)?;
    if grid.len() < 2 {
        return config_err("a scaling fit needs at least two sample sizes");
    }
    let summaries = sweep(&a.set, &a.search, a.q, &grid, a.trials, a.common.seed)?;
    let mut rows = Vec::new();
    let mut pairs = Vec::new();
    for s in &summaries {
        trial_rows(s, a.set.d, &mut rows);
        rows.push(Row {
            trial: 0,
            n: Some(s.config.n_samples),
            d: Some(a.set.d),
            q: a.q,
            statistic: "median",
            value: s.median,
            seed: a.common.seed,
        });
        pairs.push((s.config.n_samples as f64, s.median));
    }
    let fit = fit_scaling_exponent(&pairs)?;
    let check = Check {
        passed: (a.slope_min..=a.slope_max).contains(&fit.slope),
        detail: format!(
            "slope {:.4} (r2 {:.4}) vs [{}, {}]",
            fit.slope, fit.r_squared, a.slope_min, a.slope_max
        ),
    };
    Ok(Outcome {
        outputs: json!({
            "fit": fit,
            "slope": fit.slope,
            "grid": grid,
            "summaries": summaries.iter().map(summary_json).collect::<Vec<_>>(),
        }),
        rows,
        check,
    })
}

fn rip(a: &RipArgs) -> Result<Outcome, CliError> {
    let set = build_set(&a.set)?;
    let mut query = lqlab_core::RipQuery::new(build_ensemble(&a.set), set, a.q, a.n);
    query.radius = if a.r.trim().eq_ignore_ascii_case("solve") {
        RadiusChoice::Solve
    } else {
        let radius = a
            .r
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("--R must be a number or `solve`, got `{}`", a.r)))?;
        RadiusChoice::Fixed { radius }
    };
    query.theta = a.theta;
    query.audit_vectors = a.audit;
    query.mc_budget = a.mc_budget;
    query.seed = a.common.seed;
    let cert = match &a.matrix {
        Some(path) => {
            let batch = matrix_for(path, &query.set)?;
            query.n = batch.n();
            rip_certify_batch(&batch, &query, a.window)?
        }
        None => rip_certify(&query, a.window)?,
    };
    let row = |statistic, value| Row {
        trial: 0,
        n: Some(query.n),
        d: Some(a.set.d),
        q: a.q,
        statistic,
        value,
        seed: cert.batch_seed,
    };
    let rows = vec![
        row("worst_lower", cert.worst_lower),
        row("worst_upper", cert.worst_upper),
        row("radius", cert.radius),
    ];
    let check = Check {
        passed: cert.verdict == Verdict::Certified,
        detail: format!(
            "{:?}: ratios in [{:.4}, {:.4}] vs window {}",
            cert.verdict, cert.worst_lower, cert.worst_upper, a.window
        ),
    };
    Ok(Outcome {
        outputs: json!({ "certificate": cert }),
        rows,
        check,
    })
}

fn sections(a: &SectionsArgs) -> Result<Outcome, CliError> {
    let set = build_set(&a.set)?;
    let ens = build_ensemble(&a.set);
    let p = parse_p(&a.p)?;
    let opts = SectionOptions {
        net_max_points: a.search.net_max_points,
        search: SearchOptions {
            restarts: a.search.restarts,
            steps: a.search.steps,
        },
        lambda_points: a.lambda_points,
        seed: a.common.seed,
        ..SectionOptions::default()
    };
    let batches: Vec<(u64, SampleBatch)> = match &a.matrix {
        Some(path) => vec![(a.common.seed, matrix_for(path, &set)?)],
        None => (0..a.trials)
            .map(|t| {
                let seed = mix(a.common.seed, t as u64);
                Ok((seed, sample_batch(&ens, a.n, seed)?))
            })
            .collect::<Result<_, CliError>>()?,
    };
    if batches.is_empty() {
        return config_err("sections needs at least one trial");
    }
    let n = batches[0].1.n();
    let ellstar = mean_width(&set, a.mc_budget, a.common.seed)?.value;
    let dm = dm_upper_bound(ellstar, set.l2_diameter(), n, p, a.c, 1.0)?;
    let mut rows = Vec::new();
    let mut estimates = Vec::new();
    for (t, (seed, batch)) in batches.iter().enumerate() {
        let est = section_diameter(batch, &set, p, &opts)?;
        rows.push(Row {
            trial: t,
            n: Some(n),
            d: Some(a.set.d),
            q: est.q,
            statistic: "section_diameter",
            value: est.value,
            seed: *seed,
        });
        estimates.push(est);
    }
    let worst = estimates.iter().map(|e| e.value).fold(0.0, f64::max);
    let check = if dm.below_threshold {
        Check {
            passed: worst <= dm.bound,
            detail: format!("largest diameter {worst:.6} vs bound {:.6}", dm.bound),
        }
    } else {
        Check {
            passed: true,
            detail: format!(
                "N = {n} exceeds the dimension threshold {:.3}; bound not applicable",
                dm.dimension_threshold
            ),
        }
    };
    Ok(Outcome {
        outputs: json!({
            "p": a.p,
            "ellstar": ellstar,
            "dm": dm,
            "largest": worst,
            "estimates": estimates,
        }),
        rows,
        check,
    })
}

fn diag(a: &DiagArgs) -> Result<Outcome, CliError> {
    let set = build_set(&a.set)?;
    let ens = build_ensemble(&a.set);
    let kappa = ens.psi2_constant();
    let diam = set.l2_diameter();
    let net = epsilon_net_with(
        &set,
        (a.eps_fraction * diam).max(1e-9),
        NetMetric::L2,
        a.common.seed,
        NetOptions {
            max_points: a.net_max_points.max(1),
            ..NetOptions::default()
        },
    )?;
    let metric = ChainMetric::Psi2Proxy { kappa };
    let seq = build_admissible_sequence(&net.points, a.level, metric)?;
    let seq_est = gamma2_upper_from_sequence(&seq, &net.points)?;
    let dudley = gamma2_upper_dudley(&set, metric, DEFAULT_EPS_LEVELS)?;
    let i = seq_est.argmax.unwrap_or(0);
    let chain = chain_diagnostics(&seq, &net.points, i, a.n)?;
    let audit = net.audit(&set, a.mc_budget, a.common.seed)?;
    let mut rows: Vec<Row> = chain
        .links
        .iter()
        .enumerate()
        .map(|(lvl, &v)| Row {
            trial: lvl,
            n: Some(a.n),
            d: Some(a.set.d),
            q: 0.0,
            statistic: "chain_link",
            value: v,
            seed: a.common.seed,
        })
        .collect();
    for (statistic, value) in [
        ("gamma2_sequence", seq_est.value),
        ("gamma2_dudley", dudley.value),
        ("initial_sum", chain.initial_sum),
        ("terminal_sum", chain.terminal_sum),
    ] {
        rows.push(Row {
            trial: 0,
            n: Some(a.n),
            d: Some(a.set.d),
            q: 0.0,
            statistic,
            value,
            seed: a.common.seed,
        });
    }
    let identity = chain.total == chain.initial_sum + chain.terminal_sum;
    let complete = seq.is_complete();
    let check = Check {
        passed: identity && complete,
        detail: format!("partition identity {identity}, sequence complete {complete}"),
    };
    Ok(Outcome {
        outputs: json!({
            "net_size": net.len(),
            "net_truncated": net.truncated,
            "net_audit": audit,
            "level_sizes": seq.levels.iter().map(Vec::len).collect::<Vec<_>>(),
            "complete": complete,
            "gamma2_sequence": seq_est,
            "gamma2_dudley": dudley,
            "chain_point": net.points[i],
            "chain": chain,
        }),
        rows,
        check,
    })
}

fn calibrate(a: &CalibrateArgs) -> Result<Outcome, CliError> {
    if !(a.level > 0.0 && a.level < 1.0) {
        return config_err("--level must lie in (0, 1)");
    }
    let grid = parse_grid(&a.n_grid)?;
    let summaries = sweep(&a.set, &a.search, a.q, &grid, a.trials, a.common.seed)?;
    let (gamma2, diam) = complexity(&summaries[0].config.set, &summaries[0].config.ensemble)?;
    let mut rows = Vec::new();
    let mut obs = Vec::new();
    for s in &summaries {
        trial_rows(s, a.set.d, &mut rows);
        let value = s.quantile(a.level);
        rows.push(Row {
            trial: 0,
            n: Some(s.config.n_samples),
            d: Some(a.set.d),
            q: a.q,
            statistic: "quantile",
            value,
            seed: a.common.seed,
        });
        obs.push(Observation {
            inputs: BoundInputs::new(gamma2, diam, s.config.n_samples, a.q, a.u),
            value,
        });
    }
    let cal = calibrate_constant(&obs, form_of(a.form))?;
    let check = Check {
        passed: !cal.infeasible && cal.constant <= a.max_c,
        detail: format!(
            "constant {:.6} (infeasible {}) vs max {}",
            cal.constant, cal.infeasible, a.max_c
        ),
    };
    Ok(Outcome {
        outputs: json!({
            "constant": cal.constant,
            "infeasible": cal.infeasible,
            "gamma2": gamma2,
            "diam": diam,
            "level": a.level,
            "observations": obs.iter().map(|o| json!({"N": o.inputs.n, "value": o.value})).collect::<Vec<_>>(),
        }),
        rows,
        check,
    })
}

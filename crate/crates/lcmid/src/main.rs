//! Command-line front end: condition checks, simulation, counterexample
//! construction, standalone Kruskal rank, and bundled fixtures.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use lcmid::conditions::{
    assemble_report, check_a1, check_a2, check_a3, check_a4, check_c2, check_c3,
    check_c4_strict, check_c4doubleprime, check_c4prime_generic, check_c4star, check_local,
    check_p1, check_p2_completeness, Caps, ConditionVerdict, ModelKind, ReportOptions, Status,
};
use lcmid::counterexample::{construct_prop2_pair_auto, max_param_deviation, verify_distribution_equality};
use lcmid::error::Error;
use lcmid::io::{load_matrix, load_params, load_qmatrix, save_dataset, save_json, save_qmatrix, ParamsFile};
use lcmid::linalg::kruskal_rank;
use lcmid::matrices::{build_jacobian, build_psi, Partition};
use lcmid::model::{
    enumerate_patterns_capped, gdina_to_gamma, zero_covariate_params, CoreParams,
    CovariateDesign, ModelSpec, QMatrix, RegressionParams,
};
use lcmid::sim::{simulate, SimConfig};

#[derive(Parser)]
#[command(
    name = "lcmid",
    about = "Identifiability analysis for latent class and cognitive-diagnosis models",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the identifiability conditions and write a report.
    Check(CheckArgs),
    /// Simulate a dataset under the regression links.
    Simulate(SimulateArgs),
    /// Construct a distribution-preserving parameter perturbation.
    Counterexample(CounterexampleArgs),
    /// Kruskal rank of a dense CSV matrix.
    Kruskal(KruskalArgs),
    /// Write a bundled Q-matrix fixture.
    Fixtures(FixturesArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Parameter document (JSON).
    #[arg(long)]
    params: PathBuf,
    /// Q-matrix (CSV); implies an attribute model unless --model says otherwise.
    #[arg(long)]
    q: Option<PathBuf>,
    /// Model kind override.
    #[arg(long, value_parser = ["reglcm", "regcdm"])]
    model: Option<String>,
    /// Item tripartition (comma-separated block indices 1..3, one per item)
    /// to score directly instead of searching.
    #[arg(long)]
    partition: Option<String>,
    /// Rank tolerance override (default: max(rows, cols) * eps * sigma_max).
    #[arg(long)]
    tol: Option<f64>,
    /// Budget override for the witness searches (Kruskal subset tests and
    /// assignment nodes).
    #[arg(long)]
    max_exhaustive: Option<u64>,
    /// Embed the probability and Jacobian matrices in the report.
    #[arg(long)]
    dump_matrices: bool,
    /// Let a failed structural generic condition refute generic
    /// identifiability in the one regime where it is necessary
    /// (two binary attributes, binary items).
    #[arg(long)]
    structural_necessity: bool,
    /// Exit with code 3 when any verdict was degraded by a resource cap.
    #[arg(long)]
    strict_exit: bool,
    /// Report destination (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Parameter document (JSON).
    #[arg(long)]
    params: PathBuf,
    /// Simulation configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Dataset destination (CSV).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CounterexampleArgs {
    /// Q-matrix (CSV).
    #[arg(long)]
    q: PathBuf,
    /// Parameter document (JSON).
    #[arg(long)]
    params: PathBuf,
    /// Scaling constant (shrunk toward 1 automatically when inadmissible).
    #[arg(long, default_value_t = 1.1)]
    e: f64,
    /// Pair destination (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct KruskalArgs {
    /// Dense matrix (CSV, no header).
    #[arg(long)]
    matrix: PathBuf,
    /// Rank tolerance override.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct FixturesArgs {
    /// Fixture name (timss_k7 or timss_k3).
    name: String,
    /// Destination (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Check(args) => run_check(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Counterexample(args) => run_counterexample(args),
        Command::Kruskal(args) => run_kruskal(args),
        Command::Fixtures(args) => run_fixtures(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::CapExceeded { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

/// Everything the checks need, derived once from the input files.
struct CheckInputs {
    spec: ModelSpec,
    kind: ModelKind,
    q: Option<QMatrix>,
    core: CoreParams,
    /// Regression coefficients, when the document defines the links.
    regression: Option<RegressionParams>,
    design: Option<CovariateDesign>,
}

fn resolve_inputs(file: ParamsFile, q: Option<QMatrix>, kind: ModelKind) -> Result<CheckInputs, Error> {
    let spec = file.spec;
    spec.validate()?;
    if let Some(q) = &q {
        if kind == ModelKind::RegCdm {
            let k = q.n_attributes();
            if spec.n_classes != 1usize << k {
                return Err(Error::InvalidSpec(format!(
                    "attribute model with {k} attributes needs {} classes, spec has {}",
                    1usize << k,
                    spec.n_classes
                )));
            }
        }
        if q.n_items() != spec.n_items() {
            return Err(Error::DimensionMismatch(
                "Q-matrix and specification disagree on the item count".into(),
            ));
        }
    }

    // Effective regression block: the document's, with attribute-effect
    // coefficients (when given) expanded into the response intercepts.
    let mut regression = file.regression;
    if let Some(gdina) = &file.gdina {
        let q = q.as_ref().ok_or_else(|| {
            Error::InvalidSpec("attribute-effect coefficients require a Q-matrix".into())
        })?;
        let gamma = gdina_to_gamma(gdina, q, &spec)?;
        let mut reg = regression.unwrap_or_else(|| RegressionParams::zeros(&spec));
        reg.gamma = gamma;
        regression = Some(reg);
    }
    if let Some(reg) = &regression {
        reg.validate(&spec)?;
    }

    let core = match file.core {
        Some(core) => {
            core.validate(&spec)?;
            core
        }
        None => {
            let reg = regression
                .clone()
                .unwrap_or_else(|| RegressionParams::zeros(&spec));
            zero_covariate_params(&reg)?
        }
    };

    let design = match file.design {
        Some(d) => Some(d.into_design(&spec)?),
        None => None,
    };

    Ok(CheckInputs {
        spec,
        kind,
        q,
        core,
        regression,
        design,
    })
}

fn parse_partition(text: &str, n_items: usize) -> Result<Partition, Error> {
    let blocks: Vec<u8> = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u8>()
                .map_err(|_| Error::InvalidSpec(format!("bad partition entry {t:?}")))
        })
        .collect::<Result<_, _>>()?;
    if blocks.len() != n_items {
        return Err(Error::InvalidSpec(format!(
            "partition has {} entries for {n_items} items",
            blocks.len()
        )));
    }
    Partition::new(blocks)
}

fn run_check(args: CheckArgs) -> Result<ExitCode, Error> {
    let file = load_params(&args.params)?;
    let q = args.q.as_ref().map(|p| load_qmatrix(p)).transpose()?;
    let kind = match args.model.as_deref() {
        Some("reglcm") => ModelKind::RegLcm,
        Some("regcdm") => ModelKind::RegCdm,
        Some(_) => unreachable!("clap validates the value"),
        None => {
            if q.is_some() {
                ModelKind::RegCdm
            } else {
                ModelKind::RegLcm
            }
        }
    };
    if kind == ModelKind::RegCdm && q.is_none() {
        return Err(Error::InvalidSpec(
            "an attribute model needs a Q-matrix (--q)".into(),
        ));
    }
    let inputs = resolve_inputs(file, q, kind)?;

    let mut caps = Caps::default();
    if let Some(budget) = args.max_exhaustive {
        caps.kruskal_subset_budget = budget;
        caps.assignment_node_budget = budget;
    }
    let partition = args
        .partition
        .as_deref()
        .map(|t| parse_partition(t, inputs.spec.n_items()))
        .transpose()?;

    let mut verdicts: Vec<ConditionVerdict> = Vec::new();
    let mut skipped: Vec<Value> = Vec::new();
    let mut cap_hit = false;

    verdicts.push(check_a1(&inputs.spec));
    let reg_for_a2 = inputs
        .regression
        .clone()
        .unwrap_or_else(|| RegressionParams::zeros(&inputs.spec));
    verdicts.push(check_a2(&reg_for_a2, inputs.design.as_ref()));
    verdicts.push(check_a3(inputs.design.as_ref(), &inputs.spec));
    verdicts.push(check_c2(&inputs.core));

    // Pattern-space-dependent checks run only when the space fits in memory.
    let space = match enumerate_patterns_capped(&inputs.spec, caps.pattern_cap) {
        Ok(space) => Some(space),
        Err(Error::CapExceeded { what, limit }) => {
            cap_hit = true;
            skipped.push(json!({
                "checks": ["C3", "A4", "local_jacobian", "C4"],
                "reason": format!("{what} exceeds the cap {limit}"),
            }));
            None
        }
        Err(other) => return Err(other),
    };

    let mut dumped = serde_json::Map::new();
    if let Some(space) = &space {
        verdicts.push(check_c3(&inputs.core, space, args.tol)?);
        if let Some(reg) = &inputs.regression {
            verdicts.push(check_a4(&reg.gamma, space, args.tol)?);
        }
        verdicts.push(check_local(&inputs.core, space, args.tol)?);
        let psi = build_psi(&inputs.core, space)?;
        verdicts.push(check_c4_strict(&psi, partition.as_ref(), &caps, args.tol));
        if args.dump_matrices {
            dumped.insert("psi".into(), matrix_to_json(&psi.values));
            let jac = build_jacobian(&inputs.core, space)?;
            dumped.insert("jacobian".into(), matrix_to_json(&jac.values));
        }
    }

    verdicts.push(check_c4prime_generic(&inputs.spec, partition.as_ref()));

    let mut options = ReportOptions {
        structural_necessity: args.structural_necessity,
        n_attributes: None,
        all_binary: inputs.spec.levels.iter().all(|&m| m == 2),
    };
    if let Some(q) = &inputs.q {
        options.n_attributes = Some(q.n_attributes());
        verdicts.push(check_c4star(q, &inputs.core));
        verdicts.push(check_c4doubleprime(q, &caps));
        verdicts.push(check_p1(q));
        verdicts.push(check_p2_completeness(q));
    }

    // Cap-degraded verdicts matter for --strict-exit.
    for v in &verdicts {
        if v.status == Status::Inconclusive {
            let reason = v.evidence["reason"].as_str().unwrap_or("");
            if reason.contains("cap") || reason.contains("budget") {
                cap_hit = true;
            }
        }
    }

    let report = assemble_report(verdicts, inputs.kind, caps, args.tol, &options);
    let mut root = report.to_json();
    if !skipped.is_empty() {
        root["skipped"] = Value::Array(skipped);
    }
    if !dumped.is_empty() {
        root["matrices"] = Value::Object(dumped);
    }
    emit(&root, args.out.as_deref())?;
    if args.strict_exit && cap_hit {
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn matrix_to_json(m: &nalgebra::DMatrix<f64>) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|i| Value::Array((0..m.ncols()).map(|j| json!(m[(i, j)])).collect()))
        .collect();
    Value::Array(rows)
}

fn emit(value: &Value, out: Option<&std::path::Path>) -> Result<(), Error> {
    match out {
        Some(path) => save_json(value, path),
        None => {
            println!("{}", serde_json::to_string_pretty(value)?);
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

fn run_simulate(args: SimulateArgs) -> Result<ExitCode, Error> {
    let file = load_params(&args.params)?;
    let spec = file.spec.clone();
    let mut regression = file.regression.clone();
    if let Some(gdina) = &file.gdina {
        return Err(Error::InvalidSpec(format!(
            "expand the {} attribute-effect items into regression intercepts via `check` \
             inputs; simulation expects an explicit regression block",
            gdina.coeffs.len()
        )));
    }
    let reg = regression
        .take()
        .ok_or_else(|| Error::InvalidSpec("simulation needs a regression block".into()))?;
    let text = std::fs::read_to_string(&args.config)?;
    let cfg: SimConfig = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: args.config.display().to_string(),
        line: e.line(),
        message: e.to_string(),
    })?;
    let data = simulate(&reg, &cfg, &spec)?;
    save_dataset(&data, &args.out)?;
    println!(
        "wrote {} subjects x {} items to {}",
        data.responses.len(),
        spec.n_items(),
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// counterexample
// ---------------------------------------------------------------------------

fn run_counterexample(args: CounterexampleArgs) -> Result<ExitCode, Error> {
    let file = load_params(&args.params)?;
    let q = load_qmatrix(&args.q)?;
    let inputs = resolve_inputs(file, Some(q.clone()), ModelKind::RegCdm)?;
    let (pair, used) = construct_prop2_pair_auto(&inputs.core, &q, args.e)?;

    let space = enumerate_patterns_capped(&inputs.spec, lcmid::model::DEFAULT_PATTERN_CAP)?;
    let (equal, deviation) =
        verify_distribution_equality(&pair.original, &pair.perturbed, &space, 1e-12)?;
    let param_dev = max_param_deviation(&pair.original, &pair.perturbed);

    let root = json!({
        "original": pair.original,
        "perturbed": pair.perturbed,
        "e": used,
        "lone_attribute": pair.lone_attribute,
        "lone_item": pair.lone_item,
        "mixed_pairs": pair.mixed_pairs,
        "distributions_equal": equal,
        "max_distribution_deviation": deviation,
        "max_parameter_deviation": param_dev,
    });
    emit(&root, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// kruskal
// ---------------------------------------------------------------------------

fn run_kruskal(args: KruskalArgs) -> Result<ExitCode, Error> {
    let m = load_matrix(&args.matrix)?;
    let result = kruskal_rank(&m, args.tol)?;
    println!("kruskal_rank: {}", result.k_rank);
    match &result.witness {
        Some(witness) => println!(
            "smallest_dependent_set: size {} at columns {:?}",
            result.k_rank + 1,
            witness
        ),
        None => println!("smallest_dependent_set: none (all column subsets independent)"),
    }
    println!(
        "subsets_tested: {} (tolerance {})",
        result.subsets_tested, result.tolerance_used
    );
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// fixtures
// ---------------------------------------------------------------------------

fn run_fixtures(args: FixturesArgs) -> Result<ExitCode, Error> {
    let q = lcmid::fixtures::fixture(&args.name)?;
    match &args.out {
        Some(path) => {
            save_qmatrix(&q, path)?;
            println!(
                "wrote {} x {} Q-matrix to {}",
                q.n_items(),
                q.n_attributes(),
                path.display()
            );
        }
        None => {
            for row in &q.entries {
                let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
                println!("{}", cells.join(","));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use commprob::catalog::{standard_catalog, GroupSpec};
use commprob::chartab::{character_table, export_table, import_table, verify_table, CharacterTable};
use commprob::config::stable_task_seed;
use commprob::error::Error;
use commprob::estimator::{
    bound_report, frobenius_c, frobenius_cg, gelfand_diagnostic, monte_carlo_xi, t_phi,
    brute_force_t, NonNegSampler,
};
use commprob::group::{conjugacy_classes, ClassData, GroupTable};
use commprob::optimizer::verify_regular_minimizer;
use commprob::oracle::{brute_force_counts, commuting_probability};
use commprob::vchar::{parse_char_expr, VirtualCharacter};
use commprob::RunConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

#[derive(Copy, Clone, Debug, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "commprob", version, about = "Commutator probabilities and character-ratio bounds")]
struct Cli {
    /// Optional JSON config file with budgets and tolerances.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Group summary: order, class count, class sizes.
    Group {
        #[arg(long)]
        group: String,
    },
    /// Compute, verify, export or import a character table.
    Chartab {
        #[arg(value_enum)]
        action: ChartabAction,
        #[arg(long)]
        group: Option<String>,
        /// Table file to verify/import, or export destination.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Per-class commutator probabilities.
    Cprob {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value = "both")]
        method: CprobMethod,
    },
    /// Evaluate a character-ratio bound against the exact oracle.
    Bound {
        #[arg(long)]
        group: String,
        /// Character expression: regular | gelfand | dimplus:<row> |
        /// tensor:<row> | perm | "c*row+c*row".
        #[arg(long = "char", allow_hyphen_values = true)]
        char_expr: String,
        /// Class index, or "all".
        #[arg(long, default_value = "all")]
        class: String,
    },
    /// Monte Carlo estimate of the bound variable's mean.
    Sample {
        #[arg(long)]
        group: String,
        #[arg(long = "char")]
        char_expr: String,
        #[arg(long, default_value = "0")]
        class: usize,
        #[arg(long, default_value = "100000")]
        samples: usize,
    },
    /// Soundness sweep over the builtin catalog.
    Sweep {
        /// Substring filter on group names.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, default_value = "200")]
        samples: usize,
    },
    /// Verify the regular character minimizes the constrained L1 problem.
    Optimize {
        #[arg(value_enum)]
        action: OptimizeAction,
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "500")]
        samples: usize,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ChartabAction {
    Compute,
    Verify,
    Export,
    Import,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum OptimizeAction {
    Verify,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum CprobMethod {
    Exact,
    Frobenius,
    Both,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::EmptyGeneratorList | Error::DegreeMismatch(..) | Error::UnknownFamily(_) => 2,
        Error::FormatError(_)
        | Error::InvariantViolation(_)
        | Error::OrthogonalityCheckFailed { .. }
        | Error::EigenDegeneracyUnresolved { .. }
        | Error::ImaginaryResidue(_)
        | Error::NonIntegerMultiplicity { .. }
        | Error::Io(_)
        | Error::Json(_) => 3,
        Error::NotNonNegative(_)
        | Error::PermutationCharacterNotFound(_)
        | Error::SamplingExhausted { .. } => 4,
        Error::OrderCapExceeded { .. }
        | Error::BudgetExceeded { .. }
        | Error::ClassBudgetExceeded { .. } => 5,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

struct GroupCtx {
    g: GroupTable,
    cd: ClassData,
}

fn load_config(cli: &Cli) -> Result<RunConfig, Error> {
    let mut cfg = match &cli.config {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn load_group(spec: &str, cfg: &RunConfig) -> Result<GroupCtx, Error> {
    let g = GroupSpec::parse_cli(spec)?.build(cfg)?;
    let cd = conjugacy_classes(&g);
    Ok(GroupCtx { g, cd })
}

fn table_seed(cfg: &RunConfig, name: &str) -> u64 {
    stable_task_seed(cfg.seed, name)
}

fn emit(cli: &Cli, json: String, csv: Option<String>) -> Result<(), Error> {
    let text = match (cli.format, csv) {
        (Format::Csv, Some(csv)) => csv,
        (Format::Csv, None) => {
            return Err(Error::FormatError(
                "this command has no CSV form; use --format json".into(),
            ))
        }
        (Format::Json, _) => json,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serialization cannot fail")
}

fn run(cli: &Cli) -> Result<(), Error> {
    let cfg = load_config(cli)?;
    match &cli.command {
        Command::Group { group } => cmd_group(cli, &cfg, group),
        Command::Chartab { action, group, file } => {
            cmd_chartab(cli, &cfg, *action, group.as_deref(), file.as_deref())
        }
        Command::Cprob { group, method } => cmd_cprob(cli, &cfg, group, *method),
        Command::Bound {
            group,
            char_expr,
            class,
        } => cmd_bound(cli, &cfg, group, char_expr, class),
        Command::Sample {
            group,
            char_expr,
            class,
            samples,
        } => cmd_sample(cli, &cfg, group, char_expr, *class, *samples),
        Command::Sweep { filter, samples } => cmd_sweep(cli, &cfg, filter.as_deref(), *samples),
        Command::Optimize {
            action: OptimizeAction::Verify,
            group,
            samples,
        } => cmd_optimize(cli, &cfg, group, *samples),
    }
}

#[derive(Serialize)]
struct GroupSummary {
    name: String,
    order: usize,
    class_count: usize,
    class_sizes: Vec<usize>,
    class_reps: Vec<String>,
}

fn cmd_group(cli: &Cli, cfg: &RunConfig, spec: &str) -> Result<(), Error> {
    let ctx = load_group(spec, cfg)?;
    let reps = ctx
        .cd
        .reps
        .iter()
        .map(|&r| match &ctx.g.element_labels {
            Some(labels) => labels[r].clone(),
            None => r.to_string(),
        })
        .collect();
    let summary = GroupSummary {
        name: ctx.g.name.clone(),
        order: ctx.g.order(),
        class_count: ctx.cd.class_count,
        class_sizes: ctx.cd.sizes.clone(),
        class_reps: reps,
    };
    let mut csv = String::from("name,order,class_count,class_sizes\n");
    csv.push_str(&format!(
        "{},{},{},{}\n",
        summary.name,
        summary.order,
        summary.class_count,
        summary
            .class_sizes
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    ));
    emit(cli, to_json(&summary), Some(csv))
}

fn compute_table(ctx: &GroupCtx, cfg: &RunConfig) -> Result<CharacterTable, Error> {
    character_table(&ctx.g, &ctx.cd, table_seed(cfg, &ctx.g.name), cfg)
}

#[derive(Serialize)]
struct ChartabSummary {
    group: String,
    order: usize,
    dims: Vec<u64>,
    verification: commprob::chartab::TableVerification,
}

fn cmd_chartab(
    cli: &Cli,
    cfg: &RunConfig,
    action: ChartabAction,
    group: Option<&str>,
    file: Option<&std::path::Path>,
) -> Result<(), Error> {
    let need_group = || {
        group.ok_or_else(|| Error::FormatError("this action needs --group".into()))
    };
    let need_file = || file.ok_or_else(|| Error::FormatError("this action needs --file".into()));
    match action {
        ChartabAction::Compute => {
            let ctx = load_group(need_group()?, cfg)?;
            let t = compute_table(&ctx, cfg)?;
            let summary = ChartabSummary {
                group: ctx.g.name.clone(),
                order: t.group_order,
                dims: t.dims.clone(),
                verification: verify_table(&t, cfg),
            };
            emit(cli, to_json(&summary), None)
        }
        ChartabAction::Export => {
            let ctx = load_group(need_group()?, cfg)?;
            let t = compute_table(&ctx, cfg)?;
            export_table(&t, need_file()?)?;
            emit(cli, to_json(&serde_json::json!({"exported": true})), None)
        }
        ChartabAction::Verify | ChartabAction::Import => {
            let t = import_table(need_file()?, cfg)?;
            let summary = ChartabSummary {
                group: String::new(),
                order: t.group_order,
                dims: t.dims.clone(),
                verification: verify_table(&t, cfg),
            };
            emit(cli, to_json(&summary), None)
        }
    }
}

#[derive(Serialize)]
struct CprobRow {
    group: String,
    class: usize,
    exact_num: Option<i64>,
    exact_den: Option<i64>,
    frobenius: Option<f64>,
    agree: Option<bool>,
}

#[derive(Serialize)]
struct CprobReport {
    group: String,
    commuting_probability_num: i64,
    commuting_probability_den: i64,
    /// k/|G|: must equal the commuting probability exactly.
    k_over_order_num: i64,
    k_over_order_den: i64,
    rows: Vec<CprobRow>,
}

fn cmd_cprob(cli: &Cli, cfg: &RunConfig, spec: &str, method: CprobMethod) -> Result<(), Error> {
    let ctx = load_group(spec, cfg)?;
    let exact = match method {
        CprobMethod::Frobenius => None,
        _ => Some(brute_force_counts(&ctx.g, &ctx.cd, cfg)?),
    };
    let table = match method {
        CprobMethod::Exact => None,
        _ => Some(compute_table(&ctx, cfg)?),
    };
    let cp = commuting_probability(&ctx.g, cfg)?;
    let mut rows = Vec::new();
    for j in 0..ctx.cd.class_count {
        let exact_pair = exact.as_ref().map(|c| {
            let p = c.probabilities[j];
            (*p.numer(), *p.denom())
        });
        let frob = match &table {
            Some(t) => Some(frobenius_c(t, j, cfg)?),
            None => None,
        };
        let agree = match (exact_pair, frob) {
            (Some((n, d)), Some(f)) => Some((f - n as f64 / d as f64).abs() <= cfg.tol.cmp),
            _ => None,
        };
        rows.push(CprobRow {
            group: ctx.g.name.clone(),
            class: j,
            exact_num: exact_pair.map(|p| p.0),
            exact_den: exact_pair.map(|p| p.1),
            frobenius: frob,
            agree,
        });
    }
    let k_over_order = match &table {
        Some(t) => frobenius_cg(t),
        None => commprob::oracle::Rational::new(ctx.cd.class_count as i64, ctx.g.order() as i64),
    };
    let report = CprobReport {
        group: ctx.g.name.clone(),
        commuting_probability_num: *cp.numer(),
        commuting_probability_den: *cp.denom(),
        k_over_order_num: *k_over_order.numer(),
        k_over_order_den: *k_over_order.denom(),
        rows,
    };
    let mut csv = String::from("group,class,exact_num,exact_den,frobenius,agree\n");
    for r in &report.rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.group,
            r.class,
            r.exact_num.map_or(String::new(), |v| v.to_string()),
            r.exact_den.map_or(String::new(), |v| v.to_string()),
            r.frobenius.map_or(String::new(), |v| format!("{v:.17e}")),
            r.agree.map_or(String::new(), |v| v.to_string()),
        ));
    }
    emit(cli, to_json(&report), Some(csv))
}

fn build_char<'t>(
    expr: &str,
    ctx: &GroupCtx,
    t: &'t CharacterTable,
    cfg: &RunConfig,
) -> Result<VirtualCharacter<'t>, Error> {
    if expr == "perm" {
        return commprob::estimator::sn_permutation_character(&ctx.g, &ctx.cd, t);
    }
    parse_char_expr(expr, t, cfg)
}

fn cmd_bound(cli: &Cli, cfg: &RunConfig, spec: &str, expr: &str, class: &str) -> Result<(), Error> {
    let ctx = load_group(spec, cfg)?;
    let t = compute_table(&ctx, cfg)?;
    let phi = build_char(expr, &ctx, &t, cfg)?;
    let counts = brute_force_counts(&ctx.g, &ctx.cd, cfg)?;
    let mut report = bound_report(&ctx.g, &ctx.cd, &counts, &phi, expr, cfg)?;
    if class != "all" {
        let j: usize = class
            .parse()
            .map_err(|_| Error::FormatError(format!("bad class selector `{class}`")))?;
        if j >= ctx.cd.class_count {
            return Err(Error::FormatError(format!("class {j} out of range")));
        }
        report.per_class.retain(|r| r.class == j);
    }
    let mut csv = String::from("group,class,exact_num,exact_den,bound,bound_name,slack\n");
    for r in &report.per_class {
        csv.push_str(&format!(
            "{},{},{},{},{:.17e},{},{:.17e}\n",
            report.group, r.class, r.exact_num, r.exact_den, r.bound, report.bound_name, r.slack
        ));
    }
    emit(cli, to_json(&report), Some(csv))
}

#[derive(Serialize)]
struct SampleReport {
    group: String,
    character: String,
    class: usize,
    seed: u64,
    result: commprob::estimator::MonteCarloResult,
    expected_mean: f64,
    within_four_se: bool,
}

fn cmd_sample(
    cli: &Cli,
    cfg: &RunConfig,
    spec: &str,
    expr: &str,
    class: usize,
    samples: usize,
) -> Result<(), Error> {
    let ctx = load_group(spec, cfg)?;
    let t = compute_table(&ctx, cfg)?;
    let phi = build_char(expr, &ctx, &t, cfg)?;
    if class >= ctx.cd.class_count {
        return Err(Error::FormatError(format!("class {class} out of range")));
    }
    let seed = stable_task_seed(cfg.seed, &format!("{}|{}|{}", ctx.g.name, expr, class));
    let result = monte_carlo_xi(&ctx.g, &ctx.cd, &phi, class, samples, seed);
    let expected = commprob::estimator::expectation_xi(&phi, class);
    let report = SampleReport {
        group: ctx.g.name.clone(),
        character: expr.to_string(),
        class,
        seed,
        within_four_se: (result.mean - expected).abs() <= 4.0 * result.std_error.max(1e-300),
        expected_mean: expected,
        result,
    };
    emit(cli, to_json(&report), None)
}

#[derive(Serialize)]
struct SweepGroupRow {
    group: String,
    order: usize,
    class_count: usize,
    max_frobenius_residual: f64,
    min_bound_slack: f64,
    regular_collapse_residual: f64,
    max_t_phi_residual: f64,
    mean_inequality_holds: bool,
    soundness_violations: usize,
}

#[derive(Serialize)]
struct SweepReport {
    seed: u64,
    samples_per_group: usize,
    groups: Vec<SweepGroupRow>,
    total_soundness_violations: usize,
    min_slack: f64,
}

fn cmd_sweep(cli: &Cli, cfg: &RunConfig, filter: Option<&str>, samples: usize) -> Result<(), Error> {
    let mut rows = Vec::new();
    let mut total_violations = 0usize;
    let mut min_slack = f64::INFINITY;
    for g in standard_catalog(cfg)? {
        if let Some(f) = filter {
            if !g.name.contains(f) {
                continue;
            }
        }
        let cd = conjugacy_classes(&g);
        let counts = brute_force_counts(&g, &cd, cfg)?;
        let t = character_table(&g, &cd, table_seed(cfg, &g.name), cfg)?;

        let mut max_frob = 0.0f64;
        for j in 0..cd.class_count {
            let p = counts.probabilities[j];
            let exact = *p.numer() as f64 / *p.denom() as f64;
            max_frob = max_frob.max((frobenius_c(&t, j, cfg)? - exact).abs());
        }

        let reg = VirtualCharacter::regular(&t);
        let mut collapse = 0.0f64;
        for j in 0..cd.class_count {
            collapse = collapse
                .max((commprob::estimator::bound_cg(&reg, j, cfg)? - frobenius_c(&t, j, cfg)?).abs());
        }

        let sampler = NonNegSampler::new(&t, cfg)?;
        let mut rng = ChaCha20Rng::seed_from_u64(stable_task_seed(cfg.seed, &g.name));
        let mut group_min_slack = f64::INFINITY;
        let mut violations = 0usize;
        for _ in 0..samples {
            let phi = sampler.sample(&mut rng, cfg);
            for j in 0..cd.class_count {
                let bound = commprob::estimator::bound_cg(&phi, j, cfg)?;
                let p = counts.probabilities[j];
                let slack = bound - *p.numer() as f64 / *p.denom() as f64;
                group_min_slack = group_min_slack.min(slack);
                if slack < -1e-8 {
                    violations += 1;
                }
            }
        }

        let mut max_t = 0.0f64;
        for row in 0..t.class_count {
            let chi = VirtualCharacter::irreducible(&t, row);
            max_t = max_t.max((t_phi(&chi) - brute_force_t(&counts, &chi)).norm());
        }

        let diag = gelfand_diagnostic(&t, cfg);
        total_violations += violations;
        min_slack = min_slack.min(group_min_slack);
        rows.push(SweepGroupRow {
            group: g.name.clone(),
            order: g.order(),
            class_count: cd.class_count,
            max_frobenius_residual: max_frob,
            min_bound_slack: group_min_slack,
            regular_collapse_residual: collapse,
            max_t_phi_residual: max_t,
            mean_inequality_holds: diag.mean_inequality_holds,
            soundness_violations: violations,
        });
    }
    let report = SweepReport {
        seed: cfg.seed,
        samples_per_group: samples,
        groups: rows,
        total_soundness_violations: total_violations,
        min_slack,
    };
    let mut csv = String::from(
        "group,order,class_count,max_frobenius_residual,min_bound_slack,regular_collapse_residual,max_t_phi_residual,mean_inequality_holds,soundness_violations\n",
    );
    for r in &report.groups {
        csv.push_str(&format!(
            "{},{},{},{:.17e},{:.17e},{:.17e},{:.17e},{},{}\n",
            r.group,
            r.order,
            r.class_count,
            r.max_frobenius_residual,
            r.min_bound_slack,
            r.regular_collapse_residual,
            r.max_t_phi_residual,
            r.mean_inequality_holds,
            r.soundness_violations
        ));
    }
    emit(cli, to_json(&report), Some(csv))
}

fn cmd_optimize(cli: &Cli, cfg: &RunConfig, spec: &str, samples: usize) -> Result<(), Error> {
    let ctx = load_group(spec, cfg)?;
    let t = compute_table(&ctx, cfg)?;
    let report = verify_regular_minimizer(&t, samples, stable_task_seed(cfg.seed, &ctx.g.name), cfg)?;
    emit(cli, to_json(&report), None)
}

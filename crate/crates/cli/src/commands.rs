use std::fmt::Write as _;
use std::path::Path;

use gradual_core::{
    check_kernel_axioms, compute_bounds, evaluate, is_valid_degree_vector_within, k_phi, sample_degree_space,
    solve_inverse, BisectionConfig, BoundsConfig, FixedPointConfig, InverseMethod, OrderingPartition, SampleSpec,
    Topology, ViolationKind,
};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::format::{parse_degree_csv, write_degree_csv, FrameworkFile, LoadedFramework};
use crate::report::{fields, human, table, RunReport, EXIT_FAILURE};
use crate::{BoundsArgs, Command, Common, Method};

const MAX_LISTED_VIOLATIONS: usize = 10;

pub(crate) fn dispatch(command: Command, report: &mut RunReport, out: &mut String) -> Result<(), CliError> {
    match command {
        Command::Evaluate {
            common,
            tolerance,
            max_iter,
        } => run_evaluate(&common, tolerance, max_iter, report, out),
        Command::Bounds {
            common,
            ordering,
            bounds,
        } => run_bounds(&common, &ordering, &bounds, report, out),
        Command::Invert {
            common,
            ordering,
            method,
            bounds,
            tolerance,
            max_iter,
            bisection_tolerance,
            max_rounds,
            out: out_file,
        } => {
            let method = match method {
                Method::Analytic => InverseMethod::Analytic,
                Method::Bisection => InverseMethod::Bisection(BisectionConfig {
                    tolerance: bisection_tolerance,
                    max_rounds,
                    ..BisectionConfig::default()
                }),
            };
            let fp = fixed_point_config(tolerance, max_iter);
            run_invert(
                &common,
                &ordering,
                &bounds,
                &method,
                &fp,
                out_file.as_deref(),
                report,
                out,
            )
        }
        Command::Validate { common, degrees, slack } => run_validate(&common, &degrees, slack, report, out),
        Command::Sample {
            common,
            count,
            grid,
            seed,
            out: out_file,
        } => {
            let spec = match grid {
                Some(values) => SampleSpec::Grid(values),
                None => SampleSpec::Random {
                    count: count.unwrap_or_default(),
                },
            };
            run_sample(&common, &spec, seed, &out_file, report, out)
        }
        Command::CheckKernel { common, samples, seed } => run_check_kernel(&common, samples, seed, report, out),
    }
}

fn fixed_point_config(tolerance: f64, max_iterations: usize) -> FixedPointConfig {
    FixedPointConfig {
        tolerance,
        max_iterations,
        initial: None,
    }
}

fn load(common: &Common, report: &mut RunReport) -> Result<LoadedFramework, CliError> {
    report.input("framework", common.framework.display().to_string());
    report.input("semantics", common.semantics.to_string());
    let framework = FrameworkFile::read(&common.framework)?;
    common.semantics.validate()?;
    Ok(framework)
}

fn ids(topology: &Topology) -> Value {
    Value::from(topology.ids().to_vec())
}

fn column(topology: &Topology, header: &[&str], columns: &[&[f64]]) -> String {
    let rows: Vec<Vec<String>> = (0..topology.len())
        .map(|i| {
            let mut row = vec![topology.id(i).to_string()];
            row.extend(columns.iter().map(|c| human(c[i])));
            row
        })
        .collect();
    table(header, &rows)
}

fn run_evaluate(
    common: &Common,
    tolerance: f64,
    max_iter: usize,
    report: &mut RunReport,
    out: &mut String,
) -> Result<(), CliError> {
    let loaded = load(common, report)?;
    report.input("tolerance", tolerance);
    report.input("max_iterations", max_iter);
    let framework = loaded.weighted()?;
    let (result, ranking) = evaluate(&framework, &common.semantics, &fixed_point_config(tolerance, max_iter))?;
    let topology = framework.topology();
    report.output("arguments", ids(topology));
    report.output("weights", framework.weights().to_vec());
    report.output("degrees", result.degrees.as_slice().to_vec());
    report.output("ranking", ranking.to_string());
    report.diagnostic("iterations", result.iterations);
    report.diagnostic("residual", result.residual);
    report.diagnostic("fixed_point_residual", result.fixed_point_residual);
    report.diagnostic("converged", result.converged);
    if !result.converged {
        report.exit_code = EXIT_FAILURE;
    }

    out.push_str(&column(
        topology,
        &["argument", "weight", "degree"],
        &[framework.weights(), result.degrees.as_slice()],
    ));
    out.push('\n');
    out.push_str(&fields(&[
        ("ranking", ranking.to_string()),
        ("iterations", result.iterations.to_string()),
        ("residual", human(result.residual)),
        ("converged", result.converged.to_string()),
    ]));
    Ok(())
}

fn parse_ordering(text: &str, topology: &Topology, report: &mut RunReport) -> Result<OrderingPartition, CliError> {
    report.input("ordering", text);
    Ok(OrderingPartition::parse_for(text, topology)?)
}

fn bounds_config(args: &BoundsArgs, report: &mut RunReport) -> BoundsConfig {
    report.input("zeta", args.zeta);
    report.input("top", args.top);
    BoundsConfig {
        zeta: args.zeta,
        top: args.top,
    }
}

fn run_bounds(
    common: &Common,
    ordering: &str,
    args: &BoundsArgs,
    report: &mut RunReport,
    out: &mut String,
) -> Result<(), CliError> {
    let loaded = load(common, report)?;
    let topology = &loaded.topology;
    let partition = parse_ordering(ordering, topology, report)?;
    let config = bounds_config(args, report);
    let bounds = compute_bounds(&partition, topology, &common.semantics, &config)?;
    report.output("arguments", ids(topology));
    report.output("ordering", partition.to_string());
    report.output("bounds", bounds.as_slice().to_vec());
    report.diagnostic("classes", partition.len());

    out.push_str(&column(topology, &["argument", "bound"], &[bounds.as_slice()]));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_invert(
    common: &Common,
    ordering: &str,
    args: &BoundsArgs,
    method: &InverseMethod,
    fp: &FixedPointConfig,
    out_file: Option<&Path>,
    report: &mut RunReport,
    out: &mut String,
) -> Result<(), CliError> {
    let loaded = load(common, report)?;
    let topology = &loaded.topology;
    let partition = parse_ordering(ordering, topology, report)?;
    let config = bounds_config(args, report);
    report.input("method", method.name());
    report.input("tolerance", fp.tolerance);
    report.input("max_iterations", fp.max_iterations);
    if let InverseMethod::Bisection(b) = method {
        report.input("bisection_tolerance", b.tolerance);
        report.input("max_rounds", b.max_rounds);
    }
    if let Some(path) = out_file {
        report.input("out", path.display().to_string());
    }

    let targets = compute_bounds(&partition, topology, &common.semantics, &config)?;
    let solution = solve_inverse(topology, &partition, &common.semantics, &config, method, fp)?;
    let verification = solution.verification.as_ref();
    let passed = verification.is_some_and(|v| v.passed);

    report.output("arguments", ids(topology));
    report.output("targets", targets.as_slice().to_vec());
    report.output("weights", solution.weights.clone());
    if let Some(v) = verification {
        report.output("achieved_ranking", v.achieved.to_string());
    }
    report.diagnostic("feasible", solution.feasible);
    report.diagnostic("residual", solution.residual);
    report.diagnostic("verification", passed);
    if let Some(v) = verification {
        report.diagnostic("tie_tolerance", v.tie_tolerance);
    }
    report.diagnostic("kernel_inversions", solution.kernel_inversions);
    report.diagnostic("fixed_point_solves", solution.fixed_point_solves);
    report.diagnostic("rounds", solution.rounds);

    let mut wrote = None;
    if let Some(path) = out_file {
        if solution.feasible {
            write_file(
                path,
                &FrameworkFile::from_topology(topology, Some(&solution.weights)).to_json(),
            )?;
            wrote = Some(path);
        } else {
            report.diagnostic("out_skipped", "weights outside [0, 1]");
        }
    }
    if !solution.feasible || !passed {
        report.exit_code = EXIT_FAILURE;
    }

    out.push_str(&column(
        topology,
        &["argument", "target", "weight"],
        &[targets.as_slice(), &solution.weights],
    ));
    out.push('\n');
    let mut summary = vec![
        ("method", method.name().to_string()),
        ("feasible", solution.feasible.to_string()),
        ("residual", human(solution.residual)),
        ("verification", if passed { "passed".into() } else { "FAILED".into() }),
    ];
    if let Some(v) = verification {
        summary.push(("achieved", v.achieved.to_string()));
    }
    summary.push(("fixed-point solves", solution.fixed_point_solves.to_string()));
    if let Some(path) = wrote {
        summary.push(("written", path.display().to_string()));
    }
    out.push_str(&fields(&summary));
    Ok(())
}

fn run_validate(
    common: &Common,
    degrees: &Path,
    slack: f64,
    report: &mut RunReport,
    out: &mut String,
) -> Result<(), CliError> {
    let loaded = load(common, report)?;
    report.input("degrees", degrees.display().to_string());
    report.input("slack", slack);
    let topology = &loaded.topology;
    let text = std::fs::read_to_string(degrees)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", degrees.display())))?;
    let rows = parse_degree_csv(&text, topology.len())?;

    let mut verdicts = Vec::with_capacity(rows.len());
    let mut table_rows = Vec::with_capacity(rows.len());
    let mut valid = 0;
    for (r, x) in rows.iter().enumerate() {
        let ok = is_valid_degree_vector_within(x, topology, &common.semantics, slack)?;
        let weights = k_phi(x, topology, &common.semantics)?;
        valid += usize::from(ok);
        let max_weight = weights.iter().copied().fold(0.0, f64::max);
        verdicts.push(json!({ "row": r + 1, "valid": ok, "weights": weights }));
        table_rows.push(vec![
            (r + 1).to_string(),
            if ok { "valid" } else { "invalid" }.to_string(),
            human(max_weight),
        ]);
    }
    report.output("arguments", ids(topology));
    report.output("rows", verdicts);
    report.diagnostic("total", rows.len());
    report.diagnostic("valid", valid);
    report.diagnostic("invalid", rows.len() - valid);

    out.push_str(&table(&["row", "verdict", "max weight"], &table_rows));
    out.push('\n');
    let _ = writeln!(out, "{valid} of {} rows valid", rows.len());
    Ok(())
}

fn run_sample(
    common: &Common,
    spec: &SampleSpec,
    seed: u64,
    out_file: &Path,
    report: &mut RunReport,
    out: &mut String,
) -> Result<(), CliError> {
    let loaded = load(common, report)?;
    match spec {
        SampleSpec::Random { count } => report.input("count", *count),
        SampleSpec::Grid(values) => report.input("grid", values.clone()),
    }
    report.input("seed", seed);
    report.input("out", out_file.display().to_string());
    let topology = &loaded.topology;
    let sample = sample_degree_space(topology, &common.semantics, spec, seed)?;
    write_file(out_file, &write_degree_csv(topology, &sample.points))?;
    report.output("arguments", ids(topology));
    report.output("points", sample.points.len());
    report.output("out", out_file.display().to_string());

    out.push_str(&fields(&[
        ("points", sample.points.len().to_string()),
        ("written", out_file.display().to_string()),
    ]));
    Ok(())
}

fn kind_name(kind: ViolationKind) -> &'static str {
    match kind {
        ViolationKind::Negative => "negative",
        ViolationKind::Monotonicity => "monotonicity",
        ViolationKind::Homogeneity => "homogeneity",
    }
}

fn run_check_kernel(
    common: &Common,
    samples: usize,
    seed: u64,
    report: &mut RunReport,
    out: &mut String,
) -> Result<(), CliError> {
    let loaded = load(common, report)?;
    report.input("samples", samples);
    report.input("seed", seed);
    let topology = &loaded.topology;
    let axioms = check_kernel_axioms(&common.semantics, topology, samples, seed)?;
    let kinds = [
        ViolationKind::Negative,
        ViolationKind::Monotonicity,
        ViolationKind::Homogeneity,
    ];
    let counts: serde_json::Map<String, Value> = kinds
        .iter()
        .map(|&k| (kind_name(k).to_string(), Value::from(axioms.count(k))))
        .collect();
    let listed: Vec<Value> = axioms
        .violations
        .iter()
        .take(MAX_LISTED_VIOLATIONS)
        .map(|v| {
            json!({
                "kind": kind_name(v.kind),
                "sample": v.sample,
                "argument": topology.id(v.argument),
                "magnitude": v.magnitude,
            })
        })
        .collect();
    report.output("samples", axioms.samples);
    report.output("violations", counts);
    report.output("examples", listed);
    report.diagnostic("clean", axioms.is_clean());
    if !axioms.is_clean() {
        report.exit_code = EXIT_FAILURE;
    }

    let rows: Vec<Vec<String>> = kinds
        .iter()
        .map(|&k| vec![kind_name(k).to_string(), axioms.count(k).to_string()])
        .collect();
    out.push_str(&table(&["axiom", "violations"], &rows));
    out.push('\n');
    let _ = writeln!(
        out,
        "{} samples, {}",
        axioms.samples,
        if axioms.is_clean() { "clean" } else { "VIOLATED" }
    );
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.display().to_string(),
        source,
    })
}

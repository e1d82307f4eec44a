//! Command-line front end: validate record files, run the full transfer
//! analysis, generate synthetic datasets, and summarize reports.
//!
//! Exit codes: 0 success, 1 data error, 2 usage error.

mod synth_config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pgflab_core::io::{
    self, export_dot, export_heatmap_csv, export_report_json, export_svg_heatmap, parse_records,
    parse_tasks_csv, ColorScale, RecordFile, RunManifest,
};
use pgflab_core::pipeline::{self, AnalyzeOptions};
use pgflab_core::{AnalysisConfig, CeilingSpec, EvalRecord, SelectionStrategy, TaskSet};

#[derive(Parser)]
#[command(
    name = "pgflab",
    version,
    about = "Cross-task transfer analysis of finetuned-model evaluation results"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and assemble record files, reporting every problem found.
    Validate(ValidateArgs),
    /// Run the full analysis and write heatmaps, graphs, and the report.
    Analyze(AnalyzeArgs),
    /// Generate a synthetic dataset with planted transfer structure.
    Synth(SynthArgs),
    /// Print a human-readable summary of an analysis report.
    Report(ReportArgs),
}

#[derive(Args)]
struct ValidateArgs {
    /// Record file(s); .json means structured records, anything else CSV.
    #[arg(long, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    /// Task definition CSV (id, abbreviation, perceptual_level,
    /// granularity). Defaults to the builtin 13-task perception set.
    #[arg(long)]
    tasks: Option<PathBuf>,
    /// Emit the error listing as JSON on stdout.
    #[arg(long)]
    json_errors: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    #[arg(long)]
    tasks: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, env = "PGFLAB_OUT_DIR")]
    out: PathBuf,
    /// Ceiling mode: `fixed:<percent>` or `best`.
    #[arg(long)]
    ceiling: Option<String>,
    /// Percent of strongest edges (per sign) kept in the transfer graph.
    #[arg(long)]
    percentile: Option<f64>,
    /// Significance level for cliques and personas.
    #[arg(long)]
    alpha: Option<f64>,
    /// Include the self-transfer diagonal in score sums.
    #[arg(long)]
    include_diagonal: Option<bool>,
    /// Target task for mixture recommendation; repeatable.
    #[arg(long)]
    target: Vec<String>,
    /// Mixture selection threshold: a PGF value, or `pct:<percentile>`.
    #[arg(long)]
    threshold: Option<String>,
    /// List non-maximal cliques too.
    #[arg(long)]
    all_cliques: bool,
    /// Append ±std to heatmap CSV cells.
    #[arg(long)]
    heatmap_std: bool,
    /// Optional TOML config file; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Record this timestamp in the report manifest. Omitted by default so
    /// reruns are byte-identical.
    #[arg(long)]
    timestamp: Option<String>,
}

#[derive(Args)]
struct SynthArgs {
    /// Planted-structure TOML config.
    #[arg(long)]
    config: PathBuf,
    /// Output record file.
    #[arg(long)]
    out: PathBuf,
    /// Output format: csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct ReportArgs {
    /// report.json produced by `analyze`.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Debug)]
enum CliError {
    /// Bad data: malformed files, inconsistent matrices. Exit 1.
    Data(anyhow::Error),
    /// Bad invocation: unparseable flag values, broken config. Exit 2.
    Usage(String),
}

impl From<pgflab_core::Error> for CliError {
    fn from(e: pgflab_core::Error) -> Self {
        match e {
            pgflab_core::Error::InvalidConfig(msg) => CliError::Usage(msg),
            other => CliError::Data(other.into()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate(args) => cmd_validate(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Synth(args) => cmd_synth(args),
        Command::Report(args) => cmd_report(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_task_set(path: &Option<PathBuf>) -> Result<TaskSet, CliError> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            Ok(parse_tasks_csv(&text)?)
        }
        None => Ok(TaskSet::blink()),
    }
}

fn load_records(inputs: &[PathBuf]) -> Result<Vec<EvalRecord>, CliError> {
    let mut records = Vec::new();
    for path in inputs {
        let file = RecordFile::at(path.clone());
        let parsed = parse_records(&file)
            .map_err(|e| CliError::Data(anyhow::anyhow!("{}: {e}", path.display())))?;
        records.extend(parsed);
    }
    Ok(records)
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

fn cmd_validate(args: ValidateArgs) -> Result<(), CliError> {
    let task_set = load_task_set(&args.tasks)?;
    let mut errors: Vec<String> = Vec::new();
    let mut records = Vec::new();
    for path in &args.input {
        let file = RecordFile::at(path.clone());
        match parse_records(&file) {
            Ok(parsed) => records.extend(parsed),
            Err(e) => errors.push(format!("{}: {e}", path.display())),
        }
    }
    if errors.is_empty() {
        match pgflab_core::model::assemble_matrices(&records, &task_set) {
            Ok(assembly) => {
                for w in &assembly.warnings {
                    eprintln!("warning: {w}");
                }
                eprintln!(
                    "ok: {} record(s), {} (model, seed) matrix/matrices, {} warning(s)",
                    records.len(),
                    assembly.matrices.len(),
                    assembly.warnings.len()
                );
            }
            Err(e) => errors.push(e.to_string()),
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        if args.json_errors {
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({ "errors": errors }))
                    .expect("error list serializes")
            );
        }
        for e in &errors {
            eprintln!("error: {e}");
        }
        Err(CliError::Data(anyhow::anyhow!(
            "{} validation error(s)",
            errors.len()
        )))
    }
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

/// Subset of the analysis settings readable from a TOML config file.
#[derive(Debug, Default, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    epsilon: Option<f64>,
    include_diagonal_in_scores: Option<bool>,
    min_gap_warn: Option<f64>,
    alpha: Option<f64>,
    edge_percentile: Option<f64>,
    threshold: Option<String>,
    ceiling: Option<String>,
}

fn parse_ceiling(s: &str) -> Result<CeilingSpec, CliError> {
    if s == "best" {
        return Ok(CeilingSpec::best_observed());
    }
    if let Some(value) = s.strip_prefix("fixed:") {
        let v: f64 = value
            .parse()
            .map_err(|_| CliError::Usage(format!("ceiling value {value:?} is not a number")))?;
        return Ok(CeilingSpec::fixed(v));
    }
    Err(CliError::Usage(format!(
        "ceiling {s:?} must be `fixed:<percent>` or `best`"
    )))
}

fn parse_threshold(s: &str) -> Result<SelectionStrategy, CliError> {
    if let Some(q) = s.strip_prefix("pct:") {
        let q: f64 = q
            .parse()
            .map_err(|_| CliError::Usage(format!("threshold percentile {q:?} is not a number")))?;
        return Ok(SelectionStrategy::ColumnPercentile(q));
    }
    let v: f64 = s
        .parse()
        .map_err(|_| CliError::Usage(format!("threshold {s:?} is not a number or pct:<q>")))?;
    Ok(SelectionStrategy::AbsoluteThreshold(v))
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '-' })
        .collect()
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let file_config: FileConfig = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            toml::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };

    // precedence: flags > config file > defaults
    let mut config = AnalysisConfig::default();
    if let Some(v) = file_config.epsilon {
        config.epsilon = v;
    }
    if let Some(v) = file_config.include_diagonal_in_scores {
        config.include_diagonal_in_scores = v;
    }
    if let Some(v) = file_config.min_gap_warn {
        config.min_gap_warn = v;
    }
    if let Some(v) = file_config.alpha {
        config.alpha = v;
    }
    if let Some(v) = file_config.edge_percentile {
        config.edge_percentile = v;
    }
    if let Some(s) = &file_config.threshold {
        config.selection = parse_threshold(s)?;
    }
    if let Some(v) = args.alpha {
        config.alpha = v;
    }
    if let Some(v) = args.percentile {
        config.edge_percentile = v;
    }
    if let Some(v) = args.include_diagonal {
        config.include_diagonal_in_scores = v;
    }
    if let Some(s) = &args.threshold {
        config.selection = parse_threshold(s)?;
    }
    let ceiling = match (&args.ceiling, &file_config.ceiling) {
        (Some(s), _) => parse_ceiling(s)?,
        (None, Some(s)) => parse_ceiling(s)?,
        (None, None) => CeilingSpec::default(),
    };
    config
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    ceiling
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let task_set = load_task_set(&args.tasks)?;
    let records = load_records(&args.input)?;

    let mut manifest = RunManifest::new("analyze");
    manifest.input_paths = args.input.iter().map(|p| p.display().to_string()).collect();
    manifest.tasks_path = args.tasks.as_ref().map(|p| p.display().to_string());
    manifest.output_dir = args.out.display().to_string();
    manifest.ceiling = pipeline::describe_ceiling(&ceiling);
    manifest.targets = args.target.clone();
    manifest.config = config.clone();
    manifest.timestamp = args.timestamp.clone();

    let options = AnalyzeOptions {
        ceiling,
        config,
        targets: args.target.clone(),
        all_cliques: args.all_cliques,
    };
    let products = pipeline::analyze(&records, &task_set, &options, manifest)?;

    std::fs::create_dir_all(&args.out)?;
    let mut written = Vec::new();
    for (summary, graph) in products.summaries.iter().zip(&products.graphs) {
        let stem = sanitize(&summary.model_id);
        let csv_path = args.out.join(format!("heatmap_{stem}.csv"));
        std::fs::write(
            &csv_path,
            export_heatmap_csv(summary, &task_set, args.heatmap_std),
        )?;
        written.push(csv_path);
        let svg_path = args.out.join(format!("heatmap_{stem}.svg"));
        std::fs::write(
            &svg_path,
            export_svg_heatmap(summary, &task_set, &ColorScale::default()),
        )?;
        written.push(svg_path);
        let dot_path = args.out.join(format!("graph_{stem}.dot"));
        std::fs::write(&dot_path, export_dot(graph, &task_set))?;
        written.push(dot_path);
    }
    let report_path = args.out.join("report.json");
    std::fs::write(&report_path, export_report_json(&products.report))?;
    written.push(report_path);

    for w in &products.report.ingest_warnings {
        eprintln!("warning: {w}");
    }
    eprintln!("wrote {} file(s) to {}", written.len(), args.out.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

fn cmd_synth(args: SynthArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config)?;
    let config: synth_config::SynthConfig = toml::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", args.config.display())))?;
    let structures = config.into_structures()?;

    let mut records = Vec::new();
    let mut saturated = 0usize;
    for structure in &structures {
        let data = structure.generate()?;
        saturated += data.saturated.len();
        records.extend(data.records);
    }
    let body = match args.format.as_str() {
        "csv" => io::write_records_csv(&records),
        "json" => io::write_records_json(&records),
        other => {
            return Err(CliError::Usage(format!(
                "format {other:?} must be csv or json"
            )))
        }
    };
    std::fs::write(&args.out, body)?;
    if saturated > 0 {
        eprintln!("warning: {saturated} cell(s) hit the [0, 100] clamp");
    }
    eprintln!(
        "wrote {} record(s) for {} model(s) to {}",
        records.len(),
        structures.len(),
        args.out.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

fn cmd_report(args: ReportArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.input)?;
    let report = io::parse_report_json(&text)?;
    print!("{}", render_report(&report));
    Ok(())
}

fn render_report(report: &io::AnalysisReport) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "analysis report (schema v{}, tool v{})",
        report.schema_version, report.manifest.tool_version
    );
    let _ = writeln!(
        out,
        "tasks: {}  models: {}  ceiling: {}",
        report.tasks.len(),
        report.models.len(),
        report.manifest.ceiling
    );
    for model in &report.models {
        let _ = writeln!(out, "\nmodel {} (seeds: {:?})", model.model_id, model.seeds);
        let _ = writeln!(
            out,
            "  avg transferability  +{:.4} / {:.4}",
            model.transfer_average.positive, model.transfer_average.negative
        );
        let _ = writeln!(
            out,
            "  avg malleability     +{:.4} / {:.4}",
            model.malleability_average.positive, model.malleability_average.negative
        );
        let _ = writeln!(
            out,
            "  graph: {} edges at top {}%",
            model.graph.edges.len(),
            model.graph.percentile
        );
        for (label, cliques) in [
            ("positive", &model.cliques_positive),
            ("negative", &model.cliques_negative),
        ] {
            let _ = writeln!(out, "  {} clique(s): {}", label, cliques.len());
            for c in cliques.iter().take(5) {
                let _ = writeln!(
                    out,
                    "    {:?} p={:.5}{}",
                    c.members,
                    c.p_value,
                    if c.significant { " *" } else { "" }
                );
            }
        }
    }
    let consistent: Vec<_> = report
        .personas
        .reports
        .iter()
        .filter(|r| r.consistent)
        .collect();
    let _ = writeln!(
        out,
        "\npersonas consistent across models: {}",
        consistent.len()
    );
    for r in &consistent {
        let _ = writeln!(
            out,
            "  {} {} {}",
            r.persona.label(),
            r.task_id,
            if r.significant { "(significant)" } else { "" }
        );
    }
    for entry in &report.mixture_plans {
        let _ = writeln!(
            out,
            "\nmixture plan for {} (model {}): {} source(s), threshold {:.4}",
            entry.plan.target_task,
            entry.model_id,
            entry.plan.selected_sources.len(),
            entry.plan.threshold_used
        );
        for (id, w) in &entry.plan.selected_sources {
            let _ = writeln!(out, "  {id} weight {w:.4}");
        }
    }
    out
}

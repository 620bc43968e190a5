//! `mfarm` — fairness audits over demographic prediction panels.
//!
//! Exit codes: 0 success, 1 input error, 2 configuration error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mfarm_cli::{parse_panel, report_to_json, report_to_markdown, write_panel_csv, PanelFormat};
use mfarm_core::{
    generate_panel, run_audit_subset, AccuracyScope, AuditConfig, LeveneCentering, Metric,
    SynthSpec,
};

#[derive(Parser)]
#[command(
    name = "mfarm",
    version,
    about = "Multi-faceted fairness audits for demographic prediction panels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Audit a prediction panel and write a fairness report.
    Audit(AuditArgs),
    /// Generate a synthetic panel from a JSON spec.
    Synth(SynthArgs),
}

#[derive(Args)]
struct AuditArgs {
    /// Panel file (long format: case_id, group, prob_yes, true_label[, pred_label]).
    #[arg(long)]
    input: PathBuf,

    /// Panel file format.
    #[arg(long, value_enum, default_value_t = PanelFormatArg::Csv)]
    format: PanelFormatArg,

    /// Name of the neutral reference group.
    #[arg(long, default_value = "BASE")]
    base_group: String,

    /// Significance level for every hypothesis test.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,

    /// Probability cutoff when predicted labels are derived.
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,

    /// Prediction cells counted toward accuracy.
    #[arg(long, value_enum, default_value_t = ScopeArg::All)]
    accuracy_scope: ScopeArg,

    /// Centering for the Levene spread transform.
    #[arg(long, value_enum, default_value_t = CenteringArg::Mean)]
    levene_centering: CenteringArg,

    /// Report destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Report format.
    #[arg(long, value_enum, default_value_t = ReportFormatArg::Json)]
    report: ReportFormatArg,

    /// Comma-separated metric list (mean,abs,ks,var,corr). The composite
    /// scores require all five.
    #[arg(long, default_value = "mean,abs,ks,var,corr")]
    metrics: String,
}

#[derive(Args)]
struct SynthArgs {
    /// JSON synthesis spec.
    #[arg(long)]
    spec: PathBuf,

    /// Override the spec's seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Panel CSV destination.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum PanelFormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormatArg {
    Json,
    Md,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    All,
    Base,
}

#[derive(Clone, Copy, ValueEnum)]
enum CenteringArg {
    Mean,
    Median,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

fn input_err(message: impl ToString) -> CliError {
    CliError {
        code: 1,
        message: message.to_string(),
    }
}

fn config_err(message: impl ToString) -> CliError {
    CliError {
        code: 2,
        message: message.to_string(),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Audit(args) => audit(args),
        Command::Synth(args) => synth(args),
    }
}

fn audit(args: AuditArgs) -> Result<(), CliError> {
    let config = AuditConfig {
        alpha: args.alpha,
        threshold: args.threshold,
        levene_centering: match args.levene_centering {
            CenteringArg::Mean => LeveneCentering::Mean,
            CenteringArg::Median => LeveneCentering::Median,
        },
        accuracy_scope: match args.accuracy_scope {
            ScopeArg::All => AccuracyScope::AllVariants,
            ScopeArg::Base => AccuracyScope::BaseOnly,
        },
        ..AuditConfig::default()
    };
    config.validate().map_err(config_err)?;

    let metrics = parse_metric_list(&args.metrics).map_err(config_err)?;

    let format = match args.format {
        PanelFormatArg::Csv => PanelFormat::Csv,
        PanelFormatArg::Json => PanelFormat::Json,
    };
    let panel = parse_panel(&args.input, format, &args.base_group, &config).map_err(input_err)?;

    let report = run_audit_subset(&panel, &config, &metrics).map_err(input_err)?;

    let rendered = match args.report {
        ReportFormatArg::Json => report_to_json(&report),
        ReportFormatArg::Md => report_to_markdown(&report),
    };
    match &args.output {
        Some(path) => fs::write(path, rendered.as_bytes())
            .map_err(|e| input_err(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{rendered}"),
    }

    if let (Some(mfarm), Some(fab)) = (report.mfarm, report.fab) {
        println!(
            "mFARM={:.6} accuracy={:.6} FAB={:.6}",
            mfarm, report.accuracy, fab
        );
    } else {
        let scores: Vec<String> = report
            .metrics
            .iter()
            .map(|m| format!("{}={:.6}", m.metric.id(), m.fairness_score))
            .collect();
        println!("{} accuracy={:.6}", scores.join(" "), report.accuracy);
    }
    Ok(())
}

fn parse_metric_list(text: &str) -> Result<Vec<Metric>, String> {
    let mut metrics = Vec::new();
    for id in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let metric = Metric::from_id(id)
            .ok_or_else(|| format!("unknown metric `{id}` (expected mean, abs, ks, var, corr)"))?;
        if metrics.contains(&metric) {
            return Err(format!("metric `{id}` listed twice"));
        }
        metrics.push(metric);
    }
    if metrics.is_empty() {
        return Err("metric list is empty".to_string());
    }
    Ok(metrics)
}

fn synth(args: SynthArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.spec)
        .map_err(|e| input_err(format!("cannot read {}: {e}", args.spec.display())))?;
    let mut spec: SynthSpec =
        serde_json::from_str(&text).map_err(|e| input_err(format!("invalid spec: {e}")))?;
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    let out = generate_panel(&spec).map_err(config_err)?;

    let file = fs::File::create(&args.output)
        .map_err(|e| input_err(format!("cannot write {}: {e}", args.output.display())))?;
    write_panel_csv(&out.panel, file).map_err(input_err)?;
    println!(
        "panel written: {} cases x {} groups, {} clipped cells, seed {}",
        out.panel.n_cases(),
        out.panel.n_groups(),
        out.clipped,
        spec.seed
    );
    Ok(())
}

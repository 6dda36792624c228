//! Batch front end: validate transcripts, produce complexity reports, print
//! baselines, fit regressions, and sweep the sensitivity model.
//!
//! Exit codes: 0 success, 1 domain failure (invalid transcripts, degenerate
//! statistics, empty corpus), 2 I/O or usage failure. All file outputs are
//! byte-deterministic for identical inputs: rows are sorted, floats printed
//! with fixed six-decimal formatting.

use crate::analytics::{ols_time_on_pci, CohortRecord};
use crate::baseline::{opci, ProtocolShape};
use crate::graph::build_graph;
use crate::metrics::{default_sensitivity_steps, sensitivity_sweep};
use crate::parser::{dsl, interchange, ParseDiagnostic};
use crate::report::complexity_report;
use crate::transcript::Transcript;
use clap::{Parser, Subcommand};
use std::fs;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(name = "pci", version, about = "Batch complexity analysis of collaboration transcripts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Parse and validate transcripts, printing diagnostics
    Validate {
        /// Transcript files or directories to check
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Analyze transcripts into a complexity report CSV
    Analyze {
        /// Transcript files or directories to analyze
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Output directory for report files
        #[arg(long, default_value = "reports")]
        out: PathBuf,
        /// Also write per-protocol edge lists and task tables
        #[arg(long)]
        emit_graph: bool,
        /// Subject-meta key copied into the report's group_key column
        #[arg(long)]
        group_key: Option<String>,
    },
    /// Print the optimal complexity baseline for a protocol shape
    Baseline {
        /// Shape as L=<workers>,N=<w1,w2,...>; N may be empty ("L=2,N=")
        #[arg(long)]
        shape: String,
    },
    /// Fit duration against complexity from a report CSV
    Regress {
        /// Report CSV produced by analyze
        report: PathBuf,
        /// Regress complexity on duration instead
        #[arg(long)]
        reverse: bool,
        /// Also write the result as a JSON document
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Sweep the uniform-degree model over percentage increases
    Sensitivity {
        /// Base event count (at least 2)
        #[arg(long, default_value_t = 2.0, value_parser = parse_base)]
        base_k: f64,
        /// Base cue count (at least 2)
        #[arg(long, default_value_t = 2.0, value_parser = parse_base)]
        base_ic: f64,
        /// Comma-separated percentage steps (default: 10..5000 by 10)
        #[arg(long)]
        steps: Option<String>,
        /// Output CSV file
        #[arg(long, default_value = "sensitivity.csv")]
        out: PathBuf,
    },
}

fn parse_base(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !v.is_finite() || v < 2.0 {
        return Err(format!("base must be at least 2, got {s}"));
    }
    Ok(v)
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

type CliResult<T> = Result<T, Failure>;

/// Runs one parsed invocation and returns its exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Validate { paths } => cmd_validate(&paths),
        Command::Analyze { paths, out, emit_graph, group_key } => {
            cmd_analyze(&paths, out, emit_graph, group_key.as_deref())
        }
        Command::Baseline { shape } => cmd_baseline(&shape),
        Command::Regress { report, reverse, json } => cmd_regress(&report, reverse, json.as_deref()),
        Command::Sensitivity { base_k, base_ic, steps, out } => {
            cmd_sensitivity(base_k, base_ic, steps.as_deref(), &out)
        }
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("{}", f.message);
            f.code
        }
    }
}

fn is_transcript_ext(path: &Path) -> bool {
    matches!(path.extension().and_then(|e| e.to_str()), Some("cpt") | Some("json"))
}

/// Expands files and directories into a sorted transcript file list.
fn discover(paths: &[PathBuf]) -> CliResult<Vec<PathBuf>> {
    let mut files = Vec::new();
    for p in paths {
        let meta = fs::metadata(p)
            .map_err(|e| fail(EXIT_USAGE, format!("cannot read {}: {e}", p.display())))?;
        if meta.is_dir() {
            for entry in walkdir::WalkDir::new(p).sort_by(|a, b| a.file_name().cmp(b.file_name())) {
                let entry =
                    entry.map_err(|e| fail(EXIT_USAGE, format!("cannot read {}: {e}", p.display())))?;
                if entry.file_type().is_file() && is_transcript_ext(entry.path()) {
                    files.push(entry.path().to_path_buf());
                }
            }
        } else if is_transcript_ext(p) {
            files.push(p.clone());
        } else {
            return Err(fail(EXIT_USAGE, format!("unsupported transcript extension: {}", p.display())));
        }
    }
    Ok(files)
}

fn load(path: &Path) -> CliResult<Result<Transcript, Vec<ParseDiagnostic>>> {
    let src = fs::read_to_string(path)
        .map_err(|e| fail(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("cpt") => Ok(dsl::parse_dsl(&src)),
        Some("json") => Ok(interchange::parse_interchange(&src)),
        _ => Err(fail(EXIT_USAGE, format!("unsupported transcript extension: {}", path.display()))),
    }
}

fn cmd_validate(paths: &[PathBuf]) -> CliResult<i32> {
    let files = discover(paths)?;
    if files.is_empty() {
        return Err(fail(EXIT_DOMAIN, "no transcripts found"));
    }
    let mut clean = true;
    for f in &files {
        if let Err(diags) = load(f)? {
            clean = false;
            for d in diags {
                eprintln!("{}:{}", f.display(), d);
            }
        }
    }
    Ok(if clean { EXIT_OK } else { EXIT_DOMAIN })
}

struct ReportRow {
    protocol_id: String,
    task_name: String,
    pci: f64,
    opci: f64,
    duration: f64,
    perf: f64,
    ratio: f64,
    group: String,
}

fn sanitize(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

/// Keeps report files out of the input tree: when the output directory is
/// an input directory (or holds an input file), writes are namespaced one
/// level down under `reports/`.
fn resolve_out(out: PathBuf, inputs: &[PathBuf]) -> PathBuf {
    let absolute = |p: &Path| std::path::absolute(p).unwrap_or_else(|_| p.to_path_buf());
    let out_abs = absolute(&out);
    for p in inputs {
        let dir = if p.is_dir() {
            p.clone()
        } else {
            p.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new(".")).to_path_buf()
        };
        if absolute(&dir) == out_abs {
            return out.join("reports");
        }
    }
    out
}

fn cmd_analyze(paths: &[PathBuf], out: PathBuf, emit_graph: bool, group_key: Option<&str>) -> CliResult<i32> {
    let files = discover(paths)?;
    if files.is_empty() {
        return Err(fail(EXIT_DOMAIN, "no transcripts found"));
    }

    let mut transcripts = Vec::with_capacity(files.len());
    let mut clean = true;
    for f in &files {
        match load(f)? {
            Ok(t) => transcripts.push((f.clone(), t)),
            Err(diags) => {
                clean = false;
                for d in diags {
                    eprintln!("{}:{}", f.display(), d);
                }
            }
        }
    }
    if !clean {
        return Ok(EXIT_DOMAIN);
    }

    let mut analyzed = Vec::with_capacity(transcripts.len());
    for (path, t) in transcripts {
        let report = complexity_report(&t)
            .map_err(|e| fail(EXIT_DOMAIN, format!("{}: {e}", path.display())))?;
        let group = group_key
            .and_then(|k| t.subject_meta.get(k))
            .cloned()
            .unwrap_or_default();
        let row = ReportRow {
            protocol_id: t.protocol_id.clone(),
            task_name: t.task_name.clone(),
            pci: report.pci,
            opci: report.opci,
            duration: report.duration,
            perf: report.performance_index,
            ratio: report.ratio,
            group,
        };
        analyzed.push((row, t, path));
    }
    analyzed.sort_by(|a, b| {
        (&a.0.protocol_id, &a.0.task_name, &a.2).cmp(&(&b.0.protocol_id, &b.0.task_name, &b.2))
    });

    let out = resolve_out(out, paths);
    fs::create_dir_all(&out)
        .map_err(|e| fail(EXIT_USAGE, format!("cannot create {}: {e}", out.display())))?;

    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| fail(EXIT_USAGE, format!("cannot format report: {e}"));
    w.write_record([
        "protocol_id",
        "task_name",
        "pci_bits",
        "opci_bits",
        "gap_bits",
        "ratio",
        "duration_s",
        "perf_index_bits_per_s",
        "group_key",
    ])
    .map_err(io_err)?;
    for (r, _, _) in &analyzed {
        w.write_record([
            r.protocol_id.as_str(),
            r.task_name.as_str(),
            &format!("{:.6}", r.pci),
            &format!("{:.6}", r.opci),
            &format!("{:.6}", r.pci - r.opci),
            &format!("{:.6}", r.ratio),
            &format!("{:.6}", r.duration),
            &format!("{:.6}", r.perf),
            r.group.as_str(),
        ])
        .map_err(io_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| fail(EXIT_USAGE, format!("cannot format report: {e}")))?;
    let report_path = out.join("report.csv");
    fs::write(&report_path, bytes)
        .map_err(|e| fail(EXIT_USAGE, format!("cannot write {}: {e}", report_path.display())))?;

    if emit_graph {
        let graph_dir = out.join("graphs");
        fs::create_dir_all(&graph_dir)
            .map_err(|e| fail(EXIT_USAGE, format!("cannot create {}: {e}", graph_dir.display())))?;
        for (row, t, path) in &analyzed {
            let g = build_graph(t).map_err(|e| fail(EXIT_DOMAIN, format!("{}: {e}", path.display())))?;
            let stem = sanitize(&row.protocol_id);
            let edges_path = graph_dir.join(format!("{stem}.edges"));
            fs::write(&edges_path, g.to_edge_list())
                .map_err(|e| fail(EXIT_USAGE, format!("cannot write {}: {e}", edges_path.display())))?;
            let tasks_path = graph_dir.join(format!("{stem}.tasks.csv"));
            fs::write(&tasks_path, g.to_task_csv())
                .map_err(|e| fail(EXIT_USAGE, format!("cannot write {}: {e}", tasks_path.display())))?;
        }
    }

    println!("wrote {} rows to {}", analyzed.len(), report_path.display());
    Ok(EXIT_OK)
}

fn parse_shape(s: &str) -> Result<(u32, Vec<u32>), String> {
    let rest = s.strip_prefix("L=").ok_or("shape must start with L=")?;
    let (l_str, n_str) = rest.split_once(",N=").ok_or("shape must contain ,N=")?;
    let l: u32 = l_str.parse().map_err(|_| format!("`{l_str}` is not a worker count"))?;
    let n = if n_str.is_empty() {
        Vec::new()
    } else {
        n_str
            .split(',')
            .map(|part| part.parse::<u32>().map_err(|_| format!("`{part}` is not a worker count")))
            .collect::<Result<Vec<u32>, String>>()?
    };
    Ok((l, n))
}

fn cmd_baseline(shape_str: &str) -> CliResult<i32> {
    let (l, n) = parse_shape(shape_str)
        .map_err(|e| fail(EXIT_USAGE, format!("invalid --shape `{shape_str}`: {e}")))?;
    let shape = ProtocolShape::new(l, n).map_err(|e| fail(EXIT_DOMAIN, e.to_string()))?;
    println!("opci_bits {:.6}", opci(&shape));
    Ok(EXIT_OK)
}

fn cmd_regress(report: &Path, reverse: bool, json: Option<&Path>) -> CliResult<i32> {
    let mut reader = csv::Reader::from_path(report)
        .map_err(|e| fail(EXIT_USAGE, format!("cannot read {}: {e}", report.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| fail(EXIT_DOMAIN, format!("{}: {e}", report.display())))?
        .clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| fail(EXIT_DOMAIN, format!("{}: missing column {name}", report.display())))
    };
    let id_col = col("protocol_id")?;
    let pci_col = col("pci_bits")?;
    let duration_col = col("duration_s")?;

    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| fail(EXIT_DOMAIN, format!("{}: {e}", report.display())))?;
        let field = |i: usize| -> CliResult<f64> {
            row.get(i)
                .and_then(|v| v.parse::<f64>().ok())
                .ok_or_else(|| fail(EXIT_DOMAIN, format!("{}: malformed numeric field", report.display())))
        };
        let (x, y) = if reverse {
            (field(duration_col)?, field(pci_col)?)
        } else {
            (field(pci_col)?, field(duration_col)?)
        };
        records.push(CohortRecord {
            protocol_id: row.get(id_col).unwrap_or_default().to_string(),
            pci: x,
            opci: 0.0,
            duration: y,
            performance_index: 0.0,
            group_key: None,
        });
    }

    let fit = ols_time_on_pci(&records).map_err(|e| fail(EXIT_DOMAIN, e.to_string()))?;
    println!("n {}", fit.n);
    println!("slope {:.6}", fit.slope);
    println!("intercept {:.6}", fit.intercept);
    println!("se_estimate {:.6}", fit.se_estimate);
    println!("p_value_slope {:.6e}", fit.p_value_slope);
    println!("r_squared {:.6}", fit.r_squared);

    if let Some(path) = json {
        let mut doc = serde_json::to_string_pretty(&fit).expect("regression results serialize");
        doc.push('\n');
        fs::write(path, doc)
            .map_err(|e| fail(EXIT_USAGE, format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(EXIT_OK)
}

fn parse_steps(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|part| {
            let v: f64 = part.parse().map_err(|_| format!("`{part}` is not a percentage"))?;
            if !v.is_finite() || v < 0.0 {
                return Err(format!("percentages must be finite and non-negative, got `{part}`"));
            }
            Ok(v)
        })
        .collect()
}

fn cmd_sensitivity(base_k: f64, base_ic: f64, steps: Option<&str>, out: &Path) -> CliResult<i32> {
    let steps = match steps {
        Some(s) => parse_steps(s).map_err(|e| fail(EXIT_USAGE, format!("invalid --steps: {e}")))?,
        None => default_sensitivity_steps(),
    };
    let rows = sensitivity_sweep(base_k, base_ic, &steps);
    let mut csv = String::from("pct,pci_vs_ic_bits,pci_vs_k_bits\n");
    for r in &rows {
        csv.push_str(&format!("{:.6},{:.6},{:.6}\n", r.pct, r.pci_vs_ic, r.pci_vs_k));
    }
    fs::write(out, csv).map_err(|e| fail(EXIT_USAGE, format!("cannot write {}: {e}", out.display())))?;
    println!("wrote {} rows to {}", rows.len(), out.display());
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_strings_parse() {
        assert_eq!(parse_shape("L=2,N=2,1"), Ok((2, vec![2, 1])));
        assert_eq!(parse_shape("L=1,N="), Ok((1, vec![])));
        assert_eq!(parse_shape("L=10,N=3"), Ok((10, vec![3])));
        assert!(parse_shape("2,N=1").is_err());
        assert!(parse_shape("L=2").is_err());
        assert!(parse_shape("L=x,N=1").is_err());
        assert!(parse_shape("L=2,N=1,").is_err());
        assert!(parse_shape("L=2,N=-1").is_err());
    }

    #[test]
    fn step_lists_parse() {
        assert_eq!(parse_steps("0,10,50.5"), Ok(vec![0.0, 10.0, 50.5]));
        assert!(parse_steps("10,x").is_err());
        assert!(parse_steps("-5").is_err());
        assert!(parse_steps("").is_err());
    }

    #[test]
    fn bases_below_two_are_rejected() {
        assert!(parse_base("2").is_ok());
        assert!(parse_base("3.5").is_ok());
        assert!(parse_base("1.99").is_err());
        assert!(parse_base("nan").is_err());
        assert!(parse_base("x").is_err());
    }

    #[test]
    fn protocol_ids_become_safe_file_stems() {
        assert_eq!(sanitize("car04"), "car04");
        assert_eq!(sanitize("subject/4 trial:2"), "subject_4_trial_2");
    }

    #[test]
    fn output_inside_an_input_directory_is_namespaced() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().to_path_buf();
        let resolved = resolve_out(input.clone(), &[input.clone()]);
        assert_eq!(resolved, input.join("reports"));

        let elsewhere = dir.path().join("out");
        assert_eq!(resolve_out(elsewhere.clone(), &[input.clone()]), elsewhere);

        let file_input = dir.path().join("a.cpt");
        std::fs::write(&file_input, "x").unwrap();
        assert_eq!(resolve_out(input.clone(), &[file_input]), input.join("reports"));
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}

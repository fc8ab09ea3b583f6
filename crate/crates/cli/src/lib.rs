// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! The `ksigraph` command line, exposed as a library so it can be driven
//! in-process by tests.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ksigraph_core::calibration::{self, CalibrationCurve};
use ksigraph_core::er_theory::{self, ErExpectation};
use ksigraph_core::{
    load_edge_list, verify_bounds, CentralityTable, DistributionSummary, GeneratorSpec, Graph, IngestOptions,
    IngestReport, Model, SummaryOptions,
};
use serde::Serialize;

pub mod manifest;

use manifest::{OutputDir, RunManifest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ksigraph", version, about = "Ksi-centrality analysis of networks")]
pub struct Cli {
    /// Seed for every random choice in the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 lets the runtime decide. Never changes results.
    #[arg(long, global = true, env = "KSIGRAPH_THREADS")]
    pub threads: Option<usize>,
    /// Directory for output files and the run manifest.
    #[arg(long, global = true, default_value = ".")]
    pub output_dir: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-node centralities, distribution summary and verdict for one graph.
    Analyze(AnalyzeArgs),
    /// Writes a generated graph as an edge list.
    Generate(GenerateArgs),
    /// Closed-form expectations for G(n, p), optionally against simulation.
    Theory(TheoryArgs),
    /// Checks the spectral and Cheeger lower bounds on every node.
    Verify(VerifyArgs),
    /// Builds a BA calibration curve, or inverts one.
    Calibrate(CalibrateArgs),
    /// Distribution summary for a file of numbers.
    Fit(FitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Er,
    Ws,
    Ba,
    Bhl,
    Star,
    Complete,
    Path,
    Cycle,
}

/// Where a graph comes from: an edge list, a JSON generator spec, or model flags.
#[derive(Debug, Args)]
pub struct GraphSource {
    /// Edge list, one `u v` pair per line.
    #[arg(long, conflicts_with_all = ["spec", "model"])]
    pub input: Option<PathBuf>,
    /// Generator spec as JSON, or `@path` to a JSON file. A missing seed falls back to --seed.
    #[arg(long, conflicts_with = "model")]
    pub spec: Option<String>,
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n0: Option<usize>,
    /// Keep only the largest connected component.
    #[arg(long)]
    pub lcc: bool,
    /// Reject self-loops instead of dropping them.
    #[arg(long)]
    pub strict_self_loops: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: GraphSource,
    /// Histogram bins; Sturges' rule by default.
    #[arg(long)]
    pub bins: Option<usize>,
    /// Fit the Weibull to ksi - 1.
    #[arg(long)]
    pub shift: bool,
    /// Also summarize normalized ksi.
    #[arg(long)]
    pub normalized: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub source: GraphSource,
    /// Output file name inside the output directory.
    #[arg(long, default_value = "edges.txt")]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct TheoryArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: f64,
    /// Also simulate this many seeded G(n, p) graphs.
    #[arg(long)]
    pub simulate: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: GraphSource,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Network size for a new curve.
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated BA m values; log-spaced by default.
    #[arg(long, value_delimiter = ',')]
    pub m_grid: Vec<usize>,
    #[arg(long, default_value_t = calibration::DEFAULT_GRID_POINTS)]
    pub points: usize,
    #[arg(long, default_value_t = calibration::DEFAULT_REPS)]
    pub reps: usize,
    /// Curve file name inside the output directory.
    #[arg(long, default_value = "curve.json")]
    pub out: String,
    /// Invert an existing curve instead of building one.
    #[arg(long, requires = "curve")]
    pub invert: bool,
    #[arg(long)]
    pub curve: Option<PathBuf>,
    /// Average normalized ksi to invert.
    #[arg(long, conflicts_with = "input")]
    pub xi_hat: Option<f64>,
    /// Edge list whose average normalized ksi is inverted.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Network size the inverted m refers to; defaults to the input graph's size.
    #[arg(long)]
    pub n_target: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Numbers separated by whitespace or commas; `#` starts a comment.
    #[arg(long)]
    pub values: PathBuf,
    #[arg(long)]
    pub bins: Option<usize>,
    /// Fit the Weibull to x - 1.
    #[arg(long)]
    pub shift: bool,
}

/// Marks a run whose graph violated a bound.
#[derive(Debug)]
struct BoundViolation(usize);

impl std::fmt::Display for BoundViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} bound violation(s)", self.0)
    }
}

impl std::error::Error for BoundViolation {}

/// Maps an error to its exit code.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.downcast_ref::<BoundViolation>().is_some() {
            return EXIT_VIOLATION;
        }
        if let Some(e) = cause.downcast_ref::<ksigraph_core::Error>() {
            return if e.is_input_error() { EXIT_INPUT } else { EXIT_DOMAIN };
        }
    }
    EXIT_INPUT
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let command_line = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(&cli, command_line, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli, command_line: Vec<String>, stdout: &mut dyn Write) -> Result<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().context("building thread pool")?;
    let mut buf: Vec<u8> = Vec::new();
    let result = pool.install(|| {
        let out = &mut buf;
        match &cli.command {
            Command::Analyze(a) => analyze(cli, a, command_line, out),
            Command::Generate(a) => generate(cli, a, command_line),
            Command::Theory(a) => theory(cli, a, command_line, out),
            Command::Verify(a) => verify(cli, a, command_line, out),
            Command::Calibrate(a) => calibrate(cli, a, command_line, out),
            Command::Fit(a) => fit(cli, a, command_line, out),
        }
    });
    stdout.write_all(&buf)?;
    result
}

fn outputs(cli: &Cli, command: &str, command_line: Vec<String>) -> Result<OutputDir> {
    OutputDir::new(cli.output_dir.clone(), RunManifest::new(command, command_line))
}

fn print_json<T: Serialize>(stdout: &mut dyn Write, value: &T) -> Result<()> {
    writeln!(stdout, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn invalid(message: String) -> anyhow::Error {
    ksigraph_core::Error::InvalidParameter(message).into()
}

fn read_input(path: &Path, out: &mut OutputDir) -> Result<Vec<u8>> {
    let bytes = fs::read(path)
        .map_err(ksigraph_core::Error::from)
        .with_context(|| format!("reading {}", path.display()))?;
    out.manifest.add_input(path, &bytes);
    Ok(bytes)
}

struct LoadedGraph {
    graph: Graph,
    ingest: Option<IngestReport>,
}

fn require<T>(value: Option<T>, flag: &str, model: ModelKind) -> Result<T> {
    value.ok_or_else(|| invalid(format!("--{flag} is required for model {model:?}")))
}

fn model_from_flags(src: &GraphSource, kind: ModelKind) -> Result<Model> {
    let n = require(src.n, "n", kind)?;
    Ok(match kind {
        ModelKind::Er => Model::Er {
            n,
            p: require(src.p, "p", kind)?,
        },
        ModelKind::Ws => Model::Ws {
            n,
            k: require(src.k, "k", kind)?,
            p: require(src.p, "p", kind)?,
        },
        ModelKind::Ba => Model::Ba {
            n,
            m: require(src.m, "m", kind)?,
        },
        ModelKind::Bhl => Model::Bhl {
            n0: require(src.n0, "n0", kind)?,
            m: require(src.m, "m", kind)?,
            n,
        },
        ModelKind::Star => Model::Star { n },
        ModelKind::Complete => Model::Complete { n },
        ModelKind::Path => Model::Path { n },
        ModelKind::Cycle => Model::Cycle { n },
    })
}

fn parse_spec(text: &str, default_seed: u64) -> Result<GeneratorSpec> {
    let mut value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| invalid(format!("generator spec is not valid JSON: {e}")))?;
    if let serde_json::Value::Object(map) = &mut value {
        map.entry("seed").or_insert(default_seed.into());
    }
    serde_json::from_value(value).map_err(|e| invalid(format!("bad generator spec: {e}")))
}

fn generator_spec(cli: &Cli, src: &GraphSource, out: &mut OutputDir) -> Result<GeneratorSpec> {
    let spec = match (&src.spec, src.model) {
        (Some(text), _) => {
            let text = match text.strip_prefix('@') {
                Some(path) => String::from_utf8(read_input(Path::new(path), out)?)
                    .map_err(|_| invalid(format!("{path} is not UTF-8")))?,
                None => text.clone(),
            };
            parse_spec(&text, cli.seed)?
        }
        (None, Some(kind)) => GeneratorSpec::new(model_from_flags(src, kind)?, cli.seed),
        (None, None) => return Err(invalid("one of --input, --spec or --model is required".into())),
    };
    spec.model.validate()?;
    Ok(spec)
}

fn load_graph(cli: &Cli, src: &GraphSource, out: &mut OutputDir) -> Result<LoadedGraph> {
    if let Some(path) = &src.input {
        let bytes = read_input(path, out)?;
        let opts = IngestOptions {
            drop_self_loops: !src.strict_self_loops,
            take_lcc: src.lcc,
            ..Default::default()
        };
        let (graph, report) =
            load_edge_list(bytes.as_slice(), &opts).with_context(|| format!("parsing {}", path.display()))?;
        return Ok(LoadedGraph {
            graph,
            ingest: Some(report),
        });
    }
    let spec = generator_spec(cli, src, out)?;
    out.manifest.add_seed(spec.seed);
    out.manifest.generator_spec = Some(spec);
    let mut graph = spec.generate()?;
    if src.lcc {
        graph = graph.largest_connected_component();
    }
    Ok(LoadedGraph { graph, ingest: None })
}

fn to_bytes<F>(write: F) -> Result<Vec<u8>>
where
    F: FnOnce(&mut Vec<u8>) -> ksigraph_core::Result<()>,
{
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(buf)
}

fn write_distribution(out: &mut OutputDir, prefix: &str, summary: &DistributionSummary) -> Result<()> {
    out.write(
        &format!("{prefix}histogram.csv"),
        &to_bytes(|b| summary.histogram.write_csv(b))?,
    )?;
    out.write(&format!("{prefix}qq.csv"), &to_bytes(|b| summary.write_qq_csv(b))?)?;
    out.write(
        &format!("{prefix}loglinear.csv"),
        &to_bytes(|b| summary.write_loglinear_csv(b))?,
    )?;
    Ok(())
}

fn analyze(cli: &Cli, args: &AnalyzeArgs, command_line: Vec<String>, stdout: &mut dyn Write) -> Result<()> {
    let mut out = outputs(cli, "analyze", command_line)?;
    let loaded = load_graph(cli, &args.source, &mut out)?;
    let g = &loaded.graph;
    let table = CentralityTable::compute(g);
    out.write("centrality.csv", &to_bytes(|b| table.write_csv(b))?)?;

    let opts = SummaryOptions {
        bins: args.bins,
        shift: args.shift,
    };
    let ksi = DistributionSummary::compute(&table.ksi.values, &opts)?;
    write_distribution(&mut out, "ksi_", &ksi)?;
    let normalized = if args.normalized {
        let s = DistributionSummary::compute(&table.normalized_ksi.values, &opts)?;
        write_distribution(&mut out, "normalized_ksi_", &s)?;
        Some(s)
    } else {
        None
    };

    let graph = table.summary(g);
    #[derive(Serialize)]
    struct Summary<'a> {
        graph: &'a ksigraph_core::GraphSummary,
        ingest: &'a Option<IngestReport>,
        verdict: Option<ksigraph_core::Verdict>,
        skewness: Option<f64>,
        ksi: &'a DistributionSummary,
        normalized_ksi: &'a Option<DistributionSummary>,
    }
    out.write_json(
        "summary.json",
        &Summary {
            graph: &graph,
            ingest: &loaded.ingest,
            verdict: ksi.verdict,
            skewness: ksi.skewness,
            ksi: &ksi,
            normalized_ksi: &normalized,
        },
    )?;
    out.finish()?;

    #[derive(Serialize)]
    struct Brief<'a> {
        graph: &'a ksigraph_core::GraphSummary,
        skewness: Option<f64>,
        verdict: Option<ksigraph_core::Verdict>,
    }
    print_json(
        stdout,
        &Brief {
            graph: &graph,
            skewness: ksi.skewness,
            verdict: ksi.verdict,
        },
    )
}

fn generate(cli: &Cli, args: &GenerateArgs, command_line: Vec<String>) -> Result<()> {
    if args.source.input.is_some() {
        return Err(invalid("generate takes --spec or --model, not --input".into()));
    }
    let mut out = outputs(cli, "generate", command_line)?;
    let loaded = load_graph(cli, &args.source, &mut out)?;
    let bytes = to_bytes(|b| ksigraph_core::graph::write_edge_list(&loaded.graph, b))?;
    out.write(&args.out, &bytes)?;
    out.finish()
}

fn theory(cli: &Cli, args: &TheoryArgs, command_line: Vec<String>, stdout: &mut dyn Write) -> Result<()> {
    let mut out = outputs(cli, "theory", command_line)?;
    let expectation = ErExpectation::new(args.n, args.p)?;
    let lambda = args.p * args.n as f64;

    #[derive(Serialize)]
    struct Simulated {
        samples: usize,
        seed: u64,
        boundary_edges: er_theory::Estimate,
        boundary_edges_z: f64,
        normalized_ksi: er_theory::Estimate,
        normalized_ksi_z: f64,
    }
    #[derive(Serialize)]
    struct Theory {
        #[serde(flatten)]
        expectation: ErExpectation,
        lambda: f64,
        sparse_asymptotic: f64,
        simulation: Option<Simulated>,
    }
    let simulation = match args.simulate {
        Some(samples) => {
            out.manifest.add_seed(cli.seed);
            let sim = er_theory::simulate(args.n, args.p, samples, cli.seed)?;
            Some(Simulated {
                samples,
                seed: cli.seed,
                boundary_edges: sim.boundary_edges,
                boundary_edges_z: sim.boundary_edges.z_score(expectation.expected_boundary),
                normalized_ksi: sim.normalized_ksi,
                normalized_ksi_z: sim.normalized_ksi.z_score(expectation.expected_normalized_ksi),
            })
        }
        None => None,
    };
    let report = Theory {
        expectation,
        lambda,
        sparse_asymptotic: er_theory::sparse_asymptotic(lambda, args.n),
        simulation,
    };
    out.write_json("theory.json", &report)?;
    out.finish()?;
    print_json(stdout, &report)
}

fn verify(cli: &Cli, args: &VerifyArgs, command_line: Vec<String>, stdout: &mut dyn Write) -> Result<()> {
    let mut out = outputs(cli, "verify", command_line)?;
    let loaded = load_graph(cli, &args.source, &mut out)?;
    let report = verify_bounds(&loaded.graph)?;
    out.write_json("bounds.json", &report)?;
    out.finish()?;

    #[derive(Serialize)]
    struct Brief {
        n: usize,
        connected: bool,
        lambda2: f64,
        cheeger: f64,
        violations: usize,
        all_satisfied: bool,
    }
    print_json(
        stdout,
        &Brief {
            n: report.n,
            connected: report.connected,
            lambda2: report.lambda2,
            cheeger: report.cheeger,
            violations: report.violations,
            all_satisfied: report.all_satisfied(),
        },
    )?;
    if !report.all_satisfied() {
        return Err(BoundViolation(report.violations).into());
    }
    Ok(())
}

fn calibrate(cli: &Cli, args: &CalibrateArgs, command_line: Vec<String>, stdout: &mut dyn Write) -> Result<()> {
    let mut out = outputs(cli, "calibrate", command_line)?;
    if args.invert {
        let curve_path = args
            .curve
            .as_ref()
            .ok_or_else(|| invalid("--invert needs --curve".into()))?;
        let bytes = read_input(curve_path, &mut out)?;
        let curve: CalibrationCurve = serde_json::from_slice(&bytes)
            .map_err(|e| invalid(format!("{} is not a calibration curve: {e}", curve_path.display())))?;
        let (xi_hat, graph_n) = match (args.xi_hat, &args.input) {
            (Some(x), _) => (x, None),
            (None, Some(path)) => {
                let bytes = read_input(path, &mut out)?;
                let (g, _) = load_edge_list(bytes.as_slice(), &IngestOptions::default())
                    .with_context(|| format!("parsing {}", path.display()))?;
                (ksigraph_core::centrality::average_normalized_ksi(&g), Some(g.n()))
            }
            (None, None) => return Err(invalid("--invert needs --xi-hat or --input".into())),
        };
        let n_target = args
            .n_target
            .or(graph_n)
            .ok_or_else(|| invalid("--n-target is required with --xi-hat".into()))?;
        let inversion = curve.invert(xi_hat, n_target)?;
        out.write_json("inversion.json", &inversion)?;
        out.finish()?;
        return print_json(stdout, &inversion);
    }

    let n = args
        .n
        .ok_or_else(|| invalid("--n is required to build a curve".into()))?;
    let grid = if args.m_grid.is_empty() {
        calibration::default_m_grid(n, args.points)
    } else {
        args.m_grid.clone()
    };
    out.manifest.add_seed(cli.seed);
    let curve = calibration::build_curve(n, &grid, args.reps, cli.seed)?;
    // The curve file stays loadable as a plain CalibrationCurve.
    let mut text = serde_json::to_string_pretty(&curve)?;
    text.push('\n');
    out.write(&args.out, text.as_bytes())?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["m", "m_over_n", "xi_hat_mean", "xi_hat_stderr", "curve"])?;
    for p in &curve.points {
        w.write_record([
            p.m.to_string(),
            p.m_over_n.to_string(),
            p.xi_hat_mean.to_string(),
            p.xi_hat_stderr.to_string(),
            curve.eval(p.m_over_n).to_string(),
        ])?;
    }
    let points = w.into_inner().map_err(|e| anyhow!("{e}"))?;
    out.write("curve_points.csv", &points)?;
    out.finish()?;

    #[derive(Serialize)]
    struct Brief {
        n: usize,
        points: usize,
        backbone: calibration::Backbone,
        fit_rmse: f64,
        interpolant_loo_rmse: Option<f64>,
        range: (f64, f64),
    }
    print_json(
        stdout,
        &Brief {
            n,
            points: curve.points.len(),
            backbone: curve.backbone,
            fit_rmse: curve.fit.rmse,
            interpolant_loo_rmse: curve.interpolant_loo_rmse,
            range: curve.range(),
        },
    )
}

/// Reads numbers separated by whitespace or commas, with `#` comments.
pub fn parse_values(text: &str) -> ksigraph_core::Result<Vec<f64>> {
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for token in line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
        {
            let v: f64 = token.parse().map_err(|_| ksigraph_core::Error::Parse {
                line: idx + 1,
                message: format!("not a number: {token:?}"),
            })?;
            values.push(v);
        }
    }
    Ok(values)
}

fn fit(cli: &Cli, args: &FitArgs, command_line: Vec<String>, stdout: &mut dyn Write) -> Result<()> {
    let mut out = outputs(cli, "fit", command_line)?;
    let bytes = read_input(&args.values, &mut out)?;
    let text = String::from_utf8(bytes).map_err(|_| invalid(format!("{} is not UTF-8", args.values.display())))?;
    let values = parse_values(&text).with_context(|| format!("parsing {}", args.values.display()))?;
    if values.is_empty() {
        bail!(ksigraph_core::Error::DegenerateSample(format!(
            "{} holds no values",
            args.values.display()
        )));
    }
    let summary = DistributionSummary::compute(
        &values,
        &SummaryOptions {
            bins: args.bins,
            shift: args.shift,
        },
    )?;
    write_distribution(&mut out, "", &summary)?;
    out.write_json("fit.json", &summary)?;
    out.finish()?;

    #[derive(Serialize)]
    struct Brief<'a> {
        sample_size: usize,
        skewness: Option<f64>,
        verdict: Option<ksigraph_core::Verdict>,
        weibull: Option<ksigraph_core::stats::WeibullFit>,
        loglinear: &'a Option<ksigraph_core::stats::LogLinearFit>,
        notes: &'a [String],
    }
    print_json(
        stdout,
        &Brief {
            sample_size: summary.sample_size,
            skewness: summary.skewness,
            verdict: summary.verdict,
            weibull: summary.weibull,
            loglinear: &summary.loglinear,
            notes: &summary.notes,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_parse_with_comments_and_commas() {
        let v = parse_values("# header\n1, 2.5 3\n\n4 # tail\n").unwrap();
        assert_eq!(v, vec![1.0, 2.5, 3.0, 4.0]);
    }

    #[test]
    fn bad_value_reports_line() {
        let err = parse_values("1\n2\nx\n").unwrap_err();
        assert!(err.to_string().starts_with("line 3"), "{err}");
    }

    #[test]
    fn spec_seed_falls_back_to_global() {
        let s = parse_spec(r#"{"model":"ba","params":{"n":10,"m":2}}"#, 7).unwrap();
        assert_eq!(s.seed, 7);
        let s = parse_spec(r#"{"model":"ba","params":{"n":10,"m":2},"seed":3}"#, 7).unwrap();
        assert_eq!(s.seed, 3);
    }

    #[test]
    fn exit_codes_follow_error_class() {
        let input: anyhow::Error = ksigraph_core::Error::Parse {
            line: 1,
            message: "x".into(),
        }
        .into();
        assert_eq!(exit_code(&input.context("reading f")), EXIT_INPUT);
        let domain: anyhow::Error = ksigraph_core::Error::OutOfRange {
            target: 2.0,
            low: 0.0,
            high: 1.0,
        }
        .into();
        assert_eq!(exit_code(&domain), EXIT_DOMAIN);
        assert_eq!(exit_code(&BoundViolation(1).into()), EXIT_VIOLATION);
    }
}

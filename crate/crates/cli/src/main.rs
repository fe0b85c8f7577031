use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use oriented_spanner::gen::{generate, Distribution};
use oriented_spanner::io::digest;
use oriented_spanner::render::{render_svg, RenderOptions};
use oriented_spanner::*;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "ospanner", version, about = "Sparse oriented spanners and oriented dilation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random point set
    Gen {
        n: usize,
        d: usize,
        /// uniform-cube, gaussian or clustered
        #[arg(default_value = "uniform-cube")]
        distribution: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an oriented spanner and write its edge list
    Spanner {
        points: PathBuf,
        #[command(flatten)]
        constants: Constants,
        /// Where to write the graph; standard output if omitted
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Measure the oriented dilation of a graph
    Dilation {
        /// Point file, or a distance matrix with --metric
        points: PathBuf,
        graph: PathBuf,
        #[arg(long, conflicts_with = "approx")]
        exact: bool,
        /// Approximate within a factor (1 - EPS)
        #[arg(long, value_name = "EPS")]
        approx: Option<f64>,
        /// Read the first file as a distance matrix (exact mode only)
        #[arg(long, conflicts_with = "approx")]
        metric: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Approximate and exact minimum-perimeter triangle through two points
    MinTriangle {
        points: PathBuf,
        p: usize,
        q: usize,
        #[arg(long, default_value_t = 0.5)]
        eps1: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Draw a planar graph as SVG
    Render {
        points: PathBuf,
        graph: PathBuf,
        #[arg(long, default_value_t = 800.0)]
        size: f64,
        #[arg(long, default_value_t = 1.0)]
        stroke_width: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Constants {
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    #[arg(long)]
    eps1: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Theorem)]
    mode: ModeArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Theorem,
    Practical,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Text,
    Json,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn report<R: Serialize, C: Serialize>(r: &RunReport<R, C>, format: Format) -> String {
    match format {
        Format::Json => r.to_json() + "\n",
        Format::Text => r.to_text(),
    }
}

impl Constants {
    fn config(&self) -> Result<SpannerConfig, Failure> {
        let overridden = self.eps1.is_some() || self.s.is_some() || self.alpha.is_some();
        let mut cfg = match self.mode {
            ModeArg::Theorem if overridden => {
                return Err(Failure::Usage(
                    "--eps1, --s and --alpha cannot be combined with --mode theorem".into(),
                ))
            }
            ModeArg::Theorem => SpannerConfig::theorem(self.eps)?,
            ModeArg::Practical => SpannerConfig::practical(self.eps)?,
        };
        if let Some(v) = self.eps1 {
            cfg = cfg.with_eps1(v);
        }
        if let Some(v) = self.s {
            cfg = cfg.with_s(v);
        }
        if let Some(v) = self.alpha {
            cfg = cfg.with_alpha(v);
        }
        Ok(cfg)
    }
}

#[derive(Serialize)]
struct SpannerResult {
    stats: SpannerStats,
    graph_digest: String,
}

#[derive(Serialize)]
struct MinTriangleResult {
    approximate: TriangleTriple,
    exact: TriangleTriple,
    ratio: f64,
    ann_queries: u64,
}

#[derive(Serialize)]
struct EpsConfig {
    eps1: f64,
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen { n, d, distribution, seed, out } => {
            let dist: Distribution = distribution.parse()?;
            let ps = generate(n, d, dist, seed)?;
            emit(&out, &io::write_points(&ps))
        }
        Command::Spanner { points, constants, out, format } => {
            let text = read(&points)?;
            let ps = parse_points(&text)?;
            let cfg = constants.config()?;
            let sp = build_oriented_spanner(&ps, &cfg)?;
            let graph = write_graph(&sp.graph);
            let result = SpannerResult {
                stats: sp.stats,
                graph_digest: digest(&[graph.as_bytes()]),
            };
            let r = RunReport::new("spanner", digest(&[text.as_bytes()]), cfg, result);
            match &out {
                Some(_) => {
                    fs::write(out.as_ref().unwrap(), &graph)
                        .map_err(|e| Failure::Usage(format!("cannot write graph: {e}")))?;
                    print!("{}", report(&r, format));
                }
                None => {
                    println!("{graph}");
                    eprint!("{}", report(&r, format));
                }
            }
            Ok(())
        }
        Command::Dilation { points, graph, exact: _, approx, metric, out, format } => {
            let (ptext, gtext) = (read(&points)?, read(&graph)?);
            let g = parse_graph(&gtext)?;
            let input = digest(&[ptext.as_bytes(), gtext.as_bytes()]);
            let result = if metric {
                exact_oriented_dilation(&parse_metric_matrix(&ptext)?, &g)?
            } else {
                let ps = parse_points(&ptext)?;
                match approx {
                    Some(eps) => {
                        let cfg = ApproxDilationConfig::theorem(eps)?;
                        approx_oriented_dilation(&ps, &g, &cfg, &mut dijkstra_oracle(&g, &ps))?
                    }
                    None => exact_oriented_dilation(&ps, &g)?,
                }
            };
            let mode = result.mode;
            let r = RunReport::new("dilation", input, mode, result);
            emit(&out, &report(&r, format))
        }
        Command::MinTriangle { points, p, q, eps1, out, format } => {
            let text = read(&points)?;
            let ps = std::sync::Arc::new(parse_points(&text)?);
            let cfg = TriangleQueryConfig::new(eps1, ps.dim())?;
            let mut index = AnnIndex::build(ps.clone());
            let tq = min_triangle::approx_min_triangle_detailed(&mut index, p, q, &cfg)?;
            let exact = exact_min_triangle(ps.as_ref(), p, q)?;
            let result = MinTriangleResult {
                approximate: tq.triple,
                exact,
                ratio: tq.triple.perimeter / exact.perimeter,
                ann_queries: tq.ann_queries,
            };
            let r = RunReport::new("min-triangle", digest(&[text.as_bytes()]), EpsConfig { eps1 }, result);
            emit(&out, &report(&r, format))
        }
        Command::Render { points, graph, size, stroke_width, out } => {
            let ps = parse_points(&read(&points)?)?;
            let g = parse_graph(&read(&graph)?)?;
            let opts = RenderOptions {
                size,
                stroke_width,
                ..RenderOptions::default()
            };
            emit(&out, &render_svg(&ps, &g, &opts)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Usage => 1,
                ErrorKind::Validation => 2,
                ErrorKind::Internal => 3,
            })
        }
    }
}

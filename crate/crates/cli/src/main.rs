mod output;
mod verify;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use smalltri::objectives::{
    clustered_construction, clustered_exact, evaluate_exact, evaluate_with, fig13_exact, parse_configuration,
    parse_exact_configuration, write_configuration, write_exact_configuration, MAX_CLUSTER_EPS,
};
use smalltri::partition::{parse_regions, CASE_REGIONS, PAPER_GRID};
use smalltri::render::{render_svg, RenderOptions};
use smalltri::search::{
    maximize_min_area, minimize_small_count, Objective, SearchParams, DEFAULT_SEED, SCHEMA_VERSION,
};
use smalltri::{Configuration, ExactConfiguration, RegionSpec, QUARTER, SIX_TWENTY_FIFTHS};

use output::{emit, to_json, write_atomic};

#[derive(Parser, Debug)]
#[command(name = "smalltri", version, about = "Small triangles among points in a triangle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Scan the corner-region area over the rotation angle.
    LemmaScan {
        #[arg(long, default_value_t = 1e-5)]
        step: f64,
        #[arg(long, default_value = "lemma_scan.csv")]
        csv: PathBuf,
        #[arg(long, default_value = "lemma_scan.json")]
        json: PathBuf,
    },
    /// Run the numerical verification suites.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Case region file; the bundled one by default.
        #[arg(long)]
        regions: Option<PathBuf>,
        /// Sample points per region in the coverage checks.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        /// JSON report path.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Multi-start search for extremal configurations.
    Search {
        #[arg(long, value_enum, default_value_t = ObjectiveArg::MaxMinArea)]
        objective: ObjectiveArg,
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Threshold for min-small-count.
        #[arg(long, default_value_t = QUARTER + 1e-9)]
        sigma: f64,
        #[arg(long)]
        max_iters: Option<usize>,
        /// Configuration file used as an extra starting point.
        #[arg(long)]
        init: Vec<PathBuf>,
        /// JSON file with all search parameters; overrides the flags above.
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Emit a named construction.
    Construct {
        #[arg(long, value_enum)]
        name: ConstructionName,
        /// Cluster size for `clustered`.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Cluster radius for `clustered`.
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = ConstructFormat::Text)]
        format: ConstructFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Draw a configuration as SVG.
    Render {
        #[arg(long, conflicts_with = "construct", required_unless_present = "construct")]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        construct: Option<ConstructionName>,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 0.005)]
        eps: f64,
        /// Grid resolution to draw.
        #[arg(long, num_args = 0..=1, default_missing_value = "10")]
        grid: Option<u32>,
        /// Region file; `--region` selects blocks from it (all when omitted).
        #[arg(long)]
        regions: Option<PathBuf>,
        #[arg(long)]
        region: Vec<String>,
        /// Comma-separated point labels.
        #[arg(long, value_delimiter = ',')]
        labels: Option<Vec<String>>,
        #[arg(long, default_value_t = 480)]
        width: u32,
        #[arg(long, default_value = "out.svg")]
        output: PathBuf,
    },
    /// Triple areas and small-triangle counts of a configuration file.
    Report {
        #[arg(long)]
        config: PathBuf,
        /// Thresholds to count at (repeatable).
        #[arg(long, default_values_t = [SIX_TWENTY_FIFTHS, QUARTER])]
        sigma: Vec<f64>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ObjectiveArg {
    MaxMinArea,
    MinSmallCount,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConstructionName {
    Fig13,
    Clustered,
    VerticesCentroid,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum ConstructFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

enum Failure {
    /// Bad parameters or input files: exit 2.
    Usage(anyhow::Error),
    /// A check failed or an output could not be written: exit 1.
    Failed(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Failed(e)
    }
}

type Outcome = Result<(), Failure>;

fn usage<E: Into<anyhow::Error>>(flag: &str) -> impl FnOnce(E) -> Failure + '_ {
    move |e| Failure::Usage(e.into().context(format!("invalid --{flag}")))
}

fn read_input(path: &Path, flag: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(usage(flag))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::LemmaScan { step, csv, json } => lemma_scan(step, &csv, &json),
        Command::Verify {
            suite,
            trials,
            seed,
            regions,
            samples,
            output,
        } => run_verify(suite, trials, seed, regions.as_deref(), samples, output.as_deref()),
        Command::Search {
            objective,
            n,
            restarts,
            seed,
            sigma,
            max_iters,
            init,
            params,
            output,
        } => run_search(objective, n, restarts, seed, sigma, max_iters, &init, params.as_deref(), output.as_deref()),
        Command::Construct {
            name,
            k,
            eps,
            format,
            output,
        } => construct(name, k, eps, format, output.as_deref()),
        Command::Render {
            config,
            construct,
            k,
            eps,
            grid,
            regions,
            region,
            labels,
            width,
            output,
        } => render(config.as_deref(), construct, k, eps, grid, regions.as_deref(), &region, labels, width, &output),
        Command::Report {
            config,
            sigma,
            format,
            output,
        } => report(&config, &sigma, format, output.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Failed(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("usage error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn lemma_scan(step: f64, csv: &Path, json: &Path) -> Outcome {
    let scan = smalltri::lemma::scan_lemma(step).map_err(usage("step"))?;
    write_atomic(csv, scan.to_csv().as_bytes())?;
    write_atomic(json, scan.summary_json().as_bytes())?;
    let s = &scan.summary;
    eprintln!(
        "{} angles, max |I| = {:.8} at A = {:.5}, margin {:.6}",
        s.points, s.max_region_area, s.argmax, s.margin
    );
    let ok = s.below_threshold
        && s.max_identity_residual < 1e-12
        && s.max_sin_cos_residual < 1e-12
        && s.c_bound_violations == 0
        && s.checkpoints.all_hold();
    if ok {
        Ok(())
    } else {
        Err(Failure::Failed(anyhow!("lemma scan found a violated bound; see {}", json.display())))
    }
}

fn load_regions(path: Option<&Path>, flag: &str) -> Result<Vec<RegionSpec>, Failure> {
    let text = match path {
        Some(p) => read_input(p, flag)?,
        None => CASE_REGIONS.to_string(),
    };
    parse_regions(&text, PAPER_GRID).map_err(usage(flag))
}

fn run_verify(
    suite: verify::Suite,
    trials: u64,
    seed: u64,
    regions: Option<&Path>,
    samples: usize,
    output: Option<&Path>,
) -> Outcome {
    if trials == 0 {
        return Err(Failure::Usage(anyhow!("invalid --trials: must be at least 1")));
    }
    let regions = load_regions(regions, "regions")?;
    let report = verify::run(suite, trials, seed, &regions, samples).map_err(usage("regions"))?;
    for c in &report.checks {
        println!("{} {}.{}: {}", if c.passed { "PASS" } else { "FAIL" }, c.suite, c.name, c.detail);
    }
    for o in &report.observations {
        println!("NOTE {o}");
    }
    if let Some(p) = output {
        write_atomic(p, to_json(&report).as_bytes())?;
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Failed(anyhow!("{failed} of {} checks failed", report.checks.len())))
    }
}

#[allow(clippy::too_many_arguments)]
fn run_search(
    objective: ObjectiveArg,
    n: usize,
    restarts: usize,
    seed: u64,
    sigma: f64,
    max_iters: Option<usize>,
    init: &[PathBuf],
    params_file: Option<&Path>,
    output: Option<&Path>,
) -> Outcome {
    let mut params = match params_file {
        Some(p) => serde_json::from_str::<SearchParams>(&read_input(p, "params")?).map_err(usage("params"))?,
        None => {
            let obj = match objective {
                ObjectiveArg::MaxMinArea => Objective::MaxMinArea,
                ObjectiveArg::MinSmallCount => Objective::MinSmallCount { sigma },
            };
            let mut p = SearchParams::new(n, obj);
            p.restarts = restarts;
            p.seed = seed;
            if let Some(m) = max_iters {
                p.max_iters = m;
            }
            p
        }
    };
    for path in init {
        let c = parse_configuration(&read_input(path, "init")?).map_err(usage("init"))?;
        params.extra_inits.push(c);
    }
    params.validate().map_err(usage("n/--restarts/--sigma/--max-iters"))?;
    let result = match params.objective {
        Objective::MaxMinArea => maximize_min_area(&params),
        Objective::MinSmallCount { sigma } => minimize_small_count(&params, sigma),
    }
    .map_err(usage("objective"))?;
    emit(output, &to_json(&result))?;
    eprintln!(
        "best value {} from restart {} ({} evaluations)",
        result.best_value, result.best_restart, result.evaluations
    );
    if params.n == 5 {
        match params.objective {
            Objective::MaxMinArea if result.best_value > SIX_TWENTY_FIFTHS + 1e-9 => {
                return Err(Failure::Failed(anyhow!(
                    "five points with min area {} exceed 6/25",
                    result.best_value
                )));
            }
            Objective::MinSmallCount { sigma } if sigma >= QUARTER && result.best_value < 1.0 => {
                return Err(Failure::Failed(anyhow!("five points with no triangle of area <= {sigma}")));
            }
            _ => {}
        }
    }
    Ok(())
}

enum Built {
    Exact(ExactConfiguration),
    Float(Configuration),
}

impl Built {
    fn float(&self) -> Configuration {
        match self {
            Built::Exact(e) => e.to_float(),
            Built::Float(f) => f.clone(),
        }
    }
}

fn build(name: ConstructionName, k: usize, eps: f64) -> Result<Built, Failure> {
    Ok(match name {
        ConstructionName::Fig13 => Built::Exact(fig13_exact()),
        ConstructionName::Clustered if eps == 0.0 => Built::Exact(clustered_exact(k).map_err(usage("k"))?),
        ConstructionName::Clustered => {
            let flag = if k == 0 { "k" } else { "eps" };
            Built::Float(clustered_construction(k, eps).map_err(usage(flag))?)
        }
        ConstructionName::VerticesCentroid => Built::Exact(
            parse_exact_configuration("1 0 0\n0 1 0\n0 0 1\n1/3 1/3 1/3\n").expect("fixed configuration parses"),
        ),
    })
}

#[derive(Serialize)]
struct ConstructionJson {
    schema_version: u32,
    name: String,
    n: usize,
    points: Vec<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<Vec<[String; 3]>>,
}

fn construct(name: ConstructionName, k: usize, eps: f64, format: ConstructFormat, output: Option<&Path>) -> Outcome {
    if !(0.0..MAX_CLUSTER_EPS).contains(&eps) {
        return Err(Failure::Usage(anyhow!("invalid --eps: must lie in [0, {MAX_CLUSTER_EPS})")));
    }
    let built = build(name, k, eps)?;
    let text = match format {
        ConstructFormat::Text => match &built {
            Built::Exact(e) => write_exact_configuration(e),
            Built::Float(f) => write_configuration(f),
        },
        ConstructFormat::Json => {
            let float = built.float();
            let exact = match &built {
                Built::Exact(e) => Some(e.points().iter().map(|p| p.each_ref().map(|x| x.to_string())).collect()),
                Built::Float(_) => None,
            };
            to_json(&ConstructionJson {
                schema_version: SCHEMA_VERSION,
                name: name.to_possible_value().expect("named").get_name().to_string(),
                n: float.len(),
                points: float.points().iter().map(|p| p.weights()).collect(),
                exact,
            })
        }
    };
    emit(output, &text)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn render(
    config: Option<&Path>,
    construct: Option<ConstructionName>,
    k: usize,
    eps: f64,
    grid: Option<u32>,
    regions: Option<&Path>,
    select: &[String],
    labels: Option<Vec<String>>,
    width: u32,
    output: &Path,
) -> Outcome {
    let points = match (config, construct) {
        (Some(p), _) => parse_configuration(&read_input(p, "config")?).map_err(usage("config"))?,
        (None, Some(name)) => build(name, k, eps)?.float(),
        (None, None) => return Err(Failure::Usage(anyhow!("one of --config or --construct is required"))),
    };
    if grid == Some(0) || width < 64 {
        return Err(Failure::Usage(anyhow!("invalid --grid or --width")));
    }
    let mut shaded = Vec::new();
    if regions.is_some() || !select.is_empty() {
        let all = load_regions(regions, "regions")?;
        if select.is_empty() {
            shaded = all;
        } else {
            for name in select {
                let r = all
                    .iter()
                    .find(|r| &r.name == name)
                    .ok_or_else(|| Failure::Usage(anyhow!("invalid --region: no region named {name}")))?;
                shaded.push(r.clone());
            }
        }
    }
    let opts = RenderOptions {
        grid,
        regions: shaded,
        labels,
        outline_min_triple: true,
        width,
    };
    write_atomic(output, render_svg(&points, &opts).as_bytes())?;
    Ok(())
}

#[derive(Serialize)]
struct AreaRow {
    triple: [usize; 3],
    area: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<String>,
}

#[derive(Serialize)]
struct Count {
    sigma: f64,
    count: usize,
}

#[derive(Serialize)]
struct ReportJson {
    schema_version: u32,
    n: usize,
    exact: bool,
    min_area: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_area_exact: Option<String>,
    min_triple: [usize; 3],
    counts: Vec<Count>,
    areas: Vec<AreaRow>,
}

fn report(config: &Path, sigmas: &[f64], format: ReportFormat, output: Option<&Path>) -> Outcome {
    if let Some(s) = sigmas.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
        return Err(Failure::Usage(anyhow!("invalid --sigma: {s}")));
    }
    let text = read_input(config, "config")?;
    let exact = parse_exact_configuration(&text).ok();
    let float = match &exact {
        Some(e) => e.to_float(),
        None => parse_configuration(&text).map_err(usage("config"))?,
    };
    let rep = evaluate_with(&float, sigmas);
    let exact_rep = exact.as_ref().map(evaluate_exact);
    let areas: Vec<AreaRow> = rep
        .areas
        .iter()
        .map(|a| AreaRow {
            triple: a.triple,
            area: a.area,
            exact: exact_rep.as_ref().and_then(|e| e.area_of(a.triple)).map(|r| r.to_string()),
        })
        .collect();
    let counts: Vec<Count> = match &exact_rep {
        Some(e) => sigmas
            .iter()
            .map(|&sigma| Count {
                sigma,
                count: e
                    .areas
                    .iter()
                    .filter(|(_, a)| smalltri::objectives::rational_to_f64(a) <= sigma)
                    .count(),
            })
            .collect(),
        None => rep
            .count_at_most
            .iter()
            .map(|c| Count {
                sigma: c.threshold,
                count: c.count,
            })
            .collect(),
    };
    let out = match format {
        ReportFormat::Json => to_json(&ReportJson {
            schema_version: SCHEMA_VERSION,
            n: float.len(),
            exact: exact.is_some(),
            min_area: rep.min_area,
            min_area_exact: exact_rep.as_ref().map(|e| e.min_area.to_string()),
            min_triple: rep.min_triple,
            counts,
            areas,
        }),
        ReportFormat::Csv => {
            let mut s = String::from("i,j,k,area,exact\n");
            for a in &areas {
                let [i, j, k] = a.triple;
                let _ = writeln!(s, "{i},{j},{k},{:?},{}", a.area, a.exact.as_deref().unwrap_or(""));
            }
            s
        }
    };
    emit(output, &out)?;
    Ok(())
}

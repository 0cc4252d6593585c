//! `ifslab` — classify affine iterated function systems, solve their
//! dimension equations, certify planar separation, and cross-validate the
//! analytic answers empirically.
//!
//! Exit codes:
//! - 0: success (an UNCLASSIFIED classification or an INAPPLICABLE
//!   topology verdict is data, not failure)
//! - 2: malformed config or unusable invocation
//! - 3: dimension guard refusal — the system fits no solvable family, so
//!   no number is printed
//! - 4: dimension solver failure
//! - 5: sampling/measurement failure (divergent or non-contractive orbit)
//! - 6: certificate construction, certificate verification, or topology
//!   hypothesis failure

mod config;
mod raster;
mod registry;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::SystemConfig;
use ifslab::{
    box_count, build_equation, chaos_game, chaos_game_weighted, classify_system,
    classify_topology, closed_form_check, natural_weights, pixel_connectivity,
    solve_dimension, certify_osc, ClassificationReport, ClassifyOptions, Error, Family,
    IfsSystem, PointCloud,
};
use report::{MetrologySummary, OutputFile, RunReport, StageTimer};
use std::path::{Path, PathBuf};

const EXIT_BAD_INPUT: i32 = 2;
const EXIT_GUARD_REFUSAL: i32 = 3;
const EXIT_SOLVER_FAILURE: i32 = 4;
const EXIT_SAMPLING_FAILURE: i32 = 5;
const EXIT_CERTIFICATE_FAILURE: i32 = 6;

const DEFAULT_POINTS: usize = 200_000;
const DEFAULT_SEED: u64 = 1;
const DEFAULT_BURN_IN: usize = 64;
const DEFAULT_RESOLUTION: usize = 1024;
const DEFAULT_OCTAVES: usize = 10;

#[derive(Parser)]
#[command(
    name = "ifslab",
    version,
    about = "Affine iterated-function-system toolkit: structural classification, \
             exact dimension equations, planar separation certificates, and \
             empirical cross-validation",
    arg_required_else_help = true
)]
struct Cli {
    /// List the bundled example systems and exit.
    #[arg(long, exclusive = true)]
    examples: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Diagnose the structural family (exit 0 even when unclassified).
    Classify(CommonArgs),
    /// Build and solve the dimension equation (exit 3 on guard refusal,
    /// 4 on solver failure).
    Dimension(DimensionArgs),
    /// Sample the attractor; write a P6 image and a point-cloud CSV.
    Render(RenderArgs),
    /// Sample the attractor; fit a box-counting slope and write the curve CSV.
    Boxcount(BoxcountArgs),
    /// Construct and verify a separating-rectangle certificate (exit 6 on
    /// refusal).
    CertifyOsc(CommonArgs),
    /// Classify attractor connectivity, with a raster cross-check.
    Topology(TopologyArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Bundled example name (see --examples) or path to a JSON config.
    config: String,
    /// Print a human-readable summary instead of the JSON report.
    #[arg(long, conflicts_with = "json")]
    text: bool,
    /// Print the JSON report (the default).
    #[arg(long)]
    json: bool,
}

/// Equation family for the `--family` requirement flag.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    AlignedGn,
    Hybrid,
    KIterate,
    OverlapDeclared,
}

impl FamilyArg {
    fn matches(self, family: Family) -> bool {
        matches!(
            (self, family),
            (FamilyArg::AlignedGn, Family::AlignedGn)
                | (FamilyArg::Hybrid, Family::Hybrid)
                | (FamilyArg::KIterate, Family::KIterate)
                | (FamilyArg::OverlapDeclared, Family::OverlapDeclared)
        )
    }

    fn name(self) -> &'static str {
        match self {
            FamilyArg::AlignedGn => "aligned-gn",
            FamilyArg::Hybrid => "hybrid",
            FamilyArg::KIterate => "k-iterate",
            FamilyArg::OverlapDeclared => "overlap-declared",
        }
    }
}

#[derive(Args)]
struct DimensionArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Require the classification to land in this family; exit 3 if it
    /// does not. The guard itself cannot be overridden: an unclassifiable
    /// system never yields a number.
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
}

#[derive(Args)]
struct SampleArgs {
    /// Number of chaos-game points (default 200000, or the config's value).
    #[arg(long)]
    points: Option<usize>,
    /// Chaos-game seed (default 1, or the config's value).
    #[arg(long)]
    seed: Option<u64>,
    /// Burn-in iterations discarded before sampling (default 64).
    #[arg(long)]
    burn_in: Option<usize>,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    sample: SampleArgs,
    /// Image side length in pixels (default 1024, or the config's value).
    #[arg(long)]
    resolution: Option<usize>,
    /// Directory for the image and CSV outputs (created if missing).
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct BoxcountArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    sample: SampleArgs,
    /// Number of dyadic scales in the count (default 10).
    #[arg(long)]
    octaves: Option<usize>,
    /// Directory for the curve CSV (created if missing).
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct TopologyArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    sample: SampleArgs,
    /// Raster side length for the connectivity cross-check (default 1024).
    #[arg(long)]
    resolution: Option<usize>,
    /// Skip the raster cross-check and report the verdict alone.
    #[arg(long)]
    no_raster: bool,
}

/// A failed invocation: exit code plus a stderr message.
struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn main() {
    let cli = Cli::parse();
    if cli.examples {
        print!("{}", registry::listing());
        return;
    }
    let Some(command) = cli.command else {
        // Unreachable behind arg_required_else_help, but stay defensive.
        eprintln!("error: a subcommand is required (try --help)");
        std::process::exit(EXIT_BAD_INPUT);
    };
    match run(command) {
        Ok(stdout_payload) => print!("{stdout_payload}"),
        Err(f) => {
            eprintln!("error: {}", f.message);
            std::process::exit(f.code);
        }
    }
}

/// Loaded, parsed, validated input.
struct Prepared {
    bytes: Vec<u8>,
    name: String,
    config: SystemConfig,
    system: IfsSystem,
}

/// Resolves the positional CONFIG: bundled example names win, then the
/// filesystem.
fn load_config(arg: &str) -> Result<(Vec<u8>, String), Failure> {
    if let Some(example) = registry::find(arg) {
        return Ok((example.json.as_bytes().to_vec(), example.name.to_string()));
    }
    let path = Path::new(arg);
    let bytes = std::fs::read(path).map_err(|e| {
        fail(
            EXIT_BAD_INPUT,
            format!(
                "cannot read config '{arg}': {e} (pass a file path or a bundled \
                 example name; see --examples)"
            ),
        )
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "system".to_string());
    Ok((bytes, name))
}

fn prepare(arg: &str) -> Result<Prepared, Failure> {
    let (bytes, name) = load_config(arg)?;
    let config =
        SystemConfig::parse(&bytes).map_err(|e| fail(EXIT_BAD_INPUT, e))?;
    let system = config
        .build_system(&name)
        .map_err(|e| fail(EXIT_BAD_INPUT, e))?;
    let name = system.name().to_string();
    Ok(Prepared {
        bytes,
        name,
        config,
        system,
    })
}

/// Only `[A-Za-z0-9._-]` survive into output file names.
fn sanitize_file_stem(name: &str) -> String {
    let cleaned: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-') {
                c
            } else {
                '_'
            }
        })
        .collect();
    if cleaned.is_empty() {
        "system".to_string()
    } else {
        cleaned
    }
}

/// Effective sampling parameters: explicit flag, then the config's render
/// block, then the built-in default.
struct Sampling {
    points: usize,
    seed: u64,
    burn_in: usize,
}

fn resolve_sampling(args: &SampleArgs, config: &SystemConfig) -> Sampling {
    let render = config.render.unwrap_or_default();
    Sampling {
        points: args.points.or(render.points).unwrap_or(DEFAULT_POINTS),
        seed: args.seed.or(render.seed).unwrap_or(DEFAULT_SEED),
        burn_in: args.burn_in.or(render.burn_in).unwrap_or(DEFAULT_BURN_IN),
    }
}

fn resolve_resolution(flag: Option<usize>, config: &SystemConfig) -> usize {
    flag.or(config.render.unwrap_or_default().resolution)
        .unwrap_or(DEFAULT_RESOLUTION)
}

fn sample_cloud(system: &IfsSystem, s: &Sampling) -> Result<PointCloud, Failure> {
    chaos_game(system, s.points, s.seed, s.burn_in)
        .map_err(|e| fail(EXIT_SAMPLING_FAILURE, format!("sampling failed: {e}")))
}

/// Samples with the solved equation's invariant-measure weights when the
/// system has a solvable family; falls back to uniform map choice
/// otherwise. Natural weights feed every map's image in proportion to its
/// measure share, which keeps thin junction regions populated.
fn sample_cloud_natural(
    system: &IfsSystem,
    classification: &ClassificationReport,
    s: &Sampling,
) -> Result<PointCloud, Failure> {
    let weights = build_equation(classification)
        .and_then(|eq| solve_dimension(&eq, system.dimension()))
        .and_then(|dim| natural_weights(classification, dim.s));
    match weights {
        Ok(w) => chaos_game_weighted(system, s.points, s.seed, s.burn_in, &w)
            .map_err(|e| fail(EXIT_SAMPLING_FAILURE, format!("sampling failed: {e}"))),
        Err(_) => sample_cloud(system, s),
    }
}

fn write_output(
    report: &mut RunReport,
    kind: &'static str,
    path: PathBuf,
    write: impl FnOnce(&Path) -> std::io::Result<()>,
) -> Result<(), Failure> {
    write(&path).map_err(|e| {
        fail(
            EXIT_BAD_INPUT,
            format!("cannot write {}: {e}", path.display()),
        )
    })?;
    report.outputs.push(OutputFile {
        kind,
        path: path.display().to_string(),
    });
    Ok(())
}

fn ensure_out_dir(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| {
        fail(
            EXIT_BAD_INPUT,
            format!("cannot create output directory {}: {e}", dir.display()),
        )
    })
}

fn render_report(report: &RunReport, text: bool) -> String {
    if text {
        report.to_text()
    } else {
        report.to_json()
    }
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Classify(args) => cmd_classify(args),
        Command::Dimension(args) => cmd_dimension(args),
        Command::Render(args) => cmd_render(args),
        Command::Boxcount(args) => cmd_boxcount(args),
        Command::CertifyOsc(args) => cmd_certify_osc(args),
        Command::Topology(args) => cmd_topology(args),
    }
}

fn cmd_classify(args: CommonArgs) -> Result<String, Failure> {
    let prepared = prepare(&args.config)?;
    let mut timer = StageTimer::start();
    let mut report = RunReport::new("classify", &prepared.name, &prepared.bytes);
    report.classification = Some(classify_system(
        &prepared.system,
        &ClassifyOptions::default(),
    ));
    timer.lap("classify");
    // An UNCLASSIFIED verdict is data: the guard notes explain what failed.
    Ok(render_report(&report, args.text))
}

fn cmd_dimension(args: DimensionArgs) -> Result<String, Failure> {
    let prepared = prepare(&args.common.config)?;
    let mut timer = StageTimer::start();
    let mut report = RunReport::new("dimension", &prepared.name, &prepared.bytes);
    let classification = classify_system(&prepared.system, &ClassifyOptions::default());
    timer.lap("classify");

    if let Some(required) = args.family {
        if !required.matches(classification.family) {
            return Err(fail(
                EXIT_GUARD_REFUSAL,
                format!(
                    "classified family {:?} does not satisfy --family {}",
                    classification.family,
                    required.name()
                ),
            ));
        }
    }

    let equation = match build_equation(&classification) {
        Ok(eq) => eq,
        Err(e @ (Error::Unclassified { .. } | Error::HypothesisNotSatisfied(_))) => {
            return Err(fail(
                EXIT_GUARD_REFUSAL,
                format!("dimension refused: {e}"),
            ));
        }
        Err(e) => return Err(fail(EXIT_SOLVER_FAILURE, e.to_string())),
    };
    let solution = solve_dimension(&equation, prepared.system.dimension())
        .map_err(|e| fail(EXIT_SOLVER_FAILURE, format!("solver failed: {e}")))?;
    timer.lap("solve");

    report.closed_form = closed_form_check(&equation);
    report.classification = Some(classification);
    report.equation = Some(equation);
    report.dimension = Some(solution);
    Ok(render_report(&report, args.common.text))
}

fn cmd_render(args: RenderArgs) -> Result<String, Failure> {
    let prepared = prepare(&args.common.config)?;
    let sampling = resolve_sampling(&args.sample, &prepared.config);
    let resolution = resolve_resolution(args.resolution, &prepared.config);
    if resolution == 0 {
        return Err(fail(EXIT_BAD_INPUT, "resolution must be positive"));
    }
    let mut timer = StageTimer::start();
    let mut report = RunReport::new("render", &prepared.name, &prepared.bytes);
    report.seed = Some(sampling.seed);
    report.points = Some(sampling.points);
    report.burn_in = Some(sampling.burn_in);
    report.resolution = Some(resolution);
    report.classification = Some(classify_system(
        &prepared.system,
        &ClassifyOptions::default(),
    ));
    timer.lap("classify");

    let cloud = sample_cloud(&prepared.system, &sampling)?;
    timer.lap("sample");
    let rgb = raster::rasterize(&cloud, resolution)
        .map_err(|e| fail(EXIT_SAMPLING_FAILURE, e))?;
    timer.lap("raster");

    ensure_out_dir(&args.out)?;
    let stem = sanitize_file_stem(&prepared.name);
    write_output(
        &mut report,
        "image-ppm",
        args.out.join(format!("{stem}.ppm")),
        |p| raster::write_ppm(p, resolution, &rgb),
    )?;
    write_output(
        &mut report,
        "cloud-csv",
        args.out.join(format!("{stem}.csv")),
        |p| raster::write_cloud_csv(p, &cloud),
    )?;
    timer.lap("write");
    Ok(render_report(&report, args.common.text))
}

fn cmd_boxcount(args: BoxcountArgs) -> Result<String, Failure> {
    let prepared = prepare(&args.common.config)?;
    let sampling = resolve_sampling(&args.sample, &prepared.config);
    let octaves = args.octaves.unwrap_or(DEFAULT_OCTAVES);
    let mut timer = StageTimer::start();
    let mut report = RunReport::new("boxcount", &prepared.name, &prepared.bytes);
    report.seed = Some(sampling.seed);
    report.points = Some(sampling.points);
    report.burn_in = Some(sampling.burn_in);
    report.octaves = Some(octaves);
    report.classification = Some(classify_system(
        &prepared.system,
        &ClassifyOptions::default(),
    ));
    timer.lap("classify");

    let cloud = sample_cloud(&prepared.system, &sampling)?;
    timer.lap("sample");
    let curve = box_count(&cloud, octaves)
        .map_err(|e| fail(EXIT_SAMPLING_FAILURE, format!("box counting failed: {e}")))?;
    timer.lap("count");

    ensure_out_dir(&args.out)?;
    let stem = sanitize_file_stem(&prepared.name);
    write_output(
        &mut report,
        "boxcount-csv",
        args.out.join(format!("{stem}_boxcount.csv")),
        |p| raster::write_boxcount_csv(p, &curve),
    )?;
    timer.lap("write");

    report.metrology = Some(MetrologySummary {
        box_slope: Some(curve.slope),
        box_r_squared: Some(curve.r_squared),
        ..MetrologySummary::default()
    });
    Ok(render_report(&report, args.common.text))
}

fn cmd_certify_osc(args: CommonArgs) -> Result<String, Failure> {
    let prepared = prepare(&args.config)?;
    let mut timer = StageTimer::start();
    let mut report = RunReport::new("certify-osc", &prepared.name, &prepared.bytes);
    report.classification = Some(classify_system(
        &prepared.system,
        &ClassifyOptions::default(),
    ));
    timer.lap("classify");

    let (certificate, verification) = certify_osc(&prepared.system).map_err(|e| {
        let what = match e {
            Error::CertificateVerification(_) => "certificate failed verification",
            _ => "certificate refused",
        };
        fail(EXIT_CERTIFICATE_FAILURE, format!("{what}: {e}"))
    })?;
    timer.lap("certify");

    report.certificate = Some(certificate);
    report.verification = Some(verification);
    Ok(render_report(&report, args.text))
}

fn cmd_topology(args: TopologyArgs) -> Result<String, Failure> {
    let prepared = prepare(&args.common.config)?;
    let mut timer = StageTimer::start();
    let mut report = RunReport::new("topology", &prepared.name, &prepared.bytes);
    let classification = classify_system(&prepared.system, &ClassifyOptions::default());
    timer.lap("classify");

    let verdict = classify_topology(&prepared.system).map_err(|e| {
        fail(
            EXIT_CERTIFICATE_FAILURE,
            format!("topology reduction refused: {e}"),
        )
    })?;
    timer.lap("verdict");

    if !args.no_raster {
        let sampling = resolve_sampling(&args.sample, &prepared.config);
        let resolution = resolve_resolution(args.resolution, &prepared.config);
        if resolution == 0 {
            return Err(fail(EXIT_BAD_INPUT, "resolution must be positive"));
        }
        report.seed = Some(sampling.seed);
        report.points = Some(sampling.points);
        report.burn_in = Some(sampling.burn_in);
        report.resolution = Some(resolution);
        let cloud = sample_cloud_natural(&prepared.system, &classification, &sampling)?;
        timer.lap("sample");
        let connectivity = pixel_connectivity(&cloud, resolution).map_err(|e| {
            fail(
                EXIT_SAMPLING_FAILURE,
                format!("connectivity raster failed: {e}"),
            )
        })?;
        timer.lap("raster");
        report.metrology = Some(MetrologySummary {
            components: Some(connectivity.component_count),
            largest_component_fraction: Some(connectivity.largest_component_fraction),
            connectivity: Some(connectivity),
            ..MetrologySummary::default()
        });
    }

    report.classification = Some(classification);
    report.topology = Some(verdict);
    Ok(render_report(&report, args.common.text))
}

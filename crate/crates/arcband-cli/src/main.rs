//! Command-line surface: curve generation, curvature analysis, curve
//! distances, and the verification suite, over versioned JSON/CSV files.
//!
//! Exit codes: 0 on success, 1 on a verification or constraint failure,
//! 2 on usage or input errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use arcband::controls::{controls_to_vw, CurvatureBand};
use arcband::curvature::{curvature_profile, default_tol, default_window, TangencyAnalyzer};
use arcband::curve::reparameterize_constant_speed;
use arcband::error::Error;
use arcband::files;
use arcband::integrator::{curve_from_path, integrate_frame};
use arcband::metrics::{all_metrics, comparison_resolution};
use arcband::verify::{check_roundtrip, run_suite, SuiteConfig};
use arcband::{Rotation, SphericalCurve};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "arcband",
    version,
    about = "Spherical curves with geodesic curvature constrained to an open band"
)]
struct Cli {
    /// Worker threads for parallel checks (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a controls file into a constant-speed curve file.
    Generate(GenerateArgs),
    /// Write the curvature profile and tangent-circle bounds of a curve.
    Analyze(AnalyzeArgs),
    /// Print the four distances between two curve files.
    Distance(DistanceArgs),
    /// Run the verification suite and write its report.
    Verify(VerifyArgs),
    /// Round-trip a controls file through a curve and back.
    Roundtrip(RoundtripArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Controls file (JSON).
    #[arg(long)]
    controls: PathBuf,
    /// Output curve file (JSON).
    #[arg(long)]
    output: PathBuf,
    /// Optional output file for the frame sequence.
    #[arg(long)]
    frames: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Curve file (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Curvature band as "kappa1,kappa2".
    #[arg(long, value_parser = parse_band, allow_hyphen_values = true)]
    band: CurvatureBand,
    /// Tangency window override, in parameter units.
    #[arg(long)]
    window: Option<f64>,
    /// Tangency tolerance override.
    #[arg(long)]
    tol: Option<f64>,
    /// Number of base points for the upper/lower curvature bounds.
    #[arg(long, default_value_t = 9)]
    stations: usize,
    /// Report destination (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DistanceArgs {
    /// First curve file.
    #[arg(long)]
    a: PathBuf,
    /// Second curve file.
    #[arg(long)]
    b: PathBuf,
    /// Comparison grid resolution (default: 4x the coarser curve).
    #[arg(long)]
    resolution: Option<usize>,
    /// Also print the per-station distance table.
    #[arg(long)]
    verbose: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Master seed; identical seeds give byte-identical reports.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Grid cells for generated curves.
    #[arg(long, default_value_t = 1024)]
    grid: usize,
    /// Report destination (JSON); summary always goes to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Comma-separated subset of checks to run
    /// (sandwich, space_equality, convergence, roundtrip).
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    /// Confinement-check curve count.
    #[arg(long, default_value_t = 200)]
    sandwich_curves: usize,
    /// Base points per confinement curve.
    #[arg(long, default_value_t = 8)]
    sandwich_points: usize,
    /// Band-membership-equivalence curve count.
    #[arg(long, default_value_t = 100)]
    space_curves: usize,
    /// Seeds per sequence mode for the convergence checks.
    #[arg(long, default_value_t = 20)]
    convergence_seeds: usize,
    /// Members per convergent sequence.
    #[arg(long, default_value_t = 64)]
    sequence_length: usize,
    /// Round-trip curve count.
    #[arg(long, default_value_t = 50)]
    roundtrip_curves: usize,
    /// Grid cells for round-trip curves.
    #[arg(long, default_value_t = 4096)]
    roundtrip_grid: usize,
}

#[derive(Args)]
struct RoundtripArgs {
    /// Controls file (JSON) with a constant speed coordinate.
    #[arg(long)]
    controls: PathBuf,
}

fn parse_band(s: &str) -> Result<CurvatureBand, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected \"kappa1,kappa2\"".into());
    }
    let kappa1: f64 = parts[0].trim().parse().map_err(|e| format!("kappa1: {e}"))?;
    let kappa2: f64 = parts[1].trim().parse().map_err(|e| format!("kappa2: {e}"))?;
    CurvatureBand::new(kappa1, kappa2).map_err(|e| e.to_string())
}

/// A failure carrying its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn constraint(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_FAILURE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::BandViolation { .. } | Error::Precondition { .. } => EXIT_FAILURE,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .is_err()
        {
            eprintln!("warning: thread pool already initialized; --jobs ignored");
        }
    }
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Distance(args) => cmd_distance(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Roundtrip(args) => cmd_roundtrip(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn load_curve(path: &Path) -> Result<SphericalCurve, Failure> {
    files::read_curve(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn cmd_generate(args: GenerateArgs) -> Result<(), Failure> {
    let controls = files::read_controls(&args.controls)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.controls.display())))?;

    // The transformed controls land strictly inside the band by
    // construction; re-check and surface the first offending cell if
    // saturation ever broke that.
    let band = *controls.band();
    let (v, w) = controls_to_vw(&controls);
    let mut margin_low = f64::INFINITY;
    let mut margin_high = f64::INFINITY;
    for (cell, (vk, wk)) in v.iter().zip(&w).enumerate() {
        let ratio = wk / vk;
        if !band.contains(ratio) {
            return Err(Failure::constraint(format!(
                "band violation at cell {cell}: ratio {ratio} not strictly inside ({}, {})",
                band.kappa1(),
                band.kappa2()
            )));
        }
        margin_low = margin_low.min(ratio - band.kappa1());
        margin_high = margin_high.min(band.kappa2() - ratio);
    }

    let path = integrate_frame(&Rotation::identity(), &controls).map_err(Failure::from)?;
    let mut curve = curve_from_path(&path).map_err(Failure::from)?;
    if !curve.is_constant_speed() {
        curve = reparameterize_constant_speed(&curve).map_err(Failure::from)?;
    }
    files::write_curve(&args.output, &curve).map_err(Failure::from)?;
    if let Some(frames_path) = &args.frames {
        std::fs::write(frames_path, files::frames_to_json(&path).map_err(Failure::from)?)
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    println!("arcband {} generate", env!("CARGO_PKG_VERSION"));
    println!("grid: {}", controls.grid_size());
    println!("length: {:.16e}", curve.length());
    println!("band: ({}, {})", band.kappa1(), band.kappa2());
    println!("band margins: low {margin_low:.6}, high {margin_high:.6}");
    println!("curve: {}", args.output.display());
    if let Some(frames_path) = &args.frames {
        println!("frames: {}", frames_path.display());
    }
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), Failure> {
    let curve = load_curve(&args.input)?;
    if args.stations < 2 {
        return Err(Failure::usage("need at least 2 stations"));
    }
    let window = args
        .window
        .unwrap_or_else(|| default_window(&args.band, curve.length()));
    let tol = args.tol.unwrap_or_else(|| default_tol(&curve));

    let profile = curvature_profile(&curve).map_err(Failure::from)?;
    let analyzer = TangencyAnalyzer::new(&curve).map_err(Failure::from)?;
    let mut kappa_minus = Vec::with_capacity(args.stations);
    let mut kappa_plus = Vec::with_capacity(args.stations);
    let mut t0s = Vec::with_capacity(args.stations);
    for j in 0..args.stations {
        let t0 = j as f64 / (args.stations - 1) as f64;
        t0s.push(t0);
        kappa_minus.push(analyzer.lower(t0, window, tol).map_err(Failure::from)?);
        kappa_plus.push(analyzer.upper(t0, window, tol).map_err(Failure::from)?);
    }
    let minus_min = kappa_minus
        .iter()
        .copied()
        .reduce(|a, b| a.min(b))
        .expect("at least two stations");
    let plus_max = kappa_plus
        .iter()
        .copied()
        .reduce(|a, b| a.max(b))
        .expect("at least two stations");

    let mut report = String::new();
    let _ = writeln!(report, "# arcband {} curvature report", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(
        report,
        "# grid {}, length {:.16e}, band ({}, {}), window {:.16e}, tol {:.16e}, stations {}",
        curve.segments(),
        curve.length(),
        args.band.kappa1(),
        args.band.kappa2(),
        window,
        tol,
        args.stations
    );
    let _ = writeln!(report, "t,s,kappa");
    let m = curve.segments();
    for (i, (s, kappa)) in profile.stations.iter().zip(&profile.kappa).enumerate() {
        let t = (i + 1) as f64 / m as f64;
        let _ = writeln!(report, "{t:.16e},{s:.16e},{kappa:.16e}");
    }
    let _ = writeln!(report, "# stations: t,kappa_minus,kappa_plus");
    for ((t0, lo), hi) in t0s.iter().zip(&kappa_minus).zip(&kappa_plus) {
        let _ = writeln!(report, "{t0:.16e},{lo},{hi}");
    }
    let _ = writeln!(report, "# ess_inf,{:.16e}", profile.ess_inf);
    let _ = writeln!(report, "# ess_sup,{:.16e}", profile.ess_sup);
    let _ = writeln!(report, "# kappa_minus_min,{minus_min}");
    let _ = writeln!(report, "# kappa_plus_max,{plus_max}");

    match &args.output {
        Some(path) => std::fs::write(path, report).map_err(|e| Failure::usage(e.to_string()))?,
        None => print!("{report}"),
    }
    Ok(())
}

fn cmd_distance(args: DistanceArgs) -> Result<(), Failure> {
    let a = load_curve(&args.a)?;
    let b = load_curve(&args.b)?;
    let resolution = comparison_resolution(&a, &b, args.resolution).map_err(Failure::from)?;
    let metrics = all_metrics(&a, &b, Some(resolution)).map_err(Failure::from)?;
    println!(
        "# arcband {} distance, resolution {resolution}",
        env!("CARGO_PKG_VERSION")
    );
    for m in &metrics {
        println!("{} {:.16e} {}", m.kind, m.value, m.resolution);
    }
    let [d0v, d0b, d1v, d1b] = [
        metrics[0].value,
        metrics[1].value,
        metrics[2].value,
        metrics[3].value,
    ];
    let ordered = d0b <= d0v + 1e-12 && d0v <= d1v + 1e-12 && d1v <= d1b + 1e-12;
    println!(
        "ordering d0bar <= d0 <= d1 <= d1bar: {}",
        if ordered { "ok" } else { "VIOLATED" }
    );
    if args.verbose {
        println!("t,d0,d0bar,d1,d1bar");
        for j in 0..=resolution {
            let t = j as f64 / resolution as f64;
            let pa = a.eval(t).map_err(Failure::from)?;
            let pb = b.eval(t).map_err(Failure::from)?;
            let pos = arcband::curve::sphere_distance(&pa, &pb);
            let chord = (pa - pb).norm();
            println!("{t:.6},{pos:.9e},{chord:.9e},-,-");
        }
    }
    if !ordered {
        return Err(Failure::constraint("metric ordering violated"));
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let enabled = |name: &str| {
        args.checks
            .as_ref()
            .map(|list| list.iter().any(|c| c == name))
            .unwrap_or(true)
    };
    let config = SuiteConfig {
        seed: args.seed,
        grid: args.grid,
        sandwich_curves: if enabled("sandwich") { args.sandwich_curves } else { 0 },
        sandwich_points: args.sandwich_points,
        space_equality_curves: if enabled("space_equality") { args.space_curves } else { 0 },
        convergence_seeds: if enabled("convergence") { args.convergence_seeds } else { 0 },
        sequence_length: args.sequence_length,
        roundtrip_curves: if enabled("roundtrip") { args.roundtrip_curves } else { 0 },
        roundtrip_grid: args.roundtrip_grid,
    };
    let report = run_suite(&config).map_err(Failure::from)?;
    for check in &report.checks {
        println!(
            "check {}: trials {}, failures {}, worst margin {:.3e}",
            check.name, check.trials, check.failures, check.worst_margin
        );
    }
    println!(
        "suite: {} ({} failures), seed {}",
        if report.passed() { "PASS" } else { "FAIL" },
        report.failures_total,
        report.config.seed
    );
    if let Some(path) = &args.output {
        let json = serde_json::to_string_pretty(&report)
            .map_err(|e| Failure::usage(e.to_string()))?;
        std::fs::write(path, json).map_err(|e| Failure::usage(e.to_string()))?;
        println!("report: {}", path.display());
    }
    if !report.passed() {
        return Err(Failure::constraint(format!(
            "{} verification failures",
            report.failures_total
        )));
    }
    Ok(())
}

fn cmd_roundtrip(args: RoundtripArgs) -> Result<(), Failure> {
    let controls = files::read_controls(&args.controls)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.controls.display())))?;
    let report = check_roundtrip(&controls, &Rotation::identity()).map_err(Failure::from)?;
    for (key, value) in &report.parameters {
        println!("{key}: {value}");
    }
    if report.failures > 0 {
        return Err(Failure::constraint(format!(
            "round trip outside tolerance (worst margin {:.3e})",
            report.worst_margin
        )));
    }
    println!("roundtrip: PASS");
    Ok(())
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lefschetz_core::{
    Field, FieldKind, FieldSpec, InstanceFile, Rational, Report, Suite, VerifyConfig, F1000003, F1009, F101,
    F2147483647, F32003, F4099, F65521, SUPPORTED_PRIMES,
};

#[derive(Parser)]
#[command(name = "lefschetz-lab", version, about = "Lefschetz-property experiments on artinian complete intersections")]
struct Cli {
    /// Log progress to stderr (RUST_LOG overrides).
    #[arg(short, long, global = true)]
    verbose: bool,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random complete intersection (or the monomial one).
    Gen(GenArgs),
    /// Hilbert function against the Koszul prediction.
    Hilbert(CommonArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Inverse system: dimensions, dual socle generator, derivative spans.
    Inverse {
        #[command(flatten)]
        common: CommonArgs,
        /// Print only the dual socle generator.
        #[arg(long)]
        socle: bool,
    },
    /// Quadric rank strata, pencils and rank-one scans (d = 2).
    Strata {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 8)]
        pencils: usize,
        /// Reduction prime for rank-one scans of rational instances.
        #[arg(long, default_value_t = 3)]
        scan_prime: u64,
    },
    /// Scan lines or planes of linear forms for non-injective multiplication.
    Locus {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = Mode::Line)]
        mode: Mode,
        /// Lines (line mode) or planes (plane mode) to scan.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Run a single family of checks.
    Check {
        #[arg(value_enum)]
        which: CheckKind,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Line,
    Plane,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Wlp,
    Slp,
    Injectivity,
    Duality,
    Lemmas,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    d: usize,
    /// `prime:P` or `rational`.
    #[arg(long, default_value = "prime:65521")]
    field: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Emit (x_0^d, ..., x_m^d) instead of a random presentation.
    #[arg(long)]
    monomial: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CommonArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Root seed; drawn at random and echoed when absent.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 8)]
    trials: usize,
    /// Reinterpret the instance coefficients over another field.
    #[arg(long)]
    field: Option<String>,
    /// Write the structured report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the structured report instead of the table.
    #[arg(long)]
    json: bool,
    /// Record wall time per check (makes reports run-dependent).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated subset of: hilbert, duality, wlp, slp, injectivity,
    /// inverse, strata, locus, lemmas.
    #[arg(long, value_delimiter = ',')]
    suites: Vec<String>,
    #[arg(long, default_value_t = 1000)]
    pair_samples: usize,
    #[arg(long, default_value_t = 20)]
    lines: usize,
}

/// Binds `$t` to the backend type for `$spec` and evaluates `$body`.
macro_rules! with_field {
    ($spec:expr, $t:ident => $body:expr) => {{
        let spec: FieldSpec = $spec;
        match spec.kind {
            FieldKind::Rational => {
                type $t = Rational;
                $body
            }
            FieldKind::Prime => match spec.p.unwrap_or(0) {
                101 => {
                    type $t = F101;
                    $body
                }
                1009 => {
                    type $t = F1009;
                    $body
                }
                4099 => {
                    type $t = F4099;
                    $body
                }
                32003 => {
                    type $t = F32003;
                    $body
                }
                65521 => {
                    type $t = F65521;
                    $body
                }
                1000003 => {
                    type $t = F1000003;
                    $body
                }
                2147483647 => {
                    type $t = F2147483647;
                    $body
                }
                p => bail!("prime {p} has no compiled backend; supported: {SUPPORTED_PRIMES:?}"),
            },
        }
    }};
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("seed: {s}");
        s
    })
}

fn parse_field(text: &str) -> Result<FieldSpec> {
    Ok(text.parse::<FieldSpec>()?)
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Gen(args) => generate(args),
        Command::Hilbert(common) => {
            let report = report_for(&common, |cfg| cfg.suites = vec![Suite::Hilbert])?;
            if !common.json {
                print!("{}", hilbert_table(&report));
            }
            finish(&common, &report, !common.json)
        }
        Command::Verify(args) => {
            let suites = args
                .suites
                .iter()
                .map(|s| s.parse::<Suite>())
                .collect::<lefschetz_core::Result<Vec<_>>>()?;
            let report = report_for(&args.common, |cfg| {
                if !suites.is_empty() {
                    cfg.suites = suites.clone();
                }
                cfg.pair_samples = args.pair_samples;
                cfg.locus_lines = args.lines;
            })?;
            finish(&args.common, &report, false)
        }
        Command::Inverse { common, socle } => {
            let report = report_for(&common, |cfg| cfg.suites = vec![Suite::Inverse])?;
            if socle {
                match report.check("dual_socle_generator") {
                    Some(c) => println!("{}", c.data["g"].as_str().unwrap_or_default()),
                    None => bail!("no dual socle generator: the presentation is not a complete intersection"),
                }
                return finish(&common, &report, true);
            }
            finish(&common, &report, false)
        }
        Command::Strata {
            common,
            samples,
            pencils,
            scan_prime,
        } => {
            let report = report_for(&common, |cfg| {
                cfg.suites = vec![Suite::Strata];
                cfg.strata_samples = samples;
                cfg.pencils = pencils;
                cfg.scan_prime = scan_prime;
            })?;
            finish(&common, &report, false)
        }
        Command::Locus { common, mode, samples } => {
            let report = report_for(&common, |cfg| {
                cfg.suites = vec![Suite::Locus];
                match mode {
                    Mode::Line => cfg.locus_lines = samples,
                    Mode::Plane => cfg.locus_planes = samples,
                }
            })?;
            finish(&common, &report, false)
        }
        Command::Check { which, common } => {
            let suite = match which {
                CheckKind::Wlp => Suite::Wlp,
                CheckKind::Slp => Suite::Slp,
                CheckKind::Injectivity => Suite::Injectivity,
                CheckKind::Duality => Suite::Duality,
                CheckKind::Lemmas => Suite::Lemmas,
            };
            let report = report_for(&common, |cfg| cfg.suites = vec![suite])?;
            finish(&common, &report, false)
        }
    }
}

fn generate(args: GenArgs) -> Result<ExitCode> {
    let spec = parse_field(&args.field)?;
    let seed = resolve_seed(args.seed);
    let (file, attempts) = with_field!(spec, T => gen_instance::<T>(args.m, args.d, seed, args.monomial)?);
    log::info!("generated after {attempts} attempt(s)");
    let text = file.to_json();
    match &args.out {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn gen_instance<T: Field>(m: usize, d: usize, seed: u64, monomial: bool) -> Result<(InstanceFile, usize)> {
    let (inst, attempts) = lefschetz_core::generate::<T>(m, d, seed, monomial)?;
    Ok((inst.to_file(), attempts))
}

fn load(common: &CommonArgs) -> Result<InstanceFile> {
    let text = fs::read_to_string(&common.instance)
        .with_context(|| format!("reading {}", common.instance.display()))?;
    let mut file = InstanceFile::from_json(&text)?;
    if let Some(f) = &common.field {
        file.field = parse_field(f)?;
    }
    Ok(file)
}

fn report_for(common: &CommonArgs, adjust: impl FnOnce(&mut VerifyConfig)) -> Result<Report> {
    let file = load(common)?;
    let mut cfg = VerifyConfig {
        seed: resolve_seed(common.seed),
        trials: common.trials,
        timings: common.timings,
        ..VerifyConfig::default()
    };
    adjust(&mut cfg);
    log::info!("running {:?} on m = {}, d = {}, {}", cfg.suites, file.m, file.d, file.field);
    with_field!(file.field, T => verify_file::<T>(&file, &cfg))
}

fn verify_file<T: Field>(file: &InstanceFile, cfg: &VerifyConfig) -> Result<Report> {
    let inst = file.to_instance::<T>()?;
    Ok(lefschetz_core::verify(&inst, cfg))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn finish(common: &CommonArgs, report: &Report, quiet: bool) -> Result<ExitCode> {
    let json = report.to_json();
    if let Some(path) = &common.out {
        write(path, &json)?;
    }
    if common.json {
        print!("{json}");
    } else if !quiet {
        print!("{}", report.render_table());
    }
    Ok(if report.has_fail() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn hilbert_table(report: &Report) -> String {
    let Some(check) = report.check("is_regular_sequence") else {
        return String::new();
    };
    let hf = check.data["hilbert"].as_array().cloned().unwrap_or_default();
    let koszul = check.data["koszul"].as_array().cloned().unwrap_or_default();
    let mut out = String::from(" k    HF  koszul\n");
    for (k, (h, z)) in hf.iter().zip(&koszul).enumerate() {
        let mark = if h == z { "" } else { "  *" };
        let (h, z) = (h.as_u64().unwrap_or(0), z.as_u64().unwrap_or(0));
        out.push_str(&format!("{k:>2}  {h:>4}  {z:>6}{mark}\n"));
    }
    out.push_str(&format!("{}: {}\n", check.status.as_str(), check.summary));
    out
}

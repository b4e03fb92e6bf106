//! `hyperpart`: command-line front end.
//!
//! Exit status is 0 on success, 1 when a verification fails and 2 on bad input.

mod render;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hyperpart::exact::parse_rational;
use hyperpart::fixtures::{self, Fixture};
use hyperpart::flag::{generate_flag, verify_flag};
use hyperpart::homology::{IndexTuple, PairingMatrix};
use hyperpart::io::{parse_arrangement, parse_flag, parse_gauss_point};
use hyperpart::partition::{classify, verify_partition, verify_star_shapes, GaussPoint};
use hyperpart::{Analysis, Arrangement, Flag, IntersectionPoset};

use report::{Emit, Labels};

#[derive(Parser, Debug)]
#[command(name = "hyperpart", version, about = "Minimal partitions of complexified hyperplane arrangement complements")]
struct Cli {
    #[command(flatten)]
    source: Source,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Source {
    /// Arrangement JSON file.
    #[arg(long, short, global = true, conflicts_with = "fixture")]
    input: Option<PathBuf>,
    /// Built-in arrangement: point-in-line or three-lines.
    #[arg(long, global = true)]
    fixture: Option<String>,
    /// Flag JSON file. Without it a flag is generated (fixtures use their own).
    #[arg(long, global = true)]
    flag: Option<PathBuf>,
    /// Seed for flag generation.
    #[arg(long, global = true)]
    flag_seed: Option<u64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Intersection poset with Möbius values.
    Poset,
    /// Chambers as JSON lines.
    Chambers,
    /// Betti numbers of the complement.
    Betti,
    /// Generate or check a flag.
    #[command(subcommand)]
    Flag(FlagCommand),
    /// Levels, minimal flats, base points and enlarged chambers.
    Strata,
    /// Assign a complex point to its piece.
    Classify(ClassifyArgs),
    /// Run a verification harness.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Borel-Moore pairing data.
    #[command(subcommand)]
    Homology(HomologyCommand),
    /// Image of an Orlik-Solomon generator as a combination of piece closures.
    OsMap {
        /// Hyperplane indices, counted from 1, e.g. `1,2`.
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<usize>,
    },
    /// SVG drawing of a planar arrangement with its flag and chambers.
    Render {
        /// Output file; stdout when absent.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Print a built-in fixture as arrangement and flag JSON.
    Fixture {
        name: String,
        #[arg(long, value_enum, default_value_t = FixturePart::Both)]
        part: FixturePart,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FixturePart {
    Arrangement,
    Flag,
    Both,
}

#[derive(Subcommand, Debug)]
enum FlagCommand {
    /// Generate a verified flag.
    Gen,
    /// Verify the supplied flag.
    Check,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    /// GaussPoint JSON file `{"x": [...], "v": [...]}`.
    #[arg(long, conflicts_with_all = ["x", "v"])]
    point: Option<PathBuf>,
    /// Real part, comma separated rationals.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Imaginary part, comma separated rationals; zero when absent.
    #[arg(long, allow_hyphen_values = true)]
    v: Option<String>,
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// Sampled check that pieces partition the complement.
    Partition(SampleArgs),
    /// Sampled check that pieces are star-shaped about their base points.
    Star(SampleArgs),
    /// Pairing matrices, dual identities and Orlik-Solomon relations.
    Homology,
}

#[derive(Args, Debug)]
struct SampleArgs {
    /// Number of samples (per piece for `star`).
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum HomologyCommand {
    /// Pairing matrix of one level.
    Matrix {
        #[arg(long)]
        level: usize,
    },
}

/// Failure classes mapped to exit codes.
enum Failure {
    Input(anyhow::Error),
    Verification(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

type Outcome = Result<(), Failure>;

struct Loaded {
    arrangement: Arrangement,
    fixture: Option<Fixture>,
}

impl Loaded {
    fn labels(&self) -> Labels {
        Labels::new(self.fixture.as_ref())
    }
}

fn load(source: &Source) -> anyhow::Result<Loaded> {
    match (&source.input, &source.fixture) {
        (Some(path), None) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let arrangement = parse_arrangement(&text).with_context(|| format!("parsing {}", path.display()))?;
            Ok(Loaded { arrangement, fixture: None })
        }
        (None, Some(name)) => {
            let fx = fixtures::load_fixture(name)?;
            Ok(Loaded { arrangement: fx.arrangement.clone(), fixture: Some(fx) })
        }
        (None, None) => bail!("an arrangement is required: pass --input FILE or --fixture NAME"),
        (Some(_), Some(_)) => bail!("--input and --fixture are mutually exclusive"),
    }
}

/// Supplied flag file, else the fixture flag (unless a seed is given), else a generated flag.
fn resolve_flag(source: &Source, loaded: &Loaded, poset: &IntersectionPoset, chambers: &hyperpart::ChamberSet) -> Result<Flag, Failure> {
    if let Some(path) = &source.flag {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return Ok(parse_flag(&text, loaded.arrangement.dim()).with_context(|| format!("parsing {}", path.display()))?);
    }
    if let (Some(fx), None) = (&loaded.fixture, source.flag_seed) {
        return Ok(fx.flag.clone());
    }
    generate_flag(&loaded.arrangement, poset, chambers, source.flag_seed.unwrap_or(0))
        .map_err(|e| Failure::Verification(format!("flag generation failed: {e}")))
}

fn analysis(source: &Source, loaded: &Loaded) -> Result<Analysis, Failure> {
    let arr = loaded.arrangement.clone();
    let poset = IntersectionPoset::build(&arr);
    let chambers = hyperpart::chambers::enumerate_chambers(&arr).map_err(anyhow::Error::from)?;
    let flag = resolve_flag(source, loaded, &poset, &chambers)?;
    Analysis::new(arr, flag).map_err(|e| match e {
        hyperpart::Error::FlagViolation(v) => Failure::Verification(format!("flag rejected: {v}")),
        other => Failure::Input(other.into()),
    })
}

fn parse_vector(s: &str, dim: usize, what: &str) -> anyhow::Result<Vec<hyperpart::Rational>> {
    let v = s
        .split(',')
        .map(|t| parse_rational(t).with_context(|| format!("{what}: bad rational {t:?}")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    if v.len() != dim {
        bail!("{what} has {} entries, expected {dim}", v.len());
    }
    Ok(v)
}

fn read_point(args: &ClassifyArgs, dim: usize) -> anyhow::Result<GaussPoint> {
    if let Some(path) = &args.point {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return parse_gauss_point(&text, dim).with_context(|| format!("parsing {}", path.display()));
    }
    let Some(x) = &args.x else { bail!("classify needs --point FILE or --x") };
    let x = parse_vector(x, dim, "x")?;
    let v = match &args.v {
        Some(v) => parse_vector(v, dim, "v")?,
        None => vec![hyperpart::Rational::from_integer(0.into()); dim],
    };
    Ok(GaussPoint::new(x, v))
}

fn run(cli: &Cli) -> Outcome {
    let out = Emit::new(cli.format == Format::Json);
    if let Command::Fixture { name, part } = &cli.command {
        let fx = fixtures::load_fixture(name).map_err(anyhow::Error::from)?;
        out.fixture(&fx, *part == FixturePart::Arrangement || *part == FixturePart::Both, *part != FixturePart::Arrangement);
        return Ok(());
    }
    let loaded = load(&cli.source)?;
    let labels = loaded.labels();
    let arr = &loaded.arrangement;
    match &cli.command {
        Command::Poset => {
            out.poset(arr, &IntersectionPoset::build(arr));
        }
        Command::Chambers => {
            let chambers = hyperpart::chambers::enumerate_chambers(arr).map_err(anyhow::Error::from)?;
            out.chambers(&chambers, &labels);
        }
        Command::Betti => {
            out.betti(&IntersectionPoset::build(arr));
        }
        Command::Flag(FlagCommand::Gen) => {
            let poset = IntersectionPoset::build(arr);
            let chambers = hyperpart::chambers::enumerate_chambers(arr).map_err(anyhow::Error::from)?;
            let flag = generate_flag(arr, &poset, &chambers, cli.source.flag_seed.unwrap_or(0))
                .map_err(|e| Failure::Verification(format!("flag generation failed: {e}")))?;
            out.flag(&flag);
        }
        Command::Flag(FlagCommand::Check) => {
            let poset = IntersectionPoset::build(arr);
            let chambers = hyperpart::chambers::enumerate_chambers(arr).map_err(anyhow::Error::from)?;
            let flag = resolve_flag(&cli.source, &loaded, &poset, &chambers)?;
            let violation = verify_flag(arr, &poset, &chambers, &flag).map_err(anyhow::Error::from)?;
            out.flag_check(violation.as_ref());
            if let Some(v) = violation {
                return Err(Failure::Verification(format!("flag rejected: {v}")));
            }
        }
        Command::Strata => {
            let an = analysis(&cli.source, &loaded)?;
            out.strata(&an, &labels);
        }
        Command::Classify(args) => {
            let an = analysis(&cli.source, &loaded)?;
            let p = read_point(args, an.dim())?;
            let assignment = classify(&an, &p).map_err(|e| match e {
                hyperpart::Error::NotInComplement { hyperplane } => Failure::Input(anyhow::anyhow!(
                    "point lies on the complexification of {}",
                    an.arrangement.name(hyperplane)
                )),
                hyperpart::Error::DimensionMismatch { .. } => Failure::Input(e.into()),
                other => Failure::Verification(other.to_string()),
            })?;
            out.assignment(&an, &assignment, &labels);
        }
        Command::Verify(VerifyCommand::Partition(s)) => {
            let an = analysis(&cli.source, &loaded)?;
            let report = verify_partition(&an, s.samples, s.seed);
            out.partition_report(&report, &labels, &an);
            if !report.passed() {
                return Err(Failure::Verification(format!("{} partition violations", report.violations.len())));
            }
        }
        Command::Verify(VerifyCommand::Star(s)) => {
            let an = analysis(&cli.source, &loaded)?;
            let report = verify_star_shapes(&an, s.samples, s.seed);
            out.star_report(&report);
            if !report.passed() {
                return Err(Failure::Verification(format!("{} star-shape violations", report.violations.len())));
            }
        }
        Command::Verify(VerifyCommand::Homology) => {
            let an = analysis(&cli.source, &loaded)?;
            let report = report::HomologyReport::build(&an).map_err(anyhow::Error::from)?;
            out.homology_report(&report);
            if !report.passed {
                return Err(Failure::Verification("homology checks failed".into()));
            }
        }
        Command::Homology(HomologyCommand::Matrix { level }) => {
            let an = analysis(&cli.source, &loaded)?;
            if *level > an.dim() {
                return Err(Failure::Input(anyhow::anyhow!("level {level} exceeds the dimension {}", an.dim())));
            }
            let m = PairingMatrix::build(&an, *level).map_err(anyhow::Error::from)?;
            out.matrix(&m, &an, &labels);
            if !m.is_unimodular_triangular(an.dim()) {
                return Err(Failure::Verification("pairing matrix is not unimodular triangular".into()));
            }
        }
        Command::OsMap { indices } => {
            let an = analysis(&cli.source, &loaded)?;
            let zero_based = indices
                .iter()
                .map(|&i| i.checked_sub(1).ok_or_else(|| anyhow::anyhow!("indices count from 1")))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let tuple = IndexTuple::new(&an.arrangement, &an.poset, zero_based).map_err(anyhow::Error::from)?;
            let report = report::OsMapReport::build(&an, &tuple, &labels).map_err(anyhow::Error::from)?;
            out.os_map(&report);
            if !report.dual_check_holds {
                return Err(Failure::Verification("dual identity fails".into()));
            }
        }
        Command::Render { output } => {
            if arr.dim() != 2 {
                return Err(Failure::Input(anyhow::anyhow!("render needs a planar arrangement, got dimension {}", arr.dim())));
            }
            let an = analysis(&cli.source, &loaded)?;
            let svg = render::svg(&an, &labels);
            match output {
                Some(path) => fs::write(path, svg).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{svg}"),
            }
        }
        Command::Fixture { .. } => unreachable!("handled above"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

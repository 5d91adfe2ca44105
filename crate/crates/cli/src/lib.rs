//! The `snapmesh` command line: `generate`, `validate`, `export` and `methods`.
//!
//! Exit codes are part of the interface:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | bad arguments, or a config, piece or map file failed to load |
//! | 2 | generation placed only the starting piece |
//! | 3 | a `--min-cbar` / `--min-armax` threshold was not met |
//! | 4 | the map has no walkable surface |
//!
//! Output files are written to a temporary file next to the target and renamed
//! into place, and only once every result is ready, so a failing command
//! leaves no partial files behind.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use snapmesh::{
    bundled, formats, validate_map, Error, GeneratedMap, MethodRegistry, NavConfig, PieceLibrary, ValidationReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_LOAD: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;
pub const EXIT_THRESHOLD: i32 = 3;
pub const EXIT_NO_WALKABLE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "snapmesh",
    version,
    about = "Generate and validate maps built from snappable mesh pieces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a map from a config file.
    Generate(GenerateArgs),
    /// Measure the navigability of a map file.
    Validate(ValidateArgs),
    /// Write a map as a Wavefront OBJ file.
    Export(ExportArgs),
    /// List the registered generation methods.
    Methods(MethodsArgs),
}

#[derive(Debug, Args)]
pub struct PieceArgs {
    /// Piece files or directories of piece files. Without this flag the
    /// bundled pieces are available by id.
    #[arg(long, num_args = 1..)]
    pub pieces: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NavArgs {
    /// Number of navigation points.
    #[arg(long)]
    pub nav_points: Option<usize>,
    /// Seed of the navigation point stream.
    #[arg(long)]
    pub nav_seed: Option<i64>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub pieces: PieceArgs,
    /// Overrides the config seed. Without either, a seed is derived from the clock.
    #[arg(long, allow_negative_numbers = true)]
    pub seed: Option<i64>,
    /// Map file to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Narration log; defaults to the map path with a `.log` extension.
    #[arg(long)]
    pub log: Option<PathBuf>,
    #[arg(long)]
    pub obj: Option<PathBuf>,
    /// Also validate the map.
    #[arg(long)]
    pub validate: bool,
    /// Report file; implies --validate.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub nav: NavArgs,
    /// Exit with code 3 when c̄ is below this fraction; implies --validate.
    #[arg(long)]
    pub min_cbar: Option<f64>,
    /// Exit with code 3 when A_r^max is below this fraction; implies --validate.
    #[arg(long)]
    pub min_armax: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub map: PathBuf,
    #[command(flatten)]
    pub pieces: PieceArgs,
    /// Take navigation settings from this config's `nav` block; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub nav: NavArgs,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub min_cbar: Option<f64>,
    #[arg(long)]
    pub min_armax: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub map: PathBuf,
    #[command(flatten)]
    pub pieces: PieceArgs,
    #[arg(long)]
    pub obj: PathBuf,
}

#[derive(Debug, Args)]
pub struct MethodsArgs {
    /// Print a JSON array instead of one line per method.
    #[arg(long)]
    pub json: bool,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoWalkableSurface => EXIT_NO_WALKABLE,
            _ => EXIT_LOAD,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (program name first) and runs the command, writing the
/// summary to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, registry: &MethodRegistry, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_LOAD } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Generate(a) => generate(a, registry, out),
        Command::Validate(a) => validate(a, out),
        Command::Export(a) => export(a, out),
        Command::Methods(a) => methods(a, registry, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn load_library(args: &PieceArgs) -> Result<PieceLibrary, Failure> {
    if args.pieces.is_empty() {
        Ok(bundled::library())
    } else {
        Ok(formats::load_piece_library(&args.pieces)?)
    }
}

/// Adds `extra` to `lib`; a piece already present must be identical.
fn merge_library(lib: &mut PieceLibrary, extra: PieceLibrary) -> Result<(), Failure> {
    for piece in extra.iter() {
        match lib.get(&piece.id) {
            Some(existing) if existing == piece => {}
            Some(_) => {
                return Err(Failure {
                    code: EXIT_LOAD,
                    message: format!("piece `{}` is defined twice with different contents", piece.id),
                })
            }
            None => lib.insert(piece.clone())?,
        }
    }
    Ok(())
}

fn clock_seed() -> i64 {
    let nanos = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_nanos())
        .unwrap_or(0);
    (nanos % (i64::MAX as u128)) as i64
}

fn nav_config(base: Option<NavConfig>, args: &NavArgs) -> Result<NavConfig, Failure> {
    let mut nav = base.unwrap_or_default();
    if let Some(n) = args.nav_points {
        nav.n_points = n;
    }
    if let Some(s) = args.nav_seed {
        nav.seed = s;
    }
    nav.validate()?;
    Ok(nav)
}

fn check_fraction(name: &str, v: Option<f64>) -> Result<(), Failure> {
    match v {
        Some(x) if !(0.0..=1.0).contains(&x) => Err(Failure {
            code: EXIT_LOAD,
            message: format!("{name} must lie in [0, 1]"),
        }),
        _ => Ok(()),
    }
}

fn thresholds_met(report: &ValidationReport, min_cbar: Option<f64>, min_armax: Option<f64>) -> bool {
    min_cbar.is_none_or(|m| report.c_bar >= m) && min_armax.is_none_or(|m| report.a_r_max >= m)
}

fn print_report(out: &mut dyn Write, r: &ValidationReport) {
    let _ = writeln!(
        out,
        "c_bar {:.2}%  a_r_max {:.2}%  regions {}  points {}  validation {:.3} s",
        r.c_bar * 100.0,
        r.a_r_max * 100.0,
        r.region_count,
        r.n_points,
        r.duration_s
    );
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let fail = |e: &dyn std::fmt::Display| Failure {
        code: EXIT_LOAD,
        message: format!("{}: {e}", path.display()),
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}

fn write_all(files: &[(PathBuf, String)]) -> Result<(), Failure> {
    for (path, contents) in files {
        write_atomic(path, contents)?;
    }
    Ok(())
}

fn generate(a: &GenerateArgs, registry: &MethodRegistry, out: &mut dyn Write) -> CmdResult {
    check_fraction("--min-cbar", a.min_cbar)?;
    check_fraction("--min-armax", a.min_armax)?;
    let loaded = formats::load_config(&a.config)?;
    let mut library = load_library(&a.pieces)?;
    merge_library(&mut library, loaded.pieces)?;
    let mut config = loaded.generation;
    config.seed = a.seed.or(loaded.seed).unwrap_or_else(clock_seed);
    let want_validation = a.validate || a.report.is_some() || a.min_cbar.is_some() || a.min_armax.is_some();
    let nav = if want_validation {
        Some(nav_config(loaded.nav, &a.nav)?)
    } else {
        None
    };

    let started = Instant::now();
    let map = snapmesh::generate_with(&config, &library, registry)?.map;
    let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;

    let mut files = vec![
        (a.out.clone(), formats::map_to_json(&map)),
        (
            a.log.clone().unwrap_or_else(|| a.out.with_extension("log")),
            map.log_text(),
        ),
    ];
    if let Some(obj) = &a.obj {
        files.push((obj.clone(), formats::export_obj(&map, &library)?));
    }
    let report = match &nav {
        Some(nav) => {
            let report = validate_map(&map, &library, nav)?.report;
            if let Some(path) = &a.report {
                files.push((path.clone(), formats::report_to_json(&report)));
            }
            Some(report)
        }
        None => None,
    };
    write_all(&files)?;

    let _ = writeln!(
        out,
        "seed {}  pieces {}  connections {}  generation {:.2} ms",
        map.seed,
        map.piece_count(),
        map.connections.len(),
        elapsed_ms
    );
    if let Some(r) = &report {
        print_report(out, r);
    }
    Ok(exit_code(&map, report.as_ref(), a.min_cbar, a.min_armax))
}

fn exit_code(
    map: &GeneratedMap,
    report: Option<&ValidationReport>,
    min_cbar: Option<f64>,
    min_armax: Option<f64>,
) -> i32 {
    if map.piece_count() <= 1 {
        EXIT_DEGENERATE
    } else if report.is_some_and(|r| !thresholds_met(r, min_cbar, min_armax)) {
        EXIT_THRESHOLD
    } else {
        EXIT_OK
    }
}

fn validate(a: &ValidateArgs, out: &mut dyn Write) -> CmdResult {
    check_fraction("--min-cbar", a.min_cbar)?;
    check_fraction("--min-armax", a.min_armax)?;
    let library = load_library(&a.pieces)?;
    let base = match &a.config {
        Some(path) => formats::load_config(path)?.nav,
        None => None,
    };
    let nav = nav_config(base, &a.nav)?;
    let map = formats::load_map(&a.map, &library)?;
    let report = validate_map(&map, &library, &nav)?.report;
    if let Some(path) = &a.report {
        write_atomic(path, &formats::report_to_json(&report))?;
    }
    print_report(out, &report);
    if thresholds_met(&report, a.min_cbar, a.min_armax) {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_THRESHOLD)
    }
}

fn export(a: &ExportArgs, out: &mut dyn Write) -> CmdResult {
    let library = load_library(&a.pieces)?;
    let map = formats::load_map(&a.map, &library)?;
    write_atomic(&a.obj, &formats::export_obj(&map, &library)?)?;
    let _ = writeln!(out, "wrote {} pieces to {}", map.piece_count(), a.obj.display());
    Ok(EXIT_OK)
}

fn methods(a: &MethodsArgs, registry: &MethodRegistry, out: &mut dyn Write) -> CmdResult {
    if a.json {
        let list: Vec<serde_json::Value> = registry
            .entries()
            .iter()
            .map(|m| serde_json::json!({ "kind": m.kind, "params": m.params }))
            .collect();
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&list).expect("serializable"));
    } else {
        for m in registry.entries() {
            let _ = writeln!(out, "{}: {}", m.kind, m.params.join(", "));
        }
    }
    Ok(EXIT_OK)
}

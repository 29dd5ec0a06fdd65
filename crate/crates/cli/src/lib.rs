//! Command-line front end for `supercomb`.
//!
//! Every verb prints one pretty-printed JSON report on stdout. Exit code 0
//! means the property holds or the computation succeeded, 1 means the
//! property fails (with a witness in the report), 2 means bad input or usage.

pub mod cache;
pub mod io;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use supercomb::convexity::{hull, xi, xi_set};
use supercomb::selection::{brute, check_invertible, check_soft, invertibility_corpus, soft_lift, Selector};
use supercomb::setfam::{is_binary, is_lattice_closed, is_normal, is_point_separating, validate_subbase};
use supercomb::superext::{count_mls, enumerate_mls, flip, lambda_map};
use supercomb::{Error, GroundSet, Mls, PointMap, Strictness, SubsetMask, Witness};

use cache::{Cache, CacheError, Status};
use io::InputError;

pub const SCHEMA_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "SUPERCOMB_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".supercomb-cache";

#[derive(Debug, Parser)]
#[command(name = "supercomb", version, about = "Finite selection theory for binary normal subbases")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide the subbase axioms for a subbase file.
    CheckSubbase {
        file: PathBuf,
        /// Also require closure under pairwise union and intersection.
        #[arg(long)]
        strict_lattice: bool,
    },
    /// Convex hull of a point set.
    Hull {
        file: PathBuf,
        #[arg(long, value_parser = parse_points, allow_hyphen_values = true)]
        set: PointList,
    },
    /// Nearest point of a set to a point.
    Xi {
        file: PathBuf,
        #[arg(long)]
        x: i64,
        #[arg(long, value_parser = parse_points, allow_hyphen_values = true)]
        set: PointList,
    },
    /// Count maximal linked systems on N points.
    MlsCount {
        n: usize,
        #[arg(long)]
        par: Option<usize>,
    },
    /// Write all maximal linked systems on N points as NDJSON.
    MlsEnum {
        n: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        par: Option<usize>,
    },
    /// Push maximal linked systems forward along a map.
    LambdaApply {
        mapfile: PathBuf,
        #[arg(long)]
        mls_file: PathBuf,
    },
    /// Run the selection algorithm on an instance file.
    Select { instance: PathBuf },
    /// Extend a partial lift through a map on an instance file.
    CheckSoft { instance: PathBuf },
    /// Lift every map from small finite domains through a map.
    CheckInvertible {
        mapfile: PathBuf,
        #[arg(long)]
        subbase: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_z: usize,
    },
    /// Write the flip graph of maximal linked systems as DOT.
    ExportDot {
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time enumeration and compare with the cache.
    Bench {
        n: usize,
        #[arg(long)]
        par: Option<usize>,
        #[arg(long, default_value_t = 1)]
        repeat: usize,
    },
}

impl Command {
    pub fn verb(&self) -> &'static str {
        match self {
            Command::CheckSubbase { .. } => "check-subbase",
            Command::Hull { .. } => "hull",
            Command::Xi { .. } => "xi",
            Command::MlsCount { .. } => "mls-count",
            Command::MlsEnum { .. } => "mls-enum",
            Command::LambdaApply { .. } => "lambda-apply",
            Command::Select { .. } => "select",
            Command::CheckSoft { .. } => "check-soft",
            Command::CheckInvertible { .. } => "check-invertible",
            Command::ExportDot { .. } => "export-dot",
            Command::Bench { .. } => "bench",
        }
    }
}

/// A comma-separated point list such as `0,2,3`; empty means the empty set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointList(pub Vec<i64>);

fn parse_points(s: &str) -> Result<PointList, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|e| format!("bad point {t:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(PointList)
}

/// Where the process runs: the cache location.
#[derive(Clone, Debug)]
pub struct Context {
    pub cache_dir: PathBuf,
}

impl Context {
    pub fn from_env() -> Self {
        let dir = std::env::var_os(CACHE_ENV).map_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR), PathBuf::from);
        Context { cache_dir: dir }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Core(#[from] Error),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error("{0}")]
    Usage(String),
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    #[serde(flatten)]
    body: T,
}

/// Point name to value, serialized as a JSON object in point order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedValues(pub Vec<(String, usize)>);

impl NamedValues {
    fn of(names: &[String], h: &PointMap) -> Self {
        NamedValues(names.iter().cloned().zip(h.values().iter().copied()).collect())
    }
}

impl Serialize for NamedValues {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

struct Done {
    code: i32,
    body: serde_json::Value,
    notes: Vec<String>,
}

impl Done {
    fn new(holds: bool, body: impl Serialize) -> Self {
        Done {
            code: if holds { 0 } else { 1 },
            body: serde_json::to_value(body).expect("serializable"),
            notes: Vec::new(),
        }
    }
}

pub fn run_with<I, T>(args: I, ctx: &Context) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.exit_code() {
                0 => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let verb = cli.command.verb();
    match dispatch(&cli.command, ctx) {
        Ok(done) => {
            let mut stdout = String::new();
            let report = Report {
                schema_version: SCHEMA_VERSION,
                command: verb,
                body: done.body,
            };
            stdout.push_str(&io::to_json(&report));
            let mut stderr = String::new();
            for note in done.notes {
                let _ = writeln!(stderr, "{note}");
            }
            Outcome {
                code: done.code,
                stdout,
                stderr,
            }
        }
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Runs with process arguments and the environment's cache location.
pub fn run() -> Outcome {
    run_with(std::env::args_os(), &Context::from_env())
}

fn dispatch(cmd: &Command, ctx: &Context) -> Result<Done, CliError> {
    let cache = Cache::new(&ctx.cache_dir);
    match cmd {
        Command::CheckSubbase { file, strict_lattice } => check_subbase(file, *strict_lattice),
        Command::Hull { file, set } => hull_cmd(file, &set.0),
        Command::Xi { file, x, set } => xi_cmd(file, *x, &set.0),
        Command::MlsCount { n, par } => Ok(Done::new(true, CountBody { n: *n, count: count_mls(*n, *par)? })),
        Command::MlsEnum { n, out, par } => mls_enum(&cache, *n, out, *par),
        Command::LambdaApply { mapfile, mls_file } => lambda_apply(mapfile, mls_file),
        Command::Select { instance } => select_cmd(instance),
        Command::CheckSoft { instance } => check_soft_cmd(instance),
        Command::CheckInvertible {
            mapfile,
            subbase,
            max_z,
        } => check_invertible_cmd(mapfile, subbase, *max_z),
        Command::ExportDot { n, out } => export_dot(*n, out),
        Command::Bench { n, par, repeat } => bench(&cache, *n, *par, *repeat),
    }
}

#[derive(Serialize)]
struct SubbaseBody {
    n: usize,
    strictness: Strictness,
    holds: bool,
    witness: Option<Witness>,
    binary: bool,
    normal: bool,
    point_separating: bool,
    /// Only decided under the strict profile.
    lattice_closed: Option<bool>,
    notes: Vec<String>,
}

fn check_subbase(file: &Path, strict_lattice: bool) -> Result<Done, CliError> {
    let (mut sb, mut notes) = io::parse_subbase(file)?;
    if strict_lattice {
        sb = sb.with_strictness(Strictness::PaperStrict);
    }
    let verdict = validate_subbase(&sb);
    notes.extend(verdict.notes().iter().cloned());
    let lattice_closed = (sb.strictness() == Strictness::PaperStrict).then(|| is_lattice_closed(sb.family()).is_holds());
    let body = SubbaseBody {
        n: sb.ground().len(),
        strictness: sb.strictness(),
        holds: verdict.is_holds(),
        witness: verdict.witness().cloned(),
        binary: is_binary(&sb).is_holds(),
        normal: is_normal(&sb).is_holds(),
        point_separating: is_point_separating(&sb).is_holds(),
        lattice_closed,
        notes,
    };
    Ok(Done::new(body.holds, body))
}

fn point_set(ground: GroundSet, raw: &[i64]) -> Result<SubsetMask, CliError> {
    let mut mask = SubsetMask::EMPTY;
    for &p in raw {
        if p < 0 || p as usize >= ground.len() {
            return Err(Error::OutOfRangePoint { point: p, n: ground.len() }.into());
        }
        mask = mask.with(p as usize);
    }
    Ok(mask)
}

#[derive(Serialize)]
struct HullBody {
    set: SubsetMask,
    hull: SubsetMask,
    supporting: Vec<SubsetMask>,
}

fn hull_cmd(file: &Path, set: &[i64]) -> Result<Done, CliError> {
    let (sb, _) = io::parse_subbase(file)?;
    let b = point_set(sb.ground(), set)?;
    let r = hull(&sb, b);
    Ok(Done::new(
        true,
        HullBody {
            set: r.input,
            hull: r.hull,
            supporting: r.supporting,
        },
    ))
}

#[derive(Serialize)]
struct XiBody {
    x: usize,
    set: SubsetMask,
    holds: bool,
    xi: Option<usize>,
    /// The defining intersection, reported when it is not a single point.
    intersection: Option<SubsetMask>,
}

fn xi_cmd(file: &Path, x: i64, set: &[i64]) -> Result<Done, CliError> {
    let (sb, _) = io::parse_subbase(file)?;
    let g = sb.ground();
    if x < 0 || x as usize >= g.len() {
        return Err(Error::OutOfRangePoint { point: x, n: g.len() }.into());
    }
    let x = x as usize;
    let f = point_set(g, set)?;
    match xi(&sb, x, f) {
        Ok(p) => Ok(Done::new(
            true,
            XiBody {
                x,
                set: f,
                holds: true,
                xi: Some(p),
                intersection: None,
            },
        )),
        Err(Error::NotSingleton(_)) => Ok(Done::new(
            false,
            XiBody {
                x,
                set: f,
                holds: false,
                xi: None,
                intersection: Some(xi_set(&sb, x, f)),
            },
        )),
        Err(e) => Err(e.into()),
    }
}

#[derive(Serialize)]
struct CountBody {
    n: usize,
    count: u64,
}

#[derive(Serialize)]
struct EnumBody {
    n: usize,
    count: u64,
    out: String,
    sha256: String,
}

fn cache_note(status: &Status, n: usize) -> Option<String> {
    match status {
        Status::Hit => None,
        Status::Miss => Some(format!("cache: enumerated n={n}")),
        Status::CacheCorrupt { reason } => Some(format!("cache: CacheCorrupt ({reason}); regenerated n={n}")),
    }
}

fn copy_atomic(from: &Path, to: &Path) -> Result<(), CliError> {
    let io_err = |source| CacheError::Io {
        path: to.to_path_buf(),
        source,
    };
    let dir = match to.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io_err)?;
    let mut src = fs::File::open(from).map_err(io_err)?;
    std::io::copy(&mut src, &mut tmp).map_err(io_err)?;
    tmp.persist(to).map_err(|e| io_err(e.error))?;
    Ok(())
}

fn mls_enum(cache: &Cache, n: usize, out: &Path, par: Option<usize>) -> Result<Done, CliError> {
    let entry = cache.ensure(n, par)?;
    copy_atomic(&entry.path, out)?;
    let mut done = Done::new(
        true,
        EnumBody {
            n,
            count: entry.meta.count,
            out: out.display().to_string(),
            sha256: entry.meta.sha256,
        },
    );
    done.notes.extend(cache_note(&entry.status, n));
    Ok(done)
}

#[derive(Serialize)]
struct LambdaBody {
    n: usize,
    m: usize,
    count: usize,
    images: Vec<Vec<Vec<usize>>>,
}

fn lambda_apply(mapfile: &Path, mls_file: &Path) -> Result<Done, CliError> {
    let f = io::parse_map(mapfile)?;
    let n = f.domain_len();
    let ground = GroundSet::new(n)?;
    let text = io::read(mls_file)?;
    let mut images = Vec::new();
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let location = format!("line {}", i + 1);
        let raw: Vec<Vec<i64>> = serde_json::from_str(line).map_err(|e| InputError::Parse {
            path: mls_file.to_path_buf(),
            line: i + 1,
            column: e.column(),
            message: e.to_string(),
        })?;
        let invariant = |e: Error| InputError::Invariant {
            path: mls_file.to_path_buf(),
            location: location.clone(),
            message: e.to_string(),
        };
        let members = supercomb::setfam::normalize_family(&raw, ground).map_err(invariant)?;
        let eta = Mls::from_minimal(members).map_err(invariant)?;
        images.push(lambda_map(f.values(), f.codomain().len(), &eta)?.to_point_lists());
    }
    Ok(Done::new(
        true,
        LambdaBody {
            n,
            m: f.codomain().len(),
            count: images.len(),
            images,
        },
    ))
}

#[derive(Serialize)]
struct SelectBody {
    holds: bool,
    witness: Option<Witness>,
    reason: Option<String>,
    selection: Option<NamedValues>,
    brute_force_exists: bool,
}

/// Maps a core failure to a failed-property verdict where it has one.
fn failed(e: Error) -> Result<(Option<Witness>, String), CliError> {
    match e {
        Error::PreconditionFailed(v) | Error::HypothesisFailed(v) => {
            let reason = v.to_string();
            Ok((v.witness().cloned(), reason))
        }
        e @ Error::NotExtendable { .. } => Ok((None, e.to_string())),
        other => Err(other.into()),
    }
}

fn select_cmd(path: &Path) -> Result<Done, CliError> {
    let file: io::InstanceFile = io::from_json(path, &io::read(path)?)?;
    let inst = io::selection_from_file(path, &file)?;
    let brute_force_exists = brute::find_map(&inst.space, inst.sb.ground().len(), |v| {
        v.iter()
            .enumerate()
            .all(|(p, &x)| inst.phi.get(p).contains(x) && inst.g[p].is_none_or(|g| g == x))
    })
    .is_some();
    let result = Selector::new(&inst.sb).and_then(|s| s.select_extend(&inst.space, inst.a, &inst.g, &inst.phi));
    let body = match result {
        Ok(h) => SelectBody {
            holds: true,
            witness: None,
            reason: None,
            selection: Some(NamedValues::of(inst.space.names(), &h)),
            brute_force_exists,
        },
        Err(e) => {
            let (witness, reason) = failed(e)?;
            SelectBody {
                holds: false,
                witness,
                reason: Some(reason),
                selection: None,
                brute_force_exists,
            }
        }
    };
    Ok(Done::new(body.holds, body))
}

fn check_soft_cmd(path: &Path) -> Result<Done, CliError> {
    let file: io::InstanceFile = io::from_json(path, &io::read(path)?)?;
    let (f, sb, inst) = io::softness_from_file(path, &file)?;
    let brute_force_exists = brute::soft_lift_exists(&f, &inst);
    let body = match check_soft(&f, &sb, std::slice::from_ref(&inst)) {
        Ok(v) if v.is_holds() => {
            let g = soft_lift(&Selector::new(&sb)?, &f, &inst)?;
            SelectBody {
                holds: true,
                witness: None,
                reason: None,
                selection: Some(NamedValues::of(inst.space.names(), &g)),
                brute_force_exists,
            }
        }
        Ok(v) => SelectBody {
            holds: false,
            reason: Some(v.to_string()),
            witness: v.witness().cloned(),
            selection: None,
            brute_force_exists,
        },
        Err(e) => {
            let (witness, reason) = failed(e)?;
            SelectBody {
                holds: false,
                witness,
                reason: Some(reason),
                selection: None,
                brute_force_exists,
            }
        }
    };
    Ok(Done::new(body.holds, body))
}

#[derive(Serialize)]
struct InvertibleBody {
    holds: bool,
    witness: Option<Witness>,
    reason: Option<String>,
    max_z: usize,
    instances: usize,
    brute_force_lifts: bool,
    brute_force_agrees: bool,
}

fn check_invertible_cmd(mapfile: &Path, subbase: &Path, max_z: usize) -> Result<Done, CliError> {
    if max_z > 4 {
        return Err(CliError::Usage(format!("--max-z {max_z} exceeds the supported maximum 4")));
    }
    let (sb, _) = io::parse_subbase(subbase)?;
    let f = io::point_map_from_file(mapfile, &io::from_json(mapfile, &io::read(mapfile)?)?, Some(sb.ground().len()))?;
    let corpus = invertibility_corpus(max_z, f.codomain().len());
    let brute_force_lifts = corpus.iter().all(|(z, g)| brute::lift_exists(z, &f, g));
    let (holds, witness, reason) = match check_invertible(&f, &sb, &corpus) {
        Ok(v) => (v.is_holds(), v.witness().cloned(), (!v.is_holds()).then(|| v.to_string())),
        Err(e) => {
            let (w, r) = failed(e)?;
            (false, w, Some(r))
        }
    };
    let body = InvertibleBody {
        holds,
        witness,
        reason,
        max_z,
        instances: corpus.len(),
        brute_force_lifts,
        brute_force_agrees: !holds || brute_force_lifts,
    };
    Ok(Done::new(holds, body))
}

#[derive(Serialize)]
struct DotBody {
    n: usize,
    vertices: usize,
    edges: usize,
    out: String,
    sha256: String,
}

fn mls_label(eta: &Mls) -> String {
    let sets: Vec<String> = eta
        .minimal()
        .members()
        .iter()
        .map(|s| s.points().map(|p| p.to_string()).collect::<Vec<_>>().join(""))
        .collect();
    sets.join(" ")
}

/// The flip graph: one vertex per MLS, an edge when exchanging one minimal
/// member for its complement turns one into the other.
pub fn flip_graph_dot(n: usize) -> Result<(String, usize, usize), Error> {
    let lam = enumerate_mls(n)?;
    let mut dot = format!("graph lambda{n} {{\n");
    for (i, eta) in lam.elements().iter().enumerate() {
        let _ = writeln!(dot, "  m{i} [label=\"{}\"];", mls_label(eta));
    }
    let mut edges = 0;
    for (i, eta) in lam.elements().iter().enumerate() {
        let mut nbrs: Vec<usize> = eta
            .minimal()
            .members()
            .iter()
            .filter_map(|&s| flip(eta, s))
            .filter_map(|other| lam.index_of(&other))
            .filter(|&j| j > i)
            .collect();
        nbrs.sort_unstable();
        nbrs.dedup();
        for j in nbrs {
            let _ = writeln!(dot, "  m{i} -- m{j};");
            edges += 1;
        }
    }
    dot.push_str("}\n");
    Ok((dot, lam.len(), edges))
}

fn export_dot(n: usize, out: &Path) -> Result<Done, CliError> {
    if n > 6 {
        return Err(CliError::Usage(format!("export-dot supports n <= 6, got {n}")));
    }
    let (dot, vertices, edges) = flip_graph_dot(n)?;
    let io_err = |source| CacheError::Io {
        path: out.to_path_buf(),
        source,
    };
    fs::write(out, &dot).map_err(io_err)?;
    let sha256 = cache::sha256_file(out).map_err(io_err)?;
    Ok(Done::new(
        true,
        DotBody {
            n,
            vertices,
            edges,
            out: out.display().to_string(),
            sha256,
        },
    ))
}

#[derive(Serialize)]
struct BenchBody {
    n: usize,
    repeat: usize,
    count: u64,
    cache_count: u64,
    matches_cache: bool,
}

/// Timings go to stderr so that the report itself stays reproducible.
fn bench(cache: &Cache, n: usize, par: Option<usize>, repeat: usize) -> Result<Done, CliError> {
    if repeat == 0 {
        return Err(CliError::Usage("--repeat must be at least 1".into()));
    }
    let entry = cache.ensure(n, par)?;
    let mut notes: Vec<String> = cache_note(&entry.status, n).into_iter().collect();
    let mut count = 0;
    for run in 0..repeat {
        let start = Instant::now();
        count = count_mls(n, par)?;
        notes.push(format!(
            "bench n={n} run={} par={} count={count} seconds={:.6}",
            run + 1,
            par.unwrap_or(1),
            start.elapsed().as_secs_f64()
        ));
    }
    let body = BenchBody {
        n,
        repeat,
        count,
        cache_count: entry.meta.count,
        matches_cache: count == entry.meta.count,
    };
    let mut done = Done::new(body.matches_cache, body);
    done.notes = notes;
    Ok(done)
}

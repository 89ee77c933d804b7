//! Command-line front end: shape files in, numbers on stdout and CSV files out.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use hadwiger::asymptotics::{gap_set, hadwiger_dimension, perimeter_limit, sweep, Schedule};
use hadwiger::curves::{generate_shape, perimeter, ClosedCurve, ShapeSpec};
use hadwiger::export;
use hadwiger::gauge::{self_perimeter, symmetrize, SymmetricOval};
use hadwiger::necklace::{hadwiger_count_with, CountOptions};
use hadwiger::offset::{cone_check, level_set, offset_perimeter, offset_polygon, LevelSource};
use hadwiger::point::Point2;
use serde::Deserialize;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_GEOMETRY: i32 = 4;
pub const EXIT_UNCERTIFIED: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Geometry(#[from] hadwiger::Error),
    #[error("{0}")]
    Uncertified(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Parse { .. } | CliError::Io { .. } => EXIT_INPUT,
            CliError::Geometry(_) => EXIT_GEOMETRY,
            CliError::Uncertified(_) => EXIT_UNCERTIFIED,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parse { .. } => "parse",
            CliError::Io { .. } => "io",
            CliError::Geometry(_) => "geometry",
            CliError::Uncertified(_) => "certification",
        }
    }

    /// One-line JSON error record.
    pub fn record(&self) -> String {
        serde_json::json!({
            "error": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        })
        .to_string()
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Gauge norm of --vector.
    Norm,
    /// Perimeter of --shape in the metric of --ball.
    Perimeter,
    /// Outer parallel chain of --shape at distance --lambda.
    Offset,
    /// Level set at distance --r from the vertices of --shape, with the cone check.
    Levelset,
    /// Largest greedy necklace of beads of size --lambda.
    Pack,
    /// Counts over a geometric λ schedule and the extrapolated perimeter.
    Sweep,
    /// Attained counts over a schedule.
    Gaps,
    /// Growth exponent of the counts over [--lmin, --lmax].
    Dimension,
}

/// Parsed command line.
#[derive(Debug, Clone, Parser)]
#[command(name = "hadwiger", version, about = "Bead packings along closed curves in normed planes")]
pub struct RunConfig {
    pub command: Command,
    /// Shape file of the curve.
    #[arg(long)]
    pub shape: Option<PathBuf>,
    /// Shape file of the unit ball; non-symmetric convex shapes are symmetrized.
    #[arg(long)]
    pub ball: Option<PathBuf>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Comma-separated pair `x,y`.
    #[arg(long, allow_hyphen_values = true)]
    pub vector: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    pub lmax: f64,
    #[arg(long, default_value_t = 0.001)]
    pub lmin: f64,
    #[arg(long, default_value_t = 0.98)]
    pub ratio: f64,
    /// Level-set radius.
    #[arg(long)]
    pub r: Option<f64>,
    /// Cells per axis of the level-set grid.
    #[arg(long, default_value_t = 512)]
    pub grid: usize,
    /// Cone slack of the level-set check.
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Output CSV path; each command has its own default name.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "HADWIGER_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Fail with exit code 5 when a count is not certified.
    #[arg(long)]
    pub strict: bool,
}

/// Shape file: `kind`, an optional `[params]` table and, for polygons,
/// `points = [[x, y], ...]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeFile {
    pub kind: String,
    #[serde(default)]
    pub params: toml::Table,
    #[serde(default)]
    pub points: Option<Vec<[f64; 2]>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NgonParams {
    n: usize,
    #[serde(default = "one")]
    radius: f64,
    #[serde(default)]
    phase: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiskParams {
    #[serde(default = "disk_m")]
    m: usize,
    #[serde(default = "one")]
    radius: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SquareParams {
    #[serde(default = "one")]
    half: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HexagonParams {
    #[serde(default = "one")]
    radius: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StaircaseParams {
    k: usize,
    #[serde(default = "one")]
    step: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DeRhamParams {
    depth: u32,
    #[serde(default = "quarter")]
    ratio: f64,
}

fn one() -> f64 {
    1.0
}

fn quarter() -> f64 {
    0.25
}

fn disk_m() -> usize {
    512
}

impl ShapeFile {
    pub fn parse(text: &str, path: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Parse { path: path.into(), message: e.message().to_string() })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let p = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: p.clone(), source })?;
        Self::parse(&text, &p)
    }

    fn params<P: for<'de> Deserialize<'de>>(&self, path: &str) -> CliResult<P> {
        self.params
            .clone()
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Parse { path: path.into(), message: format!("params: {}", e.message()) })
    }

    /// Curve described by the file.
    pub fn curve(&self, path: &str) -> CliResult<ClosedCurve<f64>> {
        let spec = match self.kind.as_str() {
            "polygon" => {
                let pts = self
                    .points
                    .as_ref()
                    .ok_or_else(|| CliError::Parse { path: path.into(), message: "polygon needs `points`".into() })?;
                ShapeSpec::Polygon { points: pts.iter().map(|&[x, y]| Point2::new(x, y)).collect() }
            }
            "regular_ngon" => {
                let p: NgonParams = self.params(path)?;
                ShapeSpec::RegularNgon { n: p.n, radius: p.radius, phase: p.phase }
            }
            "disk" => {
                let p: DiskParams = self.params(path)?;
                ShapeSpec::Disk { m: p.m, radius: p.radius }
            }
            "square" => {
                let p: SquareParams = self.params(path)?;
                let h = p.half;
                let pts = [(h, h), (-h, h), (-h, -h), (h, -h)];
                ShapeSpec::Polygon { points: pts.iter().map(|&(x, y)| Point2::new(x, y)).collect() }
            }
            "hexagon" => {
                let p: HexagonParams = self.params(path)?;
                ShapeSpec::RegularNgon { n: 6, radius: p.radius, phase: 0.0 }
            }
            "staircase" => {
                let p: StaircaseParams = self.params(path)?;
                ShapeSpec::Staircase { k: p.k, step: p.step }
            }
            "de_rham" => {
                let p: DeRhamParams = self.params(path)?;
                ShapeSpec::DeRham { depth: p.depth, ratio: p.ratio }
            }
            other => {
                return Err(CliError::Parse { path: path.into(), message: format!("unknown shape kind `{other}`") })
            }
        };
        if self.points.is_some() && self.kind != "polygon" {
            return Err(CliError::Parse { path: path.into(), message: "`points` is only allowed for polygons".into() });
        }
        Ok(generate_shape(&spec)?)
    }

    /// Unit ball described by the file, and whether it had to be symmetrized.
    pub fn ball(&self, path: &str) -> CliResult<(SymmetricOval<f64>, bool)> {
        let c = self.curve(path)?;
        match SymmetricOval::new(c.points().to_vec()) {
            Ok(b) => Ok((b, false)),
            Err(_) if c.is_convex() => Ok((symmetrize(c.points())?, true)),
            Err(e) => Err(e.into()),
        }
    }
}

fn require<T: Copy>(v: Option<T>, flag: &str, cmd: Command) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("{cmd:?} needs --{flag}").to_lowercase()))
}

fn parse_vector(s: &str) -> CliResult<Point2<f64>> {
    let bad = || CliError::Usage(format!("--vector expects `x,y`, got `{s}`"));
    let (x, y) = s.split_once(',').ok_or_else(bad)?;
    let x: f64 = x.trim().parse().map_err(|_| bad())?;
    let y: f64 = y.trim().parse().map_err(|_| bad())?;
    Ok(Point2::new(x, y))
}

fn positive(v: f64, flag: &str) -> CliResult<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("--{flag} must be positive, got {v}")))
    }
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn csv_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io { path: path.display().to_string(), source: std::io::Error::other(e.to_string()) }
}

struct Inputs {
    shape: Option<ClosedCurve<f64>>,
    ball: SymmetricOval<f64>,
}

impl RunConfig {
    fn out_path(&self, default: &str) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from(default))
    }

    fn schedule(&self) -> CliResult<Schedule<f64>> {
        let s = Schedule::geometric(positive(self.lmax, "lmax")?, positive(self.lmin, "lmin")?, self.ratio);
        s.lambdas().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(s)
    }

    fn inputs(&self, needs_shape: bool, notes: &mut dyn Write) -> CliResult<Inputs> {
        let ball_path = self.ball.as_ref().ok_or_else(|| CliError::Usage(format!("{:?} needs --ball", self.command).to_lowercase()))?;
        let (ball, symmetrized) = ShapeFile::load(ball_path)?.ball(&ball_path.display().to_string())?;
        if symmetrized {
            let _ = writeln!(notes, "note: {} is not centrally symmetric; using its symmetrization", ball_path.display());
        }
        let shape = match (&self.shape, needs_shape) {
            (Some(p), _) => Some(ShapeFile::load(p)?.curve(&p.display().to_string())?),
            (None, true) => return Err(CliError::Usage(format!("{:?} needs --shape", self.command).to_lowercase())),
            (None, false) => None,
        };
        Ok(Inputs { shape, ball })
    }
}

/// Runs one command; results go to `out`, notes to `notes`.
pub fn run(cfg: &RunConfig, out: &mut (dyn Write + Send), notes: &mut (dyn Write + Send)) -> CliResult<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cfg, out, notes))
}

fn dispatch(cfg: &RunConfig, out: &mut (dyn Write + Send), notes: &mut (dyn Write + Send)) -> CliResult<()> {
    let io = |source| CliError::Io { path: "<stdout>".into(), source };
    match cfg.command {
        Command::Norm => {
            let v = parse_vector(cfg.vector.as_deref().ok_or_else(|| CliError::Usage("norm needs --vector".into()))?)?;
            let inp = cfg.inputs(false, notes)?;
            writeln!(out, "{}", inp.ball.norm(v)).map_err(io)?;
        }
        Command::Perimeter => {
            let inp = cfg.inputs(true, notes)?;
            let f = inp.shape.unwrap();
            writeln!(out, "{}", perimeter(&inp.ball, &f)).map_err(io)?;
        }
        Command::Offset => {
            let lam = positive(require(cfg.lambda, "lambda", cfg.command)?, "lambda")?;
            let inp = cfg.inputs(true, notes)?;
            let (f, b) = (inp.shape.unwrap(), inp.ball);
            let w = offset_polygon(&f, &b, lam);
            let path = cfg.out_path("offset.csv");
            export::write_points(create(&path)?, &w.polyline()).map_err(|e| csv_err(&path, e))?;
            writeln!(out, "offset_perimeter {}", offset_perimeter(&w, &b)).map_err(io)?;
            writeln!(out, "tube_bound {}", perimeter(&b, &f) + lam * self_perimeter(&b)).map_err(io)?;
        }
        Command::Levelset => {
            let r = positive(require(cfg.r, "r", cfg.command)?, "r")?;
            let inp = cfg.inputs(true, notes)?;
            let (f, b) = (inp.shape.unwrap(), inp.ball);
            let pts = f.points().to_vec();
            let n = pts.len() as f64;
            let c = pts.iter().fold(Point2::zero(), |s, &p| s + p) * (1.0 / n);
            let sample = level_set(&LevelSource::Points(pts), &b, r, cfg.grid)?;
            let path = cfg.out_path("levelset.csv");
            export::write_polylines(create(&path)?, &sample.polylines).map_err(|e| csv_err(&path, e))?;
            let rep = cone_check(&sample, &b, c, cfg.epsilon);
            writeln!(out, "components {}", sample.components()).map_err(io)?;
            write!(out, "{}", rep.text()).map_err(io)?;
        }
        Command::Pack => {
            let lam = positive(require(cfg.lambda, "lambda", cfg.command)?, "lambda")?;
            let inp = cfg.inputs(true, notes)?;
            let (f, b) = (inp.shape.unwrap(), inp.ball);
            let rep = hadwiger_count_with(&f, &b, lam, &CountOptions::default())?;
            let path = cfg.out_path("necklace.csv");
            export::write_necklace(create(&path)?, &rep.necklace).map_err(|e| csv_err(&path, e))?;
            writeln!(out, "{}", rep.count).map_err(io)?;
            let _ = writeln!(
                notes,
                "status {} gap {} certificate {:?}",
                rep.necklace.status.as_str(),
                rep.necklace.gap,
                rep.certificate
            );
            if cfg.strict && !rep.certified() {
                return Err(CliError::Uncertified(format!("count {} at λ = {lam} is not certified", rep.count)));
            }
        }
        Command::Sweep => {
            let sched = cfg.schedule()?;
            let inp = cfg.inputs(true, notes)?;
            let (f, b) = (inp.shape.unwrap(), inp.ball);
            let table = sweep(&f, &b, &sched, Some(perimeter(&b, &f)))?;
            let path = cfg.out_path("sweep.csv");
            export::write_sweep(create(&path)?, &table).map_err(|e| csv_err(&path, e))?;
            let est = perimeter_limit(&table)?;
            writeln!(out, "{} ± {}", est.value, est.half_width).map_err(io)?;
            let open = table.rows.iter().filter(|r| !r.certified).count();
            if cfg.strict && open > 0 {
                return Err(CliError::Uncertified(format!("{open} of {} rows are not certified", table.len())));
            }
        }
        Command::Gaps => {
            let sched = cfg.schedule()?;
            let inp = cfg.inputs(true, notes)?;
            let (f, b) = (inp.shape.unwrap(), inp.ball);
            let table = sweep(&f, &b, &sched, None)?;
            let g = gap_set(&f, &b, &table)?;
            let path = cfg.out_path("gaps.csv");
            export::write_gap_set(create(&path)?, &g).map_err(|e| csv_err(&path, e))?;
            let vals: Vec<String> = g.values.iter().map(|v| v.to_string()).collect();
            writeln!(out, "values {}", vals.join(" ")).map_err(io)?;
            writeln!(out, "max_consecutive_gap {}", g.max_consecutive_gap).map_err(io)?;
            if cfg.strict && !g.density_certified {
                return Err(CliError::Uncertified("gap set density is not certified".into()));
            }
        }
        Command::Dimension => {
            let sched = cfg.schedule()?;
            let inp = cfg.inputs(true, notes)?;
            let (f, b) = (inp.shape.unwrap(), inp.ball);
            let table = sweep(&f, &b, &sched, None)?;
            let path = cfg.out_path("dimension.csv");
            export::write_sweep(create(&path)?, &table).map_err(|e| csv_err(&path, e))?;
            let d = hadwiger_dimension(&f, &table, cfg.lmin, cfg.lmax)?;
            writeln!(out, "slope {}", d.slope).map_err(io)?;
            match d.box_counting {
                Some(bc) => writeln!(out, "box_counting {bc}").map_err(io)?,
                None => writeln!(out, "box_counting none").map_err(io)?,
            }
        }
    }
    out.flush().map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectors_parse() {
        assert_eq!(parse_vector("1,-2.5").unwrap(), Point2::new(1.0, -2.5));
        assert!(parse_vector("1;2").is_err());
    }

    #[test]
    fn shape_files_parse() {
        let s = ShapeFile::parse("kind = \"staircase\"\n[params]\nk = 2\n", "t").unwrap();
        assert_eq!(s.curve("t").unwrap().len(), 6);
        let p = ShapeFile::parse("kind = \"polygon\"\npoints = [[0,0],[1,0],[0,1]]\n", "t").unwrap();
        let (b, symmetrized) = p.ball("t").unwrap();
        assert!(symmetrized);
        assert_eq!(b.len(), 6);
        assert!(ShapeFile::parse("kind = \"blob\"\n", "t").unwrap().curve("t").is_err());
        assert!(ShapeFile::parse("kind = \"disk\"\n[params]\nq = 1\n", "t").unwrap().curve("t").is_err());
    }

    #[test]
    fn error_codes_are_distinct() {
        let errs = [
            CliError::Usage(String::new()),
            CliError::Parse { path: String::new(), message: String::new() },
            CliError::Geometry(hadwiger::Error::InvalidInput(String::new())),
            CliError::Uncertified(String::new()),
        ];
        let codes: Vec<i32> = errs.iter().map(CliError::exit_code).collect();
        assert_eq!(codes, vec![2, 3, 4, 5]);
        assert!(errs[1].record().starts_with('{'));
    }
}

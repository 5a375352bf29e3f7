use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "ringcap",
    version,
    about = "Conformal capacity of doubly connected domains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Capacity of a geometry family or of a JSON ring domain.
    Cap(CapArgs),
    /// Hyperbolic capacity of a compact set in the unit disk.
    Caph(SetArgs),
    /// Elliptic capacity of a compact set in the unit disk.
    Cape(SetArgs),
    /// Values of the annulus map at given points of the ring domain.
    Map(MapArgs),
    /// Capacity of the strip minus [z1, x+iy] on a grid of endpoints.
    Contour(ContourArgs),
    /// Closed-form capacity of a family.
    Oracle(OracleArgs),
    /// Reproduces one of the built-in parameter tables.
    Table(TableArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyName {
    TwoCircles,
    ConfocalEllipses,
    SquareInSquare,
    PolygonInPolygon,
    SegmentCircle,
    SegmentEllipse,
    SegmentPolygon,
    RectPair,
    RectHalfplaneVertical,
    RectHalfplaneHorizontal,
    RectStrip,
    StripSlit,
    TwoSegments,
    HalfplaneSlit,
    TwoSlits,
    Geometry,
}

/// Family parameters; each family reads the ones it needs.
#[derive(Args, Clone, Debug, Default)]
pub struct Params {
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<f64>,
    #[arg(long)]
    pub r1: Option<f64>,
    #[arg(long)]
    pub r2: Option<f64>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    /// First slit endpoint as `x,y`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z1: Option<C64>,
    /// Second slit endpoint as `x,y`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z2: Option<C64>,
    /// Ring domain JSON file (family `geometry`).
    #[arg(long)]
    pub geometry: Option<PathBuf>,
}

#[derive(Args, Clone, Debug)]
pub struct SolveArgs {
    /// Nodes per boundary component (even).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1e-14)]
    pub tol: f64,
    #[arg(long, default_value_t = 100)]
    pub maxit: usize,
    /// Grading order on cornered boundaries.
    #[arg(long)]
    pub grading: Option<u32>,
    /// Run the matrix-vector products on one thread.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Clone, Debug)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Report runtime_ms as 0 so that repeated runs give identical files.
    #[arg(long)]
    pub no_timing: bool,
    /// Worker threads for sweeps and grids.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Args, Debug)]
pub struct CapArgs {
    #[arg(value_enum)]
    pub family: FamilyName,
    #[command(flatten)]
    pub params: Params,
    #[command(flatten)]
    pub solve: SolveArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Scale the whole geometry by this factor before solving.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Fill `exact` and `rel_error` when a closed form exists.
    #[arg(long)]
    pub compare_oracle: bool,
    /// Append results to this CSV and reuse matching earlier rows.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Sweep one parameter: `KEY=V1,V2,...`.
    #[arg(long)]
    pub sweep: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetName {
    Disk,
    Square,
    Amoeba,
    Interval,
    /// A closed curve from `--geometry` (a boundary shape JSON).
    Curve,
}

#[derive(Args, Debug)]
pub struct SetArgs {
    #[arg(value_enum)]
    pub set: SetName,
    /// Radius of the disk, half-width of the square, or length of the interval.
    #[arg(long)]
    pub r: Option<f64>,
    /// Boundary shape JSON for `curve`.
    #[arg(long)]
    pub geometry: Option<PathBuf>,
    /// A point inside the curve, as `x,y`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub interior: Option<C64>,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct MapArgs {
    #[arg(value_enum)]
    pub family: FamilyName,
    #[command(flatten)]
    pub params: Params,
    #[command(flatten)]
    pub solve: SolveArgs,
    /// Points as `x,y;x,y;...` in the coordinates of the solved ring domain.
    #[arg(long, allow_hyphen_values = true)]
    pub points: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ContourArgs {
    /// Fixed slit endpoint, as `x,y`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z1: C64,
    /// Range of x as `x0,x1`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub x: C64,
    /// Range of y as `y0,y1`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub y: C64,
    #[arg(long, default_value_t = 11)]
    pub nx: usize,
    #[arg(long, default_value_t = 11)]
    pub ny: usize,
    #[command(flatten)]
    pub solve: SolveArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(value_enum)]
    pub family: FamilyName,
    #[command(flatten)]
    pub params: Params,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableName {
    /// Square in square, a = 0.1, ..., 0.9.
    #[value(alias = "hrv1")]
    Square,
    /// Polygon in polygon with q = 0.5.
    Polygon,
    SegmentCircle,
    /// Strip minus [0, s].
    Strip,
    RectPair,
    RectStrip,
    RectHalfplaneVertical,
    RectHalfplaneHorizontal,
    TwoCircles,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(value_enum)]
    pub name: TableName,
    #[command(flatten)]
    pub solve: SolveArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Parses `x,y` into a complex number.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `x,y`, got `{s}`"))?;
    let p = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
    Ok(C64::new(p(x)?, p(y)?))
}

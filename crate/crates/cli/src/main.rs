mod args;
mod cache;
mod family;

use args::*;
use clap::Parser;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use ringcap::boundary::Shape;
use ringcap::capacity::*;
use ringcap::{annq, Error};
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(std::io::Error),
    Csv(csv::Error),
    Solver(Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Solver(e)
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Solver(Error::Convergence { .. }) => 2,
            CliError::Solver(
                Error::Geometry(_)
                | Error::Singularity(_)
                | Error::Evaluation(_)
                | Error::Branch(_),
            ) => 3,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Csv(e) => write!(f, "csv error: {e}"),
            CliError::Solver(e) => write!(f, "{e}"),
        }
    }
}

/// One CSV row of a capacity report.
#[derive(Serialize)]
struct Row<'a> {
    family: &'a str,
    params: String,
    n: usize,
    value: f64,
    q: f64,
    iterations: usize,
    residual: f64,
    runtime_ms: f64,
    exact: Option<f64>,
    rel_error: Option<f64>,
}

fn sink(path: &Option<std::path::PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(std::fs::File::create(p)?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn emit_json<T: Serialize>(out: &OutputArgs, value: &T) -> Result<(), CliError> {
    let mut w = sink(&out.output)?;
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Usage(e.to_string()))?;
    writeln!(w, "{text}")?;
    Ok(())
}

fn emit_reports(
    out: &OutputArgs,
    reports: &mut [CapacityReport],
    single: bool,
) -> Result<(), CliError> {
    if out.no_timing {
        reports.iter_mut().for_each(|r| r.runtime_ms = 0.0);
    }
    match out.format {
        Format::Json if single => emit_json(out, &reports[0]),
        Format::Json => emit_json(out, &reports),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink(&out.output)?);
            for r in reports.iter() {
                w.serialize(Row {
                    family: r.family.name(),
                    params: r.family.params(),
                    n: r.n,
                    value: r.value,
                    q: r.q,
                    iterations: r.iterations,
                    residual: r.residual,
                    runtime_ms: r.runtime_ms,
                    exact: r.exact,
                    rel_error: r.rel_error,
                })?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        b = b.num_threads(j.max(1));
    }
    b.build().map_err(|e| CliError::Usage(e.to_string()))
}

fn cap(a: CapArgs) -> Result<(), CliError> {
    if !(a.scale > 0.0 && a.scale.is_finite()) {
        return Err(CliError::Usage(format!(
            "--scale {} must be positive",
            a.scale
        )));
    }
    let params = match &a.sweep {
        None => vec![a.params.clone()],
        Some(s) => {
            let (key, vals) = family::parse_sweep(s)?;
            vals.iter()
                .map(|&v| family::with_param(&a.params, &key, v))
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    let jobs: Vec<_> = params
        .iter()
        .map(|p| {
            let f = family::build(a.family, p)?;
            let o = family::options(&f, &a.solve)?;
            Ok((f, o))
        })
        .collect::<Result<_, CliError>>()?;
    let run = |(f, o): &(Family, ringcap::SolveOptions)| -> Result<CapacityReport, CliError> {
        let key = cache::key(f, o, a.scale);
        if let Some(path) = &a.cache {
            if let Some(hit) = cache::lookup(path, &key)? {
                return Ok(hit);
            }
        }
        Ok(family::compute(f, o, a.scale)?)
    };
    let results: Vec<Result<CapacityReport, CliError>> =
        pool(a.out.jobs)?.install(|| jobs.par_iter().map(run).collect());
    let mut reports = Vec::with_capacity(results.len());
    for (r, (f, o)) in results.into_iter().zip(&jobs) {
        let r = r?;
        if let Some(path) = &a.cache {
            let key = cache::key(f, o, a.scale);
            if cache::lookup(path, &key)?.is_none() {
                cache::append(path, &key, &r, o.tol)?;
            }
        }
        reports.push(if a.compare_oracle { r.with_oracle() } else { r });
    }
    emit_reports(&a.out, &mut reports, a.sweep.is_none())
}

#[derive(Serialize)]
struct SetReport {
    kind: &'static str,
    set: String,
    params: String,
    n: usize,
    value: f64,
    runtime_ms: f64,
    exact: Option<f64>,
    rel_error: Option<f64>,
}

fn set_capacity(a: SetArgs, hyperbolic: bool) -> Result<(), CliError> {
    let start = Instant::now();
    let r = a.r;
    let need_r = || r.ok_or_else(|| CliError::Usage("this set needs --r".into()));
    let solve = |e: &CompactSet| {
        if hyperbolic {
            caph(e, a.n)
        } else {
            cape(e, a.n)
        }
    };
    let (name, params, value, exact) = match a.set {
        SetName::Disk => {
            let r = need_r()?;
            (
                "disk",
                format!("r={r}"),
                solve(&CompactSet::disk(r)?)?,
                Some(r),
            )
        }
        SetName::Square => {
            let r = need_r()?;
            (
                "square",
                format!("r={r}"),
                solve(&CompactSet::square(r)?)?,
                None,
            )
        }
        SetName::Amoeba => ("amoeba", String::new(), solve(&CompactSet::amoeba())?, None),
        SetName::Interval => {
            let r = need_r()?;
            let (v, e) = if hyperbolic {
                (caph_interval(r, a.n)?, caph_interval_exact(r)?)
            } else {
                (cape_interval(r, a.n)?, cape_interval_exact(r)?)
            };
            ("interval", format!("r={r}"), v, Some(e))
        }
        SetName::Curve => {
            let path = a
                .geometry
                .as_ref()
                .ok_or_else(|| CliError::Usage("curve needs --geometry FILE".into()))?;
            let interior = a
                .interior
                .ok_or_else(|| CliError::Usage("curve needs --interior x,y".into()))?;
            let shape: Shape = serde_json::from_str(&std::fs::read_to_string(path)?)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            let set = CompactSet::new(shape.build()?, interior)?;
            ("curve", path.display().to_string(), solve(&set)?, None)
        }
    };
    let report = SetReport {
        kind: if hyperbolic { "caph" } else { "cape" },
        set: name.to_string(),
        params,
        n: a.n,
        value,
        runtime_ms: if a.out.no_timing {
            0.0
        } else {
            start.elapsed().as_secs_f64() * 1e3
        },
        exact,
        rel_error: exact.map(|e| (value - e).abs() / e),
    };
    match a.out.format {
        Format::Json => emit_json(&a.out, &report),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink(&a.out.output)?);
            w.serialize(&report)?;
            w.flush()?;
            Ok(())
        }
    }
}

fn map(a: MapArgs) -> Result<(), CliError> {
    let f = family::build(a.family, &a.params)?;
    let opts = family::options(&f, &a.solve)?;
    let points = a
        .points
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(parse_complex)
        .collect::<Result<Vec<C64>, _>>()
        .map_err(CliError::Usage)?;
    let m = annq(&family::ring(&f, &opts)?, &opts)?;
    let w = m.phi_eval(&points)?;
    #[derive(Serialize)]
    struct Point {
        x: f64,
        y: f64,
        u: f64,
        v: f64,
        modulus: f64,
    }
    let rows: Vec<Point> = points
        .iter()
        .zip(&w)
        .map(|(z, w)| Point {
            x: z.re,
            y: z.im,
            u: w.re,
            v: w.im,
            modulus: w.norm(),
        })
        .collect();
    match a.out.format {
        Format::Json => {
            #[derive(Serialize)]
            struct MapReport<'a> {
                family: &'a str,
                params: String,
                q: f64,
                capacity: f64,
                points: Vec<Point>,
            }
            emit_json(
                &a.out,
                &MapReport {
                    family: f.name(),
                    params: f.params(),
                    q: m.q,
                    capacity: m.capacity,
                    points: rows,
                },
            )
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink(&a.out.output)?);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn grid(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    if k == 1 {
        return vec![lo];
    }
    (0..k)
        .map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64)
        .collect()
}

fn contour(a: ContourArgs) -> Result<(), CliError> {
    if a.z1.im.abs() >= FRAC_PI_2 {
        return Err(Error::Geometry("z1 lies outside the strip |Im z| < π/2".into()).into());
    }
    if a.nx == 0 || a.ny == 0 {
        return Err(CliError::Usage("--nx and --ny must be positive".into()));
    }
    let probe = Family::StripSlit {
        a: [0.0, 0.0],
        b: [1.0, 0.0],
    };
    let opts = family::options(&probe, &a.solve)?;
    let cells: Vec<(f64, f64)> = grid(a.y.re, a.y.im, a.ny)
        .into_iter()
        .flat_map(|y| grid(a.x.re, a.x.im, a.nx).into_iter().map(move |x| (x, y)))
        .collect();
    let z1 = [a.z1.re, a.z1.im];
    let value = |&(x, y): &(f64, f64)| -> Result<f64, CliError> {
        let z = C64::new(x, y);
        if y.abs() >= FRAC_PI_2 || (z - a.z1).norm() < 1e-12 {
            return Ok(f64::NAN);
        }
        match family::compute(&Family::StripSlit { a: z1, b: [x, y] }, &opts, 1.0) {
            Ok(r) => Ok(r.value),
            Err(Error::Geometry(_)) => Ok(f64::NAN),
            Err(e) => Err(e.into()),
        }
    };
    let values: Vec<Result<f64, CliError>> =
        pool(a.jobs)?.install(|| cells.par_iter().map(value).collect());
    let mut w = csv::Writer::from_writer(sink(&a.output)?);
    w.write_record(["x", "y", "capacity"])?;
    for (&(x, y), v) in cells.iter().zip(values) {
        let v = v?;
        let s = if v.is_nan() {
            "nan".to_string()
        } else {
            v.to_string()
        };
        w.write_record([x.to_string(), y.to_string(), s])?;
    }
    w.flush()?;
    Ok(())
}

fn oracle(a: OracleArgs) -> Result<(), CliError> {
    let f = family::build(a.family, &a.params)?;
    let v = exact_oracle(&f)?;
    let out = OutputArgs {
        format: a.format,
        output: None,
        no_timing: false,
        jobs: None,
    };
    #[derive(Serialize)]
    struct OracleReport<'a> {
        family: &'a str,
        params: String,
        exact: f64,
    }
    let r = OracleReport {
        family: f.name(),
        params: f.params(),
        exact: v,
    };
    match a.format {
        Format::Json => emit_json(&out, &r),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout().lock());
            w.serialize(r)?;
            w.flush()?;
            Ok(())
        }
    }
}

fn table(a: TableArgs) -> Result<(), CliError> {
    const RECT_D: [f64; 8] = [0.4, 0.3, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005];
    let fams: Vec<Family> = match a.name {
        TableName::Square => (1..=9)
            .map(|k| Family::SquareInSquare { a: k as f64 / 10.0 })
            .collect(),
        TableName::Polygon => [3, 4, 5, 7, 9, 15, 30]
            .iter()
            .map(|&m| Family::PolygonInPolygon { m, q: 0.5 })
            .collect(),
        TableName::SegmentCircle => [
            (0.1, 1.2),
            (0.1, 2.2),
            (0.1, 5.2),
            (1.0, 2.1),
            (3.0, 4.1),
            (5.0, 6.1),
        ]
        .iter()
        .map(|&(r, a)| Family::SegmentCircle { r, a })
        .collect(),
        TableName::Strip => [0.1, 1.0, 3.0]
            .iter()
            .map(|&s| Family::StripSlit {
                a: [0.0, 0.0],
                b: [s, 0.0],
            })
            .collect(),
        TableName::RectPair => RECT_D.iter().map(|&d| Family::RectPair { d }).collect(),
        TableName::RectStrip => RECT_D.iter().map(|&d| Family::RectStrip { d }).collect(),
        TableName::RectHalfplaneVertical => RECT_D
            .iter()
            .map(|&d| Family::RectHalfplaneVertical { d })
            .collect(),
        TableName::RectHalfplaneHorizontal => RECT_D
            .iter()
            .map(|&d| Family::RectHalfplaneHorizontal { d })
            .collect(),
        TableName::TwoCircles => [2.5, 4.0, 6.0]
            .iter()
            .map(|&a| Family::TwoCircles { a, r: 1.0 })
            .collect(),
    };
    let jobs = fams
        .into_iter()
        .map(|f| {
            let o = family::options(&f, &a.solve)?;
            Ok((f, o))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let results: Vec<ringcap::Result<CapacityReport>> = pool(a.out.jobs)?.install(|| {
        jobs.par_iter()
            .map(|(f, o)| cap_family_with(f, o))
            .collect()
    });
    let mut reports = results
        .into_iter()
        .map(|r| r.map(CapacityReport::with_oracle))
        .collect::<Result<Vec<_>, _>>()?;
    emit_reports(&a.out, &mut reports, false)
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
    let result = match cli.command {
        Command::Cap(a) => cap(a),
        Command::Caph(a) => set_capacity(a, true),
        Command::Cape(a) => set_capacity(a, false),
        Command::Map(a) => map(a),
        Command::Contour(a) => contour(a),
        Command::Oracle(a) => oracle(a),
        Command::Table(a) => table(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ringcap: {e}");
            ExitCode::from(e.code())
        }
    }
}

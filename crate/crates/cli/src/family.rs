use crate::args::{FamilyName, Params, SolveArgs};
use crate::CliError;
use clap::ValueEnum;
use num_complex::Complex64 as C64;
use ringcap::boundary::{DomainSpec, MeshPolicy, RingDomain};
use ringcap::capacity::{cap_family_with, CapacityReport, Family};
use ringcap::slitmap::{strip_slit_preimage, PreimageOptions, SlitSpec};
use ringcap::{annq, Exec, SolveOptions};
use std::time::Instant;

fn need<T: Copy>(v: Option<T>, flag: &str, fam: FamilyName) -> Result<T, CliError> {
    v.ok_or_else(|| {
        let name = fam
            .to_possible_value()
            .map(|p| p.get_name().to_string())
            .unwrap_or_default();
        CliError::Usage(format!("{name} needs --{flag}"))
    })
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn build(name: FamilyName, p: &Params) -> Result<Family, CliError> {
    use FamilyName as N;
    let f = match name {
        N::TwoCircles => Family::TwoCircles {
            a: need(p.a, "a", name)?,
            r: p.r.unwrap_or(1.0),
        },
        N::ConfocalEllipses => Family::ConfocalEllipses {
            r1: need(p.r1, "r1", name)?,
            r2: need(p.r2, "r2", name)?,
        },
        N::SquareInSquare => Family::SquareInSquare {
            a: need(p.a, "a", name)?,
        },
        N::PolygonInPolygon => Family::PolygonInPolygon {
            m: need(p.m, "m", name)?,
            q: need(p.q, "q", name)?,
        },
        N::SegmentCircle => Family::SegmentCircle {
            r: need(p.r, "r", name)?,
            a: need(p.a, "a", name)?,
        },
        N::SegmentEllipse => Family::SegmentEllipse {
            c: need(p.c, "c", name)?,
            d: need(p.d, "d", name)?,
            r: need(p.r, "r", name)?,
        },
        N::SegmentPolygon => Family::SegmentPolygon {
            m: need(p.m, "m", name)?,
            a: need(p.a, "a", name)?,
            r: need(p.r, "r", name)?,
        },
        N::RectPair => Family::RectPair {
            d: need(p.d, "d", name)?,
        },
        N::RectHalfplaneVertical => Family::RectHalfplaneVertical {
            d: need(p.d, "d", name)?,
        },
        N::RectHalfplaneHorizontal => Family::RectHalfplaneHorizontal {
            d: need(p.d, "d", name)?,
        },
        N::RectStrip => Family::RectStrip {
            d: need(p.d, "d", name)?,
        },
        N::StripSlit => match (p.z1, p.z2, p.s) {
            (Some(a), Some(b), _) => Family::StripSlit {
                a: pair(a),
                b: pair(b),
            },
            (None, None, Some(s)) => Family::StripSlit {
                a: [0.0, 0.0],
                b: [s, 0.0],
            },
            _ => {
                return Err(CliError::Usage(
                    "strip-slit needs --z1 and --z2, or --s".into(),
                ))
            }
        },
        N::TwoSegments => Family::TwoSegments {
            c: need(p.c, "c", name)?,
            d: need(p.d, "d", name)?,
        },
        N::HalfplaneSlit => Family::HalfplaneSlit {
            s: need(p.s, "s", name)?,
            r: need(p.r, "r", name)?,
        },
        N::TwoSlits => Family::TwoSlits,
        N::Geometry => {
            let path = p
                .geometry
                .as_ref()
                .ok_or_else(|| CliError::Usage("geometry needs --geometry FILE".into()))?;
            let text = std::fs::read_to_string(path)?;
            let domain: DomainSpec = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            Family::Geometry { domain }
        }
    };
    Ok(f)
}

/// Returns `p` with one scalar parameter replaced.
pub fn with_param(p: &Params, key: &str, value: f64) -> Result<Params, CliError> {
    let mut p = p.clone();
    match key {
        "a" => p.a = Some(value),
        "r" => p.r = Some(value),
        "r1" => p.r1 = Some(value),
        "r2" => p.r2 = Some(value),
        "q" => p.q = Some(value),
        "c" => p.c = Some(value),
        "d" => p.d = Some(value),
        "s" => p.s = Some(value),
        "m" if value >= 0.0 && value.fract() == 0.0 => p.m = Some(value as usize),
        _ => return Err(CliError::Usage(format!("cannot sweep `{key}` to {value}"))),
    }
    Ok(p)
}

/// Parses `KEY=V1,V2,...`.
pub fn parse_sweep(s: &str) -> Result<(String, Vec<f64>), CliError> {
    let (k, vals) = s
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("sweep `{s}` is not KEY=V1,V2,...")))?;
    let vals = vals
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(format!("sweep `{s}`: {e}")))?;
    Ok((k.trim().to_string(), vals))
}

/// Solver settings: the family defaults overridden by the flags.
pub fn options(f: &Family, s: &SolveArgs) -> Result<SolveOptions, CliError> {
    let mut o = f.default_options();
    if let Some(n) = s.n {
        if n % 2 != 0 || n == 0 {
            return Err(CliError::Usage(format!(
                "--n {n} must be even and positive"
            )));
        }
        o.n = n;
    }
    if !(s.tol > 0.0 && s.tol <= 1e-6) {
        return Err(CliError::Usage(format!(
            "--tol {} must lie in (0, 1e-6]",
            s.tol
        )));
    }
    o.tol = s.tol;
    o.maxit = s.maxit;
    if let Some(p) = s.grading {
        o.mesh = MeshPolicy::Auto { p };
    }
    if s.sequential {
        o.exec = Exec::Sequential;
    }
    Ok(o)
}

/// The ring domain that is actually solved.
pub fn ring(f: &Family, opts: &SolveOptions) -> ringcap::Result<RingDomain> {
    match f {
        Family::StripSlit { a, b } => {
            let slit = SlitSpec::new(C64::new(a[0], a[1]), C64::new(b[0], b[1]))?;
            let (d, _, _) = strip_slit_preimage(&slit, opts, &PreimageOptions::default())
                .map_err(|e| e.error)?;
            Ok(d)
        }
        _ => f.domain(),
    }
}

/// Capacity report, with the geometry scaled by `scale` first.
pub fn compute(f: &Family, opts: &SolveOptions, scale: f64) -> ringcap::Result<CapacityReport> {
    if scale == 1.0 {
        return cap_family_with(f, opts);
    }
    let start = Instant::now();
    let d = ring(f, opts)?.similarity(C64::new(scale, 0.0), C64::new(0.0, 0.0))?;
    let map = annq(&d, opts)?;
    Ok(CapacityReport {
        family: f.clone(),
        value: map.capacity,
        q: map.q,
        n: opts.n,
        iterations: map.solution.iterations,
        residual: map.solution.residual,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
        exact: None,
        rel_error: None,
    })
}

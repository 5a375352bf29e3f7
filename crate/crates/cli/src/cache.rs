//! Append-only CSV cache keyed by a SHA-256 of the family, `n` and `tol`.

use crate::CliError;
use ringcap::capacity::{CapacityReport, Family};
use ringcap::SolveOptions;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs::OpenOptions;
use std::path::Path;

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    family: String,
    n: usize,
    tol: f64,
    value: f64,
    q: f64,
    iterations: usize,
    residual: f64,
    runtime_ms: f64,
    spec: String,
}

/// Cache key. Mesh policy and scale are part of it too, since they change the result.
pub fn key(f: &Family, opts: &SolveOptions, scale: f64) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_string(f).unwrap_or_default());
    h.update(format!(
        "|n={}|tol={:e}|mesh={:?}|scale={:e}",
        opts.n, opts.tol, opts.mesh, scale
    ));
    hex::encode(h.finalize())
}

pub fn lookup(path: &Path, key: &str) -> Result<Option<CapacityReport>, CliError> {
    if !path.exists() {
        return Ok(None);
    }
    let mut rd = csv::Reader::from_path(path)?;
    for row in rd.deserialize::<Entry>() {
        let e = row?;
        if e.key == key {
            let family: Family = serde_json::from_str(&e.spec)
                .map_err(|err| CliError::Usage(format!("cache row {}: {err}", e.key)))?;
            return Ok(Some(CapacityReport {
                family,
                value: e.value,
                q: e.q,
                n: e.n,
                iterations: e.iterations,
                residual: e.residual,
                runtime_ms: e.runtime_ms,
                exact: None,
                rel_error: None,
            }));
        }
    }
    Ok(None)
}

pub fn append(path: &Path, key: &str, r: &CapacityReport, tol: f64) -> Result<(), CliError> {
    let fresh = std::fs::metadata(path)
        .map(|m| m.len() == 0)
        .unwrap_or(true);
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(fresh)
        .from_writer(file);
    w.serialize(Entry {
        key: key.to_string(),
        family: r.family.name().to_string(),
        n: r.n,
        tol,
        value: r.value,
        q: r.q,
        iterations: r.iterations,
        residual: r.residual,
        runtime_ms: r.runtime_ms,
        spec: serde_json::to_string(&r.family).unwrap_or_default(),
    })?;
    w.flush()?;
    Ok(())
}

//! Resolution of function specs: a registry name, a CSV path, or `-` for stdin.

use std::fs::File;
use std::io::{self, Read};
use std::path::Path;

use hardylab_core::circle_grid::{BoundarySignal, CircleGrid};
use hardylab_core::hardy::{analytic_projection, AnalyticRep, DEFAULT_LEAK_TOL};
use hardylab_core::{registry, LabError, Result};

pub fn is_registered(spec: &str) -> bool {
    registry::lookup(spec).is_ok()
}

fn open(spec: &str) -> Result<Box<dyn Read>> {
    if spec == "-" {
        return Ok(Box::new(io::stdin()));
    }
    let path = Path::new(spec);
    if !path.exists() {
        let msg = format!("{spec} is neither a registered function nor a file");
        return Err(io::Error::new(io::ErrorKind::NotFound, msg).into());
    }
    Ok(Box::new(File::open(path)?))
}

/// Boundary samples for `spec`; files carry their own grid.
pub fn boundary(spec: &str, grid: CircleGrid) -> Result<BoundarySignal> {
    if is_registered(spec) {
        return registry::boundary(spec, grid);
    }
    BoundarySignal::read_csv(open(spec)?)
}

pub fn boundaries(specs: &[String], grid: CircleGrid) -> Result<Vec<BoundarySignal>> {
    if specs.is_empty() {
        return Err(LabError::BadParameter("no function given".into()));
    }
    specs.iter().map(|s| boundary(s, grid)).collect()
}

/// Taylor data for `spec` with at least `len` coefficients where available.
/// JSON files are read as coefficient lists; CSV files are projected.
pub fn analytic(spec: &str, len: usize, grid: CircleGrid) -> Result<AnalyticRep> {
    if is_registered(spec) {
        return registry::taylor(spec, len, grid);
    }
    if spec.ends_with(".json") {
        let mut text = String::new();
        open(spec)?.read_to_string(&mut text)?;
        return AnalyticRep::from_json(&text);
    }
    analytic_projection(&BoundarySignal::read_csv(open(spec)?)?, DEFAULT_LEAK_TOL)
}

//! Fiber-growth diagnostic for a body and its augmentation.

use std::path::PathBuf;

use intvol::bodies::{load_body, VPolytope};
use intvol::grassmann::{haar_sample, Subspace};
use intvol::metrics::fiber_profile;
use intvol::numerics::RngStream;

use super::RunOutput;
use crate::config::PlaneChoice;
use crate::error::{ExpError, ExpResult};
use crate::output::{num, CsvTable};

#[derive(Clone, Debug)]
pub struct FibersConfig {
    /// The augmented body `K⁺`.
    pub body_a: PathBuf,
    /// The base body `K ⊆ K⁺`.
    pub body_b: PathBuf,
    pub plane: PlaneChoice,
    pub grid: usize,
    /// Body whose transverse shadow is the tube; defaults to the vertices of
    /// `body_a` that are not vertices of `body_b`.
    pub tube: Option<PathBuf>,
    /// Needle axis; defaults to `e1`.
    pub axis: Option<Vec<f64>>,
}

/// Vertices of `a` absent from `b`, or `b` itself when there are none.
pub fn added_vertices(a: &VPolytope<f64>, b: &VPolytope<f64>) -> ExpResult<VPolytope<f64>> {
    let extra: Vec<Vec<f64>> = a.vertices().filter(|v| !b.vertices().any(|w| w == *v)).map(|v| v.to_vec()).collect();
    if extra.is_empty() {
        Ok(b.clone())
    } else {
        Ok(VPolytope::new(a.ambient_dim(), &extra)?)
    }
}

pub fn run_fibers(cfg: &FibersConfig) -> ExpResult<RunOutput> {
    let a: VPolytope<f64> = load_body(&cfg.body_a)?;
    let b: VPolytope<f64> = load_body(&cfg.body_b)?;
    let tube = match &cfg.tube {
        Some(p) => load_body(p)?,
        None => added_vertices(&a, &b)?,
    };
    fibers_for(&a, &b, &tube, cfg.plane, cfg.grid, cfg.axis.clone())
}

pub fn fibers_for(
    a: &VPolytope<f64>,
    b: &VPolytope<f64>,
    tube: &VPolytope<f64>,
    plane: PlaneChoice,
    grid: usize,
    axis: Option<Vec<f64>>,
) -> ExpResult<RunOutput> {
    let d = a.ambient_dim();
    if d < 2 {
        return Err(ExpError::config("fibers needs bodies of dimension at least 2"));
    }
    if grid == 0 {
        return Err(ExpError::config("grid must be positive"));
    }
    let h: Subspace<f64> = match plane {
        PlaneChoice::E1E2 => Subspace::coordinate(d, &[0, 1])?,
        PlaneChoice::Random(seed) => haar_sample(d, 2, &mut RngStream::new(seed, 0))?,
    };
    let u = axis.unwrap_or_else(|| {
        let mut e = vec![0.0; d];
        e[0] = 1.0;
        e
    });
    if u.len() != d {
        return Err(ExpError::config(format!("axis has {} coordinates, bodies have {d}", u.len())));
    }
    let prof = fiber_profile(a, b, &h, &u, tube, grid)?;
    let norm_u = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let neg: Vec<f64> = u.iter().map(|x| -x).collect();
    let axial = (tube.support(&u)? + tube.support(&neg)?) / norm_u;
    let limit = axial * prof.ell_h / norm_u + 2e-9;

    let mut table = CsvTable::new(&["y", "plus_length", "base_length", "diff_length", "in_tube"]);
    for r in &prof.rows {
        table.push(vec![
            num(r.y[0]),
            num(r.plus_length),
            num(r.base_length),
            num(r.diff_length),
            if r.in_tube { "yes" } else { "no" }.into(),
        ]);
    }
    table.note(format!("plane={plane:?} grid={grid} ell_H={}", num(prof.ell_h)));
    table.note(format!("diff_measure={}", num(prof.diff_measure)));
    table.note(format!("tube_measure={}", num(prof.tube_measure)));
    table.note(format!("out_of_tube_measure={}", num(prof.out_of_tube_measure)));
    table.note(format!("diff_mass={}", num(prof.diff_mass)));
    table.note(format!("out_of_tube_mass={}", num(prof.out_of_tube_mass)));
    table.note(format!("max_diff_length={}", num(prof.max_diff_length)));
    table.note(format!("length_limit={} (tube axial width times ell_H)", num(limit)));
    let failures = prof
        .rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.diff_length > limit)
        .map(|(i, r)| format!("fibers row {i} (y={}): diff_length {} exceeds {}", r.y[0], r.diff_length, limit))
        .collect();
    Ok(RunOutput { table, failures })
}

//! Fibers of projected hulls along the projected axis `u_H`.
//!
//! For each transverse point `y ∈ E_H` the profile compares the chord of
//! `P_H K⁺` through `y` in direction `u_H` with that of `P_H K`, and records
//! whether `y` lies in the transverse shadow of a reference body (the
//! needle, whose shadow under `π_H ∘ P_H` is the tube cross-section).

use crate::bodies::{hull_2d, line_fiber, membership, polygon_chord, Interval, VPolytope, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::grassmann::{axis_split, AxisSplit, Subspace};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct FiberRow<T> {
    /// Transverse coordinates in the basis of `E_H`.
    pub y: Vec<T>,
    pub plus_length: T,
    pub base_length: T,
    pub diff_length: T,
    pub in_tube: bool,
}

#[derive(Clone, Debug)]
pub struct FiberProfile<T> {
    pub rows: Vec<FiberRow<T>>,
    pub ell_h: T,
    /// Transverse measure of one grid cell.
    pub cell_measure: T,
    /// Transverse measure of the cells whose fiber grows.
    pub diff_measure: T,
    /// Transverse measure of the tube shadow (cell count times cell measure).
    pub tube_measure: T,
    /// Part of `diff_measure` outside the tube.
    pub out_of_tube_measure: T,
    /// `∫ diff_length dy`.
    pub diff_mass: T,
    /// `∫ diff_length dy` over cells outside the tube.
    pub out_of_tube_mass: T,
    pub max_diff_length: T,
}

enum Chords<T> {
    Planar(Vec<[T; 2]>),
    General(VPolytope<T>),
}

impl<T: Real> Chords<T> {
    fn new(projected: VPolytope<T>) -> Self {
        if projected.ambient_dim() == 2 {
            let pts: Vec<[T; 2]> = projected.vertices().map(|v| [v[0], v[1]]).collect();
            let ring = hull_2d(&pts);
            if ring.len() >= 3 {
                return Chords::Planar(ring);
            }
        }
        Chords::General(projected)
    }

    fn chord(&self, base: &[T], dir: &[T]) -> Result<Interval<T>> {
        match self {
            Chords::Planar(ring) => Ok(polygon_chord(ring, [base[0], base[1]], [dir[0], dir[1]])),
            Chords::General(body) => line_fiber(body, base, dir, T::lit(DEFAULT_TOL)),
        }
    }
}

fn transverse_body<T: Real>(projected: &VPolytope<T>, split: &AxisSplit<T>) -> Result<VPolytope<T>> {
    let coords: Vec<T> = projected.vertices().flat_map(|v| split.transverse_coords(v)).collect();
    VPolytope::from_flat(split.transverse.cols(), coords)
}

/// Tabulates fiber growth on a cell-centred grid with `grid_n` points per
/// transverse axis over the `E_H` bounding box of `P_H K⁺`.
pub fn fiber_profile<T: Real>(
    k_plus: &VPolytope<T>,
    k: &VPolytope<T>,
    h: &Subspace<T>,
    u: &[T],
    tube: &VPolytope<T>,
    grid_n: usize,
) -> Result<FiberProfile<T>> {
    if grid_n == 0 {
        return Err(Error::domain("fiber_profile needs grid_n >= 1"));
    }
    let tol = T::lit(DEFAULT_TOL);
    for v in k.vertices() {
        if !membership(v, k_plus, tol)? {
            return Err(Error::InvalidBody("the base body is not contained in the augmented body".into()));
        }
    }
    let split = axis_split(h, u)?;
    let plus_proj = h.project_body(k_plus)?;
    let base_proj = h.project_body(k)?;
    let tube_shadow = transverse_body(&h.project_body(tube)?, &split)?;
    let shadow_plus = transverse_body(&plus_proj, &split)?;
    let (lo, hi) = shadow_plus.bounding_box();
    let m = lo.len();
    let step: Vec<T> = (0..m).map(|a| (hi[a] - lo[a]) / T::from_usize_lossy(grid_n)).collect();
    let cell_measure = step.iter().fold(T::one(), |acc, &s| acc * s);

    let plus = Chords::new(plus_proj);
    let base = Chords::new(base_proj);
    let diff_tol = T::lit(2.0) * tol;

    let total = grid_n.checked_pow(m as u32).ok_or_else(|| Error::domain("fiber grid too large"))?;
    let mut rows = Vec::with_capacity(total);
    let mut idx = vec![0usize; m];
    for _ in 0..total {
        let y: Vec<T> = (0..m)
            .map(|a| lo[a] + step[a] * (T::from_usize_lossy(idx[a]) + T::lit(0.5)))
            .collect();
        let origin = split.compose(&y, T::zero());
        let plus_length = plus.chord(&origin, &split.axis)?.length();
        let base_length = base.chord(&origin, &split.axis)?.length();
        let in_tube = membership(&y, &tube_shadow, tol)?;
        rows.push(FiberRow { y, plus_length, base_length, diff_length: plus_length - base_length, in_tube });
        for a in (0..m).rev() {
            idx[a] += 1;
            if idx[a] < grid_n {
                break;
            }
            idx[a] = 0;
        }
    }

    let mut profile = FiberProfile {
        rows: Vec::new(),
        ell_h: split.ell,
        cell_measure,
        diff_measure: T::zero(),
        tube_measure: T::zero(),
        out_of_tube_measure: T::zero(),
        diff_mass: T::zero(),
        out_of_tube_mass: T::zero(),
        max_diff_length: T::zero(),
    };
    for r in &rows {
        if r.in_tube {
            profile.tube_measure = profile.tube_measure + cell_measure;
        }
        profile.max_diff_length = profile.max_diff_length.max(r.diff_length);
        if r.diff_length > diff_tol {
            profile.diff_measure = profile.diff_measure + cell_measure;
            profile.diff_mass = profile.diff_mass + r.diff_length * cell_measure;
            if !r.in_tube {
                profile.out_of_tube_measure = profile.out_of_tube_measure + cell_measure;
                profile.out_of_tube_mass = profile.out_of_tube_mass + r.diff_length * cell_measure;
            }
        }
    }
    profile.rows = rows;
    Ok(profile)
}

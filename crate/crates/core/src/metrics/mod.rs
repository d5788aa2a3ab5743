//! Projection-based estimators: `δ_j`, intrinsic volumes via Kubota's
//! formula, symmetric-difference volumes and the Hausdorff distance.
//!
//! Subspace sample `i` draws its Haar basis from stream `2i` and its inner
//! Monte Carlo points from stream `2i + 1`, so every estimate is a pure
//! function of the plan regardless of how rayon schedules the work.

mod profile;

pub use profile::{fiber_profile, FiberProfile, FiberRow};

use rayon::prelude::*;

use crate::bodies::{hull_2d, membership, point_in_polygon, polygon_area, polygon_clip, VPolytope, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::grassmann::{haar_sample, Subspace};
use crate::numerics::{flag_coefficient, RngStream};
use crate::scalar::Real;

/// How inner `j`-volumes are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// Exact for `j ≤ 2`, Monte Carlo above.
    #[default]
    Auto,
    MonteCarlo,
    /// Exact only; `j ≥ 3` is rejected.
    Exact,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Mode::Auto),
            "mc" | "monte_carlo" => Ok(Mode::MonteCarlo),
            "exact" => Ok(Mode::Exact),
            other => Err(Error::domain(format!("unknown sampling mode '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplingPlan {
    pub n_subspaces: usize,
    pub n_points: usize,
    pub seed: u64,
    pub mode: Mode,
    /// Keep the per-subspace values `f(H)` in the estimate.
    pub keep_per_subspace: bool,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        Self { n_subspaces: 2000, n_points: 2000, seed: 0, mode: Mode::Auto, keep_per_subspace: false }
    }
}

impl SamplingPlan {
    pub fn new(n_subspaces: usize, n_points: usize, seed: u64, mode: Mode) -> Self {
        Self { n_subspaces, n_points, seed, mode, keep_per_subspace: false }
    }

    pub fn keep_per_subspace(mut self, keep: bool) -> Self {
        self.keep_per_subspace = keep;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_subspaces == 0 || self.n_points == 0 {
            return Err(Error::domain("sampling plan needs n_subspaces >= 1 and n_points >= 1"));
        }
        Ok(())
    }

    fn uses_exact(&self, j: usize) -> Result<bool> {
        match self.mode {
            Mode::Auto => Ok(j <= 2),
            Mode::MonteCarlo => Ok(false),
            Mode::Exact if j <= 2 => Ok(true),
            Mode::Exact => Err(Error::UnsupportedMode(j)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricEstimate<T> {
    pub value: T,
    pub std_error: T,
    pub n_subspaces: usize,
    pub n_points_per_subspace: usize,
    pub exact: bool,
    /// `(sample index, f(H))` before flag scaling.
    pub per_subspace: Option<Vec<(usize, T)>>,
}

impl<T: Real> MetricEstimate<T> {
    fn exact(value: T) -> Self {
        Self {
            value,
            std_error: T::zero(),
            n_subspaces: 0,
            n_points_per_subspace: 0,
            exact: true,
            per_subspace: None,
        }
    }

    /// `std_error / value`, or 0 when both vanish.
    pub fn relative_error(&self) -> T {
        if self.std_error == T::zero() {
            T::zero()
        } else {
            self.std_error / self.value.abs()
        }
    }
}

/// One inner volume with its Monte Carlo standard error (0 when exact).
#[derive(Clone, Copy, Debug)]
struct Inner<T> {
    value: T,
    se: T,
}

/// Membership test for a body in `R^j`, using closed forms for `j ≤ 2`
/// and the min-norm-point oracle otherwise. Points within `tol` of the body
/// count as members.
pub enum MembershipOracle<'a, T> {
    Interval(T, T),
    Ring(Vec<[T; 2]>),
    Hull(&'a VPolytope<T>),
}

impl<'a, T: Real> MembershipOracle<'a, T> {
    pub fn new(body: &'a VPolytope<T>) -> Self {
        match body.ambient_dim() {
            1 => {
                let (lo, hi) = extent_1d(body);
                MembershipOracle::Interval(lo, hi)
            }
            2 => {
                let ring = ring_of(body);
                if ring.len() >= 3 {
                    MembershipOracle::Ring(ring)
                } else {
                    MembershipOracle::Hull(body)
                }
            }
            _ => MembershipOracle::Hull(body),
        }
    }

    pub fn contains(&self, p: &[T], tol: T) -> Result<bool> {
        match self {
            MembershipOracle::Interval(lo, hi) => Ok(*lo - tol <= p[0] && p[0] <= *hi + tol),
            MembershipOracle::Ring(ring) => Ok(point_in_polygon(ring, [p[0], p[1]], tol)),
            MembershipOracle::Hull(body) => membership(p, body, tol),
        }
    }
}

fn ring_of<T: Real>(body: &VPolytope<T>) -> Vec<[T; 2]> {
    let pts: Vec<[T; 2]> = body.vertices().map(|v| [v[0], v[1]]).collect();
    hull_2d(&pts)
}

fn extent_1d<T: Real>(body: &VPolytope<T>) -> (T, T) {
    body.vertices().fold((T::infinity(), T::neg_infinity()), |(lo, hi), v| (lo.min(v[0]), hi.max(v[0])))
}

fn exact_symdiff<T: Real>(a: Option<&VPolytope<T>>, b: Option<&VPolytope<T>>, j: usize) -> T {
    let value = match j {
        1 => {
            let len = |x: Option<&VPolytope<T>>| x.map(extent_1d).map_or(T::zero(), |(lo, hi)| hi - lo);
            let overlap = match (a, b) {
                (Some(a), Some(b)) => {
                    let ((alo, ahi), (blo, bhi)) = (extent_1d(a), extent_1d(b));
                    (ahi.min(bhi) - alo.max(blo)).max(T::zero())
                }
                _ => T::zero(),
            };
            len(a) + len(b) - T::lit(2.0) * overlap
        }
        _ => {
            let ra = a.map(ring_of);
            let rb = b.map(ring_of);
            let area = |r: &Option<Vec<[T; 2]>>| r.as_deref().map_or(T::zero(), polygon_area);
            let overlap = match (a, b, &ra, &rb) {
                (Some(a), Some(b), Some(ra), Some(rb)) => {
                    // Clip in a fixed operand order so the estimate is symmetric bit for bit.
                    let clipped = if a.canonical_cmp(b).is_le() { polygon_clip(ra, rb) } else { polygon_clip(rb, ra) };
                    polygon_area(&clipped)
                }
                _ => T::zero(),
            };
            area(&ra) + area(&rb) - T::lit(2.0) * overlap
        }
    };
    value.max(T::zero())
}

fn mc_symdiff<T: Real>(
    a: Option<&VPolytope<T>>,
    b: Option<&VPolytope<T>>,
    j: usize,
    n_points: usize,
    rng: &mut RngStream,
) -> Result<Inner<T>> {
    let mut lo = vec![T::infinity(); j];
    let mut hi = vec![T::neg_infinity(); j];
    for body in [a, b].into_iter().flatten() {
        let (blo, bhi) = body.bounding_box();
        for k in 0..j {
            lo[k] = lo[k].min(blo[k]);
            hi[k] = hi[k].max(bhi[k]);
        }
    }
    if (0..j).any(|k| !(hi[k] > lo[k])) {
        return Ok(Inner { value: T::zero(), se: T::zero() });
    }
    let pad = T::lit(1e-9);
    let side: Vec<T> = (0..j).map(|k| hi[k] - lo[k] + pad + pad).collect();
    let box_volume = side.iter().fold(T::one(), |acc, &s| acc * s);
    let tol = T::lit(DEFAULT_TOL);
    let oa = a.map(MembershipOracle::new);
    let ob = b.map(MembershipOracle::new);
    let inside = |o: &Option<MembershipOracle<'_, T>>, p: &[T]| -> Result<bool> {
        match o {
            Some(o) => o.contains(p, tol),
            None => Ok(false),
        }
    };
    let mut hits = 0usize;
    let mut p = vec![T::zero(); j];
    for _ in 0..n_points {
        for k in 0..j {
            p[k] = lo[k] - pad + side[k] * T::lit(rng.uniform());
        }
        if inside(&oa, &p)? != inside(&ob, &p)? {
            hits += 1;
        }
    }
    let n = T::from_usize_lossy(n_points);
    let frac = T::from_usize_lossy(hits) / n;
    Ok(Inner { value: box_volume * frac, se: box_volume * (frac * (T::one() - frac) / n).sqrt() })
}

fn inner_symdiff<T: Real>(
    a: Option<&VPolytope<T>>,
    b: Option<&VPolytope<T>>,
    j: usize,
    plan: &SamplingPlan,
    rng: &mut RngStream,
) -> Result<Inner<T>> {
    if plan.uses_exact(j)? {
        Ok(Inner { value: exact_symdiff(a, b, j), se: T::zero() })
    } else {
        mc_symdiff(a, b, j, plan.n_points, rng)
    }
}

fn single<T: Real>(inner: Inner<T>, exact: bool, n_points: usize) -> MetricEstimate<T> {
    MetricEstimate {
        value: inner.value,
        std_error: inner.se,
        n_subspaces: 1,
        n_points_per_subspace: if exact { 0 } else { n_points },
        exact,
        per_subspace: None,
    }
}

/// `vol_j(P_H K)` in the coordinates of `H`.
pub fn projected_volume<T: Real>(body: &VPolytope<T>, h: &Subspace<T>, plan: &SamplingPlan) -> Result<MetricEstimate<T>> {
    plan.validate()?;
    let projected = h.project_body(body)?;
    let exact = plan.uses_exact(h.dim())?;
    let inner = inner_symdiff(Some(&projected), None, h.dim(), plan, &mut RngStream::new(plan.seed, 1))?;
    Ok(single(inner, exact, plan.n_points))
}

/// `vol_j(A △ B)` for two bodies already living in `R^j`.
pub fn symdiff_volume<T: Real>(a: &VPolytope<T>, b: &VPolytope<T>, plan: &SamplingPlan) -> Result<MetricEstimate<T>> {
    plan.validate()?;
    let j = a.ambient_dim();
    b.check_dim(j)?;
    if a == b {
        return Ok(MetricEstimate::exact(T::zero()));
    }
    let exact = plan.uses_exact(j)?;
    let inner = inner_symdiff(Some(a), Some(b), j, plan, &mut RngStream::new(plan.seed, 1))?;
    Ok(single(inner, exact, plan.n_points))
}

/// The intrinsic volume metric `δ_j(K, L)`; `None` stands for the empty set.
pub fn delta_j<T: Real>(
    k: Option<&VPolytope<T>>,
    l: Option<&VPolytope<T>>,
    j: usize,
    plan: &SamplingPlan,
) -> Result<MetricEstimate<T>> {
    plan.validate()?;
    let d = match (k, l) {
        (None, None) => return Ok(MetricEstimate::exact(T::zero())),
        (Some(k), Some(l)) => {
            l.check_dim(k.ambient_dim())?;
            k.ambient_dim()
        }
        (Some(b), None) | (None, Some(b)) => b.ambient_dim(),
    };
    let flag: T = flag_coefficient(d, j)?;
    plan.uses_exact(j)?;
    if let (Some(k), Some(l)) = (k, l) {
        if k == l {
            return Ok(MetricEstimate::exact(T::zero()));
        }
    }

    if j == d {
        let exact = plan.uses_exact(j)?;
        let inner = inner_symdiff(k, l, j, plan, &mut RngStream::new(plan.seed, 1))?;
        let mut est = single(inner, exact, plan.n_points);
        est.value = flag * est.value;
        est.std_error = flag * est.std_error;
        if plan.keep_per_subspace {
            est.per_subspace = Some(vec![(0, inner.value)]);
        }
        return Ok(est);
    }

    let results: Vec<Inner<T>> = (0..plan.n_subspaces)
        .into_par_iter()
        .map(|i| {
            let i = i as u64;
            let h = haar_sample::<T>(d, j, &mut RngStream::new(plan.seed, 2 * i))?;
            let pk = k.map(|b| h.project_body(b)).transpose()?;
            let pl = l.map(|b| h.project_body(b)).transpose()?;
            inner_symdiff(pk.as_ref(), pl.as_ref(), j, plan, &mut RngStream::new(plan.seed, 2 * i + 1))
        })
        .collect::<Result<_>>()?;

    let n = T::from_usize_lossy(results.len());
    let mean = results.iter().map(|r| r.value).fold(T::zero(), |a, b| a + b) / n;
    let std_error = if results.len() > 1 {
        let ss = results.iter().map(|r| (r.value - mean).powi(2)).fold(T::zero(), |a, b| a + b);
        (ss / (n - T::one())).sqrt() / n.sqrt()
    } else {
        results[0].se
    };
    let exact_inner = plan.uses_exact(j)?;
    Ok(MetricEstimate {
        value: flag * mean,
        std_error: flag * std_error,
        n_subspaces: results.len(),
        n_points_per_subspace: if exact_inner { 0 } else { plan.n_points },
        exact: false,
        per_subspace: plan
            .keep_per_subspace
            .then(|| results.iter().enumerate().map(|(i, r)| (i, r.value)).collect()),
    })
}

/// `V_j(K)` by Kubota's formula; the same computation as `δ_j(K, ∅)`.
pub fn intrinsic_volume<T: Real>(body: &VPolytope<T>, j: usize, plan: &SamplingPlan) -> Result<MetricEstimate<T>> {
    delta_j(Some(body), None, j, plan)
}

/// Hausdorff distance of the hulls, from vertex-to-hull distances.
pub fn hausdorff<T: Real>(k: &VPolytope<T>, l: &VPolytope<T>) -> Result<T> {
    l.check_dim(k.ambient_dim())?;
    let tol = T::lit(DEFAULT_TOL);
    let one_way = |from: &VPolytope<T>, to: &VPolytope<T>| -> Result<T> {
        from.vertices()
            .map(|v| crate::bodies::distance_to_hull(v, to, tol))
            .try_fold(T::zero(), |acc, d| Ok(acc.max(d?)))
    };
    Ok(one_way(k, l)?.max(one_way(l, k)?))
}

use super::{membership, VPolytope};
use crate::error::{Error, Result};
use crate::scalar::{dot, Real};

/// Closed interval of line parameters, possibly empty.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
    pub empty: bool,
}

impl<T: Real> Interval<T> {
    pub fn new(lo: T, hi: T) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi, empty: false }
    }

    pub fn empty() -> Self {
        Self { lo: T::zero(), hi: T::zero(), empty: true }
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn length(&self) -> T {
        if self.empty {
            T::zero()
        } else {
            self.hi - self.lo
        }
    }

    pub fn contains(&self, t: T) -> bool {
        !self.empty && self.lo <= t && t <= self.hi
    }
}

const MAX_SEARCH_STEPS: usize = 200;

/// The fiber `{t : base + t·dir ∈ conv(K)}`.
///
/// A member parameter is located by golden-section search on the convex
/// function `t ↦ dist(base + t·dir, K)` over the support bracket of `K`
/// along `dir`; both endpoints are then bisected against the membership
/// oracle until the bracket is narrower than `tol·(1 + ‖dir‖)`.
pub fn line_fiber<T: Real>(body: &VPolytope<T>, base: &[T], dir: &[T], tol: T) -> Result<Interval<T>> {
    body.check_dim(base.len())?;
    body.check_dim(dir.len())?;
    let dd = dot(dir, dir);
    if !(dd > T::zero()) {
        return Err(Error::domain("line_fiber needs a non-zero direction"));
    }
    let point = |t: T| -> Vec<T> { base.iter().zip(dir).map(|(&b, &d)| b + t * d).collect() };
    let bd = dot(base, dir);
    let neg: Vec<T> = dir.iter().map(|&x| -x).collect();
    let t_min = (-body.support(&neg)? - bd) / dd;
    let t_max = (body.support(dir)? - bd) / dd;
    let step_tol = tol * (T::one() + dd.sqrt());
    let (t_min, t_max) = (t_min - step_tol, t_max + step_tol);

    let inside = |t: T| membership(&point(t), body, tol);
    let dist = |t: T| super::distance_to_hull(&point(t), body, tol);

    // Golden-section search for a member.
    let inv_phi = T::lit(0.618_033_988_749_894_9);
    let (mut a, mut b) = (t_min, t_max);
    let mut member = None;
    let mut c = b - inv_phi * (b - a);
    let mut e = a + inv_phi * (b - a);
    let (mut fc, mut fe) = (dist(c)?, dist(e)?);
    for _ in 0..MAX_SEARCH_STEPS {
        if fc <= tol {
            member = Some(c);
            break;
        }
        if fe <= tol {
            member = Some(e);
            break;
        }
        if b - a <= step_tol {
            break;
        }
        if fc < fe {
            b = e;
            e = c;
            fe = fc;
            c = b - inv_phi * (b - a);
            fc = dist(c)?;
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + inv_phi * (b - a);
            fe = dist(e)?;
        }
    }
    let Some(t_in) = member else {
        return Ok(Interval::empty());
    };

    let endpoint = |outer: T| -> Result<T> {
        if inside(outer)? {
            return Ok(outer);
        }
        let (mut good, mut bad) = (t_in, outer);
        for _ in 0..MAX_SEARCH_STEPS {
            if (bad - good).abs() <= step_tol {
                break;
            }
            let mid = (good + bad) / T::lit(2.0);
            if inside(mid)? {
                good = mid;
            } else {
                bad = mid;
            }
        }
        Ok((good + bad) / T::lit(2.0))
    };
    let lo = endpoint(t_min)?;
    let hi = endpoint(t_max)?;
    Ok(Interval::new(lo.min(hi), hi.max(lo)))
}

//! Exact planar geometry: convex hull, shoelace area, convex clipping and
//! line chords. Rings are counter-clockwise vertex lists without repetition
//! of the first vertex.

use super::Interval;
use crate::scalar::Real;

#[inline]
fn cross<T: Real>(o: [T; 2], a: [T; 2], b: [T; 2]) -> T {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counter-clockwise convex hull (Andrew's monotone chain).
///
/// Collinear boundary points are dropped: a turn counts only when its cross
/// product, measured on inputs rescaled to the unit box, exceeds `1e-12`.
/// Coincident inputs yield a single vertex, collinear inputs a segment.
pub fn hull_2d<T: Real>(points: &[[T; 2]]) -> Vec<[T; 2]> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| {
        a[0].partial_cmp(&b[0])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a[1].partial_cmp(&b[1]).unwrap_or(std::cmp::Ordering::Equal))
    });
    pts.dedup();
    if pts.len() <= 1 {
        return pts;
    }
    let (mut lo, mut hi) = (pts[0], pts[0]);
    for p in &pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let scale = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let threshold = T::lit(1e-12) * scale * scale;

    let mut hull: Vec<[T; 2]> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[T; 2]>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= threshold
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() == 2 && hull[0] == hull[1] {
        hull.pop();
    }
    hull
}

/// Shoelace area of a ring; 0 for points and segments.
pub fn polygon_area<T: Real>(ring: &[[T; 2]]) -> T {
    if ring.len() < 3 {
        return T::zero();
    }
    let n = ring.len();
    let twice: T = (0..n)
        .map(|i| {
            let (a, b) = (ring[i], ring[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum();
    (twice / T::lit(2.0)).abs()
}

/// Intersection of two convex CCW rings by clipping `subject` against each
/// edge of `clip` (Sutherland–Hodgman). Degenerate rings give an empty result.
pub fn polygon_clip<T: Real>(subject: &[[T; 2]], clip: &[[T; 2]]) -> Vec<[T; 2]> {
    if subject.len() < 3 || clip.len() < 3 {
        return Vec::new();
    }
    let mut out = subject.to_vec();
    let m = clip.len();
    for i in 0..m {
        let (a, b) = (clip[i], clip[(i + 1) % m]);
        let input = std::mem::take(&mut out);
        let n = input.len();
        for k in 0..n {
            let (s, e) = (input[k], input[(k + 1) % n]);
            let (sc, ec) = (cross(a, b, s), cross(a, b, e));
            let (s_in, e_in) = (sc >= T::zero(), ec >= T::zero());
            if s_in != e_in {
                let t = sc / (sc - ec);
                out.push([s[0] + (e[0] - s[0]) * t, s[1] + (e[1] - s[1]) * t]);
            }
            if e_in {
                out.push(e);
            }
        }
        if out.len() < 3 {
            return Vec::new();
        }
    }
    out
}

/// `true` iff `p` is in the ring or within `tol` of one of its edge lines.
pub fn point_in_polygon<T: Real>(ring: &[[T; 2]], p: [T; 2], tol: T) -> bool {
    let n = ring.len();
    if n < 3 {
        return false;
    }
    (0..n).all(|i| {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        cross(a, b, p) >= -tol * len
    })
}

/// Parameter interval `{t : base + t·dir ∈ ring}` for a convex CCW ring with
/// at least three vertices (Cyrus–Beck). Returns an empty interval for
/// degenerate rings.
pub fn polygon_chord<T: Real>(ring: &[[T; 2]], base: [T; 2], dir: [T; 2]) -> Interval<T> {
    let n = ring.len();
    if n < 3 {
        return Interval::empty();
    }
    let (mut lo, mut hi) = (T::neg_infinity(), T::infinity());
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        let e = [b[0] - a[0], b[1] - a[1]];
        let num = e[0] * (base[1] - a[1]) - e[1] * (base[0] - a[0]);
        let den = e[0] * dir[1] - e[1] * dir[0];
        if den == T::zero() {
            if num < T::zero() {
                return Interval::empty();
            }
        } else if den > T::zero() {
            lo = lo.max(-num / den);
        } else {
            hi = hi.min(-num / den);
        }
    }
    if lo > hi {
        Interval::empty()
    } else {
        Interval::new(lo, hi)
    }
}

/// Area of `ring ∩ B(0, r)` for a convex CCW ring, by summing the signed
/// areas of `triangle(0, a, b) ∩ B(0, r)` over the edges.
pub fn polygon_disk_area<T: Real>(ring: &[[T; 2]], r: T) -> T {
    if ring.len() < 3 || !(r > T::zero()) {
        return T::zero();
    }
    let n = ring.len();
    let total: T = (0..n).map(|i| triangle_disk_area(ring[i], ring[(i + 1) % n], r)).sum();
    total.abs()
}

fn triangle_disk_area<T: Real>(a: [T; 2], b: [T; 2], r: T) -> T {
    let half = T::lit(0.5);
    let sector = |u: [T; 2], v: [T; 2]| -> T {
        let c = u[0] * v[1] - u[1] * v[0];
        let d = u[0] * v[0] + u[1] * v[1];
        half * r * r * c.atan2(d)
    };
    let tri = |u: [T; 2], v: [T; 2]| half * (u[0] * v[1] - u[1] * v[0]);
    let e = [b[0] - a[0], b[1] - a[1]];
    let qa = e[0] * e[0] + e[1] * e[1];
    if qa == T::zero() {
        return T::zero();
    }
    let qb = T::lit(2.0) * (a[0] * e[0] + a[1] * e[1]);
    let qc = a[0] * a[0] + a[1] * a[1] - r * r;
    let disc = qb * qb - T::lit(4.0) * qa * qc;
    if disc <= T::zero() {
        return sector(a, b);
    }
    let sq = disc.sqrt();
    let t1 = (-qb - sq) / (T::lit(2.0) * qa);
    let t2 = (-qb + sq) / (T::lit(2.0) * qa);
    if t2 <= T::zero() || t1 >= T::one() {
        return sector(a, b);
    }
    let at = |t: T| [a[0] + t * e[0], a[1] + t * e[1]];
    let p1 = if t1 > T::zero() { at(t1) } else { a };
    let p2 = if t2 < T::one() { at(t2) } else { b };
    let head = if t1 > T::zero() { sector(a, p1) } else { T::zero() };
    let tail = if t2 < T::one() { sector(p2, b) } else { T::zero() };
    head + tri(p1, p2) + tail
}

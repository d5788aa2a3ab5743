//! Wolfe's min-norm-point algorithm.
//!
//! Finds the point of `conv(p_1, …, p_n)` closest to the origin. Distances to
//! a body are obtained by shifting its vertices by the query point. The
//! active set `S` is kept affinely independent; its affine minimizer is
//! computed from a Gram–Schmidt factorization of the edge vectors
//! `p_s − p_{s0}`.

use super::VPolytope;
use crate::error::{Error, Result};
use crate::scalar::{dot, Real};

/// Default absolute tolerance for distances and membership.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct MinNormPoint<T> {
    /// Nearest point of the hull to the origin.
    pub point: Vec<T>,
    pub distance: T,
    /// Indices of the supporting vertices and their convex weights.
    pub support: Vec<(usize, T)>,
    pub iterations: usize,
}

enum Outcome<T> {
    Done(MinNormPoint<T>),
    Cycling { restart_from: usize },
}

/// Nearest point to the origin of the hull of `points` (row-major, `dim`
/// coordinates each). Stops once the duality gap certifies the distance to
/// within `tol`. At most `10·max(n, dim+1)` major iterations, with one restart
/// when the active set stops making progress.
pub fn min_norm_point<T: Real>(points: &[T], dim: usize, tol: T) -> Result<MinNormPoint<T>> {
    assert!(dim > 0 && !points.is_empty() && points.len() % dim == 0);
    let n = points.len() / dim;
    let max_iter = 10 * n.max(dim + 1);
    let start = (0..n)
        .min_by(|&a, &b| {
            let (pa, pb) = (&points[a * dim..(a + 1) * dim], &points[b * dim..(b + 1) * dim]);
            dot(pa, pa).partial_cmp(&dot(pb, pb)).unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap_or(0);
    match run(points, dim, tol, start, max_iter)? {
        Outcome::Done(r) => Ok(r),
        Outcome::Cycling { restart_from } => match run(points, dim, tol, restart_from, max_iter)? {
            Outcome::Done(r) => Ok(r),
            Outcome::Cycling { .. } => Err(Error::NonConvergence { iterations: max_iter }),
        },
    }
}

fn run<T: Real>(
    points: &[T],
    dim: usize,
    tol: T,
    start: usize,
    max_iter: usize,
) -> Result<Outcome<T>> {
    let n = points.len() / dim;
    let p = |i: usize| &points[i * dim..(i + 1) * dim];
    let max_norm = (0..n).map(|i| dot(p(i), p(i))).fold(T::zero(), T::max).sqrt();
    // Rounding in x is of order eps·M (M = largest vertex norm), so gaps
    // below c·eps·M² carry no information.
    let floor = T::lit(64.0) * T::epsilon() * max_norm * max_norm;

    let mut active: Vec<usize> = vec![start];
    let mut weights: Vec<T> = vec![T::one()];
    let mut x = p(start).to_vec();
    let mut last_norm2 = T::infinity();

    for iter in 0..max_iter {
        let xx = dot(&x, &x);
        let xn = xx.sqrt();
        let done = |x: Vec<T>, active: &[usize], weights: &[T]| {
            Outcome::Done(MinNormPoint {
                distance: xn,
                point: x,
                support: active.iter().copied().zip(weights.iter().copied()).collect(),
                iterations: iter,
            })
        };
        if xn <= tol {
            return Ok(done(x, &active, &weights));
        }
        // Vertex minimizing ⟨x, p_j⟩; the gap ⟨x, x − p_j⟩ bounds ‖x‖·(‖x‖ − dist).
        let (j, gap) = (0..n)
            .map(|j| {
                let g = x.iter().zip(p(j)).fold(T::zero(), |acc, (&xi, &pi)| acc + xi * (xi - pi));
                (j, g)
            })
            .fold((0, T::neg_infinity()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if gap <= (T::lit(0.1) * tol * xn).max(floor) {
            return Ok(done(x, &active, &weights));
        }
        if active.contains(&j) || xx >= last_norm2 {
            // No further progress is possible in floating point; accept the
            // point when the certificate still meets the caller's tolerance.
            if gap <= (tol * xn).max(T::lit(16.0) * floor) {
                return Ok(done(x, &active, &weights));
            }
            return Ok(Outcome::Cycling { restart_from: j });
        }
        last_norm2 = xx;
        active.push(j);
        weights.push(T::zero());

        // Minor cycles: move toward the affine minimizer of the active set,
        // dropping vertices whose weight reaches zero.
        loop {
            let Some((y, alpha)) = affine_minimizer(points, dim, &active) else {
                // New vertex lies numerically in aff(S): x is already optimal there.
                active.pop();
                weights.pop();
                return Ok(done(x, &active, &weights));
            };
            if alpha.iter().all(|&a| a > T::zero()) {
                x = y;
                weights = alpha;
                break;
            }
            let mut theta = T::one();
            for (&a, &w) in alpha.iter().zip(&weights) {
                if a <= T::zero() {
                    let denom = w - a;
                    let t = if denom > T::zero() { w / denom } else { T::zero() };
                    theta = theta.min(t);
                }
            }
            for (w, &a) in weights.iter_mut().zip(&alpha) {
                *w = theta * a + (T::one() - theta) * *w;
            }
            // Drop the blocking vertex and anything else at or below zero.
            let blocking = alpha
                .iter()
                .zip(&weights)
                .enumerate()
                .filter(|(_, (&a, _))| a <= T::zero())
                .min_by(|(_, (_, w1)), (_, (_, w2))| {
                    w1.partial_cmp(w2).unwrap_or(std::cmp::Ordering::Equal)
                })
                .map(|(i, _)| i)
                .expect("some weight is non-positive");
            let mut keep_active = Vec::with_capacity(active.len());
            let mut keep_weights = Vec::with_capacity(active.len());
            for (i, (&s, &w)) in active.iter().zip(&weights).enumerate() {
                if i != blocking && w > T::zero() {
                    keep_active.push(s);
                    keep_weights.push(w);
                }
            }
            if keep_active.is_empty() {
                keep_active.push(j);
                keep_weights.push(T::one());
            }
            let total: T = keep_weights.iter().copied().sum();
            keep_weights.iter_mut().for_each(|w| *w = *w / total);
            active = keep_active;
            weights = keep_weights;
            x = combination(points, dim, &active, &weights);
        }
    }
    Err(Error::NonConvergence { iterations: max_iter })
}

fn combination<T: Real>(points: &[T], dim: usize, active: &[usize], weights: &[T]) -> Vec<T> {
    let mut x = vec![T::zero(); dim];
    for (&s, &w) in active.iter().zip(weights) {
        for (xi, &pi) in x.iter_mut().zip(&points[s * dim..(s + 1) * dim]) {
            *xi = *xi + w * pi;
        }
    }
    x
}

/// Min-norm point of `aff{p_s : s ∈ active}` and its affine coordinates.
/// Returns `None` when the active set is numerically affinely dependent.
fn affine_minimizer<T: Real>(points: &[T], dim: usize, active: &[usize]) -> Option<(Vec<T>, Vec<T>)> {
    let p = |i: usize| &points[i * dim..(i + 1) * dim];
    let base = p(active[0]);
    let k = active.len() - 1;
    if k > dim {
        return None;
    }
    let mut q: Vec<Vec<T>> = Vec::with_capacity(k);
    // Upper-triangular R stored column-wise: r[c][r] for r ≤ c.
    let mut r: Vec<Vec<T>> = Vec::with_capacity(k);
    for &s in &active[1..] {
        let mut v: Vec<T> = p(s).iter().zip(base).map(|(&a, &b)| a - b).collect();
        let scale = dot(&v, &v).sqrt();
        let mut coeffs = vec![T::zero(); q.len()];
        for _ in 0..2 {
            for (c, qi) in coeffs.iter_mut().zip(&q) {
                let proj = dot(qi, &v);
                *c = *c + proj;
                for (vi, &qv) in v.iter_mut().zip(qi) {
                    *vi = *vi - proj * qv;
                }
            }
        }
        let res = dot(&v, &v).sqrt();
        if !(res > T::lit(1e-12) * scale) || res == T::zero() {
            return None;
        }
        v.iter_mut().for_each(|vi| *vi = *vi / res);
        coeffs.push(res);
        q.push(v);
        r.push(coeffs);
    }
    // y = base − Q Qᵀ base, β = −R⁻¹ Qᵀ base.
    let qtb: Vec<T> = q.iter().map(|qi| dot(qi, base)).collect();
    let mut y = base.to_vec();
    for (qi, &c) in q.iter().zip(&qtb) {
        for (yi, &qv) in y.iter_mut().zip(qi) {
            *yi = *yi - c * qv;
        }
    }
    let mut beta = vec![T::zero(); k];
    for row in (0..k).rev() {
        let mut acc = -qtb[row];
        for col in row + 1..k {
            acc = acc - r[col][row] * beta[col];
        }
        beta[row] = acc / r[row][row];
    }
    let mut alpha = Vec::with_capacity(k + 1);
    alpha.push(T::one() - beta.iter().copied().sum::<T>());
    alpha.extend(beta);
    Some((y, alpha))
}

/// Euclidean distance from `p` to `conv(K)`.
pub fn distance_to_hull<T: Real>(p: &[T], body: &VPolytope<T>, tol: T) -> Result<T> {
    body.check_dim(p.len())?;
    let shifted: Vec<T> = body
        .vertices()
        .flat_map(|v| v.iter().zip(p).map(|(&a, &b)| a - b))
        .collect();
    Ok(min_norm_point(&shifted, p.len(), tol)?.distance)
}

/// `true` iff `p` lies within `tol` of `conv(K)`.
pub fn membership<T: Real>(p: &[T], body: &VPolytope<T>, tol: T) -> Result<bool> {
    body.check_dim(p.len())?;
    // Cheap rejection against the vertex bounding box.
    for k in 0..p.len() {
        let (mut lo, mut hi) = (T::infinity(), T::neg_infinity());
        for v in body.vertices() {
            lo = lo.min(v[k]);
            hi = hi.max(v[k]);
        }
        if p[k] < lo - tol || p[k] > hi + tol {
            return Ok(false);
        }
    }
    Ok(distance_to_hull(p, body, tol)? <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;
    use proptest::prelude::*;

    const TOL: f64 = DEFAULT_TOL;

    fn square() -> VPolytope<f64> {
        VPolytope::unit_cube(2)
    }

    #[test]
    fn distance_examples() {
        assert!((distance_to_hull(&[2.0, 0.0], &square(), TOL).unwrap() - 1.0).abs() < 1e-12);
        assert!(distance_to_hull(&[0.3, 0.6], &square(), TOL).unwrap() <= TOL);
        assert!((distance_to_hull(&[2.0, 2.0], &square(), TOL).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert!((distance_to_hull(&[0.5, -3.0], &square(), TOL).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn membership_examples() {
        let sq = square();
        for v in sq.vertices() {
            assert!(membership(v, &sq, TOL).unwrap());
        }
        assert!(membership(&sq.centroid(), &sq, TOL).unwrap());
        assert!(!membership(&[1.5, 0.5], &sq, TOL).unwrap());
        assert!(membership(&[1.0, 0.5], &sq, TOL).unwrap());
    }

    #[test]
    fn distance_in_single_precision() {
        let sq = VPolytope::<f32>::unit_cube(2);
        let d = distance_to_hull(&[2.0f32, 2.0], &sq, 1e-5).unwrap();
        assert!((d - 2f32.sqrt()).abs() < 1e-5);
    }

    /// Brute-force distance for a 2-D hull: minimum over all vertices and
    /// all edge segments between vertex pairs, or 0 when inside some triangle.
    fn brute_distance_2d(p: [f64; 2], verts: &[[f64; 2]]) -> f64 {
        let mut best = f64::INFINITY;
        let n = verts.len();
        for a in 0..n {
            for b in a..n {
                let (u, v) = (verts[a], verts[b]);
                let e = [v[0] - u[0], v[1] - u[1]];
                let ee = e[0] * e[0] + e[1] * e[1];
                let t = if ee > 0.0 {
                    (((p[0] - u[0]) * e[0] + (p[1] - u[1]) * e[1]) / ee).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                let q = [u[0] + t * e[0] - p[0], u[1] + t * e[1] - p[1]];
                best = best.min((q[0] * q[0] + q[1] * q[1]).sqrt());
                for c in b..n {
                    let w = verts[c];
                    let s = |x: [f64; 2], y: [f64; 2]| {
                        (y[0] - x[0]) * (p[1] - x[1]) - (y[1] - x[1]) * (p[0] - x[0])
                    };
                    let (s1, s2, s3) = (s(u, v), s(v, w), s(w, u));
                    if (s1 >= 0.0 && s2 >= 0.0 && s3 >= 0.0) || (s1 <= 0.0 && s2 <= 0.0 && s3 <= 0.0) {
                        let area = s(u, v) + s(v, w) + s(w, u);
                        if area.abs() > 0.0 {
                            best = 0.0;
                        }
                    }
                }
            }
        }
        best
    }

    #[test]
    fn matches_brute_force_in_the_plane() {
        let mut rng = RngStream::new(11, 0);
        for _ in 0..500 {
            let n = 1 + (rng.uniform() * 7.0) as usize;
            let verts: Vec<[f64; 2]> =
                (0..n).map(|_| [rng.uniform() * 4.0 - 2.0, rng.uniform() * 4.0 - 2.0]).collect();
            let body = VPolytope::new(2, &verts.iter().map(|v| v.to_vec()).collect::<Vec<_>>()).unwrap();
            let p = [rng.uniform() * 6.0 - 3.0, rng.uniform() * 6.0 - 3.0];
            let got = distance_to_hull(&p, &body, TOL).unwrap();
            let want = brute_distance_2d(p, &verts);
            assert!((got - want).abs() < 1e-9, "{got} vs {want} for {verts:?} {p:?}");
        }
    }

    #[test]
    fn thin_needle_bodies_converge() {
        // Square plus a long, very thin prism: the regime of the drift experiments.
        for &len in &[2.0, 64.0, 4096.0] {
            let eps = 1.0 / (len * len);
            let mut verts = vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 0.0]];
            for t in [0.0, len] {
                for s in [-eps, eps] {
                    verts.push(vec![0.5 + t, 0.5 + s, 0.0]);
                }
            }
            let body = VPolytope::new(3, &verts).unwrap();
            let mut rng = RngStream::new(3, len as u64);
            for _ in 0..200 {
                let p = [rng.uniform() * (len + 2.0) - 1.0, rng.uniform() * 2.0 - 0.5, rng.uniform() * 0.2 - 0.1];
                let d = distance_to_hull(&p, &body, TOL).unwrap();
                assert!(d.is_finite());
                assert!(d >= p[2].abs() - 1e-12);
            }
            let tip = [0.5 + len + 3.0, 0.5, 0.0];
            assert!((distance_to_hull(&tip, &body, TOL).unwrap() - 3.0).abs() < 1e-9);
        }
    }

    fn body_and_point(dim: usize) -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>)> {
        (
            prop::collection::vec(prop::collection::vec(-3.0..3.0f64, dim), 1..12),
            prop::collection::vec(-5.0..5.0f64, dim),
        )
    }

    proptest! {
        #[test]
        fn distance_zero_iff_member((verts, p) in body_and_point(3)) {
            let body = VPolytope::new(3, &verts).unwrap();
            let d = distance_to_hull(&p, &body, TOL).unwrap();
            let m = membership(&p, &body, TOL).unwrap();
            prop_assert_eq!(m, d <= TOL);
        }

        #[test]
        fn vertices_are_members((verts, _p) in body_and_point(4)) {
            let body = VPolytope::new(4, &verts).unwrap();
            for v in body.vertices() {
                prop_assert!(membership(v, &body, TOL).unwrap());
            }
        }

        #[test]
        fn nearest_point_is_certified((verts, p) in body_and_point(3)) {
            // ⟨x − p, v − x⟩ ≥ −tol·scale for every vertex v (first-order optimality).
            let body = VPolytope::new(3, &verts).unwrap();
            let shifted: Vec<f64> = body.vertices().flat_map(|v| v.iter().zip(&p).map(|(a, b)| a - b)).collect();
            let r = min_norm_point(&shifted, 3, TOL).unwrap();
            let wsum: f64 = r.support.iter().map(|s| s.1).sum();
            prop_assert!((wsum - 1.0).abs() < 1e-9);
            if r.distance > TOL {
                for v in shifted.chunks_exact(3) {
                    let g: f64 = r.point.iter().zip(v).map(|(x, vi)| x * (vi - x)).sum();
                    prop_assert!(g >= -TOL * r.distance - 1e-12, "gap {}", g);
                }
            }
        }
    }
}

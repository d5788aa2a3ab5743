//! Convex bodies as vertex hulls (V-polytopes) with membership, support,
//! distance and exact planar oracles.
//!
//! Vertex lists are taken as given: duplicates and interior points are
//! allowed and every oracle works on `conv(vertices)`.

mod fiber;
mod io;
mod planar;
mod wolfe;

pub use fiber::{line_fiber, Interval};
pub use io::{format_body, load_body, parse_body, save_body};
pub use planar::{hull_2d, point_in_polygon, polygon_area, polygon_chord, polygon_clip, polygon_disk_area};
pub use wolfe::{distance_to_hull, membership, min_norm_point, MinNormPoint, DEFAULT_TOL};

use crate::error::{Error, Result};
use crate::scalar::{dot, norm, Real};

/// Convex hull of a finite vertex list in `R^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct VPolytope<T> {
    dim: usize,
    coords: Vec<T>,
}

impl<T: Real> VPolytope<T> {
    pub fn new(dim: usize, vertices: &[Vec<T>]) -> Result<Self> {
        let mut coords = Vec::with_capacity(dim * vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::InvalidBody(format!(
                    "vertex {i} has {} coordinates, expected {dim}",
                    v.len()
                )));
            }
            coords.extend_from_slice(v);
        }
        Self::from_flat(dim, coords)
    }

    /// Builds a body from row-major vertex coordinates.
    pub fn from_flat(dim: usize, coords: Vec<T>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidBody("ambient dimension must be at least 1".into()));
        }
        if coords.is_empty() || coords.len() % dim != 0 {
            return Err(Error::InvalidBody(format!(
                "{} coordinates do not form a non-empty list of {dim}-vectors",
                coords.len()
            )));
        }
        if !crate::scalar::all_finite(&coords) {
            return Err(Error::InvalidBody("non-finite coordinate".into()));
        }
        Ok(Self { dim, coords })
    }

    pub fn point(p: &[T]) -> Result<Self> {
        Self::from_flat(p.len(), p.to_vec())
    }

    /// Axis-aligned box `[lo_1, hi_1] × … × [lo_d, hi_d]` as its `2^d` corners.
    pub fn cuboid(lo: &[T], hi: &[T]) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), found: hi.len() });
        }
        let d = lo.len();
        let mut coords = Vec::with_capacity(d << d);
        for mask in 0..(1usize << d) {
            for k in 0..d {
                coords.push(if mask >> k & 1 == 1 { hi[k] } else { lo[k] });
            }
        }
        Self::from_flat(d, coords)
    }

    /// Unit cube `[0,1]^d`.
    pub fn unit_cube(d: usize) -> Self {
        Self::cuboid(&vec![T::zero(); d], &vec![T::one(); d]).expect("valid cube")
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn n_vertices(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn vertex(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vertices(&self) -> std::slice::ChunksExact<'_, T> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn flat(&self) -> &[T] {
        &self.coords
    }

    /// `sup ‖x‖` over the body, attained at a vertex.
    pub fn bounding_radius(&self) -> T {
        self.vertices().map(norm).fold(T::zero(), T::max)
    }

    /// Support function `h(u) = max ⟨v, u⟩`.
    pub fn support(&self, u: &[T]) -> Result<T> {
        self.check_dim(u.len())?;
        Ok(self.vertices().map(|v| dot(v, u)).fold(T::neg_infinity(), T::max))
    }

    pub fn translate(&self, t: &[T]) -> Result<Self> {
        self.check_dim(t.len())?;
        let coords = self
            .coords
            .chunks_exact(self.dim)
            .flat_map(|v| v.iter().zip(t).map(|(&a, &b)| a + b))
            .collect();
        Ok(Self { dim: self.dim, coords })
    }

    /// Mean of the vertex list (a point of the body).
    pub fn centroid(&self) -> Vec<T> {
        let n = T::from_usize_lossy(self.n_vertices());
        let mut c = vec![T::zero(); self.dim];
        for v in self.vertices() {
            for (ci, &vi) in c.iter_mut().zip(v) {
                *ci = *ci + vi;
            }
        }
        c.into_iter().map(|x| x / n).collect()
    }

    /// Largest pairwise vertex distance.
    pub fn diameter(&self) -> T {
        let mut best = T::zero();
        for (i, a) in self.vertices().enumerate() {
            for b in self.vertices().skip(i + 1) {
                best = best.max(norm(&crate::scalar::sub(a, b)));
            }
        }
        best
    }

    /// Componentwise minimum and maximum of the vertices.
    pub fn bounding_box(&self) -> (Vec<T>, Vec<T>) {
        let mut lo = self.vertex(0).to_vec();
        let mut hi = lo.clone();
        for v in self.vertices().skip(1) {
            for k in 0..self.dim {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        (lo, hi)
    }

    /// Body whose vertex list is `self` followed by `other`; its hull is
    /// `conv(self ∪ other)`.
    pub fn union_hull(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        Ok(Self { dim: self.dim, coords })
    }

    pub(crate) fn check_dim(&self, found: usize) -> Result<()> {
        if found == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim, found })
        }
    }

    /// Lexicographic order on the vertex bit patterns; used to make
    /// two-operand computations independent of argument order.
    pub(crate) fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        let a = self.coords.iter().map(|x| x.to_f64_lossy());
        let b = other.coords.iter().map(|x| x.to_f64_lossy());
        a.zip(b)
            .map(|(x, y)| x.total_cmp(&y))
            .find(|o| o.is_ne())
            .unwrap_or_else(|| self.coords.len().cmp(&other.coords.len()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn square() -> VPolytope<f64> {
        VPolytope::unit_cube(2)
    }

    #[test]
    fn rejects_bad_input() {
        assert!(VPolytope::<f64>::from_flat(0, vec![]).is_err());
        assert!(VPolytope::<f64>::from_flat(2, vec![]).is_err());
        assert!(VPolytope::<f64>::from_flat(2, vec![1.0, 2.0, 3.0]).is_err());
        assert!(VPolytope::new(2, &[vec![0.0, f64::NAN]]).is_err());
        assert!(VPolytope::new(2, &[vec![0.0, 1.0, 2.0]]).is_err());
    }

    #[test]
    fn bounding_radius_examples() {
        assert!((square().bounding_radius() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(VPolytope::point(&[3.0, 4.0]).unwrap().bounding_radius(), 5.0);
    }

    #[test]
    fn support_examples() {
        let u = [1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt()];
        assert!((square().support(&u).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(square().support(&[0.0, 0.0]).unwrap(), 0.0);
        assert!(square().support(&[1.0]).is_err());
    }

    #[test]
    fn cube_has_expected_vertices() {
        let c = VPolytope::<f64>::unit_cube(3);
        assert_eq!(c.n_vertices(), 8);
        assert_eq!(c.centroid(), vec![0.5, 0.5, 0.5]);
        assert!((c.diameter() - 3f64.sqrt()).abs() < 1e-15);
    }

    fn body3() -> impl Strategy<Value = VPolytope<f64>> {
        prop::collection::vec(prop::collection::vec(-5.0..5.0f64, 3), 1..8)
            .prop_map(|vs| VPolytope::new(3, &vs).unwrap())
    }

    proptest! {
        #[test]
        fn support_translation_identity(k in body3(),
                                        t in prop::collection::vec(-3.0..3.0f64, 3),
                                        u in prop::collection::vec(-1.0..1.0f64, 3)) {
            let shifted = k.translate(&t).unwrap();
            let lhs = shifted.support(&u).unwrap();
            let rhs = k.support(&u).unwrap() + dot(&t, &u);
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }

        #[test]
        fn translation_moves_radius_by_at_most_shift(k in body3(),
                                                     t in prop::collection::vec(-3.0..3.0f64, 3)) {
            let shifted = k.translate(&t).unwrap();
            prop_assert!(shifted.bounding_radius() <= k.bounding_radius() + norm(&t) + 1e-12);
        }
    }
}

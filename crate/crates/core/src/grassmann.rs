//! Subspaces of `R^d`: Haar sampling, orthogonal projection into subspace
//! coordinates, and the per-subspace quantities that certify a subspace as
//! good for a planar construction.
//!
//! All downstream geometry is done in the `j` coordinates given by the
//! subspace's orthonormal basis, never in ambient coordinates.

use crate::bodies::VPolytope;
use crate::error::{Error, Result};
use crate::numerics::{ball_volume, gram_jacobian, gram_schmidt, singular_min, Matrix, RngStream};
use crate::scalar::{dot, norm, Real};

/// A `j`-dimensional linear subspace of `R^d`, stored as a `d × j` matrix
/// with orthonormal columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<T> {
    basis: Matrix<T>,
}

const ORTHONORMAL_TOL: f64 = 1e-10;
const MAX_RESAMPLES: usize = 5;

impl<T: Real> Subspace<T> {
    /// Orthonormalizes the given spanning columns.
    pub fn from_spanning(m: &Matrix<T>) -> Result<Self> {
        if m.cols() == 0 || m.cols() > m.rows() {
            return Err(Error::domain(format!(
                "a subspace needs 1 <= j <= d, got d={}, j={}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(Self { basis: gram_schmidt(m)? })
    }

    /// Wraps a basis that is already orthonormal.
    pub fn from_orthonormal(basis: Matrix<T>) -> Result<Self> {
        let j = basis.cols();
        if j == 0 || j > basis.rows() {
            return Err(Error::domain("subspace basis must have 1 <= j <= d columns"));
        }
        let err = basis.transpose().matmul(&basis).max_abs_diff(&Matrix::identity(j));
        if !(err < T::lit(ORTHONORMAL_TOL).max(T::epsilon() * T::lit(64.0))) {
            return Err(Error::domain(format!("basis is not orthonormal (error {err:e})")));
        }
        Ok(Self { basis })
    }

    /// `span{e_{i}: i ∈ axes}` in `R^d`.
    pub fn coordinate(d: usize, axes: &[usize]) -> Result<Self> {
        let cols: Vec<Vec<T>> = axes
            .iter()
            .map(|&a| {
                let mut e = vec![T::zero(); d];
                e[a] = T::one();
                e
            })
            .collect();
        Self::from_orthonormal(Matrix::from_columns(d, &cols))
    }

    /// The whole space `R^d` with the standard basis.
    pub fn full(d: usize) -> Self {
        Self { basis: Matrix::identity(d) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    /// Coordinates of `P_H x` in the basis of `H`.
    pub fn project_point(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), found: x.len() });
        }
        Ok(self.basis.tr_mul_vec(x))
    }

    /// Ambient vector with the given `H`-coordinates.
    pub fn embed(&self, coords: &[T]) -> Vec<T> {
        self.basis.mul_vec(coords)
    }

    /// Vertex-wise projection; the hull of the image is `P_H(conv K)`.
    pub fn project_body(&self, body: &VPolytope<T>) -> Result<VPolytope<T>> {
        body.check_dim(self.ambient_dim())?;
        let coords: Vec<T> = body.vertices().flat_map(|v| self.basis.tr_mul_vec(v)).collect();
        VPolytope::from_flat(self.dim(), coords)
    }
}

/// Haar-distributed random subspace: Gram–Schmidt of a `d × j` Gaussian
/// matrix. The stream is advanced past the draws it used; a rank-deficient
/// draw is replaced by the next block of the same stream.
pub fn haar_sample<T: Real>(d: usize, j: usize, rng: &mut RngStream) -> Result<Subspace<T>> {
    if j < 1 || j > d {
        return Err(Error::domain(format!("haar_sample needs 1 <= j <= d, got d={d}, j={j}")));
    }
    let mut last = None;
    for _ in 0..=MAX_RESAMPLES {
        let mut m = Matrix::zeros(d, j);
        for c in 0..j {
            for r in 0..d {
                m[(r, c)] = T::lit(rng.gaussian());
            }
        }
        match Subspace::from_spanning(&m) {
            Ok(s) => return Ok(s),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Splits `H = ℝu_H ⊕ E_H` for `u_H = P_H u / ‖P_H u‖`.
#[derive(Clone, Debug)]
pub struct AxisSplit<T> {
    /// `‖P_H u‖`.
    pub ell: T,
    /// `u_H` in `H`-coordinates.
    pub axis: Vec<T>,
    /// Orthonormal basis of `E_H` in `H`-coordinates (`j × (j−1)`).
    pub transverse: Matrix<T>,
}

impl<T: Real> AxisSplit<T> {
    /// `E_H`-coordinates of the `H`-coordinate point `y` (the map `π_H`).
    pub fn transverse_coords(&self, y: &[T]) -> Vec<T> {
        self.transverse.tr_mul_vec(y)
    }

    /// `H`-coordinate point with the given `E_H`-coordinates and axial offset.
    pub fn compose(&self, transverse: &[T], axial: T) -> Vec<T> {
        let mut y = self.transverse.mul_vec(transverse);
        for (yi, &a) in y.iter_mut().zip(&self.axis) {
            *yi = *yi + axial * a;
        }
        y
    }
}

/// Orthonormal completion of the unit vector `v` in `R^k`: a `k × (k−1)`
/// matrix whose columns together with `v` form an orthonormal basis. Uses the
/// Householder reflection that maps `e_1` to `±v`; each column's sign is fixed
/// so its first non-negligible coordinate is positive.
pub fn orthonormal_complement<T: Real>(v: &[T]) -> Matrix<T> {
    let k = v.len();
    let mut w = v.to_vec();
    let s = if v[0] >= T::zero() { T::one() } else { -T::one() };
    w[0] = w[0] + s;
    let ww = dot(&w, &w);
    let mut cols = Vec::with_capacity(k.saturating_sub(1));
    for c in 1..k {
        // Column c of I − 2wwᵀ/(wᵀw).
        let mut col: Vec<T> = w.iter().map(|&wi| -T::lit(2.0) * wi * w[c] / ww).collect();
        col[c] = col[c] + T::one();
        let cutoff = T::lit(1e-12);
        if let Some(first) = col.iter().find(|x| x.abs() > cutoff) {
            if *first < T::zero() {
                col.iter_mut().for_each(|x| *x = -*x);
            }
        }
        cols.push(col);
    }
    Matrix::from_columns(k, &cols)
}

/// Decomposes `H` along the projected axis `P_H u`.
pub fn axis_split<T: Real>(h: &Subspace<T>, u: &[T]) -> Result<AxisSplit<T>> {
    let pu = h.project_point(u)?;
    let ell = norm(&pu);
    if !(ell > T::lit(1e-12)) {
        return Err(Error::DegenerateDirection { norm: ell.to_f64_lossy() });
    }
    let axis: Vec<T> = pu.iter().map(|&x| x / ell).collect();
    let transverse = orthonormal_complement(&axis);
    Ok(AxisSplit { ell, axis, transverse })
}

/// Per-subspace quantities showing that `P_H|_E` is invertible and that the
/// transverse map `T_H = (π_H ∘ P_H)|_{u^⊥ ∩ E}` is an isomorphism.
#[derive(Clone, Debug)]
pub struct GoodnessCertificate<T> {
    /// Smallest singular value of `P_H|_E` in orthonormal bases.
    pub sigma_min: T,
    /// `‖P_H u‖`.
    pub ell_h: T,
    /// `u_H` in `H`-coordinates (zeros when degenerate).
    pub u_h: Vec<T>,
    /// Orthonormal basis of `E_H` in `H`-coordinates.
    pub e_h_basis: Matrix<T>,
    /// Matrix of `T_H` from an orthonormal basis of `u^⊥ ∩ E` to that of `E_H`.
    pub t_h: Matrix<T>,
    /// `J_{j−1}(T_H)`.
    pub jacobian: T,
    /// `J_{j−1}(T_H) · vol_{j−1}(B_{j−1})`.
    pub b_h: T,
    /// `2 · ℓ_H · b_H`.
    pub c_h: T,
}

impl<T: Real> GoodnessCertificate<T> {
    pub fn is_good(&self, threshold: T) -> bool {
        self.sigma_min > threshold && self.jacobian > T::zero()
    }
}

/// Orthonormal basis of `u^⊥ ∩ E` in ambient coordinates (`d × (j−1)`).
pub fn transverse_basis<T: Real>(e: &Subspace<T>, u: &[T]) -> Result<Matrix<T>> {
    let cu = e.project_point(u)?;
    let n = norm(&cu);
    if !(n > T::lit(1e-12)) {
        return Err(Error::DegenerateDirection { norm: n.to_f64_lossy() });
    }
    let cu: Vec<T> = cu.iter().map(|&x| x / n).collect();
    Ok(e.basis().matmul(&orthonormal_complement(&cu)))
}

/// Builds the certificate for `H` relative to the construction plane `E`
/// and axis `u ∈ E`. Degenerate subspaces are reported, never resampled:
/// when `P_H u` vanishes the Jacobian fields are 0.
pub fn goodness<T: Real>(h: &Subspace<T>, e: &Subspace<T>, u: &[T]) -> Result<GoodnessCertificate<T>> {
    let j = h.dim();
    if e.dim() != j || e.ambient_dim() != h.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: j, found: e.dim() });
    }
    let restricted = h.basis().transpose().matmul(e.basis());
    let sigma_min = singular_min(&restricted);
    let w = transverse_basis(e, u)?;
    match axis_split(h, u) {
        Ok(split) => {
            let ph_w = h.basis().transpose().matmul(&w);
            let t_h = split.transverse.transpose().matmul(&ph_w);
            let jacobian = gram_jacobian(&t_h);
            let b_h = jacobian * ball_volume::<T>(j - 1);
            let c_h = T::lit(2.0) * split.ell * b_h;
            Ok(GoodnessCertificate {
                sigma_min,
                ell_h: split.ell,
                u_h: split.axis,
                e_h_basis: split.transverse,
                t_h,
                jacobian,
                b_h,
                c_h,
            })
        }
        Err(Error::DegenerateDirection { norm }) => Ok(GoodnessCertificate {
            sigma_min,
            ell_h: T::lit(norm),
            u_h: vec![T::zero(); j],
            e_h_basis: Matrix::zeros(j, j - 1),
            t_h: Matrix::zeros(j - 1, j - 1),
            jacobian: T::zero(),
            b_h: T::zero(),
            c_h: T::zero(),
        }),
        Err(other) => Err(other),
    }
}

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{dot, Real};

/// Dense row-major matrix for the small (d ≤ 8) systems used here.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self { rows: rows.len(), cols, data: rows.iter().flatten().copied().collect() }
    }

    /// Builds a `rows × columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {c} has wrong length");
            for (r, &v) in col.iter().enumerate() {
                m[(r, c)] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                for c in 0..other.cols {
                    out[(r, c)] = out[(r, c)] + a * other[(k, c)];
                }
            }
        }
        out
    }

    /// `M·x`.
    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|r| dot(self.row(r), x)).collect()
    }

    /// `Mᵀ·x`.
    pub fn tr_mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![T::zero(); self.cols];
        for (r, &xr) in x.iter().enumerate() {
            for (o, &m) in out.iter_mut().zip(self.row(r)) {
                *o = *o + m * xr;
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

/// Orthonormalizes the columns of `m` (modified Gram–Schmidt with one
/// re-orthogonalization pass). The span of every leading column block is kept.
pub fn gram_schmidt<T: Real>(m: &Matrix<T>) -> Result<Matrix<T>> {
    let threshold = T::lit(1e-12);
    let mut q: Vec<Vec<T>> = Vec::with_capacity(m.cols());
    for c in 0..m.cols() {
        let mut v = m.column(c);
        let scale = crate::scalar::norm(&v).max(T::one());
        for _ in 0..2 {
            for prev in &q {
                let p = dot(prev, &v);
                for (vi, &qi) in v.iter_mut().zip(prev) {
                    *vi = *vi - p * qi;
                }
            }
        }
        let residual = crate::scalar::norm(&v);
        if !(residual >= threshold * scale) {
            return Err(Error::RankDeficient { column: c, residual: residual.to_f64_lossy() });
        }
        v.iter_mut().for_each(|x| *x = *x / residual);
        q.push(v);
    }
    Ok(Matrix::from_columns(m.rows(), &q))
}

/// `sqrt(det(MᵀM))`, the `c`-dimensional volume scaling of `M` (`c ≤ r`).
/// Returns 0 for rank-deficient input.
pub fn gram_jacobian<T: Real>(m: &Matrix<T>) -> T {
    let gram = m.transpose().matmul(m);
    let det = determinant(gram);
    if det > T::zero() {
        det.sqrt()
    } else {
        T::zero()
    }
}

fn determinant<T: Real>(mut a: Matrix<T>) -> T {
    let n = a.rows();
    let mut det = T::one();
    for k in 0..n {
        let (pivot_row, pivot) = (k..n)
            .map(|r| (r, a[(r, k)].abs()))
            .fold((k, T::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot == T::zero() {
            return T::zero();
        }
        if pivot_row != k {
            for c in 0..n {
                let tmp = a[(k, c)];
                a[(k, c)] = a[(pivot_row, c)];
                a[(pivot_row, c)] = tmp;
            }
            det = -det;
        }
        let p = a[(k, k)];
        det = det * p;
        for r in k + 1..n {
            let f = a[(r, k)] / p;
            if f != T::zero() {
                for c in k..n {
                    a[(r, c)] = a[(r, c)] - f * a[(k, c)];
                }
            }
        }
    }
    det
}

/// Singular values in descending order (cyclic one-sided Jacobi).
pub fn singular_values<T: Real>(m: &Matrix<T>) -> Vec<T> {
    let work = if m.rows() >= m.cols() { m.clone() } else { m.transpose() };
    let mut cols = work.columns();
    let n = cols.len();
    let eps = T::epsilon();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma == T::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = c * xp - s * yq;
                    *y = s * xp + c * yq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<T> = cols.iter().map(|c| crate::scalar::norm(c)).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

/// Smallest singular value; 0 for an empty matrix.
pub fn singular_min<T: Real>(m: &Matrix<T>) -> T {
    singular_values(m).last().copied().unwrap_or(T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;

    fn gaussian_matrix(rows: usize, cols: usize, stream: u64) -> Matrix<f64> {
        let mut rng = RngStream::new(7, stream);
        let mut m = Matrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = rng.gaussian();
            }
        }
        m
    }

    #[test]
    fn gram_schmidt_identity_is_fixed() {
        let i = Matrix::<f64>::identity(3);
        assert_eq!(gram_schmidt(&i).unwrap(), i);
    }

    #[test]
    fn gram_schmidt_hand_example() {
        let m = Matrix::from_columns(3, &[vec![1.0, 0.0, 0.0], vec![1.0, 1.0, 0.0]]);
        let q = gram_schmidt(&m).unwrap();
        let expected = Matrix::from_columns(3, &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]);
        assert!(q.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn gram_schmidt_random_is_orthonormal_and_idempotent() {
        for s in 0..50 {
            let m = gaussian_matrix(5, 3, s);
            let q = gram_schmidt(&m).unwrap();
            let qtq = q.transpose().matmul(&q);
            assert!(qtq.max_abs_diff(&Matrix::identity(3)) < 1e-10);
            let q2 = gram_schmidt(&q).unwrap();
            assert!(q2.max_abs_diff(&q) < 1e-12);
        }
    }

    #[test]
    fn gram_schmidt_rejects_dependent_columns() {
        let m = Matrix::from_columns(3, &[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]]);
        assert!(matches!(gram_schmidt(&m), Err(Error::RankDeficient { column: 1, .. })));
    }

    #[test]
    fn gram_schmidt_in_single_precision() {
        let m = Matrix::<f32>::from_columns(3, &[vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0]]);
        let q = gram_schmidt(&m).unwrap();
        let qtq = q.transpose().matmul(&q);
        assert!(qtq.max_abs_diff(&Matrix::identity(2)) < 1e-6);
    }

    #[test]
    fn jacobian_examples() {
        let q = gram_schmidt(&gaussian_matrix(4, 2, 3)).unwrap();
        assert!((gram_jacobian(&q) - 1.0).abs() < 1e-12);
        let m = Matrix::<f64>::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.5], vec![0.0, 0.0]]);
        assert!((gram_jacobian(&m) - 0.5).abs() < 1e-15);
        let z = Matrix::from_rows(&[vec![1.0, 0.0], vec![2.0, 0.0], vec![3.0, 0.0]]);
        assert_eq!(gram_jacobian(&z), 0.0);
    }

    #[test]
    fn jacobian_equals_product_of_singular_values() {
        for s in 0..30 {
            let m = gaussian_matrix(5, 3, 100 + s);
            let prod: f64 = singular_values(&m).iter().product();
            let jac = gram_jacobian(&m);
            assert!((prod - jac).abs() < 1e-10 * jac.max(1.0), "{prod} vs {jac}");
        }
    }

    #[test]
    fn jacobian_left_isometry_invariance() {
        for s in 0..30 {
            let a = gaussian_matrix(3, 3, 200 + s);
            let q = gram_schmidt(&gaussian_matrix(6, 3, 300 + s)).unwrap();
            let qa = q.matmul(&a);
            let (ja, jqa) = (gram_jacobian(&a), gram_jacobian(&qa));
            assert!((ja - jqa).abs() <= 1e-9 * ja.abs().max(1e-300));
        }
    }

    #[test]
    fn singular_min_examples() {
        assert!((singular_min(&Matrix::<f64>::identity(3)) - 1.0).abs() < 1e-15);
        let d = Matrix::<f64>::from_rows(&[vec![2.0, 0.0], vec![0.0, 0.1]]);
        assert!((singular_min(&d) - 0.1).abs() < 1e-15);
        // P_H|_E for H = span{e1, e3}, E = span{e1, e2}: rows are H-basis, columns E-basis.
        let h = Matrix::from_columns(3, &[vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]]);
        let e = Matrix::from_columns(3, &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]);
        assert_eq!(singular_min(&h.transpose().matmul(&e)), 0.0);
    }

    #[test]
    fn singular_values_of_known_matrix() {
        // [[3, 0], [4, 5]] has singular values sqrt(45) and sqrt(5).
        let m = Matrix::from_rows(&[vec![3.0, 0.0], vec![4.0, 5.0]]);
        let sv = singular_values(&m);
        assert!((sv[0] - 45f64.sqrt()).abs() < 1e-12);
        assert!((sv[1] - 5f64.sqrt()).abs() < 1e-12);
        // Wide input is handled through the transpose.
        let w = m.transpose().matmul(&Matrix::from_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]));
        assert_eq!(singular_values(&w).len(), 2);
    }
}

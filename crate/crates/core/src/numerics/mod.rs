//! Scalar kernels: unit-ball volumes, flag coefficients, small dense linear
//! algebra and the counter-based random number streams used by the samplers.

mod linalg;
mod rng;

pub use linalg::{gram_jacobian, gram_schmidt, singular_min, singular_values, Matrix};
pub use rng::RngStream;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Volume of the Euclidean unit ball in `R^m`.
///
/// Built from `vol_0 = 1`, `vol_1 = 2` and `vol_m = (2π/m)·vol_{m-2}`, which is
/// exact up to rounding and needs no Γ approximation.
pub fn ball_volume<T: Real>(m: usize) -> T {
    let two_pi = T::lit(2.0) * T::PI();
    let mut v = if m % 2 == 0 { T::one() } else { T::lit(2.0) };
    let mut k = if m % 2 == 0 { 2 } else { 3 };
    while k <= m {
        v = two_pi / T::from_usize_lossy(k) * v;
        k += 2;
    }
    v
}

fn binomial<T: Real>(n: usize, k: usize) -> T {
    let k = k.min(n - k);
    (0..k).fold(T::one(), |acc, i| {
        acc * T::from_usize_lossy(n - i) / T::from_usize_lossy(i + 1)
    })
}

/// Klain–Rota flag coefficient `binom(d,j)·vol_d(B_d) / (vol_j(B_j)·vol_{d-j}(B_{d-j}))`.
pub fn flag_coefficient<T: Real>(d: usize, j: usize) -> Result<T> {
    if j < 1 || j > d {
        return Err(Error::domain(format!("flag coefficient needs 1 <= j <= d, got d={d}, j={j}")));
    }
    Ok(binomial::<T>(d, j) * ball_volume::<T>(d)
        / (ball_volume::<T>(j) * ball_volume::<T>(d - j)))
}

/// Which needle the constant bounds: a one-sided prism `[0, L]` or a two-sided
/// spindle `[-L, L]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sidedness {
    OneSided,
    TwoSided,
}

/// Constant `C(d, j)` multiplying `L·ε^{j-1}` in the needle upper bounds:
/// `flag(d,j)·vol_{j-1}(B_{j-1})`, doubled for two-sided needles.
pub fn needle_constant<T: Real>(d: usize, j: usize, sided: Sidedness) -> Result<T> {
    if j < 2 || j > d {
        return Err(Error::domain(format!("needle constant needs 2 <= j <= d, got d={d}, j={j}")));
    }
    let c = flag_coefficient::<T>(d, j)? * ball_volume::<T>(j - 1);
    Ok(match sided {
        Sidedness::OneSided => c,
        Sidedness::TwoSided => T::lit(2.0) * c,
    })
}

/// `n!` as a scalar.
pub fn factorial<T: Real>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, k| acc * T::from_usize_lossy(k))
}

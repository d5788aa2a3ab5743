//! Needle bodies attached to a base body and the step schedules of the
//! three counterexample sequences.
//!
//! Ball cross-sections are replaced by inscribed cross-polytopes, whose
//! `(j−1)`-volume `(2ε)^{j−1}/(j−1)!` is known in closed form.

use crate::bodies::{membership, VPolytope, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::grassmann::{transverse_basis, GoodnessCertificate, Subspace};
use crate::numerics::{factorial, needle_constant, Sidedness};
use crate::scalar::{dot, norm, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NeedleKind {
    /// `x0 + [0, L]·u + Q`.
    Prism,
    /// `conv(x0 + [−L, L]·u, x0 + Q)`.
    Spindle,
}

/// A needle in the affine plane `x0 + E`, with cross-section `Q` the
/// cross-polytope of radius `eps` in `u^⊥ ∩ E`.
#[derive(Clone, Debug)]
pub struct NeedleSpec<T> {
    pub x0: Vec<T>,
    pub u: Vec<T>,
    pub e: Subspace<T>,
    pub length: T,
    pub eps: T,
    pub kind: NeedleKind,
}

impl<T: Real> NeedleSpec<T> {
    pub fn new(x0: Vec<T>, u: Vec<T>, e: Subspace<T>, length: T, eps: T, kind: NeedleKind) -> Result<Self> {
        let d = e.ambient_dim();
        if x0.len() != d || u.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: if x0.len() != d { x0.len() } else { u.len() } });
        }
        if e.dim() < 2 {
            return Err(Error::domain("needles need dim E >= 2"));
        }
        if !(length > T::zero()) || !(eps > T::zero()) || !length.is_finite() || !eps.is_finite() {
            return Err(Error::domain("needle length and radius must be positive and finite"));
        }
        if (norm(&u) - T::one()).abs() > T::lit(1e-10) {
            return Err(Error::domain("needle axis must be a unit vector"));
        }
        let inside = e.embed(&e.project_point(&u)?);
        let off: Vec<T> = inside.iter().zip(&u).map(|(&a, &b)| a - b).collect();
        if norm(&off) > T::lit(1e-10) {
            return Err(Error::domain("needle axis must lie in E"));
        }
        Ok(Self { x0, u, e, length, eps, kind })
    }

    pub fn j(&self) -> usize {
        self.e.dim()
    }

    /// Vertex count of the cross-section.
    pub fn cross_vertices(&self) -> usize {
        2 * (self.j() - 1)
    }

    /// `vol_{j−1}(Q) = (2ε)^{j−1}/(j−1)!`.
    pub fn cross_section_volume(&self) -> T {
        cross_polytope_volume(self.j() - 1, self.eps)
    }

    /// `j`-volume of the needle inside `x0 + E`.
    pub fn exact_volume(&self) -> T {
        let q = self.cross_section_volume();
        match self.kind {
            NeedleKind::Prism => self.length * q,
            NeedleKind::Spindle => T::lit(2.0) * self.length / T::from_usize_lossy(self.j()) * q,
        }
    }

    pub fn body(&self) -> Result<VPolytope<T>> {
        match self.kind {
            NeedleKind::Prism => prism_needle(self),
            NeedleKind::Spindle => spindle_needle(self),
        }
    }
}

fn cross_polytope_volume<T: Real>(k: usize, eps: T) -> T {
    (T::lit(2.0) * eps).powi(k as i32) / factorial::<T>(k)
}

/// The cross-polytope `conv{±eps·b_i}` over an orthonormal basis of `u^⊥ ∩ E`.
pub fn cross_section<T: Real>(e: &Subspace<T>, u: &[T], eps: T) -> Result<VPolytope<T>> {
    if e.dim() < 2 {
        return Err(Error::domain("cross_section needs dim E >= 2"));
    }
    let w = transverse_basis(e, u)?;
    let mut verts = Vec::with_capacity(2 * w.cols());
    for b in w.columns() {
        verts.push(b.iter().map(|&x| eps * x).collect::<Vec<T>>());
        verts.push(b.iter().map(|&x| -eps * x).collect::<Vec<T>>());
    }
    VPolytope::new(e.ambient_dim(), &verts)
}

fn shifted<T: Real>(q: &VPolytope<T>, base: &[T]) -> Vec<Vec<T>> {
    q.vertices().map(|v| v.iter().zip(base).map(|(&a, &b)| a + b).collect()).collect()
}

fn along<T: Real>(x0: &[T], u: &[T], t: T) -> Vec<T> {
    x0.iter().zip(u).map(|(&x, &v)| x + t * v).collect()
}

pub fn prism_needle<T: Real>(spec: &NeedleSpec<T>) -> Result<VPolytope<T>> {
    let q = cross_section(&spec.e, &spec.u, spec.eps)?;
    let mut verts = shifted(&q, &spec.x0);
    verts.extend(shifted(&q, &along(&spec.x0, &spec.u, spec.length)));
    VPolytope::new(spec.e.ambient_dim(), &verts)
}

pub fn spindle_needle<T: Real>(spec: &NeedleSpec<T>) -> Result<VPolytope<T>> {
    let q = cross_section(&spec.e, &spec.u, spec.eps)?;
    let mut verts = vec![along(&spec.x0, &spec.u, -spec.length), along(&spec.x0, &spec.u, spec.length)];
    verts.extend(shifted(&q, &spec.x0));
    VPolytope::new(spec.e.ambient_dim(), &verts)
}

/// `conv(K ∪ N)`.
pub fn augment<T: Real>(k: &VPolytope<T>, n: &VPolytope<T>) -> Result<VPolytope<T>> {
    k.union_hull(n)
}

/// Base body, construction plane, base point and axis shared by the sequences.
#[derive(Clone, Debug)]
pub struct Setting<T> {
    pub k0: VPolytope<T>,
    pub e: Subspace<T>,
    pub x0: Vec<T>,
    pub u: Vec<T>,
}

impl<T: Real> Setting<T> {
    /// `x0` defaults to the vertex centroid of `k0`.
    pub fn new(k0: VPolytope<T>, e: Subspace<T>, x0: Option<Vec<T>>, u: Vec<T>) -> Result<Self> {
        k0.check_dim(e.ambient_dim())?;
        let x0 = x0.unwrap_or_else(|| k0.centroid());
        // Validates the axis and base point through a throwaway needle spec.
        NeedleSpec::new(x0.clone(), u.clone(), e.clone(), T::one(), T::one(), NeedleKind::Prism)?;
        Ok(Self { k0, e, x0, u })
    }

    /// Unit `j`-cube in `span{e_1..e_j} ⊂ R^d`, axis `e_1`.
    pub fn unit_cube(d: usize, j: usize) -> Result<Self> {
        if j < 2 || j > d {
            return Err(Error::domain(format!("needs 2 <= j <= d, got d={d}, j={j}")));
        }
        let mut hi = vec![T::zero(); d];
        hi[..j].iter_mut().for_each(|x| *x = T::one());
        let k0 = VPolytope::cuboid(&vec![T::zero(); d], &hi)?;
        let e = Subspace::coordinate(d, &(0..j).collect::<Vec<_>>())?;
        let mut u = vec![T::zero(); d];
        u[0] = T::one();
        Self::new(k0, e, None, u)
    }

    pub fn d(&self) -> usize {
        self.e.ambient_dim()
    }

    pub fn j(&self) -> usize {
        self.e.dim()
    }

    fn needle(&self, x: Vec<T>, length: T, eps: T, kind: NeedleKind) -> Result<NeedleSpec<T>> {
        NeedleSpec::new(x, self.u.clone(), self.e.clone(), length, eps, kind)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleRow<T> {
    pub m: usize,
    pub l_m: T,
    pub eps_m: T,
    pub t_m: T,
    pub x_m: Vec<T>,
    pub r_m: T,
    pub rho_m: T,
    pub claimed_step_bound: T,
}

/// One step of a sequence: the schedule row, the needle attached at this
/// step and the resulting body.
#[derive(Clone, Debug)]
pub struct Step<T> {
    pub row: ScheduleRow<T>,
    pub needle: NeedleSpec<T>,
    pub body: VPolytope<T>,
}

/// `L_m = l0·2^m` for `m < steps`.
pub fn dyadic_lengths<T: Real>(l0: T, steps: usize) -> Vec<T> {
    (0..steps).map(|m| l0 * T::lit(2.0).powi(m as i32)).collect()
}

fn dyadic<T: Real>(m: usize) -> T {
    T::lit(0.5).powi(m as i32 + 1)
}

/// `K_i = conv(K ∪ N(L_i, L_i^{−2}))` with prism needles at `x0`,
/// `L_i = l0·2^i`; claimed bound `C(d,j)·L_i·ε_i^{j−1}` (one-sided constant).
pub fn thm1_sequence<T: Real>(setting: &Setting<T>, l0: T, steps: usize) -> Result<Vec<Step<T>>> {
    let (d, j) = (setting.d(), setting.j());
    let c1: T = needle_constant(d, j, Sidedness::OneSided)?;
    if !membership(&setting.x0, &setting.k0, T::lit(DEFAULT_TOL))? {
        return Err(Error::domain("base point must lie in the base body"));
    }
    let rho = setting.k0.bounding_radius();
    dyadic_lengths(l0, steps)
        .into_iter()
        .enumerate()
        .map(|(i, l)| {
            let eps = T::one() / (l * l);
            let needle = setting.needle(setting.x0.clone(), l, eps, NeedleKind::Prism)?;
            let body = augment(&setting.k0, &needle.body()?)?;
            let row = ScheduleRow {
                m: i,
                l_m: l,
                eps_m: eps,
                t_m: T::zero(),
                x_m: setting.x0.clone(),
                r_m: rho + T::one(),
                rho_m: rho,
                claimed_step_bound: c1 * l * eps.powi(j as i32 - 1),
            };
            Ok(Step { row, needle, body })
        })
        .collect()
}

/// Spindle sequence with `C₂·ε_m^{j−1}·L_m = scale·2^{−(m+1)}`.
fn spindle_sequence<T: Real>(setting: &Setting<T>, lengths: &[T], scale: T) -> Result<Vec<Step<T>>> {
    let (d, j) = (setting.d(), setting.j());
    let c2: T = needle_constant(d, j, Sidedness::TwoSided)?;
    if lengths.iter().any(|&l| !(l > T::zero())) {
        return Err(Error::domain("needle lengths must be positive"));
    }
    let spacing = setting.k0.diameter().max(T::one());
    let mut current = setting.k0.clone();
    let mut out = Vec::with_capacity(lengths.len());
    for (m, &l) in lengths.iter().enumerate() {
        let claimed = scale * dyadic::<T>(m);
        let eps = (claimed / (c2 * l)).powf(T::one() / T::from_usize_lossy(j - 1));
        let t = T::from_usize_lossy(m) * spacing;
        let x = along(&setting.x0, &setting.u, t);
        let rho = current.bounding_radius();
        let needle = setting.needle(x.clone(), l, eps, NeedleKind::Spindle)?;
        let next = augment(&current, &needle.body()?)?;
        let row = ScheduleRow {
            m,
            l_m: l,
            eps_m: eps,
            t_m: t,
            x_m: x,
            r_m: rho + T::one(),
            rho_m: rho,
            claimed_step_bound: claimed,
        };
        out.push(Step { row, needle, body: next.clone() });
        current = next;
    }
    Ok(out)
}

/// `K_{m+1} = conv(K_m ∪ N(x_m; L_m, ε_m))` with `C₂·ε_m^{j−1}·L_m = 2^{−(m+1)}`.
pub fn thm2_sequence<T: Real>(setting: &Setting<T>, lengths: &[T]) -> Result<Vec<Step<T>>> {
    spindle_sequence(setting, lengths, T::one())
}

/// As [`thm2_sequence`] with the step budget scaled to `(a0/4)·2^{−(m+1)}`.
pub fn thm3_sequence<T: Real>(setting: &Setting<T>, lengths: &[T], a0: T) -> Result<Vec<Step<T>>> {
    if !(a0 > T::zero()) || !a0.is_finite() {
        return Err(Error::domain(format!("a0 must be positive, got {a0}")));
    }
    spindle_sequence(setting, lengths, a0 / T::lit(4.0))
}

/// Lower bounds on `vol_j(P_H N)` for a good `H`: the block estimate
/// `c_H·ε^{j−1}·L` and the exact projected volume of the cross-polytope
/// needle, `ℓ_H·J·vol_{j−1}(Q)` times `L` (prism) or `2L/j` (spindle).
/// A degenerate certificate gives `(0, 0)`.
pub fn block_bounds<T: Real>(cert: &GoodnessCertificate<T>, spec: &NeedleSpec<T>) -> (T, T) {
    if !(cert.sigma_min > T::zero()) || !(cert.jacobian > T::zero()) {
        return (T::zero(), T::zero());
    }
    let j = spec.j();
    let block = cert.c_h * spec.eps.powi(j as i32 - 1) * spec.length;
    let axial = match spec.kind {
        NeedleKind::Prism => spec.length,
        NeedleKind::Spindle => T::lit(2.0) * spec.length / T::from_usize_lossy(j),
    };
    (block, axial * cert.ell_h * cert.jacobian * spec.cross_section_volume())
}

/// Distance from `x` to the affine plane `x0 + E`.
pub fn distance_to_plane<T: Real>(x: &[T], x0: &[T], e: &Subspace<T>) -> Result<T> {
    let rel: Vec<T> = x.iter().zip(x0).map(|(&a, &b)| a - b).collect();
    let back = e.embed(&e.project_point(&rel)?);
    let off: Vec<T> = rel.iter().zip(&back).map(|(&a, &b)| a - b).collect();
    Ok(dot(&off, &off).sqrt())
}

//! Real-linear realization of the grid test-function space and the
//! gauge-structure subspaces.
//!
//! A grid with M points realizes as R^(8M): real and imaginary part of each
//! of the four components per point. In these coordinates `B = Im K` is a
//! direct sum of 2x2 blocks, so the realified space is a [`SymplecticSpace`]
//! with `Form::BlockPairs`.
//!
//! Subspaces:
//!
//! * `p_space` — gauge-invariant functions `p_mu f^mu = 0` (6M real dims),
//! * `p0_space` — its B-radical, the complex multiples of `p_mu h` (2M),
//! * `coulomb_space` — the transverse complement `f_0 = 0, p.f = 0` (4M),
//! * `gradient_space` — the real-gradient sector (M),
//! * `maxwell_space` — smearings of the field equations (M, a proper
//!   subspace of the radical).
//!
//! The continuum reality condition would single out a "real" half of the
//! Coulomb space, but its pointwise grid surrogate forces `B` to vanish
//! identically there (only cone values are stored), so the Coulomb space is
//! kept complex; the theta involution gates only the gradient and Maxwell
//! sectors and the gauge scalars.

use super::sample::transverse_pair;
use super::{GBFunction, GBGrid, GridScalar};
use crate::symspace::{Subspace, SymplecticSpace};
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// The realified symplectic space of a grid: dimension 8M, with B as 2x2
/// blocks `-2 pi w sigma_mu` over (Re, Im) coordinate pairs.
pub fn realified_space(grid: &Arc<GBGrid>) -> Arc<SymplecticSpace> {
    let mut coeffs = Vec::with_capacity(4 * grid.len());
    for pt in 0..grid.len() {
        let w = grid.weights[pt];
        for mu in 0..4 {
            let sigma = if mu == 0 { 1.0 } else { -1.0 };
            coeffs.push(-2.0 * PI * w * sigma);
        }
    }
    SymplecticSpace::block_pairs(format!("gb-grid-{}pts", grid.len()), coeffs)
}

pub fn to_real(f: &GBFunction) -> DVector<f64> {
    let n = f.grid().len();
    let mut v = DVector::zeros(8 * n);
    for pt in 0..n {
        for mu in 0..4 {
            let z = f.get(pt, mu);
            v[2 * (4 * pt + mu)] = z.re;
            v[2 * (4 * pt + mu) + 1] = z.im;
        }
    }
    v
}

pub fn from_real(grid: &Arc<GBGrid>, v: &DVector<f64>) -> GBFunction {
    assert_eq!(v.len(), 8 * grid.len());
    GBFunction::from_fn(grid.clone(), |pt, mu| {
        Complex64::new(v[2 * (4 * pt + mu)], v[2 * (4 * pt + mu) + 1])
    })
}

/// Real span of the given grid functions (one real column each). For a
/// complex span include the i-multiples explicitly.
pub fn span_subspace(
    space: &Arc<SymplecticSpace>,
    functions: &[GBFunction],
) -> Result<Subspace> {
    if functions.is_empty() {
        return Ok(space.zero_subspace());
    }
    let cols: Vec<DVector<f64>> = functions.iter().map(to_real).collect();
    space.subspace(&cols)
}

/// Complex span: each function contributes itself and its i-multiple.
pub fn complex_span_subspace(
    space: &Arc<SymplecticSpace>,
    functions: &[GBFunction],
) -> Result<Subspace> {
    let mut all = Vec::with_capacity(2 * functions.len());
    for f in functions {
        all.push(f.clone());
        all.push(f.scale(Complex64::new(0.0, 1.0)));
    }
    span_subspace(space, &all)
}

// column pair (u, iu) for a unit complex per-point vector
fn push_complex_mode(
    cols: &mut Vec<DVector<f64>>,
    dim: usize,
    entries: &[(usize, usize, Complex64)],
) {
    let mut re_col = DVector::zeros(dim);
    let mut im_col = DVector::zeros(dim);
    for &(pt, mu, z) in entries {
        let base = 2 * (4 * pt + mu);
        re_col[base] = z.re;
        re_col[base + 1] = z.im;
        // i z has real part -im, imaginary part re
        im_col[base] = -z.im;
        im_col[base + 1] = z.re;
    }
    cols.push(re_col);
    cols.push(im_col);
}

fn lightlike_unit(grid: &GBGrid, pt: usize) -> Vec<(usize, usize, Complex64)> {
    let p0 = grid.p0[pt];
    let p = grid.points[pt];
    let norm = (2.0f64).sqrt() * p0;
    let mut entries = vec![(pt, 0, Complex64::new(p0 / norm, 0.0))];
    for k in 0..3 {
        entries.push((pt, k + 1, Complex64::new(p[k] / norm, 0.0)));
    }
    entries
}

/// Gauge-invariant test functions: null space of `p_mu f^mu` per point.
pub fn p_space(grid: &Arc<GBGrid>, space: &Arc<SymplecticSpace>) -> Subspace {
    let dim = space.dim();
    let mut cols = Vec::with_capacity(6 * grid.len());
    for pt in 0..grid.len() {
        push_complex_mode(&mut cols, dim, &lightlike_unit(grid, pt));
        let (t1, t2) = transverse_pair(grid.points[pt]);
        for t in [t1, t2] {
            let entries: Vec<_> = (0..3)
                .map(|k| (pt, k + 1, Complex64::new(t[k], 0.0)))
                .collect();
            push_complex_mode(&mut cols, dim, &entries);
        }
    }
    Subspace::from_orthonormal_unchecked(space.clone(), DMatrix::from_columns(&cols))
}

/// The B-radical of the gauge-invariant space: complex multiples of the
/// lightlike direction `p_mu h(p)` at every point.
pub fn p0_space(grid: &Arc<GBGrid>, space: &Arc<SymplecticSpace>) -> Subspace {
    let dim = space.dim();
    let mut cols = Vec::with_capacity(2 * grid.len());
    for pt in 0..grid.len() {
        push_complex_mode(&mut cols, dim, &lightlike_unit(grid, pt));
    }
    Subspace::from_orthonormal_unchecked(space.clone(), DMatrix::from_columns(&cols))
}

/// Coulomb (transverse) space: `f_0 = 0` and `p . f_vec = 0` pointwise.
/// Complementary to the radical inside the gauge-invariant space, with `K`
/// strictly positive and `B` nondegenerate on it.
pub fn coulomb_space(grid: &Arc<GBGrid>, space: &Arc<SymplecticSpace>) -> Subspace {
    let dim = space.dim();
    let mut cols = Vec::with_capacity(4 * grid.len());
    for pt in 0..grid.len() {
        let (t1, t2) = transverse_pair(grid.points[pt]);
        for t in [t1, t2] {
            let entries: Vec<_> = (0..3)
                .map(|k| (pt, k + 1, Complex64::new(t[k], 0.0)))
                .collect();
            push_complex_mode(&mut cols, dim, &entries);
        }
    }
    Subspace::from_orthonormal_unchecked(space.clone(), DMatrix::from_columns(&cols))
}

/// Real-gradient sector: `f = p s` with `s` in the odd part of the mirror
/// involution (`s(-p) = -conj s(p)`), the grid rendering of gradients of
/// real scalar functions. One mirror pair contributes two real dimensions.
pub fn gradient_space(grid: &Arc<GBGrid>, space: &Arc<SymplecticSpace>) -> Subspace {
    let dim = space.dim();
    let mut cols = Vec::new();
    for pt in 0..grid.len() {
        let m = grid.mirror[pt];
        if pt > m {
            continue;
        }
        // scalar values (z at p, -conj z at -p) for z = 1 and z = i
        for z in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
            let mut entries = Vec::with_capacity(8);
            let zm = -z.conj();
            for (idx, zz) in [(pt, z), (m, zm)] {
                let p0 = grid.p0[idx];
                let p = grid.points[idx];
                let norm = 2.0 * p0; // sqrt(2) * |(p0,p)| over both points
                entries.push((idx, 0, zz * (p0 / norm)));
                for k in 0..3 {
                    entries.push((idx, k + 1, zz * (p[k] / norm)));
                }
            }
            let mut col = DVector::zeros(dim);
            for (ptx, mu, zz) in entries {
                col[2 * (4 * ptx + mu)] = zz.re;
                col[2 * (4 * ptx + mu) + 1] = zz.im;
            }
            cols.push(col);
        }
    }
    Subspace::from_orthonormal_unchecked(space.clone(), DMatrix::from_columns(&cols))
}

/// Maxwell-equation smearings: `f_mu = p_mu (p^nu k_nu)` over theta-real
/// tensors `k`. On an origin-free grid this fills exactly the real-gradient
/// sector, a proper subspace of the radical (the continuum distinction
/// between the two lives at p = 0, outside numerical reach).
pub fn maxwell_space(grid: &Arc<GBGrid>, space: &Arc<SymplecticSpace>) -> Subspace {
    let mut gens: Vec<GBFunction> = Vec::new();
    for pt in 0..grid.len() {
        let m = grid.mirror[pt];
        if pt > m {
            continue;
        }
        // theta-real k with k_0 = 0 and spatial part supported on the pair
        for j in 0..3 {
            for z in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
                let mut s = GridScalar::zero(grid.clone());
                // s = p^nu k_nu = -p . k_vec, with k_vec(-p) = conj k_vec(p)
                let p = grid.points[pt];
                let pm = grid.points[m];
                s.set(pt, -Complex64::new(p[j], 0.0) * z);
                s.set(m, -Complex64::new(pm[j], 0.0) * z.conj());
                gens.push(s.momentum_vector());
            }
        }
    }
    let cols: Vec<DVector<f64>> = gens.iter().map(to_real).collect();
    if cols.is_empty() {
        return space.zero_subspace();
    }
    Subspace::new(space.clone(), DMatrix::from_columns(&cols))
}

/// Split `f` (gauge invariant) into its transverse part and its radical
/// part: `h = f_0 / |p|` pointwise, `g = f - p h`.
pub fn decompose_p(f: &GBFunction) -> Result<(GBFunction, GBFunction)> {
    let resid = f.divergence_residual();
    if resid > 1e-8 {
        return Err(Error::PreconditionViolation(format!(
            "decompose_p expects a gauge-invariant function; divergence residual {resid:.3e}"
        )));
    }
    let grid = f.grid();
    let h = GridScalar::from_fn(grid.clone(), |pt| f.get(pt, 0) / grid.p0[pt]);
    let s = h.momentum_vector();
    let g = f.sub(&s)?;
    Ok((g, s))
}

/// Spectral report of the indefinite pairing on the gauge-invariant space.
#[derive(Debug, Clone)]
pub struct KreinReport {
    /// Smallest eigenvalue of the K Gram on the gauge-invariant space.
    pub min_eigenvalue: f64,
    /// Spectral norm of the Gram.
    pub norm: f64,
    /// Number of (real) kernel dimensions found (eigenvalues below
    /// `1e-8 * norm`).
    pub kernel_dim: usize,
    /// Real dimension of the radical subspace, for comparison.
    pub p0_dim: usize,
    /// Smallest eigenvalue of K restricted to the Coulomb space.
    pub coulomb_min_eigenvalue: f64,
    pub pass: bool,
}

/// Assemble the hermitian Gram of K on the canonical per-point basis of the
/// gauge-invariant space and report positivity, kernel dimension, and
/// strict positivity on the Coulomb space. The Gram is block diagonal over
/// grid points, so the spectrum is computed blockwise (each complex
/// eigenvalue counts twice in the realified space).
pub fn krein_positivity_report(grid: &Arc<GBGrid>) -> KreinReport {
    let mut min_eig = f64::INFINITY;
    let mut norm = 0.0f64;
    let mut eigs: Vec<f64> = Vec::with_capacity(3 * grid.len());
    let mut coulomb_min = f64::INFINITY;
    for pt in 0..grid.len() {
        let w = grid.weights[pt];
        let p0 = grid.p0[pt];
        let p = grid.points[pt];
        let (t1, t2) = transverse_pair(p);
        // complex basis of the per-point solution space
        let norm_l = (2.0f64).sqrt() * p0;
        let modes: [[Complex64; 4]; 3] = [
            [
                Complex64::new(p0 / norm_l, 0.0),
                Complex64::new(p[0] / norm_l, 0.0),
                Complex64::new(p[1] / norm_l, 0.0),
                Complex64::new(p[2] / norm_l, 0.0),
            ],
            [
                Complex64::new(0.0, 0.0),
                Complex64::new(t1[0], 0.0),
                Complex64::new(t1[1], 0.0),
                Complex64::new(t1[2], 0.0),
            ],
            [
                Complex64::new(0.0, 0.0),
                Complex64::new(t2[0], 0.0),
                Complex64::new(t2[1], 0.0),
                Complex64::new(t2[2], 0.0),
            ],
        ];
        let mut h = DMatrix::<Complex64>::zeros(3, 3);
        for a in 0..3 {
            for b in 0..3 {
                let mut acc = modes[a][0].conj() * modes[b][0];
                for k in 1..4 {
                    acc -= modes[a][k].conj() * modes[b][k];
                }
                h[(a, b)] = -2.0 * PI * w * acc;
            }
        }
        // transverse block alone
        for a in 1..3 {
            coulomb_min = coulomb_min.min(h[(a, a)].re);
        }
        let eig = h.symmetric_eigen();
        for &e in eig.eigenvalues.iter() {
            min_eig = min_eig.min(e);
            norm = norm.max(e.abs());
            // realified spectrum doubles every eigenvalue
            eigs.push(e);
            eigs.push(e);
        }
    }
    let kernel_dim = eigs.iter().filter(|&&e| e.abs() < 1e-8 * norm).count();
    let p0_dim = 2 * grid.len();
    let pass = min_eig >= -1e-10 * norm && kernel_dim == p0_dim && coulomb_min > 0.0;
    KreinReport {
        min_eigenvalue: min_eig,
        norm,
        kernel_dim,
        p0_dim,
        coulomb_min_eigenvalue: coulomb_min,
        pass,
    }
}

/// Is the symplectic form nondegenerate on the Coulomb space? Checked
/// pointwise: each transverse block must have full rank.
pub fn coulomb_nondegenerate(grid: &Arc<GBGrid>) -> bool {
    for pt in 0..grid.len() {
        let w = grid.weights[pt];
        // per-point transverse B-block has entries +-2 pi w on the
        // (u, iu) pairs; rank 4 iff w != 0
        if (2.0 * PI * w).abs() < 1e-300 {
            return false;
        }
    }
    true
}

/// Subspace-level variant: radical of B restricted to the given subspace is
/// trivial. This is the generic route (used on moderate grids and for
/// region-restricted Coulomb data).
pub fn nondegenerate_on(sub: &Subspace) -> bool {
    sub.radical().is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gb::sample::{random_divergence_free, random_function, random_theta_scalar};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn realified_form_matches_im_k() {
        let grid = GBGrid::shell(3, 0.7, 0.0);
        let space = realified_space(&grid);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let f = random_function(&grid, &mut rng);
            let h = random_function(&grid, &mut rng);
            let direct = crate::gb::b_form(&f, &h).unwrap();
            let via_form = space.form_eval(&to_real(&f), &to_real(&h)).unwrap();
            assert_relative_eq!(direct, via_form, epsilon = 1e-11, max_relative = 1e-10);
        }
    }

    #[test]
    fn subspace_dimensions() {
        let grid = GBGrid::shell(3, 0.5, 0.0);
        let m = grid.len();
        let space = realified_space(&grid);
        assert_eq!(p_space(&grid, &space).rank(), 6 * m);
        assert_eq!(p0_space(&grid, &space).rank(), 2 * m);
        assert_eq!(coulomb_space(&grid, &space).rank(), 4 * m);
        assert_eq!(gradient_space(&grid, &space).rank(), m);
        assert_eq!(maxwell_space(&grid, &space).rank(), m);
    }

    #[test]
    fn inclusion_chain() {
        let grid = GBGrid::shell(3, 0.5, 0.0);
        let space = realified_space(&grid);
        let p = p_space(&grid, &space);
        let p0 = p0_space(&grid, &space);
        let c = coulomb_space(&grid, &space);
        let g = gradient_space(&grid, &space);
        let f = maxwell_space(&grid, &space);
        assert!(p.contains(&p0).unwrap());
        assert!(p.contains(&c).unwrap());
        assert!(p0.contains(&f).unwrap());
        assert!(p0.contains(&g).unwrap());
        // strictness of the Maxwell inclusion
        assert!(f.rank() < p0.rank());
        // p = coulomb + radical
        let sum = c.sum(&p0).unwrap();
        assert!(sum.equal(&p).unwrap());
    }

    #[test]
    fn p_members_realize_divergence_free() {
        let grid = GBGrid::shell(3, 0.5, 0.0);
        let space = realified_space(&grid);
        let p = p_space(&grid, &space);
        for j in 0..6 {
            let col = p.basis().column(j).into_owned();
            let f = from_real(&grid, &col);
            assert!(f.divergence_residual() < 1e-13);
        }
        // and a random divergence-free function lies in the span
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let f = random_divergence_free(&grid, &mut rng);
        assert!(p.contains_vector(&to_real(&f)));
    }

    #[test]
    fn radical_is_p0() {
        let grid = GBGrid::shell(3, 0.9, 0.0);
        let space = realified_space(&grid);
        let p = p_space(&grid, &space);
        let p0 = p0_space(&grid, &space);
        let rad = p.radical();
        assert!(rad.equal(&p0).unwrap());
        // gradients pair to zero with the whole gauge-invariant space
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let s = random_theta_scalar(&grid, &mut rng);
        let grad = to_real(&s.momentum_vector());
        for j in 0..p.rank().min(24) {
            let b = space
                .form_eval(&grad, &p.basis().column(j).into_owned())
                .unwrap();
            assert!(b.abs() < 1e-10);
        }
    }

    #[test]
    fn decompose_roundtrip_and_uniqueness() {
        let grid = GBGrid::shell(3, 0.6, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..20 {
            let f = random_divergence_free(&grid, &mut rng);
            let (g, s) = decompose_p(&f).unwrap();
            // g is transverse: zero time component and spatially orthogonal to p
            for pt in 0..grid.len() {
                assert!(g.get(pt, 0).norm() < 1e-12 * (1.0 + f.get(pt, 0).norm()));
                let p = grid.points[pt];
                let dot = p[0] * g.get(pt, 1) + p[1] * g.get(pt, 2) + p[2] * g.get(pt, 3);
                assert!(dot.norm() < 1e-12 * (1.0 + grid.p0[pt]));
            }
            let back = g.add(&s).unwrap();
            assert!(back.sub(&f).unwrap().weighted_norm() <= 1e-12 * (1.0 + f.weighted_norm()));
            // re-decomposing the transverse part returns it unchanged
            let (g2, s2) = decompose_p(&g).unwrap();
            assert!(g2.sub(&g).unwrap().weighted_norm() < 1e-12 * (1.0 + g.weighted_norm()));
            assert!(s2.weighted_norm() < 1e-12 * (1.0 + g.weighted_norm()));
        }
        // trivial cases
        let s = random_theta_scalar(&grid, &mut rng).momentum_vector();
        let (g, s_back) = decompose_p(&s).unwrap();
        assert!(g.weighted_norm() < 1e-12 * (1.0 + s.weighted_norm()));
        assert!(s_back.sub(&s).unwrap().weighted_norm() < 1e-12 * (1.0 + s.weighted_norm()));
        // non-members are rejected
        let bad = random_function(&grid, &mut rng);
        assert!(decompose_p(&bad).is_err());
    }

    #[test]
    fn krein_report_blocks() {
        let grid = GBGrid::shell(3, 0.8, 0.0);
        let rep = krein_positivity_report(&grid);
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.kernel_dim, 2 * grid.len());
        assert!(rep.min_eigenvalue >= -1e-10 * rep.norm);
        assert!(rep.coulomb_min_eigenvalue > 0.0);
        // K(f, f) = 0 for radical probes
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let probe = random_theta_scalar(&grid, &mut rng).momentum_vector();
        let k = crate::gb::k_form(&probe, &probe).unwrap();
        assert!(k.norm() <= 1e-14 * probe.weighted_norm().powi(2).max(1.0));
    }

    #[test]
    fn krein_blocks_match_dense_gram() {
        // independent oracle on a small grid: dense real Gram of Re K on the
        // canonical p-space basis
        let grid = GBGrid::shell(3, 0.8, 0.0);
        let space = realified_space(&grid);
        let p = p_space(&grid, &space);
        let basis = p.basis();
        let n = basis.ncols();
        let mut gram = DMatrix::zeros(n, n);
        for a in 0..n {
            let fa = from_real(&grid, &basis.column(a).into_owned());
            for b in a..n {
                let fb = from_real(&grid, &basis.column(b).into_owned());
                let v = crate::gb::k_form(&fa, &fb).unwrap().re;
                gram[(a, b)] = v;
                gram[(b, a)] = v;
            }
        }
        let eig = gram.symmetric_eigen();
        let norm = eig.eigenvalues.amax();
        let kernel = eig
            .eigenvalues
            .iter()
            .filter(|e| e.abs() < 1e-8 * norm)
            .count();
        let rep = krein_positivity_report(&grid);
        assert_eq!(kernel, rep.kernel_dim);
        let min_dense = eig.eigenvalues.min();
        assert!(min_dense >= -1e-10 * norm);
        assert_relative_eq!(norm, rep.norm, max_relative = 1e-8);
    }

    #[test]
    fn coulomb_b_nondegenerate_p_degenerate() {
        let grid = GBGrid::shell(3, 0.7, 0.0);
        let space = realified_space(&grid);
        assert!(coulomb_nondegenerate(&grid));
        let c = coulomb_space(&grid, &space);
        assert!(nondegenerate_on(&c));
        let p = p_space(&grid, &space);
        assert!(!nondegenerate_on(&p));
        // empty region: vacuously nondegenerate
        assert!(nondegenerate_on(&space.zero_subspace()));
    }
}

//! Region boxes and test-function sampling.
//!
//! Samples are built from separable polynomial bump profiles
//! `b(x) = (1 - x^2)^4` on `[-1, 1]`, whose Fourier transform is evaluated
//! in closed form at the cone points (through the spherical-Bessel
//! recurrence), so the support metadata of every sample is exact and no
//! position-lattice interpolation enters. The C^3 boundary gives the
//! transform a `w^-5` tail, fast enough for the momentum grids in use.
//! Three kinds of samples are produced:
//!
//! * plain vector bumps (a polarization times a profile) spanning the local
//!   field spaces,
//! * antisymmetric-tensor smearings `f_mu = p^nu A_{nu mu} Phi(p)`, which
//!   are divergence free on the cone exactly and span the local observable
//!   spaces,
//! * scalar bumps used as gauge smearing functions.

use super::{GBFunction, GBGrid, GridScalar};
use crate::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use std::sync::Arc;

/// Closed 4-dimensional box in position space.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RegionBox {
    pub center: [f64; 4],
    pub halfwidth: [f64; 4],
}

impl RegionBox {
    pub fn new(center: [f64; 4], halfwidth: [f64; 4]) -> Result<Self> {
        if halfwidth.iter().any(|&h| h <= 0.0) {
            return Err(Error::InvalidArgument("box halfwidths must be positive".into()));
        }
        Ok(RegionBox { center, halfwidth })
    }

    pub fn contains_box(&self, other: &RegionBox) -> bool {
        (0..4).all(|a| {
            self.center[a] - self.halfwidth[a] <= other.center[a] - other.halfwidth[a] + 1e-12
                && other.center[a] + other.halfwidth[a] <= self.center[a] + self.halfwidth[a] + 1e-12
        })
    }

    /// Strict spacelike separation: the largest time gap between points of
    /// the two boxes is smaller than the smallest spatial distance.
    pub fn is_spacelike(&self, other: &RegionBox) -> bool {
        let dt = (self.center[0] - other.center[0]).abs() + self.halfwidth[0] + other.halfwidth[0];
        let mut d2 = 0.0;
        for a in 1..4 {
            let gap = (self.center[a] - other.center[a]).abs()
                - (self.halfwidth[a] + other.halfwidth[a]);
            if gap > 0.0 {
                d2 += gap * gap;
            }
        }
        dt < d2.sqrt()
    }

    pub fn translate(&self, a: [f64; 4]) -> RegionBox {
        let mut c = self.center;
        for i in 0..4 {
            c[i] += a[i];
        }
        RegionBox {
            center: c,
            halfwidth: self.halfwidth,
        }
    }

    /// Spatial rotation of the box by a signed-permutation matrix; requires
    /// the spatial halfwidths to be rotation symmetric.
    pub fn rotate(&self, r: &[[i64; 3]; 3]) -> Result<RegionBox> {
        let hw = self.halfwidth;
        if !(hw[1] == hw[2] && hw[2] == hw[3]) {
            return Err(Error::InvalidArgument(
                "rotating a box needs equal spatial halfwidths".into(),
            ));
        }
        let mut c = [self.center[0], 0.0, 0.0, 0.0];
        for i in 0..3 {
            for j in 0..3 {
                c[1 + i] += r[i][j] as f64 * self.center[1 + j];
            }
        }
        Ok(RegionBox {
            center: c,
            halfwidth: hw,
        })
    }
}

/// Fourier transform of the unit bump `(1-x^2)^4` on `[-1, 1]`.
///
/// `bhat(w) = 2 I_4(w)` with `I_k = int_0^1 (1-x^2)^k cos(wx) dx`, computed
/// by the recurrence `I_k = (2k/w^2)((2k-1) I_{k-1} - 2(k-1) I_{k-2})`
/// seeded with `I_0 = sin w / w` and `I_1 = 2 (sin w - w cos w) / w^3`; a
/// moment series takes over near `w = 0` where the recurrence cancels.
pub fn bump_hat(w: f64) -> f64 {
    let aw = w.abs();
    if aw < 0.5 {
        let w2 = w * w;
        // I_4 = sum_m (-w^2)^m mu_m / (2m)! with the even moments of the bump
        let mut term;
        let mut acc = 0.0;
        let mut pow = 1.0;
        let mut fact = 1.0;
        for m in 0..9usize {
            if m > 0 {
                pow *= -w2;
                fact *= ((2 * m - 1) * (2 * m)) as f64;
            }
            term = pow / fact * moment(m);
            acc += term;
        }
        2.0 * acc
    } else {
        let i0 = w.sin() / w;
        let i1 = 2.0 * (w.sin() - w * w.cos()) / w.powi(3);
        let mut prev = i0;
        let mut cur = i1;
        for k in 2..=4u32 {
            let kf = k as f64;
            let next = (2.0 * kf / (w * w)) * ((2.0 * kf - 1.0) * cur - 2.0 * (kf - 1.0) * prev);
            prev = cur;
            cur = next;
        }
        2.0 * cur
    }
}

// int_0^1 x^{2m} (1-x^2)^4 dx
fn moment(m: usize) -> f64 {
    let binom = [1.0, -4.0, 6.0, -4.0, 1.0];
    let mut acc = 0.0;
    for (j, b) in binom.iter().enumerate() {
        acc += b / (2 * m + 2 * j + 1) as f64;
    }
    acc
}

/// Value at cone point `(p0, p)` of the transform of a bump supported in
/// `bx`: product of per-axis profiles times the translation phase.
pub fn box_profile(bx: &RegionBox, p0: f64, p: [f64; 3]) -> Complex64 {
    let mut mag = bx.halfwidth[0] * bump_hat(bx.halfwidth[0] * p0);
    for a in 0..3 {
        mag *= bx.halfwidth[1 + a] * bump_hat(bx.halfwidth[1 + a] * p[a]);
    }
    // e^{-i p.x} with p.x = p0 x0 - p.xvec at the box center
    let phase = -p0 * bx.center[0] + p[0] * bx.center[1] + p[1] * bx.center[2] + p[2] * bx.center[3];
    Complex64::from_polar(mag, phase)
}

/// Shrink a box around an interior anchor point so several distinct bumps
/// fit inside the same region.
fn sub_box(bx: &RegionBox, rng: &mut impl Rng) -> RegionBox {
    let shrink = rng.gen_range(0.55..0.9);
    let mut hw = bx.halfwidth;
    let mut c = bx.center;
    for a in 0..4 {
        hw[a] *= shrink;
        let slack = bx.halfwidth[a] - hw[a];
        c[a] += rng.gen_range(-slack..slack);
    }
    RegionBox {
        center: c,
        halfwidth: hw,
    }
}

/// `n` vector bumps supported in `bx`: random real polarizations times a
/// bump profile. They represent real test functions (`real_rep`).
pub fn region_sample(
    grid: &Arc<GBGrid>,
    bx: &RegionBox,
    n: usize,
    rng: &mut impl Rng,
) -> Result<Vec<GBFunction>> {
    check_box_scale(grid, bx)?;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let b = sub_box(bx, rng);
        let eps: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let mut f = GBFunction::from_fn(grid.clone(), |pt, mu| {
            let prof = box_profile(&b, grid.p0[pt], grid.points[pt]);
            eps[mu] * prof
        });
        f.real_rep = true;
        out.push(f);
    }
    Ok(out)
}

/// `n` antisymmetric-tensor smearings supported in `bx`. These satisfy
/// `p_mu f^mu = 0` exactly at every grid point, so they span local pieces of
/// the gauge-invariant space.
pub fn region_sample_divergence_free(
    grid: &Arc<GBGrid>,
    bx: &RegionBox,
    n: usize,
    rng: &mut impl Rng,
) -> Result<Vec<GBFunction>> {
    check_box_scale(grid, bx)?;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let b = sub_box(bx, rng);
        // antisymmetric tensor amplitude
        let mut a = [[0.0f64; 4]; 4];
        for i in 0..4 {
            for j in (i + 1)..4 {
                let v = rng.gen_range(-1.0..1.0);
                a[i][j] = v;
                a[j][i] = -v;
            }
        }
        let mut f = GBFunction::from_fn(grid.clone(), |pt, mu| {
            let prof = box_profile(&b, grid.p0[pt], grid.points[pt]);
            // f_mu = p^nu A_{nu mu} = p0 A_{0 mu} - sum_k p_k A_{k mu}
            let mut amp = grid.p0[pt] * a[0][mu];
            for k in 0..3 {
                amp -= grid.points[pt][k] * a[k + 1][mu];
            }
            amp * prof
        });
        f.real_rep = true;
        out.push(f);
    }
    Ok(out)
}

/// `n` transverse tensor smearings supported in `bx`: antisymmetric
/// amplitudes with vanishing electric components, so `f_0 = 0` and
/// `p . f_vec = 0` hold exactly. This is the admissible input class for the
/// Cauchy-data route.
pub fn region_sample_coulomb(
    grid: &Arc<GBGrid>,
    bx: &RegionBox,
    n: usize,
    rng: &mut impl Rng,
) -> Result<Vec<GBFunction>> {
    check_box_scale(grid, bx)?;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let b = sub_box(bx, rng);
        let mut a = [[0.0f64; 3]; 3];
        for i in 0..3 {
            for j in (i + 1)..3 {
                let v = rng.gen_range(-1.0..1.0);
                a[i][j] = v;
                a[j][i] = -v;
            }
        }
        let mut f = GBFunction::from_fn(grid.clone(), |pt, mu| {
            if mu == 0 {
                return Complex64::new(0.0, 0.0);
            }
            let prof = box_profile(&b, grid.p0[pt], grid.points[pt]);
            let mut amp = 0.0;
            for k in 0..3 {
                amp -= grid.points[pt][k] * a[k][mu - 1];
            }
            amp * prof
        });
        f.real_rep = true;
        out.push(f);
    }
    Ok(out)
}

/// `n` scalar bumps supported in `bx`, for gauge smearing directions.
pub fn region_sample_scalars(
    grid: &Arc<GBGrid>,
    bx: &RegionBox,
    n: usize,
    rng: &mut impl Rng,
) -> Result<Vec<GridScalar>> {
    check_box_scale(grid, bx)?;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let b = sub_box(bx, rng);
        out.push(GridScalar::from_fn(grid.clone(), |pt| {
            box_profile(&b, grid.p0[pt], grid.points[pt])
        }));
    }
    Ok(out)
}

fn check_box_scale(grid: &Arc<GBGrid>, bx: &RegionBox) -> Result<()> {
    // a bump narrower than half a grid cell aliases to junk
    let min_hw = bx.halfwidth.iter().cloned().fold(f64::INFINITY, f64::min);
    let p_max = grid.p0.iter().cloned().fold(0.0f64, f64::max);
    if min_hw * p_max < 0.5 {
        return Err(Error::InvalidArgument(format!(
            "box too small for the momentum grid (halfwidth {min_hw:.3}, p_max {p_max:.3})"
        )));
    }
    Ok(())
}

/// Uniform random grid function, all components independent.
pub fn random_function(grid: &Arc<GBGrid>, rng: &mut impl Rng) -> GBFunction {
    GBFunction::from_fn(grid.clone(), |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// Random theta-real scalar: values at mirrored points are conjugate.
pub fn random_theta_scalar(grid: &Arc<GBGrid>, rng: &mut impl Rng) -> GridScalar {
    let mut s = GridScalar::zero(grid.clone());
    for pt in 0..grid.len() {
        let m = grid.mirror[pt];
        if pt <= m {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            s.set(pt, z);
            s.set(m, z.conj());
        }
    }
    s
}

/// Random element of the gauge-invariant space: divergence-free at every
/// point by construction (transverse plus lightlike parts).
pub fn random_divergence_free(grid: &Arc<GBGrid>, rng: &mut impl Rng) -> GBFunction {
    let mut f = GBFunction::zero(grid.clone());
    for pt in 0..grid.len() {
        let p = grid.points[pt];
        let p0 = grid.p0[pt];
        // basis of the per-point solution space: lightlike (p0, p) and the
        // two transverse directions
        let (t1, t2) = transverse_pair(p);
        for _ in 0..1 {
            let c_l = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let c_1 = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let c_2 = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            f.set(pt, 0, c_l * p0);
            for k in 0..3 {
                f.set(pt, k + 1, c_l * p[k] + c_1 * t1[k] + c_2 * t2[k]);
            }
        }
    }
    f
}

/// Two unit vectors orthogonal to `p` and to each other.
pub fn transverse_pair(p: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    assert!(n > 0.0);
    let e = [p[0] / n, p[1] / n, p[2] / n];
    // pick the axis least aligned with p
    let axis = if e[0].abs() <= e[1].abs() && e[0].abs() <= e[2].abs() {
        [1.0, 0.0, 0.0]
    } else if e[1].abs() <= e[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let mut t1 = [
        e[1] * axis[2] - e[2] * axis[1],
        e[2] * axis[0] - e[0] * axis[2],
        e[0] * axis[1] - e[1] * axis[0],
    ];
    let n1 = (t1[0] * t1[0] + t1[1] * t1[1] + t1[2] * t1[2]).sqrt();
    for v in t1.iter_mut() {
        *v /= n1;
    }
    let t2 = [
        e[1] * t1[2] - e[2] * t1[1],
        e[2] * t1[0] - e[0] * t1[2],
        e[0] * t1[1] - e[1] * t1[0],
    ];
    (t1, t2)
}

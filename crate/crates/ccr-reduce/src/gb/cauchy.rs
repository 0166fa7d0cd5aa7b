//! Cauchy-data route to the symplectic form.
//!
//! For transverse data (vanishing time component, spatially divergence
//! free) the symplectic pairing can be computed a second, independent way:
//! propagate the smearing function with the wave kernel, read off the
//! time-zero Cauchy data
//!
//! ```text
//! Q_l(x) = -2 sum_p w_p       Im( e^{-i p.x} f_l(p) )
//! R_l(x) = +2 sum_p p0 w_p    Re( e^{-i p.x} f_l(p) )
//! ```
//!
//! on a position lattice, and integrate `(Q^f R^h - R^f Q^h) / (16 pi^2)`
//! over the time-zero slice. In the continuum this equals `B(f, h)`
//! exactly; on the grid the two routes differ by a quadrature error that
//! shrinks under refinement, which is what calibrates a grid's `tol_quad`.
//!
//! The lattice box must cover the (compact) support of the Cauchy data but
//! stay inside the alias window `|x| < pi / spacing` of the momentum grid;
//! `PositionLattice::for_grid` picks that window automatically.

use super::sample::{region_sample_coulomb, RegionBox};
use super::{b_form, GBFunction, GBGrid};
use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::Arc;

/// Cubic lattice on the time-zero slice.
#[derive(Debug, Clone)]
pub struct PositionLattice {
    pub extent: f64,
    pub n: usize,
    pub points: Vec<[f64; 3]>,
    /// Volume element of one cell.
    pub cell: f64,
}

impl PositionLattice {
    pub fn cubic(extent: f64, n: usize) -> Self {
        assert!(n >= 2);
        let step = 2.0 * extent / n as f64;
        let mut points = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    // midpoint rule
                    let x = -extent + (i as f64 + 0.5) * step;
                    let y = -extent + (j as f64 + 0.5) * step;
                    let z = -extent + (k as f64 + 0.5) * step;
                    points.push([x, y, z]);
                }
            }
        }
        PositionLattice {
            extent,
            n,
            points,
            cell: step.powi(3),
        }
    }

    /// Lattice adapted to a momentum grid: extent inside the alias window,
    /// spacing fine enough to resolve the largest momentum.
    pub fn for_grid(grid: &GBGrid, support_radius: f64) -> Self {
        let alias = PI / grid.spacing;
        let extent = support_radius.min(0.85 * alias);
        let p_max = grid.p0.iter().cloned().fold(0.0f64, f64::max);
        // a few points per shortest wavelength
        let n = ((2.0 * extent * p_max / PI * 3.0).ceil() as usize).clamp(12, 48);
        Self::cubic(extent, n)
    }
}

/// Time-zero Cauchy data of the wave propagation of `f`, evaluated on the
/// lattice. Three real functions each.
#[derive(Debug, Clone)]
pub struct CauchyData {
    pub q: [Vec<f64>; 3],
    pub r: [Vec<f64>; 3],
}

fn check_admissible(f: &GBFunction) -> Result<()> {
    let grid = f.grid();
    let scale = f
        .values()
        .iter()
        .map(|v| v.norm())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let mut worst_t = 0.0f64;
    let mut worst_div = 0.0f64;
    for pt in 0..grid.len() {
        worst_t = worst_t.max(f.get(pt, 0).norm());
        let p = grid.points[pt];
        let d = p[0] * f.get(pt, 1) + p[1] * f.get(pt, 2) + p[2] * f.get(pt, 3);
        worst_div = worst_div.max(d.norm() / grid.p0[pt]);
    }
    if worst_t > 1e-8 * scale || worst_div > 1e-8 * scale {
        return Err(Error::InvalidArgument(format!(
            "cauchy data needs transverse input (time residual {:.2e}, divergence residual {:.2e})",
            worst_t / scale,
            worst_div / scale
        )));
    }
    Ok(())
}

/// Evaluate the Cauchy data of `f` on the lattice.
pub fn cauchy_data(f: &GBFunction, lattice: &PositionLattice) -> Result<CauchyData> {
    check_admissible(f)?;
    let grid = f.grid();
    let m = lattice.points.len();
    let mut q = [vec![0.0; m], vec![0.0; m], vec![0.0; m]];
    let mut r = [vec![0.0; m], vec![0.0; m], vec![0.0; m]];
    for (xi, x) in lattice.points.iter().enumerate() {
        for pt in 0..grid.len() {
            let p = grid.points[pt];
            let phase = -(p[0] * x[0] + p[1] * x[1] + p[2] * x[2]);
            let (s, c) = phase.sin_cos();
            let w = grid.weights[pt];
            let p0w = grid.p0[pt] * w;
            for l in 0..3 {
                let v = f.get(pt, l + 1);
                // Im(e^{i phase} v) and Re(e^{i phase} v)
                let im = c * v.im + s * v.re;
                let re = c * v.re - s * v.im;
                q[l][xi] -= 2.0 * w * im;
                r[l][xi] += 2.0 * p0w * re;
            }
        }
    }
    Ok(CauchyData { q, r })
}

/// The Cauchy-data pairing
/// `(1 / 16 pi^2) * sum_x cell * (Q^f . R^h - R^f . Q^h)(x)`;
/// approximates `B(f, h)` and vanishes exactly for `f = h`.
pub fn cauchy_pairing(f: &GBFunction, h: &GBFunction, lattice: &PositionLattice) -> Result<f64> {
    f.check_same_grid(h)?;
    let df = cauchy_data(f, lattice)?;
    let dh = cauchy_data(h, lattice)?;
    let mut acc = 0.0;
    for xi in 0..lattice.points.len() {
        let mut term = 0.0;
        for l in 0..3 {
            term += df.q[l][xi] * dh.r[l][xi] - df.r[l][xi] * dh.q[l][xi];
        }
        acc += term;
    }
    Ok(acc * lattice.cell / (16.0 * PI * PI))
}

/// Relative two-route defect `|cauchy_pairing - B| / (|f| |h|)` for a pair.
pub fn cauchy_residual(f: &GBFunction, h: &GBFunction, lattice: &PositionLattice) -> Result<f64> {
    let pairing = cauchy_pairing(f, h, lattice)?;
    let direct = b_form(f, h)?;
    let denom = (f.weighted_norm() * h.weighted_norm()).max(1e-300);
    Ok((pairing - direct).abs() / denom)
}

/// Standard sample box for a grid's calibration run: wide enough for the
/// bump to decay within the momentum extent, inside the alias window.
pub fn calibration_box(grid: &GBGrid) -> RegionBox {
    let p_max = grid.p0.iter().cloned().fold(0.0f64, f64::max);
    let hw = (6.0 / p_max).min(0.35 * PI / grid.spacing);
    RegionBox {
        center: [0.0; 4],
        halfwidth: [hw; 4],
    }
}

/// Calibrate a grid's quadrature tolerance: the measured Cauchy two-route
/// defect for a fixed seeded pair of admissible samples, times a safety
/// factor.
pub fn calibrate_tol_quad(grid: &Arc<GBGrid>) -> f64 {
    let bx = calibration_box(grid);
    let mut rng = ChaCha8Rng::seed_from_u64(0x0CCA);
    let samples = match region_sample_coulomb(grid, &bx, 3, &mut rng) {
        Ok(s) => s,
        Err(_) => return 1e-6, // degenerate grid; fall back to a coarse scale
    };
    let lattice = PositionLattice::for_grid(
        grid,
        2.0 * (bx.halfwidth[0] + bx.halfwidth.iter().skip(1).cloned().fold(0.0, f64::max)),
    );
    let mut worst = 0.0f64;
    for i in 0..samples.len() {
        for j in (i + 1)..samples.len() {
            if let Ok(r) = cauchy_residual(&samples[i], &samples[j], &lattice) {
                worst = worst.max(r);
            }
        }
    }
    (worst * 10.0).max(1e-12)
}

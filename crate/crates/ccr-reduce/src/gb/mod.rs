//! Discretized Gupta-Bleuler electromagnetism on a light-cone momentum grid.
//!
//! Test functions are C^4-valued functions on the grid points; the
//! indefinite pairing is
//!
//! ```text
//! K(f, h) = -2 pi sum_p w_p ( conj(f_0) h_0 - conj(f_vec) . h_vec )
//! ```
//!
//! with the symplectic form `B = Im K`. Gauge transformations act affinely,
//! `(T_h^t f) = f + i t pi p hhat(p) c(f, h)`, with the quadrature
//! coefficient `c(f, h) = sum_p w_p (p_mu f^mu) conj(hhat)`; their fixed
//! points are exactly the divergence-free functions `p_mu f^mu = 0`.
//!
//! Reality on the grid is a surrogate: the Schwartz reality condition
//! relates cone values to anti-cone values that the grid does not carry, so
//! a pointwise involution `theta(f)(p) = conj(f(-p))` stands in for it. The
//! involution gates gauge scalars and the gradient/Maxwell sectors only;
//! sampled region functions represent real test functions by provenance
//! (`real_rep`) without a pointwise constraint, which is what keeps the
//! spacelike pairings and the Coulomb symplectic form nondegenerate.

pub mod cauchy;
pub mod grid;
pub mod netgb;
pub mod poincare;
pub mod sample;
pub mod spaces;

pub use grid::GBGrid;

use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// C^4-valued grid function; component `mu` of point `pt` sits at
/// `values[4*pt + mu]`.
#[derive(Debug, Clone)]
pub struct GBFunction {
    grid: Arc<GBGrid>,
    values: Vec<Complex64>,
    /// Provenance marker: the function stands for (the cone restriction of)
    /// a real position-space test function.
    pub real_rep: bool,
}

impl GBFunction {
    pub fn zero(grid: Arc<GBGrid>) -> Self {
        let n = grid.len();
        GBFunction {
            grid,
            values: vec![Complex64::new(0.0, 0.0); 4 * n],
            real_rep: false,
        }
    }

    pub fn from_fn(grid: Arc<GBGrid>, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let n = grid.len();
        let mut values = Vec::with_capacity(4 * n);
        for pt in 0..n {
            for mu in 0..4 {
                values.push(f(pt, mu));
            }
        }
        GBFunction {
            grid,
            values,
            real_rep: false,
        }
    }

    pub fn grid(&self) -> &Arc<GBGrid> {
        &self.grid
    }

    pub fn get(&self, pt: usize, mu: usize) -> Complex64 {
        self.values[4 * pt + mu]
    }

    pub fn set(&mut self, pt: usize, mu: usize, v: Complex64) {
        self.values[4 * pt + mu] = v;
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn check_same_grid(&self, other: &GBFunction) -> Result<()> {
        if !self.grid.same_grid(&other.grid) {
            return Err(Error::SpaceMismatch {
                left: format!("grid[{}]", self.grid.len()),
                right: format!("grid[{}]", other.grid.len()),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &GBFunction) -> Result<GBFunction> {
        self.check_same_grid(other)?;
        let mut out = self.clone();
        for (a, b) in out.values.iter_mut().zip(&other.values) {
            *a += b;
        }
        out.real_rep = self.real_rep && other.real_rep;
        Ok(out)
    }

    pub fn sub(&self, other: &GBFunction) -> Result<GBFunction> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> GBFunction {
        let mut out = self.clone();
        for v in out.values.iter_mut() {
            *v *= c;
        }
        out.real_rep = self.real_rep && c.im == 0.0;
        out
    }

    /// Antilinear mirror involution `theta(f)(p) = conj(f(-p))`.
    pub fn theta(&self) -> GBFunction {
        let mut out = GBFunction::zero(self.grid.clone());
        for pt in 0..self.grid.len() {
            let m = self.grid.mirror[pt];
            for mu in 0..4 {
                out.set(pt, mu, self.get(m, mu).conj());
            }
        }
        out.real_rep = self.real_rep;
        out
    }

    /// Pointwise fixedness under the mirror involution.
    pub fn is_theta_fixed(&self, tol: f64) -> bool {
        let t = self.theta();
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for (a, b) in self.values.iter().zip(&t.values) {
            num = num.max((a - b).norm());
            den = den.max(a.norm());
        }
        num <= tol * den.max(1.0)
    }

    /// Positive grid norm `sqrt(2 pi sum w |f|^2)`.
    pub fn weighted_norm(&self) -> f64 {
        positive_form(self, self)
            .map(|v| v.re.max(0.0).sqrt())
            .unwrap_or(0.0)
    }

    /// Divergence scalar `d(p) = p_0 f_0 - p . f_vec`; membership in the
    /// gauge-invariant space means this vanishes pointwise.
    pub fn divergence(&self) -> GridScalar {
        let g = &self.grid;
        let mut vals = Vec::with_capacity(g.len());
        for pt in 0..g.len() {
            let p = g.points[pt];
            let d = g.p0[pt] * self.get(pt, 0)
                - p[0] * self.get(pt, 1)
                - p[1] * self.get(pt, 2)
                - p[2] * self.get(pt, 3);
            vals.push(d);
        }
        GridScalar {
            grid: g.clone(),
            values: vals,
        }
    }

    /// Max divergence magnitude relative to the function scale.
    pub fn divergence_residual(&self) -> f64 {
        let d = self.divergence();
        let scale = self
            .values
            .iter()
            .map(|v| v.norm())
            .fold(0.0f64, f64::max)
            .max(1e-300);
        let pmax = self.grid.p0.iter().cloned().fold(0.0f64, f64::max);
        d.values.iter().map(|v| v.norm()).fold(0.0f64, f64::max) / (scale * pmax.max(1.0))
    }
}

/// Complex scalar grid function (gauge smearing functions live here).
#[derive(Debug, Clone)]
pub struct GridScalar {
    grid: Arc<GBGrid>,
    values: Vec<Complex64>,
}

impl GridScalar {
    pub fn zero(grid: Arc<GBGrid>) -> Self {
        let n = grid.len();
        GridScalar {
            grid,
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn from_fn(grid: Arc<GBGrid>, mut f: impl FnMut(usize) -> Complex64) -> Self {
        let n = grid.len();
        GridScalar {
            values: (0..n).map(f).collect(),
            grid,
        }
    }

    pub fn grid(&self) -> &Arc<GBGrid> {
        &self.grid
    }

    pub fn get(&self, pt: usize) -> Complex64 {
        self.values[pt]
    }

    pub fn set(&mut self, pt: usize, v: Complex64) {
        self.values[pt] = v;
    }

    pub fn is_theta_fixed(&self, tol: f64) -> bool {
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for pt in 0..self.grid.len() {
            let m = self.grid.mirror[pt];
            num = num.max((self.values[pt] - self.values[m].conj()).norm());
            den = den.max(self.values[pt].norm());
        }
        num <= tol * den.max(1.0)
    }

    /// The vector function `f_mu = (p_0, p_vec) * s`; complex multiples of
    /// these span the degenerate part of the gauge-invariant space.
    pub fn momentum_vector(&self) -> GBFunction {
        let g = &self.grid;
        GBFunction::from_fn(g.clone(), |pt, mu| {
            let s = self.values[pt];
            match mu {
                0 => g.p0[pt] * s,
                k => g.points[pt][k - 1] * s,
            }
        })
    }
}

/// Indefinite pairing `K(f, h)`; hermitian, antilinear in the first slot.
pub fn k_form(f: &GBFunction, h: &GBFunction) -> Result<Complex64> {
    f.check_same_grid(h)?;
    let g = f.grid();
    let mut acc = Complex64::new(0.0, 0.0);
    for pt in 0..g.len() {
        let w = g.weights[pt];
        let mut term = f.get(pt, 0).conj() * h.get(pt, 0);
        for k in 1..4 {
            term -= f.get(pt, k).conj() * h.get(pt, k);
        }
        acc += w * term;
    }
    Ok(-2.0 * PI * acc)
}

/// Symplectic form `B = Im K`; real and antisymmetric.
pub fn b_form(f: &GBFunction, h: &GBFunction) -> Result<f64> {
    Ok(k_form(f, h)?.im)
}

/// The positive inner product `(f, h) = K(f, J h)` built from the metric
/// flip `J = diag(-1, 1, 1, 1)`.
pub fn positive_form(f: &GBFunction, h: &GBFunction) -> Result<Complex64> {
    f.check_same_grid(h)?;
    let g = f.grid();
    let mut acc = Complex64::new(0.0, 0.0);
    for pt in 0..g.len() {
        let w = g.weights[pt];
        let mut term = Complex64::new(0.0, 0.0);
        for mu in 0..4 {
            term += f.get(pt, mu).conj() * h.get(pt, mu);
        }
        acc += w * term;
    }
    Ok(2.0 * PI * acc)
}

/// Metric flip on the grid: `(Jf)_0 = -f_0`, `(Jf)_l = f_l`. With the
/// `-2 pi` normalization of `K` this is the sign choice that makes
/// `(f, h) = K(f, J h)` positive definite.
pub fn metric_flip(f: &GBFunction) -> GBFunction {
    GBFunction::from_fn(f.grid().clone(), |pt, mu| {
        if mu == 0 {
            -f.get(pt, mu)
        } else {
            f.get(pt, mu)
        }
    })
}

/// Gauge coefficient `c(f, h) = sum_p w_p (p_mu f^mu)(p) conj(hhat(p))`;
/// linear in `f`, antilinear in `h`.
pub fn gauge_coeff(f: &GBFunction, h: &GridScalar) -> Result<Complex64> {
    if !f.grid().same_grid(h.grid()) {
        return Err(Error::SpaceMismatch {
            left: format!("grid[{}]", f.grid().len()),
            right: format!("grid[{}]", h.grid().len()),
        });
    }
    let g = f.grid();
    let d = f.divergence();
    let mut acc = Complex64::new(0.0, 0.0);
    for pt in 0..g.len() {
        acc += g.weights[pt] * d.get(pt) * h.get(pt).conj();
    }
    Ok(acc)
}

/// One-parameter gauge flow for a theta-real scalar smearing function.
///
/// `(T_h^t f) = f + i t pi (p hhat) c(f, h)`. The flow is affine-quadratic
/// in `h`, fixes the divergence-free functions pointwise, and preserves
/// both `K` and `B` exactly on the grid.
#[derive(Debug, Clone)]
pub struct GaugeMap {
    pub h: GridScalar,
    pub t: f64,
}

impl GaugeMap {
    pub fn new(h: GridScalar, t: f64) -> Result<Self> {
        if !h.is_theta_fixed(1e-10) {
            return Err(Error::InvalidArgument(
                "gauge smearing function must be theta-real".into(),
            ));
        }
        Ok(GaugeMap { h, t })
    }

    pub fn apply(&self, f: &GBFunction) -> Result<GBFunction> {
        gauge_apply(&self.h, self.t, f)
    }
}

/// `T_h^t f` without constructing a [`GaugeMap`] (no reality gate; the
/// algebraic identities hold for any scalar).
pub fn gauge_apply(h: &GridScalar, t: f64, f: &GBFunction) -> Result<GBFunction> {
    let c = gauge_coeff(f, h)?;
    let dir = h.momentum_vector();
    f.add(&dir.scale(Complex64::new(0.0, t * PI) * c))
}

/// `G_h(f) = T_h^1 f - f`.
pub fn gauge_g(h: &GridScalar, f: &GBFunction) -> Result<GBFunction> {
    let c = gauge_coeff(f, h)?;
    Ok(h.momentum_vector().scale(Complex64::new(0.0, PI) * c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::sample::{random_function, random_theta_scalar};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn k_single_point_value() {
        // one point of weight 1 held in a pair grid: adjust by hand
        let grid = GBGrid::pair([0.0, 0.0, 1.0]);
        // f = (1,0,0,0) supported on the +p point only
        let mut f = GBFunction::zero(grid.clone());
        f.set(1, 0, Complex64::new(1.0, 0.0));
        let k = k_form(&f, &f).unwrap();
        // metric sign: time component carries -2 pi w
        assert_relative_eq!(k.re, -2.0 * PI * grid.weights[1], epsilon = 1e-12);
        assert_relative_eq!(k.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn b_antisymmetric_and_zero_on_diagonal() {
        let grid = GBGrid::shell(3, 0.7, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let f = random_function(&grid, &mut rng);
            let h = random_function(&grid, &mut rng);
            let bfh = b_form(&f, &h).unwrap();
            let bhf = b_form(&h, &f).unwrap();
            assert_relative_eq!(bfh, -bhf, epsilon = 1e-12, max_relative = 1e-10);
            assert!(b_form(&f, &f).unwrap().abs() <= 1e-14 * (1.0 + bfh.abs()));
        }
    }

    #[test]
    fn momentum_vectors_are_k_null() {
        let grid = GBGrid::shell(3, 0.5, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = random_theta_scalar(&grid, &mut rng);
        let f = s.momentum_vector();
        let k = k_form(&f, &f).unwrap();
        assert!(k.norm() < 1e-12 * f.weighted_norm().powi(2).max(1.0));
        // and the vector is divergence free on the cone
        assert!(f.divergence_residual() < 1e-14);
    }

    #[test]
    fn gauge_coeff_vanishes_on_divergence_free_and_zero_scalar() {
        let grid = GBGrid::shell(3, 0.6, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_theta_scalar(&grid, &mut rng);
        let s = random_theta_scalar(&grid, &mut rng);
        let grad = s.momentum_vector();
        assert!(gauge_coeff(&grad, &h).unwrap().norm() < 1e-12);
        let f = random_function(&grid, &mut rng);
        let zero = GridScalar::zero(grid.clone());
        assert_eq!(gauge_coeff(&f, &zero).unwrap().norm(), 0.0);
    }

    #[test]
    fn gauge_coeff_matches_kahan_reversed_order() {
        let grid = GBGrid::shell(5, 0.4, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = random_function(&grid, &mut rng);
        let h = random_theta_scalar(&grid, &mut rng);
        let fast = gauge_coeff(&f, &h).unwrap();
        // independent oracle: Kahan-compensated summation in reverse order
        let d = f.divergence();
        let (mut sr, mut cr) = (0.0f64, 0.0f64);
        let (mut si, mut ci) = (0.0f64, 0.0f64);
        for pt in (0..grid.len()).rev() {
            let term = grid.weights[pt] * d.get(pt) * h.get(pt).conj();
            let y = term.re - cr;
            let t = sr + y;
            cr = (t - sr) - y;
            sr = t;
            let y = term.im - ci;
            let t = si + y;
            ci = (t - si) - y;
            si = t;
        }
        assert_relative_eq!(fast.re, sr, epsilon = 1e-13, max_relative = 1e-11);
        assert_relative_eq!(fast.im, si, epsilon = 1e-13, max_relative = 1e-11);
    }

    #[test]
    fn gauge_identities() {
        let grid = GBGrid::shell(3, 0.8, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..25 {
            let f = random_function(&grid, &mut rng);
            let k = random_function(&grid, &mut rng);
            let h = random_theta_scalar(&grid, &mut rng);
            let g = random_theta_scalar(&grid, &mut rng);
            let t: f64 = rng.gen_range(-2.0..2.0);
            let s: f64 = rng.gen_range(-2.0..2.0);
            let scale = f.weighted_norm() * k.weighted_norm() + 1.0;

            // (i) B(G_h f, k) = -B(f, G_h k)
            let lhs = b_form(&gauge_g(&h, &f).unwrap(), &k).unwrap();
            let rhs = -b_form(&f, &gauge_g(&h, &k).unwrap()).unwrap();
            assert!((lhs - rhs).abs() < 1e-10 * scale);

            // (ii) G_g(G_h(f)) = 0
            let ggh = gauge_g(&g, &gauge_g(&h, &f).unwrap()).unwrap();
            assert!(ggh.weighted_norm() < 1e-10 * (1.0 + f.weighted_norm()));

            // (iii) T_h^t T_k^s f = f + t G_h f + s G_k f
            let lhs =
                gauge_apply(&h, t, &gauge_apply(&g, s, &f).unwrap()).unwrap();
            let rhs = f
                .add(&gauge_g(&h, &f).unwrap().scale(Complex64::new(t, 0.0)))
                .unwrap()
                .add(&gauge_g(&g, &f).unwrap().scale(Complex64::new(s, 0.0)))
                .unwrap();
            assert!(lhs.sub(&rhs).unwrap().weighted_norm() < 1e-10 * scale);

            // quadratic scaling: T_{t h} f = f + t^2 (T_h f - f)
            let mut th = h.clone();
            for pt in 0..grid.len() {
                th.set(pt, th.get(pt) * t);
            }
            let lhs = gauge_apply(&th, 1.0, &f).unwrap();
            let rhs = f
                .add(
                    &gauge_apply(&h, 1.0, &f)
                        .unwrap()
                        .sub(&f)
                        .unwrap()
                        .scale(Complex64::new(t * t, 0.0)),
                )
                .unwrap();
            assert!(lhs.sub(&rhs).unwrap().weighted_norm() < 1e-10 * scale);
        }
    }

    #[test]
    fn gauge_flow_is_k_unitary_and_fixes_divergence_free() {
        let grid = GBGrid::shell(3, 0.5, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let f = random_function(&grid, &mut rng);
            let k = random_function(&grid, &mut rng);
            let h = random_theta_scalar(&grid, &mut rng);
            let t: f64 = rng.gen_range(-1.5..1.5);
            let tf = gauge_apply(&h, t, &f).unwrap();
            let tk = gauge_apply(&h, t, &k).unwrap();
            let before = k_form(&f, &k).unwrap();
            let after = k_form(&tf, &tk).unwrap();
            assert!((before - after).norm() < 1e-10 * (1.0 + before.norm()));
        }
        // t = 0 is the identity; divergence-free functions are fixed points
        let f = random_function(&grid, &mut rng);
        let h = random_theta_scalar(&grid, &mut rng);
        assert!(gauge_apply(&h, 0.0, &f)
            .unwrap()
            .sub(&f)
            .unwrap()
            .weighted_norm()
            .abs()
            < 1e-14);
        let s = random_theta_scalar(&grid, &mut rng);
        let grad = s.momentum_vector();
        let moved = gauge_apply(&h, 1.0, &grad).unwrap();
        assert!(moved.sub(&grad).unwrap().weighted_norm() < 1e-12);
    }

    #[test]
    fn gauge_map_requires_theta_real_scalar() {
        let grid = GBGrid::shell(3, 0.5, 0.0);
        let mut bad = GridScalar::zero(grid.clone());
        bad.set(0, Complex64::new(0.0, 1.0));
        // mirror left at zero: not theta-fixed
        assert!(GaugeMap::new(bad, 1.0).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let good = random_theta_scalar(&grid, &mut rng);
        assert!(GaugeMap::new(good, 1.0).is_ok());
    }
}

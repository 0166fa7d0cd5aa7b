//! Momentum grids on the mantle of the positive light cone.
//!
//! A grid is a finite set of nonzero spatial momenta, symmetric under
//! `p -> -p`, each carrying `p0 = |p|` and a midpoint quadrature weight
//! `w = dp^3 / p0`. The point at the origin is always excluded; the
//! delicate behaviour of test functions there has no finite surrogate.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

#[derive(Debug)]
pub struct GBGrid {
    /// Integer lattice coordinates of each point (deterministic order).
    pub coords: Vec<[i64; 3]>,
    /// Spatial momenta.
    pub points: Vec<[f64; 3]>,
    /// On-cone energies `|p|`.
    pub p0: Vec<f64>,
    /// Quadrature weights `spacing^3 / p0`.
    pub weights: Vec<f64>,
    /// Index of the mirrored point `-p`.
    pub mirror: Vec<usize>,
    pub spacing: f64,
    pub exclusion_radius: f64,
    index_of: BTreeMap<[i64; 3], usize>,
    /// Coarser parent for refinement studies.
    pub parent: Option<Arc<GBGrid>>,
    tol_quad: OnceLock<f64>,
}

fn shell_coords(n: usize, spacing: f64, exclusion_radius: f64) -> Vec<[i64; 3]> {
    assert!(n >= 3 && n % 2 == 1, "shell grids need an odd point count");
    assert!(spacing > 0.0);
    let h = (n as i64 - 1) / 2;
    let mut coords = Vec::new();
    for i in -h..=h {
        for j in -h..=h {
            for k in -h..=h {
                let p = [i as f64 * spacing, j as f64 * spacing, k as f64 * spacing];
                let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                if norm > exclusion_radius && norm > 0.0 {
                    coords.push([i, j, k]);
                }
            }
        }
    }
    coords
}

impl GBGrid {
    /// Cubic shell grid: `n^3` lattice points (n odd) scaled by `spacing`,
    /// minus a ball of radius `exclusion_radius` around the origin.
    pub fn shell(n: usize, spacing: f64, exclusion_radius: f64) -> Arc<GBGrid> {
        Arc::new(Self::from_coords(
            shell_coords(n, spacing, exclusion_radius),
            spacing,
            exclusion_radius,
            None,
        ))
    }

    /// Next refinement level: two more points per axis, extent grown like
    /// sqrt(n) so both the spacing and the truncation error shrink.
    pub fn refine(self: &Arc<Self>) -> Arc<GBGrid> {
        let n_old = self.axis_points();
        let n = n_old + 2;
        let extent_old = self.spacing * ((n_old - 1) / 2) as f64;
        let extent = extent_old * ((n as f64) / (n_old as f64)).sqrt();
        let spacing = extent / ((n - 1) / 2) as f64;
        let mut refined = Self::from_coords(
            shell_coords(n, spacing, self.exclusion_radius),
            spacing,
            self.exclusion_radius,
            Some(self.clone()),
        );
        refined.parent = Some(self.clone());
        Arc::new(refined)
    }

    fn axis_points(&self) -> usize {
        let h = self
            .coords
            .iter()
            .map(|c| c.iter().map(|v| v.abs()).max().unwrap())
            .max()
            .unwrap_or(1);
        (2 * h + 1) as usize
    }

    /// A two-point grid `{p, -p}`, the smallest mirror-symmetric mantle
    /// sample; used for Fock-layer checks where dimensions are combinatorial.
    pub fn pair(p: [f64; 3]) -> Arc<GBGrid> {
        let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        assert!(norm > 0.0);
        let coords = vec![[-1, 0, 0], [1, 0, 0]];
        let spacing = norm;
        let index_of: BTreeMap<[i64; 3], usize> =
            coords.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        Arc::new(GBGrid {
            coords,
            points: vec![[-p[0], -p[1], -p[2]], p],
            p0: vec![norm, norm],
            weights: vec![spacing.powi(3) / norm, spacing.powi(3) / norm],
            mirror: vec![1, 0],
            spacing,
            exclusion_radius: 0.0,
            index_of,
            parent: None,
            tol_quad: OnceLock::new(),
        })
    }

    /// Small mirror-symmetric grid with `m` point pairs, for Fock-layer work
    /// (one-particle dimensions stay combinatorial).
    pub fn fock_points(m: usize, spacing: f64) -> Arc<GBGrid> {
        assert!((1..=6).contains(&m), "fock grids hold at most 6 point pairs");
        let dirs: [[i64; 3]; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        let mut coords = Vec::new();
        for k in 0..m {
            let scale = (k / 3 + 1) as i64;
            let d = dirs[k % 3];
            coords.push([d[0] * scale, d[1] * scale, d[2] * scale]);
            coords.push([-d[0] * scale, -d[1] * scale, -d[2] * scale]);
        }
        Arc::new(Self::from_coords(coords, spacing, 0.0, None))
    }

    fn from_coords(
        coords: Vec<[i64; 3]>,
        spacing: f64,
        exclusion_radius: f64,
        parent: Option<Arc<GBGrid>>,
    ) -> GBGrid {
        let mut coords = coords;
        coords.sort_unstable();
        coords.dedup();
        let index_of: BTreeMap<[i64; 3], usize> =
            coords.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut points = Vec::with_capacity(coords.len());
        let mut p0 = Vec::with_capacity(coords.len());
        let mut weights = Vec::with_capacity(coords.len());
        let mut mirror = Vec::with_capacity(coords.len());
        for c in &coords {
            let p = [
                c[0] as f64 * spacing,
                c[1] as f64 * spacing,
                c[2] as f64 * spacing,
            ];
            let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            assert!(norm > 0.0, "grid contains the origin");
            points.push(p);
            p0.push(norm);
            weights.push(spacing.powi(3) / norm);
            let m = [-c[0], -c[1], -c[2]];
            mirror.push(*index_of.get(&m).expect("grid is not mirror symmetric"));
        }
        GBGrid {
            coords,
            points,
            p0,
            weights,
            mirror,
            spacing,
            exclusion_radius,
            index_of,
            parent,
            tol_quad: OnceLock::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of_coord(&self, c: &[i64; 3]) -> Option<usize> {
        self.index_of.get(c).copied()
    }

    pub fn same_grid(&self, other: &GBGrid) -> bool {
        std::ptr::eq(self, other) || (self.coords == other.coords && self.spacing == other.spacing)
    }

    /// Expected quadrature error scale, calibrated lazily by the Cauchy-data
    /// self-test (see [`crate::gb::cauchy`]). Causality thresholds are
    /// multiples of this value, never absolute numbers.
    pub fn tol_quad(self: &Arc<Self>) -> f64 {
        *self
            .tol_quad
            .get_or_init(|| crate::gb::cauchy::calibrate_tol_quad(self))
    }

    /// Override the calibrated quadrature tolerance (scenario files may pin
    /// it for reproducibility).
    pub fn set_tol_quad(self: &Arc<Self>, value: f64) {
        let _ = self.tol_quad.set(value);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shell_excludes_origin_and_is_mirror_symmetric() {
        let g = GBGrid::shell(3, 0.5, 0.0);
        assert_eq!(g.len(), 26);
        for i in 0..g.len() {
            let m = g.mirror[i];
            assert_eq!(g.mirror[m], i);
            for a in 0..3 {
                assert_eq!(g.points[i][a], -g.points[m][a]);
            }
            assert!(g.p0[i] > 0.0);
            assert!(g.weights[i] > 0.0);
        }
    }

    #[test]
    fn refine_tracks_parent_and_shrinks_spacing() {
        let g = GBGrid::shell(3, 0.5, 0.0);
        let f = g.refine();
        assert!(f.parent.is_some());
        assert!(f.spacing < g.spacing);
        assert!(f.len() > g.len());
    }

    #[test]
    fn pair_grid() {
        let g = GBGrid::pair([0.0, 0.0, 1.25]);
        assert_eq!(g.len(), 2);
        assert_eq!(g.mirror, vec![1, 0]);
    }
}

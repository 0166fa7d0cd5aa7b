//! Poincare action on grid functions: translations act by unit-modulus
//! phases and preserve every pairing exactly; spatial rotations in the
//! grid's point symmetry group act by index permutation plus component
//! rotation. Boosts do not preserve a finite mantle grid and are rejected.

use super::{GBFunction, GBGrid};
use crate::{Error, Result};
use num_complex::Complex64;
use std::sync::Arc;

/// Signed-permutation spatial rotation (an element of the cube group).
pub type GridRotation = [[i64; 3]; 3];

#[derive(Debug, Clone)]
pub enum PoincareElement {
    /// Translation by `a = (a0, a_vec)`.
    Translation([f64; 4]),
    /// Spatial rotation from the grid's point group.
    Rotation(GridRotation),
    /// Boosts are not supported on a fixed grid.
    Boost { rapidity: f64, axis: usize },
}

/// 90-degree rotation about the z axis: (x, y, z) -> (-y, x, z).
pub const ROT_Z_90: GridRotation = [[0, -1, 0], [1, 0, 0], [0, 0, 1]];

/// Determinant-one check plus row orthonormality for signed permutations.
pub fn is_valid_rotation(r: &GridRotation) -> bool {
    let mut det = 0i64;
    for i in 0..3 {
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        det += r[0][i] * (r[1][j] * r[2][k] - r[1][k] * r[2][j]);
    }
    if det != 1 {
        return false;
    }
    for row in r {
        if row.iter().map(|v| v * v).sum::<i64>() != 1 {
            return false;
        }
    }
    true
}

fn apply_rotation_coord(r: &GridRotation, c: &[i64; 3]) -> [i64; 3] {
    let mut out = [0i64; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i] += r[i][j] * c[j];
        }
    }
    out
}

fn inverse_rotation(r: &GridRotation) -> GridRotation {
    // orthogonal integer matrix: inverse = transpose
    let mut t = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = r[j][i];
        }
    }
    t
}

/// Apply a Poincare element: `(V_g f)(p) = e^{-i p a} Lambda f(Lambda^-1 p)`.
pub fn poincare_apply(g: &PoincareElement, f: &GBFunction) -> Result<GBFunction> {
    let grid: &Arc<GBGrid> = f.grid();
    match g {
        PoincareElement::Translation(a) => {
            let out = GBFunction::from_fn(grid.clone(), |pt, mu| {
                let p = grid.points[pt];
                let pa = grid.p0[pt] * a[0] - (p[0] * a[1] + p[1] * a[2] + p[2] * a[3]);
                Complex64::from_polar(1.0, -pa) * f.get(pt, mu)
            });
            Ok(out)
        }
        PoincareElement::Rotation(r) => {
            if !is_valid_rotation(r) {
                return Err(Error::UnsupportedAction(
                    "rotation matrix is not a signed permutation with det 1".into(),
                ));
            }
            let rinv = inverse_rotation(r);
            // every grid point must map to a grid point
            let mut source = Vec::with_capacity(grid.len());
            for pt in 0..grid.len() {
                let c = apply_rotation_coord(&rinv, &grid.coords[pt]);
                match grid.index_of_coord(&c) {
                    Some(idx) => source.push(idx),
                    None => {
                        return Err(Error::UnsupportedAction(format!(
                            "rotation maps {:?} outside the grid",
                            grid.coords[pt]
                        )))
                    }
                }
            }
            let out = GBFunction::from_fn(grid.clone(), |pt, mu| {
                let src = source[pt];
                if mu == 0 {
                    f.get(src, 0)
                } else {
                    let mut v = Complex64::new(0.0, 0.0);
                    for j in 0..3 {
                        if r[mu - 1][j] != 0 {
                            v += r[mu - 1][j] as f64 * f.get(src, j + 1);
                        }
                    }
                    v
                }
            });
            Ok(out)
        }
        PoincareElement::Boost { .. } => Err(Error::UnsupportedAction(
            "boosts do not preserve the momentum grid".into(),
        )),
    }
}

//! Gupta-Bleuler nets: region boxes with sampled test-function data,
//! assembled into a [`Net`] over the realified grid space, plus the
//! two-stage constraint chain.
//!
//! Per region the builder draws
//!
//! * vector bumps (the noncausal field content),
//! * divergence-free tensor smearings (exact members of the
//!   gauge-invariant space),
//! * scalar bumps whose momentum-vector directions are the local gauge
//!   constraints.
//!
//! Observable spaces are the gauge-fixed-point spans: tensor samples plus
//! the gauge directions themselves. Field spaces add the vector bumps.
//! Containment of boxes induces the poset order, and the spacelike relation
//! is derived from the interval geometry. Image regions under translations
//! or grid rotations carry exactly the mapped samples, so covariance checks
//! pass exactly.

use super::poincare::{poincare_apply, GridRotation, PoincareElement};
use super::sample::{
    region_sample, region_sample_divergence_free, region_sample_scalars, RegionBox,
};
use super::spaces::{from_real, gradient_space, p0_space, realified_space, span_subspace, to_real};
use super::{gauge_coeff, GBFunction, GBGrid, GridScalar};
use crate::net::{FieldCausalityReport, Net, NetAction, RegionId, RegionPoset};
use crate::symspace::{Subspace, SymplecticSpace};
use crate::{Error, Result};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A GB net together with the sample data that built it.
pub struct GBNet {
    pub net: Net,
    pub grid: Arc<GBGrid>,
    pub space: Arc<SymplecticSpace>,
    pub boxes: BTreeMap<RegionId, RegionBox>,
    /// Vector bumps per region (field content, used for the causality
    /// violation witness).
    pub vector_samples: BTreeMap<RegionId, Vec<GBFunction>>,
    /// Gauge scalar bumps per region.
    pub scalar_samples: BTreeMap<RegionId, Vec<GridScalar>>,
}

pub struct GBNetBuilder {
    grid: Arc<GBGrid>,
    space: Arc<SymplecticSpace>,
    samples: usize,
    rng: ChaCha8Rng,
    boxes: Vec<(RegionId, RegionBox)>,
    vector: BTreeMap<RegionId, Vec<GBFunction>>,
    tensor: BTreeMap<RegionId, Vec<GBFunction>>,
    scalars: BTreeMap<RegionId, Vec<GridScalar>>,
}

impl GBNetBuilder {
    pub fn new(grid: Arc<GBGrid>, samples: usize, seed: u64) -> Self {
        let space = realified_space(&grid);
        GBNetBuilder {
            grid,
            space,
            samples,
            rng: ChaCha8Rng::seed_from_u64(seed),
            boxes: Vec::new(),
            vector: BTreeMap::new(),
            tensor: BTreeMap::new(),
            scalars: BTreeMap::new(),
        }
    }

    /// Region with freshly drawn samples.
    pub fn add_region(&mut self, name: impl Into<String>, bx: RegionBox) -> Result<&mut Self> {
        let name = name.into();
        let v = region_sample(&self.grid, &bx, self.samples, &mut self.rng)?;
        let t = region_sample_divergence_free(&self.grid, &bx, self.samples, &mut self.rng)?;
        let s = region_sample_scalars(&self.grid, &bx, self.samples.max(1), &mut self.rng)?;
        self.insert(name, bx, v, t, s)
    }

    /// Image region under a translation: box and samples are translated
    /// exactly (phases of unit modulus), so covariance holds exactly.
    pub fn add_translated(
        &mut self,
        name: impl Into<String>,
        src: &str,
        a: [f64; 4],
    ) -> Result<&mut Self> {
        let bx = self
            .boxes
            .iter()
            .find(|(n, _)| n == src)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown source region {src}")))?
            .1
            .translate(a);
        let g = PoincareElement::Translation(a);
        let v = self.vector[src]
            .iter()
            .map(|f| poincare_apply(&g, f))
            .collect::<Result<Vec<_>>>()?;
        let t = self.tensor[src]
            .iter()
            .map(|f| poincare_apply(&g, f))
            .collect::<Result<Vec<_>>>()?;
        let s = self.scalars[src]
            .iter()
            .map(|h| translate_scalar(h, a))
            .collect();
        self.insert(name.into(), bx, v, t, s)
    }

    /// Image region under a grid rotation.
    pub fn add_rotated(
        &mut self,
        name: impl Into<String>,
        src: &str,
        r: GridRotation,
    ) -> Result<&mut Self> {
        let bx = self
            .boxes
            .iter()
            .find(|(n, _)| n == src)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown source region {src}")))?
            .1
            .rotate(&r)?;
        let g = PoincareElement::Rotation(r);
        let v = self.vector[src]
            .iter()
            .map(|f| poincare_apply(&g, f))
            .collect::<Result<Vec<_>>>()?;
        let t = self.tensor[src]
            .iter()
            .map(|f| poincare_apply(&g, f))
            .collect::<Result<Vec<_>>>()?;
        let s = self.scalars[src]
            .iter()
            .map(|h| rotate_scalar(h, &r))
            .collect::<Result<Vec<_>>>()?;
        self.insert(name.into(), bx, v, t, s)
    }

    /// Close a region's sample spans under a rotation that maps its box to
    /// itself, so the rotation action fixes the region exactly.
    pub fn close_under_rotation(&mut self, name: &str, r: GridRotation) -> Result<&mut Self> {
        let g = PoincareElement::Rotation(r);
        for _ in 0..3 {
            let vs: Vec<GBFunction> = self.vector[name]
                .iter()
                .map(|f| poincare_apply(&g, f))
                .collect::<Result<Vec<_>>>()?;
            let ts: Vec<GBFunction> = self.tensor[name]
                .iter()
                .map(|f| poincare_apply(&g, f))
                .collect::<Result<Vec<_>>>()?;
            let ss: Vec<GridScalar> = self.scalars[name]
                .iter()
                .map(|h| rotate_scalar(h, &r))
                .collect::<Result<Vec<_>>>()?;
            self.vector.get_mut(name).unwrap().extend(vs);
            self.tensor.get_mut(name).unwrap().extend(ts);
            self.scalars.get_mut(name).unwrap().extend(ss);
        }
        Ok(self)
    }

    fn insert(
        &mut self,
        name: RegionId,
        bx: RegionBox,
        v: Vec<GBFunction>,
        t: Vec<GBFunction>,
        s: Vec<GridScalar>,
    ) -> Result<&mut Self> {
        if self.boxes.iter().any(|(n, _)| *n == name) {
            return Err(Error::InvalidArgument(format!("duplicate region {name}")));
        }
        self.boxes.push((name.clone(), bx));
        self.vector.insert(name.clone(), v);
        self.tensor.insert(name.clone(), t);
        self.scalars.insert(name, s);
        Ok(self)
    }

    /// Assemble the net: order from box containment, spacelike pairs from
    /// the interval geometry, data spans accumulated over contained regions.
    pub fn build(self) -> Result<GBNet> {
        let names: Vec<RegionId> = self.boxes.iter().map(|(n, _)| n.clone()).collect();
        let mut leq = Vec::new();
        let mut spacelike = Vec::new();
        for (na, ba) in &self.boxes {
            for (nb, bb) in &self.boxes {
                if na == nb {
                    continue;
                }
                if bb.contains_box(ba) {
                    leq.push((na.clone(), nb.clone()));
                } else if !ba.contains_box(bb) && ba.is_spacelike(bb) {
                    spacelike.push((na.clone(), nb.clone()));
                }
            }
        }
        let poset = RegionPoset::new(names.clone(), &leq, &spacelike)?;

        let mut x = BTreeMap::new();
        let mut s = BTreeMap::new();
        let mut o = BTreeMap::new();
        for (name, bx) in &self.boxes {
            // everything supported in a contained region is also supported here
            let mut vecs: Vec<GBFunction> = Vec::new();
            let mut tens: Vec<GBFunction> = Vec::new();
            let mut gauge_dirs: Vec<GBFunction> = Vec::new();
            for (other, obx) in &self.boxes {
                if bx.contains_box(obx) {
                    vecs.extend(self.vector[other].iter().cloned());
                    tens.extend(self.tensor[other].iter().cloned());
                    for h in &self.scalars[other] {
                        let dir = h.momentum_vector();
                        gauge_dirs.push(dir.scale(Complex64::new(0.0, 1.0)));
                        gauge_dirs.push(dir);
                    }
                }
            }
            let s_sub = span_subspace(&self.space, &gauge_dirs)?;
            let mut o_fns = tens.clone();
            o_fns.extend(gauge_dirs.iter().cloned());
            let o_sub = span_subspace(&self.space, &o_fns)?;
            let mut x_fns = vecs;
            x_fns.extend(o_fns);
            let x_sub = span_subspace(&self.space, &x_fns)?;
            x.insert(name.clone(), x_sub);
            s.insert(name.clone(), s_sub);
            o.insert(name.clone(), o_sub);
        }
        let net = Net::new(poset, self.space.clone(), x, s, Some(o))?;
        Ok(GBNet {
            net,
            grid: self.grid,
            space: self.space,
            boxes: self.boxes.into_iter().collect(),
            vector_samples: self.vector,
            scalar_samples: self.scalars,
        })
    }
}

fn translate_scalar(h: &GridScalar, a: [f64; 4]) -> GridScalar {
    let grid = h.grid().clone();
    GridScalar::from_fn(grid.clone(), |pt| {
        let p = grid.points[pt];
        let pa = grid.p0[pt] * a[0] - (p[0] * a[1] + p[1] * a[2] + p[2] * a[3]);
        Complex64::from_polar(1.0, -pa) * h.get(pt)
    })
}

fn rotate_scalar(h: &GridScalar, r: &GridRotation) -> Result<GridScalar> {
    // reuse the vector rotation on a scalar packed into the time slot
    let grid = h.grid().clone();
    let packed = GBFunction::from_fn(grid.clone(), |pt, mu| {
        if mu == 0 {
            h.get(pt)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let rotated = poincare_apply(&PoincareElement::Rotation(*r), &packed)?;
    Ok(GridScalar::from_fn(grid, |pt| rotated.get(pt, 0)))
}

impl GBNet {
    /// Translation action on the net, defined on the regions that have an
    /// image region in the net.
    pub fn translation_action(
        &self,
        name: impl Into<String>,
        a: [f64; 4],
        region_map: BTreeMap<RegionId, RegionId>,
    ) -> NetAction {
        let grid = self.grid.clone();
        NetAction {
            name: name.into(),
            region_map,
            map: Arc::new(move |v| {
                let f = from_real(&grid, v);
                let g = poincare_apply(&PoincareElement::Translation(a), &f)
                    .expect("translations always apply");
                to_real(&g)
            }),
        }
    }

    /// Grid rotation action.
    pub fn rotation_action(
        &self,
        name: impl Into<String>,
        r: GridRotation,
        region_map: BTreeMap<RegionId, RegionId>,
    ) -> Result<NetAction> {
        let grid = self.grid.clone();
        // fail early if the rotation does not preserve the grid
        let probe = GBFunction::zero(grid.clone());
        poincare_apply(&PoincareElement::Rotation(r), &probe)?;
        Ok(NetAction {
            name: name.into(),
            region_map,
            map: Arc::new(move |v| {
                let f = from_real(&grid, v);
                let g = poincare_apply(&PoincareElement::Rotation(r), &f)
                    .expect("validated rotation");
                to_real(&g)
            }),
        })
    }

    /// Search for the field-level causality violation: the largest
    /// normalized gauge coefficient between vector samples of one region
    /// and gauge scalars of a spacelike partner.
    pub fn field_causality_witness(&self, threshold: f64) -> FieldCausalityReport {
        crate::net::check_field_causality_violation(&self.net, threshold, |a, b| {
            let fs = self.vector_samples.get(a)?;
            let hs = self.scalar_samples.get(b)?;
            let mut best = None::<f64>;
            for f in fs {
                for h in hs {
                    let hnorm = scalar_norm(h);
                    let denom = (f.weighted_norm() * hnorm).max(1e-300);
                    if let Ok(c) = gauge_coeff(f, h) {
                        let v = c.norm() / denom;
                        if best.map_or(true, |b| v > b) {
                            best = Some(v);
                        }
                    }
                }
            }
            best
        })
    }

    /// Normalized spacelike causality threshold for this net's grid.
    pub fn causality_tol(&self) -> f64 {
        10.0 * self.grid.tol_quad()
    }

    /// Largest normalized spacelike observable pairing (the quantity the
    /// weak-causality check bounds).
    pub fn max_spacelike_pairing(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for (a, b) in self.net.poset.spacelike_pairs() {
            let oa = self.net.observable_space(&a)?;
            let ob = self.net.observable_space(&b)?;
            for f in oa.basis_vectors() {
                let w = self.space.apply_form(&f);
                for g in ob.basis_vectors() {
                    worst = worst.max(w.dot(&g).abs());
                }
            }
        }
        Ok(worst)
    }
}

/// The two-stage GB constraint chain on the full grid: first the
/// real-gradient sector, then the whole radical. Nested, and stage
/// admissible because the radical pairs to zero with the gauge-invariant
/// space.
pub fn two_chain(grid: &Arc<GBGrid>) -> (Arc<SymplecticSpace>, Vec<Subspace>) {
    let space = realified_space(grid);
    let g = gradient_space(grid, &space);
    let p0 = p0_space(grid, &space);
    (space, vec![g, p0])
}

fn scalar_norm(h: &GridScalar) -> f64 {
    let grid = h.grid();
    let mut acc = 0.0;
    for pt in 0..grid.len() {
        acc += grid.weights[pt] * h.get(pt).norm_sqr();
    }
    (2.0 * std::f64::consts::PI * acc).sqrt()
}

/// A standard small GB net: a nested chain of three boxes around the
/// origin, four mutually spacelike satellite boxes related by the
/// quarter-turn about z, and translated images of the chain.
pub fn standard_gb_net(grid: &Arc<GBGrid>, samples: usize, seed: u64) -> Result<GBNet> {
    let p_max = grid.p0.iter().cloned().fold(0.0f64, f64::max);
    // bump scale adapted to the grid resolution
    let hw = 4.0 / p_max;
    let mut b = GBNetBuilder::new(grid.clone(), samples, seed);
    let chain0 = RegionBox::new([0.0; 4], [hw; 4])?;
    let chain1 = RegionBox::new([0.0; 4], [1.5 * hw; 4])?;
    let chain2 = RegionBox::new([0.0; 4], [2.25 * hw; 4])?;
    b.add_region("small", chain0)?;
    b.add_region("mid", chain1)?;
    b.add_region("big", chain2)?;
    for name in ["small", "mid", "big"] {
        b.close_under_rotation(name, super::poincare::ROT_Z_90)?;
    }
    let d = 16.0 * hw;
    let east = RegionBox::new([0.0, d, 0.0, 0.0], [hw; 4])?;
    b.add_region("east", east)?;
    b.add_rotated("north", "east", super::poincare::ROT_Z_90)?;
    b.add_rotated("west", "north", super::poincare::ROT_Z_90)?;
    b.add_rotated("south", "west", super::poincare::ROT_Z_90)?;
    // translated images of the chain (partial translation action)
    let shift = [0.6 * hw, 0.9 * hw, 0.0, 0.0];
    b.add_translated("small+t", "small", shift)?;
    b.add_translated("mid+t", "mid", shift)?;
    b.add_translated("big+t", "big", shift)?;
    b.build()
}

/// The standard actions carried by [`standard_gb_net`].
pub fn standard_gb_actions(net: &GBNet) -> Result<Vec<NetAction>> {
    let hw = net.boxes[&"small".to_string()].halfwidth[0];
    let shift = [0.6 * hw, 0.9 * hw, 0.0, 0.0];
    let translation = net.translation_action(
        "translation",
        shift,
        [
            ("small".to_string(), "small+t".to_string()),
            ("mid".to_string(), "mid+t".to_string()),
            ("big".to_string(), "big+t".to_string()),
        ]
        .into(),
    );
    let rotation = net.rotation_action(
        "rot-z-90",
        super::poincare::ROT_Z_90,
        [
            ("small".to_string(), "small".to_string()),
            ("mid".to_string(), "mid".to_string()),
            ("big".to_string(), "big".to_string()),
            ("east".to_string(), "north".to_string()),
            ("north".to_string(), "west".to_string()),
            ("west".to_string(), "south".to_string()),
            ("south".to_string(), "east".to_string()),
        ]
        .into(),
    )?;
    Ok(vec![translation, rotation])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{
        check_covariance, check_isotony, check_quotient_functoriality, check_reduction_isotony,
        check_weak_causality,
    };
    use crate::reduce::reduce_by_stages;

    fn small_net() -> GBNet {
        let grid = GBGrid::shell(3, 0.6, 0.0);
        standard_gb_net(&grid, 2, 7).unwrap()
    }

    #[test]
    fn gb_net_passes_weak_axioms() {
        let gb = small_net();
        assert!(check_isotony(&gb.net).unwrap().pass);
        let red = check_reduction_isotony(&gb.net).unwrap();
        assert!(red.pass, "{:?}", red.failures);
        let caus = check_weak_causality(&gb.net, gb.causality_tol()).unwrap();
        assert!(caus.pass, "{:?}", caus.failures);
        let fun = check_quotient_functoriality(&gb.net, gb.causality_tol()).unwrap();
        assert!(fun.pass, "{:?}", fun.failures);
    }

    #[test]
    fn gb_net_covariant_under_standard_actions() {
        let gb = small_net();
        let actions = standard_gb_actions(&gb).unwrap();
        let rep = check_covariance(&gb.net, &actions).unwrap();
        assert!(rep.pass, "{:?}", rep.failures);
    }

    #[test]
    fn field_witness_found_while_observables_commute() {
        let gb = small_net();
        let rep = gb.field_causality_witness(gb.causality_tol());
        assert!(rep.witness.is_some(), "no field-level witness found");
        let (_, _, c) = rep.witness.clone().unwrap();
        assert!(c > rep.threshold);
    }

    #[test]
    fn two_chain_staged_equals_single() {
        let grid = GBGrid::shell(3, 0.6, 0.0);
        let (space, chain) = two_chain(&grid);
        let m = grid.len();
        assert_eq!(chain[0].rank(), m);
        assert_eq!(chain[1].rank(), 2 * m);
        let staged = reduce_by_stages(&space, &chain).unwrap();
        assert_eq!(staged.final_dim(), 4 * m);
        assert_eq!(staged.single.physical_dim, 4 * m);
        assert!(staged.iso_ok(1e-10), "residual {}", staged.iso_form_residual);
    }
}

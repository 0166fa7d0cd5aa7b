//! Local nets of constrained symplectic data over a finite region poset,
//! with checkers for the weak net axioms: isotony, reduction isotony, weak
//! causality and covariance, plus the functoriality of the derived quotient
//! net and the field-level causality-violation witness.
//!
//! All checkers are report based: a failing pair becomes a report entry
//! with its residual, never a panic.

use crate::reduce::equivalent_constraints;
use crate::symspace::{quotient, QuotientSpace, Subspace, SymplecticSpace};
use crate::{Error, Result};
use nalgebra::DVector;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

pub type RegionId = String;

/// Finite poset of regions with a spacelike relation and optional group
/// actions permuting the regions.
#[derive(Debug, Clone)]
pub struct RegionPoset {
    regions: Vec<RegionId>,
    index: BTreeMap<RegionId, usize>,
    leq: BTreeSet<(usize, usize)>,
    spacelike: BTreeSet<(usize, usize)>,
}

impl RegionPoset {
    pub fn new(
        regions: Vec<RegionId>,
        leq_pairs: &[(RegionId, RegionId)],
        spacelike_pairs: &[(RegionId, RegionId)],
    ) -> Result<Self> {
        let index: BTreeMap<RegionId, usize> = regions
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
        if index.len() != regions.len() {
            return Err(Error::InvalidArgument("duplicate region names".into()));
        }
        let mut leq = BTreeSet::new();
        for i in 0..regions.len() {
            leq.insert((i, i));
        }
        let look = |r: &RegionId| -> Result<usize> {
            index
                .get(r)
                .copied()
                .ok_or_else(|| Error::InvalidArgument(format!("unknown region {r}")))
        };
        for (a, b) in leq_pairs {
            leq.insert((look(a)?, look(b)?));
        }
        // verify partial order axioms
        for &(a, b) in &leq {
            if a != b && leq.contains(&(b, a)) {
                return Err(Error::InvalidArgument(format!(
                    "order is not antisymmetric on ({}, {})",
                    regions[a], regions[b]
                )));
            }
            for &(c, d) in &leq {
                if c == b && !leq.contains(&(a, d)) {
                    return Err(Error::InvalidArgument(format!(
                        "order is not transitively closed: {} <= {} <= {}",
                        regions[a], regions[b], regions[d]
                    )));
                }
            }
        }
        let mut spacelike = BTreeSet::new();
        for (a, b) in spacelike_pairs {
            let (i, j) = (look(a)?, look(b)?);
            let key = (i.min(j), i.max(j));
            if leq.contains(&(i, j)) || leq.contains(&(j, i)) {
                return Err(Error::InvalidArgument(format!(
                    "spacelike pair ({}, {}) is comparable",
                    regions[i], regions[j]
                )));
            }
            spacelike.insert(key);
        }
        Ok(RegionPoset {
            regions,
            index,
            leq,
            spacelike,
        })
    }

    pub fn regions(&self) -> &[RegionId] {
        &self.regions
    }

    pub fn leq(&self, a: &RegionId, b: &RegionId) -> bool {
        match (self.index.get(a), self.index.get(b)) {
            (Some(&i), Some(&j)) => self.leq.contains(&(i, j)),
            _ => false,
        }
    }

    /// Strictly comparable ordered pairs (a < b).
    pub fn strict_pairs(&self) -> Vec<(RegionId, RegionId)> {
        self.leq
            .iter()
            .filter(|(a, b)| a != b)
            .map(|&(a, b)| (self.regions[a].clone(), self.regions[b].clone()))
            .collect()
    }

    pub fn spacelike_pairs(&self) -> Vec<(RegionId, RegionId)> {
        self.spacelike
            .iter()
            .map(|&(a, b)| (self.regions[a].clone(), self.regions[b].clone()))
            .collect()
    }

    /// Chains a < b < c for the functoriality check.
    pub fn strict_triples(&self) -> Vec<(RegionId, RegionId, RegionId)> {
        let mut out = Vec::new();
        for &(a, b) in &self.leq {
            if a == b {
                continue;
            }
            for &(c, d) in &self.leq {
                if c == b && c != d {
                    out.push((
                        self.regions[a].clone(),
                        self.regions[b].clone(),
                        self.regions[d].clone(),
                    ));
                }
            }
        }
        out
    }
}

/// Field, constraint and (derived) observable spaces per region.
#[derive(Debug, Clone)]
pub struct Net {
    pub poset: RegionPoset,
    pub space: Arc<SymplecticSpace>,
    x: BTreeMap<RegionId, Subspace>,
    s: BTreeMap<RegionId, Subspace>,
    o: BTreeMap<RegionId, Subspace>,
}

impl Net {
    /// Build a net; observable spaces are taken as supplied (the
    /// gauge-fixed-point spaces of a model net) or derived as
    /// `X(B) intersect commutant(s(B))`.
    pub fn new(
        poset: RegionPoset,
        space: Arc<SymplecticSpace>,
        x: BTreeMap<RegionId, Subspace>,
        s: BTreeMap<RegionId, Subspace>,
        o: Option<BTreeMap<RegionId, Subspace>>,
    ) -> Result<Self> {
        for r in poset.regions() {
            let xr = x
                .get(r)
                .ok_or_else(|| Error::InvalidArgument(format!("missing field space for {r}")))?;
            let sr = s
                .get(r)
                .ok_or_else(|| Error::InvalidArgument(format!("missing constraints for {r}")))?;
            if !xr.contains(sr)? {
                return Err(Error::InvalidArgument(format!(
                    "constraints of {r} are not contained in its field space"
                )));
            }
        }
        let o = match o {
            Some(o) => o,
            None => {
                let mut derived = BTreeMap::new();
                for r in poset.regions() {
                    let xr = &x[r];
                    let sr = &s[r];
                    derived.insert(r.clone(), xr.intersect(&sr.commutant())?);
                }
                derived
            }
        };
        Ok(Net { poset, space, x, s, o })
    }

    pub fn field_space(&self, r: &RegionId) -> Result<&Subspace> {
        self.x
            .get(r)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown region {r}")))
    }

    pub fn constraint_space(&self, r: &RegionId) -> Result<&Subspace> {
        self.s
            .get(r)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown region {r}")))
    }

    pub fn observable_space(&self, r: &RegionId) -> Result<&Subspace> {
        self.o
            .get(r)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown region {r}")))
    }

    /// Local derived quotient: observables factored by the constraint
    /// directions they contain.
    pub fn local_quotient(&self, r: &RegionId) -> Result<QuotientSpace> {
        let o = self.observable_space(r)?;
        let kernel = self.constraint_space(r)?.intersect(o)?;
        quotient(o, &kernel)
    }
}

/// Result of one axiom checker.
#[derive(Debug, Clone)]
pub struct NetCheck {
    pub id: &'static str,
    pub pass: bool,
    pub max_residual: f64,
    pub tol: f64,
    /// Sorted per-pair failure descriptions.
    pub failures: Vec<String>,
}

impl NetCheck {
    fn finish(mut self) -> Self {
        self.failures.sort();
        self.pass = self.failures.is_empty();
        self
    }
}

fn inclusion_residual(inner: &Subspace, outer: &Subspace) -> f64 {
    inner
        .basis_vectors()
        .map(|v| outer.membership_residual(&v))
        .fold(0.0f64, f64::max)
}

fn equality_residual(a: &Subspace, b: &Subspace) -> f64 {
    inclusion_residual(a, b).max(inclusion_residual(b, a))
}

/// Isotony: fields grow with the region and constraints restrict exactly,
/// `s(B1) = s(B2) intersect X(B1)` for comparable pairs.
pub fn check_isotony(net: &Net) -> Result<NetCheck> {
    let tol = net.space.tol.residual.sqrt();
    let mut check = NetCheck {
        id: "net.isotony",
        pass: true,
        max_residual: 0.0,
        tol,
        failures: Vec::new(),
    };
    for (a, b) in net.poset.strict_pairs() {
        let (xa, xb) = (net.field_space(&a)?, net.field_space(&b)?);
        let r1 = inclusion_residual(xa, xb);
        let expected = net.constraint_space(&b)?.intersect(xa)?;
        let r2 = equality_residual(net.constraint_space(&a)?, &expected);
        let r = r1.max(r2);
        check.max_residual = check.max_residual.max(r);
        if r > tol {
            check
                .failures
                .push(format!("({a}, {b}): residual {r:.3e}"));
        }
    }
    Ok(check.finish())
}

/// Reduction isotony, certified by the commuting-constraint mechanism:
/// observables grow with the region, and every observable of the smaller
/// region pairs to zero with every constraint of the larger one (so Dirac
/// states extend as product states).
pub fn check_reduction_isotony(net: &Net) -> Result<NetCheck> {
    let tol = net.space.tol.residual.sqrt();
    let mut check = NetCheck {
        id: "net.reduction_isotony",
        pass: true,
        max_residual: 0.0,
        tol,
        failures: Vec::new(),
    };
    for (a, b) in net.poset.strict_pairs() {
        let (oa, ob) = (net.observable_space(&a)?, net.observable_space(&b)?);
        let r1 = inclusion_residual(oa, ob);
        let sb = net.constraint_space(&b)?;
        let mut r2 = 0.0f64;
        for f in oa.basis_vectors() {
            let w = net.space.apply_form(&f);
            for g in sb.basis_vectors() {
                r2 = r2.max(w.dot(&g).abs());
            }
        }
        let form_scale = form_scale(net, oa).max(1.0);
        let r = r1.max(r2 / form_scale);
        check.max_residual = check.max_residual.max(r);
        if r > tol {
            check
                .failures
                .push(format!("({a}, {b}): residual {r:.3e}"));
        }
    }
    Ok(check.finish())
}

fn form_scale(net: &Net, s: &Subspace) -> f64 {
    s.basis_vectors()
        .map(|v| net.space.apply_form(&v).amax())
        .fold(0.0f64, f64::max)
}

/// Weak causality: observables of spacelike regions pair to zero within
/// `tol` (which for model nets is a multiple of the quadrature tolerance).
pub fn check_weak_causality(net: &Net, tol: f64) -> Result<NetCheck> {
    let mut check = NetCheck {
        id: "net.weak_causality",
        pass: true,
        max_residual: 0.0,
        tol,
        failures: Vec::new(),
    };
    if net.poset.spacelike_pairs().is_empty() {
        return Err(Error::PreconditionViolation(
            "no spacelike pairs declared".into(),
        ));
    }
    for (a, b) in net.poset.spacelike_pairs() {
        let (oa, ob) = (net.observable_space(&a)?, net.observable_space(&b)?);
        let mut r = 0.0f64;
        for f in oa.basis_vectors() {
            let w = net.space.apply_form(&f);
            for g in ob.basis_vectors() {
                r = r.max(w.dot(&g).abs());
            }
        }
        check.max_residual = check.max_residual.max(r);
        if r > tol {
            check
                .failures
                .push(format!("({a}, {b}): |B| = {r:.3e} > {tol:.3e}"));
        }
    }
    Ok(check.finish())
}

/// Outcome of the field-level causality probe.
#[derive(Debug, Clone)]
pub struct FieldCausalityReport {
    /// `(region pair, |c(f,h)|)` when a witness was found.
    pub witness: Option<(RegionId, RegionId, f64)>,
    pub threshold: f64,
}

/// Search for a field-level causality violation: a spacelike pair whose
/// field data produce a nonvanishing gauge coefficient. The model supplies
/// the search through `witness_search` (abstract nets without gauge data
/// return `None`, reported as no witness, not as a failure).
pub fn check_field_causality_violation<F>(
    net: &Net,
    threshold: f64,
    witness_search: F,
) -> FieldCausalityReport
where
    F: Fn(&RegionId, &RegionId) -> Option<f64>,
{
    let mut best: Option<(RegionId, RegionId, f64)> = None;
    for (a, b) in net.poset.spacelike_pairs() {
        for (x, y) in [(&a, &b), (&b, &a)] {
            if let Some(c) = witness_search(x, y) {
                if c > threshold && best.as_ref().map_or(true, |w| c > w.2) {
                    best = Some((x.clone(), y.clone(), c));
                }
            }
        }
    }
    FieldCausalityReport {
        witness: best,
        threshold,
    }
}

/// A symplectic group action on the net: a region permutation plus the
/// linear map implementing it on the global space.
pub struct NetAction {
    pub name: String,
    pub region_map: BTreeMap<RegionId, RegionId>,
    pub map: Arc<dyn Fn(&DVector<f64>) -> DVector<f64> + Send + Sync>,
}

impl std::fmt::Debug for NetAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NetAction")
            .field("name", &self.name)
            .field("region_map", &self.region_map)
            .finish()
    }
}

fn map_subspace(net: &Net, action: &NetAction, s: &Subspace) -> Result<Subspace> {
    let cols: Vec<DVector<f64>> = s.basis_vectors().map(|v| (action.map)(&v)).collect();
    if cols.is_empty() {
        return Ok(net.space.zero_subspace());
    }
    net.space.subspace(&cols)
}

/// Covariance in the weak sense: the action is symplectic, maps field
/// spaces onto the image region's field spaces, carries constraints to an
/// equivalent constraint set, and hence maps observables onto observables.
///
/// A finite poset cannot be closed under a genuine translation, so an
/// action's `region_map` may cover only part of the net; the checks run on
/// that domain. Mapping a region to a name outside the poset is an error.
pub fn check_covariance(net: &Net, actions: &[NetAction]) -> Result<NetCheck> {
    let tol = net.space.tol.residual.sqrt();
    let mut check = NetCheck {
        id: "net.covariance",
        pass: true,
        max_residual: 0.0,
        tol,
        failures: Vec::new(),
    };
    for action in actions {
        if action.region_map.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "action {} is defined on no region",
                action.name
            )));
        }
        for target in action.region_map.values() {
            if !net.poset.regions().contains(target) {
                return Err(Error::InvalidArgument(format!(
                    "action {} maps onto unknown region {target}",
                    action.name
                )));
            }
        }
        // (a) the map preserves the form on field-space probes
        for r in action.region_map.keys() {
            let x = net.field_space(r)?;
            let vs: Vec<DVector<f64>> = x.basis_vectors().take(6).collect();
            for f in &vs {
                let vf = (action.map)(f);
                for h in &vs {
                    let vh = (action.map)(h);
                    let before = net.space.form_eval(f, h)?;
                    let after = net.space.form_eval(&vf, &vh)?;
                    let resid = (before - after).abs() / before.abs().max(1.0);
                    check.max_residual = check.max_residual.max(resid);
                    if resid > 1e-10 {
                        check.failures.push(format!(
                            "{}: not symplectic on {} (defect {:.3e})",
                            action.name, r, resid
                        ));
                    }
                }
            }
        }
        // (b)-(d) region covariance
        for (r, target) in &action.region_map {
            let vx = map_subspace(net, action, net.field_space(r)?)?;
            let rx = equality_residual(&vx, net.field_space(target)?);
            check.max_residual = check.max_residual.max(rx);
            if rx > tol {
                check.failures.push(format!(
                    "{}: X({r}) does not map onto X({target}) (residual {rx:.3e})",
                    action.name
                ));
            }
            let vs = map_subspace(net, action, net.constraint_space(r)?)?;
            match equivalent_constraints(&vs, net.constraint_space(target)?) {
                Ok(true) => {}
                Ok(false) | Err(_) => check.failures.push(format!(
                    "{}: constraints of {r} are not equivalent to those of {target}",
                    action.name
                )),
            }
            let vo = map_subspace(net, action, net.observable_space(r)?)?;
            let ro = equality_residual(&vo, net.observable_space(target)?);
            check.max_residual = check.max_residual.max(ro);
            if ro > tol {
                check.failures.push(format!(
                    "{}: O({r}) does not map onto O({target}) (residual {ro:.3e})",
                    action.name
                ));
            }
        }
    }
    Ok(check.finish())
}

/// Functoriality of the derived quotient net: for chains a < b < c the
/// composed lift-project inclusion maps agree, and lifted representatives
/// of spacelike regions pair to zero.
pub fn check_quotient_functoriality(net: &Net, causality_tol: f64) -> Result<NetCheck> {
    let mut check = NetCheck {
        id: "net.quotient_functoriality",
        pass: true,
        max_residual: 0.0,
        tol: 1e-10,
        failures: Vec::new(),
    };
    let mut quotients: BTreeMap<RegionId, QuotientSpace> = BTreeMap::new();
    for r in net.poset.regions() {
        quotients.insert(r.clone(), net.local_quotient(r)?);
    }
    // inclusion map R(a) -> R(b): lift a representative, project into b's
    let incl = |qa: &QuotientSpace, qb: &QuotientSpace| -> nalgebra::DMatrix<f64> {
        qb.lift_matrix().transpose() * qa.lift_matrix()
    };
    for (a, b, c) in net.poset.strict_triples() {
        let (qa, qb, qc) = (&quotients[&a], &quotients[&b], &quotients[&c]);
        let direct = incl(qa, qc);
        let composed = incl(qb, qc) * incl(qa, qb);
        let resid = (&direct - &composed).amax();
        check.max_residual = check.max_residual.max(resid);
        if resid > check.tol {
            check
                .failures
                .push(format!("({a}, {b}, {c}): composition defect {resid:.3e}"));
        }
        // the inclusions must also preserve the factored forms
        let mapped = direct.transpose() * qc.factored_form() * &direct;
        let fresid = (&mapped - qa.factored_form()).amax();
        check.max_residual = check.max_residual.max(fresid);
        if fresid > check.tol.max(causality_tol) {
            check
                .failures
                .push(format!("({a}, {b}, {c}): form defect {fresid:.3e}"));
        }
    }
    // reduced commutators vanish at spacelike separation
    for (a, b) in net.poset.spacelike_pairs() {
        let (qa, qb) = (&quotients[&a], &quotients[&b]);
        let mut r = 0.0f64;
        for i in 0..qa.rep_dim() {
            let f = qa.lift(&unit(qa.rep_dim(), i));
            let w = net.space.apply_form(&f);
            for j in 0..qb.rep_dim() {
                let h = qb.lift(&unit(qb.rep_dim(), j));
                r = r.max(w.dot(&h).abs());
            }
        }
        check.max_residual = check.max_residual.max(r);
        if r > causality_tol {
            check
                .failures
                .push(format!("({a}, {b}): reduced commutator {r:.3e}"));
        }
    }
    Ok(check.finish())
}

fn unit(n: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(n);
    v[i] = 1.0;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(space: &Arc<SymplecticSpace>, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(space.dim());
        v[i] = 1.0;
        v
    }

    fn two_region_poset() -> RegionPoset {
        RegionPoset::new(
            vec!["a".into(), "b".into()],
            &[("a".into(), "b".into())],
            &[],
        )
        .unwrap()
    }

    #[test]
    fn poset_validation() {
        assert!(RegionPoset::new(
            vec!["a".into(), "b".into()],
            &[("a".into(), "b".into()), ("b".into(), "a".into())],
            &[],
        )
        .is_err());
        // spacelike pair must not be comparable
        assert!(RegionPoset::new(
            vec!["a".into(), "b".into()],
            &[("a".into(), "b".into())],
            &[("a".into(), "b".into())],
        )
        .is_err());
        // transitivity must be closed
        assert!(RegionPoset::new(
            vec!["a".into(), "b".into(), "c".into()],
            &[("a".into(), "b".into()), ("b".into(), "c".into())],
            &[],
        )
        .is_err());
        assert!(RegionPoset::new(
            vec!["a".into(), "b".into(), "c".into()],
            &[
                ("a".into(), "b".into()),
                ("b".into(), "c".into()),
                ("a".into(), "c".into())
            ],
            &[],
        )
        .is_ok());
    }

    #[test]
    fn single_region_isotony_trivially_passes() {
        let space = SymplecticSpace::darboux(2);
        let poset = RegionPoset::new(vec!["a".into()], &[], &[]).unwrap();
        let x: BTreeMap<_, _> = [("a".to_string(), space.full_subspace())].into();
        let s: BTreeMap<_, _> = [("a".to_string(), space.zero_subspace())].into();
        let net = Net::new(poset, space.clone(), x, s, None).unwrap();
        assert!(check_isotony(&net).unwrap().pass);
        // derived observables: s = 0 gives o = X
        assert_eq!(net.observable_space(&"a".into()).unwrap().rank(), 4);
    }

    #[test]
    fn derived_observables_match_commutant() {
        let space = SymplecticSpace::darboux(2);
        let poset = RegionPoset::new(vec!["a".into()], &[], &[]).unwrap();
        let x: BTreeMap<_, _> = [("a".to_string(), space.full_subspace())].into();
        let s: BTreeMap<_, _> =
            [("a".to_string(), space.subspace(&[e(&space, 0)]).unwrap())].into();
        let net = Net::new(poset, space.clone(), x, s, None).unwrap();
        let o = net.observable_space(&"a".into()).unwrap();
        let expected = space
            .subspace(&[e(&space, 0), e(&space, 2), e(&space, 3)])
            .unwrap();
        assert!(o.equal(&expected).unwrap());
    }

    #[test]
    fn isotony_violation_detected() {
        let space = SymplecticSpace::darboux(2);
        let poset = two_region_poset();
        let x: BTreeMap<_, _> = [
            ("a".to_string(), space.subspace(&[e(&space, 0), e(&space, 2)]).unwrap()),
            ("b".to_string(), space.full_subspace()),
        ]
        .into();
        // s(b) cap X(a) = span{q1} but s(a) = 0
        let s: BTreeMap<_, _> = [
            ("a".to_string(), space.zero_subspace()),
            ("b".to_string(), space.subspace(&[e(&space, 0)]).unwrap()),
        ]
        .into();
        let net = Net::new(poset, space.clone(), x, s, None).unwrap();
        let rep = check_isotony(&net).unwrap();
        assert!(!rep.pass);
        assert!(rep.failures[0].contains("(a, b)"));
    }

    #[test]
    fn reduction_isotony_violation_detected() {
        let space = SymplecticSpace::darboux(2);
        let poset = two_region_poset();
        // observable of a pairs with constraint of b: B(q2, p2) = 1
        let x: BTreeMap<_, _> = [
            ("a".to_string(), space.subspace(&[e(&space, 2)]).unwrap()),
            ("b".to_string(), space.full_subspace()),
        ]
        .into();
        let s: BTreeMap<_, _> = [
            ("a".to_string(), space.zero_subspace()),
            ("b".to_string(), space.subspace(&[e(&space, 3)]).unwrap()),
        ]
        .into();
        let net = Net::new(poset, space.clone(), x, s, None).unwrap();
        assert!(check_isotony(&net).unwrap().pass);
        let rep = check_reduction_isotony(&net).unwrap();
        assert!(!rep.pass);
    }

    #[test]
    fn causality_checks() {
        let space = SymplecticSpace::darboux(2);
        let poset = RegionPoset::new(
            vec!["a".into(), "b".into()],
            &[],
            &[("a".into(), "b".into())],
        )
        .unwrap();
        // disjoint Darboux blocks commute exactly
        let x: BTreeMap<_, _> = [
            ("a".to_string(), space.subspace(&[e(&space, 0), e(&space, 1)]).unwrap()),
            ("b".to_string(), space.subspace(&[e(&space, 2), e(&space, 3)]).unwrap()),
        ]
        .into();
        let s: BTreeMap<_, _> = [
            ("a".to_string(), space.zero_subspace()),
            ("b".to_string(), space.zero_subspace()),
        ]
        .into();
        let net = Net::new(poset.clone(), space.clone(), x, s, None).unwrap();
        let rep = check_weak_causality(&net, 1e-12).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.max_residual, 0.0);

        // a timelike pair submitted as spacelike fails with residual ~ |B|
        let x: BTreeMap<_, _> = [
            ("a".to_string(), space.subspace(&[e(&space, 0)]).unwrap()),
            ("b".to_string(), space.subspace(&[e(&space, 1)]).unwrap()),
        ]
        .into();
        let s: BTreeMap<_, _> = [
            ("a".to_string(), space.zero_subspace()),
            ("b".to_string(), space.zero_subspace()),
        ]
        .into();
        let net = Net::new(poset, space.clone(), x, s, None).unwrap();
        let rep = check_weak_causality(&net, 1e-12).unwrap();
        assert!(!rep.pass);
        assert!((rep.max_residual - 1.0).abs() < 1e-12);
    }

    #[test]
    fn covariance_identity_passes_scaling_fails() {
        let space = SymplecticSpace::darboux(1);
        let poset = RegionPoset::new(vec!["a".into()], &[], &[]).unwrap();
        let x: BTreeMap<_, _> = [("a".to_string(), space.full_subspace())].into();
        let s: BTreeMap<_, _> = [("a".to_string(), space.zero_subspace())].into();
        let net = Net::new(poset, space.clone(), x, s, None).unwrap();
        let id_action = NetAction {
            name: "identity".into(),
            region_map: [("a".to_string(), "a".to_string())].into(),
            map: Arc::new(|v: &DVector<f64>| v.clone()),
        };
        assert!(check_covariance(&net, &[id_action]).unwrap().pass);
        let scaling = NetAction {
            name: "scale2".into(),
            region_map: [("a".to_string(), "a".to_string())].into(),
            map: Arc::new(|v: &DVector<f64>| v * 2.0),
        };
        let rep = check_covariance(&net, &[scaling]).unwrap();
        assert!(!rep.pass);
        assert!(rep.failures[0].contains("not symplectic"));
    }

    #[test]
    fn field_causality_probe_reports_no_witness_without_gauge_data() {
        let space = SymplecticSpace::darboux(2);
        let poset = RegionPoset::new(
            vec!["a".into(), "b".into()],
            &[],
            &[("a".into(), "b".into())],
        )
        .unwrap();
        let x: BTreeMap<_, _> = [
            ("a".to_string(), space.subspace(&[e(&space, 0), e(&space, 1)]).unwrap()),
            ("b".to_string(), space.subspace(&[e(&space, 2), e(&space, 3)]).unwrap()),
        ]
        .into();
        let s: BTreeMap<_, _> = [
            ("a".to_string(), space.zero_subspace()),
            ("b".to_string(), space.zero_subspace()),
        ]
        .into();
        let net = Net::new(poset, space.clone(), x, s, None).unwrap();
        let rep = check_field_causality_violation(&net, 1e-6, |_, _| None);
        assert!(rep.witness.is_none());
    }

    #[test]
    fn functoriality_on_a_three_chain() {
        let space = SymplecticSpace::darboux(3);
        let poset = RegionPoset::new(
            vec!["a".into(), "b".into(), "c".into()],
            &[
                ("a".into(), "b".into()),
                ("b".into(), "c".into()),
                ("a".into(), "c".into()),
            ],
            &[],
        )
        .unwrap();
        let q3 = e(&space, 4);
        let x: BTreeMap<_, _> = [
            (
                "a".to_string(),
                space.subspace(&[e(&space, 0), q3.clone()]).unwrap(),
            ),
            (
                "b".to_string(),
                space
                    .subspace(&[e(&space, 0), e(&space, 1), q3.clone()])
                    .unwrap(),
            ),
            ("c".to_string(), space.full_subspace()),
        ]
        .into();
        let s: BTreeMap<_, _> = [
            ("a".to_string(), space.subspace(&[q3.clone()]).unwrap()),
            ("b".to_string(), space.subspace(&[q3.clone()]).unwrap()),
            ("c".to_string(), space.subspace(&[q3.clone()]).unwrap()),
        ]
        .into();
        let net = Net::new(poset, space.clone(), x, s, None).unwrap();
        assert!(check_isotony(&net).unwrap().pass);
        let rep = check_quotient_functoriality(&net, 1e-10).unwrap();
        assert!(rep.pass, "{:?}", rep.failures);
    }
}

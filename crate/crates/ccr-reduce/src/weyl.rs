//! The Weyl *-algebra of a symplectic space, with exact group labels.
//!
//! Elements are finite complex combinations of generators `delta_f`. The
//! group law on labels must be exact (the algebra is an l^2 structure over
//! the label group, and two labels are either equal or not), so labels are
//! integer multi-indices against a declared generator basis with a rational
//! per-axis step. Coefficients are complex floats.
//!
//! The enveloping C*-norm is not computed here; `norm1` and `norm2` bound it
//! from above and below, and callers must treat C*-norm claims as "bounded,
//! not computed".

use crate::symspace::{Subspace, SymplecticSpace};
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::Ratio;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

const COEFF_PRUNE: f64 = 1e-15;

/// Exact label of a Weyl generator: an integer multi-index against the
/// system's generator basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupLabel(pub Vec<i64>);

impl GroupLabel {
    pub fn zero(n: usize) -> Self {
        GroupLabel(vec![0; n])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    fn add(&self, other: &GroupLabel) -> GroupLabel {
        GroupLabel(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("label coordinate overflow"))
                .collect(),
        )
    }

    fn neg(&self) -> GroupLabel {
        GroupLabel(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Declares the generator directions of a Weyl algebra over an ambient
/// symplectic space: label axis `i` stands for `scale_i * basis_i`.
#[derive(Debug)]
pub struct WeylSystem {
    space: Arc<SymplecticSpace>,
    basis: DMatrix<f64>,
    scales: Vec<Ratio<i64>>,
    /// Gram matrix of B on the scaled generator directions.
    label_form: DMatrix<f64>,
    name: String,
}

impl WeylSystem {
    pub fn new(
        space: Arc<SymplecticSpace>,
        basis: DMatrix<f64>,
        scales: Vec<Ratio<i64>>,
        name: impl Into<String>,
    ) -> Result<Arc<Self>> {
        if basis.nrows() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: basis.nrows(),
            });
        }
        if scales.len() != basis.ncols() {
            return Err(Error::DimensionMismatch {
                expected: basis.ncols(),
                got: scales.len(),
            });
        }
        let k = basis.ncols();
        let mut scaled = basis.clone();
        for j in 0..k {
            let s = ratio_to_f64(scales[j]);
            for i in 0..basis.nrows() {
                scaled[(i, j)] *= s;
            }
        }
        let mut label_form = DMatrix::zeros(k, k);
        for j in 0..k {
            let w = space.apply_form(&scaled.column(j).into_owned());
            for i in 0..k {
                label_form[(i, j)] = scaled.column(i).dot(&w);
            }
        }
        // exact antisymmetry of the label form
        for i in 0..k {
            label_form[(i, i)] = 0.0;
            for j in (i + 1)..k {
                let v = 0.5 * (label_form[(i, j)] - label_form[(j, i)]);
                label_form[(i, j)] = v;
                label_form[(j, i)] = -v;
            }
        }
        Ok(Arc::new(WeylSystem {
            space,
            basis: scaled,
            scales,
            label_form,
            name: name.into(),
        }))
    }

    /// Standard system: one generator per ambient coordinate axis, step 1.
    pub fn standard(space: Arc<SymplecticSpace>) -> Arc<Self> {
        let dim = space.dim();
        WeylSystem::new(
            space,
            DMatrix::identity(dim, dim),
            vec![Ratio::from_integer(1); dim],
            "standard",
        )
        .expect("standard system is well formed")
    }

    pub fn generators(&self) -> usize {
        self.basis.ncols()
    }

    pub fn space(&self) -> &Arc<SymplecticSpace> {
        &self.space
    }

    pub fn scales(&self) -> &[Ratio<i64>] {
        &self.scales
    }

    /// Ambient vector realizing a label.
    pub fn realize(&self, label: &GroupLabel) -> DVector<f64> {
        let coords = DVector::from_iterator(label.0.len(), label.0.iter().map(|&c| c as f64));
        &self.basis * coords
    }

    /// B on realized labels, through the precomputed label Gram matrix.
    pub fn label_pairing(&self, a: &GroupLabel, b: &GroupLabel) -> f64 {
        let mut acc = 0.0;
        for (i, &ai) in a.0.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let mut row = 0.0;
            for (j, &bj) in b.0.iter().enumerate() {
                if bj != 0 {
                    row += self.label_form[(i, j)] * bj as f64;
                }
            }
            acc += ai as f64 * row;
        }
        acc
    }

    fn same(&self, other: &WeylSystem) -> bool {
        std::ptr::eq(self, other)
            || (self.name == other.name
                && self.basis == other.basis
                && self.space.same_space(&other.space))
    }
}

fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Finite complex combination of Weyl generators.
#[derive(Debug, Clone)]
pub struct WeylElement {
    system: Arc<WeylSystem>,
    terms: BTreeMap<GroupLabel, Complex64>,
}

impl WeylElement {
    pub fn zero(system: Arc<WeylSystem>) -> Self {
        WeylElement {
            system,
            terms: BTreeMap::new(),
        }
    }

    pub fn delta(system: Arc<WeylSystem>, label: GroupLabel) -> Self {
        assert_eq!(label.0.len(), system.generators(), "label length mismatch");
        let mut terms = BTreeMap::new();
        terms.insert(label, Complex64::new(1.0, 0.0));
        WeylElement { system, terms }
    }

    pub fn one(system: Arc<WeylSystem>) -> Self {
        let n = system.generators();
        Self::delta(system, GroupLabel::zero(n))
    }

    pub fn system(&self) -> &Arc<WeylSystem> {
        &self.system
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupLabel, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, label: &GroupLabel) -> Complex64 {
        self.terms
            .get(label)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    fn prune(mut self) -> Self {
        self.terms.retain(|_, c| c.norm() > COEFF_PRUNE);
        self
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out.prune()
    }

    pub fn add(&self, other: &WeylElement) -> Result<WeylElement> {
        self.check_system(other)?;
        let mut out = self.clone();
        for (l, c) in &other.terms {
            *out.terms.entry(l.clone()).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        Ok(out.prune())
    }

    pub fn sub(&self, other: &WeylElement) -> Result<WeylElement> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    fn check_system(&self, other: &WeylElement) -> Result<()> {
        if !self.system.same(&other.system) {
            return Err(Error::SpaceMismatch {
                left: self.system.name.clone(),
                right: other.system.name.clone(),
            });
        }
        Ok(())
    }

    /// Weyl product: bilinear extension of
    /// `delta_f . delta_h = exp(i B(f,h) / 2) delta_{f+h}`.
    pub fn mul(&self, other: &WeylElement) -> Result<WeylElement> {
        self.check_system(other)?;
        let mut terms: BTreeMap<GroupLabel, Complex64> = BTreeMap::new();
        for (f, a) in &self.terms {
            for (h, b) in &other.terms {
                let phase = Complex64::from_polar(1.0, 0.5 * self.system.label_pairing(f, h));
                let label = f.add(h);
                *terms.entry(label).or_insert(Complex64::new(0.0, 0.0)) += a * b * phase;
            }
        }
        Ok(WeylElement {
            system: self.system.clone(),
            terms,
        }
        .prune())
    }

    /// Involution: antilinear, `delta_f* = delta_{-f}`.
    pub fn star(&self) -> WeylElement {
        let mut terms = BTreeMap::new();
        for (l, c) in &self.terms {
            terms.insert(l.neg(), c.conj());
        }
        WeylElement {
            system: self.system.clone(),
            terms,
        }
    }

    /// Sum of coefficient moduli; dominates the enveloping C*-norm.
    pub fn norm1(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// l^2 coefficient norm = omega_0(F* F)^(1/2); bounded by the C*-norm.
    pub fn norm2(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Commutator `ab - ba`; on generators this is
    /// `2i sin(B(f,h)/2) delta_{f+h}`.
    pub fn commutator(&self, other: &WeylElement) -> Result<WeylElement> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Serialize as a JSON list of `{coords, re, im}` entries.
    pub fn to_json_terms(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(l, c)| {
                    serde_json::json!({
                        "coords": l.0,
                        "re": c.re,
                        "im": c.im,
                    })
                })
                .collect(),
        )
    }
}

/// Evaluation rule of a state on Weyl elements.
#[derive(Debug, Clone)]
pub enum StateFunctional {
    /// `omega_0(delta_f) = 1` iff `f = 0`.
    Central,
    /// 1 on labels realized inside the subspace, 0 elsewhere. The subspace
    /// must be first class or the functional would not be positive.
    CharSubspace(Subspace),
    /// `delta_f -> exp(-q(f)/4)` for a positive semidefinite quadratic form
    /// given by a symmetric matrix on the ambient realization.
    Quasifree(DMatrix<f64>),
}

impl StateFunctional {
    pub fn char_subspace(s: Subspace) -> Result<Self> {
        if !s.is_first_class() {
            return Err(Error::PreconditionViolation(
                "characteristic-subspace state requires a first-class subspace".into(),
            ));
        }
        Ok(StateFunctional::CharSubspace(s))
    }

    pub fn eval_label(&self, system: &WeylSystem, label: &GroupLabel) -> Complex64 {
        match self {
            StateFunctional::Central => {
                if label.is_zero() {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            StateFunctional::CharSubspace(s) => {
                let v = system.realize(label);
                if label.is_zero() || s.contains_vector(&v) {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            StateFunctional::Quasifree(q) => {
                let v = system.realize(label);
                let val = v.dot(&(q * &v));
                Complex64::new((-val / 4.0).exp(), 0.0)
            }
        }
    }

    pub fn eval(&self, a: &WeylElement) -> Complex64 {
        a.terms
            .iter()
            .map(|(l, c)| c * self.eval_label(&a.system, l))
            .sum()
    }
}

/// Central state, as a standalone function.
pub fn central_state(a: &WeylElement) -> Complex64 {
    StateFunctional::Central.eval(a)
}

/// Is `omega` a Dirac state for the constraint subspace `s`?
///
/// Checks `omega(delta_f) = 1` to 1e-12 on the supplied probe labels and on
/// generated integer combinations of them with coefficients bounded by
/// `bound`. Probes must realize inside `s`.
pub fn is_dirac_state(
    omega: &StateFunctional,
    system: &Arc<WeylSystem>,
    s: &Subspace,
    probes: &[GroupLabel],
    bound: i64,
) -> Result<bool> {
    for p in probes {
        let v = system.realize(p);
        if !p.is_zero() && !s.contains_vector(&v) {
            return Err(Error::PreconditionViolation(format!(
                "probe {p} does not realize inside the constraint subspace"
            )));
        }
    }
    let mut all = probe_combinations(probes, bound);
    all.extend(probes.iter().cloned());
    for label in all {
        let val = omega.eval_label(system, &label);
        if (val - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn probe_combinations(probes: &[GroupLabel], bound: i64) -> Vec<GroupLabel> {
    let k = probes.len();
    if k == 0 {
        return Vec::new();
    }
    let width = (2 * bound + 1) as usize;
    let mut out = Vec::new();
    if width.pow(k.min(4) as u32) <= 20_000 && k <= 4 {
        // full coefficient box
        let mut coeffs = vec![-bound; k];
        loop {
            let mut label = GroupLabel::zero(probes[0].0.len());
            for (c, p) in coeffs.iter().zip(probes) {
                let scaled = GroupLabel(p.0.iter().map(|&x| x * c).collect());
                label = label.add(&scaled);
            }
            out.push(label);
            let mut i = 0;
            loop {
                if i == k {
                    return out;
                }
                coeffs[i] += 1;
                if coeffs[i] <= bound {
                    break;
                }
                coeffs[i] = -bound;
                i += 1;
            }
        }
    }
    // large probe sets: single and pairwise combinations
    for (i, p) in probes.iter().enumerate() {
        for c in -bound..=bound {
            out.push(GroupLabel(p.0.iter().map(|&x| x * c).collect()));
        }
        for q in probes.iter().skip(i + 1) {
            for c1 in -bound..=bound {
                for c2 in -bound..=bound {
                    let a = GroupLabel(p.0.iter().map(|&x| x * c1).collect());
                    let b = GroupLabel(q.0.iter().map(|&x| x * c2).collect());
                    out.push(a.add(&b));
                }
            }
        }
    }
    out
}

/// Result of a finite-rank positivity check of a state.
#[derive(Debug, Clone)]
pub struct GramReport {
    pub min_eigenvalue: f64,
    pub norm: f64,
    pub pass: bool,
}

/// Build the Gram matrix `G_ij = omega(a_i* a_j)` and test positive
/// semidefiniteness of its hermitian part.
pub fn gram_psd_check(omega: &StateFunctional, elements: &[WeylElement]) -> Result<GramReport> {
    let n = elements.len();
    let mut g = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        let ai_star = elements[i].star();
        for j in 0..n {
            g[(i, j)] = omega.eval(&ai_star.mul(&elements[j])?);
        }
    }
    let herm = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let min_eig = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let norm = eig
        .eigenvalues
        .iter()
        .map(|e| e.abs())
        .fold(0.0f64, f64::max);
    let pass = min_eig >= -1e-10 * norm.max(1.0);
    Ok(GramReport {
        min_eigenvalue: min_eig,
        norm,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    fn darboux_system(pairs: usize) -> Arc<WeylSystem> {
        WeylSystem::standard(SymplecticSpace::darboux(pairs))
    }

    fn label(sys: &Arc<WeylSystem>, coords: &[i64]) -> GroupLabel {
        assert_eq!(coords.len(), sys.generators());
        GroupLabel(coords.to_vec())
    }

    #[test]
    fn product_rule() {
        let sys = darboux_system(1);
        let one = WeylElement::one(sys.clone());
        let dq = WeylElement::delta(sys.clone(), label(&sys, &[1, 0]));
        let dp = WeylElement::delta(sys.clone(), label(&sys, &[0, 1]));

        // identity
        let prod = one.mul(&dq).unwrap();
        assert_eq!(prod.num_terms(), 1);
        assert_relative_eq!(prod.coefficient(&label(&sys, &[1, 0])).re, 1.0);

        // delta_q1 . delta_p1 = e^{i/2} delta_{q1+p1}
        let prod = dq.mul(&dp).unwrap();
        let c = prod.coefficient(&label(&sys, &[1, 1]));
        assert_relative_eq!(c.re, (0.5f64).cos(), epsilon = 1e-14);
        assert_relative_eq!(c.im, (0.5f64).sin(), epsilon = 1e-14);

        // delta_f . delta_{-f} = delta_0
        let dmq = WeylElement::delta(sys.clone(), label(&sys, &[-1, 0]));
        let prod = dq.mul(&dmq).unwrap();
        assert_eq!(prod.num_terms(), 1);
        assert_relative_eq!(prod.coefficient(&GroupLabel::zero(2)).re, 1.0);
    }

    #[test]
    fn star_rules() {
        let sys = darboux_system(1);
        let dq = WeylElement::delta(sys.clone(), label(&sys, &[1, 0]));
        let dp = WeylElement::delta(sys.clone(), label(&sys, &[0, 1]));
        assert_relative_eq!(dq.star().coefficient(&label(&sys, &[-1, 0])).re, 1.0);

        let i_one = WeylElement::one(sys.clone()).scale(Complex64::new(0.0, 1.0));
        assert_relative_eq!(i_one.star().coefficient(&GroupLabel::zero(2)).im, -1.0);

        // (ab)* = b* a*
        let ab = dq.mul(&dp).unwrap();
        let lhs = ab.star();
        let rhs = dp.star().mul(&dq.star()).unwrap();
        let diff = lhs.sub(&rhs).unwrap();
        assert!(diff.norm1() < 1e-14);
        // star(delta_q1 delta_p1) = conj(e^{i/2}) delta_{-q1-p1}
        let c = lhs.coefficient(&label(&sys, &[-1, -1]));
        assert_relative_eq!(c.re, (0.5f64).cos(), epsilon = 1e-14);
        assert_relative_eq!(c.im, -(0.5f64).sin(), epsilon = 1e-14);
    }

    #[test]
    fn norms() {
        let sys = darboux_system(1);
        let dq = WeylElement::delta(sys.clone(), label(&sys, &[1, 0]));
        assert_relative_eq!(dq.norm1(), 1.0);

        let a = WeylElement::one(sys.clone()).add(&dq).unwrap();
        assert_relative_eq!(a.norm2(), 2.0f64.sqrt(), epsilon = 1e-14);
        // norm2(a)^2 = omega_0(a* a)
        let omega0_val = central_state(&a.star().mul(&a).unwrap());
        assert_relative_eq!(a.norm2().powi(2), omega0_val.re, epsilon = 1e-12);
        assert_relative_eq!(omega0_val.im, 0.0, epsilon = 1e-14);

        let b = WeylElement::one(sys.clone())
            .scale(Complex64::new(2.0, 0.0))
            .sub(&dq)
            .unwrap();
        assert_relative_eq!(b.norm1(), 3.0);
        assert!(b.norm2() <= b.norm1());
    }

    #[test]
    fn central_state_rule() {
        let sys = darboux_system(1);
        assert_relative_eq!(central_state(&WeylElement::one(sys.clone())).re, 1.0);
        let dq = WeylElement::delta(sys.clone(), label(&sys, &[1, 0]));
        assert_relative_eq!(central_state(&dq).norm(), 0.0);
        let a = WeylElement::one(sys.clone()).add(&dq).unwrap();
        let v = central_state(&a.star().mul(&a).unwrap());
        assert_relative_eq!(v.re, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn central_state_ad_invariance() {
        // omega_0(delta_g a delta_{-g}) = omega_0(a)
        let sys = darboux_system(2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let mut a = WeylElement::zero(sys.clone());
            for _ in 0..3 {
                let l = GroupLabel((0..4).map(|_| rng.gen_range(-2..=2)).collect());
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                a = a
                    .add(&WeylElement::delta(sys.clone(), l).scale(c))
                    .unwrap();
            }
            let g = GroupLabel((0..4).map(|_| rng.gen_range(-2..=2)).collect());
            let dg = WeylElement::delta(sys.clone(), g.clone());
            let dgm = WeylElement::delta(sys.clone(), g.neg());
            let conj = dg.mul(&a).unwrap().mul(&dgm).unwrap();
            let lhs = central_state(&conj);
            let rhs = central_state(&a);
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn char_subspace_state_rules() {
        let sys = darboux_system(2);
        let space = sys.space().clone();
        let mut q1 = DVector::zeros(4);
        q1[0] = 1.0;
        let s = space.subspace(&[q1]).unwrap();
        let omega = StateFunctional::char_subspace(s.clone()).unwrap();

        let in_s = WeylElement::delta(sys.clone(), label(&sys, &[2, 0, 0, 0]));
        assert_relative_eq!(omega.eval(&in_s).re, 1.0);
        let out = WeylElement::delta(sys.clone(), label(&sys, &[0, 0, 1, 0]));
        assert_relative_eq!(omega.eval(&out).norm(), 0.0);

        // multiplicative on delta_s since B vanishes on s
        let a = WeylElement::delta(sys.clone(), label(&sys, &[1, 0, 0, 0]));
        let b = WeylElement::delta(sys.clone(), label(&sys, &[3, 0, 0, 0]));
        let prod = a.mul(&b).unwrap();
        assert!((omega.eval(&prod) - omega.eval(&a) * omega.eval(&b)).norm() < 1e-14);

        // second-class subspace is rejected
        let mut p1 = DVector::zeros(4);
        p1[1] = 1.0;
        let mut q1b = DVector::zeros(4);
        q1b[0] = 1.0;
        let bad = space.subspace(&[q1b, p1]).unwrap();
        assert!(StateFunctional::char_subspace(bad).is_err());
    }

    #[test]
    fn quasifree_state_rules() {
        let sys = darboux_system(1);
        // q(f) = 4 |f|^2 so that the unit vector gives e^{-1}
        let q = DMatrix::identity(2, 2) * 4.0;
        let omega = StateFunctional::Quasifree(q);
        assert_relative_eq!(omega.eval(&WeylElement::one(sys.clone())).re, 1.0);
        let dq = WeylElement::delta(sys.clone(), label(&sys, &[1, 0]));
        assert_relative_eq!(omega.eval(&dq).re, (-1.0f64).exp(), epsilon = 1e-14);

        // degenerate form: Dirac-like on its kernel
        let mut qk = DMatrix::zeros(2, 2);
        qk[(1, 1)] = 4.0;
        let omega_k = StateFunctional::Quasifree(qk);
        assert_relative_eq!(omega_k.eval(&dq).re, 1.0);
    }

    #[test]
    fn dirac_state_detection() {
        let sys = darboux_system(2);
        let space = sys.space().clone();
        let zero = space.zero_subspace();
        assert!(is_dirac_state(&StateFunctional::Central, &sys, &zero, &[], 3).unwrap());

        let mut q1 = DVector::zeros(4);
        q1[0] = 1.0;
        let s = space.subspace(&[q1]).unwrap();
        let omega_s = StateFunctional::char_subspace(s.clone()).unwrap();
        let probes = vec![label(&sys, &[1, 0, 0, 0])];
        assert!(is_dirac_state(&omega_s, &sys, &s, &probes, 3).unwrap());
        assert!(!is_dirac_state(&StateFunctional::Central, &sys, &s, &probes, 3).unwrap());
    }

    #[test]
    fn gram_checks() {
        let sys = darboux_system(1);
        let one = WeylElement::one(sys.clone());
        let rep = gram_psd_check(&StateFunctional::Central, &[one.clone()]).unwrap();
        assert!(rep.pass);
        assert_relative_eq!(rep.min_eigenvalue, 1.0, epsilon = 1e-12);

        let dq = WeylElement::delta(sys.clone(), label(&sys, &[1, 0]));
        let rep = gram_psd_check(&StateFunctional::Central, &[one.clone(), dq.clone()]).unwrap();
        assert!(rep.pass);
        assert_relative_eq!(rep.min_eigenvalue, 1.0, epsilon = 1e-12);

        // all-ones Gram under the characteristic state of span{f}
        let space = sys.space().clone();
        let mut q1 = DVector::zeros(2);
        q1[0] = 1.0;
        let s = space.subspace(&[q1]).unwrap();
        let omega = StateFunctional::char_subspace(s).unwrap();
        let rep = gram_psd_check(&omega, &[one, dq]).unwrap();
        assert!(rep.pass);
        assert_relative_eq!(rep.min_eigenvalue, 0.0, epsilon = 1e-12);
        assert_relative_eq!(rep.norm, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn commutator_rules() {
        let sys = darboux_system(2);
        // commuting directions
        let dq1 = WeylElement::delta(sys.clone(), label(&sys, &[1, 0, 0, 0]));
        let dq2 = WeylElement::delta(sys.clone(), label(&sys, &[0, 0, 1, 0]));
        assert!(dq1.commutator(&dq2).unwrap().norm1() < 1e-15);

        // [delta_q1, delta_p1] = 2i sin(1/2) delta_{q1+p1}
        let dp1 = WeylElement::delta(sys.clone(), label(&sys, &[0, 1, 0, 0]));
        let c = dq1.commutator(&dp1).unwrap();
        let v = c.coefficient(&label(&sys, &[1, 1, 0, 0]));
        assert_relative_eq!(v.im, 2.0 * (0.5f64).sin(), epsilon = 1e-14);
        assert_relative_eq!(v.re, 0.0, epsilon = 1e-14);

        // [a, 1] = 0
        let one = WeylElement::one(sys.clone());
        assert!(dq1.commutator(&one).unwrap().norm1() < 1e-15);
    }

    #[test]
    fn associativity_on_random_triples() {
        let sys = darboux_system(2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let mut elems = Vec::new();
            for _ in 0..3 {
                let mut el = WeylElement::zero(sys.clone());
                for _ in 0..2 {
                    let l = GroupLabel((0..4).map(|_| rng.gen_range(-3..=3)).collect());
                    let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    el = el.add(&WeylElement::delta(sys.clone(), l).scale(c)).unwrap();
                }
                elems.push(el);
            }
            let lhs = elems[0].mul(&elems[1]).unwrap().mul(&elems[2]).unwrap();
            let rhs = elems[0].mul(&elems[1].mul(&elems[2]).unwrap()).unwrap();
            assert!(lhs.sub(&rhs).unwrap().norm1() < 1e-12);
        }
    }

    #[test]
    fn json_terms_shape() {
        let sys = darboux_system(1);
        let a = WeylElement::delta(sys.clone(), label(&sys, &[1, 0]))
            .scale(Complex64::new(0.5, -0.25));
        let v = a.to_json_terms();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 1);
        assert_eq!(arr[0]["coords"], serde_json::json!([1, 0]));
    }
}

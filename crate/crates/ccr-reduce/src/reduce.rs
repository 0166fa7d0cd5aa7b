//! The T-procedure for linear Weyl constraints and its meta-theorems.
//!
//! For a first-class (isotropic) constraint subspace `s` of a symplectic
//! space, the physical data is the quotient `s'/s` of the symplectic
//! commutant by the constraints, carrying the factored form. The module
//! also provides constraint equivalence, the maximal equivalent linear
//! constraint set, reduction along a nested chain of constraint sets with
//! the isomorphism onto the single-step reduction, and the comparison of a
//! family of local reductions against one global reduction.

use crate::symspace::{quotient, QuotientSpace, Subspace, SymplecticSpace};
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use std::sync::Arc;

/// Outcome of a single T-procedure reduction.
#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub constraints: Subspace,
    pub commutant: Subspace,
    pub quotient: QuotientSpace,
    pub first_class: bool,
    pub double_commutant: bool,
    pub physical_dim: usize,
    pub factored_nondegenerate: bool,
}

/// Reduce `space` by the linear constraint subspace `s`.
///
/// Fails with [`Error::FirstClassViolation`] when the restricted form does
/// not vanish on `s` (second-class constraints admit no Dirac states).
pub fn t_reduce(space: &Arc<SymplecticSpace>, s: &Subspace) -> Result<ReductionResult> {
    if !space.same_space(s.ambient()) {
        return Err(Error::SpaceMismatch {
            left: space.label().into(),
            right: s.ambient().label().into(),
        });
    }
    if let Some((i, j, value)) = s.first_class_witness() {
        return Err(Error::FirstClassViolation { i, j, value });
    }
    let commutant = s.commutant();
    debug_assert!(commutant.contains(s).unwrap_or(false));
    let q = quotient(&commutant, s)?;
    let physical_dim = commutant.rank() - s.rank();
    debug_assert_eq!(physical_dim, q.rep_dim());
    let double_commutant = s.double_commutant_holds()?;
    let factored_nondegenerate = q.factored_nondegenerate();
    Ok(ReductionResult {
        constraints: s.clone(),
        commutant,
        first_class: true,
        double_commutant,
        physical_dim,
        factored_nondegenerate,
        quotient: q,
    })
}

/// Two first-class linear constraint subspaces select the same Dirac states
/// iff they coincide as subspaces: the characteristic state of `s1` assigns
/// 1 to every generator of `s2` exactly when `s2` lies inside `s1`, and
/// conversely.
pub fn equivalent_constraints(s1: &Subspace, s2: &Subspace) -> Result<bool> {
    for s in [s1, s2] {
        if let Some((i, j, value)) = s.first_class_witness() {
            return Err(Error::FirstClassViolation { i, j, value });
        }
    }
    // mutual Dirac-state test: every generator of one side must evaluate to
    // 1 under the characteristic state of the other, i.e. must be a member
    for v in s2.basis_vectors() {
        if !s1.contains_vector(&v) {
            return Ok(false);
        }
    }
    for v in s1.basis_vectors() {
        if !s2.contains_vector(&v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The maximal linear constraint set equivalent to `s`, found by sweeping
/// ambient directions and bounded integer combinations.
#[derive(Debug, Clone)]
pub struct MaximalConstraints {
    pub subspace: Subspace,
    /// Caveat recorded with the result: only delta-type (linear) unitaries
    /// are swept; the full maximal constraint group also contains products
    /// and non-generator unitaries and is not modeled.
    pub notes: String,
}

pub fn maximal_linear_constraints(s: &Subspace, bound: i64) -> Result<MaximalConstraints> {
    if let Some((i, j, value)) = s.first_class_witness() {
        return Err(Error::FirstClassViolation { i, j, value });
    }
    let space = s.ambient();
    let dim = space.dim();
    let mut found: Vec<DVector<f64>> = s.basis_vectors().collect();
    let candidate = |v: DVector<f64>, found: &mut Vec<DVector<f64>>| {
        if v.norm() > 0.0 && s.contains_vector(&v) {
            found.push(v);
        }
    };
    for i in 0..dim {
        let mut e = DVector::zeros(dim);
        e[i] = 1.0;
        candidate(e, &mut found);
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            for c1 in -bound..=bound {
                for c2 in -bound..=bound {
                    if c1 == 0 && c2 == 0 {
                        continue;
                    }
                    let mut v = DVector::zeros(dim);
                    v[i] = c1 as f64;
                    v[j] = c2 as f64;
                    candidate(v, &mut found);
                }
            }
        }
    }
    let subspace = if found.is_empty() {
        space.zero_subspace()
    } else {
        space.subspace(&found)?
    };
    Ok(MaximalConstraints {
        subspace,
        notes: "linear sweep only; the maximal constraint group contains non-generator \
                unitaries that are out of scope"
            .into(),
    })
}

/// Result of reducing along a nested chain of constraint subspaces.
#[derive(Debug)]
pub struct StagedResult {
    pub chain: Vec<Subspace>,
    /// Quotient data of each stage, in that stage's coordinates.
    pub stages: Vec<QuotientSpace>,
    /// Ambient realization of the final representatives (orthonormal columns).
    pub final_lift: DMatrix<f64>,
    /// Factored form after the last stage.
    pub final_form: DMatrix<f64>,
    /// Map from staged representatives to single-reduction representatives.
    pub iso_to_single: DMatrix<f64>,
    /// Entrywise defect of form preservation under `iso_to_single`.
    pub iso_form_residual: f64,
    pub single: ReductionResult,
}

impl StagedResult {
    pub fn final_dim(&self) -> usize {
        self.final_lift.ncols()
    }

    pub fn iso_ok(&self, tol: f64) -> bool {
        self.final_dim() == self.single.physical_dim && self.iso_form_residual <= tol
    }
}

/// Reduce by stages along `chain` (nested, increasing) and compare with the
/// single reduction by the last element.
///
/// Stage admissibility is the symplectic rendering of "the constraints stay
/// observable at every earlier stage": each `s_k` must lie inside the
/// commutant of `s_{k-1}`, so its image in the stage-(k-1) quotient is well
/// defined.
pub fn reduce_by_stages(
    space: &Arc<SymplecticSpace>,
    chain: &[Subspace],
) -> Result<StagedResult> {
    if chain.is_empty() {
        return Err(Error::InvalidArgument("empty constraint chain".into()));
    }
    for w in chain.windows(2) {
        if !w[1].contains(&w[0])? {
            return Err(Error::InvalidArgument(
                "constraint chain is not nested".into(),
            ));
        }
    }

    let dim = space.dim();
    // current lift: ambient realization of the current stage's coordinates
    let mut lift: Option<DMatrix<f64>> = None; // None = identity
    let mut cur_space: Arc<SymplecticSpace> = space.clone();
    let mut stages: Vec<QuotientSpace> = Vec::new();

    for (k, sk) in chain.iter().enumerate() {
        // admissibility: s_k must live in span(lift) + span(s_{k-1})
        if k > 0 {
            let covered = {
                let l = lift.as_ref().expect("lift set after first stage");
                let mut cols: Vec<DVector<f64>> =
                    (0..l.ncols()).map(|j| l.column(j).into_owned()).collect();
                cols.extend(chain[k - 1].basis_vectors());
                space.subspace(&cols)?
            };
            for v in sk.basis_vectors() {
                let r = covered.membership_residual(&v);
                if r > space.tol.residual.sqrt() {
                    return Err(Error::StageAdmissibility {
                        stage: k + 1,
                        residual: r,
                    });
                }
            }
        }

        // image of s_k in current coordinates; unit constraint directions
        // already factored out project to zero columns, so canonicalize
        // against the unit scale
        let image_cols: Vec<DVector<f64>> = match &lift {
            None => sk.basis_vectors().collect(),
            Some(l) => sk
                .basis_vectors()
                .map(|v| l.transpose() * v)
                .collect(),
        };
        let image = if image_cols.is_empty() {
            cur_space.zero_subspace()
        } else {
            let m = DMatrix::from_columns(&image_cols);
            let basis =
                crate::symspace::canonicalize_columns_scaled(&m, &cur_space.tol, 1.0);
            Subspace::from_orthonormal_unchecked(cur_space.clone(), basis)
        };
        if let Some((i, j, value)) = image.first_class_witness() {
            let _ = (i, j, value);
            return Err(Error::StageAdmissibility {
                stage: k + 1,
                residual: value.abs(),
            });
        }
        let commutant = image.commutant();
        let q = quotient(&commutant, &image)?;
        let c = q.lift_matrix().clone();
        lift = Some(match lift {
            None => c.clone(),
            Some(l) => l * &c,
        });
        let trivial = q.rep_dim() == 0;
        if !trivial {
            cur_space = SymplecticSpace::new_dense(
                format!("{}-stage{}", space.label(), k + 1),
                q.factored_form().clone(),
            )?;
        }
        stages.push(q);
        if trivial {
            // later stages can only quotient the zero space by itself
            break;
        }
    }

    let final_lift = lift.unwrap_or_else(|| DMatrix::identity(dim, dim));
    let final_form = stages
        .last()
        .map(|q| q.factored_form().clone())
        .expect("at least one stage");

    let single = t_reduce(space, chain.last().expect("nonempty"))?;
    let single_lift = single.quotient.lift_matrix();
    let iso = single_lift.transpose() * &final_lift;
    // form preservation: iso^T B_single iso = B_staged entrywise
    let mapped = iso.transpose() * single.quotient.factored_form() * &iso;
    let resid = (&mapped - &final_form).amax();
    Ok(StagedResult {
        chain: chain.to_vec(),
        stages,
        final_lift,
        final_form,
        iso_to_single: iso,
        iso_form_residual: resid,
        single,
    })
}

/// Comparison of the inductive-limit reduction of a family of local data
/// against a single global reduction.
#[derive(Debug)]
pub struct GlobalLocalReport {
    pub local_dim: usize,
    pub global_dim: usize,
    /// Span of the local observable spaces lies inside the global
    /// observable space (necessary for the injection).
    pub locals_inside_global: bool,
    pub injective: bool,
    pub onto: bool,
    /// Entrywise form defect of the injection map.
    pub form_residual: f64,
}

/// Form the union reduction `R_0` from the local observable and constraint
/// spaces and compare it against the reduction `R_e` of the global test
/// space by the union of all constraints.
///
/// `local_fields` spans the global test space (together with the
/// constraints); `local_observables` and `local_constraints` are indexed by
/// the same region family.
pub fn global_vs_local(
    space: &Arc<SymplecticSpace>,
    local_fields: &[Subspace],
    local_observables: &[Subspace],
    local_constraints: &[Subspace],
) -> Result<GlobalLocalReport> {
    let mut o0 = space.zero_subspace();
    for o in local_observables {
        o0 = o0.sum(o)?;
    }
    let mut s_e = space.zero_subspace();
    for s in local_constraints {
        s_e = s_e.sum(s)?;
    }
    let mut x0 = s_e.clone();
    for x in local_fields {
        x0 = x0.sum(x)?;
    }

    // R_0: factor the union of local observables by the constraint
    // directions it contains
    let kernel0 = s_e.intersect(&o0)?;
    let r0 = quotient(&o0, &kernel0)?;

    // R_e: observables of the global test space = commutant of the full
    // constraint set inside the span of the field spaces
    let o_e = x0.intersect(&s_e.commutant())?;
    let kernel_e = s_e.intersect(&o_e)?;
    let r_e = quotient(&o_e, &kernel_e)?;

    let locals_inside_global = o_e.contains(&o0)?;
    let iso = r_e.lift_matrix().transpose() * r0.lift_matrix();
    let mapped = iso.transpose() * r_e.factored_form() * &iso;
    let form_residual = (&mapped - r0.factored_form()).amax();
    // injectivity: the mapped representatives keep full rank
    let injective = if r0.rep_dim() == 0 {
        true
    } else {
        let svd = iso.clone().svd(false, false);
        let smin = svd
            .singular_values
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        locals_inside_global && smin > 0.5
    };
    Ok(GlobalLocalReport {
        local_dim: r0.rep_dim(),
        global_dim: r_e.rep_dim(),
        locals_inside_global,
        injective,
        onto: r0.rep_dim() == r_e.rep_dim() && locals_inside_global,
        form_residual,
    })
}

//! Finite-dimensional (pre)symplectic linear algebra.
//!
//! A [`SymplecticSpace`] is a real vector space with an antisymmetric
//! bilinear form, possibly degenerate. [`Subspace`]s are stored with
//! canonicalized orthonormal bases so that equality tests and reports are
//! reproducible. The module provides the commutant, radical, quotient and
//! span arithmetic on which the constraint reduction is built.
//!
//! Rank decisions are made through modified Gram-Schmidt with relative
//! residual cutoffs (see [`Tolerances`]); the exact rational backend in
//! [`crate::exact`] is the oracle these decisions are tested against.

use crate::tol::Tolerances;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use std::sync::Arc;

/// Storage for the antisymmetric form.
///
/// `BlockPairs` covers Darboux spaces and the realified grid forms of the
/// Gupta-Bleuler model, where the form is a direct sum of 2x2 blocks
/// `[[0, c], [-c, 0]]` over consecutive coordinate pairs; it avoids ever
/// materializing the (possibly large) dense Gram matrix.
#[derive(Debug, Clone)]
pub enum Form {
    Dense(DMatrix<f64>),
    BlockPairs(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct SymplecticSpace {
    dim: usize,
    form: Form,
    label: String,
    pub tol: Tolerances,
}

impl SymplecticSpace {
    /// Dense constructor. The strictly upper triangle of `a` is taken as the
    /// stored data and mirrored, so the result is antisymmetric exactly; if
    /// the lower triangle of `a` disagrees beyond roundoff this errors.
    pub fn new_dense(label: impl Into<String>, a: DMatrix<f64>) -> Result<Arc<Self>> {
        if a.nrows() != a.ncols() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                got: a.ncols(),
            });
        }
        let n = a.nrows();
        if n == 0 {
            return Err(Error::InvalidArgument("dim must be >= 1".into()));
        }
        let scale = a.amax().max(1.0);
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            if a[(i, i)].abs() > 1e-12 * scale {
                return Err(Error::InvalidArgument(format!(
                    "form has nonzero diagonal entry at {i}"
                )));
            }
            for j in (i + 1)..n {
                if (a[(i, j)] + a[(j, i)]).abs() > 1e-9 * scale {
                    return Err(Error::InvalidArgument(format!(
                        "form is not antisymmetric at ({i},{j})"
                    )));
                }
                m[(i, j)] = a[(i, j)];
                m[(j, i)] = -a[(i, j)];
            }
        }
        Ok(Arc::new(SymplecticSpace {
            dim: n,
            form: Form::Dense(m),
            label: label.into(),
            tol: Tolerances::default(),
        }))
    }

    /// Direct sum of 2x2 symplectic blocks with the given coefficients;
    /// coordinate pair `i` occupies indices `(2i, 2i+1)`.
    pub fn block_pairs(label: impl Into<String>, coeffs: Vec<f64>) -> Arc<Self> {
        assert!(!coeffs.is_empty());
        Arc::new(SymplecticSpace {
            dim: 2 * coeffs.len(),
            form: Form::BlockPairs(coeffs),
            label: label.into(),
            tol: Tolerances::default(),
        })
    }

    /// Standard Darboux space with `pairs` canonical pairs, coordinates
    /// ordered (q1, p1, q2, p2, ...).
    pub fn darboux(pairs: usize) -> Arc<Self> {
        Self::block_pairs(format!("darboux-{}", 2 * pairs), vec![1.0; pairs])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// B applied to a vector.
    pub fn apply_form(&self, v: &DVector<f64>) -> DVector<f64> {
        match &self.form {
            Form::Dense(m) => m * v,
            Form::BlockPairs(c) => {
                let mut out = DVector::zeros(self.dim);
                for (i, &ci) in c.iter().enumerate() {
                    out[2 * i] = ci * v[2 * i + 1];
                    out[2 * i + 1] = -ci * v[2 * i];
                }
                out
            }
        }
    }

    /// The form as a dense matrix. Prefer [`Self::apply_form`] on large spaces.
    pub fn form_matrix(&self) -> DMatrix<f64> {
        match &self.form {
            Form::Dense(m) => m.clone(),
            Form::BlockPairs(c) => {
                let mut m = DMatrix::zeros(self.dim, self.dim);
                for (i, &ci) in c.iter().enumerate() {
                    m[(2 * i, 2 * i + 1)] = ci;
                    m[(2 * i + 1, 2 * i)] = -ci;
                }
                m
            }
        }
    }

    /// Evaluate B(f, h).
    pub fn form_eval(&self, f: &DVector<f64>, h: &DVector<f64>) -> Result<f64> {
        if f.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: f.len(),
            });
        }
        if h.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: h.len(),
            });
        }
        Ok(f.dot(&self.apply_form(h)))
    }

    pub fn same_space(&self, other: &SymplecticSpace) -> bool {
        std::ptr::eq(self, other) || (self.dim == other.dim && self.label == other.label)
    }

    /// The whole space as a subspace.
    pub fn full_subspace(self: &Arc<Self>) -> Subspace {
        Subspace::from_orthonormal_unchecked(self.clone(), DMatrix::identity(self.dim, self.dim))
    }

    /// The zero subspace.
    pub fn zero_subspace(self: &Arc<Self>) -> Subspace {
        Subspace::from_orthonormal_unchecked(self.clone(), DMatrix::zeros(self.dim, 0))
    }

    pub fn subspace(self: &Arc<Self>, spanning: &[DVector<f64>]) -> Result<Subspace> {
        let cols = DMatrix::from_columns(
            &spanning
                .iter()
                .map(|v| {
                    if v.len() != self.dim {
                        Err(Error::DimensionMismatch {
                            expected: self.dim,
                            got: v.len(),
                        })
                    } else {
                        Ok(v.clone())
                    }
                })
                .collect::<Result<Vec<_>>>()?,
        );
        Ok(Subspace::new(self.clone(), cols))
    }

    /// Subspace spanned by the given ambient coordinate axes.
    pub fn axes(self: &Arc<Self>, idx: &[usize]) -> Subspace {
        let mut m = DMatrix::zeros(self.dim, idx.len());
        for (k, &i) in idx.iter().enumerate() {
            m[(i, k)] = 1.0;
        }
        Subspace::from_orthonormal_unchecked(self.clone(), m)
    }
}

/// Orthonormalize `cols` by modified Gram-Schmidt (two passes), dropping
/// dependent columns, and fix the sign of each kept column so that its first
/// significantly nonzero entry is positive.
pub(crate) fn canonicalize_columns(cols: &DMatrix<f64>, tol: &Tolerances) -> DMatrix<f64> {
    let scale = (0..cols.ncols())
        .map(|j| cols.column(j).norm())
        .fold(0.0f64, f64::max);
    canonicalize_columns_scaled(cols, tol, scale)
}

/// Like [`canonicalize_columns`], but zero-column decisions are made against
/// an externally supplied scale (needed when the whole input may consist of
/// cancellation residue, e.g. a numerator that equals the kernel).
pub(crate) fn canonicalize_columns_scaled(
    cols: &DMatrix<f64>,
    tol: &Tolerances,
    scale: f64,
) -> DMatrix<f64> {
    let mut kept: Vec<DVector<f64>> = Vec::new();
    for j in 0..cols.ncols() {
        let col = cols.column(j).into_owned();
        let orig_norm = col.norm();
        // columns that are zero relative to the span scale carry no rank
        if orig_norm <= tol.rank_rel * scale {
            continue;
        }
        let mut v = col;
        for _pass in 0..2 {
            for u in &kept {
                let c = u.dot(&v);
                v.axpy(-c, u, 1.0);
            }
        }
        if v.norm() > tol.rank_rel * orig_norm {
            v /= v.norm();
            kept.push(v);
        }
    }
    let mut m = if kept.is_empty() {
        DMatrix::zeros(cols.nrows(), 0)
    } else {
        DMatrix::from_columns(&kept)
    };
    sign_fix(&mut m);
    m
}

fn sign_fix(m: &mut DMatrix<f64>) {
    for j in 0..m.ncols() {
        let col = m.column(j);
        let maxabs = col.amax();
        if maxabs == 0.0 {
            continue;
        }
        let first = (0..m.nrows()).find(|&i| m[(i, j)].abs() > 1e-8 * maxabs);
        if let Some(i) = first {
            if m[(i, j)] < 0.0 {
                for r in 0..m.nrows() {
                    m[(r, j)] = -m[(r, j)];
                }
            }
        }
    }
}

/// Orthonormal basis of the orthogonal complement of `u` (orthonormal
/// columns) inside R^d, via the Householder reflectors of `u`.
pub(crate) fn orthonormal_complement(u: &DMatrix<f64>) -> DMatrix<f64> {
    let d = u.nrows();
    let k = u.ncols();
    if k == 0 {
        return DMatrix::identity(d, d);
    }
    if k >= d {
        return DMatrix::zeros(d, 0);
    }
    // QR of u by explicit reflectors; accumulate Q on the identity and take
    // the trailing d-k columns.
    let mut r = u.clone();
    let mut reflectors: Vec<DVector<f64>> = Vec::with_capacity(k);
    for j in 0..k {
        let mut v = DVector::zeros(d);
        for i in j..d {
            v[i] = r[(i, j)];
        }
        let alpha = -v[j].signum() * v.norm();
        if alpha == 0.0 {
            reflectors.push(DVector::zeros(d));
            continue;
        }
        v[j] -= alpha;
        let vn = v.norm();
        if vn == 0.0 {
            reflectors.push(DVector::zeros(d));
            continue;
        }
        v /= vn;
        // apply H = I - 2 v v^T to the remaining columns of r
        for c in j..k {
            let col = r.column(c).into_owned();
            let proj = 2.0 * v.dot(&col);
            for i in 0..d {
                r[(i, c)] -= proj * v[i];
            }
        }
        reflectors.push(v);
    }
    // complement columns: e_{k}..e_{d-1} run through H_1 ... H_k (reverse order)
    let mut comp = DMatrix::zeros(d, d - k);
    for (c, idx) in (k..d).enumerate() {
        let mut e = DVector::zeros(d);
        e[idx] = 1.0;
        for v in reflectors.iter().rev() {
            let proj = 2.0 * v.dot(&e);
            if proj != 0.0 {
                e.axpy(-proj, v, 1.0);
            }
        }
        comp.set_column(c, &e);
    }
    comp
}

/// A subspace of a [`SymplecticSpace`], held as an orthonormal canonical
/// basis (columns).
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: Arc<SymplecticSpace>,
    basis: DMatrix<f64>,
}

impl Subspace {
    pub fn new(ambient: Arc<SymplecticSpace>, spanning: DMatrix<f64>) -> Self {
        let basis = canonicalize_columns(&spanning, &ambient.tol);
        Subspace { ambient, basis }
    }

    /// Wrap columns that are already orthonormal (exact constructions such
    /// as coordinate axes or per-point grid bases); skips the MGS pass.
    pub fn from_orthonormal_unchecked(ambient: Arc<SymplecticSpace>, basis: DMatrix<f64>) -> Self {
        Subspace { ambient, basis }
    }

    pub fn ambient(&self) -> &Arc<SymplecticSpace> {
        &self.ambient
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.ncols() == 0
    }

    pub fn basis_vectors(&self) -> impl Iterator<Item = DVector<f64>> + '_ {
        (0..self.basis.ncols()).map(move |j| self.basis.column(j).into_owned())
    }

    fn check_same_ambient(&self, other: &Subspace) -> Result<()> {
        if !self.ambient.same_space(&other.ambient) {
            return Err(Error::SpaceMismatch {
                left: self.ambient.label().into(),
                right: other.ambient.label().into(),
            });
        }
        Ok(())
    }

    /// Orthogonal projection onto the subspace.
    pub fn project(&self, v: &DVector<f64>) -> DVector<f64> {
        if self.basis.ncols() == 0 {
            return DVector::zeros(v.len());
        }
        let coeff = self.basis.transpose() * v;
        &self.basis * coeff
    }

    /// Distance of `v` from the subspace, relative to `max(1, |v|)`.
    pub fn membership_residual(&self, v: &DVector<f64>) -> f64 {
        let r = v - self.project(v);
        r.norm() / v.norm().max(1.0)
    }

    pub fn contains_vector(&self, v: &DVector<f64>) -> bool {
        self.membership_residual(v) <= self.ambient.tol.residual.sqrt()
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_same_ambient(other)?;
        Ok((0..other.basis.ncols())
            .all(|j| self.contains_vector(&other.basis.column(j).into_owned())))
    }

    pub fn equal(&self, other: &Subspace) -> Result<bool> {
        Ok(self.rank() == other.rank() && self.contains(other)? && other.contains(self)?)
    }

    /// Span of the union.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let mut cols = Vec::new();
        cols.extend(self.basis_vectors());
        cols.extend(other.basis_vectors());
        if cols.is_empty() {
            return Ok(self.ambient.zero_subspace());
        }
        Ok(Subspace::new(
            self.ambient.clone(),
            DMatrix::from_columns(&cols),
        ))
    }

    /// Intersection, computed from the null space of the stacked bases.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let (a, b) = (&self.basis, &other.basis);
        if a.ncols() == 0 || b.ncols() == 0 {
            return Ok(self.ambient.zero_subspace());
        }
        // [a | -b] x = 0  =>  a x_1 = b x_2 lies in both spans
        let mut stacked = DMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
        stacked.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
        stacked
            .view_mut((0, a.ncols()), (b.nrows(), b.ncols()))
            .copy_from(&(-b));
        let ns = small_null_space(&stacked, &self.ambient.tol);
        if ns.ncols() == 0 {
            return Ok(self.ambient.zero_subspace());
        }
        let x1 = ns.rows(0, a.ncols()).into_owned();
        Ok(Subspace::new(self.ambient.clone(), a * x1))
    }

    /// Symplectic commutant: all vectors pairing to zero with the subspace.
    pub fn commutant(&self) -> Subspace {
        let d = self.ambient.dim();
        if self.basis.ncols() == 0 {
            return self.ambient.full_subspace();
        }
        // conditions (B s_j) . x = 0; orthonormalize the condition vectors
        // and take their orthogonal complement
        let mut conds = DMatrix::zeros(d, self.basis.ncols());
        for j in 0..self.basis.ncols() {
            let w = self.ambient.apply_form(&self.basis.column(j).into_owned());
            conds.set_column(j, &w);
        }
        let cond_basis = canonicalize_columns(&conds, &self.ambient.tol);
        let mut comp = orthonormal_complement(&cond_basis);
        sign_fix(&mut comp);
        Subspace::from_orthonormal_unchecked(self.ambient.clone(), comp)
    }

    /// Kernel of the form restricted to the subspace: `{f in w : B(f, g) = 0
    /// for all g in w}`. Equals `w intersect commutant(w)`.
    pub fn radical(&self) -> Subspace {
        let k = self.basis.ncols();
        if k == 0 {
            return self.ambient.zero_subspace();
        }
        let restricted = self.restricted_form();
        let ns = small_null_space(&restricted, &self.ambient.tol);
        if ns.ncols() == 0 {
            return self.ambient.zero_subspace();
        }
        Subspace::new(self.ambient.clone(), &self.basis * ns)
    }

    /// Gram matrix of the form on the basis.
    pub fn restricted_form(&self) -> DMatrix<f64> {
        let k = self.basis.ncols();
        let mut g = DMatrix::zeros(k, k);
        let images: Vec<DVector<f64>> = (0..k)
            .map(|j| self.ambient.apply_form(&self.basis.column(j).into_owned()))
            .collect();
        for i in 0..k {
            let bi = self.basis.column(i);
            for j in 0..k {
                g[(i, j)] = bi.dot(&images[j]);
            }
        }
        // mirror to kill roundoff asymmetry
        for i in 0..k {
            g[(i, i)] = 0.0;
            for j in (i + 1)..k {
                let v = 0.5 * (g[(i, j)] - g[(j, i)]);
                g[(i, j)] = v;
                g[(j, i)] = -v;
            }
        }
        g
    }

    /// First class = isotropic: the restricted form vanishes.
    pub fn is_first_class(&self) -> bool {
        self.max_restricted_form_entry() <= self.first_class_threshold()
    }

    pub(crate) fn max_restricted_form_entry(&self) -> f64 {
        let g = self.restricted_form();
        g.amax()
    }

    pub(crate) fn first_class_threshold(&self) -> f64 {
        // scale by the size of B on the subspace directions
        let mut scale: f64 = 1.0;
        for j in 0..self.basis.ncols() {
            scale = scale.max(
                self.ambient
                    .apply_form(&self.basis.column(j).into_owned())
                    .amax(),
            );
        }
        self.ambient.tol.form_zero * scale
    }

    /// Locate a witness pair with a nonzero pairing, if any.
    pub fn first_class_witness(&self) -> Option<(usize, usize, f64)> {
        let g = self.restricted_form();
        let thr = self.first_class_threshold();
        let mut worst: Option<(usize, usize, f64)> = None;
        for i in 0..g.nrows() {
            for j in (i + 1)..g.ncols() {
                if g[(i, j)].abs() > thr {
                    match worst {
                        Some((_, _, w)) if w >= g[(i, j)].abs() => {}
                        _ => worst = Some((i, j, g[(i, j)])),
                    }
                }
            }
        }
        worst
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.radical().is_zero()
    }

    /// Does s = s'' hold?
    pub fn double_commutant_holds(&self) -> Result<bool> {
        let scc = self.commutant().commutant();
        self.equal(&scc)
    }
}

/// Null space of a small dense matrix via SVD with the relative cutoff.
pub(crate) fn small_null_space(m: &DMatrix<f64>, tol: &Tolerances) -> DMatrix<f64> {
    let ncols = m.ncols();
    if ncols == 0 {
        return DMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return DMatrix::identity(ncols, ncols);
    }
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("svd v_t requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let cut = tol.rank_cut(smax);
    let rank = svd.singular_values.iter().filter(|&&s| s > cut).count();
    let mut ns = DMatrix::zeros(ncols, ncols - rank.min(ncols));
    let mut c = 0;
    for i in 0..vt.nrows() {
        if i >= rank {
            for j in 0..ncols {
                ns[(j, c)] = vt[(i, j)];
            }
            c += 1;
        }
    }
    // nalgebra's thin svd of an n x m matrix with n < m yields v_t with n
    // rows only; the remaining m - n null directions come from the
    // orthogonal complement of the computed right singular vectors
    if vt.nrows() < ncols {
        let range = canonicalize_columns(&vt.transpose(), tol);
        let comp = orthonormal_complement(&range);
        let extra = comp.ncols();
        let mut full = DMatrix::zeros(ncols, c + extra);
        full.view_mut((0, 0), (ncols, c))
            .copy_from(&ns.columns(0, c).into_owned());
        full.view_mut((0, c), (ncols, extra)).copy_from(&comp);
        return full;
    }
    ns.columns(0, c).into_owned()
}

/// Float-side rank of a set of columns, for comparison against the exact
/// backend.
pub fn float_rank(cols: &DMatrix<f64>, tol: &Tolerances) -> usize {
    canonicalize_columns(cols, tol).ncols()
}

/// A quotient `numerator / kernel` carried with explicit lift and project
/// maps and the factored form.
#[derive(Debug, Clone)]
pub struct QuotientSpace {
    pub numerator: Subspace,
    pub kernel: Subspace,
    /// Ambient realization of the representatives: orthonormal columns
    /// spanning the complement of the kernel inside the numerator.
    lift: DMatrix<f64>,
    factored: DMatrix<f64>,
}

impl QuotientSpace {
    pub fn rep_dim(&self) -> usize {
        self.lift.ncols()
    }

    /// Representative coordinates -> ambient vector.
    pub fn lift(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.lift * x
    }

    pub fn lift_matrix(&self) -> &DMatrix<f64> {
        &self.lift
    }

    /// Ambient vector (assumed in the numerator) -> representative
    /// coordinates; kills the kernel part.
    pub fn project(&self, v: &DVector<f64>) -> DVector<f64> {
        self.lift.transpose() * v
    }

    /// The factored form on representative coordinates.
    pub fn factored_form(&self) -> &DMatrix<f64> {
        &self.factored
    }

    pub fn factored_nondegenerate(&self) -> bool {
        let tol = &self.numerator.ambient().tol;
        small_null_space(&self.factored, tol).ncols() == 0
    }
}

/// Factor `numerator` by `kernel`.
///
/// Preconditions: the kernel lies inside the numerator, and inside the
/// radical of the restricted form (otherwise the factored form would be
/// ill-defined; the error names an offending pair).
pub fn quotient(numerator: &Subspace, kernel: &Subspace) -> Result<QuotientSpace> {
    if !numerator.contains(kernel)? {
        return Err(Error::PreconditionViolation(
            "kernel is not contained in the numerator".into(),
        ));
    }
    // B(kernel, numerator) must vanish
    let amb = numerator.ambient();
    let mut worst = (0usize, 0usize, 0.0f64);
    for (i, k) in kernel.basis_vectors().enumerate() {
        let w = amb.apply_form(&k);
        for (j, n) in numerator.basis_vectors().enumerate() {
            let v = w.dot(&n);
            if v.abs() > worst.2 {
                worst = (i, j, v.abs());
            }
        }
    }
    let thr = numerator
        .first_class_threshold()
        .max(kernel.first_class_threshold());
    if worst.2 > thr {
        return Err(Error::PreconditionViolation(format!(
            "kernel vector {} pairs with numerator vector {} (B = {:.3e}), so it is outside the radical",
            worst.0, worst.1, worst.2
        )));
    }

    // representatives: numerator basis with the kernel projected off; the
    // zero-column scale is the numerator's (orthonormal) scale, so columns
    // that cancel entirely are dropped rather than renormalized
    let k = kernel.basis();
    let n = numerator.basis();
    let reduced = if k.ncols() == 0 {
        n.clone()
    } else {
        n - k * (k.transpose() * n)
    };
    let lift = canonicalize_columns_scaled(&reduced, &amb.tol, 1.0);

    let r = lift.ncols();
    let mut factored = DMatrix::zeros(r, r);
    let images: Vec<DVector<f64>> = (0..r)
        .map(|j| amb.apply_form(&lift.column(j).into_owned()))
        .collect();
    for i in 0..r {
        for j in (i + 1)..r {
            let v = lift.column(i).dot(&images[j]);
            factored[(i, j)] = v;
            factored[(j, i)] = -v;
        }
    }
    Ok(QuotientSpace {
        numerator: numerator.clone(),
        kernel: kernel.clone(),
        lift,
        factored,
    })
}

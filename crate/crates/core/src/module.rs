//! Finite-dimensional graded right Λ-modules and their morphisms.
//!
//! A module is a finite family of degree components N_d together with action
//! matrices `act_i[d]` : N_d → N_{d+1} for the basis vectors e_i, subject to
//! the anticommutation relations. Vectors are rows and matrices act on the
//! right, so composing actions reads left to right.
//!
//! Sign conventions (all hard-coded, the rest of the crate depends on them):
//!  * twist: N(a)_p = N_{a+p} and (y·v)_{N(a)} = (−1)^a (y·v)_N;
//!  * dual: the action of v on (N∨)_p is (−1)^{p+1} times the transpose of
//!    act_v : N_{−p−1} → N_{−p};
//!  * μ′ = ((−1)^p μ_p) is the canonical isomorphism N ≅ (N∨)∨.

use crate::error::{Error, Result};
use crate::exterior::{wedge_sign, Ctx, ExtElem, Mask};
use crate::field::Field;
use crate::matrix::{self, Mat};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, PartialEq)]
pub struct LambdaModule<F: Field> {
    ctx: Ctx<F>,
    dims: BTreeMap<i64, usize>,
    act: BTreeMap<i64, Vec<Mat<F>>>,
}

impl<F: Field> std::fmt::Debug for LambdaModule<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LambdaModule(n={}, dims={:?})", self.ctx.n(), self.dims)
    }
}

impl<F: Field> LambdaModule<F> {
    pub fn new(
        ctx: Ctx<F>,
        dims: BTreeMap<i64, usize>,
        act: BTreeMap<i64, Vec<Mat<F>>>,
    ) -> Result<Self> {
        let dims: BTreeMap<i64, usize> = dims.into_iter().filter(|(_, v)| *v > 0).collect();
        let mut m = LambdaModule {
            ctx,
            dims,
            act: BTreeMap::new(),
        };
        for (d, mats) in act {
            if m.dim(d) == 0 || m.dim(d + 1) == 0 {
                continue;
            }
            if mats.len() != m.ctx.n() + 1 {
                return Err(Error::InvalidModule(format!(
                    "expected {} action matrices at degree {d}",
                    m.ctx.n() + 1
                )));
            }
            for mat in &mats {
                if mat.rows() != m.dim(d) || mat.cols() != m.dim(d + 1) {
                    return Err(Error::InvalidModule(format!(
                        "action matrix at degree {d} has shape {}x{}, expected {}x{}",
                        mat.rows(),
                        mat.cols(),
                        m.dim(d),
                        m.dim(d + 1)
                    )));
                }
            }
            m.act.insert(d, mats);
        }
        Ok(m)
    }

    pub fn zero(ctx: Ctx<F>) -> Self {
        LambdaModule {
            ctx,
            dims: BTreeMap::new(),
            act: BTreeMap::new(),
        }
    }

    pub fn ctx(&self) -> &Ctx<F> {
        &self.ctx
    }

    pub fn field(&self) -> &F {
        &self.ctx.field
    }

    pub fn dim(&self, d: i64) -> usize {
        self.dims.get(&d).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.dims.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.dims.keys().next_back().copied()
    }

    /// Action matrix of e_i from degree d (zero matrix when absent).
    pub fn act(&self, d: i64, i: usize) -> Mat<F> {
        match self.act.get(&d) {
            Some(mats) => mats[i].clone(),
            None => Mat::zeros(self.field(), self.dim(d), self.dim(d + 1)),
        }
    }

    pub fn act_ref(&self, d: i64) -> Option<&Vec<Mat<F>>> {
        self.act.get(&d)
    }

    /// Action of the monomial e_T (indices ascending): N_d → N_{d+|T|}.
    pub fn act_by_monomial(&self, d: i64, mask: Mask) -> Mat<F> {
        let f = self.field();
        let mut cur = Mat::identity(f, self.dim(d));
        let mut deg = d;
        let mut mm = mask;
        while mm != 0 {
            let b = mm.trailing_zeros() as usize;
            cur = cur.mul(f, &self.act(deg, b));
            deg += 1;
            mm &= mm - 1;
        }
        cur
    }

    /// Whether N·soc(Λ) = 0, i.e. the action of e_0∧…∧e_n vanishes.
    pub fn is_socle_annihilated(&self) -> bool {
        let top = self.ctx.ext().top();
        self.dims
            .keys()
            .all(|&d| self.act_by_monomial(d, top).is_zero(self.field()))
    }

    /// Check the right Λ-module relations act_i·act_j + act_j·act_i = 0
    /// (composition left to right), including the square-zero case i = j.
    pub fn validate(&self) -> Result<()> {
        let f = self.field();
        let n = self.ctx.n();
        for &d in self.dims.keys() {
            if self.dim(d + 2) == 0 {
                continue;
            }
            for i in 0..=n {
                for j in i..=n {
                    let ab = self.act(d, i).mul(f, &self.act(d + 1, j));
                    let ba = self.act(d, j).mul(f, &self.act(d + 1, i));
                    if !ab.add(f, &ba).is_zero(f) {
                        return Err(Error::InvalidModule(format!(
                            "anticommutation fails at degree {d} for (e{i}, e{j})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn debug_validate(&self) {
        #[cfg(debug_assertions)]
        if self.total_dim() <= 512 {
            self.validate().expect("module axioms");
        }
    }

    /// The twist N(a): N(a)_p = N_{a+p}, all action matrices times (−1)^a.
    pub fn twist(&self, a: i64) -> Self {
        let f = self.field().clone();
        let dims = self.dims.iter().map(|(&d, &v)| (d - a, v)).collect();
        let act = self
            .act
            .iter()
            .map(|(&d, mats)| {
                let mats = if a.rem_euclid(2) == 1 {
                    mats.iter().map(|m| m.neg(&f)).collect()
                } else {
                    mats.clone()
                };
                (d - a, mats)
            })
            .collect();
        LambdaModule {
            ctx: self.ctx.clone(),
            dims,
            act,
        }
    }

    /// The dual module N∨ with (N∨)_p = (N_{−p})* and the (−1)^{p+1} sign.
    pub fn dual(&self) -> Self {
        let f = self.field().clone();
        let dims: BTreeMap<i64, usize> = self.dims.iter().map(|(&d, &v)| (-d, v)).collect();
        let mut act = BTreeMap::new();
        for &p in dims.keys() {
            if dims.get(&(p + 1)).copied().unwrap_or(0) == 0 {
                continue;
            }
            // act^{N∨}_v[p] = (−1)^{p+1} (act^N_v[−p−1])^T
            let d = -p - 1;
            let mats: Vec<Mat<F>> = (0..=self.ctx.n())
                .map(|i| {
                    let t = self.act(d, i).transpose(&f);
                    if (p + 1).rem_euclid(2) == 1 {
                        t.neg(&f)
                    } else {
                        t
                    }
                })
                .collect();
            act.insert(p, mats);
        }
        LambdaModule {
            ctx: self.ctx.clone(),
            dims,
            act,
        }
    }

    /// Per-degree canonical bases of soc(N)_d = ∩_i ker(`act_i[d]`).
    pub fn socle(&self) -> BTreeMap<i64, Mat<F>> {
        let f = self.field();
        let mut out = BTreeMap::new();
        for (&d, &dim) in &self.dims {
            let mut stacked = Mat::zeros(f, dim, 0);
            for i in 0..=self.ctx.n() {
                stacked = stacked.hstack(f, &self.act(d, i));
            }
            let ker = matrix::left_kernel(f, &stacked);
            if ker.rows() > 0 {
                out.insert(d, ker);
            }
        }
        out
    }

    pub fn render_dims(&self) -> String {
        let parts: Vec<String> = self.dims.iter().map(|(d, v)| format!("{d}:{v}")).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// μ′ : N → (N∨)∨, the Λ-linear double-dual identification ((−1)^p μ_p).
pub fn double_dual_iso<F: Field>(n: &Arc<LambdaModule<F>>) -> Morphism<F> {
    let f = n.field().clone();
    let dd = Arc::new(n.dual().dual());
    let mats = n
        .dims()
        .iter()
        .map(|(&p, &dim)| {
            let m = Mat::identity(&f, dim);
            (p, if p.rem_euclid(2) == 1 { m.neg(&f) } else { m })
        })
        .collect();
    Morphism {
        source: n.clone(),
        target: dd,
        mats,
    }
}

#[derive(Clone)]
pub struct Morphism<F: Field> {
    source: Arc<LambdaModule<F>>,
    target: Arc<LambdaModule<F>>,
    mats: BTreeMap<i64, Mat<F>>,
}

impl<F: Field> std::fmt::Debug for Morphism<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Morphism({:?} -> {:?})", self.source, self.target)
    }
}

impl<F: Field> Morphism<F> {
    pub fn new(
        source: Arc<LambdaModule<F>>,
        target: Arc<LambdaModule<F>>,
        mats: BTreeMap<i64, Mat<F>>,
    ) -> Result<Self> {
        if source.ctx() != target.ctx() {
            return Err(Error::ContextMismatch("morphism endpoints".into()));
        }
        let mut kept = BTreeMap::new();
        for (d, m) in mats {
            if source.dim(d) == 0 || target.dim(d) == 0 {
                continue;
            }
            if m.rows() != source.dim(d) || m.cols() != target.dim(d) {
                return Err(Error::InvalidModule(format!(
                    "morphism matrix shape at degree {d}"
                )));
            }
            kept.insert(d, m);
        }
        Ok(Morphism {
            source,
            target,
            mats: kept,
        })
    }

    pub fn zero(source: Arc<LambdaModule<F>>, target: Arc<LambdaModule<F>>) -> Self {
        Morphism {
            source,
            target,
            mats: BTreeMap::new(),
        }
    }

    pub fn identity(m: Arc<LambdaModule<F>>) -> Self {
        let f = m.field().clone();
        let mats = m
            .dims()
            .iter()
            .map(|(&d, &v)| (d, Mat::identity(&f, v)))
            .collect();
        Morphism {
            source: m.clone(),
            target: m,
            mats,
        }
    }

    pub fn source(&self) -> &Arc<LambdaModule<F>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<LambdaModule<F>> {
        &self.target
    }

    pub fn mat(&self, d: i64) -> Mat<F> {
        match self.mats.get(&d) {
            Some(m) => m.clone(),
            None => Mat::zeros(self.source.field(), self.source.dim(d), self.target.dim(d)),
        }
    }

    pub fn mats(&self) -> &BTreeMap<i64, Mat<F>> {
        &self.mats
    }

    pub fn is_zero(&self) -> bool {
        self.mats.values().all(|m| m.is_zero(self.source.field()))
    }

    /// Λ-linearity: f_{d+1}∘act_i = act_i∘f_d at every degree.
    pub fn validate_linear(&self) -> Result<()> {
        let f = self.source.field();
        for &d in self.source.dims().keys() {
            for i in 0..=self.source.ctx().n() {
                let lhs = self.source.act(d, i).mul(f, &self.mat(d + 1));
                let rhs = self.mat(d).mul(f, &self.target.act(d, i));
                if lhs != rhs {
                    return Err(Error::InvalidModule(format!(
                        "morphism not Λ-linear at degree {d}, e{i}"
                    )));
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn debug_validate(&self) {
        #[cfg(debug_assertions)]
        if self.source.total_dim() + self.target.total_dim() <= 512 {
            self.validate_linear().expect("Λ-linearity");
        }
    }

    /// self then other (left-to-right composition).
    pub fn compose(&self, other: &Morphism<F>) -> Morphism<F> {
        assert!(
            Arc::ptr_eq(&self.target, &other.source) || *self.target == *other.source,
            "composition endpoint mismatch"
        );
        let f = self.source.field();
        let mut mats = BTreeMap::new();
        for (&d, m) in &self.mats {
            if other.target.dim(d) == 0 {
                continue;
            }
            mats.insert(d, m.mul(f, &other.mat(d)));
        }
        Morphism {
            source: self.source.clone(),
            target: other.target.clone(),
            mats,
        }
    }

    pub fn add(&self, other: &Morphism<F>) -> Morphism<F> {
        let f = self.source.field();
        let mut mats = BTreeMap::new();
        for &d in self.mats.keys().chain(other.mats.keys()) {
            mats.insert(d, self.mat(d).add(f, &other.mat(d)));
        }
        Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            mats,
        }
    }

    pub fn neg(&self) -> Morphism<F> {
        let f = self.source.field();
        let mats = self.mats.iter().map(|(&d, m)| (d, m.neg(f))).collect();
        Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            mats,
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Morphism<F> {
        let f = self.source.field();
        let mats = self.mats.iter().map(|(&d, m)| (d, m.scale(f, c))).collect();
        Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            mats,
        }
    }

    /// The dual morphism f∨ : B∨ → A∨, (f∨)_p = (f_{−p})^T.
    pub fn dual(&self) -> Morphism<F> {
        let f = self.source.field();
        let src = Arc::new(self.target.dual());
        let tgt = Arc::new(self.source.dual());
        let mats = self
            .source
            .dims()
            .keys()
            .filter(|&&d| self.target.dim(d) > 0)
            .map(|&d| (-d, self.mat(d).transpose(f)))
            .collect();
        Morphism {
            source: src,
            target: tgt,
            mats,
        }
    }

    /// Per-degree inverse; errors when some component is not invertible.
    pub fn inverse(&self) -> Result<Morphism<F>> {
        let f = self.source.field();
        if self.source.dims() != self.target.dims() {
            return Err(Error::Internal("inverse of non-square morphism".into()));
        }
        let mut mats = BTreeMap::new();
        for &d in self.source.dims().keys() {
            let inv = matrix::inverse(f, &self.mat(d))
                .ok_or_else(|| Error::Internal(format!("not invertible at degree {d}")))?;
            mats.insert(d, inv);
        }
        Ok(Morphism {
            source: self.target.clone(),
            target: self.source.clone(),
            mats,
        })
    }
}

fn rref_pivots<F: Field>(f: &F, m: &Mat<F>) -> Vec<usize> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .find(|&j| !f.is_zero(&m[(i, j)]))
                .expect("zero row in rref basis")
        })
        .collect()
}

/// Kernel submodule of a morphism, with its inclusion.
pub fn kernel<F: Field>(f: &Morphism<F>) -> (Arc<LambdaModule<F>>, Morphism<F>) {
    let fld = f.source.field();
    let src = &f.source;
    let mut bases: BTreeMap<i64, Mat<F>> = BTreeMap::new();
    for &d in src.dims().keys() {
        let b = matrix::left_kernel(fld, &f.mat(d));
        if b.rows() > 0 {
            bases.insert(d, b);
        }
    }
    submodule_from_bases(src, &bases)
}

/// Image submodule of a morphism inside its target, with its inclusion.
pub fn image<F: Field>(f: &Morphism<F>) -> (Arc<LambdaModule<F>>, Morphism<F>) {
    let fld = f.source.field();
    let tgt = &f.target;
    let mut bases: BTreeMap<i64, Mat<F>> = BTreeMap::new();
    for &d in tgt.dims().keys() {
        if src_dim(f, d) == 0 {
            continue;
        }
        let b = matrix::row_space(fld, &f.mat(d));
        if b.rows() > 0 {
            bases.insert(d, b);
        }
    }
    submodule_from_bases(tgt, &bases)
}

fn src_dim<F: Field>(f: &Morphism<F>, d: i64) -> usize {
    f.source.dim(d)
}

/// Build the submodule spanned degreewise by the given rref bases (must be
/// action-stable) together with its inclusion.
pub fn submodule_from_bases<F: Field>(
    ambient: &Arc<LambdaModule<F>>,
    bases: &BTreeMap<i64, Mat<F>>,
) -> (Arc<LambdaModule<F>>, Morphism<F>) {
    let fld = ambient.field();
    let dims: BTreeMap<i64, usize> = bases.iter().map(|(&d, b)| (d, b.rows())).collect();
    let mut act = BTreeMap::new();
    for (&d, b) in bases {
        let Some(b_next) = bases.get(&(d + 1)) else {
            continue;
        };
        let pivots = rref_pivots(fld, b_next);
        let mats: Vec<Mat<F>> = (0..=ambient.ctx().n())
            .map(|i| {
                let img = b.mul(fld, &ambient.act(d, i));
                matrix::coords_in_rref(fld, b_next, &pivots, &img)
                    .expect("submodule bases not action-stable")
            })
            .collect();
        act.insert(d, mats);
    }
    let sub = Arc::new(LambdaModule {
        ctx: ambient.ctx().clone(),
        dims,
        act,
    });
    sub.debug_validate();
    let inc = Morphism {
        source: sub.clone(),
        target: ambient.clone(),
        mats: bases.clone(),
    };
    inc.debug_validate();
    (sub, inc)
}

/// Cokernel of a morphism, with the projection from the target.
pub fn cokernel<F: Field>(f: &Morphism<F>) -> (Arc<LambdaModule<F>>, Morphism<F>) {
    let fld = f.source.field().clone();
    let tgt = &f.target;
    // per degree: rref of the image rows; quotient basis = non-pivot columns
    let mut projs: BTreeMap<i64, Mat<F>> = BTreeMap::new();
    let mut keeps: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (&d, &dim) in tgt.dims() {
        let r = matrix::rref_rank(&fld, &f.mat(d));
        let basis = Mat::from_fn(&fld, r.rank, tgt.dim(d), |i, j| r.rref[(i, j)].clone());
        let nonpivots: Vec<usize> = (0..dim).filter(|j| !r.pivots.contains(j)).collect();
        // reduce each standard basis vector by the image rows, keep non-pivot coords
        let mut proj = Mat::zeros(&fld, dim, nonpivots.len());
        for k in 0..dim {
            let mut v: Vec<F::Elem> = (0..dim)
                .map(|j| if j == k { fld.one() } else { fld.zero() })
                .collect();
            for (bi, &pc) in r.pivots.iter().enumerate() {
                let c = v[pc].clone();
                if !fld.is_zero(&c) {
                    let nc = fld.neg(&c);
                    fld.row_axpy(&mut v, basis.row(bi), &nc);
                }
            }
            for (jj, &col) in nonpivots.iter().enumerate() {
                proj[(k, jj)] = v[col].clone();
            }
        }
        if !nonpivots.is_empty() {
            projs.insert(d, proj);
            keeps.insert(d, nonpivots);
        } else {
            projs.insert(d, proj);
            keeps.insert(d, Vec::new());
        }
    }
    let dims: BTreeMap<i64, usize> = keeps
        .iter()
        .map(|(&d, v)| (d, v.len()))
        .filter(|(_, l)| *l > 0)
        .collect();
    let mut act = BTreeMap::new();
    for (&d, nonpivots) in &keeps {
        if nonpivots.is_empty() || dims.get(&(d + 1)).copied().unwrap_or(0) == 0 {
            continue;
        }
        let proj_next = &projs[&(d + 1)];
        let mats: Vec<Mat<F>> = (0..=tgt.ctx().n())
            .map(|i| {
                tgt.act(d, i)
                    .select_rows(&fld, nonpivots)
                    .mul(&fld, proj_next)
            })
            .collect();
        act.insert(d, mats);
    }
    let q = Arc::new(LambdaModule {
        ctx: tgt.ctx().clone(),
        dims,
        act,
    });
    q.debug_validate();
    let proj_mats = projs
        .into_iter()
        .filter(|(d, _)| q.dim(*d) > 0 && tgt.dim(*d) > 0)
        .collect();
    let proj = Morphism {
        source: tgt.clone(),
        target: q.clone(),
        mats: proj_mats,
    };
    proj.debug_validate();
    (q, proj)
}

/// The checked public surface of the degreewise module algebra: validates
/// the morphism argument (Λ-linearity) before computing. The raw `kernel`,
/// `cokernel` and `image` skip the check, for use on morphisms valid by
/// construction.
pub fn checked_kernel<F: Field>(f: &Morphism<F>) -> Result<(Arc<LambdaModule<F>>, Morphism<F>)> {
    f.validate_linear()?;
    Ok(kernel(f))
}

pub fn checked_cokernel<F: Field>(f: &Morphism<F>) -> Result<(Arc<LambdaModule<F>>, Morphism<F>)> {
    f.validate_linear()?;
    Ok(cokernel(f))
}

pub fn checked_image<F: Field>(f: &Morphism<F>) -> Result<(Arc<LambdaModule<F>>, Morphism<F>)> {
    f.validate_linear()?;
    Ok(image(f))
}

/// Direct sum with the inclusion and projection morphisms.
#[allow(clippy::type_complexity)]
pub fn direct_sum<F: Field>(
    parts: &[Arc<LambdaModule<F>>],
) -> (Arc<LambdaModule<F>>, Vec<Morphism<F>>, Vec<Morphism<F>>) {
    assert!(!parts.is_empty());
    let ctx = parts[0].ctx().clone();
    let fld = ctx.field.clone();
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    for p in parts {
        assert!(*p.ctx() == ctx, "context mismatch in direct sum");
        for (&d, &v) in p.dims() {
            *dims.entry(d).or_insert(0) += v;
        }
    }
    let mut act = BTreeMap::new();
    for (&d, &total_rows) in &dims {
        let total_cols = dims.get(&(d + 1)).copied().unwrap_or(0);
        if total_cols == 0 {
            continue;
        }
        let mats: Vec<Mat<F>> = (0..=ctx.n())
            .map(|i| {
                let mut m = Mat::zeros(&fld, total_rows, total_cols);
                let (mut ro, mut co) = (0usize, 0usize);
                for p in parts {
                    let (rows, cols) = (p.dim(d), p.dim(d + 1));
                    if rows > 0 && cols > 0 {
                        if let Some(blocks) = p.act_ref(d) {
                            let block = &blocks[i];
                            for r in 0..rows {
                                for c in 0..cols {
                                    if !fld.is_zero(&block[(r, c)]) {
                                        m[(ro + r, co + c)] = block[(r, c)].clone();
                                    }
                                }
                            }
                        }
                    }
                    ro += rows;
                    co += cols;
                }
                m
            })
            .collect();
        act.insert(d, mats);
    }
    let sum = Arc::new(LambdaModule { ctx, dims, act });
    let mut incs = Vec::new();
    let mut projs = Vec::new();
    for (k, p) in parts.iter().enumerate() {
        let mut inc_mats = BTreeMap::new();
        let mut proj_mats = BTreeMap::new();
        for (&d, &v) in p.dims() {
            let offset: usize = parts[..k].iter().map(|q| q.dim(d)).sum();
            let total = sum.dim(d);
            let inc = Mat::from_fn(&fld, v, total, |i, j| {
                if j == offset + i {
                    fld.one()
                } else {
                    fld.zero()
                }
            });
            let proj = Mat::from_fn(&fld, total, v, |i, j| {
                if i == offset + j {
                    fld.one()
                } else {
                    fld.zero()
                }
            });
            inc_mats.insert(d, inc);
            proj_mats.insert(d, proj);
        }
        incs.push(Morphism {
            source: p.clone(),
            target: sum.clone(),
            mats: inc_mats,
        });
        projs.push(Morphism {
            source: sum.clone(),
            target: p.clone(),
            mats: proj_mats,
        });
    }
    (sum, incs, projs)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FreeKind {
    /// Λ(a): components Λ_{a+d}, wedge action, Def. 1(i) twist sign.
    Lambda,
    /// Λ∨(a): components ∧^{−a−d}V*, contraction action, twist sign.
    LambdaDual,
}

/// The free (= injective) module Λ(a)^mult or Λ∨(a)^mult. Basis layout is
/// summand-major, monomials within a summand in canonical mask order.
pub fn make_free<F: Field>(ctx: &Ctx<F>, kind: FreeKind, a: i64, mult: usize) -> LambdaModule<F> {
    let twists = vec![a; mult];
    free_module(ctx, kind, &twists)
}

/// Mixed-twist free module ⊕_r Λ(a_r) or ⊕_r Λ∨(a_r), summand-major layout.
pub fn free_module<F: Field>(ctx: &Ctx<F>, kind: FreeKind, twists: &[i64]) -> LambdaModule<F> {
    let f = &ctx.field;
    let n = ctx.n() as i64;
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    let comp_deg = |a: i64, d: i64| -> i64 {
        match kind {
            FreeKind::Lambda => a + d,
            FreeKind::LambdaDual => -a - d,
        }
    };
    for &a in twists {
        for d in free_degree_range(kind, a, n) {
            let k = comp_deg(a, d);
            let dim = ctx.ext().dim(k);
            if dim > 0 {
                *dims.entry(d).or_insert(0) += dim;
            }
        }
    }
    let mut act = BTreeMap::new();
    let degrees: Vec<i64> = dims.keys().copied().collect();
    // per (i, internal exterior degree k, twist parity) block, computed once
    let mut block_cache: BTreeMap<(usize, i64, bool), Mat<F>> = BTreeMap::new();
    for &d in &degrees {
        let total_rows = dims[&d];
        let total_cols = dims.get(&(d + 1)).copied().unwrap_or(0);
        if total_cols == 0 {
            continue;
        }
        let mats: Vec<Mat<F>> = (0..=ctx.n())
            .map(|i| {
                let mut m = Mat::zeros(f, total_rows, total_cols);
                let (mut ro, mut co) = (0usize, 0usize);
                for &a in twists {
                    let k = comp_deg(a, d);
                    let rows = ctx.ext().dim(k);
                    let cols = ctx.ext().dim(comp_deg(a, d + 1));
                    if rows > 0 && cols > 0 {
                        let neg = a.rem_euclid(2) == 1;
                        let block = block_cache.entry((i, k, neg)).or_insert_with(|| {
                            let b = match kind {
                                FreeKind::Lambda => {
                                    crate::exterior::wedge_matrix(ctx, i, k as usize)
                                }
                                FreeKind::LambdaDual => {
                                    let e_i = ExtElem::basis_vector(f, i);
                                    crate::exterior::contraction_matrix(ctx, &e_i, k as usize)
                                }
                            };
                            if neg {
                                b.neg(f)
                            } else {
                                b
                            }
                        });
                        for r in 0..rows {
                            for c in 0..cols {
                                if !f.is_zero(&block[(r, c)]) {
                                    m[(ro + r, co + c)] = block[(r, c)].clone();
                                }
                            }
                        }
                    }
                    ro += rows;
                    co += cols;
                }
                m
            })
            .collect();
        act.insert(d, mats);
    }
    let m = LambdaModule {
        ctx: ctx.clone(),
        dims,
        act,
    };
    m.debug_validate();
    m
}

fn free_degree_range(kind: FreeKind, a: i64, n: i64) -> std::ops::RangeInclusive<i64> {
    match kind {
        FreeKind::Lambda => (-a)..=(-a + n + 1),
        FreeKind::LambdaDual => (-a - n - 1)..=(-a),
    }
}

/// The module underline_k(a): one-dimensional in degree −a, zero action.
pub fn underline_k<F: Field>(ctx: &Ctx<F>, a: i64) -> LambdaModule<F> {
    let dims = BTreeMap::from([(-a, 1usize)]);
    LambdaModule {
        ctx: ctx.clone(),
        dims,
        act: BTreeMap::new(),
    }
}

/// The unique Λ-morphism from a free module into M sending the summand
/// generators to the given rows (generator of Λ(a) is 1 in degree −a; of
/// Λ∨(a) the top dual monomial in degree −a−n−1). Built degree by degree
/// from the free module's own action, so cost is a few vector-matrix
/// products per basis element.
pub fn free_map<F: Field>(
    ctx: &Ctx<F>,
    kind: FreeKind,
    twists: &[i64],
    targets: &[Vec<F::Elem>],
    m: &Arc<LambdaModule<F>>,
) -> Morphism<F> {
    assert_eq!(twists.len(), targets.len());
    let f = &ctx.field;
    let n = ctx.n() as i64;
    let source = Arc::new(free_module(ctx, kind, twists));
    // per degree, rows of the morphism matrix keyed by (summand, mask)
    #[allow(clippy::type_complexity)]
    let mut rows: BTreeMap<i64, BTreeMap<(usize, Mask), Vec<F::Elem>>> = BTreeMap::new();
    for (r, (&a, y)) in twists.iter().zip(targets).enumerate() {
        let gen_deg = match kind {
            FreeKind::Lambda => -a,
            FreeKind::LambdaDual => -a - n - 1,
        };
        assert_eq!(y.len(), m.dim(gen_deg), "generator target dimension");
        let gen_mask = match kind {
            FreeKind::Lambda => 0,
            FreeKind::LambdaDual => ctx.ext().top(),
        };
        rows.entry(gen_deg)
            .or_default()
            .insert((r, gen_mask), y.clone());
        for d in free_degree_range(kind, a, n) {
            if d == gen_deg {
                continue;
            }
            let k = match kind {
                FreeKind::Lambda => a + d,
                FreeKind::LambdaDual => -a - d,
            };
            if ctx.ext().dim(k) == 0 {
                continue;
            }
            for &mask in ctx.ext().basis(k as usize) {
                // reach this monomial from one at degree d−1 by a single e_j
                let (prev_mask, j, step_sign) = match kind {
                    FreeKind::Lambda => {
                        // e_{S∖j} ∧ e_j with j = max bit of S
                        let j = 31 - mask.leading_zeros();
                        let prev = mask & !(1 << j);
                        (prev, j as usize, wedge_sign(prev, 1 << j))
                    }
                    FreeKind::LambdaDual => {
                        // X_{S∪j} · e_j with j = smallest index not in S
                        let j = (!mask).trailing_zeros();
                        let prev = mask | (1 << j);
                        // sign of X_{S∪j}·e_j = (−1)^{#bits below j}
                        let below = (prev & ((1 << j) - 1)).count_ones();
                        (prev, j as usize, if below % 2 == 0 { 1 } else { -1 })
                    }
                };
                // twist sign of the free module's own action
                let tw = if a.rem_euclid(2) == 1 { -1 } else { 1 };
                let total: i32 = step_sign * tw;
                let prev_row = &rows[&(d - 1)][&(r, prev_mask)];
                let mut img = match m.act_ref(d - 1) {
                    Some(mats) => mats[j].apply(f, prev_row),
                    None => vec![f.zero(); m.dim(d)],
                };
                if total < 0 {
                    for e in img.iter_mut() {
                        *e = f.neg(e);
                    }
                }
                let img = img;
                rows.entry(d).or_default().insert((r, mask), img);
            }
        }
    }
    let mut mats = BTreeMap::new();
    for (&d, rmap) in &rows {
        if m.dim(d) == 0 || source.dim(d) == 0 {
            continue;
        }
        let mut mat = Mat::zeros(f, source.dim(d), m.dim(d));
        let mut row_idx = 0usize;
        for (r, &a) in twists.iter().enumerate() {
            let k = match kind {
                FreeKind::Lambda => a + d,
                FreeKind::LambdaDual => -a - d,
            };
            if ctx.ext().dim(k) == 0 {
                continue;
            }
            for &mask in ctx.ext().basis(k as usize) {
                if let Some(v) = rmap.get(&(r, mask)) {
                    for (j, e) in v.iter().enumerate() {
                        mat[(row_idx, j)] = e.clone();
                    }
                }
                row_idx += 1;
            }
        }
        mats.insert(d, mat);
    }
    let mor = Morphism {
        source,
        target: m.clone(),
        mats,
    };
    mor.debug_validate();
    mor
}

/// Prop. 4(i): the unique morphism N → Λ∨(b) whose degree −b component is
/// the given functional λ on N_{−b}. Component formula:
/// f_d(y) = Σ_{|T| = −b−d} (−1)^{b·|T|} λ(y·e_T) · X_T.
pub fn hom_from_functional<F: Field>(
    n: &Arc<LambdaModule<F>>,
    b: i64,
    lambda: &[F::Elem],
) -> Morphism<F> {
    let ctx = n.ctx();
    let f = &ctx.field;
    assert_eq!(lambda.len(), n.dim(-b), "functional lives on N_{{-b}}");
    let target = Arc::new(make_free(ctx, FreeKind::LambdaDual, b, 1));
    let mut mats = BTreeMap::new();
    for (&d, &dim) in n.dims() {
        let k = -b - d;
        let cols = ctx.ext().dim(k);
        if cols == 0 {
            continue;
        }
        let mut mat = Mat::zeros(f, dim, cols);
        let sign_neg = (b * k).rem_euclid(2) == 1;
        for (c, &mask) in ctx.ext().basis(k as usize).iter().enumerate() {
            let action = n.act_by_monomial(d, mask); // N_d → N_{−b}
            for r in 0..dim {
                // λ(y_r · e_T)
                let mut v = f.zero();
                for (jj, lam) in lambda.iter().enumerate() {
                    v = f.add(&v, &f.mul(&action[(r, jj)], lam));
                }
                if sign_neg {
                    v = f.neg(&v);
                }
                mat[(r, c)] = v;
            }
        }
        mats.insert(d, mat);
    }
    let mor = Morphism {
        source: n.clone(),
        target,
        mats,
    };
    mor.debug_validate();
    mor
}

/// Solve the Λ-linearity equations exactly: dimension and a canonical basis
/// of Hom_{Λ-mod}(src, tgt).
pub fn hom_space<F: Field>(
    src: &Arc<LambdaModule<F>>,
    tgt: &Arc<LambdaModule<F>>,
) -> Result<(usize, Vec<Morphism<F>>)> {
    if src.ctx() != tgt.ctx() {
        return Err(Error::ContextMismatch("hom_space".into()));
    }
    let f = src.field();
    // variables: entries of f_d for degrees where both modules are nonzero
    let mut var_offsets: BTreeMap<i64, usize> = BTreeMap::new();
    let mut nvars = 0usize;
    for (&d, &sd) in src.dims() {
        let td = tgt.dim(d);
        if td > 0 {
            var_offsets.insert(d, nvars);
            nvars += sd * td;
        }
    }
    // equations: for each degree d with src_d > 0, each i, each entry (r, c)
    // of src_d × tgt_{d+1}: Σ_k act'[r,k] f_{d+1}[k,c] − Σ_k f_d[r,k] act[k,c] = 0
    let mut eqs: Vec<Vec<(usize, F::Elem)>> = Vec::new();
    for (&d, &sd) in src.dims() {
        let t_next = tgt.dim(d + 1);
        let s_next = src.dim(d + 1);
        if t_next == 0 && tgt.dim(d) == 0 {
            continue;
        }
        for i in 0..=src.ctx().n() {
            let a_src = src.act(d, i);
            let a_tgt = tgt.act(d, i);
            for r in 0..sd {
                for c in 0..t_next {
                    let mut eq: Vec<(usize, F::Elem)> = Vec::new();
                    if let Some(&off) = var_offsets.get(&(d + 1)) {
                        for k in 0..s_next {
                            let coeff = a_src[(r, k)].clone();
                            if !f.is_zero(&coeff) {
                                eq.push((off + k * t_next + c, coeff));
                            }
                        }
                    }
                    if let Some(&off) = var_offsets.get(&d) {
                        let td = tgt.dim(d);
                        for k in 0..td {
                            let coeff = f.neg(&a_tgt[(k, c)]);
                            if !f.is_zero(&coeff) {
                                eq.push((off + r * td + k, coeff));
                            }
                        }
                    }
                    if !eq.is_empty() {
                        eqs.push(eq);
                    }
                }
            }
        }
    }
    // matrix with rows = variables, cols = equations; solutions = left kernel
    let mut a = Mat::zeros(f, nvars, eqs.len());
    for (e, eq) in eqs.iter().enumerate() {
        for (v, c) in eq {
            a[(*v, e)] = f.add(&a[(*v, e)], c);
        }
    }
    let ker = matrix::left_kernel(f, &a);
    let mut basis = Vec::new();
    for s in 0..ker.rows() {
        let mut mats = BTreeMap::new();
        for (&d, &off) in &var_offsets {
            let (sd, td) = (src.dim(d), tgt.dim(d));
            let mat = Mat::from_fn(f, sd, td, |r, c| ker[(s, off + r * td + c)].clone());
            mats.insert(d, mat);
        }
        let mor = Morphism {
            source: src.clone(),
            target: tgt.clone(),
            mats,
        };
        mor.debug_validate();
        basis.push(mor);
    }
    Ok((ker.rows(), basis))
}

/// Result of the Prop. 4(iv) decomposition N ≅ Λ(a_1)⊕…⊕Λ(a_m)⊕N⁰.
pub struct SplitFree<F: Field> {
    /// a_1 ≥ … ≥ a_m
    pub twists: Vec<i64>,
    pub core: Arc<LambdaModule<F>>,
    pub inclusions: Vec<Morphism<F>>,
    pub projections: Vec<Morphism<F>>,
    pub core_inclusion: Morphism<F>,
    pub core_projection: Morphism<F>,
}

/// Split off free summands: find a homogeneous witness y with y·soc(Λ) ≠ 0,
/// split y·Λ ≅ Λ(a) using the Prop. 4(i) retraction, recurse.
pub fn split_free<F: Field>(n: &Arc<LambdaModule<F>>) -> SplitFree<F> {
    let ctx = n.ctx().clone();
    let f = ctx.field.clone();
    let nn = ctx.n() as i64;
    let top = ctx.ext().top();
    let mut twists = Vec::new();
    let mut inclusions = Vec::new();
    let mut projections = Vec::new();
    let mut cur = n.clone();
    let mut cur_inc = Morphism::identity(n.clone());
    let mut cur_proj = Morphism::identity(n.clone());
    loop {
        // witness of lowest degree (largest twist a = −d), first basis row
        let mut witness: Option<(i64, usize, Vec<F::Elem>)> = None;
        'outer: for (&d, &dim) in cur.dims() {
            let m = cur.act_by_monomial(d, top);
            for r in 0..dim {
                if m.row(r).iter().any(|e| !f.is_zero(e)) {
                    witness = Some((d, r, m.row(r).to_vec()));
                    break 'outer;
                }
            }
        }
        let Some((d, r, top_row)) = witness else {
            break;
        };
        let a = -d;
        // ι : Λ(a) → cur, generator ↦ y = r-th basis vector of cur_d
        let y: Vec<F::Elem> = (0..cur.dim(d))
            .map(|j| if j == r { f.one() } else { f.zero() })
            .collect();
        let iota = free_map(&ctx, FreeKind::Lambda, &[a], &[y], &cur);
        // retraction via Prop. 4(i): λ on cur_{d+n+1} with λ(ι(e_top)) = 1
        let b = a - nn - 1;
        let j0 = top_row
            .iter()
            .position(|e| !f.is_zero(e))
            .expect("witness row nonzero");
        // ι(e_top) = (−1)^{a(n+1)}·(y·e_top); want λ(ι(e_top)) = 1
        let mut scale = f.inv(&top_row[j0]);
        if (a * (nn + 1)).rem_euclid(2) == 1 {
            scale = f.neg(&scale);
        }
        let mut lambda = vec![f.zero(); cur.dim(d + nn + 1)];
        lambda[j0] = scale;
        let rho = hom_from_functional(&cur, b, &lambda);
        // θ = ϑ_a : Λ(a) ≅ Λ∨(a−n−1), then π = ρ∘θ⁻¹ : cur → Λ(a)
        let lam_a = iota.source().clone();
        let e_top_coord = vec![f.one(); 1];
        let theta = hom_from_functional(&lam_a, b, &e_top_coord);
        let theta_inv = theta.inverse().expect("ϑ is an isomorphism");
        let pi = rho.compose(&theta_inv);
        debug_assert!(
            iota.compose(&pi).mats() == Morphism::identity(lam_a.clone()).mats(),
            "π∘ι = id"
        );
        // record the split against the original module
        inclusions.push(iota.compose(&cur_inc));
        projections.push(cur_proj.compose(&pi));
        // pass to K = ker(ρ) with projection x ↦ x − ι(π(x))
        let (k, k_inc) = kernel(&rho);
        let pivots: BTreeMap<i64, Vec<usize>> = k_inc
            .mats()
            .iter()
            .map(|(&dd, m)| (dd, rref_pivots(&f, m)))
            .collect();
        let mut pk_mats = BTreeMap::new();
        for (&dd, &dim) in cur.dims() {
            if k.dim(dd) == 0 {
                continue;
            }
            let reduce = Mat::identity(&f, dim).sub(&f, &pi.mat(dd).mul(&f, &iota.mat(dd)));
            let coords = matrix::coords_in_rref(&f, &k_inc.mat(dd), &pivots[&dd], &reduce)
                .expect("complement lands in kernel");
            pk_mats.insert(dd, coords);
        }
        let pk = Morphism {
            source: cur.clone(),
            target: k.clone(),
            mats: pk_mats,
        };
        pk.debug_validate();
        cur_proj = cur_proj.compose(&pk);
        cur_inc = k_inc.compose(&cur_inc);
        cur = k;
        twists.push(a);
    }
    debug_assert!(
        twists.windows(2).all(|w| w[0] >= w[1]),
        "twists sorted descending"
    );
    debug_assert!(cur.is_socle_annihilated());
    SplitFree {
        twists,
        core: cur.clone(),
        inclusions,
        projections,
        core_inclusion: cur_inc,
        core_projection: cur_proj,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, DEFAULT_PRIME};

    type M = LambdaModule<PrimeField>;

    fn ctx(n: usize) -> Ctx<PrimeField> {
        Ctx::new(n, PrimeField::new(DEFAULT_PRIME))
    }

    #[test]
    fn free_module_dimensions() {
        let c = ctx(1);
        let lam = make_free(&c, FreeKind::Lambda, 0, 1);
        assert_eq!(lam.dims(), &BTreeMap::from([(0, 1), (1, 2), (2, 1)]));
        lam.validate().unwrap();
        let dual = make_free(&c, FreeKind::LambdaDual, 0, 1);
        assert_eq!(dual.dims(), &BTreeMap::from([(-2, 1), (-1, 2), (0, 1)]));
        dual.validate().unwrap();
    }

    #[test]
    fn lambda_dual_is_dual_of_lambda_on_the_nose() {
        // dual(Λ) and Λ∨ have identical matrices under (e_S)* = X_S
        for n in 1..=3 {
            let c = ctx(n);
            let lam = make_free(&c, FreeKind::Lambda, 0, 1);
            let dual = lam.dual();
            let lv = make_free(&c, FreeKind::LambdaDual, 0, 1);
            assert_eq!(dual, lv, "n = {n}");
        }
    }

    #[test]
    fn twist_signs_and_composition() {
        let c = ctx(2);
        let lam = make_free(&c, FreeKind::Lambda, 0, 1);
        let t1 = lam.twist(1);
        t1.validate().unwrap();
        // twist(Λ,1) action = −(action of Λ) reindexed
        assert_eq!(t1.act(-1, 0), lam.act(0, 0).neg(&c.field));
        // twist(twist(N,a),b) = twist(N,a+b)
        assert_eq!(lam.twist(3).twist(-1), lam.twist(2));
        // k(a) placement: twist(k, 1) lives in degree −1
        let k = underline_k(&c, 0);
        assert_eq!(k.twist(1).dims(), &BTreeMap::from([(-1, 1)]));
    }

    #[test]
    fn dual_examples() {
        let c = ctx(2);
        let k1 = underline_k(&c, 1);
        assert_eq!(k1.dual().dims(), &BTreeMap::from([(1, 1)]));
        // dual(k(a)) = k(−a)
        assert_eq!(k1.dual(), underline_k(&c, -1));
        let lam = make_free(&c, FreeKind::Lambda, 0, 1);
        assert_eq!(
            lam.dual().dims(),
            make_free(&c, FreeKind::LambdaDual, 0, 1).dims()
        );
    }

    #[test]
    fn double_dual_iso_is_linear_and_sign_is_forced() {
        let c = ctx(2);
        let lam = Arc::new(make_free(&c, FreeKind::Lambda, 1, 1));
        let mu = double_dual_iso(&lam);
        mu.validate_linear().unwrap();
        // flipping the sign (dropping (−1)^p) must fail Λ-linearity
        let bad_mats = lam
            .dims()
            .iter()
            .map(|(&p, &dim)| (p, Mat::identity(&c.field, dim)))
            .collect();
        let bad = Morphism::new(mu.source().clone(), mu.target().clone(), bad_mats).unwrap();
        assert!(bad.validate_linear().is_err());
    }

    #[test]
    fn socle_examples() {
        let c = ctx(2);
        let lam = make_free(&c, FreeKind::Lambda, 0, 1);
        let soc = lam.socle();
        assert_eq!(soc.len(), 1);
        assert_eq!(soc[&3].rows(), 1); // soc(Λ) = Λ_{n+1}
        let lv = make_free(&c, FreeKind::LambdaDual, 0, 1);
        let soc = lv.socle();
        assert_eq!(soc.len(), 1);
        assert_eq!(soc[&0].rows(), 1); // soc(Λ∨) = (Λ∨)_0
        let k = underline_k(&c, 5);
        assert_eq!(k.socle()[&-5].rows(), 1); // whole module
    }

    #[test]
    fn hom_space_against_prop_4i() {
        let c = ctx(2);
        // Hom(N, Λ∨(a)) ≅ (N_{−a})*
        for a in -2..=2 {
            let n = Arc::new(make_free(&c, FreeKind::Lambda, 1, 1));
            let lv = Arc::new(make_free(&c, FreeKind::LambdaDual, a, 1));
            let (dim, basis) = hom_space(&n, &lv).unwrap();
            assert_eq!(dim, n.dim(-a), "a = {a}");
            for b in basis {
                b.validate_linear().unwrap();
            }
        }
        let k = Arc::new(underline_k(&c, 0));
        let k1 = Arc::new(underline_k(&c, 1));
        assert_eq!(hom_space(&k, &k).unwrap().0, 1);
        assert_eq!(hom_space(&k1, &k).unwrap().0, 0);
    }

    #[test]
    fn hom_from_functional_matches_prop_4i() {
        let c = ctx(2);
        let n = Arc::new(make_free(&c, FreeKind::Lambda, 0, 1));
        for b in [-3i64, -2, 0] {
            let dim = n.dim(-b);
            if dim == 0 {
                continue;
            }
            for j in 0..dim {
                let mut lam = vec![c.field.zero(); dim];
                lam[j] = c.field.one();
                let f = hom_from_functional(&n, b, &lam);
                f.validate_linear().unwrap();
                // degree −b component is λ itself
                let mat = f.mat(-b);
                for r in 0..dim {
                    assert_eq!(mat[(r, 0)], if r == j { 1 } else { 0 });
                }
            }
        }
    }

    #[test]
    fn lambda_iso_lambda_dual_shifted() {
        // Λ(a) ≅ Λ∨(a−n−1): 1-dimensional hom space with invertible element
        for n in 1..=2 {
            let c = ctx(n);
            for a in -1..=2 {
                let la: Arc<M> = Arc::new(make_free(&c, FreeKind::Lambda, a, 1));
                let lv = Arc::new(make_free(&c, FreeKind::LambdaDual, a - n as i64 - 1, 1));
                assert_eq!(la.dims(), lv.dims());
                let (dim, basis) = hom_space(&la, &lv).unwrap();
                assert_eq!(dim, 1);
                assert!(basis[0].inverse().is_ok());
            }
        }
    }

    #[test]
    fn kernel_of_augmentation_is_lambda_plus() {
        let c = ctx(2);
        let lam = Arc::new(make_free(&c, FreeKind::Lambda, 0, 1));
        let k = Arc::new(underline_k(&c, 0));
        // augmentation Λ → k
        let aug = Morphism::new(
            lam.clone(),
            k.clone(),
            BTreeMap::from([(0, Mat::identity(&c.field, 1))]),
        )
        .unwrap();
        aug.validate_linear().unwrap();
        let (ker, inc) = kernel(&aug);
        inc.validate_linear().unwrap();
        assert_eq!(ker.dims(), &BTreeMap::from([(1, 3), (2, 3), (3, 1)]));
        // cokernel(0 → N) = N
        let z = Arc::new(M::zero(c.clone()));
        let zmor = Morphism::zero(z, lam.clone());
        let (cok, _) = cokernel(&zmor);
        assert_eq!(cok.dims(), lam.dims());
    }

    #[test]
    fn direct_sum_dims_add() {
        let c = ctx(2);
        let a = Arc::new(make_free(&c, FreeKind::Lambda, 0, 1));
        let b = Arc::new(underline_k(&c, 2));
        let (s, incs, projs) = direct_sum(&[a.clone(), b.clone()]);
        assert_eq!(s.dim(0), a.dim(0));
        assert_eq!(s.dim(-2), 1);
        s.validate().unwrap();
        for (inc, proj) in incs.iter().zip(&projs) {
            inc.validate_linear().unwrap();
            proj.validate_linear().unwrap();
        }
    }

    #[test]
    fn checked_ops_reject_non_linear_morphisms() {
        let c = ctx(1);
        let lam = Arc::new(make_free(&c, FreeKind::Lambda, 0, 1));
        // a degree-0 map Λ → Λ that is not Λ-linear: identity at degree 0,
        // zero elsewhere
        let mats = BTreeMap::from([(0, Mat::identity(&c.field, 1))]);
        let bad = Morphism::new(lam.clone(), lam.clone(), mats).unwrap();
        assert!(checked_kernel(&bad).is_err());
        assert!(checked_cokernel(&bad).is_err());
        assert!(checked_image(&bad).is_err());
        let good = Morphism::identity(lam);
        assert!(checked_kernel(&good).is_ok());
    }

    #[test]
    fn split_free_examples() {
        let c = ctx(2);
        // already free
        let l3 = Arc::new(make_free(&c, FreeKind::Lambda, 3, 1));
        let s = split_free(&l3);
        assert_eq!(s.twists, vec![3]);
        assert!(s.core.is_zero());
        // annihilated by Λ₊
        let k = Arc::new(underline_k(&c, 0));
        let s = split_free(&k);
        assert!(s.twists.is_empty());
        assert_eq!(*s.core, *k);
        // Λ ⊕ k(2) → ({0}, k(2))
        let lam = Arc::new(make_free(&c, FreeKind::Lambda, 0, 1));
        let k2 = Arc::new(underline_k(&c, 2));
        let (sum, _, _) = direct_sum(&[lam, k2.clone()]);
        let s = split_free(&sum);
        assert_eq!(s.twists, vec![0]);
        assert_eq!(s.core.dims(), k2.dims());
        s.core_inclusion.validate_linear().unwrap();
        s.core_projection.validate_linear().unwrap();
        for (inc, proj) in s.inclusions.iter().zip(&s.projections) {
            inc.validate_linear().unwrap();
            proj.validate_linear().unwrap();
            // proj ∘ inc = id on Λ(a)
            let comp = inc.compose(proj);
            assert_eq!(comp.mats(), Morphism::identity(inc.source().clone()).mats());
        }
    }

    #[test]
    fn split_free_idempotent_and_reassembly() {
        let c = ctx(2);
        let lam1 = Arc::new(make_free(&c, FreeKind::Lambda, 1, 1));
        let k0 = Arc::new(underline_k(&c, 0));
        let km = Arc::new(underline_k(&c, -2));
        let (sum, _, _) = direct_sum(&[lam1.clone(), k0, km]);
        let s = split_free(&sum);
        assert_eq!(s.twists, vec![1]);
        let s2 = split_free(&s.core);
        assert!(s2.twists.is_empty());
        // reassembling gives the original graded dimensions
        let parts: Vec<Arc<M>> = s
            .twists
            .iter()
            .map(|&a| Arc::new(make_free(&c, FreeKind::Lambda, a, 1)))
            .chain([s.core.clone()])
            .collect();
        let (re, _, _) = direct_sum(&parts);
        assert_eq!(re.dims(), sum.dims());
    }
}

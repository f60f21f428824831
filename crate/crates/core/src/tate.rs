//! Tate resolutions: everywhere-minimal exact complexes of free modules glued
//! from a minimal free resolution (negative indices) and a minimal injective
//! coresolution (nonnegative indices) of a socle-annihilated module.
//!
//! Terms are tracked as multisets of Λ∨-twists; differentials as block
//! matrices whose (s, r) entry is an exterior element ζ acting by plain right
//! multiplication η ↦ η·ζ (the Prop. 4(i) normal form of a morphism
//! Λ∨(i) → Λ∨(j); the entry is homogeneous of degree j − i). Blocks compose
//! by wedge products, so minimality, twist-triangularity and d² = 0 are all
//! visible at the block level without realizing matrices.

use crate::complex::{injective_coresolution, min_free_resolution};
use crate::error::{Error, Result};
use crate::exterior::{Ctx, ExtElem};
use crate::field::Field;
use crate::matrix::{self, Mat};
use crate::module::{free_module, kernel, FreeKind, LambdaModule, Morphism};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A finite multiset of Λ∨-twists with the summand-major basis layout used
/// by `free_module`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeDecomp {
    pub twists: Vec<i64>,
}

impl FreeDecomp {
    pub fn new(twists: Vec<i64>) -> Self {
        FreeDecomp { twists }
    }

    pub fn len(&self) -> usize {
        self.twists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.twists.is_empty()
    }

    /// Multiplicity of each twist: the Betti numbers γ of this term.
    pub fn counts(&self) -> BTreeMap<i64, usize> {
        let mut m = BTreeMap::new();
        for &t in &self.twists {
            *m.entry(t).or_insert(0) += 1;
        }
        m
    }

    /// Component dimension of summand r at internal degree d.
    fn summand_dim<F: Field>(&self, ctx: &Ctx<F>, r: usize, d: i64) -> usize {
        ctx.ext().dim(-self.twists[r] - d)
    }

    pub fn dim_at<F: Field>(&self, ctx: &Ctx<F>, d: i64) -> usize {
        (0..self.twists.len())
            .map(|r| self.summand_dim(ctx, r, d))
            .sum()
    }

    pub fn offset<F: Field>(&self, ctx: &Ctx<F>, d: i64, r: usize) -> usize {
        (0..r).map(|s| self.summand_dim(ctx, s, d)).sum()
    }

    pub fn module<F: Field>(&self, ctx: &Ctx<F>) -> LambdaModule<F> {
        free_module(ctx, FreeKind::LambdaDual, &self.twists)
    }
}

/// Sparse block matrix of exterior entries between two free decompositions.
#[derive(Clone, Debug)]
pub struct BlockMat<F: Field> {
    pub src: FreeDecomp,
    pub tgt: FreeDecomp,
    pub entries: BTreeMap<(usize, usize), ExtElem<F>>,
}

impl<F: Field> BlockMat<F> {
    pub fn zero(src: FreeDecomp, tgt: FreeDecomp) -> Self {
        BlockMat {
            src,
            tgt,
            entries: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|e| e.is_zero())
    }

    /// Every entry is homogeneous of the forced degree j − i and lies in Λ₊.
    pub fn check_minimal_triangular(&self) -> Result<()> {
        for (&(s, r), e) in &self.entries {
            if e.is_zero() {
                continue;
            }
            let want = self.tgt.twists[r] - self.src.twists[s];
            match e.degree() {
                Some(d) if d as i64 == want && want >= 1 => {}
                _ => {
                    return Err(Error::Internal(format!(
                        "block ({s},{r}) between twists {} → {} is not minimal/triangular",
                        self.src.twists[s], self.tgt.twists[r]
                    )))
                }
            }
        }
        Ok(())
    }

    /// Block composition: entries wedge-multiply (plain right multiplication
    /// composes with no extra signs).
    pub fn compose(&self, field: &F, other: &BlockMat<F>) -> BlockMat<F> {
        assert_eq!(self.tgt, other.src, "block composition shape");
        let mut by_row: BTreeMap<usize, Vec<(usize, &ExtElem<F>)>> = BTreeMap::new();
        for (&(t, u), e) in &other.entries {
            by_row.entry(t).or_default().push((u, e));
        }
        let mut out: BTreeMap<(usize, usize), ExtElem<F>> = BTreeMap::new();
        for (&(s, t), e1) in &self.entries {
            let Some(row) = by_row.get(&t) else { continue };
            for &(u, e2) in row {
                let w = e1.wedge(field, e2);
                if w.is_zero() {
                    continue;
                }
                let slot = out.entry((s, u)).or_insert_with(ExtElem::zero);
                *slot = slot.add(field, &w);
            }
        }
        out.retain(|_, e| !e.is_zero());
        BlockMat {
            src: self.src.clone(),
            tgt: other.tgt.clone(),
            entries: out,
        }
    }

    /// The matrix of the realized morphism at internal degree d.
    pub fn realize_mat(&self, ctx: &Ctx<F>, d: i64) -> Mat<F> {
        let f = &ctx.field;
        let rows = self.src.dim_at(ctx, d);
        let cols = self.tgt.dim_at(ctx, d);
        let mut m = Mat::zeros(f, rows, cols);
        for (&(s, r), e) in &self.entries {
            let k_src = -self.src.twists[s] - d;
            if ctx.ext().dim(k_src) == 0 || e.is_zero() {
                continue;
            }
            let deg = e.degree().expect("homogeneous block entry") as i64;
            if ctx.ext().dim(k_src - deg) == 0 {
                continue;
            }
            let block = crate::exterior::contraction_matrix(ctx, e, k_src as usize);
            let ro = self.src.offset(ctx, d, s);
            let co = self.tgt.offset(ctx, d, r);
            for i in 0..block.rows() {
                for j in 0..block.cols() {
                    if !f.is_zero(&block[(i, j)]) {
                        m[(ro + i, co + j)] = f.add(&m[(ro + i, co + j)], &block[(i, j)]);
                    }
                }
            }
        }
        m
    }

    pub fn realize(
        &self,
        ctx: &Ctx<F>,
        src: Arc<LambdaModule<F>>,
        tgt: Arc<LambdaModule<F>>,
    ) -> Morphism<F> {
        let mut mats = BTreeMap::new();
        for &d in src.dims().keys() {
            if tgt.dim(d) == 0 {
                continue;
            }
            mats.insert(d, self.realize_mat(ctx, d));
        }
        let mor = Morphism::new(src, tgt, mats).expect("realized block morphism");
        mor.debug_validate();
        mor
    }

    /// Extract the block form of a morphism between standard free modules:
    /// the (s, r) entry is read off the degree −j_r component via Prop. 4(i).
    pub fn from_morphism(
        ctx: &Ctx<F>,
        src: FreeDecomp,
        tgt: FreeDecomp,
        mor: &Morphism<F>,
    ) -> Self {
        let f = &ctx.field;
        let mut entries = BTreeMap::new();
        for (r, &j) in tgt.twists.iter().enumerate() {
            let d = -j; // degree where summand r has its scalar component
            let mat = mor.mat(d);
            if mat.cols() == 0 {
                continue;
            }
            let col = tgt.offset(ctx, d, r); // scalar monomial is first in its summand
            for (s, &i) in src.twists.iter().enumerate() {
                let k = j - i;
                if ctx.ext().dim(k) == 0 {
                    continue;
                }
                let ro = src.offset(ctx, d, s);
                let mut e = ExtElem::zero();
                for (t_idx, &mask) in ctx.ext().basis(k as usize).iter().enumerate() {
                    let c = mat[(ro + t_idx, col)].clone();
                    if !f.is_zero(&c) {
                        e = e.add(f, &ExtElem::monomial(f, mask, c));
                    }
                }
                if !e.is_zero() {
                    entries.insert((s, r), e);
                }
            }
        }
        BlockMat { src, tgt, entries }
    }
}

/// A window of a Tate resolution of a socle-annihilated module.
pub struct TateResolution<F: Field> {
    ctx: Ctx<F>,
    seed: Arc<LambdaModule<F>>,
    window: (i64, i64),
    full: (i64, i64),
    terms: BTreeMap<i64, FreeDecomp>,
    blocks: BTreeMap<i64, BlockMat<F>>,
    /// I^{−1} ↠ N0 and N0 ↪ I^0
    augmentation: Morphism<F>,
    inclusion: Morphism<F>,
}

impl<F: Field> TateResolution<F> {
    pub fn ctx(&self) -> &Ctx<F> {
        &self.ctx
    }

    pub fn seed(&self) -> &Arc<LambdaModule<F>> {
        &self.seed
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }

    pub fn full_window(&self) -> (i64, i64) {
        self.full
    }

    pub fn term(&self, p: i64) -> FreeDecomp {
        self.terms.get(&p).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> &BTreeMap<i64, FreeDecomp> {
        &self.terms
    }

    pub fn block(&self, p: i64) -> Option<&BlockMat<F>> {
        self.blocks.get(&p)
    }

    pub fn augmentation(&self) -> &Morphism<F> {
        &self.augmentation
    }

    pub fn inclusion(&self) -> &Morphism<F> {
        &self.inclusion
    }

    /// γ_{p,i}: multiplicity of Λ∨(i) in I^p, from the tracked decomposition.
    pub fn gamma(&self) -> BTreeMap<(i64, i64), usize> {
        let mut out = BTreeMap::new();
        for (&p, dec) in &self.terms {
            for (i, c) in dec.counts() {
                out.insert((p, i), c);
            }
        }
        out
    }

    pub fn gamma_at(&self, p: i64, i: i64) -> usize {
        self.terms
            .get(&p)
            .map(|d| d.counts().get(&i).copied().unwrap_or(0))
            .unwrap_or(0)
    }

    pub fn realize_term(&self, p: i64) -> Arc<LambdaModule<F>> {
        Arc::new(self.term(p).module(&self.ctx))
    }

    pub fn realize_diff(&self, p: i64) -> Result<Morphism<F>> {
        let b = self.blocks.get(&p).ok_or_else(|| {
            Error::Window(format!("differential at index {p} outside computed window"))
        })?;
        Ok(b.realize(&self.ctx, self.realize_term(p), self.realize_term(p + 1)))
    }

    /// Corner module Z^p = Ker d_I^p with its induced action.
    pub fn corner(&self, p: i64) -> Result<Arc<LambdaModule<F>>> {
        if p <= self.full.0 || p >= self.full.1 {
            return Err(Error::Window(format!(
                "corner at {p} needs interior indices of [{}, {}]",
                self.full.0, self.full.1
            )));
        }
        let d = self.realize_diff(p)?;
        let (z, _) = kernel(&d);
        Ok(z)
    }

    /// Structural validation: twist triangularity, minimality, d² = 0 at the
    /// block level, and exactness at the gluing indices by rank counting.
    pub fn validate(&self) -> Result<()> {
        for b in self.blocks.values() {
            b.check_minimal_triangular()?;
        }
        for (&p, b) in &self.blocks {
            if let Some(next) = self.blocks.get(&(p + 1)) {
                if !b.compose(&self.ctx.field, next).is_zero() {
                    return Err(Error::Internal(format!("block d² ≠ 0 at index {p}")));
                }
            }
        }
        // gluing: I^{−1} → N0 → I^0 composes to d^{−1} and is exact at 0
        let f = &self.ctx.field;
        let glue = self.augmentation.compose(&self.inclusion);
        if let Some(b) = self.blocks.get(&-1) {
            let realized = b.realize(&self.ctx, self.realize_term(-1), self.realize_term(0));
            for &deg in realized.source().dims().keys() {
                if glue.mat(deg) != realized.mat(deg) {
                    return Err(Error::Internal("glue differential mismatch".into()));
                }
            }
        }
        // augmentation surjective, inclusion injective, ker inc·... = im aug:
        for (&deg, &dim) in self.seed.dims() {
            let ra = matrix::rank(f, &self.augmentation.mat(deg));
            if ra != dim {
                return Err(Error::Internal("augmentation not surjective".into()));
            }
            let ri = matrix::rank(f, &self.inclusion.mat(deg));
            if ri != dim {
                return Err(Error::Internal("inclusion not injective".into()));
            }
        }
        Ok(())
    }

    /// Honest exactness at every interior index of the window by per-degree
    /// rank counting on realized matrices.
    pub fn check_exactness_by_ranks(&self) -> Result<()> {
        let f = &self.ctx.field;
        for p in (self.full.0 + 1)..self.full.1 {
            let term = self.realize_term(p);
            let din = self.realize_diff(p - 1)?;
            let dout = self.realize_diff(p)?;
            for (&deg, &dim) in term.dims() {
                let r1 = matrix::rank(f, &din.mat(deg));
                let r2 = matrix::rank(f, &dout.mat(deg));
                if r1 + r2 != dim {
                    return Err(Error::Internal(format!(
                        "not exact at index {p}, degree {deg}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Build a Tate resolution of N0 over the window [pmin, pmax] (internally
/// widened by one index on each side, and always covering [−1, 1]).
pub fn tate_resolution<F: Field>(
    n0: &Arc<LambdaModule<F>>,
    window: (i64, i64),
) -> Result<TateResolution<F>> {
    if window.0 > window.1 {
        return Err(Error::Window(format!(
            "empty window [{}, {}]",
            window.0, window.1
        )));
    }
    if !n0.is_socle_annihilated() {
        return Err(Error::Precondition(
            "seed has a free summand (N·soc(Λ) ≠ 0); normalize with split_free first".into(),
        ));
    }
    let full = ((window.0 - 1).min(-1), (window.1 + 1).max(1));
    let ctx = n0.ctx().clone();
    if n0.is_zero() {
        let zero = Arc::new(LambdaModule::zero(ctx.clone()));
        let t = TateResolution {
            ctx,
            seed: n0.clone(),
            window,
            full,
            terms: BTreeMap::new(),
            blocks: BTreeMap::new(),
            augmentation: Morphism::zero(zero.clone(), n0.clone()),
            inclusion: Morphism::zero(n0.clone(), zero),
        };
        return Ok(t);
    }
    let zero_action = n0
        .dims()
        .keys()
        .all(|&d| (0..=ctx.n()).all(|i| n0.act(d, i).is_zero(&ctx.field)));
    let t = if zero_action {
        tate_fast(n0, window, full)
    } else {
        tate_generic(n0, window, full)
    };
    t.validate()?;
    Ok(t)
}

fn tate_generic<F: Field>(
    n0: &Arc<LambdaModule<F>>,
    window: (i64, i64),
    full: (i64, i64),
) -> TateResolution<F> {
    let ctx = n0.ctx().clone();
    let neg_len = (-full.0) as usize;
    let pos_len = (full.1 + 1) as usize;
    let res = min_free_resolution(n0, neg_len);
    let cores = injective_coresolution(n0, pos_len);
    let mut terms = BTreeMap::new();
    let mut blocks = BTreeMap::new();
    for (k, (tw, _)) in res.terms.iter().enumerate() {
        terms.insert(-(k as i64) - 1, FreeDecomp::new(tw.clone()));
    }
    for (p, (tw, _)) in cores.terms.iter().enumerate() {
        terms.insert(p as i64, FreeDecomp::new(tw.clone()));
    }
    for (k, d) in res.diffs.iter().enumerate() {
        // diffs[k] : P^{−k−2} → P^{−k−1}
        let p = -(k as i64) - 2;
        let src = terms[&p].clone();
        let tgt = terms[&(p + 1)].clone();
        blocks.insert(p, BlockMat::from_morphism(&ctx, src, tgt, d));
    }
    for (p, d) in cores.diffs.iter().enumerate() {
        let src = terms[&(p as i64)].clone();
        let tgt = terms[&(p as i64 + 1)].clone();
        blocks.insert(p as i64, BlockMat::from_morphism(&ctx, src, tgt, d));
    }
    // glue d^{−1} = augmentation ∘ inclusion
    let glue = res.augmentation.compose(&cores.inclusion);
    let src = terms[&-1].clone();
    let tgt = terms[&0].clone();
    blocks.insert(-1, BlockMat::from_morphism(&ctx, src, tgt, &glue));
    #[cfg(debug_assertions)]
    {
        // the block form must reproduce the realized differentials exactly
        let total: usize = n0.total_dim();
        if total <= 64 {
            for (&p, b) in &blocks {
                let realized = b.realize(
                    &ctx,
                    Arc::new(b.src.module(&ctx)),
                    Arc::new(b.tgt.module(&ctx)),
                );
                let orig: Morphism<F> = if p == -1 {
                    glue.clone()
                } else if p < -1 {
                    res.diffs[(-p - 2) as usize].clone()
                } else {
                    cores.diffs[p as usize].clone()
                };
                for (&deg, m) in realized.mats() {
                    assert_eq!(
                        *m,
                        orig.mat(deg),
                        "block reconstruction at index {p}, degree {deg}"
                    );
                }
            }
        }
    }
    TateResolution {
        ctx,
        seed: n0.clone(),
        window,
        full,
        terms,
        blocks,
        augmentation: res.augmentation,
        inclusion: cores.inclusion,
    }
}

/// Monomials of S^d in `nvars` variables as exponent vectors, lex order.
fn sym_monomials(nvars: usize, d: usize) -> Vec<Vec<u8>> {
    if nvars == 1 {
        return vec![vec![d as u8]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in sym_monomials(nvars - 1, d - first) {
            let mut m = vec![first as u8];
            m.append(&mut rest);
            out.push(m);
        }
    }
    out
}

/// Closed-form Tate resolution for seeds with zero action (direct sums of
/// twisted trivial modules k(a)): per basis element of the seed, the Cartan
/// strand S^pV*⊗Λ∨(p) on the injective side and its dual on the free side,
/// with monomial-transition blocks. This is exactly what the generic path
/// computes for such seeds, without any elimination.
fn tate_fast<F: Field>(
    n0: &Arc<LambdaModule<F>>,
    window: (i64, i64),
    full: (i64, i64),
) -> TateResolution<F> {
    let ctx = n0.ctx().clone();
    let f = ctx.field.clone();
    let n = ctx.n() as i64;
    let nv = ctx.n() + 1;
    // strands in (degree ascending, basis order): k(c) with c = −degree
    let mut strands: Vec<i64> = Vec::new();
    for (&d, &dim) in n0.dims() {
        for _ in 0..dim {
            strands.push(-d);
        }
    }
    let mut terms: BTreeMap<i64, FreeDecomp> = BTreeMap::new();
    for p in full.0..=full.1 {
        let mut twists = Vec::new();
        for &c in &strands {
            if p >= 0 {
                // Λ∨(p + c)^{dim S^p V*}
                let mult = sym_count(nv, p as usize);
                twists.extend(std::iter::repeat_n(p + c, mult));
            } else {
                // index −q: Λ∨(−q−n+c)^{dim S^{q−1} V}
                let q = (-p) as usize;
                let mult = sym_count(nv, q - 1);
                twists.extend(std::iter::repeat_n(p - n + c, mult));
            }
        }
        terms.insert(p, FreeDecomp::new(twists));
    }
    let mut blocks = BTreeMap::new();
    for p in full.0..full.1 {
        let src = terms[&p].clone();
        let tgt = terms[&(p + 1)].clone();
        let mut entries = BTreeMap::new();
        let (src_mults, tgt_mults): (Vec<usize>, Vec<usize>) = strands
            .iter()
            .map(|_| {
                let s = if p >= 0 {
                    sym_count(nv, p as usize)
                } else {
                    sym_count(nv, (-p) as usize - 1)
                };
                let t = if p + 1 >= 0 {
                    sym_count(nv, (p + 1) as usize)
                } else {
                    sym_count(nv, (-p - 1) as usize - 1)
                };
                (s, t)
            })
            .unzip();
        let mut soff = 0usize;
        let mut toff = 0usize;
        for (si, _) in strands.iter().enumerate() {
            if p >= 0 {
                // S^p-monomial m → S^{p+1}-monomial x_i·m, entry e_i
                let ms = sym_monomials(nv, p as usize);
                let mt = sym_monomials(nv, (p + 1) as usize);
                let index: BTreeMap<&[u8], usize> = mt
                    .iter()
                    .enumerate()
                    .map(|(i, m)| (m.as_slice(), i))
                    .collect();
                for (a, m) in ms.iter().enumerate() {
                    for i in 0..nv {
                        let mut m2 = m.clone();
                        m2[i] += 1;
                        let b = index[m2.as_slice()];
                        let slot = entries
                            .entry((soff + a, toff + b))
                            .or_insert_with(ExtElem::zero);
                        *slot = slot.add(&f, &ExtElem::basis_vector(&f, i));
                    }
                }
            } else if p == -1 {
                // glue block: the strand generator maps through k(c) into the
                // socle of Λ∨(c): entry e_0∧…∧e_n
                let top = ExtElem::monomial(&f, ctx.ext().top(), f.one());
                entries.insert((soff, toff), top);
            } else {
                // S^q-monomial u → S^{q−1}-monomial u′ with u = x_i·u′
                let q = (-p) as usize;
                let ms = sym_monomials(nv, q - 1);
                let mt = sym_monomials(nv, q - 2);
                let index: BTreeMap<&[u8], usize> = mt
                    .iter()
                    .enumerate()
                    .map(|(i, m)| (m.as_slice(), i))
                    .collect();
                for (a, u) in ms.iter().enumerate() {
                    for i in 0..nv {
                        if u[i] == 0 {
                            continue;
                        }
                        let mut u2 = u.clone();
                        u2[i] -= 1;
                        let b = index[u2.as_slice()];
                        let slot = entries
                            .entry((soff + a, toff + b))
                            .or_insert_with(ExtElem::zero);
                        *slot = slot.add(&f, &ExtElem::basis_vector(&f, i));
                    }
                }
            }
            soff += src_mults[si];
            toff += tgt_mults[si];
        }
        blocks.insert(p, BlockMat { src, tgt, entries });
    }
    // augmentation I^{−1} ↠ N0: strand generators to the seed basis vectors
    let p_minus1 = &terms[&-1];
    let mut targets = Vec::new();
    for (&d, &dim) in n0.dims() {
        for r in 0..dim {
            let mut y = vec![f.zero(); n0.dim(d)];
            y[r] = f.one();
            targets.push(y);
        }
    }
    let augmentation =
        crate::module::free_map(&ctx, FreeKind::LambdaDual, &p_minus1.twists, &targets, n0);
    // inclusion N0 ↪ I^0: seed basis vector to its strand's scalar monomial
    let i0 = Arc::new(terms[&0].module(&ctx));
    let mut inc_mats: BTreeMap<i64, Mat<F>> = BTreeMap::new();
    let mut strand_idx = 0usize;
    for (&d, &dim) in n0.dims() {
        let mut m = Mat::zeros(&f, dim, i0.dim(d));
        for r in 0..dim {
            let off = terms[&0].offset(&ctx, d, strand_idx);
            m[(r, off)] = f.one();
            strand_idx += 1;
        }
        inc_mats.insert(d, m);
    }
    let inclusion = Morphism::new(n0.clone(), i0, inc_mats).expect("seed inclusion");
    inclusion.debug_validate();
    TateResolution {
        ctx,
        seed: n0.clone(),
        window,
        full,
        terms,
        blocks,
        augmentation,
        inclusion,
    }
}

fn sym_count(nvars: usize, d: usize) -> usize {
    // C(d + nvars − 1, nvars − 1)
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for k in 0..(nvars - 1) {
        num *= (d + 1 + k) as u128;
        den *= (k + 1) as u128;
    }
    (num / den) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, DEFAULT_PRIME};
    use crate::module::{make_free, underline_k};

    fn ctx(n: usize) -> Ctx<PrimeField> {
        Ctx::new(n, PrimeField::new(DEFAULT_PRIME))
    }

    #[test]
    fn tate_of_k_on_p2_window() {
        let c = ctx(2);
        let k = Arc::new(underline_k(&c, 0));
        let t = tate_resolution(&k, (-2, 2)).unwrap();
        // expected terms: Λ∨(−4)³, Λ∨(−3)¹, Λ∨(0)¹, Λ∨(1)³, Λ∨(2)⁶
        assert_eq!(t.term(-2).counts(), BTreeMap::from([(-4, 3)]));
        assert_eq!(t.term(-1).counts(), BTreeMap::from([(-3, 1)]));
        assert_eq!(t.term(0).counts(), BTreeMap::from([(0, 1)]));
        assert_eq!(t.term(1).counts(), BTreeMap::from([(1, 3)]));
        assert_eq!(t.term(2).counts(), BTreeMap::from([(2, 6)]));
        t.check_exactness_by_ranks().unwrap();
    }

    #[test]
    fn tate_rejects_free_summands() {
        let c = ctx(1);
        let lv = Arc::new(make_free(&c, FreeKind::LambdaDual, 0, 1));
        assert!(matches!(
            tate_resolution(&lv, (-1, 1)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn fast_path_matches_generic_gammas() {
        // force the generic path by resolving a non-trivial module with the
        // same Tate terms: compare k(a)-seed fast output against the generic
        // machinery run on the same seed
        for n in 1..=2 {
            let c = ctx(n);
            for a in [-1i64, 0, 2] {
                let k = Arc::new(underline_k(&c, a));
                let fast = tate_fast(&k, (-2, 2), (-3, 3));
                fast.validate().unwrap();
                fast.check_exactness_by_ranks().unwrap();
                let gen = tate_generic(&k, (-2, 2), (-3, 3));
                gen.validate().unwrap();
                gen.check_exactness_by_ranks().unwrap();
                for p in -3..=3 {
                    assert_eq!(
                        fast.term(p).counts(),
                        gen.term(p).counts(),
                        "n={n} a={a} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn tate_of_k_on_p1() {
        let c = ctx(1);
        let k = Arc::new(underline_k(&c, 0));
        let t = tate_resolution(&k, (-2, 2)).unwrap();
        assert_eq!(t.term(0).counts(), BTreeMap::from([(0, 1)]));
        assert_eq!(t.term(1).counts(), BTreeMap::from([(1, 2)]));
        assert_eq!(t.term(2).counts(), BTreeMap::from([(2, 3)]));
        assert_eq!(t.term(-1).counts(), BTreeMap::from([(-2, 1)]));
        assert_eq!(t.term(-2).counts(), BTreeMap::from([(-3, 2)]));
        // corner at 0 has the graded dimensions of the seed
        let z0 = t.corner(0).unwrap();
        assert_eq!(z0.dims(), k.dims());
        // corner at 1: dims from kernel ranks: {−1: 2, −2: 1}
        let z1 = t.corner(1).unwrap();
        assert_eq!(z1.dims(), &BTreeMap::from([(-2, 1), (-1, 2)]));
        // interior corners are socle-annihilated (im d ⊆ I·Λ₊)
        assert!(z1.is_socle_annihilated());
    }

    #[test]
    fn tate_of_truncated_module() {
        // a generic (nonzero-action) seed: Λ/(Λ₊)² on P¹ stays minimal+exact
        let c = ctx(1);
        let m = Arc::new(crate::complex::builders::truncated(&c, 2, 0));
        let t = tate_resolution(&m, (-2, 2)).unwrap();
        t.check_exactness_by_ranks().unwrap();
        // L(Λ/Λ₊²) = [O → O(1)²] ~ T Ω¹(2)-ish on P¹: table checked elsewhere;
        // here: structural checks + corner(0) dims = seed dims
        let z0 = t.corner(0).unwrap();
        assert_eq!(z0.dims(), m.dims());
    }

    #[test]
    fn fast_path_exactness_on_p3_and_p4() {
        // honest rank-counted exactness of the closed-form Cartan strands at
        // moderate windows on larger projective spaces
        for (n, w) in [(3usize, (-3i64, 3i64)), (4, (-2, 2))] {
            let c = ctx(n);
            let k = Arc::new(underline_k(&c, 1));
            let t = tate_resolution(&k, w).unwrap();
            t.check_exactness_by_ranks().unwrap();
        }
    }

    #[test]
    fn tate_of_zero_module_is_empty() {
        let c = ctx(1);
        let z = Arc::new(LambdaModule::zero(c.clone()));
        let t = tate_resolution(&z, (-2, 2)).unwrap();
        assert!(t.gamma().is_empty());
        assert!(t.terms().is_empty());
    }

    #[test]
    fn betti_stability_under_window_enlargement() {
        let c = ctx(1);
        let m = Arc::new(crate::complex::builders::truncated(&c, 2, 0));
        let t1 = tate_resolution(&m, (-2, 2)).unwrap();
        let t2 = tate_resolution(&m, (-4, 4)).unwrap();
        for p in -3..=3 {
            assert_eq!(t1.term(p).counts(), t2.term(p).counts(), "γ stable at {p}");
        }
    }
}

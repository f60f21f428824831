//! Complexes of Λ-modules: mapping cones, exactness counting, minimal free
//! resolutions, minimal injective coresolutions (dualized free resolutions),
//! free resolutions of bounded complexes and module representatives.

use crate::error::{Error, Result};
use crate::exterior::Ctx;
use crate::field::Field;
use crate::matrix::{self, Mat};
use crate::module::{
    direct_sum, double_dual_iso, free_map, free_module, kernel, underline_k, FreeKind,
    LambdaModule, Morphism,
};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A cohomologically indexed complex … → K^p → K^{p+1} → … with finitely
/// many nonzero terms.
#[derive(Clone)]
pub struct ModuleComplex<F: Field> {
    ctx: Ctx<F>,
    terms: BTreeMap<i64, Arc<LambdaModule<F>>>,
    diffs: BTreeMap<i64, Morphism<F>>,
}

impl<F: Field> std::fmt::Debug for ModuleComplex<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let idx: Vec<i64> = self.terms.keys().copied().collect();
        write!(f, "ModuleComplex(indices {idx:?})")
    }
}

impl<F: Field> ModuleComplex<F> {
    pub fn new(
        ctx: Ctx<F>,
        terms: BTreeMap<i64, Arc<LambdaModule<F>>>,
        diffs: BTreeMap<i64, Morphism<F>>,
    ) -> Result<Self> {
        let terms: BTreeMap<i64, Arc<LambdaModule<F>>> =
            terms.into_iter().filter(|(_, t)| !t.is_zero()).collect();
        let mut kept = BTreeMap::new();
        for (p, d) in diffs {
            let (Some(s), Some(t)) = (terms.get(&p), terms.get(&(p + 1))) else {
                continue;
            };
            if **d.source() != **s || **d.target() != **t {
                return Err(Error::InvalidModule(format!(
                    "differential endpoints at index {p}"
                )));
            }
            kept.insert(p, d);
        }
        Ok(ModuleComplex {
            ctx,
            terms,
            diffs: kept,
        })
    }

    pub fn zero(ctx: Ctx<F>) -> Self {
        ModuleComplex {
            ctx,
            terms: BTreeMap::new(),
            diffs: BTreeMap::new(),
        }
    }

    pub fn from_module(m: Arc<LambdaModule<F>>, at: i64) -> Self {
        let ctx = m.ctx().clone();
        let terms = if m.is_zero() {
            BTreeMap::new()
        } else {
            BTreeMap::from([(at, m)])
        };
        ModuleComplex {
            ctx,
            terms,
            diffs: BTreeMap::new(),
        }
    }

    pub fn ctx(&self) -> &Ctx<F> {
        &self.ctx
    }

    pub fn term(&self, p: i64) -> Arc<LambdaModule<F>> {
        self.terms
            .get(&p)
            .cloned()
            .unwrap_or_else(|| Arc::new(LambdaModule::zero(self.ctx.clone())))
    }

    pub fn terms(&self) -> &BTreeMap<i64, Arc<LambdaModule<F>>> {
        &self.terms
    }

    pub fn diff(&self, p: i64) -> Morphism<F> {
        self.diffs
            .get(&p)
            .cloned()
            .unwrap_or_else(|| Morphism::zero(self.term(p), self.term(p + 1)))
    }

    pub fn min_index(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_index(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn is_zero_complex(&self) -> bool {
        self.terms.is_empty()
    }

    /// d² = 0 and Λ-linearity of each differential.
    pub fn validate(&self) -> Result<()> {
        for d in self.diffs.values() {
            d.validate_linear()?;
        }
        for (&p, d) in &self.diffs {
            if let Some(next) = self.diffs.get(&(p + 1)) {
                if !d.compose(next).is_zero() {
                    return Err(Error::InvalidModule(format!("d² ≠ 0 at index {p}")));
                }
            }
        }
        Ok(())
    }

    /// Translation T^k: (T^k K)^p = K^{p+k}, differential times (−1)^k.
    pub fn shift(&self, k: i64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&p, t)| (p - k, t.clone()))
            .collect();
        let diffs = self
            .diffs
            .iter()
            .map(|(&p, d)| {
                (
                    p - k,
                    if k.rem_euclid(2) == 1 {
                        d.neg()
                    } else {
                        d.clone()
                    },
                )
            })
            .collect();
        ModuleComplex {
            ctx: self.ctx.clone(),
            terms,
            diffs,
        }
    }

    /// Termwise twist K(a): same differentials on the regraded terms.
    pub fn twist(&self, a: i64) -> Self {
        let terms: BTreeMap<i64, Arc<LambdaModule<F>>> = self
            .terms
            .iter()
            .map(|(&p, t)| (p, Arc::new(t.twist(a))))
            .collect();
        let mut diffs = BTreeMap::new();
        for (&p, d) in &self.diffs {
            let mats = d
                .mats()
                .iter()
                .map(|(&deg, m)| (deg - a, m.clone()))
                .collect();
            diffs.insert(
                p,
                Morphism::new(terms[&p].clone(), terms[&(p + 1)].clone(), mats)
                    .expect("twisted differential"),
            );
        }
        ModuleComplex {
            ctx: self.ctx.clone(),
            terms,
            diffs,
        }
    }

    /// The dual complex: (K∨)^p = (K^{−p})∨ with dualized differentials.
    pub fn dual(&self) -> Self {
        let terms: BTreeMap<i64, Arc<LambdaModule<F>>> = self
            .terms
            .iter()
            .map(|(&p, t)| (-p, Arc::new(t.dual())))
            .collect();
        let mut diffs = BTreeMap::new();
        for (&p, d) in &self.diffs {
            // d^p : K^p → K^{p+1} dualizes to (K∨)^{−p−1} → (K∨)^{−p}
            let (Some(src), Some(tgt)) = (terms.get(&(-p - 1)), terms.get(&(-p))) else {
                continue;
            };
            let dd = d.dual();
            let dd = Morphism::new(src.clone(), tgt.clone(), dd.mats().clone())
                .expect("dual differential");
            diffs.insert(-p - 1, dd);
        }
        ModuleComplex {
            ctx: self.ctx.clone(),
            terms,
            diffs,
        }
    }

    /// Exactness at each index of the window, by rank counting per internal
    /// degree: rank d^{p−1} + rank d^p = dim K^p.
    pub fn is_exact(&self, window: std::ops::RangeInclusive<i64>) -> BTreeMap<i64, bool> {
        let f = &self.ctx.field;
        let mut out = BTreeMap::new();
        for p in window {
            let term = self.term(p);
            let din = self.diff(p - 1);
            let dout = self.diff(p);
            let mut ok = true;
            for (&deg, &dim) in term.dims() {
                let r_in = matrix::rank(f, &din.mat(deg));
                let r_out = matrix::rank(f, &dout.mat(deg));
                if r_in + r_out != dim {
                    ok = false;
                    break;
                }
            }
            out.insert(p, ok);
        }
        out
    }
}

/// A degreewise morphism of complexes.
#[derive(Clone)]
pub struct ChainMap<F: Field> {
    pub source: ModuleComplex<F>,
    pub target: ModuleComplex<F>,
    pub maps: BTreeMap<i64, Morphism<F>>,
}

impl<F: Field> ChainMap<F> {
    pub fn map(&self, p: i64) -> Morphism<F> {
        self.maps
            .get(&p)
            .cloned()
            .unwrap_or_else(|| Morphism::zero(self.source.term(p), self.target.term(p)))
    }

    pub fn validate(&self) -> Result<()> {
        for m in self.maps.values() {
            m.validate_linear()?;
        }
        let lo = self
            .source
            .min_index()
            .unwrap_or(0)
            .min(self.target.min_index().unwrap_or(0));
        let hi = self
            .source
            .max_index()
            .unwrap_or(0)
            .max(self.target.max_index().unwrap_or(0));
        for p in lo..=hi {
            let a = self.map(p).compose(&self.target.diff(p));
            let b = self.source.diff(p).compose(&self.map(p + 1));
            for &deg in a.source().dims().keys() {
                if a.mat(deg) != b.mat(deg) {
                    return Err(Error::InvalidModule(format!(
                        "chain map does not commute at index {p}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Con(u)^p = X^{p+1} ⊕ Y^p with d(x, y) = (−d_X x, u(x) + d_Y y).
pub fn mapping_cone<F: Field>(u: &ChainMap<F>) -> ModuleComplex<F> {
    let ctx = u.source.ctx().clone();
    let f = ctx.field.clone();
    let x = &u.source;
    let y = &u.target;
    let lo = x
        .min_index()
        .map(|v| v - 1)
        .unwrap_or(0)
        .min(y.min_index().unwrap_or(0));
    let hi = x
        .max_index()
        .map(|v| v - 1)
        .unwrap_or(0)
        .max(y.max_index().unwrap_or(0));
    let mut terms = BTreeMap::new();
    for p in lo..=hi {
        let (sum, _, _) = direct_sum(&[x.term(p + 1), y.term(p)]);
        if !sum.is_zero() {
            terms.insert(p, sum);
        }
    }
    let mut diffs = BTreeMap::new();
    for p in lo..hi {
        let (Some(src), Some(tgt)) = (terms.get(&p), terms.get(&(p + 1))) else {
            continue;
        };
        let dx = x.diff(p + 1);
        let dy = y.diff(p);
        let up = u.map(p + 1);
        let mut mats = BTreeMap::new();
        for &deg in src.dims().keys() {
            if tgt.dim(deg) == 0 {
                continue;
            }
            let (x1, y0) = (x.term(p + 1).dim(deg), y.term(p).dim(deg));
            let (x2, y1) = (x.term(p + 2).dim(deg), y.term(p + 1).dim(deg));
            let mut m = Mat::zeros(&f, x1 + y0, x2 + y1);
            let dxm = dx.mat(deg);
            let um = up.mat(deg);
            let dym = dy.mat(deg);
            for i in 0..x1 {
                for j in 0..x2 {
                    m[(i, j)] = f.neg(&dxm[(i, j)]);
                }
                for j in 0..y1 {
                    m[(i, x2 + j)] = um[(i, j)].clone();
                }
            }
            for i in 0..y0 {
                for j in 0..y1 {
                    m[(x1 + i, x2 + j)] = dym[(i, j)].clone();
                }
            }
            mats.insert(deg, m);
        }
        diffs.insert(
            p,
            Morphism::new(src.clone(), tgt.clone(), mats).expect("cone differential"),
        );
    }
    let cone = ModuleComplex { ctx, terms, diffs };
    #[cfg(debug_assertions)]
    if cone.terms.values().map(|t| t.total_dim()).sum::<usize>() <= 512 {
        cone.validate().expect("cone is a complex");
    }
    cone
}

/// A minimal free resolution … → P^{−2} → P^{−1} → N → 0. Terms are in
/// Λ∨-standard form (Λ(a) realized as Λ∨(a−n−1)); `terms[k]` is P^{−k−1}.
pub struct Resolution<F: Field> {
    pub terms: Vec<(Vec<i64>, Arc<LambdaModule<F>>)>,
    /// `diffs[k]` : P^{−k−2} → P^{−k−1}
    pub diffs: Vec<Morphism<F>>,
    /// P^{−1} ↠ N
    pub augmentation: Morphism<F>,
}

/// Minimal free cover: generators are a basis of N/NΛ₊ ordered by descending
/// degree then input basis order. Returns the Λ∨-twists of the cover and the
/// cover morphism.
pub fn free_cover<F: Field>(m: &Arc<LambdaModule<F>>) -> (Vec<i64>, Morphism<F>) {
    let ctx = m.ctx().clone();
    let f = &ctx.field;
    let n = ctx.n() as i64;
    let mut twists = Vec::new();
    let mut targets = Vec::new();
    for (&d, &dim) in m.dims().iter().rev() {
        // image of Λ₊ into degree d = sum of images of all act_i[d−1];
        // generators = complement of the pivot columns of that row space
        let mut stacked = Mat::zeros(f, 0, dim);
        if m.dim(d - 1) > 0 {
            for i in 0..=ctx.n() {
                stacked = stacked.vstack(f, &m.act(d - 1, i));
            }
        }
        let pivots = matrix::rref_pivots_only(f, &stacked);
        for j in 0..dim {
            if !pivots.contains(&j) {
                twists.push(-d - n - 1);
                let mut y = vec![f.zero(); dim];
                y[j] = f.one();
                targets.push(y);
            }
        }
    }
    let cover = free_map(&ctx, FreeKind::LambdaDual, &twists, &targets, m);
    (twists, cover)
}

pub fn min_free_resolution<F: Field>(n: &Arc<LambdaModule<F>>, len: usize) -> Resolution<F> {
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    let (tw, aug) = free_cover(n);
    terms.push((tw, aug.source().clone()));
    let mut prev_cover = aug.clone();
    for _ in 1..len {
        let (k, inc) = kernel(&prev_cover);
        if k.is_zero() {
            break;
        }
        let (tw, cover) = free_cover(&k);
        let d = cover.compose(&inc);
        terms.push((tw, cover.source().clone()));
        diffs.push(d);
        prev_cover = cover;
    }
    Resolution {
        terms,
        diffs,
        augmentation: aug,
    }
}

/// A minimal injective coresolution 0 → N → I^0 → I^1 → …, computed as the
/// dual of a minimal free resolution of N∨, with terms converted to
/// Λ∨-standard form.
pub struct Coresolution<F: Field> {
    pub terms: Vec<(Vec<i64>, Arc<LambdaModule<F>>)>,
    /// `diffs[p]` : I^p → I^{p+1}
    pub diffs: Vec<Morphism<F>>,
    /// N ↪ I^0
    pub inclusion: Morphism<F>,
}

/// Explicit isomorphism from a Λ∨-standard free module onto the dual of a
/// Λ∨-standard free module, sending generators to the dual basis vectors of
/// the scalar monomials.
fn standardize_dual<F: Field>(
    ctx: &Ctx<F>,
    q_twists: &[i64],
    q: &Arc<LambdaModule<F>>,
    dual_q: &Arc<LambdaModule<F>>,
) -> (Vec<i64>, Morphism<F>) {
    let f = &ctx.field;
    let n = ctx.n() as i64;
    let std_twists: Vec<i64> = q_twists.iter().map(|&i| -i - n - 1).collect();
    let mut targets = Vec::new();
    for (r, &i) in q_twists.iter().enumerate() {
        // generator degree of Λ∨(−i−n−1) is i; (dual Q)_i = (Q_{−i})*, and the
        // generator goes to the dual basis vector of summand r's scalar monomial
        let mut y = vec![f.zero(); dual_q.dim(i)];
        let offset: usize = q_twists[..r]
            .iter()
            .map(|&j| ctx.ext().dim(-j - (-i)))
            .sum();
        y[offset] = f.one();
        targets.push(y);
        let _ = q;
    }
    let iso = free_map(ctx, FreeKind::LambdaDual, &std_twists, &targets, dual_q);
    (std_twists, iso)
}

pub fn injective_coresolution<F: Field>(n: &Arc<LambdaModule<F>>, len: usize) -> Coresolution<F> {
    let m = Arc::new(n.dual());
    let res = min_free_resolution(&m, len);
    let ctx = n.ctx().clone();
    let mut terms = Vec::new();
    let mut isos = Vec::new();
    for (tw, q) in &res.terms {
        let dual_q = Arc::new(q.dual());
        let (std_tw, iso) = standardize_dual(&ctx, tw, q, &dual_q);
        terms.push((std_tw, iso.source().clone()));
        isos.push(iso);
    }
    let mut diffs = Vec::new();
    for (p, d) in res.diffs.iter().enumerate() {
        // d : Q^{−p−2} → Q^{−p−1}; dual: (Q^{−p−1})∨ → (Q^{−p−2})∨ = I^p → I^{p+1}
        let dd = d.dual();
        let dd = Morphism::new(
            isos[p].target().clone(),
            isos[p + 1].target().clone(),
            dd.mats().clone(),
        )
        .expect("dual differential endpoints");
        let inv = isos[p + 1].inverse().expect("standardization is iso");
        diffs.push(isos[p].compose(&dd).compose(&inv));
    }
    // N → N∨∨ = dual(M) → dual(Q^{−1}) → I^0
    let mu = double_dual_iso(n);
    let dual_aug = res.augmentation.dual();
    let dual_aug = Morphism::new(
        mu.target().clone(),
        isos[0].target().clone(),
        dual_aug.mats().clone(),
    )
    .expect("dual augmentation endpoints");
    let inv0 = isos[0].inverse().expect("standardization is iso");
    let inclusion = mu.compose(&dual_aug).compose(&inv0);
    Coresolution {
        terms,
        diffs,
        inclusion,
    }
}

/// Quasi-isomorphism v : P → K with P a right-bounded complex of frees,
/// built top-down by killing cone cohomology with new free generators.
/// `floor` is the lowest index at which generators are still added; the cone
/// is then acyclic at indices > floor + 1.
pub fn free_resolution_of_complex<F: Field>(k: &ModuleComplex<F>, floor: i64) -> ChainMap<F> {
    let ctx = k.ctx().clone();
    let f = ctx.field.clone();
    let mut p = ModuleComplex::zero(ctx.clone());
    let mut phi: BTreeMap<i64, Morphism<F>> = BTreeMap::new();
    if k.is_zero_complex() {
        return ChainMap {
            source: p,
            target: k.clone(),
            maps: phi,
        };
    }
    let top = k.max_index().unwrap();
    let mut q = top;
    while q >= floor {
        // cone at index q: Cone^q = P^{q+1} ⊕ K^q; kill H^q(Cone)
        let cone_term =
            |pp: &ModuleComplex<F>, idx: i64| -> (Arc<LambdaModule<F>>, Arc<LambdaModule<F>>) {
                (pp.term(idx + 1), k.term(idx))
            };
        let (xq1, yq) = cone_term(&p, q);
        // cone differentials around q as explicit matrices per degree
        let dq = |pp: &ModuleComplex<F>,
                  phi: &BTreeMap<i64, Morphism<F>>,
                  idx: i64,
                  deg: i64|
         -> Mat<F> {
            let (x1, y0) = (pp.term(idx + 1).dim(deg), k.term(idx).dim(deg));
            let (x2, y1) = (pp.term(idx + 2).dim(deg), k.term(idx + 1).dim(deg));
            let mut m = Mat::zeros(&f, x1 + y0, x2 + y1);
            let dx = pp.diff(idx + 1).mat(deg);
            let um = phi
                .get(&(idx + 1))
                .map(|mor| mor.mat(deg))
                .unwrap_or_else(|| Mat::zeros(&f, x1, y1));
            let dy = k.diff(idx).mat(deg);
            for i in 0..x1 {
                for j in 0..x2 {
                    m[(i, j)] = f.neg(&dx[(i, j)]);
                }
                for j in 0..y1 {
                    m[(i, x2 + j)] = um[(i, j)].clone();
                }
            }
            for i in 0..y0 {
                for j in 0..y1 {
                    m[(x1 + i, x2 + j)] = dy[(i, j)].clone();
                }
            }
            m
        };
        // find cohomology classes of the cone at index q, per internal degree
        #[allow(clippy::type_complexity)]
        let mut new_gens: Vec<(i64, Vec<F::Elem>, Vec<F::Elem>)> = Vec::new(); // (degree, z_P, z_K)
        let degrees: std::collections::BTreeSet<i64> =
            xq1.dims().keys().chain(yq.dims().keys()).copied().collect();
        for &deg in &degrees {
            let din = dq(&p, &phi, q - 1, deg);
            let dout = dq(&p, &phi, q, deg);
            let cycles = matrix::left_kernel(&f, &dout);
            if cycles.rows() == 0 {
                continue;
            }
            let bound = matrix::row_space(&f, &din);
            let bpiv: Vec<usize> = (0..bound.rows())
                .map(|i| {
                    (0..bound.cols())
                        .position(|j| !f.is_zero(&bound[(i, j)]))
                        .unwrap()
                })
                .collect();
            // reduce cycles modulo boundaries, keep nonzero reps
            let mut reps = Vec::new();
            for i in 0..cycles.rows() {
                let mut v = cycles.row(i).to_vec();
                for (bi, &pc) in bpiv.iter().enumerate() {
                    let c = v[pc].clone();
                    if !f.is_zero(&c) {
                        let nc = f.neg(&c);
                        f.row_axpy(&mut v, bound.row(bi), &nc);
                    }
                }
                if v.iter().any(|e| !f.is_zero(e)) {
                    reps.push(v);
                }
            }
            if reps.is_empty() {
                continue;
            }
            // independent representatives: rref of the reduced cycles
            let mat = Mat::from_rows(&f, xq1.dim(deg) + yq.dim(deg), reps);
            let rr = matrix::row_space(&f, &mat);
            for i in 0..rr.rows() {
                let x1 = xq1.dim(deg);
                let z_p = rr.row(i)[..x1].to_vec();
                let z_k = rr.row(i)[x1..].to_vec();
                new_gens.push((deg, z_p, z_k));
            }
        }
        if new_gens.is_empty() {
            q -= 1;
            continue;
        }
        // add a free summand per generator: d_P(g) = −z_P, φ(g) = z_K
        let nn = ctx.n() as i64;
        let twists: Vec<i64> = new_gens.iter().map(|(deg, _, _)| -deg - nn - 1).collect();
        let old_pq = p.term(q);
        let gen_free = Arc::new(free_module(&ctx, FreeKind::LambdaDual, &twists));
        let d_targets: Vec<Vec<F::Elem>> = new_gens
            .iter()
            .map(|(_, z_p, _)| z_p.iter().map(|e| f.neg(e)).collect())
            .collect();
        let phi_targets: Vec<Vec<F::Elem>> =
            new_gens.iter().map(|(_, _, z_k)| z_k.clone()).collect();
        let d_new = free_map(
            &ctx,
            FreeKind::LambdaDual,
            &twists,
            &d_targets,
            &p.term(q + 1),
        );
        let phi_new = free_map(
            &ctx,
            FreeKind::LambdaDual,
            &twists,
            &phi_targets,
            &k.term(q),
        );
        // P^q := old ⊕ new
        let (pq, incs, _) = direct_sum(&[old_pq.clone(), gen_free.clone()]);
        let mut terms = p.terms().clone();
        terms.insert(q, pq.clone());
        let mut diffs = p.diffs.clone();
        // extend d^q : P^q → P^{q+1}
        let old_d = p.diff(q);
        if !p.term(q + 1).is_zero() {
            let mut dmats = BTreeMap::new();
            for &deg in pq.dims().keys() {
                if p.term(q + 1).dim(deg) == 0 {
                    continue;
                }
                let top_block = old_d.mat(deg);
                let bot_block = d_new.mat(deg);
                dmats.insert(deg, top_block.vstack(&f, &bot_block));
            }
            diffs.insert(
                q,
                Morphism::new(pq.clone(), p.term(q + 1), dmats).expect("extended differential"),
            );
        }
        // extend d^{q−1} : P^{q−1} → P^q with zero new columns = compose with inclusion
        if let Some(dprev) = diffs.get(&(q - 1)).cloned() {
            diffs.insert(q - 1, dprev.compose(&incs[0]));
        }
        // extend φ^q
        let old_phi = phi
            .get(&q)
            .cloned()
            .unwrap_or_else(|| Morphism::zero(old_pq.clone(), k.term(q)));
        let mut pmats = BTreeMap::new();
        for &deg in pq.dims().keys() {
            if k.term(q).dim(deg) == 0 {
                continue;
            }
            pmats.insert(deg, old_phi.mat(deg).vstack(&f, &phi_new.mat(deg)));
        }
        phi.insert(
            q,
            Morphism::new(pq, k.term(q), pmats).expect("extended chain map"),
        );
        p = ModuleComplex {
            ctx: ctx.clone(),
            terms,
            diffs,
        };
        // re-run the same index: new generators may supply new cycles below,
        // but cohomology at q is now dead; move on
        q -= 1;
    }
    let cm = ChainMap {
        source: p,
        target: k.clone(),
        maps: phi,
    };
    #[cfg(debug_assertions)]
    {
        let total: usize = cm.source.terms().values().map(|t| t.total_dim()).sum();
        if total <= 512 {
            cm.source.validate().expect("free resolution is a complex");
            cm.validate().expect("resolution chain map");
        }
    }
    cm
}

/// Injective coresolution of a bounded complex: dualize a free resolution of
/// the dual complex. Returns u : K → J.
pub fn injective_coresolution_of_complex<F: Field>(k: &ModuleComplex<F>, ceil: i64) -> ChainMap<F> {
    let kd = k.dual();
    let v = free_resolution_of_complex(&kd, -ceil);
    let j = v.source.dual();
    // u := μ′ ∘ v∨ : K → K∨∨ → J
    let mut maps = BTreeMap::new();
    for &p in k.terms().keys() {
        let mu = double_dual_iso(&k.term(p));
        let vp = v.map(-p);
        let vpd = vp.dual();
        let vpd = Morphism::new(mu.target().clone(), j.term(p), vpd.mats().clone())
            .expect("dualized map endpoints");
        maps.insert(p, mu.compose(&vpd));
    }
    ChainMap {
        source: k.clone(),
        target: j,
        maps,
    }
}

/// Thm. 7(a) construction: an acyclic complex of frees I := Con(P → K → J),
/// whose corner at 0 is a module representative of the bounded complex K:
/// L(representative) and L(K) have the same hypercohomology tables.
pub fn module_representative<F: Field>(k: &ModuleComplex<F>) -> Arc<LambdaModule<F>> {
    let ctx = k.ctx().clone();
    if k.is_zero_complex() {
        return Arc::new(LambdaModule::zero(ctx));
    }
    let lo = k.min_index().unwrap().min(0) - 2;
    let hi = k.max_index().unwrap().max(0) + 2;
    let v = free_resolution_of_complex(k, lo);
    let u = injective_coresolution_of_complex(k, hi);
    // q = u∘v : P → J
    let mut maps = BTreeMap::new();
    for &p in v.source.terms().keys() {
        maps.insert(p, v.map(p).compose(&u.map(p)));
    }
    let q = ChainMap {
        source: v.source.clone(),
        target: u.target.clone(),
        maps,
    };
    let cone = mapping_cone(&q);
    let d0 = cone.diff(0);
    let (z0, _) = kernel(&d0);
    let split = crate::module::split_free(&z0);
    split.core
}

/// Convenience builders used across the crate and the CLI gallery.
pub mod builders {
    use super::*;

    /// (Λ/(Λ₊)^m)(a): the truncated algebra with the Def. 1(i) twist sign.
    pub fn truncated<F: Field>(ctx: &Ctx<F>, m: usize, a: i64) -> LambdaModule<F> {
        assert!(m >= 1);
        let lam = free_module(ctx, FreeKind::Lambda, &[0]);
        let f = &ctx.field;
        let mut dims = BTreeMap::new();
        let mut act = BTreeMap::new();
        for d in 0..m as i64 {
            let dim = ctx.ext().dim(d);
            if dim == 0 {
                continue;
            }
            dims.insert(d, dim);
        }
        for d in 0..(m as i64 - 1) {
            if ctx.ext().dim(d) == 0 || ctx.ext().dim(d + 1) == 0 {
                continue;
            }
            let mats: Vec<Mat<F>> = (0..=ctx.n()).map(|i| lam.act(d, i)).collect();
            act.insert(d, mats);
        }
        let _ = f;
        let t = LambdaModule::new(ctx.clone(), dims, act).expect("truncated algebra");
        t.debug_validate();
        t.twist(a)
    }

    /// omega(i) := dual((Λ/(Λ₊)^{i+1})(i)); its L-image represents Ω^i(i).
    pub fn omega<F: Field>(ctx: &Ctx<F>, i: usize) -> LambdaModule<F> {
        assert!(i <= ctx.n(), "omega index out of range");
        truncated(ctx, i + 1, i as i64).dual()
    }

    pub use super::super::module::underline_k;
}

/// Kernel of the composition map Hom(N′, I^{−1}) → Hom(N′, N): dimension of
/// the space of morphisms N′ → N factoring through the free cover (Thm. 7(b)).
pub fn dim_factoring_through_free<F: Field>(
    nprime: &Arc<LambdaModule<F>>,
    n: &Arc<LambdaModule<F>>,
) -> Result<usize> {
    let (_, aug) = free_cover(n);
    let iminus1 = aug.source().clone();
    let (dim_hom_free, basis) = crate::module::hom_space(nprime, &iminus1)?;
    if dim_hom_free == 0 {
        return Ok(0);
    }
    // rank of f ↦ aug∘f as a linear map into Hom(N′, N)
    let f = n.field();
    let composed: Vec<Morphism<F>> = basis.iter().map(|b| b.compose(&aug)).collect();
    let degs: Vec<(i64, usize, usize)> = nprime
        .dims()
        .iter()
        .filter_map(|(&d, &sd)| {
            let td = n.dim(d);
            (td > 0).then_some((d, sd, td))
        })
        .collect();
    let width: usize = degs.iter().map(|(_, s, t)| s * t).sum();
    let mut flat = Mat::zeros(f, composed.len(), width);
    for (r, mor) in composed.iter().enumerate() {
        let mut off = 0usize;
        for &(d, sd, td) in &degs {
            let m = mor.mat(d);
            for i in 0..sd {
                for j in 0..td {
                    flat[(r, off + i * td + j)] = m[(i, j)].clone();
                }
            }
            off += sd * td;
        }
    }
    Ok(matrix::rank(f, &flat))
}

/// The canonical surjection Λ ↠ k and other tiny morphism builders used by
/// tests and examples.
pub fn augmentation_to_k<F: Field>(ctx: &Ctx<F>) -> Morphism<F> {
    let lam = Arc::new(free_module(ctx, FreeKind::Lambda, &[0]));
    let k = Arc::new(underline_k(ctx, 0));
    Morphism::new(
        lam,
        k.clone(),
        BTreeMap::from([(0, Mat::identity(&ctx.field, 1))]),
    )
    .expect("augmentation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, DEFAULT_PRIME};
    use crate::module::{make_free, split_free};

    fn ctx(n: usize) -> Ctx<PrimeField> {
        Ctx::new(n, PrimeField::new(DEFAULT_PRIME))
    }

    #[test]
    fn cone_of_identity_is_exact() {
        let c = ctx(1);
        let k = Arc::new(underline_k(&c, 0));
        let kc = ModuleComplex::from_module(k, 0);
        let id = ChainMap {
            source: kc.clone(),
            target: kc.clone(),
            maps: BTreeMap::from([(0, Morphism::identity(kc.term(0)))]),
        };
        let cone = mapping_cone(&id);
        cone.validate().unwrap();
        assert_eq!(cone.terms().len(), 2);
        let ex = cone.is_exact(-2..=1);
        assert!(ex.values().all(|&b| b));
    }

    #[test]
    fn cone_of_zero_map_is_sum() {
        let c = ctx(1);
        let k = Arc::new(underline_k(&c, 0));
        let zc = ModuleComplex::zero(c.clone());
        let kc = ModuleComplex::from_module(k.clone(), 0);
        let z = ChainMap {
            source: zc,
            target: kc.clone(),
            maps: BTreeMap::new(),
        };
        let cone = mapping_cone(&z);
        assert_eq!(cone.term(0).dims(), k.dims());
        // [k] concentrated at 0 is not exact at 0
        let ex = kc.is_exact(0..=0);
        assert!(!ex[&0]);
    }

    #[test]
    fn cone_term_bookkeeping() {
        // Con(k ↪ Λ∨ in degree 0) has term dims {Λ∨ dims} ⊕ shifted {1}
        let c = ctx(1);
        let k = Arc::new(underline_k(&c, 0));
        let lv = Arc::new(make_free(&c, FreeKind::LambdaDual, 0, 1));
        let mut inc_m = Mat::zeros(&c.field, 1, 1);
        inc_m[(0, 0)] = 1;
        let inc = Morphism::new(k.clone(), lv.clone(), BTreeMap::from([(0, inc_m)])).unwrap();
        inc.validate_linear().unwrap();
        let u = ChainMap {
            source: ModuleComplex::from_module(k, 0),
            target: ModuleComplex::from_module(lv.clone(), 0),
            maps: BTreeMap::from([(0, inc)]),
        };
        let cone = mapping_cone(&u);
        assert_eq!(cone.term(0).dims(), lv.dims());
        assert_eq!(cone.term(-1).dim(0), 1);
    }

    #[test]
    fn resolution_of_k_has_ranks_1_2_3() {
        let c = ctx(1);
        let k = Arc::new(underline_k(&c, 0));
        let res = min_free_resolution(&k, 3);
        let ranks: Vec<usize> = res.terms.iter().map(|(tw, _)| tw.len()).collect();
        assert_eq!(ranks, vec![1, 2, 3]);
        // P^{-1} = Λ = Λ∨(−n−1)
        assert_eq!(res.terms[0].0, vec![-2]);
        // minimality: Im(P^{−p−1} → P^{−p}) ⊆ P^{−p}·Λ₊, i.e. the composite
        // with the generator coordinates vanishes — check via socle twist reads
        for d in &res.diffs {
            d.validate_linear().unwrap();
        }
        // resolution of a free module is itself
        let lam = Arc::new(make_free(&c, FreeKind::Lambda, 0, 1));
        let res = min_free_resolution(&lam, 3);
        assert_eq!(res.terms.len(), 1);
        assert!(res.augmentation.inverse().is_ok());
    }

    #[test]
    fn resolution_twist_equivariance() {
        let c = ctx(2);
        let k = Arc::new(underline_k(&c, 0));
        let ka = Arc::new(underline_k(&c, 3));
        let r0 = min_free_resolution(&k, 3);
        let ra = min_free_resolution(&ka, 3);
        for (a, b) in r0.terms.iter().zip(&ra.terms) {
            let shifted: Vec<i64> = a.0.iter().map(|t| t + 3).collect();
            assert_eq!(shifted, b.0);
        }
    }

    #[test]
    fn coresolution_of_k_is_cartan() {
        // I^p = Λ∨(p)^{C(p+n, n)} with the Lemma 6 proof differential
        let c = ctx(2);
        let k = Arc::new(underline_k(&c, 0));
        let cores = injective_coresolution(&k, 4);
        let expect = [(0i64, 1usize), (1, 3), (2, 6), (3, 10)];
        for (p, (tw, term)) in cores.terms.iter().enumerate() {
            let (ep, em) = expect[p];
            assert_eq!(tw.len(), em, "multiplicity at {p}");
            assert!(tw.iter().all(|&t| t == ep), "twists at {p}");
            term.validate().unwrap();
        }
        cores.inclusion.validate_linear().unwrap();
        for d in &cores.diffs {
            d.validate_linear().unwrap();
        }
        // exactness of 0 → k → I^0 → I^1 → I^2 …
        let mut terms = BTreeMap::from([(-1i64, k.clone())]);
        let mut diffs = BTreeMap::from([(-1i64, cores.inclusion.clone())]);
        for (p, (_, t)) in cores.terms.iter().enumerate() {
            terms.insert(p as i64, t.clone());
        }
        for (p, d) in cores.diffs.iter().enumerate() {
            diffs.insert(p as i64, d.clone());
        }
        let cx = ModuleComplex::new(c.clone(), terms, diffs).unwrap();
        cx.validate().unwrap();
        let ex = cx.is_exact(0..=2);
        assert!(ex.values().all(|&b| b), "coresolution exact: {ex:?}");
    }

    #[test]
    fn coresolution_of_injective_is_itself() {
        let c = ctx(2);
        let lv = Arc::new(make_free(&c, FreeKind::LambdaDual, 1, 1));
        let cores = injective_coresolution(&lv, 3);
        assert_eq!(cores.terms.len(), 1);
        assert_eq!(cores.terms[0].0, vec![1]);
        assert!(cores.inclusion.inverse().is_ok());
    }

    #[test]
    fn truncated_and_omega_builders() {
        let c = ctx(2);
        let t = builders::truncated(&c, 2, 1);
        assert_eq!(t.dims(), &BTreeMap::from([(-1, 1), (0, 3)]));
        t.validate().unwrap();
        let om0 = builders::omega(&c, 0);
        assert_eq!(om0.dims(), &BTreeMap::from([(0, 1)]));
        let omn = builders::omega(&c, 2);
        omn.validate().unwrap();
        assert!(omn.is_socle_annihilated());
    }

    #[test]
    fn module_representative_smoke() {
        let c = ctx(1);
        // K = [N0] concentrated at 0 → a module with N0's graded dimensions
        // (for socle-annihilated N0 the representative is N0 itself up to iso)
        let k = Arc::new(underline_k(&c, 0));
        let rep = module_representative(&ModuleComplex::from_module(k.clone(), 0));
        assert_eq!(rep.dims(), k.dims());
        // K = cone(identity) → zero module
        let kc = ModuleComplex::from_module(k.clone(), 0);
        let id = ChainMap {
            source: kc.clone(),
            target: kc.clone(),
            maps: BTreeMap::from([(0, Morphism::identity(kc.term(0)))]),
        };
        let cone = mapping_cone(&id);
        let rep = module_representative(&cone);
        assert!(rep.is_zero());
    }

    #[test]
    fn free_resolution_of_complex_is_quasi_iso() {
        let c = ctx(1);
        let k = Arc::new(underline_k(&c, 0));
        let kk = ModuleComplex::from_module(k, 0);
        let v = free_resolution_of_complex(&kk, -3);
        v.validate().unwrap();
        let cone = mapping_cone(&v);
        let ex = cone.is_exact(-2..=1);
        assert!(ex.values().all(|&b| b), "cone exact above floor: {ex:?}");
    }

    #[test]
    fn split_free_after_padding() {
        let c = ctx(1);
        let core = Arc::new(builders::truncated(&c, 2, 0));
        let pad = Arc::new(make_free(&c, FreeKind::Lambda, 1, 1));
        let (sum, _, _) = direct_sum(&[pad, core.clone()]);
        let s = split_free(&sum);
        assert_eq!(s.twists, vec![1]);
        assert_eq!(s.core.dims(), core.dims());
    }
}

//! Arithmetic in the exterior algebra Λ = ∧V and its dual.
//!
//! Monomials are index subsets of {0..n} stored as bit masks; the basis of
//! ∧^k is the list of k-subsets in increasing numeric (mask) order, fixed
//! once per context. Elements of Λ use basis e_0..e_n, dual elements use
//! X_0..X_n with the same representation; contraction is the only operation
//! crossing the two sides.

use crate::field::Field;
use crate::matrix::Mat;
use std::collections::BTreeMap;
use std::sync::Arc;

pub type Mask = u32;

/// Combinatorial tables for a fixed n (dim V = n+1): graded monomial bases
/// and index lookups.
#[derive(Debug)]
pub struct ExtTables {
    n: usize,
    basis: Vec<Vec<Mask>>,
    index: Vec<u32>,
}

impl ExtTables {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "need n >= 1");
        assert!(n <= 24, "n out of supported range");
        let dim_v = n + 1;
        let mut basis = vec![Vec::new(); dim_v + 1];
        let mut index = vec![0u32; 1 << dim_v];
        for mask in 0..(1u32 << dim_v) {
            let k = mask.count_ones() as usize;
            index[mask as usize] = basis[k].len() as u32;
            basis[k].push(mask);
        }
        ExtTables { n, basis, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim_v(&self) -> usize {
        self.n + 1
    }

    /// dim ∧^k V = C(n+1, k); zero outside 0 ≤ k ≤ n+1.
    pub fn dim(&self, k: i64) -> usize {
        if k < 0 || k as usize > self.dim_v() {
            0
        } else {
            self.basis[k as usize].len()
        }
    }

    pub fn basis(&self, k: usize) -> &[Mask] {
        &self.basis[k]
    }

    pub fn index_of(&self, mask: Mask) -> usize {
        self.index[mask as usize] as usize
    }

    /// e_0 ∧ … ∧ e_n, the socle monomial of Λ.
    pub fn top(&self) -> Mask {
        (1 << self.dim_v()) - 1
    }
}

/// Shared computation context: the field and the exterior tables. Two
/// contexts agree when n and the characteristic agree.
#[derive(Clone, Debug)]
pub struct Ctx<F: Field> {
    pub field: F,
    tables: Arc<ExtTables>,
}

impl<F: Field> PartialEq for Ctx<F> {
    fn eq(&self, other: &Self) -> bool {
        self.tables.n == other.tables.n && self.field == other.field
    }
}

impl<F: Field> Ctx<F> {
    pub fn new(n: usize, field: F) -> Self {
        Ctx {
            field,
            tables: Arc::new(ExtTables::new(n)),
        }
    }

    pub fn n(&self) -> usize {
        self.tables.n
    }

    pub fn ext(&self) -> &ExtTables {
        &self.tables
    }
}

/// Sign of e_S ∧ e_T as a multiple of e_{S∪T} (S, T disjoint): counts the
/// transpositions needed to merge the two sorted tuples.
pub fn wedge_sign(s: Mask, t: Mask) -> i32 {
    let mut parity = 0u32;
    let mut tt = t;
    while tt != 0 {
        let b = tt.trailing_zeros();
        parity += (s >> (b + 1)).count_ones();
        tt &= tt - 1;
    }
    if parity.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sign of the contraction X_S · e_i (i ∈ S): (−1)^{i−1} for i in the i-th
/// position, i.e. parity of the number of indices of S below i.
fn contract_sign(s: Mask, i: u32) -> i32 {
    if (s & ((1 << i) - 1)).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// An element of Λ or of its dual (the side is by convention of the caller):
/// a canonical sum of monomials with nonzero coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct ExtElem<F: Field> {
    terms: BTreeMap<Mask, F::Elem>,
}

impl<F: Field> ExtElem<F> {
    pub fn zero() -> Self {
        ExtElem {
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(field: &F, c: F::Elem) -> Self {
        Self::monomial(field, 0, c)
    }

    pub fn one(field: &F) -> Self {
        Self::scalar(field, field.one())
    }

    pub fn monomial(field: &F, mask: Mask, c: F::Elem) -> Self {
        let mut terms = BTreeMap::new();
        if !field.is_zero(&c) {
            terms.insert(mask, c);
        }
        ExtElem { terms }
    }

    pub fn basis_vector(field: &F, i: usize) -> Self {
        Self::monomial(field, 1 << i, field.one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mask, &F::Elem)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, field: &F, mask: Mask) -> F::Elem {
        self.terms
            .get(&mask)
            .cloned()
            .unwrap_or_else(|| field.zero())
    }

    fn add_term(&mut self, field: &F, mask: Mask, c: F::Elem) {
        if field.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&mask) {
            Some(old) => {
                let s = field.add(old, &c);
                if field.is_zero(&s) {
                    self.terms.remove(&mask);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(mask, c);
            }
        }
    }

    pub fn add(&self, field: &F, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(field, *m, c.clone());
        }
        out
    }

    pub fn neg(&self, field: &F) -> Self {
        ExtElem {
            terms: self.terms.iter().map(|(m, c)| (*m, field.neg(c))).collect(),
        }
    }

    pub fn sub(&self, field: &F, other: &Self) -> Self {
        self.add(field, &other.neg(field))
    }

    pub fn scale(&self, field: &F, f: &F::Elem) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.terms.iter() {
            out.add_term(field, *m, field.mul(c, f));
        }
        out
    }

    /// Homogeneous degree, if the element is homogeneous (zero counts as any
    /// degree and returns None).
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys();
        let first = it.next()?.count_ones() as usize;
        if it.all(|m| m.count_ones() as usize == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Exterior product, bilinear extension of e_S·e_T = sign(S,T)·e_{S∪T}.
    pub fn wedge(&self, field: &F, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ms, cs) in self.terms.iter() {
            for (mt, ct) in other.terms.iter() {
                if ms & mt != 0 {
                    continue;
                }
                let sign = wedge_sign(*ms, *mt);
                let c = field.mul(cs, ct);
                let c = if sign < 0 { field.neg(&c) } else { c };
                out.add_term(field, ms | mt, c);
            }
        }
        out
    }

    /// Contraction of a dual element by the basis vector e_i:
    /// (f_1∧…∧f_p)·v = Σ (−1)^{i−1} f_i(v) f_1∧…f̂_i…∧f_p.
    pub fn contract_basis(&self, field: &F, i: usize) -> Self {
        let bit = 1u32 << i;
        let mut out = Self::zero();
        for (m, c) in self.terms.iter() {
            if m & bit == 0 {
                continue;
            }
            let c = if contract_sign(*m, i as u32) < 0 {
                field.neg(c)
            } else {
                c.clone()
            };
            out.add_term(field, m & !bit, c);
        }
        out
    }

    /// Right action of an element ζ ∈ Λ on a dual element by iterated
    /// contraction: η·(e_{t1}∧…∧e_{tk}) = (…(η·e_{t1})…)·e_{tk}, t1<…<tk.
    pub fn contract(&self, field: &F, zeta: &Self) -> Self {
        let mut out = Self::zero();
        for (mz, cz) in zeta.terms.iter() {
            let mut cur = self.clone();
            let mut mm = *mz;
            while mm != 0 && !cur.is_zero() {
                let b = mm.trailing_zeros() as usize;
                cur = cur.contract_basis(field, b);
                mm &= mm - 1;
            }
            out = out.add(field, &cur.scale(field, cz));
        }
        out
    }

    /// Rendering like `e0^e1 - 2*e2^e3` (or with `X` for dual elements).
    pub fn render(&self, field: &F, var: char) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let s = field.render(c);
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mon = render_monomial(*m, var);
            if mon == "1" {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&mon);
            } else {
                out.push_str(&mag);
                out.push('*');
                out.push_str(&mon);
            }
        }
        out
    }
}

fn render_monomial(mask: Mask, var: char) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    let mut m = mask;
    while m != 0 {
        let b = m.trailing_zeros();
        parts.push(format!("{var}{b}"));
        m &= m - 1;
    }
    parts.join("^")
}

/// Matrix of the plain contraction `η ↦ η·ζ` from ∧^k V* to ∧^{k−deg ζ} V*
/// in the canonical monomial bases (rows = source basis).
pub fn contraction_matrix<F: Field>(ctx: &Ctx<F>, zeta: &ExtElem<F>, k: usize) -> Mat<F> {
    let deg = zeta.degree().unwrap_or(0);
    let t = ctx.ext();
    let (rows, cols) = (t.dim(k as i64), t.dim(k as i64 - deg as i64));
    let mut out = Mat::zeros(&ctx.field, rows, cols);
    if cols == 0 {
        return out;
    }
    for (r, &mask) in t.basis(k).iter().enumerate() {
        let eta = ExtElem::monomial(&ctx.field, mask, ctx.field.one());
        let img = eta.contract(&ctx.field, zeta);
        for (m, c) in img.terms() {
            out[(r, t.index_of(m))] = c.clone();
        }
    }
    out
}

/// Matrix of right wedge multiplication `ω ↦ ω ∧ e_i` from ∧^k V to ∧^{k+1} V.
pub fn wedge_matrix<F: Field>(ctx: &Ctx<F>, i: usize, k: usize) -> Mat<F> {
    let t = ctx.ext();
    let (rows, cols) = (t.dim(k as i64), t.dim(k as i64 + 1));
    let mut out = Mat::zeros(&ctx.field, rows, cols);
    let bit = 1u32 << i;
    for (r, &mask) in t.basis(k).iter().enumerate() {
        if mask & bit != 0 {
            continue;
        }
        let sign = wedge_sign(mask, bit);
        let c = if sign < 0 {
            ctx.field.neg(&ctx.field.one())
        } else {
            ctx.field.one()
        };
        out[(r, t.index_of(mask | bit))] = c;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, DEFAULT_PRIME};
    use proptest::prelude::*;

    fn ctx(n: usize) -> Ctx<PrimeField> {
        Ctx::new(n, PrimeField::new(DEFAULT_PRIME))
    }

    fn mono(c: &Ctx<PrimeField>, bits: &[usize]) -> ExtElem<PrimeField> {
        let mask = bits.iter().fold(0u32, |m, b| m | (1 << b));
        ExtElem::monomial(&c.field, mask, c.field.one())
    }

    #[test]
    fn wedge_examples() {
        let c = ctx(3);
        let f = &c.field;
        // (e0∧e1)·e2 = e0∧e1∧e2
        assert_eq!(
            mono(&c, &[0, 1]).wedge(f, &mono(&c, &[2])),
            mono(&c, &[0, 1, 2])
        );
        // e0·e0 = 0
        assert!(mono(&c, &[0]).wedge(f, &mono(&c, &[0])).is_zero());
        // e1·e0 = -e0∧e1
        assert_eq!(
            mono(&c, &[1]).wedge(f, &mono(&c, &[0])),
            mono(&c, &[0, 1]).neg(f)
        );
    }

    #[test]
    fn contraction_examples() {
        let c = ctx(3);
        let f = &c.field;
        // (X0∧X1)·e0 = X1
        assert_eq!(mono(&c, &[0, 1]).contract_basis(f, 0), mono(&c, &[1]));
        // X0·e1 = 0
        assert!(mono(&c, &[0]).contract_basis(f, 1).is_zero());
        // (X0∧X1∧X2)·e1 = -X0∧X2
        assert_eq!(
            mono(&c, &[0, 1, 2]).contract_basis(f, 1),
            mono(&c, &[0, 2]).neg(f)
        );
        // pairing X_T · e_T = +1 under iterated contraction
        let top = mono(&c, &[0, 1, 2, 3]);
        let etop = mono(&c, &[0, 1, 2, 3]);
        assert_eq!(top.contract(f, &etop), ExtElem::one(f));
    }

    fn arb_elem(n: usize, deg: usize) -> impl Strategy<Value = ExtElem<PrimeField>> {
        let c = ctx(n);
        let masks: Vec<Mask> = c.ext().basis(deg).to_vec();
        proptest::collection::vec(0i64..7, masks.len()).prop_map(move |coeffs| {
            let f = PrimeField::new(DEFAULT_PRIME);
            let mut e = ExtElem::zero();
            for (m, v) in masks.iter().zip(coeffs) {
                e = e.add(&f, &ExtElem::monomial(&f, *m, f.from_i64(v)));
            }
            e
        })
    }

    proptest! {
        #[test]
        fn graded_anticommutativity(x in arb_elem(3, 1), y in arb_elem(3, 2), z in arb_elem(3, 1)) {
            let f = PrimeField::new(DEFAULT_PRIME);
            // deg 1 * deg 2: xy = yx·(-1)^{1·2} = yx
            prop_assert_eq!(x.wedge(&f, &y), y.wedge(&f, &x));
            // deg 1 * deg 1: xz = -zx
            prop_assert_eq!(x.wedge(&f, &z), z.wedge(&f, &x).neg(&f));
        }

        #[test]
        fn contraction_squares_to_zero(xi in arb_elem(3, 2), i in 0usize..4) {
            let f = PrimeField::new(DEFAULT_PRIME);
            prop_assert!(xi.contract_basis(&f, i).contract_basis(&f, i).is_zero());
        }

        #[test]
        fn contraction_is_right_action(xi in arb_elem(3, 3), i in 0usize..4, j in 0usize..4) {
            // contract(ξ, e_i) then e_j, plus the (j,i) order, equals zero:
            // the anticommutation of the right Λ-module Λ∨.
            let f = PrimeField::new(DEFAULT_PRIME);
            let a = xi.contract_basis(&f, i).contract_basis(&f, j);
            let b = xi.contract_basis(&f, j).contract_basis(&f, i);
            prop_assert!(a.add(&f, &b).is_zero());
        }

        #[test]
        fn contract_by_product_is_iterated(xi in arb_elem(3, 3), zeta in arb_elem(3, 1), eta in arb_elem(3, 1)) {
            let f = PrimeField::new(DEFAULT_PRIME);
            let prod = zeta.wedge(&f, &eta);
            let lhs = xi.contract(&f, &prod);
            let rhs = xi.contract(&f, &zeta).contract(&f, &eta);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn rendering() {
        let c = ctx(3);
        let f = &c.field;
        let e = mono(&c, &[0, 1]).sub(f, &mono(&c, &[2, 3]).scale(f, &f.from_i64(2)));
        assert_eq!(e.render(f, 'e'), "e0^e1 - 2*e2^e3");
        assert_eq!(mono(&c, &[0, 1]).render(f, 'X'), "X0^X1");
        assert_eq!(ExtElem::<PrimeField>::zero().render(f, 'e'), "0");
        assert_eq!(ExtElem::one(f).neg(f).render(f, 'e'), "-1");
    }
}

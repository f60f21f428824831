//! The functor L: graded Λ-modules (and bounded complexes of them) to
//! complexes of direct sums of line bundles O(a) on P^n with linear
//! differentials: L(N)^p = O(p) ⊗ N_p, d = Σ (X_i·−) ⊗ (−·e_i).
//!
//! A complex in the image is stored symbolically: per index a list of
//! (twist, multiplicity) summands and block matrices whose entries are
//! homogeneous forms of degree matching the twist difference (degree 0 or 1
//! for everything produced here). d² = 0 is checked by exact expansion of
//! products of forms into quadratic coefficients.

use crate::complex::ModuleComplex;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::module::{LambdaModule, Morphism};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A form c + Σ c_i X_i of degree ≤ 1 (the only entry degrees arising in
/// images of L; an entry between O(a) and O(b) must be homogeneous of degree
/// b − a, enforced at construction).
#[derive(Clone, PartialEq, Debug)]
pub struct LinForm<F: Field> {
    pub constant: F::Elem,
    pub coeffs: Vec<F::Elem>,
}

impl<F: Field> LinForm<F> {
    pub fn zero(field: &F, n: usize) -> Self {
        LinForm {
            constant: field.zero(),
            coeffs: vec![field.zero(); n + 1],
        }
    }

    pub fn constant(field: &F, n: usize, c: F::Elem) -> Self {
        LinForm {
            constant: c,
            coeffs: vec![field.zero(); n + 1],
        }
    }

    pub fn is_zero(&self, field: &F) -> bool {
        field.is_zero(&self.constant) && self.coeffs.iter().all(|c| field.is_zero(c))
    }

    pub fn is_constant(&self, field: &F) -> bool {
        self.coeffs.iter().all(|c| field.is_zero(c))
    }

    pub fn is_linear(&self, field: &F) -> bool {
        field.is_zero(&self.constant)
    }

    pub fn add(&self, field: &F, o: &Self) -> Self {
        LinForm {
            constant: field.add(&self.constant, &o.constant),
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| field.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, field: &F, c: &F::Elem) -> Self {
        LinForm {
            constant: field.mul(&self.constant, c),
            coeffs: self.coeffs.iter().map(|a| field.mul(a, c)).collect(),
        }
    }

    pub fn render(&self, field: &F) -> String {
        let mut parts = Vec::new();
        if !field.is_zero(&self.constant) {
            parts.push(field.render(&self.constant));
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if field.is_zero(c) {
                continue;
            }
            let r = field.render(c);
            if r == "1" {
                parts.push(format!("X{i}"));
            } else if r == "-1" {
                parts.push(format!("-X{i}"));
            } else {
                parts.push(format!("{r}*X{i}"));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+").replace("+-", "-")
        }
    }
}

/// Product of two forms of degree ≤ 1: constant, linear and quadratic parts
/// (quadratic stored as the full symmetric coefficient matrix c_{ij} of
/// X_iX_j with i ≤ j).
#[derive(Clone, PartialEq, Debug)]
pub struct QuadForm<F: Field> {
    pub constant: F::Elem,
    pub linear: Vec<F::Elem>,
    pub quad: Vec<F::Elem>, // indexed by pairs i ≤ j in lex order
}

fn quad_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // offset of row i in the upper-triangular enumeration
    i * (n + 1) - i * (i + 1) / 2 + (j - i)
}

impl<F: Field> QuadForm<F> {
    pub fn zero(field: &F, n: usize) -> Self {
        QuadForm {
            constant: field.zero(),
            linear: vec![field.zero(); n + 1],
            quad: vec![field.zero(); (n + 1) * (n + 2) / 2],
        }
    }

    pub fn is_zero(&self, field: &F) -> bool {
        field.is_zero(&self.constant)
            && self.linear.iter().all(|c| field.is_zero(c))
            && self.quad.iter().all(|c| field.is_zero(c))
    }

    pub fn add_assign(&mut self, field: &F, o: &QuadForm<F>) {
        self.constant = field.add(&self.constant, &o.constant);
        for (a, b) in self.linear.iter_mut().zip(&o.linear) {
            *a = field.add(a, b);
        }
        for (a, b) in self.quad.iter_mut().zip(&o.quad) {
            *a = field.add(a, b);
        }
    }

    pub fn mul_forms(field: &F, n: usize, a: &LinForm<F>, b: &LinForm<F>) -> Self {
        let mut out = Self::zero(field, n);
        out.constant = field.mul(&a.constant, &b.constant);
        for i in 0..=n {
            out.linear[i] = field.add(
                &field.mul(&a.constant, &b.coeffs[i]),
                &field.mul(&a.coeffs[i], &b.constant),
            );
        }
        for i in 0..=n {
            for j in 0..=n {
                let c = field.mul(&a.coeffs[i], &b.coeffs[j]);
                let idx = quad_index(n, i, j);
                out.quad[idx] = field.add(&out.quad[idx], &c);
            }
        }
        out
    }
}

/// A dense matrix of forms.
#[derive(Clone, PartialEq, Debug)]
pub struct FormMat<F: Field> {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<LinForm<F>>,
}

impl<F: Field> FormMat<F> {
    pub fn zero(field: &F, n: usize, rows: usize, cols: usize) -> Self {
        FormMat {
            rows,
            cols,
            entries: vec![LinForm::zero(field, n); rows * cols],
        }
    }

    pub fn at(&self, r: usize, c: usize) -> &LinForm<F> {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut LinForm<F> {
        &mut self.entries[r * self.cols + c]
    }

    pub fn is_zero(&self, field: &F) -> bool {
        self.entries.iter().all(|e| e.is_zero(field))
    }

    /// Exact product: a matrix of quadratic forms.
    pub fn compose(&self, field: &F, n: usize, other: &FormMat<F>) -> Vec<QuadForm<F>> {
        assert_eq!(self.cols, other.rows);
        let mut out = vec![QuadForm::zero(field, n); self.rows * other.cols];
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero(field) {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if b.is_zero(field) {
                        continue;
                    }
                    let prod = QuadForm::mul_forms(field, n, a, b);
                    out[r * other.cols + c].add_assign(field, &prod);
                }
            }
        }
        out
    }
}

/// A bounded complex of direct sums of line bundles with homogeneous
/// differential entries; the image shape of L.
#[derive(Clone, Debug)]
pub struct SheafComplex<F: Field> {
    pub n: usize,
    pub field: F,
    /// index → summands (twist, multiplicity), in order
    terms: BTreeMap<i64, Vec<(i64, usize)>>,
    /// index p → block matrix L(C)^p → L(C)^{p+1} over the expanded bases
    diffs: BTreeMap<i64, FormMat<F>>,
}

impl<F: Field> SheafComplex<F> {
    pub fn new(
        n: usize,
        field: F,
        terms: BTreeMap<i64, Vec<(i64, usize)>>,
        diffs: BTreeMap<i64, FormMat<F>>,
    ) -> Result<Self> {
        let terms: BTreeMap<i64, Vec<(i64, usize)>> = terms
            .into_iter()
            .map(|(p, s)| (p, s.into_iter().filter(|(_, m)| *m > 0).collect::<Vec<_>>()))
            .filter(|(_, s): &(i64, Vec<(i64, usize)>)| !s.is_empty())
            .collect();
        let c = SheafComplex {
            n,
            field,
            terms,
            diffs: BTreeMap::new(),
        };
        let mut out = c;
        for (p, m) in diffs {
            if out.dim(p) == 0 || out.dim(p + 1) == 0 {
                continue;
            }
            if m.rows != out.dim(p) || m.cols != out.dim(p + 1) {
                return Err(Error::InvalidModule(format!(
                    "sheaf differential shape at index {p}"
                )));
            }
            // homogeneity: entry between O(a) → O(b) has degree b − a ∈ {0, 1}
            let rt = out.expanded_twists(p);
            let ct = out.expanded_twists(p + 1);
            for (r, &a) in rt.iter().enumerate() {
                for (c2, &b) in ct.iter().enumerate() {
                    let e = m.at(r, c2);
                    let ok = match b - a {
                        0 => e.is_constant(&out.field),
                        1 => e.is_linear(&out.field),
                        _ => e.is_zero(&out.field),
                    };
                    if !ok {
                        return Err(Error::InvalidModule(format!(
                            "entry between O({a}) and O({b}) not homogeneous at index {p}"
                        )));
                    }
                }
            }
            out.diffs.insert(p, m);
        }
        Ok(out)
    }

    pub fn summands(&self, p: i64) -> Vec<(i64, usize)> {
        self.terms.get(&p).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> &BTreeMap<i64, Vec<(i64, usize)>> {
        &self.terms
    }

    pub fn dim(&self, p: i64) -> usize {
        self.summands(p).iter().map(|(_, m)| m).sum()
    }

    pub fn expanded_twists(&self, p: i64) -> Vec<i64> {
        let mut out = Vec::new();
        for (a, m) in self.summands(p) {
            out.extend(std::iter::repeat_n(a, m));
        }
        out
    }

    pub fn diff(&self, p: i64) -> FormMat<F> {
        self.diffs
            .get(&p)
            .cloned()
            .unwrap_or_else(|| FormMat::zero(&self.field, self.n, self.dim(p), self.dim(p + 1)))
    }

    pub fn min_index(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_index(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// d² = 0 by exact expansion into quadratic forms.
    pub fn validate(&self) -> Result<()> {
        for (&p, d) in &self.diffs {
            if let Some(next) = self.diffs.get(&(p + 1)) {
                let prod = d.compose(&self.field, self.n, next);
                if !prod.iter().all(|q| q.is_zero(&self.field)) {
                    return Err(Error::InvalidModule(format!(
                        "sheaf complex d² ≠ 0 at index {p}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Twist the whole complex by O(d).
    pub fn twist(&self, d: i64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&p, s)| (p, s.iter().map(|&(a, m)| (a + d, m)).collect()))
            .collect();
        SheafComplex {
            n: self.n,
            field: self.field.clone(),
            terms,
            diffs: self.diffs.clone(),
        }
    }

    /// Hom(−, O): term (p, a, m) ↦ (−p, −a, m); the differential from index
    /// −p−1 to −p is (−1)^{p+1} times the transpose of d^p. With this sign
    /// sheaf_dual(L(N)) = L(dual(N)) on the nose.
    pub fn dual(&self) -> Self {
        let f = &self.field;
        let terms: BTreeMap<i64, Vec<(i64, usize)>> = self
            .terms
            .iter()
            .map(|(&p, s)| (-p, s.iter().map(|&(a, m)| (-a, m)).collect()))
            .collect();
        let mut diffs = BTreeMap::new();
        for (&p, d) in &self.diffs {
            // the dual differential sits at index q = −p−1 and carries the
            // sign (−1)^{q+1} = (−1)^p
            let mut m = FormMat::zero(f, self.n, d.cols, d.rows);
            for r in 0..d.rows {
                for c in 0..d.cols {
                    let mut e = d.at(r, c).clone();
                    if p.rem_euclid(2) == 1 {
                        e = e.scale(f, &f.neg(&f.one()));
                    }
                    *m.at_mut(c, r) = e;
                }
            }
            diffs.insert(-p - 1, m);
        }
        SheafComplex {
            n: self.n,
            field: self.field.clone(),
            terms,
            diffs,
        }
    }

    /// One line per index: `p: O(a)^m ⊕ …`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (&p, s) in &self.terms {
            let parts: Vec<String> = s
                .iter()
                .map(|&(a, m)| {
                    if m == 1 {
                        format!("O({a})")
                    } else {
                        format!("O({a})^{m}")
                    }
                })
                .collect();
            out.push_str(&format!("{p}: {}\n", parts.join(" ⊕ ")));
        }
        out
    }

    pub fn render_differentials(&self) -> String {
        let mut out = String::new();
        for (&p, d) in &self.diffs {
            out.push_str(&format!("d^{p} ({} × {}):\n", d.rows, d.cols));
            for r in 0..d.rows {
                let row: Vec<String> = (0..d.cols)
                    .map(|c| d.at(r, c).render(&self.field))
                    .collect();
                out.push_str(&format!("  [{}]\n", row.join(", ")));
            }
        }
        out
    }
}

/// L on a module: term at index p is O(p)^{dim N_p}, differential block
/// Σ_i X_i ⊗ `act_i[p]`.
pub fn l_module<F: Field>(n: &LambdaModule<F>) -> SheafComplex<F> {
    let f = n.field().clone();
    let nn = n.ctx().n();
    let mut terms = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for (&p, &dim) in n.dims() {
        terms.insert(p, vec![(p, dim)]);
    }
    for (&p, &dim) in n.dims() {
        let next = n.dim(p + 1);
        if next == 0 {
            continue;
        }
        let mut m = FormMat::zero(&f, nn, dim, next);
        for i in 0..=nn {
            let a = n.act(p, i);
            for r in 0..dim {
                for c in 0..next {
                    let v = &a[(r, c)];
                    if !f.is_zero(v) {
                        m.at_mut(r, c).coeffs[i] = f.add(&m.at(r, c).coeffs[i], v);
                    }
                }
            }
        }
        diffs.insert(p, m);
    }
    let c = SheafComplex::new(nn, f, terms, diffs).expect("L(N) well-formed");
    debug_assert!(c.validate().is_ok());
    c
}

/// L on a bounded complex: the total complex of the double complex
/// X^{p,•} = L(K^p), with the second (linear) differential multiplied by
/// (−1)^p. Summands at total index t are (O(q) ⊗ K^p_q) for p + q = t,
/// ordered by p ascending.
pub fn l_complex<F: Field>(k: &ModuleComplex<F>) -> SheafComplex<F> {
    let ctx = k.ctx().clone();
    let f = ctx.field.clone();
    let nn = ctx.n();
    if k.is_zero_complex() {
        return SheafComplex::new(nn, f, BTreeMap::new(), BTreeMap::new()).unwrap();
    }
    // summand layout per total index: (p, q = t − p, dim), p ascending
    let layout = |t: i64| -> Vec<(i64, i64, usize)> {
        let mut v = Vec::new();
        for (&p, term) in k.terms() {
            let q = t - p;
            let d = term.dim(q);
            if d > 0 {
                v.push((p, q, d));
            }
        }
        v
    };
    let lo = k.min_index().unwrap()
        + k.terms()
            .values()
            .filter_map(|t| t.min_degree())
            .min()
            .unwrap();
    let hi = k.max_index().unwrap()
        + k.terms()
            .values()
            .filter_map(|t| t.max_degree())
            .max()
            .unwrap();
    let mut terms = BTreeMap::new();
    for t in lo..=hi {
        let s: Vec<(i64, usize)> = layout(t).into_iter().map(|(_, q, d)| (q, d)).collect();
        if !s.is_empty() {
            terms.insert(t, s);
        }
    }
    let mut diffs = BTreeMap::new();
    for t in lo..hi {
        let src = layout(t);
        let tgt = layout(t + 1);
        if src.is_empty() || tgt.is_empty() {
            continue;
        }
        let rows: usize = src.iter().map(|(_, _, d)| d).sum();
        let cols: usize = tgt.iter().map(|(_, _, d)| d).sum();
        let mut m = FormMat::zero(&f, nn, rows, cols);
        let mut ro = 0usize;
        for &(p, q, d) in &src {
            let mut co = 0usize;
            for &(p2, q2, d2) in &tgt {
                if p2 == p + 1 && q2 == q {
                    // horizontal: L(d_K^p) at degree q, constant entries
                    let dk = k.diff(p).mat(q);
                    for r in 0..d {
                        for c in 0..d2 {
                            let v = &dk[(r, c)];
                            if !f.is_zero(v) {
                                m.at_mut(ro + r, co + c).constant =
                                    f.add(&m.at(ro + r, co + c).constant, v);
                            }
                        }
                    }
                } else if p2 == p && q2 == q + 1 {
                    // vertical: (−1)^p Σ X_i ⊗ act_i[q] of K^p
                    let term = k.term(p);
                    for i in 0..=nn {
                        let a = term.act(q, i);
                        for r in 0..d {
                            for c in 0..d2 {
                                let mut v = a[(r, c)].clone();
                                if f.is_zero(&v) {
                                    continue;
                                }
                                if p.rem_euclid(2) == 1 {
                                    v = f.neg(&v);
                                }
                                m.at_mut(ro + r, co + c).coeffs[i] =
                                    f.add(&m.at(ro + r, co + c).coeffs[i], &v);
                            }
                        }
                    }
                }
                co += d2;
            }
            ro += d;
        }
        diffs.insert(t, m);
    }
    let c = SheafComplex::new(nn, f, terms, diffs).expect("L(K) well-formed");
    debug_assert!(c.validate().is_ok());
    c
}

/// A degreewise map of sheaf complexes (blocks of forms), with a given
/// index offset: offset 0 for chain maps, −1 for homotopies.
pub struct SheafMap<F: Field> {
    pub source: SheafComplex<F>,
    pub target: SheafComplex<F>,
    pub offset: i64,
    pub maps: BTreeMap<i64, FormMat<F>>,
}

impl<F: Field> SheafMap<F> {
    /// Block at index p: source index p → target index p + offset.
    pub fn map(&self, p: i64) -> FormMat<F> {
        self.maps.get(&p).cloned().unwrap_or_else(|| {
            FormMat::zero(
                &self.source.field,
                self.source.n,
                self.source.dim(p),
                self.target.dim(p + self.offset),
            )
        })
    }

    /// d_tgt∘f = f∘d_src, expanded exactly (offset must be 0).
    pub fn is_chain_map(&self) -> bool {
        assert_eq!(self.offset, 0);
        let f = &self.source.field;
        let n = self.source.n;
        let lo = self
            .source
            .min_index()
            .unwrap_or(0)
            .min(self.target.min_index().unwrap_or(0))
            - 1;
        let hi = self
            .source
            .max_index()
            .unwrap_or(0)
            .max(self.target.max_index().unwrap_or(0));
        for p in lo..=hi {
            let a = self.map(p).compose(f, n, &self.target.diff(p));
            let b = self.source.diff(p).compose(f, n, &self.map(p + 1));
            if a != b {
                return false;
            }
        }
        true
    }
}

/// L on a morphism of modules: the chain map with constant blocks u_p.
pub fn l_chain_map<F: Field>(u: &Morphism<F>) -> SheafMap<F> {
    let f = u.source().field().clone();
    let nn = u.source().ctx().n();
    let mut maps = BTreeMap::new();
    for (&p, m) in u.mats() {
        let mut fm = FormMat::zero(&f, nn, m.rows(), m.cols());
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                fm.at_mut(r, c).constant = m[(r, c)].clone();
            }
        }
        maps.insert(p, fm);
    }
    SheafMap {
        source: l_module(u.source()),
        target: l_module(u.target()),
        offset: 0,
        maps,
    }
}

/// L of a collection of degree −1 maps h^p : K^p → K'^{p−1}: the total-level
/// homotopy with blocks (p, q) → (p−1, q) and no extra signs. If
/// u = d∘h + h∘d then L(u) = D'∘L(h) + L(h)∘D exactly.
pub fn l_homotopy<F: Field>(
    k: &ModuleComplex<F>,
    kp: &ModuleComplex<F>,
    h: &BTreeMap<i64, Morphism<F>>,
) -> SheafMap<F> {
    let lsrc = l_complex(k);
    let ltgt = l_complex(kp);
    let f = lsrc.field.clone();
    let n = lsrc.n;
    let layout = |cx: &ModuleComplex<F>, t: i64| -> Vec<(i64, i64, usize)> {
        let mut v = Vec::new();
        for (&p, term) in cx.terms() {
            let d = term.dim(t - p);
            if d > 0 {
                v.push((p, t - p, d));
            }
        }
        v
    };
    let mut maps = BTreeMap::new();
    let (Some(lo), Some(hi)) = (lsrc.min_index(), lsrc.max_index()) else {
        return SheafMap {
            source: lsrc,
            target: ltgt,
            offset: -1,
            maps,
        };
    };
    for t in lo..=hi {
        let src = layout(k, t);
        let tgt = layout(kp, t - 1);
        if src.is_empty() || tgt.is_empty() {
            continue;
        }
        let rows: usize = src.iter().map(|(_, _, d)| d).sum();
        let cols: usize = tgt.iter().map(|(_, _, d)| d).sum();
        let mut m = FormMat::zero(&f, n, rows, cols);
        let mut ro = 0usize;
        for &(p, q, d) in &src {
            let mut co = 0usize;
            for &(p2, q2, d2) in &tgt {
                if p2 == p - 1 && q2 == q {
                    if let Some(hp) = h.get(&p) {
                        let hm = hp.mat(q);
                        for r in 0..d {
                            for c in 0..d2 {
                                m.at_mut(ro + r, co + c).constant = hm[(r, c)].clone();
                            }
                        }
                    }
                }
                co += d2;
            }
            ro += d;
        }
        maps.insert(t, m);
    }
    SheafMap {
        source: lsrc,
        target: ltgt,
        offset: -1,
        maps,
    }
}

/// χ(O(m)) on P^n: the generalized binomial (m+n)(m+n−1)…(m+1)/n!, an exact
/// integer for every m (zero for −n ≤ m ≤ −1).
pub fn chi_o(n: usize, m: i64) -> i64 {
    let mut num: i128 = 1;
    for k in 1..=n as i64 {
        num *= (m + k) as i128;
    }
    let mut den: i128 = 1;
    for k in 1..=n as i128 {
        den *= k;
    }
    (num / den) as i64
}

/// χ(C ⊗ O(d)) = Σ_p (−1)^p Σ m·χ(O(a+d)).
pub fn euler_char<F: Field>(c: &SheafComplex<F>, d: i64) -> i64 {
    let mut total: i64 = 0;
    for (&p, s) in c.terms() {
        let sign = if p.rem_euclid(2) == 1 { -1 } else { 1 };
        for &(a, m) in s {
            total += sign * (m as i64) * chi_o(c.n, a + d);
        }
    }
    total
}

/// Arc-based convenience for the common seed shape.
pub fn l_module_arc<F: Field>(n: &Arc<LambdaModule<F>>) -> SheafComplex<F> {
    l_module(n)
}

//! Independent ground truth: closed-form line-bundle cohomology, Bott
//! dimensions for twisted Ω^i, and a brute-force Čech hypercohomology
//! computation on P¹ (two charts, finite Laurent arithmetic throughout, no
//! truncation).
//!
//! Nothing here touches the Tate machinery; these values are only compared
//! against it in tests and verification suites.

use crate::bgg::{chi_o, LinForm, SheafComplex};
use crate::field::Field;
use crate::matrix::{self, Mat};
use std::collections::BTreeMap;

/// C(m, k) for integer m (zero when m < 0 or m < k).
pub fn binom(m: i64, k: i64) -> u64 {
    if k < 0 || m < 0 || m < k {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for t in 0..k {
        num *= (m - t) as u128;
        den *= (t + 1) as u128;
    }
    (num / den) as u64
}

/// (h⁰, …, h^n) of O(a) on P^n.
pub fn serre_dims(n: usize, a: i64) -> Vec<u64> {
    let mut out = vec![0u64; n + 1];
    if a >= 0 {
        out[0] = binom(a + n as i64, n as i64);
    }
    if a < -(n as i64) {
        out[n] = binom(-a - 1, n as i64);
    }
    out
}

/// (h⁰, …, h^n) of Ω^i(j) on P^n: nonzero only in the three Bott cases.
pub fn bott_dims(n: usize, i: usize, j: i64) -> Vec<u64> {
    assert!(i <= n, "bott_dims: 0 ≤ i ≤ n");
    let mut out = vec![0u64; n + 1];
    let (ni, ii) = (n as i64, i as i64);
    if j > ii {
        out[0] = binom(j - 1, ii) * binom(j + ni - ii, j);
    } else if j == 0 {
        out[i] = 1;
    } else if j < ii - ni {
        out[n] = binom(-j - 1, ni - ii) * binom(ii - j, -j);
    }
    out
}

/// χ(Ω^i(j)) via the truncated Koszul resolution
/// 0 → Ω^i → ∧^iV*⊗O(−i) → … → O → 0 (an alternating binomial sum, no case
/// split).
pub fn chi_omega(n: usize, i: usize, j: i64) -> i64 {
    let mut total = 0i64;
    for t in 0..=i as i64 {
        let sign = if (i as i64 - t).rem_euclid(2) == 1 {
            -1
        } else {
            1
        };
        total += sign * binom(n as i64 + 1, t) as i64 * chi_o(n, j - t);
    }
    total
}

/// A finite sum of Laurent monomials x₀^u x₁^v; canonical (sorted exponent
/// pairs, no zero coefficients).
#[derive(Clone, PartialEq, Debug)]
pub struct LaurentVector<F: Field> {
    terms: BTreeMap<(i64, i64), F::Elem>,
}

impl<F: Field> LaurentVector<F> {
    pub fn zero() -> Self {
        LaurentVector {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(field: &F, u: i64, v: i64, c: F::Elem) -> Self {
        let mut t = BTreeMap::new();
        if !field.is_zero(&c) {
            t.insert((u, v), c);
        }
        LaurentVector { terms: t }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), &F::Elem)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn add_term(&mut self, field: &F, u: i64, v: i64, c: F::Elem) {
        if field.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&(u, v)) {
            Some(old) => {
                let s = field.add(old, &c);
                if field.is_zero(&s) {
                    self.terms.remove(&(u, v));
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert((u, v), c);
            }
        }
    }

    pub fn add(&self, field: &F, o: &Self) -> Self {
        let mut out = self.clone();
        for ((u, v), c) in o.terms() {
            out.add_term(field, u, v, c.clone());
        }
        out
    }

    pub fn scale(&self, field: &F, f: &F::Elem) -> Self {
        let mut out = Self::zero();
        for ((u, v), c) in self.terms() {
            out.add_term(field, u, v, field.mul(c, f));
        }
        out
    }

    pub fn neg(&self, field: &F) -> Self {
        LaurentVector {
            terms: self.terms.iter().map(|(&k, c)| (k, field.neg(c))).collect(),
        }
    }

    /// Multiply by a form of degree ≤ 1: c₀ + c₁X₀ + c₂X₁ acts by
    /// c₀ + c₁·x₀·(shift) + c₂·x₁·(shift).
    pub fn apply_form(&self, field: &F, form: &LinForm<F>) -> Self {
        let mut out = Self::zero();
        for ((u, v), c) in self.terms() {
            if !field.is_zero(&form.constant) {
                out.add_term(field, u, v, field.mul(c, &form.constant));
            }
            if !field.is_zero(&form.coeffs[0]) {
                out.add_term(field, u + 1, v, field.mul(c, &form.coeffs[0]));
            }
            if !field.is_zero(&form.coeffs[1]) {
                out.add_term(field, u, v + 1, field.mul(c, &form.coeffs[1]));
            }
        }
        out
    }

    pub fn mul_var(&self, field: &F, var: usize) -> Self {
        let mut out = Self::zero();
        for ((u, v), c) in self.terms() {
            if var == 0 {
                out.add_term(field, u + 1, v, c.clone());
            } else {
                out.add_term(field, u, v + 1, c.clone());
            }
        }
        out
    }

    /// Split into the part regular on U₀ (v ≥ 0), the part regular on U₁
    /// (u ≥ 0, v ≤ −1), and the interior part (u, v ≤ −1). Reassembly is
    /// exact: self = reg0 + reg1 + interior.
    pub fn split(&self, field: &F) -> (Self, Self, Self) {
        let mut reg0 = Self::zero();
        let mut reg1 = Self::zero();
        let mut interior = Self::zero();
        for ((u, v), c) in self.terms() {
            if v >= 0 {
                reg0.add_term(field, u, v, c.clone());
            } else if u >= 0 {
                reg1.add_term(field, u, v, c.clone());
            } else {
                interior.add_term(field, u, v, c.clone());
            }
        }
        (reg0, reg1, interior)
    }

    pub fn is_global_section(&self) -> bool {
        self.terms.keys().all(|&(u, v)| u >= 0 && v >= 0)
    }

    pub fn is_regular_u0(&self) -> bool {
        self.terms.keys().all(|&(_, v)| v >= 0)
    }

    pub fn is_regular_u1(&self) -> bool {
        self.terms.keys().all(|&(u, _)| u >= 0)
    }
}

/// H⁰(O(a)) basis monomials: u, v ≥ 0, u + v = a.
fn h0_basis(a: i64) -> Vec<(i64, i64)> {
    (0..=a).map(|u| (u, a - u)).collect()
}

/// H¹(O(a)) basis monomials: u, v ≤ −1, u + v = a.
fn h1_basis(a: i64) -> Vec<(i64, i64)> {
    ((a + 1)..=-1).map(|u| (u, a - u)).collect()
}

fn region_basis(a: i64, q: usize) -> Vec<(i64, i64)> {
    if q == 0 {
        h0_basis(a)
    } else {
        h1_basis(a)
    }
}

/// The Čech page machinery for a complex of line bundles on P¹.
pub struct P1Pages<F: Field> {
    field: F,
    complex: SheafComplex<F>,
    lo: i64,
    hi: i64,
    /// (p, q) → basis: expanded summand index and monomial
    #[allow(clippy::type_complexity)]
    e1_basis: BTreeMap<(i64, usize), Vec<(usize, (i64, i64))>>,
    /// (p, q) → d1 matrix E1^{p,q} → E1^{p+1,q}
    d1: BTreeMap<(i64, usize), Mat<F>>,
    /// (p, q) → rows of E2-representatives in E1 coordinates (rref-canonical)
    e2: BTreeMap<(i64, usize), Mat<F>>,
    /// boundaries at (p, q): rref basis of im(d1^{p−1,q})
    bounds: BTreeMap<(i64, usize), Mat<F>>,
    /// p → d2 matrix E2^{p,1} → E2^{p+2,0}
    d2: BTreeMap<i64, Mat<F>>,
}

impl<F: Field> P1Pages<F> {
    pub fn new(c: &SheafComplex<F>) -> Self {
        assert_eq!(c.n, 1, "P¹ oracle needs n = 1");
        let field = c.field.clone();
        let (lo, hi) = match (c.min_index(), c.max_index()) {
            (Some(a), Some(b)) => (a - 1, b + 2),
            _ => (0, 0),
        };
        let mut pages = P1Pages {
            field,
            complex: c.clone(),
            lo,
            hi,
            e1_basis: BTreeMap::new(),
            d1: BTreeMap::new(),
            e2: BTreeMap::new(),
            bounds: BTreeMap::new(),
            d2: BTreeMap::new(),
        };
        for p in lo..=hi {
            for q in 0..2usize {
                let mut basis = Vec::new();
                for (r, &a) in pages.complex.expanded_twists(p).iter().enumerate() {
                    for mono in region_basis(a, q) {
                        basis.push((r, mono));
                    }
                }
                pages.e1_basis.insert((p, q), basis);
            }
        }
        for p in lo..hi {
            for q in 0..2usize {
                pages.d1.insert((p, q), pages.make_d1(p, q));
            }
        }
        for p in lo..=hi {
            for q in 0..2usize {
                let cocycles = match pages.d1.get(&(p, q)) {
                    Some(d) => matrix::left_kernel(&pages.field, d),
                    None => Mat::identity(&pages.field, pages.e1_basis[&(p, q)].len()),
                };
                let bound = match pages.d1.get(&(p - 1, q)) {
                    Some(d) => matrix::row_space(&pages.field, d),
                    None => Mat::zeros(&pages.field, 0, pages.e1_basis[&(p, q)].len()),
                };
                let reps = subquotient(&pages.field, &cocycles, &bound);
                pages.bounds.insert((p, q), bound);
                pages.e2.insert((p, q), reps);
            }
        }
        for p in lo..=(hi - 2) {
            pages.d2.insert(p, pages.make_d2(p));
        }
        pages
    }

    fn twists(&self, p: i64) -> Vec<i64> {
        self.complex.expanded_twists(p)
    }

    /// Vector in E1 coordinates → Laurent components per expanded summand.
    fn to_laurent(&self, p: i64, q: usize, v: &[F::Elem]) -> Vec<LaurentVector<F>> {
        let mut comps = vec![LaurentVector::zero(); self.twists(p).len()];
        for ((r, (u, w)), c) in self.e1_basis[&(p, q)].iter().zip(v) {
            comps[*r].add_term(&self.field, *u, *w, c.clone());
        }
        comps
    }

    /// Laurent components → E1 coordinates; monomials outside the region are
    /// dropped ("a class dies when an exponent leaves the region").
    fn project(&self, p: i64, q: usize, comps: &[LaurentVector<F>]) -> Vec<F::Elem> {
        let basis = &self.e1_basis[&(p, q)];
        let index: BTreeMap<(usize, (i64, i64)), usize> =
            basis.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let mut out = vec![self.field.zero(); basis.len()];
        for (r, lv) in comps.iter().enumerate() {
            for ((u, v), c) in lv.terms() {
                if let Some(&i) = index.get(&(r, (u, v))) {
                    out[i] = self.field.add(&out[i], c);
                }
            }
        }
        out
    }

    /// Apply the complex differential to Laurent components (full Laurent
    /// arithmetic on U₀₁, no projection).
    fn apply_diff(&self, p: i64, comps: &[LaurentVector<F>]) -> Vec<LaurentVector<F>> {
        let d = self.complex.diff(p);
        let cols = self.twists(p + 1).len();
        let mut out = vec![LaurentVector::zero(); cols];
        for (r, lv) in comps.iter().enumerate() {
            if lv.is_zero() {
                continue;
            }
            for (c, slot) in out.iter_mut().enumerate() {
                let form = d.at(r, c);
                if form.is_zero(&self.field) {
                    continue;
                }
                *slot = slot.add(&self.field, &lv.apply_form(&self.field, form));
            }
        }
        out
    }

    fn make_d1(&self, p: i64, q: usize) -> Mat<F> {
        let rows = self.e1_basis[&(p, q)].len();
        let cols = self.e1_basis[&(p + 1, q)].len();
        let mut m = Mat::zeros(&self.field, rows, cols);
        for (i, (r, (u, v))) in self.e1_basis[&(p, q)].iter().enumerate() {
            let mut comps = vec![LaurentVector::zero(); self.twists(p).len()];
            comps[*r] = LaurentVector::monomial(&self.field, *u, *v, self.field.one());
            let img = self.apply_diff(p, &comps);
            let coords = self.project(p + 1, q, &img);
            for (j, c) in coords.into_iter().enumerate() {
                m[(i, j)] = c;
            }
        }
        m
    }

    /// The Čech zig-zag: lift an E2^{p,1} representative, push through the
    /// differential, split off chart-regular parts, push again, glue to a
    /// global section class in E2^{p+2,0}.
    fn zigzag(&self, p: i64, rep: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let omega = self.to_laurent(p, 1, rep);
        let phi = self.apply_diff(p, &omega);
        // an E1-cocycle has no interior image
        let mut tau0 = Vec::new();
        let mut tau1 = Vec::new();
        for lv in &phi {
            let (reg0, reg1, interior) = lv.split(f);
            assert!(interior.is_zero(), "E2 representative has interior image");
            tau0.push(reg0.neg(f));
            tau1.push(reg1);
        }
        // σ := ψ(τ0) = ψ(τ1): glue and read off the section class
        let psi0 = self.apply_diff(p + 1, &tau0);
        let psi1 = self.apply_diff(p + 1, &tau1);
        for (a, b) in psi0.iter().zip(&psi1) {
            assert_eq!(a, b, "Čech gluing: ψτ₀ = ψτ₁");
        }
        for lv in &psi0 {
            assert!(lv.is_global_section(), "d2 image is a global section");
        }
        self.project(p + 2, 0, &psi0)
    }

    fn make_d2(&self, p: i64) -> Mat<F> {
        let f = &self.field;
        let reps = &self.e2[&(p, 1)];
        let tgt_reps = &self.e2[&(p + 2, 0)];
        let tgt_bound = &self.bounds[&(p + 2, 0)];
        let mut m = Mat::zeros(f, reps.rows(), tgt_reps.rows());
        for i in 0..reps.rows() {
            let sigma = self.zigzag(p, reps.row(i));
            let coords =
                class_coords(f, tgt_reps, tgt_bound, &sigma).expect("d2 image lands in E2");
            for (j, c) in coords.into_iter().enumerate() {
                m[(i, j)] = c;
            }
        }
        m
    }

    /// E3 = E∞ dimensions: (p, 0): E2 modulo im d2; (p, 1): ker d2.
    pub fn e3_dims(&self, p: i64, q: usize) -> usize {
        if !(self.lo..=self.hi).contains(&p) {
            return 0;
        }
        let e2 = self.e2[&(p, q)].rows();
        if q == 1 {
            let d2 = self.d2.get(&p);
            match d2 {
                Some(m) => e2 - matrix::rank(&self.field, m),
                None => e2,
            }
        } else {
            let img = self
                .d2
                .get(&(p - 2))
                .map(|m| matrix::rank(&self.field, m))
                .unwrap_or(0);
            e2 - img
        }
    }

    /// Total hypercohomology dimension at index m.
    pub fn hyper_dim(&self, m: i64) -> usize {
        self.e3_dims(m, 0) + self.e3_dims(m - 1, 1)
    }
}

/// Reduce a vector modulo a rref row space.
fn reduce_mod<F: Field>(field: &F, basis: &Mat<F>, v: &[F::Elem]) -> Vec<F::Elem> {
    let mut v = v.to_vec();
    for i in 0..basis.rows() {
        let lead = (0..basis.cols())
            .find(|&j| !field.is_zero(&basis[(i, j)]))
            .unwrap();
        let c = v[lead].clone();
        if !field.is_zero(&c) {
            let nc = field.neg(&field.div(&c, &basis[(i, lead)]));
            field.row_axpy(&mut v, basis.row(i), &nc);
        }
    }
    v
}

/// Canonical representatives of cocycles modulo boundaries (rows in rref).
fn subquotient<F: Field>(field: &F, cocycles: &Mat<F>, boundaries: &Mat<F>) -> Mat<F> {
    let mut reduced = Vec::new();
    for i in 0..cocycles.rows() {
        let v = reduce_mod(field, boundaries, cocycles.row(i));
        if v.iter().any(|e| !field.is_zero(e)) {
            reduced.push(v);
        }
    }
    if reduced.is_empty() {
        return Mat::zeros(field, 0, cocycles.cols());
    }
    let m = Mat::from_rows(field, cocycles.cols(), reduced);
    matrix::row_space(field, &m)
}

/// Coordinates of the class of `v` against subquotient representatives.
fn class_coords<F: Field>(
    field: &F,
    reps: &Mat<F>,
    boundaries: &Mat<F>,
    v: &[F::Elem],
) -> Option<Vec<F::Elem>> {
    let reduced = reduce_mod(field, boundaries, v);
    let as_mat = Mat::from_rows(field, reps.cols(), vec![reduced]);
    if reps.rows() == 0 {
        return as_mat.is_zero(field).then(Vec::new);
    }
    let pivots: Vec<usize> = (0..reps.rows())
        .map(|i| {
            (0..reps.cols())
                .position(|j| !field.is_zero(&reps[(i, j)]))
                .unwrap()
        })
        .collect();
    matrix::coords_in_rref(field, reps, &pivots, &as_mat).map(|m| m.row(0).to_vec())
}

/// Hypercohomology dimensions of a complex of line bundles on P¹, per
/// cohomological index, via the E₃ = E∞ page.
pub fn p1_hyper<F: Field>(c: &SheafComplex<F>) -> BTreeMap<i64, u64> {
    let pages = P1Pages::new(c);
    let mut out = BTreeMap::new();
    if c.terms().is_empty() {
        return out;
    }
    for m in pages.lo..=pages.hi {
        let d = pages.hyper_dim(m);
        if d > 0 {
            out.insert(m, d as u64);
        }
    }
    out
}

/// An honest cocycle of the total Čech complex Tot^m = C⁰(X^m) ⊕ C¹(X^{m−1}):
/// per-summand section pairs (f₀ on U₀, f₁ on U₁) and a U₀₁-cochain ω, with
/// d(f, ω) = (φf, δf − φω) = 0.
#[derive(Clone)]
pub struct TotCocycle<F: Field> {
    pub m: i64,
    pub f0: Vec<LaurentVector<F>>,
    pub f1: Vec<LaurentVector<F>>,
    pub omega: Vec<LaurentVector<F>>,
}

/// Honest hypercohomology of a P¹ complex with representative cocycles and
/// multiplication by the coordinates, used to cross-check the engine's
/// multiplication maps. Basis at index m: first the section classes
/// (E∞^{m,0}), then the H¹-classes (E∞^{m−1,1}).
pub struct P1Cohomology<F: Field> {
    pages: P1Pages<F>,
}

impl<F: Field> P1Cohomology<F> {
    pub fn new(c: &SheafComplex<F>) -> Self {
        P1Cohomology {
            pages: P1Pages::new(c),
        }
    }

    pub fn dim(&self, m: i64) -> usize {
        self.pages.hyper_dim(m)
    }

    /// Honest cocycle representatives of a basis of H^m.
    pub fn basis(&self, m: i64) -> Vec<TotCocycle<F>> {
        let f = &self.pages.field;
        let mut out = Vec::new();
        // section classes: a basis of E2^{m,0} modulo im d2
        let reps = &self.pages.e2[&(m, 0)];
        let img = self
            .pages
            .d2
            .get(&(m - 2))
            .map(|d| {
                let mut rows = Vec::new();
                for i in 0..d.rows() {
                    rows.push(d.row(i).apply2(f, reps));
                }
                let mat = Mat::from_rows(f, reps.cols(), rows);
                matrix::row_space(f, &mat)
            })
            .unwrap_or_else(|| Mat::zeros(f, 0, reps.cols()));
        for i in 0..reps.rows() {
            let red = reduce_mod(f, &img, reps.row(i));
            if red.iter().all(|e| f.is_zero(e)) {
                continue;
            }
            let secs = self.pages.to_laurent(m, 0, &red);
            out.push(TotCocycle {
                m,
                f0: secs.clone(),
                f1: secs,
                omega: vec![LaurentVector::zero(); self.pages.twists(m - 1).len()],
            });
        }
        // H¹ classes: ker d2 ⊆ E2^{m−1,1}, completed by the zig-zag
        let reps1 = &self.pages.e2[&(m - 1, 1)];
        let kerd2: Mat<F> = match self.pages.d2.get(&(m - 1)) {
            Some(d) => {
                let k = matrix::left_kernel(f, d);
                let mut rows = Vec::new();
                for i in 0..k.rows() {
                    rows.push(k.row(i).apply2(f, reps1));
                }
                if rows.is_empty() {
                    Mat::zeros(f, 0, reps1.cols())
                } else {
                    Mat::from_rows(f, reps1.cols(), rows)
                }
            }
            None => reps1.clone(),
        };
        for i in 0..kerd2.rows() {
            out.push(self.complete_h1_rep(m, kerd2.row(i)));
        }
        out
    }

    /// Complete an interior representative ω of a surviving H¹-class to an
    /// honest total cocycle (τ, ω) with δτ = φω and φτ = 0.
    fn complete_h1_rep(&self, m: i64, rep: &[F::Elem]) -> TotCocycle<F> {
        let f = &self.pages.field;
        let p = m - 1;
        let omega = self.pages.to_laurent(p, 1, rep);
        let phi = self.pages.apply_diff(p, &omega);
        let mut tau0 = Vec::new();
        let mut tau1 = Vec::new();
        for lv in &phi {
            let (reg0, reg1, interior) = lv.split(f);
            assert!(interior.is_zero());
            tau0.push(reg0.neg(f));
            tau1.push(reg1);
        }
        // σ := ψτ; it represents d2[ω] = 0, so σ = h·d1 for sections h;
        // correcting τ by the diagonal section h makes ψτ honestly zero
        let sigma = self.pages.apply_diff(p + 1, &tau0);
        let sigma_coords = self.pages.project(p + 2, 0, &sigma);
        if sigma_coords.iter().any(|e| !f.is_zero(e)) {
            let d1 = &self.pages.d1[&(p + 1, 0)];
            let srow = Mat::from_rows(f, d1.cols(), vec![sigma_coords]);
            let h = matrix::solve_left(f, d1, &srow).expect("vanishing d2 class is a boundary");
            let hsec = self.pages.to_laurent(p + 1, 0, h.row(0));
            for (t, hs) in tau0.iter_mut().zip(&hsec) {
                *t = t.add(f, &hs.neg(f));
            }
            for (t, hs) in tau1.iter_mut().zip(&hsec) {
                *t = t.add(f, &hs.neg(f));
            }
        }
        #[cfg(debug_assertions)]
        {
            for lv in self.pages.apply_diff(p + 1, &tau0) {
                assert!(lv.is_zero(), "completed cocycle: φτ = 0");
            }
            for t in &tau0 {
                assert!(t.is_regular_u0());
            }
            for t in &tau1 {
                assert!(t.is_regular_u1());
            }
        }
        TotCocycle {
            m,
            f0: tau0,
            f1: tau1,
            omega,
        }
    }

    /// Multiply an honest cocycle by x_var (a map into the complex twisted
    /// by O(1), represented by the same pages built for that twist).
    pub fn mul_into(
        &self,
        target: &P1Cohomology<F>,
        z: &TotCocycle<F>,
        var: usize,
    ) -> Vec<F::Elem> {
        let f = &self.pages.field;
        let fm0: Vec<_> = z.f0.iter().map(|l| l.mul_var(f, var)).collect();
        let fm1: Vec<_> = z.f1.iter().map(|l| l.mul_var(f, var)).collect();
        let om: Vec<_> = z.omega.iter().map(|l| l.mul_var(f, var)).collect();
        target.coords(z.m, fm0, fm1, om)
    }

    /// Coordinates of an honest cocycle in the basis returned by `basis(m)`.
    pub fn coords(
        &self,
        m: i64,
        mut f0: Vec<LaurentVector<F>>,
        mut f1: Vec<LaurentVector<F>>,
        omega: Vec<LaurentVector<F>>,
    ) -> Vec<F::Elem> {
        let f = &self.pages.field;
        let p = m - 1;
        // 1. normalize ω to a purely interior cochain by subtracting δ of the
        //    chart-regular split
        let mut interior_vec = vec![LaurentVector::zero(); omega.len()];
        for (r, lv) in omega.iter().enumerate() {
            let (reg0, reg1, interior) = lv.split(f);
            interior_vec[r] = interior;
            // ω − δ(h) with h = (−reg0, reg1): adjust f by φh
            // δ(h) = h1 − h0 = reg1 + reg0; so subtracting the coboundary
            // d(h,0) = (φh, δh) removes the non-interior part of ω
            let _ = (&reg0, &reg1);
        }
        // the f-correction: h = (−reg0, reg1) per component
        let mut h0 = Vec::new();
        let mut h1 = Vec::new();
        for lv in &omega {
            let (reg0, reg1, _) = lv.split(f);
            h0.push(reg0.neg(f));
            h1.push(reg1);
        }
        let phi_h0 = self.pages.apply_diff(p, &h0);
        let phi_h1 = self.pages.apply_diff(p, &h1);
        for (a, b) in f0.iter_mut().zip(phi_h0) {
            *a = a.add(f, &b.neg(f));
        }
        for (a, b) in f1.iter_mut().zip(phi_h1) {
            *a = a.add(f, &b.neg(f));
        }
        // 2. coordinates of the interior class against the surviving basis
        let rep_coords = self.pages.project(p, 1, &interior_vec);
        let reps1 = &self.pages.e2[&(p, 1)];
        let bounds1 = &self.pages.bounds[&(p, 1)];
        let e2_coords =
            class_coords(f, reps1, bounds1, &rep_coords).expect("H¹ part is a surviving class");
        // basis of ker d2 in E2 coordinates
        let kerd2_in_e2: Mat<F> = match self.pages.d2.get(&p) {
            Some(d) => matrix::left_kernel(f, d),
            None => Mat::identity(f, reps1.rows()),
        };
        let h1_coords: Vec<F::Elem> = if kerd2_in_e2.rows() == 0 {
            assert!(e2_coords.iter().all(|e| f.is_zero(e)));
            Vec::new()
        } else {
            let piv: Vec<usize> = (0..kerd2_in_e2.rows())
                .map(|i| {
                    (0..kerd2_in_e2.cols())
                        .position(|j| !f.is_zero(&kerd2_in_e2[(i, j)]))
                        .unwrap()
                })
                .collect();
            let vm = Mat::from_rows(f, kerd2_in_e2.cols(), vec![e2_coords]);
            matrix::coords_in_rref(f, &kerd2_in_e2, &piv, &vm)
                .expect("honest cocycle H¹ class survives d2")
                .row(0)
                .to_vec()
        };
        // 3. subtract the completed representatives of those classes
        let h1_reps: Vec<TotCocycle<F>> = {
            let mut rows = Vec::new();
            for i in 0..kerd2_in_e2.rows() {
                rows.push(self.complete_h1_rep(m, kerd2_in_e2.row(i).apply2(f, reps1).as_slice()));
            }
            rows
        };
        for (c, rep) in h1_coords.iter().zip(&h1_reps) {
            if f.is_zero(c) {
                continue;
            }
            let nc = f.neg(c);
            for (a, b) in f0.iter_mut().zip(&rep.f0) {
                *a = a.add(f, &b.scale(f, &nc));
            }
            for (a, b) in f1.iter_mut().zip(&rep.f1) {
                *a = a.add(f, &b.scale(f, &nc));
            }
            for (a, b) in interior_vec.iter_mut().zip(&rep.omega) {
                *a = a.add(f, &b.scale(f, &nc));
            }
        }
        // 4. remaining interior part is an E1-boundary: subtract d(0, w)
        let rem_coords = self.pages.project(p, 1, &interior_vec);
        if rem_coords.iter().any(|e| !f.is_zero(e)) {
            let d1prev = &self.pages.d1[&(p - 1, 1)];
            let vm = Mat::from_rows(f, d1prev.cols(), vec![rem_coords]);
            let w = matrix::solve_left(f, d1prev, &vm).expect("zero class is an interior boundary");
            let wlat = self.pages.to_laurent(p - 1, 1, w.row(0));
            // d(0, −w) = (0, φw): subtracting removes interior, adds chart junk
            let phiw = self.pages.apply_diff(p - 1, &wlat);
            let mut junk0 = Vec::new();
            let mut junk1 = Vec::new();
            for (iv, pw) in interior_vec.iter_mut().zip(&phiw) {
                let total = iv.add(f, &pw.neg(f));
                let (reg0, reg1, inner) = total.split(f);
                assert!(inner.is_zero(), "interior removed");
                junk0.push(reg0.neg(f));
                junk1.push(reg1);
            }
            // the leftover non-interior cochain is δ(h'); absorb into f
            let phi_j0 = self.pages.apply_diff(p, &junk0);
            let phi_j1 = self.pages.apply_diff(p, &junk1);
            for (a, b) in f0.iter_mut().zip(phi_j0) {
                *a = a.add(f, &b.neg(f));
            }
            for (a, b) in f1.iter_mut().zip(phi_j1) {
                *a = a.add(f, &b.neg(f));
            }
        }
        // 5. now (f0, f1) is a cocycle with zero ω-part: it must be diagonal
        //    (a global section tuple); read its E∞^{m,0} coordinates
        for (a, b) in f0.iter().zip(&f1) {
            debug_assert_eq!(a, b, "cochain is a global section after reduction");
        }
        for a in &f0 {
            debug_assert!(a.is_global_section());
        }
        let sec_coords = self.pages.project(m, 0, &f0);
        let reps0 = &self.pages.e2[&(m, 0)];
        let bounds0 = &self.pages.bounds[&(m, 0)];
        let e2c = class_coords(f, reps0, bounds0, &sec_coords).expect("section class in E2");
        // coordinates modulo im(d2): the section basis was built as reps of
        // E2 reduced mod the image, so solve against [basis; image]
        let img = self
            .pages
            .d2
            .get(&(m - 2))
            .map(|d| {
                let mut rows = Vec::new();
                for i in 0..d.rows() {
                    rows.push(d.row(i).to_vec());
                }
                if rows.is_empty() {
                    Mat::zeros(f, 0, reps0.rows())
                } else {
                    matrix::row_space(f, &Mat::from_rows(f, reps0.rows(), rows))
                }
            })
            .unwrap_or_else(|| Mat::zeros(f, 0, reps0.rows()));
        // surviving section basis in E2 coordinates (mirror of basis())
        let mut surv_rows = Vec::new();
        for i in 0..reps0.rows() {
            let mut unit = vec![f.zero(); reps0.rows()];
            unit[i] = f.one();
            let red = reduce_mod(f, &img, &unit);
            if red.iter().any(|e| !f.is_zero(e)) {
                surv_rows.push((i, red));
            }
        }
        let sec_part: Vec<F::Elem> = if surv_rows.is_empty() {
            Vec::new()
        } else {
            // solve e2c = x·surv + y·img
            let surv = Mat::from_rows(
                f,
                reps0.rows(),
                surv_rows.iter().map(|(_, r)| r.clone()).collect(),
            );
            let full = surv.vstack(f, &img);
            let vm = Mat::from_rows(f, reps0.rows(), vec![e2c]);
            let sol = matrix::solve_left(f, &full, &vm).expect("class decomposes");
            sol.row(0)[..surv.rows()].to_vec()
        };
        let mut out = sec_part;
        out.extend(h1_coords);
        out
    }
}

trait RowApply<F: Field> {
    fn apply2(&self, f: &F, m: &Mat<F>) -> Vec<F::Elem>;
}

impl<F: Field> RowApply<F> for [F::Elem] {
    /// Row vector times matrix.
    fn apply2(&self, f: &F, m: &Mat<F>) -> Vec<F::Elem> {
        m.apply(f, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bgg::l_module;
    use crate::exterior::Ctx;
    use crate::field::{PrimeField, DEFAULT_PRIME};
    use crate::module::{make_free, underline_k, FreeKind};

    fn line_bundle(a: i64) -> SheafComplex<PrimeField> {
        SheafComplex::new(
            1,
            PrimeField::new(DEFAULT_PRIME),
            BTreeMap::from([(0i64, vec![(a, 1usize)])]),
            BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn serre_examples() {
        assert_eq!(serre_dims(2, 2), vec![6, 0, 0]);
        assert_eq!(serre_dims(1, -2), vec![0, 1]);
        assert_eq!(serre_dims(3, -1), vec![0, 0, 0, 0]);
    }

    #[test]
    fn bott_examples() {
        assert_eq!(bott_dims(2, 1, 0), vec![0, 1, 0]);
        assert_eq!(bott_dims(2, 1, 2), vec![3, 0, 0]);
        assert_eq!(bott_dims(2, 2, 2), vec![0, 0, 0]); // Ω²(2) = O(−1)
                                                       // χ cross-check over a window
        for n in 1..=3usize {
            for i in 0..=n {
                for j in -5..=5i64 {
                    let dims = bott_dims(n, i, j);
                    let chi: i64 = dims
                        .iter()
                        .enumerate()
                        .map(|(q, &h)| if q % 2 == 1 { -(h as i64) } else { h as i64 })
                        .sum();
                    assert_eq!(chi, chi_omega(n, i, j), "χ(Ω^{i}({j})) on P{n}");
                }
            }
        }
    }

    #[test]
    fn p1_line_bundles_match_serre() {
        for a in -8..=8i64 {
            let h = p1_hyper(&line_bundle(a));
            let want = serre_dims(1, a);
            assert_eq!(h.get(&0).copied().unwrap_or(0), want[0], "h⁰(O({a}))");
            assert_eq!(h.get(&1).copied().unwrap_or(0), want[1], "h¹(O({a}))");
        }
    }

    #[test]
    fn p1_koszul_is_acyclic() {
        // O(−2) → O(−1)² → O on P¹ = L(Λ∨): all hypercohomology zero
        let c = Ctx::new(1, PrimeField::new(DEFAULT_PRIME));
        let lv = make_free(&c, FreeKind::LambdaDual, 0, 1);
        let l = l_module(&lv);
        assert!(p1_hyper(&l).is_empty());
    }

    #[test]
    fn p1_on_l_of_k() {
        let c = Ctx::new(1, PrimeField::new(DEFAULT_PRIME));
        let k = underline_k(&c, 0);
        let l = l_module(&k);
        let h = p1_hyper(&l);
        assert_eq!(h, BTreeMap::from([(0i64, 1u64)]));
        // twisted: h of L(k)(d) matches serre
        for d in -6..=6i64 {
            let h = p1_hyper(&l.twist(d));
            let want = serre_dims(1, d);
            assert_eq!(h.get(&0).copied().unwrap_or(0), want[0]);
            assert_eq!(h.get(&1).copied().unwrap_or(0), want[1]);
        }
    }

    #[test]
    fn split_reassembles() {
        let f = PrimeField::new(DEFAULT_PRIME);
        let mut lv = LaurentVector::zero();
        lv.add_term(&f, -3, 2, 5);
        lv.add_term(&f, -1, -1, 7);
        lv.add_term(&f, 2, -4, 1);
        let (r0, r1, int) = lv.split(&f);
        assert_eq!(r0.add(&f, &r1).add(&f, &int), lv);
        assert!(r0.is_regular_u0() && r1.is_regular_u1());
    }

    #[test]
    fn honest_multiplication_on_line_bundles() {
        // H⁰(O(a)) ⊗ V* → H⁰(O(a+1)) has full rank (a+2 for a ≥ 0);
        // H¹(O(a)) ⊗ V* → H¹(O(a+1)) is surjective for a ≤ −3
        let field = PrimeField::new(DEFAULT_PRIME);
        for a in [0i64, 1, 2] {
            let src = P1Cohomology::new(&line_bundle(a));
            let tgt = P1Cohomology::new(&line_bundle(a + 1));
            let basis = src.basis(0);
            assert_eq!(basis.len() as u64, serre_dims(1, a)[0]);
            let mut rows = Vec::new();
            for b in &basis {
                for var in 0..2 {
                    rows.push(src.mul_into(&tgt, b, var));
                }
            }
            let m = Mat::from_rows(&field, tgt.dim(0), rows);
            assert_eq!(matrix::rank(&field, &m), (a + 2) as usize, "rank at a={a}");
        }
        for a in [-4i64, -3] {
            let src = P1Cohomology::new(&line_bundle(a));
            let tgt = P1Cohomology::new(&line_bundle(a + 1));
            let basis = src.basis(1);
            assert_eq!(basis.len() as u64, serre_dims(1, a)[1]);
            let mut rows = Vec::new();
            for b in &basis {
                for var in 0..2 {
                    rows.push(src.mul_into(&tgt, b, var));
                }
            }
            let m = Mat::from_rows(&field, tgt.dim(1), rows);
            assert_eq!(
                matrix::rank(&field, &m),
                (-a - 2) as usize,
                "H¹ rank at a={a}"
            );
        }
    }
}

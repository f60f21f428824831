//! Dense matrices over a field context, with deterministic reduced row
//! echelon form.
//!
//! Convention used across the crate: vectors are rows, maps act on the right
//! (`y ↦ y·A`), so composing maps is the left-to-right matrix product and the
//! kernel of a map is the left kernel `{x : x·A = 0}`.

use crate::field::Field;

#[derive(Clone, PartialEq)]
pub struct Mat<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> std::fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Mat({}x{})[", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(
                f,
                "{:?}{}",
                self.row(r),
                if r + 1 < self.rows { "; " } else { "" }
            )?;
        }
        write!(f, "]")
    }
}

impl<F: Field> Mat<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_rows(field: &F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        let _ = field;
        Mat {
            rows: n,
            cols,
            data,
        }
    }

    pub fn from_fn(
        field: &F,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> F::Elem,
    ) -> Self {
        let _ = field;
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Entries given row-major as signed integers, reduced into the field.
    pub fn from_i64(field: &F, rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Mat {
            rows,
            cols,
            data: entries.iter().map(|v| field.from_i64(*v)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [F::Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self, field: &F) -> bool {
        self.data.iter().all(|e| field.is_zero(e))
    }

    pub fn transpose(&self, field: &F) -> Self {
        Mat::from_fn(field, self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Left-to-right product: `(x·self)·other = x·(self.mul(other))`.
    pub fn mul(&self, field: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Mat::zeros(field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if field.is_zero(a) {
                    continue;
                }
                let (dst, src) = (i, k);
                // out.row(i) += a * other.row(k)
                let orow = &other.data[src * other.cols..(src + 1) * other.cols];
                field.row_axpy(
                    &mut out.data[dst * other.cols..(dst + 1) * other.cols],
                    orow,
                    a,
                );
            }
        }
        out
    }

    pub fn add(&self, field: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(field, self.rows, self.cols, |i, j| {
            field.add(&self[(i, j)], &other[(i, j)])
        })
    }

    pub fn sub(&self, field: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(field, self.rows, self.cols, |i, j| {
            field.sub(&self[(i, j)], &other[(i, j)])
        })
    }

    pub fn neg(&self, field: &F) -> Self {
        Mat::from_fn(field, self.rows, self.cols, |i, j| field.neg(&self[(i, j)]))
    }

    pub fn scale(&self, field: &F, f: &F::Elem) -> Self {
        Mat::from_fn(field, self.rows, self.cols, |i, j| {
            field.mul(&self[(i, j)], f)
        })
    }

    /// Row vector times matrix.
    pub fn apply(&self, field: &F, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![field.zero(); self.cols];
        for (i, c) in v.iter().enumerate() {
            if !field.is_zero(c) {
                field.row_axpy(&mut out, self.row(i), c);
            }
        }
        out
    }

    /// Stack vertically: rows of `self` then rows of `other`.
    pub fn vstack(&self, field: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let _ = field;
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Place side by side: columns of `self` then of `other`.
    pub fn hstack(&self, field: &F, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn select_rows(&self, field: &F, sel: &[usize]) -> Self {
        Mat::from_fn(field, sel.len(), self.cols, |i, j| {
            self[(sel[i], j)].clone()
        })
    }

    pub fn select_cols(&self, field: &F, sel: &[usize]) -> Self {
        Mat::from_fn(field, self.rows, sel.len(), |i, j| {
            self[(i, sel[j])].clone()
        })
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, field: &F, other: &Self) -> Self {
        let mut out = Mat::zeros(field, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// In-place reduction to reduced row echelon form with deterministic
    /// pivoting (first nonzero entry scanning columns left-to-right, rows
    /// top-to-bottom). Returns pivot columns. If `transform` is given it
    /// receives the same row operations (record of the change of basis).
    fn rref_in_place(&mut self, field: &F, mut transform: Option<&mut Mat<F>>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut pr = 0usize; // next pivot row
        for pc in 0..self.cols {
            // find first row >= pr with nonzero entry in column pc
            let Some(r) = (pr..self.rows).find(|&r| !field.is_zero(&self[(r, pc)])) else {
                continue;
            };
            self.swap_rows(pr, r);
            if let Some(t) = transform.as_deref_mut() {
                t.swap_rows(pr, r);
            }
            // normalize pivot row
            let inv = field.inv(&self[(pr, pc)].clone());
            field.row_scale(&mut self.row_mut(pr)[pc..], &inv);
            if let Some(t) = transform.as_deref_mut() {
                field.row_scale(t.row_mut(pr), &inv);
            }
            // eliminate the column everywhere else
            for r2 in 0..self.rows {
                if r2 == pr || field.is_zero(&self[(r2, pc)]) {
                    continue;
                }
                let f = field.neg(&self[(r2, pc)].clone());
                let (dst, src) = row_pair(&mut self.data, self.cols, r2, pr);
                field.row_axpy(&mut dst[pc..], &src[pc..], &f);
                if let Some(t) = transform.as_deref_mut() {
                    let (tdst, tsrc) = row_pair(&mut t.data, t.cols, r2, pr);
                    field.row_axpy(tdst, tsrc, &f);
                }
            }
            pivots.push(pc);
            pr += 1;
            if pr == self.rows {
                break;
            }
        }
        pivots
    }
}

/// Disjoint mutable/shared views of two distinct rows.
fn row_pair<T>(data: &mut [T], cols: usize, dst: usize, src: usize) -> (&mut [T], &[T]) {
    assert_ne!(dst, src);
    if dst < src {
        let (a, b) = data.split_at_mut(src * cols);
        (&mut a[dst * cols..(dst + 1) * cols], &b[..cols])
    } else {
        let (a, b) = data.split_at_mut(dst * cols);
        (&mut b[..cols], &a[src * cols..(src + 1) * cols])
    }
}

/// Result of `rref_rank`: the canonical reduced form, the rank, the pivot
/// columns, and a canonical basis (itself in rref) of the left kernel.
pub struct Rref<F: Field> {
    pub rank: usize,
    pub rref: Mat<F>,
    pub kernel: Mat<F>,
    pub pivots: Vec<usize>,
}

pub fn rref_rank<F: Field>(field: &F, a: &Mat<F>) -> Rref<F> {
    let mut b = a.clone();
    let mut t = Mat::identity(field, a.rows());
    let pivots = b.rref_in_place(field, Some(&mut t));
    let rank = pivots.len();
    // rows of t below the rank span the left kernel; rref them for canonicity
    let mut kernel = Mat::from_fn(field, a.rows() - rank, a.rows(), |i, j| {
        t[(rank + i, j)].clone()
    });
    kernel.rref_in_place(field, None);
    let rref = Mat::from_fn(field, a.rows(), a.cols(), |i, j| b[(i, j)].clone());
    Rref {
        rank,
        rref,
        kernel,
        pivots,
    }
}

/// Rank without the transform bookkeeping.
pub fn rank<F: Field>(field: &F, a: &Mat<F>) -> usize {
    if a.rows() > a.cols() {
        let mut b = a.transpose(field);
        return b.rref_in_place(field, None).len();
    }
    let mut b = a.clone();
    b.rref_in_place(field, None).len()
}

/// Pivot columns of the row space (rank profile) without a transform.
pub fn rref_pivots_only<F: Field>(field: &F, a: &Mat<F>) -> Vec<usize> {
    let mut b = a.clone();
    b.rref_in_place(field, None)
}

/// Canonical basis of the left kernel `{x : x·A = 0}`, in rref form.
///
/// For tall matrices this goes through the transpose: x·A = 0 iff xᵀ lies in
/// the null space of Aᵀ, whose basis comes straight off rref(Aᵀ) by the
/// free-variable construction — much cheaper than carrying an rows×rows
/// transform.
pub fn left_kernel<F: Field>(field: &F, a: &Mat<F>) -> Mat<F> {
    if a.rows() <= a.cols() {
        return rref_rank(field, a).kernel;
    }
    let mut at = a.transpose(field);
    let pivots = at.rref_in_place(field, None);
    let rank = pivots.len();
    let m = a.rows();
    let free: Vec<usize> = (0..m).filter(|j| !pivots.contains(j)).collect();
    let mut kernel = Mat::zeros(field, free.len(), m);
    for (k, &j) in free.iter().enumerate() {
        kernel[(k, j)] = field.one();
        for i in 0..rank {
            kernel[(k, pivots[i])] = field.neg(&at[(i, j)]);
        }
    }
    // already in (column-permuted) echelon form; rref for canonicity
    kernel.rref_in_place(field, None);
    debug_assert!(kernel.mul(field, a).is_zero(field));
    kernel
}

/// Canonical basis of the row space, in rref form (the nonzero rows of the
/// rref).
pub fn row_space<F: Field>(field: &F, a: &Mat<F>) -> Mat<F> {
    let r = rref_rank(field, a);
    Mat::from_fn(field, r.rank, a.cols(), |i, j| r.rref[(i, j)].clone())
}

/// Solve `X · basis = v` where `basis` is in rref form with the given pivot
/// columns. Returns None if some row of `v` is outside the row space.
pub fn coords_in_rref<F: Field>(
    field: &F,
    basis: &Mat<F>,
    pivots: &[usize],
    v: &Mat<F>,
) -> Option<Mat<F>> {
    assert_eq!(basis.rows(), pivots.len());
    assert_eq!(basis.cols(), v.cols());
    let x = Mat::from_fn(field, v.rows(), basis.rows(), |i, j| {
        v[(i, pivots[j])].clone()
    });
    // verify: x·basis == v
    if x.mul(field, basis) == *v {
        Some(x)
    } else {
        None
    }
}

/// Solve `X · a = b` for arbitrary `a` (not necessarily full rank).
pub fn solve_left<F: Field>(field: &F, a: &Mat<F>, b: &Mat<F>) -> Option<Mat<F>> {
    assert_eq!(a.cols(), b.cols());
    let mut m = a.clone();
    let mut t = Mat::identity(field, a.rows());
    let pivots = m.rref_in_place(field, Some(&mut t));
    let rref = m;
    let coeffs = coords_in_rref(field, &rref_top(field, &rref, pivots.len()), &pivots, b)?;
    // x = coeffs · (top rows of t)
    let t_top = Mat::from_fn(field, pivots.len(), t.cols(), |i, j| t[(i, j)].clone());
    Some(coeffs.mul(field, &t_top))
}

fn rref_top<F: Field>(field: &F, m: &Mat<F>, rank: usize) -> Mat<F> {
    Mat::from_fn(field, rank, m.cols(), |i, j| m[(i, j)].clone())
}

/// Inverse of a square matrix, if invertible.
pub fn inverse<F: Field>(field: &F, a: &Mat<F>) -> Option<Mat<F>> {
    assert_eq!(a.rows(), a.cols());
    let mut b = a.clone();
    let mut t = Mat::identity(field, a.rows());
    let pivots = b.rref_in_place(field, Some(&mut t));
    if pivots.len() == a.rows() {
        Some(t)
    } else {
        None
    }
}

impl<F: Field> std::ops::Index<(usize, usize)> for Mat<F> {
    type Output = F::Elem;
    fn index(&self, (i, j): (usize, usize)) -> &F::Elem {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<F: Field> std::ops::IndexMut<(usize, usize)> for Mat<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F::Elem {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

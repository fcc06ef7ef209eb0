//! Row-compressed sparse matrices and exact elimination.

use std::collections::BTreeSet;

use super::dense::DenseMatrix;
use super::field::Field;

/// A sparse matrix stored by rows. Each row is sorted by column index and
/// never stores an explicit zero, so structural equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseMatrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, E)>>,
}

type Row<E> = Vec<(usize, E)>;

impl<E: Clone> SparseMatrix<E> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            data: (0..n).map(|i| vec![(i, f.one())]).collect(),
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed
    /// and zeros dropped. Panics on out-of-range indices.
    pub fn from_triplets<F: Field<Elem = E>>(
        f: &F,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, E)>,
    ) -> Self {
        let mut data: Vec<Row<E>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r}, {c}) out of range {rows}x{cols}");
            data[r].push((c, v));
        }
        for row in &mut data {
            row.sort_by_key(|(c, _)| *c);
            let mut merged: Row<E> = Vec::with_capacity(row.len());
            for (c, v) in row.drain(..) {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv = f.add(lv, &v),
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|(_, v)| !f.is_zero(v));
            *row = merged;
        }
        Self { rows, cols, data }
    }

    pub fn from_dense<F: Field<Elem = E>>(f: &F, m: &DenseMatrix<E>) -> Self {
        let data = (0..m.rows())
            .map(|i| {
                m.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !f.is_zero(v))
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect();
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data,
        }
    }

    pub fn to_dense<F: Field<Elem = E>>(&self, f: &F) -> DenseMatrix<E> {
        let mut m = DenseMatrix::zeros(f, self.rows, self.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                m.set(i, *j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn row(&self, i: usize) -> &[(usize, E)] {
        &self.data[i]
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&E> {
        let row = &self.data[r];
        row.binary_search_by_key(&c, |(j, _)| *j).ok().map(|k| &row[k].1)
    }

    /// Iterates `(row, col, value)` in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &E)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<Row<E>> = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                data[*j].push((i, v.clone()));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in sparse product");
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: Vec<Option<E>> = vec![None; rhs.cols];
                let mut touched = Vec::new();
                for (k, a) in row {
                    for (j, b) in &rhs.data[*k] {
                        let p = f.mul(a, b);
                        match &mut acc[*j] {
                            Some(v) => *v = f.add(v, &p),
                            slot @ None => {
                                *slot = Some(p);
                                touched.push(*j);
                            }
                        }
                    }
                }
                touched.sort_unstable();
                touched
                    .into_iter()
                    .filter_map(|j| acc[j].take().filter(|v| !f.is_zero(v)).map(|v| (j, v)))
                    .collect()
            })
            .collect();
        Self {
            rows: self.rows,
            cols: rhs.cols,
            data,
        }
    }

    fn combine<F: Field<Elem = E>>(&self, f: &F, rhs: &Self, sign: bool) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| {
                let factor = if sign { f.one() } else { f.from_i64(-1) };
                axpy(f, a, &factor, b)
            })
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, rhs: &Self) -> Self {
        self.combine(f, rhs, true)
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, rhs: &Self) -> Self {
        self.combine(f, rhs, false)
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        if f.is_zero(c) {
            return Self::zero(self.rows, self.cols);
        }
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|row| row.iter().map(|(j, v)| (*j, f.mul(c, v))).collect())
                .collect(),
        }
    }

    /// Assembles a block matrix. `blocks[i][j]` must have `row_sizes[i]` rows
    /// and `col_sizes[j]` columns; `None` stands for a zero block.
    pub fn from_blocks<F: Field<Elem = E>>(
        f: &F,
        row_sizes: &[usize],
        col_sizes: &[usize],
        blocks: &[Vec<Option<Self>>],
    ) -> Self {
        let rows = row_sizes.iter().sum();
        let cols = col_sizes.iter().sum();
        let mut trip = Vec::new();
        let mut r0 = 0;
        for (bi, &rs) in row_sizes.iter().enumerate() {
            let mut c0 = 0;
            for (bj, &cs) in col_sizes.iter().enumerate() {
                if let Some(b) = &blocks[bi][bj] {
                    assert_eq!((b.rows, b.cols), (rs, cs), "block ({bi},{bj}) has wrong shape");
                    trip.extend(b.triplets().map(|(i, j, v)| (r0 + i, c0 + j, v.clone())));
                }
                c0 += cs;
            }
            r0 += rs;
        }
        Self::from_triplets(f, rows, cols, trip)
    }

    /// Restriction to the given row and column index sets (in that order).
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Self {
        let mut col_map = vec![usize::MAX; self.cols];
        for (k, &c) in col_idx.iter().enumerate() {
            col_map[c] = k;
        }
        let data = row_idx
            .iter()
            .map(|&r| {
                let mut row: Row<E> = self.data[r]
                    .iter()
                    .filter(|(c, _)| col_map[*c] != usize::MAX)
                    .map(|(c, v)| (col_map[*c], v.clone()))
                    .collect();
                row.sort_by_key(|(c, _)| *c);
                row
            })
            .collect();
        Self {
            rows: row_idx.len(),
            cols: col_idx.len(),
            data,
        }
    }

    /// Rank over the field.
    pub fn rank<F: Field<Elem = E>>(&self, f: &F) -> usize {
        Eliminator::new(f, self.data.clone(), self.cols, false).run().len()
    }

    /// Columns of the returned `cols x (cols - rank)` matrix form a basis of
    /// the kernel.
    pub fn kernel_basis<F: Field<Elem = E>>(&self, f: &F) -> Self {
        let pivots = Eliminator::new(f, self.data.clone(), self.cols, true).run();
        let mut is_pivot = vec![false; self.cols];
        for (c, _) in &pivots {
            is_pivot[*c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|c| !is_pivot[*c]).collect();
        let mut free_pos = vec![usize::MAX; self.cols];
        for (k, &c) in free.iter().enumerate() {
            free_pos[c] = k;
        }
        let mut trip: Vec<(usize, usize, E)> = free.iter().enumerate().map(|(k, &c)| (c, k, f.one())).collect();
        for (pc, row) in &pivots {
            for (c, v) in row {
                if *c != *pc {
                    trip.push((*pc, free_pos[*c], f.neg(v)));
                }
            }
        }
        Self::from_triplets(f, self.cols, free.len(), trip)
    }

    pub fn format<F: Field<Elem = E>>(&self, f: &F) -> String {
        self.to_dense(f).format(f)
    }
}

/// `a + factor * b` on sorted sparse rows.
fn axpy<F: Field>(f: &F, a: &[(usize, F::Elem)], factor: &F::Elem, b: &[(usize, F::Elem)]) -> Row<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map_or(usize::MAX, |x| x.0);
        let cb = b.get(j).map_or(usize::MAX, |x| x.0);
        if ca < cb {
            out.push(a[i].clone());
            i += 1;
        } else if cb < ca {
            out.push((cb, f.mul(factor, &b[j].1)));
            j += 1;
        } else {
            let v = f.add(&a[i].1, &f.mul(factor, &b[j].1));
            if !f.is_zero(&v) {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Sparse Gaussian elimination with Markowitz pivot selection.
///
/// In `full` mode every pivot column is cleared from all other rows, previous
/// pivot rows included, which yields a reduced echelon basis of the row space.
struct Eliminator<'a, F: Field> {
    f: &'a F,
    rows: Vec<Row<F::Elem>>,
    active: BTreeSet<usize>,
    /// Active rows touching each column.
    col_rows: Vec<BTreeSet<usize>>,
    /// Retired pivot rows touching each column (only maintained in full mode).
    pivot_col_rows: Vec<BTreeSet<usize>>,
    pivots: Vec<(usize, usize)>,
    full: bool,
}

/// Upper bound on how many shortest rows are examined per pivot choice.
const MARKOWITZ_CANDIDATES: usize = 8;

impl<'a, F: Field> Eliminator<'a, F> {
    fn new(f: &'a F, rows: Vec<Row<F::Elem>>, ncols: usize, full: bool) -> Self {
        let mut col_rows = vec![BTreeSet::new(); ncols];
        let mut active = BTreeSet::new();
        for (i, row) in rows.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            active.insert(i);
            for (c, _) in row {
                col_rows[*c].insert(i);
            }
        }
        Self {
            f,
            rows,
            active,
            col_rows,
            pivot_col_rows: vec![BTreeSet::new(); if full { ncols } else { 0 }],
            pivots: Vec::new(),
            full,
        }
    }

    fn choose_pivot(&self) -> Option<(usize, usize)> {
        let min_len = self.active.iter().map(|&r| self.rows[r].len()).min()?;
        let mut best: Option<(usize, usize, usize, usize)> = None;
        for &r in self
            .active
            .iter()
            .filter(|&&r| self.rows[r].len() == min_len)
            .take(MARKOWITZ_CANDIDATES)
        {
            for (c, _) in &self.rows[r] {
                let col_count = self.col_rows[*c].len();
                let cost = (min_len - 1) * (col_count - 1);
                let key = (cost, col_count, r, *c);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
        }
        best.map(|(_, _, r, c)| (r, c))
    }

    fn replace_row(&mut self, r: usize, new_row: Row<F::Elem>, is_pivot_row: bool) {
        let index = if is_pivot_row {
            &mut self.pivot_col_rows
        } else {
            &mut self.col_rows
        };
        for (c, _) in &self.rows[r] {
            index[*c].remove(&r);
        }
        for (c, _) in &new_row {
            index[*c].insert(r);
        }
        if !is_pivot_row && new_row.is_empty() {
            self.active.remove(&r);
        }
        self.rows[r] = new_row;
    }

    fn run(mut self) -> Vec<(usize, Row<F::Elem>)> {
        let f = self.f;
        while let Some((pr, pc)) = self.choose_pivot() {
            // Retire and normalize the pivot row.
            self.active.remove(&pr);
            for (c, _) in &self.rows[pr] {
                self.col_rows[*c].remove(&pr);
            }
            let pv = self.rows[pr]
                .iter()
                .find(|(c, _)| *c == pc)
                .map(|(_, v)| v.clone())
                .expect("pivot entry present");
            let inv = f.inv(&pv).expect("pivot is nonzero");
            let prow: Row<F::Elem> = self.rows[pr].iter().map(|(c, v)| (*c, f.mul(&inv, v))).collect();
            self.rows[pr] = prow.clone();

            let targets: Vec<usize> = self.col_rows[pc].iter().copied().collect();
            for r in targets {
                let factor = f.neg(&lookup(&self.rows[r], pc));
                let new_row = axpy(f, &self.rows[r], &factor, &prow);
                self.replace_row(r, new_row, false);
            }
            if self.full {
                let targets: Vec<usize> = self.pivot_col_rows[pc].iter().copied().collect();
                for r in targets {
                    let factor = f.neg(&lookup(&self.rows[r], pc));
                    let new_row = axpy(f, &self.rows[r], &factor, &prow);
                    self.replace_row(r, new_row, true);
                }
                for (c, _) in &prow {
                    self.pivot_col_rows[*c].insert(pr);
                }
            }
            self.pivots.push((pr, pc));
        }
        let mut rows = self.rows;
        self.pivots
            .into_iter()
            .map(|(r, c)| (c, std::mem::take(&mut rows[r])))
            .collect()
    }
}

fn lookup<E: Clone>(row: &[(usize, E)], c: usize) -> E {
    let k = row.binary_search_by_key(&c, |(j, _)| *j).expect("entry present");
    row[k].1.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::{Cyclotomic, PrimeField, Rationals};

    #[test]
    fn rank_of_trivial_matrices() {
        let q = Rationals;
        assert_eq!(SparseMatrix::<num_rational::BigRational>::zero(3, 3).rank(&q), 0);
        assert_eq!(SparseMatrix::identity(&q, 4).rank(&q), 4);
    }

    #[test]
    fn norm_of_adjoint_diag_zeta5_has_rank_two() {
        // Ad(diag(z, 1)) on (E11, E12, E21, E22) is diag(1, z, z^-1, 1).
        let k = Cyclotomic::new(5);
        let x = DenseMatrix::diagonal(&k, &[k.one(), k.zeta(), k.zeta_pow(-1), k.one()]);
        let mut norm = DenseMatrix::zeros(&k, 4, 4);
        for r in 0..5 {
            norm = norm.add(&k, &x.pow(&k, r));
        }
        assert_eq!(norm.to_sparse(&k).rank(&k), 2);
    }

    #[test]
    fn kernel_of_two_minus_three() {
        let q = Rationals;
        let m = SparseMatrix::from_dense(&q, &DenseMatrix::from_i64(&q, &[vec![2, -3]]));
        let k = m.kernel_basis(&q);
        assert_eq!((k.rows(), k.cols()), (2, 1));
        // (3, 2) up to scale
        let v0 = k.get(0, 0).unwrap().clone();
        let v1 = k.get(1, 0).unwrap().clone();
        assert_eq!(v0 * q.from_i64(2), v1 * q.from_i64(3));
    }

    #[test]
    fn kernel_edge_cases() {
        let q = Rationals;
        assert_eq!(SparseMatrix::identity(&q, 3).kernel_basis(&q).cols(), 0);
        let k = SparseMatrix::<num_rational::BigRational>::zero(2, 3).kernel_basis(&q);
        assert_eq!(k, SparseMatrix::identity(&q, 3));
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = PrimeField::new(101).unwrap();
        let m = DenseMatrix::from_i64(
            &f,
            &[
                vec![1, 2, 0, 3, 0],
                vec![0, 0, 1, 4, 5],
                vec![1, 2, 1, 7, 5],
                vec![2, 4, 0, 6, 0],
            ],
        );
        let s = m.to_sparse(&f);
        let k = s.kernel_basis(&f);
        assert_eq!(k.cols(), 5 - s.rank(&f));
        assert!(s.mul(&f, &k).is_zero());
        assert_eq!(k.rank(&f), k.cols());
    }

    #[test]
    fn triplets_merge_and_drop_zeros() {
        let q = Rationals;
        let m = SparseMatrix::from_triplets(&q, 2, 2, [(0, 0, q.from_i64(1)), (0, 0, q.from_i64(-1)), (1, 1, q.from_i64(2))]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.transpose().transpose(), m);
    }
}

//! Sparse Gaussian elimination, generic over the coefficient field.
//!
//! One engine serves two callers: exact rational elimination (kernels,
//! solves, rank certification) and elimination modulo a word-size prime
//! (the fast rank path). Rows are sparse `(column, value)` lists sorted by
//! column; the echelon is built incrementally, so fill-in is confined to
//! the row currently being reduced. Feeding rows sparsest-first keeps the
//! pivot rows short, which is the fill-control that matters at the scale
//! of structure-constant matrices.
//!
//! Everything here is deterministic: ties are broken by position, never by
//! value or by hash order.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

/// Field operations threaded through the elimination.
pub(crate) trait Field {
    type E: Clone + PartialEq;
    fn is_zero(&self, e: &Self::E) -> bool;
    fn neg(&self, e: &Self::E) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// Multiplicative inverse of a nonzero element.
    fn inv(&self, a: &Self::E) -> Self::E;
}

/// A sparse row: `(column, nonzero value)` pairs, ascending by column.
pub(crate) type Row<E> = Vec<(usize, E)>;

/// `a + c·b`, merging sorted sparse rows and dropping cancellations.
pub(crate) fn axpy<F: Field>(f: &F, a: &Row<F::E>, c: &F::E, b: &Row<F::E>) -> Row<F::E> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            core::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push((b[j].0, f.mul(c, &b[j].1)));
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                let v = f.add(&a[i].1, &f.mul(c, &b[j].1));
                if !f.is_zero(&v) {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for (col, v) in &b[j..] {
        out.push((*col, f.mul(c, v)));
    }
    out.retain(|(_, v)| !f.is_zero(v));
    out
}

/// Incremental row echelon form.
///
/// With `reduced = true` the stored rows are kept mutually reduced
/// (Gauss–Jordan), which is what kernel extraction and solving need; with
/// `reduced = false` only the staircase property is maintained, which is
/// enough for rank and span-membership questions.
pub(crate) struct Echelon<'a, F: Field> {
    f: &'a F,
    reduced: bool,
    /// pivot column → index into `rows`
    pivots: BTreeMap<usize, usize>,
    rows: Vec<Row<F::E>>,
}

impl<'a, F: Field> Echelon<'a, F> {
    pub fn new(f: &'a F, reduced: bool) -> Self {
        Echelon {
            f,
            reduced,
            pivots: BTreeMap::new(),
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_cols(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Eliminate every pivot column occurring in `row`. The result has no
    /// entry in any pivot column; it is empty exactly when `row` lies in
    /// the span of the stored rows.
    pub fn reduce(&self, mut row: Row<F::E>) -> Row<F::E> {
        let mut i = 0;
        while i < row.len() {
            let col = row[i].0;
            if let Some(&ri) = self.pivots.get(&col) {
                let coef = self.f.neg(&row[i].1);
                // Pivot rows lead at `col`, so this never disturbs columns
                // left of position `i`.
                row = axpy(self.f, &row, &coef, &self.rows[ri]);
            } else {
                i += 1;
            }
        }
        row
    }

    /// Insert one row. Returns the new pivot column if the rank grew.
    pub fn insert(&mut self, row: Row<F::E>) -> Option<usize> {
        let mut row = self.reduce(row);
        let (lead, val) = match row.first() {
            Some((c, v)) => (*c, v.clone()),
            None => return None,
        };
        let inv = self.f.inv(&val);
        for (_, v) in row.iter_mut() {
            *v = self.f.mul(&inv, v);
        }
        if self.reduced {
            // Clear the new pivot column from every stored row.
            for ri in 0..self.rows.len() {
                if let Ok(pos) = self.rows[ri].binary_search_by_key(&lead, |e| e.0) {
                    let coef = self.f.neg(&self.rows[ri][pos].1);
                    self.rows[ri] = axpy(self.f, &self.rows[ri], &coef, &row);
                }
            }
        }
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(row);
        Some(lead)
    }

    /// Entry of the pivot row for column `pc` at column `c` (zero if absent).
    pub fn pivot_row_entry(&self, pc: usize, c: usize) -> Option<&F::E> {
        let ri = *self.pivots.get(&pc)?;
        let row = &self.rows[ri];
        row.binary_search_by_key(&c, |e| e.0).ok().map(|pos| &row[pos].1)
    }

    pub fn has_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }
}

/// Row list of a sparse matrix given by a row-major entry iterator, with
/// empty rows skipped, paired with each row's original index.
pub(crate) fn gather_rows<E: Clone, I: Iterator<Item = (usize, usize, E)>>(
    iter: I,
) -> Vec<(usize, Row<E>)> {
    let mut rows: Vec<(usize, Row<E>)> = Vec::new();
    for (r, c, v) in iter {
        match rows.last_mut() {
            Some((last, row)) if *last == r => row.push((c, v)),
            _ => rows.push((r, alloc::vec![(c, v)])),
        }
    }
    rows
}

/// Deterministic sparsest-first processing order: ascending row length,
/// ties by original row index.
pub(crate) fn sparsest_first<E>(rows: &mut [(usize, Row<E>)]) {
    rows.sort_by_key(|(idx, row)| (row.len(), *idx));
}

//! Sparse vectors and incremental row echelon forms over a field.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::field::Field;

/// A sparse vector: `(index, value)` pairs with increasing indices and
/// nonzero values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseVec<E> {
    pub entries: Vec<(usize, E)>,
}

impl<E> Default for SparseVec<E> {
    fn default() -> Self {
        SparseVec { entries: Vec::new() }
    }
}

impl<E: Clone> SparseVec<E> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit<F: Field<Elem = E>>(field: &F, i: usize) -> Self {
        SparseVec {
            entries: vec![(i, field.one())],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Builds a vector from unsorted entries, combining duplicates.
    pub fn from_unsorted<F: Field<Elem = E>>(field: &F, mut raw: Vec<(usize, E)>) -> Self {
        raw.sort_by_key(|(i, _)| *i);
        let mut entries: Vec<(usize, E)> = Vec::with_capacity(raw.len());
        for (i, v) in raw {
            match entries.last_mut() {
                Some((j, w)) if *j == i => *w = field.add(w, &v),
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|(_, v)| !field.is_zero(v));
        SparseVec { entries }
    }

    pub fn scale<F: Field<Elem = E>>(&self, field: &F, c: &E) -> Self {
        if field.is_zero(c) {
            return Self::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, field.mul(v, c))).collect(),
        }
    }

    /// Shifts every index by `offset`.
    pub fn shifted(&self, offset: usize) -> Self {
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (i + offset, v.clone())).collect(),
        }
    }
}

/// A dense scratch buffer that remembers which slots are dirty.
struct Scratch<E> {
    buf: Vec<E>,
    touched: Vec<usize>,
    mark: Vec<bool>,
}

impl<E: Clone> Scratch<E> {
    fn new() -> Self {
        Scratch {
            buf: Vec::new(),
            touched: Vec::new(),
            mark: Vec::new(),
        }
    }

    fn ensure<F: Field<Elem = E>>(&mut self, field: &F, len: usize) {
        if self.buf.len() < len {
            self.buf.resize(len, field.zero());
            self.mark.resize(len, false);
        }
    }

    fn touch(&mut self, i: usize) -> bool {
        if self.mark[i] {
            false
        } else {
            self.mark[i] = true;
            self.touched.push(i);
            true
        }
    }

    /// Empties the buffer, returning its nonzero entries sorted by index.
    fn drain<F: Field<Elem = E>>(&mut self, field: &F) -> SparseVec<E> {
        let mut touched = std::mem::take(&mut self.touched);
        touched.sort_unstable();
        let mut entries = Vec::new();
        for i in touched {
            self.mark[i] = false;
            let v = std::mem::replace(&mut self.buf[i], field.zero());
            if !field.is_zero(&v) {
                entries.push((i, v));
            }
        }
        SparseVec { entries }
    }
}

/// Outcome of inserting a vector into an [`Echelon`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion<E> {
    /// The vector was independent and now contributes a pivot.
    Pivot,
    /// The vector lay in the span. With tracking enabled, the payload is the
    /// vanishing combination of inserted vectors (by id) it produced.
    Dependent(Option<SparseVec<E>>),
}

/// Semi-echelon basis of a growing subspace of `F^dim`.
///
/// Rows are normalized to have pivot coefficient one at their first index.
/// Reduction processes indices in increasing order, so later rows may keep
/// entries at other pivot columns.
pub struct Echelon<F: Field> {
    field: F,
    dim: usize,
    rows: Vec<SparseVec<F::Elem>>,
    combos: Vec<SparseVec<F::Elem>>,
    pivot_row: Vec<Option<usize>>,
    track: bool,
    work: Scratch<F::Elem>,
    combo_work: Scratch<F::Elem>,
    heap: BinaryHeap<Reverse<usize>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, dim: usize) -> Self {
        Self::build(field, dim, false)
    }

    /// An echelon form that records how each row arose from the inputs.
    pub fn tracking(field: F, dim: usize) -> Self {
        Self::build(field, dim, true)
    }

    fn build(field: F, dim: usize, track: bool) -> Self {
        let mut work = Scratch::new();
        work.ensure(&field, dim);
        Echelon {
            field,
            dim,
            rows: Vec::new(),
            combos: Vec::new(),
            pivot_row: vec![None; dim],
            track,
            work,
            combo_work: Scratch::new(),
            heap: BinaryHeap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Drops the recorded combinations; later insertions are untracked.
    pub fn stop_tracking(&mut self) {
        self.track = false;
        self.combos.clear();
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<F::Elem>] {
        &self.rows
    }

    /// Reduces `v` modulo the current span; zero iff `v` lies in it.
    pub fn reduce(&mut self, v: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        self.reduce_inner(v, None).0
    }

    pub fn contains(&mut self, v: &SparseVec<F::Elem>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`, labelled `id` for combination tracking.
    pub fn insert(&mut self, v: &SparseVec<F::Elem>, id: usize) -> Insertion<F::Elem> {
        let seed = if self.track { Some(id) } else { None };
        let (residual, combo) = self.reduce_inner(v, seed);
        if residual.is_zero() {
            return Insertion::Dependent(combo);
        }
        let f = &self.field;
        let inv = f.inv(&residual.entries[0].1);
        let row = residual.scale(f, &inv);
        let pivot = row.entries[0].0;
        self.pivot_row[pivot] = Some(self.rows.len());
        self.rows.push(row);
        if let Some(c) = combo {
            self.combos.push(c.scale(f, &inv));
        }
        Insertion::Pivot
    }

    fn reduce_inner(
        &mut self,
        v: &SparseVec<F::Elem>,
        seed: Option<usize>,
    ) -> (SparseVec<F::Elem>, Option<SparseVec<F::Elem>>) {
        let f = &self.field;
        if let Some(id) = seed {
            self.combo_work.ensure(f, id + 1);
            self.combo_work.touch(id);
            self.combo_work.buf[id] = f.one();
        }
        for (i, x) in &v.entries {
            debug_assert!(*i < self.dim);
            if self.work.touch(*i) {
                self.heap.push(Reverse(*i));
            }
            self.work.buf[*i] = f.add(&self.work.buf[*i], x);
        }
        let mut residual = Vec::new();
        while let Some(Reverse(i)) = self.heap.pop() {
            self.work.mark[i] = false;
            let x = std::mem::replace(&mut self.work.buf[i], f.zero());
            if f.is_zero(&x) {
                continue;
            }
            match self.pivot_row[i] {
                None => residual.push((i, x)),
                Some(r) => {
                    for (j, c) in &self.rows[r].entries[1..] {
                        if !self.work.mark[*j] {
                            self.work.mark[*j] = true;
                            self.heap.push(Reverse(*j));
                        }
                        f.sub_mul_assign(&mut self.work.buf[*j], &x, c);
                    }
                    if seed.is_some() {
                        let combo = &self.combos[r];
                        if let Some((last, _)) = combo.entries.last() {
                            self.combo_work.ensure(f, last + 1);
                        }
                        for (j, c) in &combo.entries {
                            self.combo_work.touch(*j);
                            f.sub_mul_assign(&mut self.combo_work.buf[*j], &x, c);
                        }
                    }
                }
            }
        }
        self.work.touched.clear();
        let combo = seed.map(|_| self.combo_work.drain(f));
        (SparseVec { entries: residual }, combo)
    }
}

/// Rank of the span of `vectors` in `F^dim`.
pub fn rank<F: Field>(field: &F, dim: usize, vectors: &[SparseVec<F::Elem>]) -> usize {
    let mut e = Echelon::new(field.clone(), dim);
    for (k, v) in vectors.iter().enumerate() {
        e.insert(v, k);
    }
    e.rank()
}

/// Basis of `{c : Σ c_k vectors[k] = 0}`, as sparse vectors over input ids.
pub fn kernel<F: Field>(field: &F, dim: usize, vectors: &[SparseVec<F::Elem>]) -> Vec<SparseVec<F::Elem>> {
    let mut e = Echelon::tracking(field.clone(), dim);
    let mut out = Vec::new();
    for (k, v) in vectors.iter().enumerate() {
        if let Insertion::Dependent(Some(c)) = e.insert(v, k) {
            out.push(c);
        }
    }
    out
}

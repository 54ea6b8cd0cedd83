//! Dense real tensors of order `m` and dimension `n`.
//!
//! Entries are stored row-major in lexicographic order of the multi-index
//! `(i1, ..., im)`, so the row tensor for a fixed first index `i` is the
//! contiguous slice `entries[i * n^(m-1) .. (i + 1) * n^(m-1)]`. All indices
//! are 0-based here; 1-based indices only appear at the I/O boundary.

use crate::error::{Error, Result};

/// Hard ceiling on `n^m` accepted by the constructors.
pub const DEFAULT_ENTRY_CAP: usize = 100_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    order: usize,
    dim: usize,
    entries: Vec<f64>,
}

/// Number of entries `n^m`, or an error if it overflows or exceeds `cap`.
pub fn entry_count(order: usize, dim: usize, cap: usize) -> Result<usize> {
    if order < 2 {
        return Err(Error::input(format!("order must be at least 2, got {order}")));
    }
    if dim < 1 {
        return Err(Error::input("dimension must be at least 1"));
    }
    let exp = u32::try_from(order).map_err(|_| Error::input("order too large"))?;
    match dim.checked_pow(exp) {
        Some(len) if len <= cap => Ok(len),
        _ => Err(Error::input(format!(
            "tensor of order {order} and dimension {dim} exceeds the entry cap of {cap}"
        ))),
    }
}

impl Tensor {
    pub fn from_dense(order: usize, dim: usize, entries: Vec<f64>) -> Result<Self> {
        Self::from_dense_with_cap(order, dim, entries, DEFAULT_ENTRY_CAP)
    }

    pub fn from_dense_with_cap(
        order: usize,
        dim: usize,
        entries: Vec<f64>,
        cap: usize,
    ) -> Result<Self> {
        let len = entry_count(order, dim, cap)?;
        if entries.len() != len {
            return Err(Error::input(format!(
                "expected {len} entries for order {order}, dimension {dim}; got {}",
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::input(format!("entry {pos} is not finite")));
        }
        Ok(Tensor { order, dim, entries })
    }

    pub fn zeros(order: usize, dim: usize) -> Result<Self> {
        let len = entry_count(order, dim, DEFAULT_ENTRY_CAP)?;
        Ok(Tensor { order, dim, entries: vec![0.0; len] })
    }

    /// Builds a tensor by evaluating `f` at every multi-index in storage order.
    pub fn from_fn(order: usize, dim: usize, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let len = entry_count(order, dim, DEFAULT_ENTRY_CAP)?;
        let mut entries = Vec::with_capacity(len);
        let mut idx = MultiIndex::new(order, dim);
        while let Some(ix) = idx.next_index() {
            entries.push(f(ix));
        }
        Self::from_dense(order, dim, entries)
    }

    /// The identity tensor: ones on the diagonal, zeros elsewhere.
    pub fn identity(order: usize, dim: usize) -> Result<Self> {
        let mut t = Self::zeros(order, dim)?;
        for i in 0..dim {
            let off = t.diag_offset(i);
            t.entries[off] = 1.0;
        }
        Ok(t)
    }

    pub fn all_ones(order: usize, dim: usize) -> Result<Self> {
        let len = entry_count(order, dim, DEFAULT_ENTRY_CAP)?;
        Ok(Tensor { order, dim, entries: vec![1.0; len] })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<f64> {
        self.entries
    }

    /// `n^(m-1)`: the number of entries in one row tensor.
    pub fn row_len(&self) -> usize {
        self.entries.len() / self.dim
    }

    /// Row tensor `A_i` as a flat slice in lexicographic order of `(i2, ..., im)`.
    pub fn row(&self, i: usize) -> &[f64] {
        let len = self.row_len();
        &self.entries[i * len..(i + 1) * len]
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [f64] {
        let len = self.row_len();
        &mut self.entries[i * len..(i + 1) * len]
    }

    /// Position of `(i, ..., i)` inside row `i`.
    pub fn diag_pos_in_row(&self, i: usize) -> usize {
        (0..self.order - 1).fold(0, |acc, _| acc * self.dim + i)
    }

    fn diag_offset(&self, i: usize) -> usize {
        i * self.row_len() + self.diag_pos_in_row(i)
    }

    pub fn diag(&self, i: usize) -> f64 {
        self.entries[self.diag_offset(i)]
    }

    pub fn offset(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.order {
            return Err(Error::input(format!(
                "multi-index has {} components, tensor order is {}",
                idx.len(),
                self.order
            )));
        }
        idx.iter().try_fold(0usize, |acc, &k| {
            if k >= self.dim {
                Err(Error::input(format!("index {k} out of range for dimension {}", self.dim)))
            } else {
                Ok(acc * self.dim + k)
            }
        })
    }

    pub fn get(&self, idx: &[usize]) -> Result<f64> {
        Ok(self.entries[self.offset(idx)?])
    }

    pub fn set(&mut self, idx: &[usize], value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::input("entry is not finite"));
        }
        let off = self.offset(idx)?;
        self.entries[off] = value;
        Ok(())
    }

    fn same_shape(&self, other: &Tensor) -> Result<()> {
        if self.order != other.order || self.dim != other.dim {
            return Err(Error::input(format!(
                "shape mismatch: ({}, {}) vs ({}, {})",
                self.order, self.dim, other.order, other.dim
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        self.same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Tensor::from_dense(self.order, self.dim, entries)
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        self.same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Tensor::from_dense(self.order, self.dim, entries)
    }

    pub fn scale(&self, c: f64) -> Result<Tensor> {
        let entries = self.entries.iter().map(|a| c * a).collect();
        Tensor::from_dense(self.order, self.dim, entries)
    }

    /// `A + c I`.
    pub fn shift_diagonal(&self, c: f64) -> Result<Tensor> {
        let mut t = self.clone();
        for i in 0..self.dim {
            let off = t.diag_offset(i);
            t.entries[off] += c;
        }
        Tensor::from_dense(t.order, t.dim, t.entries)
    }

    /// Applies `f(row, entries_of_row)` to every row in place.
    pub(crate) fn map_rows(&self, mut f: impl FnMut(usize, &mut [f64])) -> Tensor {
        let mut t = self.clone();
        for i in 0..self.dim {
            f(i, t.row_mut(i));
        }
        t
    }
}

/// Odometer over all multi-indices of a given order and dimension, in
/// lexicographic (storage) order.
#[derive(Debug, Clone)]
pub struct MultiIndex {
    current: Vec<usize>,
    dim: usize,
    started: bool,
    done: bool,
}

impl MultiIndex {
    pub fn new(order: usize, dim: usize) -> Self {
        MultiIndex { current: vec![0; order], dim, started: false, done: dim == 0 }
    }

    /// Advances and returns the next index, or `None` when exhausted.
    pub fn next_index(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        for k in (0..self.current.len()).rev() {
            self.current[k] += 1;
            if self.current[k] < self.dim {
                return Some(&self.current);
            }
            self.current[k] = 0;
        }
        self.done = true;
        None
    }
}

/// All monomials `x_{j1} ... x_{jk}` over `k`-tuples in lexicographic order.
pub(crate) fn monomials(x: &[f64], k: usize) -> Vec<f64> {
    let mut w = vec![1.0];
    for _ in 0..k {
        let mut next = Vec::with_capacity(w.len() * x.len());
        for &p in &w {
            next.extend(x.iter().map(|&xj| p * xj));
        }
        w = next;
    }
    w
}

fn check_vector(a: &Tensor, x: &[f64]) -> Result<()> {
    if x.len() != a.dim {
        return Err(Error::input(format!(
            "vector has length {}, tensor dimension is {}",
            x.len(),
            a.dim
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::input("vector has non-finite components"));
    }
    Ok(())
}

/// `A x^(m-1)`: component `i` is the sum of `a_{i i2..im} x_{i2} ... x_{im}`.
pub fn contract(a: &Tensor, x: &[f64]) -> Result<Vec<f64>> {
    check_vector(a, x)?;
    Ok(contract_unchecked(a, x))
}

pub(crate) fn contract_unchecked(a: &Tensor, x: &[f64]) -> Vec<f64> {
    let w = monomials(x, a.order - 1);
    (0..a.dim)
        .map(|i| a.row(i).iter().zip(&w).fold(0.0, |acc, (aij, wj)| acc + aij * wj))
        .collect()
}

/// The homogeneous form `A x^m`, summed over all `m`-tuples.
pub fn polyeval(a: &Tensor, x: &[f64]) -> Result<f64> {
    check_vector(a, x)?;
    let w = monomials(x, a.order);
    Ok(a.entries.iter().zip(&w).fold(0.0, |acc, (aij, wj)| acc + aij * wj))
}

/// Per-row quantities every class predicate and interval is built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowStats {
    pub diag: f64,
    /// `max(0, max off-diagonal entry)`.
    pub r_plus: f64,
    /// `min(0, min off-diagonal entry)`.
    pub r_minus: f64,
    /// `r_plus`, `0` or `r_minus` according to the sign of the diagonal.
    pub r_signed: f64,
    pub row_sum: f64,
    pub off_diag_sum: f64,
    pub off_diag_abs_sum: f64,
    /// Sum of `r_plus - a` over off-diagonal entries.
    pub plus_deficit: f64,
    /// Sum of `a - r_minus` over off-diagonal entries.
    pub minus_excess: f64,
}

impl RowStats {
    /// `diag - r_plus`: the diagonal of the same row of `A+`.
    pub fn plus_gap(&self) -> f64 {
        self.diag - self.r_plus
    }

    /// `diag - r_minus`.
    pub fn minus_gap(&self) -> f64 {
        self.diag - self.r_minus
    }
}

/// Row statistics for every row. Sums run in lexicographic order.
pub fn row_stats(a: &Tensor) -> Vec<RowStats> {
    (0..a.dim).map(|i| row_stats_for(a, i)).collect()
}

pub(crate) fn row_stats_for(a: &Tensor, i: usize) -> RowStats {
    let row = a.row(i);
    let dpos = a.diag_pos_in_row(i);
    let diag = row[dpos];

    let mut r_plus = 0.0f64;
    let mut r_minus = 0.0f64;
    let mut row_sum = 0.0;
    let mut off_diag_sum = 0.0;
    let mut off_diag_abs_sum = 0.0;
    for (k, &v) in row.iter().enumerate() {
        row_sum += v;
        if k == dpos {
            continue;
        }
        r_plus = r_plus.max(v);
        r_minus = r_minus.min(v);
        off_diag_sum += v;
        off_diag_abs_sum += v.abs();
    }

    // second sweep: the deficits need the extremes
    let mut plus_deficit = 0.0;
    let mut minus_excess = 0.0;
    for (k, &v) in row.iter().enumerate() {
        if k != dpos {
            plus_deficit += r_plus - v;
            minus_excess += v - r_minus;
        }
    }

    let r_signed = if diag > 0.0 {
        r_plus
    } else if diag < 0.0 {
        r_minus
    } else {
        0.0
    };

    RowStats {
        diag,
        r_plus,
        r_minus,
        r_signed,
        row_sum,
        off_diag_sum,
        off_diag_abs_sum,
        plus_deficit,
        minus_excess,
    }
}

/// A nonempty, strictly increasing set of 0-based indices into `[0, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet {
    members: Vec<usize>,
}

impl IndexSet {
    /// Validates `members` (0-based) against dimension `n`.
    pub fn new(members: Vec<usize>, n: usize) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::input("index set must be nonempty"));
        }
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::input("index set must be strictly increasing"));
        }
        if let Some(&bad) = members.iter().find(|&&k| k >= n) {
            return Err(Error::input(format!("index {} out of range 1..={n}", bad + 1)));
        }
        Ok(IndexSet { members })
    }

    /// Same as [`IndexSet::new`] but takes 1-based indices.
    pub fn from_one_based(members: &[usize], n: usize) -> Result<Self> {
        if members.contains(&0) {
            return Err(Error::input("1-based index set contains 0"));
        }
        Self::new(members.iter().map(|k| k - 1).collect(), n)
    }

    pub fn full(n: usize) -> Self {
        IndexSet { members: (0..n).collect() }
    }

    /// Every nonempty subset of `[0, n)`, for `n` small enough to enumerate.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = IndexSet> {
        assert!(n < usize::BITS as usize, "too many subsets");
        (1usize..(1 << n)).map(move |mask| IndexSet {
            members: (0..n).filter(|k| mask & (1 << k) != 0).collect(),
        })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Restriction of all `m` indices to `j`, re-indexed consecutively.
pub fn principal_subtensor(a: &Tensor, j: &IndexSet) -> Result<Tensor> {
    if let Some(&bad) = j.members.iter().find(|&&k| k >= a.dim) {
        return Err(Error::input(format!("index {} out of range 1..={}", bad + 1, a.dim)));
    }
    let members = &j.members;
    let mut full = vec![0usize; a.order];
    Tensor::from_fn(a.order, members.len(), |ix| {
        for (dst, &k) in full.iter_mut().zip(ix) {
            *dst = members[k];
        }
        let off = full.iter().fold(0, |acc, &k| acc * a.dim + k);
        a.entries[off]
    })
}

/// Exact symmetry test: every entry equals the entry at its sorted multi-index.
pub fn is_symmetric(a: &Tensor) -> bool {
    is_symmetric_tol(a, 0.0)
}

/// Symmetry test up to an absolute tolerance.
pub fn is_symmetric_tol(a: &Tensor, tol: f64) -> bool {
    let mut idx = MultiIndex::new(a.order, a.dim);
    let mut sorted = vec![0usize; a.order];
    let mut pos = 0usize;
    while let Some(ix) = idx.next_index() {
        sorted.copy_from_slice(ix);
        sorted.sort_unstable();
        let canon = sorted.iter().fold(0, |acc, &k| acc * a.dim + k);
        if (a.entries[pos] - a.entries[canon]).abs() > tol {
            return false;
        }
        pos += 1;
    }
    true
}

//! Seeded generators and definition-level reference predicates shared by the
//! integration tests.
//!
//! Most generators draw entries from the grid `k/8` so that every row sum and
//! product used by the predicates is exact in `f64`; the reference checks can
//! then be written straight from the definitions without tolerances.

#![allow(dead_code)]

use std::collections::BTreeMap;

use btensor::tensor::MultiIndex;
use btensor::{Hypergraph, Tensor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on `{lo, lo + 1/8, ..., hi}`.
pub fn dyadic(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let a = (lo * 8.0).round() as i64;
    let b = (hi * 8.0).round() as i64;
    rng.random_range(a..=b) as f64 / 8.0
}

/// Rounds up to the grid.
fn ceil8(v: f64) -> f64 {
    (v * 8.0).ceil() / 8.0
}

pub fn shape(rng: &mut ChaCha8Rng, orders: &[usize], dims: &[usize]) -> (usize, usize) {
    (orders[rng.random_range(0..orders.len())], dims[rng.random_range(0..dims.len())])
}

fn is_diag(ix: &[usize]) -> bool {
    ix.iter().all(|&k| k == ix[0])
}

pub fn random_dyadic(rng: &mut ChaCha8Rng, m: usize, n: usize, lo: f64, hi: f64) -> Tensor {
    Tensor::from_fn(m, n, |_| dyadic(rng, lo, hi)).unwrap()
}

/// Z-tensor with off-diagonal entries in `[-1, 0]` and diagonal in `[dlo, dhi]`.
pub fn random_z(rng: &mut ChaCha8Rng, m: usize, n: usize, dlo: f64, dhi: f64) -> Tensor {
    Tensor::from_fn(m, n, |ix| if is_diag(ix) { dyadic(rng, dlo, dhi) } else { dyadic(rng, -1.0, 0.0) })
        .unwrap()
}

fn off_abs_sums(a: &Tensor) -> Vec<f64> {
    (0..a.dim())
        .map(|i| {
            let d = a.diag_pos_in_row(i);
            a.row(i).iter().enumerate().filter(|&(k, _)| k != d).map(|(_, v)| v.abs()).sum()
        })
        .collect()
}

fn with_diagonal(a: &Tensor, diag: &[f64]) -> Tensor {
    let mut t = a.clone();
    for (i, &d) in diag.iter().enumerate() {
        t.set(&vec![i; a.order()], d).unwrap();
    }
    t
}

/// Strictly diagonally dominated Z-tensor.
pub fn sdd_z(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Tensor {
    let z = random_z(rng, m, n, 0.0, 0.0);
    let diag: Vec<f64> = off_abs_sums(&z).iter().map(|s| s + dyadic(rng, 0.125, 2.0)).collect();
    with_diagonal(&z, &diag)
}

/// Strictly doubly diagonally dominated Z-tensor. One row is allowed to fall
/// short of plain dominance; the others are strengthened to compensate.
pub fn sddd_z(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Tensor {
    let z = random_z(rng, m, n, 0.0, 0.0);
    let sums = off_abs_sums(&z);
    let weak = rng.random_range(0..n);
    let f = dyadic(rng, 0.5, 1.0);
    let diag: Vec<f64> = (0..n)
        .map(|i| {
            if i == weak {
                if sums[i] > 0.0 { sums[i] * f } else { 0.125 }
            } else {
                ceil8(sums[i] / f) + dyadic(rng, 0.125, 1.0)
            }
        })
        .collect();
    with_diagonal(&z, &diag)
}

/// Adds `c_i` to every entry of row `i`.
pub fn add_row_constants(a: &Tensor, c: &[f64]) -> Tensor {
    let m = a.order();
    let n = a.dim();
    let mut t = a.clone();
    let mut it = MultiIndex::new(m, n);
    while let Some(ix) = it.next_index() {
        let ix = ix.to_vec();
        let v = t.get(&ix).unwrap();
        t.set(&ix, v + c[ix[0]]).unwrap();
    }
    t
}

fn row_constants(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| dyadic(rng, 0.0, 2.0)).collect()
}

/// B-tensor by construction: SDD Z-tensor plus nonnegative row constants.
pub fn b_tensor(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Tensor {
    let z = sdd_z(rng, m, n);
    let c = row_constants(rng, n);
    add_row_constants(&z, &c)
}

/// Doubly B-tensor by construction: SDDD Z-tensor plus row constants plus a
/// nonnegative diagonal.
pub fn doubly_b_tensor(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Tensor {
    let z = sddd_z(rng, m, n);
    let c = row_constants(rng, n);
    let t = add_row_constants(&z, &c);
    let extra: Vec<f64> = (0..n).map(|i| t.diag(i) + dyadic(rng, 0.0, 1.0)).collect();
    with_diagonal(&t, &extra)
}

/// Mixed population for the class-equivalence checks: plain random tensors,
/// Z-tensors, and members of each class, some pushed just off the boundary.
pub fn ladder_instance(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Tensor {
    match rng.random_range(0..6) {
        0 => random_dyadic(rng, m, n, -2.0, 2.0),
        1 => random_z(rng, m, n, -1.0, 4.0),
        2 => b_tensor(rng, m, n),
        3 => doubly_b_tensor(rng, m, n),
        4 => {
            // a B-tensor with one diagonal nudged down, often onto the boundary
            let t = b_tensor(rng, m, n);
            let i = rng.random_range(0..n);
            let mut diag: Vec<f64> = (0..n).map(|k| t.diag(k)).collect();
            diag[i] -= dyadic(rng, 0.0, 2.0);
            with_diagonal(&t, &diag)
        }
        _ => {
            let t = doubly_b_tensor(rng, m, n);
            let c: Vec<f64> = (0..n).map(|_| dyadic(rng, -1.0, 1.0)).collect();
            add_row_constants(&t, &c)
        }
    }
}

/// Symmetric tensor: one value per index multiset.
pub fn symmetric(
    rng: &mut ChaCha8Rng,
    m: usize,
    n: usize,
    mut value: impl FnMut(&mut ChaCha8Rng, &[usize]) -> f64,
) -> Tensor {
    let mut orbit: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    Tensor::from_fn(m, n, |ix| {
        let mut key = ix.to_vec();
        key.sort_unstable();
        *orbit.entry(key.clone()).or_insert_with(|| value(rng, &key))
    })
    .unwrap()
}

pub fn symmetric_dyadic(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Tensor {
    symmetric(rng, m, n, |r, _| dyadic(r, -2.0, 2.0))
}

/// Symmetric B-tensor: symmetric SDD Z-tensor plus one constant on every entry.
pub fn symmetric_b(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Tensor {
    let z = symmetric(rng, m, n, |r, key| if is_diag(key) { 0.0 } else { dyadic(r, -1.0, 0.0) });
    let diag: Vec<f64> = off_abs_sums(&z).iter().map(|s| s + dyadic(rng, 0.125, 2.0)).collect();
    let c = dyadic(rng, 0.0, 2.0);
    add_row_constants(&with_diagonal(&z, &diag), &vec![c; n])
}

/// Continuous entries, so chart polynomials have simple roots almost surely.
pub fn continuous(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Tensor {
    Tensor::from_fn(m, n, |_| rng.random_range(-2.0..2.0)).unwrap()
}

/// Random 3-uniform hypergraph on `n` vertices, each triple kept with
/// probability one half.
pub fn random_three_uniform(rng: &mut ChaCha8Rng, n: usize) -> Hypergraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if rng.random_bool(0.5) {
                    edges.push(vec![a, b, c]);
                }
            }
        }
    }
    Hypergraph::new(n, 3, edges).unwrap()
}

// Definition-level reference predicates. They iterate over multi-indices
// explicitly instead of sharing the library's row statistics.

fn rows(a: &Tensor) -> Vec<(f64, Vec<f64>)> {
    let n = a.dim();
    let m = a.order();
    let mut out: Vec<(f64, Vec<f64>)> = (0..n).map(|_| (0.0, Vec::new())).collect();
    let mut it = MultiIndex::new(m, n);
    while let Some(ix) = it.next_index() {
        let v = a.get(ix).unwrap();
        if is_diag(ix) {
            out[ix[0]].0 = v;
        } else {
            out[ix[0]].1.push(v);
        }
    }
    out
}

/// Original definition: every row sum is positive and its average exceeds
/// every off-diagonal entry of the row.
pub fn naive_is_b(a: &Tensor) -> bool {
    let count = a.row_len() as f64;
    rows(a).iter().all(|(d, off)| {
        let sum: f64 = d + off.iter().sum::<f64>();
        sum > 0.0 && off.iter().all(|&v| sum > count * v)
    })
}

pub fn naive_is_z(a: &Tensor) -> bool {
    rows(a).iter().all(|(_, off)| off.iter().all(|&v| v <= 0.0))
}

pub fn naive_is_sdd(a: &Tensor) -> bool {
    rows(a).iter().all(|(d, off)| *d > off.iter().map(|v| v.abs()).sum::<f64>())
}

pub fn naive_is_sddd(a: &Tensor) -> bool {
    let r = rows(a);
    let s: Vec<f64> = r.iter().map(|(_, off)| off.iter().map(|v| v.abs()).sum()).collect();
    r.iter().all(|(d, _)| *d > 0.0)
        && (0..r.len())
            .all(|i| (0..r.len()).all(|j| i == j || r[i].0 * r[j].0 > s[i] * s[j]))
}

/// Diagonal above the largest nonnegative off-diagonal entry, and the pairwise
/// product condition on the shifted rows.
pub fn naive_is_doubly_b(a: &Tensor) -> bool {
    let r = rows(a);
    let plus: Vec<f64> = r.iter().map(|(_, off)| off.iter().fold(0.0f64, |m, &v| m.max(v))).collect();
    let gap: Vec<f64> = r.iter().zip(&plus).map(|((d, _), p)| d - p).collect();
    let def: Vec<f64> =
        r.iter().zip(&plus).map(|((_, off), p)| off.iter().map(|v| p - v).sum()).collect();
    gap.iter().all(|&g| g > 0.0)
        && (0..r.len()).all(|i| (0..r.len()).all(|j| i == j || gap[i] * gap[j] > def[i] * def[j]))
}

/// Largest absolute entry difference.
pub fn max_diff(a: &Tensor, b: &Tensor) -> f64 {
    a.entries().iter().zip(b.entries()).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Order 4, dimension 3 B-tensor with `A x^3 = 0` at `x = (-4, 2, 3)`.
pub fn t43() -> Tensor {
    Tensor::from_fn(4, 3, |ix| match ix {
        [0, 0, 0, 0] => 65.0,
        [0, ..] => 64.0,
        [1, 1, 1, 1] => 18.0,
        [1, 0, 0, 1] => 15.0,
        [1, ..] => 16.0,
        [2, 2, 2, 2] => 40.0 / 3.0,
        [2, 0, 0, 2] => 11.0,
        _ => 12.0,
    })
    .unwrap()
}

/// Order 4, dimension 2 doubly B-tensor that is not positive definite.
pub fn doubly_b_not_definite() -> Tensor {
    Tensor::from_fn(4, 2, |ix| match ix {
        [0, 0, 0, 0] | [1, 1, 1, 1] => 2.0,
        [0, 1, 1, 1] | [1, 0, 1, 1] | [1, 1, 0, 1] | [1, 1, 1, 0] => -1.0,
        _ => 0.0,
    })
    .unwrap()
}

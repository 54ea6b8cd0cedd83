//! Uniform hypergraphs and their Laplacian tensors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::tensor::Tensor;

/// An `m`-uniform hypergraph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypergraph {
    n: usize,
    m: usize,
    /// Each edge sorted ascending; edges kept in input order.
    edges: Vec<Vec<usize>>,
    degrees: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HypergraphFile {
    n: usize,
    m: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Builds from 0-based edges. Every edge needs `m` distinct vertices in
    /// range and no edge may repeat.
    pub fn new(n: usize, m: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if m < 2 {
            return Err(Error::input(format!("edge cardinality must be at least 2, got {m}")));
        }
        if n < 1 {
            return Err(Error::input("hypergraph needs at least one vertex"));
        }
        let mut degrees = vec![0; n];
        let mut sorted_edges = Vec::with_capacity(edges.len());
        for e in edges {
            if e.len() != m {
                return Err(Error::input(format!("edge {e:?} does not have {m} vertices")));
            }
            let mut s = e.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::input(format!("edge {e:?} repeats a vertex")));
            }
            if s.iter().any(|&v| v >= n) {
                return Err(Error::input(format!("edge {e:?} has a vertex outside 0..{n}")));
            }
            if sorted_edges.contains(&s) {
                return Err(Error::input(format!("edge {e:?} appears twice")));
            }
            for &v in &s {
                degrees[v] += 1;
            }
            sorted_edges.push(s);
        }
        Ok(Hypergraph { n, m, edges: sorted_edges, degrees })
    }

    /// Parses `{"n":..,"m":..,"edges":[[v1,..,vm],..]}` with 1-based vertices.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: HypergraphFile = serde_json::from_str(s)?;
        let mut edges = Vec::with_capacity(file.edges.len());
        for e in file.edges {
            if e.contains(&0) {
                return Err(Error::input(format!("edge {e:?} uses vertex 0; vertices are 1-based")));
            }
            edges.push(e.into_iter().map(|v| v - 1).collect());
        }
        Self::new(file.n, file.m, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }
}

impl Serialize for Hypergraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        HypergraphFile {
            n: self.n,
            m: self.m,
            edges: self.edges.iter().map(|e| e.iter().map(|v| v + 1).collect()).collect(),
        }
        .serialize(s)
    }
}

/// Heap's algorithm over `items`, calling `f` with each permutation.
fn for_each_permutation(items: &mut [usize], f: &mut impl FnMut(&[usize])) {
    let k = items.len();
    let mut c = vec![0usize; k];
    f(items);
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            f(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Degree diagonal minus the normalized adjacency tensor.
///
/// For every edge `e` and vertex `i` in it, each ordering `(i2..im)` of
/// `e \ {i}` receives `-1/(m-1)!`, so every row sums to zero.
pub fn laplacian_tensor(g: &Hypergraph) -> Result<Tensor> {
    let m = g.m;
    let mut t = Tensor::zeros(m, g.n)?;
    let fact: f64 = (1..m).map(|k| k as f64).product();
    let weight = -1.0 / fact;
    let mut idx = vec![0usize; m];
    for e in &g.edges {
        for (pos, &i) in e.iter().enumerate() {
            let mut rest: Vec<usize> = e.iter().enumerate().filter(|&(p, _)| p != pos).map(|(_, &v)| v).collect();
            idx[0] = i;
            let mut result = Ok(());
            for_each_permutation(&mut rest, &mut |perm| {
                idx[1..].copy_from_slice(perm);
                if result.is_ok() {
                    result = t.get(&idx).and_then(|old| t.set(&idx, old + weight));
                }
            });
            result?;
        }
    }
    for (i, &d) in g.degrees.iter().enumerate() {
        t.set(&vec![i; m], d as f64)?;
    }
    Ok(t)
}

/// `[0, 2 * max degree]`: every real eigenvalue of the Laplacian lies here.
pub fn laplacian_bounds(g: &Hypergraph) -> Interval {
    Interval { lo: 0.0, hi: 2.0 * g.max_degree() as f64 }
}

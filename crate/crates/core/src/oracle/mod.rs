//! H-eigenpair computation for checking localization results.
//!
//! `n2` enumerates every H-eigenpair of a dimension 2 tensor through a
//! univariate polynomial. `search` is a multi-start heuristic for any
//! dimension and finds a subset of the H-spectrum only.

mod n2;
mod search;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::{contract_unchecked, Tensor};

pub use n2::eigenpairs_n2;
pub use search::eigen_search;

/// Components smaller than this do not count as the leading nonzero one
/// when fixing the sign of an eigenvector.
const SIGN_PIVOT: f64 = 1e-10;

/// Pairs closer than this in `lambda` (and in `x` for the n2 oracle) are
/// reported once.
pub const DEDUP_LAMBDA: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenPair {
    pub lambda: f64,
    /// Max-norm 1, first clearly nonzero component positive.
    pub x: Vec<f64>,
    pub residual: f64,
}

/// `||A x^(m-1) - lambda x^[m-1]||_inf` after scaling `x` to max-norm 1.
pub fn residual(a: &Tensor, lambda: f64, x: &[f64]) -> Result<f64> {
    if x.len() != a.dim() {
        return Err(Error::input(format!(
            "vector has length {}, tensor dimension is {}",
            x.len(),
            a.dim()
        )));
    }
    if x.iter().any(|v| !v.is_finite()) || !lambda.is_finite() {
        return Err(Error::input("non-finite eigenpair"));
    }
    let norm = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if norm == 0.0 {
        return Err(Error::input("eigenvector is zero"));
    }
    let y: Vec<f64> = x.iter().map(|v| v / norm).collect();
    let ax = contract_unchecked(a, &y);
    let p = (a.order() - 1) as i32;
    Ok(ax.iter().zip(&y).fold(0.0f64, |m, (lhs, yi)| m.max((lhs - lambda * yi.powi(p)).abs())))
}

/// Max-norm 1 with the first component above [`SIGN_PIVOT`] positive.
/// Returns `None` for a zero or non-finite vector.
pub fn canonicalize(x: &[f64]) -> Option<Vec<f64>> {
    let norm = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(norm > 0.0 && norm.is_finite()) {
        return None;
    }
    let mut y: Vec<f64> = x.iter().map(|v| v / norm).collect();
    if let Some(&lead) = y.iter().find(|v| v.abs() > SIGN_PIVOT) {
        if lead < 0.0 {
            y.iter_mut().for_each(|v| *v = -*v);
        }
    }
    Some(y)
}

fn pair_order(p: &EigenPair, q: &EigenPair) -> std::cmp::Ordering {
    p.lambda.total_cmp(&q.lambda).then_with(|| {
        p.x.iter().zip(&q.x).map(|(a, b)| a.total_cmp(b)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    })
}

/// Sorts by `(lambda, x)` and drops pairs within `lambda_tol` and `x_tol`
/// (max-norm) of one already kept. Keeps the smaller residual.
pub(crate) fn sort_dedup(mut pairs: Vec<EigenPair>, lambda_tol: f64, x_tol: f64) -> Vec<EigenPair> {
    pairs.sort_by(pair_order);
    let mut kept: Vec<EigenPair> = Vec::with_capacity(pairs.len());
    for p in pairs {
        let dup = kept.iter_mut().find(|k| {
            (k.lambda - p.lambda).abs() <= lambda_tol
                && k.x.iter().zip(&p.x).all(|(a, b)| (a - b).abs() <= x_tol)
        });
        match dup {
            Some(k) if p.residual < k.residual => *k = p,
            Some(_) => {}
            None => kept.push(p),
        }
    }
    kept.sort_by(pair_order);
    kept
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub restarts: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { restarts: 64, seed: 0, tol: 1e-8 }
    }
}

pub trait EigenSolver: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    /// Whether the solver returns every H-eigenpair (up to dedup).
    fn is_exhaustive(&self) -> bool;
    fn applies(&self, a: &Tensor) -> bool;
    fn solve(&self, a: &Tensor, opts: &SolveOptions) -> Result<Vec<EigenPair>>;
}

pub struct PairEnumeration;

impl EigenSolver for PairEnumeration {
    fn name(&self) -> &'static str {
        "n2"
    }
    fn description(&self) -> &'static str {
        "every H-eigenpair of a dimension 2 tensor, by polynomial roots"
    }
    fn is_exhaustive(&self) -> bool {
        true
    }
    fn applies(&self, a: &Tensor) -> bool {
        a.dim() == 2
    }
    fn solve(&self, a: &Tensor, opts: &SolveOptions) -> Result<Vec<EigenPair>> {
        eigenpairs_n2(a, opts.tol)
    }
}

pub struct MultiStartSearch;

impl EigenSolver for MultiStartSearch {
    fn name(&self) -> &'static str {
        "search"
    }
    fn description(&self) -> &'static str {
        "seeded multi-start shifted power iteration with Newton polish; finds a subset"
    }
    fn is_exhaustive(&self) -> bool {
        false
    }
    fn applies(&self, _a: &Tensor) -> bool {
        true
    }
    fn solve(&self, a: &Tensor, opts: &SolveOptions) -> Result<Vec<EigenPair>> {
        Ok(eigen_search(a, opts.restarts, opts.seed, opts.tol))
    }
}

pub struct SolverRegistry {
    entries: Vec<Box<dyn EigenSolver>>,
}

impl SolverRegistry {
    pub fn empty() -> Self {
        SolverRegistry { entries: Vec::new() }
    }

    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(PairEnumeration));
        r.register(Box::new(MultiStartSearch));
        r
    }

    /// Adds a solver; a later registration under the same name replaces it.
    pub fn register(&mut self, s: Box<dyn EigenSolver>) {
        self.entries.retain(|e| e.name() != s.name());
        self.entries.push(s);
    }

    pub fn get(&self, name: &str) -> Option<&dyn EigenSolver> {
        self.entries.iter().find(|e| e.name() == name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    /// The first registered solver that applies, exhaustive ones first.
    pub fn select(&self, a: &Tensor) -> Option<&dyn EigenSolver> {
        let applicable = || self.entries.iter().map(|b| b.as_ref()).filter(|s| s.applies(a));
        applicable().find(|s| s.is_exhaustive()).or_else(|| applicable().next())
    }
}

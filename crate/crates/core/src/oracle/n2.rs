use super::{canonicalize, residual, sort_dedup, EigenPair, DEDUP_LAMBDA};
use crate::error::{Error, Result};
use crate::poly;
use crate::tensor::{contract_unchecked, Tensor};

/// Relative size under which the chart polynomial counts as identically zero.
const DEGENERATE: f64 = 1e-14;

/// Critical points this close to a zero of the chart polynomial are tried as
/// roots of even multiplicity.
const TOUCH: f64 = 1e-12;

/// Coefficients in `t` of `(A (1,t)^(m-1))_i` for both rows.
///
/// Entry `a_{i i2..im}` contributes to the power of `t` equal to the number
/// of second coordinates among `i2..im`, which is the popcount of its
/// position in the row.
fn chart_rows(a: &Tensor) -> [Vec<f64>; 2] {
    let k = a.order() - 1;
    let mut rows = [vec![0.0; k + 1], vec![0.0; k + 1]];
    for (i, coeffs) in rows.iter_mut().enumerate() {
        for (pos, &v) in a.row(i).iter().enumerate() {
            coeffs[pos.count_ones() as usize] += v;
        }
    }
    rows
}

/// `(A x^(m-1))_2 - t^(m-1) (A x^(m-1))_1` at `x = (1, t)`.
fn chart_polynomial(first: &[f64], second: &[f64]) -> Vec<f64> {
    let k = first.len() - 1;
    let mut g = vec![0.0; 2 * k + 1];
    g[..=k].copy_from_slice(second);
    for (d, &c) in first.iter().enumerate() {
        g[d + k] -= c;
    }
    g
}

/// Eigenvalue belonging to the direction `x`, read off the larger component.
fn eigenvalue_at(a: &Tensor, x: &[f64]) -> f64 {
    let ax = contract_unchecked(a, x);
    let p = (a.order() - 1) as i32;
    let j = if x[0].abs() >= x[1].abs() { 0 } else { 1 };
    ax[j] / x[j].powi(p)
}

/// Every H-eigenpair of a dimension 2 tensor with residual at most `tol`.
///
/// Directions `(1, t)` are eigenvectors exactly when `t` is a root of the
/// chart polynomial; the direction `(0, 1)` is one when `a_{12..2} = 0`. If
/// the chart polynomial vanishes identically every direction is an
/// eigenvector and a fixed set of representatives is returned.
pub fn eigenpairs_n2(a: &Tensor, tol: f64) -> Result<Vec<EigenPair>> {
    if a.dim() != 2 {
        return Err(Error::precondition(format!(
            "the n2 oracle needs dimension 2, got {}",
            a.dim()
        )));
    }
    let [first, second] = chart_rows(a);
    let g = chart_polynomial(&first, &second);
    let scale = a.entries().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let g_size = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    let mut directions: Vec<Vec<f64>> = Vec::new();
    if g_size <= DEGENERATE * scale {
        directions.extend([vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0], vec![1.0, -1.0]]);
    } else {
        for t in poly::real_roots(&g, TOUCH) {
            directions.push(vec![1.0, t]);
        }
    }
    let k = a.order() - 1;
    if first[k] == 0.0 {
        directions.push(vec![0.0, 1.0]);
    }

    let mut pairs = Vec::with_capacity(directions.len());
    for x in directions {
        let Some(x) = canonicalize(&x) else { continue };
        let lambda = eigenvalue_at(a, &x);
        if !lambda.is_finite() {
            continue;
        }
        let r = residual(a, lambda, &x)?;
        if r <= tol {
            pairs.push(EigenPair { lambda, x, residual: r });
        }
    }
    Ok(sort_dedup(pairs, DEDUP_LAMBDA, DEDUP_LAMBDA))
}

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{canonicalize, residual, sort_dedup, EigenPair, DEDUP_LAMBDA};
use crate::tensor::{contract_unchecked, Tensor};

const POWER_CAP: usize = 10_000;
/// Power iterations without a 1% residual improvement before giving up.
const STALL_WINDOW: usize = 200;
/// Accepted steps in a row before the shift is relaxed.
const RELAX_STREAK: usize = 8;
const NEWTON_CAP: usize = 60;
const DEDUP_X: f64 = 1e-7;

fn signed_pow(v: f64, p: i32) -> f64 {
    v.powi(p)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn normalized(mut v: Vec<f64>) -> Option<Vec<f64>> {
    let s = max_abs(&v);
    if !(s > 0.0 && s.is_finite()) {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= s);
    Some(v)
}

/// Least-squares eigenvalue for direction `x` and the max-norm misfit.
fn rayleigh(a: &Tensor, x: &[f64], ax: &[f64]) -> (f64, f64) {
    let p = (a.order() - 1) as i32;
    let w: Vec<f64> = x.iter().map(|&v| signed_pow(v, p)).collect();
    let ww: f64 = w.iter().map(|v| v * v).sum();
    let lambda = if ww > 0.0 { ax.iter().zip(&w).map(|(u, v)| u * v).sum::<f64>() / ww } else { 0.0 };
    let misfit = ax.iter().zip(&w).fold(0.0f64, |m, (u, v)| m.max((u - lambda * v).abs()));
    (lambda, misfit)
}

/// Shifted fixed-point iteration `x <- root(sigma A x^(m-1) + alpha x^[m-1])`.
///
/// With `sigma = 1` it climbs toward large eigenvalues, with `-1` toward
/// small ones. A step that lowers `sigma * lambda` is rejected and the shift
/// doubled; after a run of accepted steps the shift is halved again.
fn power_phase(a: &Tensor, start: &[f64], sigma: f64, alpha0: f64) -> Vec<f64> {
    let p = (a.order() - 1) as i32;
    let inv = 1.0 / p as f64;
    let mut x = start.to_vec();
    let mut ax = contract_unchecked(a, &x);
    let (mut lambda, mut misfit) = rayleigh(a, &x, &ax);
    let mut alpha = alpha0;
    let mut streak = 0;
    let mut best = misfit;
    let mut since_best = 0;
    for _ in 0..POWER_CAP {
        if misfit <= 1e-3 * alpha0 {
            break;
        }
        let y: Vec<f64> = ax
            .iter()
            .zip(&x)
            .map(|(u, v)| {
                let s = sigma * u + alpha * signed_pow(*v, p);
                s.signum() * s.abs().powf(inv)
            })
            .collect();
        let Some(next) = normalized(y) else { break };
        let next_ax = contract_unchecked(a, &next);
        let (next_lambda, next_misfit) = rayleigh(a, &next, &next_ax);
        if sigma * next_lambda < sigma * lambda - 1e-12 * alpha0 {
            alpha *= 2.0;
            streak = 0;
            if alpha > 1e8 * alpha0 {
                break;
            }
            continue;
        }
        streak += 1;
        if streak >= RELAX_STREAK {
            alpha = (alpha / 2.0).max(alpha0 / 64.0);
            streak = 0;
        }
        let step = x.iter().zip(&next).fold(0.0f64, |m, (u, v)| m.max((u - v).abs()));
        x = next;
        ax = next_ax;
        lambda = next_lambda;
        misfit = next_misfit;
        if step <= 1e-15 {
            break;
        }
        if misfit < 0.99 * best {
            best = misfit;
            since_best = 0;
        } else {
            since_best += 1;
            if since_best > STALL_WINDOW {
                break;
            }
        }
    }
    x
}

/// Derivative of `A x^(m-1)` with respect to `x`.
fn contract_jacobian(a: &Tensor, x: &[f64]) -> DMatrix<f64> {
    let n = a.dim();
    let k = a.order() - 1;
    let mut jac = DMatrix::zeros(n, n);
    let mut digits = vec![0usize; k];
    let mut prefix = vec![1.0; k + 1];
    for i in 0..n {
        for (pos, &v) in a.row(i).iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            let mut rest = pos;
            for d in digits.iter_mut().rev() {
                *d = rest % n;
                rest /= n;
            }
            for q in 0..k {
                prefix[q + 1] = prefix[q] * x[digits[q]];
            }
            let mut suffix = 1.0;
            for q in (0..k).rev() {
                jac[(i, digits[q])] += v * prefix[q] * suffix;
                suffix *= x[digits[q]];
            }
        }
    }
    jac
}

/// `A x^(m-1) - lambda x^[m-1]` stacked with the normalization `c.x - 1`.
fn newton_system(a: &Tensor, x: &[f64], lambda: f64, c: &[f64]) -> Vec<f64> {
    let p = (a.order() - 1) as i32;
    let mut f: Vec<f64> = contract_unchecked(a, x)
        .iter()
        .zip(x)
        .map(|(u, v)| u - lambda * signed_pow(*v, p))
        .collect();
    f.push(c.iter().zip(x).map(|(u, v)| u * v).sum::<f64>() - 1.0);
    f
}

/// Damped Newton on `(x, lambda)` with `x` pinned to the hyperplane through
/// the start orthogonal to it.
fn newton(a: &Tensor, start: &[f64]) -> Option<(f64, Vec<f64>)> {
    let n = a.dim();
    let p = (a.order() - 1) as i32;
    let mut x = normalized(start.to_vec())?;
    let xx: f64 = x.iter().map(|v| v * v).sum();
    let c: Vec<f64> = x.iter().map(|v| v / xx).collect();
    let (mut lambda, _) = rayleigh(a, &x, &contract_unchecked(a, &x));
    let mut f = newton_system(a, &x, lambda, &c);
    for _ in 0..NEWTON_CAP {
        let fnorm = max_abs(&f);
        if fnorm == 0.0 {
            break;
        }
        let mut jac = DMatrix::zeros(n + 1, n + 1);
        jac.view_mut((0, 0), (n, n)).copy_from(&contract_jacobian(a, &x));
        for i in 0..n {
            jac[(i, i)] -= lambda * p as f64 * x[i].powi(p - 1);
            jac[(i, n)] = -signed_pow(x[i], p);
            jac[(n, i)] = c[i];
        }
        let rhs = DVector::from_iterator(n + 1, f.iter().map(|v| -v));
        let Some(step) = jac.lu().solve(&rhs) else { break };
        if step.iter().any(|v| !v.is_finite()) {
            break;
        }
        let mut t = 1.0;
        let mut accepted = false;
        while t >= 1e-10 {
            let cand: Vec<f64> = x.iter().zip(step.iter()).map(|(v, d)| v + t * d).collect();
            let cand_lambda = lambda + t * step[n];
            let cand_f = newton_system(a, &cand, cand_lambda, &c);
            if max_abs(&cand_f) < fnorm {
                x = cand;
                lambda = cand_lambda;
                f = cand_f;
                accepted = true;
                break;
            }
            t /= 2.0;
        }
        if !accepted {
            break;
        }
    }
    Some((lambda, x))
}

/// Multi-start search for H-eigenpairs with residual at most `tol`.
///
/// Each of the `restarts` seeded random starts runs the shifted power
/// iteration (alternating toward large and small eigenvalues) followed by
/// Newton polish; Newton is also run from the raw start. Only pairs that
/// pass [`residual`] are kept, deduplicated and sorted by `(lambda, x)`.
/// The result is a subset of the H-spectrum; nothing is claimed about
/// completeness.
pub fn eigen_search(a: &Tensor, restarts: usize, seed: u64, tol: f64) -> Vec<EigenPair> {
    let n = a.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let row_bound = (0..n)
        .map(|i| a.row(i).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let alpha0 = if row_bound > 0.0 { row_bound } else { 1.0 };
    let mut pairs = Vec::new();
    for r in 0..restarts {
        let start: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let Some(start) = normalized(start) else { continue };
        let sigma = if r % 2 == 0 { 1.0 } else { -1.0 };
        let powered = power_phase(a, &start, sigma, alpha0);
        for seed_x in [powered, start] {
            let Some((lambda, x)) = newton(a, &seed_x) else { continue };
            let Some(x) = canonicalize(&x) else { continue };
            if !lambda.is_finite() {
                continue;
            }
            if let Ok(res) = residual(a, lambda, &x) {
                if res <= tol {
                    pairs.push(EigenPair { lambda, x, residual: res });
                }
            }
        }
    }
    sort_dedup(pairs, DEDUP_LAMBDA, DEDUP_X)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{laplacian_tensor, Hypergraph};

    fn lambdas(pairs: &[EigenPair]) -> Vec<f64> {
        let mut l: Vec<f64> = pairs.iter().map(|p| p.lambda).collect();
        l.dedup_by(|b, a| (*b - *a).abs() < 1e-7);
        l
    }

    #[test]
    fn jacobian_matches_differences() {
        let a = crate::tensor::tests::t43();
        let x = [0.3, -0.7, 0.5];
        let jac = contract_jacobian(&a, &x);
        let h = 1e-6;
        for j in 0..3 {
            let mut up = x;
            let mut down = x;
            up[j] += h;
            down[j] -= h;
            let fu = contract_unchecked(&a, &up);
            let fd = contract_unchecked(&a, &down);
            for i in 0..3 {
                let fd_ij = (fu[i] - fd[i]) / (2.0 * h);
                assert!((jac[(i, j)] - fd_ij).abs() <= 1e-5 * (1.0 + fd_ij.abs()), "{i} {j}");
            }
        }
    }

    #[test]
    fn all_ones_extremes() {
        let got = eigen_search(&Tensor::all_ones(4, 3).unwrap(), 64, 0, 1e-8);
        let l = lambdas(&got);
        assert!(l.iter().any(|v| (v - 27.0).abs() < 1e-9), "{l:?}");
        assert!(l.iter().any(|v| v.abs() < 1e-9), "{l:?}");
        assert!(got.iter().all(|p| p.residual <= 1e-8));
        let top = got.iter().find(|p| (p.lambda - 27.0).abs() < 1e-9).unwrap();
        assert!(top.x.iter().all(|v| (v - 1.0).abs() < 1e-9));
    }

    #[test]
    fn identity_has_one_eigenvalue() {
        let got = eigen_search(&Tensor::identity(4, 3).unwrap(), 64, 0, 1e-8);
        assert!(!got.is_empty());
        assert!(got.iter().all(|p| (p.lambda - 1.0).abs() < 1e-12));
    }

    #[test]
    fn single_edge_laplacian_in_bounds() {
        let g = Hypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        let got = eigen_search(&laplacian_tensor(&g).unwrap(), 64, 0, 1e-8);
        assert!(!got.is_empty());
        for p in &got {
            assert!(p.lambda >= -1e-9 && p.lambda <= 2.0 + 1e-9, "{}", p.lambda);
        }
    }

    #[test]
    fn deterministic_and_seed_sensitive_starts() {
        let a = crate::tensor::tests::t43();
        let one = eigen_search(&a, 16, 7, 1e-8);
        let two = eigen_search(&a, 16, 7, 1e-8);
        assert_eq!(one, two);
    }

    #[test]
    fn no_restarts_no_pairs() {
        assert!(eigen_search(&Tensor::identity(3, 2).unwrap(), 0, 0, 1e-8).is_empty());
    }

    #[test]
    fn zero_tensor() {
        let got = eigen_search(&Tensor::zeros(3, 3).unwrap(), 4, 1, 1e-8);
        assert!(!got.is_empty());
        assert!(got.iter().all(|p| p.lambda == 0.0));
    }

    #[test]
    fn matrix_case_finds_both() {
        let a = Tensor::from_dense(2, 3, vec![2.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 5.0]).unwrap();
        let l = lambdas(&eigen_search(&a, 32, 3, 1e-10));
        assert_eq!(l.len(), 3, "{l:?}");
        for (got, want) in l.iter().zip([1.0, 3.0, 5.0]) {
            assert!((got - want).abs() < 1e-10);
        }
    }
}

//! Real univariate polynomials with coefficients in ascending degree order,
//! and real root isolation.

/// Coefficients below this fraction of the largest one are treated as zero
/// when computing a numerical GCD.
pub const GCD_CUTOFF: f64 = 1e-12;

/// Bisection stops once the bracket is this narrow (relative to `max(1, |t|)`).
pub const BISECT_WIDTH: f64 = 1e-13;

/// Relative distance under which a touching root candidate is taken to be
/// the same root as one already found.
pub const MERGE_WIDTH: f64 = 1e-6;

/// Drops trailing exact zeros so the last coefficient is the leading one.
pub fn trim(p: &[f64]) -> Vec<f64> {
    let len = p.iter().rposition(|&c| c != 0.0).map_or(0, |k| k + 1);
    p[..len].to_vec()
}

/// Degree of `p`, `None` for the zero polynomial.
pub fn degree(p: &[f64]) -> Option<usize> {
    p.iter().rposition(|&c| c != 0.0)
}

/// Horner evaluation.
pub fn eval(p: &[f64], t: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

pub fn derivative(p: &[f64]) -> Vec<f64> {
    p.iter().enumerate().skip(1).map(|(k, &c)| k as f64 * c).collect()
}

/// Quotient and remainder of `p / d`. Panics if `d` is zero.
pub fn div_rem(p: &[f64], d: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let d = trim(d);
    let dd = d.len().checked_sub(1).expect("division by the zero polynomial");
    let mut r = trim(p);
    if r.len() <= dd {
        return (Vec::new(), r);
    }
    let lead = d[dd];
    let mut q = vec![0.0; r.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd] / lead;
        q[k] = c;
        for (j, &dj) in d.iter().enumerate() {
            r[k + j] -= c * dj;
        }
        r[k + dd] = 0.0;
    }
    r.truncate(dd);
    (q, trim(&r))
}

fn max_abs(p: &[f64]) -> f64 {
    p.iter().fold(0.0, |m, c| m.max(c.abs()))
}

/// Scales to unit max-norm and zeroes coefficients below `cutoff`.
fn normalize(p: &[f64], cutoff: f64) -> Vec<f64> {
    let s = max_abs(p);
    if s == 0.0 {
        return Vec::new();
    }
    trim(&p.iter().map(|&c| if c.abs() <= cutoff * s { 0.0 } else { c / s }).collect::<Vec<_>>())
}

/// Euclid's algorithm with small remainders rounded to zero. The result is
/// scaled to unit max-norm; the GCD with the zero polynomial is the other one.
pub fn gcd(p: &[f64], q: &[f64], cutoff: f64) -> Vec<f64> {
    let mut a = normalize(p, cutoff);
    let mut b = normalize(q, cutoff);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let (_, r) = div_rem(&a, &b);
        a = b;
        // a and b have unit max-norm, so the cutoff is relative to them
        b = if max_abs(&r) <= cutoff { Vec::new() } else { normalize(&r, cutoff) };
    }
    a
}

/// `p` divided by `gcd(p, p')`: the same roots, each simple.
pub fn square_free(p: &[f64]) -> Vec<f64> {
    let p = trim(p);
    if p.len() <= 2 {
        return p;
    }
    let g = gcd(&p, &derivative(&p), GCD_CUTOFF);
    if g.len() <= 1 {
        return p;
    }
    div_rem(&p, &g).0
}

/// Every real root has modulus below this.
pub fn cauchy_bound(p: &[f64]) -> f64 {
    let p = trim(p);
    match p.split_last() {
        Some((lead, rest)) if !rest.is_empty() => {
            1.0 + rest.iter().fold(0.0f64, |m, c| m.max((c / lead).abs()))
        }
        _ => 0.0,
    }
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Bisection on a sign-changing bracket, finished with a few Newton steps
/// that are kept only while they stay in the bracket and shrink `|p|`.
fn bisect(p: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let s_lo = sign(eval(p, lo));
    loop {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= BISECT_WIDTH * mid.abs().max(1.0) || mid <= lo || mid >= hi {
            return polish(p, mid, lo, hi);
        }
        let s = sign(eval(p, mid));
        if s == 0 {
            return mid;
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

fn polish(p: &[f64], mut t: f64, lo: f64, hi: f64) -> f64 {
    let dp = derivative(p);
    let mut val = eval(p, t).abs();
    for _ in 0..3 {
        let slope = eval(&dp, t);
        if val == 0.0 || slope == 0.0 {
            break;
        }
        let next = t - eval(p, t) / slope;
        let next_val = eval(p, next).abs();
        if !(lo <= next && next <= hi && next_val < val) {
            break;
        }
        t = next;
        val = next_val;
    }
    t
}

/// Roots where `p` changes sign, plus exact zeros, found by splitting the
/// real line at the critical points (roots of `p'`, found recursively) so
/// `p` is monotone on every piece.
///
/// Returns the sign-change roots and the critical points separately; a root
/// of even multiplicity shows up only among the latter.
fn isolate(p: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let p = trim(p);
    match p.len() {
        0 | 1 => return (Vec::new(), Vec::new()),
        2 => return (vec![-p[0] / p[1]], Vec::new()),
        _ => {}
    }
    let (crit, _) = isolate(&derivative(&p));
    let bound = cauchy_bound(&p);
    let mut breaks = Vec::with_capacity(crit.len() + 2);
    breaks.push(-bound);
    breaks.extend(crit.iter().copied().filter(|c| c.abs() < bound));
    breaks.push(bound);
    let mut roots = Vec::new();
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (eval(&p, a), eval(&p, b));
        if fa == 0.0 {
            roots.push(a);
        } else if sign(fa) * sign(fb) < 0 {
            roots.push(bisect(&p, a, b));
        }
    }
    if eval(&p, bound) == 0.0 {
        roots.push(bound);
    }
    (roots, crit)
}

/// Candidate real roots of `p`, sorted ascending.
///
/// Every sign-change root of `p`, together with those roots of its
/// square-free part and those critical points of `p` where `|p|` is within
/// `touch_tol` of zero relative to the coefficient scale. Those extra
/// candidates are dropped when within [`MERGE_WIDTH`] of another root. The
/// zero polynomial has no isolated roots and returns an empty list.
pub fn real_roots(p: &[f64], touch_tol: f64) -> Vec<f64> {
    let p = trim(p);
    if p.len() <= 1 {
        return Vec::new();
    }
    let (mut roots, crit) = isolate(&p);
    let scale = max_abs(&p);
    let near_zero = |t: f64| {
        let mag = p.iter().rev().fold(0.0, |acc, &k| acc * t.abs() + k.abs());
        eval(&p, t).abs() <= touch_tol * mag.max(scale)
    };
    let residual = |t: f64| eval(&p, t).abs();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|b, a| (*b - *a).abs() <= BISECT_WIDTH * a.abs().max(1.0));
    let bracketed = roots.len();
    // near a multiple root many points evaluate to rounding noise; one
    // representative per cluster is enough
    for t in isolate(&square_free(&p)).0.into_iter().chain(crit) {
        if !near_zero(t) {
            continue;
        }
        let near = |r: &f64| (r - t).abs() <= MERGE_WIDTH * t.abs().max(1.0);
        if roots[..bracketed].iter().any(near) {
            continue;
        }
        match roots[bracketed..].iter().position(near) {
            Some(k) if residual(t) < residual(roots[bracketed + k]) => roots[bracketed + k] = t,
            Some(_) => {}
            None => roots.push(t),
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
}

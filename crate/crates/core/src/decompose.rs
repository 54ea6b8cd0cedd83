//! Splittings `A = B + C` of B-tensors and doubly B-tensors into a
//! Z-tensor part `B` and a nonnegative row-constant part `C`.
//!
//! Both constructions go through `A+`: `B = A+ - eps I` and `C` carries
//! `r+_i` on every entry of row `i`, plus `eps` on the diagonal. `C` is built
//! with that shape exactly and `B` is obtained as `A - C`; every result is
//! re-checked against the class predicates before it is returned.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::classes::{self, TensorClass};
use crate::error::{Error, Result};
use crate::tensor::{row_stats, RowStats, Tensor};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompositionKind {
    B,
    DoublyB,
}

impl DecompositionKind {
    pub fn name(self) -> &'static str {
        match self {
            DecompositionKind::B => "B",
            DecompositionKind::DoublyB => "doublyB",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub kind: DecompositionKind,
    pub part_b: Tensor,
    pub part_c: Tensor,
    pub epsilon: f64,
    /// `c_i = r+_i(A)`, the off-diagonal value of row `i` of `C`.
    pub row_constants: Vec<f64>,
}

/// Largest accepted `|fl(b + c) - a|`, in units of `2^-52 * max(|a|, |b|, |c|)`.
///
/// `B = fl(A - C)` carries one rounding, and re-adding carries another; the
/// sum is bitwise equal to `A` whenever the subtraction is exact, which
/// includes all dyadic inputs of moderate size.
pub const ROUNDTRIP_ULPS: f64 = 2.0;

impl Decomposition {
    /// Largest entrywise `|fl(b + c) - a|`.
    pub fn roundtrip_error(&self, a: &Tensor) -> f64 {
        self.part_b
            .entries()
            .iter()
            .zip(self.part_c.entries())
            .zip(a.entries())
            .map(|((b, c), a)| (b + c - a).abs())
            .fold(0.0, f64::max)
    }

    /// `B + C` reproduces `A` bit for bit.
    pub fn is_exact_roundtrip(&self, a: &Tensor) -> bool {
        self.part_b
            .entries()
            .iter()
            .zip(self.part_c.entries())
            .zip(a.entries())
            .all(|((b, c), a)| (b + c).to_bits() == a.to_bits() || (b + c == 0.0 && *a == 0.0))
    }

    /// Checks every structural and class invariant against the source tensor.
    pub fn verify(&self, a: &Tensor) -> Result<()> {
        let fail = |msg: String| Err(Error::Internal(msg));
        let (m, n) = (a.order(), a.dim());
        for part in [&self.part_b, &self.part_c] {
            if part.order() != m || part.dim() != n {
                return fail("decomposition parts have the wrong shape".into());
            }
        }
        if !(self.epsilon > 0.0) {
            return fail(format!("epsilon {} is not positive", self.epsilon));
        }
        for ((b, c), a) in self.part_b.entries().iter().zip(self.part_c.entries()).zip(a.entries())
        {
            let bound = ROUNDTRIP_ULPS * f64::EPSILON * a.abs().max(b.abs()).max(c.abs());
            if (b + c - a).abs() > bound {
                return fail(format!("B + C differs from A: {b} + {c} vs {a}"));
            }
        }
        if self.row_constants.len() != n || self.row_constants.iter().any(|c| !(*c >= 0.0)) {
            return fail("row constants must be n nonnegative reals".into());
        }
        // C = c_i off the diagonal, fl(c_i + eps) on it
        for i in 0..n {
            let ci = self.row_constants[i];
            let dpos = self.part_c.diag_pos_in_row(i);
            for (k, &v) in self.part_c.row(i).iter().enumerate() {
                let want = if k == dpos { ci + self.epsilon } else { ci };
                if v != want {
                    return fail(format!("C row {} is not row-constant plus eps", i + 1));
                }
            }
        }
        if self.part_c.entries().iter().any(|&v| v < 0.0) {
            return fail("C has a negative entry".into());
        }
        if let Some(w) = classes::violation(&self.part_b, TensorClass::Z) {
            return fail(format!("B is not a Z-tensor ({w})"));
        }
        let class = match self.kind {
            DecompositionKind::B => TensorClass::B,
            DecompositionKind::DoublyB => TensorClass::DoublyB,
        };
        if let Some(w) = classes::violation(&self.part_b, class) {
            return fail(format!("B is not {class} ({w})"));
        }
        if let Some(w) = classes::violation(&self.part_c, class) {
            return fail(format!("C is not {class} ({w})"));
        }
        Ok(())
    }
}

impl Serialize for Decomposition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(5))?;
        map.serialize_entry("kind", self.kind.name())?;
        map.serialize_entry("epsilon", &self.epsilon)?;
        map.serialize_entry("row_constants", &self.row_constants)?;
        map.serialize_entry("B", &self.part_b)?;
        map.serialize_entry("C", &self.part_c)?;
        map.end()
    }
}

fn require(a: &Tensor, class: TensorClass) -> Result<Vec<RowStats>> {
    if let Some(witness) = classes::violation(a, class) {
        return Err(Error::ClassViolation { class, witness });
    }
    Ok(row_stats(a))
}

fn assemble(
    a: &Tensor,
    kind: DecompositionKind,
    stats: &[RowStats],
    epsilon: f64,
) -> Result<Decomposition> {
    if !(epsilon > 0.0) {
        return Err(Error::DegenerateMargin { epsilon });
    }
    let row_constants: Vec<f64> = stats.iter().map(|s| s.r_plus).collect();
    let mut part_c = a.map_rows(|i, row| row.fill(row_constants[i]));
    for (i, &c) in row_constants.iter().enumerate() {
        part_c.set(&vec![i; a.order()], c + epsilon)?;
    }
    let part_b = a.sub(&part_c)?;
    let d = Decomposition { kind, part_b, part_c, epsilon, row_constants };
    d.verify(a)?;
    Ok(d)
}

/// Splits a B-tensor as `B = A+ - eps I`, `C = A - B`, with `eps` half of
/// the smallest strict-dominance slack of `A+`.
pub fn decompose_b(a: &Tensor) -> Result<Decomposition> {
    let stats = require(a, TensorClass::B)?;
    let slack = stats
        .iter()
        .map(|s| s.plus_gap() - s.plus_deficit)
        .fold(f64::INFINITY, f64::min);
    assemble(a, DecompositionKind::B, &stats, slack / 2.0)
}

/// Builds the split for a caller-chosen `eps` and verifies it. Any `eps` in
/// `(0, e]`, where `e` is the value picked by [`decompose_b`] or
/// [`decompose_doubly_b`], gives a valid split.
pub fn decompose_with_epsilon(
    a: &Tensor,
    kind: DecompositionKind,
    epsilon: f64,
) -> Result<Decomposition> {
    let class = match kind {
        DecompositionKind::B => TensorClass::B,
        DecompositionKind::DoublyB => TensorClass::DoublyB,
    };
    let stats = require(a, class)?;
    assemble(a, kind, &stats, epsilon)
}

/// Smaller root in `delta` of `(d_i - delta)(d_j - delta) = s_i s_j`.
///
/// Written as `2 (d_i d_j - s_i s_j) / ((d_i + d_j) + sqrt((d_i - d_j)^2 + 4 s_i s_j))`
/// to avoid cancellation. Equals `min(d_i, d_j)` when `s_i s_j = 0`.
pub fn pair_shift_limit(d_i: f64, d_j: f64, s_i: f64, s_j: f64) -> f64 {
    let p = s_i * s_j;
    let disc = (d_i - d_j).powi(2) + 4.0 * p;
    2.0 * (d_i * d_j - p) / ((d_i + d_j) + disc.sqrt())
}

/// Splits a doubly B-tensor as `B = A+ - eps I`, `C = A - B`, where `eps` is
/// half of `min(delta*, min_i (a_ii - r+_i))` and `delta*` is the smallest
/// pairwise shift keeping `A+` strictly doubly diagonally dominated.
pub fn decompose_doubly_b(a: &Tensor) -> Result<Decomposition> {
    let stats = require(a, TensorClass::DoublyB)?;
    let gap: Vec<f64> = stats.iter().map(RowStats::plus_gap).collect();
    let def: Vec<f64> = stats.iter().map(|s| s.plus_deficit).collect();
    let mut limit = gap.iter().copied().fold(f64::INFINITY, f64::min);
    for i in 0..gap.len() {
        for j in i + 1..gap.len() {
            limit = limit.min(pair_shift_limit(gap[i], gap[j], def[i], def[j]));
        }
    }
    assemble(a, DecompositionKind::DoublyB, &stats, limit / 2.0)
}

/// A decomposition strategy selectable by name.
pub trait Decomposer: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    /// Whether this strategy accepts `a`.
    fn applies(&self, a: &Tensor) -> bool;
    fn decompose(&self, a: &Tensor) -> Result<Decomposition>;
}

pub struct BSplit;

impl Decomposer for BSplit {
    fn name(&self) -> &'static str {
        "b"
    }
    fn description(&self) -> &'static str {
        "Z-tensor B-tensor plus nonnegative B-tensor"
    }
    fn applies(&self, a: &Tensor) -> bool {
        classes::is_b(a)
    }
    fn decompose(&self, a: &Tensor) -> Result<Decomposition> {
        decompose_b(a)
    }
}

pub struct DoublyBSplit;

impl Decomposer for DoublyBSplit {
    fn name(&self) -> &'static str {
        "doubly-b"
    }
    fn description(&self) -> &'static str {
        "Z-tensor doubly B-tensor plus row-constant nonnegative doubly B-tensor"
    }
    fn applies(&self, a: &Tensor) -> bool {
        classes::is_doubly_b(a)
    }
    fn decompose(&self, a: &Tensor) -> Result<Decomposition> {
        decompose_doubly_b(a)
    }
}

pub struct DecomposerRegistry {
    entries: Vec<Box<dyn Decomposer>>,
}

impl DecomposerRegistry {
    pub fn empty() -> Self {
        DecomposerRegistry { entries: Vec::new() }
    }

    /// `b` first, so automatic selection prefers the stronger class.
    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(BSplit));
        r.register(Box::new(DoublyBSplit));
        r
    }

    /// Adds a strategy; a later registration under the same name replaces it.
    pub fn register(&mut self, d: Box<dyn Decomposer>) {
        self.entries.retain(|e| e.name() != d.name());
        self.entries.push(d);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Decomposer> {
        self.entries.iter().find(|e| e.name() == name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    /// First registered strategy whose class contains `a`.
    pub fn select(&self, a: &Tensor) -> Option<&dyn Decomposer> {
        self.entries.iter().find(|e| e.applies(a)).map(|b| b.as_ref())
    }
}

//! Membership predicates for the structured tensor classes and the two
//! row transforms (`A+` and `F`) that move between them.
//!
//! Every strict inequality is evaluated exactly on the stored floats. The
//! B and doubly-B tests use the margin form `(a_ii - r+_i) > sum(r+_i - a)`,
//! which performs the same floating-point operations as the dominance tests
//! on `A+`; pairwise product inequalities are compared exactly with
//! fused multiply-add error terms. Together this keeps the equivalences
//! between the classes intact on floats, not only in exact arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::tensor::{row_stats, RowStats, Tensor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TensorClass {
    Z,
    B,
    B0,
    DoublyB,
    Sdd,
    Sddd,
    /// `F(A)` is a B-tensor.
    FB,
    /// `F(A)` is a doubly B-tensor.
    FDoublyB,
}

impl TensorClass {
    pub const ALL: [TensorClass; 8] = [
        TensorClass::Z,
        TensorClass::B,
        TensorClass::B0,
        TensorClass::DoublyB,
        TensorClass::Sdd,
        TensorClass::Sddd,
        TensorClass::FB,
        TensorClass::FDoublyB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TensorClass::Z => "Z",
            TensorClass::B => "B",
            TensorClass::B0 => "B0",
            TensorClass::DoublyB => "doublyB",
            TensorClass::Sdd => "SDD",
            TensorClass::Sddd => "SDDD",
            TensorClass::FB => "F_B",
            TensorClass::FDoublyB => "F_doublyB",
        }
    }
}

impl fmt::Display for TensorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where a class inequality fails, and by how much.
///
/// `lhs > rhs` (or `lhs >= rhs` for the non-strict classes) is the
/// inequality that does not hold; `margin = lhs - rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub location: Location,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Row(usize),
    Pair(usize, usize),
    /// An off-diagonal entry, by 0-based multi-index.
    Entry(Vec<usize>),
}

impl Witness {
    fn row(i: usize, lhs: f64, rhs: f64) -> Self {
        Witness { location: Location::Row(i), lhs, rhs }
    }

    fn pair(i: usize, j: usize, lhs: f64, rhs: f64) -> Self {
        Witness { location: Location::Pair(i, j), lhs, rhs }
    }

    pub fn margin(&self) -> f64 {
        self.lhs - self.rhs
    }

    /// The failing row, or the first row of a failing pair.
    pub fn first_row(&self) -> usize {
        match &self.location {
            Location::Row(i) | Location::Pair(i, _) => *i,
            Location::Entry(ix) => ix[0],
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.location {
            Location::Row(i) => write!(f, "row {}", i + 1)?,
            Location::Pair(i, j) => write!(f, "rows ({}, {})", i + 1, j + 1)?,
            Location::Entry(ix) => {
                let one: Vec<String> = ix.iter().map(|k| (k + 1).to_string()).collect();
                write!(f, "entry ({})", one.join(","))?
            }
        }
        write!(f, ": lhs {} vs rhs {}", self.lhs, self.rhs)
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        match &self.location {
            Location::Row(i) => map.serialize_entry("row", &(i + 1))?,
            Location::Pair(i, j) => map.serialize_entry("pair", &[i + 1, j + 1])?,
            Location::Entry(ix) => {
                map.serialize_entry("row", &(ix[0] + 1))?;
                let one: Vec<usize> = ix.iter().map(|k| k + 1).collect();
                map.serialize_entry("idx", &one)?;
            }
        }
        map.serialize_entry("lhs", &self.lhs)?;
        map.serialize_entry("rhs", &self.rhs)?;
        map.serialize_entry("margin", &self.margin())?;
        map.end()
    }
}

/// Exact test of `a * b > c * d` for finite inputs whose products do not
/// overflow.
///
/// `fl` is monotone, so distinct rounded products already order the exact
/// products; on a tie the exact rounding errors decide.
pub fn product_exceeds(a: f64, b: f64, c: f64, d: f64) -> bool {
    let p = a * b;
    let q = c * d;
    if p != q {
        return p > q;
    }
    let ep = a.mul_add(b, -p);
    let eq = c.mul_add(d, -q);
    ep > eq
}

type Check = Result<(), Witness>;

fn row_check(stats: &[RowStats], strict: bool, f: impl Fn(&RowStats) -> (f64, f64)) -> Check {
    for (i, s) in stats.iter().enumerate() {
        let (lhs, rhs) = f(s);
        let ok = if strict { lhs > rhs } else { lhs >= rhs };
        if !ok {
            return Err(Witness::row(i, lhs, rhs));
        }
    }
    Ok(())
}

/// `gap_i * gap_j > def_i * def_j` for every pair `i < j`; the relation is
/// symmetric in `(i, j)` so unordered pairs cover all ordered ones.
fn pair_check(gap: &[f64], def: &[f64]) -> Check {
    for i in 0..gap.len() {
        for j in i + 1..gap.len() {
            if !product_exceeds(gap[i], gap[j], def[i], def[j]) {
                return Err(Witness::pair(i, j, gap[i] * gap[j], def[i] * def[j]));
            }
        }
    }
    Ok(())
}

fn z_check(a: &Tensor) -> Check {
    let n = a.dim();
    let m = a.order();
    for i in 0..n {
        let dpos = a.diag_pos_in_row(i);
        for (k, &v) in a.row(i).iter().enumerate() {
            if k != dpos && v > 0.0 {
                let mut ix = vec![0; m];
                ix[0] = i;
                let mut rest = k;
                for slot in ix[1..].iter_mut().rev() {
                    *slot = rest % n;
                    rest /= n;
                }
                return Err(Witness { location: Location::Entry(ix), lhs: v, rhs: 0.0 });
            }
        }
    }
    Ok(())
}

fn b_check(stats: &[RowStats]) -> Check {
    row_check(stats, true, |s| (s.plus_gap(), s.plus_deficit))
}

fn b0_check(stats: &[RowStats]) -> Check {
    row_check(stats, false, |s| (s.plus_gap(), s.plus_deficit))
}

fn doubly_b_check(stats: &[RowStats]) -> Check {
    row_check(stats, true, |s| (s.diag, s.r_plus))?;
    let gap: Vec<f64> = stats.iter().map(RowStats::plus_gap).collect();
    let def: Vec<f64> = stats.iter().map(|s| s.plus_deficit).collect();
    pair_check(&gap, &def)
}

fn sdd_check(stats: &[RowStats]) -> Check {
    row_check(stats, true, |s| (s.diag, s.off_diag_abs_sum))
}

fn sddd_check(stats: &[RowStats]) -> Check {
    row_check(stats, true, |s| (s.diag, 0.0))?;
    let diag: Vec<f64> = stats.iter().map(|s| s.diag).collect();
    let abs: Vec<f64> = stats.iter().map(|s| s.off_diag_abs_sum).collect();
    pair_check(&diag, &abs)
}

/// `|a_ii - r_i|` and the sum of `|r_i - a|` over the off-diagonal entries,
/// with `r_i` chosen by the sign of the diagonal.
fn signed_margins(a: &Tensor, stats: &[RowStats]) -> (Vec<f64>, Vec<f64>) {
    let mut gaps = Vec::with_capacity(stats.len());
    let mut defs = Vec::with_capacity(stats.len());
    for (i, s) in stats.iter().enumerate() {
        let dpos = a.diag_pos_in_row(i);
        let r = s.r_signed;
        let def = a
            .row(i)
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != dpos)
            .fold(0.0, |acc, (_, &v)| acc + (r - v).abs());
        gaps.push((s.diag - r).abs());
        defs.push(def);
    }
    (gaps, defs)
}

fn f_b_check(a: &Tensor, stats: &[RowStats]) -> Check {
    row_check(stats, true, |s| (s.diag.abs(), s.r_signed.abs()))?;
    let (gaps, defs) = signed_margins(a, stats);
    for i in 0..gaps.len() {
        if !(gaps[i] > defs[i]) {
            return Err(Witness::row(i, gaps[i], defs[i]));
        }
    }
    Ok(())
}

fn f_doubly_b_check(a: &Tensor, stats: &[RowStats]) -> Check {
    row_check(stats, true, |s| (s.diag.abs(), s.r_signed.abs()))?;
    let (gaps, defs) = signed_margins(a, stats);
    pair_check(&gaps, &defs)
}

/// All off-diagonal entries are non-positive.
pub fn is_z(a: &Tensor) -> bool {
    z_check(a).is_ok()
}

/// Row sum exceeds `n^(m-1) r+_i` for every row, tested in margin form.
pub fn is_b(a: &Tensor) -> bool {
    b_check(&row_stats(a)).is_ok()
}

/// Non-strict relaxation of [`is_b`].
pub fn is_b0(a: &Tensor) -> bool {
    b0_check(&row_stats(a)).is_ok()
}

/// `a_ii > r+_i` for all rows and, for every pair of rows,
/// `(a_ii - r+_i)(a_jj - r+_j) > sum_i(r+_i - a) * sum_j(r+_j - a)`.
pub fn is_doubly_b(a: &Tensor) -> bool {
    doubly_b_check(&row_stats(a)).is_ok()
}

pub fn is_sdd(a: &Tensor) -> bool {
    sdd_check(&row_stats(a)).is_ok()
}

pub fn is_sddd(a: &Tensor) -> bool {
    sddd_check(&row_stats(a)).is_ok()
}

/// `A+`: subtract `r+_i` from every entry of row `i`. Always a Z-tensor.
pub fn a_plus(a: &Tensor) -> Tensor {
    let stats = row_stats(a);
    a.map_rows(|i, row| {
        let r = stats[i].r_plus;
        row.iter_mut().for_each(|v| *v -= r);
    })
}

/// `F(A)`: scale row tensor `A_k` by the sign of `a_{k..k}`.
pub fn f_transform(a: &Tensor) -> Tensor {
    let n = a.dim();
    let signs: Vec<f64> = (0..n)
        .map(|i| {
            let d = a.diag(i);
            if d > 0.0 {
                1.0
            } else if d < 0.0 {
                -1.0
            } else {
                0.0
            }
        })
        .collect();
    a.map_rows(|i, row| {
        let s = signs[i];
        // 0 * v would keep -0.0 around; zero rows are plain zeros
        row.iter_mut().for_each(|v| *v = if s == 0.0 { 0.0 } else { s * *v });
    })
}

/// Whether `F(A)` is a B-tensor, decided from `r_i` directly:
/// `|a_ii| > |r_i|` and `|a_ii - r_i| > sum |r_i - a|` for every row.
pub fn check_f_b(a: &Tensor) -> bool {
    f_b_check(a, &row_stats(a)).is_ok()
}

/// Whether `F(A)` is a doubly B-tensor, decided from `r_i` directly.
pub fn check_f_doubly_b(a: &Tensor) -> bool {
    f_doubly_b_check(a, &row_stats(a)).is_ok()
}

/// Returns the witness for a single class, `None` when `a` is a member.
pub fn violation(a: &Tensor, class: TensorClass) -> Option<Witness> {
    let stats = row_stats(a);
    check_with(a, &stats, class).err()
}

fn check_with(a: &Tensor, stats: &[RowStats], class: TensorClass) -> Check {
    match class {
        TensorClass::Z => z_check(a),
        TensorClass::B => b_check(stats),
        TensorClass::B0 => b0_check(stats),
        TensorClass::DoublyB => doubly_b_check(stats),
        TensorClass::Sdd => sdd_check(stats),
        TensorClass::Sddd => sddd_check(stats),
        TensorClass::FB => f_b_check(a, stats),
        TensorClass::FDoublyB => f_doubly_b_check(a, stats),
    }
}

/// Membership flags for every class, with a witness for each failed class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassReport {
    pub flags: BTreeMap<TensorClass, bool>,
    pub witnesses: BTreeMap<TensorClass, Witness>,
}

impl ClassReport {
    pub fn flag(&self, class: TensorClass) -> bool {
        self.flags[&class]
    }

    /// Checks the implications that must hold between the flags.
    pub fn is_consistent(&self) -> bool {
        use TensorClass::*;
        let f = |c| self.flag(c);
        let implies = |p: bool, q: bool| !p || q;
        implies(f(B), f(DoublyB))
            && implies(f(B), f(B0))
            && implies(f(Sdd), f(Sddd))
            && (f(Z) && f(B)) == (f(Z) && f(Sdd))
            && (f(Z) && f(DoublyB)) == (f(Z) && f(Sddd))
            && TensorClass::ALL.iter().all(|c| self.flags[c] != self.witnesses.contains_key(c))
    }
}

impl Serialize for ClassReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let flags: Vec<(&str, bool)> = self.flags.iter().map(|(c, v)| (c.name(), *v)).collect();
        let witnesses: Vec<(&str, &Witness)> =
            self.witnesses.iter().map(|(c, w)| (c.name(), w)).collect();
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("flags", &Ordered(&flags))?;
        map.serialize_entry("witnesses", &Ordered(&witnesses))?;
        map.end()
    }
}

struct Ordered<'a, V>(&'a [(&'a str, V)]);

impl<V: Serialize> Serialize for Ordered<'_, V> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// Runs every predicate once on shared row statistics.
pub fn classify(a: &Tensor) -> ClassReport {
    let stats = row_stats(a);
    let mut flags = BTreeMap::new();
    let mut witnesses = BTreeMap::new();
    for class in TensorClass::ALL {
        match check_with(a, &stats, class) {
            Ok(()) => {
                flags.insert(class, true);
            }
            Err(w) => {
                flags.insert(class, false);
                witnesses.insert(class, w);
            }
        }
    }
    ClassReport { flags, witnesses }
}

//! JSON file formats and the number formatting used for every report.
//!
//! Tensor files carry `order`, `dim` and exactly one of `dense` (all `n^m`
//! entries, row-major) or `sparse` (`{"idx": [...], "val": x}` items with
//! 1-based indices; absent entries are zero).

use std::collections::HashSet;
use std::io;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::ser::Formatter;

use crate::error::{Error, Result};
use crate::tensor::{entry_count, Tensor, DEFAULT_ENTRY_CAP};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorFile {
    order: usize,
    dim: usize,
    dense: Option<Vec<f64>>,
    sparse: Option<Vec<SparseEntry>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SparseEntry {
    idx: Vec<usize>,
    val: f64,
}

impl Serialize for Tensor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("order", &self.order())?;
        map.serialize_entry("dim", &self.dim())?;
        map.serialize_entry("dense", self.entries())?;
        map.end()
    }
}

impl TensorFile {
    fn into_tensor(self, cap: usize) -> Result<Tensor> {
        let TensorFile { order, dim, dense, sparse } = self;
        match (dense, sparse) {
            (Some(entries), None) => Tensor::from_dense_with_cap(order, dim, entries, cap),
            (None, Some(items)) => {
                let len = entry_count(order, dim, cap)?;
                let mut entries = vec![0.0; len];
                let mut seen = HashSet::with_capacity(items.len());
                for item in items {
                    if item.idx.len() != order {
                        return Err(Error::input(format!(
                            "sparse index {:?} has {} components, expected {order}",
                            item.idx,
                            item.idx.len()
                        )));
                    }
                    let mut off = 0usize;
                    for &k in &item.idx {
                        if k == 0 || k > dim {
                            return Err(Error::input(format!(
                                "sparse index {:?} out of range 1..={dim}",
                                item.idx
                            )));
                        }
                        off = off * dim + (k - 1);
                    }
                    if !seen.insert(off) {
                        return Err(Error::input(format!("duplicate sparse index {:?}", item.idx)));
                    }
                    entries[off] = item.val;
                }
                Tensor::from_dense_with_cap(order, dim, entries, cap)
            }
            (Some(_), Some(_)) => Err(Error::input("tensor has both `dense` and `sparse`")),
            (None, None) => Err(Error::input("tensor needs one of `dense` or `sparse`")),
        }
    }
}

/// Parses the tensor JSON format with the default entry cap.
pub fn tensor_from_str(s: &str) -> Result<Tensor> {
    tensor_from_str_with_cap(s, DEFAULT_ENTRY_CAP)
}

pub fn tensor_from_str_with_cap(s: &str, cap: usize) -> Result<Tensor> {
    let file: TensorFile = serde_json::from_str(s)?;
    file.into_tensor(cap)
}

/// Writes floats like C's `%.17g`: 17 significant digits, trailing zeros
/// dropped, so integers print without a fraction and every `f64` round-trips.
#[derive(Debug, Clone, Copy, Default)]
pub struct G17Formatter;

impl Formatter for G17Formatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_g17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        writer.write_all(format_g17(f64::from(value)).as_bytes())
    }
}

/// `%.17g` formatting of a finite float.
pub fn format_g17(v: f64) -> String {
    const PREC: i32 = 17;
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    // {:.16e} rounds to 17 significant digits and tells us the exponent
    let sci = format!("{:.*e}", (PREC - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("exponent digits");
    if !(-4..PREC).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (PREC - 1 - exp) as usize;
        strip_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Compact JSON with `%.17g` numbers.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, G17Formatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

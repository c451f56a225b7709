//! Density records and their JSON / CSV encodings.
//!
//! Big integers (`N`, `size`) are written as decimal strings. Reals are
//! rounded to 6 significant digits so that output is byte-stable.

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::green::c_empirical;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Green,
    Behrend,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::Green => "green",
            Construction::Behrend => "behrend",
        })
    }
}

/// One row of a density table.
///
/// For the Behrend baseline `q` is the base `2D - 1` and `d` the dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub construction: Construction,
    pub q: u64,
    pub d: u32,
    pub n: BigUint,
    pub r: u64,
    pub size: BigUint,
    pub density: f64,
    pub c_emp: f64,
}

impl DensityReport {
    pub fn new(
        construction: Construction,
        q: u64,
        d: u32,
        n: BigUint,
        r: u64,
        size: BigUint,
    ) -> Result<Self> {
        let c_emp = c_empirical(&size, &n)?;
        let density = (log2(&size) - 2.0 * log2(&n)).exp2();
        Ok(DensityReport {
            construction,
            q,
            d,
            n,
            r,
            size,
            density,
            c_emp,
        })
    }

    fn record(&self) -> Record {
        Record {
            construction: self.construction,
            q: self.q,
            d: self.d,
            n: self.n.to_string(),
            r: self.r,
            size: self.size.to_string(),
            density: Sig6(self.density),
            c_emp: Sig6(self.c_emp),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.record()).expect("report serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.record()).expect("report serializes")
    }
}

#[derive(Serialize)]
struct Record {
    construction: Construction,
    q: u64,
    d: u32,
    #[serde(rename = "N")]
    n: String,
    r: u64,
    size: String,
    density: Sig6,
    c_emp: Sig6,
}

/// Writes reports as CSV with a header row.
pub fn reports_to_csv<'a, I>(reports: I) -> String
where
    I: IntoIterator<Item = &'a DensityReport>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut any = false;
    for rep in reports {
        w.serialize(rep.record()).expect("in-memory csv write");
        any = true;
    }
    if !any {
        w.write_record(["construction", "q", "d", "N", "r", "size", "density", "c_emp"])
            .expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("csv is utf-8")
}

/// An `f64` serialized after rounding to 6 significant digits.
#[derive(Debug, Clone, Copy)]
pub struct Sig6(pub f64);

impl Sig6 {
    pub fn rounded(self) -> f64 {
        round_sig6(self.0)
    }
}

impl Serialize for Sig6 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.rounded())
    }
}

pub fn round_sig6(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.5e}").parse().expect("formatted float parses")
}

/// `log2` of an arbitrary-precision integer; relative error near `f64`
/// epsilon. Returns `-inf` for zero.
pub fn log2(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().expect("fits") as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("64 bits");
    (top as f64).log2() + shift as f64
}

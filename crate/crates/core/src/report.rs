//! Evidence records produced by the checks, and their text / CSV / JSON
//! renderings.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::arith::{vp, Rational, Valuation};

/// One congruence check: `lhs ≡ rhs (mod p^required_valuation)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceReport {
    pub check_id: String,
    pub p: u64,
    pub m: Option<u32>,
    pub r: Option<u32>,
    pub lhs: Rational,
    pub rhs: Rational,
    pub required_valuation: u32,
    pub achieved_valuation: Valuation,
    pub pass: bool,
    /// Rows outside a check's proven prime range. They carry data only and
    /// never count as failures.
    pub informational: bool,
}

impl CongruenceReport {
    pub fn new(
        check_id: impl Into<String>,
        p: u64,
        lhs: Rational,
        rhs: Rational,
        required: u32,
    ) -> Self {
        let achieved_valuation = vp(&(&lhs - &rhs), p);
        Self {
            check_id: check_id.into(),
            p,
            m: None,
            r: None,
            lhs,
            rhs,
            required_valuation: required,
            achieved_valuation,
            pass: achieved_valuation.at_least(required as i64),
            informational: false,
        }
    }

    pub fn with_m(mut self, m: u32) -> Self {
        self.m = Some(m);
        self
    }

    pub fn with_r(mut self, r: u32) -> Self {
        self.r = Some(r);
        self
    }

    pub fn into_informational(mut self) -> Self {
        self.informational = true;
        self
    }

    /// A failing row is a genuine shortfall; informational rows never fail.
    pub fn is_failure(&self) -> bool {
        !self.informational && !self.pass
    }
}

/// An exact identity check (no modulus): `lhs == rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityRecord {
    pub check_id: String,
    pub p: Option<u64>,
    pub m: Option<u32>,
    pub n: Option<u64>,
    pub k: Option<u64>,
    pub lhs: Rational,
    pub rhs: Rational,
    pub pass: bool,
}

impl IdentityRecord {
    pub fn new(check_id: impl Into<String>, lhs: Rational, rhs: Rational) -> Self {
        let pass = lhs == rhs;
        Self {
            check_id: check_id.into(),
            p: None,
            m: None,
            n: None,
            k: None,
            lhs,
            rhs,
            pass,
        }
    }
}

/// One prime's contribution to a discovered constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    pub p: u64,
    pub residue: BigInt,
    pub modulus: BigInt,
}

/// Integer constant reconstructed from per-prime residues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscoveryResult {
    /// `"c"` or `"d"`.
    pub family: String,
    pub m: u32,
    pub r: u32,
    /// CRT lift of every residue in `evidence`.
    pub constant: BigInt,
    pub evidence: Vec<Evidence>,
    /// Every residue is predicted by the lift of the remaining ones.
    pub consistent: bool,
    /// Half and full truncations gave the same residue at every prime
    /// (`None` when only one variant was run).
    pub variants_agree: Option<bool>,
    /// Primes whose residue contradicts a constant that every other prime
    /// agrees on.
    pub outliers: Vec<u64>,
    /// That constant, when exactly such a set of outliers exists.
    pub constant_without_outliers: Option<BigInt>,
}

/// Closed forms `f_m(n)`, `g_m(n)` next to the sums they equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub m: u32,
    pub n: u64,
    pub f: Rational,
    pub g: Rational,
    pub f_sum: Rational,
    pub g_sum: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Record {
    Congruence(CongruenceReport),
    Identity(IdentityRecord),
    Discovery(DiscoveryResult),
    Table(TableRow),
}

impl Record {
    pub fn is_failure(&self) -> bool {
        match self {
            Record::Congruence(r) => r.is_failure(),
            Record::Identity(r) => !r.pass,
            Record::Discovery(d) => !d.consistent || d.variants_agree == Some(false),
            Record::Table(t) => t.f != t.f_sum || t.g != t.g_sum,
        }
    }

    /// Deterministic emission order: check id, then prime, then weight.
    pub fn sort_key(&self) -> (String, u64, u32, u64) {
        match self {
            Record::Congruence(r) => (
                r.check_id.clone(),
                r.p,
                r.m.unwrap_or(0),
                r.r.unwrap_or(0) as u64,
            ),
            Record::Identity(r) => (
                r.check_id.clone(),
                r.p.unwrap_or(0),
                r.m.unwrap_or(0),
                r.n.unwrap_or(0) << 32 | r.k.unwrap_or(0),
            ),
            Record::Discovery(d) => (format!("discover_{}", d.family), 0, d.m, d.r as u64),
            Record::Table(t) => ("table".into(), 0, t.m, t.n),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

pub const CSV_HEADER: &str = "check_id,p,m,r,lhs,rhs,required_valuation,achieved_valuation,pass";

fn valuation_json(v: Valuation) -> Value {
    match v {
        Valuation::Finite(v) => json!(v),
        Valuation::Infinite => json!("inf"),
    }
}

fn opt<T: Into<Value>>(obj: &mut Map<String, Value>, key: &str, v: Option<T>) {
    if let Some(v) = v {
        obj.insert(key.into(), v.into());
    }
}

impl Record {
    pub fn to_json(&self) -> Value {
        let mut o = Map::new();
        match self {
            Record::Congruence(r) => {
                o.insert("check_id".into(), json!(r.check_id));
                o.insert("p".into(), json!(r.p));
                opt(&mut o, "m", r.m);
                opt(&mut o, "r", r.r);
                o.insert("lhs".into(), json!(r.lhs.to_string()));
                o.insert("rhs".into(), json!(r.rhs.to_string()));
                o.insert("required_valuation".into(), json!(r.required_valuation));
                o.insert(
                    "achieved_valuation".into(),
                    valuation_json(r.achieved_valuation),
                );
                if r.informational {
                    o.insert("pass".into(), Value::Null);
                    o.insert("informational".into(), json!(true));
                } else {
                    o.insert("pass".into(), json!(r.pass));
                }
            }
            Record::Identity(r) => {
                o.insert("check_id".into(), json!(r.check_id));
                opt(&mut o, "p", r.p);
                opt(&mut o, "m", r.m);
                opt(&mut o, "n", r.n);
                opt(&mut o, "k", r.k);
                o.insert("lhs".into(), json!(r.lhs.to_string()));
                o.insert("rhs".into(), json!(r.rhs.to_string()));
                o.insert("pass".into(), json!(r.pass));
            }
            Record::Discovery(d) => {
                o.insert("check_id".into(), json!(format!("discover_{}", d.family)));
                o.insert("family".into(), json!(d.family));
                o.insert("m".into(), json!(d.m));
                o.insert("r".into(), json!(d.r));
                o.insert("constant".into(), json!(d.constant.to_string()));
                o.insert("consistent".into(), json!(d.consistent));
                o.insert("variants_agree".into(), json!(d.variants_agree));
                o.insert("outliers".into(), json!(d.outliers));
                o.insert(
                    "constant_without_outliers".into(),
                    json!(d.constant_without_outliers.as_ref().map(|c| c.to_string())),
                );
                let ev: Vec<Value> = d
                    .evidence
                    .iter()
                    .map(|e| json!({"p": e.p, "residue": e.residue.to_string(), "modulus": e.modulus.to_string()}))
                    .collect();
                o.insert("evidence".into(), Value::Array(ev));
            }
            Record::Table(t) => {
                o.insert("check_id".into(), json!("table"));
                o.insert("m".into(), json!(t.m));
                o.insert("n".into(), json!(t.n));
                o.insert("f".into(), json!(t.f.to_string()));
                o.insert("g".into(), json!(t.g.to_string()));
                o.insert("f_sum".into(), json!(t.f_sum.to_string()));
                o.insert("g_sum".into(), json!(t.g_sum.to_string()));
                o.insert("pass".into(), json!(!self.is_failure()));
            }
        }
        Value::Object(o)
    }

    /// Row in the fixed CSV column order. Columns that do not apply are
    /// empty; informational rows have an empty `pass`.
    pub fn to_csv_row(&self) -> String {
        let s = |v: Option<String>| v.unwrap_or_default();
        let cols: [String; 9] = match self {
            Record::Congruence(r) => [
                r.check_id.clone(),
                r.p.to_string(),
                s(r.m.map(|m| m.to_string())),
                s(r.r.map(|m| m.to_string())),
                r.lhs.to_string(),
                r.rhs.to_string(),
                r.required_valuation.to_string(),
                r.achieved_valuation.to_string(),
                if r.informational {
                    String::new()
                } else {
                    r.pass.to_string()
                },
            ],
            Record::Identity(r) => [
                r.check_id.clone(),
                s(r.p.map(|p| p.to_string())),
                s(r.m.map(|m| m.to_string())),
                String::new(),
                r.lhs.to_string(),
                r.rhs.to_string(),
                String::new(),
                String::new(),
                r.pass.to_string(),
            ],
            Record::Discovery(d) => [
                format!("discover_{}", d.family),
                String::new(),
                d.m.to_string(),
                d.r.to_string(),
                d.constant.to_string(),
                s(d.constant_without_outliers.as_ref().map(|c| c.to_string())),
                String::new(),
                String::new(),
                (!self.is_failure()).to_string(),
            ],
            Record::Table(t) => [
                "table".into(),
                String::new(),
                t.m.to_string(),
                String::new(),
                t.f_sum.to_string(),
                t.f.to_string(),
                String::new(),
                String::new(),
                (!self.is_failure()).to_string(),
            ],
        };
        cols.join(",")
    }

    fn text_cells(&self) -> Vec<String> {
        match self {
            Record::Congruence(r) => vec![
                r.check_id.clone(),
                format!("p={}", r.p),
                r.m.map(|m| format!("m={m}")).unwrap_or_default(),
                r.r.map(|m| format!("r={m}")).unwrap_or_default(),
                format!("v={}", r.achieved_valuation),
                format!("need={}", r.required_valuation),
                if r.informational {
                    "INFO".into()
                } else if r.pass {
                    "PASS".into()
                } else {
                    "FAIL".into()
                },
            ],
            Record::Identity(r) => vec![
                r.check_id.clone(),
                r.p.map(|p| format!("p={p}")).unwrap_or_default(),
                r.m.map(|m| format!("m={m}")).unwrap_or_default(),
                r.n.map(|n| format!("n={n}")).unwrap_or_default(),
                r.k.map(|k| format!("k={k}")).unwrap_or_default(),
                format!("lhs={}", r.lhs),
                if r.pass { "PASS".into() } else { "FAIL".into() },
            ],
            Record::Discovery(d) => vec![
                format!("discover_{}", d.family),
                format!("m={}", d.m),
                format!("r={}", d.r),
                format!("constant={}", d.constant),
                format!("primes={}", d.evidence.len()),
                if d.outliers.is_empty() {
                    String::new()
                } else {
                    format!(
                        "outliers={:?} constant_without_outliers={}",
                        d.outliers,
                        d.constant_without_outliers
                            .as_ref()
                            .map(|c| c.to_string())
                            .unwrap_or("-".into())
                    )
                },
                if self.is_failure() {
                    "INCONSISTENT".into()
                } else {
                    "CONSISTENT".into()
                },
            ],
            Record::Table(t) => vec![
                format!("m={}", t.m),
                format!("n={}", t.n),
                format!("f={}", t.f),
                format!("g={}", t.g),
                if self.is_failure() {
                    "FAIL".into()
                } else {
                    "PASS".into()
                },
            ],
        }
    }
}

/// Renders records in the requested format. Text output aligns columns
/// across the whole batch.
pub fn serialize_records(records: &[Record], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Json => {
            for r in records {
                out.push_str(&r.to_json().to_string());
                out.push('\n');
            }
        }
        Format::Csv => {
            out.push_str(CSV_HEADER);
            out.push('\n');
            for r in records {
                out.push_str(&r.to_csv_row());
                out.push('\n');
            }
        }
        Format::Text => {
            let rows: Vec<Vec<String>> = records.iter().map(Record::text_cells).collect();
            let ncol = rows.iter().map(Vec::len).max().unwrap_or(0);
            let widths: Vec<usize> = (0..ncol)
                .map(|c| {
                    rows.iter()
                        .filter_map(|r| r.get(c))
                        .map(|s| s.chars().count())
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            for row in rows {
                let line: Vec<String> = row
                    .iter()
                    .enumerate()
                    .map(|(i, cell)| format!("{cell:<w$}", w = widths[i]))
                    .collect();
                let _ = writeln!(out, "{}", line.join("  ").trim_end());
            }
        }
    }
    out
}

pub fn serialize_report(report: &CongruenceReport, format: Format) -> String {
    serialize_records(&[Record::Congruence(report.clone())], format)
}

//! Tables, reports and their CSV/JSON serialization.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    Float(Vec<f64>),
    Flag(Vec<bool>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub data: ColumnData,
}

impl Column {
    pub fn float(name: &str, v: Vec<f64>) -> Self {
        Self { name: name.into(), data: ColumnData::Float(v) }
    }

    pub fn flag(name: &str, v: Vec<bool>) -> Self {
        Self { name: name.into(), data: ColumnData::Flag(v) }
    }

    fn len(&self) -> usize {
        match &self.data {
            ColumnData::Float(v) => v.len(),
            ColumnData::Flag(v) => v.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<Column>,
}

impl Table {
    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Column::len)
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn floats(&self, name: &str) -> Option<&[f64]> {
        match &self.column(name)?.data {
            ColumnData::Float(v) => Some(v),
            ColumnData::Flag(_) => None,
        }
    }
}

/// Section → key → value.
pub type Reports = BTreeMap<String, BTreeMap<String, Value>>;

/// `digits` significant digits, fixed notation for moderate exponents.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mant, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-5..digits as i32).contains(&exp) {
        let rounded: f64 = sci.parse().unwrap();
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{rounded:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mant.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn round_sig(v: f64, digits: usize) -> f64 {
    if v.is_finite() && v != 0.0 {
        format!("{:.*e}", digits - 1, v).parse().unwrap()
    } else {
        v
    }
}

fn round_value(v: &Value, digits: usize) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => json!(round_sig(n.as_f64().unwrap(), digits)),
        Value::Array(a) => Value::Array(a.iter().map(|x| round_value(x, digits)).collect()),
        Value::Object(o) => Value::Object(o.iter().map(|(k, x)| (k.clone(), round_value(x, digits))).collect()),
        other => other.clone(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn table_csv(t: &Table, digits: usize) -> String {
    let mut out = String::new();
    let header: Vec<String> = t.columns.iter().map(|c| csv_field(&c.name)).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for i in 0..t.rows() {
        for (j, c) in t.columns.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            match &c.data {
                ColumnData::Float(v) => out.push_str(&fmt_sig(v[i], digits)),
                ColumnData::Flag(v) => out.push(if v[i] { '1' } else { '0' }),
            }
        }
        out.push('\n');
    }
    out
}

pub fn reports_csv(r: &Reports, digits: usize) -> String {
    let mut out = String::from("section,key,value\n");
    for (section, kv) in r {
        for (k, v) in kv {
            let val = match v {
                Value::Number(n) if n.is_f64() => fmt_sig(n.as_f64().unwrap(), digits),
                Value::String(s) => s.clone(),
                Value::Null => String::new(),
                other => round_value(other, digits).to_string(),
            };
            let _ = writeln!(out, "{},{},{}", csv_field(section), csv_field(k), csv_field(&val));
        }
    }
    out
}

pub fn table_json(t: &Table, digits: usize) -> Value {
    let names: Vec<&str> = t.columns.iter().map(|c| c.name.as_str()).collect();
    let rows: Vec<Value> = (0..t.rows())
        .map(|i| {
            Value::Array(
                t.columns
                    .iter()
                    .map(|c| match &c.data {
                        ColumnData::Float(v) => json!(round_sig(v[i], digits)),
                        ColumnData::Flag(v) => json!(v[i]),
                    })
                    .collect(),
            )
        })
        .collect();
    json!({ "name": "main", "columns": names, "rows": rows })
}

pub fn reports_json(r: &Reports, digits: usize) -> Value {
    let mut m = Map::new();
    for (section, kv) in r {
        let inner: Map<String, Value> = kv.iter().map(|(k, v)| (k.clone(), round_value(v, digits))).collect();
        m.insert(section.clone(), Value::Object(inner));
    }
    Value::Object(m)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

//! Locale-independent number formatting and the table row type.

use std::fmt::Write as _;

use pspin_core::{GseValue, LiftingLevel, SpinSet};
use serde::{Deserialize, Serialize};

/// Significant digits kept in every numeric field.
pub const SIG_DIGITS: usize = 10;

/// Rounds to [`SIG_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Shortest text that parses back to `round_sig(x)`. Plain decimal in
/// `[1e-6, 1e15)`, exponent form outside.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_sig(x);
    if r == 0.0 {
        return "0".into();
    }
    let a = r.abs();
    if (1e-6..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

pub(crate) fn serialize_sig<S: serde::Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*x))
}

/// One `(p, level)` row of a GSE table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub p: u32,
    pub set: SpinSet,
    pub level: LiftingLevel,
    #[serde(serialize_with = "serialize_sig")]
    pub xi: f64,
    #[serde(serialize_with = "serialize_sig")]
    pub u_gs: f64,
    #[serde(serialize_with = "serialize_sig")]
    pub c3_hat: f64,
    pub exact: bool,
}

impl ReportRow {
    pub const CSV_HEADER: &'static str = "p,set,level,xi,u_gs,c3_hat,exact";

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        write!(
            s,
            "{},{},{},{},{},{},{}",
            self.p,
            self.set,
            self.level.as_str(),
            fmt_num(self.xi),
            fmt_num(self.u_gs),
            fmt_num(self.c3_hat),
            self.exact
        )
        .expect("writing to a String");
        s
    }

    pub fn from_csv(line: &str) -> Result<Self, String> {
        let f: Vec<&str> = line.trim_end().split(',').collect();
        if f.len() != 7 {
            return Err(format!("expected 7 fields, got {}", f.len()));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| format!("bad number `{s}`: {e}"))
        };
        let level = match f[2] {
            "first" => LiftingLevel::First,
            "second" => LiftingLevel::Second,
            other => return Err(format!("bad level `{other}`")),
        };
        Ok(Self {
            p: f[0].parse().map_err(|e| format!("bad p `{}`: {e}", f[0]))?,
            set: f[1].parse()?,
            level,
            xi: num(f[3])?,
            u_gs: num(f[4])?,
            c3_hat: num(f[5])?,
            exact: f[6]
                .parse()
                .map_err(|e| format!("bad flag `{}`: {e}", f[6]))?,
        })
    }
}

impl From<GseValue> for ReportRow {
    fn from(g: GseValue) -> Self {
        Self {
            p: g.p,
            set: g.set,
            level: g.level,
            xi: g.xi_multipartite,
            u_gs: g.u_gs,
            c3_hat: g.c3_hat,
            exact: g.exact,
        }
    }
}

use std::fmt;
use std::str::FromStr;

use serde_json::Value;

use super::FieldCtx;
use crate::error::{Error, Result};

/// How the modulus of one tower level is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Modulus {
    /// First irreducible monic polynomial of this degree in counting order.
    Auto(usize),
    /// Explicit ascending coefficients (packed ground-field indices).
    Coeffs(Vec<u32>),
}

impl Modulus {
    pub fn degree(&self) -> usize {
        match self {
            Modulus::Auto(d) => *d,
            Modulus::Coeffs(c) => c.len().saturating_sub(1),
        }
    }
}

/// Textual description of a tower, e.g. `p=3;base=[0,1];ext=[[1],[0],[1]]`,
/// `p=2;m=2;n=3` or `p=3;m=2;n=3;conway`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    pub base: Modulus,
    pub ext: Modulus,
    pub conway: bool,
}

impl FieldSpec {
    pub fn build(&self) -> Result<FieldCtx> {
        self.build_with_limit(super::MAX_FIELD_ORDER)
    }

    pub fn build_with_limit(&self, limit: u64) -> Result<FieldCtx> {
        if self.conway {
            return super::conway::conway_tower(
                self.p,
                self.base.degree(),
                self.ext.degree(),
                limit,
            );
        }
        FieldCtx::with_limit(self.p, self.base.clone(), self.ext.clone(), limit)
    }
}

fn parse_json(key: &str, v: &str) -> Result<Value> {
    serde_json::from_str(v).map_err(|e| Error::Parse(format!("{key}: {e}")))
}

fn as_u32(v: &Value) -> Result<u32> {
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| Error::Parse(format!("expected a small non-negative integer, got {v}")))
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<FieldSpec> {
        let mut p = None;
        let mut base = None;
        let mut ext = None;
        let mut m = None;
        let mut n = None;
        let mut conway = false;
        for tok in s.split(';').map(str::trim).filter(|t| !t.is_empty()) {
            let (key, val) = match tok.split_once('=') {
                Some((k, v)) => (k.trim(), Some(v.trim())),
                None => (tok, None),
            };
            match (key, val) {
                ("p", Some(v)) => {
                    p = Some(v.parse::<u64>().map_err(|e| Error::Parse(format!("p: {e}")))?)
                }
                ("m", Some(v)) => {
                    m = Some(v.parse::<usize>().map_err(|e| Error::Parse(format!("m: {e}")))?)
                }
                ("n", Some(v)) => {
                    n = Some(v.parse::<usize>().map_err(|e| Error::Parse(format!("n: {e}")))?)
                }
                ("base", Some("auto")) | ("auto", None) => {}
                ("base", Some(v)) => {
                    let arr = parse_json("base", v)?;
                    let arr = arr.as_array().ok_or_else(|| Error::Parse("base: expected a list".into()))?;
                    base = Some(arr.iter().map(as_u32).collect::<Result<Vec<_>>>()?);
                }
                ("ext", Some(v)) => ext = Some(parse_json("ext", v)?),
                ("conway", None) => conway = true,
                _ => return Err(Error::Parse(format!("unrecognised field component '{tok}'"))),
            }
        }
        let p = p.ok_or_else(|| Error::Parse("missing p=<prime>".into()))?;
        let base = match (base, m) {
            (Some(c), Some(m)) if c.len() != m + 1 => {
                return Err(Error::Parse(format!("base has degree {} but m={m}", c.len() - 1)))
            }
            (Some(c), _) => Modulus::Coeffs(c),
            (None, m) => Modulus::Auto(m.unwrap_or(1)),
        };
        let ext = match (ext, n) {
            (Some(v), n) => {
                let coeffs = parse_ext(p, &v)?;
                if let Some(n) = n {
                    if coeffs.len() != n + 1 {
                        return Err(Error::Parse(format!(
                            "ext has degree {} but n={n}",
                            coeffs.len() - 1
                        )));
                    }
                }
                Modulus::Coeffs(coeffs)
            }
            (None, Some(n)) => Modulus::Auto(n),
            (None, None) => return Err(Error::Parse("missing ext=[...] or n=<degree>".into())),
        };
        if conway && (matches!(base, Modulus::Coeffs(_)) || matches!(ext, Modulus::Coeffs(_))) {
            return Err(Error::Parse("conway takes m= and n=, not explicit moduli".into()));
        }
        Ok(FieldSpec { p, base, ext, conway })
    }
}

/// Extension coefficients are lists of prime-field digits; a bare integer is
/// accepted as an already packed index.
fn parse_ext(p: u64, v: &Value) -> Result<Vec<u32>> {
    let arr = v.as_array().ok_or_else(|| Error::Parse("ext: expected a list".into()))?;
    arr.iter()
        .map(|c| match c {
            Value::Array(digits) => {
                let mut idx = 0u64;
                for d in digits.iter().rev() {
                    let d = as_u32(d)? as u64;
                    if d >= p {
                        return Err(Error::BadCoefficient(d));
                    }
                    idx = idx * p + d;
                }
                u32::try_from(idx).map_err(|_| Error::BadCoefficient(idx))
            }
            other => as_u32(other),
        })
        .collect()
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={}", self.p)?;
        if self.conway {
            return write!(f, ";m={};n={};conway", self.base.degree(), self.ext.degree());
        }
        let m = self.base.degree();
        match &self.base {
            Modulus::Auto(d) => write!(f, ";m={d}")?,
            Modulus::Coeffs(c) => write!(f, ";base={}", list(c.iter().map(|x| x.to_string())))?,
        }
        match &self.ext {
            Modulus::Auto(d) => write!(f, ";n={d}"),
            Modulus::Coeffs(c) => {
                let p = self.p as u32;
                let items = c.iter().map(|&idx| {
                    let mut idx = idx;
                    let digits = (0..m).map(|_| {
                        let d = idx % p;
                        idx /= p;
                        d.to_string()
                    });
                    list(digits)
                });
                write!(f, ";ext={}", list(items))
            }
        }
    }
}

fn list(items: impl Iterator<Item = String>) -> String {
    format!("[{}]", items.collect::<Vec<_>>().join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_roundtrip() {
        let s = "p=3;base=[0,1];ext=[[1],[0],[1]]";
        let spec: FieldSpec = s.parse().unwrap();
        assert_eq!(spec.to_string(), s);
        let ctx = spec.build().unwrap();
        assert_eq!(ctx.spec().to_string(), s);
    }

    #[test]
    fn auto_and_errors() {
        let spec: FieldSpec = "p=2;m=2;n=3".parse().unwrap();
        let ctx = spec.build().unwrap();
        assert_eq!(ctx.order(), 64);
        assert!(matches!("p=2;n=3;bogus".parse::<FieldSpec>(), Err(Error::Parse(_))));
        assert!(matches!("p=2".parse::<FieldSpec>(), Err(Error::Parse(_))));
        assert!(matches!("n=2".parse::<FieldSpec>(), Err(Error::Parse(_))));
    }
}

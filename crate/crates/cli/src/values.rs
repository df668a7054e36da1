//! Numeric flag values: `a,b,c` lists and `lo:hi:n` ranges.

use std::str::FromStr;

use serde::Serialize;

use crate::error::{CliError, Result};

/// Either an explicit list or `n` evenly spaced points on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Values {
    List(Vec<f64>),
    Range { lo: f64, hi: f64, n: usize },
}

impl Values {
    pub fn points(&self) -> Vec<f64> {
        match self {
            Values::List(v) => v.clone(),
            Values::Range { lo, n: 1, .. } => vec![*lo],
            Values::Range { lo, hi, n } => (0..*n)
                .map(|i| lo + (hi - lo) * i as f64 / (*n - 1) as f64)
                .collect(),
        }
    }

    pub fn single(&self, flag: &'static str) -> Result<f64> {
        match self.points().as_slice() {
            [v] => Ok(*v),
            p => Err(CliError::flag(flag, format!("expected one value, got {}", p.len()))),
        }
    }
}

impl FromStr for Values {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("`{t}` is not a finite number"))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [lo, hi, n] => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                let n: usize = n
                    .trim()
                    .parse()
                    .map_err(|_| format!("`{n}` is not a point count"))?;
                if n == 0 || (n > 1 && hi <= lo) {
                    return Err("range lo:hi:n needs n >= 1 and hi > lo".into());
                }
                Ok(Values::Range { lo, hi, n })
            }
            [_] => {
                let v = s.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
                Ok(Values::List(v))
            }
            _ => Err("expected a list a,b,c or a range lo:hi:n".into()),
        }
    }
}

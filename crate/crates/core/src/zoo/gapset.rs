use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A set of non-negative integers with a finite description.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GapSet {
    /// An explicit finite set, kept sorted and deduplicated.
    List(Vec<u64>),
    /// Every non-negative integer.
    AllNonneg,
    /// `{k^n : n >= 1}`.
    Powers(u64),
    /// `{start + step * n : n >= 0}`.
    Arithmetic { start: u64, step: u64 },
}

impl GapSet {
    pub fn list(mut items: Vec<u64>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::InvalidSpec("gap list must not be empty".into()));
        }
        items.sort_unstable();
        items.dedup();
        Ok(Self::List(items))
    }

    pub fn powers(k: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidSpec(format!("powers base must be at least 2, got {k}")));
        }
        Ok(Self::Powers(k))
    }

    pub fn arithmetic(start: u64, step: u64) -> Result<Self> {
        if step == 0 {
            return Err(Error::InvalidSpec("arithmetic step must be positive".into()));
        }
        Ok(Self::Arithmetic { start, step })
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Self::List(_))
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            Self::List(v) => v.binary_search(&n).is_ok(),
            Self::AllNonneg => true,
            Self::Powers(k) => {
                let mut p = *k;
                while p < n {
                    match p.checked_mul(*k) {
                        Some(q) => p = q,
                        None => return false,
                    }
                }
                p == n
            }
            Self::Arithmetic { start, step } => n >= *start && (n - start).is_multiple_of(*step),
        }
    }

    /// Sorted members `<= bound`.
    pub fn enumerate_up_to(&self, bound: u64) -> Vec<u64> {
        match self {
            Self::List(v) => v.iter().copied().take_while(|&x| x <= bound).collect(),
            Self::AllNonneg => (0..=bound).collect(),
            Self::Powers(k) => {
                let mut out = Vec::new();
                let mut p = *k;
                while p <= bound {
                    out.push(p);
                    match p.checked_mul(*k) {
                        Some(q) => p = q,
                        None => break,
                    }
                }
                out
            }
            Self::Arithmetic { start, step } => (0..).map(|i| start + step * i).take_while(|&x| x <= bound).collect(),
        }
    }

    /// Least member `>= n`, if any.
    pub fn next_at_least(&self, n: u64) -> Option<u64> {
        match self {
            Self::List(v) => v.iter().copied().find(|&x| x >= n),
            Self::AllNonneg => Some(n),
            Self::Powers(k) => {
                let mut p = *k;
                while p < n {
                    p = p.checked_mul(*k)?;
                }
                Some(p)
            }
            Self::Arithmetic { start, step } => {
                if n <= *start {
                    Some(*start)
                } else {
                    let i = (n - start).div_ceil(*step);
                    Some(start + step * i)
                }
            }
        }
    }

    pub fn max_finite(&self) -> Option<u64> {
        match self {
            Self::List(v) => v.last().copied(),
            _ => None,
        }
    }

    pub fn min(&self) -> u64 {
        match self {
            Self::List(v) => v[0],
            Self::AllNonneg => 0,
            Self::Powers(k) => *k,
            Self::Arithmetic { start, .. } => *start,
        }
    }

    /// True when every member of `self` is a member of `other`, decided on
    /// members up to `bound`.
    pub fn subset_up_to(&self, other: &GapSet, bound: u64) -> bool {
        self.enumerate_up_to(bound).into_iter().all(|x| other.contains(x))
    }
}

impl fmt::Display for GapSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::List(v) => {
                let items: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "list:{}", items.join(","))
            }
            Self::AllNonneg => f.write_str("all"),
            Self::Powers(k) => write!(f, "powers:{k}"),
            Self::Arithmetic { start, step } => write!(f, "arith:{start}:{step}"),
        }
    }
}

/// Parses `all`, `powers:k`, `arith:a:d` and `list:a,b,c`.
impl FromStr for GapSet {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("bad gap set {text:?}"));
        let num = |s: &str| s.trim().parse::<u64>().map_err(|_| bad());
        let parts: Vec<&str> = text.split(':').collect();
        match parts.as_slice() {
            ["all"] => Ok(Self::AllNonneg),
            ["powers", k] => Self::powers(num(k)?),
            ["arith", a, d] => Self::arithmetic(num(a)?, num(d)?),
            ["list", items] => Self::list(items.split(',').map(num).collect::<Result<_>>()?),
            _ => Err(bad()),
        }
    }
}

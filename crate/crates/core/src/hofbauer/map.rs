use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Scalar};
use crate::word::{Alphabet, Symbol, Word};

/// One monotone piece `x -> slope * x + intercept` on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch<S> {
    pub lo: S,
    pub hi: S,
    pub slope: S,
    pub intercept: S,
}

impl<S: Scalar> Branch<S> {
    pub fn apply(&self, x: &S) -> S {
        self.slope.clone() * x.clone() + self.intercept.clone()
    }

    pub fn inverse(&self, y: &S) -> S {
        (y.clone() - self.intercept.clone()) / self.slope.clone()
    }

    /// Image of the open interval `(a, b)` inside the branch domain.
    pub fn image(&self, a: &S, b: &S) -> (S, S) {
        let (ya, yb) = (self.apply(a), self.apply(b));
        if self.slope.is_positive() {
            (ya, yb)
        } else {
            (yb, ya)
        }
    }

    /// Points of the branch domain mapped into `(a, b)`.
    pub fn preimage(&self, a: &S, b: &S) -> (S, S) {
        let (xa, xb) = (self.inverse(a), self.inverse(b));
        let (lo, hi) = if self.slope.is_positive() { (xa, xb) } else { (xb, xa) };
        (S::max_of(lo, self.lo.clone()), S::min_of(hi, self.hi.clone()))
    }
}

/// Piecewise monotone interval map with affine branches covering `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseMonotoneMap<S> {
    branches: Vec<Branch<S>>,
    label: String,
}

/// Open-interval test that treats near-coincident endpoints as boundary hits.
pub(crate) fn strictly_inside<S: Scalar>(x: &S, lo: &S, hi: &S) -> bool {
    x > lo && x < hi && !x.same(lo) && !x.same(hi)
}

impl<S: Scalar> PiecewiseMonotoneMap<S> {
    pub fn new(branches: Vec<Branch<S>>, label: impl Into<String>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::InvalidSpec("a map needs at least one branch".into()));
        }
        if branches.len() > crate::word::MAX_ALPHABET {
            return Err(Error::InvalidSpec("too many branches".into()));
        }
        let zero = S::zero();
        let one = S::one();
        if !branches[0].lo.same(&zero) || !branches[branches.len() - 1].hi.same(&one) {
            return Err(Error::InvalidSpec("branch domains must cover [0, 1]".into()));
        }
        for (i, b) in branches.iter().enumerate() {
            if b.lo >= b.hi || b.lo.same(&b.hi) {
                return Err(Error::InvalidSpec(format!("branch {} has an empty domain", i + 1)));
            }
            if b.slope.is_zero() {
                return Err(Error::InvalidSpec(format!("branch {} is constant", i + 1)));
            }
            if i > 0 && !branches[i - 1].hi.same(&b.lo) {
                return Err(Error::InvalidSpec(format!("branches {} and {} are not contiguous", i, i + 1)));
            }
            let (ya, yb) = b.image(&b.lo, &b.hi);
            let below = ya < zero && !ya.same(&zero);
            let above = yb > one && !yb.same(&one);
            if below || above {
                return Err(Error::InvalidSpec(format!("branch {} maps outside [0, 1]", i + 1)));
            }
        }
        Ok(Self { branches, label: label.into() })
    }

    /// `x -> beta * x + alpha (mod 1)` with `0 <= alpha < 1`, `beta > 1`.
    pub fn alpha_beta(alpha: S, beta: S) -> Result<Self> {
        if alpha < S::zero() || alpha >= S::one() || beta <= S::one() {
            return Err(Error::InvalidSpec("need 0 <= alpha < 1 and beta > 1".into()));
        }
        let label = format!("alphabeta:alpha={}:beta={}", alpha.to_f64_lossy(), beta.to_f64_lossy());
        let top = alpha.clone() + beta.clone();
        let mut branches = Vec::new();
        let mut i = 0i64;
        while S::ratio(i, 1) < top {
            let lo = if i == 0 { S::zero() } else { (S::ratio(i, 1) - alpha.clone()) / beta.clone() };
            let edge = (S::ratio(i + 1, 1) - alpha.clone()) / beta.clone();
            let hi = S::min_of(edge, S::one());
            branches.push(Branch { lo, hi, slope: beta.clone(), intercept: alpha.clone() - S::ratio(i, 1) });
            i += 1;
        }
        Self::new(branches, label)
    }

    /// `x -> -beta * x + floor(beta * x) + 1` with `beta > 1`.
    pub fn neg_beta(beta: S) -> Result<Self> {
        if beta <= S::one() {
            return Err(Error::InvalidSpec("need beta > 1".into()));
        }
        let label = format!("negbeta:beta={}", beta.to_f64_lossy());
        let mut branches = Vec::new();
        let mut j = 0i64;
        while S::ratio(j, 1) < beta {
            let lo = S::ratio(j, 1) / beta.clone();
            let hi = S::min_of(S::ratio(j + 1, 1) / beta.clone(), S::one());
            branches.push(Branch { lo, hi, slope: S::zero() - beta.clone(), intercept: S::ratio(j + 1, 1) });
            j += 1;
        }
        Self::new(branches, label)
    }

    pub fn branches(&self) -> &[Branch<S>] {
        &self.branches
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.branches.len()).expect("branch count checked at construction")
    }

    pub fn describe(&self) -> &str {
        &self.label
    }

    /// Branch whose open domain contains `x`, if any.
    pub fn branch_of(&self, x: &S) -> Option<Symbol> {
        self.branches.iter().position(|b| strictly_inside(x, &b.lo, &b.hi)).map(|i| i as Symbol + 1)
    }

    pub fn apply(&self, x: &S) -> Option<S> {
        self.branch_of(x).map(|j| self.branches[j as usize - 1].apply(x))
    }

    /// Itinerary of `x` of length `n`; `None` when an iterate hits a
    /// partition endpoint.
    pub fn code_point(&self, x: &S, n: usize) -> Option<Word> {
        let mut w = Vec::with_capacity(n);
        let mut y = x.clone();
        for i in 0..n {
            let j = self.branch_of(&y)?;
            w.push(j);
            if i + 1 < n {
                y = self.branches[j as usize - 1].apply(&y);
            }
        }
        Some(Word::new(w))
    }

    /// Open interval of points whose itinerary starts with `w`, computed by
    /// pulling back through inverse branches. `None` if it is empty.
    pub fn cylinder(&self, w: &[Symbol]) -> Option<(S, S)> {
        let (&last, rest) = w.split_last()?;
        let b = self.branches.get(last as usize - 1)?;
        let (mut lo, mut hi) = (b.lo.clone(), b.hi.clone());
        for &j in rest.iter().rev() {
            let b = self.branches.get(j as usize - 1)?;
            let (a, c) = b.preimage(&lo, &hi);
            if a >= c || a.same(&c) {
                return None;
            }
            lo = a;
            hi = c;
        }
        Some((lo, hi))
    }
}

/// Map described by a spec string, before choosing a scalar type.
#[derive(Debug, Clone, PartialEq)]
pub enum MapSpec {
    AlphaBeta {
        alpha: String,
        beta: String,
    },
    NegBeta {
        beta: String,
    },
    /// Branches as `lo hi slope intercept` strings.
    Branches(Vec<[String; 4]>),
}

fn parse_float(text: &str) -> Result<f64> {
    match text {
        "golden" => Ok((1.0 + 5f64.sqrt()) / 2.0),
        _ => {
            if let Some(r) = text.strip_prefix("sqrt") {
                let inner = r.trim_start_matches('(').trim_end_matches(')');
                return parse_float(inner).map(f64::sqrt);
            }
            text.parse::<f64>()
                .ok()
                .or_else(|| parse_rational(text).map(|r| Scalar::to_f64_lossy(&r)))
                .ok_or_else(|| Error::InvalidSpec(format!("cannot parse number {text:?}")))
        }
    }
}

fn parse_exact(text: &str) -> Result<BigRational> {
    parse_rational(text).ok_or_else(|| Error::InvalidSpec(format!("{text:?} is not an exact rational")))
}

impl MapSpec {
    /// Whether every parameter is a rational literal.
    pub fn is_rational(&self) -> bool {
        self.numbers().iter().all(|s| parse_rational(s).is_some())
    }

    fn numbers(&self) -> Vec<&String> {
        match self {
            MapSpec::AlphaBeta { alpha, beta } => vec![alpha, beta],
            MapSpec::NegBeta { beta } => vec![beta],
            MapSpec::Branches(rows) => rows.iter().flatten().collect(),
        }
    }

    pub fn build_exact(&self) -> Result<PiecewiseMonotoneMap<BigRational>> {
        self.build_with(parse_exact)
    }

    pub fn build_float(&self) -> Result<PiecewiseMonotoneMap<f64>> {
        self.build_with(parse_float)
    }

    fn build_with<S: Scalar>(&self, num: impl Fn(&str) -> Result<S>) -> Result<PiecewiseMonotoneMap<S>> {
        match self {
            MapSpec::AlphaBeta { alpha, beta } => PiecewiseMonotoneMap::alpha_beta(num(alpha)?, num(beta)?),
            MapSpec::NegBeta { beta } => PiecewiseMonotoneMap::neg_beta(num(beta)?),
            MapSpec::Branches(rows) => {
                let branches = rows
                    .iter()
                    .map(|r| {
                        Ok(Branch { lo: num(&r[0])?, hi: num(&r[1])?, slope: num(&r[2])?, intercept: num(&r[3])? })
                    })
                    .collect::<Result<Vec<_>>>()?;
                PiecewiseMonotoneMap::new(branches, self.to_string())
            }
        }
    }

    /// Parse the branch table format: one `lo hi slope intercept` per line.
    pub fn from_branch_table(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let cols: Vec<&str> = line.split_whitespace().collect();
            let [lo, hi, slope, c] = cols[..] else {
                return Err(Error::InvalidSpec(format!("expected 4 columns in {line:?}")));
            };
            rows.push([lo.into(), hi.into(), slope.into(), c.into()]);
        }
        Ok(MapSpec::Branches(rows))
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapSpec::AlphaBeta { alpha, beta } => write!(f, "alphabeta:alpha={alpha}:beta={beta}"),
            MapSpec::NegBeta { beta } => write!(f, "negbeta:beta={beta}"),
            MapSpec::Branches(rows) => {
                let parts: Vec<String> = rows.iter().map(|r| r.join(" ")).collect();
                write!(f, "pwm:{}", parts.join(";"))
            }
        }
    }
}

/// Parses `alphabeta:alpha=A:beta=B` and `negbeta:beta=B`. Branch files
/// (`pwm:file=...`) are read by the caller and passed to
/// [`MapSpec::from_branch_table`].
impl FromStr for MapSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let kind = parts.next().unwrap_or_default();
        let mut alpha = None;
        let mut beta = None;
        for p in parts {
            match p.split_once('=') {
                Some(("alpha", v)) => alpha = Some(v.to_string()),
                Some(("beta", v)) => beta = Some(v.to_string()),
                _ => return Err(Error::InvalidSpec(format!("unknown map parameter {p:?}"))),
            }
        }
        let beta = beta.ok_or_else(|| Error::InvalidSpec("missing beta=".into()))?;
        match kind {
            "alphabeta" => Ok(MapSpec::AlphaBeta { alpha: alpha.unwrap_or_else(|| "0".into()), beta }),
            "negbeta" if alpha.is_none() => Ok(MapSpec::NegBeta { beta }),
            _ => Err(Error::InvalidSpec(format!("unknown map spec {s:?}"))),
        }
    }
}

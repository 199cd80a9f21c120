use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lang::LanguageOracle;
use crate::word::{Alphabet, Word};

use super::{
    build_block_shift, build_coded, build_fat_sgap, build_sft, default_horizon, FullShift, GapSet, PatternListGenerator,
};

/// A shift named by a short string:
///
/// - `full:N`
/// - `sft:N:forbid=11,212` (forbidden words as digit strings)
/// - `sgap:<gaps>` and `fatsgap:N=3:<gaps>`
/// - `kucherenko:<index>` for the generators `1^i 2^i`
/// - `coded:file=<path>` (generator words, one per line)
///
/// where `<gaps>` is a gap set such as `all`, `powers:2`, `list:0,2` or
/// `arith:1:2`.
#[derive(Debug, Clone, PartialEq)]
pub enum ShiftSpec {
    Full(usize),
    Sft { n: usize, forbidden: Vec<Word> },
    Sgap(GapSet),
    FatSgap { n: usize, gaps: GapSet },
    Kucherenko(GapSet),
    Coded { path: String, generators: Vec<Word> },
}

impl ShiftSpec {
    pub fn alphabet_size(&self) -> usize {
        match self {
            Self::Full(n) | Self::Sft { n, .. } | Self::FatSgap { n, .. } => *n,
            Self::Sgap(_) | Self::Kucherenko(_) => 2,
            Self::Coded { generators, .. } => {
                generators.iter().flat_map(|w| w.iter().copied()).max().unwrap_or(1) as usize
            }
        }
    }

    pub fn default_horizon(&self) -> usize {
        default_horizon(self.alphabet_size())
    }

    /// Memory of a shift of finite type; `None` for the other families.
    pub fn memory(&self) -> Option<usize> {
        match self {
            Self::Full(_) => Some(0),
            Self::Sft { forbidden, .. } => Some(forbidden.iter().map(|w| w.len().saturating_sub(1)).max().unwrap_or(0)),
            _ => None,
        }
    }

    /// Build the oracle, exact up to `horizon` (the family default if `None`).
    pub fn build(&self, horizon: Option<usize>) -> Result<Arc<dyn LanguageOracle>> {
        let h = horizon.unwrap_or_else(|| self.default_horizon());
        Ok(match self {
            Self::Full(n) => Arc::new(FullShift::new(*n)?),
            Self::Sft { n, forbidden } => Arc::new(build_sft(*n, forbidden, h)?),
            Self::Sgap(gaps) => Arc::new(build_fat_sgap(gaps.clone(), 2, h)?),
            Self::FatSgap { n, gaps } => Arc::new(build_fat_sgap(gaps.clone(), *n, h)?),
            Self::Kucherenko(index) => Arc::new(build_block_shift(index.clone(), h)?),
            Self::Coded { generators, .. } => {
                let alphabet = Alphabet::new(self.alphabet_size())?;
                let mut words = generators.clone();
                words.push(Word::empty());
                Arc::new(build_coded(Arc::new(PatternListGenerator::from_words(alphabet, &words)?), h)?)
            }
        })
    }
}

fn parse_size(text: &str) -> Result<usize> {
    text.parse::<usize>()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::InvalidSpec(format!("bad alphabet size {text:?}")))
}

impl FromStr for ShiftSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let (family, rest) = text.split_once(':').unwrap_or((text, ""));
        match family {
            "full" => Ok(Self::Full(parse_size(rest)?)),
            "sft" => {
                let (n, forbid) = rest.split_once(':').unwrap_or((rest, ""));
                let n = parse_size(n)?;
                let list = match forbid {
                    "" => "",
                    f => f
                        .strip_prefix("forbid=")
                        .ok_or_else(|| Error::InvalidSpec(format!("expected forbid=..., got {f:?}")))?,
                };
                let forbidden =
                    list.split(',').filter(|s| !s.is_empty()).map(Word::from_digits).collect::<Result<Vec<_>>>()?;
                if let Some(w) = forbidden.iter().find(|w| w.iter().any(|&a| a as usize > n)) {
                    return Err(Error::InvalidSpec(format!("forbidden word {w} uses symbols beyond {n}")));
                }
                Ok(Self::Sft { n, forbidden })
            }
            "sgap" => Ok(Self::Sgap(rest.parse()?)),
            "fatsgap" => {
                let (n, gaps) =
                    rest.split_once(':').ok_or_else(|| Error::InvalidSpec("expected fatsgap:N=<n>:<gaps>".into()))?;
                let n = n.strip_prefix("N=").ok_or_else(|| Error::InvalidSpec(format!("expected N=<n>, got {n:?}")))?;
                Ok(Self::FatSgap { n: parse_size(n)?, gaps: gaps.parse()? })
            }
            "kucherenko" => Ok(Self::Kucherenko(if rest.is_empty() { GapSet::AllNonneg } else { rest.parse()? })),
            "coded" => {
                let path = rest
                    .strip_prefix("file=")
                    .ok_or_else(|| Error::InvalidSpec("expected coded:file=<path>".into()))?;
                let content = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidSpec(format!("cannot read {path}: {e}")))?;
                let generators: Vec<Word> =
                    crate::word::parse_word_lines(&content)?.into_iter().filter(|w| !w.is_empty()).collect();
                if generators.is_empty() {
                    return Err(Error::InvalidSpec(format!("{path} lists no nonempty generator")));
                }
                Ok(Self::Coded { path: path.to_string(), generators })
            }
            _ => Err(Error::InvalidSpec(format!("unknown shift family {family:?}"))),
        }
    }
}

impl fmt::Display for ShiftSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Full(n) => write!(f, "full:{n}"),
            Self::Sft { n, forbidden } => {
                let list: Vec<String> = forbidden.iter().map(|w| w.iter().map(|a| a.to_string()).collect()).collect();
                write!(f, "sft:{n}:forbid={}", list.join(","))
            }
            Self::Sgap(g) => write!(f, "sgap:{g}"),
            Self::FatSgap { n, gaps } => write!(f, "fatsgap:N={n}:{gaps}"),
            Self::Kucherenko(i) => write!(f, "kucherenko:{i}"),
            Self::Coded { path, .. } => write!(f, "coded:file={path}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{count_words, is_word};

    #[test]
    fn round_trips() {
        for text in ["full:3", "sft:2:forbid=11,212", "sgap:powers:2", "fatsgap:N=3:powers:2", "kucherenko:all"] {
            let spec: ShiftSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
            assert_eq!(spec.to_string().parse::<ShiftSpec>().unwrap(), spec);
        }
    }

    #[test]
    fn builds_oracles() {
        let golden = "sft:2:forbid=11".parse::<ShiftSpec>().unwrap();
        assert_eq!(golden.memory(), Some(1));
        let lang = golden.build(None).unwrap();
        assert_eq!(lang.horizon(), 24);
        assert_eq!(count_words(&lang, 4).unwrap(), 8u32.into());
        let fat = "fatsgap:N=3:all".parse::<ShiftSpec>().unwrap().build(Some(8)).unwrap();
        assert_eq!(count_words(&fat, 5).unwrap(), 243u32.into());
        let k = "kucherenko:all".parse::<ShiftSpec>().unwrap().build(None).unwrap();
        assert!(is_word(&k, &[1, 1, 2, 2]).unwrap());
    }

    #[test]
    fn coded_from_file() {
        let dir = std::env::temp_dir().join(format!("symdyn-spec-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("gens.txt");
        std::fs::write(&path, "# generators\n1\n2 2\n").unwrap();
        let spec: ShiftSpec = format!("coded:file={}", path.display()).parse().unwrap();
        assert_eq!(spec.alphabet_size(), 2);
        let lang = spec.build(Some(10)).unwrap();
        assert!(is_word(&lang, &[1, 2, 2, 1]).unwrap());
        assert!(!is_word(&lang, &[1, 2, 1]).unwrap());
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn rejects_malformed_specs() {
        for text in ["full:0", "full:x", "sft:2:ban=11", "sft:2:forbid=13", "fatsgap:3:all", "bogus:1", "coded:x"] {
            assert!(text.parse::<ShiftSpec>().is_err(), "{text}");
        }
    }
}

use serde::{Deserialize, Serialize};

use super::graph::SftGraph;
use super::word::{format_word, primitive_root, rotate_left, Symbol, Word};
use crate::error::{Error, Result};

/// Anything that can report the symbols it carries at integer coordinates.
///
/// One-sided points use coordinates `1, 2, ...` (coordinate 1 is the first
/// symbol); two-sided points accept every integer.
pub trait Coordinates {
    fn symbols(&self, from: i64, len: usize) -> Result<Word>;
}

/// An eventually periodic point `u w w w ...` of a one-sided shift.
///
/// Always stored normalized: the period is primitive and the preperiod does
/// not end with the last symbol of the period, which makes the
/// representation unique.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LassoPoint {
    preperiod: Word,
    period: Word,
}

impl LassoPoint {
    pub fn new(graph: &SftGraph, preperiod: &[Symbol], period: &[Symbol]) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        let mut probe = preperiod.to_vec();
        probe.extend_from_slice(period);
        probe.extend_from_slice(period);
        graph.check_word(&probe)?;
        Ok(Self::normalized(preperiod.to_vec(), period.to_vec()))
    }

    pub fn periodic(graph: &SftGraph, period: &[Symbol]) -> Result<Self> {
        Self::new(graph, &[], period)
    }

    /// Caller guarantees admissibility.
    pub(crate) fn normalized(mut preperiod: Word, period: Word) -> Self {
        let mut period = primitive_root(&period).to_vec();
        while let (Some(&u), Some(&w)) = (preperiod.last(), period.last()) {
            if u != w {
                break;
            }
            preperiod.pop();
            period.rotate_right(1);
        }
        LassoPoint { preperiod, period }
    }

    pub fn preperiod(&self) -> &[Symbol] {
        &self.preperiod
    }

    pub fn period(&self) -> &[Symbol] {
        &self.period
    }

    pub fn is_periodic(&self) -> bool {
        self.preperiod.is_empty()
    }

    /// Symbol at 0-based position `index`.
    pub fn symbol(&self, index: usize) -> Symbol {
        let u = self.preperiod.len();
        if index < u {
            self.preperiod[index]
        } else {
            self.period[(index - u) % self.period.len()]
        }
    }

    pub fn shift(&self) -> Self {
        if let Some((_, rest)) = self.preperiod.split_first() {
            LassoPoint {
                preperiod: rest.to_vec(),
                period: self.period.clone(),
            }
        } else {
            LassoPoint {
                preperiod: Word::new(),
                period: rotate_left(&self.period, 1),
            }
        }
    }

    pub fn shift_by(&self, n: usize) -> Self {
        let u = self.preperiod.len();
        if n <= u {
            LassoPoint {
                preperiod: self.preperiod[n..].to_vec(),
                period: self.period.clone(),
            }
        } else {
            LassoPoint {
                preperiod: Word::new(),
                period: rotate_left(&self.period, (n - u) % self.period.len()),
            }
        }
    }

    pub fn prefix(&self, len: usize) -> Word {
        (0..len).map(|i| self.symbol(i)).collect()
    }

    pub fn classify(&self) -> PointClass {
        if self.preperiod.is_empty() {
            PointClass::Periodic {
                period: self.period.len(),
            }
        } else {
            PointClass::EventuallyPeriodic {
                preperiod: self.preperiod.len(),
                period: self.period.len(),
            }
        }
    }
}

impl std::fmt::Display for LassoPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}({})^inf",
            format_word(&self.preperiod),
            format_word(&self.period)
        )
    }
}

impl Coordinates for LassoPoint {
    fn symbols(&self, from: i64, len: usize) -> Result<Word> {
        assert!(from >= 1, "one-sided coordinates start at 1");
        let start = (from - 1) as usize;
        Ok((start..start + len).map(|i| self.symbol(i)).collect())
    }
}

/// Deterministic symbol generators used for aperiodic points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StreamKind {
    /// Fixed point of `0 -> 01, 1 -> 10`.
    ThueMorse,
    /// Lower mechanical word `floor((n+1)a + r) - floor(n a + r)`.
    Sturmian { slope: f64, intercept: f64 },
    /// Fixed point of a substitution starting from `seed`; `rules[s]` is the
    /// image of symbol `s` and must begin with `seed` when `s == seed`.
    Substitution { rules: Vec<Word>, seed: Symbol },
}

impl StreamKind {
    pub fn fibonacci() -> Self {
        StreamKind::Substitution {
            rules: vec![vec![0, 1], vec![0]],
            seed: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            StreamKind::ThueMorse => Ok(()),
            StreamKind::Sturmian { slope, intercept } => {
                if !(slope.is_finite() && *slope > 0.0 && *slope < 1.0 && intercept.is_finite()) {
                    return Err(Error::InvalidStream(format!(
                        "sturmian slope must lie in (0, 1), got {slope}"
                    )));
                }
                Ok(())
            }
            StreamKind::Substitution { rules, seed } => {
                let seed_rule = rules.get(*seed as usize).ok_or_else(|| {
                    Error::InvalidStream(format!("no rule for seed symbol {seed}"))
                })?;
                if seed_rule.len() < 2 || seed_rule[0] != *seed {
                    return Err(Error::InvalidStream(
                        "seed rule must start with the seed and have length >= 2".into(),
                    ));
                }
                if rules.iter().any(|r| r.is_empty()) {
                    return Err(Error::InvalidStream(
                        "substitution rules must be nonempty".into(),
                    ));
                }
                if let Some(&s) = rules.iter().flatten().find(|&&s| s as usize >= rules.len()) {
                    return Err(Error::InvalidStream(format!("symbol {s} has no rule")));
                }
                Ok(())
            }
        }
    }

    /// The first `len` symbols of the generated sequence.
    pub fn generate(&self, len: usize) -> Word {
        match self {
            StreamKind::ThueMorse => (0..len).map(|n| (n.count_ones() % 2) as Symbol).collect(),
            StreamKind::Sturmian { slope, intercept } => (0..len)
                .map(|n| {
                    let n = n as f64;
                    ((n + 1.0) * slope + intercept).floor() as i64
                        - (n * slope + intercept).floor() as i64
                })
                .map(|d| d as Symbol)
                .collect(),
            StreamKind::Substitution { rules, seed } => {
                let mut word = vec![*seed];
                while word.len() < len {
                    word = word
                        .iter()
                        .flat_map(|&s| rules[s as usize].iter().copied())
                        .collect();
                }
                word.truncate(len);
                word
            }
        }
    }
}

/// A generated point whose admissibility is certified up to a horizon.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ItineraryStream {
    kind: StreamKind,
    offset: usize,
    certified: usize,
}

impl ItineraryStream {
    /// Generates `horizon` symbols and checks them against the graph.
    pub fn new(kind: StreamKind, graph: &SftGraph, horizon: usize) -> Result<Self> {
        kind.validate()?;
        let prefix = kind.generate(horizon);
        graph.check_word(&prefix)?;
        Ok(ItineraryStream {
            kind,
            offset: 0,
            certified: horizon,
        })
    }

    pub fn kind(&self) -> &StreamKind {
        &self.kind
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    /// Number of symbols (from the current position) known to be admissible.
    pub fn certified(&self) -> usize {
        self.certified
    }

    pub fn shift(&self) -> Self {
        ItineraryStream {
            kind: self.kind.clone(),
            offset: self.offset + 1,
            certified: self.certified.saturating_sub(1),
        }
    }

    pub fn prefix(&self, len: usize) -> Result<Word> {
        if len > self.certified {
            return Err(Error::GeneratorExhausted {
                requested: len,
                certified: self.certified,
            });
        }
        let mut all = self.kind.generate(self.offset + len);
        Ok(all.split_off(self.offset))
    }

    /// Period scan on the back half of a `4 * bound` symbol prefix.
    pub fn classify(&self, bound: usize) -> PointClass {
        let inspected = (4 * bound).min(self.certified);
        let prefix = self
            .prefix(inspected)
            .expect("inspected length is within the certified horizon");
        let half = inspected / 2;
        for p in 1..=bound {
            if p >= inspected - half {
                break;
            }
            if (half + p..inspected).all(|i| prefix[i] == prefix[i - p]) {
                let mut q = half;
                while q > 0 && prefix[q - 1] == prefix[q - 1 + p] {
                    q -= 1;
                }
                return PointClass::ApparentPeriod {
                    preperiod: q,
                    period: p,
                    inspected,
                };
            }
        }
        PointClass::AperiodicUpTo { bound, inspected }
    }
}

/// A point of a one-sided shift.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Point {
    Lasso(LassoPoint),
    Stream(ItineraryStream),
}

impl Point {
    pub fn shift(&self) -> Point {
        match self {
            Point::Lasso(l) => Point::Lasso(l.shift()),
            Point::Stream(s) => Point::Stream(s.shift()),
        }
    }

    pub fn shift_by(&self, n: usize) -> Point {
        match self {
            Point::Lasso(l) => Point::Lasso(l.shift_by(n)),
            Point::Stream(s) => {
                let mut out = s.clone();
                out.offset += n;
                out.certified = out.certified.saturating_sub(n);
                Point::Stream(out)
            }
        }
    }

    /// The first `len` symbols `x_1 ... x_len`.
    pub fn itinerary(&self, len: usize) -> Result<Word> {
        match self {
            Point::Lasso(l) => Ok(l.prefix(len)),
            Point::Stream(s) => s.prefix(len),
        }
    }

    /// Longest itinerary that can be requested; `None` when unbounded.
    pub fn certified_len(&self) -> Option<usize> {
        match self {
            Point::Lasso(_) => None,
            Point::Stream(s) => Some(s.certified),
        }
    }

    pub fn classify(&self, bound: usize) -> PointClass {
        match self {
            Point::Lasso(l) => l.classify(),
            Point::Stream(s) => s.classify(bound),
        }
    }
}

impl From<LassoPoint> for Point {
    fn from(l: LassoPoint) -> Self {
        Point::Lasso(l)
    }
}

impl From<ItineraryStream> for Point {
    fn from(s: ItineraryStream) -> Self {
        Point::Stream(s)
    }
}

impl Coordinates for ItineraryStream {
    fn symbols(&self, from: i64, len: usize) -> Result<Word> {
        assert!(from >= 1, "one-sided coordinates start at 1");
        let start = (from - 1) as usize;
        let mut w = self.prefix(start + len)?;
        Ok(w.split_off(start))
    }
}

impl Coordinates for Point {
    fn symbols(&self, from: i64, len: usize) -> Result<Word> {
        match self {
            Point::Lasso(l) => l.symbols(from, len),
            Point::Stream(s) => s.symbols(from, len),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum PointClass {
    Periodic {
        period: usize,
    },
    /// Not periodic, but periodic after `preperiod` symbols.
    EventuallyPeriodic {
        preperiod: usize,
        period: usize,
    },
    /// No period `<= bound` in the back half of the inspected prefix.
    AperiodicUpTo {
        bound: usize,
        inspected: usize,
    },
    /// The inspected prefix of a stream looks eventually periodic; this is
    /// an observation, not a certificate.
    ApparentPeriod {
        preperiod: usize,
        period: usize,
        inspected: usize,
    },
}

impl PointClass {
    pub fn is_periodic(&self) -> bool {
        matches!(self, PointClass::Periodic { .. })
    }
}

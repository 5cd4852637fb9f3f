use serde::Serialize;

use crate::dynamics::{
    format_word, primitive_root, rotate_left, Coordinates, LassoPoint, PointClass, SftGraph,
    Symbol, Word,
};
use crate::error::{Error, Result};

/// A point of the two-sided shift `... v v v c w w w ...` with the center
/// word `c` occupying coordinates `start .. start + |c|`.
///
/// As a point of the inverse limit, coordinate `n` of the backward-orbit
/// tuple is the one-sided ray starting at bi-sequence index `2 - n`; the
/// projection to X is the ray starting at index 1.
///
/// Stored in canonical form: periods primitive, the left tail absorbs as much
/// of the center as it can, then the right tail does. Globally periodic
/// points have an empty center, `left == right` and `start == 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BiLassoPoint {
    left: Word,
    center: Word,
    start: i64,
    right: Word,
}

impl BiLassoPoint {
    pub fn new(
        graph: &SftGraph,
        left: &[Symbol],
        center: &[Symbol],
        start: i64,
        right: &[Symbol],
    ) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        let mut probe = left.to_vec();
        probe.extend_from_slice(left);
        probe.extend_from_slice(center);
        probe.extend_from_slice(right);
        probe.extend_from_slice(right);
        graph.check_word(&probe)?;
        Ok(Self::normalized(
            left.to_vec(),
            center.to_vec(),
            start,
            right.to_vec(),
        ))
    }

    /// The bi-infinite periodic point `... w w w ...` with `w` starting at
    /// coordinate 1, i.e. the periodic lift of the one-sided point `w^inf`.
    pub fn periodic(graph: &SftGraph, period: &[Symbol]) -> Result<Self> {
        Self::new(graph, period, &[], 1, period)
    }

    pub(crate) fn normalized(left: Word, center: Word, start: i64, right: Word) -> Self {
        let mut left = primitive_root(&left).to_vec();
        let mut right = primitive_root(&right).to_vec();
        let mut center = center;
        let mut start = start;
        let mut absorbed = 0;
        while absorbed < center.len() && center[absorbed] == left[0] {
            left.rotate_left(1);
            absorbed += 1;
        }
        center.drain(..absorbed);
        start += absorbed as i64;
        if center.is_empty() {
            // the left tail may continue into the right tail
            let guard = left.len() * right.len() + 1;
            for _ in 0..guard {
                if left == right || right[0] != left[0] {
                    break;
                }
                left.rotate_left(1);
                right.rotate_left(1);
                start += 1;
            }
        }
        while let Some(&last) = center.last() {
            if last != *right.last().unwrap() {
                break;
            }
            right.rotate_right(1);
            center.pop();
        }
        let mut point = BiLassoPoint {
            left,
            center,
            start,
            right,
        };
        if point.center.is_empty() && point.left == point.right {
            let p = point.right.len();
            let phase = (-point.start).rem_euclid(p as i64) as usize;
            let w = rotate_left(&point.right, phase);
            point.left = w.clone();
            point.right = w;
            point.start = 0;
        }
        point
    }

    pub fn left_period(&self) -> &[Symbol] {
        &self.left
    }

    pub fn center(&self) -> &[Symbol] {
        &self.center
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn right_period(&self) -> &[Symbol] {
        &self.right
    }

    pub fn is_globally_periodic(&self) -> bool {
        self.center.is_empty() && self.left == self.right
    }

    pub fn symbol(&self, index: i64) -> Symbol {
        let end = self.start + self.center.len() as i64;
        if index < self.start {
            let p = self.left.len() as i64;
            self.left[(index - self.start).rem_euclid(p) as usize]
        } else if index < end {
            self.center[(index - self.start) as usize]
        } else {
            let p = self.right.len() as i64;
            self.right[(index - end).rem_euclid(p) as usize]
        }
    }

    /// `phi~^n`: coordinate `i` of the result is coordinate `i + n` here.
    pub fn shift(&self, n: i64) -> Self {
        Self::normalized(
            self.left.clone(),
            self.center.clone(),
            self.start - n,
            self.right.clone(),
        )
    }

    /// The one-sided point read from coordinate `from` onward.
    pub fn ray(&self, from: i64) -> LassoPoint {
        let end = self.start + self.center.len() as i64;
        if from >= end {
            let phase = (from - end) as usize % self.right.len();
            return LassoPoint::normalized(Word::new(), rotate_left(&self.right, phase));
        }
        let pre: Word = (from..end).map(|i| self.symbol(i)).collect();
        LassoPoint::normalized(pre, self.right.clone())
    }

    pub fn classify(&self) -> ExtendedClass {
        if self.is_globally_periodic() {
            ExtendedClass::Periodic {
                period: self.right.len(),
            }
        } else {
            ExtendedClass::Aperiodic {
                projection: self.ray(1).classify(),
            }
        }
    }
}

impl std::fmt::Display for BiLassoPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({})^-inf [{}]@{} ({})^inf",
            format_word(&self.left),
            format_word(&self.center),
            self.start,
            format_word(&self.right)
        )
    }
}

impl Coordinates for BiLassoPoint {
    fn symbols(&self, from: i64, len: usize) -> Result<Word> {
        Ok((from..from + len as i64).map(|i| self.symbol(i)).collect())
    }
}

/// Classification of a point of the extension.
///
/// A non-periodic point has backward-orbit coordinates `x_n` in which every
/// value repeats only finitely often, even when its projection is
/// eventually periodic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum ExtendedClass {
    Periodic { period: usize },
    Aperiodic { projection: PointClass },
}

impl ExtendedClass {
    pub fn is_periodic(&self) -> bool {
        matches!(self, ExtendedClass::Periodic { .. })
    }

    /// Whether each backward-orbit coordinate value occurs finitely often.
    pub fn coordinates_repeat_finitely(&self) -> bool {
        !self.is_periodic()
    }
}

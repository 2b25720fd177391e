//! Compact sets `C` inside `U`: finite point lists and sampled segments.

use serde::{Deserialize, Serialize};

use crate::legendre::LegendreFunction;
use crate::{Error, Point, Result};

/// A nonempty compact set, stored either as its points or as a segment
/// `conv{c0, c1}` sampled at `samples` equally spaced parameters
/// (endpoints included).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SetRepr", into = "SetRepr")]
pub enum CompactSet {
    Finite(Vec<Point>),
    Segment { ends: [Point; 2], samples: usize },
}

/// Wire form: `{"kind":"finite"|"segment","points":[[..],..],"samples":N}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetRepr {
    pub kind: SetKind,
    pub points: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetKind {
    Finite,
    Segment,
}

/// Sample count used when a segment is given without one.
pub const DEFAULT_SAMPLES: usize = 1025;

impl TryFrom<SetRepr> for CompactSet {
    type Error = Error;

    fn try_from(s: SetRepr) -> Result<Self> {
        match s.kind {
            SetKind::Finite => CompactSet::finite(s.points),
            SetKind::Segment => {
                let [c0, c1]: [Point; 2] = s
                    .points
                    .try_into()
                    .map_err(|_| Error::InvalidArgument("a segment needs exactly two endpoints".into()))?;
                CompactSet::segment(c0, c1, s.samples.unwrap_or(DEFAULT_SAMPLES))
            }
        }
    }
}

impl From<CompactSet> for SetRepr {
    fn from(c: CompactSet) -> Self {
        match c {
            CompactSet::Finite(points) => SetRepr { kind: SetKind::Finite, points, samples: None },
            CompactSet::Segment { ends: [a, b], samples } => {
                SetRepr { kind: SetKind::Segment, points: vec![a, b], samples: Some(samples) }
            }
        }
    }
}

fn check_points(points: &[Point]) -> Result<()> {
    let Some(first) = points.first() else {
        return Err(Error::InvalidArgument("the set must be nonempty".into()));
    };
    let dim = first.len();
    if dim == 0 {
        return Err(Error::InvalidArgument("points must have at least one coordinate".into()));
    }
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite point {p:?}")));
        }
    }
    Ok(())
}

impl CompactSet {
    pub fn finite(points: Vec<Point>) -> Result<Self> {
        check_points(&points)?;
        Ok(CompactSet::Finite(points))
    }

    pub fn segment(c0: Point, c1: Point, samples: usize) -> Result<Self> {
        let ends = [c0, c1];
        check_points(&ends)?;
        if ends[0] == ends[1] {
            return Err(Error::InvalidArgument("segment endpoints must be distinct".into()));
        }
        if samples < 2 {
            return Err(Error::InvalidArgument("a segment needs at least 2 samples".into()));
        }
        Ok(CompactSet::Segment { ends, samples })
    }

    /// The segment from `(1, a)` to `(a, 1)`, validated against `f`.
    /// `samples` must be odd and at least 3 so that the midpoint is sampled.
    pub fn make_segment(f: &LegendreFunction, a: f64, samples: usize) -> Result<Self> {
        if !a.is_finite() || a <= 1.0 {
            return Err(Error::InvalidArgument(format!("segment parameter must exceed 1, got {a}")));
        }
        if samples < 3 || samples.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!("sample count must be odd and at least 3, got {samples}")));
        }
        let c = Self::segment(vec![1.0, a], vec![a, 1.0], samples)?;
        c.validate(f)?;
        Ok(c)
    }

    pub fn dimension(&self) -> usize {
        match self {
            CompactSet::Finite(p) => p[0].len(),
            CompactSet::Segment { ends, .. } => ends[0].len(),
        }
    }

    /// Number of enumerated points.
    pub fn len(&self) -> usize {
        match self {
            CompactSet::Finite(p) => p.len(),
            CompactSet::Segment { samples, .. } => *samples,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Segment parameter of the `i`-th sample, `i / (samples - 1)`.
    pub fn lambda(&self, i: usize) -> Option<f64> {
        match self {
            CompactSet::Finite(_) => None,
            CompactSet::Segment { samples, .. } => Some(i as f64 / (*samples - 1) as f64),
        }
    }

    /// `(1 - lambda) c0 + lambda c1`.
    pub fn segment_point(c0: &[f64], c1: &[f64], lambda: f64) -> Point {
        c0.iter().zip(c1).map(|(a, b)| (1.0 - lambda) * a + lambda * b).collect()
    }

    /// Points in insertion order (finite) or increasing parameter (segment).
    pub fn enumerate(&self) -> Vec<Point> {
        match self {
            CompactSet::Finite(p) => p.clone(),
            CompactSet::Segment { ends: [c0, c1], samples } => (0..*samples)
                .map(|i| {
                    if i == 0 {
                        c0.clone()
                    } else if i + 1 == *samples {
                        c1.clone()
                    } else {
                        Self::segment_point(c0, c1, i as f64 / (*samples - 1) as f64)
                    }
                })
                .collect(),
        }
    }

    /// Every enumerated point must lie in `U = int dom f`.
    pub fn validate(&self, f: &LegendreFunction) -> Result<()> {
        if self.dimension() != f.dimension() {
            return Err(Error::DimensionMismatch { expected: f.dimension(), got: self.dimension() });
        }
        for (index, p) in self.enumerate().into_iter().enumerate() {
            if !f.in_interior(&p) {
                return Err(Error::PointOutsideInterior { index, point: p });
            }
        }
        Ok(())
    }

    /// Whether the set has at least two distinct points.
    pub fn has_two_points(&self) -> bool {
        match self {
            CompactSet::Finite(p) => p.iter().any(|q| q != &p[0]),
            CompactSet::Segment { .. } => true,
        }
    }
}

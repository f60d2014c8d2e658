//! Quadratic spaces over F classified by (dim, det, Hasse).
//!
//! The Hasse invariant follows the convention s = ∏_{i≤j} (a_i, a_j).

use serde::Serialize;

use crate::error::SpaceError;
use crate::field::{FieldModel, SquareClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QuadSpace {
    pub dim: usize,
    #[serde(skip)]
    pub det: SquareClass,
    pub hasse: i8,
}

impl QuadSpace {
    pub fn zero() -> Self {
        QuadSpace { dim: 0, det: SquareClass::ONE, hasse: 1 }
    }

    /// A space with the given invariants, if one exists.
    pub fn new(m: &FieldModel, dim: usize, det: SquareClass, hasse: i8) -> Result<Self, SpaceError> {
        if exists(m, dim, det, hasse) {
            Ok(QuadSpace { dim, det, hasse })
        } else {
            Err(SpaceError::NoSuchSpace { dim, hasse })
        }
    }

    /// [a_1, ..., a_n].
    pub fn from_diagonal(m: &FieldModel, entries: &[SquareClass]) -> Self {
        entries.iter().fold(QuadSpace::zero(), |acc, &a| acc.orthogonal_sum(m, QuadSpace::line(m, a)))
    }

    /// The line [a].
    pub fn line(m: &FieldModel, a: SquareClass) -> Self {
        QuadSpace { dim: 1, det: a, hasse: m.hilbert(a, a) }
    }

    /// V ⊥ W.
    pub fn orthogonal_sum(self, m: &FieldModel, w: QuadSpace) -> Self {
        QuadSpace {
            dim: self.dim + w.dim,
            det: self.det * w.det,
            hasse: self.hasse * w.hasse * m.hilbert(self.det, w.det),
        }
    }

    pub fn isometric(self, w: QuadSpace) -> bool {
        self == w
    }

    /// Whether `self` represents `w`, i.e. w embeds isometrically into self.
    pub fn represents(self, m: &FieldModel, w: QuadSpace) -> Result<bool, SpaceError> {
        if w.dim > self.dim {
            return Err(SpaceError::Dimension { sub: w.dim, ambient: self.dim });
        }
        let k = self.dim - w.dim;
        if k == 0 {
            return Ok(self.isometric(w));
        }
        let det_u = self.det * w.det;
        Ok([1i8, -1].into_iter().any(|h| {
            exists(m, k, det_u, h) && w.hasse * h * m.hilbert(w.det, det_u) == self.hasse
        }))
    }
}

/// Existence of a space with invariants (dim, det, hasse) over a local field.
pub fn exists(m: &FieldModel, dim: usize, det: SquareClass, hasse: i8) -> bool {
    match dim {
        0 => det.is_one() && hasse == 1,
        1 => hasse == m.hilbert(det, det),
        2 if det == m.minus_one() => hasse == m.hilbert(m.minus_one(), m.minus_one()),
        _ => hasse == 1 || hasse == -1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::{build_field_model, FieldSpec};

    #[test]
    fn examples() {
        let m = build_field_model(&FieldSpec::q2()).unwrap();
        let c = |s: &str| m.class_by_label(s).unwrap();
        assert_eq!(QuadSpace::from_diagonal(&m, &[c("1")]), QuadSpace { dim: 1, det: c("1"), hasse: 1 });
        let h = QuadSpace::from_diagonal(&m, &[c("1"), c("7")]);
        assert_eq!((h.dim, h.det, h.hasse), (2, c("7"), -1));
        assert_eq!(QuadSpace::from_diagonal(&m, &[]), QuadSpace::zero());
        let v = QuadSpace::from_diagonal(&m, &[c("1"), c("1")]);
        assert!(v.isometric(QuadSpace::from_diagonal(&m, &[c("5"), c("5")])));
        assert!(!QuadSpace::line(&m, c("1")).isometric(QuadSpace::line(&m, c("2"))));
        let w = QuadSpace::from_diagonal(&m, &[c("1"), c("2")]);
        assert_eq!(w.represents(&m, QuadSpace::line(&m, c("1"))), Ok(true));
        assert_eq!(v.represents(&m, QuadSpace::line(&m, c("7"))), Ok(false));
        assert!(QuadSpace::line(&m, c("1")).represents(&m, v).is_err());
    }
}

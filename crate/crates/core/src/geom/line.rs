use serde::{Deserialize, Serialize};

use super::scalar::Scalar;
use super::vector::Vec2;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("lines are parallel")]
    ParallelLines,
    #[error("line direction is zero")]
    ZeroDirection,
}

/// Line through `point` with nonzero `direction`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Line<S> {
    pub point: Vec2<S>,
    pub direction: Vec2<S>,
}

impl<S: Scalar> Line<S> {
    pub fn new(point: Vec2<S>, direction: Vec2<S>) -> Result<Self, GeomError> {
        if direction.is_zero() {
            return Err(GeomError::ZeroDirection);
        }
        Ok(Line { point, direction })
    }

    pub fn contains(&self, p: &Vec2<S>) -> bool {
        (p - &self.point).cross(&self.direction).is_zero()
    }

    pub fn is_parallel(&self, other: &Self) -> bool {
        self.direction.cross(&other.direction).is_zero()
    }
}

impl<S: Scalar> PartialEq for Line<S> {
    fn eq(&self, other: &Self) -> bool {
        self.is_parallel(other) && self.contains(&other.point) && other.contains(&self.point)
    }
}

/// The unique common point of two non-parallel lines.
pub fn intersect_lines<S: Scalar>(l1: &Line<S>, l2: &Line<S>) -> Result<Vec2<S>, GeomError> {
    let denom = l1.direction.cross(&l2.direction);
    if denom.is_zero() {
        return Err(GeomError::ParallelLines);
    }
    // p1 + s d1 = p2 + t d2  =>  s = cross(p2 - p1, d2) / cross(d1, d2)
    let s = (&l2.point - &l1.point).cross(&l2.direction) / denom;
    Ok(&l1.point + &l1.direction.scale(&s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ExactScalar;

    fn v(x: i64, y: i64) -> Vec2<ExactScalar> {
        Vec2::new(ExactScalar::from(x), ExactScalar::from(y))
    }

    #[test]
    fn axes_meet_at_origin() {
        let x_axis = Line::new(v(0, 0), v(1, 0)).unwrap();
        let y_axis = Line::new(v(0, 0), v(0, 1)).unwrap();
        assert_eq!(intersect_lines(&x_axis, &y_axis).unwrap(), v(0, 0));
    }

    #[test]
    fn hand_solved_system() {
        let l1 = Line::new(v(0, 1), v(1, 0)).unwrap();
        let l2 = Line::new(v(0, 0), v(1, 1)).unwrap();
        assert_eq!(intersect_lines(&l1, &l2).unwrap(), v(1, 1));
    }

    #[test]
    fn parallel_lines_rejected() {
        let l1 = Line::new(v(0, 1), v(2, 3)).unwrap();
        let l2 = Line::new(v(5, -1), v(-4, -6)).unwrap();
        assert_eq!(intersect_lines(&l1, &l2), Err(GeomError::ParallelLines));
    }

    #[test]
    fn equal_representations() {
        let l1 = Line::new(v(0, 0), v(1, 2)).unwrap();
        let l2 = Line::new(v(3, 6), v(-2, -4)).unwrap();
        assert_eq!(l1, l2);
        let l3 = Line::new(v(1, 0), v(1, 2)).unwrap();
        assert_ne!(l1, l3);
        assert_eq!(Line::new(v(0, 0), v(0, 0)).err(), Some(GeomError::ZeroDirection));
    }
}

use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::scalar::{ExactScalar, Scalar};

/// Planar vector over a scalar kind.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct Vec2<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Vec2<S> {
    pub fn new(x: S, y: S) -> Self {
        Vec2 { x, y }
    }

    pub fn zero() -> Self {
        Vec2::new(S::zero(), S::zero())
    }

    pub fn unit_x() -> Self {
        Vec2::new(S::one(), S::zero())
    }

    pub fn unit_y() -> Self {
        Vec2::new(S::zero(), S::one())
    }

    pub fn dot(&self, o: &Self) -> S {
        self.x.clone() * o.x.clone() + self.y.clone() * o.y.clone()
    }

    /// `self.x * o.y - self.y * o.x`; positive when `o` is counterclockwise of `self`.
    pub fn cross(&self, o: &Self) -> S {
        self.x.clone() * o.y.clone() - self.y.clone() * o.x.clone()
    }

    pub fn scale(&self, k: &S) -> Self {
        Vec2::new(self.x.clone() * k.clone(), self.y.clone() * k.clone())
    }

    pub fn norm_sq(&self) -> S {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Complex multiplication by `u`; a rotation when `u` is a unit vector.
    pub fn rotate(&self, u: &Self) -> Self {
        Vec2::new(
            self.x.clone() * u.x.clone() - self.y.clone() * u.y.clone(),
            self.x.clone() * u.y.clone() + self.y.clone() * u.x.clone(),
        )
    }

    /// Complex conjugate; the inverse rotation of a unit vector.
    pub fn conj(&self) -> Self {
        Vec2::new(self.x.clone(), -self.y.clone())
    }

    /// Counterclockwise quarter turn.
    pub fn perp(&self) -> Self {
        Vec2::new(-self.y.clone(), self.x.clone())
    }

    pub fn to_f64(&self) -> Vec2<f64> {
        Vec2::new(self.x.to_f64(), self.y.to_f64())
    }

    pub fn bit_length(&self) -> u64 {
        self.x.bit_length().max(self.y.bit_length())
    }

    pub fn close(&self, o: &Self, tol: f64) -> bool {
        self.x.close(&o.x, tol) && self.y.close(&o.y, tol)
    }
}

impl Vec2<f64> {
    pub fn from_angle(theta: f64) -> Self {
        Vec2::new(theta.cos(), theta.sin())
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn angle(&self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Vec2::new(self.x / n, self.y / n)
    }
}

impl<S: Scalar> Add for Vec2<S> {
    type Output = Vec2<S>;
    fn add(self, o: Self) -> Self {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl<S: Scalar> Sub for Vec2<S> {
    type Output = Vec2<S>;
    fn sub(self, o: Self) -> Self {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl<S: Scalar> Add for &Vec2<S> {
    type Output = Vec2<S>;
    fn add(self, o: Self) -> Vec2<S> {
        Vec2::new(self.x.clone() + o.x.clone(), self.y.clone() + o.y.clone())
    }
}

impl<S: Scalar> Sub for &Vec2<S> {
    type Output = Vec2<S>;
    fn sub(self, o: Self) -> Vec2<S> {
        Vec2::new(self.x.clone() - o.x.clone(), self.y.clone() - o.y.clone())
    }
}

impl<S: Scalar> Neg for Vec2<S> {
    type Output = Vec2<S>;
    fn neg(self) -> Self {
        Vec2::new(-self.x, -self.y)
    }
}

/// Point of the unit circle from the rational parametrization
/// `((1 - t^2) / (1 + t^2), 2t / (1 + t^2))`.
pub fn rational_circle_point(t: &ExactScalar) -> Vec2<ExactScalar> {
    let one = ExactScalar::one();
    let t2 = t * t;
    let den = &one + &t2;
    let two_t = t + t;
    Vec2::new(&(&one - &t2) / &den, &two_t / &den)
}

/// 2x2 matrix acting on column vectors, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Mat2<S> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
}

impl<S: Scalar> Mat2<S> {
    pub fn new(a: S, b: S, c: S, d: S) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2::new(S::one(), S::zero(), S::zero(), S::one())
    }

    /// Matrix whose columns are `c0` and `c1`.
    pub fn from_columns(c0: &Vec2<S>, c1: &Vec2<S>) -> Self {
        Mat2::new(c0.x.clone(), c1.x.clone(), c0.y.clone(), c1.y.clone())
    }

    pub fn column(&self, i: usize) -> Vec2<S> {
        match i {
            0 => Vec2::new(self.a.clone(), self.c.clone()),
            _ => Vec2::new(self.b.clone(), self.d.clone()),
        }
    }

    pub fn det(&self) -> S {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn apply(&self, v: &Vec2<S>) -> Vec2<S> {
        Vec2::new(
            self.a.clone() * v.x.clone() + self.b.clone() * v.y.clone(),
            self.c.clone() * v.x.clone() + self.d.clone() * v.y.clone(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        Mat2::from_columns(&self.apply(&o.column(0)), &self.apply(&o.column(1)))
    }

    /// Inverse, or `None` for a singular matrix.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        Some(Mat2::new(
            self.d.clone() / det.clone(),
            -self.b.clone() / det.clone(),
            -self.c.clone() / det.clone(),
            self.a.clone() / det,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::new(n, d)
    }

    #[test]
    fn circle_point_examples() {
        assert_eq!(
            rational_circle_point(&q(1, 3)),
            Vec2::new(q(4, 5), q(3, 5))
        );
        assert_eq!(rational_circle_point(&q(0, 1)), Vec2::new(q(1, 1), q(0, 1)));
        assert_eq!(
            rational_circle_point(&q(7, 11)),
            Vec2::new(q(36, 85), q(77, 85))
        );
    }

    #[test]
    fn rotate_basis() {
        let u = Vec2::new(q(4, 5), q(3, 5));
        assert_eq!(Vec2::<ExactScalar>::unit_x().rotate(&u), u);
        assert_eq!(
            Vec2::<ExactScalar>::unit_y().rotate(&u),
            Vec2::new(q(-3, 5), q(4, 5))
        );
    }

    #[test]
    fn matrix_inverse() {
        let m = Mat2::new(q(2, 1), q(1, 1), q(1, 3), q(5, 7));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat2::identity());
        let singular = Mat2::new(q(1, 1), q(2, 1), q(2, 1), q(4, 1));
        assert!(singular.inverse().is_none());
    }
}

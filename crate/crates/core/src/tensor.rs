use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{Matrix2, Vector2};

/// Symmetric 2×2 tensor stored by its three independent components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SymMatrix2 {
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
}

impl SymMatrix2 {
    pub const fn new(a11: f64, a12: f64, a22: f64) -> Self {
        Self { a11, a12, a22 }
    }

    pub const fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub const fn identity() -> Self {
        Self::new(1.0, 0.0, 1.0)
    }

    /// Symmetric part of an arbitrary 2×2 matrix.
    pub fn from_matrix(m: &Matrix2<f64>) -> Self {
        Self::new(m[(0, 0)], 0.5 * (m[(0, 1)] + m[(1, 0)]), m[(1, 1)])
    }

    /// Symmetric dyadic product `a ⊙ b = (a⊗b + b⊗a) / 2`.
    pub fn sym_dyad(a: &Vector2<f64>, b: &Vector2<f64>) -> Self {
        Self::new(a.x * b.x, 0.5 * (a.x * b.y + a.y * b.x), a.y * b.y)
    }

    pub fn to_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.a11, self.a12, self.a12, self.a22)
    }

    /// Components `[a11, a22, a12]`, the ordering used by all strain vectors.
    pub fn to_voigt(&self) -> [f64; 3] {
        [self.a11, self.a22, self.a12]
    }

    pub fn from_voigt(v: [f64; 3]) -> Self {
        Self::new(v[0], v[2], v[1])
    }

    /// Frobenius product `A : B`.
    pub fn frobenius(&self, other: &Self) -> f64 {
        self.a11 * other.a11 + 2.0 * self.a12 * other.a12 + self.a22 * other.a22
    }

    /// Tangential-tangential component `t · A t`.
    pub fn tt(&self, t: &Vector2<f64>) -> f64 {
        self.a11 * t.x * t.x + 2.0 * self.a12 * t.x * t.y + self.a22 * t.y * t.y
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn max_abs(&self) -> f64 {
        self.a11.abs().max(self.a12.abs()).max(self.a22.abs())
    }
}

impl Add for SymMatrix2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a11 + o.a11, self.a12 + o.a12, self.a22 + o.a22)
    }
}

impl AddAssign for SymMatrix2 {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for SymMatrix2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a11 - o.a11, self.a12 - o.a12, self.a22 - o.a22)
    }
}

impl Neg for SymMatrix2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a11, -self.a12, -self.a22)
    }
}

impl Mul<f64> for SymMatrix2 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.a11 * s, self.a12 * s, self.a22 * s)
    }
}

impl Mul<SymMatrix2> for f64 {
    type Output = SymMatrix2;
    fn mul(self, m: SymMatrix2) -> SymMatrix2 {
        m * self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym_dyad_is_symmetric_part() {
        let a = Vector2::new(-0.5, -0.5);
        let b = Vector2::new(0.5, -0.5);
        let s = SymMatrix2::sym_dyad(&a, &b);
        assert_eq!(s, SymMatrix2::new(-0.25, 0.0, 0.25));
        let full = a * b.transpose();
        assert_eq!(SymMatrix2::from_matrix(&full), s);
    }

    #[test]
    fn voigt_and_products() {
        let s = SymMatrix2::new(1.0, 2.0, 3.0);
        assert_eq!(SymMatrix2::from_voigt(s.to_voigt()), s);
        assert_eq!(s.frobenius(&SymMatrix2::identity()), 4.0);
        assert_eq!(s.frobenius(&s), 1.0 + 8.0 + 9.0);
        let t = Vector2::new(1.0, 1.0) / 2f64.sqrt();
        assert!((s.tt(&t) - 4.0).abs() < 1e-15);
    }
}

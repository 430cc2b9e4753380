//! Closed-form parameterizations of the benchmark surfaces.

use nalgebra::{Matrix3x2, Vector3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChartKind {
    /// `(x, y, 0)`
    Plane,
    /// `(R cos θ, R sin θ, z)`
    Cylinder { radius: f64 },
    /// `(R sqrt(1+z²) cos θ, R sqrt(1+z²) sin θ, z)`
    Hyperboloid { radius: f64 },
    /// `(x, y, α (y² - x²))`
    HyperbolicParaboloid { alpha: f64 },
    /// `R (cos ψ cos ζ, cos ψ sin ζ, sin ψ)`, parameters `(ζ, ψ)`
    Sphere { radius: f64 },
}

/// A smooth chart `Φ : Ω ⊂ R² → R³` with outward/upward unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartGeometry {
    pub kind: ChartKind,
}

impl ChartGeometry {
    pub fn new(kind: ChartKind) -> Self {
        Self { kind }
    }

    pub fn is_planar(&self) -> bool {
        matches!(self.kind, ChartKind::Plane)
    }

    pub fn position(&self, p: [f64; 2]) -> Vector3<f64> {
        let [a, b] = p;
        match self.kind {
            ChartKind::Plane => Vector3::new(a, b, 0.0),
            ChartKind::Cylinder { radius } => Vector3::new(radius * a.cos(), radius * a.sin(), b),
            ChartKind::Hyperboloid { radius } => {
                let r = radius * (1.0 + b * b).sqrt();
                Vector3::new(r * a.cos(), r * a.sin(), b)
            }
            ChartKind::HyperbolicParaboloid { alpha } => Vector3::new(a, b, alpha * (b * b - a * a)),
            ChartKind::Sphere { radius } => {
                Vector3::new(radius * b.cos() * a.cos(), radius * b.cos() * a.sin(), radius * b.sin())
            }
        }
    }

    /// Columns `∂Φ/∂p1`, `∂Φ/∂p2`.
    pub fn tangents(&self, p: [f64; 2]) -> Matrix3x2<f64> {
        let [a, b] = p;
        match self.kind {
            ChartKind::Plane => Matrix3x2::new(1.0, 0.0, 0.0, 1.0, 0.0, 0.0),
            ChartKind::Cylinder { radius } => {
                Matrix3x2::new(-radius * a.sin(), 0.0, radius * a.cos(), 0.0, 0.0, 1.0)
            }
            ChartKind::Hyperboloid { radius } => {
                let s = (1.0 + b * b).sqrt();
                let ds = b / s;
                Matrix3x2::new(
                    -radius * s * a.sin(),
                    radius * ds * a.cos(),
                    radius * s * a.cos(),
                    radius * ds * a.sin(),
                    0.0,
                    1.0,
                )
            }
            ChartKind::HyperbolicParaboloid { alpha } => {
                Matrix3x2::new(1.0, 0.0, 0.0, 1.0, -2.0 * alpha * a, 2.0 * alpha * b)
            }
            ChartKind::Sphere { radius } => Matrix3x2::new(
                -radius * b.cos() * a.sin(),
                -radius * b.sin() * a.cos(),
                radius * b.cos() * a.cos(),
                -radius * b.sin() * a.sin(),
                0.0,
                radius * b.cos(),
            ),
        }
    }

    pub fn normal(&self, p: [f64; 2]) -> Vector3<f64> {
        let t = self.tangents(p);
        t.column(0).cross(&t.column(1)).normalize()
    }

    /// Orthonormal tangent frame `T1 = Φ,1 / |Φ,1|`, `T2 = ν × T1`.
    pub fn tangent_frame(&self, p: [f64; 2]) -> [Vector3<f64>; 2] {
        let t = self.tangents(p);
        let t1 = t.column(0).normalize();
        let t2 = self.normal(p).cross(&t1);
        [t1, t2]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_charts() -> Vec<ChartGeometry> {
        [
            ChartKind::Plane,
            ChartKind::Cylinder { radius: 1.3 },
            ChartKind::Hyperboloid { radius: 1.0 },
            ChartKind::HyperbolicParaboloid { alpha: 0.2 },
            ChartKind::Sphere { radius: 10.0 },
        ]
        .into_iter()
        .map(ChartGeometry::new)
        .collect()
    }

    #[test]
    fn tangents_match_finite_differences() {
        let h = 1e-6;
        for chart in all_charts() {
            for p in [[0.3, 0.4], [-0.7, 0.9], [1.2, 0.1]] {
                let t = chart.tangents(p);
                for d in 0..2 {
                    let mut pp = p;
                    let mut pm = p;
                    pp[d] += h;
                    pm[d] -= h;
                    let fd = (chart.position(pp) - chart.position(pm)) / (2.0 * h);
                    assert!((fd - t.column(d)).norm() < 1e-8, "{chart:?}");
                }
            }
        }
    }

    #[test]
    fn normals_point_outward_or_up() {
        let cyl = ChartGeometry::new(ChartKind::Cylinder { radius: 1.0 });
        assert!((cyl.normal([0.0, 0.5]) - Vector3::x()).norm() < 1e-14);
        let sph = ChartGeometry::new(ChartKind::Sphere { radius: 10.0 });
        let p = [0.4, 0.8];
        assert!((sph.normal(p) - sph.position(p) / 10.0).norm() < 1e-14);
        let hyp = ChartGeometry::new(ChartKind::HyperbolicParaboloid { alpha: 0.2 });
        assert!(hyp.normal([-1.0, 0.5]).z > 0.0);
        for chart in all_charts() {
            let [t1, t2] = chart.tangent_frame([0.2, 0.3]);
            let n = chart.normal([0.2, 0.3]);
            assert!(t1.dot(&t2).abs() < 1e-14 && t1.dot(&n).abs() < 1e-14);
            assert!((t1.cross(&t2) - n).norm() < 1e-14);
        }
    }
}

use std::fmt;
use std::sync::Arc;

use nalgebra::Vector3;

/// Force per unit reference area as a function of the parameter point, the
/// reference position and the unit chart normal.
pub type SurfaceLoad = Arc<dyn Fn([f64; 2], Vector3<f64>, Vector3<f64>) -> Vector3<f64> + Send + Sync>;

/// Distributed moment on boundary edges, doing work `m Θ·T1` per unit length.
#[derive(Clone)]
pub struct EdgeMoment {
    /// Selects boundary edges by the parameter coordinates of their ends.
    pub selector: Arc<dyn Fn([f64; 2], [f64; 2]) -> bool + Send + Sync>,
    pub moment_per_length: f64,
}

#[derive(Clone, Default)]
pub struct LoadSpec {
    pub surface: Option<SurfaceLoad>,
    pub edge_moments: Vec<EdgeMoment>,
}

impl LoadSpec {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn surface<F>(f: F) -> Self
    where
        F: Fn([f64; 2], Vector3<f64>, Vector3<f64>) -> Vector3<f64> + Send + Sync + 'static,
    {
        Self {
            surface: Some(Arc::new(f)),
            edge_moments: Vec::new(),
        }
    }
}

impl fmt::Debug for LoadSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LoadSpec")
            .field("surface", &self.surface.is_some())
            .field("edge_moments", &self.edge_moments.len())
            .finish()
    }
}

//! Parameter-domain meshes, surface charts and isoparametric element maps.

pub mod chart;
pub mod map;
pub mod mesh;

pub use chart::{ChartGeometry, ChartKind};
pub use map::{element_map_at, reference_to_param, ElementMap, MapEval};
pub use mesh::{build_edges, count_entities, refine_uniform, Axis, BoundaryMarker, EntityCounts, Mesh};

//! Global numbering of the order-k Lagrange nodes; five dofs per node
//! `[u_x, u_y, u_z, θ_1, θ_2]`.

use crate::elements::{LagrangeBasis, NodeKind};
use crate::geometry::Mesh;

pub const DOFS_PER_NODE: usize = 5;

#[derive(Debug, Clone)]
pub struct NodeMap {
    order: usize,
    n_nodes: usize,
    /// Global node of each local node, per triangle.
    element_nodes: Vec<Vec<usize>>,
    /// Parameter-space position of each global node.
    positions: Vec<[f64; 2]>,
}

impl NodeMap {
    pub fn new(mesh: &Mesh, basis: &LagrangeBasis) -> Self {
        let k = basis.order();
        let nv = mesh.vertices().len();
        let ne = mesh.edges().len();
        let per_edge = k - 1;
        let per_tri = if k >= 3 { (k - 1) * (k - 2) / 2 } else { 0 };
        let n_nodes = nv + ne * per_edge + mesh.triangles().len() * per_tri;
        let mut positions = vec![[f64::NAN; 2]; n_nodes];
        let mut element_nodes = Vec::with_capacity(mesh.triangles().len());
        for (t, tri) in mesh.triangles().iter().enumerate() {
            let edges = mesh.triangle_edges(t);
            let signs = mesh.triangle_edge_signs(t);
            let verts = tri.map(|v| mesh.vertices()[v]);
            let nodes: Vec<usize> = basis
                .kinds()
                .iter()
                .enumerate()
                .map(|(i, kind)| {
                    let g = match *kind {
                        NodeKind::Vertex(v) => tri[v],
                        NodeKind::Edge { edge, index } => {
                            let m = if signs[edge] > 0 { index } else { k - index };
                            nv + edges[edge] * per_edge + m - 1
                        }
                        NodeKind::Interior(c) => nv + ne * per_edge + t * per_tri + c,
                    };
                    if positions[g][0].is_nan() {
                        let lam = basis.node_barycentric(i);
                        positions[g] = [
                            lam[0] * verts[0][0] + lam[1] * verts[1][0] + lam[2] * verts[2][0],
                            lam[0] * verts[0][1] + lam[1] * verts[1][1] + lam[2] * verts[2][1],
                        ];
                    }
                    g
                })
                .collect();
            element_nodes.push(nodes);
        }
        Self {
            order: k,
            n_nodes,
            element_nodes,
            positions,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_dofs(&self) -> usize {
        DOFS_PER_NODE * self.n_nodes
    }

    pub fn element_nodes(&self, t: usize) -> &[usize] {
        &self.element_nodes[t]
    }

    /// Global dofs of triangle `t`, local index `5 a + c`.
    pub fn element_dofs(&self, t: usize) -> Vec<usize> {
        self.element_nodes[t]
            .iter()
            .flat_map(|n| (0..DOFS_PER_NODE).map(move |c| DOFS_PER_NODE * n + c))
            .collect()
    }

    pub fn position(&self, node: usize) -> [f64; 2] {
        self.positions[node]
    }

    /// Global nodes on mesh edge `e`: both end vertices and the edge nodes.
    pub fn edge_nodes(&self, mesh: &Mesh, e: usize) -> Vec<usize> {
        let [a, b] = mesh.edges()[e];
        let nv = mesh.vertices().len();
        let per_edge = self.order - 1;
        let mut out = vec![a, b];
        out.extend((0..per_edge).map(|m| nv + e * per_edge + m));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shared_edge_nodes_coincide() {
        let mesh = Mesh::structured_rectangle([0.0, 1.0], [0.0, 1.0], 2, 2).unwrap();
        for k in 1..=4 {
            let basis = LagrangeBasis::new(k).unwrap();
            let map = NodeMap::new(&mesh, &basis);
            let counts = mesh.counts();
            assert_eq!(
                map.n_nodes(),
                counts.vertices + counts.edges * (k - 1) + counts.triangles * (k - 1) * k.saturating_sub(2) / 2
            );
            // every triangle's local node positions agree with the global ones
            for t in 0..mesh.triangles().len() {
                let verts = mesh.triangles()[t].map(|v| mesh.vertices()[v]);
                for (i, g) in map.element_nodes(t).iter().enumerate() {
                    let lam = basis.node_barycentric(i);
                    let x = lam[0] * verts[0][0] + lam[1] * verts[1][0] + lam[2] * verts[2][0];
                    let y = lam[0] * verts[0][1] + lam[1] * verts[1][1] + lam[2] * verts[2][1];
                    let p = map.position(*g);
                    assert!((p[0] - x).abs() < 1e-14 && (p[1] - y).abs() < 1e-14, "k={k}");
                }
            }
        }
    }
}

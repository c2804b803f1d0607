use super::mesh::Mesh2D;
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

/// Numbering of the interior (free) vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct DofMap {
    pub dof_of_vertex: Vec<Option<usize>>,
    pub vertex_of_dof: Vec<usize>,
}

impl DofMap {
    pub fn interior(mesh: &Mesh2D) -> Self {
        let mut dof_of_vertex = vec![None; mesh.vertex_count()];
        let mut vertex_of_dof = Vec::new();
        for (v, &b) in mesh.boundary.iter().enumerate() {
            if !b {
                dof_of_vertex[v] = Some(vertex_of_dof.len());
                vertex_of_dof.push(v);
            }
        }
        Self { dof_of_vertex, vertex_of_dof }
    }

    pub fn len(&self) -> usize {
        self.vertex_of_dof.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_of_dof.is_empty()
    }

    /// Extend a coefficient vector over all vertices with zero boundary
    /// values.
    pub fn extend(&self, x: &[f64]) -> Vec<f64> {
        self.dof_of_vertex.iter().map(|d| d.map_or(0.0, |i| x[i])).collect()
    }
}

/// P1 stiffness, consistent mass and unit load restricted to interior
/// vertices.
#[derive(Debug, Clone)]
pub struct FemSystem {
    pub dofs: DofMap,
    pub stiffness: CsrMatrix,
    pub mass: CsrMatrix,
    /// `∫ φ_i`, the load vector of the constant 1.
    pub load: Vec<f64>,
}

pub fn assemble(mesh: &Mesh2D) -> Result<FemSystem> {
    let dofs = DofMap::interior(mesh);
    let n = dofs.len();
    if n == 0 {
        return Err(Error::Mesh("mesh has no interior vertex".into()));
    }
    let mut k_trip = Vec::with_capacity(9 * mesh.triangles.len());
    let mut m_trip = Vec::with_capacity(9 * mesh.triangles.len());
    let mut load = vec![0.0; n];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let area = mesh.triangle_area(t);
        if !(area > 0.0) {
            return Err(Error::Mesh(format!("triangle {t} has non-positive area {area}")));
        }
        let p = tri.map(|v| mesh.vertices[v]);
        // gradients of barycentric coordinates: rot90 of the opposite edge / 2A
        let grad: [[f64; 2]; 3] = std::array::from_fn(|i| {
            let (a, b) = (p[(i + 1) % 3], p[(i + 2) % 3]);
            [(a[1] - b[1]) / (2.0 * area), (b[0] - a[0]) / (2.0 * area)]
        });
        for i in 0..3 {
            let Some(di) = dofs.dof_of_vertex[tri[i]] else { continue };
            load[di] += area / 3.0;
            for j in 0..3 {
                let Some(dj) = dofs.dof_of_vertex[tri[j]] else { continue };
                let kij = area * (grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1]);
                let mij = if i == j { area / 6.0 } else { area / 12.0 };
                k_trip.push((di, dj, kij));
                m_trip.push((di, dj, mij));
            }
        }
    }
    Ok(FemSystem {
        dofs,
        stiffness: CsrMatrix::from_triplets(n, k_trip),
        mass: CsrMatrix::from_triplets(n, m_trip),
        load,
    })
}

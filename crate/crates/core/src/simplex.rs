use crate::field::FrameMatrix;
use crate::rvd::VertexProvenance;
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SimplexDim {
    /// Cone `(w_i, C₁, C₂, C₃)` from the generator (volume mode).
    Tetrahedron,
    /// Triangle `(C₁, C₂, C₃)` on the surface; the generator is not a vertex.
    Triangle,
}

impl SimplexDim {
    /// Intrinsic dimension.
    pub fn n(self) -> u32 {
        match self {
            SimplexDim::Tetrahedron => 3,
            SimplexDim::Triangle => 2,
        }
    }
}

/// One piece of a restricted Voronoi cell over which the energy is integrated
/// in closed form, with the frozen frame `M_T` and the provenance of each
/// non-apex vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationSimplex {
    pub dim: SimplexDim,
    pub apex: Vec3,
    pub vertices: [Vec3; 3],
    pub frame: FrameMatrix,
    pub provenance: [VertexProvenance; 3],
    /// `+1`, or `-1` for a cone whose facet faces its apex. Cones are stored
    /// positively oriented; a cell integral is the weighted sum of its cones,
    /// which stays correct when the generator lies outside its own cell.
    pub weight: f64,
}

impl IntegrationSimplex {
    pub fn tetrahedron(apex: Vec3, vertices: [Vec3; 3], frame: FrameMatrix) -> Self {
        Self {
            dim: SimplexDim::Tetrahedron,
            apex,
            vertices,
            frame,
            provenance: [VertexProvenance::FixedDomainVertex; 3],
            weight: 1.0,
        }
    }

    pub fn triangle(apex: Vec3, vertices: [Vec3; 3], frame: FrameMatrix) -> Self {
        Self {
            dim: SimplexDim::Triangle,
            ..Self::tetrahedron(apex, vertices, frame)
        }
    }

    pub fn with_provenance(mut self, provenance: [VertexProvenance; 3]) -> Self {
        self.provenance = provenance;
        self
    }

    /// `U_j = M_T (C_j − w_i)`.
    pub fn edge_vectors(&self) -> [Vec3; 3] {
        self.vertices.map(|c| self.frame.m * (c - self.apex))
    }

    /// Signed volume in world coordinates (tetrahedra only).
    pub fn signed_volume(&self) -> f64 {
        let [a, b, c] = self.vertices.map(|v| v - self.apex);
        a.dot(&b.cross(&c)) / 6.0
    }

    /// Measure in world coordinates: volume or area, always `>= 0`.
    pub fn world_measure(&self) -> f64 {
        match self.dim {
            SimplexDim::Tetrahedron => self.signed_volume().abs(),
            SimplexDim::Triangle => {
                let [a, b, c] = self.vertices;
                0.5 * (a - c).cross(&(b - c)).norm()
            }
        }
    }

    /// All points of the simplex (apex first for tetrahedra).
    pub fn points(&self) -> Vec<Vec3> {
        match self.dim {
            SimplexDim::Tetrahedron => {
                let [a, b, c] = self.vertices;
                vec![self.apex, a, b, c]
            }
            SimplexDim::Triangle => self.vertices.to_vec(),
        }
    }

    pub fn barycenter(&self) -> Vec3 {
        let pts = self.points();
        pts.iter().sum::<Vec3>() / pts.len() as f64
    }
}

//! Restricted Voronoi diagrams.
//!
//! Volume mode clips a convex polytope by the bisector half-spaces of each
//! generator; surface mode clips every mesh triangle the same way. Cell
//! vertices keep the planes that define them ([`VertexProvenance`]) so their
//! derivatives with respect to the generators can be formed exactly.

mod circumcenter;
mod polytope;
mod surface;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use circumcenter::{
    circumcenter, circumcenter_jacobian, constrained_vertex_jacobian, provenance_position,
    CircumcenterSystem, EPS_GEO,
};
pub use polytope::{Clip, Face, PolyVertex, Polytope};

use crate::field::TensorField;
use crate::simplex::IntegrationSimplex;
use crate::{Error, Result, Vec3};

/// Vertices closer than this (times the domain scale) to a clipping plane are
/// treated as lying on it.
pub const EPS_CLIP: f64 = 1e-12;

/// A plane of the domain that does not move with the generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FixedPlane {
    /// Index into the volume domain's half-spaces.
    HalfSpace(usize),
    /// Supporting plane of a surface triangle.
    TrianglePlane(usize),
    /// Plane through edge `edge` (corner `edge` to `edge + 1`) of a surface
    /// triangle, perpendicular to the triangle.
    TriangleEdge { triangle: usize, edge: u8 },
}

/// Clipping plane label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaneId {
    Fixed(FixedPlane),
    /// Bisector between the cell's own generator and generator `j`.
    Bisector(usize),
    /// Face of the temporary bounding box used while building a domain.
    Bound(u8),
}

/// How a simplex vertex depends on the generators. Seed lists start with the
/// owning cell's generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexProvenance {
    SeedApex(usize),
    /// Circumcenter of four generators.
    ThreeBisectors { seeds: [usize; 4] },
    TwoBisectorsOnePlane { seeds: [usize; 3], plane: FixedPlane },
    OneBisectorTwoPlanes { seeds: [usize; 2], planes: [FixedPlane; 2] },
    /// A bisector crossing a surface triangle edge.
    OneBisectorMeshEdge { seeds: [usize; 2], triangle: usize, edge: u8 },
    FixedDomainVertex,
}

impl VertexProvenance {
    /// Derives the provenance from the three plane labels of a vertex of
    /// generator `owner`'s cell.
    pub(crate) fn from_labels(owner: usize, labels: &[PlaneId; 3]) -> Self {
        let mut bis = Vec::with_capacity(3);
        let mut fixed = Vec::with_capacity(3);
        for l in labels {
            match *l {
                PlaneId::Bisector(j) => bis.push(j),
                PlaneId::Fixed(f) => fixed.push(f),
                PlaneId::Bound(_) => {}
            }
        }
        match (bis.len(), fixed.len()) {
            (3, _) => VertexProvenance::ThreeBisectors {
                seeds: [owner, bis[0], bis[1], bis[2]],
            },
            (2, 1) => VertexProvenance::TwoBisectorsOnePlane {
                seeds: [owner, bis[0], bis[1]],
                plane: fixed[0],
            },
            (1, 2) => match (fixed[0], fixed[1]) {
                (FixedPlane::TrianglePlane(t), FixedPlane::TriangleEdge { triangle, edge })
                | (FixedPlane::TriangleEdge { triangle, edge }, FixedPlane::TrianglePlane(t))
                    if t == triangle =>
                {
                    VertexProvenance::OneBisectorMeshEdge {
                        seeds: [owner, bis[0]],
                        triangle,
                        edge,
                    }
                }
                (p, q) => VertexProvenance::OneBisectorTwoPlanes {
                    seeds: [owner, bis[0]],
                    planes: [p, q],
                },
            },
            _ => VertexProvenance::FixedDomainVertex,
        }
    }
}

/// Generators `w_1 … w_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedSet {
    pub points: Vec<Vec3>,
}

impl SeedSet {
    /// Requires at least one finite point and pairwise separation above
    /// `1e-12` times the bounding extent.
    pub fn new(points: Vec<Vec3>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidSeeds("no seeds".into()));
        }
        if let Some(i) = points.iter().position(|p| !p.iter().all(|c| c.is_finite())) {
            return Err(Error::InvalidSeeds(format!("seed {i} is not finite")));
        }
        let scale = bounding_extent(&points).max(f64::MIN_POSITIVE);
        let tol2 = (1e-12 * scale).powi(2);
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if (points[i] - points[j]).norm_squared() <= tol2 {
                    return Err(Error::InvalidSeeds(format!("seeds {i} and {j} coincide")));
                }
            }
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Deterministic uniform perturbation of every coordinate by at most
    /// `magnitude`.
    pub fn jittered(&self, magnitude: f64, rng_seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let points = self
            .points
            .iter()
            .map(|p| p + Vec3::from_fn(|_, _| rng.random_range(-magnitude..=magnitude)))
            .collect();
        Self::new(points)
    }

    /// Flattened `[x0, y0, z0, x1, …]`.
    pub fn to_flat(&self) -> Vec<f64> {
        self.points.iter().flat_map(|p| [p.x, p.y, p.z]).collect()
    }

    pub fn from_flat(x: &[f64]) -> Result<Self> {
        Self::new(x.chunks_exact(3).map(|c| Vec3::new(c[0], c[1], c[2])).collect())
    }
}

fn bounding_extent(points: &[Vec3]) -> f64 {
    let mut lo = Vec3::repeat(f64::INFINITY);
    let mut hi = Vec3::repeat(f64::NEG_INFINITY);
    for p in points {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    (hi - lo).amax().max(0.0)
}

/// Index of the nearest generator; the lowest index wins ties.
pub fn nearest_seed(seeds: &SeedSet, x: &Vec3) -> usize {
    let mut best = 0;
    let mut best_d2 = f64::INFINITY;
    for (i, w) in seeds.points.iter().enumerate() {
        let d2 = (w - x).norm_squared();
        if d2 < best_d2 {
            best = i;
            best_d2 = d2;
        }
    }
    best
}

/// `n·x <= offset` with `‖n‖ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpace {
    pub normal: Vec3,
    pub offset: f64,
}

impl HalfSpace {
    /// Normalizes `normal` (and the offset with it).
    pub fn new(normal: Vec3, offset: f64) -> Result<Self> {
        let len = normal.norm();
        if !(len > 0.0) || !len.is_finite() || !offset.is_finite() {
            return Err(Error::InvalidDomain("half-space normal must be finite and non-zero".into()));
        }
        Ok(Self {
            normal: normal / len,
            offset: offset / len,
        })
    }
}

/// Bounded convex polytope given as an intersection of half-spaces.
#[derive(Debug, Clone)]
pub struct ConvexVolume {
    half_spaces: Vec<HalfSpace>,
    polytope: Polytope,
    scale: f64,
}

impl ConvexVolume {
    pub fn new(half_spaces: Vec<HalfSpace>) -> Result<Self> {
        if half_spaces.is_empty() {
            return Err(Error::UnboundedPolytope);
        }
        let reach = half_spaces.iter().map(|h| h.offset.abs()).fold(1.0, f64::max);
        let big = 1e6 * reach;
        let first = Self::clip_box(&half_spaces, Vec3::repeat(-big), Vec3::repeat(big), 1e-12 * big)?;
        if first.faces.iter().any(|f| matches!(f.plane, PlaneId::Bound(_))) {
            return Err(Error::UnboundedPolytope);
        }
        let (lo, hi) = first.bounds();
        let diag = (hi - lo).norm();
        let pad = Vec3::repeat(0.5 * diag + 1e-9);
        let polytope = Self::clip_box(&half_spaces, lo - pad, hi + pad, EPS_CLIP * diag)?;
        if polytope.faces.iter().any(|f| matches!(f.plane, PlaneId::Bound(_))) {
            return Err(Error::UnboundedPolytope);
        }
        if !(polytope.volume() > 0.0) {
            return Err(Error::EmptyDomain);
        }
        let (lo, hi) = polytope.bounds();
        Ok(Self {
            half_spaces,
            scale: (hi - lo).norm(),
            polytope,
        })
    }

    fn clip_box(hs: &[HalfSpace], lo: Vec3, hi: Vec3, eps: f64) -> Result<Polytope> {
        let plane_of = |id: PlaneId| -> (Vec3, f64) {
            match id {
                PlaneId::Fixed(FixedPlane::HalfSpace(k)) => (hs[k].normal, hs[k].offset),
                PlaneId::Bound(b) => {
                    let axis = (b / 2) as usize;
                    let mut n = Vec3::zeros();
                    if b % 2 == 0 {
                        n[axis] = -1.0;
                        (n, -lo[axis])
                    } else {
                        n[axis] = 1.0;
                        (n, hi[axis])
                    }
                }
                _ => (Vec3::zeros(), 0.0),
            }
        };
        let mut poly = Polytope::cuboid(lo, hi);
        for (k, h) in hs.iter().enumerate() {
            let id = PlaneId::Fixed(FixedPlane::HalfSpace(k));
            match poly.clip(id, &h.normal, h.offset, eps, plane_of) {
                Clip::Unchanged => {}
                Clip::Empty => return Err(Error::EmptyDomain),
                Clip::Clipped(p) => poly = p,
            }
        }
        Ok(poly)
    }

    /// Axis-aligned box `[lo, hi]`.
    pub fn cuboid(lo: Vec3, hi: Vec3) -> Result<Self> {
        let mut hs = Vec::with_capacity(6);
        for axis in 0..3 {
            let mut n = Vec3::zeros();
            n[axis] = -1.0;
            hs.push(HalfSpace::new(n, -lo[axis])?);
            n[axis] = 1.0;
            hs.push(HalfSpace::new(n, hi[axis])?);
        }
        Self::new(hs)
    }

    pub fn half_spaces(&self) -> &[HalfSpace] {
        &self.half_spaces
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn volume(&self) -> f64 {
        self.polytope.volume()
    }

    pub fn contains(&self, x: &Vec3) -> bool {
        let tol = EPS_CLIP * self.scale;
        self.half_spaces.iter().all(|h| h.normal.dot(x) <= h.offset + tol)
    }
}

/// Triangle mesh surface.
#[derive(Debug, Clone)]
pub struct TriangleMesh {
    vertices: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
    normals: Vec<Vec3>,
    scale: f64,
}

impl TriangleMesh {
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::EmptyDomain);
        }
        let scale = bounding_extent(&vertices);
        let mut normals = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::InvalidDomain(format!("triangle {t} references a missing vertex")));
            }
            let [a, b, c] = tri.map(|v| vertices[v]);
            let n = (b - a).cross(&(c - a));
            if !(0.5 * n.norm() > 1e-14 * scale * scale) {
                return Err(Error::InvalidDomain(format!("triangle {t} is degenerate")));
            }
            normals.push(n.normalize());
        }
        Ok(Self {
            vertices,
            triangles,
            normals,
            scale,
        })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn corners(&self, t: usize) -> [Vec3; 3] {
        self.triangles[t].map(|v| self.vertices[v])
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        0.5 * (b - a).cross(&(c - a)).norm()
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    fn triangle_plane(&self, t: usize) -> (Vec3, f64) {
        let n = self.normals[t];
        (n, n.dot(&self.vertices[self.triangles[t][0]]))
    }

    fn edge_plane(&self, t: usize, e: u8) -> (Vec3, f64) {
        let c = self.corners(t);
        let a = c[e as usize % 3];
        let b = c[(e as usize + 1) % 3];
        let n = (b - a).cross(&self.normals[t]).normalize();
        (n, n.dot(&a))
    }
}

#[derive(Debug, Clone)]
pub enum Domain {
    Volume(ConvexVolume),
    Surface(TriangleMesh),
}

impl Domain {
    pub fn unit_cube() -> Self {
        Domain::Volume(ConvexVolume::cuboid(Vec3::zeros(), Vec3::repeat(1.0)).expect("unit cube is bounded"))
    }

    pub fn volume(half_spaces: Vec<HalfSpace>) -> Result<Self> {
        Ok(Domain::Volume(ConvexVolume::new(half_spaces)?))
    }

    pub fn surface(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        Ok(Domain::Surface(TriangleMesh::new(vertices, triangles)?))
    }

    pub fn is_volume(&self) -> bool {
        matches!(self, Domain::Volume(_))
    }

    /// Volume or area.
    pub fn measure(&self) -> f64 {
        match self {
            Domain::Volume(v) => v.volume(),
            Domain::Surface(s) => s.area(),
        }
    }

    /// Bounding box diagonal.
    pub fn scale(&self) -> f64 {
        match self {
            Domain::Volume(v) => v.scale,
            Domain::Surface(s) => s.scale * 3f64.sqrt(),
        }
    }

    pub fn bounds(&self) -> (Vec3, Vec3) {
        match self {
            Domain::Volume(v) => v.polytope.bounds(),
            Domain::Surface(s) => {
                let mut lo = Vec3::repeat(f64::INFINITY);
                let mut hi = Vec3::repeat(f64::NEG_INFINITY);
                for p in &s.vertices {
                    lo = lo.inf(p);
                    hi = hi.sup(p);
                }
                (lo, hi)
            }
        }
    }

    /// Same domain with every coordinate multiplied by `s > 0`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        match self {
            Domain::Volume(v) => Domain::volume(
                v.half_spaces
                    .iter()
                    .map(|h| HalfSpace {
                        normal: h.normal,
                        offset: h.offset * s,
                    })
                    .collect(),
            ),
            Domain::Surface(m) => Domain::surface(m.vertices.iter().map(|p| p * s).collect(), m.triangles.clone()),
        }
    }

    /// `(n, d)` of a fixed plane `n·x = d`.
    pub fn fixed_plane(&self, p: &FixedPlane) -> Result<(Vec3, f64)> {
        match (self, *p) {
            (Domain::Volume(v), FixedPlane::HalfSpace(k)) if k < v.half_spaces.len() => {
                Ok((v.half_spaces[k].normal, v.half_spaces[k].offset))
            }
            (Domain::Surface(s), FixedPlane::TrianglePlane(t)) if t < s.triangles.len() => Ok(s.triangle_plane(t)),
            (Domain::Surface(s), FixedPlane::TriangleEdge { triangle, edge })
                if triangle < s.triangles.len() && edge < 3 =>
            {
                Ok(s.edge_plane(triangle, edge))
            }
            _ => Err(Error::InvalidDomain(format!("{p:?} does not belong to this domain"))),
        }
    }

    /// Uniform samples inside the volume (rejection from the bounding box) or
    /// on the surface (area-weighted triangle choice).
    pub fn sample_uniform(&self, n: usize, rng_seed: u64) -> Vec<Vec3> {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        match self {
            Domain::Volume(v) => {
                let (lo, hi) = v.polytope.bounds();
                let mut out = Vec::with_capacity(n);
                while out.len() < n {
                    let x = Vec3::from_fn(|r, _| rng.random_range(lo[r]..=hi[r]));
                    if v.contains(&x) {
                        out.push(x);
                    }
                }
                out
            }
            Domain::Surface(s) => {
                let mut cdf = Vec::with_capacity(s.triangles.len());
                let mut acc = 0.0;
                for t in 0..s.triangles.len() {
                    acc += s.triangle_area(t);
                    cdf.push(acc);
                }
                (0..n)
                    .map(|_| {
                        let r = rng.random_range(0.0..acc);
                        let t = cdf.partition_point(|&c| c <= r).min(cdf.len() - 1);
                        let [a, b, c] = s.corners(t);
                        let (mut u, mut v): (f64, f64) = (rng.random(), rng.random());
                        if u + v > 1.0 {
                            u = 1.0 - u;
                            v = 1.0 - v;
                        }
                        a + (b - a) * u + (c - a) * v
                    })
                    .collect()
            }
        }
    }
}

/// `Ω_i ∩ Ω` cut into integration simplices.
#[derive(Debug, Clone)]
pub struct RestrictedCell {
    pub seed_index: usize,
    pub simplices: Vec<IntegrationSimplex>,
    /// Boundary polygons (volume) or restricted polygons (surface).
    pub polygons: Vec<Vec<Vec3>>,
    /// World volume or area of the restricted cell.
    pub measure: f64,
    /// Volume mode: the generator is outside the domain.
    pub outside_domain: bool,
}

impl RestrictedCell {
    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }
}

/// Other generators of each seed sorted by distance (ties by index).
fn neighbor_order(seeds: &SeedSet) -> Vec<Vec<usize>> {
    let w = &seeds.points;
    (0..w.len())
        .into_par_iter()
        .map(|i| {
            let mut others: Vec<(f64, usize)> = (0..w.len())
                .filter(|&j| j != i)
                .map(|j| ((w[j] - w[i]).norm_squared(), j))
                .collect();
            others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            others.into_iter().map(|(_, j)| j).collect()
        })
        .collect()
}

pub(crate) fn bisector_plane(seeds: &SeedSet, i: usize, j: usize) -> (Vec3, f64) {
    let (wi, wj) = (seeds.points[i], seeds.points[j]);
    let n = wj - wi;
    (n, 0.5 * n.dot(&(wi + wj)))
}

/// Clips the domain polytope to generator `i`'s Voronoi region. Neighbors are
/// visited by increasing distance and the loop stops once the next bisector
/// is farther than the current cell radius.
pub fn clip_volume_cell(seeds: &SeedSet, volume: &ConvexVolume, i: usize, order: &[usize]) -> Option<Polytope> {
    let wi = seeds.points[i];
    let eps = EPS_CLIP * volume.scale;
    let plane_of = |id: PlaneId| -> (Vec3, f64) {
        match id {
            PlaneId::Fixed(FixedPlane::HalfSpace(k)) => {
                (volume.half_spaces[k].normal, volume.half_spaces[k].offset)
            }
            PlaneId::Bisector(j) => bisector_plane(seeds, i, j),
            _ => (Vec3::zeros(), 0.0),
        }
    };
    let mut poly = volume.polytope.clone();
    let mut radius = poly.radius_from(&wi);
    for &j in order {
        if (seeds.points[j] - wi).norm() > 2.0 * radius {
            break;
        }
        let (n, d) = bisector_plane(seeds, i, j);
        match poly.clip(PlaneId::Bisector(j), &n, d, eps, plane_of) {
            Clip::Unchanged => {}
            Clip::Empty => return None,
            Clip::Clipped(p) => {
                poly = p;
                radius = poly.radius_from(&wi);
            }
        }
    }
    Some(poly)
}

/// Cones from `apex` over a fan triangulation of every facet. Each fan starts
/// at the facet vertex with the smallest plane labels; cones are stored
/// positively oriented with `weight = -1` when the facet faces the apex.
pub fn decompose_cell(
    poly: &Polytope,
    apex: Vec3,
    owner: usize,
    field: &TensorField,
) -> Result<Vec<IntegrationSimplex>> {
    let prov: Vec<VertexProvenance> = poly
        .verts
        .iter()
        .map(|v| VertexProvenance::from_labels(owner, &v.planes))
        .collect();
    let mut out = Vec::new();
    for face in &poly.faces {
        let m = face.verts.len();
        let root = (0..m)
            .min_by(|&a, &b| poly.verts[face.verts[a]].planes.cmp(&poly.verts[face.verts[b]].planes))
            .unwrap_or(0);
        let ring: Vec<usize> = (0..m).map(|k| face.verts[(root + k) % m]).collect();
        for k in 1..m - 1 {
            let (r, mut a, mut b) = (ring[0], ring[k], ring[k + 1]);
            let pos = |v: usize| poly.verts[v].pos;
            let signed = (pos(r) - apex).dot(&(pos(a) - apex).cross(&(pos(b) - apex)));
            let mut weight = 1.0;
            if signed < 0.0 {
                std::mem::swap(&mut a, &mut b);
                weight = -1.0;
            }
            let mut s = IntegrationSimplex::tetrahedron(apex, [pos(r), pos(a), pos(b)], crate::field::FrameMatrix::identity())
                .with_provenance([prov[r], prov[a], prov[b]]);
            s.frame = field.eval(&s.barycenter())?;
            s.weight = weight;
            out.push(s);
        }
    }
    Ok(out)
}

/// Restricted Voronoi diagram: one cell per generator, in generator order.
pub fn build_rvd(seeds: &SeedSet, domain: &Domain, field: &TensorField) -> Result<Vec<RestrictedCell>> {
    let order = neighbor_order(seeds);
    match domain {
        Domain::Volume(volume) => (0..seeds.len())
            .into_par_iter()
            .map(|i| {
                let wi = seeds.points[i];
                let outside_domain = !volume.contains(&wi);
                let Some(poly) = clip_volume_cell(seeds, volume, i, &order[i]) else {
                    return Ok(RestrictedCell {
                        seed_index: i,
                        simplices: Vec::new(),
                        polygons: Vec::new(),
                        measure: 0.0,
                        outside_domain,
                    });
                };
                Ok(RestrictedCell {
                    seed_index: i,
                    simplices: decompose_cell(&poly, wi, i, field)?,
                    polygons: poly.face_polygons(),
                    measure: poly.volume(),
                    outside_domain,
                })
            })
            .collect(),
        Domain::Surface(mesh) => surface::build(seeds, mesh, field, &order),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total_volume(cells: &[RestrictedCell]) -> f64 {
        cells
            .iter()
            .flat_map(|c| c.simplices.iter())
            .map(|s| s.weight * s.world_measure())
            .sum()
    }

    #[test]
    fn nearest_seed_examples() {
        let seeds = SeedSet::new(vec![Vec3::zeros(), Vec3::new(2.0, 0.0, 0.0)]).unwrap();
        assert_eq!(nearest_seed(&seeds, &Vec3::new(0.5, 0.0, 0.0)), 0);
        assert_eq!(nearest_seed(&seeds, &Vec3::new(1.0, 0.0, 0.0)), 0);
        assert_eq!(nearest_seed(&seeds, &Vec3::new(2.0, 0.0, 0.0)), 1);
    }

    #[test]
    fn seed_validation() {
        assert!(SeedSet::new(vec![]).is_err());
        assert!(SeedSet::new(vec![Vec3::zeros(), Vec3::zeros()]).is_err());
        assert!(SeedSet::new(vec![Vec3::new(f64::NAN, 0.0, 0.0)]).is_err());
        let s = SeedSet::new(vec![Vec3::zeros(), Vec3::x()]).unwrap();
        let j = s.jittered(1e-9, 3).unwrap();
        assert_eq!(j, s.jittered(1e-9, 3).unwrap());
        assert!((j.points[1] - s.points[1]).amax() <= 1e-9);
    }

    #[test]
    fn unbounded_and_empty_domains() {
        let hs = vec![HalfSpace::new(Vec3::x(), 1.0).unwrap()];
        assert!(matches!(Domain::volume(hs), Err(Error::UnboundedPolytope)));
        let mut hs: Vec<HalfSpace> = match Domain::unit_cube() {
            Domain::Volume(v) => v.half_spaces().to_vec(),
            _ => unreachable!(),
        };
        hs.push(HalfSpace::new(Vec3::x(), -1.0).unwrap());
        assert!(matches!(Domain::volume(hs), Err(Error::EmptyDomain)));
    }

    #[test]
    fn tilted_domain_volume() {
        // Unit cube with the x+y+z <= 1.5 corner cut away.
        let mut hs: Vec<HalfSpace> = match Domain::unit_cube() {
            Domain::Volume(v) => v.half_spaces().to_vec(),
            _ => unreachable!(),
        };
        hs.push(HalfSpace::new(Vec3::repeat(1.0), 2.5).unwrap());
        let d = Domain::volume(hs).unwrap();
        assert!((d.measure() - (1.0 - 0.125 / 6.0)).abs() < 1e-14);
    }

    #[test]
    fn single_seed_fills_cube() {
        let seeds = SeedSet::new(vec![Vec3::repeat(0.5)]).unwrap();
        let cells = build_rvd(&seeds, &Domain::unit_cube(), &TensorField::identity()).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].simplices.len(), 12);
        assert!((cells[0].measure - 1.0).abs() < 1e-14);
        assert!((total_volume(&cells) - 1.0).abs() < 1e-14);
        for s in &cells[0].simplices {
            assert_eq!(s.weight, 1.0);
            assert!(s.provenance.iter().all(|p| *p == VertexProvenance::FixedDomainVertex));
        }
    }

    #[test]
    fn two_seeds_split_cube() {
        let seeds = SeedSet::new(vec![Vec3::new(0.25, 0.5, 0.5), Vec3::new(0.75, 0.5, 0.5)]).unwrap();
        let cells = build_rvd(&seeds, &Domain::unit_cube(), &TensorField::identity()).unwrap();
        for c in &cells {
            assert!((c.measure - 0.5).abs() < 1e-14);
            for s in &c.simplices {
                for v in &s.vertices {
                    if c.seed_index == 0 {
                        assert!(v.x <= 0.5 + 1e-14);
                    } else {
                        assert!(v.x >= 0.5 - 1e-14);
                    }
                }
            }
        }
        let n_bisector = cells[0]
            .simplices
            .iter()
            .flat_map(|s| s.provenance.iter())
            .filter(|p| matches!(p, VertexProvenance::OneBisectorTwoPlanes { seeds: [0, 1], .. }))
            .count();
        assert!(n_bisector > 0);
    }

    #[test]
    fn cube_cone_from_corner() {
        let poly = Polytope::cuboid(Vec3::zeros(), Vec3::repeat(1.0));
        let s = decompose_cell(&poly, Vec3::zeros(), 0, &TensorField::identity()).unwrap();
        assert_eq!(s.len(), 12);
        let v: f64 = s.iter().map(|t| t.weight * t.world_measure()).sum();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tetrahedral_cell_with_apex_at_vertex() {
        let hs = vec![
            HalfSpace::new(-Vec3::x(), 0.0).unwrap(),
            HalfSpace::new(-Vec3::y(), 0.0).unwrap(),
            HalfSpace::new(-Vec3::z(), 0.0).unwrap(),
            HalfSpace::new(Vec3::repeat(1.0), 1.0).unwrap(),
        ];
        let Domain::Volume(v) = Domain::volume(hs).unwrap() else {
            unreachable!()
        };
        let s = decompose_cell(v.polytope(), Vec3::zeros(), 0, &TensorField::identity()).unwrap();
        assert_eq!(s.len(), 4);
        let degenerate = s.iter().filter(|t| t.world_measure() < 1e-15).count();
        assert_eq!(degenerate, 3);
        let vol: f64 = s.iter().map(|t| t.weight * t.world_measure()).sum();
        assert!((vol - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn random_partition_and_ownership() {
        let domain = Domain::unit_cube();
        let seeds = SeedSet::new(domain.sample_uniform(50, 42)).unwrap();
        let cells = build_rvd(&seeds, &domain, &TensorField::identity()).unwrap();
        assert!((total_volume(&cells) - 1.0).abs() <= 1e-9);
        let sum: f64 = cells.iter().map(|c| c.measure).sum();
        assert!((sum - 1.0).abs() <= 1e-9);
        for c in &cells {
            for s in &c.simplices {
                // Interior point of each cone belongs to the cell's seed.
                let p = (s.apex + s.vertices[0] + s.vertices[1] + s.vertices[2]) / 4.0;
                if s.world_measure() > 1e-9 {
                    let w = &seeds.points;
                    let di = (p - w[c.seed_index]).norm();
                    let dmin = w.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min);
                    assert!(di <= dmin + 1e-9);
                }
            }
        }
    }

    #[test]
    fn seed_outside_domain_keeps_partition() {
        let domain = Domain::unit_cube();
        let mut pts = domain.sample_uniform(10, 5);
        pts.push(Vec3::new(1.2, 0.5, 0.5));
        let seeds = SeedSet::new(pts).unwrap();
        let cells = build_rvd(&seeds, &domain, &TensorField::identity()).unwrap();
        assert!(cells[10].outside_domain);
        assert!((total_volume(&cells) - 1.0).abs() <= 1e-9);
    }
}

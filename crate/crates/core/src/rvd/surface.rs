use rayon::prelude::*;

use super::polytope::solve_planes;
use super::{bisector_plane, FixedPlane, PlaneId, RestrictedCell, SeedSet, TriangleMesh, VertexProvenance, EPS_CLIP};
use crate::field::{FrameMatrix, TensorField};
use crate::simplex::IntegrationSimplex;
use crate::{Result, Vec3};

#[derive(Debug, Clone, Copy)]
struct PolyPoint {
    pos: Vec3,
    planes: [PlaneId; 3],
    /// Line through this point and the next one.
    edge: PlaneId,
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    In,
    On,
    Out,
}

fn triangle_polygon(t: usize, corners: &[Vec3; 3]) -> Vec<PolyPoint> {
    let tp = PlaneId::Fixed(FixedPlane::TrianglePlane(t));
    let edge = |e: usize| PlaneId::Fixed(FixedPlane::TriangleEdge { triangle: t, edge: e as u8 });
    (0..3)
        .map(|e| PolyPoint {
            pos: corners[e],
            planes: super::polytope::sorted3([tp, edge((e + 2) % 3), edge(e)]),
            edge: edge(e),
        })
        .collect()
}

/// Clips a convex polygon against `n·x <= d`. Returns `None` when the
/// polygon is unchanged.
fn clip_polygon<P>(
    poly: &[PolyPoint],
    support: PlaneId,
    id: PlaneId,
    n: &Vec3,
    d: f64,
    eps: f64,
    plane_of: P,
) -> Option<Vec<PolyPoint>>
where
    P: Fn(PlaneId) -> (Vec3, f64),
{
    let dist: Vec<f64> = poly.iter().map(|v| n.dot(&v.pos) - d).collect();
    let side: Vec<Side> = dist
        .iter()
        .map(|&s| {
            if s > eps {
                Side::Out
            } else if s < -eps {
                Side::In
            } else {
                Side::On
            }
        })
        .collect();
    if !side.contains(&Side::Out) {
        return None;
    }
    if !side.contains(&Side::In) {
        return Some(Vec::new());
    }
    let m = poly.len();
    let mut out: Vec<PolyPoint> = Vec::with_capacity(m + 1);
    for k in 0..m {
        let (a, b) = (poly[k], poly[(k + 1) % m]);
        let (sa, sb) = (side[k], side[(k + 1) % m]);
        if sa != Side::Out {
            let mut pa = a;
            if sa == Side::On && sb == Side::Out {
                pa.edge = id;
            }
            out.push(pa);
        }
        let crosses = (sa == Side::In && sb == Side::Out) || (sa == Side::Out && sb == Side::In);
        if crosses {
            let planes = super::polytope::sorted3([support, a.edge, id]);
            let t = dist[k] / (dist[k] - dist[(k + 1) % m]);
            let pos = solve_planes(&planes.map(&plane_of)).unwrap_or_else(|| a.pos + (b.pos - a.pos) * t);
            out.push(PolyPoint {
                pos,
                planes,
                edge: if sa == Side::In { id } else { a.edge },
            });
        }
    }
    Some(out)
}

fn polygon_area(poly: &[PolyPoint]) -> f64 {
    let mut n = Vec3::zeros();
    for k in 1..poly.len().saturating_sub(1) {
        n += (poly[k].pos - poly[0].pos).cross(&(poly[k + 1].pos - poly[0].pos));
    }
    0.5 * n.norm()
}

/// Seeds that may own part of triangle `t`: any point of the triangle is
/// within `U_t` of its nearest seed, so seeds farther than that from the
/// whole triangle can be skipped.
fn candidates(seeds: &SeedSet, corners: &[Vec3; 3]) -> Vec<usize> {
    let g = (corners[0] + corners[1] + corners[2]) / 3.0;
    let rho = corners.iter().map(|c| (c - g).norm()).fold(0.0, f64::max);
    let reach = |w: &Vec3| corners.iter().map(|c| (c - w).norm()).fold(0.0, f64::max);
    let u = seeds.points.iter().map(reach).fold(f64::INFINITY, f64::min);
    (0..seeds.len())
        .filter(|&i| (seeds.points[i] - g).norm() - rho <= u * (1.0 + 1e-12))
        .collect()
}

type Piece = (usize, Vec<IntegrationSimplex>, Vec<Vec3>, f64);

fn restrict_triangle(
    seeds: &SeedSet,
    mesh: &TriangleMesh,
    field: &TensorField,
    order: &[Vec<usize>],
    t: usize,
) -> Result<Vec<Piece>> {
    let corners = mesh.corners(t);
    let eps = EPS_CLIP * mesh.scale;
    let support = PlaneId::Fixed(FixedPlane::TrianglePlane(t));
    let mut pieces = Vec::new();
    for i in candidates(seeds, &corners) {
        let wi = seeds.points[i];
        let plane_of = |id: PlaneId| -> (Vec3, f64) {
            match id {
                PlaneId::Fixed(FixedPlane::TrianglePlane(t)) => mesh.triangle_plane(t),
                PlaneId::Fixed(FixedPlane::TriangleEdge { triangle, edge }) => mesh.edge_plane(triangle, edge),
                PlaneId::Bisector(j) => bisector_plane(seeds, i, j),
                _ => (Vec3::zeros(), 0.0),
            }
        };
        let mut poly = triangle_polygon(t, &corners);
        let radius = |poly: &[PolyPoint]| poly.iter().map(|v| (v.pos - wi).norm()).fold(0.0, f64::max);
        let mut r = radius(&poly);
        for &j in &order[i] {
            if (seeds.points[j] - wi).norm() > 2.0 * r {
                break;
            }
            let (n, d) = bisector_plane(seeds, i, j);
            if let Some(p) = clip_polygon(&poly, support, PlaneId::Bisector(j), &n, d, eps, plane_of) {
                poly = p;
                if poly.len() < 3 {
                    poly.clear();
                    break;
                }
                r = radius(&poly);
            }
        }
        if poly.len() < 3 {
            continue;
        }
        let m = poly.len();
        let root = (0..m).min_by(|&a, &b| poly[a].planes.cmp(&poly[b].planes)).unwrap_or(0);
        let ring: Vec<PolyPoint> = (0..m).map(|k| poly[(root + k) % m]).collect();
        let prov = |v: &PolyPoint| VertexProvenance::from_labels(i, &v.planes);
        let mut simplices = Vec::with_capacity(m - 2);
        for k in 1..m - 1 {
            let tri = [ring[0], ring[k], ring[k + 1]];
            let mut s = IntegrationSimplex::triangle(wi, tri.map(|v| v.pos), FrameMatrix::identity())
                .with_provenance(tri.map(|v| prov(&v)));
            s.frame = field.eval(&s.barycenter())?;
            simplices.push(s);
        }
        pieces.push((i, simplices, ring.iter().map(|v| v.pos).collect(), polygon_area(&ring)));
    }
    Ok(pieces)
}

pub(super) fn build(
    seeds: &SeedSet,
    mesh: &TriangleMesh,
    field: &TensorField,
    order: &[Vec<usize>],
) -> Result<Vec<RestrictedCell>> {
    let per_triangle: Vec<Vec<Piece>> = (0..mesh.triangles.len())
        .into_par_iter()
        .map(|t| restrict_triangle(seeds, mesh, field, order, t))
        .collect::<Result<_>>()?;
    let mut cells: Vec<RestrictedCell> = (0..seeds.len())
        .map(|i| RestrictedCell {
            seed_index: i,
            simplices: Vec::new(),
            polygons: Vec::new(),
            measure: 0.0,
            outside_domain: false,
        })
        .collect();
    for (i, simplices, polygon, area) in per_triangle.into_iter().flatten() {
        let c = &mut cells[i];
        c.simplices.extend(simplices);
        c.polygons.push(polygon);
        c.measure += area;
    }
    Ok(cells)
}

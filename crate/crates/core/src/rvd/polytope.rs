//! Convex polytopes with plane-labelled vertices, clipped by half-spaces.
//!
//! Every vertex remembers the three planes it lies on. New vertices created on
//! an edge get the planes of the two faces meeting at that edge plus the
//! clipping plane, and their position is recomputed from that 3-plane system
//! so adjacent cells agree on shared vertices.

use std::collections::HashMap;

use super::PlaneId;
use crate::{Mat3, Vec3};

#[derive(Debug, Clone, PartialEq)]
pub struct PolyVertex {
    pub pos: Vec3,
    /// Sorted labels of the three supporting planes.
    pub planes: [PlaneId; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub plane: PlaneId,
    /// Counter-clockwise seen from outside.
    pub verts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polytope {
    pub verts: Vec<PolyVertex>,
    pub faces: Vec<Face>,
}

/// Outcome of a half-space clip.
#[derive(Debug)]
pub enum Clip {
    Unchanged,
    Empty,
    Clipped(Polytope),
}

pub(crate) fn sorted3(mut p: [PlaneId; 3]) -> [PlaneId; 3] {
    p.sort();
    p
}

/// Intersection point of three planes `n_r · x = d_r`, or `None` when the
/// row-normalized system is close to singular.
pub(crate) fn solve_planes(planes: &[(Vec3, f64); 3]) -> Option<Vec3> {
    let mut a = Mat3::zeros();
    let mut b = Vec3::zeros();
    for (r, (n, d)) in planes.iter().enumerate() {
        let len = n.norm();
        if len == 0.0 {
            return None;
        }
        a.set_row(r, &(n / len).transpose());
        b[r] = d / len;
    }
    if a.determinant().abs() < 1e-10 {
        return None;
    }
    a.lu().solve(&b)
}

impl Polytope {
    /// Axis-aligned box with faces labelled `PlaneId::Bound(0..6)`
    /// (`-x, +x, -y, +y, -z, +z`).
    pub fn cuboid(lo: Vec3, hi: Vec3) -> Self {
        let corner = |i: usize| {
            Vec3::new(
                if i & 1 == 0 { lo.x } else { hi.x },
                if i & 2 == 0 { lo.y } else { hi.y },
                if i & 4 == 0 { lo.z } else { hi.z },
            )
        };
        let verts = (0..8)
            .map(|i| PolyVertex {
                pos: corner(i),
                planes: sorted3([
                    PlaneId::Bound((i & 1) as u8),
                    PlaneId::Bound(2 + ((i >> 1) & 1) as u8),
                    PlaneId::Bound(4 + ((i >> 2) & 1) as u8),
                ]),
            })
            .collect();
        let quads: [(u8, [usize; 4]); 6] = [
            (0, [0, 4, 6, 2]),
            (1, [1, 3, 7, 5]),
            (2, [0, 1, 5, 4]),
            (3, [2, 6, 7, 3]),
            (4, [0, 2, 3, 1]),
            (5, [4, 5, 7, 6]),
        ];
        let faces = quads
            .iter()
            .map(|(id, q)| Face {
                plane: PlaneId::Bound(*id),
                verts: q.to_vec(),
            })
            .collect();
        Polytope { verts, faces }
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn vertex_centroid(&self) -> Vec3 {
        if self.verts.is_empty() {
            return Vec3::zeros();
        }
        self.verts.iter().map(|v| v.pos).sum::<Vec3>() / self.verts.len() as f64
    }

    pub fn volume(&self) -> f64 {
        let c = self.vertex_centroid();
        let mut vol = 0.0;
        for f in &self.faces {
            let r = self.verts[f.verts[0]].pos - c;
            for w in f.verts[1..].windows(2) {
                let a = self.verts[w[0]].pos - c;
                let b = self.verts[w[1]].pos - c;
                vol += r.dot(&a.cross(&b));
            }
        }
        vol / 6.0
    }

    /// Largest distance from `x` to a vertex.
    pub fn radius_from(&self, x: &Vec3) -> f64 {
        self.verts
            .iter()
            .map(|v| (v.pos - x).norm())
            .fold(0.0, f64::max)
    }

    pub fn bounds(&self) -> (Vec3, Vec3) {
        let mut lo = Vec3::repeat(f64::INFINITY);
        let mut hi = Vec3::repeat(f64::NEG_INFINITY);
        for v in &self.verts {
            lo = lo.inf(&v.pos);
            hi = hi.sup(&v.pos);
        }
        (lo, hi)
    }

    /// Keeps `{x : n·x <= d}`. Vertices within `eps` of the plane count as on
    /// it and are kept without creating new vertices.
    pub fn clip<P>(&self, id: PlaneId, n: &Vec3, d: f64, eps: f64, plane_of: P) -> Clip
    where
        P: Fn(PlaneId) -> (Vec3, f64),
    {
        let len = n.norm();
        let (n, d) = (n / len, d / len);
        let s: Vec<f64> = self.verts.iter().map(|v| n.dot(&v.pos) - d).collect();
        if s.iter().all(|&x| x <= eps) {
            return Clip::Unchanged;
        }
        if s.iter().all(|&x| x >= -eps) {
            return Clip::Empty;
        }

        let mut out = Polytope::default();
        let mut remap = vec![usize::MAX; self.verts.len()];
        let mut cap: Vec<usize> = Vec::new();
        for (i, v) in self.verts.iter().enumerate() {
            if s[i] <= eps {
                remap[i] = out.verts.len();
                if s[i] >= -eps {
                    cap.push(out.verts.len());
                }
                out.verts.push(v.clone());
            }
        }

        // The two faces meeting at each edge; vertex labels alone are
        // ambiguous where more than three faces meet.
        let mut edge_planes: HashMap<(usize, usize), [PlaneId; 2]> = HashMap::new();
        for face in &self.faces {
            let m = face.verts.len();
            for e in 0..m {
                let (a, b) = (face.verts[e], face.verts[(e + 1) % m]);
                edge_planes
                    .entry((a.min(b), a.max(b)))
                    .and_modify(|p| p[1] = face.plane)
                    .or_insert([face.plane, face.plane]);
            }
        }
        let mut edge_cache: HashMap<(usize, usize), usize> = HashMap::new();
        for face in &self.faces {
            let m = face.verts.len();
            let mut poly = Vec::with_capacity(m + 1);
            for e in 0..m {
                let a = face.verts[e];
                let b = face.verts[(e + 1) % m];
                if s[a] <= eps {
                    poly.push(remap[a]);
                }
                let crosses = (s[a] < -eps && s[b] > eps) || (s[a] > eps && s[b] < -eps);
                if crosses {
                    let key = (a.min(b), a.max(b));
                    let idx = *edge_cache.entry(key).or_insert_with(|| {
                        let va = &self.verts[a];
                        let vb = &self.verts[b];
                        let shared = edge_planes.get(&key).copied().unwrap_or([face.plane, face.plane]);
                        let planes = sorted3([shared[0], shared[1], id]);
                        let t = s[a] / (s[a] - s[b]);
                        let interp = va.pos + (vb.pos - va.pos) * t;
                        let sys = [plane_of(planes[0]), plane_of(planes[1]), plane_of(planes[2])];
                        let pos = match solve_planes(&sys) {
                            Some(p) if (p - interp).norm() <= 1e-6 * (vb.pos - va.pos).norm().max(eps) => p,
                            _ => interp,
                        };
                        out.verts.push(PolyVertex { pos, planes });
                        cap.push(out.verts.len() - 1);
                        out.verts.len() - 1
                    });
                    poly.push(idx);
                }
            }
            if poly.len() >= 3 {
                out.faces.push(Face {
                    plane: face.plane,
                    verts: poly,
                });
            }
        }

        if cap.len() >= 3 {
            let c = cap.iter().map(|&i| out.verts[i].pos).sum::<Vec3>() / cap.len() as f64;
            let helper = if n.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
            let e1 = n.cross(&helper).normalize();
            let e2 = n.cross(&e1);
            let mut keyed: Vec<(f64, usize)> = cap
                .iter()
                .map(|&i| {
                    let r = out.verts[i].pos - c;
                    (r.dot(&e2).atan2(r.dot(&e1)), i)
                })
                .collect();
            keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
            // e1 × e2 = n: ascending angle is counter-clockwise seen from +n.
            let verts = keyed.into_iter().map(|(_, i)| i).collect();
            out.faces.push(Face { plane: id, verts });
        }
        out.compact();
        if out.faces.is_empty() {
            Clip::Empty
        } else {
            Clip::Clipped(out)
        }
    }

    /// Drops vertices no face references.
    fn compact(&mut self) {
        let mut used = vec![false; self.verts.len()];
        for f in &self.faces {
            for &v in &f.verts {
                used[v] = true;
            }
        }
        if used.iter().all(|&u| u) {
            return;
        }
        let mut remap = vec![usize::MAX; self.verts.len()];
        let mut verts = Vec::with_capacity(self.verts.len());
        for (i, v) in self.verts.drain(..).enumerate() {
            if used[i] {
                remap[i] = verts.len();
                verts.push(v);
            }
        }
        self.verts = verts;
        for f in &mut self.faces {
            for v in &mut f.verts {
                *v = remap[*v];
            }
        }
    }

    /// Boundary polygons as point lists.
    pub fn face_polygons(&self) -> Vec<Vec<Vec3>> {
        self.faces
            .iter()
            .map(|f| f.verts.iter().map(|&v| self.verts[v].pos).collect())
            .collect()
    }
}

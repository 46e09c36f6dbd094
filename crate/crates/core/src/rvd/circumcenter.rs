//! Voronoi vertices as intersections of bisector (and fixed) planes, and their
//! Jacobians with respect to the generators.
//!
//! The bisector of `w_a`, `w_b` is `(w_b − w_a)·x = (‖w_b‖² − ‖w_a‖²)/2`. Stacking
//! three such rows gives `A C = B`; differentiating, `∂C = A⁻¹(∂B − ∂A·C)`. A
//! bisector row contributes `(C − w_a)ᵗ` to the block of `w_a` and `(w_b − C)ᵗ`
//! to the block of `w_b`; fixed planes contribute nothing.

use super::{Domain, FixedPlane, SeedSet, VertexProvenance};
use crate::{Error, Mat3, Result, Vec3};

/// Relative threshold on `|L₁·(L₂×L₃)|` below which a configuration is
/// treated as coplanar.
pub const EPS_GEO: f64 = 1e-12;

/// `A = [w_j−w_i; w_k−w_i; w_l−w_i]`, `B = ½[‖w_j‖²−‖w_i‖²; …]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircumcenterSystem {
    pub a: Mat3,
    pub b: Vec3,
}

impl CircumcenterSystem {
    pub fn new(wi: &Vec3, wj: &Vec3, wk: &Vec3, wl: &Vec3) -> Self {
        let mut a = Mat3::zeros();
        let mut b = Vec3::zeros();
        for (r, w) in [wj, wk, wl].into_iter().enumerate() {
            let l = w - wi;
            a.set_row(r, &l.transpose());
            // (‖w‖² − ‖w_i‖²)/2 written as L·(w + w_i)/2.
            b[r] = 0.5 * l.dot(&(w + wi));
        }
        Self { a, b }
    }

    fn checked_inverse(&self) -> Result<Mat3> {
        let scale = (0..3).map(|r| self.a.row(r).norm()).fold(0.0, f64::max);
        let det = self.a.determinant();
        if !(det.abs() > EPS_GEO * scale.powi(3)) {
            return Err(Error::NearDegenerate { det });
        }
        self.a.try_inverse().ok_or(Error::NearDegenerate { det })
    }

    /// `C = A⁻¹B`.
    pub fn solve(&self) -> Result<Vec3> {
        Ok(self.checked_inverse()? * self.b)
    }
}

/// Circumcenter of four generators, equidistant from all of them.
pub fn circumcenter(wi: &Vec3, wj: &Vec3, wk: &Vec3, wl: &Vec3) -> Result<Vec3> {
    CircumcenterSystem::new(wi, wj, wk, wl).solve()
}

/// `[∂C/∂w_i, ∂C/∂w_j, ∂C/∂w_k, ∂C/∂w_l]`, each entry `(r, c) = ∂C_r/∂w_c`.
pub fn circumcenter_jacobian(wi: &Vec3, wj: &Vec3, wk: &Vec3, wl: &Vec3) -> Result<[Mat3; 4]> {
    let sys = CircumcenterSystem::new(wi, wj, wk, wl);
    let inv = sys.checked_inverse()?;
    let c = inv * sys.b;
    let d_i = (c - wi).transpose();
    let mut blocks = [Mat3::zeros(); 4];
    let mut ri = Mat3::zeros();
    for r in 0..3 {
        ri.set_row(r, &d_i);
    }
    blocks[0] = inv * ri;
    for (r, w) in [wj, wk, wl].into_iter().enumerate() {
        let mut rw = Mat3::zeros();
        rw.set_row(r, &(w - c).transpose());
        blocks[r + 1] = inv * rw;
    }
    Ok(blocks)
}

/// One row of a vertex constraint system.
#[derive(Debug, Clone, Copy)]
enum Row {
    Bisector(usize, usize),
    Fixed(FixedPlane),
}

fn provenance_rows(prov: &VertexProvenance) -> Option<[Row; 3]> {
    use VertexProvenance::*;
    Some(match *prov {
        SeedApex(_) | FixedDomainVertex => return None,
        ThreeBisectors { seeds: [i, j, k, l] } => {
            [Row::Bisector(i, j), Row::Bisector(i, k), Row::Bisector(i, l)]
        }
        TwoBisectorsOnePlane {
            seeds: [i, j, k],
            plane,
        } => [Row::Bisector(i, j), Row::Bisector(i, k), Row::Fixed(plane)],
        OneBisectorTwoPlanes {
            seeds: [i, j],
            planes: [p, q],
        } => [Row::Bisector(i, j), Row::Fixed(p), Row::Fixed(q)],
        OneBisectorMeshEdge {
            seeds: [i, j],
            triangle,
            edge,
        } => [
            Row::Bisector(i, j),
            Row::Fixed(FixedPlane::TrianglePlane(triangle)),
            Row::Fixed(FixedPlane::TriangleEdge { triangle, edge }),
        ],
    })
}

/// Position of a vertex reconstructed from its provenance.
pub fn provenance_position(prov: &VertexProvenance, seeds: &SeedSet, domain: &Domain) -> Result<Option<Vec3>> {
    if let VertexProvenance::SeedApex(s) = prov {
        return Ok(Some(seeds.points[*s]));
    }
    let Some(rows) = provenance_rows(prov) else {
        return Ok(None);
    };
    let (a, b) = assemble(&rows, seeds, domain)?;
    let inv = checked_row_inverse(&a)?;
    Ok(Some(inv * b))
}

fn assemble(rows: &[Row; 3], seeds: &SeedSet, domain: &Domain) -> Result<(Mat3, Vec3)> {
    let w = &seeds.points;
    let mut a = Mat3::zeros();
    let mut b = Vec3::zeros();
    for (r, row) in rows.iter().enumerate() {
        let (n, d) = match *row {
            Row::Bisector(i, j) => {
                let n = w[j] - w[i];
                (n, 0.5 * n.dot(&(w[j] + w[i])))
            }
            Row::Fixed(p) => domain.fixed_plane(&p)?,
        };
        a.set_row(r, &n.transpose());
        b[r] = d;
    }
    Ok((a, b))
}

fn checked_row_inverse(a: &Mat3) -> Result<Mat3> {
    let mut unit = *a;
    for r in 0..3 {
        let n = unit.row(r).norm();
        if n == 0.0 {
            return Err(Error::NearDegenerate { det: 0.0 });
        }
        unit.row_mut(r).scale_mut(1.0 / n);
    }
    let det = unit.determinant();
    if !(det.abs() > EPS_GEO) {
        return Err(Error::NearDegenerate { det });
    }
    a.try_inverse().ok_or(Error::NearDegenerate { det })
}

/// Non-zero blocks `∂C/∂w_s` of a cell vertex, as `(s, block)` pairs in
/// ascending seed order. Fixed domain vertices have none; the generator apex
/// has the identity for its own seed.
pub fn constrained_vertex_jacobian(
    prov: &VertexProvenance,
    seeds: &SeedSet,
    domain: &Domain,
) -> Result<Vec<(usize, Mat3)>> {
    if let VertexProvenance::SeedApex(s) = prov {
        return Ok(vec![(*s, Mat3::identity())]);
    }
    let Some(rows) = provenance_rows(prov) else {
        return Ok(Vec::new());
    };
    let w = &seeds.points;
    let (a, b) = assemble(&rows, seeds, domain)?;
    let inv = checked_row_inverse(&a)?;
    let c = inv * b;

    let mut rhs: Vec<(usize, Mat3)> = Vec::with_capacity(4);
    let mut add = |s: usize, r: usize, v: Vec3| {
        let slot = match rhs.iter().position(|(t, _)| *t == s) {
            Some(k) => k,
            None => {
                rhs.push((s, Mat3::zeros()));
                rhs.len() - 1
            }
        };
        let mut row = rhs[slot].1.row(r).transpose();
        row += v;
        rhs[slot].1.set_row(r, &row.transpose());
    };
    for (r, row) in rows.iter().enumerate() {
        if let Row::Bisector(i, j) = *row {
            add(i, r, c - w[i]);
            add(j, r, w[j] - c);
        }
    }
    rhs.sort_by_key(|(s, _)| *s);
    Ok(rhs.into_iter().map(|(s, m)| (s, inv * m)).collect())
}

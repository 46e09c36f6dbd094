//! Closed-form gradient of a single simplex contribution
//! `F^T = |T| / C(n+p, p) · E^T`.
//!
//! `∂F^T = (E^T ∂|T| + |T| ∂E^T) / C(n+p, p)`; the derivatives with respect to
//! `U_j` are pulled back to the vertices through `U_j = M_T (C_j − w_i)`:
//! `∂F/∂C_j = ∂F/∂U_j · M_T` and `∂F/∂w_i = −Σ_j ∂F/∂C_j`. The frame is held
//! constant per simplex, so its dependence on the simplex barycenter is not
//! differentiated.

use crate::quadrature::{
    area_normal, binomial, check_p, frame_measure, power_table, signed_volume, star_energy,
};
use crate::simplex::{IntegrationSimplex, SimplexDim};
use crate::{Error, Result, Vec3};

/// `∂F^T/∂w_i` and `∂F^T/∂C_j`, stored as column vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexVertexGradient {
    pub d_apex: Vec3,
    pub d_vertices: [Vec3; 3],
}

impl SimplexVertexGradient {
    pub fn zero() -> Self {
        Self {
            d_apex: Vec3::zeros(),
            d_vertices: [Vec3::zeros(); 3],
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            d_apex: self.d_apex * s,
            d_vertices: self.d_vertices.map(|v| v * s),
        }
    }
}

/// `∂E^T/∂U_j`: for `U₁`, `Σ_{α≥1} α U₁^{*(α−1)} * U₂^{*β} * U₃^{*γ}`, and
/// likewise for `U₂`, `U₃`.
pub fn grad_e_du(u: &[Vec3; 3], p: u32) -> [Vec3; 3] {
    let t = [power_table(&u[0], p), power_table(&u[1], p), power_table(&u[2], p)];
    let mut g = [Vec3::zeros(); 3];
    for a in (0..=p).rev() {
        for b in (0..=p - a).rev() {
            let c = p - a - b;
            let e = [a as usize, b as usize, c as usize];
            for j in 0..3 {
                if e[j] == 0 {
                    continue;
                }
                let mult = e[j] as f64;
                for k in 0..3 {
                    let mut term = mult;
                    for (v, &ev) in e.iter().enumerate() {
                        term *= t[v][k][if v == j { ev - 1 } else { ev }];
                    }
                    g[j][k] += term;
                }
            }
        }
    }
    g
}

/// Gradient of the signed cone volume `U₁·(U₂×U₃)/6`:
/// `[U₂×U₃, U₃×U₁, U₁×U₂] / 6`.
pub fn grad_volume_du(u: &[Vec3; 3]) -> [Vec3; 3] {
    [
        u[1].cross(&u[2]) / 6.0,
        u[2].cross(&u[0]) / 6.0,
        u[0].cross(&u[1]) / 6.0,
    ]
}

/// Gradient of the triangle area `‖N‖/2`, `N = (U₁−U₃)×(U₂−U₃)`:
/// `−1/(4|T|) [N×(U₂−U₃), N×(U₃−U₁), N×(U₁−U₂)]`.
pub fn grad_area_du(u: &[Vec3; 3]) -> Result<[Vec3; 3]> {
    let n = area_normal(u);
    let area = 0.5 * n.norm();
    let scale = crate::quadrature::point_scale(u);
    if !(area > crate::quadrature::DEGENERATE_REL * scale * scale) {
        return Err(Error::DegenerateTriangle);
    }
    let k = -1.0 / (4.0 * area);
    Ok([
        n.cross(&(u[1] - u[2])) * k,
        n.cross(&(u[2] - u[0])) * k,
        n.cross(&(u[0] - u[1])) * k,
    ])
}

/// Energy and vertex gradient of one simplex (unweighted).
pub fn energy_and_gradient(s: &IntegrationSimplex, p: u32) -> Result<(f64, SimplexVertexGradient)> {
    check_p(p)?;
    let u = s.edge_vectors();
    let Some(measure) = frame_measure(s.dim, &u) else {
        return Ok((0.0, SimplexVertexGradient::zero()));
    };
    let inv_binom = 1.0 / binomial(s.dim.n() + p, p);
    let e = star_energy(&u, p);
    let de = grad_e_du(&u, p);
    let dmeasure = match s.dim {
        SimplexDim::Tetrahedron => {
            let sign = signed_volume(&u).signum();
            grad_volume_du(&u).map(|g| g * sign)
        }
        SimplexDim::Triangle => grad_area_du(&u)?,
    };

    let mt = s.frame.m.transpose();
    let mut d_vertices = [Vec3::zeros(); 3];
    for j in 0..3 {
        let d_u = (dmeasure[j] * e + de[j] * measure) * inv_binom;
        d_vertices[j] = mt * d_u;
    }
    let d_apex = -(d_vertices[0] + d_vertices[1] + d_vertices[2]);
    Ok((
        measure * inv_binom * e,
        SimplexVertexGradient { d_apex, d_vertices },
    ))
}

/// As [`energy_and_gradient`], but tetrahedra use the signed volume of the
/// stored vertex order instead of its absolute value. For positively oriented
/// cones the two agree; for a flat cone whose apex lies in its facet plane
/// this still returns the derivative of the cone volume, so a generator on the
/// boundary of its own cell gets the correct one-sided gradient.
pub fn oriented_energy_and_gradient(s: &IntegrationSimplex, p: u32) -> Result<(f64, SimplexVertexGradient)> {
    if s.dim == SimplexDim::Triangle {
        return energy_and_gradient(s, p);
    }
    check_p(p)?;
    let u = s.edge_vectors();
    let inv_binom = 1.0 / binomial(3 + p, p);
    let vol = signed_volume(&u);
    let e = star_energy(&u, p);
    let de = grad_e_du(&u, p);
    let dvol = grad_volume_du(&u);
    let mt = s.frame.m.transpose();
    let d_vertices = [0, 1, 2].map(|j| mt * ((dvol[j] * e + de[j] * vol) * inv_binom));
    let d_apex = -(d_vertices[0] + d_vertices[1] + d_vertices[2]);
    let energy = match frame_measure(s.dim, &u) {
        Some(_) => vol * e * inv_binom,
        None => 0.0,
    };
    Ok((energy, SimplexVertexGradient { d_apex, d_vertices }))
}

/// `∂F^T/∂w_i` and `∂F^T/∂C_j` for a simplex with its frame held fixed.
pub fn grad_ft_vertices(s: &IntegrationSimplex, p: u32) -> Result<SimplexVertexGradient> {
    energy_and_gradient(s, p).map(|(_, g)| g)
}

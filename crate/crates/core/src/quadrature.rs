//! Exact integration of `‖u‖_p^p` over simplices.
//!
//! For even `p`, `‖u‖_p^p = x^p + y^p + z^p` is a `p`-homogeneous polynomial
//! whose polar form is `H(u¹, …, uᵖ) = sum of the components of u¹ * … * uᵖ`
//! (`*` is the componentwise "star" product). Integrating a symmetric
//! `p`-linear form over an `n`-simplex reduces to a sum over the `p`-multisets
//! of its vertices:
//!
//! ```text
//! ∫_Δ H(x, …, x) dx = Vol(Δ) / C(n + p, p) · Σ_{α_0 + … + α_n = p} H(x_0^α_0, …, x_n^α_n)
//! ```
//!
//! On a cone from the generator `w_i` the apex maps to the origin, so every
//! multiset that uses it vanishes and only the three transformed vertices
//! `U_j = M_T (C_j − w_i)` remain.

use std::ops::Mul;

use crate::simplex::{IntegrationSimplex, SimplexDim};
use crate::{Error, Result, Vec3, MAX_P};

/// Relative threshold below which a simplex measure counts as zero.
pub const DEGENERATE_REL: f64 = 1e-14;

/// A 3-vector under the componentwise product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarVector(pub Vec3);

impl StarVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self(Vec3::new(x, y, z))
    }

    pub fn ones() -> Self {
        Self::new(1.0, 1.0, 1.0)
    }

    pub fn star(&self, other: &StarVector) -> StarVector {
        StarVector(self.0.component_mul(&other.0))
    }

    /// Componentwise power; the zeroth power is `(1, 1, 1)`.
    pub fn star_pow(&self, a: u32) -> StarVector {
        let mut out = Self::ones();
        for _ in 0..a {
            out = out.star(self);
        }
        out
    }

    /// `x + y + z`.
    pub fn bar(&self) -> f64 {
        self.0.x + self.0.y + self.0.z
    }
}

impl From<Vec3> for StarVector {
    fn from(v: Vec3) -> Self {
        Self(v)
    }
}

impl Mul for StarVector {
    type Output = StarVector;

    fn mul(self, rhs: StarVector) -> StarVector {
        self.star(&rhs)
    }
}

pub fn star_product(a: &StarVector, b: &StarVector) -> StarVector {
    a.star(b)
}

pub fn star_power(v: &StarVector, a: u32) -> StarVector {
    v.star_pow(a)
}

pub fn component_sum(v: &StarVector) -> f64 {
    v.bar()
}

/// Multiplicities of each simplex vertex in one term of the multiset sum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentTuple(pub Vec<u32>);

impl ExponentTuple {
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// All `n_vertices`-tuples of non-negative integers summing to `p`, ordered
/// with the first entry descending, then the second, and so on:
/// `(2,0,0), (1,1,0), (1,0,1), (0,2,0), (0,1,1), (0,0,2)` for `n = 3, p = 2`.
pub fn exponent_multisets(n_vertices: usize, p: u32) -> Vec<ExponentTuple> {
    fn rec(prefix: &mut Vec<u32>, slots: usize, left: u32, out: &mut Vec<ExponentTuple>) {
        if slots == 1 {
            prefix.push(left);
            out.push(ExponentTuple(prefix.clone()));
            prefix.pop();
            return;
        }
        for a in (0..=left).rev() {
            prefix.push(a);
            rec(prefix, slots - 1, left - a, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n_vertices == 0 {
        return out;
    }
    rec(&mut Vec::with_capacity(n_vertices), n_vertices, p, &mut out);
    out
}

/// Binomial coefficient as a float (exact for the sizes used here).
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * f64::from(n - i) / f64::from(i + 1);
    }
    acc.round()
}

/// Validates that `p` is an even exponent in `2..=MAX_P`.
pub fn check_p(p: u32) -> Result<()> {
    if p < 2 || p % 2 != 0 {
        return Err(Error::OddP(p));
    }
    if p > MAX_P {
        return Err(Error::PTooLarge { p, max: MAX_P });
    }
    Ok(())
}

/// Polar form of `‖·‖_p^p`: the component sum of the star product of all
/// arguments. Symmetric and linear in each argument.
pub fn polar_form(args: &[StarVector]) -> f64 {
    args.iter()
        .fold(StarVector::ones(), |acc, a| acc.star(a))
        .bar()
}

/// Table `pow[c][e] = u_c^e` for `e in 0..=p`.
pub(crate) fn power_table(u: &Vec3, p: u32) -> [Vec<f64>; 3] {
    let mut t: [Vec<f64>; 3] = Default::default();
    for c in 0..3 {
        let mut row = Vec::with_capacity(p as usize + 1);
        let mut acc = 1.0;
        row.push(acc);
        for _ in 0..p {
            acc *= u[c];
            row.push(acc);
        }
        t[c] = row;
    }
    t
}

/// `Σ_{α+β+γ=p} bar(U₁^{*α} * U₂^{*β} * U₃^{*γ})`, summed in the fixed
/// [`exponent_multisets`] order.
pub fn star_energy(u: &[Vec3; 3], p: u32) -> f64 {
    let t = [power_table(&u[0], p), power_table(&u[1], p), power_table(&u[2], p)];
    let mut sum = 0.0;
    for a in (0..=p).rev() {
        for b in (0..=p - a).rev() {
            let c = p - a - b;
            let (a, b, c) = (a as usize, b as usize, c as usize);
            for k in 0..3 {
                sum += t[0][k][a] * t[1][k][b] * t[2][k][c];
            }
        }
    }
    sum
}

/// Signed volume `U₁·(U₂×U₃)/6` of the cone over the origin.
pub fn signed_volume(u: &[Vec3; 3]) -> f64 {
    u[0].dot(&u[1].cross(&u[2])) / 6.0
}

/// Area normal `N = (U₁−U₃)×(U₂−U₃)`; the triangle area is `‖N‖/2`.
pub fn area_normal(u: &[Vec3; 3]) -> Vec3 {
    (u[0] - u[2]).cross(&(u[1] - u[2]))
}

/// Largest coordinate extent among the points, used to scale thresholds.
pub(crate) fn point_scale(points: &[Vec3]) -> f64 {
    let mut s = 0.0f64;
    for a in points {
        for b in points {
            s = s.max((a - b).amax());
        }
    }
    s
}

/// Measure of an integration simplex in frame space, or `None` if it is below
/// the degeneracy threshold.
pub(crate) fn frame_measure(dim: SimplexDim, u: &[Vec3; 3]) -> Option<f64> {
    match dim {
        SimplexDim::Tetrahedron => {
            let scale = point_scale(&[Vec3::zeros(), u[0], u[1], u[2]]);
            let vol = signed_volume(u).abs();
            (vol > DEGENERATE_REL * scale.powi(3)).then_some(vol)
        }
        SimplexDim::Triangle => {
            let scale = point_scale(u);
            let area = 0.5 * area_normal(u).norm();
            (area > DEGENERATE_REL * scale.powi(2)).then_some(area)
        }
    }
}

/// Closed-form `∫_T ‖M_T (x − w_i)‖_p^p`.
///
/// Tetrahedra integrate over the cone `(w_i, C₁, C₂, C₃)`; triangles over
/// `(C₁, C₂, C₃)` with the measure taken in frame space (`|T| = ‖N‖/2` of the
/// transformed triangle). Degenerate simplices contribute exactly zero. The
/// result ignores [`IntegrationSimplex::weight`].
pub fn simplex_energy(s: &IntegrationSimplex, p: u32) -> Result<f64> {
    check_p(p)?;
    let u = s.edge_vectors();
    let Some(measure) = frame_measure(s.dim, &u) else {
        return Ok(0.0);
    };
    Ok(measure / binomial(s.dim.n() + p, p) * star_energy(&u, p))
}

/// Result of [`lasserre_integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LasserreIntegral {
    pub value: f64,
    pub degenerate: bool,
}

/// `n`-dimensional volume of the simplex spanned by `vertices` (n+1 points in
/// R³, n <= 3).
pub fn simplex_volume(vertices: &[Vec3]) -> f64 {
    match vertices {
        [a, b, c, d] => (b - a).dot(&(c - a).cross(&(d - a))).abs() / 6.0,
        [a, b, c] => 0.5 * (b - a).cross(&(c - a)).norm(),
        [a, b] => (b - a).norm(),
        _ => 0.0,
    }
}

/// Integrates `H(x, …, x)` over the simplex with the given vertices by the
/// multiset formula. `h` receives exactly `p` arguments.
pub fn lasserre_integrate<H>(vertices: &[Vec3], p: u32, h: H) -> Result<LasserreIntegral>
where
    H: Fn(&[StarVector]) -> f64,
{
    check_p(p)?;
    let n = vertices.len().saturating_sub(1) as u32;
    let vol = simplex_volume(vertices);
    let scale = point_scale(vertices);
    if n == 0 || !(vol > DEGENERATE_REL * scale.powi(n as i32)) {
        return Ok(LasserreIntegral {
            value: 0.0,
            degenerate: true,
        });
    }
    let mut args = Vec::with_capacity(p as usize);
    let mut sum = 0.0;
    for tuple in exponent_multisets(vertices.len(), p) {
        args.clear();
        for (v, &m) in vertices.iter().zip(&tuple.0) {
            args.extend(std::iter::repeat_n(StarVector(*v), m as usize));
        }
        sum += h(&args);
    }
    Ok(LasserreIntegral {
        value: vol / binomial(n + p, p) * sum,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FrameMatrix;
    use crate::Mat3;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(i: usize) -> Vec3 {
        let mut v = Vec3::zeros();
        v[i] = 1.0;
        v
    }

    #[test]
    fn star_algebra() {
        let a = StarVector::new(1.0, 2.0, 3.0);
        let b = StarVector::new(4.0, 5.0, 6.0);
        assert_eq!(star_product(&a, &b), StarVector::new(4.0, 10.0, 18.0));
        assert_eq!(StarVector::ones() * b, b);
        assert_eq!(b * StarVector::new(0.0, 0.0, 0.0), StarVector::new(0.0, 0.0, 0.0));

        assert_eq!(star_power(&StarVector::new(2.0, 1.0, 0.0), 3), StarVector::new(8.0, 1.0, 0.0));
        assert_eq!(star_power(&StarVector::new(0.0, -7.0, 0.5), 0), StarVector::ones());
        assert_eq!(star_power(&StarVector::new(-2.0, 3.0, 1.0), 2), StarVector::new(4.0, 9.0, 1.0));

        assert_eq!(component_sum(&StarVector::new(4.0, 10.0, 18.0)), 32.0);
        assert_eq!(component_sum(&StarVector::new(0.0, 0.0, 0.0)), 0.0);
        assert_eq!(component_sum(&StarVector::new(1.0, -1.0, 0.0)), 0.0);
    }

    #[test]
    fn multisets() {
        let t: Vec<Vec<u32>> = exponent_multisets(3, 2).into_iter().map(|t| t.0).collect();
        assert_eq!(
            t,
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2]
            ]
        );
        assert_eq!(exponent_multisets(4, 2).len(), 10);
        assert_eq!(exponent_multisets(3, 0), vec![ExponentTuple(vec![0, 0, 0])]);
        for n in 1..5 {
            for p in 0..9 {
                let ts = exponent_multisets(n, p);
                assert_eq!(ts.len() as f64, binomial(n as u32 + p - 1, p));
                assert!(ts.iter().all(|t| t.total() == p && t.0.len() == n));
            }
        }
    }

    #[test]
    fn p_validation() {
        assert!(matches!(check_p(3), Err(Error::OddP(3))));
        assert!(matches!(check_p(0), Err(Error::OddP(0))));
        assert!(matches!(check_p(18), Err(Error::PTooLarge { .. })));
        assert!(check_p(16).is_ok());
    }

    #[test]
    fn unit_tetrahedron_p2() {
        let s = IntegrationSimplex::tetrahedron(Vec3::zeros(), [e(0), e(1), e(2)], FrameMatrix::identity());
        // 3 · 2!/5!
        assert!((simplex_energy(&s, 2).unwrap() - 1.0 / 20.0).abs() < 1e-15);
        assert!(matches!(simplex_energy(&s, 3), Err(Error::OddP(3))));
    }

    #[test]
    fn unit_triangle_p2() {
        let s = IntegrationSimplex::triangle(
            Vec3::zeros(),
            [Vec3::zeros(), e(0), e(1)],
            FrameMatrix::identity(),
        );
        // 2 · 2!/4!
        assert!((simplex_energy(&s, 2).unwrap() - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_is_zero() {
        let s = IntegrationSimplex::tetrahedron(
            Vec3::zeros(),
            [e(0), e(1), Vec3::new(1.0, 1.0, 0.0)],
            FrameMatrix::identity(),
        );
        assert_eq!(simplex_energy(&s, 4).unwrap(), 0.0);
        let t = IntegrationSimplex::triangle(
            Vec3::zeros(),
            [e(0), e(0) * 2.0, e(0) * 3.0],
            FrameMatrix::identity(),
        );
        assert_eq!(simplex_energy(&t, 2).unwrap(), 0.0);
    }

    #[test]
    fn polar_form_examples() {
        assert_eq!(polar_form(&[StarVector::new(1.0, 0.0, 0.0); 2]), 1.0);
        assert_eq!(
            polar_form(&[StarVector::new(1.0, 2.0, 0.0), StarVector::new(3.0, 0.0, 0.0)]),
            3.0
        );
    }

    fn random_vec(rng: &mut ChaCha8Rng) -> Vec3 {
        Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    }

    #[test]
    fn polar_form_symmetric_and_multilinear() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let p = rng.random_range(1..=4usize);
            let args: Vec<StarVector> = (0..p).map(|_| StarVector(random_vec(&mut rng))).collect();
            let base = polar_form(&args);
            let mut idx: Vec<usize> = (0..p).collect();
            // Heap's algorithm over all permutations.
            fn permute(k: usize, idx: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
                if k == 1 {
                    f(idx);
                    return;
                }
                for i in 0..k {
                    permute(k - 1, idx, f);
                    if k % 2 == 0 {
                        idx.swap(i, k - 1);
                    } else {
                        idx.swap(0, k - 1);
                    }
                }
            }
            permute(p, &mut idx, &mut |perm| {
                let permuted: Vec<StarVector> = perm.iter().map(|&i| args[i]).collect();
                assert!((polar_form(&permuted) - base).abs() <= 1e-15);
            });

            let slot = rng.random_range(0..p);
            let (lam, mu) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let a = StarVector(random_vec(&mut rng));
            let b = StarVector(random_vec(&mut rng));
            let mut mixed = args.clone();
            mixed[slot] = StarVector(a.0 * lam + b.0 * mu);
            let mut with_a = args.clone();
            with_a[slot] = a;
            let mut with_b = args.clone();
            with_b[slot] = b;
            let lhs = polar_form(&mixed);
            let rhs = lam * polar_form(&with_a) + mu * polar_form(&with_b);
            assert!((lhs - rhs).abs() <= 1e-12);
        }
    }

    #[test]
    fn lasserre_matches_closed_form() {
        let v = [Vec3::zeros(), e(0), e(1), e(2)];
        let r = lasserre_integrate(&v, 2, polar_form).unwrap();
        assert!(!r.degenerate);
        assert!((r.value - 1.0 / 20.0).abs() < 1e-15);

        let tri = [Vec3::zeros(), e(0), e(1)];
        let r = lasserre_integrate(&tri, 2, polar_form).unwrap();
        assert!((r.value - 1.0 / 6.0).abs() < 1e-15);

        let flat = [Vec3::zeros(), e(0), e(1), e(0) + e(1)];
        let r = lasserre_integrate(&flat, 2, polar_form).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn energy_agrees_with_lasserre_on_translated_cone() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let apex = random_vec(&mut rng);
            let c = [random_vec(&mut rng), random_vec(&mut rng), random_vec(&mut rng)];
            let m = Mat3::from_fn(|_, _| rng.random_range(-1.0..1.0)) + Mat3::identity() * 2.0;
            let Ok(frame) = crate::field::normalize_det(&FrameMatrix::from_matrix(m)) else {
                continue;
            };
            let s = IntegrationSimplex::tetrahedron(apex, c, frame);
            let u = s.edge_vectors();
            for p in [2, 4, 6] {
                let closed = simplex_energy(&s, p).unwrap();
                let las = lasserre_integrate(&[Vec3::zeros(), u[0], u[1], u[2]], p, polar_form)
                    .unwrap()
                    .value;
                assert!((closed - las).abs() <= 1e-12 * las.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn homogeneity() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let u = [random_vec(&mut rng), random_vec(&mut rng), random_vec(&mut rng)];
            let s = 1.7;
            for p in [2u32, 4, 6] {
                let e0 = star_energy(&u, p);
                let e1 = star_energy(&[u[0] * s, u[1] * s, u[2] * s], p);
                assert!((e1 - s.powi(p as i32) * e0).abs() <= 1e-12 * e1.abs());
            }
            let apex = random_vec(&mut rng);
            let t = IntegrationSimplex::tetrahedron(apex, u, FrameMatrix::identity());
            let ts = IntegrationSimplex::tetrahedron(apex * s, [u[0] * s, u[1] * s, u[2] * s], FrameMatrix::identity());
            let tri = IntegrationSimplex::triangle(apex, u, FrameMatrix::identity());
            let tris = IntegrationSimplex::triangle(apex * s, [u[0] * s, u[1] * s, u[2] * s], FrameMatrix::identity());
            for p in [2u32, 4] {
                let f0 = simplex_energy(&t, p).unwrap();
                let f1 = simplex_energy(&ts, p).unwrap();
                assert!((f1 - s.powi(p as i32 + 3) * f0).abs() <= 1e-10 * f1);
                let g0 = simplex_energy(&tri, p).unwrap();
                let g1 = simplex_energy(&tris, p).unwrap();
                assert!((g1 - s.powi(p as i32 + 2) * g0).abs() <= 1e-10 * g1);
            }
        }
    }

    #[test]
    fn energy_is_non_negative() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let u = [random_vec(&mut rng), random_vec(&mut rng), random_vec(&mut rng)];
            for p in [2, 4, 6, 8] {
                assert!(star_energy(&u, p) >= 0.0);
            }
        }
    }
}

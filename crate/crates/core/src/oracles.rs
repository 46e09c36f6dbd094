//! Independent reference computations used to check the closed forms:
//! Monte Carlo integration, exact integration through Dirichlet moments,
//! polarization by multilinear expansion, and central finite differences.

use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::field::{unit_frame, AnisotropyTensor, FrameMatrix};
use crate::quadrature::StarVector;
use crate::rvd::SeedSet;
use crate::simplex::{IntegrationSimplex, SimplexDim};
use crate::{Error, Mat3, Result, Vec3};

/// Mean and standard error of a Monte Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
}

const MC_BLOCK: usize = 1 << 16;

/// Points of the simplex in frame space, `M_T (x − w_i)`.
fn frame_points(s: &IntegrationSimplex) -> Vec<Vec3> {
    let u = s.edge_vectors();
    match s.dim {
        SimplexDim::Tetrahedron => vec![Vec3::zeros(), u[0], u[1], u[2]],
        SimplexDim::Triangle => u.to_vec(),
    }
}

fn frame_space_measure(s: &IntegrationSimplex) -> f64 {
    let pts = frame_points(s);
    match s.dim {
        SimplexDim::Tetrahedron => {
            Matrix3::from_columns(&[pts[1] - pts[0], pts[2] - pts[0], pts[3] - pts[0]])
                .determinant()
                .abs()
                / 6.0
        }
        SimplexDim::Triangle => {
            let (a, b) = (pts[1] - pts[0], pts[2] - pts[0]);
            let gram = a.dot(&a) * b.dot(&b) - a.dot(&b).powi(2);
            0.5 * gram.max(0.0).sqrt()
        }
    }
}

fn lp_pow(y: &Vec3, p: u32) -> f64 {
    y.iter().map(|c| c.powi(p as i32)).sum()
}

/// Uniform sampling of the simplex (spacings of sorted uniforms as
/// barycentric weights), integrand `‖M_T (x − w_i)‖_p^p`. Blocks of samples
/// run in parallel on separate streams of one seeded generator.
pub fn mc_integrate(s: &IntegrationSimplex, p: u32, n_samples: usize, rng_seed: u64) -> McEstimate {
    let pts = frame_points(s);
    let measure = frame_space_measure(s);
    let scale = pts.iter().map(|v| v.amax()).fold(0.0, f64::max);
    if n_samples == 0 || !(measure > 1e-14 * scale.powi(pts.len() as i32 - 1)) {
        return McEstimate {
            estimate: 0.0,
            stderr: 0.0,
        };
    }
    let blocks = n_samples.div_ceil(MC_BLOCK);
    let sums: Vec<(f64, f64)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            rng.set_stream(b as u64);
            let n = MC_BLOCK.min(n_samples - b * MC_BLOCK);
            let m = pts.len();
            let mut cuts = vec![0.0; m + 1];
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                cuts[0] = 0.0;
                cuts[m] = 1.0;
                for c in cuts.iter_mut().take(m).skip(1) {
                    *c = rng.random::<f64>();
                }
                cuts[1..m].sort_by(f64::total_cmp);
                let mut y = Vec3::zeros();
                for (j, pt) in pts.iter().enumerate() {
                    y += pt * (cuts[j + 1] - cuts[j]);
                }
                let f = lp_pow(&y, p);
                s1 += f;
                s2 += f * f;
            }
            (s1, s2)
        })
        .collect();
    let (s1, s2) = sums.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = n_samples as f64;
    let mean = s1 / n;
    let var = ((s2 / n - mean * mean) * n / (n - 1.0).max(1.0)).max(0.0);
    McEstimate {
        estimate: mean * measure,
        stderr: (var / n).sqrt() * measure,
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `∫ x^a y^b z^c` over the unit 3-simplex (`dim == 3`), or
/// `∫ x^a y^b (1−x−y)^c` over the unit triangle (`dim == 2`):
/// `a! b! c! / (a+b+c+dim)!`.
pub fn dirichlet_moment(a: u32, b: u32, c: u32, dim: u32) -> Result<f64> {
    let total = a + b + c;
    if total > 20 {
        return Err(Error::Overflow(total));
    }
    if dim != 2 && dim != 3 {
        return Err(Error::InvalidConfig(format!("dimension {dim} is not 2 or 3")));
    }
    Ok(factorial(a) * factorial(b) * factorial(c) / factorial(total + dim))
}

/// Exact `∫_T ‖M_T (x − w_i)‖_p^p` by expanding each coordinate power
/// multinomially over the barycentric coordinates and integrating the
/// monomials with [`dirichlet_moment`], then mapping the unit simplex onto
/// `T` (factor `n! |T|`).
pub fn exact_dirichlet_energy(s: &IntegrationSimplex, p: u32) -> Result<f64> {
    let u = s.edge_vectors();
    let dim = s.dim.n();
    let measure = frame_space_measure(s);
    let pf = factorial(p);
    let mut total = 0.0;
    for coord in 0..3 {
        let (x, y, z) = (u[0][coord], u[1][coord], u[2][coord]);
        for a in 0..=p {
            for b in 0..=p - a {
                let c = p - a - b;
                let multinomial = pf / (factorial(a) * factorial(b) * factorial(c));
                total += multinomial
                    * x.powi(a as i32)
                    * y.powi(b as i32)
                    * z.powi(c as i32)
                    * dirichlet_moment(a, b, c, dim)?;
            }
        }
    }
    Ok(total * factorial(dim) * measure)
}

/// A monomial `coef · x^e₀ y^e₁ z^e₂`.
pub type Monomial = (f64, [u32; 3]);

/// Monomials of `x^p + y^p + z^p`.
pub fn lp_monomials(p: u32) -> Vec<Monomial> {
    vec![(1.0, [p, 0, 0]), (1.0, [0, p, 0]), (1.0, [0, 0, p])]
}

/// Polar form of a `p`-homogeneous polynomial,
/// `(1/p!) ∂^p/∂λ₁…∂λ_p f(Σ λ_i u⁽ⁱ⁾)`, by direct expansion: the mixed
/// coefficient of a monomial with exponents `e` is `Π e_d!` times the sum,
/// over all ways of sending each argument to a coordinate `d` with `e_d`
/// arguments per coordinate, of `Π u⁽ⁱ⁾_{d(i)}`.
pub fn polarization_oracle(f: &[Monomial], args: &[StarVector]) -> f64 {
    fn assign(args: &[StarVector], left: &mut [u32; 3]) -> f64 {
        let Some((first, rest)) = args.split_first() else {
            return 1.0;
        };
        let mut sum = 0.0;
        for d in 0..3 {
            if left[d] > 0 {
                left[d] -= 1;
                sum += first.0[d] * assign(rest, left);
                left[d] += 1;
            }
        }
        sum
    }
    let p = args.len() as u32;
    let mut total = 0.0;
    for &(coef, e) in f {
        if e.iter().sum::<u32>() != p {
            continue;
        }
        let orderings: f64 = e.iter().map(|&k| factorial(k)).product();
        total += coef * orderings * assign(args, &mut e.clone());
    }
    total / factorial(p)
}

/// Central differences `(f(x + h e_k) − f(x − h e_k)) / 2h` for every
/// coordinate, in parallel.
pub fn fd_gradient_flat<F>(f: F, x: &[f64], h: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    (0..x.len())
        .into_par_iter()
        .map(|k| {
            let mut xp = x.to_vec();
            xp[k] += h;
            let fp = f(&xp);
            xp[k] = x[k] - h;
            (fp - f(&xp)) / (2.0 * h)
        })
        .collect()
}

/// [`fd_gradient_flat`] over generator positions.
pub fn fd_gradient<F>(eval_fn: F, w: &SeedSet, h: f64) -> Result<Vec<Vec3>>
where
    F: Fn(&SeedSet) -> Result<f64> + Sync,
{
    let x = w.to_flat();
    let g: Vec<Result<f64>> = (0..x.len())
        .into_par_iter()
        .map(|k| {
            let mut xp = x.clone();
            xp[k] += h;
            let fp = eval_fn(&SeedSet::from_flat(&xp)?)?;
            xp[k] = x[k] - h;
            let fm = eval_fn(&SeedSet::from_flat(&xp)?)?;
            Ok((fp - fm) / (2.0 * h))
        })
        .collect();
    let g = g.into_iter().collect::<Result<Vec<f64>>>()?;
    Ok(g.chunks_exact(3).map(|c| Vec3::new(c[0], c[1], c[2])).collect())
}

/// Random vector with coordinates uniform in `[-r, r]`.
pub fn random_vec(rng: &mut impl Rng, r: f64) -> Vec3 {
    Vec3::from_fn(|_, _| rng.random_range(-r..=r))
}

/// Random SPD tensor `RᵗR + I`.
pub fn random_spd(rng: &mut impl Rng) -> AnisotropyTensor {
    let r = Mat3::from_fn(|_, _| rng.random_range(-1.0..=1.0));
    AnisotropyTensor::from_matrix(&(r.transpose() * r + Mat3::identity()))
}

/// Det-normalized factor of a random SPD tensor.
pub fn random_frame(rng: &mut impl Rng) -> FrameMatrix {
    unit_frame(&random_spd(rng)).expect("RᵗR + I is positive definite")
}

/// Random simplex with a random unit frame. Tetrahedra have their apex as
/// the first point; triangles get a random apex off the triangle.
pub fn random_simplex(rng: &mut impl Rng, dim: SimplexDim) -> IntegrationSimplex {
    let apex = random_vec(rng, 1.0);
    let v = [random_vec(rng, 1.0), random_vec(rng, 1.0), random_vec(rng, 1.0)];
    let frame = random_frame(rng);
    match dim {
        SimplexDim::Tetrahedron => IntegrationSimplex::tetrahedron(apex, v, frame),
        SimplexDim::Triangle => IntegrationSimplex::triangle(apex, v, frame),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{polar_form, simplex_energy};

    fn unit_tet() -> IntegrationSimplex {
        IntegrationSimplex::tetrahedron(Vec3::zeros(), [Vec3::x(), Vec3::y(), Vec3::z()], FrameMatrix::identity())
    }

    #[test]
    fn dirichlet_examples() {
        assert!((dirichlet_moment(2, 0, 0, 3).unwrap() - 1.0 / 60.0).abs() < 1e-17);
        assert!((dirichlet_moment(0, 0, 0, 3).unwrap() - 1.0 / 6.0).abs() < 1e-17);
        assert!((dirichlet_moment(1, 1, 0, 2).unwrap() - 1.0 / 24.0).abs() < 1e-17);
        assert!(matches!(dirichlet_moment(10, 10, 1, 3), Err(Error::Overflow(21))));
    }

    #[test]
    fn exact_unit_simplices() {
        assert!((exact_dirichlet_energy(&unit_tet(), 2).unwrap() - 0.05).abs() < 1e-15);
        let tri = IntegrationSimplex::triangle(
            Vec3::zeros(),
            [Vec3::zeros(), Vec3::x(), Vec3::y()],
            FrameMatrix::identity(),
        );
        assert!((exact_dirichlet_energy(&tri, 2).unwrap() - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn mc_unit_tetrahedron() {
        let r = mc_integrate(&unit_tet(), 2, 200_000, 1);
        assert!((r.estimate - 0.05).abs() <= 3.0 * r.stderr);
        assert_eq!(r, mc_integrate(&unit_tet(), 2, 200_000, 1));
    }

    #[test]
    fn mc_degenerate_is_zero() {
        let s = IntegrationSimplex::tetrahedron(
            Vec3::zeros(),
            [Vec3::x(), Vec3::y(), Vec3::new(1.0, 1.0, 0.0)],
            FrameMatrix::identity(),
        );
        assert_eq!(mc_integrate(&s, 2, 1000, 0).estimate, 0.0);
    }

    #[test]
    fn mc_error_shrinks() {
        let s = unit_tet();
        let small = mc_integrate(&s, 4, 1_000, 9).stderr;
        let large = mc_integrate(&s, 4, 1_000_000, 9).stderr;
        assert!(large <= small / 30.0 * 1.1);
    }

    #[test]
    fn worked_polarization_example() {
        let f: Vec<Monomial> = vec![(1.0, [2, 0, 0]), (3.0, [1, 1, 0]), (2.0, [0, 2, 0])];
        let ex = StarVector(Vec3::x());
        let ey = StarVector(Vec3::y());
        assert_eq!(polarization_oracle(&f, &[ex, ex]), 1.0);
        assert_eq!(polarization_oracle(&f, &[ex, ey]), 1.5);
        assert_eq!(polarization_oracle(&f, &[ey, ex]), 1.5);
        assert_eq!(polarization_oracle(&f, &[ey, ey]), 2.0);
    }

    #[test]
    fn polarization_diagonal_and_polar_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for p in [2u32, 4, 6] {
            let u = StarVector(random_vec(&mut rng, 1.0));
            let diag = polarization_oracle(&lp_monomials(p), &vec![u; p as usize]);
            assert!((diag - lp_pow(&u.0, p)).abs() < 1e-13);
            let args: Vec<StarVector> = (0..p).map(|_| StarVector(random_vec(&mut rng, 1.0))).collect();
            assert!((polarization_oracle(&lp_monomials(p), &args) - polar_form(&args)).abs() < 1e-13);
        }
    }

    #[test]
    fn exact_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for dim in [SimplexDim::Tetrahedron, SimplexDim::Triangle] {
            for p in [2, 4, 6, 8] {
                let s = random_simplex(&mut rng, dim);
                let a = simplex_energy(&s, p).unwrap();
                let b = exact_dirichlet_energy(&s, p).unwrap();
                assert!((a - b).abs() <= 1e-11 * b.abs(), "{a} {b}");
            }
        }
    }

    #[test]
    fn fd_of_quadratic() {
        let w = SeedSet::new(vec![Vec3::new(0.3, -1.0, 2.0), Vec3::new(4.0, 0.5, -0.25)]).unwrap();
        let g = fd_gradient(|s| Ok(s.points.iter().map(|p| p.norm_squared()).sum()), &w, 1e-6).unwrap();
        for (gi, wi) in g.iter().zip(&w.points) {
            assert!((gi - wi * 2.0).amax() < 1e-8);
        }
    }
}

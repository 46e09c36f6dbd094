//! Check suite comparing the library against the oracles.
//!
//! Each check reports the value it expected, the value it got and the
//! tolerance. [`SuiteSize::full`] runs the sizes used by the acceptance tests;
//! [`SuiteSize::quick`] runs a smaller version of every check.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::TensorField;
use crate::gradient::grad_ft_vertices;
use crate::optimize::{cell_moments, evaluate, evaluate_cells, initial_seeds, optimize, OptimizerConfig};
use crate::oracles::{
    exact_dirichlet_energy, lp_monomials, mc_integrate, polarization_oracle, random_simplex, random_spd,
    random_vec, Monomial,
};
use crate::quadrature::{polar_form, simplex_energy, StarVector};
use crate::rvd::{
    build_rvd, circumcenter, circumcenter_jacobian, Domain, HalfSpace, RestrictedCell, SeedSet, VertexProvenance,
};
use crate::simplex::{IntegrationSimplex, SimplexDim};
use crate::{Mat3, Result, Vec3};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub expected: f64,
    pub got: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    /// Passes when `|got - expected| <= tolerance`.
    pub fn within(name: impl Into<String>, expected: f64, got: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            expected,
            got,
            tolerance,
            pass: (got - expected).abs() <= tolerance,
        }
    }

    /// Passes when `got <= limit`.
    pub fn at_most(name: impl Into<String>, got: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            expected: 0.0,
            got,
            tolerance: limit,
            pass: got <= limit,
        }
    }

    /// Passes when `got >= limit`.
    pub fn at_least(name: impl Into<String>, got: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            expected: limit,
            got,
            tolerance: 0.0,
            pass: got >= limit,
        }
    }

    fn failed(name: impl Into<String>, why: &crate::Error) -> Self {
        Self {
            name: format!("{} ({why})", name.into()),
            expected: 0.0,
            got: f64::NAN,
            tolerance: 0.0,
            pass: false,
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<48} {:>12.4e} {:>12.4e} {:>10.2e}  {}",
            self.name,
            self.expected,
            self.got,
            self.tolerance,
            if self.pass { "pass" } else { "FAIL" }
        )
    }
}

/// Problem sizes for the suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteSize {
    pub exact_simplices: usize,
    pub mc_simplices: usize,
    pub mc_samples: usize,
    pub polar_sets: usize,
    pub gradient_simplices: usize,
    pub pipeline_configs: usize,
    pub quadruples: usize,
    pub partition_seeds: usize,
    pub optimize_seeds: usize,
    pub optimize_iters: usize,
    /// Enforce the wall-clock limits.
    pub timed: bool,
}

impl SuiteSize {
    pub fn full() -> Self {
        Self {
            exact_simplices: 100,
            mc_simplices: 20,
            mc_samples: 1_000_000,
            polar_sets: 100,
            gradient_simplices: 200,
            pipeline_configs: 20,
            quadruples: 1000,
            partition_seeds: 50,
            optimize_seeds: 100,
            optimize_iters: 200,
            timed: true,
        }
    }

    pub fn quick() -> Self {
        Self {
            exact_simplices: 20,
            mc_simplices: 4,
            mc_samples: 200_000,
            polar_sets: 20,
            gradient_simplices: 40,
            pipeline_configs: 4,
            quadruples: 200,
            partition_seeds: 50,
            optimize_seeds: 100,
            optimize_iters: 200,
            timed: false,
        }
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / a.abs().max(b.abs())
    }
}

/// `max |a - b| / max |b|` over paired vectors.
fn vec_rel_err(a: &[Vec3], b: &[Vec3]) -> f64 {
    let num = a.iter().zip(b).map(|(x, y)| (x - y).amax()).fold(0.0, f64::max);
    let den = b.iter().map(|y| y.amax()).fold(0.0, f64::max);
    if num == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn timing(name: &str, start: Instant, limit_s: f64, size: &SuiteSize) -> Option<CheckResult> {
    size.timed
        .then(|| CheckResult::at_most(format!("{name}: seconds"), start.elapsed().as_secs_f64(), limit_s))
}

const DIMS: [SimplexDim; 2] = [SimplexDim::Tetrahedron, SimplexDim::Triangle];

fn dim_name(d: SimplexDim) -> &'static str {
    match d {
        SimplexDim::Tetrahedron => "tetrahedra",
        SimplexDim::Triangle => "triangles",
    }
}

/// Closed form against exact Dirichlet-moment integration.
pub fn closed_form_vs_exact(size: &SuiteSize) -> Vec<CheckResult> {
    let start = Instant::now();
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for p in [2u32, 4, 6, 8] {
        for dim in DIMS {
            let mut worst: f64 = 0.0;
            for _ in 0..size.exact_simplices {
                let s = random_simplex(&mut rng, dim);
                match (simplex_energy(&s, p), exact_dirichlet_energy(&s, p)) {
                    (Ok(a), Ok(b)) => worst = worst.max(rel_err(a, b)),
                    (Err(e), _) | (_, Err(e)) => {
                        out.push(CheckResult::failed(format!("exact p={p} {}", dim_name(dim)), &e));
                        worst = f64::INFINITY;
                    }
                }
            }
            out.push(CheckResult::at_most(
                format!("exact vs closed form, p={p}, {}", dim_name(dim)),
                worst,
                1e-10,
            ));
        }
    }
    out.extend(timing("exact vs closed form", start, 5.0, size));
    out
}

/// Closed form against Monte Carlo, in units of the standard error.
pub fn closed_form_vs_monte_carlo(size: &SuiteSize) -> Vec<CheckResult> {
    let start = Instant::now();
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for p in [2u32, 4] {
        let mut worst: f64 = 0.0;
        for i in 0..size.mc_simplices {
            let s = random_simplex(&mut rng, DIMS[i % 2]);
            let mc = mc_integrate(&s, p, size.mc_samples, 1000 + i as u64);
            let closed = simplex_energy(&s, p).unwrap_or(f64::NAN);
            worst = worst.max((closed - mc.estimate).abs() / mc.stderr);
        }
        out.push(CheckResult::at_most(
            format!("monte carlo, p={p}: max |error| / stderr"),
            worst,
            3.0,
        ));
    }
    out.extend(timing("monte carlo", start, 30.0, size));
    out
}

/// Oracle polarization against the star-product polar form, and the
/// two-variable example `x² + 3xy + 2y²`.
pub fn polarization(size: &SuiteSize) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for p in [2u32, 4] {
        let mut worst: f64 = 0.0;
        for _ in 0..size.polar_sets {
            let args: Vec<StarVector> = (0..p).map(|_| StarVector(random_vec(&mut rng, 1.0))).collect();
            worst = worst.max((polarization_oracle(&lp_monomials(p), &args) - polar_form(&args)).abs());
        }
        out.push(CheckResult::at_most(format!("polarization vs polar form, p={p}"), worst, 1e-10));
    }
    let f: Vec<Monomial> = vec![(1.0, [2, 0, 0]), (3.0, [1, 1, 0]), (2.0, [0, 2, 0])];
    let (ex, ey) = (StarVector(Vec3::x()), StarVector(Vec3::y()));
    for (name, a, b, want) in [
        ("x1 x2", ex, ex, 1.0),
        ("x1 y2", ex, ey, 1.5),
        ("x2 y1", ey, ex, 1.5),
        ("y1 y2", ey, ey, 2.0),
    ] {
        out.push(CheckResult::within(
            format!("x²+3xy+2y² polar coefficient of {name}"),
            want,
            polarization_oracle(&f, &[a, b]),
            0.0,
        ));
    }
    out
}

/// Central differences of one simplex energy with respect to its points.
pub fn simplex_fd_gradient(s: &IntegrationSimplex, p: u32, h: f64) -> Result<[Vec3; 4]> {
    let mut g = [Vec3::zeros(); 4];
    for (slot, gv) in g.iter_mut().enumerate() {
        for k in 0..3 {
            let mut plus = s.clone();
            let mut minus = s.clone();
            if slot == 0 {
                plus.apex[k] += h;
                minus.apex[k] -= h;
            } else {
                plus.vertices[slot - 1][k] += h;
                minus.vertices[slot - 1][k] -= h;
            }
            gv[k] = (simplex_energy(&plus, p)? - simplex_energy(&minus, p)?) / (2.0 * h);
        }
    }
    Ok(g)
}

/// Simplex-level analytic gradient against central differences.
pub fn simplex_gradient(size: &SuiteSize) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for dim in DIMS {
        let mut worst: f64 = 0.0;
        for i in 0..size.gradient_simplices {
            let p = [2u32, 4, 6, 8][i % 4];
            let s = random_simplex(&mut rng, dim);
            let r = grad_ft_vertices(&s, p).and_then(|g| Ok((g, simplex_fd_gradient(&s, p, 1e-6)?)));
            match r {
                Ok((g, fd)) => {
                    let a = [g.d_apex, g.d_vertices[0], g.d_vertices[1], g.d_vertices[2]];
                    worst = worst.max(vec_rel_err(&a, &fd));
                }
                Err(e) => out.push(CheckResult::failed(format!("simplex gradient {}", dim_name(dim)), &e)),
            }
        }
        out.push(CheckResult::at_most(
            format!("simplex gradient vs fd, {}", dim_name(dim)),
            worst,
            1e-5,
        ));
    }
    out
}

type Signature = Vec<Vec<([VertexProvenance; 3], i8)>>;

fn signature(cells: &[RestrictedCell]) -> Signature {
    cells
        .iter()
        .map(|c| c.simplices.iter().map(|s| (s.provenance, s.weight as i8)).collect())
        .collect()
}

/// Result of [`pipeline_fd_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineFd {
    pub analytic: Vec<Vec3>,
    pub fd: Vec<Vec3>,
    /// The diagram's combinatorics did not change under any perturbation.
    pub general_position: bool,
}

impl PipelineFd {
    pub fn rel_error(&self) -> f64 {
        vec_rel_err(&self.analytic, &self.fd)
    }
}

/// Full gradient against central differences with the diagram rebuilt for
/// every perturbed configuration.
pub fn pipeline_fd_check(
    seeds: &SeedSet,
    domain: &Domain,
    field: &TensorField,
    p: u32,
    h: f64,
) -> Result<PipelineFd> {
    use rayon::prelude::*;
    let analytic = evaluate(seeds, domain, field, p)?.gradient.g;
    let base = signature(&build_rvd(seeds, domain, field)?);
    let x = seeds.to_flat();
    let energy_and_sig = |x: &[f64]| -> Result<(f64, bool)> {
        let s = SeedSet::from_flat(x)?;
        let cells = build_rvd(&s, domain, field)?;
        let sig = signature(&cells) == base;
        let mut e = 0.0;
        for c in &cells {
            for t in &c.simplices {
                e += t.weight * simplex_energy(t, p)?;
            }
        }
        Ok((e, sig))
    };
    let parts: Vec<Result<(f64, bool)>> = (0..x.len())
        .into_par_iter()
        .map(|k| {
            let mut xp = x.clone();
            xp[k] += h;
            let (fp, sp) = energy_and_sig(&xp)?;
            xp[k] = x[k] - h;
            let (fm, sm) = energy_and_sig(&xp)?;
            Ok(((fp - fm) / (2.0 * h), sp && sm))
        })
        .collect();
    let parts = parts.into_iter().collect::<Result<Vec<_>>>()?;
    let general_position = parts.iter().all(|(_, s)| *s);
    let fd = parts
        .chunks_exact(3)
        .map(|c| Vec3::new(c[0].0, c[1].0, c[2].0))
        .collect();
    Ok(PipelineFd {
        analytic,
        fd,
        general_position,
    })
}

/// Pipeline gradient against central differences on random configurations
/// of 10 to 30 generators in the unit cube, with identity and random
/// constant fields. Configurations that are not in general position are
/// resampled.
pub fn pipeline_gradient(size: &SuiteSize) -> Vec<CheckResult> {
    let start = Instant::now();
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let domain = Domain::unit_cube();
    for p in [2u32, 4] {
        let mut worst: f64 = 0.0;
        let mut resampled = 0;
        let mut done = 0;
        while done < size.pipeline_configs {
            let k = rng.random_range(10..=30);
            let seeds = match initial_seeds(&domain, k, rng.random()) {
                Ok(s) => s,
                Err(_) => continue,
            };
            let field = if done % 2 == 0 {
                TensorField::identity()
            } else {
                TensorField::constant(random_spd(&mut rng)).expect("random SPD tensor")
            };
            match pipeline_fd_check(&seeds, &domain, &field, p, 1e-6) {
                Ok(r) if r.general_position => {
                    worst = worst.max(r.rel_error());
                    done += 1;
                }
                Ok(_) | Err(_) if resampled < 10 * size.pipeline_configs => resampled += 1,
                Ok(_) => {
                    worst = f64::INFINITY;
                    done += 1;
                }
                Err(e) => {
                    out.push(CheckResult::failed(format!("pipeline gradient p={p}"), &e));
                    done += 1;
                }
            }
        }
        out.push(CheckResult::at_most(format!("pipeline gradient vs fd, p={p}"), worst, 1e-4));
    }
    out.extend(timing("pipeline gradient", start, 120.0, size));
    out
}

/// Octahedron `|x| + |y| + |z| <= r` around `c`.
pub fn octahedron(c: Vec3, r: f64) -> Result<Domain> {
    let mut hs = Vec::new();
    for sx in [-1.0, 1.0] {
        for sy in [-1.0, 1.0] {
            for sz in [-1.0, 1.0] {
                let n = Vec3::new(sx, sy, sz);
                hs.push(HalfSpace::new(n, n.dot(&c) + r)?);
            }
        }
    }
    Domain::volume(hs)
}

/// Octahedron subdivided `levels` times and projected onto the unit sphere.
pub fn sphere_surface(levels: u32) -> Result<Domain> {
    let mut v = vec![Vec3::x(), -Vec3::x(), Vec3::y(), -Vec3::y(), Vec3::z(), -Vec3::z()];
    let mut t: Vec<[usize; 3]> = vec![
        [0, 2, 4],
        [2, 1, 4],
        [1, 3, 4],
        [3, 0, 4],
        [2, 0, 5],
        [1, 2, 5],
        [3, 1, 5],
        [0, 3, 5],
    ];
    for _ in 0..levels {
        let mut mid = std::collections::HashMap::new();
        let mut next = Vec::with_capacity(4 * t.len());
        let mut midpoint = |a: usize, b: usize, v: &mut Vec<Vec3>| {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                v.push(((v[a] + v[b]) / 2.0).normalize());
                v.len() - 1
            })
        };
        for [a, b, c] in t {
            let ab = midpoint(a, b, &mut v);
            let bc = midpoint(b, c, &mut v);
            let ca = midpoint(c, a, &mut v);
            next.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        t = next;
    }
    Domain::surface(v, t)
}

fn test_domains() -> Vec<(&'static str, Result<Domain>)> {
    vec![
        ("unit cube", Ok(Domain::unit_cube())),
        ("octahedron", octahedron(Vec3::new(0.2, -0.1, 0.3), 1.3)),
        ("sphere surface", sphere_surface(2)),
    ]
}

/// `∇F = 2 m_i (w_i − c_i)` for `p = 2` and the identity field.
pub fn cvt_equivalence(size: &SuiteSize) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let field = TensorField::identity();
    for (i, (name, domain)) in test_domains().into_iter().enumerate() {
        let r = domain.and_then(|d| {
            let seeds = initial_seeds(&d, size.partition_seeds, 600 + i as u64)?;
            let cells = build_rvd(&seeds, &d, &field)?;
            let g = evaluate_cells(&cells, &seeds, &d, 2, true)?.gradient.g;
            let oracle: Vec<Vec3> = cell_moments(&cells)
                .iter()
                .zip(&seeds.points)
                .map(|((m, c), w)| (w - c) * (2.0 * m))
                .collect();
            Ok(vec_rel_err(&g, &oracle))
        });
        out.push(match r {
            Ok(e) => CheckResult::at_most(format!("cvt gradient 2m(w-c), {name}"), e, 1e-9),
            Err(e) => CheckResult::failed(format!("cvt gradient, {name}"), &e),
        });
    }
    out
}

/// Circumcenter equidistance, Jacobian translation property and Jacobian
/// against central differences.
pub fn circumcenters(size: &SuiteSize) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let (mut resid, mut sum_err, mut fd_err) = (0.0f64, 0.0f64, 0.0f64);
    let mut done = 0;
    while done < size.quadruples {
        let w = [0; 4].map(|_| random_vec(&mut rng, 1.0));
        let a = Mat3::from_rows(&[
            (w[1] - w[0]).normalize().transpose(),
            (w[2] - w[0]).normalize().transpose(),
            (w[3] - w[0]).normalize().transpose(),
        ]);
        if a.determinant().abs() < 0.05 {
            continue;
        }
        done += 1;
        let (Ok(c), Ok(jac)) = (
            circumcenter(&w[0], &w[1], &w[2], &w[3]),
            circumcenter_jacobian(&w[0], &w[1], &w[2], &w[3]),
        ) else {
            resid = f64::INFINITY;
            continue;
        };
        let scale = w.iter().map(|x| (x - w[0]).norm()).fold(0.0, f64::max);
        let d0 = (c - w[0]).norm();
        for x in &w[1..] {
            resid = resid.max(((c - x).norm() - d0).abs() / scale);
        }
        let sum: Mat3 = jac.iter().sum();
        sum_err = sum_err.max((sum - Mat3::identity()).amax());
        let h = 1e-6;
        for s in 0..4 {
            let mut fd = Mat3::zeros();
            for k in 0..3 {
                let (mut wp, mut wm) = (w, w);
                wp[s][k] += h;
                wm[s][k] -= h;
                let cp = circumcenter(&wp[0], &wp[1], &wp[2], &wp[3]).unwrap_or(Vec3::repeat(f64::NAN));
                let cm = circumcenter(&wm[0], &wm[1], &wm[2], &wm[3]).unwrap_or(Vec3::repeat(f64::NAN));
                fd.set_column(k, &((cp - cm) / (2.0 * h)));
            }
            let den = jac.iter().map(|j| j.amax()).fold(0.0, f64::max);
            fd_err = fd_err.max((fd - jac[s]).amax() / den);
        }
    }
    vec![
        CheckResult::at_most("circumcenter equidistance / scale", resid, 1e-10),
        CheckResult::at_most("circumcenter jacobian blocks sum to identity", sum_err, 1e-10),
        CheckResult::at_most("circumcenter jacobian vs fd", fd_err, 1e-6),
    ]
}

/// Cells tile the domain.
pub fn partition(size: &SuiteSize) -> Vec<CheckResult> {
    let field = TensorField::identity();
    test_domains()
        .into_iter()
        .enumerate()
        .map(|(i, (name, domain))| {
            let r = domain.and_then(|d| {
                let seeds = initial_seeds(&d, size.partition_seeds, 800 + i as u64)?;
                let cells = build_rvd(&seeds, &d, &field)?;
                let measure: f64 = cells.iter().map(|c| c.measure).sum();
                let simplices: f64 = cell_moments(&cells).iter().map(|(m, _)| m).sum();
                Ok((d.measure(), measure, simplices))
            });
            match r {
                Ok((want, cells, simplices)) => CheckResult::at_most(
                    format!("partition of {name}: relative error"),
                    rel_err(want, cells).max(rel_err(want, simplices)),
                    1e-9,
                ),
                Err(e) => CheckResult::failed(format!("partition of {name}"), &e),
            }
        })
        .collect()
}

/// `F(sW, sΩ) = s^(p+3) F(W, Ω)` with the identity field.
pub fn homogeneity(size: &SuiteSize) -> Vec<CheckResult> {
    let field = TensorField::identity();
    let mut out = Vec::new();
    for (i, (name, domain)) in test_domains().into_iter().take(2).enumerate() {
        let d = match domain {
            Ok(d) => d,
            Err(e) => {
                out.push(CheckResult::failed(format!("homogeneity {name}"), &e));
                continue;
            }
        };
        for p in [2u32, 4] {
            for s in [0.5, 2.0] {
                let r = (|| {
                    let seeds = initial_seeds(&d, size.partition_seeds, 900 + i as u64)?;
                    let scaled = SeedSet::new(seeds.points.iter().map(|w| w * s).collect())?;
                    let f = evaluate(&seeds, &d, &field, p)?.energy;
                    let fs = evaluate(&scaled, &d.scaled(s)?, &field, p)?.energy;
                    Ok(rel_err(fs, s.powi(p as i32 + 3) * f))
                })();
                out.push(match r {
                    Ok(e) => CheckResult::at_most(format!("homogeneity {name}, p={p}, s={s}"), e, 1e-9),
                    Err(e) => CheckResult::failed(format!("homogeneity {name}"), &e),
                });
            }
        }
    }
    out
}

/// Reference run settings for the descent check.
pub const DESCENT_RNG_SEED: u64 = 7;
/// Energy reached from the same start by a reference run continued until
/// `‖∇F‖∞ <= 1e-10` (148 iterations); see `examples/descent_floor.rs`.
pub const DESCENT_F_FLOOR: f64 = 1.1440493460036706e-2;

/// Single generator reaches the cube center; a 100-generator run covers at
/// least 90% of the gap to the reference floor.
pub fn optimization(size: &SuiteSize) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let domain = Domain::unit_cube();
    let field = TensorField::identity();
    let w0 = SeedSet::new(vec![Vec3::new(0.1, 0.8, 0.35)]).expect("one seed");
    match optimize(&w0, &domain, &field, &OptimizerConfig::default()) {
        Ok(r) => {
            out.push(CheckResult::at_most(
                "single generator: distance to center",
                (r.seeds.points[0] - Vec3::repeat(0.5)).norm(),
                1e-6,
            ));
            out.push(CheckResult::at_most("single generator: iterations", r.trace.len() as f64, 50.0));
        }
        Err(e) => out.push(CheckResult::failed("single generator", &e)),
    }
    let cfg = OptimizerConfig {
        max_iters: size.optimize_iters,
        rng_seed: DESCENT_RNG_SEED,
        ..Default::default()
    };
    let r = initial_seeds(&domain, size.optimize_seeds, DESCENT_RNG_SEED)
        .and_then(|w| optimize(&w, &domain, &field, &cfg));
    match r {
        Ok(r) if size.optimize_seeds == 100 && size.optimize_iters == 200 => {
            let f_end = r.final_evaluation.energy;
            let ratio = (r.initial_energy - f_end) / (r.initial_energy - DESCENT_F_FLOOR);
            out.push(CheckResult::at_least("100 generators: fraction of gap closed", ratio, 0.9));
        }
        Ok(r) => out.push(CheckResult::at_least(
            "generators: energy decrease",
            r.initial_energy - r.final_evaluation.energy,
            0.0,
        )),
        Err(e) => out.push(CheckResult::failed("100 generators", &e)),
    }
    out
}

/// Every check group, in order.
pub fn groups() -> [(&'static str, fn(&SuiteSize) -> Vec<CheckResult>); 10] {
    [
        ("closed form vs exact integration", closed_form_vs_exact),
        ("closed form vs monte carlo", closed_form_vs_monte_carlo),
        ("polarization", polarization),
        ("simplex gradient", simplex_gradient),
        ("pipeline gradient", pipeline_gradient),
        ("cvt equivalence", cvt_equivalence),
        ("circumcenters", circumcenters),
        ("partition", partition),
        ("homogeneity", homogeneity),
        ("optimization", optimization),
    ]
}

/// Runs every group.
pub fn run_suite(size: &SuiteSize) -> Vec<(&'static str, Vec<CheckResult>)> {
    groups().into_iter().map(|(name, f)| (name, f(size))).collect()
}

/// Text table of results.
pub fn format_report(results: &[(&'static str, Vec<CheckResult>)]) -> String {
    let mut s = format!(
        "{:<48} {:>12} {:>12} {:>10}  result\n",
        "check", "expected", "got", "tolerance"
    );
    for (group, checks) in results {
        s.push_str(&format!("# {group}\n"));
        for c in checks {
            s.push_str(&format!("{c}\n"));
        }
    }
    s
}

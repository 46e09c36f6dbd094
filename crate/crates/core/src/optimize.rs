//! Global energy and gradient assembly, and the seed optimizer.

use rayon::prelude::*;

use crate::gradient::oriented_energy_and_gradient;
use crate::rvd::{build_rvd, constrained_vertex_jacobian, Domain, RestrictedCell, SeedSet};
use crate::simplex::SimplexDim;
use crate::{field::TensorField, quadrature::check_p, Error, Result, Vec3};

/// `∂F/∂W` as one row per generator.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientAccumulator {
    pub g: Vec<Vec3>,
    /// Contributions were combined in cell order.
    pub deterministic: bool,
}

impl GradientAccumulator {
    pub fn zeros(k: usize, deterministic: bool) -> Self {
        Self {
            g: vec![Vec3::zeros(); k],
            deterministic,
        }
    }

    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    pub fn inf_norm(&self) -> f64 {
        self.g.iter().map(|r| r.amax()).fold(0.0, f64::max)
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.g.iter().flat_map(|r| [r.x, r.y, r.z]).collect()
    }

    fn add(&mut self, s: usize, v: &Vec3) {
        self.g[s] += v;
    }
}

/// Output of [`evaluate`].
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub energy: f64,
    pub gradient: GradientAccumulator,
    /// Generators whose restricted cell is empty.
    pub empty_cells: Vec<usize>,
}

struct CellTerms {
    energy: f64,
    grad: Vec<(usize, Vec3)>,
}

fn cell_terms(cell: &RestrictedCell, seeds: &SeedSet, domain: &Domain, p: u32) -> Result<CellTerms> {
    let owner = cell.seed_index;
    let mut energy = 0.0;
    let mut grad = Vec::new();
    for s in &cell.simplices {
        let (f, g) = oriented_energy_and_gradient(s, p)?;
        if !f.is_finite() {
            return Err(Error::NonFiniteEnergy);
        }
        energy += s.weight * f;
        grad.push((owner, g.d_apex * s.weight));
        for (prov, dv) in s.provenance.iter().zip(&g.d_vertices) {
            for (seed, jac) in constrained_vertex_jacobian(prov, seeds, domain)? {
                grad.push((seed, jac.transpose() * dv * s.weight));
            }
        }
    }
    Ok(CellTerms { energy, grad })
}

/// `F(W)` and `∂F/∂W` with contributions combined in cell order.
pub fn evaluate(seeds: &SeedSet, domain: &Domain, field: &TensorField, p: u32) -> Result<Evaluation> {
    evaluate_with(seeds, domain, field, p, true)
}

/// As [`evaluate`]; with `deterministic == false` the per-cell results are
/// reduced in whatever order the thread pool produces them.
pub fn evaluate_with(
    seeds: &SeedSet,
    domain: &Domain,
    field: &TensorField,
    p: u32,
    deterministic: bool,
) -> Result<Evaluation> {
    check_p(p)?;
    let cells = build_rvd(seeds, domain, field)?;
    evaluate_cells(&cells, seeds, domain, p, deterministic)
}

/// Assembles energy and gradient from an already built diagram.
pub fn evaluate_cells(
    cells: &[RestrictedCell],
    seeds: &SeedSet,
    domain: &Domain,
    p: u32,
    deterministic: bool,
) -> Result<Evaluation> {
    let k = seeds.len();
    let empty_cells = cells.iter().filter(|c| c.is_empty()).map(|c| c.seed_index).collect();
    let (energy, gradient) = if deterministic {
        let terms: Vec<CellTerms> = cells
            .par_iter()
            .map(|c| cell_terms(c, seeds, domain, p))
            .collect::<Result<_>>()?;
        let mut acc = GradientAccumulator::zeros(k, true);
        let mut energy = 0.0;
        for t in &terms {
            energy += t.energy;
            for (s, v) in &t.grad {
                acc.add(*s, v);
            }
        }
        (energy, acc)
    } else {
        cells
            .par_iter()
            .map(|c| {
                let t = cell_terms(c, seeds, domain, p)?;
                let mut acc = GradientAccumulator::zeros(k, false);
                for (s, v) in &t.grad {
                    acc.add(*s, v);
                }
                Ok::<_, Error>((t.energy, acc))
            })
            .try_reduce(
                || (0.0, GradientAccumulator::zeros(k, false)),
                |(ea, mut ga), (eb, gb)| {
                    for (a, b) in ga.g.iter_mut().zip(&gb.g) {
                        *a += b;
                    }
                    Ok((ea + eb, ga))
                },
            )?
    };
    if !energy.is_finite() || gradient.g.iter().any(|r| !r.iter().all(|c| c.is_finite())) {
        return Err(Error::NonFiniteEnergy);
    }
    Ok(Evaluation {
        energy,
        gradient,
        empty_cells,
    })
}

/// Energy only.
pub fn energy(seeds: &SeedSet, domain: &Domain, field: &TensorField, p: u32) -> Result<f64> {
    check_p(p)?;
    let cells = build_rvd(seeds, domain, field)?;
    let mut total = 0.0;
    for c in &cells {
        for s in &c.simplices {
            total += s.weight * crate::quadrature::simplex_energy(s, p)?;
        }
    }
    if !total.is_finite() {
        return Err(Error::NonFiniteEnergy);
    }
    Ok(total)
}

/// Mass and centroid of each restricted cell in world coordinates, integrated
/// directly over the cell's simplices.
pub fn cell_moments(cells: &[RestrictedCell]) -> Vec<(f64, Vec3)> {
    cells
        .iter()
        .map(|c| {
            let mut m = 0.0;
            let mut first = Vec3::zeros();
            for s in &c.simplices {
                let vol = match s.dim {
                    SimplexDim::Tetrahedron => s.weight * s.world_measure(),
                    SimplexDim::Triangle => s.world_measure(),
                };
                m += vol;
                first += s.barycenter() * vol;
            }
            let centroid = if m != 0.0 { first / m } else { Vec3::zeros() };
            (m, centroid)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Lbfgs,
    Steepest,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub p: u32,
    pub max_iters: usize,
    /// Stop once `‖∇F‖∞` is at most this.
    pub grad_tol: f64,
    pub method: Method,
    pub lbfgs_memory: usize,
    /// Armijo sufficient decrease constant.
    pub c1: f64,
    /// Step reduction factor per backtrack.
    pub backtrack: f64,
    pub max_backtracks: usize,
    pub rng_seed: u64,
    pub deterministic: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            p: 2,
            max_iters: 200,
            grad_tol: 1e-8,
            method: Method::Lbfgs,
            lbfgs_memory: 7,
            c1: 1e-4,
            backtrack: 0.5,
            max_backtracks: 40,
            rng_seed: 0,
            deterministic: true,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        check_p(self.p)?;
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if !(self.grad_tol > 0.0) {
            return bad("grad_tol must be positive");
        }
        if !(self.c1 > 0.0 && self.c1 < 1.0) {
            return bad("c1 must lie in (0, 1)");
        }
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return bad("backtrack factor must lie in (0, 1)");
        }
        if self.method == Method::Lbfgs && self.lbfgs_memory == 0 {
            return bad("lbfgs_memory must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    GradTol,
    MaxIters,
    LineSearchFailed,
}

/// One accepted iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iter: usize,
    pub energy: f64,
    pub grad_inf_norm: f64,
    pub step_size: f64,
    /// `∇F·d` of the search direction the step was taken along.
    pub slope: f64,
    /// Energy before the step.
    pub previous_energy: f64,
}

#[derive(Debug, Clone)]
pub struct OptimizeResult {
    pub seeds: SeedSet,
    pub trace: Vec<TraceRow>,
    pub termination: Termination,
    pub initial_energy: f64,
    pub final_evaluation: Evaluation,
    /// Line-search trials rejected because the diagram could not be evaluated.
    pub rejected_trials: usize,
}

/// Uniform random generators inside the domain.
pub fn initial_seeds(domain: &Domain, k: usize, rng_seed: u64) -> Result<SeedSet> {
    SeedSet::new(domain.sample_uniform(k, rng_seed))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Two-loop recursion `-H g`.
fn lbfgs_direction(g: &[f64], pairs: &[(Vec<f64>, Vec<f64>, f64)], gamma: f64) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alpha = vec![0.0; pairs.len()];
    for (k, (s, y, rho)) in pairs.iter().enumerate().rev() {
        alpha[k] = rho * dot(s, &q);
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi -= alpha[k] * yi;
        }
    }
    for qi in q.iter_mut() {
        *qi *= gamma;
    }
    for (k, (s, y, rho)) in pairs.iter().enumerate() {
        let beta = rho * dot(y, &q);
        for (qi, si) in q.iter_mut().zip(s) {
            *qi += (alpha[k] - beta) * si;
        }
    }
    q.iter().map(|v| -v).collect()
}

/// Minimizes `F` over the generator positions.
pub fn optimize(w0: &SeedSet, domain: &Domain, field: &TensorField, cfg: &OptimizerConfig) -> Result<OptimizeResult> {
    cfg.validate()?;
    let eval = |x: &[f64]| -> Result<Evaluation> {
        let s = SeedSet::from_flat(x)?;
        evaluate_with(&s, domain, field, cfg.p, cfg.deterministic)
    };
    let mut x = w0.to_flat();
    let mut cur = eval(&x)?;
    let initial_energy = cur.energy;
    let first_scale = 0.1 * domain.scale();
    let mut pairs: Vec<(Vec<f64>, Vec<f64>, f64)> = Vec::new();
    let mut trace = Vec::new();
    let mut rejected = 0;
    let mut termination = Termination::MaxIters;

    for iter in 1..=cfg.max_iters {
        let g = cur.gradient.to_flat();
        let gnorm = inf_norm(&g);
        if gnorm <= cfg.grad_tol {
            termination = Termination::GradTol;
            break;
        }
        let steepest = |g: &[f64]| -> Vec<f64> { g.iter().map(|v| -v * first_scale / gnorm).collect() };
        let mut dir = match (cfg.method, pairs.last()) {
            (Method::Lbfgs, Some((s, y, _))) => lbfgs_direction(&g, &pairs, dot(s, y) / dot(y, y)),
            _ => steepest(&g),
        };
        let mut accepted = None;
        for attempt in 0..2 {
            let slope = dot(&g, &dir);
            if !(slope < 0.0) {
                pairs.clear();
                dir = steepest(&g);
                continue;
            }
            let mut step = 1.0;
            for _ in 0..=cfg.max_backtracks {
                let trial: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + step * d).collect();
                match eval(&trial) {
                    Ok(e) if e.energy <= cur.energy + cfg.c1 * step * slope => {
                        accepted = Some((trial, e, step, slope));
                        break;
                    }
                    Ok(_) => {}
                    Err(_) => rejected += 1,
                }
                step *= cfg.backtrack;
            }
            if accepted.is_some() || attempt == 1 {
                break;
            }
            pairs.clear();
            dir = steepest(&g);
        }
        let Some((x_new, e_new, step, slope)) = accepted else {
            termination = Termination::LineSearchFailed;
            break;
        };
        if cfg.method == Method::Lbfgs {
            let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = e_new.gradient.to_flat().iter().zip(&g).map(|(a, b)| a - b).collect();
            let sy = dot(&s, &y);
            if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
                pairs.push((s, y, 1.0 / sy));
                if pairs.len() > cfg.lbfgs_memory {
                    pairs.remove(0);
                }
            }
        }
        trace.push(TraceRow {
            iter,
            energy: e_new.energy,
            grad_inf_norm: e_new.gradient.inf_norm(),
            step_size: step,
            slope,
            previous_energy: cur.energy,
        });
        x = x_new;
        cur = e_new;
        if iter == cfg.max_iters && cur.gradient.inf_norm() <= cfg.grad_tol {
            termination = Termination::GradTol;
        }
    }
    Ok(OptimizeResult {
        seeds: SeedSet::from_flat(&x)?,
        trace,
        termination,
        initial_energy,
        final_evaluation: cur,
        rejected_trials: rejected,
    })
}

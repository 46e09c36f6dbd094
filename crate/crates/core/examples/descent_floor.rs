//! Long reference run from the start used by the 100-generator descent check.
//! Prints the energy it settles at.

use lpcvt::optimize::{initial_seeds, optimize, OptimizerConfig};
use lpcvt::verify::DESCENT_RNG_SEED;
use lpcvt::{Domain, TensorField};

fn main() -> lpcvt::Result<()> {
    let iters: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2000);
    let domain = Domain::unit_cube();
    let w0 = initial_seeds(&domain, 100, DESCENT_RNG_SEED)?;
    let cfg = OptimizerConfig {
        max_iters: iters,
        grad_tol: 1e-10,
        rng_seed: DESCENT_RNG_SEED,
        ..Default::default()
    };
    let r = optimize(&w0, &domain, &TensorField::identity(), &cfg)?;
    for row in r.trace.iter().filter(|t| t.iter % 100 == 0 || t.iter == 200) {
        println!("iter {:>5}  F {:.16e}  |g| {:.3e}", row.iter, row.energy, row.grad_inf_norm);
    }
    println!("initial  {:.16e}", r.initial_energy);
    println!("final    {:.16e}", r.final_evaluation.energy);
    println!("iterations {}  termination {:?}", r.trace.len(), r.termination);
    Ok(())
}

use lpcvt::verify::{self, CheckResult, SuiteSize};

fn run(number: usize) {
    let (name, group) = verify::groups()[number - 1];
    let results: Vec<CheckResult> = group(&SuiteSize::full());
    for r in &results {
        println!("    {r}");
    }
    let pass = !results.is_empty() && results.iter().all(|r| r.pass);
    println!("[{number:>2}] {name}: {}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{name} failed");
}

#[test]
fn a01_closed_form_vs_exact_integration() {
    run(1);
}

#[test]
fn a02_closed_form_vs_monte_carlo() {
    run(2);
}

#[test]
fn a03_polarization() {
    run(3);
}

#[test]
fn a04_simplex_gradient() {
    run(4);
}

#[test]
fn a05_pipeline_gradient() {
    run(5);
}

#[test]
fn a06_cvt_equivalence() {
    run(6);
}

#[test]
fn a07_circumcenters() {
    run(7);
}

#[test]
fn a08_partition() {
    run(8);
}

#[test]
fn a09_homogeneity() {
    run(9);
}

#[test]
fn a10_optimization() {
    run(10);
}

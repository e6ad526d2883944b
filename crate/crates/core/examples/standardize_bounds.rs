// The attainable window of each measure for one pair of marginals, and how
// it narrows as the thresholds rise.
//
// Run with `cargo run --example standardize_bounds`.

use rulestd::apriori::Thresholds;
use rulestd::measures::{Measure, SupportTriple};
use rulestd::standardize::{bounds_for, score};

pub fn run() -> rulestd::Result<()> {
    let t = SupportTriple::new(0.3, 0.2, 0.1)?;
    for (sigma, kappa) in [(1e-4, 1e-4), (0.05, 0.2), (0.1, 0.3)] {
        let th = Thresholds::new(sigma, kappa)?;
        println!("sigma = {sigma}, kappa = {kappa}");
        for m in Measure::ALL {
            let b = bounds_for(m, &t, &th)?;
            let s = score(m, &t, &th)?;
            println!(
                "  {:<7} lower {:>8.4}  upper {:>7.4}  raw {:>7.4}  standardized {:.4}{}",
                m.name(),
                b.lower,
                b.upper,
                s.raw,
                s.value,
                if s.degenerate { " (degenerate)" } else { "" }
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> rulestd::Result<()> {
    run()
}

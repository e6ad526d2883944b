// Score support triples taken from elsewhere, once at the mining floor and
// once under stricter hypothetical thresholds.
//
// Run with `cargo run --example score_rules`.

use rulestd::apriori::Thresholds;
use rulestd::measures::{Measure, SupportTriple};
use rulestd::standardize::MeasureReport;

pub fn run() -> rulestd::Result<()> {
    // (P(A), P(B), P(A,B)) for three rules over a 10,000-transaction set
    let triples = [(0.5, 0.5, 0.4875), (0.1, 0.1, 0.0195), (0.02, 0.3, 0.012)];
    let settings = [
        ("floor 1/n", Thresholds::floor_for(10_000)),
        ("sigma 0.01, kappa 0.1", Thresholds::new(0.01, 0.1)?),
    ];

    for (label, th) in settings {
        println!("thresholds: {label}");
        for &(a, b, ab) in &triples {
            let report = MeasureReport::new(&SupportTriple::new(a, b, ab)?, &th);
            let lift = report
                .get(Measure::Lift)
                .expect("lift is defined for these triples");
            println!(
                "  ({a}, {b}, {ab}): lift {:.3} in [{:.4}, {:.3}] -> {:.4}",
                lift.raw, lift.bounds.lower, lift.bounds.upper, lift.value
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> rulestd::Result<()> {
    run()
}

// Upper and lower lift bounds when both marginals equal `x`, written as CSV.
//
// Run with `cargo run --example lift_curve > curve.csv`.

use rulestd::report::{CurveTable, Format, Metadata};
use rulestd::standardize::lift_bound_curve;

pub fn run() -> rulestd::Result<()> {
    let grid: Vec<f64> = (20..=100).step_by(5).map(|i| i as f64 / 100.0).collect();
    let points = lift_bound_curve(&grid)?;
    let mut meta = Metadata::new();
    meta.insert(
        "description".into(),
        "lift bounds for P(A) = P(B) = x".into(),
    );
    CurveTable::new(meta, &points).write(std::io::stdout().lock(), Format::Csv)
}

#[allow(dead_code)]
fn main() -> rulestd::Result<()> {
    run()
}

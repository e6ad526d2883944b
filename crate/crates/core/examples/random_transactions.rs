// Seeded random transactions with independent items: empirical supports
// sit near `p` and pair lifts near 1.
//
// Run with `cargo run --example random_transactions`.

use rulestd::randgen::{generate, RandomSpec};
use rulestd::transactions::Itemset;

pub fn run() -> rulestd::Result<()> {
    let spec = RandomSpec {
        n_transactions: 5_000,
        n_items: 20,
        p: 0.1,
        seed: 42,
    };
    let ts = generate(&spec)?;
    let empty = ts.transactions().iter().filter(|t| t.is_empty()).count();
    println!(
        "{} transactions over {} items, {empty} empty",
        ts.n(),
        ts.catalog().len()
    );

    let mut lifts = Vec::new();
    for i in 0..5u32 {
        let a = Itemset::single(i);
        let b = Itemset::single(i + 1);
        let s = ts.rule_supports(&a, &b)?;
        lifts.push(s.p_ab / (s.p_a * s.p_b));
        println!(
            "{} & {}: P(A) {:.4}  P(B) {:.4}  P(A,B) {:.4}  lift {:.3}",
            ts.catalog().label(i).unwrap_or("?"),
            ts.catalog().label(i + 1).unwrap_or("?"),
            s.p_a,
            s.p_b,
            s.p_ab,
            lifts.last().copied().unwrap_or_default()
        );
    }

    let mut first_lines = Vec::new();
    ts.write_basket(&mut first_lines)?;
    let text = String::from_utf8_lossy(&first_lines);
    println!("first transactions:");
    for line in text.lines().take(3) {
        println!("  {line}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> rulestd::Result<()> {
    run()
}

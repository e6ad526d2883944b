// How far standardization reorders rules: Kendall's tau-b between raw and
// standardized values, overall and by decile of the raw ranking.
//
// Run with `cargo run --example compare_rankings`.

use rulestd::apriori::{mine_rules, MineOptions, Thresholds};
use rulestd::measures::Measure;
use rulestd::randgen::{generate, RandomSpec};
use rulestd::rankcompare::tau_b_by_decile;
use rulestd::standardize::score;

pub fn run() -> rulestd::Result<()> {
    let spec = RandomSpec {
        n_transactions: 2_000,
        n_items: 60,
        p: 0.05,
        seed: 7,
    };
    let ts = generate(&spec)?;
    let th = Thresholds::new(0.002, 0.02)?;
    let rules = mine_rules(
        &ts,
        &th,
        &MineOptions {
            max_len: 2,
            max_consequent_len: None,
        },
    )?;
    println!("{} rules from {} random transactions", rules.len(), ts.n());

    for m in Measure::ALL {
        let (mut raw, mut std) = (Vec::new(), Vec::new());
        for r in &rules {
            if let Ok(s) = score(m, &r.triple()?, &th) {
                if !s.degenerate {
                    raw.push(s.raw);
                    std.push(s.value);
                }
            }
        }
        let rep = tau_b_by_decile(&raw, &std)?;
        let deciles: Vec<String> = rep
            .by_decile
            .iter()
            .map(|d| d.map_or("  -  ".into(), |v| format!("{v:5.2}")))
            .collect();
        println!(
            "{:<7} overall {:6.3}  deciles {}",
            m.name(),
            rep.overall,
            deciles.join(" ")
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> rulestd::Result<()> {
    run()
}

// Mine rules from a small basket file and print every measure next to its
// standardized value.
//
// Run with `cargo run --example mine_basket`.

use rulestd::apriori::{mine_rules, sort_for_presentation, MineOptions, Thresholds};
use rulestd::standardize::MeasureReport;
use rulestd::transactions::{parse_basket, Delimiter};

const BASKETS: &str = "\
# one shopping trip per line
bread milk
bread diapers beer eggs
milk diapers beer cola
bread milk diapers beer
bread milk diapers cola
";

pub fn run() -> rulestd::Result<()> {
    let ts = parse_basket(BASKETS.as_bytes(), Delimiter::Whitespace)?;
    let th = Thresholds::new(0.4, 0.6)?;
    let mut rules = mine_rules(&ts, &th, &MineOptions::default())?;
    sort_for_presentation(&mut rules);

    println!(
        "{} transactions, {} rules at support >= 0.4, confidence >= 0.6",
        ts.n(),
        rules.len()
    );
    println!(
        "{:<26} {:>5} {:>5}   measure raw -> standardized",
        "rule", "supp", "conf"
    );
    for r in &rules {
        let name = format!(
            "{} => {}",
            ts.catalog().format_itemset(&r.antecedent),
            ts.catalog().format_itemset(&r.consequent)
        );
        let report = MeasureReport::new(&r.triple()?, &th);
        let cells: Vec<String> = report
            .iter()
            .map(|(m, s)| match s {
                Ok(s) => format!("{m} {:.3}->{:.3}", s.raw, s.value),
                Err(e) => format!("{m} ({e})"),
            })
            .collect();
        println!(
            "{name:<26} {:>5.2} {:>5.2}   {}",
            r.support(),
            r.confidence(),
            cells.join("  ")
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> rulestd::Result<()> {
    run()
}

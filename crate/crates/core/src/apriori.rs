//! Level-wise frequent itemset mining and rule generation.
//!
//! Candidates of size `k` are built by joining frequent `(k-1)`-sets that
//! share their first `k-2` items, then pruned unless every `(k-1)`-subset is
//! frequent. Each frequent set carries the sorted list of transactions that
//! contain it, so a candidate's support is the size of its two parents'
//! intersection.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::SupportTriple;
use crate::transactions::{Itemset, RuleCounts, TransactionSet};

/// Itemset length cap used when the caller gives none.
pub const DEFAULT_MAX_LEN: usize = 5;

/// Absolute slack for threshold comparisons made on counts.
const COUNT_TOL: f64 = 1e-9;

/// Minimum support `sigma` and minimum confidence `kappa`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub sigma: f64,
    pub kappa: f64,
}

impl Thresholds {
    pub fn new(sigma: f64, kappa: f64) -> Result<Self> {
        for (name, v) in [("minimum support", sigma), ("minimum confidence", kappa)] {
            if !(v.is_finite() && v > 0.0 && v <= 1.0) {
                return Err(Error::InvalidThresholds(format!(
                    "{name} must lie in (0, 1], got {v}"
                )));
            }
        }
        Ok(Self { sigma, kappa })
    }

    /// Both thresholds at `1/n`, the floor for `n` transactions.
    pub fn floor_for(n: usize) -> Self {
        let f = 1.0 / n.max(1) as f64;
        Self { sigma: f, kappa: f }
    }

    /// Resolves optional user thresholds, defaulting each to `1/n`.
    pub fn resolve(sigma: Option<f64>, kappa: Option<f64>, n: usize) -> Result<Self> {
        let floor = Self::floor_for(n);
        let th = Self::new(sigma.unwrap_or(floor.sigma), kappa.unwrap_or(floor.kappa))?;
        th.check_for(n)?;
        Ok(th)
    }

    /// Both thresholds must be at least `1/n`.
    pub fn check_for(&self, n: usize) -> Result<()> {
        let floor = 1.0 / n as f64;
        for (name, v) in [
            ("minimum support", self.sigma),
            ("minimum confidence", self.kappa),
        ] {
            if v < floor * (1.0 - 1e-12) {
                return Err(Error::InvalidThresholds(format!(
                    "{name} {v} is below 1/n = {floor}"
                )));
            }
        }
        Ok(())
    }

    /// Smallest transaction count meeting `sigma` out of `n`.
    pub fn min_count(&self, n: usize) -> usize {
        let x = self.sigma * n as f64;
        ((x - COUNT_TOL * x.max(1.0)).ceil().max(1.0)) as usize
    }

    pub fn meets_confidence(&self, count_ab: usize, count_a: usize) -> bool {
        let need = self.kappa * count_a as f64;
        count_ab as f64 >= need - COUNT_TOL * need.max(1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequentItemset {
    pub itemset: Itemset,
    pub count: usize,
}

impl FrequentItemset {
    pub fn support(&self, n: usize) -> f64 {
        self.count as f64 / n as f64
    }
}

/// A mined rule `antecedent => consequent` with its occurrence counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub id: usize,
    pub antecedent: Itemset,
    pub consequent: Itemset,
    pub counts: RuleCounts,
}

impl Rule {
    pub fn support(&self) -> f64 {
        self.counts.p_ab()
    }

    pub fn confidence(&self) -> f64 {
        self.counts.ab as f64 / self.counts.a as f64
    }

    pub fn triple(&self) -> Result<SupportTriple> {
        self.counts.triple()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MineOptions {
    pub max_len: usize,
    /// Largest consequent to emit; `None` keeps every bipartition.
    pub max_consequent_len: Option<usize>,
}

impl Default for MineOptions {
    fn default() -> Self {
        Self {
            max_len: DEFAULT_MAX_LEN,
            max_consequent_len: None,
        }
    }
}

struct Level {
    items: Vec<u32>,
    tids: Vec<u32>,
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// All itemsets of size `<= max_len` whose support reaches `th.sigma`,
/// ordered by size and then lexicographically.
pub fn frequent_itemsets(
    ts: &TransactionSet,
    th: &Thresholds,
    max_len: usize,
) -> Result<Vec<FrequentItemset>> {
    if max_len == 0 {
        return Err(Error::InvalidValue("max_len must be at least 1".into()));
    }
    th.check_for(ts.n())?;
    let min_count = th.min_count(ts.n());

    let mut tidlists = vec![Vec::new(); ts.catalog().len()];
    for (tid, t) in ts.transactions().iter().enumerate() {
        for &id in t.items() {
            tidlists[id as usize].push(tid as u32);
        }
    }
    let mut level: Vec<Level> = tidlists
        .into_iter()
        .enumerate()
        .filter(|(_, tids)| tids.len() >= min_count)
        .map(|(id, tids)| Level {
            items: vec![id as u32],
            tids,
        })
        .collect();

    let mut out: Vec<FrequentItemset> = Vec::new();
    let mut k = 1;
    loop {
        out.extend(level.iter().map(|l| FrequentItemset {
            itemset: Itemset::from_sorted(l.items.clone()),
            count: l.tids.len(),
        }));
        if k == max_len || level.len() < 2 {
            break;
        }
        level = next_level(&level, min_count);
        k += 1;
    }
    Ok(out)
}

fn next_level(prev: &[Level], min_count: usize) -> Vec<Level> {
    let k_minus_1 = prev[0].items.len();
    let prefix_len = k_minus_1 - 1;
    let known: HashSet<&[u32]> = prev.iter().map(|l| l.items.as_slice()).collect();

    // end of the prefix group each set belongs to
    let mut group_end = vec![0usize; prev.len()];
    let mut start = 0;
    while start < prev.len() {
        let mut end = start + 1;
        while end < prev.len() && prev[end].items[..prefix_len] == prev[start].items[..prefix_len] {
            end += 1;
        }
        group_end[start..end].fill(end);
        start = end;
    }

    (0..prev.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let left = &prev[i];
            let known = &known;
            (i + 1..group_end[i]).filter_map(move |j| {
                let right = &prev[j];
                let mut cand = Vec::with_capacity(k_minus_1 + 1);
                cand.extend_from_slice(&left.items);
                cand.push(*right.items.last().unwrap());
                // the two subsets missing one of the last two items are the parents
                let mut sub = Vec::with_capacity(k_minus_1);
                for skip in 0..prefix_len {
                    sub.clear();
                    sub.extend(
                        cand.iter()
                            .enumerate()
                            .filter(|&(p, _)| p != skip)
                            .map(|(_, &x)| x),
                    );
                    if !known.contains(sub.as_slice()) {
                        return None;
                    }
                }
                let tids = intersect(&left.tids, &right.tids);
                (tids.len() >= min_count).then_some(Level { items: cand, tids })
            })
        })
        .collect()
}

/// Emits every bipartition `A => B` of each frequent itemset of size two
/// or more whose confidence reaches `th.kappa`. `frequent` must be the
/// complete output of [`frequent_itemsets`].
pub fn generate_rules(
    frequent: &[FrequentItemset],
    ts: &TransactionSet,
    th: &Thresholds,
    max_consequent_len: Option<usize>,
) -> Result<Vec<Rule>> {
    let n = ts.n();
    let counts: HashMap<&[u32], usize> = frequent
        .iter()
        .map(|f| (f.itemset.items(), f.count))
        .collect();
    let lookup = |items: &[u32]| {
        counts.get(items).copied().ok_or_else(|| {
            Error::InvalidValue(format!("frequent itemset list is missing {items:?}"))
        })
    };

    let mut rules = Vec::new();
    let mut ante = Vec::new();
    let mut cons = Vec::new();
    for f in frequent.iter().filter(|f| f.itemset.len() >= 2) {
        let items = f.itemset.items();
        let k = items.len();
        if k >= 64 {
            return Err(Error::InvalidValue(format!(
                "itemset of length {k} is too long"
            )));
        }
        for mask in 1u64..(1u64 << k) - 1 {
            ante.clear();
            cons.clear();
            for (pos, &id) in items.iter().enumerate() {
                if mask >> pos & 1 == 1 {
                    ante.push(id);
                } else {
                    cons.push(id);
                }
            }
            if max_consequent_len.is_some_and(|m| cons.len() > m) {
                continue;
            }
            let count_a = lookup(&ante)?;
            if !th.meets_confidence(f.count, count_a) {
                continue;
            }
            let count_b = lookup(&cons)?;
            rules.push(Rule {
                id: rules.len(),
                antecedent: Itemset::from_sorted(ante.clone()),
                consequent: Itemset::from_sorted(cons.clone()),
                counts: RuleCounts {
                    a: count_a,
                    b: count_b,
                    ab: f.count,
                    n,
                },
            });
        }
    }
    Ok(rules)
}

/// Frequent itemsets followed by rule generation.
pub fn mine_rules(ts: &TransactionSet, th: &Thresholds, opts: &MineOptions) -> Result<Vec<Rule>> {
    let frequent = frequent_itemsets(ts, th, opts.max_len)?;
    generate_rules(&frequent, ts, th, opts.max_consequent_len)
}

/// Orders rules by support desc, confidence desc, then antecedent and
/// consequent ids.
pub fn sort_for_presentation(rules: &mut [Rule]) {
    rules.sort_by(|x, y| {
        y.counts
            .ab
            .cmp(&x.counts.ab)
            // confidence desc, compared exactly on counts
            .then_with(|| {
                let lhs = y.counts.ab as u128 * x.counts.a as u128;
                let rhs = x.counts.ab as u128 * y.counts.a as u128;
                lhs.cmp(&rhs)
            })
            .then_with(|| x.antecedent.cmp(&y.antecedent))
            .then_with(|| x.consequent.cmp(&y.consequent))
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transactions::{parse_basket, Delimiter};

    fn basket(text: &str) -> TransactionSet {
        parse_basket(text.as_bytes(), Delimiter::Whitespace).unwrap()
    }

    #[test]
    fn threshold_validation() {
        assert!(Thresholds::new(0.0, 0.5).is_err());
        assert!(Thresholds::new(0.5, 1.5).is_err());
        assert!(Thresholds::new(f64::NAN, 0.5).is_err());
        let th = Thresholds::new(0.1, 0.1).unwrap();
        assert!(th.check_for(5).is_err());
        assert!(th.check_for(10).is_ok());
        let d = Thresholds::resolve(None, None, 4).unwrap();
        assert_eq!((d.sigma, d.kappa), (0.25, 0.25));
    }

    #[test]
    fn min_count_rounds_up() {
        assert_eq!(Thresholds::new(0.1, 0.1).unwrap().min_count(40), 4);
        assert_eq!(Thresholds::new(0.3, 0.1).unwrap().min_count(40), 12);
        assert_eq!(Thresholds::new(0.31, 0.1).unwrap().min_count(40), 13);
        assert_eq!(Thresholds::floor_for(7).min_count(7), 1);
    }

    #[test]
    fn frequent_sets_small_example() {
        let ts = basket("a b\na b\na\nb\n");
        let th = Thresholds::new(0.5, 0.25).unwrap();
        let f = frequent_itemsets(&ts, &th, 2).unwrap();
        let got: Vec<(Vec<u32>, f64)> = f
            .iter()
            .map(|x| (x.itemset.items().to_vec(), x.support(4)))
            .collect();
        assert_eq!(
            got,
            vec![(vec![0], 0.75), (vec![1], 0.75), (vec![0, 1], 0.5)]
        );
    }

    #[test]
    fn rules_small_example() {
        let ts = basket("a b\na b\na\nb\n");
        let th = Thresholds::new(0.5, 0.6).unwrap();
        let rules = mine_rules(
            &ts,
            &th,
            &MineOptions {
                max_len: 2,
                max_consequent_len: None,
            },
        )
        .unwrap();
        assert_eq!(rules.len(), 2);
        for r in &rules {
            assert!((r.confidence() - 2.0 / 3.0).abs() < 1e-12);
        }
        assert_eq!(rules[0].antecedent.items(), &[0]);
        assert_eq!(rules[1].antecedent.items(), &[1]);

        let th = Thresholds::new(0.5, 0.7).unwrap();
        assert!(mine_rules(&ts, &th, &MineOptions::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn floor_thresholds_keep_every_occurring_set() {
        let ts = basket("a b c\nc d\n");
        let th = Thresholds::floor_for(ts.n());
        let f = frequent_itemsets(&ts, &th, 5).unwrap();
        // {a},{b},{c},{d},{a,b},{a,c},{b,c},{c,d},{a,b,c}
        assert_eq!(f.len(), 9);
        let rules = generate_rules(&f, &ts, &th, None).unwrap();
        // 4 pairs * 2 + 1 triple * 6
        assert_eq!(rules.len(), 14);
        let single = generate_rules(&f, &ts, &th, Some(1)).unwrap();
        assert_eq!(single.len(), 11);
        assert!(single.iter().all(|r| r.consequent.len() == 1));
    }

    #[test]
    fn presentation_order() {
        let ts = basket("a b\na b\na\nb c\nc\n");
        let th = Thresholds::floor_for(ts.n());
        let mut rules = mine_rules(&ts, &th, &MineOptions::default()).unwrap();
        sort_for_presentation(&mut rules);
        let keys: Vec<(usize, Vec<u32>)> = rules
            .iter()
            .map(|r| (r.counts.ab, r.antecedent.items().to_vec()))
            .collect();
        // {a,b} support 2 first; b=>a conf 2/3 ties a=>b conf 2/3, ordered by antecedent
        assert_eq!(keys[0], (2, vec![0]));
        assert_eq!(keys[1], (2, vec![1]));
        // c=>b has conf 1/2 which beats b=>c at 1/3
        assert_eq!(keys[2], (1, vec![2]));
        assert_eq!(keys[3], (1, vec![1]));
    }

    #[test]
    fn rejects_zero_max_len() {
        let ts = basket("a\n");
        assert!(frequent_itemsets(&ts, &Thresholds::floor_for(1), 0).is_err());
    }
}

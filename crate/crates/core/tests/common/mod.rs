//! Independent oracles shared by the integration tests. Nothing here calls
//! into the code paths it checks.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rulestd::transactions::{ItemCatalog, Transaction, TransactionSet};

/// `(antecedent, consequent) -> (cA, cB, cAB)`.
pub type RuleMap = BTreeMap<(Vec<u32>, Vec<u32>), (u64, u64, u64)>;

/// Rational threshold `num / den`, compared exactly on counts.
#[derive(Clone, Copy, Debug)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `part / whole >= num / den` in integer arithmetic.
    pub fn met_by(self, part: u64, whole: u64) -> bool {
        part * self.den >= self.num * whole
    }
}

/// Random transaction set as item bitmasks over `k` items.
pub fn random_masks(rng: &mut StdRng, n: usize, k: usize, density: f64) -> Vec<u32> {
    (0..n)
        .map(|_| {
            (0..k)
                .filter(|_| rng.random_bool(density))
                .fold(0u32, |m, i| m | 1 << i)
        })
        .collect()
}

pub fn masks_to_set(masks: &[u32], k: usize) -> TransactionSet {
    let catalog = ItemCatalog::from_labels((0..k).map(|i| format!("i{i}"))).unwrap();
    let txs = masks
        .iter()
        .map(|&m| Transaction::new((0..k as u32).filter(|i| m >> i & 1 == 1).collect()))
        .collect();
    TransactionSet::new(catalog, txs).unwrap()
}

pub fn mask_items(m: u32) -> Vec<u32> {
    (0..32).filter(|i| m >> i & 1 == 1).collect()
}

pub fn count_mask(masks: &[u32], x: u32) -> u64 {
    masks.iter().filter(|&&t| t & x == x).count() as u64
}

/// Every itemset of size `<= max_len` meeting `sigma`, keyed by items.
pub fn brute_frequent(
    masks: &[u32],
    k: usize,
    sigma: Ratio,
    max_len: usize,
) -> BTreeMap<Vec<u32>, u64> {
    let n = masks.len() as u64;
    (1u32..1 << k)
        .filter(|x| x.count_ones() as usize <= max_len)
        .filter_map(|x| {
            let c = count_mask(masks, x);
            (c > 0 && sigma.met_by(c, n)).then(|| (mask_items(x), c))
        })
        .collect()
}

/// Every rule `(antecedent, consequent) -> (cA, cB, cAB)` meeting both
/// thresholds, over itemsets of size `<= max_len`.
pub fn brute_rules(masks: &[u32], k: usize, sigma: Ratio, kappa: Ratio, max_len: usize) -> RuleMap {
    let n = masks.len() as u64;
    let counts: Vec<u64> = (0u32..1 << k).map(|x| count_mask(masks, x)).collect();
    let mut out = BTreeMap::new();
    for z in 1u32..1 << k {
        if z.count_ones() < 2 || z.count_ones() as usize > max_len {
            continue;
        }
        let cz = counts[z as usize];
        if cz == 0 || !sigma.met_by(cz, n) {
            continue;
        }
        // every proper non-empty subset of z as the antecedent
        let mut a = (z - 1) & z;
        while a > 0 {
            let b = z & !a;
            let ca = counts[a as usize];
            if kappa.met_by(cz, ca) {
                out.insert((mask_items(a), mask_items(b)), (ca, counts[b as usize], cz));
            }
            a = (a - 1) & z;
        }
    }
    out
}

/// `C - D` and tie counts by direct pair enumeration.
pub fn pair_counts(x: &[f64], y: &[f64]) -> (i64, u64, u64, u64) {
    let n = x.len();
    let (mut s, mut n1, mut n2) = (0i64, 0u64, 0u64);
    for i in 0..n {
        for j in i + 1..n {
            let dx = x[i].partial_cmp(&x[j]).unwrap();
            let dy = y[i].partial_cmp(&y[j]).unwrap();
            if dx.is_eq() {
                n1 += 1;
            }
            if dy.is_eq() {
                n2 += 1;
            }
            s += (dx as i64) * (dy as i64);
        }
    }
    (s, (n * (n - 1) / 2) as u64, n1, n2)
}

pub fn tau_b_oracle(x: &[f64], y: &[f64]) -> Option<f64> {
    let (s, n0, n1, n2) = pair_counts(x, y);
    if n1 == n0 || n2 == n0 {
        return None;
    }
    Some(s as f64 / ((n0 - n1) as f64 * (n0 - n2) as f64).sqrt())
}

/// Yule's Q from the four cells of the contingency table.
pub fn yule_q_cells(a: f64, b: f64, ab: f64) -> f64 {
    let (p11, p10, p01) = (ab, a - ab, b - ab);
    let p00 = 1.0 - a - b + ab;
    (p11 * p00 - p01 * p10) / (p11 * p00 + p01 * p10)
}

/// Gini as the weighted conditional-squares impurity reduction.
pub fn gini_impurity(a: f64, b: f64, ab: f64) -> f64 {
    let na = 1.0 - a;
    let (b_a, nb_a) = (ab / a, (a - ab) / a);
    let (b_na, nb_na) = ((b - ab) / na, (1.0 - a - b + ab) / na);
    a * (b_a * b_a + nb_a * nb_a) + na * (b_na * b_na + nb_na * nb_na)
        - b * b
        - (1.0 - b) * (1.0 - b)
}

pub fn gini_usable(a: f64, b: f64, ab: f64) -> f64 {
    2.0 * (ab - a * b).powi(2) / (a * (1.0 - a))
}

pub fn gini_alternate(a: f64, b: f64, ab: f64) -> f64 {
    2.0 / (1.0 - a) * (ab / a - b) * (ab - a * b)
}

/// Uniform triple: marginals in `(0, 1)`, joint uniform over its Fréchet
/// interval.
pub fn random_triple(rng: &mut StdRng) -> (f64, f64, f64) {
    let a: f64 = rng.random_range(1e-3..1.0 - 1e-3);
    let b: f64 = rng.random_range(1e-3..1.0 - 1e-3);
    let lo = (a + b - 1.0).max(0.0);
    let hi = a.min(b);
    (a, b, rng.random_range(lo..=hi))
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

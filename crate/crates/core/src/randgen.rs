//! Random transactions with independently included items.
//!
//! Bit-stream contract: a `ChaCha8Rng` is seeded with
//! `SeedableRng::seed_from_u64(seed)`. Cell `(t, i)` (transaction `t`, item
//! `i`) is visited in row-major order and consumes exactly one `next_u64()`
//! draw `u`; the item is present iff `u < floor(p * 2^64)`. Because the
//! ChaCha stream is seekable, cell `c = t * n_items + i` always reads stream
//! words `2c` and `2c + 1`, so transactions can be generated in parallel
//! blocks that reproduce the sequential output exactly.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transactions::{ItemCatalog, Transaction, TransactionSet};

/// Transactions generated per parallel block.
const BLOCK: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub n_transactions: usize,
    pub n_items: usize,
    pub p: f64,
    pub seed: u64,
}

impl RandomSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_transactions == 0 || self.n_items == 0 {
            return Err(Error::InvalidValue(
                "transaction and item counts must be positive".into(),
            ));
        }
        if self.n_items > u32::MAX as usize {
            return Err(Error::InvalidValue("too many items".into()));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::InvalidValue(format!(
                "inclusion probability must lie in (0, 1), got {}",
                self.p
            )));
        }
        Ok(())
    }

    /// Draws strictly below this value include the item.
    pub fn threshold(&self) -> u64 {
        (self.p * 18_446_744_073_709_551_616.0) as u64
    }
}

/// Catalog labels `item_0000`, `item_0001`, ... padded to at least 4 digits.
pub fn item_labels(n_items: usize) -> Vec<String> {
    let width = n_items.saturating_sub(1).to_string().len().max(4);
    (0..n_items).map(|i| format!("item_{i:0width$}")).collect()
}

pub fn generate(spec: &RandomSpec) -> Result<TransactionSet> {
    spec.validate()?;
    let catalog = ItemCatalog::from_labels(item_labels(spec.n_items))?;
    let threshold = spec.threshold();
    let base = ChaCha8Rng::seed_from_u64(spec.seed);
    let k = spec.n_items;

    let starts: Vec<usize> = (0..spec.n_transactions).step_by(BLOCK).collect();
    let blocks: Vec<Vec<Transaction>> = starts
        .into_par_iter()
        .map(|start| {
            let end = (start + BLOCK).min(spec.n_transactions);
            let mut rng = base.clone();
            rng.set_word_pos(2 * start as u128 * k as u128);
            (start..end)
                .map(|_| {
                    let items = (0..k as u32)
                        .filter(|_| rng.next_u64() < threshold)
                        .collect();
                    Transaction::new(items)
                })
                .collect()
        })
        .collect();

    TransactionSet::new(catalog, blocks.into_iter().flatten().collect())
}

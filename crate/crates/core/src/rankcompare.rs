//! Kendall's tau-b between raw and standardized rule scores.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DECILES: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauBReport {
    pub overall: f64,
    /// `None` where tau-b is undefined inside the block.
    pub by_decile: [Option<f64>; DECILES],
    pub n_rules: usize,
}

fn check_inputs(x: &[f64], y: &[f64], min_len: usize) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < min_len {
        return Err(Error::TooShort {
            needed: min_len,
            got: x.len(),
        });
    }
    if x.iter().chain(y).any(|v| v.is_nan()) {
        return Err(Error::InvalidValue("NaN in ranking input".into()));
    }
    Ok(())
}

fn tied_pairs<T: PartialEq>(sorted: &[T]) -> u64 {
    let mut total = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Sorts `v` ascending and returns the number of strict inversions.
fn sort_counting_inversions(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = {
        let (lo, hi) = v.split_at_mut(mid);
        let (blo, bhi) = buf.split_at_mut(mid);
        sort_counting_inversions(lo, blo) + sort_counting_inversions(hi, bhi)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}

/// Kendall's tau-b, `(C - D) / sqrt((n0 - n1)(n0 - n2))`, in `O(n log n)`.
///
/// Pairs are sorted by `x` (then `y`); the discordant count is the number of
/// inversions left in `y`, counted during a merge sort.
pub fn tau_b(x: &[f64], y: &[f64]) -> Result<f64> {
    check_inputs(x, y, 2)?;
    let n = x.len() as u64;

    // adding 0.0 maps -0.0 to 0.0 so signed zeros tie
    let mut pairs: Vec<(f64, f64)> = x.iter().zip(y).map(|(&a, &b)| (a + 0.0, b + 0.0)).collect();
    pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let n1 = tied_pairs(&xs);
    let n3 = tied_pairs(&pairs);

    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut buf = vec![0.0; ys.len()];
    let discordant = sort_counting_inversions(&mut ys, &mut buf);
    let n2 = tied_pairs(&ys);

    let n0 = n * (n - 1) / 2;
    let c_minus_d = n0 as i64 - n1 as i64 - n2 as i64 + n3 as i64 - 2 * discordant as i64;
    tau_from_counts(c_minus_d, n0, n1, n2)
}

fn tau_from_counts(c_minus_d: i64, n0: u64, n1: u64, n2: u64) -> Result<f64> {
    if n1 == n0 || n2 == n0 {
        return Err(Error::UndefinedTauB);
    }
    let den = ((n0 - n1) as f64 * (n0 - n2) as f64).sqrt();
    Ok((c_minus_d as f64 / den).clamp(-1.0, 1.0))
}

/// Sizes of `DECILES` contiguous blocks over `n` items; the first
/// `n % DECILES` blocks take one extra item.
pub fn decile_sizes(n: usize) -> [usize; DECILES] {
    let base = n / DECILES;
    let extra = n % DECILES;
    std::array::from_fn(|d| base + usize::from(d < extra))
}

/// Overall tau-b plus tau-b within each decile of the raw ranking.
///
/// Rules are ordered by raw value ascending, ties broken by position in the
/// input, and split into ten contiguous blocks.
pub fn tau_b_by_decile(raw: &[f64], standardized: &[f64]) -> Result<TauBReport> {
    check_inputs(raw, standardized, DECILES)?;
    let overall = tau_b(raw, standardized)?;

    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&i, &j| (raw[i] + 0.0).total_cmp(&(raw[j] + 0.0)).then(i.cmp(&j)));

    let sizes = decile_sizes(raw.len());
    let mut ranges = Vec::with_capacity(DECILES);
    let mut start = 0;
    for size in sizes {
        ranges.push(start..start + size);
        start += size;
    }

    let values: Vec<Option<f64>> = ranges
        .into_par_iter()
        .map(|r| {
            let idx = &order[r];
            let xs: Vec<f64> = idx.iter().map(|&i| raw[i]).collect();
            let ys: Vec<f64> = idx.iter().map(|&i| standardized[i]).collect();
            tau_b(&xs, &ys).ok()
        })
        .collect();

    let mut by_decile = [None; DECILES];
    by_decile.copy_from_slice(&values);
    Ok(TauBReport {
        overall,
        by_decile,
        n_rules: raw.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_b_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(tau_b(&x, &[10.0, 20.0, 30.0, 40.0]).unwrap(), 1.0);
        assert_eq!(tau_b(&x, &[4.0, 3.0, 2.0, 1.0]).unwrap(), -1.0);
        let t = tau_b(&x, &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((t - 4.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn tau_b_with_ties() {
        // one tied pair in each ranking, so the denominator is sqrt(5 * 5)
        let t = tau_b(&[1.0, 1.0, 2.0, 3.0], &[1.0, 2.0, 2.0, 1.5]).unwrap();
        let c_minus_d = {
            let x = [1.0, 1.0, 2.0, 3.0];
            let y = [1.0, 2.0, 2.0, 1.5];
            let mut s = 0i64;
            for i in 0..4 {
                for j in i + 1..4 {
                    let p: f64 = (x[i] - x[j]) * (y[i] - y[j]);
                    s += if p > 0.0 {
                        1
                    } else if p < 0.0 {
                        -1
                    } else {
                        0
                    };
                }
            }
            s
        };
        assert!((t - c_minus_d as f64 / 5.0).abs() < 1e-15);
    }

    #[test]
    fn tau_b_errors() {
        assert!(matches!(tau_b(&[1.0], &[1.0]), Err(Error::TooShort { .. })));
        assert!(matches!(
            tau_b(&[1.0, 2.0], &[1.0]),
            Err(Error::LengthMismatch(2, 1))
        ));
        assert!(matches!(
            tau_b(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::UndefinedTauB)
        ));
        assert!(tau_b(&[1.0, f64::NAN], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn signed_zero_ties() {
        let t = tau_b(&[0.0, -0.0, 1.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!((t - 2.0 / (2.0f64 * 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn decile_sizes_spread_remainder_first() {
        assert_eq!(decile_sizes(20), [2; 10]);
        assert_eq!(decile_sizes(13), [2, 2, 2, 1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(decile_sizes(10).iter().sum::<usize>(), 10);
    }

    #[test]
    fn deciles_identity_and_reverse() {
        let raw: Vec<f64> = (0..37).map(|i| (i * 7 % 37) as f64).collect();
        let rep = tau_b_by_decile(&raw, &raw).unwrap();
        assert_eq!(rep.overall, 1.0);
        assert!(rep.by_decile.iter().all(|d| *d == Some(1.0)));

        let rev: Vec<f64> = raw.iter().map(|v| -v).collect();
        let rep = tau_b_by_decile(&raw, &rev).unwrap();
        assert_eq!(rep.overall, -1.0);
    }

    #[test]
    fn first_decile_swapped() {
        let raw: Vec<f64> = (1..=20).map(f64::from).collect();
        let mut std = raw.clone();
        std.swap(0, 1);
        let rep = tau_b_by_decile(&raw, &std).unwrap();
        assert_eq!(rep.by_decile[0], Some(-1.0));
        assert!(rep.by_decile[1..].iter().all(|d| *d == Some(1.0)));
    }

    #[test]
    fn undefined_decile_is_absent() {
        // ten rules: every block holds a single rule
        let raw: Vec<f64> = (0..10).map(f64::from).collect();
        let rep = tau_b_by_decile(&raw, &raw).unwrap();
        assert!(rep.by_decile.iter().all(Option::is_none));
        assert!(tau_b_by_decile(&raw[..9], &raw[..9]).is_err());
    }
}

//! Exact distribution of sums of squares over `steps` independent coordinates.
//!
//! Each coordinate contributes `k*k` with multiplicity `weights[k]`. Counts
//! live in a flat array of fixed-width little-endian `u64` limbs sized for the
//! total `(sum of weights)^steps`, so every update is an in-place
//! multiply-accumulate without allocation. Outputs are gathered per radius and
//! computed in parallel; the result does not depend on scheduling.

use num_bigint::BigUint;
use rayon::prelude::*;

const CHUNK_RADII: usize = 256;

pub(crate) struct SquareSumDp {
    /// `(k*k, weight)` for every nonzero weight.
    terms: Vec<(usize, u64)>,
    limbs: usize,
    max_radius: usize,
    steps_done: u32,
    table: Vec<u64>,
}

impl SquareSumDp {
    /// Sized for at most `steps` convolutions.
    pub(crate) fn new(weights: &[u64], steps: u32) -> Self {
        let terms: Vec<(usize, u64)> = weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0)
            .map(|(k, &w)| (k * k, w))
            .collect();
        let total: u64 = weights.iter().sum();
        let bits = BigUint::from(total).pow(steps).bits() as usize;
        let limbs = bits / 64 + 1;
        let mut table = vec![0u64; limbs];
        table[0] = 1;
        SquareSumDp {
            terms,
            limbs,
            max_radius: 0,
            steps_done: 0,
            table,
        }
    }

    pub(crate) fn max_radius(&self) -> usize {
        self.max_radius
    }

    /// Convolves once more with the single-coordinate distribution.
    pub(crate) fn step(&mut self) {
        let top = self.terms.last().map_or(0, |t| t.0);
        let new_max = self.max_radius + top;
        let limbs = self.limbs;
        let old = &self.table;
        let old_max = self.max_radius;
        let terms = &self.terms;
        let mut next = vec![0u64; (new_max + 1) * limbs];
        next.par_chunks_mut(CHUNK_RADII * limbs)
            .enumerate()
            .for_each(|(chunk, out)| {
                let base = chunk * CHUNK_RADII;
                for (offset, cell) in out.chunks_exact_mut(limbs).enumerate() {
                    let r = base + offset;
                    for &(sq, w) in terms {
                        if sq > r {
                            break;
                        }
                        let src = r - sq;
                        if src > old_max {
                            continue;
                        }
                        mul_add(cell, &old[src * limbs..(src + 1) * limbs], w);
                    }
                }
            });
        self.table = next;
        self.max_radius = new_max;
        self.steps_done += 1;
    }

    /// Counts indexed by radius, `0..=max_radius`.
    pub(crate) fn counts(&self) -> Vec<BigUint> {
        self.table
            .chunks_exact(self.limbs)
            .map(|cell| {
                let words: Vec<u32> = cell
                    .iter()
                    .flat_map(|&w| [w as u32, (w >> 32) as u32])
                    .collect();
                BigUint::new(words)
            })
            .collect()
    }
}

/// `acc += src * w` over fixed-width limbs. The caller guarantees no overflow
/// past the last limb.
#[inline]
fn mul_add(acc: &mut [u64], src: &[u64], w: u64) {
    let mut carry: u128 = 0;
    for (a, &s) in acc.iter_mut().zip(src) {
        let t = *a as u128 + s as u128 * w as u128 + carry;
        *a = t as u64;
        carry = t >> 64;
    }
    debug_assert_eq!(carry, 0);
}

/// Runs `steps` convolutions and returns the counts.
pub(crate) fn square_sum_counts(weights: &[u64], steps: u32) -> Vec<BigUint> {
    let mut dp = SquareSumDp::new(weights, steps);
    for _ in 0..steps {
        dp.step();
    }
    dp.counts()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(weights: &[u64], steps: u32) -> Vec<BigUint> {
        let mut dist = vec![BigUint::from(1u32)];
        for _ in 0..steps {
            let top = (weights.len() - 1).pow(2);
            let mut next = vec![BigUint::default(); dist.len() + top];
            for (r, c) in dist.iter().enumerate() {
                for (k, &w) in weights.iter().enumerate() {
                    next[r + k * k] += c * w;
                }
            }
            dist = next;
        }
        dist
    }

    #[test]
    fn matches_bigint_reference() {
        for (weights, steps) in [
            (vec![1u64, 2], 5),
            (vec![2, 4, 4, 2], 3),
            (vec![3, 0, 7, 1, 9], 6),
            (vec![u32::MAX as u64, 5, 1], 9),
        ] {
            let mut fast = square_sum_counts(&weights, steps);
            let mut slow = brute(&weights, steps);
            while fast.last().is_some_and(|c| c == &BigUint::default()) {
                fast.pop();
            }
            while slow.last().is_some_and(|c| c == &BigUint::default()) {
                slow.pop();
            }
            assert_eq!(fast, slow, "weights {weights:?} steps {steps}");
        }
    }

    #[test]
    fn zero_steps_is_delta() {
        assert_eq!(square_sum_counts(&[3, 1], 0), vec![BigUint::from(1u32)]);
    }

    #[test]
    fn large_counts_use_many_limbs() {
        // 12^40 needs 144 bits.
        let counts = square_sum_counts(&[12], 40);
        assert_eq!(counts, vec![BigUint::from(12u32).pow(40)]);
    }
}

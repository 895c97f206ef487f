use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::extrema::{count_extrema, zigzag};
use crate::groups::{pi, pi_cycle_check};
use crate::seminorms::eta;
use crate::words::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZigzagRow {
    pub l: u64,
    /// `eta(a(2l + 1))`.
    pub eta: usize,
    /// `|Ext|` of the support, counted by the extrema module.
    pub extrema: usize,
    pub word: Word,
}

impl ZigzagRow {
    pub fn holds(&self) -> bool {
        self.eta == 2 * self.l as usize + 2 && self.extrema == self.eta
    }
}

/// Coordinates `2l + 1`, `l <= lmax`, of the limit of the zig-zag
/// rearrangement of `g_{y_n}` with `z = 1`.
///
/// `g_{y_{phi(n)}}(i)` is the letter `phi(n)` when `phi(n) <= i` and `e`
/// otherwise, and `phi` permutes each pair `{2k, 2k + 1}`, so coordinate
/// `2l + 1` is final after step `2l + 1` and extends coordinate `2l - 1` by
/// the steps `2l` and `2l + 1`.
pub fn zigzag_divergence_demo(lmax: u64) -> Vec<ZigzagRow> {
    let mut word = Word::identity();
    let mut rows = Vec::with_capacity(lmax as usize + 1);
    for l in 0..=lmax {
        for n in 2 * l..=2 * l + 1 {
            word.push_monom(Letter(zigzag(n)), BigInt::one());
        }
        let support: Vec<u64> = word.support().naturals();
        rows.push(ZigzagRow {
            l,
            eta: eta(&word),
            extrema: count_extrema(&support),
            word: word.clone(),
        });
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermCycleRow {
    pub n: u64,
    pub pi: String,
    pub is_cycle: bool,
}

/// `pi_k = b_0 ... b_k` for `k <= n` with the cycle check.
pub fn perm_cycle_demo(n: u64) -> Vec<PermCycleRow> {
    (0..=n)
        .map(|k| PermCycleRow {
            n: k,
            pi: pi(k).to_string(),
            is_cycle: pi_cycle_check(k),
        })
        .collect()
}

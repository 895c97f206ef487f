use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::mu;
use crate::algebra::abs_big;
use crate::error::{Error, Result};
use crate::extrema::is_subsequence;
use crate::words::{Letter, Word};

/// Words `w_0..w_m` with one "peak" letter each, where the peak of `w_j` is
/// more than twice as high as any occurrence of that letter in the other words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MountainInstance {
    pub words: Vec<Word>,
    pub peaks: Vec<Letter>,
}

impl MountainInstance {
    pub fn new(words: Vec<Word>, peaks: Vec<Letter>) -> Result<Self> {
        let inst = MountainInstance { words, peaks };
        inst.validate()?;
        Ok(inst)
    }

    /// Check `mu_{x_j}(w_j) > 2 mu_{x_j}(w_k)` for `j != k` and `mu_{x_0}(w_0) > 0`.
    pub fn validate(&self) -> Result<()> {
        if self.words.is_empty() || self.words.len() != self.peaks.len() {
            return Err(Error::HypothesisViolation(format!(
                "need matching non-empty word and peak lists, got {} words and {} peaks",
                self.words.len(),
                self.peaks.len()
            )));
        }
        if mu(self.peaks[0], &self.words[0]).is_zero() {
            return Err(Error::HypothesisViolation(format!(
                "peak letter {} does not occur in w_0",
                self.peaks[0]
            )));
        }
        for (j, &x) in self.peaks.iter().enumerate() {
            let own = mu(x, &self.words[j]);
            for (k, w) in self.words.iter().enumerate() {
                if k != j && own <= mu(x, w) * 2u32 {
                    return Err(Error::HypothesisViolation(format!(
                        "mu_{x}(w_{j}) = {own} is not above 2 mu_{x}(w_{k}) = {}",
                        mu(x, w) * 2u32
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.words.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MountainVerdict {
    /// `v_m = w_0 w_1 ... w_m`.
    pub product: Word,
    /// 1-based position of the surviving peak of `w_m` in `v_m`.
    pub n_m: Option<usize>,
    /// Clauses (i)-(iv) evaluated at `n_m` (or at the last candidate tried).
    pub clauses: [bool; 4],
    pub verdict: bool,
}

/// Multiply out the instance and locate the monom of `v_m` carrying the peak
/// of `w_m`, scanning right to left. The position `n` found must satisfy:
///
/// 1. `1 <= n <= l_{v_m}`;
/// 2. `v_m[n] = x_m^z` with `2|z| > mu_{x_m}(w_m)`;
/// 3. everything after position `n` is a final subword of `w_m`;
/// 4. the peaks `(x_0, ..., x_m)` form a subsequence of the first `n` letters.
pub fn mountain_check(inst: &MountainInstance) -> Result<MountainVerdict> {
    inst.validate()?;
    let mut v = Word::identity();
    for w in &inst.words {
        v *= w;
    }
    let x_m = *inst.peaks.last().expect("validated non-empty");
    let w_m = inst.words.last().expect("validated non-empty");
    let peak_m: BigUint = mu(x_m, w_m);
    let letters: Vec<Letter> = v.letters().collect();

    let mut clauses = [false; 4];
    for n in (1..=v.len()).rev() {
        let monom = &v.monoms()[n - 1];
        if monom.letter != x_m || abs_big(&monom.power) * 2u32 <= peak_m {
            continue;
        }
        clauses = [
            (1..=v.len()).contains(&n),
            true,
            w_m.has_final_subword(&v.subword(n + 1, v.len())),
            is_subsequence(&inst.peaks, &letters[..n]),
        ];
        if clauses.iter().all(|&c| c) {
            return Ok(MountainVerdict {
                product: v,
                n_m: Some(n),
                clauses,
                verdict: true,
            });
        }
    }
    Ok(MountainVerdict {
        product: v,
        n_m: None,
        clauses,
        verdict: false,
    })
}

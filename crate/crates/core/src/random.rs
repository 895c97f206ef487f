//! Seeded generators for property suites and random experiment inputs.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)` (the ChaCha
//! stream cipher with 8 rounds, from the `rand_chacha` crate). Its output is
//! specified independently of platform and word size, so a seed replays the
//! same fixtures everywhere.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::groups::{Epsilon, HFactor, HSymbolic};
use crate::seminorms::{mu, MountainInstance};
use crate::weights::{Multiplier, Permutation};
use crate::words::{Letter, Word};

pub type Prng = ChaCha8Rng;

pub fn rng(seed: u64) -> Prng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to `max_len` raw monoms over `0..alphabet` with powers in
/// `-max_power..=max_power`, reduced.
pub fn random_word(rng: &mut Prng, alphabet: u64, max_len: usize, max_power: i64) -> Word {
    let len = rng.random_range(0..=max_len);
    Word::from_monoms(
        (0..len).map(|_| (rng.random_range(0..alphabet), rng.random_range(-max_power..=max_power))),
    )
}

/// A finitely supported multiplier with entries in `-bound..=bound` on `0..support`.
pub fn random_multiplier(rng: &mut Prng, bound: i64, support: usize) -> Multiplier {
    Multiplier::finite((0..support).map(|_| rng.random_range(-bound..=bound)))
}

/// A random permutation of `0..size`, identity elsewhere.
pub fn random_table(rng: &mut Prng, size: u64) -> Permutation {
    let mut t: Vec<u64> = (0..size).collect();
    t.shuffle(rng);
    Permutation::table(t).expect("shuffle of 0..size")
}

/// A product of up to `max_factors` generators `g_z^{+-1}` with small entries.
pub fn random_hsymbolic(rng: &mut Prng, max_factors: usize, prefix: usize, bound: i64) -> HSymbolic {
    let k = rng.random_range(0..=max_factors);
    HSymbolic {
        factors: (0..k)
            .map(|_| {
                let len = rng.random_range(0..=prefix);
                let z = Multiplier::new(
                    (0..len).map(|_| rng.random_range(-bound..=bound)).collect::<Vec<_>>(),
                    rng.random_range(-bound..=bound),
                );
                let epsilon = if rng.random_bool(0.5) {
                    Epsilon::Plus
                } else {
                    Epsilon::Minus
                };
                HFactor { z, epsilon }
            })
            .collect(),
    }
}

/// A valid mountain instance with `m + 1` words: distinct peak letters,
/// low-power padding in the other letters, and each peak `x_j^{P_j}` placed
/// inside `w_j` with `P_j > 2 mu_{x_j}(w_k)` for `k != j`.
pub fn mountain_instance(rng: &mut Prng, m: usize) -> MountainInstance {
    let alphabet = 2 * (m as u64 + 1) + 3;
    loop {
        let mut letters: Vec<u64> = (0..alphabet).collect();
        letters.shuffle(rng);
        let peaks: Vec<Letter> = letters[..=m].iter().map(|&x| Letter(x)).collect();
        let pads: Vec<Vec<(u64, i64)>> = peaks
            .iter()
            .map(|&x| {
                let len = rng.random_range(0..=6);
                (0..len)
                    .map(|_| loop {
                        let l = rng.random_range(0..alphabet);
                        if l != x.0 {
                            let p = rng.random_range(1..=3) * if rng.random_bool(0.5) { 1 } else { -1 };
                            break (l, p);
                        }
                    })
                    .collect()
            })
            .collect();
        let pad_words: Vec<Word> = pads.iter().map(|p| Word::from_monoms(p.iter().copied())).collect();
        let words: Vec<Word> = (0..=m)
            .map(|j| {
                let others = (0..=m)
                    .filter(|&k| k != j)
                    .map(|k| mu(peaks[j], &pad_words[k]))
                    .max()
                    .unwrap_or_default();
                let height = BigInt::from(others) * 2 + rng.random_range(1..=20);
                let sign = if rng.random_bool(0.5) { 1 } else { -1 };
                let at = rng.random_range(0..=pads[j].len());
                let mut raw: Vec<(u64, BigInt)> =
                    pads[j].iter().map(|&(l, p)| (l, BigInt::from(p))).collect();
                raw.insert(at, (peaks[j].0, height * sign));
                Word::from_monoms(raw)
            })
            .collect();
        if let Ok(inst) = MountainInstance::new(words, peaks) {
            return inst;
        }
    }
}

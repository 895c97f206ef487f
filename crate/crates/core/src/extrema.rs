//! Local extrema of finite sequences with distinct neighbours.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::Letter;

/// A finite sequence of letters whose neighbours are distinct.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FdSeq(Vec<Letter>);

impl FdSeq {
    pub fn new(entries: Vec<Letter>) -> Result<Self> {
        if let Some(i) = entries.windows(2).position(|p| p[0] == p[1]) {
            return Err(Error::EqualNeighbours(i));
        }
        Ok(FdSeq(entries))
    }

    pub fn from_naturals(entries: &[u64]) -> Result<Self> {
        FdSeq::new(entries.iter().copied().map(Letter).collect())
    }

    /// Caller guarantees distinct neighbours (the support of a canonical word).
    pub(crate) fn from_canonical(entries: Vec<Letter>) -> Self {
        debug_assert!(entries.windows(2).all(|p| p[0] != p[1]));
        FdSeq(entries)
    }

    pub fn entries(&self) -> &[Letter] {
        &self.0
    }

    pub fn naturals(&self) -> Vec<u64> {
        self.0.iter().map(|l| l.0).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn extrema(&self) -> ExtremaReport {
        extrema_of(&self.0)
    }

    /// `|Ext(s)|`.
    pub fn extrema_count(&self) -> usize {
        count_extrema(&self.0)
    }
}

/// Index sets `LMax`, `LMin` and `Ext = LMax ∪ LMin`, each sorted ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremaReport {
    pub lmax: Vec<usize>,
    pub lmin: Vec<usize>,
    pub ext: Vec<usize>,
}

fn is_local_max<T: Ord>(s: &[T], i: usize) -> bool {
    let k = s.len() - 1;
    (i == 0 || s[i - 1] < s[i]) && (i == k || s[i] > s[i + 1])
}

fn is_local_min<T: Ord>(s: &[T], i: usize) -> bool {
    let k = s.len() - 1;
    (i == 0 || s[i - 1] > s[i]) && (i == k || s[i] < s[i + 1])
}

/// Local maxima and minima of an arbitrary sequence. Works for sequences
/// with repeated neighbours too, but the extrema lemmas only hold without them.
pub fn extrema_of<T: Ord>(s: &[T]) -> ExtremaReport {
    let lmax: Vec<usize> = (0..s.len()).filter(|&i| is_local_max(s, i)).collect();
    let lmin: Vec<usize> = (0..s.len()).filter(|&i| is_local_min(s, i)).collect();
    let ext = (0..s.len())
        .filter(|&i| is_local_max(s, i) || is_local_min(s, i))
        .collect();
    ExtremaReport { lmax, lmin, ext }
}

pub fn count_extrema<T: Ord>(s: &[T]) -> usize {
    (0..s.len())
        .filter(|&i| is_local_max(s, i) || is_local_min(s, i))
        .count()
}

/// Whether `sub` is obtained from `s` by keeping the entries at some strictly
/// increasing list of indices.
pub fn is_subsequence<T: PartialEq>(sub: &[T], s: &[T]) -> bool {
    let mut it = s.iter();
    sub.iter().all(|x| it.any(|y| y == x))
}

/// The injection `Ext(s') -> Ext(s)` for the subsequence `s'` of `s` picked by
/// `selected`. Endpoints go to endpoints; an interior local maximum (minimum)
/// `n` of `s'` goes to the first index of the maximum (minimum) of `s` over
/// the window `selected[n-1] ..= selected[n+1]`.
///
/// Keys are indices of `s'`, values indices of `s`.
pub fn iota_injection(s: &FdSeq, selected: &[usize]) -> Result<BTreeMap<usize, usize>> {
    let x = s.entries();
    if let Some(&i) = selected.iter().find(|&&i| i >= x.len()) {
        return Err(Error::InvalidSelection(format!(
            "index {i} outside sequence of length {}",
            x.len()
        )));
    }
    if selected.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::InvalidSelection(
            "indices must be strictly increasing".into(),
        ));
    }
    let sub: Vec<Letter> = selected.iter().map(|&i| x[i]).collect();
    if let Some(i) = sub.windows(2).position(|p| p[0] == p[1]) {
        return Err(Error::EqualNeighbours(i));
    }

    let report = extrema_of(&sub);
    let last_sub = sub.len().saturating_sub(1);
    let last = x.len().saturating_sub(1);
    let mut iota = BTreeMap::new();
    for &n in &report.ext {
        let target = if n == 0 {
            0
        } else if n == last_sub {
            last
        } else {
            let window = selected[n - 1]..=selected[n + 1];
            if report.lmax.binary_search(&n).is_ok() {
                first_arg_by(window, |a, b| x[a] > x[b])
            } else {
                first_arg_by(window, |a, b| x[a] < x[b])
            }
        };
        iota.insert(n, target);
    }
    Ok(iota)
}

/// First index in `range` that is not beaten by any later one under `better`.
fn first_arg_by(
    range: std::ops::RangeInclusive<usize>,
    better: impl Fn(usize, usize) -> bool,
) -> usize {
    let mut best = *range.start();
    for j in range {
        if better(j, best) {
            best = j;
        }
    }
    best
}

/// The zig-zag enumeration of the naturals: `x_n = n + 1` for even `n` and
/// `x_n = n - 1` for odd `n`, truncated to `x_0 ..= x_m`.
pub fn zigzag_enumeration(m: usize) -> FdSeq {
    FdSeq::from_canonical((0..=m as u64).map(|n| Letter(zigzag(n))).collect())
}

pub(crate) fn zigzag(n: u64) -> u64 {
    if n % 2 == 0 {
        n + 1
    } else {
        n - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn seq(v: &[u64]) -> FdSeq {
        FdSeq::from_naturals(v).unwrap()
    }

    #[test]
    fn increasing_sequence_has_two_extrema() {
        let r = seq(&[1, 4, 6, 9, 12]).extrema();
        assert_eq!(r.lmin, vec![0]);
        assert_eq!(r.lmax, vec![4]);
        assert_eq!(r.ext.len(), 2);
    }

    #[test]
    fn alternating_sequence() {
        for n in 1..10 {
            let s: Vec<u64> = (0..2 * n).map(|i| if i % 2 == 0 { 3 } else { 7 }).collect();
            assert_eq!(seq(&s).extrema_count(), 2 * n);
        }
    }

    #[test]
    fn single_and_empty() {
        let r = seq(&[5]).extrema();
        assert_eq!(r.ext, vec![0]);
        assert_eq!(r.lmax, vec![0]);
        assert_eq!(r.lmin, vec![0]);
        assert_eq!(FdSeq::default().extrema(), ExtremaReport::default());
    }

    #[test]
    fn rejects_equal_neighbours() {
        assert_eq!(FdSeq::from_naturals(&[1, 2, 2]), Err(Error::EqualNeighbours(1)));
    }

    #[test]
    fn subsequence_examples() {
        assert!(is_subsequence(&[1, 3], &[1, 2, 3]));
        assert!(!is_subsequence(&[3, 1], &[1, 2, 3]));
        assert!(is_subsequence::<u64>(&[], &[1, 2, 3]));
        assert!(is_subsequence::<u64>(&[], &[]));
        assert!(!is_subsequence(&[1, 1], &[1, 2]));
    }

    #[test]
    fn iota_examples() {
        let s = seq(&[1, 0, 3, 2]);
        let id = iota_injection(&s, &[0, 1, 2, 3]).unwrap();
        assert_eq!(id.into_iter().collect::<Vec<_>>(), vec![(0, 0), (1, 1), (2, 2), (3, 3)]);

        let s = seq(&[0, 2, 1, 3]);
        let m = iota_injection(&s, &[0, 3]).unwrap();
        assert_eq!(m.into_iter().collect::<Vec<_>>(), vec![(0, 0), (1, 3)]);

        // interior maximum maps to the first maximum of the window
        let s = seq(&[0, 4, 1, 4, 2, 0]);
        let m = iota_injection(&s, &[0, 4, 5]).unwrap();
        assert_eq!(m.get(&1), Some(&1));
    }

    #[test]
    fn iota_rejections() {
        let s = seq(&[1, 0, 1, 2]);
        assert!(matches!(iota_injection(&s, &[0, 2]), Err(Error::EqualNeighbours(0))));
        assert!(matches!(iota_injection(&s, &[2, 1]), Err(Error::InvalidSelection(_))));
        assert!(matches!(iota_injection(&s, &[1, 1]), Err(Error::InvalidSelection(_))));
        assert!(matches!(iota_injection(&s, &[9]), Err(Error::InvalidSelection(_))));
        assert!(iota_injection(&s, &[]).unwrap().is_empty());
    }

    #[test]
    fn zigzag_examples() {
        assert_eq!(zigzag_enumeration(5).naturals(), vec![1, 0, 3, 2, 5, 4]);
        let z3 = zigzag_enumeration(3);
        assert_eq!(z3.naturals(), vec![1, 0, 3, 2]);
        assert_eq!(z3.extrema_count(), 4);
        assert_eq!(zigzag_enumeration(0).naturals(), vec![1]);
        assert_eq!(zigzag_enumeration(0).extrema_count(), 1);
    }

    #[test]
    fn zigzag_clauses_up_to_500() {
        let full = zigzag_enumeration(500).naturals();
        let mut prefix_max = Vec::with_capacity(full.len());
        let mut running = 0;
        for &x in &full {
            running = running.max(x);
            prefix_max.push(running);
        }
        for m in 0..=500 {
            assert_eq!(count_extrema(&full[..=m]), m + 1, "m = {m}");
            for s in 0.. {
                if 2 * s + 1 >= m {
                    break;
                }
                assert!(prefix_max[2 * s + 1] < full[m], "m = {m}, s = {s}");
            }
        }
        let distinct: BTreeSet<u64> = full.iter().copied().collect();
        assert_eq!(distinct.len(), full.len());
    }

    fn all_fdseqs(alphabet: u64, max_len: usize) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        let mut frontier: Vec<Vec<u64>> = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for s in &frontier {
                for x in 0..alphabet {
                    if s.last() != Some(&x) {
                        let mut t = s.clone();
                        t.push(x);
                        next.push(t);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    #[test]
    fn endpoints_are_extrema_exhaustive() {
        for s in all_fdseqs(4, 6) {
            if s.is_empty() {
                continue;
            }
            let r = extrema_of(&s);
            assert!(r.ext.contains(&0) && r.ext.contains(&(s.len() - 1)), "{s:?}");
        }
    }

    #[test]
    fn subsequence_lemma_exhaustive_small() {
        for s in all_fdseqs(4, 6) {
            let fs = seq(&s);
            let ext_s: BTreeSet<usize> = fs.extrema().ext.into_iter().collect();
            for mask in 0u32..(1 << s.len()) {
                let sel: Vec<usize> = (0..s.len()).filter(|i| mask >> i & 1 == 1).collect();
                let sub: Vec<u64> = sel.iter().map(|&i| s[i]).collect();
                if sub.windows(2).any(|p| p[0] == p[1]) {
                    continue;
                }
                assert!(count_extrema(&sub) <= ext_s.len());
                let iota = iota_injection(&fs, &sel).unwrap();
                let image: BTreeSet<usize> = iota.values().copied().collect();
                assert_eq!(image.len(), iota.len());
                assert!(image.is_subset(&ext_s));
            }
        }
    }
}

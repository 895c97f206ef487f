use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::InstrumentedGroup;

/// A bijection of the naturals moving finitely many points. Only moved
/// points are stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinPerm {
    moved: BTreeMap<u64, u64>,
}

impl FinPerm {
    pub fn identity() -> Self {
        FinPerm::default()
    }

    /// From the images of `0..k`; `None` unless they permute `0..k`.
    pub fn from_images(images: &[u64]) -> Option<Self> {
        let set: BTreeSet<u64> = images.iter().copied().collect();
        if set.len() != images.len() || set.iter().any(|&v| v >= images.len() as u64) {
            return None;
        }
        Some(FinPerm {
            moved: images
                .iter()
                .enumerate()
                .map(|(k, &v)| (k as u64, v))
                .filter(|(k, v)| k != v)
                .collect(),
        })
    }

    pub fn apply(&self, k: u64) -> u64 {
        self.moved.get(&k).copied().unwrap_or(k)
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.moved.keys().copied()
    }

    /// `self . other`: apply `other` first.
    pub fn compose(&self, other: &FinPerm) -> FinPerm {
        let points: BTreeSet<u64> = self.support().chain(other.support()).collect();
        FinPerm {
            moved: points
                .into_iter()
                .map(|k| (k, self.apply(other.apply(k))))
                .filter(|(k, v)| k != v)
                .collect(),
        }
    }

    pub fn inverse(&self) -> FinPerm {
        FinPerm {
            moved: self.moved.iter().map(|(&k, &v)| (v, k)).collect(),
        }
    }

    pub fn cycles(&self) -> Vec<Vec<u64>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in self.moved.keys() {
            if !seen.insert(start) {
                continue;
            }
            let mut cycle = vec![start];
            let mut k = self.apply(start);
            while k != start {
                seen.insert(k);
                cycle.push(k);
                k = self.apply(k);
            }
            out.push(cycle);
        }
        out
    }
}

/// Cycle notation, smallest point first; `()` for the identity.
impl fmt::Display for FinPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|k| k.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// `b_n`, the transposition of `n` and `n + 1`.
pub fn transposition_b(n: u64) -> FinPerm {
    FinPerm {
        moved: [(n, n + 1), (n + 1, n)].into_iter().collect(),
    }
}

/// `pi_n = b_0 b_1 ... b_n`.
pub fn pi(n: u64) -> FinPerm {
    (0..=n).fold(FinPerm::identity(), |acc, k| acc.compose(&transposition_b(k)))
}

/// Whether `pi_n` is the cycle `0 -> 1 -> ... -> n+1 -> 0`.
pub fn pi_cycle_check(n: u64) -> bool {
    let p = pi(n);
    let cycle: Vec<u64> = (0..=n + 1).collect();
    p.cycles() == vec![cycle] && (0..=n).all(|k| p.apply(k) == k + 1) && p.apply(n + 1) == 0
}

/// Finitary permutations with the pointwise topology; `U_n` fixes `0..n`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PermGroup;

impl InstrumentedGroup for PermGroup {
    type Elem = FinPerm;

    fn identity(&self) -> FinPerm {
        FinPerm::identity()
    }

    fn mul(&self, a: &FinPerm, b: &FinPerm) -> FinPerm {
        a.compose(b)
    }

    fn inv(&self, a: &FinPerm) -> FinPerm {
        a.inverse()
    }

    fn in_basic_subgroup(&self, a: &FinPerm, n: u64) -> bool {
        a.moved.range(..n).next().is_none()
    }

    fn render(&self, a: &FinPerm) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::laws;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn pi_examples() {
        let p2 = pi(2);
        let images: Vec<u64> = (0..4).map(|k| p2.apply(k)).collect();
        assert_eq!(images, vec![1, 2, 3, 0]);
        assert_eq!(p2.to_string(), "(0 1 2 3)");
        // pi_1 = b_0 b_1 on the points 0, 1, 2
        let p1 = transposition_b(0).compose(&transposition_b(1));
        assert_eq!((p1.apply(0), p1.apply(1), p1.apply(2)), (1, 2, 0));
        for n in 0..=100 {
            assert!(pi_cycle_check(n), "n = {n}");
            let b = transposition_b(n);
            assert_eq!(b.compose(&b), FinPerm::identity());
            let p = pi(n);
            assert!((0..=n).all(|k| p.apply(k) == k + 1));
        }
        assert_eq!(FinPerm::identity().to_string(), "()");
    }

    #[test]
    fn subgroups() {
        let g = PermGroup;
        assert!(g.in_basic_subgroup(&transposition_b(3), 3));
        assert!(!g.in_basic_subgroup(&transposition_b(3), 4));
        assert!(FinPerm::from_images(&[1, 1]).is_none());
        assert!(FinPerm::from_images(&[0, 2]).is_none());
    }

    fn perm() -> impl Strategy<Value = FinPerm> {
        Just((0u64..8).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| FinPerm::from_images(&v).unwrap())
    }

    proptest! {
        #[test]
        fn group_laws(a in perm(), b in perm(), c in perm()) {
            laws::check(&PermGroup, &a, &b, &c, 10);
        }

        #[test]
        fn compose_is_function_composition(a in perm(), b in perm(), k in 0u64..12) {
            prop_assert_eq!(a.compose(&b).apply(k), a.apply(b.apply(k)));
        }

        #[test]
        fn pow_matches_repeated(a in perm(), z in -7i64..=7) {
            let z = BigInt::from(z);
            prop_assert_eq!(PermGroup.pow(&a, &z), laws::repeated(&PermGroup, &a, &z));
        }
    }
}

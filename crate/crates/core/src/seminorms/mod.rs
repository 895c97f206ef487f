//! Word functionals: `mu_x` (largest power of a letter), `eta` (number of
//! local extrema of the support) and the exponent-sum homomorphisms
//! `delta_j`, together with a seminorm axiom checker.

mod mountain;

pub use mountain::{mountain_check, MountainInstance, MountainVerdict};

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{abs_big, DiscreteGroup};
use crate::words::{Letter, Word};

/// A non-negative function on a discrete group. The axioms
/// `nu(ab) <= nu(a) + nu(b)` and `nu(a^-1) = nu(a)` are a test contract,
/// checked by [`seminorm_axiom_check`].
pub trait Seminorm<D> {
    fn name(&self) -> String;
    fn eval(&self, x: &D) -> BigUint;
}

/// The seminorms on free-group words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WordSeminorm {
    Mu(Letter),
    Eta,
}

impl Seminorm<Word> for WordSeminorm {
    fn name(&self) -> String {
        match self {
            WordSeminorm::Mu(x) => format!("mu:{x}"),
            WordSeminorm::Eta => "eta".to_string(),
        }
    }

    fn eval(&self, w: &Word) -> BigUint {
        match *self {
            WordSeminorm::Mu(x) => mu(x, w),
            WordSeminorm::Eta => BigUint::from(eta(w)),
        }
    }
}

/// `|z|` on the integers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AbsValue;

impl Seminorm<BigInt> for AbsValue {
    fn name(&self) -> String {
        "abs".to_string()
    }

    fn eval(&self, z: &BigInt) -> BigUint {
        abs_big(z)
    }
}

/// Largest `|z|` over monoms `x^z` of `w`, or 0.
pub fn mu(x: Letter, w: &Word) -> BigUint {
    w.monoms()
        .iter()
        .filter(|m| m.letter == x)
        .map(|m| abs_big(&m.power))
        .max()
        .unwrap_or_default()
}

/// Number of local extrema of the support of `w`.
pub fn eta(w: &Word) -> usize {
    w.support().extrema_count()
}

/// Sum of the powers of the monoms of `w` in letter `j`.
pub fn delta(j: u64, w: &Word) -> BigInt {
    w.monoms()
        .iter()
        .filter(|m| m.letter.0 == j)
        .fold(BigInt::zero(), |acc, m| acc + &m.power)
}

/// Outcome of checking the seminorm axioms on one pair `(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub nu_a: BigUint,
    pub nu_b: BigUint,
    pub nu_ab: BigUint,
    pub nu_a_inv: BigUint,
    pub triangle: bool,
    pub symmetric: bool,
    pub reverse_triangle: bool,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.triangle && self.symmetric && self.reverse_triangle
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "nu(a)={} nu(b)={} nu(ab)={} nu(a^-1)={} S1={} S2={} reverse={}",
            self.nu_a,
            self.nu_b,
            self.nu_ab,
            self.nu_a_inv,
            self.triangle,
            self.symmetric,
            self.reverse_triangle
        )
    }
}

pub fn seminorm_axiom_check<D: DiscreteGroup>(
    nu: &(impl Seminorm<D> + ?Sized),
    a: &D,
    b: &D,
) -> AxiomReport {
    let nu_a = nu.eval(a);
    let nu_b = nu.eval(b);
    let nu_ab = nu.eval(&a.op(b));
    let nu_a_inv = nu.eval(&a.inverse());
    let gap = if nu_a >= nu_b {
        &nu_a - &nu_b
    } else {
        &nu_b - &nu_a
    };
    AxiomReport {
        triangle: nu_ab <= &nu_a + &nu_b,
        symmetric: nu_a == nu_a_inv,
        reverse_triangle: gap <= nu_ab,
        nu_a,
        nu_b,
        nu_ab,
        nu_a_inv,
    }
}

/// Which of the two power regimes applies to `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PowerBranch {
    /// `l_{c(w)} > 1`: `eta(w^n) >= 2n`.
    LongCore,
    /// `l_{c(w)} <= 1`: `eta(w^n) = eta(w)`.
    ShortCore,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerBoundReport {
    pub branch: PowerBranch,
    pub eta_w: usize,
    pub eta_power: usize,
    pub held: bool,
}

/// Check the lower bound `eta(w^n) >= 2n` (long cyclic core) or the
/// stability `eta(w^n) = eta(w)` (short core) for `n >= 1`.
pub fn eta_power_bounds(w: &Word, n: u64) -> PowerBoundReport {
    assert!(n >= 1, "power must be positive");
    let eta_w = eta(w);
    let eta_power = eta(&w.pow(n));
    if w.cyclic_conjugate().len() > 1 {
        PowerBoundReport {
            branch: PowerBranch::LongCore,
            eta_w,
            eta_power,
            held: eta_power as u64 >= 2 * n,
        }
    } else {
        PowerBoundReport {
            branch: PowerBranch::ShortCore,
            eta_w,
            eta_power,
            held: eta_power == eta_w,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn word() -> impl Strategy<Value = Word> {
        prop::collection::vec((0u64..8, -3i64..=3), 0..12).prop_map(Word::from_monoms)
    }

    #[test]
    fn mu_examples() {
        let x = w("0^2.1^-3.0^-5");
        assert_eq!(mu(Letter(0), &x), BigUint::from(5u32));
        assert_eq!(mu(Letter(1), &x), BigUint::from(3u32));
        assert_eq!(mu(Letter(7), &Word::identity()), BigUint::zero());
    }

    #[test]
    fn eta_examples() {
        assert_eq!(eta(&w("1.0.3.2")), 4);
        assert_eq!(eta(&w("0^3.1.2^-2")), 2);
        assert_eq!(eta(&Word::identity()), 0);
    }

    #[test]
    fn delta_examples() {
        let x = w("0^2.1^-3.0^-5");
        assert_eq!(delta(0, &x), BigInt::from(-3));
        assert_eq!(delta(1, &x), BigInt::from(-3));
        assert_eq!(delta(9, &x), BigInt::zero());
        assert_eq!(delta(0, &Word::identity()), BigInt::zero());
    }

    #[test]
    fn axiom_examples() {
        let a = w("0.1.0");
        let b = w("0^-1.1^-1");
        let ab = a.mul(&b);
        assert_eq!(ab, w("0"));
        let r = seminorm_axiom_check(&WordSeminorm::Eta, &a, &b);
        assert_eq!(r.nu_a, BigUint::from(eta(&a)));
        assert_eq!(r.nu_ab, BigUint::from(1u32));
        assert_eq!((eta(&a), eta(&b)), (3, 2));
        assert!(r.passed(), "{r}");

        let m = WordSeminorm::Mu(Letter(1));
        let x = w("1^4.0.1^-2");
        let r = seminorm_axiom_check(&m, &x, &x.inv());
        assert_eq!(r.nu_a, r.nu_b);
        assert!(r.symmetric && r.passed());
        assert_eq!(r.nu_ab, BigUint::zero());
    }

    #[test]
    fn power_bound_examples() {
        let r = eta_power_bounds(&w("0.1"), 5);
        assert_eq!(r.branch, PowerBranch::LongCore);
        assert_eq!(r.eta_power, 10);
        assert!(r.held);

        let x = w("0.1^2.0^-1");
        assert_eq!(x.pow(7), w("0.1^14.0^-1"));
        let r = eta_power_bounds(&x, 7);
        assert_eq!(r.branch, PowerBranch::ShortCore);
        assert_eq!((r.eta_w, r.eta_power), (3, 3));
        assert!(r.held);

        let r = eta_power_bounds(&Word::identity(), 4);
        assert_eq!(r.branch, PowerBranch::ShortCore);
        assert_eq!((r.eta_w, r.eta_power, r.held), (0, 0, true));
    }

    #[test]
    fn abs_value_is_a_seminorm_on_integers() {
        let r = seminorm_axiom_check(&AbsValue, &BigInt::from(-7), &BigInt::from(3));
        assert_eq!(r.nu_ab, BigUint::from(4u32));
        assert!(r.passed());
    }

    proptest! {
        #[test]
        fn word_seminorm_axioms(a in word(), b in word(), x in 0u64..8) {
            for nu in [WordSeminorm::Eta, WordSeminorm::Mu(Letter(x))] {
                let r = seminorm_axiom_check(&nu, &a, &b);
                prop_assert!(r.passed(), "{} on {} , {}: {}", nu.name(), a, b, r);
            }
        }

        #[test]
        fn delta_is_homomorphism(a in word(), b in word(), d in word(), j in 0u64..8) {
            prop_assert_eq!(delta(j, &a.mul(&b)), delta(j, &a) + delta(j, &b));
            prop_assert_eq!(delta(j, &d.mul(&a).mul(&d.inv())), delta(j, &a));
        }

        #[test]
        fn power_bounds_hold(
            raw in prop::collection::vec((0u64..8, -3i64..=3), 0..10),
            n in 1u64..=20,
        ) {
            let r = eta_power_bounds(&Word::from_monoms(raw), n);
            prop_assert!(r.held, "{:?}", r);
        }
    }
}

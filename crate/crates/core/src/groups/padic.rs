use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};

use super::InstrumentedGroup;
use crate::error::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// `v_p(a)`, `None` standing for infinity at `a = 0`.
pub fn v_p(a: &BigInt, p: u64) -> Option<u64> {
    if a.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut a = a.clone();
    let mut k = 0;
    loop {
        let (q, r) = a.div_rem(&p);
        if !r.is_zero() {
            return Some(k);
        }
        a = q;
        k += 1;
    }
}

/// `a` in `U_n = p^n Z`.
pub fn padic_in_un(a: &BigInt, p: u64, n: u64) -> bool {
    v_p(a, p).is_none_or(|v| v >= n)
}

/// An integer viewed in the `p`-adic topology.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PadicInt {
    pub value: BigInt,
    pub p: u64,
}

impl PadicInt {
    pub fn new(value: impl Into<BigInt>, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidExperiment(format!("{p} is not prime")));
        }
        Ok(PadicInt {
            value: value.into(),
            p,
        })
    }

    pub fn valuation(&self) -> Option<u64> {
        v_p(&self.value, self.p)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.valuation() {
            Some(v) => write!(f, "{}(v_p={v})", self.value),
            None => write!(f, "{}(v_p=inf)", self.value),
        }
    }
}

/// `a_n = p^n`.
pub fn padic_basis_sequence(n: u64, p: u64) -> PadicInt {
    PadicInt {
        value: BigInt::from(p).pow(n),
        p,
    }
}

/// `(Z, +)` with basic subgroups `p^n Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PadicGroup {
    p: u64,
}

impl PadicGroup {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidExperiment(format!("{p} is not prime")));
        }
        Ok(PadicGroup { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn element(&self, value: impl Into<BigInt>) -> PadicInt {
        PadicInt {
            value: value.into(),
            p: self.p,
        }
    }
}

impl InstrumentedGroup for PadicGroup {
    type Elem = PadicInt;

    fn identity(&self) -> PadicInt {
        self.element(0)
    }

    fn mul(&self, a: &PadicInt, b: &PadicInt) -> PadicInt {
        self.element(&a.value + &b.value)
    }

    fn inv(&self, a: &PadicInt) -> PadicInt {
        self.element(-&a.value)
    }

    fn pow(&self, a: &PadicInt, z: &BigInt) -> PadicInt {
        self.element(&a.value * z)
    }

    fn in_basic_subgroup(&self, a: &PadicInt, n: u64) -> bool {
        padic_in_un(&a.value, self.p, n)
    }

    fn render(&self, a: &PadicInt) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::laws;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(v_p(&BigInt::from(18), 3), Some(2));
        assert_eq!(v_p(&BigInt::from(-54), 3), Some(3));
        assert_eq!(v_p(&BigInt::zero(), 3), None);
        assert!(padic_in_un(&BigInt::from(27), 3, 3));
        assert!(!padic_in_un(&BigInt::from(27), 3, 4));
        assert_eq!(padic_basis_sequence(4, 3).value, BigInt::from(81));
        assert_eq!(PadicGroup::new(3).unwrap().render(&BigInt::from(18).into_padic(3)), "18(v_p=2)");
        assert!(PadicGroup::new(9).is_err());
        assert!(PadicInt::new(5, 1).is_err());
        assert_eq!((2..30).filter(|&p| is_prime(p)).count(), 10);
    }

    trait IntoPadic {
        fn into_padic(self, p: u64) -> PadicInt;
    }

    impl IntoPadic for BigInt {
        fn into_padic(self, p: u64) -> PadicInt {
            PadicInt::new(self, p).unwrap()
        }
    }

    proptest! {
        #[test]
        fn group_laws(a in -10_000i64..10_000, b in -10_000i64..10_000, c in -10_000i64..10_000) {
            let g = PadicGroup::new(3).unwrap();
            laws::check(&g, &g.element(a), &g.element(b), &g.element(c), 12);
        }

        #[test]
        fn tail_sums_have_high_valuation(
            z in prop::collection::vec(-1_000_000_000i64..=1_000_000_000, 1..20),
            l in 0u64..10,
        ) {
            let p = 3;
            let sum: BigInt = z
                .iter()
                .enumerate()
                .map(|(k, &zk)| BigInt::from(zk) * padic_basis_sequence(l + k as u64, p).value)
                .sum();
            prop_assert!(padic_in_un(&sum, p, l));
            // direct factoring: the sum is p^l times an integer
            let pl = padic_basis_sequence(l, p).value;
            prop_assert!((&sum % &pl).is_zero());
        }
    }
}

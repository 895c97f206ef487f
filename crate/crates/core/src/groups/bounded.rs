use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::InstrumentedGroup;
use crate::algebra::abs_big;

/// A bounded integer sequence: `prefix`, then `tail` forever. Trailing
/// prefix entries equal to the tail are trimmed, so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundedIntVec {
    prefix: Vec<BigInt>,
    tail: BigInt,
}

impl BoundedIntVec {
    pub fn new(prefix: Vec<BigInt>, tail: BigInt) -> Self {
        let mut v = BoundedIntVec { prefix, tail };
        while v.prefix.last() == Some(&v.tail) {
            v.prefix.pop();
        }
        v
    }

    pub fn zero() -> Self {
        BoundedIntVec::new(vec![], BigInt::zero())
    }

    pub fn prefix(&self) -> &[BigInt] {
        &self.prefix
    }

    pub fn tail(&self) -> &BigInt {
        &self.tail
    }

    pub fn at(&self, i: u64) -> BigInt {
        self.prefix
            .get(i as usize)
            .cloned()
            .unwrap_or_else(|| self.tail.clone())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        let n = self.prefix.len().max(other.prefix.len()) as u64;
        BoundedIntVec::new(
            (0..n).map(|i| f(&self.at(i), &other.at(i))).collect(),
            f(&self.tail, &other.tail),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn neg(&self) -> Self {
        BoundedIntVec::new(self.prefix.iter().map(|v| -v).collect(), -&self.tail)
    }

    pub fn scale(&self, z: &BigInt) -> Self {
        BoundedIntVec::new(self.prefix.iter().map(|v| v * z).collect(), &self.tail * z)
    }

    /// `sup_i |v(i)|`, exact.
    pub fn sup_norm(&self) -> BigUint {
        self.prefix
            .iter()
            .map(abs_big)
            .fold(abs_big(&self.tail), std::cmp::max)
    }
}

impl fmt::Display for BoundedIntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.prefix.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}|{}]", p.join(","), self.tail)
    }
}

/// `a_n`: 1 at coordinate `n`, 0 elsewhere.
pub fn basis_a(n: u64) -> BoundedIntVec {
    let mut prefix = vec![BigInt::zero(); n as usize];
    prefix.push(1.into());
    BoundedIntVec::new(prefix, BigInt::zero())
}

/// Bounded sequences in `Z^N` under addition, `U_n` = vanishing below `n`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BoundedGroup;

impl InstrumentedGroup for BoundedGroup {
    type Elem = BoundedIntVec;

    fn identity(&self) -> BoundedIntVec {
        BoundedIntVec::zero()
    }

    fn mul(&self, a: &BoundedIntVec, b: &BoundedIntVec) -> BoundedIntVec {
        a.add(b)
    }

    fn inv(&self, a: &BoundedIntVec) -> BoundedIntVec {
        a.neg()
    }

    fn pow(&self, a: &BoundedIntVec, z: &BigInt) -> BoundedIntVec {
        a.scale(z)
    }

    fn in_basic_subgroup(&self, a: &BoundedIntVec, n: u64) -> bool {
        (0..n.min(a.prefix.len() as u64 + 1)).all(|i| a.at(i).is_zero())
    }

    fn render(&self, a: &BoundedIntVec) -> String {
        a.to_string()
    }
}

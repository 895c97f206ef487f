use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// A discrete group whose elements are plain values: the coordinate group `D`
/// of a power `D^I`.
pub trait DiscreteGroup: Clone + PartialEq + Debug {
    fn identity() -> Self;
    fn op(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    fn power(&self, z: &BigInt) -> Self;

    fn is_identity(&self) -> bool {
        *self == Self::identity()
    }
}

/// The integers under addition.
impl DiscreteGroup for BigInt {
    fn identity() -> Self {
        BigInt::zero()
    }

    fn op(&self, other: &Self) -> Self {
        self + other
    }

    fn inverse(&self) -> Self {
        -self
    }

    fn power(&self, z: &BigInt) -> Self {
        self * z
    }

    fn is_identity(&self) -> bool {
        self.is_zero()
    }
}

pub(crate) fn abs_big(z: &BigInt) -> num_bigint::BigUint {
    z.abs().magnitude().clone()
}

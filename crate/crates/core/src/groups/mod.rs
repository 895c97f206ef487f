//! Model groups with linear topologies: a window of `G = F(N)^N` together
//! with the symbolic subgroup `H`, bounded integer sequences, the integers
//! with the `p`-adic topology, and finitary permutations of the naturals.
//!
//! Each model implements [`InstrumentedGroup`]. `in_basic_subgroup(x, n)`
//! tests membership in the open subgroup `U_n`; these form a decreasing
//! chain with trivial intersection on representable elements.

mod bounded;
mod free;
mod padic;
mod perm;

pub use bounded::{basis_a, BoundedGroup, BoundedIntVec};
pub use free::{
    g_z_coord, h_bound_certificates, h_eval, short_core_power_bounds, delta_stability_check, t_of,
    y, Epsilon, FreeVecElement, FreeVecGroup, HBoundReport, HFactor, HSymbolic, ShortCoreReport,
    WordCoordinates,
};
pub use padic::{is_prime, padic_basis_sequence, padic_in_un, v_p, PadicGroup, PadicInt};
pub use perm::{pi, pi_cycle_check, transposition_b, FinPerm, PermGroup};

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub trait InstrumentedGroup {
    type Elem: Clone + PartialEq + Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    /// `a^z` by repeated squaring.
    fn pow(&self, a: &Self::Elem, z: &BigInt) -> Self::Elem {
        let (mut base, mut e) = if z.is_negative() {
            (self.inv(a), -z)
        } else {
            (a.clone(), z.clone())
        };
        let mut acc = self.identity();
        let two = BigInt::from(2);
        while !e.is_zero() {
            if (&e % &two).is_positive() {
                acc = self.mul(&acc, &base);
            }
            e /= &two;
            if !e.is_zero() {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a == b
    }

    /// Membership in the basic open subgroup `U_n`.
    fn in_basic_subgroup(&self, a: &Self::Elem, n: u64) -> bool;

    /// Literal text used verbatim in trace files.
    fn render(&self, a: &Self::Elem) -> String;
}

/// Group laws and the basic subgroup chain `U_0 ⊇ U_1 ⊇ ...` on one
/// triple of elements; the first law that fails, if any.
pub fn group_law_violation<G: InstrumentedGroup>(
    g: &G,
    a: &G::Elem,
    b: &G::Elem,
    c: &G::Elem,
    levels: u64,
) -> Option<String> {
    let e = g.identity();
    if !g.equal(&g.mul(&g.mul(a, b), c), &g.mul(a, &g.mul(b, c))) {
        return Some("associativity".into());
    }
    if !(g.equal(&g.mul(&e, a), a) && g.equal(&g.mul(a, &e), a)) {
        return Some("identity".into());
    }
    if !g.equal(&g.mul(a, &g.inv(a)), &e) {
        return Some("inverse".into());
    }
    for n in 0..levels {
        let (ina, inb) = (g.in_basic_subgroup(a, n), g.in_basic_subgroup(b, n));
        if !g.in_basic_subgroup(&e, n) {
            return Some(format!("identity outside U_{n}"));
        }
        if ina && inb && !g.in_basic_subgroup(&g.mul(a, b), n) {
            return Some(format!("U_{n} not closed under products"));
        }
        if ina != g.in_basic_subgroup(&g.inv(a), n) {
            return Some(format!("U_{n} not closed under inverses"));
        }
        if g.in_basic_subgroup(a, n + 1) && !ina {
            return Some(format!("U_{} not inside U_{n}", n + 1));
        }
    }
    None
}

//! Weight functions `f: N -> (omega + 1) \ {0}`, multipliers `z: N -> Z` with
//! `|z| <= f`, and permutations / injections of the naturals.
//!
//! Everything is represented as a finite prefix followed by a tail rule, so
//! values serialize exactly and every comparison is decidable.

use std::cmp::{max, Ordering};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::abs_big;
use crate::error::{Error, Result};
use crate::extrema::zigzag;

/// A weight value: a positive integer or `omega`. `Finite(_) < Omega`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "ValueRepr", into = "ValueRepr")]
pub enum WeightValue {
    Finite(BigUint),
    Omega,
}

impl WeightValue {
    pub fn finite(n: u64) -> Self {
        WeightValue::Finite(BigUint::from(n))
    }

    pub fn is_omega(&self) -> bool {
        matches!(self, WeightValue::Omega)
    }

    /// `|z| <= self`.
    pub fn dominates(&self, z: &BigInt) -> bool {
        match self {
            WeightValue::Omega => true,
            WeightValue::Finite(b) => abs_big(z) <= *b,
        }
    }

    pub fn as_finite(&self) -> Option<&BigUint> {
        match self {
            WeightValue::Finite(b) => Some(b),
            WeightValue::Omega => None,
        }
    }
}

impl fmt::Display for WeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightValue::Finite(b) => write!(f, "{b}"),
            WeightValue::Omega => f.write_str("omega"),
        }
    }
}

/// Config-file form of numbers: small values as integers, anything else as text.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ValueRepr {
    Int(i64),
    Text(String),
}

impl TryFrom<ValueRepr> for WeightValue {
    type Error = String;

    fn try_from(r: ValueRepr) -> std::result::Result<Self, String> {
        let v = match r {
            ValueRepr::Text(s) if s == "omega" => return Ok(WeightValue::Omega),
            ValueRepr::Text(s) => s
                .parse::<BigUint>()
                .map_err(|_| format!("expected a positive integer or \"omega\", got {s:?}"))?,
            ValueRepr::Int(i) => BigUint::from(
                u64::try_from(i).map_err(|_| format!("weight values are positive, got {i}"))?,
            ),
        };
        if v.is_zero() {
            return Err("weight values are positive, got 0".into());
        }
        Ok(WeightValue::Finite(v))
    }
}

impl From<WeightValue> for ValueRepr {
    fn from(v: WeightValue) -> Self {
        match v {
            WeightValue::Omega => ValueRepr::Text("omega".into()),
            WeightValue::Finite(b) => match b.to_i64() {
                Some(i) => ValueRepr::Int(i),
                None => ValueRepr::Text(b.to_string()),
            },
        }
    }
}

/// Tail rule of a weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TailRepr", into = "TailRepr")]
pub enum WeightTail {
    Const(WeightValue),
    /// `f(n) = a n + b`, `b >= 1`.
    Linear { a: BigUint, b: BigUint },
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TailRepr {
    Linear { linear: [u64; 2] },
    Value(ValueRepr),
}

impl TryFrom<TailRepr> for WeightTail {
    type Error = String;

    fn try_from(r: TailRepr) -> std::result::Result<Self, String> {
        match r {
            TailRepr::Linear { linear: [a, b] } => {
                if b == 0 {
                    return Err("linear tail needs b >= 1".into());
                }
                Ok(WeightTail::Linear {
                    a: a.into(),
                    b: b.into(),
                })
            }
            TailRepr::Value(v) => Ok(WeightTail::Const(v.try_into()?)),
        }
    }
}

impl From<WeightTail> for TailRepr {
    fn from(t: WeightTail) -> Self {
        match t {
            WeightTail::Const(v) => TailRepr::Value(v.into()),
            WeightTail::Linear { a, b } => TailRepr::Linear {
                linear: [
                    a.to_u64().expect("linear coefficient fits u64"),
                    b.to_u64().expect("linear coefficient fits u64"),
                ],
            },
        }
    }
}

impl WeightTail {
    fn at(&self, n: u64) -> WeightValue {
        match self {
            WeightTail::Const(v) => v.clone(),
            WeightTail::Linear { a, b } => WeightValue::Finite(a * n + b),
        }
    }

    /// Whether `self(n) <= other(n)` for every `n >= from`.
    fn le_from(&self, other: &WeightTail, from: u64) -> bool {
        use WeightTail::*;
        use WeightValue::*;
        match (self, other) {
            (Const(c), Const(d)) => c <= d,
            (Const(Omega), Linear { .. }) => false,
            (Const(Finite(c)), Linear { a, b }) => *c <= a * from + b,
            (Linear { .. }, Const(Omega)) => true,
            (Linear { a, b }, Const(Finite(d))) => a.is_zero() && b <= d,
            (Linear { a, b }, Linear { a: c, b: d }) => match a.cmp(c) {
                Ordering::Greater => false,
                Ordering::Equal => b <= d,
                Ordering::Less => a * from + b <= c * from + d,
            },
        }
    }

    /// Whether `self(n) <= other(n)` for all sufficiently large `n`.
    fn le_eventually(&self, other: &WeightTail) -> bool {
        use WeightTail::*;
        use WeightValue::*;
        match (self, other) {
            (Const(c), Const(d)) => c <= d,
            (Const(Omega), Linear { .. }) => false,
            (Const(Finite(c)), Linear { a, b }) => !a.is_zero() || c <= b,
            (Linear { .. }, Const(Omega)) => true,
            (Linear { a, b }, Const(Finite(d))) => a.is_zero() && b <= d,
            (Linear { a, b }, Linear { a: c, b: d }) => a < c || (a == c && b <= d),
        }
    }
}

/// A weight function: `prefix[n]` for `n < prefix.len()`, then the tail rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weight {
    #[serde(default)]
    pub prefix: Vec<WeightValue>,
    pub tail: WeightTail,
}

impl Weight {
    pub fn new(prefix: Vec<WeightValue>, tail: WeightTail) -> Result<Self> {
        let zero = WeightValue::Finite(BigUint::zero());
        if prefix.contains(&zero) || matches!(&tail, WeightTail::Const(v) if *v == zero) {
            return Err(Error::InvalidExperiment("weight values must be >= 1".into()));
        }
        if let WeightTail::Linear { b, .. } = &tail {
            if b.is_zero() {
                return Err(Error::InvalidExperiment("linear tail needs b >= 1".into()));
            }
        }
        Ok(Weight { prefix, tail })
    }

    /// `f_1`, the constant 1.
    pub fn one() -> Self {
        Weight::constant(1)
    }

    /// `f_omega`, the constant omega.
    pub fn omega() -> Self {
        Weight {
            prefix: vec![],
            tail: WeightTail::Const(WeightValue::Omega),
        }
    }

    pub fn constant(c: u64) -> Self {
        assert!(c >= 1, "weights are positive");
        Weight {
            prefix: vec![],
            tail: WeightTail::Const(WeightValue::finite(c)),
        }
    }

    /// `f(n) = a n + b`.
    pub fn linear(a: u64, b: u64) -> Self {
        assert!(b >= 1, "weights are positive");
        Weight {
            prefix: vec![],
            tail: WeightTail::Linear {
                a: a.into(),
                b: b.into(),
            },
        }
    }

    pub fn at(&self, n: u64) -> WeightValue {
        match usize::try_from(n).ok().and_then(|i| self.prefix.get(i)) {
            Some(v) => v.clone(),
            None => self.tail.at(n),
        }
    }

    /// `Some(B)` when `f(n) <= B` for every `n`.
    pub fn bound(&self) -> Option<BigUint> {
        let tail = match &self.tail {
            WeightTail::Const(WeightValue::Finite(c)) => c.clone(),
            WeightTail::Linear { a, b } if a.is_zero() => b.clone(),
            _ => return None,
        };
        self.prefix.iter().try_fold(tail, |acc, v| match v {
            WeightValue::Finite(x) => Some(max(acc, x.clone())),
            WeightValue::Omega => None,
        })
    }

    /// `Some(B)` when `f(n) <= B` for all sufficiently large `n`.
    pub fn eventual_bound(&self) -> Option<BigUint> {
        match &self.tail {
            WeightTail::Const(WeightValue::Finite(c)) => Some(c.clone()),
            WeightTail::Linear { a, b } if a.is_zero() => Some(b.clone()),
            _ => None,
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix: Vec<String> = self.prefix.iter().map(|v| v.to_string()).collect();
        let tail = match &self.tail {
            WeightTail::Const(v) => v.to_string(),
            WeightTail::Linear { a, b } => format!("{a}n+{b}"),
        };
        write!(f, "[{}] then {tail}", prefix.join(","))
    }
}

/// `f <= g` pointwise.
pub fn le(f: &Weight, g: &Weight) -> bool {
    let overhang = max(f.prefix.len(), g.prefix.len()) as u64;
    (0..overhang).all(|n| f.at(n) <= g.at(n)) && f.tail.le_from(&g.tail, overhang)
}

/// `f <=* g`: `f(n) <= g(n)` for all but finitely many `n`.
pub fn le_star(f: &Weight, g: &Weight) -> bool {
    f.tail.le_eventually(&g.tail)
}

/// Tail rule of a multiplier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "IntRepr", into = "IntRepr")]
pub enum MultiplierTail {
    Zero,
    Const(BigInt),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Int(i64),
    Text(String),
}

impl TryFrom<IntRepr> for BigInt {
    type Error = String;

    fn try_from(r: IntRepr) -> std::result::Result<Self, String> {
        match r {
            IntRepr::Int(i) => Ok(i.into()),
            IntRepr::Text(s) => s.parse().map_err(|_| format!("expected an integer, got {s:?}")),
        }
    }
}

fn int_repr(z: &BigInt) -> IntRepr {
    match z.to_i64() {
        Some(i) => IntRepr::Int(i),
        None => IntRepr::Text(z.to_string()),
    }
}

impl TryFrom<IntRepr> for MultiplierTail {
    type Error = String;

    fn try_from(r: IntRepr) -> std::result::Result<Self, String> {
        Ok(MultiplierTail::from(BigInt::try_from(r)?))
    }
}

impl From<MultiplierTail> for IntRepr {
    fn from(t: MultiplierTail) -> Self {
        match t {
            MultiplierTail::Zero => IntRepr::Int(0),
            MultiplierTail::Const(c) => int_repr(&c),
        }
    }
}

impl From<BigInt> for MultiplierTail {
    fn from(c: BigInt) -> Self {
        if c.is_zero() {
            MultiplierTail::Zero
        } else {
            MultiplierTail::Const(c)
        }
    }
}

impl MultiplierTail {
    pub fn value(&self) -> BigInt {
        match self {
            MultiplierTail::Zero => BigInt::zero(),
            MultiplierTail::Const(c) => c.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MultiplierRepr {
    #[serde(default)]
    prefix: Vec<IntRepr>,
    #[serde(default = "zero_tail")]
    tail: MultiplierTail,
}

fn zero_tail() -> MultiplierTail {
    MultiplierTail::Zero
}

/// A multiplier `z: N -> Z`: `prefix[n]` for `n < prefix.len()`, then the tail.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MultiplierRepr", into = "MultiplierRepr")]
pub struct Multiplier {
    pub prefix: Vec<BigInt>,
    pub tail: MultiplierTail,
}

impl TryFrom<MultiplierRepr> for Multiplier {
    type Error = String;

    fn try_from(r: MultiplierRepr) -> std::result::Result<Self, String> {
        let prefix = r
            .prefix
            .into_iter()
            .map(BigInt::try_from)
            .collect::<std::result::Result<_, _>>()?;
        Ok(Multiplier {
            prefix,
            tail: r.tail,
        })
    }
}

impl From<Multiplier> for MultiplierRepr {
    fn from(z: Multiplier) -> Self {
        MultiplierRepr {
            prefix: z.prefix.iter().map(int_repr).collect(),
            tail: z.tail,
        }
    }
}

impl Multiplier {
    pub fn new<I, T>(prefix: I, tail: impl Into<BigInt>) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        Multiplier {
            prefix: prefix.into_iter().map(Into::into).collect(),
            tail: MultiplierTail::from(tail.into()),
        }
    }

    /// `z = 0`.
    pub fn zero() -> Self {
        Multiplier {
            prefix: vec![],
            tail: MultiplierTail::Zero,
        }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Multiplier::new(Vec::<BigInt>::new(), c)
    }

    /// A finitely supported multiplier.
    pub fn finite<I, T>(prefix: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        Multiplier::new(prefix, 0)
    }

    pub fn at(&self, n: u64) -> BigInt {
        match usize::try_from(n).ok().and_then(|i| self.prefix.get(i)) {
            Some(v) => v.clone(),
            None => self.tail.value(),
        }
    }

    /// Whether `z(n) = 0` for all `n >= prefix.len()`.
    pub fn is_finitely_supported(&self) -> bool {
        self.tail == MultiplierTail::Zero
    }

    /// `sup |z|`.
    pub fn sup_abs(&self) -> BigUint {
        self.prefix
            .iter()
            .map(abs_big)
            .fold(abs_big(&self.tail.value()), max)
    }

    fn map(&self, f: impl Fn(&BigInt) -> BigInt) -> Multiplier {
        Multiplier {
            prefix: self.prefix.iter().map(&f).collect(),
            tail: MultiplierTail::from(f(&self.tail.value())),
        }
    }
}

impl fmt::Display for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix: Vec<String> = self.prefix.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}] then {}", prefix.join(","), self.tail.value())
    }
}

/// `|z(n)| <= f(n)` for every `n`.
pub fn check_multiplier(z: &Multiplier, f: &Weight) -> bool {
    let overhang = max(z.prefix.len(), f.prefix.len()) as u64;
    if !(0..overhang).all(|n| f.at(n).dominates(&z.at(n))) {
        return false;
    }
    let c = abs_big(&z.tail.value());
    if c.is_zero() {
        return true;
    }
    let as_weight = WeightTail::Const(WeightValue::Finite(c));
    as_weight.le_from(&f.tail, overhang)
}

/// `z = z_+ - z_-` with `z_+(n) = max(0, z(n))` and `z_-(n) = max(0, -z(n))`.
pub fn decompose_signs(z: &Multiplier) -> (Multiplier, Multiplier) {
    let plus = z.map(|v| if v.is_positive() { v.clone() } else { BigInt::zero() });
    let minus = z.map(|v| if v.is_negative() { -v } else { BigInt::zero() });
    (plus, minus)
}

/// Split `0 <= z <= k` into `k` multipliers with values in `{0, 1}`:
/// `z_i(n) = 1` iff `i <= z(n)`.
pub fn binary_slices(z: &Multiplier, k: u64) -> Result<Vec<Multiplier>> {
    if k == 0 {
        return Err(Error::InvalidSlices("k must be positive".into()));
    }
    let kb = BigInt::from(k);
    let bad = z
        .prefix
        .iter()
        .chain(std::iter::once(&z.tail.value()))
        .find(|v| v.is_negative() || **v > kb)
        .cloned();
    if let Some(v) = bad {
        return Err(Error::InvalidSlices(format!("value {v} outside 0..={k}")));
    }
    Ok((1..=k)
        .map(|i| {
            let i = BigInt::from(i);
            z.map(|v| if i <= *v { BigInt::one() } else { BigInt::zero() })
        })
        .collect())
}

/// A validated permutation of `{0, .., k-1}`, extended by the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct PermTable(Vec<u64>);

impl PermTable {
    pub fn new(table: Vec<u64>) -> Result<Self> {
        let mut seen = vec![false; table.len()];
        for &v in &table {
            match usize::try_from(v).ok().and_then(|i| seen.get_mut(i)) {
                Some(s) if !*s => *s = true,
                _ => {
                    return Err(Error::InvalidPermutation(format!(
                        "{table:?} is not a permutation of 0..{}",
                        table.len()
                    )))
                }
            }
        }
        Ok(PermTable(table))
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    fn apply(&self, n: u64) -> u64 {
        usize::try_from(n)
            .ok()
            .and_then(|i| self.0.get(i))
            .copied()
            .unwrap_or(n)
    }

    fn inverse(&self) -> PermTable {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize] = i as u64;
        }
        PermTable(inv)
    }
}

impl TryFrom<Vec<u64>> for PermTable {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        PermTable::new(v)
    }
}

impl From<PermTable> for Vec<u64> {
    fn from(t: PermTable) -> Self {
        t.0
    }
}

/// A bijection of the naturals.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Permutation {
    #[default]
    Identity,
    /// `n + 1` for even `n`, `n - 1` for odd `n`.
    #[serde(rename = "zigzag")]
    ZigZag,
    Table(PermTable),
    /// `Composed([p, q, r])` is `p . q . r`: `r` is applied first.
    Composed(Vec<Permutation>),
}

impl Permutation {
    pub fn table(table: Vec<u64>) -> Result<Self> {
        Ok(Permutation::Table(PermTable::new(table)?))
    }

    pub fn apply(&self, n: u64) -> u64 {
        match self {
            Permutation::Identity => n,
            Permutation::ZigZag => zigzag(n),
            Permutation::Table(t) => t.apply(n),
            Permutation::Composed(ps) => ps.iter().rev().fold(n, |k, p| p.apply(k)),
        }
    }

    pub fn inverse(&self) -> Permutation {
        match self {
            Permutation::Identity => Permutation::Identity,
            Permutation::ZigZag => Permutation::ZigZag,
            Permutation::Table(t) => Permutation::Table(t.inverse()),
            Permutation::Composed(ps) => {
                Permutation::Composed(ps.iter().rev().map(Permutation::inverse).collect())
            }
        }
    }

    /// Largest `n` with `apply(n) != n` plus one, or 0 when the permutation
    /// has finite support contained in an initial segment it determines.
    /// `None` for permutations moving infinitely many points.
    pub fn support_bound(&self) -> Option<u64> {
        match self {
            Permutation::Identity => Some(0),
            Permutation::ZigZag => None,
            Permutation::Table(t) => Some(t.0.len() as u64),
            Permutation::Composed(ps) => ps
                .iter()
                .map(Permutation::support_bound)
                .try_fold(0, |acc, b| b.map(|b| acc.max(b))),
        }
    }

    /// `phi^-1({0, .., n-1})` as a sorted list.
    pub fn preimage_of_segment(&self, n: u64) -> Vec<u64> {
        let inv = self.inverse();
        let mut pre: Vec<u64> = (0..n).map(|k| inv.apply(k)).collect();
        pre.sort_unstable();
        pre
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Permutation::Identity => f.write_str("identity"),
            Permutation::ZigZag => f.write_str("zigzag"),
            Permutation::Table(t) => write!(f, "table{:?}", t.0),
            Permutation::Composed(ps) => {
                let parts: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "({})", parts.join(" . "))
            }
        }
    }
}

/// `(f . phi)(n)` for `n < horizon`.
pub fn compose_weight(f: &Weight, phi: &Permutation, horizon: u64) -> Vec<WeightValue> {
    (0..horizon).map(|n| f.at(phi.apply(n))).collect()
}

/// An order-preserving map `sigma: N -> N`: the listed values, then
/// consecutive steps of `step` after the last one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Selection {
    #[serde(default)]
    pub prefix: Vec<u64>,
    #[serde(default = "one_step")]
    pub step: u64,
}

fn one_step() -> u64 {
    1
}

impl Default for Selection {
    fn default() -> Self {
        Selection {
            prefix: vec![],
            step: 1,
        }
    }
}

impl Selection {
    pub fn new(prefix: Vec<u64>, step: u64) -> Result<Self> {
        if step == 0 {
            return Err(Error::InvalidSelection("step must be positive".into()));
        }
        if prefix.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::InvalidSelection(
                "selection must be strictly increasing".into(),
            ));
        }
        Ok(Selection { prefix, step })
    }

    pub fn is_identity(&self) -> bool {
        self.step == 1 && self.prefix.iter().enumerate().all(|(i, &v)| v == i as u64)
    }

    pub fn apply(&self, n: u64) -> u64 {
        let k = self.prefix.len() as u64;
        match usize::try_from(n).ok().and_then(|i| self.prefix.get(i)) {
            Some(&v) => v,
            None => match self.prefix.last() {
                Some(&last) => last + (n - k + 1) * self.step,
                None => n * self.step,
            },
        }
    }

    /// `sigma^-1(i)` when `i` is in the image.
    pub fn preimage(&self, i: u64) -> Option<u64> {
        if let Ok(pos) = self.prefix.binary_search(&i) {
            return Some(pos as u64);
        }
        let k = self.prefix.len() as u64;
        let (base, first) = match self.prefix.last() {
            Some(&last) => (last, k),
            None => {
                return (i % self.step == 0).then_some(i / self.step);
            }
        };
        if i <= base || (i - base) % self.step != 0 {
            return None;
        }
        Some(first + (i - base) / self.step - 1)
    }
}

/// An injection `phi = phi_hat . sigma` of the naturals, with `phi_hat` a
/// bijection and `sigma` order preserving.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Injection {
    pub sigma: Selection,
    pub phi_hat: Permutation,
}

impl Injection {
    pub fn bijection(phi: Permutation) -> Self {
        Injection {
            sigma: Selection::default(),
            phi_hat: phi,
        }
    }

    pub fn apply(&self, n: u64) -> u64 {
        self.phi_hat.apply(self.sigma.apply(n))
    }

    /// The multiplier `z'` that runs the bijection `phi_hat` and reproduces
    /// the products of the injection: `z'(sigma(n)) = z(n)`, zero off the image.
    /// Tabulated on `0..horizon`.
    pub fn spread_multiplier(&self, z: &Multiplier, horizon: u64) -> Multiplier {
        Multiplier::finite((0..horizon).map(|i| match self.sigma.preimage(i) {
            Some(n) => z.at(n),
            None => BigInt::zero(),
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fin(v: u64) -> WeightValue {
        WeightValue::finite(v)
    }

    #[test]
    fn weight_at_examples() {
        assert_eq!(Weight::omega().at(17), WeightValue::Omega);
        assert_eq!(Weight::one().at(5), fin(1));
        assert_eq!(Weight::linear(1, 1).at(4), fin(5));
        let f = Weight::new(vec![fin(3), WeightValue::Omega], WeightTail::Const(fin(2))).unwrap();
        assert_eq!((f.at(0), f.at(1), f.at(2)), (fin(3), WeightValue::Omega, fin(2)));
    }

    #[test]
    fn weight_rejects_zero() {
        assert!(Weight::new(vec![fin(0)], WeightTail::Const(fin(1))).is_err());
        assert!(Weight::new(vec![], WeightTail::Linear { a: 1u32.into(), b: 0u32.into() }).is_err());
    }

    #[test]
    fn order_examples() {
        assert!(le(&Weight::one(), &Weight::omega()));
        assert!(!le(&Weight::omega(), &Weight::one()));
        let big_head = Weight::new(vec![fin(999)], WeightTail::Const(fin(1))).unwrap();
        assert!(le_star(&big_head, &Weight::one()));
        assert!(!le(&big_head, &Weight::one()));
        assert!(!le(&Weight::linear(1, 1), &Weight::constant(5)));
        assert!(!le_star(&Weight::linear(1, 1), &Weight::constant(5)));
        assert!(le_star(&Weight::constant(5), &Weight::linear(1, 1)));
        assert!(!le(&Weight::constant(5), &Weight::linear(1, 1)));
        let shifted = Weight::new(vec![fin(5); 4], WeightTail::Linear { a: 1u32.into(), b: 1u32.into() }).unwrap();
        assert!(le(&Weight::constant(5), &shifted));
    }

    #[test]
    fn multiplier_check_examples() {
        assert!(check_multiplier(&Multiplier::constant(3), &Weight::omega()));
        assert!(!check_multiplier(&Multiplier::constant(2), &Weight::one()));
        let z = Multiplier::finite([5, -5]);
        assert!(!check_multiplier(&z, &Weight::linear(1, 1)));
        assert!(check_multiplier(&Multiplier::finite([1, -2, 3]), &Weight::linear(1, 1)));
        assert!(check_multiplier(&Multiplier::constant(7), &Weight::linear(1, 1).with_prefix(&[7; 6])));
        assert!(!check_multiplier(&Multiplier::constant(7), &Weight::linear(1, 1)));
    }

    impl Weight {
        fn with_prefix(mut self, p: &[u64]) -> Self {
            self.prefix = p.iter().map(|&v| fin(v)).collect();
            self
        }
    }

    #[test]
    fn sign_examples() {
        let (p, m) = decompose_signs(&Multiplier::finite([3, -2, 0]));
        assert_eq!(p, Multiplier::finite([3, 0, 0]));
        assert_eq!(m, Multiplier::finite([0, 2, 0]));
        let (p, m) = decompose_signs(&Multiplier::zero());
        assert_eq!((p, m), (Multiplier::zero(), Multiplier::zero()));
        let (p, m) = decompose_signs(&Multiplier::constant(-4));
        assert_eq!((p.tail, m.tail), (MultiplierTail::Zero, MultiplierTail::Const(4.into())));
    }

    #[test]
    fn slice_examples() {
        let s = binary_slices(&Multiplier::finite([2, 0, 1]), 2).unwrap();
        assert_eq!(s, vec![Multiplier::finite([1, 0, 1]), Multiplier::finite([1, 0, 0])]);
        for sl in binary_slices(&Multiplier::zero(), 4).unwrap() {
            assert_eq!(sl, Multiplier::zero());
        }
        for sl in binary_slices(&Multiplier::constant(3), 3).unwrap() {
            assert_eq!(sl, Multiplier::constant(1));
        }
        assert!(binary_slices(&Multiplier::finite([-1]), 2).is_err());
        assert!(binary_slices(&Multiplier::constant(3), 2).is_err());
        assert!(binary_slices(&Multiplier::zero(), 0).is_err());
    }

    #[test]
    fn permutation_examples() {
        let zz: Vec<u64> = (0..6).map(|n| Permutation::ZigZag.apply(n)).collect();
        assert_eq!(zz, vec![1, 0, 3, 2, 5, 4]);
        assert_eq!(Permutation::Identity.apply(41), 41);
        assert_eq!(Permutation::ZigZag.inverse(), Permutation::ZigZag);
        for n in 0..=100 {
            assert_eq!(Permutation::ZigZag.apply(Permutation::ZigZag.apply(n)), n);
        }
        assert!(Permutation::table(vec![0, 2, 2]).is_err());
        assert!(Permutation::table(vec![1, 3]).is_err());
        let t = Permutation::table(vec![2, 0, 1]).unwrap();
        assert_eq!((t.apply(0), t.apply(1), t.apply(2), t.apply(9)), (2, 0, 1, 9));
        let c = Permutation::Composed(vec![t.clone(), Permutation::ZigZag]);
        assert_eq!(c.apply(0), t.apply(1));
    }

    #[test]
    fn compose_weight_examples() {
        let w = compose_weight(&Weight::linear(1, 1), &Permutation::ZigZag, 3);
        assert_eq!(w, vec![fin(2), fin(1), fin(4)]);
        assert!(compose_weight(&Weight::omega(), &Permutation::ZigZag, 50)
            .iter()
            .all(WeightValue::is_omega));
        assert!(compose_weight(&Weight::one(), &Permutation::table(vec![1, 0]).unwrap(), 10)
            .iter()
            .all(|v| *v == fin(1)));
    }

    #[test]
    fn selection_and_injection() {
        let s = Selection::new(vec![1, 4, 5], 3).unwrap();
        let image: Vec<u64> = (0..6).map(|n| s.apply(n)).collect();
        assert_eq!(image, vec![1, 4, 5, 8, 11, 14]);
        for (n, &i) in image.iter().enumerate() {
            assert_eq!(s.preimage(i), Some(n as u64));
        }
        assert_eq!(s.preimage(6), None);
        assert_eq!(s.preimage(0), None);
        assert!(Selection::new(vec![3, 3], 1).is_err());
        assert!(Selection::default().is_identity());

        let inj = Injection {
            sigma: Selection::new(vec![], 2).unwrap(),
            phi_hat: Permutation::ZigZag,
        };
        assert_eq!((0..4).map(|n| inj.apply(n)).collect::<Vec<_>>(), vec![1, 3, 5, 7]);
        let z2 = inj.spread_multiplier(&Multiplier::finite([7, 8]), 5);
        assert_eq!(z2, Multiplier::finite([7, 0, 8, 0, 0]));
    }

    #[test]
    fn serde_round_trip() {
        #[derive(Serialize, Deserialize, PartialEq, Debug)]
        struct Doc {
            weight: Weight,
            multiplier: Multiplier,
            permutation: Permutation,
        }
        let text = r#"
weight = { prefix = [3, "omega"], tail = { linear = [2, 1] } }
multiplier = { prefix = [1, -1, 2], tail = 0 }
permutation = { composed = ["zigzag", { table = [1, 0] }, "identity"] }
"#;
        let doc: Doc = toml::from_str(text).unwrap();
        assert_eq!(doc.weight.at(1), WeightValue::Omega);
        assert_eq!(doc.weight.at(5), fin(11));
        assert_eq!(doc.multiplier, Multiplier::finite([1, -1, 2]));
        let again: Doc = toml::from_str(&toml::to_string(&doc).unwrap()).unwrap();
        assert_eq!(again, doc);
        assert!(toml::from_str::<Doc>(&text.replace("[1, 0]", "[1, 1]")).is_err());
        let omega: Weight = toml::from_str("tail = \"omega\"").unwrap();
        assert_eq!(omega, Weight::omega());
    }

    fn weight() -> impl Strategy<Value = Weight> {
        let value = prop_oneof![4 => (1u64..12).prop_map(fin), 1 => Just(WeightValue::Omega)];
        let tail = prop_oneof![
            value.clone().prop_map(WeightTail::Const),
            (0u64..4, 1u64..12).prop_map(|(a, b)| WeightTail::Linear { a: a.into(), b: b.into() }),
        ];
        (prop::collection::vec(value, 0..5), tail).prop_map(|(p, t)| Weight::new(p, t).unwrap())
    }

    fn multiplier() -> impl Strategy<Value = Multiplier> {
        (prop::collection::vec(-12i64..=12, 0..8), -6i64..=6).prop_map(|(p, t)| Multiplier::new(p, t))
    }

    /// Brute-force oracle: compare on a long window. Every tail rule here is
    /// eventually monotone with slope at most 3, so a window well past the
    /// prefixes and crossing points decides the order.
    fn le_window(f: &Weight, g: &Weight, from: u64) -> bool {
        (from..200).all(|n| f.at(n) <= g.at(n))
    }

    proptest! {
        #[test]
        fn le_matches_window_oracle(f in weight(), g in weight()) {
            prop_assert_eq!(le(&f, &g), le_window(&f, &g, 0));
            prop_assert_eq!(le_star(&f, &g), le_window(&f, &g, 100));
        }

        #[test]
        fn order_laws(f in weight(), g in weight(), h in weight()) {
            if le(&f, &g) { prop_assert!(le_star(&f, &g)); }
            if le_star(&f, &g) && le_star(&g, &h) { prop_assert!(le_star(&f, &h)); }
            prop_assert!(le(&Weight::one(), &f));
            prop_assert!(le(&f, &Weight::omega()));
        }

        #[test]
        fn check_multiplier_matches_pointwise(z in multiplier(), f in weight()) {
            let oracle = (0..200).all(|n| f.at(n).dominates(&z.at(n)));
            prop_assert_eq!(check_multiplier(&z, &f), oracle);
        }

        #[test]
        fn sign_split_recombines(z in multiplier(), f in weight()) {
            let (p, m) = decompose_signs(&z);
            for n in 0..20 {
                prop_assert_eq!(p.at(n) - m.at(n), z.at(n));
                prop_assert!(!p.at(n).is_negative() && !m.at(n).is_negative());
            }
            if check_multiplier(&z, &f) {
                prop_assert!(check_multiplier(&p, &f) && check_multiplier(&m, &f));
            }
        }

        #[test]
        fn slices_sum_to_z(p in prop::collection::vec(0i64..=5, 0..8), t in 0i64..=5, k in 5u64..8) {
            let z = Multiplier::new(p, t);
            let slices = binary_slices(&z, k).unwrap();
            prop_assert_eq!(slices.len() as u64, k);
            for n in 0..12 {
                let sum: BigInt = slices.iter().map(|s| s.at(n)).sum();
                prop_assert_eq!(sum, z.at(n));
            }
            for s in &slices {
                prop_assert!(check_multiplier(s, &Weight::one()));
            }
        }

        #[test]
        fn inverse_undoes_apply(
            table in Just((0u64..12).collect::<Vec<_>>()).prop_shuffle(),
            kind in 0usize..4,
        ) {
            let t = Permutation::table(table).unwrap();
            let phi = match kind {
                0 => Permutation::Identity,
                1 => Permutation::ZigZag,
                2 => t,
                _ => Permutation::Composed(vec![t, Permutation::ZigZag, Permutation::Identity]),
            };
            let inv = phi.inverse();
            for n in 0..=1000 {
                prop_assert_eq!(inv.apply(phi.apply(n)), n);
                prop_assert_eq!(phi.apply(inv.apply(n)), n);
            }
        }
    }
}

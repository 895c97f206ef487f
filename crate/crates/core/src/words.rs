//! Words of the free group over the ordered alphabet `0, 1, 2, ...`.
//!
//! A [`Word`] is always stored in canonical form: a list of monoms with
//! non-zero powers and pairwise distinct neighbouring letters. Every
//! operation returns canonical words, so structural equality is group
//! equality.
//!
//! Literal syntax (shared with the CLI and trace files):
//!
//! ```text
//! word  := "e" | monom ("." monom)*
//! monom := letter ("^" power)?
//! ```
//!
//! e.g. `0^2.1^-3.0`. Parsing re-reduces adjacent duplicates and rejects zero
//! powers.

use std::fmt;
use std::ops::{Mul, MulAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::DiscreteGroup;
use crate::error::{Error, Result};
use crate::extrema::FdSeq;

/// A letter `n` of the alphabet; ordered by its index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Letter(pub u64);

impl Letter {
    pub fn index(self) -> u64 {
        self.0
    }
}

impl From<u64> for Letter {
    fn from(n: u64) -> Self {
        Letter(n)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `letter^power` with `power != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monom {
    pub letter: Letter,
    pub power: BigInt,
}

impl Monom {
    pub fn new(letter: impl Into<Letter>, power: impl Into<BigInt>) -> Self {
        Monom {
            letter: letter.into(),
            power: power.into(),
        }
    }

    pub fn inverse(&self) -> Monom {
        Monom {
            letter: self.letter,
            power: -&self.power,
        }
    }

    /// Monoms in the same letter are dependent; they merge in a product.
    pub fn is_dependent(&self, other: &Monom) -> bool {
        self.letter == other.letter
    }
}

impl fmt::Display for Monom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.power.is_one() {
            write!(f, "{}", self.letter)
        } else {
            write!(f, "{}^{}", self.letter, self.power)
        }
    }
}

/// A canonically reduced element of the free group.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word {
    monoms: Vec<Monom>,
}

impl Word {
    /// The empty word `e`.
    pub fn identity() -> Self {
        Word { monoms: Vec::new() }
    }

    /// A single monom; `power == 0` gives `e`.
    pub fn monom(letter: impl Into<Letter>, power: impl Into<BigInt>) -> Self {
        let mut w = Word::identity();
        w.push_monom(letter.into(), power.into());
        w
    }

    /// Reduce an arbitrary list of `(letter, power)` pairs to canonical form,
    /// interpreting it as a left-to-right product.
    pub fn from_monoms<L, P, I>(raw: I) -> Self
    where
        L: Into<Letter>,
        P: Into<BigInt>,
        I: IntoIterator<Item = (L, P)>,
    {
        let mut w = Word::identity();
        for (letter, power) in raw {
            w.push_monom(letter.into(), power.into());
        }
        w
    }

    /// Right-multiply by a single monom using stack reduction.
    pub fn push_monom(&mut self, letter: Letter, power: BigInt) {
        if power.is_zero() {
            return;
        }
        match self.monoms.last_mut() {
            Some(top) if top.letter == letter => {
                top.power += power;
                if top.power.is_zero() {
                    self.monoms.pop();
                }
            }
            _ => self.monoms.push(Monom { letter, power }),
        }
    }

    pub fn monoms(&self) -> &[Monom] {
        &self.monoms
    }

    /// `l_w`, the number of monoms.
    pub fn len(&self) -> usize {
        self.monoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monoms.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.monoms.is_empty()
    }

    /// `w[i]` with 1-based indexing.
    pub fn monom_at(&self, i: usize) -> Result<&Monom> {
        if i == 0 || i > self.monoms.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.monoms.len(),
            });
        }
        Ok(&self.monoms[i - 1])
    }

    /// The letter sequence `sigma(w)`.
    pub fn support(&self) -> FdSeq {
        FdSeq::from_canonical(self.monoms.iter().map(|m| m.letter).collect())
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.monoms.iter().map(|m| m.letter)
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.clone();
        out *= other;
        out
    }

    pub fn inv(&self) -> Word {
        Word {
            monoms: self.monoms.iter().rev().map(Monom::inverse).collect(),
        }
    }

    /// `w^n`. Uses the conjugation `w = d c(w) d^-1`: for a core of length at
    /// most one the result is a single rescaled monom between `d` and `d^-1`.
    pub fn pow(&self, n: impl Into<BigInt>) -> Word {
        let n: BigInt = n.into();
        if n.is_zero() || self.is_identity() {
            return Word::identity();
        }
        if n.is_negative() {
            return self.inv().pow(-n);
        }
        let k = self.cancellation_core(self).len();
        let prefix = &self.monoms[..k];
        let core = &self.monoms[k..self.monoms.len() - k];
        let mut out = Word {
            monoms: prefix.to_vec(),
        };
        if core.len() == 1 {
            out.push_monom(core[0].letter, &core[0].power * &n);
        } else {
            let reps = n
                .to_u64()
                .expect("exponent too large for a word with a core of length >= 2");
            for _ in 0..reps {
                for m in core {
                    out.push_monom(m.letter, m.power.clone());
                }
            }
        }
        for m in prefix.iter().rev() {
            out.push_monom(m.letter, -&m.power);
        }
        out
    }

    /// `c_{v,w}` with `v = self`: the longest initial subword `u` of `w` such
    /// that `u^-1` is a final subword of `v`.
    pub fn cancellation_core(&self, w: &Word) -> Word {
        let v = &self.monoms;
        let k = w
            .monoms
            .iter()
            .zip(v.iter().rev())
            .take_while(|(a, b)| a.letter == b.letter && a.power == -&b.power)
            .count();
        Word {
            monoms: w.monoms[..k].to_vec(),
        }
    }

    /// `c(w) = d^-1 w d` with `d = c_{w,w}`.
    pub fn cyclic_conjugate(&self) -> Word {
        let d = self.cancellation_core(self);
        d.inv().mul(self).mul(&d)
    }

    /// True when `self * other` involves no cancellation of any kind.
    pub fn is_cancellation_free_with(&self, other: &Word) -> bool {
        match (self.monoms.last(), other.monoms.first()) {
            (Some(a), Some(b)) => a.letter != b.letter,
            _ => true,
        }
    }

    /// True when `u` equals `w[i] ... w[l_w]` for some `i`; `e` is always final.
    pub fn has_final_subword(&self, u: &Word) -> bool {
        u.len() <= self.len() && self.monoms[self.len() - u.len()..] == u.monoms[..]
    }

    pub fn has_initial_subword(&self, u: &Word) -> bool {
        u.len() <= self.len() && self.monoms[..u.len()] == u.monoms[..]
    }

    /// The subword `w[from] ... w[to]`, 1-based and inclusive; empty if `from > to`.
    pub fn subword(&self, from: usize, to: usize) -> Word {
        if from > to || from == 0 {
            return Word::identity();
        }
        let to = to.min(self.len());
        Word {
            monoms: self.monoms[from - 1..to].to_vec(),
        }
    }
}

impl MulAssign<&Word> for Word {
    fn mul_assign(&mut self, rhs: &Word) {
        for m in &rhs.monoms {
            self.push_monom(m.letter, m.power.clone());
        }
    }
}

impl Mul<&Word> for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        Word::mul(self, rhs)
    }
}

impl DiscreteGroup for Word {
    fn identity() -> Self {
        Word::identity()
    }

    fn op(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn inverse(&self) -> Self {
        self.inv()
    }

    fn power(&self, z: &BigInt) -> Self {
        self.pow(z.clone())
    }

    fn is_identity(&self) -> bool {
        self.monoms.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monoms.is_empty() {
            return f.write_str("e");
        }
        for (i, m) in self.monoms.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(input: &str) -> Result<Word> {
        let fail = |reason: &str| Error::ParseWord {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let text = input.trim();
        if text == "e" {
            return Ok(Word::identity());
        }
        if text.is_empty() {
            return Err(fail("empty literal"));
        }
        let mut w = Word::identity();
        for part in text.split('.') {
            let (letter, power) = match part.split_once('^') {
                Some((l, p)) => (l, Some(p)),
                None => (part, None),
            };
            if letter.is_empty() || !letter.bytes().all(|b| b.is_ascii_digit()) {
                return Err(fail(&format!("bad letter {letter:?}")));
            }
            let letter: u64 = letter
                .parse()
                .map_err(|_| fail(&format!("letter {letter:?} out of range")))?;
            let power = match power {
                None => BigInt::one(),
                Some(p) => {
                    let digits = p.strip_prefix('-').unwrap_or(p);
                    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(fail(&format!("bad power {p:?}")));
                    }
                    let z: BigInt = p.parse().map_err(|_| fail("bad power"))?;
                    if z.is_zero() {
                        return Err(fail("zero power"));
                    }
                    z
                }
            };
            w.push_monom(Letter(letter), power);
        }
        Ok(w)
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for Word {
    type Error = Error;

    fn try_from(s: String) -> Result<Word> {
        s.parse()
    }
}

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::is_prime;
use crate::random::{random_multiplier, rng};
use crate::weights::{Injection, Multiplier, Permutation, Selection, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupId {
    /// The window of `F(N)^N` carrying the subgroup `H`.
    #[serde(rename = "H")]
    H,
    #[serde(rename = "bounded")]
    Bounded,
    #[serde(rename = "padic")]
    Padic,
    #[serde(rename = "perm")]
    Perm,
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupId::H => "H",
            GroupId::Bounded => "bounded",
            GroupId::Padic => "padic",
            GroupId::Perm => "perm",
        })
    }
}

/// Sequence generators. Each belongs to one model group except `constant`,
/// which repeats a fixed non-identity element of any model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceKind {
    /// `a_n = g_{y_n}` in `H`.
    Gy,
    /// `a_n = g_{y_n + y_{n+1}}` in `H`; coordinates past `n` have cyclic core length 2.
    GyPairs,
    /// `a_n = 1` at coordinate `n`, bounded model.
    Basis,
    /// `a_n = p^n`, p-adic model.
    Powers,
    /// `a_n = b_n`, the transposition of `n` and `n + 1`.
    Transpositions,
    Constant,
}

impl SequenceKind {
    pub fn fits(self, group: GroupId) -> bool {
        matches!(
            (self, group),
            (SequenceKind::Constant, _)
                | (SequenceKind::Gy | SequenceKind::GyPairs, GroupId::H)
                | (SequenceKind::Basis, GroupId::Bounded)
                | (SequenceKind::Powers, GroupId::Padic)
                | (SequenceKind::Transpositions, GroupId::Perm)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomMultiplier {
    /// Entries are drawn uniformly from `-bound..=bound`.
    pub bound: i64,
    /// Length of the support `0..support`.
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MultiplierSpec {
    Random { random: RandomMultiplier },
    Explicit(Multiplier),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PadicParams {
    pub p: u64,
}

fn default_window() -> u64 {
    30
}

/// One experiment: the product `prod_{n<M} a_{phi(n)}^{z(n)}` in a model group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub group: GroupId,
    pub sequence: SequenceKind,
    #[serde(default)]
    pub seed: u64,
    /// Number of steps `M`.
    pub horizon: u64,
    /// Probe window `I`: coordinates (or points) `0..I`.
    #[serde(default = "default_window")]
    pub window: u64,
    /// Deepest basic subgroup level examined.
    #[serde(default)]
    pub depth: u64,
    #[serde(default = "Weight::omega")]
    pub weight: Weight,
    pub multiplier: MultiplierSpec,
    #[serde(default)]
    pub permutation: Permutation,
    #[serde(default, skip_serializing_if = "Selection::is_identity")]
    pub selection: Selection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub padic: Option<PadicParams>,
}

/// Byte offset to 1-based line number.
fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

impl ExperimentSpec {
    /// Parse and validate a config file. Syntax errors carry line numbers.
    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: ExperimentSpec = toml::from_str(text).map_err(|e| Error::Config {
            line: e.span().map_or(0, |s| line_of(text, s.start)),
            message: e.message().to_string(),
        })?;
        spec.validate()?;
        Ok(spec)
    }

    /// Canonical text form; `from_toml(to_toml(s)) == s` and the text is a
    /// fixed point of that round trip.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("experiment specs always serialize")
    }

    pub fn p(&self) -> u64 {
        self.padic.map_or(3, |pp| pp.p)
    }

    pub fn injection(&self) -> Injection {
        Injection {
            sigma: self.selection.clone(),
            phi_hat: self.permutation.clone(),
        }
    }

    /// The multiplier actually applied, drawing the random one from `seed`.
    pub fn resolved_multiplier(&self) -> Multiplier {
        match &self.multiplier {
            MultiplierSpec::Explicit(z) => z.clone(),
            MultiplierSpec::Random { random } => {
                random_multiplier(&mut rng(self.seed), random.bound, random.support)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidExperiment(m));
        if !self.sequence.fits(self.group) {
            return bad(format!(
                "sequence {:?} is not available in group {}",
                self.sequence, self.group
            ));
        }
        if self.horizon == 0 {
            return bad("horizon must be positive".into());
        }
        if self.group != GroupId::Padic && self.window == 0 {
            return bad("window must be positive".into());
        }
        if self.group != GroupId::Padic && self.depth > self.window {
            return bad(format!("depth {} exceeds window {}", self.depth, self.window));
        }
        if self.group == GroupId::Padic && !is_prime(self.p()) {
            return bad(format!("p = {} is not prime", self.p()));
        }
        if self.padic.is_some() && self.group != GroupId::Padic {
            return bad("[padic] only applies to group \"padic\"".into());
        }
        if let MultiplierSpec::Random { random } = &self.multiplier {
            if random.bound < 0 {
                return bad("random multiplier bound must be non-negative".into());
            }
        }
        let z = self.resolved_multiplier();
        let phi = self.injection();
        // |z(n)| <= f(phi(n)) on the steps that are run
        for n in 0..self.horizon {
            let zn: BigInt = z.at(n);
            if !self.weight.at(phi.apply(n)).dominates(&zn) {
                return bad(format!(
                    "|z({n})| = {} exceeds (f . phi)({n}) = {}",
                    zn,
                    self.weight.at(phi.apply(n))
                ));
            }
        }
        Ok(())
    }
}

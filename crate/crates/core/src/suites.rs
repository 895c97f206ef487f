//! Seeded property suites behind `prodlab selftest`.
//!
//! Each suite draws its cases from its own ChaCha8 stream derived from the
//! run seed, so adding cases to one suite never shifts another.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::extrema::{count_extrema, iota_injection, zigzag_enumeration, FdSeq};
use crate::groups::{
    delta_stability_check, group_law_violation, h_bound_certificates, BoundedGroup,
    BoundedIntVec, FinPerm, FreeVecGroup, PadicGroup, PermGroup,
};
use crate::lab::{
    linear_null_shortcut, run_experiment, tap_witness_for_h, technical_check, unbounded_witness,
    BasisSequence, ExperimentSpec, HSequence, MultiplierSpec, TapOutcome, UnboundedOutcome,
};
use crate::random::{mountain_instance, random_hsymbolic, random_multiplier, random_table, random_word, rng, Prng};
use crate::seminorms::{mountain_check, seminorm_axiom_check, AbsValue, Seminorm, WordSeminorm};
use crate::weights::{binary_slices, decompose_signs, le, le_star, Multiplier, Weight, WeightTail, WeightValue};
use crate::words::{Letter, Word};
use crate::Error;

/// Deliberate defects used to confirm the suites can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mutant {
    /// `eta` counting interior extrema only.
    EtaNoEndpoints,
}

impl FromStr for Mutant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "eta-no-endpoints" => Ok(Mutant::EtaNoEndpoints),
            _ => Err(Error::InvalidExperiment(format!("unknown mutant {s:?}"))),
        }
    }
}

impl fmt::Display for Mutant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("eta-no-endpoints")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: u64,
    pub violations: u64,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<24} cases={:<6} violations={}",
            self.name, self.cases, self.violations
        )?;
        if let Some(msg) = &self.first_failure {
            write!(f, " first: {msg}")?;
        }
        Ok(())
    }
}

/// `eta` as the suites see it, possibly mutated.
#[derive(Debug, Clone, Copy)]
struct Eta(Option<Mutant>);

impl Eta {
    fn of(&self, w: &Word) -> usize {
        let s = w.support().naturals();
        let all = count_extrema(&s);
        match self.0 {
            None => all,
            Some(Mutant::EtaNoEndpoints) => all.saturating_sub(s.len().min(2)),
        }
    }
}

impl Seminorm<Word> for Eta {
    fn name(&self) -> String {
        "eta".into()
    }

    fn eval(&self, w: &Word) -> BigUint {
        BigUint::from(self.of(w))
    }
}

struct Tally {
    name: &'static str,
    cases: u64,
    violations: u64,
    first_failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            violations: 0,
            first_failure: None,
        }
    }

    /// Record one case; `check` returns the violation message, if any.
    fn case(&mut self, check: impl FnOnce() -> Option<String>) {
        self.cases += 1;
        if let Some(msg) = check() {
            self.violations += 1;
            self.first_failure.get_or_insert(msg);
        }
    }

    fn done(self) -> SuiteResult {
        SuiteResult {
            name: self.name.into(),
            cases: self.cases,
            violations: self.violations,
            first_failure: self.first_failure,
        }
    }
}

fn fail(cond: bool, msg: impl FnOnce() -> String) -> Option<String> {
    (!cond).then(msg)
}

fn words(r: &mut Prng, n: u64) -> SuiteResult {
    let mut t = Tally::new("words");
    for _ in 0..n {
        let (a, b, c) = (random_word(r, 8, 12, 3), random_word(r, 8, 12, 3), random_word(r, 8, 12, 3));
        let (p, q) = (r.random_range(-4i64..=4), r.random_range(-4i64..=4));
        t.case(|| {
            if a.mul(&b).mul(&c) != a.mul(&b.mul(&c)) {
                return Some(format!("associativity fails for {a}, {b}, {c}"));
            }
            if !a.mul(&a.inv()).is_identity() {
                return Some(format!("{a} times its inverse is not e"));
            }
            if a.to_string().parse::<Word>().ok().as_ref() != Some(&a) {
                return Some(format!("{a} does not reparse"));
            }
            fail(a.pow(p).mul(&a.pow(q)) == a.pow(p + q), || format!("{a}^{p} {a}^{q} != {a}^{}", p + q))
        });
    }
    t.done()
}

fn random_fd_seq(r: &mut Prng, alphabet: u64, max_len: usize) -> Vec<u64> {
    let len = r.random_range(1..=max_len);
    let mut s: Vec<u64> = Vec::with_capacity(len);
    while s.len() < len {
        let x = r.random_range(0..alphabet);
        if s.last() != Some(&x) {
            s.push(x);
        }
    }
    s
}

fn extrema(r: &mut Prng, n: u64) -> SuiteResult {
    let mut t = Tally::new("extrema");
    for _ in 0..n {
        let s = random_fd_seq(r, 7, 10);
        let selected: Vec<usize> = (0..s.len()).filter(|_| r.random_bool(0.6)).collect();
        t.case(|| {
            let sub: Vec<u64> = selected.iter().map(|&i| s[i]).collect();
            if sub.is_empty() || sub.windows(2).any(|w| w[0] == w[1]) {
                return None;
            }
            if count_extrema(&sub) > count_extrema(&s) {
                return Some(format!("|Ext({sub:?})| > |Ext({s:?})|"));
            }
            let fd = FdSeq::from_naturals(&s).expect("distinct neighbours");
            let iota = match iota_injection(&fd, &selected) {
                Ok(m) => m,
                Err(e) => return Some(format!("iota on {s:?} / {selected:?}: {e}")),
            };
            let ext: BTreeSet<usize> = fd.extrema().ext.into_iter().collect();
            let image: BTreeSet<usize> = iota.values().copied().collect();
            fail(image.len() == iota.len() && image.is_subset(&ext), || {
                format!("iota on {s:?} / {selected:?} is not an injection into Ext")
            })
        });
    }
    t.done()
}

fn seminorm_axioms(r: &mut Prng, n: u64, eta: Eta) -> SuiteResult {
    let mut t = Tally::new("seminorm-axioms");
    for _ in 0..n {
        let (a, b) = (random_word(r, 8, 12, 3), random_word(r, 8, 12, 3));
        let x = Letter(r.random_range(0..8));
        let m = r.random_range(0..40usize);
        t.case(|| {
            let rep = seminorm_axiom_check(&WordSeminorm::Mu(x), &a, &b);
            if !rep.passed() {
                return Some(format!("mu_{x} on ({a}, {b}): {rep}"));
            }
            let rep = seminorm_axiom_check(&eta, &a, &b);
            if !rep.passed() {
                return Some(format!("eta on ({a}, {b}): {rep}"));
            }
            if !a.is_identity() && eta.of(&a) == 0 {
                return Some(format!("eta({a}) = 0"));
            }
            let zz = Word::from_monoms(zigzag_enumeration(m).naturals().into_iter().map(|k| (k, 1)));
            fail(eta.of(&zz) == m + 1, || format!("eta of the zig-zag word of length {} is {}", m + 1, eta.of(&zz)))
        });
    }
    t.done()
}

fn power_bounds(r: &mut Prng, n: u64, eta: Eta) -> SuiteResult {
    let mut t = Tally::new("power-bounds");
    for _ in 0..n {
        let w = random_word(r, 6, 8, 3);
        let k = r.random_range(1..=20u64);
        t.case(|| {
            if w.is_identity() {
                return None;
            }
            let (ew, ep) = (eta.of(&w), eta.of(&w.pow(k)));
            if w.cyclic_conjugate().len() > 1 {
                fail(ep as u64 >= 2 * k, || format!("eta(({w})^{k}) = {ep} < {}", 2 * k))
            } else {
                fail(ep == ew, || format!("eta(({w})^{k}) = {ep} != eta({w}) = {ew}"))
            }
        });
    }
    t.done()
}

fn mountain(r: &mut Prng, n: u64) -> SuiteResult {
    let mut t = Tally::new("mountain");
    for _ in 0..n {
        let m = r.random_range(0..=6);
        let inst = mountain_instance(r, m);
        t.case(|| match mountain_check(&inst) {
            Ok(v) if v.verdict => None,
            Ok(v) => Some(format!("clauses {:?} on {:?}", v.clauses, inst.words)),
            Err(e) => Some(e.to_string()),
        });
    }
    t.done()
}

fn random_weight(r: &mut Prng) -> Weight {
    let prefix: Vec<WeightValue> = (0..r.random_range(0..5))
        .map(|_| {
            if r.random_bool(0.2) {
                WeightValue::Omega
            } else {
                WeightValue::finite(r.random_range(1..=9))
            }
        })
        .collect();
    let tail = match r.random_range(0..3) {
        0 => WeightTail::Const(WeightValue::Omega),
        1 => WeightTail::Const(WeightValue::finite(r.random_range(1..=9))),
        _ => WeightTail::Linear {
            a: BigUint::from(r.random_range(0..3u32)),
            b: BigUint::from(r.random_range(1..5u32)),
        },
    };
    Weight::new(prefix, tail).expect("positive values")
}

fn weights(r: &mut Prng, n: u64) -> SuiteResult {
    let mut t = Tally::new("weights");
    for _ in 0..n {
        let (f, g) = (random_weight(r), random_weight(r));
        let z = random_multiplier(r, 8, 8);
        let k = r.random_range(1..=8u64);
        let size = r.random_range(1..12);
        let phi = random_table(r, size);
        t.case(|| {
            if !le(&f, &f) || !le_star(&f, &f) {
                return Some(format!("{f} is not below itself"));
            }
            if le(&f, &g) && !le_star(&f, &g) {
                return Some(format!("{f} <= {g} but not eventually"));
            }
            let (plus, minus) = decompose_signs(&z);
            if (0..10).any(|i| plus.at(i) - minus.at(i) != z.at(i)) {
                return Some(format!("sign split of {z}"));
            }
            if z.sup_abs() <= BigUint::from(k) {
                let slices = binary_slices(&plus, k).expect("in range");
                let sum = (0..10).all(|i| {
                    slices.iter().map(|s| s.at(i)).sum::<BigInt>() == plus.at(i)
                });
                if !sum {
                    return Some(format!("binary slices of {plus} do not sum back"));
                }
            }
            let inv = phi.inverse();
            fail((0..20).all(|i| inv.apply(phi.apply(i)) == i), || format!("{phi} inverse"))
        });
    }
    t.done()
}

fn group_laws(r: &mut Prng, n: u64) -> SuiteResult {
    let mut t = Tally::new("group-laws");
    let h = FreeVecGroup { window: 8 };
    let padic = PadicGroup::new(3).expect("prime");
    for _ in 0..n {
        let hs: Vec<_> = (0..3).map(|_| random_hsymbolic(r, 3, 6, 3).to_window(8)).collect();
        let bs: Vec<BoundedIntVec> = (0..3)
            .map(|_| {
                BoundedIntVec::new(
                    (0..r.random_range(0..6)).map(|_| BigInt::from(r.random_range(-9..=9))).collect(),
                    BigInt::from(r.random_range(-3..=3)),
                )
            })
            .collect();
        let ps: Vec<_> = (0..3).map(|_| padic.element(r.random_range(-1000i64..=1000) * 3i64.pow(r.random_range(0..4)))).collect();
        let fs: Vec<FinPerm> = (0..3)
            .map(|_| {
                let table = random_table(r, 8);
                let images: Vec<u64> = (0..8).map(|k| table.apply(k)).collect();
                FinPerm::from_images(&images).expect("permutation")
            })
            .collect();
        t.case(|| {
            group_law_violation(&h, &hs[0], &hs[1], &hs[2], 9)
                .map(|v| format!("H: {v}"))
                .or_else(|| group_law_violation(&BoundedGroup, &bs[0], &bs[1], &bs[2], 8).map(|v| format!("bounded: {v}")))
                .or_else(|| group_law_violation(&padic, &ps[0], &ps[1], &ps[2], 8).map(|v| format!("padic: {v}")))
                .or_else(|| group_law_violation(&PermGroup, &fs[0], &fs[1], &fs[2], 9).map(|v| format!("perm: {v}")))
        });
    }
    t.done()
}

fn h_bounds(r: &mut Prng, n: u64) -> SuiteResult {
    let mut t = Tally::new("h-boundedness");
    let letters: Vec<Letter> = (0..8).map(Letter).collect();
    for _ in 0..n {
        let h = random_hsymbolic(r, 4, 6, 5);
        t.case(|| {
            let rep = h_bound_certificates(&h, 16, &letters);
            fail(rep.consistent, || format!("certificates exceeded: {rep:?}"))
        });
    }
    t.done()
}

fn delta_stability(r: &mut Prng, n: u64) -> SuiteResult {
    let mut t = Tally::new("delta-stability");
    for _ in 0..n {
        let h = random_hsymbolic(r, 4, 6, 5);
        let j = r.random_range(0..8);
        t.case(|| fail(delta_stability_check(&h, j, 16), || format!("delta_{j} unstable on {h:?}")));
    }
    t.done()
}

fn witnesses(r: &mut Prng, n: u64) -> SuiteResult {
    let mut t = Tally::new("witness-validity");
    for _ in 0..n {
        let (a, b) = (r.random_range(1..4u64), r.random_range(1..4u64));
        let depth = r.random_range(0..10usize);
        let tap_depth = r.random_range(1..16usize);
        t.case(|| {
            let f = Weight::linear(a, b);
            let seq = BasisSequence { terms: 400, window: 400 };
            match unbounded_witness(&f, &seq, &AbsValue, depth, 64) {
                Ok(UnboundedOutcome::Found(w)) => {
                    if !technical_check(&w, &w.weight, &seq, &AbsValue).passed() {
                        return Some(format!("unbounded witness for {f} fails its check"));
                    }
                }
                other => return Some(format!("no witness for {f}: {other:?}")),
            }
            let elements: Vec<_> = (0..24).map(crate::groups::HSymbolic::gy).collect();
            match tap_witness_for_h(&elements, tap_depth, 24) {
                Ok(TapOutcome::Thin { witness, .. }) => {
                    let seq = HSequence::new(elements, 24);
                    fail(technical_check(&witness, &Weight::omega(), &seq, &WordSeminorm::Eta).passed(), || {
                        format!("thin witness at depth {tap_depth} fails its check")
                    })
                }
                other => Some(format!("thin witness at depth {tap_depth}: {other:?}")),
            }
        });
    }
    t.done()
}

const ABELIAN: [&str; 2] = [
    "group = \"bounded\"\nsequence = \"basis\"\nhorizon = 24\nwindow = 16\ndepth = 4\nmultiplier = { tail = 0 }\n",
    "group = \"padic\"\nsequence = \"powers\"\nhorizon = 24\ndepth = 4\nmultiplier = { tail = 0 }\n",
];

fn rearrangement(r: &mut Prng, n: u64) -> SuiteResult {
    let mut t = Tally::new("rearrangement");
    for _ in 0..n {
        let text = ABELIAN[r.random_range(0..2)];
        let z = random_multiplier(r, 50, 12);
        let phi = random_table(r, 12);
        t.case(|| {
            let mut plain = ExperimentSpec::from_toml(text).expect("fixture");
            let mut moved = plain.clone();
            plain.multiplier = MultiplierSpec::Explicit(z.clone());
            moved.multiplier = MultiplierSpec::Explicit(Multiplier::finite((0..12).map(|k| z.at(phi.apply(k)))));
            moved.permutation = phi.clone();
            let (a, b) = match (run_experiment(&plain), run_experiment(&moved)) {
                (Ok(a), Ok(b)) => (a, b),
                (a, b) => return Some(format!("run failed: {:?} {:?}", a.err(), b.err())),
            };
            let last = |tr: &crate::lab::TraceReport| {
                let m = tr.spec.horizon - 1;
                tr.steps.iter().filter(|s| s.m == m).map(|s| s.rendered.clone()).collect::<Vec<_>>()
            };
            let (la, lb) = (last(&a), last(&b));
            let both: Vec<u64> = a
                .stabilization
                .settled
                .iter()
                .map(|&(c, _)| c)
                .filter(|c| b.stabilization.settled.iter().any(|&(d, _)| d == *c))
                .collect();
            let probe = |l: &[String], c: u64| l.get(c as usize).or(l.first()).cloned();
            fail(both.iter().all(|&c| probe(&la, c) == probe(&lb, c)), || {
                format!("rearranged limit differs under {phi} for {z}")
            })
        });
    }
    t.done()
}

fn null_shortcut(r: &mut Prng, n: u64) -> SuiteResult {
    let mut t = Tally::new("null-shortcut");
    for _ in 0..n {
        let z = random_multiplier(r, 1_000_000_000, 32);
        let size = r.random_range(1..8);
        let phi = random_table(r, size);
        t.case(|| {
            let mut spec = ExperimentSpec::from_toml(
                "group = \"padic\"\nsequence = \"powers\"\nhorizon = 32\ndepth = 10\nmultiplier = { tail = 0 }\n",
            )
            .expect("fixture");
            spec.multiplier = MultiplierSpec::Explicit(z.clone());
            spec.permutation = phi.clone();
            let (cut, trace) = match (linear_null_shortcut(&spec), run_experiment(&spec)) {
                (Ok(c), Ok(t)) => (c, t),
                (c, t) => return Some(format!("run failed: {:?} {:?}", c.err(), t.err())),
            };
            fail(cut.agrees_with(&trace.cauchy), || format!("shortcut disagrees under {phi}"))
        });
    }
    t.done()
}

/// Run every suite with `cases` draws each. The heavier experiment suites
/// (witness validity, rearrangement, null shortcut) take one case per ten.
pub fn run_suites(seed: u64, cases: u64, mutant: Option<Mutant>) -> Vec<SuiteResult> {
    let eta = Eta(mutant);
    let light = cases;
    let heavy = cases.div_ceil(10);
    let stream = |k: u64| rng(seed ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    vec![
        words(&mut stream(1), light),
        extrema(&mut stream(2), light),
        seminorm_axioms(&mut stream(3), light, eta),
        power_bounds(&mut stream(4), light, eta),
        mountain(&mut stream(5), light),
        weights(&mut stream(6), light),
        group_laws(&mut stream(7), light),
        h_bounds(&mut stream(8), light),
        delta_stability(&mut stream(9), light),
        witnesses(&mut stream(10), heavy),
        rearrangement(&mut stream(11), heavy),
        null_shortcut(&mut stream(12), heavy),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass() {
        let results = run_suites(42, 60, None);
        for r in &results {
            assert!(r.passed(), "{r}");
            assert!(r.cases > 0);
        }
        assert!(run_suites(1, 0, None).iter().all(|r| r.cases == 0 && r.passed()));
    }

    #[test]
    fn mutant_is_caught() {
        let results = run_suites(42, 30, Some(Mutant::EtaNoEndpoints));
        assert!(results.iter().any(|r| !r.passed()));
    }
}

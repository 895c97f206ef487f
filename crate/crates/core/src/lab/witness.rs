use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{abs_big, DiscreteGroup};
use crate::error::{Error, Result};
use crate::extrema::zigzag;
use crate::groups::{h_bound_certificates, t_of, HSymbolic};
use crate::seminorms::{mu, AbsValue, Seminorm, WordSeminorm};
use crate::weights::{Weight, WeightValue};
use crate::words::{Letter, Word};

/// A sequence `h_0, h_1, ...` in a power `D^I` of a discrete group, seen
/// through finitely many terms and coordinates.
pub trait CoordinateSequence<N: Seminorm<Self::Coord>> {
    type Coord: DiscreteGroup;

    fn term(&self, n: u64, i: u64) -> Self::Coord;
    /// Terms available to a search.
    fn terms(&self) -> u64;
    /// Coordinates `0..window` available to a search.
    fn window(&self) -> u64;
    /// Certified `s` with `nu(prod_j h_{n_j}^{z_j}(i)) <= s` at every coordinate.
    fn sup_certificate(&self, nu: &N, factors: &[(u64, BigInt)]) -> BigUint;
    /// Certified `C` with `nu(h_n(i)) <= C` for all `n` and `i`, if one is known.
    fn uniform_bound(&self, nu: &N) -> Option<BigUint>;
}

/// The basis `a_n = 1` at `n`, `0` elsewhere, of the bounded integer
/// sequences, with `nu = |.|` per coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisSequence {
    pub terms: u64,
    pub window: u64,
}

impl CoordinateSequence<AbsValue> for BasisSequence {
    type Coord = BigInt;

    fn term(&self, n: u64, i: u64) -> BigInt {
        if n == i {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    }

    fn terms(&self) -> u64 {
        self.terms
    }

    fn window(&self) -> u64 {
        self.window
    }

    /// Exact: the product is `sum z_j` at coordinate `n_j`, zero elsewhere.
    fn sup_certificate(&self, _nu: &AbsValue, factors: &[(u64, BigInt)]) -> BigUint {
        let mut at: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (n, z) in factors {
            *at.entry(*n).or_default() += z;
        }
        at.values().map(abs_big).max().unwrap_or_default()
    }

    fn uniform_bound(&self, _nu: &AbsValue) -> Option<BigUint> {
        Some(BigUint::one())
    }
}

/// Finitely many symbolic elements of `H`, evaluated on coordinates `0..window`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HSequence {
    pub elements: Vec<HSymbolic>,
    coords: Vec<Vec<Word>>,
}

impl HSequence {
    pub fn new(elements: Vec<HSymbolic>, window: u64) -> Self {
        let coords = elements
            .iter()
            .map(|h| (0..window).map(|i| h.eval(i)).collect())
            .collect();
        HSequence { elements, coords }
    }

    pub fn gy(terms: u64, window: u64) -> Self {
        HSequence::new((0..terms).map(HSymbolic::gy).collect(), window)
    }

    fn term_bound(&self, n: u64, nu: &WordSeminorm) -> BigUint {
        let h = &self.elements[n as usize];
        match nu {
            WordSeminorm::Eta => BigUint::from(h_bound_certificates(h, 0, &[]).eta_certificate),
            WordSeminorm::Mu(x) => h_bound_certificates(h, 0, &[*x]).mu_certificates[0].1.clone(),
        }
    }
}

impl CoordinateSequence<WordSeminorm> for HSequence {
    type Coord = Word;

    fn term(&self, n: u64, i: u64) -> Word {
        match self.coords[n as usize].get(i as usize) {
            Some(w) => w.clone(),
            None => self.elements[n as usize].eval(i),
        }
    }

    fn terms(&self) -> u64 {
        self.elements.len() as u64
    }

    fn window(&self) -> u64 {
        self.coords.first().map_or(0, |c| c.len() as u64)
    }

    /// `sum_j |z_j| * C_j` with `C_j` the symbolic certificate of `h_{n_j}`.
    fn sup_certificate(&self, nu: &WordSeminorm, factors: &[(u64, BigInt)]) -> BigUint {
        factors
            .iter()
            .map(|(n, z)| abs_big(z) * self.term_bound(*n, nu))
            .sum()
    }

    fn uniform_bound(&self, _nu: &WordSeminorm) -> Option<BigUint> {
        None
    }
}

/// Data for the non-productivity argument: terms `a_m = h_{n_m}`, exponents
/// `z_m`, probe coordinates `i_m` and the set `M` of checked indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub indices: Vec<u64>,
    pub multipliers: Vec<BigInt>,
    pub coords: Vec<u64>,
    /// Indices `m` where the lower bound on `nu` is required.
    pub checked: Vec<usize>,
    /// `g(m)`, the bound on `|z_m|`.
    pub weight: Weight,
    pub nu: String,
}

impl Witness {
    pub fn depth(&self) -> usize {
        self.indices.len().saturating_sub(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TechnicalReport {
    pub i_ok: bool,
    pub ii_ok: bool,
    pub iii_ok: bool,
    /// `(m, nu(prod_{j<=m} a_j^{z_j}(i_m)))` for each checked `m`.
    pub values: Vec<(usize, BigUint)>,
    pub failure: Option<String>,
}

impl TechnicalReport {
    pub fn passed(&self) -> bool {
        self.i_ok && self.ii_ok && self.iii_ok
    }
}

/// Re-verify by direct evaluation:
/// (i) `|z_m| <= g(m)`, (ii) `a_m(i_k) = e` for checked `k < m`,
/// (iii) `nu(prod_{j<=m} a_j^{z_j}(i_m)) >= m` for checked `m`.
pub fn technical_check<N, S>(w: &Witness, g: &Weight, seq: &S, nu: &N) -> TechnicalReport
where
    N: Seminorm<S::Coord>,
    S: CoordinateSequence<N>,
{
    let mut failure = None;
    let len = w.indices.len();
    let shape_ok = w.multipliers.len() == len
        && w.coords.len() == len
        && w.checked.iter().all(|&m| m < len)
        && w.indices.iter().all(|&n| n < seq.terms());
    if !shape_ok {
        return TechnicalReport {
            i_ok: false,
            ii_ok: false,
            iii_ok: false,
            values: Vec::new(),
            failure: Some("witness fields have inconsistent lengths or indices".into()),
        };
    }
    let i_ok = match (0..len).find(|&m| !g.at(m as u64).dominates(&w.multipliers[m])) {
        Some(m) => {
            failure = Some(format!("(i) fails at m = {m}: |z_m| = {} > g(m) = {}", w.multipliers[m].abs(), g.at(m as u64)));
            false
        }
        None => true,
    };
    let mut ii_ok = true;
    'outer: for m in 0..len {
        for &k in w.checked.iter().filter(|&&k| k < m) {
            if !seq.term(w.indices[m], w.coords[k]).is_identity() {
                ii_ok = false;
                failure.get_or_insert(format!(
                    "(ii) fails at m = {m}: a_m(i_{k}) = a_m({}) is not the identity",
                    w.coords[k]
                ));
                break 'outer;
            }
        }
    }
    let mut iii_ok = true;
    let mut values = Vec::new();
    for &m in &w.checked {
        let i = w.coords[m];
        let mut p = S::Coord::identity();
        for j in 0..=m {
            p = p.op(&seq.term(w.indices[j], i).power(&w.multipliers[j]));
        }
        let v = nu.eval(&p);
        if v < BigUint::from(m) {
            iii_ok = false;
            failure.get_or_insert(format!("(iii) fails at m = {m}: nu = {v} < {m}"));
        }
        values.push((m, v));
    }
    TechnicalReport {
        i_ok,
        ii_ok,
        iii_ok,
        values,
        failure,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnboundedOutcome {
    Found(Witness),
    /// `f` is eventually bounded by `B` and `nu(h_n(i)) <= C` everywhere,
    /// with `B * C` below the level that the next step needs.
    NotFound { level: BigUint, bound: BigUint, uniform: BigUint },
}

/// Exponent search for one term: `f(n)` when finite, otherwise doubling
/// from 1 up to `z_cap`.
fn exponent_candidates(f: &Weight, n: u64, z_cap: u64) -> Vec<BigInt> {
    match f.at(n) {
        WeightValue::Finite(b) => vec![BigInt::from(b)],
        WeightValue::Omega => {
            let mut out = Vec::new();
            let mut z = 1u64;
            while z <= z_cap {
                out.push(BigInt::from(z));
                z = z.saturating_mul(2);
            }
            out
        }
    }
}

/// Inductive choice of `n_m`, `z_m`, `i_m` with `n_m` increasing,
/// `|z_m| <= f(n_m)`, `h_{n_m}(i_k) = e` for `k < m` and
/// `nu(h_{n_m}(i_m)^{z_m}) >= s + m`, where `s` certifies `nu` of the running
/// product. Coordinates are scanned in increasing order and the first hit is
/// taken. The result passes [`technical_check`] against `g(m) = f(n_m)`.
pub fn unbounded_witness<N, S>(f: &Weight, seq: &S, nu: &N, depth: usize, z_cap: u64) -> Result<UnboundedOutcome>
where
    N: Seminorm<S::Coord>,
    S: CoordinateSequence<N>,
{
    if seq.terms() == 0 {
        return Err(Error::SearchExhausted("the sequence has no terms".into()));
    }
    let mut indices = vec![0u64];
    let mut multipliers = vec![BigInt::zero()];
    let mut coords = vec![0u64];
    for m in 1..=depth {
        let factors: Vec<(u64, BigInt)> = indices.iter().copied().zip(multipliers.iter().cloned()).collect();
        let s = seq.sup_certificate(nu, &factors);
        let level = &s + BigUint::from(m);
        let mut hit = None;
        'search: for n in indices[m - 1] + 1..seq.terms() {
            if coords.iter().any(|&i| !seq.term(n, i).is_identity()) {
                continue;
            }
            for z in exponent_candidates(f, n, z_cap) {
                for i in 0..seq.window() {
                    if nu.eval(&seq.term(n, i).power(&z)) >= level {
                        hit = Some((n, z, i));
                        break 'search;
                    }
                }
            }
        }
        match hit {
            Some((n, z, i)) => {
                indices.push(n);
                multipliers.push(z);
                coords.push(i);
            }
            None => {
                if let (Some(b), Some(c)) = (f.eventual_bound(), seq.uniform_bound(nu)) {
                    if &b * &c < level {
                        return Ok(UnboundedOutcome::NotFound {
                            level,
                            bound: b,
                            uniform: c,
                        });
                    }
                }
                return Err(Error::SearchExhausted(format!(
                    "no term after n = {} reaches nu >= {level} within {} terms and {} coordinates",
                    indices[m - 1],
                    seq.terms(),
                    seq.window()
                )));
            }
        }
    }
    let g = Weight::new(indices.iter().map(|&n| f.at(n)).collect(), crate::weights::WeightTail::Const(WeightValue::Omega))?;
    let w = Witness {
        indices,
        multipliers,
        coords,
        checked: (0..=depth).collect(),
        weight: g.clone(),
        nu: nu.name(),
    };
    let report = technical_check(&w, &g, seq, nu);
    if !report.passed() {
        return Err(Error::SearchExhausted(format!(
            "constructed witness failed re-verification: {}",
            report.failure.unwrap_or_default()
        )));
    }
    Ok(UnboundedOutcome::Found(w))
}

/// Outcome of the case analysis for a sequence in `H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TapOutcome {
    /// Some coordinate has a cyclic core of length at least 2, so `eta` of
    /// its powers grows; `witness` is an unbounded-seminorm witness for `eta`
    /// when the window allows one.
    LongCore {
        term: u64,
        coordinate: u64,
        core: String,
        witness: Option<Witness>,
        note: String,
    },
    /// A single `t`-value carries at least half of the later terms, so the
    /// sequence does not tend to `e`.
    NotNull { t: u64, count: usize, of: usize },
    /// Thin `t`-values: zig-zag ordered witness with `eta >= m` on odd `m`.
    Thin {
        witness: Witness,
        t_values: Vec<u64>,
        psi: Vec<(u64, BigUint)>,
        report: TechnicalReport,
    },
}

/// Depth used for the unbounded witness emitted in the long-core case.
pub const LONG_CORE_DEPTH: usize = 4;

/// Case analysis on `h_0, ..., h_{k-1}` evaluated on coordinates `0..window`.
pub fn tap_witness_for_h(elements: &[HSymbolic], depth: usize, window: u64) -> Result<TapOutcome> {
    let seq = HSequence::new(elements.to_vec(), window);
    for (n, row) in seq.coords.iter().enumerate() {
        for (i, w) in row.iter().enumerate() {
            let core = w.cyclic_conjugate();
            if core.len() >= 2 {
                let (witness, note) = match unbounded_witness(&Weight::omega(), &seq, &WordSeminorm::Eta, depth.min(LONG_CORE_DEPTH), 1 << 12) {
                    Ok(UnboundedOutcome::Found(w)) => (Some(w), "eta witness found".to_string()),
                    Ok(UnboundedOutcome::NotFound { level, .. }) => (None, format!("no term reaches eta >= {level}")),
                    Err(e) => (None, e.to_string()),
                };
                return Ok(TapOutcome::LongCore {
                    term: n as u64,
                    coordinate: i as u64,
                    core: core.to_string(),
                    witness,
                    note,
                });
            }
        }
    }
    let t: Vec<Option<u64>> = elements.iter().map(|h| t_of(h, window)).collect();
    let later = &t[t.len() / 2..];
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for v in later.iter().flatten() {
        *counts.entry(*v).or_default() += 1;
    }
    if later.len() >= 2 {
        if let Some((&v, &c)) = counts.iter().max_by_key(|(_, &c)| c) {
            if 2 * c >= later.len() && c >= 2 {
                return Ok(TapOutcome::NotNull {
                    t: v,
                    count: c,
                    of: later.len(),
                });
            }
        }
    }
    // first term carrying each t-value
    let mut first: BTreeMap<u64, u64> = BTreeMap::new();
    for (n, v) in t.iter().enumerate() {
        if let Some(v) = v {
            first.entry(*v).or_insert(n as u64);
        }
    }
    let t_values: Vec<u64> = first.keys().copied().collect();
    let needed = (0..=depth as u64).map(zigzag).max().unwrap_or(0) as usize + 1;
    if t_values.len() < needed {
        return Err(Error::SearchExhausted(format!(
            "{} distinct t-values in the window, depth {depth} needs {needed}",
            t_values.len()
        )));
    }
    let p: Vec<u64> = (0..=depth as u64).map(|m| t_values[zigzag(m) as usize]).collect();
    let mut psi: BTreeMap<u64, BigUint> = BTreeMap::new();
    for &j in &p {
        let bound = seq
            .coords
            .iter()
            .flatten()
            .map(|w| mu(Letter(j), w))
            .max()
            .unwrap_or_default();
        psi.insert(j, bound);
    }
    let mut coords = Vec::new();
    let mut top = 0;
    for &pm in &p {
        top = top.max(pm);
        coords.push(top);
    }
    if top >= window {
        return Err(Error::SearchExhausted(format!("coordinate {top} lies outside the window {window}")));
    }
    let witness = Witness {
        indices: p.iter().map(|v| first[v]).collect(),
        multipliers: p.iter().map(|v| BigInt::from(2u32 * &psi[v] + 1u32)).collect(),
        coords,
        checked: (1..=depth).step_by(2).collect(),
        weight: Weight::omega(),
        nu: WordSeminorm::Eta.name(),
    };
    let report = technical_check(&witness, &Weight::omega(), &seq, &WordSeminorm::Eta);
    if !report.passed() {
        return Err(Error::SearchExhausted(format!(
            "thin-set witness failed re-verification: {}",
            report.failure.unwrap_or_default()
        )));
    }
    Ok(TapOutcome::Thin {
        witness,
        t_values,
        psi: psi.into_iter().collect(),
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extrema::zigzag_enumeration;
    use crate::weights::Multiplier;

    fn basis(terms: u64) -> BasisSequence {
        BasisSequence { terms, window: terms }
    }

    #[test]
    fn linear_weight_gives_witness() {
        let f = Weight::linear(1, 1);
        let seq = basis(600);
        let w = match unbounded_witness(&f, &seq, &AbsValue, 20, 64).unwrap() {
            UnboundedOutcome::Found(w) => w,
            other => panic!("{other:?}"),
        };
        assert_eq!(w.depth(), 20);
        for m in 1..=20 {
            // fresh coordinate, full exponent
            assert_eq!(w.coords[m], w.indices[m]);
            assert_eq!(w.multipliers[m], BigInt::from(w.indices[m] + 1));
        }
        let r = technical_check(&w, &w.weight, &seq, &AbsValue);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn bounded_weight_gives_not_found() {
        let out = unbounded_witness(&Weight::constant(5), &basis(200), &AbsValue, 20, 64).unwrap();
        assert!(matches!(out, UnboundedOutcome::NotFound { .. }), "{out:?}");
    }

    #[test]
    fn depth_zero_is_trivial() {
        match unbounded_witness(&Weight::constant(5), &basis(3), &AbsValue, 0, 64).unwrap() {
            UnboundedOutcome::Found(w) => {
                assert_eq!(w.multipliers, vec![BigInt::zero()]);
                assert!(technical_check(&w, &w.weight, &basis(3), &AbsValue).passed());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn small_window_is_exhausted() {
        let r = unbounded_witness(&Weight::linear(1, 1), &basis(10), &AbsValue, 20, 64);
        assert!(matches!(r, Err(Error::SearchExhausted(_))));
    }

    #[test]
    fn violations_are_caught() {
        let seq = basis(300);
        let UnboundedOutcome::Found(w) = unbounded_witness(&Weight::linear(1, 1), &seq, &AbsValue, 8, 64).unwrap() else {
            panic!()
        };
        let mut bumped = w.clone();
        bumped.multipliers[3] += 1;
        let r = technical_check(&bumped, &w.weight, &seq, &AbsValue);
        assert!(!r.i_ok && r.failure.unwrap().starts_with("(i)"));
        let mut collide = w.clone();
        collide.coords[2] = collide.indices[5];
        let r = technical_check(&collide, &w.weight, &seq, &AbsValue);
        assert!(!r.ii_ok);
    }

    #[test]
    fn gy_is_thin() {
        let elements: Vec<HSymbolic> = (0..40).map(HSymbolic::gy).collect();
        match tap_witness_for_h(&elements, 31, 40).unwrap() {
            TapOutcome::Thin { witness, psi, report, .. } => {
                assert!(psi.iter().all(|(_, v)| v == &BigUint::one()));
                assert!(witness.multipliers.iter().all(|z| z == &BigInt::from(3)));
                assert_eq!(witness.indices, zigzag_enumeration(31).naturals());
                for (m, v) in &report.values {
                    assert_eq!(*v, BigUint::from(m + 1));
                }
                assert_eq!(report.values.len(), 16);
            }
            other => panic!("{other:?}"),
        }
        match tap_witness_for_h(&elements, 1, 40).unwrap() {
            TapOutcome::Thin { report, .. } => assert_eq!(report.values, vec![(1, BigUint::from(2u32))]),
            other => panic!("{other:?}"),
        }
        assert!(matches!(tap_witness_for_h(&elements[..10], 31, 40), Err(Error::SearchExhausted(_))));
    }

    #[test]
    fn long_core_and_not_null() {
        let mut elements: Vec<HSymbolic> = (0..30).map(HSymbolic::gy).collect();
        elements[4] = HSymbolic::g(Multiplier::finite([0, 1, 0, 2]));
        match tap_witness_for_h(&elements, 5, 30).unwrap() {
            TapOutcome::LongCore { term, coordinate, core, .. } => {
                assert_eq!((term, coordinate), (4, 3));
                assert_eq!(core, "1.3^2");
            }
            other => panic!("{other:?}"),
        }
        let pairs: Vec<HSymbolic> = (0..40)
            .map(|n| {
                let mut p = vec![0i64; n];
                p.extend([1, 1]);
                HSymbolic::g(Multiplier::finite(p))
            })
            .collect();
        match tap_witness_for_h(&pairs, 9, 40).unwrap() {
            TapOutcome::LongCore { witness: Some(w), .. } => {
                let seq = HSequence::new(pairs.clone(), 40);
                assert!(technical_check(&w, &w.weight, &seq, &WordSeminorm::Eta).passed());
                assert_eq!(w.depth(), LONG_CORE_DEPTH);
            }
            other => panic!("{other:?}"),
        }
        let stuck: Vec<HSymbolic> = (0..20).map(|n| if n % 2 == 0 { HSymbolic::gy(0) } else { HSymbolic::gy(n) }).collect();
        assert!(matches!(tap_witness_for_h(&stuck, 3, 20).unwrap(), TapOutcome::NotNull { t: 0, .. }));
    }
}

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentSpec, GroupId, SequenceKind};
use crate::error::Result;
use crate::groups::{
    basis_a, h_bound_certificates, padic_basis_sequence, transposition_b, BoundedGroup, FinPerm,
    FreeVecGroup, HSymbolic, InstrumentedGroup, PadicGroup, PermGroup,
};
use crate::seminorms::eta;
use crate::weights::{Injection, Multiplier};

/// One probe reading of one partial product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub m: u64,
    pub probe: String,
    pub value: String,
    pub rendered: String,
}

/// Least start index of the tails that stay inside `U_level`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelK {
    pub level: u64,
    /// Every `a_{phi(l)}^{z(l)} ... a_{phi(m)}^{z(m)}` with `k <= l <= m < M`
    /// lies in `U_level`, and `k` is the least such index.
    pub k: u64,
    /// Whether at least `margin` steps follow `k`.
    pub settled: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CauchyReport {
    pub levels: Vec<LevelK>,
    pub margin: u64,
    /// `CauchyInWindow`: every level is settled.
    pub cauchy: bool,
}

impl CauchyReport {
    pub fn k_table(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.k).collect()
    }
}

/// Window-relative outcome of a run. None of these is an absolute claim
/// about the infinite product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    CauchyInWindow,
    ConvergedInWindow {
        limit: String,
    },
    DivergenceWitness {
        probe: String,
        note: String,
        table: Vec<(u64, String)>,
    },
    Inconclusive {
        reason: String,
    },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::CauchyInWindow => "CauchyInWindow",
            Verdict::ConvergedInWindow { .. } => "ConvergedInWindow",
            Verdict::DivergenceWitness { .. } => "DivergenceWitness",
            Verdict::Inconclusive { .. } => "Inconclusive",
        }
    }
}

/// Spectrum vocabulary, populated only where the class of the model is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumTag {
    Empty,
    BoundedStar,
    FiniteStar,
    Full,
}

/// Coordinates (or points) that stopped changing, with their final values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stabilization {
    /// `(coordinate, step from which it is constant)` for settled coordinates.
    pub settled: Vec<(u64, u64)>,
    pub unsettled: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceReport {
    pub spec: ExperimentSpec,
    pub multiplier: Multiplier,
    pub steps: Vec<StepRecord>,
    pub cauchy: CauchyReport,
    pub stabilization: Stabilization,
    pub verdict: Verdict,
    pub spectrum_tag: Option<SpectrumTag>,
}

/// A model group wired to the lab: sequence generators, probes and the
/// coordinate view used for stabilization.
pub trait Model: InstrumentedGroup {
    fn term(&self, kind: SequenceKind, n: u64) -> Self::Elem;
    fn probes(&self, x: &Self::Elem, m: u64, out: &mut Vec<StepRecord>);
    /// Discrete coordinates whose stabilization defines convergence.
    fn coordinates(&self, x: &Self::Elem) -> Vec<String>;

    /// Model-specific evidence that the window limit leaves the group.
    fn divergence(
        &self,
        _kind: SequenceKind,
        _used: &[u64],
        _last: &Self::Elem,
        _stab: &Stabilization,
    ) -> Option<Verdict> {
        None
    }

    fn spectrum_tag(&self) -> Option<SpectrumTag> {
        None
    }
}

/// The `H` model on the coordinate window `0..I`.
#[derive(Debug, Clone, Copy)]
pub struct HModel(pub FreeVecGroup);

impl HModel {
    pub fn symbolic(kind: SequenceKind, n: u64) -> HSymbolic {
        match kind {
            SequenceKind::GyPairs => {
                let mut p = vec![0i64; n as usize];
                p.extend([1, 1]);
                HSymbolic::g(Multiplier::finite(p))
            }
            SequenceKind::Constant => HSymbolic::gy(0),
            _ => HSymbolic::gy(n),
        }
    }
}

/// Shortest run of strictly increasing probe values accepted as growth.
pub const GROWTH_RUN: usize = 5;

impl InstrumentedGroup for HModel {
    type Elem = <FreeVecGroup as InstrumentedGroup>::Elem;

    fn identity(&self) -> Self::Elem {
        self.0.identity()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.0.mul(a, b)
    }
    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        self.0.inv(a)
    }
    fn pow(&self, a: &Self::Elem, z: &BigInt) -> Self::Elem {
        self.0.pow(a, z)
    }
    fn in_basic_subgroup(&self, a: &Self::Elem, n: u64) -> bool {
        self.0.in_basic_subgroup(a, n)
    }
    fn render(&self, a: &Self::Elem) -> String {
        self.0.render(a)
    }
}

impl Model for HModel {
    fn term(&self, kind: SequenceKind, n: u64) -> Self::Elem {
        HModel::symbolic(kind, n).to_window(self.0.window)
    }

    fn probes(&self, x: &Self::Elem, m: u64, out: &mut Vec<StepRecord>) {
        for (i, w) in x.coords.iter().enumerate() {
            out.push(StepRecord {
                m,
                probe: format!("eta[{i}]"),
                value: eta(w).to_string(),
                rendered: w.to_string(),
            });
        }
    }

    fn coordinates(&self, x: &Self::Elem) -> Vec<String> {
        x.coords.iter().map(|w| w.to_string()).collect()
    }

    /// Growth detector: a run of at least [`GROWTH_RUN`] consecutive settled
    /// coordinates with strictly increasing `eta`, each above every symbolic
    /// `eta` certificate of the terms used.
    fn divergence(
        &self,
        kind: SequenceKind,
        used: &[u64],
        last: &Self::Elem,
        stab: &Stabilization,
    ) -> Option<Verdict> {
        let cert = used
            .iter()
            .map(|&n| h_bound_certificates(&HModel::symbolic(kind, n), 0, &[]).eta_certificate)
            .max()
            .unwrap_or(0);
        let mut best: Vec<(u64, u64)> = Vec::new();
        let mut run: Vec<(u64, u64)> = Vec::new();
        for &(i, _) in &stab.settled {
            let v = eta(&last.coords[i as usize]) as u64;
            let extends = run
                .last()
                .is_some_and(|&(pi, pv)| pi + 1 == i && pv < v);
            if v > cert && extends {
                run.push((i, v));
            } else if v > cert {
                run = vec![(i, v)];
            } else {
                run.clear();
            }
            if run.len() > best.len() {
                best = run.clone();
            }
        }
        (best.len() >= GROWTH_RUN).then(|| Verdict::DivergenceWitness {
            probe: "eta".into(),
            note: format!("eta exceeds the certificate {cert} and grows along settled coordinates"),
            table: best.into_iter().map(|(i, v)| (i, v.to_string())).collect(),
        })
    }
}

/// The bounded model on coordinates `0..I`.
#[derive(Debug, Clone, Copy)]
pub struct BoundedModel {
    pub window: u64,
}

impl InstrumentedGroup for BoundedModel {
    type Elem = <BoundedGroup as InstrumentedGroup>::Elem;

    fn identity(&self) -> Self::Elem {
        BoundedGroup.identity()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        BoundedGroup.mul(a, b)
    }
    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        BoundedGroup.inv(a)
    }
    fn pow(&self, a: &Self::Elem, z: &BigInt) -> Self::Elem {
        BoundedGroup.pow(a, z)
    }
    fn in_basic_subgroup(&self, a: &Self::Elem, n: u64) -> bool {
        BoundedGroup.in_basic_subgroup(a, n)
    }
    fn render(&self, a: &Self::Elem) -> String {
        BoundedGroup.render(a)
    }
}

impl Model for BoundedModel {
    fn term(&self, kind: SequenceKind, n: u64) -> Self::Elem {
        match kind {
            SequenceKind::Constant => basis_a(0),
            _ => basis_a(n),
        }
    }

    fn probes(&self, x: &Self::Elem, m: u64, out: &mut Vec<StepRecord>) {
        for i in 0..self.window {
            let v = x.at(i);
            out.push(StepRecord {
                m,
                probe: format!("abs[{i}]"),
                value: v.magnitude().to_string(),
                rendered: v.to_string(),
            });
        }
    }

    fn coordinates(&self, x: &Self::Elem) -> Vec<String> {
        (0..self.window).map(|i| x.at(i).to_string()).collect()
    }

    fn spectrum_tag(&self) -> Option<SpectrumTag> {
        Some(SpectrumTag::BoundedStar)
    }
}

/// The integers with the `p`-adic topology.
#[derive(Debug, Clone, Copy)]
pub struct PadicModel(pub PadicGroup);

impl InstrumentedGroup for PadicModel {
    type Elem = <PadicGroup as InstrumentedGroup>::Elem;

    fn identity(&self) -> Self::Elem {
        self.0.identity()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.0.mul(a, b)
    }
    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        self.0.inv(a)
    }
    fn pow(&self, a: &Self::Elem, z: &BigInt) -> Self::Elem {
        self.0.pow(a, z)
    }
    fn in_basic_subgroup(&self, a: &Self::Elem, n: u64) -> bool {
        self.0.in_basic_subgroup(a, n)
    }
    fn render(&self, a: &Self::Elem) -> String {
        self.0.render(a)
    }
}

impl Model for PadicModel {
    fn term(&self, kind: SequenceKind, n: u64) -> Self::Elem {
        match kind {
            SequenceKind::Constant => self.0.element(1),
            _ => padic_basis_sequence(n, self.0.p()),
        }
    }

    fn probes(&self, x: &Self::Elem, m: u64, out: &mut Vec<StepRecord>) {
        out.push(StepRecord {
            m,
            probe: "v_p".into(),
            value: x.valuation().map_or("inf".into(), |v| v.to_string()),
            rendered: x.to_string(),
        });
    }

    fn coordinates(&self, x: &Self::Elem) -> Vec<String> {
        vec![x.value.to_string()]
    }
}

/// Finitary permutations, probed on the points `0..I`.
#[derive(Debug, Clone, Copy)]
pub struct PermModel {
    pub window: u64,
}

impl InstrumentedGroup for PermModel {
    type Elem = FinPerm;

    fn identity(&self) -> FinPerm {
        PermGroup.identity()
    }
    fn mul(&self, a: &FinPerm, b: &FinPerm) -> FinPerm {
        PermGroup.mul(a, b)
    }
    fn inv(&self, a: &FinPerm) -> FinPerm {
        PermGroup.inv(a)
    }
    fn in_basic_subgroup(&self, a: &FinPerm, n: u64) -> bool {
        PermGroup.in_basic_subgroup(a, n)
    }
    fn render(&self, a: &FinPerm) -> String {
        PermGroup.render(a)
    }
}

impl Model for PermModel {
    fn term(&self, kind: SequenceKind, n: u64) -> FinPerm {
        match kind {
            SequenceKind::Constant => transposition_b(0),
            _ => transposition_b(n),
        }
    }

    fn probes(&self, x: &FinPerm, m: u64, out: &mut Vec<StepRecord>) {
        let images: Vec<String> = (0..self.window).map(|k| x.apply(k).to_string()).collect();
        out.push(StepRecord {
            m,
            probe: "images".into(),
            value: images.join(","),
            rendered: x.to_string(),
        });
    }

    fn coordinates(&self, x: &FinPerm) -> Vec<String> {
        (0..self.window).map(|k| x.apply(k).to_string()).collect()
    }

    /// The settled pointwise limit must be injective and, on the lower half
    /// of the window, hit every value.
    fn divergence(
        &self,
        _kind: SequenceKind,
        _used: &[u64],
        last: &FinPerm,
        stab: &Stabilization,
    ) -> Option<Verdict> {
        if !stab.unsettled.is_empty() {
            return None;
        }
        let table: Vec<(u64, String)> = stab
            .settled
            .iter()
            .map(|&(k, _)| (k, last.apply(k).to_string()))
            .collect();
        let images: Vec<u64> = stab.settled.iter().map(|&(k, _)| last.apply(k)).collect();
        let distinct: BTreeSet<u64> = images.iter().copied().collect();
        let note = if distinct.len() < images.len() {
            "settled pointwise limit is not injective".to_string()
        } else if let Some(v) = (0..self.window / 2).find(|v| !distinct.contains(v)) {
            format!("settled pointwise limit misses the value {v}; it is not surjective")
        } else {
            return None;
        };
        Some(Verdict::DivergenceWitness {
            probe: "pointwise".into(),
            note,
            table,
        })
    }
}

/// `P_m = prod_{n <= m} a_{phi(n)}^{z(n)}` for `m < horizon`.
pub fn partial_products<G: Model>(
    g: &G,
    kind: SequenceKind,
    z: &Multiplier,
    phi: &Injection,
    horizon: u64,
) -> Vec<G::Elem> {
    let mut out = Vec::with_capacity(horizon as usize);
    let mut acc = g.identity();
    for n in 0..horizon {
        let zn = z.at(n);
        if !zn.is_zero() {
            let a = g.term(kind, phi.apply(n));
            acc = g.mul(&acc, &g.pow(&a, &zn));
        }
        out.push(acc.clone());
    }
    out
}

/// Settle margin: a quarter of the horizon, at least one step.
pub fn margin(horizon: u64) -> u64 {
    (horizon / 4).max(1)
}

/// For each level `n <= depth`, the least `k` such that every tail product
/// `P_{l-1}^{-1} P_m` with `k <= l <= m < M` lies in `U_n` (`P_{-1} = e`).
/// In a linear group this means `P_{k-1}, ..., P_{M-1}` share a left coset of `U_n`.
pub fn cauchy_verdict<G: InstrumentedGroup>(g: &G, products: &[G::Elem], depth: u64) -> CauchyReport {
    let horizon = products.len() as u64;
    let margin = margin(horizon);
    let last_inv = g.inv(products.last().expect("non-empty run"));
    let levels: Vec<LevelK> = (0..=depth)
        .map(|n| {
            let same_coset = |p: &G::Elem| g.in_basic_subgroup(&g.mul(&last_inv, p), n);
            // scan P_{M-2}, ..., P_0, then P_{-1} = e
            let mut k = 0;
            for j in (0..horizon.saturating_sub(1)).rev() {
                if !same_coset(&products[j as usize]) {
                    k = j + 2;
                    break;
                }
            }
            if k == 0 && !same_coset(&g.identity()) {
                k = 1;
            }
            LevelK {
                level: n,
                k,
                settled: k + margin <= horizon,
            }
        })
        .collect();
    let cauchy = levels.iter().all(|l| l.settled);
    CauchyReport {
        levels,
        margin,
        cauchy,
    }
}

/// Step from which each coordinate is constant through the end of the run.
pub fn stabilization(coords: &[Vec<String>]) -> Stabilization {
    let horizon = coords.len() as u64;
    let margin = margin(horizon);
    let last = coords.last().expect("non-empty run");
    let mut settled = Vec::new();
    let mut unsettled = Vec::new();
    for (c, v) in last.iter().enumerate() {
        let mut s = 0;
        for m in (0..coords.len()).rev() {
            if coords[m][c] != *v {
                s = m as u64 + 1;
                break;
            }
        }
        if s + margin <= horizon {
            settled.push((c as u64, s));
        } else {
            unsettled.push(c as u64);
        }
    }
    Stabilization { settled, unsettled }
}

/// Coordinate-wise convergence in the window, after the model's divergence
/// detector. `ConvergedInWindow` additionally requires `CauchyInWindow`.
pub fn convergence_verdict<G: Model>(
    g: &G,
    spec: &ExperimentSpec,
    products: &[G::Elem],
    cauchy: &CauchyReport,
    stab: &Stabilization,
) -> Verdict {
    let phi = spec.injection();
    let z = spec.resolved_multiplier();
    let used: Vec<u64> = (0..spec.horizon)
        .filter(|&n| !z.at(n).is_zero())
        .map(|n| phi.apply(n))
        .collect();
    let last = products.last().expect("non-empty run");
    if let Some(v) = g.divergence(spec.sequence, &used, last, stab) {
        return v;
    }
    if stab.unsettled.is_empty() && cauchy.cauchy {
        return Verdict::ConvergedInWindow {
            limit: g.render(last),
        };
    }
    if cauchy.cauchy {
        return Verdict::CauchyInWindow;
    }
    Verdict::Inconclusive {
        reason: format!(
            "{} unsettled coordinates; {} of {} levels settled",
            stab.unsettled.len(),
            cauchy.levels.iter().filter(|l| l.settled).count(),
            cauchy.levels.len()
        ),
    }
}

fn execute<G: Model>(g: &G, spec: &ExperimentSpec) -> TraceReport {
    let z = spec.resolved_multiplier();
    let products = partial_products(g, spec.sequence, &z, &spec.injection(), spec.horizon);
    let mut steps = Vec::new();
    for (m, p) in products.iter().enumerate() {
        g.probes(p, m as u64, &mut steps);
    }
    let cauchy = cauchy_verdict(g, &products, spec.depth);
    let coords: Vec<Vec<String>> = products.iter().map(|p| g.coordinates(p)).collect();
    let stab = stabilization(&coords);
    let verdict = convergence_verdict(g, spec, &products, &cauchy, &stab);
    TraceReport {
        spec: spec.clone(),
        multiplier: z,
        steps,
        cauchy,
        stabilization: stab,
        verdict,
        spectrum_tag: g.spectrum_tag(),
    }
}

/// Validate `spec` and run it.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<TraceReport> {
    spec.validate()?;
    Ok(match spec.group {
        GroupId::H => execute(
            &HModel(FreeVecGroup {
                window: spec.window as usize,
            }),
            spec,
        ),
        GroupId::Bounded => execute(&BoundedModel { window: spec.window }, spec),
        GroupId::Padic => execute(&PadicModel(PadicGroup::new(spec.p())?), spec),
        GroupId::Perm => execute(&PermModel { window: spec.window }, spec),
    })
}

/// Outcome of the null-sequence test behind the linear shortcut.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NullShortcut {
    /// `K_n`: first index from which every base term `a_j`, `j < M`, is in `U_n`.
    pub entry: Vec<Option<u64>>,
    /// `1 + max phi^-1({0..K_n - 1})`: tails of the rearranged product
    /// starting there avoid every term outside `U_n`, whatever the multiplier.
    pub k_bound: Vec<Option<u64>>,
    pub null: bool,
}

impl NullShortcut {
    /// Exact agreement with a Cauchy report: both certify or both do not,
    /// and certified `k` values respect the bound.
    pub fn agrees_with(&self, cauchy: &CauchyReport) -> bool {
        if self.null != cauchy.cauchy {
            return false;
        }
        !self.null
            || cauchy
                .levels
                .iter()
                .zip(&self.k_bound)
                .all(|(l, b)| b.is_some_and(|b| l.k <= b))
    }
}

fn null_shortcut<G: Model>(g: &G, spec: &ExperimentSpec) -> NullShortcut {
    let horizon = spec.horizon;
    let need = horizon.div_ceil(2);
    let terms: Vec<G::Elem> = (0..horizon).map(|j| g.term(spec.sequence, j)).collect();
    let phi = spec.injection();
    let phi_inv = phi.phi_hat.inverse();
    let mut entry = Vec::new();
    let mut k_bound = Vec::new();
    for n in 0..=spec.depth {
        let k = (0..horizon)
            .rev()
            .find(|&j| !g.in_basic_subgroup(&terms[j as usize], n))
            .map_or(0, |j| j + 1);
        if horizon - k >= need {
            entry.push(Some(k));
            let bound = (0..k)
                .filter_map(|v| phi.sigma.preimage(phi_inv.apply(v)))
                .max()
                .map_or(0, |j| j + 1);
            k_bound.push(Some(bound));
        } else {
            entry.push(None);
            k_bound.push(None);
        }
    }
    let null = entry.iter().all(Option::is_some);
    NullShortcut {
        entry,
        k_bound,
        null,
    }
}

/// Null-sequence criterion for linear groups: when every level admits a tail
/// of base terms inside `U_n`, every multiplier and rearrangement yields a
/// Cauchy product, with an explicit bound on `k`.
pub fn linear_null_shortcut(spec: &ExperimentSpec) -> Result<NullShortcut> {
    spec.validate()?;
    Ok(match spec.group {
        GroupId::H => null_shortcut(
            &HModel(FreeVecGroup {
                window: spec.window as usize,
            }),
            spec,
        ),
        GroupId::Bounded => null_shortcut(&BoundedModel { window: spec.window }, spec),
        GroupId::Padic => null_shortcut(&PadicModel(PadicGroup::new(spec.p())?), spec),
        GroupId::Perm => null_shortcut(&PermModel { window: spec.window }, spec),
    })
}

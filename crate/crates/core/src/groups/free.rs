use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use super::InstrumentedGroup;
use crate::algebra::abs_big;
use crate::error::{Error, Result};
use crate::seminorms::{delta, eta, mu};
use crate::weights::Multiplier;
use crate::words::{Letter, Word};

/// `G = F(N)^N` restricted to the coordinates `0..window`. `U_n` is the set
/// of elements that are trivial on every coordinate below `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeVecGroup {
    pub window: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeVecElement {
    pub coords: Vec<Word>,
}

impl FreeVecElement {
    pub fn identity(window: usize) -> Self {
        FreeVecElement {
            coords: vec![Word::identity(); window],
        }
    }

    pub fn window(&self) -> usize {
        self.coords.len()
    }

    /// In-place `self = self * other`.
    pub fn mul_assign(&mut self, other: &FreeVecElement) {
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a *= b;
        }
    }
}

impl InstrumentedGroup for FreeVecGroup {
    type Elem = FreeVecElement;

    fn identity(&self) -> FreeVecElement {
        FreeVecElement::identity(self.window)
    }

    fn mul(&self, a: &FreeVecElement, b: &FreeVecElement) -> FreeVecElement {
        let mut out = a.clone();
        out.mul_assign(b);
        out
    }

    fn inv(&self, a: &FreeVecElement) -> FreeVecElement {
        FreeVecElement {
            coords: a.coords.iter().map(Word::inv).collect(),
        }
    }

    fn pow(&self, a: &FreeVecElement, z: &BigInt) -> FreeVecElement {
        FreeVecElement {
            coords: a.coords.iter().map(|w| w.pow(z.clone())).collect(),
        }
    }

    fn in_basic_subgroup(&self, a: &FreeVecElement, n: u64) -> bool {
        a.coords.iter().take(n as usize).all(Word::is_identity)
    }

    fn render(&self, a: &FreeVecElement) -> String {
        a.coords
            .iter()
            .enumerate()
            .map(|(i, w)| format!("[{i}]={w}"))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// `y_n`: 1 at `n`, 0 elsewhere.
pub fn y(n: u64) -> Multiplier {
    let mut prefix = vec![0i64; n as usize];
    prefix.push(1);
    Multiplier::finite(prefix)
}

/// `g_z(i) = 0^{z(0)} 1^{z(1)} ... i^{z(i)}`, zero powers dropped.
pub fn g_z_coord(z: &Multiplier, i: u64) -> Word {
    Word::from_monoms((0..=i).map(|k| (k, z.at(k))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Epsilon {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Epsilon {
    pub fn flip(self) -> Self {
        match self {
            Epsilon::Plus => Epsilon::Minus,
            Epsilon::Minus => Epsilon::Plus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HFactor {
    pub z: Multiplier,
    pub epsilon: Epsilon,
}

/// `h = g_{z_0}^{e_0} ... g_{z_s}^{e_s}`, an element of the subgroup `H` of
/// `G` generated by the `g_z`. Exact at every coordinate.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HSymbolic {
    pub factors: Vec<HFactor>,
}

impl HSymbolic {
    pub fn identity() -> Self {
        HSymbolic::default()
    }

    pub fn g(z: Multiplier) -> Self {
        HSymbolic {
            factors: vec![HFactor {
                z,
                epsilon: Epsilon::Plus,
            }],
        }
    }

    /// `g_{y_n}`: `e` below coordinate `n`, the letter `n` from there on.
    pub fn gy(n: u64) -> Self {
        HSymbolic::g(y(n))
    }

    pub fn mul(&self, other: &HSymbolic) -> HSymbolic {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        HSymbolic { factors }
    }

    pub fn inv(&self) -> HSymbolic {
        HSymbolic {
            factors: self
                .factors
                .iter()
                .rev()
                .map(|f| HFactor {
                    z: f.z.clone(),
                    epsilon: f.epsilon.flip(),
                })
                .collect(),
        }
    }

    pub fn eval(&self, i: u64) -> Word {
        h_eval(self, i)
    }

    pub fn to_window(&self, window: usize) -> FreeVecElement {
        FreeVecElement {
            coords: (0..window as u64).map(|i| self.eval(i)).collect(),
        }
    }
}

/// `h(i) = prod_k g_{z_k}(i)^{e_k}`.
pub fn h_eval(h: &HSymbolic, i: u64) -> Word {
    let mut out = Word::identity();
    for f in &h.factors {
        let g = g_z_coord(&f.z, i);
        match f.epsilon {
            Epsilon::Plus => out *= &g,
            Epsilon::Minus => out *= &g.inv(),
        }
    }
    out
}

/// Something with free-group words at coordinates `0, 1, ...`.
pub trait WordCoordinates {
    fn coordinate(&self, i: u64) -> Word;

    /// Number of known coordinates, `None` when every coordinate is known.
    fn known_len(&self) -> Option<u64>;
}

impl WordCoordinates for HSymbolic {
    fn coordinate(&self, i: u64) -> Word {
        self.eval(i)
    }

    fn known_len(&self) -> Option<u64> {
        None
    }
}

impl WordCoordinates for FreeVecElement {
    fn coordinate(&self, i: u64) -> Word {
        self.coords[i as usize].clone()
    }

    fn known_len(&self) -> Option<u64> {
        Some(self.coords.len() as u64)
    }
}

/// `t_a = min{i : a(i) != e}`, searched below `limit`.
pub fn t_of(a: &impl WordCoordinates, limit: u64) -> Option<u64> {
    let limit = a.known_len().map_or(limit, |k| k.min(limit));
    (0..limit).find(|&i| !a.coordinate(i).is_identity())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HBoundReport {
    /// `2 (s + 1)`: bounds `eta(h(i))` for every `i`.
    pub eta_certificate: u64,
    /// `sum_k |z_k(j)|`: bounds `mu_j(h(i))` for every `i`.
    pub mu_certificates: Vec<(Letter, BigUint)>,
    pub observed_eta_max: u64,
    pub observed_mu_max: Vec<(Letter, BigUint)>,
    /// Whether every observation is within its certificate.
    pub consistent: bool,
}

/// Bounds on `eta` and `mu_j` over all coordinates of `h`, read off the
/// symbolic form, checked against the coordinates below `window`.
pub fn h_bound_certificates(h: &HSymbolic, window: u64, letters: &[Letter]) -> HBoundReport {
    let eta_certificate = 2 * h.factors.len() as u64;
    let mu_certificates: Vec<(Letter, BigUint)> = letters
        .iter()
        .map(|&x| {
            let c = h.factors.iter().map(|f| abs_big(&f.z.at(x.0))).sum();
            (x, c)
        })
        .collect();
    let coords: Vec<Word> = (0..window).map(|i| h.eval(i)).collect();
    let observed_eta_max = coords.iter().map(|w| eta(w) as u64).max().unwrap_or(0);
    let observed_mu_max: Vec<(Letter, BigUint)> = letters
        .iter()
        .map(|&x| (x, coords.iter().map(|w| mu(x, w)).max().unwrap_or_default()))
        .collect();
    let consistent = observed_eta_max <= eta_certificate
        && observed_mu_max
            .iter()
            .zip(&mu_certificates)
            .all(|((_, o), (_, c))| o <= c);
    HBoundReport {
        eta_certificate,
        mu_certificates,
        observed_eta_max,
        observed_mu_max,
        consistent,
    }
}

/// `delta_j(h(i)) = 0` for `i < j` and `delta_j(h(i)) = delta_j(h(j))` for
/// `j <= i < window`.
pub fn delta_stability_check(h: &HSymbolic, j: u64, window: u64) -> bool {
    let stable = delta(j, &h.eval(j));
    (0..window).all(|i| {
        let d = delta(j, &h.eval(i));
        if i < j {
            d == BigInt::default()
        } else {
            d == stable
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortCoreReport {
    pub t_a: u64,
    pub mu_lead: BigUint,
    /// `mu_{t_a}(a^z(i)) >= z`.
    pub lead_ok: bool,
    /// `mu_j(a^z(i)) <= mu_j(a(i))` for every `j != t_a`.
    pub others_ok: bool,
}

/// Powers of an `a` whose coordinates all have cyclic cores of length at
/// most one, checked at coordinate `i`. The core condition is verified on
/// the coordinates below `max(window, i + 1)`.
pub fn short_core_power_bounds(a: &HSymbolic, z: u64, i: u64, window: u64) -> Result<ShortCoreReport> {
    if z == 0 {
        return Err(Error::PreconditionViolation("z must be positive".into()));
    }
    let limit = window.max(i + 1);
    for k in 0..limit {
        let len = a.eval(k).cyclic_conjugate().len();
        if len > 1 {
            return Err(Error::PreconditionViolation(format!(
                "coordinate {k} has a cyclic core of length {len}"
            )));
        }
    }
    let t_a = t_of(a, limit)
        .ok_or_else(|| Error::PreconditionViolation(format!("a is trivial below {limit}")))?;
    if i < t_a {
        return Err(Error::PreconditionViolation(format!("i = {i} is below t_a = {t_a}")));
    }
    let base = a.eval(i);
    let power = base.pow(z);
    let mu_lead = mu(Letter(t_a), &power);
    let letters: BTreeSet<Letter> = base.letters().chain(power.letters()).collect();
    let others_ok = letters
        .into_iter()
        .filter(|x| x.0 != t_a)
        .all(|x| mu(x, &power) <= mu(x, &base));
    Ok(ShortCoreReport {
        t_a,
        lead_ok: mu_lead >= BigUint::from(z),
        mu_lead,
        others_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::laws;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn g_z_examples() {
        let z = Multiplier::new([3, -1, 2], 5);
        assert_eq!(g_z_coord(&z, 2), w("0^3.1^-1.2^2"));
        assert_eq!(g_z_coord(&y(2), 1), Word::identity());
        assert_eq!(g_z_coord(&y(2), 5), w("2"));
        for i in 0..10 {
            assert!(g_z_coord(&Multiplier::zero(), i).is_identity());
        }
        assert_eq!(g_z_coord(&Multiplier::finite([0, 4, 0, -1]), 7), w("1^4.3^-1"));
    }

    #[test]
    fn h_eval_examples() {
        assert_eq!(h_eval(&HSymbolic::gy(3), 10), w("3"));
        let z = Multiplier::new([2, -7, 1], 3);
        let h = HSymbolic::g(z.clone()).mul(&HSymbolic::g(z).inv());
        for i in 0..12 {
            assert!(h.eval(i).is_identity());
        }
        let h = HSymbolic::gy(1).mul(&HSymbolic::gy(0));
        assert_eq!(h.eval(5), w("1.0"));
        assert_eq!(h.eval(0), w("0"));
    }

    #[test]
    fn certificate_examples() {
        let single = HSymbolic::g(Multiplier::new([4, -2, 0, 9], 1));
        let r = h_bound_certificates(&single, 40, &[Letter(0), Letter(3)]);
        assert_eq!(r.eta_certificate, 2);
        assert_eq!(r.mu_certificates[0].1, BigUint::from(4u32));
        assert_eq!(r.mu_certificates[1].1, BigUint::from(9u32));
        assert!(r.consistent);
        let h = single.mul(&HSymbolic::gy(2)).mul(&single.inv());
        assert_eq!(h_bound_certificates(&h, 10, &[]).eta_certificate, 6);
    }

    #[test]
    fn t_examples() {
        assert_eq!(t_of(&HSymbolic::gy(4), 100), Some(4));
        assert_eq!(t_of(&HSymbolic::identity(), 1000), None);
        let h = HSymbolic::g(Multiplier::finite([0, 2]));
        assert_eq!(h.eval(1), w("1^2"));
        assert_eq!(t_of(&h, 10), Some(1));
        assert_eq!(t_of(&HSymbolic::gy(4), 4), None);
        assert_eq!(t_of(&HSymbolic::gy(4).to_window(3), 100), None);
    }

    #[test]
    fn delta_examples() {
        let z = Multiplier::new([1, 5, -3], 2);
        let h = HSymbolic::g(z.clone());
        for i in 0..10 {
            let expect = if i < 2 { BigInt::from(0) } else { z.at(2) };
            assert_eq!(delta(2, &h.eval(i)), expect);
        }
        assert!(delta_stability_check(&h, 2, 10));
        assert!(delta_stability_check(&HSymbolic::identity(), 3, 10));
    }

    #[test]
    fn short_core_examples() {
        let r = short_core_power_bounds(&HSymbolic::gy(3), 7, 5, 10).unwrap();
        assert_eq!((r.t_a, r.mu_lead.clone()), (3, BigUint::from(7u32)));
        assert!(r.lead_ok && r.others_ok);

        // d . t^p . d^-1 at every coordinate from t = 1 on
        let d = HSymbolic::gy(2);
        let a = d.mul(&HSymbolic::g(Multiplier::finite([0, 3]))).mul(&d.inv());
        assert_eq!(a.eval(4), w("2.1^3.2^-1"));
        let r = short_core_power_bounds(&a, 5, 4, 8).unwrap();
        assert_eq!(r.t_a, 1);
        assert_eq!(r.mu_lead, BigUint::from(15u32));
        assert!(r.lead_ok && r.others_ok);

        let long = HSymbolic::g(Multiplier::constant(1));
        let err = short_core_power_bounds(&long, 2, 3, 5).unwrap_err();
        assert!(matches!(err, Error::PreconditionViolation(_)));
        assert_eq!(long.eval(4).cyclic_conjugate(), long.eval(4));
    }

    #[test]
    fn render_lines() {
        let g = FreeVecGroup { window: 3 };
        assert_eq!(g.render(&HSymbolic::gy(1).to_window(3)), "[0]=e\n[1]=1\n[2]=1");
    }

    fn hsym() -> impl Strategy<Value = HSymbolic> {
        let factor = (prop::collection::vec(-4i64..=4, 0..6), -2i64..=2, any::<bool>()).prop_map(
            |(p, t, plus)| HFactor {
                z: Multiplier::new(p, t),
                epsilon: if plus { Epsilon::Plus } else { Epsilon::Minus },
            },
        );
        prop::collection::vec(factor, 0..4).prop_map(|factors| HSymbolic { factors })
    }

    proptest! {
        #[test]
        fn window_group_laws(a in hsym(), b in hsym(), c in hsym()) {
            let g = FreeVecGroup { window: 8 };
            laws::check(&g, &a.to_window(8), &b.to_window(8), &c.to_window(8), 9);
        }

        #[test]
        fn symbolic_ops_match_windows(a in hsym(), b in hsym()) {
            let g = FreeVecGroup { window: 8 };
            prop_assert_eq!(a.mul(&b).to_window(8), g.mul(&a.to_window(8), &b.to_window(8)));
            prop_assert_eq!(a.inv().to_window(8), g.inv(&a.to_window(8)));
        }

        #[test]
        fn certificates_bound_observations(h in hsym()) {
            let letters: Vec<Letter> = (0..8).map(Letter).collect();
            prop_assert!(h_bound_certificates(&h, 50, &letters).consistent);
        }

        #[test]
        fn delta_stable(h in hsym(), j in 0u64..=8) {
            prop_assert!(delta_stability_check(&h, j, 30));
        }
    }
}

use num_bigint::BigInt;
use prodlab_core::groups::{group_law_violation, PadicGroup};
use prodlab_core::lab::{parse_trace_header, run_experiment, ExperimentSpec, TraceReport, Verdict};
use prodlab_core::seminorms::{eta, eta_power_bounds, mu, PowerBranch};
use prodlab_core::weights::{Multiplier, Permutation};
use prodlab_core::{Error, Letter, Word};

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

#[test]
fn word_round_trip_and_reduction() {
    let a = w("0^2.1^-3.0^-5");
    assert_eq!(a.to_string(), "0^2.1^-3.0^-5");
    assert_eq!(a.mul(&w("0^5.1^3")), w("0^2"));
    assert!(a.mul(&a.inv()).is_identity());
    assert_eq!(mu(Letter(0), &a), 5u32.into());
    assert_eq!(eta(&a), 3);
    assert!(matches!("0^".parse::<Word>(), Err(Error::ParseWord { .. })));
}

#[test]
fn commutator_powers_grow() {
    let r = eta_power_bounds(&w("0.1.0^-1.1^-1"), 7);
    assert_eq!(r.branch, PowerBranch::LongCore);
    assert!(r.held);
    let r = eta_power_bounds(&w("2.0.2^-1"), 7);
    assert_eq!(r.branch, PowerBranch::ShortCore);
    assert_eq!(r.eta_power, r.eta_w);
}

#[test]
fn padic_laws() {
    let g = PadicGroup::new(5).unwrap();
    let (a, b, c) = (g.element(25), g.element(-7), g.element(BigInt::from(5).pow(9)));
    assert_eq!(group_law_violation(&g, &a, &b, &c, 12), None);
    assert!(PadicGroup::new(6).is_err());
}

#[test]
fn padic_trace_json_round_trip() {
    let mut spec = ExperimentSpec::from_toml(
        "group = \"padic\"\nsequence = \"powers\"\nhorizon = 20\ndepth = 6\nmultiplier = { tail = 2 }\n",
    )
    .unwrap();
    spec.permutation = Permutation::table(vec![1, 0, 3, 2]).unwrap();
    let trace = run_experiment(&spec).unwrap();
    assert!(trace.cauchy.cauchy);
    let back = TraceReport::from_json(&trace.to_json()).unwrap();
    assert_eq!(back.to_text(), trace.to_text());
    assert_eq!(parse_trace_header(&trace.to_text()).unwrap(), spec);
}

#[test]
fn zero_multiplier_converges_to_identity() {
    let mut spec = ExperimentSpec::from_toml(
        "group = \"H\"\nsequence = \"gy\"\nhorizon = 12\nwindow = 8\nmultiplier = { tail = 0 }\n",
    )
    .unwrap();
    spec.multiplier = prodlab_core::lab::MultiplierSpec::Explicit(Multiplier::zero());
    let trace = run_experiment(&spec).unwrap();
    match trace.verdict {
        Verdict::ConvergedInWindow { limit } => assert!(limit.split('\n').all(|l| l.ends_with('e'))),
        v => panic!("{}", v.name()),
    }
}

#[test]
fn invalid_experiments_are_rejected() {
    let err = ExperimentSpec::from_toml("group = \"padic\"\nsequence = \"gy\"\nhorizon = 5\n")
        .and_then(|s| run_experiment(&s));
    assert!(err.is_err());
}

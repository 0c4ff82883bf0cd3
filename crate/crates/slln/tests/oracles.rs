//! Independent numeric oracles for the symbolic calculus: brute-force
//! block-sum classification of the Bertrand battery, cross-checks of the
//! two-route series identities, and asymptotic consistency of the built-ins.

use slln::bertrand::{converges, Convergence, LogPowerExponents};
use slln::criteria::{classify_partial_sums, ProbeClass, ProbeOptions};
use slln::montecarlo::estimate_expected_term;
use slln::numeric::root::first_below;
use slln::rational::{rat, to_f64, Rat};
use slln::tailmodel::{ex4_1, ex4_2, ex4_3, logpower, pareto, rademacher, DistributionSpec};

/// The fixed 20-triple battery spanning every branch boundary. `None` marks
/// triples that land in the probe's honest Inconclusive band by design.
fn battery() -> Vec<(f64, f64, f64, Option<Convergence>)> {
    use Convergence::*;
    vec![
        (0.5, 0.0, 0.0, Some(Diverges)),
        (0.9, 0.0, 0.0, Some(Diverges)),
        (1.0, 0.0, 0.0, Some(Diverges)),
        (1.0, 0.5, 0.0, Some(Diverges)),
        (1.0, 0.75, 0.0, Some(Diverges)),
        (1.0, 1.0, 0.0, Some(Diverges)),
        (1.0, 1.0, 0.5, Some(Diverges)),
        (1.0, 1.0, 1.0, Some(Diverges)),
        (1.0, 0.0, 5.0, Some(Diverges)),
        (1.0, 1.0, -1.0, Some(Diverges)),
        (2.0, 0.0, 0.0, Some(Converges)),
        (1.1, 0.0, 0.0, Some(Converges)),
        (1.5, 0.0, 0.0, Some(Converges)),
        (1.0, 2.0, 0.0, Some(Converges)),
        (1.0, 3.0, 0.0, Some(Converges)),
        (1.0, 1.0, 2.0, Some(Converges)),
        (1.0, 1.0, 4.0, Some(Converges)),
        (1.25, 1.0, 1.0, Some(Converges)),
        (1.0, 1.25, 0.0, None),
        (1.0, 1.0, 1.5, None),
    ]
}

fn rat_of(x: f64) -> Rat {
    // battery entries are exact multiples of 1/20
    Rat::new((x * 20.0).round() as i64, 20)
}

fn term_fn(a: f64, b: f64, g: f64) -> impl Fn(f64) -> f64 {
    move |n: f64| {
        if n < 16.0 {
            return 0.0;
        }
        let ln = n.ln();
        1.0 / (n.powf(a) * ln.powf(b) * ln.ln().powf(g))
    }
}

#[test]
fn bertrand_battery_matches_numeric_oracle() {
    let opts = ProbeOptions {
        j_max: 40,
        ..ProbeOptions::default()
    };
    let mut decided = 0;
    for (a, b, g, expect_decidable) in battery() {
        let symbolic = converges(LogPowerExponents::new(rat_of(a), rat_of(b), rat_of(g)));
        let probe = classify_partial_sums(term_fn(a, b, g), "battery", &opts).unwrap();
        match expect_decidable {
            Some(want) => {
                assert_eq!(symbolic, want, "symbolic verdict for ({a},{b},{g})");
                let got = match probe.classification {
                    ProbeClass::Converges => Convergence::Converges,
                    ProbeClass::Diverges => Convergence::Diverges,
                    ProbeClass::Inconclusive => {
                        panic!("({a},{b},{g}) unexpectedly inconclusive: {probe:?}")
                    }
                };
                assert_eq!(got, symbolic, "oracle disagrees on ({a},{b},{g})");
                decided += 1;
            }
            None => {
                assert_eq!(
                    probe.classification,
                    ProbeClass::Inconclusive,
                    "boundary triple ({a},{b},{g}) should land in the honest band"
                );
            }
        }
    }
    assert_eq!(decided, 18);
}

/// Two-route check: the integral `int P^(1/s)(|X| > t) dt` (symbolic
/// exponent route) and the series `sum u_n / n^(1+1/s)` (numeric quantile
/// route) must agree wherever the numeric probe decides.
#[test]
fn quantile_series_route_matches_integral_route() {
    let opts = ProbeOptions::default();
    // (spec, s) chosen away from the probe's honest band
    let points: Vec<(DistributionSpec, Rat, Convergence)> = vec![
        (ex4_1(rat(8, 5), rat(5, 4)).unwrap(), rat(6, 5), Convergence::Converges),
        (ex4_1(rat(8, 5), rat(5, 4)).unwrap(), rat(8, 5), Convergence::Diverges),
        (ex4_1(rat(8, 5), rat(5, 4)).unwrap(), rat(2, 1), Convergence::Diverges),
        (ex4_2(rat(3, 2)).unwrap(), rat(5, 4), Convergence::Converges),
        (ex4_2(rat(3, 2)).unwrap(), rat(3, 2), Convergence::Diverges),
        (ex4_2(rat(3, 2)).unwrap(), rat(2, 1), Convergence::Diverges),
        (pareto(rat(5, 2), true).unwrap(), rat(2, 1), Convergence::Converges),
        (pareto(rat(5, 2), true).unwrap(), rat(5, 2), Convergence::Diverges),
        (pareto(rat(5, 2), true).unwrap(), rat(3, 1), Convergence::Diverges),
        (logpower(rat(2, 1), rat(3, 1), rat(0, 1)).unwrap(), rat(3, 1), Convergence::Diverges),
    ];
    assert_eq!(points.len(), 10);
    for (spec, s, want) in points {
        let asym = spec.tail_asym().unwrap();
        let triple = slln::bertrand::integral_condition_exponents(asym, s, rat(1, 1));
        assert_eq!(converges(triple), want, "{} s={s}", spec.name());
        let sf = to_f64(s);
        let probe = {
            let spec = &spec;
            slln::criteria::classify_partial_sums(
                move |n| spec.quantile(n).unwrap() / n.powf(1.0 + 1.0 / sf),
                "u_n / n^(1+1/s)",
                &opts,
            )
            .unwrap()
        };
        let got = match probe.classification {
            ProbeClass::Converges => Convergence::Converges,
            ProbeClass::Diverges => Convergence::Diverges,
            ProbeClass::Inconclusive => panic!(
                "{} s={s}: quantile route inconclusive (k={}, l={})",
                spec.name(),
                probe.kappa,
                probe.lambda
            ),
        };
        assert_eq!(got, want, "{} s={s}: routes disagree", spec.name());
    }
}

/// `sum u_n^p / n^2` converges whenever `E|X|^p` is finite (`1 <= p < 2`).
/// The probe must never contradict this; it must confirm it decisively away
/// from its honest band.
#[test]
fn quantile_power_series_is_summable_under_pth_moment() {
    let opts = ProbeOptions::default();
    let decisive: Vec<(DistributionSpec, Rat)> = vec![
        (ex4_2(rat(3, 2)).unwrap(), rat(3, 2)),
        (ex4_1(rat(39, 20), rat(19, 10)).unwrap(), rat(39, 20)),
        (pareto(rat(5, 2), true).unwrap(), rat(3, 2)),
        (ex4_3().unwrap(), rat(1, 1)),
    ];
    for (spec, p) in decisive {
        let pf = to_f64(p);
        let probe = {
            let spec = &spec;
            classify_partial_sums(
                move |n| spec.quantile(n).unwrap().powf(pf) / (n * n),
                "u_n^p / n^2",
                &opts,
            )
            .unwrap()
        };
        assert_eq!(
            probe.classification,
            ProbeClass::Converges,
            "{} p={p}: {probe:?}",
            spec.name()
        );
    }
    // near the log boundary the probe may honestly abstain, but it must
    // never claim divergence
    let spec = ex4_1(rat(8, 5), rat(5, 4)).unwrap();
    let probe = classify_partial_sums(
        |n| spec.quantile(n).unwrap().powf(1.6) / (n * n),
        "u_n^p / n^2",
        &opts,
    )
    .unwrap();
    assert_ne!(probe.classification, ProbeClass::Diverges, "{probe:?}");
}

#[test]
fn power_identity_for_quantiles() {
    // the order-(1 - 1/n) quantile of |X|^q is u_n^q
    let specs = [ex4_2(rat(3, 2)).unwrap(), pareto(rat(2, 1), false).unwrap()];
    for spec in &specs {
        for q in [1.0, 1.3, 2.0] {
            for n in [10.0, 1000.0, 1e6] {
                let u = spec.quantile(n).unwrap();
                let powered =
                    first_below(|t: f64| spec.tail_prob(t.powf(1.0 / q)), 1.0 / n, 1e-12)
                        .unwrap();
                let want = u.powf(q);
                assert!(
                    (powered - want).abs() <= 1e-6 * want.max(1.0),
                    "{} q={q} n={n}: {powered} vs {want}",
                    spec.name()
                );
            }
        }
    }
}

#[test]
fn quantile_over_n_vanishes_under_first_moment() {
    for spec in [
        ex4_2(rat(3, 2)).unwrap(),
        ex4_3().unwrap(),
        pareto(rat(5, 2), true).unwrap(),
        ex4_1(rat(8, 5), rat(5, 4)).unwrap(),
    ] {
        assert!(spec.declared_mean().is_some(), "{}", spec.name());
        let mut prev = f64::INFINITY;
        for k in (5..=30).step_by(5) {
            let n = (2f64).powi(k);
            let ratio = spec.quantile(n).unwrap() / n;
            assert!(ratio <= prev * (1.0 + 1e-9), "{} k={k}", spec.name());
            prev = ratio;
        }
        assert!(prev < 0.05, "{}: u_n/n did not vanish ({prev})", spec.name());
    }
}

#[test]
fn tails_are_monotone_on_log_grids() {
    let specs = [
        ex4_1(rat(8, 5), rat(5, 4)).unwrap(),
        ex4_2(rat(3, 2)).unwrap(),
        ex4_3().unwrap(),
        pareto(rat(5, 2), true).unwrap(),
        pareto(rat(4, 5), false).unwrap(),
        logpower(rat(1, 1), rat(1, 1), rat(2, 1)).unwrap(),
        rademacher(),
    ];
    for spec in &specs {
        let mut prev = f64::INFINITY;
        for i in 0..100 {
            let t = (1e-6f64.ln() + i as f64 * (1e12f64.ln() - 1e-6f64.ln()) / 99.0).exp();
            let w = spec.tail_prob(t);
            assert!(w <= prev + 1e-12, "{} at t={t}", spec.name());
            assert!((0.0..=1.0).contains(&w), "{} at t={t}: {w}", spec.name());
            prev = w;
        }
    }
}

#[test]
fn tail_asym_consistency_beyond_1e6() {
    for spec in [
        ex4_1(rat(8, 5), rat(5, 4)).unwrap(),
        ex4_2(rat(3, 2)).unwrap(),
        ex4_3().unwrap(),
        pareto(rat(5, 2), true).unwrap(),
        pareto(rat(3, 2), false).unwrap(),
        logpower(rat(3, 2), rat(1, 1), rat(3, 1)).unwrap(),
    ] {
        let asym = spec.tail_asym().expect("asymptotic annotated");
        for t in [1e6, 1e8, 1e10] {
            let ratio = spec.tail_prob(t) / asym.eval(t);
            assert!(
                (0.9..=1.1).contains(&ratio),
                "{} at t={t}: ratio {ratio}",
                spec.name()
            );
        }
    }
}

/// The first-order quantile formula for ex4_2 converges only at `lnln/ln`
/// speed; the honest check is that the ratio to it decreases toward 1 and
/// stays within the preasymptotic envelope at reachable `n`.
#[test]
fn ex4_2_quantile_tracks_asymptotic_formula_from_above() {
    let spec = ex4_2(rat(3, 2)).unwrap();
    let p = 1.5;
    // 2b = p * asym scale
    let two_b = spec.tail_asym().unwrap().scale * p;
    let mut prev = f64::INFINITY;
    for n in [1e6, 1e9, 1e12, 1e15] {
        let u = spec.quantile(n).unwrap();
        let formula =
            (two_b * n).powf(1.0 / p) / (n.ln().powf(1.0 / p) * n.ln().ln().powf(2.0 / p));
        let ratio = u / formula;
        assert!(
            ratio > 1.0 && ratio < 2.2,
            "n={n}: ratio {ratio} outside the envelope"
        );
        assert!(ratio < prev, "n={n}: ratio not decreasing");
        prev = ratio;
    }
}

#[test]
fn expected_term_self_consistency_across_disjoint_seeds() {
    let spec = pareto(rat(5, 2), true).unwrap();
    let (e1, s1) =
        estimate_expected_term(&spec, rat(3, 2), rat(1, 1), 10_000, 400, 0xA11CE).unwrap();
    let (e2, s2) =
        estimate_expected_term(&spec, rat(3, 2), rat(1, 1), 10_000, 400, 0xB0B).unwrap();
    let gap = (e1 - e2).abs();
    let slack = 3.0 * (s1 * s1 + s2 * s2).sqrt();
    assert!(gap <= slack, "estimates {e1} vs {e2}, slack {slack}");
}

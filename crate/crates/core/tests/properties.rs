use coded_caching::envelope::{achieve, achieve_envelope, build_run, Scheme, SharingRule};
use coded_caching::model::{build_association, total_size, Association, DemandVector, NetworkConfig};
use coded_caching::scheme1::{deliver_scheme1_checked, place_scheme1, rate_scheme1};
use coded_caching::scheme2::{deliver_scheme2, place_scheme2, rate_scheme2};
use coded_caching::scheme_unknown::{deliver_unknown, place_unknown, rate_unknown};
use coded_caching::simulator::run_end_to_end;
use coded_caching::Rational;
use proptest::prelude::*;

fn partition(k: usize, lambda: usize, picks: &[usize]) -> Vec<Vec<usize>> {
    let mut groups = vec![Vec::new(); lambda];
    for user in 1..=k {
        groups[picks[user - 1] % lambda].push(user);
    }
    groups
}

fn network() -> impl Strategy<Value = (usize, usize, usize, Vec<usize>, Vec<usize>)> {
    (2usize..=6).prop_flat_map(|k| {
        (k..=k + 2, Just(k), 1..=k.min(4), prop::collection::vec(0usize..6, k), Just((1..=k).collect::<Vec<_>>()).prop_shuffle())
    })
}

fn assoc_at(n: usize, k: usize, lambda: usize, picks: &[usize], ms: Rational, mp: Rational) -> (NetworkConfig, Association) {
    let c = NetworkConfig::new(n, k, lambda, ms, mp).unwrap();
    let a = build_association(&c, &partition(k, lambda, picks)).unwrap();
    (c, a)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn unknown_formula_equals_delivery((n, k, lambda, picks, perm) in network(), t_p in 0usize..=6, alpha in 0i128..=4) {
        let t_p = t_p.min(k);
        let m = Rational::from(t_p * n) / Rational::from(k);
        let alpha = Rational::new(alpha, 4);
        let (c, a) = assoc_at(n, k, lambda, &picks, alpha * m, (Rational::ONE - alpha) * m);
        let files: Vec<usize> = perm.iter().map(|&u| u.min(n)).collect();
        let d = DemandVector(files);
        if let (Ok(p), Ok(tx)) = (place_unknown(&c), deliver_unknown(&c, &a, &d)) {
            prop_assert_eq!(total_size(&tx), rate_unknown(&c, a.profile()).unwrap());
            prop_assert!(p.overlap(&a).is_none());
            for u in 1..=k {
                prop_assert_eq!(p.private_memory(u), c.private_mem);
            }
        }
    }

    #[test]
    fn scheme2_formula_equals_delivery((n, k, lambda, picks, perm) in network(), t_s in 0usize..=4, t_p in 0usize..=6) {
        let base = NetworkConfig::new(n, k, lambda, Rational::ZERO, Rational::ZERO).unwrap();
        let a = build_association(&base, &partition(k, lambda, &picks)).unwrap();
        let t_s = t_s.min(lambda);
        let l1 = a.largest_group();
        let ms = Rational::from(t_s * n) / Rational::from(lambda);
        let mp = if t_s == lambda {
            Rational::ZERO
        } else if t_s == 0 {
            Rational::from(t_p.min(k) * n) / Rational::from(k)
        } else {
            Rational::from(t_p.min(l1)) * (base.n() - ms) / Rational::from(l1)
        };
        let c = base.with_memory(ms, mp).unwrap();
        let d = DemandVector(perm);
        let p = place_scheme2(&c, &a).unwrap();
        let tx = deliver_scheme2(&c, &a, &d).unwrap();
        prop_assert_eq!(total_size(&tx), rate_scheme2(&c, &a).unwrap());
        prop_assert!(p.overlap(&a).is_none());
        for h in 1..=lambda {
            prop_assert_eq!(p.helper_memory(h), ms);
        }
        for u in 1..=k {
            prop_assert_eq!(p.private_memory(u), mp);
        }
    }

    #[test]
    fn scheme1_rate_is_dedicated_rate((n, k, lambda, picks, perm) in network(), t in 0usize..=6, q in 0i128..=8) {
        let t = t.min(k);
        let m = Rational::from(t * n) / Rational::from(k);
        let ms = m * Rational::new(q, 8);
        let (c, a) = assoc_at(n, k, lambda, &picks, ms, m - ms);
        if let Ok(p) = place_scheme1(&c, &a) {
            let tx = deliver_scheme1_checked(&c, &a, &DemandVector(perm)).unwrap();
            prop_assert_eq!(total_size(&tx), Rational::from(k - t) / Rational::from(t + 1));
            prop_assert_eq!(rate_scheme1(&c).unwrap(), total_size(&tx));
            prop_assert!(p.overlap(&a).is_none());
        }
    }

    #[test]
    fn envelope_simulates_exactly((n, k, lambda, picks, perm) in network(), u in 0i128..=4, v in 0i128..=4) {
        let ms = Rational::from(n) * Rational::new(u, 4);
        let mp = (Rational::from(n) - ms) * Rational::new(v, 4);
        let (c, a) = assoc_at(n, k, lambda, &picks, ms, mp);
        let d = DemandVector(perm);
        for scheme in Scheme::ALL {
            let Ok(want) = achieve(&c, &a, scheme, SharingRule::Hull) else { continue };
            prop_assert!(want.solution.is_valid_for(ms, mp));
            let e = run_end_to_end(&c, &a, &d, scheme, SharingRule::Hull, 0).unwrap();
            prop_assert!(e.passed(), "{} at ({}, {}): {:?}", scheme, ms, mp, e.report.first_failure());
            prop_assert_eq!(e.report.measured_rate, want.rate);
            let env = achieve_envelope(&c, &a, scheme, SharingRule::Hull).unwrap();
            prop_assert!(env.rate <= want.rate);
        }
    }

    #[test]
    fn envelope_is_non_increasing_in_private_memory((n, k, lambda, picks, _perm) in network(), a2 in 0i128..=8) {
        let ms = Rational::new(a2, 2);
        prop_assume!(ms <= Rational::from(n));
        let base = NetworkConfig::new(n, k, lambda, ms, Rational::ZERO).unwrap();
        let a = build_association(&base, &partition(k, lambda, &picks)).unwrap();
        for scheme in [Scheme::Unknown, Scheme::Scheme2] {
            let mut prev: Option<Rational> = None;
            let mut mp = Rational::ZERO;
            while ms + mp <= base.n() {
                let c = base.with_memory(ms, mp).unwrap();
                if let Ok(r) = achieve_envelope(&c, &a, scheme, SharingRule::Hull) {
                    if let Some(p) = prev {
                        prop_assert!(r.rate <= p, "{} Ms={} Mp={}: {} after {}", scheme, ms, mp, r.rate, p);
                    }
                    prev = Some(r.rate);
                }
                mp += Rational::new(1, 4);
            }
        }
    }
}

#[test]
fn nested_run_matches_its_rate() {
    let c = NetworkConfig::new(4, 4, 2, Rational::ONE, Rational::ONE).unwrap();
    let a = build_association(&c, &[vec![1, 2, 3], vec![4]]).unwrap();
    let run = build_run(&c, &a, &DemandVector::identity(4), Scheme::Scheme2, SharingRule::Nested).unwrap();
    assert_eq!(run.rate(), Rational::new(11, 12));
    assert_eq!(run.helper_memory(1), Rational::ONE);
    assert_eq!(run.private_memory(4), Rational::ONE);
}

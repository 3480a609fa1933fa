use std::f64::consts::TAU;

use proptest::prelude::*;
use rnlsim::distribution::PAIRS;
use rnlsim::harness::{estimate_correlation, CoincidenceCounts};
use rnlsim::rnl::{conditional_from_tables, conditional_unreduced, rnl_joint_with, QmTables};
use rnlsim::timing::{boost_time, classify_with_guard, impact_labels, ImpactSchedule, SPEED_OF_LIGHT};
use rnlsim::{
    amplitude_oracle, qm_correlation, qm_distinguishable_joint, qm_joint, qm_joint_probability, FrameVelocity,
    Indistinguishability, InterferometerTopology, ModelVariant, NonBeforeImpact, Outcome, Pairing, PhaseSettings, Site,
    SpacetimeEvent,
};

const TOL: f64 = 1e-12;

fn settings() -> impl Strategy<Value = PhaseSettings> {
    (0.0..TAU, 0.0..TAU, 0.0..TAU).prop_map(|(a, b, c)| PhaseSettings::from_radians(a, b, c).unwrap())
}

fn conditions() -> impl Strategy<Value = Indistinguishability> {
    (any::<bool>(), any::<bool>()).prop_map(|(condition1, condition2)| Indistinguishability { condition1, condition2 })
}

proptest! {
    #[test]
    fn qm_table_normalized_with_fair_marginals(s in settings()) {
        prop_assert!(qm_joint(&s).has_fair_marginals(TOL));
    }

    #[test]
    fn correlation_is_signed_sum(s in settings()) {
        let sum: f64 = PAIRS.iter().map(|&(x, y)| x.sign() * y.sign() * qm_joint_probability(&s, x, y)).sum();
        prop_assert!((qm_correlation(&s) - sum).abs() < TOL);
    }

    #[test]
    fn correlation_trig_identity(s in settings()) {
        let product = (s.phi11.radians() - s.phi21.radians()).sin() * s.phi22.radians().sin();
        prop_assert!((qm_correlation(&s) - product).abs() < TOL);
    }

    #[test]
    fn periodic_in_each_phase(s in settings(), which in 0usize..3, k in -3i32..=3) {
        let mut r = [s.phi11.radians(), s.phi21.radians(), s.phi22.radians()];
        r[which] += f64::from(k) * TAU;
        let shifted = PhaseSettings::from_radians(r[0], r[1], r[2]).unwrap();
        prop_assert!(qm_joint(&s).max_abs_diff(&qm_joint(&shifted)) < 1e-11);
    }

    #[test]
    fn oracle_matches_closed_form(s in settings()) {
        let d = amplitude_oracle(&s, &InterferometerTopology::calibrated()).unwrap();
        prop_assert!(d.max_abs_diff(&qm_joint(&s)) < TOL);
    }

    #[test]
    fn every_rnl_table_is_fair(s in settings(), c in conditions(), p in 0usize..7, v in 0usize..3) {
        let tables = QmTables::new(&s, c);
        let d = rnl_joint_with(&tables, Pairing::ALL[p], ModelVariant::ALL[v]);
        prop_assert!(d.has_fair_marginals(TOL));
    }

    #[test]
    fn two_non_before_tables_uncorrelated(s in settings(), c in conditions()) {
        let tables = QmTables::new(&s, c);
        for p in [Pairing::After22NonBefore, Pairing::After21NonBefore] {
            prop_assert!(rnl_joint_with(&tables, p, ModelVariant::RnlStandard).correlation().abs() < TOL);
        }
    }

    #[test]
    fn mixed_timings_match_qm(s in settings()) {
        let tables = QmTables::new(&s, Indistinguishability::default());
        for p in [Pairing::After22Before22, Pairing::BeforeNonBefore] {
            let rnl = rnl_joint_with(&tables, p, ModelVariant::RnlStandard);
            prop_assert_eq!(rnl, qm_joint(&s));
            prop_assert_eq!(rnl, rnl_joint_with(&tables, p, ModelVariant::Qm));
        }
    }

    #[test]
    fn variants_differ_only_on_series_three_pairing(s in settings()) {
        let tables = QmTables::new(&s, Indistinguishability::default());
        for p in Pairing::ALL {
            let a = rnl_joint_with(&tables, p, ModelVariant::RnlStandard);
            let b = rnl_joint_with(&tables, p, ModelVariant::RnlAlternative);
            if p == Pairing::After21NonBefore {
                prop_assert_eq!(b, qm_joint(&s));
            } else {
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn occam_reductions_hold(s in settings()) {
        // the conditional on the full before pair ignores the photon's own
        // before value; for a22 it also does not matter whether the partner
        // pair was (b11, b22) or (b11, b21)
        let tables = QmTables::new(&s, Indistinguishability::default());
        let before = qm_distinguishable_joint();
        for impact in [NonBeforeImpact::A11After21, NonBeforeImpact::A11After22, NonBeforeImpact::A22] {
            let reduced = conditional_from_tables(&tables, impact);
            for target in Outcome::ALL {
                for (sigma, omega) in PAIRS {
                    let full = conditional_unreduced(&tables, impact, &before, target, sigma, omega);
                    let own_flipped = match impact {
                        NonBeforeImpact::A22 => conditional_unreduced(&tables, impact, &before, target, sigma, omega.flipped()),
                        _ => conditional_unreduced(&tables, impact, &before, target, sigma.flipped(), omega),
                    };
                    let partner = if impact == NonBeforeImpact::A22 { sigma } else { omega };
                    prop_assert!((full - own_flipped).abs() < TOL);
                    prop_assert!((full - reduced.get(target, partner)).abs() < TOL);
                    prop_assert!((reduced.given_before_pair(target, sigma, omega) - full).abs() < TOL);
                }
            }
        }
    }

    #[test]
    fn estimator_bounded(r in proptest::array::uniform4(0u64..10_000)) {
        prop_assume!(r.iter().sum::<u64>() > 0);
        let e = estimate_correlation(&CoincidenceCounts::new(r)).unwrap();
        prop_assert!(e.e_hat.abs() <= 1.0);
        prop_assert!(e.stderr >= 0.0);
    }

    #[test]
    fn same_place_order_survives_boost(x in -1e3f64..1e3, t in -1e-6f64..1e-6, dt in 1e-12f64..1e-6, beta in -0.999f64..0.999) {
        let b = FrameVelocity::new(beta).unwrap();
        let a = SpacetimeEvent::new(Site::Bs11, x, t).unwrap();
        let later = SpacetimeEvent::new(Site::Bs11, x, t + dt).unwrap();
        prop_assert!(boost_time(&a, b) < boost_time(&later, b));
        prop_assert_eq!(boost_time(&a, FrameVelocity::REST), t);
    }

    #[test]
    fn classifier_total_on_strict_schedules(
        t11 in 0.0f64..100.0, t21 in 0.0f64..50.0, leg in 1.0f64..50.0,
        b in proptest::array::uniform3(-0.95f64..0.95),
    ) {
        // photon 2 moves at c between BS21 and BS22, photon 1 moves away
        let ns = 1e-9;
        let x21 = SPEED_OF_LIGHT * t21 * ns;
        let sched = ImpactSchedule::new(
            [
                SpacetimeEvent::new(Site::Bs11, -SPEED_OF_LIGHT * t11 * ns, t11 * ns).unwrap(),
                SpacetimeEvent::new(Site::Bs21, x21, t21 * ns).unwrap(),
                SpacetimeEvent::new(Site::Bs22, x21 + SPEED_OF_LIGHT * leg * ns, (t21 + leg) * ns).unwrap(),
            ],
            b.map(|v| FrameVelocity::new(v).unwrap()),
        ).unwrap();
        prop_assume!(impact_labels(&sched, 1e-12).is_ok());
        let labels = impact_labels(&sched, 0.0).unwrap();
        match classify_with_guard(&sched, 0.0) {
            Ok(a) => {
                prop_assert_eq!(a.photon1(), labels.photon1);
                prop_assert_eq!(a.photon2(), labels.photon2);
            }
            Err(rnlsim::Error::Unrepresentable(..)) => {
                prop_assert_eq!(labels.photon1, rnlsim::timing::Photon1Label::AfterBs21);
                prop_assert_eq!(labels.photon2, rnlsim::timing::Photon2Label::BeforeAtBs22);
            }
            Err(e) => prop_assert!(false, "unexpected error {}", e),
        }
    }
}

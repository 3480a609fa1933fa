//! Acceptance criteria. Runs as a plain binary (no libtest harness) so every
//! criterion prints one PASS/FAIL line; exits non-zero if any fails.

use std::f64::consts::TAU;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rnlsim::harness::{compare_report, run_experiment, GeometrySpec, RunConfig};
use rnlsim::oracle::max_deviation_on_grid;
use rnlsim::rnl::{predict_with, rnl_joint_with, two_nonbefore_factors, QmTables};
use rnlsim::timing::{boost_time, classify_with_guard, ImpactSchedule, Photon1Label, SPEED_OF_LIGHT};
use rnlsim::{
    amplitude_oracle, qm_correlation, qm_joint, schedule_from_geometry, series_preset, two_nonbefore_correlation,
    FrameVelocity, Indistinguishability, InterferometerTopology, JointDistribution, ModelVariant, Pairing,
    PhaseSettings, Site, SpacetimeEvent, TimingAssignment, PAIRS,
};

const CLOSED_FORM_TOL: f64 = 1e-12;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn random_settings(rng: &mut impl Rng) -> PhaseSettings {
    PhaseSettings::from_radians(
        rng.random::<f64>() * TAU,
        rng.random::<f64>() * TAU,
        rng.random::<f64>() * TAU,
    )
    .unwrap()
}

/// Two-non-before table summed term by term from the closed-form quantum
/// tables, written out here independently of the library.
#[allow(clippy::needless_range_loop)]
fn brute_force_two_nonbefore(s: &PhaseSettings, pairing: Pairing) -> [[f64; 2]; 2] {
    let (a, b, c) = (s.phi11.radians(), s.phi21.radians(), s.phi22.radians());
    let sign = [1.0, -1.0];
    let p_bs22 = |i: usize, j: usize| 0.25 + sign[i] * sign[j] / 8.0 * ((a - b - c).cos() - (a - b + c).cos());
    let p_bs21 = |i: usize, j: usize| 0.25 + sign[i] * sign[j] / 4.0 * (a - b).cos();
    let mut out = [[0.0; 2]; 2];
    for s_new in 0..2 {
        for w_new in 0..2 {
            for s_old in 0..2 {
                for w_old in 0..2 {
                    let before = 0.25;
                    let c1 = match pairing {
                        Pairing::After22NonBefore => 2.0 * p_bs22(s_new, w_old),
                        _ => 2.0 * p_bs21(s_new, w_old),
                    };
                    let c2 = 2.0 * p_bs22(s_old, w_new);
                    out[s_new][w_new] += before * c1 * c2;
                }
            }
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let s = PhaseSettings::from_degrees(45.0, -45.0, 90.0).unwrap();
    let e_qm = qm_correlation(&s);
    let e_rnl = two_nonbefore_correlation(&s, Pairing::After21NonBefore).unwrap();
    check((e_qm - 1.0).abs() < CLOSED_FORM_TOL, format!("E_QM = {e_qm}"))?;
    check(e_rnl.abs() < CLOSED_FORM_TOL, format!("E_RNL = {e_rnl}"))?;
    Ok(format!("E_QM = {e_qm}, E(a11[21],a22) = {e_rnl}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let dev = max_deviation_on_grid(&InterferometerTopology::calibrated(), 13).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(dev < CLOSED_FORM_TOL, format!("max deviation {dev:e}"))?;
    check(elapsed.as_secs_f64() < 1.0, format!("took {elapsed:?}"))?;
    Ok(format!(
        "13^3 grid max |oracle - closed form| = {dev:.2e} in {elapsed:?}"
    ))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_e: f64 = 0.0;
    let mut worst_table: f64 = 0.0;
    for _ in 0..1000 {
        let s = random_settings(&mut rng);
        let tables = QmTables::new(&s, Indistinguishability::default());
        for pairing in [Pairing::After22NonBefore, Pairing::After21NonBefore] {
            let table = rnl_joint_with(&tables, pairing, ModelVariant::RnlStandard);
            let [bb, ab, ba] = two_nonbefore_factors(&tables, pairing).unwrap();
            let product = bb * ab * ba;
            let e = table.correlation();
            check(
                (e - product).abs() < CLOSED_FORM_TOL,
                format!("table E {e} vs product {product}"),
            )?;
            worst_e = worst_e.max(e.abs());
            let oracle = brute_force_two_nonbefore(&s, pairing);
            for (x, y) in PAIRS {
                let i = |o: rnlsim::Outcome| if o == rnlsim::Outcome::Plus { 0 } else { 1 };
                worst_table = worst_table.max((table.get(x, y) - oracle[i(x)][i(y)]).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    check(worst_e < CLOSED_FORM_TOL, format!("max |E| = {worst_e:e}"))?;
    check(
        worst_table < CLOSED_FORM_TOL,
        format!("table deviates from brute force by {worst_table:e}"),
    )?;
    check(elapsed.as_secs_f64() < 1.0, format!("took {elapsed:?}"))?;
    Ok(format!(
        "1000 settings x 2 pairings: max |E| = {worst_e:.1e}, max |table - brute force| = {worst_table:.1e}"
    ))
}

fn criterion_4() -> Outcome {
    let expected = [
        Pairing::After22Before22,
        Pairing::BeforeNonBefore,
        Pairing::After21NonBefore,
    ];
    for (n, want) in (1u8..=3).zip(expected) {
        let sched = schedule_from_geometry(&series_preset(n).unwrap()).unwrap();
        let a = rnlsim::classify(&sched).map_err(|e| e.to_string())?;
        check(
            a.pairing == want && a.series == Some(n),
            format!("series {n} gave {}", a.pairing),
        )?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    // rest frames: classification is the lab ordering
    for _ in 0..10_000 {
        let t21 = rng.random::<f64>();
        let t22 = t21 + 1e-3 + rng.random::<f64>();
        let t11 = rng.random::<f64>() * 3.0;
        let sched = ImpactSchedule::at_rest([
            SpacetimeEvent::new(Site::Bs11, -rng.random::<f64>(), t11).unwrap(),
            SpacetimeEvent::new(Site::Bs21, rng.random::<f64>(), t21).unwrap(),
            SpacetimeEvent::new(Site::Bs22, 2.0 + rng.random::<f64>(), t22).unwrap(),
        ])
        .unwrap();
        let a = classify_with_guard(&sched, 0.0).map_err(|e| e.to_string())?;
        let want1 = if t11 < t21 {
            Photon1Label::Before
        } else if t11 < t22 {
            Photon1Label::AfterBs21
        } else {
            Photon1Label::AfterBs22
        };
        let want_series = if t22 < t11 {
            1
        } else if t11 < t21 {
            2
        } else {
            3
        };
        check(
            a.photon1() == want1,
            format!("rest photon-1 label {} for {t11},{t21},{t22}", a.photon1()),
        )?;
        check(
            a.series == Some(want_series),
            format!("rest series {:?} for {t11},{t21},{t22}", a.series),
        )?;
    }

    for _ in 0..10_000 {
        let x = (rng.random::<f64>() - 0.5) * 1e3;
        let t = (rng.random::<f64>() - 0.5) * 1e-5;
        let e = SpacetimeEvent::new(Site::Bs21, x, t).unwrap();
        check(boost_time(&e, FrameVelocity::REST) == t, "boost identity violated")?;
        let beta = FrameVelocity::new((rng.random::<f64>() * 2.0 - 1.0) * 0.999).unwrap();
        let dt = (rng.random::<f64>() + 1e-6) * 1e-6;
        let later = SpacetimeEvent::new(Site::Bs22, x, t + dt).unwrap();
        check(
            boost_time(&e, beta) < boost_time(&later, beta),
            "boost reversed same-place order",
        )?;
        // photon worldline (lightlike) order is frame independent too
        let down = SpacetimeEvent::new(Site::Bs22, x + SPEED_OF_LIGHT * dt, t + dt).unwrap();
        check(
            boost_time(&e, beta) < boost_time(&down, beta),
            "boost reversed lightlike order",
        )?;
    }
    Ok("presets -> (a11[22],b22) / (b11,a22) / (a11[21],a22); 10^4 rest schedules; 10^4 boosts".into())
}

fn criterion_5() -> Outcome {
    let config = RunConfig {
        geometry: GeometrySpec::Series(3),
        phases_deg: [45.0, -45.0, 90.0],
        variants: ModelVariant::ALL.to_vec(),
        n_events: 1_000_000,
        seed: 20_240_501,
        workers: 1,
        ..RunConfig::default()
    };
    let start = Instant::now();
    let run = run_experiment(&config).map_err(|e| e.to_string())?;
    let single = start.elapsed();
    check(
        run.timing.pairing == Pairing::After21NonBefore,
        "series 3 misclassified",
    )?;

    let qm = run.run(ModelVariant::Qm).unwrap();
    check(qm.estimate.e_hat == 1.0, format!("QM e_hat {}", qm.estimate.e_hat))?;
    check(
        qm.counts.r[1] == 0 && qm.counts.r[2] == 0,
        format!("QM counts {:?}", qm.counts.r),
    )?;
    let std = run.run(ModelVariant::RnlStandard).unwrap();
    check(
        std.estimate.e_hat.abs() < 0.005,
        format!("RNL_STANDARD e_hat {}", std.estimate.e_hat),
    )?;
    let alt = run.run(ModelVariant::RnlAlternative).unwrap();
    check(
        alt.estimate.e_hat == 1.0,
        format!("RNL_ALTERNATIVE e_hat {}", alt.estimate.e_hat),
    )?;
    check(single.as_secs_f64() < 5.0, format!("single-worker run took {single:?}"))?;

    let mut timings = Vec::new();
    for workers in [2, 4, 8] {
        let start = Instant::now();
        let other = run_experiment(&RunConfig {
            workers,
            ..config.clone()
        })
        .map_err(|e| e.to_string())?;
        timings.push((workers, start.elapsed()));
        for v in ModelVariant::ALL {
            check(
                other.counts(v) == run.counts(v),
                format!("{v}: counts differ between 1 and {workers} workers"),
            )?;
        }
    }
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let speedups: Vec<String> = timings
        .iter()
        .map(|(w, t)| format!("{w}w {:.2}x", single.as_secs_f64() / t.as_secs_f64()))
        .collect();
    Ok(format!(
        "QM {} / RNL_STANDARD {:+.5} / RNL_ALTERNATIVE {}; 1 worker {single:.2?}; bit-identical for 2/4/8 workers; speedup [{}] on {cores} core(s)",
        qm.estimate.e_hat,
        std.estimate.e_hat,
        alt.estimate.e_hat,
        speedups.join(", ")
    ))
}

fn criterion_6() -> Outcome {
    let config = RunConfig {
        n_events: 200_000,
        seed: 99,
        ..RunConfig::default()
    };
    let a = compare_report(&config).map_err(|e| e.to_string())?.to_csv();
    let b = compare_report(&RunConfig {
        workers: 3,
        ..config.clone()
    })
    .map_err(|e| e.to_string())?
    .to_csv();
    check(
        a.as_bytes() == b.as_bytes(),
        "CSV output differs between identical runs",
    )?;
    Ok(format!("{} bytes identical", a.len()))
}

fn assert_fair(d: &JointDistribution, what: &str) -> Result<(), String> {
    check(
        d.has_fair_marginals(CLOSED_FORM_TOL),
        format!("{what}: {:?}", d.entries()),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let topo = InterferometerTopology::calibrated();
    let mut checked = 0usize;
    for _ in 0..10_000 {
        let s = random_settings(&mut rng);
        assert_fair(&qm_joint(&s), "qm_joint")?;
        assert_fair(&amplitude_oracle(&s, &topo).unwrap(), "oracle")?;
        let pairing = Pairing::ALL[rng.random_range(0..Pairing::ALL.len())];
        let variant = ModelVariant::ALL[rng.random_range(0..3)];
        let conditions = Indistinguishability {
            condition1: rng.random_bool(0.8),
            condition2: rng.random_bool(0.8),
        };
        let p = predict_with(&s, &TimingAssignment::from_pairing(pairing), variant, conditions);
        assert_fair(&p.joint, &format!("{variant} {pairing}"))?;
        check(
            (p.correlation - p.joint.correlation()).abs() < CLOSED_FORM_TOL,
            "prediction correlation mismatch",
        )?;
        checked += 3;
    }
    Ok(format!("{checked} tables normalized with marginals 1/2"))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("closed-form reproduction at 45/-45/90", criterion_1),
        ("amplitude oracle equals closed form on 13^3 grid", criterion_2),
        ("two-non-before theorem over 1000 random settings", criterion_3),
        ("timing presets, rest reduction, boost properties", criterion_4),
        ("Monte Carlo convergence and worker-count invariance", criterion_5),
        ("byte-identical CSV for identical configs", criterion_6),
        ("joint-distribution invariants over 10^4 draws", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("[PASS] {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {}. {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

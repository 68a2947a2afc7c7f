use charvar::algebra::kappa;
use charvar::dynamics::{
    equidistribution_test, int_triple, integer_walk, random_fricke_point, random_su2_point, random_walk_orbit,
    recurrence_probe, HistogramSpec, MoveSampler, OrbitConfig, RegimeTag,
};
use charvar::{CharacterClass, TracePoint};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn su2_walk_stays_on_its_level_and_class() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let start = random_su2_point(&mut rng, 0.5).unwrap();
    assert!((kappa(&start).unwrap().re - 0.5).abs() < 1e-12);
    let mut cfg = OrbitConfig::new(5, 50_000);
    cfg.move_sampler = MoveSampler::Extended;
    cfg.record_every = 10;
    cfg.tolerance = 1e-9;
    let r = random_walk_orbit(&start, &cfg).unwrap();
    assert!(r.kappa_drift <= 1e-9);
    assert_eq!(r.escaped_steps, 0);
    assert!(r.classification_constant);
    assert_eq!(r.classification_counts.keys().copied().collect::<Vec<_>>(), vec![CharacterClass::SU2]);
    assert_eq!(r.samples.len(), 5001);
    let stats = equidistribution_test(&r, 0.5, 4).unwrap();
    assert!(!stats.degenerate);
    assert_eq!(stats.total, 5000);
}

#[test]
fn histogram_built_during_walk_matches_bins() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let start = random_su2_point(&mut rng, 1.0).unwrap();
    let mut cfg = OrbitConfig::new(7, 20_000);
    cfg.histogram = Some(HistogramSpec::su2_box(1.0, 8).unwrap());
    let r = random_walk_orbit(&start, &cfg).unwrap();
    let h = r.bins.as_ref().unwrap();
    assert_eq!(h.total, 20_000);
    assert_eq!(h.counts.iter().sum::<u64>() + h.outside, 20_000);
    let stats = equidistribution_test(&r, 1.0, 8).unwrap();
    assert_eq!(stats.total, 20_000);
}

#[test]
fn fricke_walks_escape() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for seed in 0..5 {
        let p = random_fricke_point(&mut rng, -6.0).unwrap();
        assert!((kappa(&p).unwrap().re + 6.0).abs() < 1e-9);
        let r = recurrence_probe(&p, &OrbitConfig::new(seed, 20_000), 0.1).unwrap();
        assert_eq!(r.regime.tag, RegimeTag::ProperFricke);
        assert!(r.statistic < 1e-2, "{}", r.statistic);
    }
}

#[test]
fn markov_walk_agrees_with_exact_arithmetic() {
    for seed in 0..4 {
        let cfg = OrbitConfig::new(seed, 30_000);
        let float = random_walk_orbit(&TracePoint::oneholed_real(3.0, 3.0, 3.0), &cfg).unwrap();
        let exact = integer_walk(&int_triple(3, 3, 3), &cfg, &(BigInt::from(1) << 4096)).unwrap();
        assert_eq!(float.recurrence_hits, exact.returns, "seed {seed}");
        assert_eq!(float.kappa_drift, 0.0);
    }
}

use haarent::maxent::{self, SimplexPoint};
use proptest::collection::vec;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn random_starts_reach_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [3usize, 8, 64] {
        let nu: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..3.0)).collect();
        let mass = rng.gen_range(0.5..4.0);
        let target = maxent::maximizer(&nu, mass);
        for start in 0..20u64 {
            let (p, s) = maxent::maximize_entropy(&nu, mass, 20_000, 0.1, start).unwrap();
            let d = p.sup_distance(&target);
            assert!(d < 1e-6, "n={n} start={start}: distance {d}");
            let best = maxent::discrete_entropy(&target, &nu);
            assert!(s <= best + 1e-12 && s > best - 1e-9);
        }
    }
}

#[test]
fn concavity_probe_is_clean() {
    let r = maxent::concavity_probe(&[1.0, 2.0, 0.5, 4.0], 1000, 3).unwrap();
    assert!(r.passed, "{r:?}");
    assert!(r.scope.starts_with("1000 chords, 0 violations"));
}

proptest! {
    #[test]
    fn projection_lands_on_simplex(v in vec(-5.0f64..5.0, 1..30), mass in 0.1f64..10.0) {
        let p = SimplexPoint::project(&v, mass);
        prop_assert!(p.weights.iter().all(|w| *w >= 0.0));
        let total: f64 = p.weights.iter().sum();
        prop_assert!((total - mass).abs() < 1e-9 * mass.max(1.0));
    }

    #[test]
    fn maximizer_beats_random_points(nu in vec(0.1f64..5.0, 2..12), seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let best = maxent::discrete_entropy(&maxent::maximizer(&nu, 1.0), &nu);
        let q = SimplexPoint::random(nu.len(), 1.0, &mut rng);
        prop_assert!(maxent::discrete_entropy(&q.weights, &nu) <= best + 1e-12);
    }
}

use infocausal::boxes::{inner_product_isotropic_box, BiasVector};
use infocausal::dist::{
    ancilla_evolution_slack, conditional_entropy, mutual_information, shannon_entropy,
    JointDistribution, Variable,
};
use infocausal::games::{bit_name, evaluate_rac, RacGame, ALPHA, BETA};
use infocausal::gram::{gram_construct, gram_to_box, success_chain};
use infocausal::strategies::{explicit_classical, transfer_nonlocal_to_rac};
use proptest::prelude::*;

fn weights(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, len).prop_map(|raw| {
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|v| v / total).collect()
    })
}

/// Joint over three variables a, b, c with cardinalities 2..=3.
fn joint() -> impl Strategy<Value = JointDistribution> {
    prop::collection::vec(2usize..=3, 3).prop_flat_map(|cards| {
        let size = cards.iter().product();
        weights(size).prop_map(move |table| {
            let vars = ["a", "b", "c"]
                .iter()
                .zip(&cards)
                .map(|(n, c)| Variable::new(*n, *c))
                .collect();
            JointDistribution::new(vars, table).unwrap()
        })
    })
}

/// A deterministic one-bit strategy on n bits from raw tables.
fn classical(n: usize) -> impl Strategy<Value = infocausal::strategies::Strategy> {
    (
        prop::collection::vec(0usize..2, 1 << n),
        prop::collection::vec(0u8..2, 2 * n),
    )
        .prop_map(move |(message, guess)| explicit_classical(n, 1, message, guess).unwrap())
}

fn targets(len: usize) -> impl Strategy<Value = BiasVector> {
    (prop::collection::vec(-1.0f64..1.0, len), 0.0f64..=1.0).prop_map(|(raw, radius)| {
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
        BiasVector::new(raw.into_iter().map(|v| v * radius / norm).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn marginals_compose(d in joint()) {
        let direct = d.marginal(&["c", "a"]).unwrap();
        let nested = d.marginal(&["a", "c"]).unwrap().marginal(&["c", "a"]).unwrap();
        for (x, y) in direct.table().iter().zip(nested.table()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        let total: f64 = d.marginal(&["b"]).unwrap().table().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_chain_rule(d in joint()) {
        let lhs = shannon_entropy(&d, &["a", "b", "c"]).unwrap();
        let rhs = shannon_entropy(&d, &["a"]).unwrap()
            + conditional_entropy(&d, &["b"], &["a"]).unwrap()
            + conditional_entropy(&d, &["c"], &["a", "b"]).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9);
    }

    #[test]
    fn mutual_information_is_symmetric_and_non_negative(d in joint()) {
        let ab = mutual_information(&d, &["a"], &["b", "c"]).unwrap();
        let ba = mutual_information(&d, &["b", "c"], &["a"]).unwrap();
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!(ab >= -1e-12);
    }

    #[test]
    fn local_transformations_never_beat_the_joint(
        d in joint(),
        rows in 1usize..=4,
        seed in any::<u64>(),
    ) {
        let card = d.variables()[1].cardinality;
        let matrix = {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            infocausal::dist::random_stochastic_matrix(rows, card, &mut rng)
        };
        let slack = ancilla_evolution_slack(&d, &["a", "c"], "b", &matrix).unwrap();
        prop_assert!(slack >= -1e-9);
    }

    #[test]
    fn channel_output_is_normalized(d in joint(), seed in any::<u64>()) {
        let card = d.variables()[0].cardinality;
        let m = {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            infocausal::dist::random_stochastic_matrix(4, card, &mut rng)
        };
        let out = infocausal::dist::apply_channel(&d, "a", &m).unwrap();
        let total: f64 = out.table().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert_eq!(out.variables()[0].cardinality, 4);
        let before = d.marginal(&["b", "c"]).unwrap();
        let after = out.marginal(&["b", "c"]).unwrap();
        for (x, y) in before.table().iter().zip(after.table()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn success_is_weighted_mean_of_biases(
        s in classical(3),
        p in weights(8),
        q in weights(3),
    ) {
        let game = RacGame::new(3, 1).unwrap().with_input_dist(p).unwrap().with_k_dist(q.clone()).unwrap();
        let r = evaluate_rac(&game, &s).unwrap();
        let mean: f64 = r.bias_per_bob_input.values().iter().zip(&q).map(|(e, w)| e * w).sum();
        prop_assert!((r.success_probability - 0.5 * (1.0 + mean)).abs() < 1e-12);
    }

    #[test]
    fn report_joints_are_consistent(s in classical(3), p in weights(8)) {
        let game = RacGame::new(3, 1).unwrap().with_input_dist(p.clone()).unwrap();
        let r = evaluate_rac(&game, &s).unwrap();
        let names: Vec<String> = (0..3).map(bit_name).collect();
        let x: Vec<&str> = names.iter().map(String::as_str).collect();
        for (k, joint) in r.joints.iter().enumerate() {
            let px = joint.marginal(&x).unwrap();
            for (a, b) in px.table().iter().zip(&p) {
                prop_assert!((a - b).abs() < 1e-12);
            }
            let pair = r.pair_joint(k).unwrap();
            let hit = pair.table()[0] + pair.table()[3];
            prop_assert!((hit - r.success_per_bob_input()[k]).abs() < 1e-12);
            let alpha = joint.marginal(&[ALPHA]).unwrap();
            let alpha0 = r.joints[0].marginal(&[ALPHA]).unwrap();
            prop_assert_eq!(alpha.table(), alpha0.table());
            prop_assert!(mutual_information(joint, &[&bit_name(k)], &[BETA]).unwrap() >= -1e-12);
        }
    }

    #[test]
    fn transferred_isotropic_boxes_keep_their_bias(n in 1usize..=3, e in 0.0f64..=1.0) {
        let bx = inner_product_isotropic_box(n, e).unwrap();
        let r = evaluate_rac(&RacGame::new(n, 1).unwrap(), &transfer_nonlocal_to_rac(bx, n).unwrap()).unwrap();
        for b in r.bias_per_bob_input.values() {
            prop_assert!((b - e).abs() < 1e-12);
        }
    }

    #[test]
    fn gram_vectors_reproduce_targets(n in 1usize..=3, all_inputs in any::<bool>(), seed in any::<u64>()) {
        let len = if all_inputs { 1 << n } else { n };
        let t = {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let raw: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
            let radius: f64 = rng.gen();
            BiasVector::new(raw.into_iter().map(|v| v * radius / norm).collect()).unwrap()
        };
        let sys = gram_construct(&t, n).unwrap();
        let sum = t.sum_of_squares();
        for x in 0..1usize << n {
            prop_assert!((sys.u_norm(x).powi(2) - sum).abs() < 1e-12);
            for i in 0..t.len() {
                prop_assert!((sys.achieved_correlator(x, i) - t.values()[i]).abs() < 1e-12);
            }
        }
        for i in 0..t.len() {
            for j in 0..t.len() {
                let dot: f64 = sys.v(i).iter().zip(sys.v(j)).map(|(a, b)| a * b).sum();
                let delta = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot - delta).abs() < 1e-12);
            }
        }
        prop_assert!(infocausal::boxes::check_no_signalling(&gram_to_box(&sys).unwrap()).passes);
    }

    #[test]
    fn success_chain_is_ordered(t in targets(4)) {
        let c = success_chain(&t);
        prop_assert!(c.success <= c.root_mean_square + 1e-12);
        prop_assert!(c.root_mean_square <= c.bound + 1e-12);
    }
}

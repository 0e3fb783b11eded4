//! Property-based invariants of the decomposition and the neighborhood
//! canonicalization, driven by seeded Boltzmann draws.

use cpg_core::graph::decompose::{decompose, recompose};
use cpg_core::graph::iso::isomorphic_networks;
use cpg_core::graph::neighborhood::neighborhood_key;
use cpg_core::graph::network::Network;
use cpg_core::sampler::boltzmann::sample_boltzmann_network;
use cpg_core::sampler::connected::sample_connected_cubic;
use cpg_core::sampler::context::SamplerContext;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn context() -> &'static SamplerContext {
    use std::sync::OnceLock;
    static CTX: OnceLock<SamplerContext> = OnceLock::new();
    CTX.get_or_init(|| SamplerContext::with_order(256).unwrap())
}

/// Draws one nonempty network from a seed.
fn seeded_network(seed: u64) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        if let Some(net) = sample_boltzmann_network(context(), &mut rng).unwrap() {
            return net;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decompose_then_recompose_is_identity_up_to_isomorphism(seed in any::<u64>()) {
        let net = seeded_network(seed);
        let tree = decompose(&net).unwrap();
        let back = recompose(&tree).unwrap();
        prop_assert!(isomorphic_networks(&net, &back));
    }

    #[test]
    fn tree_size_equals_vertex_count(seed in any::<u64>()) {
        let net = seeded_network(seed);
        let tree = decompose(&net).unwrap();
        prop_assert_eq!(tree.size(), net.n());
    }

    #[test]
    fn cores_are_invariant_under_relabeling(seed in any::<u64>()) {
        let net = seeded_network(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
        let mut perm: Vec<usize> = (0..net.n()).collect();
        perm.shuffle(&mut rng);
        let relabeled = Network::new_unchecked(
            net.graph.relabeled(&perm),
            net.root_edge,
            (perm[net.poles.0], perm[net.poles.1]),
        );
        let mut sizes_a: Vec<usize> = decompose(&net)
            .unwrap()
            .cores()
            .iter()
            .map(|(c, _)| c.n())
            .collect();
        let mut sizes_b: Vec<usize> = decompose(&relabeled)
            .unwrap()
            .cores()
            .iter()
            .map(|(c, _)| c.n())
            .collect();
        sizes_a.sort_unstable();
        sizes_b.sort_unstable();
        prop_assert_eq!(sizes_a, sizes_b);
    }

    #[test]
    fn neighborhood_keys_are_invariant_under_relabeling(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = sample_connected_cubic(context(), 20, 4, &mut rng, 1 << 30)
            .unwrap()
            .graph;
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut rng);
        let h = g.relabeled(&perm);
        for v in 0..g.n() {
            let a = neighborhood_key(&g, v, 2).unwrap();
            let b = neighborhood_key(&h, perm[v], 2).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}

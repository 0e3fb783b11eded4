use cpg_core::graph::decompose::{decompose, recompose};
use cpg_core::graph::iso::isomorphic_networks;
use cpg_core::harness::experiments::stream_rng;
use cpg_core::sampler::boltzmann::sample_boltzmann_network;
use cpg_core::sampler::context::SamplerContext;

fn main() {
    let ctx = SamplerContext::with_order(512).unwrap();
    for stream in 0..4u64 {
        let mut rng = stream_rng(8, stream);
        let mut done = 0usize;
        while done < 25_000 {
            let Some(net) = sample_boltzmann_network(&ctx, &mut rng).unwrap() else {
                continue;
            };
            let tree = decompose(&net).expect("decompose");
            let back = recompose(&tree).expect("recompose");
            assert!(isomorphic_networks(&net, &back));
            done += 1;
        }
        println!("stream {stream}: 25000 ok");
    }
}

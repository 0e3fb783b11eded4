use cpg_core::harness::experiments::stream_rng;
use cpg_core::sampler::connected::sample_connected_cubic;
use cpg_core::sampler::context::SamplerContext;
use std::time::Instant;

fn main() {
    let ctx = SamplerContext::new().unwrap();
    for (n, w) in [(10_000usize, 100usize), (10_000, 1500)] {
        let t0 = Instant::now();
        let mut trials = 0u64;
        for i in 0..4u64 {
            let mut rng = stream_rng(99, i);
            let s = sample_connected_cubic(&ctx, n, w, &mut rng, 1u64 << 34).unwrap();
            trials += s.trials;
        }
        println!(
            "n={n} w={w}: 4 samples in {:.1}s, avg trials {}",
            t0.elapsed().as_secs_f64(),
            trials / 4
        );
    }
}

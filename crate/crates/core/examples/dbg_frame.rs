use lockern::domains::{Domain, DomainSpec};
use lockern::frames::FrameSystem;
use lockern::kernels::KernelEvaluator;
use std::sync::Arc;
use std::time::Instant;

fn main() {
    for (spec, delta) in [
        (DomainSpec::simplex(2, vec![0.5; 3]).unwrap(), 0.25),
        (DomainSpec::ball(2, 0.5).unwrap(), 1.0),
        (DomainSpec::conic_surface(2, 0.5).unwrap(), 1.0),
        (DomainSpec::interval(0.0, 0.0).unwrap(), 1.0),
    ] {
        let t0 = Instant::now();
        let ev = KernelEvaluator::new(Arc::new(Domain::new(spec)), 64).unwrap();
        let t1 = Instant::now();
        let fs = FrameSystem::build(&ev, 5, delta).unwrap();
        println!(
            "{:>14}: evaluator {:.1?}, frame {:.1?}, retries {}, level5 nodes {}",
            ev.domain().spec().kind_name(),
            t1 - t0,
            t1.elapsed(),
            fs.retries_used,
            fs.levels[5].rule.nodes.len()
        );
    }
}

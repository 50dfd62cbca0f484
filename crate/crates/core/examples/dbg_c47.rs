use lockern::cubature::christoffel;
use lockern::domains::{Domain, DomainSpec};
use lockern::kernels::KernelEvaluator;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for spec in [
        DomainSpec::interval(0.0, 0.0).unwrap(),
        DomainSpec::sphere(3).unwrap(),
        DomainSpec::ball(2, 0.5).unwrap(),
        DomainSpec::simplex(2, vec![0.5; 3]).unwrap(),
        DomainSpec::conic_surface(2, 0.5).unwrap(),
    ] {
        let domain = Domain::new(spec.clone());
        let alpha = domain.doubling_exponent_estimate(&mut rng).unwrap();
        let ev = KernelEvaluator::new(Arc::new(Domain::new(spec.clone())), 128).unwrap();
        let mut tails = vec![];
        for n in [8usize, 16, 32, 64] {
            tails.push(ev.localization_tail(n, alpha + 4.0).unwrap());
        }
        let spread = tails.iter().cloned().fold(0.0f64, f64::max) / tails.iter().cloned().fold(f64::INFINITY, f64::min);
        println!("{:>14}: J_n {:?} spread {spread:.2}", domain.spec().kind_name(), tails.iter().map(|t| format!("{t:.3}")).collect::<Vec<_>>());

        // criterion 7 ratios
        let ev32 = KernelEvaluator::new(Arc::new(Domain::new(spec)), 32).unwrap();
        print!("{:>14}  christoffel: ", "");
        for n in [4usize, 8, 16, 32] {
            let mut pts = ev32.domain().quasi_uniform_points(20).unwrap();
            pts.extend(ev32.domain().boundary_adjacent_points(1.0 / (n * n) as f64));
            let mut lo = f64::INFINITY;
            let mut hi = 0.0f64;
            for p in &pts {
                let lam = christoffel(&ev32, n, p).unwrap();
                let surr = ev32.domain().ball_measure_surrogate(p, 1.0 / n as f64).unwrap();
                lo = lo.min(lam / surr);
                hi = hi.max(lam / surr);
            }
            print!(" n={n}: [{lo:.4}, {hi:.3}]");
        }
        println!();
    }
}

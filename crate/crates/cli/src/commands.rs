//! The verification suites behind each subcommand.

use crate::config::Setup;
use crate::Outcome;
use lockern::approx::best_approx_l2;
use lockern::cubature::{
    christoffel_profile, compute_cubature_adaptive, weight_ratio_report,
};
use lockern::domains::PointOnDomain;
use lockern::export::{points_csv, weighted_points_csv};
use lockern::frames::FrameSystem;
use lockern::kernels::{BandlimitedFunction, KernelEvaluator};
use lockern::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::fs;

pub enum Suite {
    Kernel,
    Cubature,
    Frame,
    Approx,
}

pub fn run(suite: Suite, setup: &Setup) -> Result<Outcome> {
    match suite {
        Suite::Kernel => kernel(setup),
        Suite::Cubature => cubature(setup),
        Suite::Frame => frame(setup),
        Suite::Approx => approx(setup),
    }
}

fn write(setup: &Setup, name: &str, contents: &str) -> Result<()> {
    let path = setup.args.out.join(format!("{}-{name}", setup.label));
    fs::write(&path, contents).map_err(|e| {
        lockern::Error::InvalidParameter(format!("cannot write {}: {e}", path.display()))
    })
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json");
    s.push('\n');
    s
}

fn kernel(setup: &Setup) -> Result<Outcome> {
    if setup.args.nmax == 0 {
        return Err(lockern::Error::InvalidParameter(
            "kernel sweeps need nmax >= 1".into(),
        ));
    }
    let sweep = setup.degree_sweep();
    let ev = KernelEvaluator::new(setup.domain.clone(), 2 * sweep.iter().max().unwrap())?;
    let mut bounds = Vec::new();
    for &n in &sweep {
        let rep = ev.localization_report(n, setup.args.kappa, 0.25)?;
        bounds.push(rep.kernel_bound);
        write(
            setup,
            &format!("kernel-n{n}.json"),
            &pretty(&json!({
                "A1": rep.kernel_bound,
                "A2": rep.lipschitz_bound,
                "J_n": rep.tail_integral,
                "clamped_pairs": rep.clamped_pairs,
                "domain": rep.domain,
                "kappa": rep.kappa,
                "n": rep.n,
            })),
        )?;

        // Decay profile from a fixed base point against the far grid.
        let base = setup.domain.quasi_uniform_points(1)?;
        let far = setup.domain.quasi_uniform_points(256)?;
        let mult = ev.localized_multipliers(n)?;
        let values = ev.kernel_matrix_via_basis(&mult, &base, &far)?;
        let mut rows: Vec<(f64, f64)> = far
            .iter()
            .zip(&values)
            .map(|(q, &v)| (setup.domain.distance(&base[0], q), v))
            .collect();
        rows.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut csv = String::from("distance,kernel\n");
        for (d, v) in rows {
            csv.push_str(&format!("{d},{v}\n"));
        }
        write(setup, &format!("kernel-decay-n{n}.csv"), &csv)?;
    }
    if bounds.len() > 1 {
        let spread = bounds.iter().cloned().fold(0.0_f64, f64::max)
            / bounds.iter().cloned().fold(f64::INFINITY, f64::min);
        if spread > setup.args.max_ratio {
            return Ok(Outcome::Threshold(format!(
                "decay constants spread x{spread:.2} exceeds {}",
                setup.args.max_ratio
            )));
        }
    }
    Ok(Outcome::Ok)
}

fn cubature(setup: &Setup) -> Result<Outcome> {
    let mut sweep: Vec<usize> = [4usize, 8, 16, 32]
        .into_iter()
        .filter(|&n| n <= setup.args.nmax)
        .collect();
    if sweep.is_empty() {
        sweep.push(setup.args.nmax);
    }
    let max_n = *sweep.iter().max().unwrap();
    let ev = KernelEvaluator::new(setup.domain.clone(), max_n.max(4))?;
    for &n in &sweep {
        let (rule, retries) = compute_cubature_adaptive(&ev, n, setup.delta, 4)?;
        write(
            setup,
            &format!("cubature-n{n}.csv"),
            &weighted_points_csv(&rule.nodes, &rule.weights, "lambda"),
        )?;
        let ratio = weight_ratio_report(&ev, &rule)?;
        write(
            setup,
            &format!("cubature-n{n}.json"),
            &pretty(&json!({
                "delta": rule.delta,
                "domain": setup.label,
                "max_ratio": ratio.max_ratio,
                "min_ratio": ratio.min_ratio,
                "moment_residual": rule.residual,
                "n": n,
                "nodes": rule.nodes.len(),
                "pruned": rule.pruned,
                "retries": retries,
                "separation": rule.separation,
                "weight_sum": rule.weight_sum(),
            })),
        )?;

        // Christoffel profile at quasi-uniform plus boundary-adjacent points.
        let mut pts = setup.domain.quasi_uniform_points(20)?;
        pts.extend(setup.domain.boundary_adjacent_points(1.0 / (n * n) as f64));
        let profile = christoffel_profile(&ev, n, &pts)?;
        let points: Vec<PointOnDomain> = profile.iter().map(|s| s.point.clone()).collect();
        let lambda: Vec<f64> = profile.iter().map(|s| s.lambda).collect();
        let surrogate: Vec<f64> = profile.iter().map(|s| s.surrogate).collect();
        let ratio: Vec<f64> = profile.iter().map(|s| s.ratio).collect();
        write(
            setup,
            &format!("christoffel-n{n}.csv"),
            &points_csv(
                &points,
                &[
                    ("lambda_n", lambda),
                    ("surrogate", surrogate),
                    ("ratio", ratio),
                ],
            ),
        )?;
    }
    Ok(Outcome::Ok)
}

fn frame(setup: &Setup) -> Result<Outcome> {
    let levels = setup.args.levels;
    let ev = KernelEvaluator::new(setup.domain.clone(), (1usize << (levels + 1)).max(4))?;
    let fs = FrameSystem::build(&ev, levels, setup.delta.min(1.0).max(setup.delta * 0.5))?;
    let per_level: Vec<serde_json::Value> = fs
        .levels
        .iter()
        .map(|l| {
            json!({
                "exactness_degree": l.rule.degree,
                "j": l.j,
                "nodes": l.rule.nodes.len(),
                "residual": l.rule.residual,
            })
        })
        .collect();
    write(
        setup,
        "frame.json",
        &pretty(&json!({
            "delta": fs.delta,
            "domain": setup.label,
            "levels": per_level,
            "max_level": fs.max_level(),
            "retries": fs.retries_used,
            "rho": fs.rho,
        })),
    )?;
    for level in &fs.levels {
        write(
            setup,
            &format!("frame-level{}.csv", level.j),
            &weighted_points_csv(&level.rule.nodes, &level.rule.weights, "lambda"),
        )?;
    }

    // Parseval certificate on random band-limited inputs.
    let band = fs.band_limit().saturating_sub(1);
    let mut rng = ChaCha8Rng::seed_from_u64(setup.args.seed);
    let mut parseval_worst = 0.0_f64;
    let mut roundtrip_worst = 0.0_f64;
    for _ in 0..10 {
        let dim = ev.basis().dim_through(band);
        let coeffs: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = BandlimitedFunction::from_coeffs(&ev, band, coeffs)?;
        let cs = fs.analyze(&ev, &f)?;
        let norm2 = f.norm() * f.norm();
        parseval_worst = parseval_worst.max((cs.energy() - norm2).abs() / norm2);
        let g = fs.synthesize(&ev, &cs)?;
        let mut diff2 = 0.0;
        for (i, &c) in f.coeffs().iter().enumerate() {
            let gc = g.coeffs().get(i).copied().unwrap_or(0.0);
            diff2 += (c - gc) * (c - gc);
        }
        for &gc in g.coeffs().iter().skip(f.coeffs().len()) {
            diff2 += gc * gc;
        }
        roundtrip_worst = roundtrip_worst.max(diff2.sqrt() / norm2.sqrt());
    }
    let mut decay = Vec::new();
    for j in 2..=levels.min(4) {
        let count = fs.levels[j].rule.nodes.len();
        let mut c = 0.0_f64;
        for z in (0..count).step_by((count / 4).max(1)) {
            c = c.max(fs.decay_constant(&ev, j, z, setup.args.kappa)?);
        }
        decay.push(json!({"constant": c, "j": j}));
    }
    write(
        setup,
        "frame-parseval.json",
        &pretty(&json!({
            "band_limit": band,
            "decay_constants": decay,
            "domain": setup.label,
            "parseval_relative_error": parseval_worst,
            "roundtrip_relative_error": roundtrip_worst,
            "trials": 10,
        })),
    )?;
    if parseval_worst > 1e-6 || roundtrip_worst > 1e-6 {
        return Ok(Outcome::Threshold(format!(
            "parseval {parseval_worst:.2e} / roundtrip {roundtrip_worst:.2e} exceed 1e-6"
        )));
    }
    Ok(Outcome::Ok)
}

fn approx(setup: &Setup) -> Result<Outcome> {
    if setup.args.nmax == 0 {
        return Err(lockern::Error::InvalidParameter(
            "approximation sweeps need nmax >= 1".into(),
        ));
    }
    let sweep = setup.degree_sweep();
    let max_n = *sweep.iter().max().unwrap();
    let ev = KernelEvaluator::new(setup.domain.clone(), 2 * max_n)?;
    let probe = setup.domain.quasi_uniform_points(200)?;
    let line = |p: &PointOnDomain| -> f64 {
        p.coords()
            .iter()
            .enumerate()
            .map(|(i, &x)| x * (1.0 - 0.3 * i as f64))
            .sum()
    };
    let (smin, smax) = probe.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |acc, p| {
        let s = line(p);
        (acc.0.min(s), acc.1.max(s))
    });
    let mut csv = String::from("func,n,e_n,near_best,ratio\n");
    for (fi, frac) in [0.3, 0.4, 0.5, 0.6, 0.7].iter().enumerate() {
        let offset = smin + frac * (smax - smin);
        let f = BandlimitedFunction::from_fn(&ev, 2 * max_n, |p| (line(p) - offset).abs())?;
        for &n in &sweep {
            let g = ev.near_best(n, &f)?;
            let mut diff = f.coeffs().to_vec();
            for (d, c) in diff.iter_mut().zip(g.coeffs()) {
                *d -= c;
            }
            let err = diff.iter().map(|c| c * c).sum::<f64>().sqrt();
            let e_n = best_approx_l2(&ev, n, &f);
            csv.push_str(&format!("{fi},{n},{e_n},{err},{}\n", err / e_n));
        }
    }
    write(setup, "approx.csv", &csv)?;
    Ok(Outcome::Ok)
}

//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;

use std::sync::OnceLock;
use std::time::Instant;

use common::oracles::l0_oracle;
use common::{gaussian, norm, rel_diff, spikes};
use multisparse::io::format_sweep_csv;
use multisparse::solvers::l1_l1_problem;
use multisparse::{
    generate_signal, oracle_subgradient, run_sweep, solve_l1_l1, solve_multi_l1, solve_t_l1,
    AnalysisOperator, Lambda2Scale, Method, RecoveryProblem, SignalKind, SignalSource, SolverConfig,
    StepSchedule, SweepResult, Term, TrialSpec,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn dft_weight(n: usize) -> f64 {
    Lambda2Scale::SqrtN.weight(0.05, n)
}

fn problem_for(method: Method, y: &[f64], phi: &multisparse::MeasurementMatrix, eps: f64) -> RecoveryProblem {
    let n = phi.cols();
    let term = match method {
        Method::TL1 => Term::new(1.0, AnalysisOperator::identity(n).unwrap()),
        Method::FL1 => Term::new(1.0, AnalysisOperator::unitary_dft(n).unwrap()),
        _ => return l1_l1_problem(y, phi, eps, dft_weight(n)).unwrap(),
    };
    RecoveryProblem::new(y.to_vec(), phi.clone(), vec![term], eps).unwrap()
}

fn oracle_equivalence() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for inst in 0..20u64 {
        let n = [16, 32, 48, 64][inst as usize % 4];
        let src = SignalSource::synthetic(SignalKind::SyntheticSpikes, inst).with_k_time(3).with_noise_floor(0.05);
        let x = generate_signal(&src, n).unwrap();
        let phi = gaussian(n / 2, n, 500 + inst);
        let y = phi.sample(&x).unwrap();
        let eps = 0.05 * norm(&y);
        for method in [Method::TL1, Method::FL1, Method::L1L1] {
            let p = problem_for(method, &y, &phi, eps);
            let admm = solve_multi_l1(&p, &SolverConfig::default()).unwrap();
            let oracle = oracle_subgradient(&p, 100_000, StepSchedule::default()).unwrap();
            worst = worst.max((admm.objective - oracle.objective).abs() / oracle.objective);
            count += 1;
        }
    }
    outcome(worst <= 1e-3, format!("{count} solves, worst relative objective gap {worst:.2e} (limit 1e-3)"))
}

fn feasibility() -> Outcome {
    let mut converged = 0;
    let mut violations = 0;
    for seed in 0..100u64 {
        let n = 16 + (seed as usize % 7) * 8;
        let m = n / 4 + (seed as usize % 3) * n / 4;
        let src = SignalSource::synthetic(SignalKind::SyntheticTones, seed).with_noise_floor(0.1);
        let x = generate_signal(&src, n).unwrap();
        let phi = gaussian(m, n, 900 + seed);
        let y = phi.sample(&x).unwrap();
        let eps = [0.0, 0.01, 0.05, 0.2][seed as usize % 4] * norm(&y);
        let method = [Method::TL1, Method::FL1, Method::L1L1][seed as usize % 3];
        let p = problem_for(method, &y, &phi, eps);
        let r = solve_multi_l1(&p, &SolverConfig::default()).unwrap();
        if r.converged {
            converged += 1;
            let res = p.residual_norm(r.x_hat.samples()).unwrap();
            if res > eps * (1.0 + 1e-6) + 1e-12 * norm(&y) {
                violations += 1;
            }
        }
    }
    outcome(
        violations == 0 && converged > 0,
        format!("{converged}/100 converged, {violations} outside eps*(1+1e-6)"),
    )
}

fn exact_recovery() -> Outcome {
    let start = Instant::now();
    let mut ok = 0;
    for seed in 0..40u64 {
        let x = spikes(128, 5, seed);
        let phi = gaussian(64, 128, 2000 + seed);
        let y = phi.sample(&x).unwrap();
        let r = solve_t_l1(&y, &phi, 1e-8, &SolverConfig::default()).unwrap();
        if rel_diff(r.x_hat.samples(), x.samples()) < 1e-4 {
            ok += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        ok >= 38 && secs < 120.0,
        format!("{ok}/40 below 1e-4 relative error (need 38), {secs:.1} s (limit 120 s)"),
    )
}

fn dual_sparse_spec() -> TrialSpec {
    TrialSpec {
        n: 256,
        trial_count: 40,
        ..TrialSpec::default()
    }
}

fn dual_sparse_source() -> SignalSource {
    SignalSource::synthetic(SignalKind::SyntheticDualSparse, 0)
        .with_k_time(1)
        .with_burst_width(48)
}

static DUAL_SWEEP: OnceLock<(SweepResult, f64)> = OnceLock::new();

fn dual_sweep() -> &'static (SweepResult, f64) {
    DUAL_SWEEP.get_or_init(|| {
        let start = Instant::now();
        let r = run_sweep(&dual_sparse_spec(), &dual_sparse_source()).unwrap();
        (r, start.elapsed().as_secs_f64())
    })
}

fn dual_sparse_ordering() -> Outcome {
    let (res, secs) = dual_sweep();
    let mut pass = *secs < 1800.0;
    let mut parts = Vec::new();
    for ratio in [0.375, 0.5, 0.625] {
        let t = res.mean_rmse(Method::TL1, ratio).unwrap_or(f64::NAN);
        let f = res.mean_rmse(Method::FL1, ratio).unwrap_or(f64::NAN);
        let l = res.mean_rmse(Method::L1L1, ratio).unwrap_or(f64::NAN);
        pass &= l <= t.min(f) + 0.01;
        parts.push(format!("r={ratio}: L1-L1 {l:.3} T-L1 {t:.3} F-L1 {f:.3}"));
    }
    outcome(pass, format!("{}; sweep {secs:.0} s", parts.join("; ")))
}

fn freq_dense_ordering() -> Outcome {
    let spec = TrialSpec {
        n: 256,
        ratios: vec![0.5],
        trial_count: 40,
        methods: vec![Method::TL1, Method::FL1, Method::L1L1],
        ..TrialSpec::default()
    };
    let src = SignalSource::synthetic(SignalKind::SyntheticFreqDense, 0).with_k_time(10);
    let res = run_sweep(&spec, &src).unwrap();
    let t = res.mean_rmse(Method::TL1, 0.5).unwrap_or(f64::NAN);
    let f = res.mean_rmse(Method::FL1, 0.5).unwrap_or(f64::NAN);
    let l = res.mean_rmse(Method::L1L1, 0.5).unwrap_or(f64::NAN);
    outcome(t < l && l < f, format!("T-L1 {t:.3} < L1-L1 {l:.3} < F-L1 {f:.3}"))
}

fn monotonicity() -> Outcome {
    let (res, _) = dual_sweep();
    let spec = dual_sparse_spec();
    let mut worst = f64::NEG_INFINITY;
    let mut at = String::new();
    for method in Method::ALL {
        let curve: Vec<f64> = spec
            .ratios
            .iter()
            .map(|&r| res.mean_rmse(method, r).unwrap_or(f64::NAN))
            .collect();
        for (i, w) in curve.windows(2).enumerate() {
            let rise = w[1] - w[0];
            if rise.is_nan() || rise > worst {
                worst = if rise.is_nan() { f64::INFINITY } else { rise };
                at = format!("{method} {}->{}", spec.ratios[i], spec.ratios[i + 1]);
            }
        }
    }
    outcome(worst <= 0.02, format!("largest increase {worst:.4} at {at} (slack 0.02)"))
}

fn rmse_floor() -> Outcome {
    let (res, _) = dual_sweep();
    let noisy: Vec<f64> = [Method::TL1, Method::FL1, Method::L1L1]
        .iter()
        .map(|&m| res.mean_rmse(m, 1.0).unwrap_or(f64::NAN))
        .collect();
    let spec = TrialSpec {
        ratios: vec![1.0],
        epsilon_frac: 0.0,
        ..dual_sparse_spec()
    };
    let clean = run_sweep(&spec, &dual_sparse_source()).unwrap();
    let exact: Vec<f64> = Method::ALL
        .iter()
        .map(|&m| clean.mean_rmse(m, 1.0).unwrap_or(f64::NAN))
        .collect();
    let floor = noisy.iter().cloned().fold(f64::INFINITY, f64::min);
    let top = exact.iter().cloned().fold(0.0, f64::max);
    outcome(
        floor > 0.0 && top < 1e-4,
        format!("eps_frac 0.05 min floor {floor:.3e} (> 0); eps_frac 0 max {top:.3e} (< 1e-4)"),
    )
}

fn l0_cross_check() -> Outcome {
    let mut ok = 0;
    for seed in 0..50u64 {
        let x = spikes(8, 1, 7000 + seed);
        let phi = gaussian(4, 8, 8000 + seed);
        let y = phi.sample(&x).unwrap();
        let want = l0_oracle(phi.matrix(), &y);
        let r = solve_t_l1(&y, &phi, 0.0, &SolverConfig::default()).unwrap();
        if rel_diff(r.x_hat.samples(), &want) < 1e-4 {
            ok += 1;
        }
    }
    outcome(ok >= 45, format!("{ok}/50 match the exhaustive-support solution (need 45)"))
}

fn desk_runtime() -> Outcome {
    let x = generate_signal(&SignalSource::synthetic(SignalKind::SyntheticDualSparse, 0), 512).unwrap();
    let phi = gaussian(256, 512, 1);
    let y = phi.sample(&x).unwrap();
    let start = Instant::now();
    let r = solve_l1_l1(&y, &phi, 0.05 * norm(&y), dft_weight(512), &SolverConfig::default()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    outcome(
        r.converged && secs < 60.0,
        format!("converged={} in {} iterations, {secs:.2} s (limit 60 s)", r.converged, r.iterations),
    )
}

fn determinism() -> Outcome {
    let spec = TrialSpec {
        n: 128,
        trial_count: 4,
        ..TrialSpec::default()
    };
    let src = SignalSource::synthetic(SignalKind::SyntheticTones, 0);
    let a = format_sweep_csv(&run_sweep(&spec, &src).unwrap(), false);
    let b = format_sweep_csv(&run_sweep(&spec, &src).unwrap(), false);
    outcome(a == b, format!("{} bytes, identical={}", a.len(), a == b))
}

fn main() {
    type Check = (&'static str, fn() -> Outcome);
    let criteria: [Check; 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("feasibility", feasibility),
        ("exact recovery", exact_recovery),
        ("dual-sparse ordering", dual_sparse_ordering),
        ("freq-dense ordering", freq_dense_ordering),
        ("monotonicity", monotonicity),
        ("rmse floor", rmse_floor),
        ("L0 cross-check", l0_cross_check),
        ("desk runtime", desk_runtime),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "[{:>2}] {} {name}: {} ({:.1} s)",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

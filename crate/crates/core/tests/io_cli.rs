use std::path::{Path, PathBuf};

use multisparse::cli::{run, EXIT_DATA, EXIT_OK, EXIT_USAGE};
use multisparse::io::{format_signal, parse_signal_text, SWEEP_HEADER};
use multisparse::{Lambda2Scale, Method, RunConfig, SignalKind};
use proptest::prelude::*;

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("multisparse").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn arb_config() -> impl Strategy<Value = RunConfig> {
    (
        1usize..2048,
        prop::collection::btree_set(1u32..=1000, 1..6),
        1usize..100,
        (0.0f64..1.0, 0.0f64..2.0, any::<bool>(), any::<u64>()),
        prop::sample::subsequence(Method::ALL.to_vec(), 1..=4),
        (0usize..5, 1usize..20, 1usize..20, 1usize..80, 0.0f64..0.5),
        (any::<bool>(), 0.1f64..10.0, 1usize..50000, any::<bool>()),
    )
        .prop_map(|(n, ratios, trials, (eps, lam, sqrt, seed), methods, (src, kt, kf, w, nf), (timing, rho, iters, adapt))| {
            let mut c = RunConfig::default();
            c.spec.n = n;
            c.spec.ratios = ratios.into_iter().map(|r| r as f64 / 1000.0).collect();
            c.spec.trial_count = trials;
            c.spec.epsilon_frac = eps;
            c.spec.lambda2 = lam;
            c.spec.lambda2_scale = if sqrt { Lambda2Scale::SqrtN } else { Lambda2Scale::Constant };
            c.spec.base_seed = seed;
            c.spec.methods = methods;
            c.spec.solver.rho = rho;
            c.spec.solver.max_iters = iters;
            c.spec.solver.adaptive_rho = adapt;
            c.source = [
                SignalKind::SyntheticSpikes,
                SignalKind::SyntheticTones,
                SignalKind::SyntheticDualSparse,
                SignalKind::SyntheticFreqDense,
                SignalKind::FileTrace,
            ][src];
            if c.source == SignalKind::FileTrace {
                c.input = Some(PathBuf::from("data/trace.txt"));
            }
            c.k_time = kt;
            c.k_freq = kf;
            c.burst_width = w;
            c.noise_floor = nf;
            c.timing = timing;
            c
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn config_round_trips(c in arb_config()) {
        let text = c.serialize();
        let back = RunConfig::parse(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.serialize(), text);
    }

    #[test]
    fn signal_text_round_trips(x in prop::collection::vec(-1e6f64..1e6, 1..50)) {
        let back = parse_signal_text(&format_signal(&x), "mem").unwrap();
        prop_assert_eq!(back, x);
    }
}

#[test]
fn config_rejects_unknown_and_duplicate_keys() {
    assert!(RunConfig::parse("n = 8\nfoo = 1\n").is_err());
    assert!(RunConfig::parse("n = 8\nn = 9\n").is_err());
    assert!(RunConfig::parse("n = eight\n").is_err());
    assert_eq!(RunConfig::parse("# only a comment\n\n").unwrap(), RunConfig::default());
}

#[test]
fn mini_sweep_matches_golden_csv() {
    let conf = golden("mini_sweep.conf");
    let (code, out, err) = cli(&["sweep", "--config", conf.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    let want = std::fs::read_to_string(golden("mini_sweep.csv")).unwrap();
    assert_eq!(out, want);
    assert!(out.starts_with(SWEEP_HEADER));
}

#[test]
fn repeated_sweeps_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &Path| {
        vec![
            "sweep".to_string(),
            "--n=48".into(),
            "--trials=3".into(),
            "--ratios=0.25,0.5,1".into(),
            "--source=tones".into(),
            "--seed=11".into(),
            format!("--out-csv={}", p.display()),
        ]
    };
    for p in [&a, &b] {
        let v = args(p);
        let (code, _, err) = cli(&v.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(code, EXIT_OK, "{err}");
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn timing_column_is_opt_in() {
    let (_, plain, _) = cli(&["sweep", "--n=16", "--trials=1", "--ratios=1", "--methods=LS", "--source=spikes"]);
    let (_, timed, _) = cli(&["sweep", "--n=16", "--trials=1", "--ratios=1", "--methods=LS", "--source=spikes", "--timing"]);
    let row = |s: &str| s.lines().nth(1).unwrap().split(',').nth(4).unwrap().to_string();
    assert!(row(&plain).is_empty());
    assert!(row(&timed).parse::<f64>().is_ok());
}

#[test]
fn gen_is_deterministic() {
    let a = cli(&["gen", "--kind=tones", "--n=64", "--seed=5"]);
    let b = cli(&["gen", "--kind=tones", "--n=64", "--seed=5"]);
    let c = cli(&["gen", "--kind=tones", "--n=64", "--seed=6"]);
    assert_eq!(a.0, EXIT_OK);
    assert_eq!(a.1, b.1);
    assert_ne!(a.1, c.1);
    assert_eq!(a.1.lines().count(), 64);
}

#[test]
fn recover_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let sig = dir.path().join("x.txt");
    let rec = dir.path().join("xhat.txt");
    let (code, _, _) = cli(&["gen", "--kind=spikes", "--k-time=3", "--n=64", "--seed=2", "--output", sig.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let (code, out, err) = cli(&[
        "recover", "--input", sig.to_str().unwrap(), "--method=T-L1", "--ratio=1", "--epsilon-frac=0",
        "--output", rec.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("method=T-L1 n=64 m=64"));
    let xhat = multisparse::read_signal_file(&rec).unwrap();
    assert_eq!(xhat.len(), 64);
    let rel: f64 = out
        .split_whitespace()
        .find_map(|t| t.strip_prefix("relative_error="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(rel < 1e-4, "{rel}");
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["--help"]).0, EXIT_OK);
    assert_eq!(cli(&["--version"]).0, EXIT_OK);
    assert_eq!(cli(&[]).0, EXIT_USAGE);
    assert_eq!(cli(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(cli(&["recover", "--ratio=0", "--n=32", "--kind=spikes"]).0, EXIT_USAGE);
    assert_eq!(cli(&["recover", "--ratio=1.5", "--n=32", "--kind=spikes"]).0, EXIT_USAGE);
    assert_eq!(cli(&["recover", "--method=OMP", "--n=32"]).0, EXIT_USAGE);
    assert_eq!(cli(&["gen", "--kind=spikes", "--n=0"]).0, EXIT_USAGE);
    assert_eq!(cli(&["sweep", "--ratios=0.5,0.25"]).0, EXIT_USAGE);

    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.txt");
    assert_eq!(cli(&["recover", "--input", missing.to_str().unwrap()]).0, EXIT_DATA);
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1\n2\nnope\n").unwrap();
    let (code, _, err) = cli(&["recover", "--input", bad.to_str().unwrap(), "--ratio=0.5"]);
    assert_eq!(code, EXIT_DATA);
    assert!(err.contains("line 3"), "{err}");
    let conf = dir.path().join("bad.conf");
    std::fs::write(&conf, "n = 8\nbogus = 1\n").unwrap();
    assert_eq!(cli(&["sweep", "--config", conf.to_str().unwrap()]).0, EXIT_DATA);
    // A dual-sparse draw that cannot meet its targets is a data error.
    assert_eq!(cli(&["gen", "--kind=dual_sparse", "--n=16"]).0, EXIT_DATA);
}

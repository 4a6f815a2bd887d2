//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when
//! any fails. Run with `cargo test --release --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path as FsPath;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde_json::Value;
use statrs::distribution::{Binomial, DiscreteCDF};

use sigstream::embeddings::{lead_lag, missing_lift, StreamRecord};
use sigstream::ml::{balance, metrics, ClassifierKind, Metrics, OversampleConfig, Strategy};
use sigstream::pipeline::{run_experiment, synth_generate, PipelineConfig, SynthConfig};
use sigstream::rng::stream;
use sigstream::sig::{
    chen_product, shuffle, signature, signature_oracle_full, signed_area, MultiIndex, Path, TruncatedSignature,
};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

/// Seeded Gaussian random walks, `d ≤ 4`, `2..=20` points, step sd
/// `1/sqrt(n-1)` per coordinate.
fn corpus() -> &'static [Path] {
    static CORPUS: OnceLock<Vec<Path>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        (0..200u64)
            .map(|i| {
                let mut r = stream(2024, "acceptance-corpus", &[i]);
                let d = r.random_range(1..=4usize);
                let n = r.random_range(2..=20usize);
                let sd = 1.0 / ((n - 1) as f64).sqrt();
                let mut at: Vec<f64> = (0..d).map(|_| r.random_range(-1.0..1.0)).collect();
                let mut coords = at.clone();
                for _ in 1..n {
                    for x in at.iter_mut() {
                        let z: f64 = StandardNormal.sample(&mut r);
                        *x += sd * z;
                    }
                    coords.extend_from_slice(&at);
                }
                Path::from_flat(d, coords).unwrap()
            })
            .collect()
    })
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn signature_identities() -> Verdict {
    let start = Instant::now();
    let (mut shuffle_err, mut chen_err, mut reparam_err, mut tree_err, mut scale_err) = (0f64, 0f64, 0f64, 0f64, 0f64);
    let mut level_one_exact = true;
    for (i, path) in corpus().iter().enumerate() {
        let d = path.dimension();
        let s4 = signature(path, 4).unwrap();
        for left in MultiIndex::graded(d, 3) {
            for right in MultiIndex::graded(d, 4 - left.len()) {
                let lhs = s4.get(&left).unwrap() * s4.get(&right).unwrap();
                let rhs: f64 = shuffle(&left, &right)
                    .terms()
                    .iter()
                    .map(|(w, m)| *m as f64 * s4.get(w).unwrap())
                    .sum();
                shuffle_err = shuffle_err.max(rel_err(lhs, rhs));
            }
        }
        for at in 1..path.len() - 1 {
            let (l, r) = path.split_at(at).unwrap();
            let joined = chen_product(&signature(&l, 4).unwrap(), &signature(&r, 4).unwrap()).unwrap();
            chen_err = chen_err.max(joined.max_abs_diff(&s4));
        }
        let mut r = stream(2024, "acceptance-reparam", &[i as u64]);
        let refined = path
            .subdivided(r.random_range(0..path.len() - 1), r.random_range(0.0..1.0))
            .unwrap();
        for depth in 1..=5 {
            let a = signature(path, depth).unwrap();
            reparam_err = reparam_err.max(a.max_abs_diff(&signature(&refined, depth).unwrap()));
        }
        let loop_sig = signature(&path.concat(&path.reversed()).unwrap(), 4).unwrap();
        tree_err = tree_err.max(loop_sig.max_abs_diff(&TruncatedSignature::identity(d, 4).unwrap()));
        let lambda = r.random_range(-3.0..3.0);
        let scaled = signature(&path.scaled(lambda).unwrap(), 4).unwrap();
        for k in 1..=4 {
            let f = lambda.powi(k as i32);
            for (a, b) in s4.level(k).iter().zip(scaled.level(k)) {
                scale_err = scale_err.max(rel_err(a * f, *b));
            }
        }
        let increments: Vec<f64> = (0..d)
            .map(|j| path.increments().map(|inc| inc[j]).fold(0.0, |acc, v| acc + v))
            .collect();
        level_one_exact &= s4.level(1) == increments.as_slice();
    }
    let elapsed = start.elapsed();
    let pass = shuffle_err <= 1e-9
        && chen_err <= 1e-10
        && reparam_err <= 1e-12
        && tree_err <= 1e-10
        && scale_err <= 1e-10
        && level_one_exact
        && elapsed <= Duration::from_secs(60);
    verdict(
        pass,
        format!(
            "200 paths; shuffle rel {shuffle_err:.1e} (<=1e-9), Chen {chen_err:.1e} (<=1e-10), \
             reparametrization {reparam_err:.1e} (<=1e-12, L<=5), tree-like {tree_err:.1e} (<=1e-10), \
             scaling rel {scale_err:.1e} (<=1e-10), level 1 = summed increments: {level_one_exact}, {elapsed:.1?} (<=60s)"
        ),
    )
}

fn oracle_equivalence() -> Verdict {
    let mut worst = 0f64;
    for path in corpus() {
        for depth in 1..=4 {
            let fast = signature(path, depth).unwrap();
            let slow = signature_oracle_full(path, depth).unwrap();
            worst = worst.max(fast.max_abs_diff(&slow));
        }
    }
    verdict(worst <= 1e-9, format!("200 paths, L=1..4; max coefficient difference {worst:.1e} (<=1e-9)"))
}

fn missing_data_golden() -> Verdict {
    let stream = [Some(1.0), Some(3.0), None, Some(5.0), Some(3.0), None, None, Some(9.0), Some(3.0), Some(5.0)];
    let expected: Vec<Vec<f64>> = vec![
        vec![0.0, 1.0, 0.0],
        vec![1.0, 3.0, 0.0],
        vec![2.0, 3.0, 1.0],
        vec![3.0, 5.0, 0.0],
        vec![4.0, 3.0, 0.0],
        vec![5.0, 3.0, 1.0],
        vec![6.0, 3.0, 1.0],
        vec![7.0, 9.0, 0.0],
        vec![8.0, 3.0, 0.0],
        vec![9.0, 5.0, 0.0],
    ];
    let lib = missing_lift(&StreamRecord::with_gaps("golden", &stream, None)).unwrap().to_points();
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("golden.csv");
    let text: String = stream
        .iter()
        .map(|v| v.map_or_else(|| ",1\n".to_string(), |x| format!("{x},0\n")))
        .collect();
    std::fs::write(&file, text).unwrap();
    let out = sigstream(&["sig", file.to_str().unwrap(), "--embedding", "missing-lift", "--depth", "1", "--path"], &[]);
    let cli: Vec<String> = out.lines().filter_map(|l| l.strip_prefix("# point ")).map(String::from).collect();
    let want: Vec<String> = expected
        .iter()
        .map(|p| format!("({})", p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    verdict(
        lib == expected && cli == want,
        format!(
            "library path exact: {}, CLI path exact: {}, third point {}",
            lib == expected,
            cli == want,
            cli.get(2).map_or("missing", String::as_str)
        ),
    )
}

fn lead_lag_quadratic_variation() -> Verdict {
    let mut worst = 0f64;
    for i in 0..100u64 {
        let mut r = stream(2024, "acceptance-qv", &[i]);
        let n = r.random_range(2..=30usize);
        let values: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
        let area = signed_area(&signature(&lead_lag(&values).unwrap(), 2).unwrap(), 1, 2).unwrap();
        let qv: f64 = values.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum();
        worst = worst.max((area - qv / 2.0).abs());
    }
    verdict(worst <= 1e-10, format!("100 streams; max |area - QV/2| {worst:.1e} (<=1e-10)"))
}

fn null_data() -> Verdict {
    let seeds = 1..=20u64;
    let mut correct = [0u64; 3];
    let mut total = 0u64;
    for seed in seeds.clone() {
        let records = synth_generate(&SynthConfig {
            n0: 18,
            n1: 18,
            mean0: 3.0,
            mean1: 3.0,
            seed,
            ..SynthConfig::default()
        })
        .unwrap();
        let report = run_experiment(
            &records,
            &PipelineConfig {
                depths: vec![2],
                seed,
                ..PipelineConfig::default()
            },
        )
        .unwrap();
        total += report.subjects as u64;
        for (c, kind) in ClassifierKind::ALL.iter().enumerate() {
            let acc = report.get(*kind, 2).unwrap().metrics.accuracy.unwrap();
            correct[c] += (acc * report.subjects as f64).round() as u64;
        }
    }
    let band = Binomial::new(0.5, total).unwrap();
    let (lo, hi) = (band.inverse_cdf(0.025), band.inverse_cdf(0.975));
    let pass = correct.iter().all(|&c| (lo..=hi).contains(&c));
    let accs: Vec<String> = ClassifierKind::ALL
        .iter()
        .zip(correct)
        .map(|(k, c)| format!("{k} {:.4}", c as f64 / total as f64))
        .collect();
    verdict(
        pass,
        format!(
            "equal means, 18/18, L=2, seeds 1..=20; pooled accuracy {} vs band [{:.4}, {:.4}] ({total} predictions)",
            accs.join(", "),
            lo as f64 / total as f64,
            hi as f64 / total as f64
        ),
    )
}

fn separated_data() -> Verdict {
    let records = synth_generate(&SynthConfig {
        seed: 7,
        ..SynthConfig::default()
    })
    .unwrap();
    let gaps_ok = records.iter().all(|r| r.max_consecutive_missing() <= 2);
    let report = run_experiment(
        &records,
        &PipelineConfig {
            depths: vec![2],
            seed: 7,
            ..PipelineConfig::default()
        },
    )
    .unwrap();
    let accs: Vec<(ClassifierKind, f64)> = ClassifierKind::ALL
        .iter()
        .map(|k| (*k, report.get(*k, 2).unwrap().metrics.accuracy.unwrap()))
        .collect();
    let pass = gaps_ok && accs.iter().all(|(_, a)| *a >= 0.85);
    let list: Vec<String> = accs.iter().map(|(k, a)| format!("{k} {a:.3}")).collect();
    verdict(
        pass,
        format!("means 1.0 vs 6.0, 18/11, L=2; accuracy {} (>=0.85)", list.join(", ")),
    )
}

fn report_shape() -> Verdict {
    let ours: Value = serde_json::from_str(&cli_run().0).unwrap();
    let fixture: Value = serde_json::from_str(include_str!("fixtures/reference_table.json")).unwrap();
    let (a, b) = (
        ours["report"]["results"].as_array().unwrap(),
        fixture["results"].as_array().unwrap(),
    );
    let mut problems = Vec::new();
    if a.len() != 9 || b.len() != 9 {
        problems.push(format!("{} entries", a.len()));
    }
    for (x, y) in a.iter().zip(b) {
        if x["classifier"] != y["classifier"] || x["depth"] != y["depth"] {
            problems.push(format!("order {} L={}", x["classifier"], x["depth"]));
        }
        for key in y.as_object().unwrap().keys() {
            if x.get(key).is_none() {
                problems.push(format!("missing {key}"));
            }
        }
        let m = x["metrics"].as_object().unwrap();
        let keys: Vec<&String> = m.keys().collect();
        let mut want: Vec<&str> = Metrics::NAMES.to_vec();
        want.sort_unstable();
        if keys.iter().map(|k| k.as_str()).collect::<Vec<_>>() != want {
            problems.push("metric names".into());
        }
        if m.values().any(|v| !v.is_number()) {
            problems.push(format!("undefined metric in {} L={}", x["classifier"], x["depth"]));
        }
    }
    verdict(
        problems.is_empty(),
        if problems.is_empty() {
            "3 classifiers x 3 depths x 6 metrics + selected/total counts, same fields and order as the reference table".into()
        } else {
            problems.join("; ")
        },
    )
}

fn smote_arithmetic() -> Verdict {
    let mut r = stream(2024, "acceptance-smote", &[]);
    let y: Vec<u8> = (0..29).map(|i| u8::from(i >= 18)).collect();
    let x = ndarray::Array2::from_shape_fn((29, 3), |(i, _)| {
        let z: f64 = StandardNormal.sample(&mut r);
        z + f64::from(y[i])
    });
    let mut parts = Vec::new();
    let mut pass = true;
    for strategy in [Strategy::Adasyn, Strategy::Smote] {
        let b = balance(x.view(), &y, &OversampleConfig { k: 5, strategy }, &mut r).unwrap();
        let ones = b.y.iter().filter(|&&v| v == 1).count();
        pass &= b.n_synthetic == 7 && ones == 18 && b.y.len() - ones == 18;
        parts.push(format!("{strategy:?}: {} synthetic, {}/{}", b.n_synthetic, b.y.len() - ones, ones));
    }
    let paper: Value = serde_json::from_str(&cli_paper_run()).unwrap();
    let synth = paper["report"]["results"][0]["n_synthetic"].as_u64().unwrap_or(0);
    pass &= synth == 7;
    parts.push(format!("pipeline balancing before CV: {synth} synthetic"));
    verdict(pass, format!("18/11 input; {}", parts.join("; ")))
}

fn determinism() -> Verdict {
    let (first, data_first) = cli_run();
    let dir = tempfile::tempdir().unwrap();
    let (second, data_second) = synth_and_run(dir.path(), &[("RAYON_NUM_THREADS", "1")], &[]);
    verdict(
        first == &second && data_first == &data_second,
        format!(
            "synth --seed 7 + run, 4 threads vs 1 thread: dataset identical {}, report.json identical {} ({} bytes)",
            data_first == &data_second,
            first == &second,
            first.len()
        ),
    )
}

fn metrics_suite() -> Verdict {
    let truth = [1, 1, 1, 0, 0, 0];
    let pred = [1, 1, 0, 0, 0, 1];
    let m = metrics(&truth, &pred, &[0.9, 0.8, 0.4, 0.2, 0.1, 0.6]).unwrap();
    let (acc, kappa) = (m.accuracy.unwrap(), m.kappa.unwrap());
    let hand = (acc - 4.0 / 6.0).abs() <= 1e-15 && (kappa - 1.0 / 3.0).abs() <= 1e-15;
    let perfect = metrics(&truth, &truth, &[1.0, 1.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
    let all_one = perfect.values().iter().all(|v| *v == Some(1.0));
    let tied = metrics(&truth, &pred, &[0.5; 6]).unwrap().auc == Some(0.5);
    verdict(
        hand && all_one && tied,
        format!(
            "TP=2 TN=2 FP=1 FN=1: accuracy {acc:.3}, kappa {kappa:.3}; perfect prediction all 1.0: {all_one}; tied scores AUC 0.5: {tied}"
        ),
    )
}

fn sigstream(args: &[&str], env: &[(&str, &str)]) -> String {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sigstream"));
    cmd.args(args).env_remove("SIGSTREAM_OUTPUT_DIR");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// `synth --seed 7` then `run` into `dir`; returns report.json and the
/// dataset bytes.
fn synth_and_run(dir: &FsPath, env: &[(&str, &str)], extra: &[&str]) -> (String, String) {
    let data = dir.join("data.csv");
    let out = dir.join("out");
    sigstream(&["synth", "--seed", "7", "--out", data.to_str().unwrap()], env);
    let mut args = vec!["run", data.to_str().unwrap(), "--seed", "7", "--json", "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let printed = sigstream(&args, env);
    let written = std::fs::read_to_string(out.join("report.json")).unwrap();
    assert_eq!(printed, written);
    (written, std::fs::read_to_string(data).unwrap())
}

fn cli_run() -> &'static (String, String) {
    static RUN: OnceLock<(String, String)> = OnceLock::new();
    RUN.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        synth_and_run(dir.path(), &[("RAYON_NUM_THREADS", "4")], &[])
    })
}

fn cli_paper_run() -> String {
    let dir = tempfile::tempdir().unwrap();
    synth_and_run(dir.path(), &[], &["--paper-mode", "--depth", "2", "--classifiers", "knn"]).0
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("signature identities", signature_identities),
        ("oracle equivalence", oracle_equivalence),
        ("missing-data golden path", missing_data_golden),
        ("lead-lag area = half quadratic variation", lead_lag_quadratic_variation),
        ("classification (a) null data within binomial band", null_data),
        ("classification (b) separated data accuracy", separated_data),
        ("classification (c) report layout", report_shape),
        ("oversampling 18/11 -> 18/18", smote_arithmetic),
        ("end-to-end determinism", determinism),
        ("metrics unit suite", metrics_suite),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let v = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            verdict(false, format!("panicked: {msg}"))
        });
        failed += usize::from(!v.pass);
        println!(
            "{} {name}: {} [{:.1?}]",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            start.elapsed()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

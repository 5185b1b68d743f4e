//! Acceptance gate. Runs every criterion at its stated tolerance, prints one
//! PASS/FAIL line per check, and exits nonzero if any check fails.

mod common;

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::Rng;
use srs::analysis::{
    coverage_experiment, empirical_sampling_probabilities, kmeans_balance_experiment,
    lemma2_empirical, lemma3_empirical, rank_curve, samples_to_reach, BoundParams, TrialTag,
};
use srs::embedding::{apply_embedding, build_embedding, EmbeddingKind, EmbeddingSpec};
use srs::io::{read_matrix, write_matrix};
use srs::sampling::{
    leverage_probabilities, srs_select_with_replacement,
    srs_select_without_replacement, srs_without_replacement,
};
use srs::synth::{gen_arc_clusters, gen_union_subspaces, presets, ArcSpec, SubspaceSpec};
use srs::{approximation_error, numerical_rank, rng_from_seed, DataMatrix, Method, SamplerSpec};

use common::{brute_force_srs, directions, gaussian_matrix, mean_of, unit_columns};

const SEED: u64 = 20_240_601;

#[derive(Default)]
struct Gate {
    passed: usize,
    failed: Vec<String>,
}

impl Gate {
    fn check(&mut self, name: &str, ok: bool, detail: String) {
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        if ok {
            self.passed += 1;
        } else {
            self.failed.push(name.to_string());
        }
    }

    fn timed<T>(&mut self, name: &str, limit: Option<Duration>, f: impl FnOnce() -> (bool, String, T)) -> T {
        let start = Instant::now();
        let (ok, detail, out) = f();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let limit_text = limit.map(|l| format!(" (limit {}s)", l.as_secs())).unwrap_or_default();
        self.check(
            name,
            ok && in_time,
            format!("{detail}; {:.1}s{limit_text}", elapsed.as_secs_f64()),
        );
        out
    }
}

fn fmt(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v:.2}")).collect();
    format!("[{}]", parts.join(", "))
}

fn arc_frequency(gate: &mut Gate) {
    gate.timed("1 arc sampling frequency", Some(Duration::from_secs(5)), || {
        let spec = ArcSpec::new(PI / 2.0, PI / 4.0, 1000, 1000);
        let (x, labels) = gen_arc_clusters(&spec, &mut rng_from_seed(SEED)).unwrap();
        let freq = empirical_sampling_probabilities(&x, &labels, 10_000, SEED + 1).unwrap()[0];
        let expected = spec.cluster1_area();
        (
            (freq - 0.625).abs() <= 0.02,
            format!("cluster-1 frequency {freq:.4}, closed form {expected:.4}, band 0.625 +/- 0.02"),
            (),
        )
    });
}

fn rank_capture(gate: &mut Gate) {
    gate.timed("2 rank capture", Some(Duration::from_secs(120)), || {
        let spec = presets::rank_capture(100);
        let (data, _) = gen_union_subspaces(&spec, &mut rng_from_seed(SEED)).unwrap();
        let mut grid: Vec<usize> = (1..=8).map(|k| 50 * k).collect();
        grid.extend((5..=15).map(|k| 100 * k));
        grid.extend((4..=8).map(|k| 500 * k));
        // SRS only has to reach full rank within 400 columns.
        let srs_grid: Vec<usize> = grid.iter().copied().filter(|&n| n <= 500).collect();
        let srs_report =
            rank_curve(&data, &SamplerSpec::new(Method::Srs, 1, 0), &srs_grid, 10, SEED).unwrap();
        let ris_report =
            rank_curve(&data, &SamplerSpec::new(Method::Ris, 1, 0), &grid, 10, SEED).unwrap();
        let srs_n = samples_to_reach(&srs_report, "srs", TrialTag::Median, 100.0);
        let ris_n = samples_to_reach(&ris_report, "ris", TrialTag::Median, 100.0);
        let ris_at_400 = ris_report
            .series(TrialTag::Median, "ris")
            .into_iter()
            .find(|&(n, _)| n == 400.0)
            .map(|(_, r)| r)
            .unwrap();
        let ok = srs_n.is_some_and(|n| n <= 400) && ris_at_400 < 100.0 && ris_n.is_none_or(|n| n > 1500);
        (
            ok,
            format!(
                "median samples to rank 100: srs {srs_n:?}, ris {ris_n:?} (srs grid to 500, ris grid to 4000); ris median rank at 400 = {ris_at_400}"
            ),
            (),
        )
    });
}

fn balanced_coverage(gate: &mut Gate) {
    gate.timed("3 balanced coverage", Some(Duration::from_secs(120)), || {
        let spec = presets::balanced_coverage(10);
        let (data, labels) = gen_union_subspaces(&spec, &mut rng_from_seed(SEED)).unwrap();
        let specs = [SamplerSpec::new(Method::Srs, 400, 0), SamplerSpec::new(Method::Ris, 400, 0)];
        let report = coverage_experiment(&data, &labels, &specs, 400, 100, SEED).unwrap();
        let srs = report.by_cluster(TrialTag::Mean, "srs");
        let ris = report.by_cluster(TrialTag::Mean, "ris");
        let small: Vec<usize> = (0..20).filter(|&c| spec.populations[c] == 30).collect();
        let srs_min = srs.iter().copied().fold(f64::INFINITY, f64::min);
        let ris_small_max = small.iter().map(|&c| ris[c]).fold(0.0, f64::max);
        (
            srs.len() == 20 && srs_min >= 8.0 && ris_small_max <= 4.0,
            format!(
                "srs min cluster mean {srs_min:.2} (need >= 8), ris max over 30-point clusters {ris_small_max:.2} (need <= 4); srs {}",
                fmt(&srs)
            ),
            (),
        )
    });
}

fn dimension_seeking(gate: &mut Gate) {
    gate.timed("4 dimension seeking", Some(Duration::from_secs(180)), || {
        let spec = presets::dimension_seeking(100);
        let (data, labels) = gen_union_subspaces(&spec, &mut rng_from_seed(SEED)).unwrap();
        let embed = EmbeddingSpec::new(EmbeddingKind::Rademacher, 20);
        let s = build_embedding(&embed, 100, &mut rng_from_seed(SEED + 1)).unwrap();
        let embedded = apply_embedding(&s, &data).unwrap();
        let low: Vec<usize> = (0..20).filter(|&c| spec.dims[c] == 2).collect();
        let high: Vec<usize> = (0..20).filter(|&c| spec.dims[c] == 4).collect();
        assert_eq!((low.clone(), high.clone()), ((0..10).collect(), (10..20).collect()));

        let specs = [SamplerSpec::new(Method::Srs, 300, 0), SamplerSpec::new(Method::Ris, 300, 0)];
        let raw = coverage_experiment(&data, &labels, &specs, 300, 20, SEED).unwrap();
        let emb = coverage_experiment(&embedded, &labels, &specs, 300, 20, SEED).unwrap();
        let split = |counts: Vec<f64>| (mean_of(&counts, 0..10), mean_of(&counts, 10..20));
        let (srs_raw_low, srs_raw_high) = split(raw.by_cluster(TrialTag::Mean, "srs"));
        let (srs_emb_low, srs_emb_high) = split(emb.by_cluster(TrialTag::Mean, "srs"));
        let (ris_low, ris_high) = split(raw.by_cluster(TrialTag::Mean, "ris"));
        (
            srs_raw_high > srs_raw_low && srs_emb_high > srs_emb_low && ris_high < ris_low,
            format!(
                "mean count 4-dim vs 2-dim: srs raw {srs_raw_high:.2} vs {srs_raw_low:.2}, srs rademacher p=20 {srs_emb_high:.2} vs {srs_emb_low:.2}, ris {ris_high:.2} vs {ris_low:.2}"
            ),
            (),
        )
    });
}

fn kmeans_demo(gate: &mut Gate) {
    gate.timed("5 k-means on sketch vs full data", None, || {
        let spec = ArcSpec::new(1.0, 1.0, 5000, 50);
        let report = kmeans_balance_experiment(&spec, 200, 50, SEED).unwrap();
        let full = report.series(TrialTag::Mean, "full")[0].1;
        let sketch = report.series(TrialTag::Mean, "srs_sketch")[0].1;
        (
            1.0 - full >= 0.9 && sketch >= 0.9,
            format!(
                "check fails on full data for {:.0}% of 50 seeds, passes on 200-column SRS sketch for {:.0}%",
                100.0 * (1.0 - full),
                100.0 * sketch
            ),
            (),
        )
    });
}

fn lemma_sufficiency(gate: &mut Gate) {
    let params = BoundParams {
        m: 5,
        delta: 0.1,
        tau1: PI / 2.0,
        tau2: PI / 4.0,
        ..Default::default()
    };
    let need = 1.0 - params.delta - 0.02;
    gate.timed("6a spatial sampling at its bound", None, || {
        let spec = ArcSpec::new(params.tau1, params.tau2, 1000, 1000);
        let (x, labels) = gen_arc_clusters(&spec, &mut rng_from_seed(SEED)).unwrap();
        let check = lemma3_empirical(&x, &labels, &params, 500, SEED).unwrap();
        (
            check.success_rate >= need,
            format!("n = {} (bound {:.3}), success {:.3} over 500 trials, need {need:.2}", check.n, check.bound, check.success_rate),
            (),
        )
    });
    gate.timed("6b index sampling at its bound", None, || {
        let spec = ArcSpec::new(params.tau1, params.tau2, 1000, 100);
        let (x, labels) = gen_arc_clusters(&spec, &mut rng_from_seed(SEED)).unwrap();
        let check = lemma2_empirical(&x, &labels, &params, 500, SEED).unwrap();
        (
            check.success_rate >= need,
            format!("n = {} (bound {:.3}), success {:.3} over 500 trials, need {need:.2}", check.n, check.bound, check.success_rate),
            (),
        )
    });
}

fn equal_subspaces(gate: &mut Gate) {
    gate.timed("8 equal-dimension subspaces", None, || {
        let spec = SubspaceSpec {
            ambient: 20,
            dims: vec![2, 2],
            populations: vec![50, 5000],
        };
        let (x, labels) = gen_union_subspaces(&spec, &mut rng_from_seed(SEED)).unwrap();
        let freq = empirical_sampling_probabilities(&x, &labels, 5000, SEED).unwrap()[0];
        (
            (0.4..=0.6).contains(&freq),
            format!("minority (50-point) subspace frequency {freq:.4}, band [0.4, 0.6]"),
            (),
        )
    });
}

fn random_instance(rng: &mut impl Rng, max_cols: usize) -> (DataMatrix, DMatrix<f64>, usize) {
    let rows = rng.random_range(1..=6);
    let cols = rng.random_range(1..=max_cols);
    let n = rng.random_range(1..=cols);
    (unit_columns(rows, cols, rng), gaussian_matrix(n, rows, rng), n)
}

fn property_suite(gate: &mut Gate) {
    let mut rng = rng_from_seed(SEED);

    let mut distinct = true;
    for _ in 0..200 {
        let (x, phi, _) = random_instance(&mut rng, 30);
        let picks = srs_select_without_replacement(&x, &directions(phi)).unwrap();
        let mut sorted = picks.clone();
        sorted.sort_unstable();
        sorted.dedup();
        distinct &= sorted.len() == picks.len();
    }
    // Directions orthogonal to every column must still yield distinct picks.
    let x = DataMatrix::from_row_slice(2, 3, &[1.0, 1.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
    let flat = directions(DMatrix::from_row_slice(3, 2, &[0.0, 1.0, 0.0, 1.0, 0.0, 1.0]));
    let degenerate = srs_select_without_replacement(&x, &flat).unwrap();
    distinct &= degenerate == vec![0, 1, 2];
    gate.check("7a without-replacement distinctness", distinct, "200 random instances plus an all-zero-projection case".into());

    let x = DataMatrix::from_row_slice(2, 3, &[1.0, 0.0, 1.0, 0.0, 1.0, 0.0]).unwrap();
    let phi = directions(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, -1.0, 0.0]));
    let wo = srs_select_without_replacement(&x, &phi).unwrap();
    let wr = srs_select_with_replacement(&x, &phi).unwrap();
    gate.check(
        "7b argmax ties go to the lowest index",
        wo == vec![0, 2] && wr == vec![0, 0],
        format!("without replacement {wo:?}, with replacement {wr:?}"),
    );

    let mut sign_ok = true;
    for _ in 0..100 {
        let (x, phi, _) = random_instance(&mut rng, 30);
        let base = srs_select_without_replacement(&x, &directions(phi.clone())).unwrap();
        let mut flipped = phi.clone();
        for mut row in flipped.row_iter_mut() {
            if rng.random_bool(0.5) {
                row.neg_mut();
            }
        }
        sign_ok &= srs_select_without_replacement(&x, &directions(flipped)).unwrap() == base;
    }
    gate.check("7c sign-of-directions invariance", sign_ok, "100 instances, random row sign flips".into());

    let mut span_ok = true;
    for _ in 0..100 {
        let ambient = rng.random_range(3..=12);
        // r = 1 makes every column +/-u, so all projections tie exactly.
        let r = rng.random_range(2..ambient);
        let u = gaussian_matrix(ambient, r, &mut rng).qr().q();
        let coeffs = gaussian_matrix(r, rng.random_range(r..=25), &mut rng);
        let mut x = &u * coeffs;
        for mut c in x.column_iter_mut() {
            let norm = c.norm();
            c /= norm;
        }
        let x = DataMatrix::new(x).unwrap();
        let n = rng.random_range(1..=x.cols());
        let phi = gaussian_matrix(n, ambient, &mut rng);
        let projected = &phi * &u * u.transpose();
        let a = srs_select_without_replacement(&x, &directions(phi)).unwrap();
        let b = srs_select_without_replacement(&x, &directions(projected)).unwrap();
        span_ok &= a == b;
    }
    gate.check("7d span invariance", span_ok, "100 instances, directions projected onto the column span".into());

    let mut oracle_ok = 0;
    for _ in 0..100 {
        let (x, phi, _) = random_instance(&mut rng, 8);
        let with = rng.random_bool(0.5);
        let dm = directions(phi.clone());
        let got = if with {
            srs_select_with_replacement(&x, &dm).unwrap()
        } else {
            srs_select_without_replacement(&x, &dm).unwrap()
        };
        oracle_ok += usize::from(got == brute_force_srs(&x, &phi, with));
    }
    gate.check("7e brute-force oracle equivalence", oracle_ok == 100, format!("{oracle_ok}/100 instances with at most 8 columns"));

    let mut nested_ok = true;
    for t in 0..10 {
        let spec = SubspaceSpec::homogeneous(15, 8, 4, vec![40; 4]).unwrap();
        let (data, _) = gen_union_subspaces(&spec, &mut rng_from_seed(SEED + t)).unwrap();
        let sketch = srs_without_replacement(&data, 20, SEED + t).unwrap();
        let mut previous = f64::INFINITY;
        for k in 1..=20 {
            let c = data.select_columns(&sketch.indices[..k]).unwrap();
            let err = approximation_error(&data, &c).unwrap();
            nested_ok &= err <= previous + 1e-12;
            previous = err;
        }
    }
    gate.check("7f nested approximation error is non-increasing", nested_ok, "10 sketches, prefixes 1..20".into());

    let mut worst = 0.0f64;
    for _ in 0..50 {
        let d = DataMatrix::new(gaussian_matrix(rng.random_range(2..10), rng.random_range(2..40), &mut rng)).unwrap();
        let k = rng.random_range(1..=numerical_rank(&d, srs::DEFAULT_RANK_TOL));
        let p = leverage_probabilities(&d, k).unwrap();
        worst = worst.max((p.iter().sum::<f64>() - 1.0).abs());
    }
    gate.check("7g leverage probabilities sum to one", worst <= 1e-10, format!("max deviation {worst:.2e} over 50 matrices"));

    let mut roundtrip_ok = true;
    for _ in 0..50 {
        let rows = rng.random_range(1..6);
        let cols = rng.random_range(1..6);
        let m = DMatrix::from_fn(rows, cols, |_, _| {
            let mag: f64 = rng.random_range(-300.0..300.0);
            let v: f64 = rng.random::<f64>() * 10f64.powf(mag);
            if rng.random_bool(0.5) { -v } else { v }
        });
        let d = DataMatrix::new(m).unwrap();
        let mut buf = Vec::new();
        write_matrix(&mut buf, &d, Some("roundtrip")).unwrap();
        let back = read_matrix(buf.as_slice()).unwrap();
        roundtrip_ok &= d
            .as_matrix()
            .iter()
            .zip(back.as_matrix().iter())
            .all(|(a, b)| a.to_bits() == b.to_bits())
            && back.rows() == rows
            && back.cols() == cols;
    }
    gate.check("7h CSV round trip is bitwise exact", roundtrip_ok, "50 matrices spanning 600 decades".into());

    let (ok, detail) = cli_reproducibility();
    gate.check("7i CLI same-seed reproducibility", ok, detail);

}

const CLI_SCRIPT: &[&[&str]] = &[
    &["gen", "arcs", "--tau1", "1.5708", "--tau2", "0.7854", "--n1", "300", "--n2", "60", "--seed", "7"],
    &["gen", "subspaces", "--ambient", "12", "--dims", "2,2,3", "--populations", "40,40,20", "--seed", "3",
      "--out", "sub.csv", "--labels-out", "sub_labels.csv"],
    &["sketch", "--method", "srs", "--n", "12", "--seed", "5"],
    &["sketch", "--data", "sub.csv", "--method", "volume", "--n", "6", "--seed", "5",
      "--out-indices", "vol_idx.csv", "--out-columns", "vol_cols.csv"],
    &["sketch", "--data", "sub.csv", "--method", "leverage", "--n", "6", "--seed", "5",
      "--embed", "sparse", "--embed-dim", "6", "--out-indices", "lev_idx.csv", "--out-columns", "lev_cols.csv"],
    &["eval", "rank", "--data", "sub.csv"],
    &["eval", "error"],
    &["eval", "coverage", "--out", "coverage.csv"],
    &["exp", "rank-curve", "--data", "sub.csv", "--method", "ris", "--grid", "5,10,20", "--trials", "4",
      "--seed", "9", "--out", "curve.csv", "--svg", "curve.svg"],
    &["exp", "coverage", "--data", "sub.csv", "--labels", "sub_labels.csv", "--methods", "srs,ris,norm",
      "--n", "15", "--trials", "5", "--seed", "9", "--embed", "gaussian", "--embed-dim", "8",
      "--out", "cov.csv", "--svg", "cov.svg"],
    &["exp", "probability", "--draws", "2000", "--seed", "11", "--out", "prob.csv"],
    &["exp", "bounds", "--populations", "300,60", "--tau1", "1.5708", "--tau2", "0.7854", "--r", "4", "--s", "2",
      "--data", "data.csv", "--labels", "labels.csv", "--trials", "20", "--seed", "13", "--out", "bounds.csv"],
    &["exp", "kmeans", "--n1", "500", "--n2", "20", "--sketch-n", "40", "--seeds", "3", "--seed", "17",
      "--out", "km.csv", "--svg", "km.svg"],
];

fn run_script(dir: &Path) -> Result<Vec<String>, String> {
    let mut stdouts = Vec::new();
    for args in CLI_SCRIPT {
        let out = Command::new(env!("CARGO_BIN_EXE_srs"))
            .args(*args)
            .current_dir(dir)
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr)));
        }
        stdouts.push(String::from_utf8_lossy(&out.stdout).into_owned());
    }
    Ok(stdouts)
}

fn cli_reproducibility() -> (bool, String) {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (out_a, out_b) = match (run_script(a.path()), run_script(b.path())) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return (false, e),
    };
    if out_a != out_b {
        return (false, "stdout differs between runs".into());
    }
    let mut names: Vec<_> = std::fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    for name in &names {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap_or_default();
        if x != y {
            return (false, format!("{} differs", name.to_string_lossy()));
        }
        if !x.starts_with(b"#") && !x.starts_with(b"<!--") {
            return (false, format!("{} lacks a config echo line", name.to_string_lossy()));
        }
    }
    (
        true,
        format!("{} subcommand runs, {} output files bitwise identical", CLI_SCRIPT.len(), names.len()),
    )
}

fn main() {
    let mut gate = Gate::default();
    arc_frequency(&mut gate);
    rank_capture(&mut gate);
    balanced_coverage(&mut gate);
    dimension_seeking(&mut gate);
    kmeans_demo(&mut gate);
    lemma_sufficiency(&mut gate);
    property_suite(&mut gate);
    equal_subspaces(&mut gate);
    println!("acceptance: {} passed, {} failed", gate.passed, gate.failed.len());
    if !gate.failed.is_empty() {
        println!("failed: {}", gate.failed.join(", "));
        std::process::exit(1);
    }
}

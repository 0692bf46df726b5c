//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if
//! any criterion fails.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use efrac::instrument::{classify_denominators, gamma_quarter_scale, has_type, threshold_sum, type_bound_exponent, within_type_bound};
use efrac::{
    a_2_fast, a_k, beta, binary_reduce, count, enumerate, gamma, propagate_exponent, type_counts, ExactExponent,
    Fraction, SearchBudget,
};
use efrac_cli::sweep::{run_sweep, SweepJob};
use num_bigint::BigUint;
use rayon::prelude::*;
use support::{divisor_count, naive_count};

const FREE: SearchBudget = SearchBudget::UNLIMITED;
const BIN: &str = env!("CARGO_BIN_EXE_efrac");

type Outcome = Result<String, String>;

fn efrac(args: &[&str]) -> std::process::Output {
    Command::new(BIN).args(args).output().expect("run efrac")
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    if took > limit {
        Err(format!("took {took:.2?}, limit {limit:?}"))
    } else {
        Ok(took)
    }
}

fn exponent_table_reproduction() -> Outcome {
    let start = Instant::now();
    let out = efrac(&["bounds", "--k-max", "6"]);
    if !out.status.success() {
        return Err(format!("exit {:?}", out.status.code()));
    }
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split_whitespace().collect()).collect();
    let alphas: Vec<&str> = rows.iter().map(|r| r[1]).collect();
    let betas: Vec<&str> = rows.iter().map(|r| r[2]).collect();
    let took = within(Duration::from_secs(1), start)?;
    let want_alpha = ["0", "1/2", "4/5", "13/14", "79/81"];
    let want_beta = ["0", "1/2", "3/4", "7/8", "15/16"];
    let mut problems = Vec::new();
    if betas != want_beta {
        problems.push(format!("beta {betas:?} != {want_beta:?}"));
    }
    if alphas != want_alpha {
        problems.push(format!("alpha {alphas:?} != {want_alpha:?}"));
    }
    if problems.is_empty() {
        Ok(format!("alpha {alphas:?}, beta {betas:?} in {took:.2?}"))
    } else {
        Err(problems.join("; "))
    }
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut grid: Vec<(u64, u64, usize)> = Vec::new();
    for n in 1..=40u64 {
        for a in 1..=n {
            for k in 1..=3 {
                grid.push((a, n, k));
            }
            if n <= 20 {
                grid.push((a, n, 4));
            }
        }
    }
    for (a, n, k) in grid {
        let got = count(a, n, k, FREE).map_err(|e| e.to_string())?;
        let want = naive_count(a, n, k);
        if !got.complete || got.count != want {
            return Err(format!("count({a}, {n}, {k}) = {} but oracle gives {want}", got.count));
        }
        checked += 1;
    }
    let took = within(Duration::from_secs(60), start)?;
    Ok(format!("{checked} (a, n, k) triples agree in {took:.2?}"))
}

fn divisor_cross_check() -> Outcome {
    let start = Instant::now();
    for n in 1..=10_000u64 {
        let got = a_k(n, 1, FREE).map_err(|e| e.to_string())?.a_k_n;
        let want = divisor_count(n);
        if got != want {
            return Err(format!("A_1({n}) = {got}, d({n}) = {want}"));
        }
    }
    let took = within(Duration::from_secs(30), start)?;
    Ok(format!("A_1(n) = d(n) for n <= 10000 in {took:.2?}"))
}

fn binary_fast_path() -> Outcome {
    let start = Instant::now();
    for n in 1..=500u64 {
        let fast = a_2_fast(n);
        let dfs = a_k(n, 2, FREE).map_err(|e| e.to_string())?.a_k_n;
        if fast != dfs {
            return Err(format!("n={n}: a_2_fast {fast} != a_k {dfs}"));
        }
    }
    let took = within(Duration::from_secs(60), start)?;
    Ok(format!("n <= 500 agree in {took:.2?}"))
}

/// Criteria 5 and 6 walk the same full enumeration at k = 3, n <= 300.
struct TypeWalk {
    labelled: u64,
    binary_checked: u64,
    problems: Vec<String>,
    worst_ratio: f64,
}

fn walk_k3(n_max: u64) -> TypeWalk {
    let per_n: Vec<TypeWalk> = (1..=n_max).into_par_iter().map(walk_k3_at).collect();
    per_n.into_iter().fold(
        TypeWalk { labelled: 0, binary_checked: 0, problems: Vec::new(), worst_ratio: 0.0 },
        |mut acc, w| {
            acc.labelled += w.labelled;
            acc.binary_checked += w.binary_checked;
            acc.problems.extend(w.problems);
            acc.worst_ratio = acc.worst_ratio.max(w.worst_ratio);
            acc
        },
    )
}

fn walk_k3_at(n: u64) -> TypeWalk {
    let k = 3;
    let mut walk = TypeWalk { labelled: 0, binary_checked: 0, problems: Vec::new(), worst_ratio: 0.0 };
    let mut seen: BTreeMap<usize, Vec<bool>> = (1..k).map(|j| (j, vec![false; n as usize])).collect();
    for a in 1..=n {
        let all = enumerate(a, n, k, FREE).expect("valid input");
        assert!(all.complete);
        for rep in &all.representations {
            let ms = rep.denominators();
            let label = classify_denominators(ms, n, k).expect("k = 3").j();
            let holding: Vec<usize> = (1..k).filter(|&j| has_type(ms, n, j, k).unwrap()).collect();
            if holding != [label] {
                walk.problems.push(format!("{ms:?} n={n}: classify {label}, predicates {holding:?}"));
            }
            walk.labelled += 1;
            seen.get_mut(&label).unwrap()[a as usize - 1] = true;
            if label == k - 1 {
                match binary_reduce(&ms[..k - 2], a, n) {
                    Ok((ap, np)) => {
                        let tail = &Fraction::unit(ms[1].clone()).unwrap() + &Fraction::unit(ms[2].clone()).unwrap();
                        let expect_np = BigUint::from(n) * &ms[0];
                        if ap > np || np != expect_np || Fraction::new(ap.clone(), np.clone()).unwrap() != tail {
                            walk.problems.push(format!("reduce {ms:?} a={a} n={n} -> {ap}/{np}"));
                        }
                        walk.binary_checked += 1;
                    }
                    Err(e) => walk.problems.push(format!("reduce {ms:?} a={a} n={n}: {e}")),
                }
            }
        }
    }
    let census = type_counts(n, k, FREE).expect("k = 3");
    if census.members != seen {
        walk.problems.push(format!("n={n}: early-exit census differs from full enumeration"));
    }
    let plain = a_k(n, k, FREE).expect("valid input");
    let union: Vec<bool> = (0..n as usize).map(|i| seen.values().any(|s| s[i])).collect();
    if union != plain.members {
        walk.problems.push(format!("n={n}: union of type sets != A_3 membership"));
    }
    let type1 = census.counts()[&1];
    if !within_type_bound(type1, n, k).unwrap() || type1 * type1 > 9 * n {
        walk.problems.push(format!("n={n}: type-1 count {type1} exceeds 3 sqrt(n)"));
    }
    walk.worst_ratio = walk.worst_ratio.max(type1 as f64 / (3.0 * (n as f64).sqrt()));
    walk
}

fn type_machinery(walk: &TypeWalk) -> Outcome {
    let type_problems: Vec<&String> = walk.problems.iter().filter(|p| !p.starts_with("reduce")).collect();
    if type_problems.is_empty() {
        Ok(format!(
            "{} representations labelled once each; max type-1 count / 3 sqrt(n) = {:.3}",
            walk.labelled, walk.worst_ratio
        ))
    } else {
        Err(format!("{} violations, first: {}", type_problems.len(), type_problems[0]))
    }
}

fn reduction_soundness(walk: &TypeWalk) -> Outcome {
    let bad: Vec<&String> = walk.problems.iter().filter(|p| p.starts_with("reduce")).collect();
    if bad.is_empty() {
        Ok(format!("{} type-2 solutions reduce to valid 2-term representations", walk.binary_checked))
    } else {
        Err(format!("{} violations, first: {}", bad.len(), bad[0]))
    }
}

fn exponent_identities() -> Outcome {
    for k in 3..=16 {
        let b = beta(k).unwrap();
        for j in 1..=k - 2 {
            if type_bound_exponent(j, k, gamma).unwrap() != b {
                return Err(format!("identity A fails at k={k}, j={j}"));
            }
            if type_bound_exponent(j, k, gamma_quarter_scale).unwrap() == b {
                return Err(format!("2^(i-1)/2^k scaling unexpectedly satisfies identity A at k={k}, j={j}"));
            }
        }
        if threshold_sum(k, gamma).unwrap() != b {
            return Err(format!("identity B fails at k={k}"));
        }
    }
    Ok("identities A and B hold for 3 <= k <= 16; 2^(i-1)/2^k scaling fails A everywhere".into())
}

fn monotonicity() -> Outcome {
    let start = Instant::now();
    for n in 1..=200u64 {
        let counts: Vec<u64> = (1..=4).map(|k| a_k(n, k, FREE).unwrap().a_k_n).collect();
        if let Some(k) = (0..3).find(|&i| counts[i] > counts[i + 1]) {
            return Err(format!("A_{}({n}) = {} > A_{}({n}) = {}", k + 1, counts[k], k + 2, counts[k + 1]));
        }
    }
    Ok(format!("A_1 <= A_2 <= A_3 <= A_4 for n <= 200 in {:.2?}", start.elapsed()))
}

fn propagation_consistency() -> Outcome {
    for ell in 1..=14 {
        let p: ExactExponent = propagate_exponent(ell).unwrap();
        if p != beta(ell + 2).unwrap() {
            return Err(format!("ell={ell}: {p} != beta_{}", ell + 2));
        }
    }
    Ok("propagate_exponent(l) = beta(l + 2) for 1 <= l <= 14".into())
}

fn strip_elapsed(csv: &str) -> String {
    csv.lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head))
        .collect::<Vec<_>>()
        .join("\n")
}

fn sweep_determinism(dir: &Path) -> Outcome {
    let mut outputs = Vec::new();
    for jobs in [1, 4, 8] {
        let out = dir.join(format!("jobs{jobs}.csv"));
        let status = efrac(&[
            "sweep", "--k", "2", "--n-min", "1", "--n-max", "200", "--jobs", &jobs.to_string(),
            "--out", out.to_str().unwrap(),
        ])
        .status;
        if !status.success() {
            return Err(format!("sweep --jobs {jobs} exited {:?}", status.code()));
        }
        outputs.push(strip_elapsed(&std::fs::read_to_string(&out).unwrap()));
    }
    if outputs.iter().any(|o| o != &outputs[0]) {
        return Err("CSV differs across --jobs 1/4/8".into());
    }
    if outputs[0].lines().count() != 201 {
        return Err("expected a header and 200 rows".into());
    }

    let job = SweepJob {
        k: 2,
        n_min: 1,
        n_max: 200,
        jobs: 1,
        cache_path: Some(dir.join("cache.csv")),
        out_path: dir.join("cold.csv"),
        max_nodes: None,
    };
    let start = Instant::now();
    let cold = run_sweep(&job).map_err(|e| e.to_string())?;
    let cold_time = start.elapsed();
    let warm_job = SweepJob { out_path: dir.join("warm.csv"), ..job };
    let start = Instant::now();
    let warm = run_sweep(&warm_job).map_err(|e| e.to_string())?;
    let warm_time = start.elapsed();
    let cold_bytes = std::fs::read(dir.join("cold.csv")).unwrap();
    let warm_bytes = std::fs::read(dir.join("warm.csv")).unwrap();
    if cold_bytes != warm_bytes {
        return Err("warm-cache rerun is not byte-identical".into());
    }
    if strip_elapsed(std::str::from_utf8(&cold_bytes).unwrap()) != outputs[0] {
        return Err("in-process sweep differs from CLI sweep".into());
    }
    if (cold.computed, warm.computed) != (200, 0) {
        return Err(format!("computed {} cold, {} warm", cold.computed, warm.computed));
    }
    let speedup = cold_time.as_secs_f64() / warm_time.as_secs_f64();
    if speedup < 10.0 {
        return Err(format!("warm rerun only {speedup:.1}x faster ({cold_time:.2?} vs {warm_time:.2?})"));
    }
    Ok(format!(
        "jobs 1/4/8 identical; warm rerun identical, {warm_time:.2?} vs {cold_time:.2?} cold ({speedup:.0}x)"
    ))
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let started = Instant::now();
    let walk = walk_k3(300);
    let walk_time = started.elapsed();

    let results: Vec<(&str, Outcome)> = vec![
        ("1 exponent table reproduction", exponent_table_reproduction()),
        ("2 oracle equivalence", oracle_equivalence()),
        ("3 divisor cross-check", divisor_cross_check()),
        ("4 binary fast-path equivalence", binary_fast_path()),
        ("5 type machinery", type_machinery(&walk)),
        ("6 reduction soundness", reduction_soundness(&walk)),
        ("7 exponent identities", exponent_identities()),
        ("8 monotonicity", monotonicity()),
        ("9 propagation consistency", propagation_consistency()),
        ("10 determinism", sweep_determinism(dir.path())),
    ];

    println!("acceptance (k = 3 walk over n <= 300 took {walk_time:.2?})");
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

//! One function per subcommand. Each writes its normal output to `out` and
//! returns the process exit code.

use std::io::Write;
use std::ops::ControlFlow;

use efrac::instrument::{classify_denominators, log_ratio};
use efrac::{
    a_k, a_k_with_types, exponent_table, partial_sum, search, Fraction, Outcome, Representation,
};
use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use crate::budget;
use crate::error::{exit, CliError};

fn big_number(v: &BigUint) -> Value {
    serde_json::from_str(&v.to_string()).expect("decimal digits are a JSON number")
}

fn fixed6(x: f64) -> Value {
    serde_json::from_str(&format!("{x:.6}")).expect("finite float")
}

fn positive(name: &str, v: u64) -> Result<u64, CliError> {
    if v == 0 {
        return Err(CliError::Usage(format!("--{name} must be positive")));
    }
    Ok(v)
}

pub struct SolveArgs {
    pub a: u64,
    pub n: u64,
    pub k: usize,
    pub limit: Option<u64>,
    pub max_nodes: Option<u64>,
}

/// One JSON line per representation of a/n, in lexicographic order.
pub fn solve(args: &SolveArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (a, n) = (positive("a", args.a)?, positive("n", args.n)?);
    let k = positive("k", args.k as u64)? as usize;
    if args.limit == Some(0) {
        return Err(CliError::Usage("--limit must be positive".into()));
    }
    let target = Fraction::new(a, n)?;
    let budget = budget::resolve(args.max_nodes, n, k);
    let mut emitted = 0u64;
    let mut failure: Option<CliError> = None;
    let (outcome, _) = search(a, n, k, budget, |ms| {
        let line = Representation::new(ms.to_vec(), target.clone())
            .map_err(CliError::from)
            .and_then(|rep| {
                let label = if k >= 3 {
                    json!(classify_denominators(rep.denominators(), n, k)?.j())
                } else {
                    Value::Null
                };
                let m: Vec<Value> = rep.denominators().iter().map(big_number).collect();
                Ok(json!({"a": a, "n": n, "k": k, "m": m, "type": label}))
            })
            .and_then(|v| writeln!(out, "{v}").map_err(CliError::from));
        if let Err(e) = line {
            failure = Some(e);
            return ControlFlow::Break(());
        }
        emitted += 1;
        if args.limit.is_some_and(|cap| emitted >= cap) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(match outcome {
        Outcome::BudgetExhausted => exit::BUDGET,
        _ if emitted == 0 => exit::NO_SOLUTION,
        _ => exit::OK,
    })
}

pub struct CountArgs {
    pub n: u64,
    pub k: usize,
    pub per_type: bool,
    pub max_nodes: Option<u64>,
}

/// A_k(n) as a JSON object, with the per-type breakdown on request.
pub fn count(args: &CountArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let n = positive("n", args.n)?;
    let k = positive("k", args.k as u64)? as usize;
    if args.per_type && k < 3 {
        return Err(CliError::Usage("--per-type needs --k >= 3".into()));
    }
    let budget = budget::resolve(args.max_nodes, n, k);
    let record = if args.per_type { a_k_with_types(n, k, budget)? } else { a_k(n, k, budget)? };
    let mut obj = Map::new();
    obj.insert("k".into(), json!(k));
    obj.insert("n".into(), json!(n));
    obj.insert("A".into(), json!(record.a_k_n));
    if args.per_type {
        let types: Map<String, Value> =
            record.per_type.iter().map(|(j, c)| (j.to_string(), json!(c))).collect();
        obj.insert("types".into(), Value::Object(types));
    }
    if !record.is_complete() {
        obj.insert("complete".into(), json!(false));
        obj.insert("undecided".into(), json!(record.undecided));
    }
    writeln!(out, "{}", Value::Object(obj))?;
    Ok(if record.is_complete() { exit::OK } else { exit::BUDGET })
}

/// Σ_{n ≤ x} A_k(n) with its log ratio against x.
pub fn sum(k: usize, x: u64, max_nodes: Option<u64>, out: &mut dyn Write) -> Result<i32, CliError> {
    let k = positive("k", k as u64)? as usize;
    if x < 2 {
        return Err(CliError::Usage(format!("--x must be at least 2, got {x}")));
    }
    let total = partial_sum(k, x, budget::resolve(max_nodes, x, k))?;
    let mut obj = Map::new();
    obj.insert("k".into(), json!(k));
    obj.insert("x".into(), json!(x));
    obj.insert("S".into(), big_number(&total.sum));
    obj.insert("log_ratio".into(), fixed6(log_ratio(&total.sum, x)));
    let complete = total.incomplete.is_empty();
    if !complete {
        obj.insert("complete".into(), json!(false));
    }
    writeln!(out, "{}", Value::Object(obj))?;
    Ok(if complete { exit::OK } else { exit::BUDGET })
}

/// Exact exponent table, one row per k.
pub fn bounds(k_max: usize, out: &mut dyn Write) -> Result<i32, CliError> {
    if k_max < 2 {
        return Err(CliError::Usage(format!("--k-max must be at least 2, got {k_max}")));
    }
    let table = exponent_table(k_max)?;
    let cells: Vec<[String; 4]> = table
        .iter()
        .map(|row| {
            let gammas = if row.gammas.is_empty() {
                "-".to_string()
            } else {
                row.gammas.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
            };
            [row.k.to_string(), row.alpha.to_string(), row.beta.to_string(), gammas]
        })
        .collect();
    let header = ["k", "alpha", "beta", "gamma"];
    let width = |c: usize| {
        cells.iter().map(|r| r[c].len()).chain([header[c].len()]).max().unwrap()
    };
    let widths = [width(0), width(1), width(2)];
    let line = |r: [&str; 4]| {
        format!("{:<w0$}  {:<w1$}  {:<w2$}  {}", r[0], r[1], r[2], r[3], w0 = widths[0], w1 = widths[1], w2 = widths[2])
    };
    writeln!(out, "{}", line(header))?;
    for r in &cells {
        writeln!(out, "{}", line([&r[0], &r[1], &r[2], &r[3]]))?;
    }
    Ok(exit::OK)
}

/// `k,n,A,logA_over_logn` for each listed n, in the order given.
pub fn exponents(k: usize, ns: &[u64], max_nodes: Option<u64>, out: &mut dyn Write) -> Result<i32, CliError> {
    let k = positive("k", k as u64)? as usize;
    if ns.is_empty() {
        return Err(CliError::Usage("--n needs at least one value".into()));
    }
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let n = positive("n", n)?;
        let record = a_k(n, k, budget::resolve(max_nodes, n, k))?;
        if !record.is_complete() {
            return Err(CliError::Budget(format!("k={k}, n={n}")));
        }
        let log = if n < 2 { String::new() } else { format!("{:.6}", log_ratio(&BigUint::from(record.a_k_n), n)) };
        rows.push(format!("{k},{n},{},{log}", record.a_k_n));
    }
    writeln!(out, "k,n,A,logA_over_logn")?;
    for r in rows {
        writeln!(out, "{r}")?;
    }
    Ok(exit::OK)
}

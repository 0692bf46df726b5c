//! Brute-force reference implementations shared by the integration tests.
//! They use only machine integers and share no code with the library.

#![allow(dead_code)]

fn gcd(mut x: u128, mut y: u128) -> u128 {
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

/// All non-decreasing k-tuples with reciprocals summing to a/n, by nested
/// scanning. Each level scans from the previous denominator up to the
/// crude cap `t * q / p` (the largest term is at least the average share)
/// and discards candidates that overshoot; the last term is read off
/// directly.
pub fn naive_solutions(a: u64, n: u64, k: usize) -> Vec<Vec<u128>> {
    fn level(p: u128, q: u128, t: usize, prev: u128, prefix: &mut Vec<u128>, out: &mut Vec<Vec<u128>>) {
        if t == 1 {
            if q.is_multiple_of(p) && q / p >= prev {
                let mut sol = prefix.clone();
                sol.push(q / p);
                out.push(sol);
            }
            return;
        }
        let cap = t as u128 * q / p;
        for m in prev..=cap {
            if p * m <= q {
                continue;
            }
            let (np, nq) = (p * m - q, q * m);
            let g = gcd(np, nq);
            prefix.push(m);
            level(np / g, nq / g, t - 1, m, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    level(a as u128, n as u128, k, 1, &mut Vec::new(), &mut out);
    out
}

pub fn naive_count(a: u64, n: u64, k: usize) -> u64 {
    naive_solutions(a, n, k).len() as u64
}

/// A_k(n) straight from the definition, using the brute-force search.
pub fn naive_a_k(n: u64, k: usize) -> u64 {
    (1..=n).filter(|&a| naive_count(a, n, k) > 0).count() as u64
}

/// Number of divisors by trial division up to sqrt(n).
pub fn divisor_count(n: u64) -> u64 {
    let mut d = 0;
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            d += if i * i == n { 1 } else { 2 };
        }
        i += 1;
    }
    d
}

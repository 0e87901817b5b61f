//! Class numbers by brute force: list every reduced indefinite form of
//! discriminant `D` and count the cycles of the reduction operator.

use std::collections::HashSet;

fn isqrt(n: i64) -> i64 {
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `sqrt(D) - b < 2|a| < sqrt(D) + b` with `0 < b < sqrt(D)`.
fn is_reduced(d: i64, a: i64, b: i64) -> bool {
    let a2 = 2 * a.abs();
    b > 0 && b * b < d && (a2 + b) * (a2 + b) > d && (a2 <= b || (a2 - b) * (a2 - b) < d)
}

fn reduced_forms(d: i64) -> Vec<(i64, i64, i64)> {
    let r = isqrt(d);
    let mut out = Vec::new();
    for b in 1..=r {
        if (d - b * b) % 4 != 0 {
            continue;
        }
        let n = (d - b * b) / 4;
        for a in 1..=n {
            if n % a != 0 {
                continue;
            }
            for sa in [a, -a] {
                if is_reduced(d, sa, b) {
                    out.push((sa, b, -n / sa));
                }
            }
        }
    }
    out
}

fn rho(d: i64, (_, b, c): (i64, i64, i64)) -> (i64, i64, i64) {
    let r = isqrt(d);
    let m = 2 * c.abs();
    // b' = -b mod 2|c| in [r - 2|c| + 1, r]
    let lo = r - m + 1;
    let b2 = lo + (-b - lo).rem_euclid(m);
    (c, b2, (b2 * b2 - d) / (4 * c))
}

/// `(h_narrow, h)` for the fundamental discriminant `d`.
pub fn class_numbers(d: i64) -> (u64, u64) {
    let forms = reduced_forms(d);
    let mut seen = HashSet::new();
    let mut cycles = 0;
    let mut minus_one_in_principal = false;
    for &f in &forms {
        if seen.contains(&f) {
            continue;
        }
        cycles += 1;
        let mut g = f;
        let mut members = Vec::new();
        loop {
            assert!(is_reduced(d, g.0, g.1), "rho left the reduced set");
            seen.insert(g);
            members.push(g);
            g = rho(d, g);
            if g == f {
                break;
            }
        }
        if members.iter().any(|m| m.0 == 1) && members.iter().any(|m| m.0 == -1) {
            minus_one_in_principal = true;
        }
    }
    // N(eps) = -1 exactly when (1, ...) and (-1, ...) share a cycle.
    let h = if minus_one_in_principal { cycles } else { cycles / 2 };
    (cycles, h)
}

/// Fundamental discriminants below `bound`, paired with their radicand.
pub fn fundamental_discriminants(bound: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for m in 2..bound {
        if !greenberg_core::arith::is_squarefree(m) {
            continue;
        }
        let d = if m % 4 == 1 { m } else { 4 * m };
        if d < bound {
            out.push((d, m));
        }
    }
    out.sort();
    out
}

/// Radicands `m < bound` whose reported class numbers disagree with the
/// cycle count, for every fundamental `D < bound`.
pub fn class_number_mismatches(bound: u64) -> Result<Vec<u64>, String> {
    let mut bad = Vec::new();
    for (d, m) in fundamental_discriminants(bound) {
        let spec = greenberg_core::quadfield::discriminant(m).map_err(|e| e.to_string())?;
        let data = greenberg_core::quadfield::class_group(&spec).map_err(|e| e.to_string())?;
        if class_numbers(d as i64) != (data.h_narrow, data.h) {
            bad.push(m);
        }
    }
    Ok(bad)
}

#[test]
fn known_small_values() {
    // Q(sqrt 3) and Q(sqrt 15) have units of norm +1; Q(sqrt 10), Q(sqrt 229) of norm -1.
    assert_eq!(class_numbers(5), (1, 1));
    assert_eq!(class_numbers(12), (2, 1));
    assert_eq!(class_numbers(40), (2, 2));
    assert_eq!(class_numbers(60), (4, 2));
    assert_eq!(class_numbers(136), (4, 2));
    assert_eq!(class_numbers(229), (3, 3));
}

//! Seeded property suites.  Each returns `Err` with the first
//! counterexample found.

use greenberg_core::greenberg::{gras_criterion_with, log_data_for, log_sum_vanishes, CriterionOptions, FieldData};
use greenberg_core::iwasawa::{idempotents, FiniteModule, IntPoly, IwasawaError, LambdaModule};
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestError, TestRng, TestRunner};

pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, max_global_rejects: 4 * cases, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn report<T: std::fmt::Debug>(r: Result<(), TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

/// Squarefree `m < bound` with `m = 1 mod 3`.
pub fn eligible(bound: u64) -> Vec<u64> {
    (2..bound).filter(|&m| m % 3 == 1 && greenberg_core::arith::is_squarefree(m)).collect()
}

/// Swapping the square root of `m` (hence the two places above 3) leaves the
/// verdict, `v(Log eps)` and the minimum valuation unchanged (`v(Log pi)`
/// alone is not invariant: `pi` is only defined up to units), and `Log x_l + Log x_l' = 0` for
/// the unit and the generator of `l^ord`.
pub fn root_branch_suite(cases: u32) -> Result<(), String> {
    let ms = eligible(100_000);
    let strategy = (0..ms.len()).prop_map(move |i| ms[i]);
    report(runner(cases).run(&strategy, |m| {
        let fail = |s: String| TestCaseError::fail(format!("m = {m}: {s}"));
        let a = gras_criterion_with(m, 3, CriterionOptions::default()).map_err(|e| fail(e.to_string()))?;
        let flipped = CriterionOptions { flip_branch: true, ..Default::default() };
        let b = gras_criterion_with(m, 3, flipped).map_err(|e| fail(e.to_string()))?;
        prop_assert_eq!(a.log_class_trivial, b.log_class_trivial);
        prop_assert_eq!((a.v_eps, a.min_v), (b.v_eps, b.min_v));
        let field = FieldData::new(m, 3).map_err(|e| fail(e.to_string()))?;
        let logs = log_data_for(&field, 16, 1024).map_err(|e| fail(e.to_string()))?;
        prop_assert!(log_sum_vanishes(&logs.log_eps), "Log eps sum for m = {}", m);
        prop_assert!(log_sum_vanishes(&logs.log_pi), "Log pi sum for m = {}", m);
        Ok(())
    }))
}

/// A random module: elementary parts and an optional finite part with an
/// upper triangular `T`-action whose diagonal is divisible by `l`.
#[derive(Debug, Clone)]
pub struct ModuleSpec {
    pub ell: u64,
    pub parts: Vec<IntPoly>,
    pub exps: Vec<u32>,
    pub t: Vec<Vec<i64>>,
}

impl ModuleSpec {
    pub fn finite(&self) -> Option<FiniteModule> {
        if self.exps.is_empty() {
            return None;
        }
        let t = self.t.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Some(FiniteModule::new(self.ell, self.exps.clone(), t).expect("generated action is valid"))
    }

    pub fn module(&self) -> LambdaModule {
        LambdaModule::new(self.ell, self.parts.clone(), self.finite()).expect("generated parts are valid")
    }
}

fn part_strategy(ell: u64) -> impl Strategy<Value = IntPoly> {
    let l = ell as i64;
    prop_oneof![
        (1u32..=2).prop_map(move |mu| IntPoly::from_i64s(&[l.pow(mu)])),
        (1usize..=3, prop::collection::vec(-3i64..=3, 3), 1i64..=3, any::<bool>()).prop_map(
            move |(deg, ks, c0, neg)| {
                let mut coeffs: Vec<i64> = ks.iter().take(deg).map(|k| k * l).collect();
                coeffs[0] = if neg { -c0 * l } else { c0 * l };
                coeffs.push(1);
                IntPoly::from_i64s(&coeffs)
            }
        ),
    ]
}

fn finite_strategy(ell: u64, planted: bool) -> impl Strategy<Value = (Vec<u32>, Vec<Vec<i64>>)> {
    let l = ell as i64;
    let r = if planted { 1usize..=2 } else { 0usize..=2 };
    r.prop_flat_map(move |r| (prop::collection::vec(1u32..=2, r), prop::collection::vec(-2i64..=2, r * r)))
        .prop_map(move |(exps, raw)| {
            let r = exps.len();
            let mut t = vec![vec![0i64; r]; r];
            for i in 0..r {
                for j in i..r {
                    let k = raw[i * r + j];
                    t[i][j] = if i == j {
                        k * l
                    } else {
                        k * l.pow(exps[j].saturating_sub(exps[i]))
                    };
                }
            }
            (exps, t)
        })
}

pub fn module_strategy(planted: bool) -> impl Strategy<Value = ModuleSpec> {
    prop_oneof![Just(3u64), Just(5u64), Just(7u64)].prop_flat_map(move |ell| {
        (prop::collection::vec(part_strategy(ell), 0..=2), finite_strategy(ell, planted))
            .prop_map(move |(parts, (exps, t))| ModuleSpec { ell, parts, exps, t })
    })
}

/// Index of the lattice spanned by integer `rows` in `Z^dim`, or `None` if
/// the rows do not have full rank.  Plain gcd row reduction.
pub fn lattice_index(rows: &[Vec<i128>], dim: usize) -> Option<u128> {
    let mut rows: Vec<Vec<i128>> = rows.to_vec();
    let mut index: u128 = 1;
    for col in 0..dim {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            for &i in &nz {
                if i != p {
                    let q = rows[i][col] / rows[p][col];
                    let prow = rows[p].clone();
                    for (x, y) in rows[i].iter_mut().zip(&prow) {
                        *x -= q * y;
                    }
                }
            }
        }
        let p = (0..rows.len()).find(|&i| rows[i][col] != 0)?;
        index *= rows[p][col].unsigned_abs();
        rows.swap_remove(p);
    }
    Some(index)
}

fn valuation(mut n: u128, ell: u64) -> u64 {
    let mut v = 0;
    while n % u128::from(ell) == 0 {
        n /= u128::from(ell);
        v += 1;
    }
    v
}

/// Orders of `ker T` and `coker T` on the finite part by enumerating all of
/// its elements.
pub fn finite_herbrand_brute(ell: u64, exps: &[u32], t: &[Vec<i64>]) -> (u64, u64) {
    let orders: Vec<i64> = exps.iter().map(|&a| (ell as i64).pow(a)).collect();
    let total: i64 = orders.iter().product();
    let mut kernel = 0u64;
    let mut image = std::collections::HashSet::new();
    for mut idx in 0..total {
        let mut x = Vec::with_capacity(orders.len());
        for &o in &orders {
            x.push(idx % o);
            idx /= o;
        }
        let y: Vec<i64> = (0..orders.len())
            .map(|j| (0..orders.len()).map(|i| x[i] * t[i][j]).sum::<i64>().rem_euclid(orders[j]))
            .collect();
        if y.iter().all(|&v| v == 0) {
            kernel += 1;
        }
        image.insert(y);
    }
    let log = |n: u64| valuation(u128::from(n), ell);
    (log(kernel), log(total as u64 / image.len() as u64))
}

/// Herbrand pair against truncated matrices: `T` on `Z^d` for a
/// distinguished part (kernel zero iff full rank, cokernel by lattice index),
/// `T` on `(Z/l^mu)[T]/(T^4)` for `l^mu` (cokernel by lattice index), and
/// element enumeration for the finite part.
pub fn herbrand_suite(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&module_strategy(false), |spec| {
        let m = spec.module();
        let h = m.herbrand().map_err(|e| TestCaseError::fail(format!("{spec:?}: {e}")))?;
        let (inv, mut coinv) =
            if spec.exps.is_empty() { (0, 0) } else { finite_herbrand_brute(spec.ell, &spec.exps, &spec.t) };
        for p in &spec.parts {
            let d = p.degree().unwrap();
            let rows: Vec<Vec<i128>> = if d == 0 {
                let c: i128 = p.constant_term().try_into().unwrap();
                let k = 4;
                let mut rows: Vec<Vec<i128>> = (0..k)
                    .map(|i| (0..k).map(|j| i128::from(j == i + 1)).collect())
                    .collect();
                rows.extend((0..k).map(|i| (0..k).map(|j| if i == j { c } else { 0 }).collect()));
                rows
            } else {
                (0..d)
                    .map(|i| {
                        (0..d)
                            .map(|j| {
                                if i + 1 < d {
                                    i128::from(j == i + 1)
                                } else {
                                    -i128::try_from(p.coeff(j)).unwrap()
                                }
                            })
                            .collect()
                    })
                    .collect()
            };
            let dim = if d == 0 { 4 } else { d };
            let idx = lattice_index(&rows, dim).ok_or_else(|| TestCaseError::fail("singular T"))?;
            coinv += valuation(idx, spec.ell);
        }
        prop_assert_eq!((h.inv_exp, h.coinv_exp), (inv, coinv), "{:?}", spec);
        let chi0 = m.char_poly().constant_term();
        let v = greenberg_core::arith::valuation(&chi0, &spec.ell.into()).unwrap() as i64;
        prop_assert_eq!(h.inv_exp as i64 - h.coinv_exp as i64, -v);
        prop_assert_eq!(h.pseudo_null, v == 0);
        Ok(())
    }))
}

fn reject_not_coprime<T>(r: Result<T, IwasawaError>) -> Result<T, TestCaseError> {
    r.map_err(|e| match e {
        IwasawaError::NotCoprime { .. } => TestCaseError::reject("shares a root with some omega_n"),
        e => TestCaseError::fail(e.to_string()),
    })
}

/// `e_n = mu l^n + lambda n + nu` on the fitted window and two levels past
/// it, with `(mu, lambda)` equal to the characteristic polynomial's.
pub fn growth_suite(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&module_strategy(false), |spec| {
        let m = spec.module();
        let inv = reject_not_coprime(m.iwasawa_invariants())?;
        prop_assert_eq!((inv.mu, inv.lambda), m.mu_lambda(), "{:?}", spec);
        for n in inv.start..inv.start + 7 {
            let e = reject_not_coprime(m.quotient_order(n))?;
            prop_assert_eq!(i128::from(e), inv.predict(spec.ell, n), "n = {} for {:?}", n, spec);
        }
        Ok(())
    }))
}

/// With a planted finite part `F`, the stable capitulation kernel equals
/// `|F|` from the level where `omega_n F = 0` on, and is monotone in `m`.
pub fn capitulation_suite(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&module_strategy(true), |spec| {
        let m = spec.module();
        let f = m.finite_part().unwrap();
        let n0 = f.stable_level();
        for n in n0..n0 + 3 {
            let k = reject_not_coprime(m.stabilized_kernel(n))?;
            prop_assert_eq!(k, f.order_exp(), "n = {} for {:?}", n, spec);
        }
        let mut prev = 0;
        for top in 0..4 {
            let k = reject_not_coprime(m.capitulation_kernel(0, top))?;
            prop_assert!(k >= prev);
            prev = k;
        }
        Ok(())
    }))
}

/// `sum e = 1`, `e^2 = e`, `e e' = 0`, multiplying in `(Z/l^N)[Delta]`
/// directly.  `d` not dividing `l - 1` must be refused.
pub fn idempotent_suite() -> Result<(), String> {
    const N: u32 = 8;
    for ell in [3u64, 5, 13] {
        for d in [1u64, 2, 4] {
            let res = idempotents(d, ell, N);
            if (ell - 1) % d != 0 {
                if !matches!(res, Err(IwasawaError::UnsupportedDelta { .. })) {
                    return Err(format!("d = {d}, l = {ell} should be unsupported"));
                }
                continue;
            }
            let es = res.map_err(|e| e.to_string())?;
            let modulus = BigInt::from(ell).pow(N);
            let vecs: Vec<Vec<BigInt>> =
                es.iter().map(|e| e.coeffs().iter().map(|c| BigInt::from(c.clone())).collect()).collect();
            let du = d as usize;
            let mul = |a: &[BigInt], b: &[BigInt]| {
                let mut out = vec![BigInt::from(0); du];
                for i in 0..du {
                    for j in 0..du {
                        out[(i + j) % du] += &a[i] * &b[j];
                    }
                }
                out.into_iter().map(|x| ((x % &modulus) + &modulus) % &modulus).collect::<Vec<_>>()
            };
            let mut one = vec![BigInt::from(0); du];
            one[0] = BigInt::from(1);
            let zero = vec![BigInt::from(0); du];
            let mut sum = zero.clone();
            for (i, a) in vecs.iter().enumerate() {
                for (k, x) in sum.iter_mut().enumerate() {
                    *x = (&*x + &a[k]) % &modulus;
                }
                for (j, b) in vecs.iter().enumerate() {
                    let p = mul(a, b);
                    let want = if i == j { a } else { &zero };
                    if &p != want {
                        return Err(format!("d = {d}, l = {ell}: e_{i} e_{j} wrong"));
                    }
                }
            }
            if sum != one {
                return Err(format!("d = {d}, l = {ell}: idempotents do not sum to 1"));
            }
        }
    }
    Ok(())
}

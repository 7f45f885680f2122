//! Acceptance suite. Runs every criterion in sequence, prints one PASS or
//! FAIL line each, and exits nonzero if any failed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use eigmap::eigstructure::{
    complete_eigenstructure, maximal_root_polynomials, root_polynomial_order, transform_root_polynomial,
    verify_mobius_roundtrip, verify_theorem,
};
use eigmap::fixtures::{intro_map, intro_matrix, quartic_map};
use eigmap::minbasis::{
    default_cap, forney_check, left_kernel_minimal_basis, minimal_indices_oracle, right_kernel_minimal_basis,
};
use eigmap::point::CharPoint;
use eigmap::random::{self, InstanceKind, InstanceRng};
use eigmap::ratmap::{RationalMap, Target};
use eigmap::smith::{invariant_polynomials, smith_form};
use eigmap::{Field, Poly, PolyMatrix, Scalar};
use rand::Rng;

const Q: Field = Field::Rationals;
const F7: Field = Field::Prime(7);

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn p(c: &[i64]) -> Poly {
    Poly::from_i64s(Q, c)
}

fn ratio(a: i64, b: i64) -> Scalar {
    Q.from_ratio(&a.into(), &b.into()).unwrap()
}

fn field_for(i: usize) -> Field {
    if i.is_multiple_of(2) {
        Q
    } else {
        F7
    }
}

fn intro_golden() -> Outcome {
    let pm = intro_matrix();
    let ep = complete_eigenstructure(&pm).map_err(|e| e.to_string())?;
    let expect_p = vec![(CharPoint::Finite(p(&[-20, 1])), vec![1, 1]), (CharPoint::Finite(p(&[0, 1])), vec![1, 2])];
    ensure!(ep.finite.entries == expect_p, "P divisors {:?}", ep.finite.entries);
    ensure!(ep.infinite.is_empty(), "P infinite {:?}", ep.infinite);
    ensure!(ep.left_indices == vec![0, 1] && ep.right_indices.is_empty(), "P indices");

    let report = verify_theorem(&pm, &intro_map()).map_err(|e| e.to_string())?;
    let eq = &report.q_structure;
    let expect_q = vec![
        (CharPoint::at(&ratio(-5, 4)), vec![1, 2]),
        (CharPoint::at(&ratio(5, 4)), vec![1, 2]),
        (CharPoint::at(&ratio(5, 2)), vec![2, 2]),
    ];
    let mut got = eq.finite.entries.clone();
    got.sort_by(|a, b| a.0.value().unwrap().canonical_cmp(&b.0.value().unwrap()));
    ensure!(got == expect_q, "Q divisors {:?}", eq.finite.entries);
    ensure!(eq.infinite.is_empty(), "Q infinite {:?}", eq.infinite);
    ensure!(eq.left_indices == vec![0, 2] && eq.right_indices.is_empty(), "Q indices");
    ensure!(report.q.grade() == 4, "Q grade {}", report.q.grade());
    ensure!(report.verdict, "verdict false");
    Ok("P and Q eigenstructures reproduced, verdict true".into())
}

fn preimage_golden() -> Outcome {
    let m = quartic_map();
    let t1 = m.preimage_set(&Target::Finite(Q.one())).map_err(|e| e.to_string())?;
    let expect = vec![
        (CharPoint::at(&Q.one()), 2),
        (CharPoint::at(&Q.from_i64(-1)), 1),
        (CharPoint::Infinity, 1),
    ];
    ensure!(t1.entries == expect, "T_1 = {:?}", t1.entries);
    ensure!(t1.s == 3, "S = {}", t1.s);
    let tinf = m.preimage_set(&Target::Infinity).map_err(|e| e.to_string())?;
    ensure!(tinf.entries == vec![(CharPoint::at(&Q.zero()), 4)], "T_inf = {:?}", tinf.entries);
    Ok("T_1 = {-1:1, 1:2, inf:1}, T_inf = {0:4}".into())
}

/// Cofactor expansion along the first row.
fn det(m: &[Vec<Poly>], field: Field) -> Poly {
    match m.len() {
        0 => Poly::one(field),
        1 => m[0][0].clone(),
        n => {
            let mut acc = Poly::zero(field);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, e)| e.clone()).collect())
                    .collect();
                let term = &m[0][j] * &det(&minor, field);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant polynomials as ratios of gcds of `k x k` minors.
fn determinantal_oracle(m: &PolyMatrix) -> Vec<Poly> {
    let f = m.field();
    let rows = m.to_rows();
    let nu = m.rows().min(m.cols());
    let mut divisors = vec![Poly::one(f)];
    for k in 1..=nu {
        let mut g = Poly::zero(f);
        for rs in subsets(m.rows(), k) {
            for cs in subsets(m.cols(), k) {
                let sub: Vec<Vec<Poly>> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j].clone()).collect()).collect();
                let d = det(&sub, f);
                if !d.is_zero() {
                    g = if g.is_zero() { d.monic() } else { g.gcd(&d) };
                }
            }
        }
        divisors.push(g);
    }
    (1..=nu)
        .map(|k| if divisors[k].is_zero() { Poly::zero(f) } else { divisors[k].exact_div(&divisors[k - 1]).unwrap() })
        .collect()
}

fn smith_oracle() -> Outcome {
    let mut r = random::rng(3);
    for i in 0..200 {
        let f = field_for(i);
        let (rows, cols) = (r.gen_range(1..=4), r.gen_range(1..=4));
        let m = random::matrix(&mut r, f, rows, cols, 4);
        let dec = smith_form(&m);
        let oracle = determinantal_oracle(&m);
        ensure!(dec.invariant_polys == oracle, "case {i}: {:?} vs {:?}", dec.invariant_polys, oracle);
        ensure!(dec.a.mul(&m).unwrap().mul(&dec.b).unwrap().entries() == dec.s.entries(), "case {i}: A P B != S");
        ensure!(dec.a.is_unimodular() == Ok(true) && dec.b.is_unimodular() == Ok(true), "case {i}: transformers not unimodular");
    }
    Ok("200 matrices over Q and F7, zero failures".into())
}

fn minimal_index_oracle() -> Outcome {
    let mut r = random::rng(4);
    let mut vectors = 0;
    for i in 0..100 {
        let f = field_for(i);
        let (rows, cols) = (r.gen_range(1..=4), r.gen_range(1..=5));
        let m = random::singular_matrix(&mut r, f, rows, cols, 3);
        let cap = default_cap(&m);
        let right = right_kernel_minimal_basis(&m).map_err(|e| format!("case {i}: {e}"))?;
        let left = left_kernel_minimal_basis(&m).map_err(|e| format!("case {i}: {e}"))?;
        let oracle_r = minimal_indices_oracle(&m, cap).map_err(|e| e.to_string())?;
        let oracle_l = minimal_indices_oracle(&m.transpose(), cap).map_err(|e| e.to_string())?;
        ensure!(right.indices == oracle_r, "case {i}: right {:?} vs {:?}", right.indices, oracle_r);
        ensure!(left.indices == oracle_l, "case {i}: left {:?} vs {:?}", left.indices, oracle_l);
        for (mat, basis) in [(&m, &right), (&m.transpose(), &left)] {
            if basis.is_empty() {
                continue;
            }
            let fc = forney_check(mat, &basis.vectors).map_err(|e| format!("case {i}: {e}"))?;
            ensure!(fc.holds, "case {i}: Forney check failed");
            vectors += basis.len();
        }
    }
    Ok(format!("100 singular matrices, {vectors} basis vectors checked, zero failures"))
}

fn theorem_suite() -> Outcome {
    let mut r = random::rng(5);
    let (mut p_inf, mut q_inf) = (0, 0);
    for i in 0..200 {
        let f = field_for(i);
        let kind = InstanceKind::ALL[(i / 2) % 4];
        let t = random::theorem_instance(&mut r, f, 3, 4, 3, 3, kind);
        let rep = verify_theorem(&t.p, &t.map).map_err(|e| format!("case {i}: {e}"))?;
        ensure!(rep.verdict, "case {i} ({kind:?}) over {f}: verdict false\n{rep:#?}");
        p_inf += usize::from(!rep.p_structure.infinite.is_empty());
        q_inf += usize::from(!rep.q_structure.infinite.is_empty());
    }
    ensure!(p_inf > 0 && q_inf > 0, "no infinite divisors exercised ({p_inf}, {q_inf})");
    Ok(format!("200 pairs, zero failures; infinite divisors in P: {p_inf}, in Q: {q_inf}"))
}

fn mobius_suite() -> Outcome {
    let mut r = random::rng(6);
    for i in 0..50 {
        let f = field_for(i);
        let (rows, cols) = (r.gen_range(1..=3), r.gen_range(1..=3));
        let m = random::raise_grade(&random::matrix(&mut r, f, rows, cols, 3), r.gen_range(0..=1));
        let map = random::mobius_map(&mut r, f);
        let rep = verify_mobius_roundtrip(&m, &map).map_err(|e| format!("case {i}: {e}"))?;
        ensure!(rep.verdict, "case {i}: {rep:?}");
    }
    Ok("50 matrices, multisets and indices preserved, round trip exact".into())
}

fn random_vector(r: &mut InstanceRng, f: Field, len: usize) -> Vec<Poly> {
    (0..len).map(|_| random::poly(r, f, 2, 3)).collect()
}

fn local_exponents(m: &PolyMatrix, x0: &Scalar) -> Vec<u32> {
    let lin = Poly::linear_root(x0);
    invariant_polynomials(m).iter().filter(|d| !d.is_zero()).map(|d| d.valuation(&lin).0).filter(|&e| e > 0).collect()
}

fn structural_checks() -> Outcome {
    let mut r = random::rng(7);
    let mut counts = [0usize; 7];
    for i in 0..60 {
        let f = field_for(i);
        let t = random::theorem_instance(&mut r, f, 3, 3, 3, 3, InstanceKind::ALL[(i / 2) % 4]);
        let (m, map) = (&t.p, &t.map);
        let g = m.grade();

        // distinct points have coprime fibers, and finite fibers avoid the poles
        let x0 = random::poly(&mut r, f, 0, 5).coeff(0);
        let x1 = &x0 + &f.one();
        let fib0 = map.fiber_poly(&Target::Finite(x0.clone()));
        let fib1 = map.fiber_poly(&Target::Finite(x1));
        ensure!(fib0.gcd(&fib1).is_one(), "case {i}: fibers share a root");
        ensure!(map.phi_natural(&Poly::linear_root(&x0)).gcd(map.d()).is_one(), "case {i}: image meets poles");
        counts[0] += 1;

        // the map commutes with monic gcds
        let (a, b) = (random::poly(&mut r, f, 3, 3), random::poly(&mut r, f, 3, 3));
        let c = random::poly(&mut r, f, 2, 3);
        let (a, b) = (&a * &c, &b * &c);
        if !a.is_zero() && !b.is_zero() {
            let lhs = map.phi_natural(&a).gcd(&map.phi_natural(&b));
            ensure!(lhs == map.phi_natural(&a.gcd(&b)).monic(), "case {i}: gcd does not commute");
            counts[1] += 1;
        }

        // raising the grade by h multiplies the reversal invariants by x^h
        let h = r.gen_range(1..=2);
        let base = invariant_polynomials(&m.reversal());
        let shifted = invariant_polynomials(&random::raise_grade(m, h).reversal());
        let xh = Poly::monomial(f.one(), h);
        let expect: Vec<Poly> = base.iter().map(|d| d * &xh).collect();
        ensure!(shifted == expect, "case {i}: grade shift");
        counts[2] += 1;

        // distinct matrices of grade g have distinct images
        let other = random::matrix(&mut r, f, m.rows(), m.cols(), g).with_grade(g).unwrap();
        let same = map.phi_matrix(m).unwrap().entries() == map.phi_matrix(&other).unwrap().entries();
        ensure!(same == (m.entries() == other.entries()), "case {i}: map not injective");
        counts[3] += 1;

        // regular multipliers nonsingular at x0 keep the local structure
        let x0 = complete_eigenstructure(m)
            .map_err(|e| e.to_string())?
            .finite
            .entries
            .iter()
            .find_map(|(c, _)| c.value())
            .unwrap_or(x0);
        let am = random::regular_at(&mut r, f, m.rows(), 1, &x0);
        let bm = random::regular_at(&mut r, f, m.cols(), 1, &x0);
        let apb = am.mul(m).unwrap().mul(&bm).unwrap();
        ensure!(local_exponents(&apb, &x0) == local_exponents(m, &x0), "case {i}: multipliers changed the exponents");
        counts[4] += 1;

        // v is a root polynomial of A P B iff B v is one of P, with equal orders
        let mut candidates: Vec<Vec<Poly>> = maximal_root_polynomials(&apb, &x0)
            .map(|v| v.into_iter().map(|rp| rp.v).collect())
            .unwrap_or_default();
        candidates.extend((0..3).map(|_| random_vector(&mut r, f, m.cols())));
        candidates.extend(right_kernel_minimal_basis(&apb).map_err(|e| e.to_string())?.vectors);
        for v in &candidates {
            let lhs = root_polynomial_order(&apb, v, &x0).map_err(|e| e.to_string())?;
            let rhs = root_polynomial_order(m, &bm.mul_vec(v), &x0).map_err(|e| e.to_string())?;
            ensure!(lhs == rhs, "case {i}: root polynomial orders {lhs:?} vs {rhs:?}");
            counts[5] += 1;
        }

        // index sum, on both sides of the map
        for e in [complete_eigenstructure(m), complete_eigenstructure(&map.phi_matrix(m).unwrap())] {
            let e = e.map_err(|e| e.to_string())?;
            ensure!(e.index_sum() == e.grade * e.rank, "case {i}: index sum");
            counts[6] += 1;
        }
    }
    Ok(format!(
        "60 instances; checks run: fibers {}, gcd {}, grade shift {}, injectivity {}, multipliers {}, root polynomials {}, index sum {}",
        counts[0], counts[1], counts[2], counts[3], counts[4], counts[5], counts[6]
    ))
}

/// A map with `n - x0 d = c (y - y0)^mult`, so `y0` lies over `x0` with the
/// given multiplicity.
fn map_through(r: &mut InstanceRng, f: Field, x0: &Scalar, y0: &Scalar, mult: u32) -> Option<RationalMap> {
    let d = random::poly(r, f, 2, 3);
    if d.is_zero() || d.evaluate(y0).ok()?.is_zero() {
        return None;
    }
    let c = random::poly(r, f, 0, 3);
    let n = &d.scale(x0) + &Poly::linear_root(y0).pow(mult).scale(&c.coeff(0));
    RationalMap::new(n, d).ok().filter(|m| m.big_g() <= 3)
}

fn root_transport() -> Outcome {
    let mut r = random::rng(8);
    let primes = [7u64, 11, 13];
    let (mut instances, mut rps, mut findings, mut max_m0) = (0, 0, Vec::new(), 0);
    while instances < 50 {
        let f = Field::prime(primes[instances % 3]).unwrap();
        let x0 = random::poly(&mut r, f, 0, 6).coeff(0);
        let y0 = random::poly(&mut r, f, 0, 6).coeff(0);
        let mult = r.gen_range(1..=2);
        let Some(map) = map_through(&mut r, f, &x0, &y0, mult) else { continue };
        let (rows, cols) = (r.gen_range(1..=3), r.gen_range(1..=3));
        let base = random::matrix(&mut r, f, rows, cols, 2);
        let k = r.gen_range(1..=2);
        let col = r.gen_range(0..cols);
        let lin = Poly::linear_root(&x0).pow(k);
        let mut entries = base.to_rows();
        for row in entries.iter_mut() {
            row[col] = &row[col] * &lin;
        }
        let m = PolyMatrix::from_rows(f, entries, None).unwrap();
        let Ok(set) = maximal_root_polynomials(&m, &x0) else { continue };
        instances += 1;
        for rp in &set {
            let t = transform_root_polynomial(&m, rp, &map, &y0).map_err(|e| format!("instance {instances}: {e}"))?;
            ensure!(t.consistent, "instance {instances}: inconsistent order");
            ensure!(t.outside_kernel, "instance {instances}: w(y0) lies in the kernel");
            max_m0 = max_m0.max(t.multiplicity);
            rps += 1;
            if !t.matches_prediction {
                findings.push(format!(
                    "over F{}: order {} x multiplicity {} predicted, {} measured (truncated order {})",
                    f.characteristic(),
                    t.order,
                    t.multiplicity,
                    t.measured,
                    t.truncated_order
                ));
            }
        }
    }
    for f in &findings {
        println!("    finding: {f}");
    }
    Ok(format!(
        "50 instances, {rps} root polynomials, multiplicities up to {max_m0}; {} mismatches against m0*l",
        findings.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 8] = [
        ("1 intro golden", intro_golden, Some(Duration::from_secs(5))),
        ("2 preimage golden", preimage_golden, None),
        ("3 Smith form vs determinantal divisors", smith_oracle, Some(Duration::from_secs(120))),
        ("4 minimal indices vs exhaustive oracle", minimal_index_oracle, None),
        ("5 transformed eigenstructure on random pairs", theorem_suite, Some(Duration::from_secs(600))),
        ("6 Moebius round trip", mobius_suite, None),
        ("7 structural properties", structural_checks, None),
        ("8 root polynomial transport", root_transport, None),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({elapsed:.2?}): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name} ({elapsed:.2?}): {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}

//! Squarefree decomposition, irreducible factorization and coprime bases.
//!
//! Over a prime field every squarefree part is split with Berlekamp's
//! algorithm. Over the rationals the factor degrees are first sieved with
//! distinct-degree factorizations modulo a few primes; Kronecker's
//! interpolation search then runs only for degrees the sieve leaves open.
//! When the surviving search space exceeds [`KRONECKER_BUDGET`] candidates the
//! factorization reports [`Error::FactorizationTooLarge`].

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::Mat;
use crate::poly::Poly;

/// Largest prime modulus for which Berlekamp splitting is attempted.
pub const MAX_SPLIT_MODULUS: u64 = 1 << 16;

/// Maximum number of interpolation candidates tried per factor degree.
pub const KRONECKER_BUDGET: u64 = 400_000;

/// `unit * prod(base^exp)`, bases monic and pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Scalar,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.unit.clone()), |acc, (b, e)| &acc * &b.pow(*e))
    }
}

/// Squarefree decomposition: pairwise coprime monic squarefree bases with
/// distinct exponents, sorted by exponent.
pub fn squarefree_decompose(p: &Poly) -> Result<Factorization> {
    let (unit, monic) = p.monic_parts();
    if p.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut factors = squarefree_monic(&monic);
    factors.sort_by_key(|(_, e)| *e);
    Ok(Factorization { unit, factors })
}

fn squarefree_monic(f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let field = f.field();
    let mut c = f.gcd(&f.derivative());
    let mut w = f.exact_div(&c).expect("gcd divides");
    let mut i = 1u32;
    while !w.is_constant() {
        let y = w.gcd(&c);
        let z = w.exact_div(&y).expect("gcd divides");
        if !z.is_constant() {
            out.push((z, i));
        }
        i += 1;
        c = c.exact_div(&y).expect("gcd divides");
        w = y;
    }
    if !c.is_constant() {
        // remaining factors occur with multiplicity divisible by p
        let p = field.characteristic() as usize;
        debug_assert!(p > 0);
        let root = Poly::from_vec(field, c.coeffs().iter().step_by(p).cloned().collect());
        for (g, e) in squarefree_monic(&root) {
            out.push((g, e * p as u32));
        }
    }
    out
}

/// Complete factorization into monic irreducibles.
pub fn factor_irreducible(p: &Poly) -> Result<Factorization> {
    let sqf = squarefree_decompose(p)?;
    let mut factors = Vec::new();
    for (base, e) in &sqf.factors {
        for f in split_squarefree(base)? {
            factors.push((f, *e));
        }
    }
    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(Factorization { unit: sqf.unit, factors })
}

pub fn is_irreducible(p: &Poly) -> Result<bool> {
    if p.is_constant() {
        return Ok(false);
    }
    let f = factor_irreducible(p)?;
    Ok(f.factors.len() == 1 && f.factors[0].1 == 1)
}

/// Splits a monic squarefree polynomial into its monic irreducible factors.
pub fn split_squarefree(f: &Poly) -> Result<Vec<Poly>> {
    if f.deg0() <= 1 {
        return Ok(vec![f.clone()]);
    }
    match f.field() {
        Field::Prime(p) => {
            if p > MAX_SPLIT_MODULUS {
                return Err(Error::UnsupportedField(format!(
                    "factorization modulo {p} (limit {MAX_SPLIT_MODULUS})"
                )));
            }
            Ok(berlekamp(f))
        }
        Field::Rationals => split_rational(f),
    }
}

fn x_pow_mod(f: &Poly, mut e: u64) -> Poly {
    let field = f.field();
    let mut base = Poly::x(field).rem(f);
    let mut acc = Poly::one(field);
    while e > 0 {
        if e & 1 == 1 {
            acc = (&acc * &base).rem(f);
        }
        base = (&base * &base).rem(f);
        e >>= 1;
    }
    acc
}

fn berlekamp(f: &Poly) -> Vec<Poly> {
    let field = f.field();
    let p = field.characteristic();
    let n = f.deg0();
    // row i holds x^(i*p) mod f, minus the identity
    let xp = x_pow_mod(f, p);
    let mut m = Mat::zeros(field, n, n);
    let mut cur = Poly::one(field);
    for i in 0..n {
        for j in 0..n {
            let mut v = cur.coeff(j);
            if i == j {
                v = &v - &field.one();
            }
            m.set(i, j, v);
        }
        cur = (&cur * &xp).rem(f);
    }
    let kernel = m.transpose().nullspace();
    let k = kernel.len();
    let mut factors = vec![f.clone()];
    if k == 1 {
        return factors;
    }
    for v in &kernel {
        let v = Poly::from_vec(field, v.clone());
        if v.is_constant() {
            continue;
        }
        let mut next = Vec::new();
        for h in factors {
            if h.deg0() <= 1 {
                next.push(h);
                continue;
            }
            let mut rest = h;
            for s in field.elements().expect("finite field") {
                if rest.deg0() <= 1 {
                    break;
                }
                let g = rest.gcd(&(&v - &Poly::constant(s)));
                if !g.is_constant() && g.deg0() < rest.deg0() {
                    rest = rest.exact_div(&g).unwrap();
                    next.push(g);
                }
            }
            next.push(rest);
        }
        factors = next;
        if factors.len() == k {
            break;
        }
    }
    factors.into_iter().map(|g| g.monic()).collect()
}

/// Degrees of the irreducible factors of a squarefree polynomial over a
/// prime field, by distinct-degree factorization.
fn distinct_degree_pattern(f: &Poly) -> Vec<usize> {
    let field = f.field();
    let p = field.characteristic();
    let mut degrees = Vec::new();
    let mut rest = f.monic();
    let mut h = Poly::x(field);
    let mut i = 1;
    while rest.deg0() >= 2 * i {
        h = pow_mod_poly(&h, p, &rest);
        let g = rest.gcd(&(&h - &Poly::x(field)));
        if !g.is_constant() {
            degrees.extend(std::iter::repeat_n(i, g.deg0() / i));
            rest = rest.exact_div(&g).unwrap();
            h = h.rem(&rest);
        }
        i += 1;
    }
    if !rest.is_constant() {
        degrees.push(rest.deg0());
    }
    degrees
}

fn pow_mod_poly(b: &Poly, mut e: u64, f: &Poly) -> Poly {
    let mut base = b.rem(f);
    let mut acc = Poly::one(f.field());
    while e > 0 {
        if e & 1 == 1 {
            acc = (&acc * &base).rem(f);
        }
        base = (&base * &base).rem(f);
        e >>= 1;
    }
    acc
}

const SIEVE_PRIMES: [u64; 24] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Factor degrees compatible with the factorization patterns of `prim`
/// modulo several good primes.
fn degree_sieve(prim: &[BigInt]) -> BTreeSet<usize> {
    let n = prim.len() - 1;
    let mut allowed: BTreeSet<usize> = (1..n).collect();
    let mut used = 0;
    for &p in &SIEVE_PRIMES {
        if allowed.is_empty() || used == 6 {
            break;
        }
        let fp = Field::Prime(p);
        let reduced = Poly::from_integers(fp, prim);
        if reduced.deg0() != n {
            continue;
        }
        if !reduced.gcd(&reduced.derivative()).is_one() {
            continue;
        }
        used += 1;
        let mut sums: BTreeSet<usize> = BTreeSet::from([0]);
        for d in distinct_degree_pattern(&reduced) {
            let shifted: Vec<usize> = sums.iter().map(|s| s + d).collect();
            sums.extend(shifted);
        }
        allowed.retain(|k| sums.contains(k));
    }
    allowed
}

fn split_rational(f: &Poly) -> Result<Vec<Poly>> {
    let field = f.field();
    let n = f.deg0();
    if n <= 1 {
        return Ok(vec![f.monic()]);
    }
    if f.coeff(0).is_zero() {
        let x = Poly::x(field);
        let mut out = vec![x.clone()];
        out.extend(split_rational(&f.exact_div(&x).unwrap())?);
        return Ok(out);
    }
    let (_, prim) = f.primitive_integer().expect("rational polynomial");
    let allowed = degree_sieve(&prim);
    for k in allowed.into_iter().filter(|&k| k <= n / 2) {
        if let Some(h) = kronecker_search(&prim, k)? {
            let h = h.monic();
            let cof = f.exact_div(&h).expect("search returns a divisor");
            let mut out = split_rational(&h)?;
            out.extend(split_rational(&cof.monic())?);
            return Ok(out);
        }
    }
    Ok(vec![f.monic()])
}

fn eval_int(prim: &[BigInt], a: i64) -> BigInt {
    let a = BigInt::from(a);
    prim.iter().rev().fold(BigInt::zero(), |acc, c| acc * &a + c)
}

/// Prime factorization of `|v|` by trial division, when every prime factor
/// is small enough to certify.
fn small_factorization(v: &BigInt) -> Option<Vec<(u128, u32)>> {
    const TRIAL: u128 = 100_000;
    let mut rest: u128 = v.abs().try_into().ok()?;
    let mut out = Vec::new();
    let mut d: u128 = 2;
    while d <= TRIAL && d * d <= rest {
        let mut e = 0;
        while rest.is_multiple_of(d) {
            rest /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        if rest >= TRIAL * TRIAL {
            return None;
        }
        out.push((rest, 1));
    }
    Some(out)
}

fn divisors_from(fact: &[(u128, u32)]) -> Vec<BigInt> {
    let mut divs = vec![BigInt::one()];
    for &(p, e) in fact {
        let p = BigInt::from(p);
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..e {
                cur = &cur * &p;
                next.push(cur.clone());
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// Searches for an integer factor of degree exactly `k` by interpolating
/// through divisors of the values of `prim` at small integer points.
fn kronecker_search(prim: &[BigInt], k: usize) -> Result<Option<Poly>> {
    let n = prim.len() - 1;
    let field = Field::Rationals;
    let mut points: Vec<(i64, BigInt, Vec<BigInt>)> = Vec::new();
    for step in 0..48i64 {
        let a = if step % 2 == 0 { step / 2 } else { -(step + 1) / 2 };
        let v = eval_int(prim, a);
        if v.is_zero() {
            return Ok(Some(Poly::linear_root(&field.from_i64(a))));
        }
        if let Some(fact) = small_factorization(&v) {
            points.push((a, v, divisors_from(&fact)));
        }
    }
    if points.len() < k + 2 {
        return Err(Error::FactorizationTooLarge(n));
    }
    points.sort_by_key(|(a, _, divs)| (divs.len(), a.abs()));
    let (chosen, rest) = points.split_at(k + 1);
    let checks = &rest[..rest.len().min(4)];
    let mut budget = chosen[0].2.len() as f64;
    for (_, _, divs) in &chosen[1..] {
        budget *= 2.0 * divs.len() as f64;
    }
    if budget > KRONECKER_BUDGET as f64 {
        return Err(Error::FactorizationTooLarge(n));
    }

    // D * L_i(x) = (D / w_i) * prod_{j != i} (x - a_j) has integer coefficients
    let xs: Vec<i64> = chosen.iter().map(|(a, _, _)| *a).collect();
    let mut weights = Vec::new();
    let mut numerators = Vec::new();
    for (i, &xi) in xs.iter().enumerate() {
        let mut w = BigInt::one();
        let mut num = vec![BigInt::one()];
        for (j, &xj) in xs.iter().enumerate() {
            if i != j {
                w *= BigInt::from(xi - xj);
                let mut next = vec![BigInt::zero(); num.len() + 1];
                for (t, c) in num.iter().enumerate() {
                    next[t + 1] += c;
                    next[t] -= c * BigInt::from(xj);
                }
                num = next;
            }
        }
        weights.push(w);
        numerators.push(num);
    }
    let denom = weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w));
    let scaled: Vec<Vec<BigInt>> = numerators
        .iter()
        .zip(&weights)
        .map(|(num, w)| {
            let s = &denom / w;
            num.iter().map(|c| c * &s).collect()
        })
        .collect();

    let values: Vec<Vec<BigInt>> = chosen
        .iter()
        .enumerate()
        .map(|(i, (_, _, divs))| {
            if i == 0 {
                divs.clone()
            } else {
                divs.iter().flat_map(|d| [d.clone(), -d]).collect()
            }
        })
        .collect();

    let lc = prim.last().unwrap();
    let c0 = &prim[0];
    let target = Poly::from_integers(field, prim);
    let mut idx = vec![0usize; k + 1];
    let mut acc = vec![BigInt::zero(); k + 1];
    for (i, vals) in values.iter().enumerate() {
        for (a, s) in acc.iter_mut().zip(&scaled[i]) {
            *a += s * &vals[0];
        }
    }
    loop {
        if acc.iter().all(|c| c.is_multiple_of(&denom)) {
            let ints: Vec<BigInt> = acc.iter().map(|c| c / &denom).collect();
            if !ints[k].is_zero()
                && lc.is_multiple_of(&ints[k])
                && !ints[0].is_zero()
                && c0.is_multiple_of(&ints[0])
                && checks.iter().all(|(a, v, _)| {
                    let hv = eval_int(&ints, *a);
                    !hv.is_zero() && v.is_multiple_of(&hv)
                })
            {
                let h = Poly::from_integers(field, &ints);
                if h.divides(&target) {
                    return Ok(Some(h));
                }
            }
        }
        // odometer step, updating the interpolant incrementally
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(None);
            }
            let old = values[pos][idx[pos]].clone();
            idx[pos] += 1;
            let wrapped = idx[pos] == values[pos].len();
            if wrapped {
                idx[pos] = 0;
            }
            let delta = &values[pos][idx[pos]] - &old;
            for (a, s) in acc.iter_mut().zip(&scaled[pos]) {
                *a += s * &delta;
            }
            if !wrapped {
                break;
            }
            pos += 1;
        }
    }
}

/// Refines nonzero polynomials into pairwise coprime monic squarefree bases.
///
/// Each input is a unit times a product of powers of the returned bases, and
/// all irreducible factors of a base share one multiplicity in every input.
pub fn coprime_base(polys: &[Poly]) -> Result<Vec<Poly>> {
    let mut parts: Vec<Poly> = Vec::new();
    for p in polys {
        if p.is_zero() {
            continue;
        }
        for (b, _) in squarefree_decompose(p)?.factors {
            parts.push(b);
        }
    }
    'outer: loop {
        parts.retain(|b| !b.is_constant());
        parts.sort_by(|a, b| a.canonical_cmp(b));
        parts.dedup();
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                let g = parts[i].gcd(&parts[j]);
                if !g.is_constant() {
                    let a = parts[i].exact_div(&g).unwrap();
                    let b = parts[j].exact_div(&g).unwrap();
                    parts[i] = a;
                    parts[j] = b;
                    parts.push(g);
                    continue 'outer;
                }
            }
        }
        return Ok(parts);
    }
}

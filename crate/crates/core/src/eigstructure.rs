//! Complete eigenstructure, root polynomials, and the check that the
//! eigenstructure of `Q = Phi(P)` is exactly the one predicted from `P`.

use crate::error::{Error, Result};
use crate::factor::{coprime_base, squarefree_decompose};
use crate::field::{Field, Scalar};
use crate::linalg::{in_span, span_basis};
use crate::minbasis::{left_kernel_minimal_basis, right_kernel_minimal_basis};
use crate::point::{split_points, CharPoint};
use crate::poly::Poly;
use crate::polymat::PolyMatrix;
use crate::ratmap::{RationalMap, Target};
use crate::smith::{finite_divisors_of, invariant_polynomials, smith_form, x_valuations, ElementaryDivisors};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompleteEigenstructure {
    pub field: Field,
    pub grade: usize,
    pub rank: usize,
    /// Invariant polynomials `d_1, ..., d_nu`, zeros last.
    pub invariant_polys: Vec<Poly>,
    pub finite: ElementaryDivisors,
    /// Positive exponents at infinity, nondecreasing.
    pub infinite: Vec<u32>,
    /// Exponent of `x` in each nonzero invariant polynomial of the reversal.
    pub infinite_by_index: Vec<u32>,
    pub right_indices: Vec<usize>,
    pub left_indices: Vec<usize>,
}

impl CompleteEigenstructure {
    /// `sum deg(finite) + sum infinite + sum indices`; equals `grade * rank`.
    pub fn index_sum(&self) -> usize {
        self.finite.degree()
            + self.infinite.iter().map(|&e| e as usize).sum::<usize>()
            + self.left_indices.iter().sum::<usize>()
            + self.right_indices.iter().sum::<usize>()
    }

    fn nonzero_invariants(&self) -> &[Poly] {
        &self.invariant_polys[..self.rank]
    }
}

pub fn complete_eigenstructure(p: &PolyMatrix) -> Result<CompleteEigenstructure> {
    let invariant_polys = invariant_polynomials(p);
    let rank = invariant_polys.iter().filter(|d| !d.is_zero()).count();
    let finite = finite_divisors_of(&invariant_polys)?;
    let infinite_by_index = x_valuations(&invariant_polynomials(&p.reversal()));
    let infinite = infinite_by_index.iter().copied().filter(|&e| e > 0).collect();
    let right_indices = right_kernel_minimal_basis(p)?.indices;
    let left_indices = left_kernel_minimal_basis(p)?.indices;
    let e = CompleteEigenstructure {
        field: p.field(),
        grade: p.grade(),
        rank,
        invariant_polys,
        finite,
        infinite,
        infinite_by_index,
        right_indices,
        left_indices,
    };
    if e.index_sum() != e.grade * e.rank {
        return Err(Error::Internal(format!(
            "index sum {} differs from grade * rank = {}",
            e.index_sum(),
            e.grade * e.rank
        )));
    }
    Ok(e)
}

/// Exponent of a squarefree `base` in `p`, provided every irreducible factor
/// of `base` divides `p` exactly that often.
fn uniform_valuation(p: &Poly, base: &Poly) -> Option<u32> {
    let (v, rest) = p.valuation(base);
    rest.gcd(base).is_one().then_some(v)
}

/// Positive exponents of `base` along a chain of nonzero polynomials.
fn local_exponents(chain: &[Poly], base: &Poly) -> Option<Vec<u32>> {
    let mut out = Vec::new();
    for d in chain {
        let v = uniform_valuation(d, base)?;
        if v > 0 {
            out.push(v);
        }
    }
    Some(out)
}

fn scaled(exps: &[u32], m: u32) -> Vec<u32> {
    exps.iter().map(|e| e * m).collect()
}

/// `span` of the evaluations at `x0` of a minimal basis of `ker P`.
pub fn ker_at_point(p: &PolyMatrix, x0: &Scalar) -> Result<Vec<Vec<Scalar>>> {
    let basis = right_kernel_minimal_basis(p)?;
    let evals: Vec<Vec<Scalar>> = basis
        .vectors
        .iter()
        .map(|v| v.iter().map(|e| e.evaluate(x0)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    Ok(span_basis(p.field(), &evals))
}

/// Order of vanishing of a polynomial vector at `x0`; `u32::MAX` for zero.
pub fn vector_order(v: &[Poly], x0: &Scalar) -> u32 {
    v.iter().filter(|e| !e.is_zero()).map(|e| e.order_at(x0)).min().unwrap_or(u32::MAX)
}

fn evaluate_vector(v: &[Poly], x0: &Scalar) -> Vec<Scalar> {
    v.iter().map(|e| e.eval(x0)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootPolynomial {
    pub v: Vec<Poly>,
    pub point: Scalar,
    pub order: u32,
}

/// Checks both defining conditions and returns the order of `v` at `x0`.
pub fn root_polynomial_order(p: &PolyMatrix, v: &[Poly], x0: &Scalar) -> Result<Option<u32>> {
    let order = vector_order(&p.mul_vec(v), x0);
    if order == 0 || order == u32::MAX {
        return Ok(None);
    }
    let ker = ker_at_point(p, x0)?;
    if in_span(p.field(), &ker, &evaluate_vector(v, x0)) {
        return Ok(None);
    }
    Ok(Some(order))
}

/// A maximal set of `x0`-independent root polynomials: the columns of the
/// right Smith transformer belonging to invariant polynomials that vanish
/// at `x0`, with orders equal to the corresponding exponents.
pub fn maximal_root_polynomials(p: &PolyMatrix, x0: &Scalar) -> Result<Vec<RootPolynomial>> {
    let dec = smith_form(p);
    let lin = Poly::linear_root(x0);
    let mut out = Vec::new();
    for (i, d) in dec.invariant_polys.iter().enumerate() {
        if d.is_zero() {
            break;
        }
        let ell = d.valuation(&lin).0;
        if ell == 0 {
            continue;
        }
        let v = dec.b.column(i);
        match root_polynomial_order(p, &v, x0)? {
            Some(order) if order == ell => out.push(RootPolynomial { v, point: x0.clone(), order }),
            other => {
                return Err(Error::Internal(format!(
                    "transformer column {i} has order {other:?} at the point, expected {ell}"
                )))
            }
        }
    }
    if out.is_empty() {
        return Err(Error::NotCharacteristicValue);
    }
    Ok(out)
}

/// Result of transporting a root polynomial of `P` at `x0` to `Q` at `y0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportReport {
    pub w: Vec<Poly>,
    pub multiplicity: u32,
    /// Order of the input root polynomial.
    pub order: u32,
    /// Order at `x0` of `P` applied to the truncated expansion
    /// `sum_{i < order} (x - x0)^i v_i`.
    pub truncated_order: u32,
    /// Measured order of `Q w` at `y0`.
    pub measured: u32,
    /// Whether `w(y0)` lies outside `ker_{y0} Q`.
    pub outside_kernel: bool,
    /// `measured == multiplicity * order`.
    pub matches_prediction: bool,
    /// `measured == multiplicity * truncated_order`, which holds by
    /// construction; a failure here is an internal error.
    pub consistent: bool,
}

/// `w(y) = sum_{i < l} d^(l-1-i) (n - x0 d)^i v_i` where
/// `v(x) = sum_i (x - x0)^i v_i`.
pub fn transform_root_polynomial(
    p: &PolyMatrix,
    rp: &RootPolynomial,
    map: &RationalMap,
    y0: &Scalar,
) -> Result<TransportReport> {
    let x0 = &rp.point;
    let f = p.field();
    let fiber = map.fiber_poly(&Target::Finite(x0.clone()));
    let m0 = fiber.order_at(y0);
    if fiber.is_zero() || m0 == 0 {
        return Err(Error::InvalidProblem("y0 is not a preimage of x0".into()));
    }
    let ell = rp.order as usize;
    let taylor: Vec<Vec<Scalar>> = rp.v.iter().map(|e| e.taylor_coeffs(x0)).collect();
    let coeff = |e: usize, i: usize| taylor[e].get(i).cloned().unwrap_or_else(|| f.zero());
    let shifted = &map.n().clone() - &map.d().scale(x0);
    let mut w = vec![Poly::zero(f); rp.v.len()];
    let mut truncated = vec![Poly::zero(f); rp.v.len()];
    let lin = Poly::linear_root(x0);
    for i in 0..ell {
        let weight = &map.d().pow((ell - 1 - i) as u32) * &shifted.pow(i as u32);
        let xpow = lin.pow(i as u32);
        for (e, slot) in w.iter_mut().enumerate() {
            let c = coeff(e, i);
            if !c.is_zero() {
                *slot = &*slot + &weight.scale(&c);
                truncated[e] = &truncated[e] + &xpow.scale(&c);
            }
        }
    }
    let q = map.phi_matrix(p)?;
    let measured = vector_order(&q.mul_vec(&w), y0);
    let truncated_order = vector_order(&p.mul_vec(&truncated), x0);
    let ker = ker_at_point(&q, y0)?;
    let outside_kernel = !in_span(f, &ker, &evaluate_vector(&w, y0));
    let consistent = measured == m0.saturating_mul(truncated_order);
    if !consistent {
        return Err(Error::Internal(format!(
            "transported order {measured} differs from {m0} * {truncated_order}"
        )));
    }
    Ok(TransportReport {
        w,
        multiplicity: m0,
        order: rp.order,
        truncated_order,
        measured,
        outside_kernel,
        matches_prediction: measured == m0 * rp.order,
        consistent,
    })
}

/// One `y`-side point compared against the prediction from its `x`-side
/// source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorRecord {
    pub x_point: CharPoint,
    pub x_exponents: Vec<u32>,
    pub y_point: CharPoint,
    pub multiplicity: u32,
    pub predicted: Vec<u32>,
    /// `None` when the factors of a cluster point carry different exponents.
    pub observed: Option<Vec<u32>>,
    pub holds: bool,
}

/// A characteristic point of `Q` traced back to `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConverseRecord {
    pub y_point: CharPoint,
    pub observed: Vec<u32>,
    /// Source point and multiplicity; `None` if the point is unexplained.
    pub source: Option<(CharPoint, u32)>,
    pub quotients: Option<Vec<u32>>,
    pub x_exponents: Vec<u32>,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexRecord {
    pub side: Side,
    pub x_indices: Vec<usize>,
    pub y_indices: Vec<usize>,
    pub holds: bool,
}

/// `e_i(Q) = monic(Phi(e_i(P))) * monic(d)^(l_i)` with `l_i` the exponent of
/// the `i`-th invariant polynomial of the reversal of `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantRecord {
    pub index: usize,
    pub predicted: Poly,
    pub observed: Poly,
    pub holds: bool,
}

/// Powers `k_i = t - deg(delta_i)` of `d` in `Phi_t(delta_i)`, where `t` is
/// the largest degree among the invariant polynomials `delta_i`; they are
/// nonincreasing, and the Smith form of `Phi_g(diag(delta_i))` pairs them
/// with the images in reverse order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InternalExponents {
    pub k: Vec<usize>,
    pub nonincreasing: bool,
    pub reordered_smith_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremReport {
    pub grade: usize,
    pub big_g: usize,
    pub q: PolyMatrix,
    pub p_structure: CompleteEigenstructure,
    pub q_structure: CompleteEigenstructure,
    pub forward: Vec<DivisorRecord>,
    pub converse: Vec<ConverseRecord>,
    pub invariants: Vec<InvariantRecord>,
    pub indices: Vec<IndexRecord>,
    pub internal: InternalExponents,
    pub verdict: bool,
}

struct Atom {
    base: Poly,
    source: Option<(CharPoint, u32)>,
    observed: Option<Vec<u32>>,
}

/// Computes both eigenstructures from scratch and compares them point by
/// point, in both directions.
pub fn verify_theorem(p: &PolyMatrix, map: &RationalMap) -> Result<TheoremReport> {
    let q = map.phi_matrix(p)?;
    let ep = complete_eigenstructure(p)?;
    let eq = complete_eigenstructure(&q)?;
    let big_g = map.big_g();
    let f = p.field();
    let p_chain = ep.nonzero_invariants().to_vec();
    let q_chain = eq.nonzero_invariants().to_vec();

    // images of the x-side bases, as squarefree parts with one multiplicity
    let mut sources: Vec<(CharPoint, Vec<(Poly, u32)>)> = Vec::new();
    for (point, _) in &ep.finite.entries {
        let base = point.base().expect("finite point");
        sources.push((point.clone(), squarefree_decompose(&map.phi_natural(base))?.factors));
    }
    if !map.d().is_constant() {
        sources.push((CharPoint::Infinity, squarefree_decompose(map.d())?.factors));
    }

    let mut pieces: Vec<Poly> = q_chain.clone();
    for (_, parts) in &sources {
        pieces.extend(parts.iter().map(|(b, _)| b.clone()));
    }
    let mut atoms = Vec::new();
    for base in coprime_base(&pieces)? {
        let source = sources.iter().find_map(|(x, parts)| {
            parts.iter().find(|(b, _)| base.divides(b)).map(|(_, m)| (x.clone(), *m))
        });
        let observed = local_exponents(&q_chain, &base);
        atoms.push(Atom { base, source, observed });
    }

    let x_exponents = |x: &CharPoint| -> Vec<u32> {
        match x {
            CharPoint::Infinity => ep.infinite.clone(),
            _ => ep.finite.exponents_at(x).map(<[u32]>::to_vec).unwrap_or_default(),
        }
    };

    let mut forward = Vec::new();
    let mut converse = Vec::new();
    for atom in &atoms {
        let points = split_points(&atom.base)?;
        let observed = atom.observed.clone();
        match &atom.source {
            Some((x, m)) => {
                let xs = x_exponents(x);
                let predicted = scaled(&xs, *m);
                if predicted.is_empty() && observed.as_ref().is_some_and(Vec::is_empty) {
                    continue;
                }
                let holds = observed.as_ref() == Some(&predicted);
                for y in &points {
                    forward.push(DivisorRecord {
                        x_point: x.clone(),
                        x_exponents: xs.clone(),
                        y_point: y.clone(),
                        multiplicity: *m,
                        predicted: predicted.clone(),
                        observed: observed.clone(),
                        holds,
                    });
                }
                if let Some(obs) = observed.as_ref().filter(|o| !o.is_empty()) {
                    let divisible = obs.iter().all(|k| k % m == 0);
                    let quotients = divisible.then(|| obs.iter().map(|k| k / m).collect::<Vec<_>>());
                    let holds = quotients.as_ref() == Some(&xs);
                    for y in &points {
                        converse.push(ConverseRecord {
                            y_point: y.clone(),
                            observed: obs.clone(),
                            source: Some((x.clone(), *m)),
                            quotients: quotients.clone(),
                            x_exponents: xs.clone(),
                            holds,
                        });
                    }
                }
            }
            None => {
                if observed.as_ref().is_some_and(Vec::is_empty) {
                    continue;
                }
                for y in &points {
                    converse.push(ConverseRecord {
                        y_point: y.clone(),
                        observed: observed.clone().unwrap_or_default(),
                        source: None,
                        quotients: None,
                        x_exponents: Vec::new(),
                        holds: false,
                    });
                }
            }
        }
    }

    // y = infinity comes from x = xhat with multiplicity G - S
    let (xhat_point, xhat_exps) = match map.xhat() {
        Some(v) => {
            let exps = local_exponents(&p_chain, &Poly::linear_root(&v)).expect("linear base");
            (CharPoint::at(&v), exps)
        }
        None => (CharPoint::Infinity, ep.infinite.clone()),
    };
    let xhat_target = match map.xhat() {
        Some(v) => Target::Finite(v),
        None => Target::Infinity,
    };
    let m_inf = (big_g - map.fiber_poly(&xhat_target).deg0()) as u32;
    let predicted = scaled(&xhat_exps, m_inf);
    if !predicted.is_empty() || !eq.infinite.is_empty() {
        forward.push(DivisorRecord {
            x_point: xhat_point.clone(),
            x_exponents: xhat_exps.clone(),
            y_point: CharPoint::Infinity,
            multiplicity: m_inf,
            predicted: predicted.clone(),
            observed: Some(eq.infinite.clone()),
            holds: predicted == eq.infinite,
        });
    }
    if !eq.infinite.is_empty() {
        let divisible = eq.infinite.iter().all(|k| k % m_inf == 0);
        let quotients = divisible.then(|| eq.infinite.iter().map(|k| k / m_inf).collect::<Vec<_>>());
        converse.push(ConverseRecord {
            y_point: CharPoint::Infinity,
            observed: eq.infinite.clone(),
            source: Some((xhat_point, m_inf)),
            holds: quotients.as_ref() == Some(&xhat_exps),
            quotients,
            x_exponents: xhat_exps,
        });
    }

    // index-wise identity on invariant polynomials
    let d_monic = map.d().monic();
    let mut invariants = Vec::new();
    for i in 0..ep.rank.max(eq.rank) {
        let predicted = match (p_chain.get(i), ep.infinite_by_index.get(i)) {
            (Some(e), Some(&l)) => &map.phi_natural(e).monic() * &d_monic.pow(l),
            _ => Poly::zero(f),
        };
        let observed = q_chain.get(i).cloned().unwrap_or_else(|| Poly::zero(f));
        invariants.push(InvariantRecord { index: i + 1, holds: predicted == observed, predicted, observed });
    }

    let indices = vec![
        IndexRecord {
            side: Side::Right,
            holds: eq.right_indices == ep.right_indices.iter().map(|b| big_g * b).collect::<Vec<_>>(),
            x_indices: ep.right_indices.clone(),
            y_indices: eq.right_indices.clone(),
        },
        IndexRecord {
            side: Side::Left,
            holds: eq.left_indices == ep.left_indices.iter().map(|b| big_g * b).collect::<Vec<_>>(),
            x_indices: ep.left_indices.clone(),
            y_indices: eq.left_indices.clone(),
        },
    ];

    let internal = internal_exponents(&p_chain, map)?;

    let verdict = forward.iter().all(|r| r.holds)
        && converse.iter().all(|r| r.holds)
        && invariants.iter().all(|r| r.holds)
        && indices.iter().all(|r| r.holds)
        && internal.nonincreasing
        && internal.reordered_smith_holds
        && ep.rank == eq.rank;

    Ok(TheoremReport {
        grade: p.grade(),
        big_g,
        q,
        p_structure: ep,
        q_structure: eq,
        forward,
        converse,
        invariants,
        indices,
        internal,
        verdict,
    })
}

fn internal_exponents(chain: &[Poly], map: &RationalMap) -> Result<InternalExponents> {
    let f = map.field();
    let g = chain.iter().map(Poly::deg0).max().unwrap_or(0);
    let k: Vec<usize> = chain.iter().map(|d| g - d.deg0()).collect();
    let nonincreasing = k.windows(2).all(|w| w[0] >= w[1]);
    let r = chain.len();
    let mut diag = PolyMatrix::zeros(f, r, r, 0).to_rows();
    for (i, d) in chain.iter().enumerate() {
        diag[i][i] = d.clone();
    }
    let reordered_smith_holds = if r == 0 {
        true
    } else {
        let t = PolyMatrix::from_rows(f, diag, Some(g))?;
        let smith = invariant_polynomials(&map.phi_matrix(&t)?);
        let d = map.d();
        let predicted: Vec<Poly> = (0..r)
            .map(|i| (&d.pow(k[r - 1 - i] as u32) * &map.phi_natural(&chain[i])).monic())
            .collect();
        smith == predicted
    };
    Ok(InternalExponents { k, nonincreasing, reordered_smith_holds })
}

/// Outcome of applying a Moebius map and its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusReport {
    /// Multisets of (point degree, exponent list) agree for `P` and `Q`.
    pub exponents_preserved: bool,
    pub indices_preserved: bool,
    /// The inverse map sends `Q` to `(b*c - a*e)^g * P`.
    pub inverse_recovers_matrix: bool,
    /// The eigenstructure of the round trip equals that of `P`.
    pub roundtrip_structure_equal: bool,
    pub verdict: bool,
}

fn exponent_multiset(e: &CompleteEigenstructure) -> Vec<(usize, Vec<u32>)> {
    let mut out: Vec<(usize, Vec<u32>)> = e
        .finite
        .entries
        .iter()
        .map(|(c, ex)| (c.base().map_or(1, Poly::deg0), ex.clone()))
        .collect();
    if !e.infinite.is_empty() {
        out.push((1, e.infinite.clone()));
    }
    out.sort();
    out
}

pub fn verify_mobius_roundtrip(p: &PolyMatrix, map: &RationalMap) -> Result<MobiusReport> {
    let inv = map.mobius_inverse()?;
    let q = map.phi_matrix(p)?;
    let ep = complete_eigenstructure(p)?;
    let eq = complete_eigenstructure(&q)?;
    let exponents_preserved = exponent_multiset(&ep) == exponent_multiset(&eq);
    let indices_preserved = ep.right_indices == eq.right_indices && ep.left_indices == eq.left_indices;
    let back = inv.phi_matrix(&q)?;
    let c = (-&map.mobius_determinant()?).pow(p.grade() as u64);
    let expected = p.map_entries(p.grade(), |e| e.scale(&c))?;
    let inverse_recovers_matrix = back.entries() == expected.entries();
    let eb = complete_eigenstructure(&back)?;
    let roundtrip_structure_equal = eb == ep;
    Ok(MobiusReport {
        exponents_preserved,
        indices_preserved,
        inverse_recovers_matrix,
        roundtrip_structure_equal,
        verdict: exponents_preserved && indices_preserved && inverse_recovers_matrix && roundtrip_structure_equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{dickson_map, intro_map, intro_matrix, kernel_matrix};
    use proptest::prelude::*;

    const Q: Field = Field::Rationals;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64s(Q, c)
    }

    fn ratio(a: i64, b: i64) -> Scalar {
        Q.from_ratio(&a.into(), &b.into()).unwrap()
    }

    #[test]
    fn intro_structure() {
        let e = complete_eigenstructure(&intro_matrix()).unwrap();
        assert_eq!(
            e.finite.entries,
            vec![(CharPoint::Finite(p(&[-20, 1])), vec![1, 1]), (CharPoint::Finite(p(&[0, 1])), vec![1, 2])]
        );
        assert!(e.infinite.is_empty());
        assert!(e.right_indices.is_empty());
        assert_eq!(e.left_indices, vec![0, 1]);
        assert_eq!(e.rank, 3);
        let q = intro_map().phi_matrix(&intro_matrix()).unwrap();
        let e = complete_eigenstructure(&q).unwrap();
        assert_eq!(e.finite.entries.len(), 3);
        assert_eq!(e.finite.exponents_at(&CharPoint::at(&ratio(5, 2))), Some(&[2, 2][..]));
        assert_eq!(e.left_indices, vec![0, 2]);
        assert!(e.right_indices.is_empty());
        let z = complete_eigenstructure(&PolyMatrix::zeros(Q, 2, 2, 1)).unwrap();
        assert!(z.finite.is_empty() && z.infinite.is_empty());
        assert_eq!((z.right_indices, z.left_indices, z.rank), (vec![0, 0], vec![0, 0], 0));
    }

    #[test]
    fn kernel_at_point() {
        let k = ker_at_point(&kernel_matrix(Q), &Q.zero()).unwrap();
        assert_eq!(k, vec![vec![Q.one(), Q.zero(), Q.zero(), Q.zero()]]);
        assert!(ker_at_point(&intro_matrix(), &Q.from_i64(7)).unwrap().is_empty());
        assert_eq!(ker_at_point(&PolyMatrix::zeros(Q, 2, 3, 0), &Q.one()).unwrap().len(), 3);
    }

    #[test]
    fn root_polynomials() {
        let m = kernel_matrix(Q);
        let rps = maximal_root_polynomials(&m, &Q.zero()).unwrap();
        assert_eq!(rps.iter().map(|r| r.order).collect::<Vec<_>>(), vec![1]);
        let e4 = vec![p(&[]), p(&[]), p(&[]), p(&[1])];
        assert_eq!(root_polynomial_order(&m, &e4, &Q.zero()).unwrap(), Some(1));
        let e1 = vec![p(&[1]), p(&[]), p(&[]), p(&[])];
        assert_eq!(root_polynomial_order(&m, &e1, &Q.zero()).unwrap(), None);

        let intro = intro_matrix();
        let at20: Vec<u32> = maximal_root_polynomials(&intro, &Q.from_i64(20)).unwrap().iter().map(|r| r.order).collect();
        assert_eq!(at20, vec![1, 1]);
        let at0: Vec<u32> = maximal_root_polynomials(&intro, &Q.zero()).unwrap().iter().map(|r| r.order).collect();
        assert_eq!(at0, vec![1, 2]);
        assert_eq!(maximal_root_polynomials(&intro, &Q.one()), Err(Error::NotCharacteristicValue));
    }

    #[test]
    fn transported_root_polynomials() {
        let intro = intro_matrix();
        let map = intro_map();
        for rp in maximal_root_polynomials(&intro, &Q.from_i64(20)).unwrap() {
            let t = transform_root_polynomial(&intro, &rp, &map, &ratio(5, 2)).unwrap();
            assert_eq!((t.multiplicity, t.measured), (2, 2));
            assert!(t.matches_prediction && t.outside_kernel);
        }
        let f5 = Field::Prime(5);
        let m = kernel_matrix(f5);
        let rp = maximal_root_polynomials(&m, &f5.zero()).unwrap().remove(0);
        let t = transform_root_polynomial(&m, &rp, &dickson_map(f5), &f5.from_i64(2)).unwrap();
        assert_eq!((t.multiplicity, t.measured), (1, 1));
        assert!(t.matches_prediction);
        assert!(transform_root_polynomial(&m, &rp, &dickson_map(f5), &f5.from_i64(1)).is_err());
    }

    #[test]
    fn intro_theorem() {
        let r = verify_theorem(&intro_matrix(), &intro_map()).unwrap();
        assert!(r.verdict, "{r:#?}");
        assert_eq!(r.q_structure.left_indices, vec![0, 2]);
        assert_eq!(r.internal.k, vec![3, 1, 0]);
    }

    #[test]
    fn square_map_example() {
        let m = PolyMatrix::from_i64(Q, &[&[&[-1, 0, 1]]], None).with_grade(1);
        assert!(m.is_err());
        let m = PolyMatrix::from_i64(Q, &[&[&[-1, 0, 1]]], None);
        let sq = RationalMap::new(p(&[0, 0, 1]), p(&[1])).unwrap();
        let r = verify_theorem(&m, &sq).unwrap();
        assert!(r.verdict);
        // x - 1 -> (y - 1)(y + 1), x + 1 -> y^2 + 1
        let ys: Vec<(CharPoint, Vec<u32>)> =
            r.forward.iter().filter(|f| !f.y_point.is_infinite()).map(|f| (f.y_point.clone(), f.predicted.clone())).collect();
        assert!(ys.contains(&(CharPoint::Finite(p(&[1, 0, 1])), vec![1])));
        assert!(ys.contains(&(CharPoint::Finite(p(&[-1, 1])), vec![1])));
    }

    #[test]
    fn identity_map_is_trivial() {
        let m = kernel_matrix(Q);
        let r = verify_theorem(&m, &RationalMap::identity(Q)).unwrap();
        assert!(r.verdict);
        assert_eq!(r.p_structure, r.q_structure);
    }

    #[test]
    fn mobius_examples() {
        let shift = RationalMap::new(p(&[1, 1]), p(&[1])).unwrap();
        let r = verify_mobius_roundtrip(&intro_matrix(), &shift).unwrap();
        assert!(r.verdict);
        let q = shift.phi_matrix(&intro_matrix()).unwrap();
        let e = complete_eigenstructure(&q).unwrap();
        assert_eq!(e.finite.exponents_at(&CharPoint::at(&Q.from_i64(19))), Some(&[1, 1][..]));
        assert_eq!(e.finite.exponents_at(&CharPoint::at(&Q.from_i64(-1))), Some(&[1, 2][..]));

        let recip = RationalMap::new(p(&[1]), p(&[0, 1])).unwrap();
        let x = PolyMatrix::from_i64(Q, &[&[&[0, 1]]], Some(1));
        let q = recip.phi_matrix(&x).unwrap();
        assert_eq!(q.get(0, 0), &p(&[1]));
        let e = complete_eigenstructure(&q).unwrap();
        assert!(e.finite.is_empty());
        assert_eq!(e.infinite, vec![1]);
        assert!(verify_mobius_roundtrip(&x, &recip).unwrap().verdict);
        assert!(verify_mobius_roundtrip(&x, &RationalMap::identity(Q)).unwrap().verdict);
    }

    #[test]
    fn infinite_divisors_on_both_sides() {
        // P = [1] of grade 1 has an infinite divisor; y^2 sends it to y = inf
        let one = PolyMatrix::from_i64(Q, &[&[&[1]]], Some(1));
        let sq = RationalMap::new(p(&[0, 0, 1]), p(&[1])).unwrap();
        let r = verify_theorem(&one, &sq).unwrap();
        assert!(r.verdict);
        assert_eq!(r.q_structure.infinite, vec![2]);
        // y/(y^2 + 1): x = 0 has y = inf in its fiber
        let x = PolyMatrix::from_i64(Q, &[&[&[0, 1]]], Some(1));
        let m = RationalMap::new(p(&[0, 1]), p(&[1, 0, 1])).unwrap();
        let r = verify_theorem(&x, &m).unwrap();
        assert!(r.verdict);
        assert_eq!(r.q_structure.infinite, vec![1]);
        // infinite divisor of P mapped to the roots of d
        let r = verify_theorem(&one, &m).unwrap();
        assert!(r.verdict);
        assert_eq!(r.q_structure.finite.entries, vec![(CharPoint::Finite(p(&[1, 0, 1])), vec![1])]);
    }

    fn small_instance(field: Field) -> impl Strategy<Value = PolyMatrix> {
        (1usize..=3, 1usize..=3, 0usize..=2).prop_flat_map(move |(m, n, extra)| {
            prop::collection::vec(prop::collection::vec(-2i64..=2, 0..=2), m * n).prop_map(move |cs| {
                let entries = cs.iter().map(|c| Poly::from_i64s(field, c)).collect();
                PolyMatrix::new(field, m, n, entries, 1 + extra).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn theorem_holds_on_random_instances(m in small_instance(Q), map in crate::ratmap::tests::small_map(Q)) {
            prop_assume!(map.big_g() <= 3);
            let r = verify_theorem(&m, &map).unwrap();
            prop_assert!(r.verdict, "{:#?}", r);
        }

        #[test]
        fn theorem_holds_over_f7(m in small_instance(Field::Prime(7)), map in crate::ratmap::tests::small_map(Field::Prime(7))) {
            prop_assume!(map.big_g() <= 3);
            let r = verify_theorem(&m, &map).unwrap();
            prop_assert!(r.verdict, "{:#?}", r);
        }

        #[test]
        fn index_sum_holds(m in small_instance(Field::Prime(5))) {
            let e = complete_eigenstructure(&m).unwrap();
            prop_assert_eq!(e.index_sum(), e.grade * e.rank);
        }
    }
}

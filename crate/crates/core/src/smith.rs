//! Smith normal form over `F[x]` with unimodular transformers, and the finite
//! and infinite elementary divisors read off from it.

use crate::error::Result;
use crate::factor::coprime_base;
use crate::field::Field;
use crate::point::{split_points, CharPoint};
use crate::poly::Poly;
use crate::polymat::PolyMatrix;

/// `A * P * B = S` with `A`, `B` unimodular and `S` diagonal with monic
/// invariant polynomials in a divisibility chain, zeros last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub a: PolyMatrix,
    pub s: PolyMatrix,
    pub b: PolyMatrix,
    /// `d_1, ..., d_nu` with `nu = min(m, p)`.
    pub invariant_polys: Vec<Poly>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.invariant_polys.iter().filter(|d| !d.is_zero()).count()
    }
}

/// Elementary divisors grouped by base; each exponent list is
/// nondecreasing along the invariant-polynomial chain.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ElementaryDivisors {
    pub entries: Vec<(CharPoint, Vec<u32>)>,
}

impl ElementaryDivisors {
    pub fn exponents_at(&self, point: &CharPoint) -> Option<&[u32]> {
        self.entries.iter().find(|(c, _)| c == point).map(|(_, e)| e.as_slice())
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total degree `sum(deg(base) * exponent)`.
    pub fn degree(&self) -> usize {
        self.entries
            .iter()
            .map(|(c, es)| c.base().map_or(1, Poly::deg0) * es.iter().map(|&e| e as usize).sum::<usize>())
            .sum()
    }
}

struct Work {
    field: Field,
    w: Vec<Vec<Poly>>,
    a: Option<Vec<Vec<Poly>>>,
    b: Option<Vec<Vec<Poly>>>,
}

fn identity_rows(field: Field, n: usize) -> Vec<Vec<Poly>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Poly::one(field) } else { Poly::zero(field) }).collect())
        .collect()
}

/// `row_i = c_ii * row_i + c_ij * row_j`, `row_j = c_ji * row_i + c_jj * row_j`.
fn combine_rows(m: &mut [Vec<Poly>], i: usize, j: usize, c: [&Poly; 4]) {
    for k in 0..m[i].len() {
        let (x, y) = (&m[i][k], &m[j][k]);
        if x.is_zero() && y.is_zero() {
            continue;
        }
        let ni = &(c[0] * x) + &(c[1] * y);
        let nj = &(c[2] * x) + &(c[3] * y);
        m[i][k] = ni;
        m[j][k] = nj;
    }
}

/// Column analogue: `col_i = col_i * c_ii + col_j * c_ji`,
/// `col_j = col_i * c_ij + col_j * c_jj`, i.e. right multiplication by
/// `[[c_ii, c_ij], [c_ji, c_jj]]`.
fn combine_cols(m: &mut [Vec<Poly>], i: usize, j: usize, c: [&Poly; 4]) {
    for row in m.iter_mut() {
        let (x, y) = (&row[i], &row[j]);
        if x.is_zero() && y.is_zero() {
            continue;
        }
        let ni = &(x * c[0]) + &(y * c[2]);
        let nj = &(x * c[1]) + &(y * c[3]);
        row[i] = ni;
        row[j] = nj;
    }
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.w.swap(i, j);
        if let Some(a) = &mut self.a {
            a.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in &mut self.w {
            r.swap(i, j);
        }
        if let Some(b) = &mut self.b {
            for r in b.iter_mut() {
                r.swap(i, j);
            }
        }
    }

    /// `row_i -= q * row_t`.
    fn sub_row(&mut self, i: usize, t: usize, q: &Poly) {
        let f = |m: &mut Vec<Vec<Poly>>| {
            for k in 0..m[i].len() {
                if !m[t][k].is_zero() {
                    let v = &m[i][k] - &(q * &m[t][k]);
                    m[i][k] = v;
                }
            }
        };
        f(&mut self.w);
        if let Some(a) = &mut self.a {
            f(a);
        }
    }

    /// `col_j -= q * col_t`.
    fn sub_col(&mut self, j: usize, t: usize, q: &Poly) {
        let f = |m: &mut Vec<Vec<Poly>>| {
            for row in m.iter_mut() {
                if !row[t].is_zero() {
                    let v = &row[j] - &(&row[t] * q);
                    row[j] = v;
                }
            }
        };
        f(&mut self.w);
        if let Some(b) = &mut self.b {
            f(b);
        }
    }

    fn rows_2x2(&mut self, i: usize, j: usize, c: [&Poly; 4]) {
        combine_rows(&mut self.w, i, j, c);
        if let Some(a) = &mut self.a {
            combine_rows(a, i, j, c);
        }
    }

    fn cols_2x2(&mut self, i: usize, j: usize, c: [&Poly; 4]) {
        combine_cols(&mut self.w, i, j, c);
        if let Some(b) = &mut self.b {
            combine_cols(b, i, j, c);
        }
    }

    fn scale_row(&mut self, i: usize, c: &Poly) {
        for e in self.w[i].iter_mut() {
            *e = &*e * c;
        }
        if let Some(a) = &mut self.a {
            for e in a[i].iter_mut() {
                *e = &*e * c;
            }
        }
    }

    /// Lowest-degree nonzero entry of the trailing block, ties to the
    /// smallest `(row, col)`.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in self.w.iter().enumerate().skip(t) {
            for (j, e) in row.iter().enumerate().skip(t) {
                if let Some(d) = e.degree() {
                    if best.is_none_or(|(bd, _, _)| d < bd) {
                        best = Some((d, i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn diagonalize(&mut self) -> usize {
        let m = self.w.len();
        let p = self.w.first().map_or(0, Vec::len);
        let nu = m.min(p);
        for t in 0..nu {
            loop {
                let Some((pi, pj)) = self.pivot(t) else {
                    return t;
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let piv = self.w[t][t].clone();
                for i in t + 1..m {
                    if !self.w[i][t].is_zero() {
                        let (q, _) = self.w[i][t].divmod(&piv).expect("pivot is nonzero");
                        self.sub_row(i, t, &q);
                    }
                }
                for j in t + 1..p {
                    if !self.w[t][j].is_zero() {
                        let (q, _) = self.w[t][j].divmod(&piv).expect("pivot is nonzero");
                        self.sub_col(j, t, &q);
                    }
                }
                let clear = (t + 1..m).all(|i| self.w[i][t].is_zero())
                    && (t + 1..p).all(|j| self.w[t][j].is_zero());
                if clear {
                    break;
                }
            }
        }
        nu
    }

    /// Makes the nonzero diagonal a divisibility chain using the 2x2 Bezout
    /// exchange `diag(u, v) -> diag(gcd, u*v/gcd)`.
    fn repair_chain(&mut self, r: usize) {
        let f = self.field;
        for i in 0..r {
            for j in i + 1..r {
                let (alpha, beta) = (self.w[i][i].clone(), self.w[j][j].clone());
                if alpha.divides(&beta) {
                    continue;
                }
                let (g, a, b) = alpha.gcd_extended(&beta).expect("nonzero diagonal");
                let q = beta.exact_div(&g).expect("gcd divides");
                let rr = alpha.exact_div(&g).expect("gcd divides");
                let bq = &b * &q;
                let one = Poly::one(f);
                let neg_bq = -&bq;
                let one_minus = &one - &bq;
                self.rows_2x2(i, j, [&one, &one, &neg_bq, &one_minus]);
                let neg_q = -&q;
                self.cols_2x2(i, j, [&a, &neg_q, &b, &rr]);
            }
        }
    }

    fn normalize(&mut self, r: usize) {
        for i in 0..r {
            let (lc, _) = self.w[i][i].monic_parts();
            if !lc.is_one() {
                let inv = Poly::constant(lc.inv().expect("nonzero diagonal"));
                self.scale_row(i, &inv);
            }
        }
    }
}

fn run(p: &PolyMatrix, transformers: bool) -> Work {
    let f = p.field();
    let mut work = Work {
        field: f,
        w: p.to_rows(),
        a: transformers.then(|| identity_rows(f, p.rows())),
        b: transformers.then(|| identity_rows(f, p.cols())),
    };
    let r = work.diagonalize();
    work.repair_chain(r);
    work.normalize(r);
    work
}

fn diagonal(work: &Work, nu: usize) -> Vec<Poly> {
    (0..nu).map(|i| work.w[i][i].clone()).collect()
}

fn to_matrix(field: Field, rows: Vec<Vec<Poly>>, cols: usize) -> PolyMatrix {
    let n = rows.len();
    if n == 0 || cols == 0 {
        return PolyMatrix::zeros(field, n, cols, 0);
    }
    PolyMatrix::from_rows(field, rows, None).expect("rectangular")
}

/// Smith form with transformers; `A * P * B = S` is checked exactly.
pub fn smith_form(p: &PolyMatrix) -> SmithDecomposition {
    let f = p.field();
    let nu = p.rows().min(p.cols());
    let work = run(p, true);
    let invariant_polys = diagonal(&work, nu);
    let a = to_matrix(f, work.a.unwrap(), p.rows());
    let b = to_matrix(f, work.b.unwrap(), p.cols());
    let s = to_matrix(f, work.w, p.cols());
    let check = a.mul(p).and_then(|ap| ap.mul(&b)).expect("conformable");
    assert!(
        check.entries().iter().zip(s.entries()).all(|(x, y)| x == y),
        "Smith transformers do not reproduce the diagonal form"
    );
    SmithDecomposition { a, s, b, invariant_polys }
}

/// Invariant polynomials only, skipping the transformer bookkeeping.
pub fn invariant_polynomials(p: &PolyMatrix) -> Vec<Poly> {
    let nu = p.rows().min(p.cols());
    diagonal(&run(p, false), nu)
}

/// Groups the finite elementary divisors of a chain of invariant
/// polynomials by base. Bases come from a coprime refinement of the chain,
/// split into irreducibles where factorization succeeds.
pub fn finite_divisors_of(invariants: &[Poly]) -> Result<ElementaryDivisors> {
    let nonzero: Vec<Poly> = invariants.iter().filter(|d| !d.is_zero()).cloned().collect();
    let mut entries = Vec::new();
    for base in coprime_base(&nonzero)? {
        for point in split_points(&base)? {
            let b = point.base().expect("finite point").clone();
            let exps: Vec<u32> = nonzero.iter().map(|d| d.valuation(&b).0).filter(|&e| e > 0).collect();
            entries.push((point, exps));
        }
    }
    entries.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(ElementaryDivisors { entries })
}

pub fn elementary_divisors_finite(p: &PolyMatrix) -> Result<ElementaryDivisors> {
    finite_divisors_of(&invariant_polynomials(p))
}

/// Exponent of `x` in each nonzero invariant polynomial, zeros included.
pub fn x_valuations(invariants: &[Poly]) -> Vec<u32> {
    invariants
        .iter()
        .filter(|d| !d.is_zero())
        .map(|d| d.valuation(&Poly::x(d.field())).0)
        .collect()
}

/// Infinite elementary divisors with respect to the matrix grade: the
/// positive exponents of `x` in the invariant polynomials of the reversal.
pub fn elementary_divisors_infinite(p: &PolyMatrix) -> Vec<u32> {
    x_valuations(&invariant_polynomials(&p.reversal()))
        .into_iter()
        .filter(|&e| e > 0)
        .collect()
}

/// Infinite elementary divisors when `P` is given grade `g`.
pub fn infinite_structure_at_grade(p: &PolyMatrix, g: usize) -> Result<Vec<u32>> {
    Ok(elementary_divisors_infinite(&p.with_grade(g)?))
}

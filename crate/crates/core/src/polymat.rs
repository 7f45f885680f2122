//! Polynomial matrices with an explicit grade.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::Mat;
use crate::poly::Poly;

/// An `m x p` matrix of polynomials together with a grade `g`, which must be
/// at least the largest entry degree. The grade only matters for reversal and
/// hence for the structure at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
    grade: usize,
}

impl PolyMatrix {
    pub fn new(field: Field, rows: usize, cols: usize, entries: Vec<Poly>, grade: usize) -> Result<PolyMatrix> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(e) = entries.iter().find(|e| e.field() != field) {
            return Err(Error::FieldMismatch(field.to_string(), e.field().to_string()));
        }
        let m = PolyMatrix { field, rows, cols, entries, grade };
        let degree = m.degree();
        if degree > grade {
            return Err(Error::GradeTooSmall { grade, degree });
        }
        Ok(m)
    }

    /// Builds a matrix from rows; a `None` grade means "grade = degree".
    pub fn from_rows(field: Field, rows: Vec<Vec<Poly>>, grade: Option<usize>) -> Result<PolyMatrix> {
        let m = rows.len();
        let p = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != p) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let entries: Vec<Poly> = rows.into_iter().flatten().collect();
        let degree = entries.iter().map(Poly::deg0).max().unwrap_or(0);
        PolyMatrix::new(field, m, p, entries, grade.unwrap_or(degree))
    }

    /// Integer coefficient rows, ascending powers per entry; handy in tests.
    pub fn from_i64(field: Field, rows: &[&[&[i64]]], grade: Option<usize>) -> PolyMatrix {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|c| Poly::from_i64s(field, c)).collect())
            .collect();
        PolyMatrix::from_rows(field, rows, grade).expect("well-formed literal")
    }

    pub fn zeros(field: Field, rows: usize, cols: usize, grade: usize) -> PolyMatrix {
        PolyMatrix { field, rows, cols, entries: vec![Poly::zero(field); rows * cols], grade }
    }

    pub fn identity(field: Field, n: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(field, n, n, 0);
        for i in 0..n {
            m.entries[i * n + i] = Poly::one(field);
        }
        m
    }

    /// Constant matrix as a polynomial matrix of grade 0.
    pub fn from_constant(c: &Mat) -> PolyMatrix {
        let entries = (0..c.rows())
            .flat_map(|i| (0..c.cols()).map(move |j| Poly::constant(c.get(i, j).clone())))
            .collect();
        PolyMatrix { field: c.field(), rows: c.rows(), cols: c.cols(), entries, grade: 0 }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Poly>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Largest entry degree; 0 for the zero matrix.
    pub fn degree(&self) -> usize {
        self.entries.iter().map(Poly::deg0).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn with_grade(&self, grade: usize) -> Result<PolyMatrix> {
        let degree = self.degree();
        if degree > grade {
            return Err(Error::GradeTooSmall { grade, degree });
        }
        Ok(PolyMatrix { grade, ..self.clone() })
    }

    pub fn transpose(&self) -> PolyMatrix {
        let entries = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        PolyMatrix { field: self.field, rows: self.cols, cols: self.rows, entries, grade: self.grade }
    }

    /// Entrywise reversal with respect to the matrix grade.
    pub fn reversal(&self) -> PolyMatrix {
        let entries = self
            .entries
            .iter()
            .map(|e| e.reversal(self.grade).expect("grade bounds every entry"))
            .collect();
        PolyMatrix { entries, ..self.clone() }
    }

    /// Coefficient matrix of `x^i`.
    pub fn coefficient(&self, i: usize) -> Mat {
        let mut c = Mat::zeros(self.field, self.rows, self.cols);
        for r in 0..self.rows {
            for s in 0..self.cols {
                c.set(r, s, self.get(r, s).coeff(i));
            }
        }
        c
    }

    pub fn evaluate(&self, c: &Scalar) -> Result<Mat> {
        if c.field() != self.field {
            return Err(Error::FieldMismatch(self.field.to_string(), c.field().to_string()));
        }
        let mut out = Mat::zeros(self.field, self.rows, self.cols);
        for r in 0..self.rows {
            for s in 0..self.cols {
                out.set(r, s, self.get(r, s).eval(c));
            }
        }
        Ok(out)
    }

    /// Matrix product; the grade of the result is the sum of the grades.
    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero(self.field);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        Ok(PolyMatrix {
            field: self.field,
            rows: self.rows,
            cols: other.cols,
            entries,
            grade: self.grade + other.grade,
        })
    }

    /// `self * v` for a polynomial column vector.
    pub fn mul_vec(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Poly::zero(self.field), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    /// Rank over the field of rational functions.
    ///
    /// A nonzero `r x r` minor has degree at most `degree * r`, so it cannot
    /// vanish at `degree * min(m, p) + 1` distinct points. Prime fields that
    /// are too small for that fall back to fraction-free elimination.
    pub fn rank(&self) -> usize {
        let nu = self.rows.min(self.cols);
        if nu == 0 || self.is_zero() {
            return 0;
        }
        let needed = (self.degree() * nu + 1) as u64;
        let enough = match self.field {
            Field::Rationals => true,
            Field::Prime(p) => p >= needed,
        };
        if !enough {
            return fraction_free_rank(self.to_rows());
        }
        let mut best = 0;
        for t in 0..needed as i64 {
            let r = self.evaluate(&self.field.from_i64(t)).expect("same field").rank();
            best = best.max(r);
            if best == nu {
                break;
            }
        }
        best
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Poly> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(bareiss_det(self.to_rows(), self.field))
    }

    pub fn is_unimodular(&self) -> Result<bool> {
        let det = self.det()?;
        Ok(!det.is_zero() && det.is_constant())
    }

    /// All `k x k` minors, rows and columns in lexicographic order.
    pub fn minors(&self, k: usize) -> Vec<Poly> {
        let mut out = Vec::new();
        for rs in (0..self.rows).combinations(k) {
            for cs in (0..self.cols).combinations(k) {
                let sub = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| self.get(i, j).clone()).collect())
                    .collect();
                out.push(bareiss_det(sub, self.field));
            }
        }
        out
    }

    /// `D_1, ..., D_nu`: monic gcd of all `i x i` minors, zero when they all
    /// vanish.
    pub fn determinantal_divisors(&self) -> Vec<Poly> {
        let nu = self.rows.min(self.cols);
        let mut out = Vec::with_capacity(nu);
        for k in 1..=nu {
            if out.last().is_some_and(Poly::is_zero) {
                out.push(Poly::zero(self.field));
                continue;
            }
            let g = self
                .minors(k)
                .iter()
                .fold(Poly::zero(self.field), |acc, m| acc.gcd(m));
            out.push(g);
        }
        out
    }

    /// Invariant polynomials from the determinantal divisors,
    /// `d_i = D_i / D_{i-1}`, zero where `D_i` vanishes.
    pub fn invariant_polys_from_minors(&self) -> Vec<Poly> {
        let ds = self.determinantal_divisors();
        let mut prev = Poly::one(self.field);
        ds.into_iter()
            .map(|d| {
                if d.is_zero() {
                    return d;
                }
                let q = d.exact_div(&prev).expect("determinantal divisors form a chain");
                prev = d;
                q
            })
            .collect()
    }

    /// Applies `f` to every entry, keeping the shape; the grade is supplied.
    pub fn map_entries(&self, grade: usize, f: impl Fn(&Poly) -> Poly) -> Result<PolyMatrix> {
        let entries = self.entries.iter().map(f).collect();
        PolyMatrix::new(self.field, self.rows, self.cols, entries, grade)
    }

    pub fn display<'a>(&'a self, var: &'a str) -> MatrixDisplay<'a> {
        MatrixDisplay { m: self, var }
    }
}

pub struct MatrixDisplay<'a> {
    m: &'a PolyMatrix,
    var: &'a str,
}

impl fmt::Display for MatrixDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.m.rows {
            let cells: Vec<String> = self.m.row(i).iter().map(|e| e.display(self.var).to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub(crate) fn bareiss_det(mut a: Vec<Vec<Poly>>, field: Field) -> Poly {
    let n = a.len();
    if n == 0 {
        return Poly::one(field);
    }
    let mut sign = false;
    let mut prev = Poly::one(field);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = !sign;
                }
                None => return Poly::zero(field),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -&d
    } else {
        d
    }
}

/// Rank over `F(x)` by fraction-free elimination over `F[x]`.
pub(crate) fn fraction_free_rank(mut a: Vec<Vec<Poly>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(pr, rank);
        for i in rank + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let piv = a[rank][c].clone();
            let f = a[i][c].clone();
            for j in c..cols {
                let v = &(&a[i][j] * &piv) - &(&f * &a[rank][j]);
                a[i][j] = v;
            }
            // keep entries small by removing the row content
            let g = a[i].iter().fold(Poly::zero(f.field()), |acc, e| acc.gcd(e));
            if !g.is_zero() && !g.is_constant() {
                for e in a[i].iter_mut() {
                    *e = e.exact_div(&g).expect("content divides the row");
                }
            }
        }
        rank += 1;
    }
    rank
}

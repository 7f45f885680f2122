//! Minimal polynomial bases of kernels and minimal indices.
//!
//! The main algorithm sweeps the columns `x^j * P[:, c]` of the block
//! Toeplitz convolution matrix in order of increasing shift `j`, then column
//! `c`. The first shift at which a column becomes linearly dependent on the
//! earlier ones yields a kernel vector whose `c`-th component is monic of
//! degree `j`; that column is then retired. The vectors found this way have
//! a full-rank highest-degree coefficient matrix and their degrees are the
//! minimal indices.

use std::collections::HashMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::Mat;
use crate::poly::Poly;
use crate::polymat::PolyMatrix;
use crate::ratmap::RationalMap;

/// Polynomial basis `v_1, ..., v_s` of a kernel, ordered by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalBasis {
    pub field: Field,
    /// Length of each vector.
    pub dim: usize,
    pub vectors: Vec<Vec<Poly>>,
    pub indices: Vec<usize>,
}

impl MinimalBasis {
    pub fn empty(field: Field, dim: usize) -> MinimalBasis {
        MinimalBasis { field, dim, vectors: Vec::new(), indices: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Sum of the indices.
    pub fn order(&self) -> usize {
        self.indices.iter().sum()
    }

    /// The basis as the columns of a `dim x s` matrix.
    pub fn as_matrix(&self) -> PolyMatrix {
        let rows = (0..self.dim)
            .map(|i| self.vectors.iter().map(|v| v[i].clone()).collect())
            .collect();
        if self.vectors.is_empty() {
            return PolyMatrix::zeros(self.field, self.dim, 0, 0);
        }
        PolyMatrix::from_rows(self.field, rows, None).expect("rectangular")
    }
}

/// Default degree cap `g * min(m, p) + 1`.
pub fn default_cap(p: &PolyMatrix) -> usize {
    p.grade() * p.rows().min(p.cols()) + 1
}

fn vector_degree(v: &[Poly]) -> usize {
    v.iter().map(Poly::deg0).max().unwrap_or(0)
}

pub fn right_kernel_minimal_basis(p: &PolyMatrix) -> Result<MinimalBasis> {
    right_kernel_minimal_basis_with_cap(p, default_cap(p))
}

pub fn left_kernel_minimal_basis(p: &PolyMatrix) -> Result<MinimalBasis> {
    right_kernel_minimal_basis(&p.transpose())
}

pub fn left_kernel_minimal_basis_with_cap(p: &PolyMatrix, cap: usize) -> Result<MinimalBasis> {
    right_kernel_minimal_basis_with_cap(&p.transpose(), cap)
}

/// Coefficient vector of `x^j * P[:, c]` in the convolution layout: entry
/// `t * m + i` holds the coefficient of `x^t` in row `i`.
fn shifted_column(p: &PolyMatrix, j: usize, c: usize, len: usize) -> Vec<Scalar> {
    let f = p.field();
    let m = p.rows();
    let mut v = vec![f.zero(); len];
    for i in 0..m {
        for (t, a) in p.get(i, c).coeffs().iter().enumerate() {
            v[(t + j) * m + i] = a.clone();
        }
    }
    v
}

struct Reduced {
    vec: Vec<Scalar>,
    combo: Vec<Scalar>,
}

pub fn right_kernel_minimal_basis_with_cap(p: &PolyMatrix, cap: usize) -> Result<MinimalBasis> {
    let f = p.field();
    let (m, n) = (p.rows(), p.cols());
    let s = n - p.rank();
    if s == 0 {
        return Ok(MinimalBasis::empty(f, n));
    }
    let k = p.degree();
    let len = m * (k + cap + 1);
    let ncombo = n * (cap + 1);
    let mut stored: Vec<Reduced> = Vec::new();
    let mut by_pivot: HashMap<usize, usize> = HashMap::new();
    let mut retired = vec![false; n];
    let mut found: Vec<(usize, Vec<Poly>)> = Vec::new();

    'sweep: for j in 0..=cap {
        for c in 0..n {
            if retired[c] {
                continue;
            }
            let mut vec = shifted_column(p, j, c, len);
            let mut combo = vec![f.zero(); ncombo];
            combo[j * n + c] = f.one();
            let mut start = 0;
            let pivot = loop {
                let Some(t) = (start..len).find(|&t| !vec[t].is_zero()) else {
                    break None;
                };
                match by_pivot.get(&t) {
                    None => break Some(t),
                    Some(&idx) => {
                        let r = &stored[idx];
                        let factor = vec[t].clone();
                        for u in t..len {
                            if !r.vec[u].is_zero() {
                                vec[u] = &vec[u] - &(&factor * &r.vec[u]);
                            }
                        }
                        for (x, y) in combo.iter_mut().zip(&r.combo) {
                            if !y.is_zero() {
                                *x = &*x - &(&factor * y);
                            }
                        }
                        start = t + 1;
                    }
                }
            };
            match pivot {
                Some(t) => {
                    let inv = vec[t].inv().expect("pivot is nonzero");
                    let vec = vec.iter().map(|a| a * &inv).collect();
                    let combo = combo.iter().map(|a| a * &inv).collect();
                    by_pivot.insert(t, stored.len());
                    stored.push(Reduced { vec, combo });
                }
                None => {
                    let v: Vec<Poly> = (0..n)
                        .map(|cc| {
                            let coeffs = (0..=j).map(|jj| combo[jj * n + cc].clone()).collect();
                            Poly::new(f, coeffs).expect("same field")
                        })
                        .collect();
                    retired[c] = true;
                    found.push((j, v));
                    if found.len() == s {
                        break 'sweep;
                    }
                }
            }
        }
    }
    if found.len() < s {
        return Err(Error::DegreeCapExceeded(cap));
    }
    let basis = MinimalBasis {
        field: f,
        dim: n,
        indices: found.iter().map(|(j, _)| *j).collect(),
        vectors: found.into_iter().map(|(_, v)| v).collect(),
    };
    debug_assert!(basis.vectors.iter().zip(&basis.indices).all(|(v, &j)| vector_degree(v) == j));
    let report = forney_check(p, &basis.vectors)?;
    if !report.holds {
        return Err(Error::Internal(format!(
            "degree sweep produced a non-minimal basis (gcd {}, max minor degree {}, order {})",
            report.gcd, report.max_minor_degree, report.order
        )));
    }
    Ok(basis)
}

/// Outcome of Forney's criterion on a kernel basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForneyReport {
    pub holds: bool,
    /// Monic gcd of the maximal minors; zero when they all vanish.
    pub gcd: Poly,
    pub max_minor_degree: usize,
    /// Sum of the vector degrees.
    pub order: usize,
}

/// Checks that the columns lie in `ker P` and that their maximal minors have
/// gcd 1 and maximal degree equal to the order.
pub fn forney_check(p: &PolyMatrix, vectors: &[Vec<Poly>]) -> Result<ForneyReport> {
    let f = p.field();
    for v in vectors {
        if v.len() != p.cols() {
            return Err(Error::DimensionMismatch(format!("vector of length {} for {} columns", v.len(), p.cols())));
        }
        if p.mul_vec(v).iter().any(|e| !e.is_zero()) {
            return Err(Error::NotInKernel);
        }
    }
    let s = vectors.len();
    let order = vectors.iter().map(|v| vector_degree(v)).sum();
    if s == 0 {
        return Ok(ForneyReport { holds: true, gcd: Poly::one(f), max_minor_degree: 0, order: 0 });
    }
    let mut gcd = Poly::zero(f);
    let mut max_minor_degree = 0;
    let mut any_nonzero = false;
    for rows in (0..p.cols()).combinations(s) {
        let sub: Vec<Vec<Poly>> = rows
            .iter()
            .map(|&i| vectors.iter().map(|v| v[i].clone()).collect())
            .collect();
        let minor = crate::polymat::bareiss_det(sub, f);
        if let Some(d) = minor.degree() {
            any_nonzero = true;
            max_minor_degree = max_minor_degree.max(d);
            gcd = gcd.gcd(&minor);
        }
    }
    let holds = any_nonzero && gcd.is_one() && max_minor_degree == order;
    Ok(ForneyReport { holds, gcd, max_minor_degree, order })
}

/// Minimal indices from the nullities of the full convolution matrices.
///
/// With `n_delta` the dimension of the kernel vectors of degree at most
/// `delta`, `n_delta - n_(delta-1)` counts the indices `<= delta`.
pub fn minimal_indices_oracle(p: &PolyMatrix, cap: usize) -> Result<Vec<usize>> {
    let f = p.field();
    let (m, n) = (p.rows(), p.cols());
    let s = n - p.rank();
    let k = p.degree();
    let mut indices = Vec::new();
    let mut prev_nullity = 0usize;
    let mut prev_count = 0usize;
    for delta in 0..=cap {
        if indices.len() == s {
            break;
        }
        let rows = m * (k + delta + 1);
        let cols = n * (delta + 1);
        let mut c = Mat::zeros(f, rows, cols);
        for j in 0..=delta {
            for col in 0..n {
                for i in 0..m {
                    for (t, a) in p.get(i, col).coeffs().iter().enumerate() {
                        c.set((t + j) * m + i, j * n + col, a.clone());
                    }
                }
            }
        }
        let nullity = cols - c.rank();
        let count = nullity - prev_nullity;
        for _ in prev_count..count {
            indices.push(delta);
        }
        prev_nullity = nullity;
        prev_count = count;
    }
    if indices.len() < s {
        return Err(Error::DegreeCapExceeded(cap));
    }
    Ok(indices)
}

/// Image `w_i = Phi_{beta_i}(v_i)` of a minimal basis of `ker P`, checked to
/// be a minimal basis of `ker Phi(P)` with indices `G * beta_i`.
pub fn transform_minimal_basis(p: &PolyMatrix, basis: &MinimalBasis, map: &RationalMap) -> Result<MinimalBasis> {
    let g = map.big_g();
    let mut vectors = Vec::with_capacity(basis.len());
    for (v, &beta) in basis.vectors.iter().zip(&basis.indices) {
        let w: Vec<Poly> = v.iter().map(|e| map.phi_scalar(e, beta)).collect::<Result<_>>()?;
        if vector_degree(&w) != g * beta {
            return Err(Error::Internal(format!(
                "image of a degree-{beta} basis vector has degree {}, expected {}",
                vector_degree(&w),
                g * beta
            )));
        }
        vectors.push(w);
    }
    let q = map.phi_matrix(p)?;
    let report = forney_check(&q, &vectors)?;
    if !report.holds {
        return Err(Error::Internal("transformed basis fails Forney's criterion".into()));
    }
    Ok(MinimalBasis {
        field: basis.field,
        dim: basis.dim,
        vectors,
        indices: basis.indices.iter().map(|b| g * b).collect(),
    })
}

//! Seeded generators for matrices and maps.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::field::{Field, Scalar};
use crate::poly::Poly;
use crate::polymat::PolyMatrix;
use crate::ratmap::RationalMap;

pub use rand::SeedableRng;

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn scalar(rng: &mut InstanceRng, field: Field, bound: i64) -> Scalar {
    field.from_i64(rng.gen_range(-bound..=bound))
}

/// Degree at most `max_deg`, coefficients in `[-bound, bound]`.
pub fn poly(rng: &mut InstanceRng, field: Field, max_deg: usize, bound: i64) -> Poly {
    let len = rng.gen_range(0..=max_deg + 1);
    Poly::from_vec(field, (0..len).map(|_| scalar(rng, field, bound)).collect())
}

/// Sparse entries, so that zeros and low degrees are common.
pub fn matrix(rng: &mut InstanceRng, field: Field, rows: usize, cols: usize, max_deg: usize) -> PolyMatrix {
    let entries: Vec<Poly> = (0..rows * cols)
        .map(|_| if rng.gen_bool(0.3) { Poly::zero(field) } else { poly(rng, field, max_deg, 3) })
        .collect();
    let g = entries.iter().map(Poly::deg0).max().unwrap_or(0);
    PolyMatrix::new(field, rows, cols, entries, g).unwrap()
}

/// A product of `rows x k` and `k x cols` factors with `k` below both
/// dimensions, hence of deficient rank.
pub fn singular_matrix(rng: &mut InstanceRng, field: Field, rows: usize, cols: usize, max_deg: usize) -> PolyMatrix {
    let k = rng.gen_range(0..rows.min(cols).max(1));
    let left = matrix(rng, field, rows, k.max(1), max_deg / 2);
    let right = matrix(rng, field, k.max(1), cols, max_deg - max_deg / 2);
    let out = if k == 0 { PolyMatrix::zeros(field, rows, cols, 0) } else { left.mul(&right).unwrap() };
    let g = out.degree();
    out.with_grade(g).unwrap()
}

/// A coprime nonconstant map with `max(deg n, deg d) <= max_g`.
pub fn map(rng: &mut InstanceRng, field: Field, max_g: usize) -> RationalMap {
    loop {
        let n = poly(rng, field, max_g, 3);
        let d = poly(rng, field, max_g, 3);
        if let Ok(m) = RationalMap::new(n, d) {
            return m;
        }
    }
}

/// A map with `deg n > deg d`, so that `y = inf` lies over `x = inf`.
pub fn map_n_above_d(rng: &mut InstanceRng, field: Field, max_g: usize) -> RationalMap {
    loop {
        let m = map(rng, field, max_g.max(1));
        if m.big_n() > m.big_d() {
            return m;
        }
    }
}

/// A Moebius map `(a y + b) / (c y + e)` with nonzero determinant.
pub fn mobius_map(rng: &mut InstanceRng, field: Field) -> RationalMap {
    loop {
        let n = poly(rng, field, 1, 4);
        let d = poly(rng, field, 1, 4);
        if let Ok(m) = RationalMap::new(n, d) {
            if m.big_g() == 1 {
                return m;
            }
        }
    }
}

/// A square matrix with nonzero determinant that does not vanish at `x0`.
pub fn regular_at(rng: &mut InstanceRng, field: Field, size: usize, max_deg: usize, x0: &Scalar) -> PolyMatrix {
    loop {
        let m = matrix(rng, field, size, size, max_deg);
        let det = m.det().unwrap();
        if !det.is_zero() && !det.eval(x0).is_zero() {
            return m;
        }
    }
}

/// Adds `extra` to the grade of `m`.
pub fn raise_grade(m: &PolyMatrix, extra: usize) -> PolyMatrix {
    m.with_grade(m.grade() + extra).unwrap()
}

/// Multiplies every entry by `x - c`.
pub fn times_linear(m: &PolyMatrix, c: &Scalar) -> PolyMatrix {
    let lin = Poly::linear_root(c);
    m.map_entries(m.grade() + 1, |e| e * &lin).unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    Plain,
    /// Grade above the degree: infinite elementary divisors in `P`.
    GradeSlack,
    /// `P` divisible by `x - xhat`: `Q` gains divisors at `y = inf`.
    FactorAtXhat,
    /// `deg n > deg d`: `x = inf` and `y = inf` correspond.
    NAboveD,
}

impl InstanceKind {
    pub const ALL: [InstanceKind; 4] =
        [InstanceKind::Plain, InstanceKind::GradeSlack, InstanceKind::FactorAtXhat, InstanceKind::NAboveD];
}

#[derive(Clone, Debug)]
pub struct TheoremInstance {
    pub p: PolyMatrix,
    pub map: RationalMap,
    pub kind: InstanceKind,
}

/// A matrix of at most `rows x cols` with grade at most `max_grade`, and a
/// map with `G <= max_g`, shaped according to `kind`.
pub fn theorem_instance(
    rng: &mut InstanceRng,
    field: Field,
    rows: usize,
    cols: usize,
    max_grade: usize,
    max_g: usize,
    kind: InstanceKind,
) -> TheoremInstance {
    let m = rng.gen_range(1..=rows);
    let c = rng.gen_range(1..=cols);
    let low = max_grade.saturating_sub(1);
    let (p, map) = match kind {
        InstanceKind::Plain => (matrix(rng, field, m, c, max_grade), map(rng, field, max_g)),
        InstanceKind::GradeSlack => {
            let p = matrix(rng, field, m, c, low);
            let extra = max_grade - p.grade();
            (raise_grade(&p, rng.gen_range(1..=extra.max(1))), map(rng, field, max_g))
        }
        InstanceKind::FactorAtXhat => {
            let map = loop {
                let f = map(rng, field, max_g);
                if f.xhat().is_some() {
                    break f;
                }
            };
            let p = matrix(rng, field, m, c, low);
            (times_linear(&p, &map.xhat().unwrap()), map)
        }
        InstanceKind::NAboveD => (matrix(rng, field, m, c, max_grade), map_n_above_d(rng, field, max_g)),
    };
    TheoremInstance { p, map, kind }
}

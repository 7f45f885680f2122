//! Characteristic points: irreducible bases, unsplit clusters and infinity.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::factor::{split_squarefree, squarefree_decompose};
use crate::field::Scalar;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CharPoint {
    Infinity,
    /// A monic irreducible base; degree one stands for its root.
    Finite(Poly),
    /// A monic squarefree base whose factorization over the rationals was
    /// beyond the search budget. Every irreducible factor of it carries the
    /// same exponents, so it can stand in for each of them.
    Cluster(Poly),
}

impl CharPoint {
    pub fn at(value: &Scalar) -> CharPoint {
        CharPoint::Finite(Poly::linear_root(value))
    }

    pub fn base(&self) -> Option<&Poly> {
        match self {
            CharPoint::Infinity => None,
            CharPoint::Finite(b) | CharPoint::Cluster(b) => Some(b),
        }
    }

    /// The root of a degree-one base.
    pub fn value(&self) -> Option<Scalar> {
        match self {
            CharPoint::Finite(b) if b.deg0() == 1 => Some(-&b.coeff(0)),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, CharPoint::Infinity)
    }

    /// Finite bases by degree then coefficients, infinity last.
    pub fn canonical_cmp(&self, other: &CharPoint) -> Ordering {
        match (self.base(), other.base()) {
            (Some(a), Some(b)) => a.canonical_cmp(b),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        }
    }

    pub fn display<'a>(&'a self, var: &'a str) -> PointDisplay<'a> {
        PointDisplay { point: self, var }
    }
}

pub struct PointDisplay<'a> {
    point: &'a CharPoint,
    var: &'a str,
}

impl fmt::Display for PointDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.point {
            CharPoint::Infinity => write!(f, "inf"),
            CharPoint::Finite(b) => write!(f, "{}", b.display(self.var)),
            CharPoint::Cluster(b) => write!(f, "{}", b.display(self.var)),
        }
    }
}

/// Factors a nonzero polynomial into irreducible points, keeping squarefree
/// parts that are too large to split as clusters. Returns the unit and the
/// points with multiplicities in canonical order.
pub fn factor_points(p: &Poly) -> Result<(Scalar, Vec<(CharPoint, u32)>)> {
    let sqf = squarefree_decompose(p)?;
    let mut out = Vec::new();
    for (part, e) in &sqf.factors {
        match split_squarefree(part) {
            Ok(bases) => out.extend(bases.into_iter().map(|b| (CharPoint::Finite(b), *e))),
            Err(Error::FactorizationTooLarge(_)) => out.push((CharPoint::Cluster(part.clone()), *e)),
            Err(err) => return Err(err),
        }
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok((sqf.unit, out))
}

/// Splits a squarefree base into points, falling back to a single cluster.
pub fn split_points(base: &Poly) -> Result<Vec<CharPoint>> {
    match split_squarefree(&base.monic()) {
        Ok(bases) => Ok(bases.into_iter().map(CharPoint::Finite).collect()),
        Err(Error::FactorizationTooLarge(_)) => Ok(vec![CharPoint::Cluster(base.monic())]),
        Err(err) => Err(err),
    }
}

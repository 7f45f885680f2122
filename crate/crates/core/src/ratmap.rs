//! Rational changes of variable `x = n(y)/d(y)` acting on polynomial
//! matrices through `Q(y) = d(y)^g P(n(y)/d(y))`.

use crate::error::{Error, Result};
use crate::factor::is_irreducible;
use crate::field::{Field, Scalar};
use crate::point::{factor_points, CharPoint};
use crate::poly::Poly;
use crate::polymat::PolyMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMap {
    n: Poly,
    d: Poly,
}

/// Why `deg Q` falls short of `g * G`, if it does.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeDrop {
    /// `deg Q = g * G`.
    Exact,
    /// `N > D` and the grade exceeds the degree of `P`.
    NgtDGradeSlack,
    /// `N <= D` and `P` is divisible by `x - xhat`.
    FactorAtXhat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBoundReport {
    /// `g*D + max_{P_i != 0} i*(N - D)`.
    pub q: usize,
    /// Actual degree of `Q`.
    pub degree: usize,
    /// `g * G`.
    pub full: usize,
    /// Whether `deg Q` equals `q`.
    pub attained: bool,
    pub reason: DegreeDrop,
    /// The image of `y = inf`; `None` stands for infinity (`N > D`).
    pub xhat: Option<Scalar>,
}

/// Target of a preimage computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Finite(Scalar),
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreimageSet {
    pub target: Target,
    /// Finite points with multiplicities in canonical order, then infinity if
    /// present.
    pub entries: Vec<(CharPoint, u32)>,
    /// Degree of `alpha*d - beta*n`.
    pub s: usize,
}

impl PreimageSet {
    pub fn includes_infinity(&self) -> bool {
        self.entries.iter().any(|(p, _)| p.is_infinite())
    }

    /// Sum of multiplicities, a point of degree `k` counting `k` times;
    /// always `G`.
    pub fn total(&self) -> usize {
        self.entries
            .iter()
            .map(|(c, m)| *m as usize * c.base().map_or(1, Poly::deg0))
            .sum()
    }
}

/// Image of an irreducible base `q(x)` split into `y`-points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupedPreimage {
    pub unit: Scalar,
    pub factors: Vec<(CharPoint, u32)>,
    /// `deg(q) * G - deg(Phi(q))`; positive only for degree-one bases.
    pub infinity: u32,
}

impl RationalMap {
    pub fn new(n: Poly, d: Poly) -> Result<RationalMap> {
        if n.field() != d.field() {
            return Err(Error::FieldMismatch(n.field().to_string(), d.field().to_string()));
        }
        if n.is_zero() || d.is_zero() {
            return Err(Error::ZeroMapPart);
        }
        if n.is_constant() && d.is_constant() {
            return Err(Error::ConstantMap);
        }
        if !n.gcd(&d).is_one() {
            return Err(Error::NotCoprime);
        }
        Ok(RationalMap { n, d })
    }

    /// The identity `x = y`.
    pub fn identity(field: Field) -> RationalMap {
        RationalMap { n: Poly::x(field), d: Poly::one(field) }
    }

    pub fn field(&self) -> Field {
        self.n.field()
    }

    pub fn n(&self) -> &Poly {
        &self.n
    }

    pub fn d(&self) -> &Poly {
        &self.d
    }

    pub fn big_n(&self) -> usize {
        self.n.deg0()
    }

    pub fn big_d(&self) -> usize {
        self.d.deg0()
    }

    pub fn big_g(&self) -> usize {
        self.big_n().max(self.big_d())
    }

    fn powers(&self, g: usize) -> (Vec<Poly>, Vec<Poly>) {
        let f = self.field();
        let mut np = vec![Poly::one(f)];
        let mut dp = vec![Poly::one(f)];
        for i in 0..g {
            np.push(&np[i] * &self.n);
            dp.push(&dp[i] * &self.d);
        }
        (np, dp)
    }

    fn phi_with(&self, p: &Poly, g: usize, np: &[Poly], dp: &[Poly]) -> Poly {
        let mut acc = Poly::zero(self.field());
        for (i, a) in p.coeffs().iter().enumerate() {
            if !a.is_zero() {
                acc = &acc + &(&np[i] * &dp[g - i]).scale(a);
            }
        }
        acc
    }

    /// `sum_i a_i n^i d^(g-i)`.
    pub fn phi_scalar(&self, p: &Poly, g: usize) -> Result<Poly> {
        if p.field() != self.field() {
            return Err(Error::FieldMismatch(self.field().to_string(), p.field().to_string()));
        }
        if p.deg0() > g {
            return Err(Error::GradeTooSmall { grade: g, degree: p.deg0() });
        }
        let (np, dp) = self.powers(g);
        Ok(self.phi_with(p, g, &np, &dp))
    }

    /// `Phi_deg(p)(p)`, the natural-grade image used for bases.
    pub fn phi_natural(&self, p: &Poly) -> Poly {
        self.phi_scalar(p, p.deg0()).expect("degree is a valid grade")
    }

    /// Entrywise image with the matrix grade; the result has grade `g * G`.
    pub fn phi_matrix(&self, p: &PolyMatrix) -> Result<PolyMatrix> {
        if p.field() != self.field() {
            return Err(Error::FieldMismatch(self.field().to_string(), p.field().to_string()));
        }
        let g = p.grade();
        let (np, dp) = self.powers(g);
        p.map_entries(g * self.big_g(), |e| self.phi_with(e, g, &np, &dp))
    }

    /// Degree bookkeeping for `Phi(P)`.
    pub fn degree_bound(&self, p: &PolyMatrix) -> Result<DegreeBoundReport> {
        if p.is_zero() {
            return Err(Error::InvalidProblem("degree bound of the zero matrix".into()));
        }
        let g = p.grade() as i64;
        let (nn, dd) = (self.big_n() as i64, self.big_d() as i64);
        let q = (0..=p.degree())
            .filter(|&i| p.entries().iter().any(|e| !e.coeff(i).is_zero()))
            .map(|i| g * dd + i as i64 * (nn - dd))
            .max()
            .expect("nonzero matrix") as usize;
        let degree = self.phi_matrix(p)?.degree();
        let full = p.grade() * self.big_g();
        let reason = if degree == full {
            DegreeDrop::Exact
        } else if nn > dd {
            DegreeDrop::NgtDGradeSlack
        } else {
            DegreeDrop::FactorAtXhat
        };
        Ok(DegreeBoundReport { q, degree, full, attained: degree == q, reason, xhat: self.xhat() })
    }

    /// `x(inf)`: `n_G/d_G` when `N = D`, zero when `N < D`, infinity
    /// (`None`) when `N > D`.
    pub fn xhat(&self) -> Option<Scalar> {
        use std::cmp::Ordering::*;
        match self.big_n().cmp(&self.big_d()) {
            Equal => Some(self.n.leading().unwrap() / self.d.leading().unwrap()),
            Less => Some(self.field().zero()),
            Greater => None,
        }
    }

    /// `alpha*d - beta*n` for the representative `(x0, 1)` or `(1, 0)`.
    pub fn fiber_poly(&self, target: &Target) -> Poly {
        match target {
            Target::Finite(x0) => &self.d.scale(x0) - &self.n,
            Target::Infinity => self.d.clone(),
        }
    }

    /// The preimage set `T_x0` with multiplicities.
    pub fn preimage_set(&self, target: &Target) -> Result<PreimageSet> {
        if let Target::Finite(x0) = target {
            if x0.field() != self.field() {
                return Err(Error::FieldMismatch(self.field().to_string(), x0.field().to_string()));
            }
        }
        let f = self.fiber_poly(target);
        let s = f.deg0();
        let mut entries = if f.is_constant() { Vec::new() } else { factor_points(&f)?.1 };
        let g = self.big_g();
        if s < g {
            entries.push((CharPoint::Infinity, (g - s) as u32));
        }
        Ok(PreimageSet { target: target.clone(), entries, s })
    }

    /// Splits `Phi(q)` for an irreducible base `q`.
    pub fn grouped_preimage(&self, base: &Poly) -> Result<GroupedPreimage> {
        if !is_irreducible(base)? {
            return Err(Error::Reducible);
        }
        self.grouped_image(base)
    }

    /// As [`RationalMap::grouped_preimage`] without the irreducibility check;
    /// used for cluster bases.
    pub(crate) fn grouped_image(&self, base: &Poly) -> Result<GroupedPreimage> {
        let image = self.phi_natural(base);
        let (unit, factors) = factor_points(&image)?;
        let infinity = (base.deg0() * self.big_g() - image.deg0()) as u32;
        Ok(GroupedPreimage { unit, factors, infinity })
    }

    /// Inverse of a Moebius map `(a*y + b)/(c*y + e)`: `(b - e*x)/(c*x - a)`.
    pub fn mobius_inverse(&self) -> Result<RationalMap> {
        if self.big_g() != 1 {
            return Err(Error::NotMobius(self.big_g()));
        }
        let f = self.field();
        let (a, b) = (self.n.coeff(1), self.n.coeff(0));
        let (c, e) = (self.d.coeff(1), self.d.coeff(0));
        if (&(&a * &e) - &(&b * &c)).is_zero() {
            return Err(Error::DegenerateMobius);
        }
        let n = Poly::new(f, vec![b, -&e])?;
        let d = Poly::new(f, vec![-&a, c])?;
        RationalMap::new(n, d)
    }

    /// The dual map with numerator and denominator swapped.
    pub fn psi_dual(&self) -> RationalMap {
        RationalMap { n: self.d.clone(), d: self.n.clone() }
    }

    /// `a*e - b*c` for a Moebius map.
    pub fn mobius_determinant(&self) -> Result<Scalar> {
        if self.big_g() != 1 {
            return Err(Error::NotMobius(self.big_g()));
        }
        Ok(&(&self.n.coeff(1) * &self.d.coeff(0)) - &(&self.n.coeff(0) * &self.d.coeff(1)))
    }
}

//! Polynomial expressions and problem files.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' uint)?
//! base   := rational | var | '(' expr ')'
//! rational := int ('/' uint)?
//! ```
//!
//! Whitespace is ignored. Positions in errors are byte offsets.

use num_bigint::BigInt;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::poly::Poly;
use crate::polymat::PolyMatrix;
use crate::ratmap::RationalMap;

pub fn parse_poly(src: &str, var: &str, field: Field) -> Result<Poly> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, var, field };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

/// A field element, written as a constant expression.
pub fn parse_scalar(src: &str, field: Field) -> Result<Scalar> {
    let p = parse_poly(src, "x", field)?;
    if !p.is_constant() {
        return Err(Error::Parse { pos: 0, msg: "expected a constant".into() });
    }
    Ok(p.coeff(0))
}

/// `Q` or `Fp:<prime>`.
pub fn parse_field(src: &str) -> Result<Field> {
    let s = src.trim();
    if s == "Q" {
        return Ok(Field::Rationals);
    }
    let p = s
        .strip_prefix("Fp:")
        .and_then(|p| p.trim().parse::<u64>().ok())
        .ok_or_else(|| Error::UnsupportedField(s.to_string()))?;
    Field::prime(p).map_err(|_| Error::UnsupportedField(s.to_string()))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    var: &'a str,
    field: Field,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let negate = self.eat(b'-');
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.base()?;
        if self.eat(b'^') {
            let start = self.pos;
            let digits = self.digits().ok_or_else(|| self.error("expected an exponent"))?;
            let e: u32 = digits.parse().map_err(|_| Error::Parse { pos: start, msg: "exponent too large".into() })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn base(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().unwrap().parse().unwrap();
                if self.eat(b'/') {
                    let den_text = self.digits().ok_or_else(|| self.error("expected a denominator"))?;
                    let den: BigInt = den_text.parse().unwrap();
                    let c = self.field.from_ratio(&num, &den)?;
                    return Ok(Poly::constant(c));
                }
                Ok(Poly::constant(self.field.from_bigint(&num)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_') {
                    self.pos += 1;
                }
                let name = String::from_utf8_lossy(&self.src[start..self.pos]);
                if name != self.var {
                    return Err(Error::UnknownVariable(name.into_owned()));
                }
                Ok(Poly::x(self.field))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Raw problem file as written on disk.
///
/// ```toml
/// field = "Q"            # or "Fp:7"
/// variable = "x"
/// grade = 2              # optional, defaults to the degree
/// matrix = [["x^2-20*x", "0"], ["0", "x"]]
///
/// [map]                  # optional
/// variable = "y"
/// n = "16*y^2-25"
/// d = "y^2-y"
/// ```
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub field: String,
    #[serde(default = "default_x")]
    pub variable: String,
    pub grade: Option<usize>,
    pub matrix: Vec<Vec<String>>,
    pub map: Option<MapSection>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSection {
    #[serde(default = "default_y")]
    pub variable: String,
    pub n: String,
    pub d: String,
}

fn default_x() -> String {
    "x".into()
}

fn default_y() -> String {
    "y".into()
}

/// A parsed problem: the matrix in `x` and optionally a map `x = n(y)/d(y)`.
#[derive(Clone, Debug)]
pub struct Problem {
    pub field: Field,
    pub x_var: String,
    pub y_var: String,
    pub matrix: PolyMatrix,
    pub map: Option<RationalMap>,
}

impl Problem {
    pub fn from_toml(text: &str) -> Result<Problem> {
        let raw: ProblemFile = toml::from_str(text).map_err(|e| Error::InvalidProblem(e.message().to_string()))?;
        Problem::from_file(raw)
    }

    pub fn from_file(raw: ProblemFile) -> Result<Problem> {
        let field = parse_field(&raw.field)?;
        if raw.matrix.is_empty() || raw.matrix[0].is_empty() {
            return Err(Error::InvalidProblem("matrix must have at least one row and one column".into()));
        }
        let rows = raw
            .matrix
            .iter()
            .map(|row| row.iter().map(|e| parse_poly(e, &raw.variable, field)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let matrix = PolyMatrix::from_rows(field, rows, raw.grade)?;
        let (map, y_var) = match raw.map {
            Some(m) => {
                if m.variable == raw.variable {
                    return Err(Error::InvalidProblem("map variable must differ from the matrix variable".into()));
                }
                let n = parse_poly(&m.n, &m.variable, field)?;
                let d = parse_poly(&m.d, &m.variable, field)?;
                (Some(RationalMap::new(n, d)?), m.variable)
            }
            None => (None, default_y()),
        };
        Ok(Problem { field, x_var: raw.variable, y_var, matrix, map })
    }
}

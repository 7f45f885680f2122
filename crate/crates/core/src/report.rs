//! JSON reports. Polynomials are written as expression strings in the
//! problem's variable, highest power first, which the parser reads back.
//! Points are their monic bases, `inf` for infinity. Exponent and index
//! lists are ascending; points follow (degree, coefficients) order.

use serde::{Deserialize, Serialize};

use crate::eigstructure::{
    CompleteEigenstructure, ConverseRecord, DivisorRecord, IndexRecord, InternalExponents, InvariantRecord,
    MobiusReport, Side, TheoremReport, TransportReport,
};
use crate::minbasis::{ForneyReport, MinimalBasis};
use crate::point::CharPoint;
use crate::poly::Poly;
use crate::polymat::PolyMatrix;
use crate::ratmap::{DegreeBoundReport, DegreeDrop, PreimageSet, Target};
use crate::smith::SmithDecomposition;

fn is_false(b: &bool) -> bool {
    !b
}

fn poly_str(p: &Poly, var: &str) -> String {
    p.display(var).to_string()
}

fn point_str(c: &CharPoint, var: &str) -> String {
    c.display(var).to_string()
}

fn matrix_strs(m: &PolyMatrix, var: &str) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(|e| poly_str(e, var)).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointEntry {
    pub point: String,
    /// Set when the base is squarefree but was not split into irreducibles.
    #[serde(default, skip_serializing_if = "is_false")]
    pub cluster: bool,
    pub exponents: Vec<u32>,
}

impl PointEntry {
    fn new(c: &CharPoint, exponents: Vec<u32>, var: &str) -> PointEntry {
        PointEntry { point: point_str(c, var), cluster: matches!(c, CharPoint::Cluster(_)), exponents }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigReport {
    pub field: String,
    pub variable: String,
    pub grade: usize,
    pub rank: usize,
    pub invariant_polys: Vec<String>,
    pub finite: Vec<PointEntry>,
    pub infinite: Vec<u32>,
    pub right_indices: Vec<usize>,
    pub left_indices: Vec<usize>,
}

impl EigReport {
    pub fn new(e: &CompleteEigenstructure, var: &str) -> EigReport {
        EigReport {
            field: e.field.to_string(),
            variable: var.to_string(),
            grade: e.grade,
            rank: e.rank,
            invariant_polys: e.invariant_polys.iter().map(|p| poly_str(p, var)).collect(),
            finite: e.finite.entries.iter().map(|(c, ex)| PointEntry::new(c, ex.clone(), var)).collect(),
            infinite: e.infinite.clone(),
            right_indices: e.right_indices.clone(),
            left_indices: e.left_indices.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithReport {
    pub field: String,
    pub variable: String,
    pub rank: usize,
    pub invariant_polys: Vec<String>,
    pub a: Vec<Vec<String>>,
    pub s: Vec<Vec<String>>,
    pub b: Vec<Vec<String>>,
}

impl SmithReport {
    pub fn new(dec: &SmithDecomposition, var: &str) -> SmithReport {
        SmithReport {
            field: dec.s.field().to_string(),
            variable: var.to_string(),
            rank: dec.rank(),
            invariant_polys: dec.invariant_polys.iter().map(|p| poly_str(p, var)).collect(),
            a: matrix_strs(&dec.a, var),
            s: matrix_strs(&dec.s, var),
            b: matrix_strs(&dec.b, var),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBoundEntry {
    pub bound: usize,
    pub degree: usize,
    pub full: usize,
    pub attained: bool,
    pub reason: String,
    pub xhat: String,
}

impl DegreeBoundEntry {
    pub fn new(r: &DegreeBoundReport) -> DegreeBoundEntry {
        DegreeBoundEntry {
            bound: r.q,
            degree: r.degree,
            full: r.full,
            attained: r.attained,
            reason: match r.reason {
                DegreeDrop::Exact => "exact",
                DegreeDrop::NgtDGradeSlack => "grade-slack",
                DegreeDrop::FactorAtXhat => "factor-at-xhat",
            }
            .into(),
            xhat: r.xhat.as_ref().map_or_else(|| "inf".to_string(), ToString::to_string),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformReport {
    pub field: String,
    pub variable: String,
    pub grade: usize,
    pub matrix: Vec<Vec<String>>,
    pub degree_bound: DegreeBoundEntry,
}

impl TransformReport {
    pub fn new(q: &PolyMatrix, bound: &DegreeBoundReport, var: &str) -> TransformReport {
        TransformReport {
            field: q.field().to_string(),
            variable: var.to_string(),
            grade: q.grade(),
            matrix: matrix_strs(q, var),
            degree_bound: DegreeBoundEntry::new(bound),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreimageEntry {
    pub point: String,
    #[serde(default, skip_serializing_if = "is_false")]
    pub cluster: bool,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreimageReport {
    pub target: String,
    pub variable: String,
    pub points: Vec<PreimageEntry>,
    /// Multiplicities weighted by point degree; equals `G`.
    pub total: usize,
}

impl PreimageReport {
    pub fn new(set: &PreimageSet, var: &str) -> PreimageReport {
        PreimageReport {
            target: match &set.target {
                Target::Finite(v) => v.to_string(),
                Target::Infinity => "inf".into(),
            },
            variable: var.to_string(),
            points: set
                .entries
                .iter()
                .map(|(c, m)| PreimageEntry {
                    point: point_str(c, var),
                    cluster: matches!(c, CharPoint::Cluster(_)),
                    multiplicity: *m,
                })
                .collect(),
            total: set.total(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForneyEntry {
    pub holds: bool,
    pub minor_gcd: String,
    pub max_minor_degree: usize,
    pub order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinBasisReport {
    pub side: String,
    pub variable: String,
    pub indices: Vec<usize>,
    /// One entry per basis vector.
    pub vectors: Vec<Vec<String>>,
    pub forney: ForneyEntry,
}

impl MinBasisReport {
    pub fn new(side: Side, basis: &MinimalBasis, forney: &ForneyReport, var: &str) -> MinBasisReport {
        MinBasisReport {
            side: side_str(side).into(),
            variable: var.to_string(),
            indices: basis.indices.clone(),
            vectors: basis.vectors.iter().map(|v| v.iter().map(|e| poly_str(e, var)).collect()).collect(),
            forney: ForneyEntry {
                holds: forney.holds,
                minor_gcd: poly_str(&forney.gcd, var),
                max_minor_degree: forney.max_minor_degree,
                order: forney.order,
            },
        }
    }
}

fn side_str(s: Side) -> &'static str {
    match s {
        Side::Left => "left",
        Side::Right => "right",
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForwardEntry {
    pub x_point: String,
    pub x_exponents: Vec<u32>,
    pub y_point: String,
    pub multiplicity: u32,
    pub predicted: Vec<u32>,
    /// `null` when the factors of a cluster carry different exponents.
    pub observed: Option<Vec<u32>>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConverseEntry {
    pub y_point: String,
    pub observed: Vec<u32>,
    /// `null` for a point with no source in `P`.
    pub x_point: Option<String>,
    pub multiplicity: Option<u32>,
    pub quotients: Option<Vec<u32>>,
    pub x_exponents: Vec<u32>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantEntry {
    pub index: usize,
    pub predicted: String,
    pub observed: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub side: String,
    pub x_indices: Vec<usize>,
    pub y_indices: Vec<usize>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InternalEntry {
    pub k: Vec<usize>,
    pub nonincreasing: bool,
    pub reordered_smith_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub verdict: bool,
    pub grade: usize,
    pub big_g: usize,
    pub p: EigReport,
    pub q: EigReport,
    pub forward: Vec<ForwardEntry>,
    pub converse: Vec<ConverseEntry>,
    pub invariants: Vec<InvariantEntry>,
    pub indices: Vec<IndexEntry>,
    pub internal: InternalEntry,
}

impl VerifyReport {
    pub fn new(r: &TheoremReport, x: &str, y: &str) -> VerifyReport {
        let fwd = |f: &DivisorRecord| ForwardEntry {
            x_point: point_str(&f.x_point, x),
            x_exponents: f.x_exponents.clone(),
            y_point: point_str(&f.y_point, y),
            multiplicity: f.multiplicity,
            predicted: f.predicted.clone(),
            observed: f.observed.clone(),
            holds: f.holds,
        };
        let conv = |c: &ConverseRecord| ConverseEntry {
            y_point: point_str(&c.y_point, y),
            observed: c.observed.clone(),
            x_point: c.source.as_ref().map(|(p, _)| point_str(p, x)),
            multiplicity: c.source.as_ref().map(|(_, m)| *m),
            quotients: c.quotients.clone(),
            x_exponents: c.x_exponents.clone(),
            holds: c.holds,
        };
        let inv = |i: &InvariantRecord| InvariantEntry {
            index: i.index,
            predicted: poly_str(&i.predicted, y),
            observed: poly_str(&i.observed, y),
            holds: i.holds,
        };
        let idx = |i: &IndexRecord| IndexEntry {
            side: side_str(i.side).into(),
            x_indices: i.x_indices.clone(),
            y_indices: i.y_indices.clone(),
            holds: i.holds,
        };
        let InternalExponents { k, nonincreasing, reordered_smith_holds } = r.internal.clone();
        VerifyReport {
            verdict: r.verdict,
            grade: r.grade,
            big_g: r.big_g,
            p: EigReport::new(&r.p_structure, x),
            q: EigReport::new(&r.q_structure, y),
            forward: r.forward.iter().map(fwd).collect(),
            converse: r.converse.iter().map(conv).collect(),
            invariants: r.invariants.iter().map(inv).collect(),
            indices: r.indices.iter().map(idx).collect(),
            internal: InternalEntry { k, nonincreasing, reordered_smith_holds },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MobiusEntry {
    pub exponents_preserved: bool,
    pub indices_preserved: bool,
    pub inverse_recovers_matrix: bool,
    pub roundtrip_structure_equal: bool,
    pub verdict: bool,
}

impl From<&MobiusReport> for MobiusEntry {
    fn from(r: &MobiusReport) -> MobiusEntry {
        MobiusEntry {
            exponents_preserved: r.exponents_preserved,
            indices_preserved: r.indices_preserved,
            inverse_recovers_matrix: r.inverse_recovers_matrix,
            roundtrip_structure_equal: r.roundtrip_structure_equal,
            verdict: r.verdict,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportEntry {
    pub x0: String,
    pub y0: String,
    pub w: Vec<String>,
    pub multiplicity: u32,
    pub order: u32,
    pub truncated_order: u32,
    pub measured: u32,
    pub outside_kernel: bool,
    pub matches_prediction: bool,
}

impl TransportEntry {
    pub fn new(t: &TransportReport, x0: &str, y0: &str, var: &str) -> TransportEntry {
        TransportEntry {
            x0: x0.to_string(),
            y0: y0.to_string(),
            w: t.w.iter().map(|e| poly_str(e, var)).collect(),
            multiplicity: t.multiplicity,
            order: t.order,
            truncated_order: t.truncated_order,
            measured: t.measured,
            outside_kernel: t.outside_kernel,
            matches_prediction: t.matches_prediction,
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report values are always serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigstructure::{complete_eigenstructure, verify_theorem};
    use crate::field::Field;
    use crate::fixtures::{intro_map, intro_matrix, quartic_map};
    use crate::parse::parse_poly;

    fn roundtrip<T: Serialize + for<'de> Deserialize<'de> + PartialEq + std::fmt::Debug>(v: &T) {
        let text = to_json(v);
        let back: T = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, v);
    }

    #[test]
    fn eig_report_roundtrip() {
        let e = complete_eigenstructure(&intro_matrix()).unwrap();
        let r = EigReport::new(&e, "x");
        roundtrip(&r);
        assert_eq!(r.finite[0].point, "x - 20");
        assert_eq!(r.finite[1], PointEntry { point: "x".into(), cluster: false, exponents: vec![1, 2] });
        for (s, p) in r.invariant_polys.iter().zip(&e.invariant_polys) {
            assert_eq!(&parse_poly(s, "x", Field::Rationals).unwrap(), p);
        }
        for (entry, (c, _)) in r.finite.iter().zip(&e.finite.entries) {
            assert_eq!(&parse_poly(&entry.point, "x", Field::Rationals).unwrap(), c.base().unwrap());
        }
    }

    #[test]
    fn verify_report_roundtrip() {
        let t = verify_theorem(&intro_matrix(), &intro_map()).unwrap();
        let r = VerifyReport::new(&t, "x", "y");
        roundtrip(&r);
        assert!(r.verdict);
        assert!(r.forward.iter().any(|f| f.y_point == "y - 5/2" && f.predicted == vec![2, 2]));
        for inv in &r.invariants {
            assert_eq!(parse_poly(&inv.observed, "y", Field::Rationals).unwrap(), t.invariants[inv.index - 1].observed);
        }
    }

    #[test]
    fn preimage_report() {
        let set = quartic_map().preimage_set(&Target::Finite(Field::Rationals.one())).unwrap();
        let r = PreimageReport::new(&set, "y");
        roundtrip(&r);
        let pts: Vec<(&str, u32)> = r.points.iter().map(|p| (p.point.as_str(), p.multiplicity)).collect();
        assert_eq!(pts, vec![("y - 1", 2), ("y + 1", 1), ("inf", 1)]);
        assert_eq!(r.total, 4);
    }
}

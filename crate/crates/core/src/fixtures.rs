//! Small worked instances used by the tests, the acceptance suite and the
//! command-line self-check.

use crate::field::Field;
use crate::poly::Poly;
use crate::polymat::PolyMatrix;
use crate::ratmap::RationalMap;

/// The 5x3 matrix of grade 2 with divisors `x-20, x, x-20, x^2` and left
/// minimal indices 0 and 1.
pub fn intro_matrix() -> PolyMatrix {
    PolyMatrix::from_i64(
        Field::Rationals,
        &[
            &[&[0, -20, 1], &[], &[]],
            &[&[-20, 1], &[0, -20, 1], &[]],
            &[&[], &[], &[0, 1]],
            &[&[], &[], &[0, 0, 1]],
            &[&[], &[], &[]],
        ],
        Some(2),
    )
}

/// `x = (16y^2 - 25)/(y^2 - y)`.
pub fn intro_map() -> RationalMap {
    let q = Field::Rationals;
    RationalMap::new(Poly::from_i64s(q, &[-25, 0, 16]), Poly::from_i64s(q, &[0, -1, 1])).unwrap()
}

/// A 4x4 singular matrix whose kernel has minimal basis `[1, -x, x^2, 0]`.
pub fn kernel_matrix(field: Field) -> PolyMatrix {
    PolyMatrix::from_i64(
        field,
        &[
            &[&[0, 1], &[1], &[], &[]],
            &[&[], &[0, 1], &[1], &[]],
            &[&[], &[], &[], &[]],
            &[&[], &[], &[], &[0, 1]],
        ],
        None,
    )
}

/// `x = (y^4 + y^3 - y^2 - y + 1)/y^4`.
pub fn quartic_map() -> RationalMap {
    let q = Field::Rationals;
    RationalMap::new(Poly::from_i64s(q, &[1, -1, -1, 1, 1]), Poly::from_i64s(q, &[0, 0, 0, 0, 1])).unwrap()
}

/// `x = (y^2 + 1)/y`.
pub fn dickson_map(field: Field) -> RationalMap {
    RationalMap::new(Poly::from_i64s(field, &[1, 0, 1]), Poly::from_i64s(field, &[0, 1])).unwrap()
}

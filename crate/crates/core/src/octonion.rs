//! Octonion arithmetic over the basis `e0..e7`, in two interchangeable forms:
//! the basis multiplication table, and the eight component matrices `M^l`
//! with `(ab)^l = a~^T M^l b~` where `a~` is the coefficient column vector.
//!
//! The two routes are kept bit-identical by accumulating each component's
//! eight signed products in the same (ascending column) order.

use crate::error::{Error, Result};

/// Number of real coefficients.
pub const DIM: usize = 8;

/// Basis product table: entry `[i][j]` is `(sign, index)` with
/// `e_i * e_j = sign * e_index`.
pub const PRODUCT_TABLE: [[(f64, usize); 8]; 8] = [
    [
        (1., 0),
        (1., 1),
        (1., 2),
        (1., 3),
        (1., 4),
        (1., 5),
        (1., 6),
        (1., 7),
    ],
    [
        (1., 1),
        (-1., 0),
        (1., 3),
        (-1., 2),
        (1., 5),
        (-1., 4),
        (-1., 7),
        (1., 6),
    ],
    [
        (1., 2),
        (-1., 3),
        (-1., 0),
        (1., 1),
        (1., 6),
        (1., 7),
        (-1., 4),
        (-1., 5),
    ],
    [
        (1., 3),
        (1., 2),
        (-1., 1),
        (-1., 0),
        (1., 7),
        (-1., 6),
        (1., 5),
        (-1., 4),
    ],
    [
        (1., 4),
        (-1., 5),
        (-1., 6),
        (-1., 7),
        (-1., 0),
        (1., 1),
        (1., 2),
        (1., 3),
    ],
    [
        (1., 5),
        (1., 4),
        (-1., 7),
        (1., 6),
        (-1., 1),
        (-1., 0),
        (-1., 3),
        (1., 2),
    ],
    [
        (1., 6),
        (1., 7),
        (1., 4),
        (-1., 5),
        (-1., 2),
        (1., 3),
        (-1., 0),
        (-1., 1),
    ],
    [
        (1., 7),
        (-1., 6),
        (1., 5),
        (1., 4),
        (-1., 3),
        (-1., 2),
        (1., 1),
        (-1., 0),
    ],
];

/// Nonzero entries `(row, col, sign)` of each component matrix, 0-based.
/// Published listings of these matrices use 1-based indices; every index
/// here is shifted down by one.
///
/// Note on `M^5`: entry (3,6) is +1, matching the multiplication table
/// (e3*e6 = e5). Listings that negate it describe a product that is not a
/// division algebra (`|ab| = |a||b|` fails).
const MUL_MATRIX_ENTRIES: [[(usize, usize, f64); 8]; 8] = [
    [
        (0, 0, 1.),
        (1, 1, -1.),
        (2, 2, -1.),
        (3, 3, -1.),
        (4, 4, -1.),
        (5, 5, -1.),
        (6, 6, -1.),
        (7, 7, -1.),
    ],
    [
        (0, 1, 1.),
        (1, 0, 1.),
        (2, 3, 1.),
        (4, 5, 1.),
        (7, 6, 1.),
        (3, 2, -1.),
        (5, 4, -1.),
        (6, 7, -1.),
    ],
    [
        (0, 2, 1.),
        (2, 0, 1.),
        (3, 1, 1.),
        (4, 6, 1.),
        (5, 7, 1.),
        (1, 3, -1.),
        (6, 4, -1.),
        (7, 5, -1.),
    ],
    [
        (0, 3, 1.),
        (1, 2, 1.),
        (3, 0, 1.),
        (4, 7, 1.),
        (6, 5, 1.),
        (2, 1, -1.),
        (5, 6, -1.),
        (7, 4, -1.),
    ],
    [
        (0, 4, 1.),
        (4, 0, 1.),
        (5, 1, 1.),
        (6, 2, 1.),
        (7, 3, 1.),
        (1, 5, -1.),
        (2, 6, -1.),
        (3, 7, -1.),
    ],
    [
        (0, 5, 1.),
        (1, 4, 1.),
        (5, 0, 1.),
        (7, 2, 1.),
        (3, 6, 1.),
        (2, 7, -1.),
        (4, 1, -1.),
        (6, 3, -1.),
    ],
    [
        (0, 6, 1.),
        (1, 7, 1.),
        (2, 4, 1.),
        (5, 3, 1.),
        (6, 0, 1.),
        (3, 5, -1.),
        (4, 2, -1.),
        (7, 1, -1.),
    ],
    [
        (0, 7, 1.),
        (2, 5, 1.),
        (3, 4, 1.),
        (6, 1, 1.),
        (7, 0, 1.),
        (1, 6, -1.),
        (4, 3, -1.),
        (5, 2, -1.),
    ],
];

const fn build_matrix(l: usize) -> [[f64; 8]; 8] {
    let mut m = [[0.0; 8]; 8];
    let mut k = 0;
    while k < 8 {
        let (r, c, s) = MUL_MATRIX_ENTRIES[l][k];
        m[r][c] = s;
        k += 1;
    }
    m
}

/// One component matrix `M^l`: a signed permutation with
/// `(ab)^l = a~^T M^l b~`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MulMatrix {
    /// Basis index `l` of the component this matrix extracts.
    pub index: usize,
    /// The 8x8 matrix, entries in {-1, 0, +1}.
    pub m: [[f64; 8]; 8],
}

const fn build_all() -> [MulMatrix; 8] {
    let mut out = [MulMatrix {
        index: 0,
        m: [[0.0; 8]; 8],
    }; 8];
    let mut l = 0;
    while l < 8 {
        out[l] = MulMatrix {
            index: l,
            m: build_matrix(l),
        };
        l += 1;
    }
    out
}

/// All eight component matrices, `MUL_MATRICES[l] = M^l`.
pub static MUL_MATRICES: [MulMatrix; 8] = build_all();

/// Checked access to `M^l`.
pub fn mul_matrix(l: usize) -> Result<&'static MulMatrix> {
    MUL_MATRICES.get(l).ok_or(Error::BasisIndex(l))
}

/// An octonion as its eight real coefficients over `(e0, .., e7)`.
/// `e0` is the multiplicative identity.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Octonion {
    pub c: [f64; 8],
}

impl Octonion {
    pub const ZERO: Octonion = Octonion { c: [0.0; 8] };
    pub const ONE: Octonion = Octonion {
        c: [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    };

    pub const fn new(c: [f64; 8]) -> Self {
        Octonion { c }
    }

    /// The basis unit `e_l`. Panics if `l > 7`.
    pub fn basis(l: usize) -> Self {
        assert!(l < DIM, "basis index {l} out of range");
        let mut c = [0.0; 8];
        c[l] = 1.0;
        Octonion { c }
    }

    /// A real scalar embedded as `x * e0`.
    pub const fn real(x: f64) -> Self {
        Octonion {
            c: [x, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|x| x.is_finite())
    }

    /// Componentwise scaling by a real.
    pub fn scale(&self, m: f64) -> Self {
        let mut c = self.c;
        for x in &mut c {
            *x *= m;
        }
        Octonion { c }
    }

    /// Product via the eight component matrices (`(ab)^l = a~^T M^l b~`).
    /// Bit-identical to the table product `a * b`.
    pub fn mul_matrix_form(&self, rhs: &Octonion) -> Octonion {
        let mut c = [0.0; 8];
        for (l, mat) in MUL_MATRICES.iter().enumerate() {
            let mut acc = 0.0;
            for j in 0..8 {
                let mut row_j = 0.0;
                for i in 0..8 {
                    row_j += self.c[i] * mat.m[i][j];
                }
                acc += row_j * rhs.c[j];
            }
            c[l] = acc;
        }
        Octonion { c }
    }

    /// The row vector `a~^T M^l`, i.e. entry `j` is the coefficient of
    /// `a_i b_j` contributions to component `l`. Criteria contract this
    /// row against derivative-bound matrices and lambda blocks.
    pub fn row_contraction(&self, l: usize) -> [f64; 8] {
        let mat = &MUL_MATRICES[l].m;
        let mut row = [0.0; 8];
        for (j, out) in row.iter_mut().enumerate() {
            let mut acc = 0.0;
            for i in 0..8 {
                acc += self.c[i] * mat[i][j];
            }
            *out = acc;
        }
        row
    }

    /// Euclidean norm of the coefficient vector. Multiplicative:
    /// `|ab| = |a||b|`.
    pub fn norm(&self) -> f64 {
        self.c.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

impl std::ops::Add for Octonion {
    type Output = Octonion;
    fn add(self, rhs: Octonion) -> Octonion {
        let mut c = self.c;
        for (x, y) in c.iter_mut().zip(rhs.c.iter()) {
            *x += y;
        }
        Octonion { c }
    }
}

impl std::ops::Sub for Octonion {
    type Output = Octonion;
    fn sub(self, rhs: Octonion) -> Octonion {
        let mut c = self.c;
        for (x, y) in c.iter_mut().zip(rhs.c.iter()) {
            *x -= y;
        }
        Octonion { c }
    }
}

impl std::ops::Neg for Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        self.scale(-1.0)
    }
}

impl std::ops::Mul for Octonion {
    type Output = Octonion;

    /// Table product. Accumulates column-major so each component gathers
    /// its eight signed products in ascending `j`, the same order
    /// `mul_matrix_form` uses; the two routes agree bit for bit.
    fn mul(self, rhs: Octonion) -> Octonion {
        let mut c = [0.0; 8];
        for j in 0..8 {
            for i in 0..8 {
                let (sign, k) = PRODUCT_TABLE[i][j];
                c[k] += (sign * self.c[i]) * rhs.c[j];
            }
        }
        Octonion { c }
    }
}

impl std::ops::Mul<f64> for Octonion {
    type Output = Octonion;
    fn mul(self, rhs: f64) -> Octonion {
        self.scale(rhs)
    }
}

/// Elementwise positive part `max(0, v_i)`.
pub fn pos_part(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| x.max(0.0)).collect()
}

/// Elementwise absolute value.
pub fn abs_vec(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| x.abs()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn table_product_of_basis(i: usize, j: usize) -> Octonion {
        let (sign, k) = PRODUCT_TABLE[i][j];
        Octonion::basis(k).scale(sign)
    }

    #[test]
    fn matrices_match_table_on_all_basis_pairs() {
        // Cross-validation: the hardcoded matrices and the hardcoded table
        // are independent transcriptions; they must describe one algebra.
        for i in 0..8 {
            for j in 0..8 {
                let via_table = Octonion::basis(i) * Octonion::basis(j);
                let via_matrix = Octonion::basis(i).mul_matrix_form(&Octonion::basis(j));
                let expected = table_product_of_basis(i, j);
                assert_eq!(via_table, expected, "table product e{i} e{j}");
                assert_eq!(via_matrix, expected, "matrix product e{i} e{j}");
            }
        }
    }

    #[test]
    fn matrices_derived_from_table_equal_hardcoded() {
        for l in 0..8 {
            let mut derived = [[0.0; 8]; 8];
            for i in 0..8 {
                for j in 0..8 {
                    let (sign, k) = PRODUCT_TABLE[i][j];
                    if k == l {
                        derived[i][j] = sign;
                    }
                }
            }
            assert_eq!(derived, MUL_MATRICES[l].m, "M^{l}");
        }
    }

    #[test]
    fn each_matrix_is_a_signed_permutation() {
        for mat in &MUL_MATRICES {
            for i in 0..8 {
                let row_nz = mat.m[i].iter().filter(|x| **x != 0.0).count();
                let col_nz = (0..8).filter(|&r| mat.m[r][i] != 0.0).count();
                assert_eq!(row_nz, 1, "M^{} row {i}", mat.index);
                assert_eq!(col_nz, 1, "M^{} col {i}", mat.index);
            }
            assert!(mat.m.iter().flatten().all(|x| *x == 0.0 || x.abs() == 1.0));
        }
    }

    #[test]
    fn matrix_zero_is_the_stated_diagonal() {
        let mut expected = [[0.0; 8]; 8];
        expected[0][0] = 1.0;
        for i in 1..8 {
            expected[i][i] = -1.0;
        }
        assert_eq!(MUL_MATRICES[0].m, expected);
    }

    #[test]
    fn matrix_one_entries() {
        // Listed entries, 1-based in the source material: (1,2)=(2,1)=(3,4)=(5,6)=(8,7)=1,
        // (4,3)=(6,5)=(7,8)=-1.
        let m = &MUL_MATRICES[1].m;
        assert_eq!(m[0][1], 1.0);
        assert_eq!(m[1][0], 1.0);
        assert_eq!(m[2][3], 1.0);
        assert_eq!(m[4][5], 1.0);
        assert_eq!(m[7][6], 1.0);
        assert_eq!(m[3][2], -1.0);
        assert_eq!(m[5][4], -1.0);
        assert_eq!(m[6][7], -1.0);
    }

    #[test]
    fn mul_matrix_checks_range() {
        assert!(mul_matrix(7).is_ok());
        assert!(matches!(mul_matrix(8), Err(Error::BasisIndex(8))));
    }

    #[test]
    fn identity_and_linearity() {
        let a = Octonion::new([1.5, -2.0, 0.25, 3.0, -0.5, 7.0, -1.0, 0.125]);
        assert_eq!(Octonion::ONE * a, a);
        assert_eq!(a * Octonion::ONE, a);
        assert_eq!(a + Octonion::ZERO, a);
        assert_eq!(a + a.scale(-1.0), Octonion::ZERO);
        assert_eq!(
            (Octonion::basis(1).scale(2.0)) * (Octonion::basis(2).scale(3.0)),
            Octonion::basis(3).scale(6.0)
        );
        assert_eq!(Octonion::basis(3).scale(2.0).c[3], 2.0);
        assert_eq!(a.scale(0.0), Octonion::ZERO);
    }

    #[test]
    fn noncommutative_and_nonassociative_witnesses() {
        let e1 = Octonion::basis(1);
        let e2 = Octonion::basis(2);
        let e4 = Octonion::basis(4);
        assert_eq!(e1 * e2, Octonion::basis(3));
        assert_eq!(e2 * e1, -Octonion::basis(3));
        assert_eq!((e1 * e2) * e4, Octonion::basis(7));
        assert_eq!(e1 * (e2 * e4), -Octonion::basis(7));
    }

    #[test]
    fn table_and_matrix_forms_bit_identical_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x0c70);
        for _ in 0..10_000 {
            let a = Octonion::new(std::array::from_fn(|_| rng.random_range(-10.0..10.0)));
            let b = Octonion::new(std::array::from_fn(|_| rng.random_range(-10.0..10.0)));
            let t = a * b;
            let m = a.mul_matrix_form(&b);
            for l in 0..8 {
                assert_eq!(t.c[l].to_bits(), m.c[l].to_bits(), "component {l}");
            }
        }
    }

    #[test]
    fn norm_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x0c71);
        for _ in 0..10_000 {
            let a = Octonion::new(std::array::from_fn(|_| rng.random_range(-5.0..5.0)));
            let b = Octonion::new(std::array::from_fn(|_| rng.random_range(-5.0..5.0)));
            let lhs = (a * b).norm();
            let rhs = a.norm() * b.norm();
            assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0), "{lhs} vs {rhs}");
        }
        assert_eq!(Octonion::basis(5).norm(), 1.0);
        assert_eq!(Octonion::ZERO.norm(), 0.0);
    }

    #[test]
    fn alternativity_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x0c72);
        for _ in 0..2_000 {
            let a = Octonion::new(std::array::from_fn(|_| rng.random_range(-2.0..2.0)));
            let b = Octonion::new(std::array::from_fn(|_| rng.random_range(-2.0..2.0)));
            let left = a * (a * b) - (a * a) * b;
            let right = (b * a) * a - b * (a * a);
            assert!(left.norm() <= 1e-12 * (1.0 + a.norm() * a.norm() * b.norm()));
            assert!(right.norm() <= 1e-12 * (1.0 + a.norm() * a.norm() * b.norm()));
        }
    }

    #[test]
    fn row_contraction_matches_product_component() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x0c73);
        for _ in 0..200 {
            let a = Octonion::new(std::array::from_fn(|_| rng.random_range(-3.0..3.0)));
            let b = Octonion::new(std::array::from_fn(|_| rng.random_range(-3.0..3.0)));
            for l in 0..8 {
                let row = a.row_contraction(l);
                let dot: f64 = row.iter().zip(b.c.iter()).map(|(x, y)| x * y).sum();
                assert_eq!(dot.to_bits(), (a * b).c[l].to_bits());
            }
        }
    }

    #[test]
    fn pos_part_and_abs_vec() {
        assert_eq!(pos_part(&[-2.0, 3.0]), vec![0.0, 3.0]);
        assert_eq!(abs_vec(&[-2.0, 3.0]), vec![2.0, 3.0]);
        let v = [-1.5, 0.0, 2.5, -0.25];
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        let sum: Vec<f64> = pos_part(&v)
            .iter()
            .zip(pos_part(&neg).iter())
            .map(|(a, b)| a + b)
            .collect();
        assert_eq!(sum, abs_vec(&v));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn octonion() -> impl Strategy<Value = Octonion> {
            proptest::array::uniform8(-100.0f64..100.0).prop_map(Octonion::new)
        }

        proptest! {
            #[test]
            fn product_routes_agree(a in octonion(), b in octonion()) {
                let t = a * b;
                let m = a.mul_matrix_form(&b);
                for l in 0..8 {
                    prop_assert_eq!(t.c[l].to_bits(), m.c[l].to_bits());
                }
            }

            #[test]
            fn norm_multiplicative(a in octonion(), b in octonion()) {
                let lhs = (a * b).norm();
                let rhs = a.norm() * b.norm();
                prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
            }

            #[test]
            fn distributes_over_addition(a in octonion(), b in octonion(), c in octonion()) {
                let lhs = a * (b + c);
                let rhs = a * b + a * c;
                let scale = a.norm() * (b.norm() + c.norm());
                prop_assert!((lhs - rhs).norm() <= 1e-12 * scale.max(1.0));
            }
        }
    }
}

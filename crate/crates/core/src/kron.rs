//! The Kronecker product, its algebraic rules as executable checks, and the
//! perfect-shuffle similarity between `A ⊗ B` and `B ⊗ A`.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{shape, Error, Result};
use crate::matrix::ComplexMatrix;

/// Default absolute tolerance on Frobenius residuals.
pub const DEFAULT_TOL: f64 = 1e-10;

/// `a ⊗ b`: block `(i, j)` of the result is `a[i][j] * b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows().checked_mul(b.rows()).ok_or(Error::Sizing {
        rows: usize::MAX,
        cols: a.cols().saturating_mul(b.cols()),
    })?;
    let cols = a.cols().checked_mul(b.cols()).ok_or(Error::Sizing {
        rows,
        cols: usize::MAX,
    })?;
    let mut out = ComplexMatrix::try_zeros(rows, cols)?;
    let (br, bc) = b.shape();
    let bdata = b.as_slice();
    let dst = out.as_mut_slice();
    let mut w = 0;
    for i in 0..a.rows() {
        let arow = a.row(i);
        for k in 0..br {
            let brow = &bdata[k * bc..(k + 1) * bc];
            for &aij in arow {
                for &bkl in brow {
                    dst[w] = aij * bkl;
                    w += 1;
                }
            }
        }
    }
    Ok(out)
}

/// Left-to-right product `f[0] ⊗ f[1] ⊗ ...`.
pub fn kron_chain(factors: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| shape("kron_chain", "no factors"))?;
    rest.iter().try_fold(first.clone(), |acc, f| kron(&acc, f))
}

/// Whether a check expects its two sides to agree or to differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Equal,
    Differ,
}

/// Frobenius distance between the two sides of an identity.
///
/// `passed` holds iff `residual <= tolerance` when the sides are expected to be
/// equal, and iff `residual > tolerance` when they are expected to differ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub property_name: String,
    pub residual: f64,
    pub passed: bool,
    pub tolerance: f64,
    pub expect: Expectation,
}

impl ResidualReport {
    pub fn equal(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            property_name: name.into(),
            residual,
            passed: residual <= tolerance,
            tolerance,
            expect: Expectation::Equal,
        }
    }

    pub fn differ(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            property_name: name.into(),
            residual,
            passed: residual > tolerance,
            tolerance,
            expect: Expectation::Differ,
        }
    }
}

impl fmt::Display for ResidualReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<40} residual {:>11.3e}  tol {:.1e}  {}",
            self.property_name,
            self.residual,
            self.tolerance,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

/// The eight rules of the Kronecker product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KronProperty {
    /// `A ⊗ 0 = 0 ⊗ B = 0`
    ZeroFactor,
    /// `E ⊗ E = E`
    IdentityFactors,
    /// `(A1 + A2) ⊗ B = A1 ⊗ B + A2 ⊗ B`
    LeftDistributive,
    /// `A ⊗ (B1 + B2) = A ⊗ B1 + A ⊗ B2`
    RightDistributive,
    /// `sA ⊗ tB = st (A ⊗ B)`
    ScalarFactor,
    /// `(A ⊗ B)^-1 = A^-1 ⊗ B^-1`
    InverseOfProduct,
    /// `(A1 B1) ⊗ (A2 B2) = (A1 ⊗ A2)(B1 ⊗ B2)`
    MixedProduct,
    /// `A ⊗ B != B ⊗ A`
    NonCommutative,
}

impl KronProperty {
    pub const ALL: [KronProperty; 8] = [
        KronProperty::ZeroFactor,
        KronProperty::IdentityFactors,
        KronProperty::LeftDistributive,
        KronProperty::RightDistributive,
        KronProperty::ScalarFactor,
        KronProperty::InverseOfProduct,
        KronProperty::MixedProduct,
        KronProperty::NonCommutative,
    ];

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&p| p == self).unwrap() + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            KronProperty::ZeroFactor => "zero factor",
            KronProperty::IdentityFactors => "identity factors",
            KronProperty::LeftDistributive => "left distributivity",
            KronProperty::RightDistributive => "right distributivity",
            KronProperty::ScalarFactor => "scalar factor",
            KronProperty::InverseOfProduct => "inverse of product",
            KronProperty::MixedProduct => "mixed product",
            KronProperty::NonCommutative => "non-commutativity",
        }
    }

    fn operand_count(self) -> usize {
        match self {
            KronProperty::LeftDistributive | KronProperty::RightDistributive => 3,
            KronProperty::MixedProduct => 4,
            _ => 2,
        }
    }
}

impl TryFrom<usize> for KronProperty {
    type Error = Error;

    fn try_from(index: usize) -> Result<Self> {
        index
            .checked_sub(1)
            .and_then(|k| Self::ALL.get(k).copied())
            .ok_or(Error::UnknownProperty(index))
    }
}

/// Outcome of [`check_property`]: the headline report, extra labelled
/// diagnostics, and for non-commutativity the first differing entry.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyCheck {
    pub property: KronProperty,
    pub report: ResidualReport,
    pub diagnostics: Vec<ResidualReport>,
    pub witness: Option<(usize, usize)>,
}

/// Evaluates both sides of a Kronecker rule and reports their distance.
///
/// Operands by property:
/// 1, 2, 6, 8: `[A, B]`; 3: `[A1, A2, B]`; 4: `[A, B1, B2]`;
/// 5: `[A, B]` with `scalars = [s, t]`; 7: `[A1, B1, A2, B2]`.
///
/// For the inverse rule the headline is `(A ⊗ B)^-1 = A^-1 ⊗ B^-1`. The
/// swapped-order form `B^-1 ⊗ A^-1` is reported as a diagnostic, together with
/// its agreement with the inverse after conjugation by the commutation matrix.
pub fn check_property(
    property: KronProperty,
    operands: &[ComplexMatrix],
    scalars: &[f64],
    tol: f64,
) -> Result<PropertyCheck> {
    let want = property.operand_count();
    if operands.len() != want {
        return Err(shape(
            "check_property",
            format!(
                "property {} takes {want} operands, got {}",
                property.index(),
                operands.len()
            ),
        ));
    }
    let label = |suffix: &str| format!("{}. {}{}", property.index(), property.name(), suffix);
    let mut diagnostics = Vec::new();
    let mut witness = None;

    let residual = match property {
        KronProperty::ZeroFactor => {
            let (a, b) = (&operands[0], &operands[1]);
            let left = kron(a, &ComplexMatrix::try_zeros(b.rows(), b.cols())?)?;
            let right = kron(&ComplexMatrix::try_zeros(a.rows(), a.cols())?, b)?;
            left.frobenius_norm() + right.frobenius_norm()
        }
        KronProperty::IdentityFactors => {
            let (a, b) = (&operands[0], &operands[1]);
            let k = kron(a, b)?;
            if !k.is_square() {
                return Err(shape("check_property", "identity factors must be square"));
            }
            k.distance(&ComplexMatrix::identity(k.rows()))?
        }
        KronProperty::LeftDistributive => {
            let (a1, a2, b) = (&operands[0], &operands[1], &operands[2]);
            let lhs = kron(&a1.add(a2)?, b)?;
            let rhs = kron(a1, b)?.add(&kron(a2, b)?)?;
            lhs.distance(&rhs)?
        }
        KronProperty::RightDistributive => {
            let (a, b1, b2) = (&operands[0], &operands[1], &operands[2]);
            let lhs = kron(a, &b1.add(b2)?)?;
            let rhs = kron(a, b1)?.add(&kron(a, b2)?)?;
            lhs.distance(&rhs)?
        }
        KronProperty::ScalarFactor => {
            let [s, t] = scalars else {
                return Err(shape(
                    "check_property",
                    "scalar factor needs scalars [s, t]",
                ));
            };
            let (a, b) = (&operands[0], &operands[1]);
            let lhs = kron(&a.scale_real(*s), &b.scale_real(*t))?;
            let rhs = kron(a, b)?.scale_real(s * t);
            lhs.distance(&rhs)?
        }
        KronProperty::InverseOfProduct => {
            let (a, b) = (&operands[0], &operands[1]);
            if !a.is_square() || !b.is_square() {
                return Err(shape(
                    "check_property",
                    "inverse rule needs square operands",
                ));
            }
            let inv = kron(a, b)?.inverse()?;
            let a_inv = a.inverse()?;
            let b_inv = b.inverse()?;
            let literal = kron(&b_inv, &a_inv)?;
            diagnostics.push(ResidualReport::equal(
                label(" (swapped order B^-1 ⊗ A^-1)"),
                inv.distance(&literal)?,
                tol,
            ));
            let shuffled = swap_kron_factors(&inv, a.shape(), b.shape())?;
            diagnostics.push(ResidualReport::equal(
                label(" (swapped order vs P (A⊗B)^-1 P^T)"),
                shuffled.distance(&literal)?,
                tol,
            ));
            inv.distance(&kron(&a_inv, &b_inv)?)?
        }
        KronProperty::MixedProduct => {
            let (a1, b1, a2, b2) = (&operands[0], &operands[1], &operands[2], &operands[3]);
            let lhs = kron(&a1.matmul(b1)?, &a2.matmul(b2)?)?;
            let rhs = kron(a1, a2)?.matmul(&kron(b1, b2)?)?;
            lhs.distance(&rhs)?
        }
        KronProperty::NonCommutative => {
            let (a, b) = (&operands[0], &operands[1]);
            let ab = kron(a, b)?;
            let ba = kron(b, a)?;
            witness = first_difference(&ab, &ba, tol);
            ab.distance(&ba)?
        }
    };

    let report = if property == KronProperty::NonCommutative {
        ResidualReport::differ(label(""), residual, tol)
    } else {
        ResidualReport::equal(label(""), residual, tol)
    };
    Ok(PropertyCheck {
        property,
        report,
        diagnostics,
        witness,
    })
}

fn first_difference(x: &ComplexMatrix, y: &ComplexMatrix, tol: f64) -> Option<(usize, usize)> {
    x.as_slice()
        .iter()
        .zip(y.as_slice())
        .position(|(p, q)| (p - q).norm() > tol)
        .map(|k| (k / x.cols(), k % x.cols()))
}

/// First row-major `(row, col)` where `A ⊗ B` and `B ⊗ A` differ by more than
/// `tol`, or `None` if the two products agree. Entries are compared on the fly
/// without materializing either product.
pub fn noncommutativity_witness(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: f64,
) -> Result<Option<(usize, usize)>> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(shape(
            "noncommutativity_witness",
            format!(
                "{:?} and {:?} must be equal square shapes",
                a.shape(),
                b.shape()
            ),
        ));
    }
    let n = a.rows();
    let dim = n.checked_mul(n).ok_or(Error::Sizing { rows: n, cols: n })?;
    for r in 0..dim {
        let (ri, rk) = (r / n, r % n);
        for c in 0..dim {
            let (cj, cl) = (c / n, c % n);
            let ab = a.get(ri, cj) * b.get(rk, cl);
            let ba = b.get(ri, cj) * a.get(rk, cl);
            if (ab - ba).norm() > tol {
                return Ok(Some((r, c)));
            }
        }
    }
    Ok(None)
}

/// Index form of the commutation matrix: `perm[i * n + j] = j * m + i`.
pub fn commutation_permutation(m: usize, n: usize) -> Vec<usize> {
    let mut perm = vec![0; m * n];
    for i in 0..m {
        for j in 0..n {
            perm[i * n + j] = j * m + i;
        }
    }
    perm
}

/// The `mn x mn` perfect-shuffle permutation `P` with
/// `B ⊗ A = P (A ⊗ B) P^T` for every `m x m` matrix `A` and `n x n` matrix `B`.
///
/// # Panics
/// If `m` or `n` is zero.
pub fn commutation_matrix(m: usize, n: usize) -> ComplexMatrix {
    assert!(m > 0 && n > 0, "commutation matrix needs positive sizes");
    let mut p = ComplexMatrix::zeros(m * n, m * n);
    for (src, dst) in commutation_permutation(m, n).into_iter().enumerate() {
        p.set(dst, src, Complex64::new(1.0, 0.0));
    }
    p
}

/// Given `product = A ⊗ B` with `A: a_shape`, `B: b_shape`, returns `B ⊗ A` by
/// permuting entries (`P_rows · product · P_cols^T`). No arithmetic is done,
/// so the result is bit-for-bit a rearrangement of the input.
pub fn swap_kron_factors(
    product: &ComplexMatrix,
    a_shape: (usize, usize),
    b_shape: (usize, usize),
) -> Result<ComplexMatrix> {
    let ((m1, n1), (m2, n2)) = (a_shape, b_shape);
    if product.shape() != (m1 * m2, n1 * n2) {
        return Err(shape(
            "swap_kron_factors",
            format!(
                "{:?} is not the product of {:?} and {:?}",
                product.shape(),
                a_shape,
                b_shape
            ),
        ));
    }
    let row_perm = commutation_permutation(m1, m2);
    let col_perm = commutation_permutation(n1, n2);
    let cols = product.cols();
    let mut out = vec![Complex64::new(0.0, 0.0); product.as_slice().len()];
    for (r, &pr) in row_perm.iter().enumerate() {
        for (c, &pc) in col_perm.iter().enumerate() {
            out[pr * cols + pc] = product.get(r, c);
        }
    }
    Ok(ComplexMatrix::from_parts(product.rows(), cols, out))
}

/// `C^-1 · A · C`: the matrix of `A` in the basis given by the columns of `C`.
pub fn similarity_transform(c: &ComplexMatrix, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !c.is_square() || c.shape() != a.shape() {
        return Err(shape(
            "similarity_transform",
            format!(
                "{:?} and {:?} must be equal square shapes",
                c.shape(),
                a.shape()
            ),
        ));
    }
    c.inverse()?.matmul(a)?.matmul(c)
}

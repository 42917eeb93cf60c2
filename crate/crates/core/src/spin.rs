//! Pauli operators, site lifting and total-spin observables for spin-1/2 chains.
//!
//! Site `k` of `n` occupies the `k`-th Kronecker slot from the left, so in the
//! product basis site 1 is the most significant bit of a state index.
//! Spin-1/2 operators carry the 1/2 prefactor; `pauli` itself does not (ħ = 1).

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{shape, Error, Result};
use crate::kron::kron;
use crate::linalg::commutator;
use crate::matrix::ComplexMatrix;

/// Largest site count for which dense `2^n x 2^n` operators are built.
pub const DENSE_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    /// Row-major entries of the Pauli matrix.
    pub fn entries(self) -> [Complex64; 4] {
        let o = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            PauliAxis::X => [o, one, one, o],
            PauliAxis::Y => [o, -i, i, o],
            PauliAxis::Z => [one, o, o, -one],
        }
    }
}

impl fmt::Display for PauliAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PauliAxis::X => "x",
            PauliAxis::Y => "y",
            PauliAxis::Z => "z",
        })
    }
}

/// A 1-based site position within an `n`-site register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SiteIndex {
    index: usize,
    n: usize,
}

impl SiteIndex {
    pub fn new(index: usize, n: usize) -> Result<Self> {
        if index == 0 || index > n {
            return Err(Error::Range { index, n });
        }
        Ok(Self { index, n })
    }

    pub fn index(self) -> usize {
        self.index
    }

    pub fn n_sites(self) -> usize {
        self.n
    }

    /// Bit position of this site in a state index (site 1 is the top bit).
    pub fn bit(self) -> usize {
        self.n - self.index
    }
}

/// Standard Pauli matrix: `σx = [[0,1],[1,0]]`, `σy = [[0,-i],[i,0]]`,
/// `σz = [[1,0],[0,-1]]`.
pub fn pauli(axis: PauliAxis) -> ComplexMatrix {
    ComplexMatrix::from_parts(2, 2, axis.entries().to_vec())
}

pub(crate) fn check_capacity(n: usize) -> Result<()> {
    if n > DENSE_CAP {
        return Err(Error::Capacity { n, cap: DENSE_CAP });
    }
    Ok(())
}

fn check_local(local: &ComplexMatrix) -> Result<()> {
    if local.shape() != (2, 2) {
        return Err(shape(
            "lift",
            format!("site operator must be 2x2, got {:?}", local.shape()),
        ));
    }
    Ok(())
}

/// `E ⊗ ... ⊗ local ⊗ ... ⊗ E` with `local` in the slot of `site`.
pub fn lift(local: &ComplexMatrix, site: SiteIndex) -> Result<ComplexMatrix> {
    check_local(local)?;
    let n = site.n_sites();
    check_capacity(n)?;
    let left = 1usize << (site.index() - 1);
    let right = 1usize << (n - site.index());
    let mut out = local.clone();
    if left > 1 {
        out = kron(&ComplexMatrix::identity(left), &out)?;
    }
    if right > 1 {
        out = kron(&out, &ComplexMatrix::identity(right))?;
    }
    Ok(out)
}

/// Kronecker chain with `a` at site `i`, `b` at site `j` (`i != j`) and
/// identities elsewhere. Equal to `lift(a, i) · lift(b, j)` by the mixed-product
/// rule, without the dense multiplication.
pub fn lift_pair(
    a: &ComplexMatrix,
    i: SiteIndex,
    b: &ComplexMatrix,
    j: SiteIndex,
) -> Result<ComplexMatrix> {
    check_local(a)?;
    check_local(b)?;
    if i.n_sites() != j.n_sites() {
        return Err(shape(
            "lift_pair",
            "sites belong to registers of different size",
        ));
    }
    if i == j {
        return Err(shape("lift_pair", "sites must be distinct"));
    }
    let n = i.n_sites();
    check_capacity(n)?;
    let ((lo, lo_op), (hi, hi_op)) = if i.index() < j.index() {
        ((i.index(), a), (j.index(), b))
    } else {
        ((j.index(), b), (i.index(), a))
    };
    let mut out = if lo > 1 {
        kron(&ComplexMatrix::identity(1 << (lo - 1)), lo_op)?
    } else {
        lo_op.clone()
    };
    let gap = hi - lo - 1;
    if gap > 0 {
        out = kron(&out, &ComplexMatrix::identity(1 << gap))?;
    }
    out = kron(&out, hi_op)?;
    if hi < n {
        out = kron(&out, &ComplexMatrix::identity(1 << (n - hi)))?;
    }
    Ok(out)
}

/// Total spin component `S_α = (1/2) Σ_k σ_α^(k)`.
pub fn total_component(axis: PauliAxis, n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::Range { index: 0, n });
    }
    check_capacity(n)?;
    let sigma = pauli(axis);
    let dim = 1usize << n;
    let mut total = ComplexMatrix::try_zeros(dim, dim)?;
    for k in 1..=n {
        total.add_scaled(
            Complex64::new(0.5, 0.0),
            &lift(&sigma, SiteIndex::new(k, n)?)?,
        )?;
    }
    Ok(total)
}

/// `S² = S_x² + S_y² + S_z²`.
pub fn total_spin_squared(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::Range { index: 0, n });
    }
    check_capacity(n)?;
    let dim = 1usize << n;
    let mut s2 = ComplexMatrix::try_zeros(dim, dim)?;
    for axis in PauliAxis::ALL {
        let s = total_component(axis, n)?;
        s2.add_scaled(Complex64::new(1.0, 0.0), &s.matmul(&s)?)?;
    }
    Ok(s2)
}

/// `||[h, q]||_F`; zero when `q` is a constant of motion of `h`.
pub fn conserved_residual(h: &ComplexMatrix, q: &ComplexMatrix) -> Result<f64> {
    Ok(commutator(h, q)?.frobenius_norm())
}

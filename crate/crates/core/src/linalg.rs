//! Dense complex arithmetic and a Hermitian eigensolver.
//!
//! `eigh` runs cyclic complex Jacobi sweeps. Before sweeping, the matrix is
//! split into the connected components of its exact-nonzero pattern; each
//! component is an invariant subspace, so the blocks are diagonalized on their
//! own. Spin Hamiltonians that conserve total `S_z` fall apart into small
//! magnetization sectors this way.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{shape, Error, Result};
use crate::matrix::ComplexMatrix;

/// Pivot magnitude below which a matrix is treated as singular.
pub const SINGULAR_PIVOT: f64 = 1e-12;
/// Relative Hermiticity tolerance accepted by [`eigh`].
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Jacobi stops once the off-diagonal mass falls below this fraction of `||A||_F`.
pub const JACOBI_OFF_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl ComplexMatrix {
    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols() != other.rows() {
            return Err(shape(
                "matmul",
                format!("{:?} x {:?}", self.shape(), other.shape()),
            ));
        }
        let (n, m, p) = (self.rows(), self.cols(), other.cols());
        let mut out = ComplexMatrix::try_zeros(n, p)?;
        let a = self.as_slice();
        let b = other.as_slice();
        let c = out.as_mut_slice();
        for i in 0..n {
            let crow = &mut c[i * p..(i + 1) * p];
            for k in 0..m {
                let aik = a[i * m + k];
                if aik == ZERO {
                    continue;
                }
                let brow = &b[k * p..(k + 1) * p];
                for (cij, bkj) in crow.iter_mut().zip(brow) {
                    *cij += aik * bkj;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with("add", other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with("sub", other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        op: &'static str,
        other: &ComplexMatrix,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<ComplexMatrix> {
        if self.shape() != other.shape() {
            return Err(shape(
                op,
                format!("{:?} vs {:?}", self.shape(), other.shape()),
            ));
        }
        let data = self
            .as_slice()
            .iter()
            .zip(other.as_slice())
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(ComplexMatrix::from_parts(self.rows(), self.cols(), data))
    }

    /// In-place `self += s * other`.
    pub fn add_scaled(&mut self, s: Complex64, other: &ComplexMatrix) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(shape(
                "add_scaled",
                format!("{:?} vs {:?}", self.shape(), other.shape()),
            ));
        }
        for (a, &b) in self.as_mut_slice().iter_mut().zip(other.as_slice()) {
            *a += s * b;
        }
        Ok(())
    }

    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        let data = self.as_slice().iter().map(|&z| s * z).collect();
        ComplexMatrix::from_parts(self.rows(), self.cols(), data)
    }

    pub fn scale_real(&self, s: f64) -> ComplexMatrix {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let (r, c) = self.shape();
        let mut data = Vec::with_capacity(r * c);
        for j in 0..c {
            for i in 0..r {
                data.push(self.get(i, j).conj());
            }
        }
        ComplexMatrix::from_parts(c, r, data)
    }

    pub fn transpose(&self) -> ComplexMatrix {
        let (r, c) = self.shape();
        let mut data = Vec::with_capacity(r * c);
        for j in 0..c {
            for i in 0..r {
                data.push(self.get(i, j));
            }
        }
        ComplexMatrix::from_parts(c, r, data)
    }

    /// `||A - A^H||_F`; infinite for non-square input.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.get(i, j) - self.get(j, i).conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.is_square() && self.hermitian_defect() <= rel_tol * self.frobenius_norm()
    }

    /// Gauss-Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<ComplexMatrix> {
        if !self.is_square() {
            return Err(shape(
                "inverse",
                format!("{:?} is not square", self.shape()),
            ));
        }
        let n = self.rows();
        let mut a = self.as_slice().to_vec();
        let mut inv = ComplexMatrix::identity(n).into_vec();
        for col in 0..n {
            let (piv, mag) =
                (col..n)
                    .map(|r| (r, a[r * n + col].norm()))
                    .fold(
                        (col, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if mag < SINGULAR_PIVOT {
                return Err(Error::Singular {
                    pivot: mag,
                    threshold: SINGULAR_PIVOT,
                });
            }
            if piv != col {
                for k in 0..n {
                    a.swap(piv * n + k, col * n + k);
                    inv.swap(piv * n + k, col * n + k);
                }
            }
            let p = a[col * n + col].inv();
            for k in 0..n {
                a[col * n + k] *= p;
                inv[col * n + k] *= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f == ZERO {
                    continue;
                }
                for k in 0..n {
                    let (ak, ik) = (a[col * n + k], inv[col * n + k]);
                    a[r * n + k] -= f * ak;
                    inv[r * n + k] -= f * ik;
                }
            }
        }
        ComplexMatrix::new(n, n, inv)
    }
}

/// Commutator `ab - ba` of two square matrices of equal size.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(shape(
            "commutator",
            format!(
                "{:?} and {:?} must be equal square shapes",
                a.shape(),
                b.shape()
            ),
        ));
    }
    a.matmul(b)?.sub(&b.matmul(a)?)
}

/// Real eigenvalues in ascending order, optionally with eigenvectors.
///
/// Column `k` of `eigenvectors` pairs with `eigenvalues[k]`. For partial
/// spectra (Lanczos) `eigenvalues.len()` may be smaller than `dimension`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    #[serde(skip)]
    pub eigenvectors: Option<ComplexMatrix>,
    pub dimension: usize,
}

impl Spectrum {
    pub fn is_complete(&self) -> bool {
        self.eigenvalues.len() == self.dimension
    }

    /// Groups sorted eigenvalues that lie within `tol` of the first member of
    /// their group; returns `(representative, multiplicity)`.
    pub fn multiplicities(&self, tol: f64) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &x in &self.eigenvalues {
            match out.last_mut() {
                Some((rep, count)) if (x - *rep).abs() <= tol => *count += 1,
                _ => out.push((x, 1)),
            }
        }
        out
    }

    pub fn lowest(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }
}

/// True iff both spectra have the same dimension and their sorted
/// eigenvalues agree pairwise within `tol`.
pub fn spectrum_multiset_equal(s1: &Spectrum, s2: &Spectrum, tol: f64) -> bool {
    s1.dimension == s2.dimension
        && s1.eigenvalues.len() == s2.eigenvalues.len()
        && s1
            .eigenvalues
            .iter()
            .zip(&s2.eigenvalues)
            .all(|(a, b)| (a - b).abs() <= tol)
}

/// Hermitian eigendecomposition.
///
/// Eigenvalues come back ascending. Each eigenvector is phase-fixed so that its
/// first component of largest modulus is real and nonnegative; eigenvalues tied
/// to within `1e-10 * max(1, ||A||_F)` are ordered by that component's index.
pub fn eigh(a: &ComplexMatrix, want_vectors: bool) -> Result<Spectrum> {
    if !a.is_square() {
        return Err(shape("eigh", format!("{:?} is not square", a.shape())));
    }
    let norm = a.frobenius_norm();
    let defect = a.hermitian_defect();
    if defect > HERMITIAN_TOL * norm {
        return Err(Error::NotHermitian {
            defect,
            allowed: HERMITIAN_TOL * norm,
        });
    }
    let n = a.rows();
    let off_target = JACOBI_OFF_TOL * norm;

    let mut pairs: Vec<(f64, Option<Vec<Complex64>>)> = Vec::with_capacity(n);
    for block in nonzero_blocks(a) {
        let sub = extract_block(a, &block);
        let (values, vectors) = jacobi_block(sub, block.len(), want_vectors, off_target)?;
        for (k, &lambda) in values.iter().enumerate() {
            let vec = vectors.as_ref().map(|v| {
                let mut full = vec![ZERO; n];
                for (local, &global) in block.iter().enumerate() {
                    full[global] = v[local * block.len() + k];
                }
                full
            });
            pairs.push((lambda, vec));
        }
    }

    if !want_vectors {
        let mut values: Vec<f64> = pairs.into_iter().map(|(l, _)| l).collect();
        values.sort_by(f64::total_cmp);
        return Ok(Spectrum {
            eigenvalues: values,
            eigenvectors: None,
            dimension: n,
        });
    }

    let mut keyed: Vec<(f64, usize, Vec<Complex64>)> = pairs
        .into_iter()
        .map(|(l, v)| {
            let mut v = v.expect("vectors requested");
            let pivot = fix_phase(&mut v);
            (l, pivot, v)
        })
        .collect();
    keyed.sort_by(|x, y| x.0.total_cmp(&y.0));
    let tie = 1e-10 * norm.max(1.0);
    let mut start = 0;
    while start < keyed.len() {
        let mut end = start + 1;
        while end < keyed.len() && keyed[end].0 - keyed[start].0 <= tie {
            end += 1;
        }
        keyed[start..end].sort_by_key(|k| k.1);
        start = end;
    }

    let mut vecs = ComplexMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (col, (l, _, v)) in keyed.into_iter().enumerate() {
        values.push(l);
        for (row, z) in v.into_iter().enumerate() {
            vecs.set(row, col, z);
        }
    }
    Ok(Spectrum {
        eigenvalues: values,
        eigenvectors: Some(vecs),
        dimension: n,
    })
}

/// Rotates `v` so its first largest-modulus component is real and nonnegative;
/// returns that component's index.
fn fix_phase(v: &mut [Complex64]) -> usize {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-10))
        .unwrap_or(0);
    let p = v[pivot];
    if p.norm() > 0.0 {
        let phase = p.conj() / p.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
        v[pivot] = Complex64::new(v[pivot].re.max(0.0), 0.0);
    }
    pivot
}

/// Connected components of the graph with an edge wherever `a[i][j] != 0`,
/// each sorted ascending, ordered by their smallest index.
fn nonzero_blocks(a: &ComplexMatrix) -> Vec<Vec<usize>> {
    let n = a.rows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if a.get(i, j) != ZERO || a.get(j, i) != ZERO {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[r]].push(i);
    }
    blocks
}

/// Hermitian part of the principal submatrix on `idx`, row-major.
fn extract_block(a: &ComplexMatrix, idx: &[usize]) -> Vec<Complex64> {
    let m = idx.len();
    let mut out = vec![ZERO; m * m];
    for (r, &i) in idx.iter().enumerate() {
        for (c, &j) in idx.iter().enumerate() {
            out[r * m + c] = 0.5 * (a.get(i, j) + a.get(j, i).conj());
        }
    }
    out
}

/// Cyclic complex Jacobi on a dense Hermitian block. Returns the unsorted
/// diagonal and, if requested, the row-major accumulated rotation matrix.
fn jacobi_block(
    mut a: Vec<Complex64>,
    m: usize,
    want_vectors: bool,
    off_target: f64,
) -> Result<(Vec<f64>, Option<Vec<Complex64>>)> {
    let mut v = want_vectors.then(|| {
        let mut v = vec![ZERO; m * m];
        for i in 0..m {
            v[i * m + i] = Complex64::new(1.0, 0.0);
        }
        v
    });
    let off_norm = |a: &[Complex64]| {
        let mut s = 0.0;
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    s += a[i * m + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&a) > off_target {
        if sweeps == JACOBI_MAX_SWEEPS {
            let mut est: Vec<f64> = (0..m).map(|i| a[i * m + i].re).collect();
            est.sort_by(f64::total_cmp);
            return Err(Error::Convergence {
                iterations: sweeps,
                estimates: est,
            });
        }
        sweeps += 1;
        for p in 0..m {
            for q in (p + 1)..m {
                let apq = a[p * m + q];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                let app = a[p * m + p].re;
                let aqq = a[q * m + q].re;
                let theta = (aqq - app) / (2.0 * g);
                let t = if theta.is_infinite() {
                    0.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // e = exp(-i arg a_pq); U = [[c, s], [-s e, c e]] on (p, q).
                let e = apq.conj() / g;
                let se = s * e;
                let ce = c * e;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - se * akq;
                    a[k * m + q] = s * akp + ce * akq;
                }
                let (sec, cec) = (se.conj(), ce.conj());
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - sec * aqk;
                    a[q * m + k] = s * apk + cec * aqk;
                }
                a[p * m + q] = ZERO;
                a[q * m + p] = ZERO;
                a[p * m + p] = Complex64::new(app - t * g, 0.0);
                a[q * m + q] = Complex64::new(aqq + t * g, 0.0);
                if let Some(v) = v.as_mut() {
                    for k in 0..m {
                        let vkp = v[k * m + p];
                        let vkq = v[k * m + q];
                        v[k * m + p] = c * vkp - se * vkq;
                        v[k * m + q] = s * vkp + ce * vkq;
                    }
                }
            }
        }
    }
    let values = (0..m).map(|i| a[i * m + i].re).collect();
    Ok((values, v))
}

/// Eigenpairs of a real symmetric tridiagonal matrix by implicit QL.
///
/// `diag` has length `n`, `off` length `n - 1` (`off[i]` couples `i` and `i+1`).
/// Returns ascending eigenvalues and, for each, its eigenvector.
pub fn tridiagonal_eigh(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = diag.len();
    if n == 0 || off.len() + 1 != n {
        return Err(shape(
            "tridiagonal_eigh",
            format!("diag {} / off {}", n, off.len()),
        ));
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    // z[k][i]: component k of eigenvector i
    let mut z = vec![vec![0.0; n]; n];
    for (i, row) in z.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    let mut est = d.clone();
                    est.sort_by(f64::total_cmp);
                    return Err(Error::Convergence {
                        iterations: iter,
                        estimates: est,
                    });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let (mut c, mut c2, mut c3) = (1.0, 1.0, 1.0);
                let el1 = e[l + 1];
                let (mut s, mut s2) = (0.0, 0.0);
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for row in z.iter_mut() {
                        let zh = row[i + 1];
                        row[i + 1] = s * row[i] + c * zh;
                        row[i] = c * row[i] - s * zh;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| z.iter().map(|row| row[i]).collect())
        .collect();
    Ok((values, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    fn sigma_x() -> ComplexMatrix {
        real(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    fn sigma_y() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[&[c(0.0, 0.0), c(0.0, -1.0)], &[c(0.0, 1.0), c(0.0, 0.0)]])
            .unwrap()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, cols: usize) -> ComplexMatrix {
        let data = (0..r * cols)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        ComplexMatrix::new(r, cols, data).unwrap()
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
        let m = random_matrix(rng, n, n);
        m.add(&m.adjoint()).unwrap().scale_real(0.5)
    }

    #[test]
    fn matmul_examples() {
        let a = real(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(ComplexMatrix::identity(2).matmul(&a).unwrap(), a);
        assert_eq!(
            a.matmul(&sigma_x()).unwrap(),
            real(&[&[2.0, 1.0], &[4.0, 3.0]])
        );
        assert_eq!(
            sigma_x().matmul(&sigma_x()).unwrap(),
            ComplexMatrix::identity(2)
        );
        assert!(matches!(
            a.matmul(&ComplexMatrix::identity(3)),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn elementwise_examples() {
        let a = real(&[&[1.0, -2.0], &[0.5, 4.0]]);
        assert_eq!(a.add(&ComplexMatrix::zeros(2, 2)).unwrap(), a);
        assert_eq!(
            ComplexMatrix::identity(2).scale_real(2.0),
            real(&[&[2.0, 0.0], &[0.0, 2.0]])
        );
        assert_eq!(sigma_y().adjoint(), sigma_y());
        assert!(a.add(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn inverse_examples() {
        let i3 = ComplexMatrix::identity(3);
        assert_eq!(i3.inverse().unwrap(), i3);
        let d = real(&[&[2.0, 0.0], &[0.0, 4.0]]);
        assert_eq!(d.inverse().unwrap(), real(&[&[0.5, 0.0], &[0.0, 0.25]]));
        assert!(matches!(
            real(&[&[1.0, 2.0], &[2.0, 4.0]]).inverse(),
            Err(Error::Singular { .. })
        ));

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 5, 5)
                .add(&ComplexMatrix::identity(5).scale_real(3.0))
                .unwrap();
            let back = a.inverse().unwrap().matmul(&a).unwrap();
            assert!(back.distance(&ComplexMatrix::identity(5)).unwrap() < 1e-10);
            let twice = a.inverse().unwrap().inverse().unwrap();
            assert!(twice.distance(&a).unwrap() < 1e-8);
        }
    }

    #[test]
    fn eigh_examples() {
        let s = eigh(&ComplexMatrix::identity(4), false).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0; 4]);
        let z = real(&[&[1.0, 0.0], &[0.0, -1.0]]);
        assert_eq!(eigh(&z, false).unwrap().eigenvalues, vec![-1.0, 1.0]);

        // sx.sx + sy.sy + sz.sz in the product basis, written out by hand.
        let heis = real(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, -1.0, 2.0, 0.0],
            &[0.0, 2.0, -1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]);
        let s = eigh(&heis, true).unwrap();
        for (got, want) in s.eigenvalues.iter().zip([-3.0, 1.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let v = s.eigenvectors.unwrap();
        // Singlet (0, 1, -1, 0)/sqrt2, phase fixed at index 1.
        assert!((v.get(1, 0) - c(0.5f64.sqrt(), 0.0)).norm() < 1e-12);
        assert!((v.get(2, 0) + c(0.5f64.sqrt(), 0.0)).norm() < 1e-12);
        // Degenerate triplet ordered by pivot index: |00>, then (|01>+|10>), then |11>.
        assert!((v.get(0, 1).re - 1.0).abs() < 1e-12);
        assert!((v.get(1, 2).re - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((v.get(3, 3).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let a = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(eigh(&a, false), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eigh_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1, 2, 3, 7, 16] {
            let a = random_hermitian(&mut rng, n);
            let s = eigh(&a, true).unwrap();
            assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            let v = s.eigenvectors.as_ref().unwrap();
            let vh = v.adjoint();
            assert!(
                vh.matmul(v)
                    .unwrap()
                    .distance(&ComplexMatrix::identity(n))
                    .unwrap()
                    < 1e-8
            );
            let lambda: Vec<Complex64> = s.eigenvalues.iter().map(|&x| c(x, 0.0)).collect();
            let recon = v
                .matmul(&ComplexMatrix::from_diagonal(&lambda).unwrap())
                .unwrap()
                .matmul(&vh)
                .unwrap();
            assert!(recon.distance(&a).unwrap() <= 1e-8 * a.frobenius_norm());
            for k in 0..n {
                let col = v.column(k);
                let pivot = col
                    .iter()
                    .position(|z| {
                        z.norm() >= col.iter().map(|z| z.norm()).fold(0.0, f64::max) * (1.0 - 1e-10)
                    })
                    .unwrap();
                assert!(col[pivot].im.abs() < 1e-12 && col[pivot].re >= 0.0);
            }
        }
    }

    #[test]
    fn spectrum_comparison() {
        let a = eigh(&sigma_x(), false).unwrap();
        assert!(spectrum_multiset_equal(&a, &a, 0.0));
        let b = eigh(&ComplexMatrix::identity(4), false).unwrap();
        assert!(!spectrum_multiset_equal(&a, &b, 1.0));
    }

    #[test]
    fn tridiagonal_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 9;
        let d: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let e: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut dense = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            dense.set(i, i, c(d[i], 0.0));
            if i + 1 < n {
                dense.set(i, i + 1, c(e[i], 0.0));
                dense.set(i + 1, i, c(e[i], 0.0));
            }
        }
        let (vals, vecs) = tridiagonal_eigh(&d, &e).unwrap();
        let want = eigh(&dense, false).unwrap().eigenvalues;
        for (a, b) in vals.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12);
        }
        for (lambda, v) in vals.iter().zip(&vecs) {
            for i in 0..n {
                let mut av = d[i] * v[i];
                if i > 0 {
                    av += e[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    av += e[i] * v[i + 1];
                }
                assert!((av - lambda * v[i]).abs() < 1e-12);
            }
        }
        let (one, _) = tridiagonal_eigh(&[2.5], &[]).unwrap();
        assert_eq!(one, vec![2.5]);
    }
}

//! Matrix-free Kronecker-structured operators.
//!
//! A [`KronSum`] is `Σ_t c_t F_t1 ⊗ F_t2 ⊗ ... ⊗ F_tn` with each `F` either the
//! identity or a 2x2 matrix. Applying it to a state never forms the `2^n x 2^n`
//! matrix: a non-identity factor on site `k` acts on the amplitude pairs that
//! differ only in bit `n - k` of the index (site 1 is the most significant bit).
//!
//! Work is split across the rayon pool once a state has at least
//! `PARALLEL_MIN_LEN` amplitudes. Every output amplitude is computed by the same
//! sequence of operations regardless of the split, so results are bitwise
//! identical for any worker count.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{shape, Error, Result};
use crate::hamiltonian::HamiltonianSpec;
use crate::kron::kron;
use crate::linalg::{tridiagonal_eigh, Spectrum};
use crate::matrix::ComplexMatrix;
use crate::spin::{check_capacity, PauliAxis};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const PARALLEL_MIN_LEN: usize = 1 << 14;
const CHUNK: usize = 1 << 12;

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "KRONSPIN_THREADS";

/// Sizes the global rayon pool from `KRONSPIN_THREADS` (default: machine
/// parallelism). Returns the worker count in effect. Only the first call in a
/// process can change the pool.
pub fn configure_threads_from_env() -> usize {
    let requested = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0);
    if let Some(n) = requested {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    rayon::current_num_threads()
}

/// One Kronecker slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Factor {
    Identity,
    /// Row-major 2x2 entries.
    Local([Complex64; 4]),
}

impl Factor {
    pub fn local(m: &ComplexMatrix) -> Result<Self> {
        if m.shape() != (2, 2) {
            return Err(shape(
                "Factor::local",
                format!("site operator must be 2x2, got {:?}", m.shape()),
            ));
        }
        let s = m.as_slice();
        Ok(Factor::Local([s[0], s[1], s[2], s[3]]))
    }

    pub fn pauli(axis: PauliAxis) -> Self {
        Factor::Local(axis.entries())
    }

    fn to_matrix(self) -> ComplexMatrix {
        match self {
            Factor::Identity => ComplexMatrix::identity(2),
            Factor::Local(m) => ComplexMatrix::from_parts(2, 2, m.to_vec()),
        }
    }
}

/// `coefficient · F_1 ⊗ ... ⊗ F_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct KronTerm {
    pub coefficient: Complex64,
    pub factors: Vec<Factor>,
}

impl KronTerm {
    pub fn new(coefficient: Complex64, factors: Vec<Factor>) -> Self {
        Self {
            coefficient,
            factors,
        }
    }

    /// Term on `n` sites with the given 1-based `(site, factor)` placements and
    /// identities elsewhere.
    pub fn on_sites(coefficient: Complex64, n: usize, placed: &[(usize, Factor)]) -> Result<Self> {
        let mut factors = vec![Factor::Identity; n];
        for &(site, f) in placed {
            if site == 0 || site > n {
                return Err(Error::Range { index: site, n });
            }
            factors[site - 1] = f;
        }
        Ok(Self::new(coefficient, factors))
    }

    /// `(bit, matrix)` for every non-identity slot.
    fn active(&self) -> Vec<(usize, [Complex64; 4])> {
        let n = self.factors.len();
        self.factors
            .iter()
            .enumerate()
            .filter_map(|(k, f)| match f {
                Factor::Identity => None,
                Factor::Local(m) => Some((n - 1 - k, *m)),
            })
            .collect()
    }
}

/// Sum of Kronecker terms over a fixed number of sites.
#[derive(Debug, Clone, PartialEq)]
pub struct KronSum {
    n_sites: usize,
    terms: Vec<KronTerm>,
}

impl KronSum {
    /// Empty (zero) operator.
    pub fn new(n_sites: usize) -> Result<Self> {
        if n_sites == 0 || n_sites >= usize::BITS as usize - 5 {
            return Err(Error::InvalidSpec(format!(
                "unsupported site count {n_sites}"
            )));
        }
        Ok(Self {
            n_sites,
            terms: Vec::new(),
        })
    }

    pub fn push(&mut self, term: KronTerm) -> Result<()> {
        if term.factors.len() != self.n_sites {
            return Err(shape(
                "KronSum::push",
                format!(
                    "term has {} factors, operator has {} sites",
                    term.factors.len(),
                    self.n_sites
                ),
            ));
        }
        if !term.coefficient.is_finite() {
            return Err(Error::NonFinite { row: 0, col: 0 });
        }
        self.terms.push(term);
        Ok(())
    }

    pub fn with_terms(n_sites: usize, terms: Vec<KronTerm>) -> Result<Self> {
        let mut op = Self::new(n_sites)?;
        for t in terms {
            op.push(t)?;
        }
        Ok(op)
    }

    pub fn identity(n_sites: usize) -> Result<Self> {
        Self::with_terms(
            n_sites,
            vec![KronTerm::new(
                Complex64::new(1.0, 0.0),
                vec![Factor::Identity; n_sites],
            )],
        )
    }

    /// `S_α = (1/2) Σ_k σ_α^(k)`.
    pub fn total_component(axis: PauliAxis, n_sites: usize) -> Result<Self> {
        let mut op = Self::new(n_sites)?;
        for k in 1..=n_sites {
            op.push(KronTerm::on_sites(
                Complex64::new(0.5, 0.0),
                n_sites,
                &[(k, Factor::pauli(axis))],
            )?)?;
        }
        Ok(op)
    }

    /// `S² = (3n/4) E + (1/2) Σ_{i<j} Σ_α σ_α^(i) σ_α^(j)`.
    pub fn total_spin_squared(n_sites: usize) -> Result<Self> {
        let mut op = Self::new(n_sites)?;
        op.push(KronTerm::new(
            Complex64::new(0.75 * n_sites as f64, 0.0),
            vec![Factor::Identity; n_sites],
        ))?;
        for i in 1..=n_sites {
            for j in (i + 1)..=n_sites {
                for axis in PauliAxis::ALL {
                    let f = Factor::pauli(axis);
                    op.push(KronTerm::on_sites(
                        Complex64::new(0.5, 0.0),
                        n_sites,
                        &[(i, f), (j, f)],
                    )?)?;
                }
            }
        }
        Ok(op)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn terms(&self) -> &[KronTerm] {
        &self.terms
    }

    pub fn dimension(&self) -> usize {
        1 << self.n_sites
    }

    /// `y = Op x` on raw amplitude slices, using one scratch buffer.
    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) -> Result<()> {
        let dim = self.dimension();
        if x.len() != dim || y.len() != dim {
            return Err(shape(
                "matvec",
                format!("state lengths {} / {} vs dimension {dim}", x.len(), y.len()),
            ));
        }
        fill_zero(y);
        let mut scratch: Vec<Complex64> = Vec::new();
        for term in &self.terms {
            let active = term.active();
            let Some(((first_bit, first), rest)) = active.split_first() else {
                axpy(term.coefficient, x, y);
                continue;
            };
            if scratch.is_empty() {
                scratch = try_zeroed(dim)?;
            }
            apply_factor_into(*first_bit, first, x, &mut scratch);
            for (bit, m) in rest {
                apply_factor_in_place(*bit, m, &mut scratch);
            }
            axpy(term.coefficient, &scratch, y);
        }
        Ok(())
    }

    pub fn matvec(&self, x: &StateVector) -> Result<StateVector> {
        if x.n_sites != self.n_sites {
            return Err(shape(
                "matvec",
                format!("state has {} sites, operator {}", x.n_sites, self.n_sites),
            ));
        }
        let mut y = try_zeroed(self.dimension())?;
        self.apply(&x.amplitudes, &mut y)?;
        Ok(StateVector {
            n_sites: self.n_sites,
            amplitudes: y,
        })
    }

    /// Dense `Σ_t c_t F_t1 ⊗ ... ⊗ F_tn`, chains built left to right.
    pub fn to_dense(&self) -> Result<ComplexMatrix> {
        check_capacity(self.n_sites)?;
        let dim = self.dimension();
        let mut out = ComplexMatrix::try_zeros(dim, dim)?;
        for term in &self.terms {
            let mut chain = term.factors[0].to_matrix();
            for f in &term.factors[1..] {
                chain = kron(&chain, &f.to_matrix())?;
            }
            out.add_scaled(term.coefficient, &chain)?;
        }
        Ok(out)
    }

    /// Checks `<x, Op y> = <Op x, y>` on two seeded random states, to `1e-8`
    /// relative to `||Op x|| ||y||`.
    pub fn verify_hermitian(&self, seed: u64) -> Result<()> {
        let x = StateVector::random(self.n_sites, seed ^ 0x5eed_0001)?;
        let y = StateVector::random(self.n_sites, seed ^ 0x5eed_0002)?;
        let ax = self.matvec(&x)?;
        let ay = self.matvec(&y)?;
        let lhs = x.inner(&ay);
        let rhs = ax.inner(&y);
        let defect = (lhs - rhs).norm();
        let scale = (ax.norm() * y.norm()).max(x.norm() * ay.norm()).max(1e-300);
        if defect > 1e-8 * scale {
            return Err(Error::HermitianProbe { defect });
        }
        Ok(())
    }
}

/// Free-function form of [`KronSum::matvec`].
pub fn matvec(op: &KronSum, x: &StateVector) -> Result<StateVector> {
    op.matvec(x)
}

/// Free-function form of [`KronSum::to_dense`].
pub fn to_dense(op: &KronSum) -> Result<ComplexMatrix> {
    op.to_dense()
}

/// Matrix-free Hamiltonian: `n` Zeeman terms followed by three exchange terms
/// (x, y, z) per edge, in the same order `build_general` sums them.
pub fn spec_to_kronsum(spec: &HamiltonianSpec) -> KronSum {
    let n = spec.n_sites();
    let mut op = KronSum::new(n).expect("spec site count is valid");
    let z = Factor::pauli(PauliAxis::Z);
    for k in 1..=n {
        op.terms.push(
            KronTerm::on_sites(Complex64::new(-spec.mu_b0(), 0.0), n, &[(k, z)])
                .expect("site in range"),
        );
    }
    for edge in spec.couplings() {
        for axis in PauliAxis::ALL {
            let f = Factor::pauli(axis);
            op.terms.push(
                KronTerm::on_sites(
                    Complex64::new(edge.strength(), 0.0),
                    n,
                    &[(edge.i().index(), f), (edge.j().index(), f)],
                )
                .expect("site in range"),
            );
        }
    }
    op
}

/// `||(A B - B A) x||` for one state.
pub fn commutator_probe(a: &KronSum, b: &KronSum, x: &StateVector) -> Result<f64> {
    let abx = a.matvec(&b.matvec(x)?)?;
    let bax = b.matvec(&a.matvec(x)?)?;
    Ok(abx
        .amplitudes
        .iter()
        .zip(&bax.amplitudes)
        .map(|(p, q)| (p - q).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Amplitudes of an `n`-site state, `2^n` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_sites: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(n_sites: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = 1usize
            .checked_shl(n_sites as u32)
            .filter(|_| n_sites < usize::BITS as usize)
            .ok_or_else(|| Error::InvalidSpec(format!("unsupported site count {n_sites}")))?;
        if amplitudes.len() != dim {
            return Err(shape(
                "StateVector::new",
                format!(
                    "{} amplitudes for {n_sites} sites (need {dim})",
                    amplitudes.len()
                ),
            ));
        }
        if let Some(k) = amplitudes.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite { row: k, col: 0 });
        }
        Ok(Self {
            n_sites,
            amplitudes,
        })
    }

    pub fn zeros(n_sites: usize) -> Result<Self> {
        Self::new_checked_len(n_sites).and_then(|dim| {
            Ok(Self {
                n_sites,
                amplitudes: try_zeroed(dim)?,
            })
        })
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_sites: usize, index: usize) -> Result<Self> {
        let mut s = Self::zeros(n_sites)?;
        let dim = s.amplitudes.len();
        if index >= dim {
            return Err(Error::Range { index, n: dim - 1 });
        }
        s.amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Normalized state with real and imaginary parts drawn uniformly from
    /// `[-1, 1)` by a seeded ChaCha generator.
    pub fn random(n_sites: usize, seed: u64) -> Result<Self> {
        let dim = Self::new_checked_len(n_sites)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut amps = Vec::new();
        amps.try_reserve_exact(dim).map_err(|_| Error::Allocation {
            bytes: dim.saturating_mul(16),
        })?;
        amps.extend(
            (0..dim).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))),
        );
        let mut s = Self {
            n_sites,
            amplitudes: amps,
        };
        let norm = s.norm();
        s.scale(Complex64::new(1.0 / norm, 0.0));
        Ok(s)
    }

    fn new_checked_len(n_sites: usize) -> Result<usize> {
        if n_sites >= usize::BITS as usize - 5 {
            return Err(Error::InvalidSpec(format!(
                "unsupported site count {n_sites}"
            )));
        }
        Ok(1 << n_sites)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// `<self, other> = Σ conj(self_i) other_i`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        dot(&self.amplitudes, &other.amplitudes)
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    pub fn scale(&mut self, s: Complex64) {
        for z in &mut self.amplitudes {
            *z *= s;
        }
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: Complex64, other: &StateVector) -> Result<()> {
        if other.amplitudes.len() != self.amplitudes.len() {
            return Err(shape("axpy", "state lengths differ"));
        }
        axpy(s, &other.amplitudes, &mut self.amplitudes);
        Ok(())
    }

    /// Largest `|self_i - other_i|`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn try_zeroed(dim: usize) -> Result<Vec<Complex64>> {
    let mut v = Vec::new();
    v.try_reserve_exact(dim).map_err(|_| Error::Allocation {
        bytes: dim.saturating_mul(std::mem::size_of::<Complex64>()),
    })?;
    v.resize(dim, ZERO);
    Ok(v)
}

fn fill_zero(y: &mut [Complex64]) {
    if y.len() >= PARALLEL_MIN_LEN {
        y.par_chunks_mut(CHUNK).for_each(|c| c.fill(ZERO));
    } else {
        y.fill(ZERO);
    }
}

fn axpy(s: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    let kernel = |xc: &[Complex64], yc: &mut [Complex64]| {
        for (yi, xi) in yc.iter_mut().zip(xc) {
            *yi += s * xi;
        }
    };
    if y.len() >= PARALLEL_MIN_LEN {
        y.par_chunks_mut(CHUNK)
            .zip(x.par_chunks(CHUNK))
            .for_each(|(yc, xc)| kernel(xc, yc));
    } else {
        kernel(x, y);
    }
}

fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[inline(always)]
fn pair_kernel(m: &[Complex64; 4], lo: Complex64, hi: Complex64) -> (Complex64, Complex64) {
    (m[0] * lo + m[1] * hi, m[2] * lo + m[3] * hi)
}

/// Applies `m` to the amplitude pairs differing in `bit` of `block`-local
/// indices, reading from `src` and writing to `dst`. Both slices start at a
/// multiple of `2 * stride`.
fn pairs_into(stride: usize, m: &[Complex64; 4], src: &[Complex64], dst: &mut [Complex64]) {
    for (sb, db) in src.chunks(2 * stride).zip(dst.chunks_mut(2 * stride)) {
        let (slo, shi) = sb.split_at(stride);
        let (dlo, dhi) = db.split_at_mut(stride);
        for k in 0..stride {
            let (a, b) = pair_kernel(m, slo[k], shi[k]);
            dlo[k] = a;
            dhi[k] = b;
        }
    }
}

fn pairs_in_place(stride: usize, m: &[Complex64; 4], buf: &mut [Complex64]) {
    for block in buf.chunks_mut(2 * stride) {
        let (lo, hi) = block.split_at_mut(stride);
        for (l, h) in lo.iter_mut().zip(hi.iter_mut()) {
            let (a, b) = pair_kernel(m, *l, *h);
            *l = a;
            *h = b;
        }
    }
}

fn apply_factor_into(bit: usize, m: &[Complex64; 4], src: &[Complex64], dst: &mut [Complex64]) {
    let stride = 1usize << bit;
    let len = src.len();
    if len < PARALLEL_MIN_LEN {
        pairs_into(stride, m, src, dst);
    } else if 2 * stride <= CHUNK {
        dst.par_chunks_mut(CHUNK)
            .zip(src.par_chunks(CHUNK))
            .for_each(|(d, s)| pairs_into(stride, m, s, d));
    } else {
        // Pairs are far apart: parallelize along the two halves of each block.
        let half = CHUNK / 2;
        for (sb, db) in src.chunks(2 * stride).zip(dst.chunks_mut(2 * stride)) {
            let (slo, shi) = sb.split_at(stride);
            let (dlo, dhi) = db.split_at_mut(stride);
            dlo.par_chunks_mut(half)
                .zip(dhi.par_chunks_mut(half))
                .zip(slo.par_chunks(half).zip(shi.par_chunks(half)))
                .for_each(|((dl, dh), (sl, sh))| {
                    for k in 0..dl.len() {
                        let (a, b) = pair_kernel(m, sl[k], sh[k]);
                        dl[k] = a;
                        dh[k] = b;
                    }
                });
        }
    }
}

fn apply_factor_in_place(bit: usize, m: &[Complex64; 4], buf: &mut [Complex64]) {
    let stride = 1usize << bit;
    let len = buf.len();
    if len < PARALLEL_MIN_LEN {
        pairs_in_place(stride, m, buf);
    } else if 2 * stride <= CHUNK {
        buf.par_chunks_mut(CHUNK)
            .for_each(|c| pairs_in_place(stride, m, c));
    } else {
        let half = CHUNK / 2;
        for block in buf.chunks_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            lo.par_chunks_mut(half)
                .zip(hi.par_chunks_mut(half))
                .for_each(|(l, h)| {
                    for (li, hi) in l.iter_mut().zip(h.iter_mut()) {
                        let (a, b) = pair_kernel(m, *li, *hi);
                        *li = a;
                        *hi = b;
                    }
                });
        }
    }
}

/// End of the spectrum to resolve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Lowest,
    Highest,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LanczosConfig {
    pub which: Which,
    /// Number of extremal Ritz values to converge.
    pub k: usize,
    /// Relative residual target: `||Op v - λv|| <= tol * ||Op||_est`.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub want_vectors: bool,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        Self {
            which: Which::Lowest,
            k: 1,
            tol: 1e-10,
            max_iter: 300,
            seed: 0,
            want_vectors: false,
        }
    }
}

/// Extremal eigenvalues of a Hermitian [`KronSum`] by Lanczos with full
/// reorthogonalization.
///
/// The start vector is a seeded random state, so runs are reproducible. The
/// operator norm estimate is the largest Ritz magnitude seen so far. Without
/// restarts each degenerate eigenspace contributes a single Ritz value, so the
/// `k` values returned are distinct eigenvalues. Eigenvalues come back
/// ascending in a partial [`Spectrum`].
pub fn lanczos_extremal(op: &KronSum, cfg: &LanczosConfig) -> Result<Spectrum> {
    let dim = op.dimension();
    if cfg.k == 0 || cfg.k > dim {
        return Err(shape(
            "lanczos_extremal",
            format!("k = {} outside 1..={dim}", cfg.k),
        ));
    }
    op.verify_hermitian(cfg.seed)?;

    let max_steps = cfg.max_iter.min(dim);
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut norm_est: f64 = 0.0;
    let mut best: Vec<f64> = Vec::new();

    let mut v = StateVector::random(op.n_sites(), cfg.seed)?.into_amplitudes();
    let mut w = try_zeroed(dim)?;

    for step in 0..max_steps {
        op.apply(&v, &mut w)?;
        let alpha = dot(&v, &w).re;
        axpy(Complex64::new(-alpha, 0.0), &v, &mut w);
        if let (Some(prev), Some(&beta)) = (basis.last(), betas.last()) {
            axpy(Complex64::new(-beta, 0.0), prev, &mut w);
        }
        basis.push(v);
        alphas.push(alpha);
        // Two Gram-Schmidt passes keep the basis orthogonal to working precision.
        for _ in 0..2 {
            for q in &basis {
                let h = dot(q, &w);
                axpy(-h, q, &mut w);
            }
        }
        let beta = norm(&w);

        let (ritz, vecs) = tridiagonal_eigh(&alphas, &betas)?;
        norm_est = ritz.iter().fold(norm_est, |m, &x| m.max(x.abs()));
        let m = ritz.len();
        let picked: Vec<usize> = match cfg.which {
            Which::Lowest => (0..m.min(cfg.k)).collect(),
            Which::Highest => (m.saturating_sub(cfg.k)..m).collect(),
        };
        best = picked.iter().map(|&i| ritz[i]).collect();

        let breakdown = beta <= 1e-12 * norm_est || beta == 0.0;
        let converged = picked.len() == cfg.k
            && picked
                .iter()
                .all(|&i| beta * vecs[i][m - 1].abs() <= cfg.tol * norm_est);
        if converged || breakdown {
            if picked.len() < cfg.k {
                break;
            }
            let eigenvectors = if cfg.want_vectors {
                let mut out = ComplexMatrix::try_zeros(dim, cfg.k)?;
                for (col, &i) in picked.iter().enumerate() {
                    let mut ritz_vec = vec![ZERO; dim];
                    for (q, &s) in basis.iter().zip(&vecs[i]) {
                        axpy(Complex64::new(s, 0.0), q, &mut ritz_vec);
                    }
                    let nv = norm(&ritz_vec);
                    for (row, z) in ritz_vec.into_iter().enumerate() {
                        out.set(row, col, z / nv);
                    }
                }
                Some(out)
            } else {
                None
            };
            return Ok(Spectrum {
                eigenvalues: best,
                eigenvectors,
                dimension: dim,
            });
        }
        if step + 1 == max_steps {
            break;
        }

        betas.push(beta);
        let inv = Complex64::new(1.0 / beta, 0.0);
        let mut next = std::mem::replace(&mut w, try_zeroed(dim)?);
        for z in &mut next {
            *z *= inv;
        }
        v = next;
    }
    Err(Error::Convergence {
        iterations: alphas.len(),
        estimates: best,
    })
}

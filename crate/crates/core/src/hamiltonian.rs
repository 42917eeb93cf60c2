//! NMR spin Hamiltonians: Zeeman coupling to a field along `z` plus isotropic
//! exchange `J_ij σ_i · σ_j` between coupled sites.
//!
//! ```text
//! H = -μB₀ Σ_k σz^(k) + Σ_(i,j) J_ij (σx^(i)σx^(j) + σy^(i)σy^(j) + σz^(i)σz^(j))
//! ```
//!
//! Each operator always sits in the Kronecker slot of its own site, whatever
//! order an edge lists its endpoints in.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kron::{kron, ResidualReport};
use crate::matrix::ComplexMatrix;
use crate::spin::{check_capacity, lift, lift_pair, pauli, PauliAxis, SiteIndex};

/// Exchange coupling between two distinct sites, stored with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingEdge {
    i: SiteIndex,
    j: SiteIndex,
    strength: f64,
}

impl CouplingEdge {
    pub fn new(i: usize, j: usize, strength: f64, n_sites: usize) -> Result<Self> {
        if i == j {
            return Err(Error::InvalidSpec(format!("self-coupling on site {i}")));
        }
        if !strength.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "non-finite J on edge ({i}, {j})"
            )));
        }
        let (lo, hi) = (i.min(j), i.max(j));
        Ok(Self {
            i: SiteIndex::new(lo, n_sites)?,
            j: SiteIndex::new(hi, n_sites)?,
            strength,
        })
    }

    pub fn i(&self) -> SiteIndex {
        self.i
    }

    pub fn j(&self) -> SiteIndex {
        self.j
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }
}

#[derive(Serialize, Deserialize)]
struct RawEdge {
    i: usize,
    j: usize,
    #[serde(rename = "J")]
    strength: f64,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    n_sites: usize,
    mu_b0: f64,
    #[serde(default)]
    couplings: Vec<RawEdge>,
}

/// Site count, field strength `μB₀` and exchange couplings.
///
/// JSON form: `{"n_sites": 3, "mu_b0": 0.5, "couplings": [{"i": 1, "j": 2, "J": 1.0}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct HamiltonianSpec {
    n_sites: usize,
    mu_b0: f64,
    couplings: Vec<CouplingEdge>,
}

impl TryFrom<RawSpec> for HamiltonianSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        let edges = raw
            .couplings
            .iter()
            .map(|e| (e.i, e.j, e.strength))
            .collect::<Vec<_>>();
        HamiltonianSpec::new(raw.n_sites, raw.mu_b0, &edges)
    }
}

impl From<HamiltonianSpec> for RawSpec {
    fn from(spec: HamiltonianSpec) -> Self {
        RawSpec {
            n_sites: spec.n_sites,
            mu_b0: spec.mu_b0,
            couplings: spec
                .couplings
                .iter()
                .map(|e| RawEdge {
                    i: e.i.index(),
                    j: e.j.index(),
                    strength: e.strength,
                })
                .collect(),
        }
    }
}

impl HamiltonianSpec {
    /// Validates and normalizes `(i, j, J)` edges given with 1-based sites.
    pub fn new(n_sites: usize, mu_b0: f64, couplings: &[(usize, usize, f64)]) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::InvalidSpec("n_sites must be positive".into()));
        }
        // 2^n_sites must stay addressable.
        if n_sites >= usize::BITS as usize {
            return Err(Error::InvalidSpec(format!(
                "n_sites = {n_sites} is too large"
            )));
        }
        if !mu_b0.is_finite() {
            return Err(Error::InvalidSpec("mu_b0 must be finite".into()));
        }
        let mut edges: Vec<CouplingEdge> = Vec::with_capacity(couplings.len());
        for &(i, j, strength) in couplings {
            let edge = CouplingEdge::new(i, j, strength, n_sites)?;
            if edges.iter().any(|e| e.i == edge.i && e.j == edge.j) {
                return Err(Error::InvalidSpec(format!(
                    "duplicate edge ({}, {})",
                    edge.i.index(),
                    edge.j.index()
                )));
            }
            edges.push(edge);
        }
        Ok(Self {
            n_sites,
            mu_b0,
            couplings: edges,
        })
    }

    /// Open chain `1-2-...-n` with uniform coupling.
    pub fn chain(n_sites: usize, mu_b0: f64, j: f64) -> Result<Self> {
        let edges: Vec<_> = (1..n_sites).map(|k| (k, k + 1, j)).collect();
        Self::new(n_sites, mu_b0, &edges)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            // Validation failures inside `try_from` already carry the prefix.
            let msg = e.to_string();
            let prefix = Error::InvalidSpec(String::new()).to_string();
            Error::InvalidSpec(msg.strip_prefix(&prefix).unwrap_or(&msg).to_string())
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> std::io::Result<Result<Self>> {
        Ok(Self::from_json(&std::fs::read_to_string(path)?))
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn mu_b0(&self) -> f64 {
        self.mu_b0
    }

    pub fn couplings(&self) -> &[CouplingEdge] {
        &self.couplings
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Two-spin Hamiltonian
/// `-μB₀(σz⊗E + E⊗σz) + J(σx⊗σx + σy⊗σy + σz⊗σz)`.
pub fn build_h2(mu_b0: f64, j12: f64) -> ComplexMatrix {
    let e = ComplexMatrix::identity(2);
    let sz = pauli(PauliAxis::Z);
    let mut h = ComplexMatrix::zeros(4, 4);
    let terms = [
        (-mu_b0, kron(&sz, &e)),
        (-mu_b0, kron(&e, &sz)),
        (j12, kron(&pauli(PauliAxis::X), &pauli(PauliAxis::X))),
        (j12, kron(&pauli(PauliAxis::Y), &pauli(PauliAxis::Y))),
        (j12, kron(&sz, &sz)),
    ];
    for (coef, term) in terms {
        h.add_scaled(real(coef), &term.expect("2x2 factors"))
            .expect("4x4 terms");
    }
    h
}

/// Three-spin Hamiltonian with couplings on edges (1,2), (2,3) and (3,1).
pub fn build_h3(mu_b0: f64, j12: f64, j23: f64, j31: f64) -> ComplexMatrix {
    let site = |k| SiteIndex::new(k, 3).expect("site within 1..=3");
    let mut h = ComplexMatrix::zeros(8, 8);
    let sz = pauli(PauliAxis::Z);
    for k in 1..=3 {
        h.add_scaled(real(-mu_b0), &lift(&sz, site(k)).expect("dense 3-site"))
            .expect("8x8");
    }
    for (i, j, coupling) in [(1, 2, j12), (2, 3, j23), (1, 3, j31)] {
        for axis in PauliAxis::ALL {
            let s = pauli(axis);
            let term = lift(&s, site(i))
                .and_then(|a| a.matmul(&lift(&s, site(j))?))
                .expect("dense 3-site");
            h.add_scaled(real(coupling), &term).expect("8x8");
        }
    }
    h
}

/// Dense Hamiltonian for an arbitrary spec (`n_sites <= DENSE_CAP`).
///
/// Terms are accumulated Zeeman first (site order), then each edge in spec
/// order with components x, y, z.
pub fn build_general(spec: &HamiltonianSpec) -> Result<ComplexMatrix> {
    let n = spec.n_sites();
    check_capacity(n)?;
    let dim = 1usize << n;
    let mut h = ComplexMatrix::try_zeros(dim, dim)?;
    let sz = pauli(PauliAxis::Z);
    for k in 1..=n {
        h.add_scaled(real(-spec.mu_b0()), &lift(&sz, SiteIndex::new(k, n)?)?)?;
    }
    for edge in spec.couplings() {
        for axis in PauliAxis::ALL {
            let s = pauli(axis);
            h.add_scaled(
                real(edge.strength()),
                &lift_pair(&s, edge.i(), &s, edge.j())?,
            )?;
        }
    }
    Ok(h)
}

/// Weights `a_x, a_y, a_z` on the two-spin total components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightTriple {
    pub a_x: f64,
    pub a_y: f64,
    pub a_z: f64,
}

impl WeightTriple {
    pub fn new(a_x: f64, a_y: f64, a_z: f64) -> Self {
        Self { a_x, a_y, a_z }
    }

    pub fn isotropic(a: f64) -> Self {
        Self::new(a, a, a)
    }

    fn get(&self, axis: PauliAxis) -> f64 {
        match axis {
            PauliAxis::X => self.a_x,
            PauliAxis::Y => self.a_y,
            PauliAxis::Z => self.a_z,
        }
    }

    /// All squared weights agree to `1e-12` relative.
    pub fn is_isotropic(&self) -> bool {
        let sq = [self.a_x.powi(2), self.a_y.powi(2), self.a_z.powi(2)];
        let scale = sq.iter().cloned().fold(1.0, f64::max);
        (sq[0] - sq[1]).abs() <= 1e-12 * scale && (sq[0] - sq[2]).abs() <= 1e-12 * scale
    }
}

/// How the assembled operator was matched against `build_h2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CouplingMatch {
    /// Compared with `build_h2(mu_b0, j)` where `j = 2a²`. The Zeeman parts agree
    /// only when `mu_b0 == implied_mu_b0 = -a_z`.
    Isotropic {
        mu_b0: f64,
        j: f64,
        implied_mu_b0: f64,
    },
    /// Squared weights differ, so the exchange part is not isotropic. Compared
    /// with `build_h2(mu_b0, j_fit)` where `j_fit` is the mean of `2a_α²`.
    Anisotropic {
        mu_b0: f64,
        j_fit: f64,
        per_axis_j: [f64; 3],
    },
}

/// Result of [`verify_h2_decomposition`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct H2Decomposition {
    /// Distance between the assembled operator (identity part removed) and `build_h2`.
    pub report: ResidualReport,
    /// `S_α² = 2a_α² (E⊗E + σα⊗σα)` for α = x, y, z.
    pub squared_components: Vec<ResidualReport>,
    /// Coefficient of the dropped `E⊗E` term.
    pub identity_offset: f64,
    pub matching: CouplingMatch,
}

pub const DECOMPOSITION_TOL: f64 = 1e-10;
pub const SQUARED_COMPONENT_TOL: f64 = 1e-12;

/// Rebuilds the two-spin Hamiltonian from the weighted total spin.
///
/// With `S_α = a_α(σα⊗E + E⊗σα)`, the sum `S_z + S_x² + S_y² + S_z²` minus its
/// multiple of the identity is `a_z(σz⊗E + E⊗σz) + Σ_α 2a_α² σα⊗σα`. Each
/// square is first checked against `2a_α²[E⊗E + σα⊗σα]`, then the reduced sum
/// is compared with `build_h2`.
pub fn verify_h2_decomposition(weights: WeightTriple, mu_b0: f64) -> H2Decomposition {
    let e = ComplexMatrix::identity(2);
    let ee = ComplexMatrix::identity(4);
    let pair = |axis: PauliAxis| {
        let s = pauli(axis);
        let single = kron(&s, &e)
            .and_then(|l| l.add(&kron(&e, &s)?))
            .expect("4x4");
        (single, kron(&s, &s).expect("4x4"))
    };

    let mut squared_components = Vec::with_capacity(3);
    let mut sum = ComplexMatrix::zeros(4, 4);
    for axis in PauliAxis::ALL {
        let a = weights.get(axis);
        let (single, double) = pair(axis);
        let component = single.scale_real(a);
        if axis == PauliAxis::Z {
            sum.add_scaled(real(1.0), &component).expect("4x4");
        }
        let squared = component.matmul(&component).expect("4x4");
        let closed_form = ee.add(&double).expect("4x4").scale_real(2.0 * a * a);
        squared_components.push(ResidualReport::equal(
            format!("S_{axis}^2 = 2a_{axis}^2 (E⊗E + σ{axis}⊗σ{axis})"),
            squared.distance(&closed_form).expect("4x4"),
            SQUARED_COMPONENT_TOL * (a * a).max(1.0),
        ));
        sum.add_scaled(real(1.0), &squared).expect("4x4");
    }

    let offset = 2.0 * (weights.a_x.powi(2) + weights.a_y.powi(2) + weights.a_z.powi(2));
    let reduced = sum.sub(&ee.scale_real(offset)).expect("4x4");

    let per_axis_j = [
        2.0 * weights.a_x.powi(2),
        2.0 * weights.a_y.powi(2),
        2.0 * weights.a_z.powi(2),
    ];
    let (j, matching) = if weights.is_isotropic() {
        let j = per_axis_j[2];
        (
            j,
            CouplingMatch::Isotropic {
                mu_b0,
                j,
                implied_mu_b0: -weights.a_z,
            },
        )
    } else {
        let j_fit = per_axis_j.iter().sum::<f64>() / 3.0;
        (
            j_fit,
            CouplingMatch::Anisotropic {
                mu_b0,
                j_fit,
                per_axis_j,
            },
        )
    };
    let target = build_h2(mu_b0, j);
    let scale = target.frobenius_norm().max(1.0);
    H2Decomposition {
        report: ResidualReport::equal(
            "S_z + S^2 (identity removed) vs H2",
            reduced.distance(&target).expect("4x4"),
            DECOMPOSITION_TOL * scale,
        ),
        squared_components,
        identity_offset: offset,
        matching,
    }
}

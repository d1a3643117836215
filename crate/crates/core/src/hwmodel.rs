//! The coupled-qubit hardware model and its single-excitation-subspace image.
//!
//! The model is
//!
//! ```text
//! H = Σ_i ε_i c_i†c_i + Σ_{i<j} g_ij Σ_{μν} J_μν σ_i^μ ⊗ σ_j^ν
//! ```
//!
//! Conventions: `σ^z|0⟩ = +|0⟩` (ground state is the +1 eigenstate),
//! `c†c = (I − σ^z)/2` and `σ^y|0⟩ = i|1⟩`. Under these conventions a direct
//! projection of `H` onto the states `|m) = c_m†|0…0⟩` gives the closed form
//! implemented by [`build_ses_hamiltonian`], including the `−i(J^xy − J^yx)`
//! off-diagonal term.
//!
//! Qubit indices in this API are 0-based. The JSON config uses 1-based indices.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::densecx::CMatrix;
use crate::units::{ghz_to_rad_per_ns, mhz_to_rad_per_ns, rad_per_ns_to_ghz, rad_per_ns_to_mhz};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("qubit count must be at least 1")]
    NoQubits,
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("coupling index ({i}, {j}) invalid for {n} qubits (need 1 <= i < j <= n)")]
    BadCouplingIndex { i: usize, j: usize, n: usize },
    #[error("expected {expected} qubit energies, found {found}")]
    EnergyCount { expected: usize, found: usize },
    #[error("malformed model config: {0}")]
    Parse(String),
}

/// Real, symmetric pairwise couplings stored as a packed strict upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct Couplings {
    n: usize,
    upper: Vec<f64>,
}

impl Couplings {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            upper: vec![0.0; n * n.saturating_sub(1) / 2],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        assert!(a != b && b < self.n, "coupling ({i}, {j}) out of range");
        // rows 0..a contribute (n-1) + (n-2) + ... + (n-a) entries
        a * (2 * self.n - a - 1) / 2 + (b - a - 1)
    }

    /// `g_ij`, symmetric in its arguments. Diagonal entries are zero.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else {
            self.upper[self.offset(i, j)]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let k = self.offset(i, j);
        self.upper[k] = value;
    }

    /// Iterates `(i, j, g_ij)` over `i < j`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| ((i + 1)..self.n).map(move |j| (i, j, self.get(i, j))))
    }

    pub fn is_finite(&self) -> bool {
        self.upper.iter().all(|g| g.is_finite())
    }

    /// Sum of `g_ij` over all pairs touching qubit `m`.
    pub fn incident_sum(&self, m: usize) -> f64 {
        (0..self.n)
            .filter(|&k| k != m)
            .map(|k| self.get(m, k))
            .sum()
    }

    pub fn total(&self) -> f64 {
        self.upper.iter().sum()
    }

    /// 1-based `[i, j, MHz]` triples for the nonzero couplings.
    pub fn to_mhz_triples(&self) -> Vec<(usize, usize, f64)> {
        self.iter()
            .filter(|&(_, _, g)| g != 0.0)
            .map(|(i, j, g)| (i + 1, j + 1, rad_per_ns_to_mhz(g)))
            .collect()
    }

    /// Inverse of [`Couplings::to_mhz_triples`]. Unlisted pairs are zero.
    pub fn from_mhz_triples(n: usize, triples: &[(usize, usize, f64)]) -> Result<Self, ModelError> {
        let mut out = Self::zeros(n);
        for &(i, j, mhz) in triples {
            if i == 0 || i >= j || j > n {
                return Err(ModelError::BadCouplingIndex { i, j, n });
            }
            if !mhz.is_finite() {
                return Err(ModelError::NonFinite(format!("coupling ({i}, {j})")));
            }
            out.set(i - 1, j - 1, mhz_to_rad_per_ns(mhz));
        }
        Ok(out)
    }
}

/// Fixed real 3×3 tensor `J_μν`, indexed by `(x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingTensor(pub [[f64; 3]; 3]);

pub const X: usize = 0;
pub const Y: usize = 1;
pub const Z: usize = 2;

impl CouplingTensor {
    /// Pure `σ^x ⊗ σ^x` exchange.
    pub fn xx() -> Self {
        let mut j = [[0.0; 3]; 3];
        j[X][X] = 1.0;
        Self(j)
    }

    pub fn zz() -> Self {
        let mut j = [[0.0; 3]; 3];
        j[Z][Z] = 1.0;
        Self(j)
    }

    pub fn get(&self, mu: usize, nu: usize) -> f64 {
        self.0[mu][nu]
    }

    fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HardwareModel {
    /// Uncoupled qubit energies, rad/ns.
    pub epsilon: Vec<f64>,
    /// Pairwise coupling strengths, rad/ns.
    pub couplings: Couplings,
    pub tensor: CouplingTensor,
}

impl HardwareModel {
    pub fn new(
        epsilon: Vec<f64>,
        couplings: Couplings,
        tensor: CouplingTensor,
    ) -> Result<Self, ModelError> {
        if epsilon.is_empty() {
            return Err(ModelError::NoQubits);
        }
        if couplings.n() != epsilon.len() {
            return Err(ModelError::EnergyCount {
                expected: couplings.n(),
                found: epsilon.len(),
            });
        }
        let model = Self {
            epsilon,
            couplings,
            tensor,
        };
        model.check_finite()?;
        Ok(model)
    }

    pub fn n(&self) -> usize {
        self.epsilon.len()
    }

    fn check_finite(&self) -> Result<(), ModelError> {
        if let Some(i) = self.epsilon.iter().position(|e| !e.is_finite()) {
            return Err(ModelError::NonFinite(format!("epsilon[{}]", i + 1)));
        }
        if !self.couplings.is_finite() {
            return Err(ModelError::NonFinite("couplings".into()));
        }
        if !self.tensor.is_finite() {
            return Err(ModelError::NonFinite("J".into()));
        }
        Ok(())
    }

    pub fn from_json_str(s: &str) -> Result<Self, ModelError> {
        let cfg: ModelConfig =
            serde_json::from_str(s).map_err(|e| ModelError::Parse(e.to_string()))?;
        cfg.try_into()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&ModelConfig::from(self)).expect("model config serializes")
    }
}

/// Wire form of a [`HardwareModel`]: energies in GHz, couplings as 1-based
/// `[i, j, MHz]` triples with `i < j`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelConfig {
    pub n: usize,
    pub epsilon: Vec<f64>,
    #[serde(default)]
    pub g: Vec<(usize, usize, f64)>,
    #[serde(rename = "J")]
    pub tensor: [[f64; 3]; 3],
}

impl TryFrom<ModelConfig> for HardwareModel {
    type Error = ModelError;

    fn try_from(cfg: ModelConfig) -> Result<Self, ModelError> {
        if cfg.n == 0 {
            return Err(ModelError::NoQubits);
        }
        if cfg.epsilon.len() != cfg.n {
            return Err(ModelError::EnergyCount {
                expected: cfg.n,
                found: cfg.epsilon.len(),
            });
        }
        let couplings = Couplings::from_mhz_triples(cfg.n, &cfg.g)?;
        let epsilon = cfg.epsilon.iter().map(|&f| ghz_to_rad_per_ns(f)).collect();
        HardwareModel::new(epsilon, couplings, CouplingTensor(cfg.tensor))
    }
}

impl From<&HardwareModel> for ModelConfig {
    fn from(model: &HardwareModel) -> Self {
        Self {
            n: model.n(),
            epsilon: model
                .epsilon
                .iter()
                .map(|&e| rad_per_ns_to_ghz(e))
                .collect(),
            g: model.couplings.to_mhz_triples(),
            tensor: model.tensor.0,
        }
    }
}

/// Hermitian `n×n` Hamiltonian restricted to the single-excitation subspace,
/// in rad/ns. Row/column `m` is the state with only qubit `m` excited.
#[derive(Debug, Clone, PartialEq)]
pub struct SesMatrix(CMatrix);

impl SesMatrix {
    /// Wraps a matrix after checking (and symmetrizing) Hermiticity.
    pub fn new(m: CMatrix) -> Result<Self, crate::densecx::LinalgError> {
        crate::densecx::hermitianize(&m).map(Self)
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }
}

/// Closed-form SES matrix elements of the hardware model.
pub fn build_ses_hamiltonian(model: &HardwareModel) -> SesMatrix {
    let n = model.n();
    let j = &model.tensor;
    let g = &model.couplings;
    let jzz = j.get(Z, Z);
    let total = g.total();
    let exchange = Complex64::new(j.get(X, X) + j.get(Y, Y), -(j.get(X, Y) - j.get(Y, X)));

    let mut h = CMatrix::zeros(n, n);
    for m in 0..n {
        let diag = model.epsilon[m] - 2.0 * jzz * g.incident_sum(m) + jzz * total;
        h[(m, m)] = Complex64::new(diag, 0.0);
    }
    for (a, b, gab) in g.iter() {
        let v = exchange * gab;
        h[(a, b)] = v;
        h[(b, a)] = v.conj();
    }
    SesMatrix(h)
}

/// A coupling that threatens SES isolation.
#[derive(Debug, Clone, PartialEq)]
pub struct IsolationWarning {
    /// 0-based pair, `i < j`.
    pub pair: (usize, usize),
    pub coupling: f64,
    /// `|g_ij| / min ε`, `None` when the smallest energy is not positive.
    pub ratio: Option<f64>,
}

impl fmt::Display for IsolationWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.pair;
        match self.ratio {
            Some(r) => write!(
                f,
                "coupling ({}, {}) is {:.3e} of the smallest qubit energy; SES isolation at risk",
                i + 1,
                j + 1,
                r
            ),
            None => write!(
                f,
                "coupling ({}, {}) is nonzero but the smallest qubit energy is not positive; g/epsilon undefined",
                i + 1,
                j + 1
            ),
        }
    }
}

/// Largest `|g_ij| / min ε` tolerated without a warning.
pub const ISOLATION_RATIO: f64 = 0.01;

/// Flags every pair with `|g_ij| > 0.01 · min_i ε_i`. Never rejects a finite model.
pub fn validate(model: &HardwareModel) -> Result<Vec<IsolationWarning>, ModelError> {
    model.check_finite()?;
    let eps_min = model.epsilon.iter().copied().fold(f64::INFINITY, f64::min);
    let warnings = model
        .couplings
        .iter()
        .filter(|&(_, _, g)| g != 0.0)
        .filter_map(|(i, j, g)| {
            if eps_min <= 0.0 {
                Some(IsolationWarning {
                    pair: (i, j),
                    coupling: g,
                    ratio: None,
                })
            } else if g.abs() > ISOLATION_RATIO * eps_min {
                Some(IsolationWarning {
                    pair: (i, j),
                    coupling: g,
                    ratio: Some(g.abs() / eps_min),
                })
            } else {
                None
            }
        })
        .collect();
    Ok(warnings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densecx::max_abs_diff;

    fn uniform_model(n: usize, eps: f64, g: f64, tensor: CouplingTensor) -> HardwareModel {
        let mut c = Couplings::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                c.set(i, j, g);
            }
        }
        HardwareModel::new(vec![eps; n], c, tensor).unwrap()
    }

    #[test]
    fn packed_indexing_covers_every_pair_once() {
        let n = 6;
        let mut c = Couplings::zeros(n);
        let mut k = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                k += 1.0;
                c.set(j, i, k);
            }
        }
        let values: Vec<f64> = c.iter().map(|(_, _, g)| g).collect();
        assert_eq!(values, (1..=15).map(f64::from).collect::<Vec<_>>());
        assert_eq!(c.get(2, 4), c.get(4, 2));
    }

    #[test]
    fn xx_only_is_direct_control() {
        let mut c = Couplings::zeros(3);
        c.set(0, 1, 0.1);
        c.set(0, 2, -0.2);
        c.set(1, 2, 0.3);
        let model =
            HardwareModel::new(vec![1.0, 2.0, 3.0], c.clone(), CouplingTensor::xx()).unwrap();
        let h = build_ses_hamiltonian(&model);
        let expected = CMatrix::from_fn(3, 3, |i, j| {
            Complex64::new(
                if i == j {
                    model.epsilon[i]
                } else {
                    c.get(i, j)
                },
                0.0,
            )
        });
        assert!(max_abs_diff(h.matrix(), &expected) < 1e-15);
    }

    #[test]
    fn zz_pair_shifts_diagonal_only() {
        let g = 0.37;
        let mut c = Couplings::zeros(2);
        c.set(0, 1, g);
        let model = HardwareModel::new(vec![1.5, 2.5], c, CouplingTensor::zz()).unwrap();
        let h = build_ses_hamiltonian(&model);
        assert!((h.matrix()[(0, 0)].re - (1.5 - g)).abs() < 1e-15);
        assert!((h.matrix()[(1, 1)].re - (2.5 - g)).abs() < 1e-15);
        assert_eq!(h.matrix()[(0, 1)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn uncoupled_is_diagonal_energies() {
        let model = HardwareModel::new(
            vec![1.0, 4.0, 9.0],
            Couplings::zeros(3),
            CouplingTensor([[0.3, 0.1, 0.2]; 3]),
        )
        .unwrap();
        let h = build_ses_hamiltonian(&model);
        let expected = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(4.0, 0.0),
            Complex64::new(9.0, 0.0),
        ]));
        assert_eq!(h.matrix(), &expected);
    }

    #[test]
    fn constant_energy_shift_is_identity_shift() {
        let model = uniform_model(
            4,
            2.0,
            0.05,
            CouplingTensor([[0.4, -0.2, 0.1], [0.7, 0.3, 0.0], [0.2, 0.5, -0.6]]),
        );
        let mut shifted = model.clone();
        for e in shifted.epsilon.iter_mut() {
            *e += 3.0;
        }
        let diff = build_ses_hamiltonian(&shifted).into_matrix()
            - build_ses_hamiltonian(&model).into_matrix();
        let expected = CMatrix::identity(4, 4) * Complex64::new(3.0, 0.0);
        assert!(max_abs_diff(&diff, &expected) < 1e-14);
    }

    #[test]
    fn validate_thresholds() {
        let quiet = uniform_model(3, 1.0, 1e-3, CouplingTensor::xx());
        assert!(validate(&quiet).unwrap().is_empty());

        let mut loud = uniform_model(3, 1.0, 1e-3, CouplingTensor::xx());
        loud.couplings.set(0, 2, 0.5);
        let w = validate(&loud).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].pair, (0, 2));
        assert!(w[0].to_string().contains("(1, 3)"));

        let mut degenerate = uniform_model(2, 1.0, 0.1, CouplingTensor::xx());
        degenerate.epsilon[1] = 0.0;
        let w = validate(&degenerate).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].ratio, None);

        let mut bad = quiet.clone();
        bad.epsilon[0] = f64::NAN;
        assert!(matches!(validate(&bad), Err(ModelError::NonFinite(_))));
    }

    #[test]
    fn config_round_trip_and_errors() {
        let text = r#"{"n": 3, "epsilon": [5.0, 5.1, 4.9],
            "g": [[1, 2, 10.0], [2, 3, -5.0]],
            "J": [[1,0,0],[0,0,0],[0,0,0]]}"#;
        let model = HardwareModel::from_json_str(text).unwrap();
        assert!((model.epsilon[0] - std::f64::consts::TAU * 5.0).abs() < 1e-12);
        assert!((model.couplings.get(1, 0) - std::f64::consts::TAU * 0.01).abs() < 1e-15);
        assert_eq!(model.couplings.get(0, 2), 0.0);
        let back = HardwareModel::from_json_str(&model.to_json_string()).unwrap();
        assert!(
            max_abs_diff(
                build_ses_hamiltonian(&back).matrix(),
                build_ses_hamiltonian(&model).matrix()
            ) < 1e-12
        );

        let bad = r#"{"n": 2, "epsilon": [5.0, 5.0], "g": [[2, 1, 1.0]], "J": [[1,0,0],[0,0,0],[0,0,0]]}"#;
        assert!(matches!(
            HardwareModel::from_json_str(bad),
            Err(ModelError::BadCouplingIndex { i: 2, j: 1, n: 2 })
        ));
        let short = r#"{"n": 3, "epsilon": [5.0], "J": [[1,0,0],[0,0,0],[0,0,0]]}"#;
        assert!(matches!(
            HardwareModel::from_json_str(short),
            Err(ModelError::EnergyCount {
                expected: 3,
                found: 1
            })
        ));
    }
}

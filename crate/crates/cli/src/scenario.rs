//! JSON scenario files.
//!
//! ```json
//! {
//!   "dimension": 3,
//!   "observable_a": { "preset": "spin1_lx" },
//!   "observable_b": { "matrix": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]] },
//!   "state": { "preset": "theta", "theta": 0.785398163397 },
//!   "weights": [0.333333333333, 0.5],
//!   "basis": "standard",
//!   "optimizer": { "restarts": 16, "max_iterations": 2000, "tolerance": 1e-10, "seed": 0 }
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs.

use std::path::Path;

use serde::Deserialize;
use varbound_core::{
    pauli_operators, spin1_operators, theta_state, BasisMode, CMatrix, Complex64, HermitianObservable,
    OptimizerConfig, PureState, Weight,
};

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub dimension: usize,
    pub observable_a: ObservableSpec,
    pub observable_b: ObservableSpec,
    pub state: StateSpec,
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
    #[serde(default)]
    pub basis: Option<BasisField>,
    #[serde(default)]
    pub optimizer: Option<OptimizerSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableSpec {
    pub preset: Option<String>,
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub preset: Option<String>,
    pub theta: Option<f64>,
    pub vector: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum BasisField {
    Standard,
    Optimized,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerSpec {
    pub restarts: Option<usize>,
    pub max_iterations: Option<usize>,
    pub tolerance: Option<f64>,
    pub seed: Option<u64>,
}

/// Weights used when a scenario does not list any.
pub const DEFAULT_WEIGHTS: [f64; 2] = [1.0 / 3.0, 0.5];

pub const PRESETS: [&str; 6] = ["spin1_lx", "spin1_ly", "spin1_lz", "pauli_x", "pauli_y", "pauli_z"];

#[derive(Debug, Clone)]
pub enum StateChoice {
    Theta(f64),
    Fixed(PureState),
}

/// A validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub dimension: usize,
    pub a: HermitianObservable,
    pub b: HermitianObservable,
    pub state: StateChoice,
    pub weights: Vec<Weight>,
    pub basis: BasisMode,
    pub optimizer: OptimizerConfig,
}

impl Scenario {
    pub fn psi(&self) -> PureState {
        match &self.state {
            StateChoice::Theta(t) => theta_state(*t),
            StateChoice::Fixed(p) => p.clone(),
        }
    }
}

fn invalid(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{field}: {msg}"))
}

fn preset(name: &str) -> Option<HermitianObservable> {
    let (lx, ly, lz) = spin1_operators();
    let (x, y, z) = pauli_operators();
    Some(match name {
        "spin1_lx" => lx,
        "spin1_ly" => ly,
        "spin1_lz" => lz,
        "pauli_x" => x,
        "pauli_y" => y,
        "pauli_z" => z,
        _ => return None,
    })
}

fn complex(pair: &[f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

fn build_observable(field: &str, spec: &ObservableSpec, n: usize) -> Result<HermitianObservable, CliError> {
    let obs = match (&spec.preset, &spec.matrix) {
        (Some(name), None) => preset(name).ok_or_else(|| {
            invalid(field, format!("unknown preset {name:?}; expected one of {}", PRESETS.join(", ")))
        })?,
        (None, Some(rows)) => {
            if rows.len() != n {
                return Err(invalid(field, format!("matrix has {} rows, dimension is {n}", rows.len())));
            }
            for (i, row) in rows.iter().enumerate() {
                if row.len() != n {
                    return Err(invalid(&format!("{field}.matrix[{i}]"), format!("row has {} entries, dimension is {n}", row.len())));
                }
            }
            let rows: Vec<Vec<Complex64>> = rows.iter().map(|r| r.iter().map(complex).collect()).collect();
            let m = CMatrix::from_rows(&rows).map_err(|e| invalid(field, e))?;
            HermitianObservable::new(m).map_err(|e| invalid(field, e))?
        }
        _ => return Err(invalid(field, "exactly one of \"preset\" or \"matrix\" is required")),
    };
    if obs.dim() != n {
        return Err(invalid(field, format!("observable has dimension {}, scenario declares {n}", obs.dim())));
    }
    Ok(obs)
}

fn build_state(spec: &StateSpec, n: usize) -> Result<StateChoice, CliError> {
    match (&spec.preset, spec.theta, &spec.vector) {
        (Some(p), Some(theta), None) if p == "theta" => {
            if !theta.is_finite() {
                return Err(invalid("state.theta", "must be finite"));
            }
            if n != 3 {
                return Err(invalid("state", format!("the theta preset is 3-dimensional, scenario declares {n}")));
            }
            Ok(StateChoice::Theta(theta))
        }
        (Some(p), None, None) if p == "theta" => Err(invalid("state.theta", "required with the theta preset")),
        (Some(p), _, None) => Err(invalid("state.preset", format!("unknown preset {p:?}; expected \"theta\""))),
        (None, None, Some(v)) => {
            if v.len() != n {
                return Err(invalid("state.vector", format!("has {} entries, dimension is {n}", v.len())));
            }
            let psi = PureState::from_amplitudes(v.iter().map(complex).collect())
                .map_err(|e| invalid("state.vector", e))?;
            Ok(StateChoice::Fixed(psi))
        }
        _ => Err(invalid("state", "use either {\"preset\": \"theta\", \"theta\": R} or {\"vector\": [[re, im], ...]}")),
    }
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            CliError::Input(format!("scenario parse error at line {} column {}: {e}", e.line(), e.column()))
        })
    }

    pub fn validate(&self) -> Result<Scenario, CliError> {
        let n = self.dimension;
        if n == 0 {
            return Err(invalid("dimension", "must be at least 1"));
        }
        let a = build_observable("observable_a", &self.observable_a, n)?;
        let b = build_observable("observable_b", &self.observable_b, n)?;
        let state = build_state(&self.state, n)?;

        let raw_weights = self.weights.clone().unwrap_or_else(|| DEFAULT_WEIGHTS.to_vec());
        if raw_weights.is_empty() {
            return Err(invalid("weights", "must not be empty"));
        }
        let weights = raw_weights
            .iter()
            .enumerate()
            .map(|(i, &w)| Weight::new(w).map_err(|e| invalid(&format!("weights[{i}]"), e)))
            .collect::<Result<Vec<_>, _>>()?;

        let basis = match self.basis.unwrap_or(BasisField::Standard) {
            BasisField::Standard => BasisMode::Standard,
            BasisField::Optimized => BasisMode::Optimized,
        };

        let mut optimizer = OptimizerConfig::default();
        if let Some(o) = &self.optimizer {
            optimizer.restarts = o.restarts.unwrap_or(optimizer.restarts);
            optimizer.max_iterations = o.max_iterations.unwrap_or(optimizer.max_iterations);
            optimizer.tolerance = o.tolerance.unwrap_or(optimizer.tolerance);
            optimizer.seed = o.seed.unwrap_or(optimizer.seed);
        }
        optimizer.validate().map_err(|e| invalid("optimizer", e))?;

        Ok(Scenario { dimension: n, a, b, state, weights, basis, optimizer })
    }
}

pub fn load(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read scenario {}: {e}", path.display())))?;
    ScenarioFile::parse(&text)?.validate()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Scenario, CliError> {
        ScenarioFile::parse(text)?.validate()
    }

    #[test]
    fn presets_and_theta() {
        let s = parse(
            r#"{"dimension": 3, "observable_a": {"preset": "spin1_lx"}, "observable_b": {"preset": "spin1_ly"},
                "state": {"preset": "theta", "theta": 0.5}}"#,
        )
        .unwrap();
        assert_eq!(s.weights.len(), 2);
        assert_eq!(s.basis, BasisMode::Standard);
        assert_eq!(s.optimizer, OptimizerConfig::default());
        assert!(matches!(s.state, StateChoice::Theta(t) if t == 0.5));
    }

    #[test]
    fn explicit_matrix_and_vector() {
        let s = parse(
            r#"{"dimension": 2,
                "observable_a": {"matrix": [[[0,0],[0,-1]],[[0,1],[0,0]]]},
                "observable_b": {"preset": "pauli_z"},
                "state": {"vector": [[1,0],[0,0]]},
                "weights": [0.25], "basis": "optimized",
                "optimizer": {"restarts": 2, "seed": 9}}"#,
        )
        .unwrap();
        assert_eq!(s.basis, BasisMode::Optimized);
        assert_eq!(s.optimizer.restarts, 2);
        assert_eq!(s.optimizer.seed, 9);
        assert_eq!(s.optimizer.max_iterations, 2000);
    }

    #[test]
    fn diagnostics() {
        let cases = [
            (r#"{"dimension": 2, "observable_a": {"matrix": [[[0,0],[1,0]],[[2,0],[0,0]]]}, "observable_b": {"preset": "pauli_z"}, "state": {"vector": [[1,0],[0,0]]}}"#, "hermiticity"),
            (r#"{"dimension": 3, "observable_a": {"preset": "spin2_lx"}, "observable_b": {"preset": "spin1_ly"}, "state": {"preset": "theta", "theta": 0}}"#, "unknown preset"),
            (r#"{"dimension": 2, "observable_a": {"preset": "spin1_lx"}, "observable_b": {"preset": "pauli_z"}, "state": {"vector": [[1,0],[0,0]]}}"#, "observable_a"),
            (r#"{"dimension": 2, "observable_a": {"preset": "pauli_x"}, "observable_b": {"preset": "pauli_z"}, "state": {"vector": [[1,0],[1,0]]}}"#, "not normalized"),
            (r#"{"dimension": 3, "observable_a": {"preset": "spin1_lx"}, "observable_b": {"preset": "spin1_ly"}, "state": {"preset": "theta", "theta": 0}, "weights": [1.5]}"#, "weights[0]"),
            (r#"{"dimension": 3, "observable_a": {"preset": "spin1_lx"}, "observable_b": {"preset": "spin1_ly"}, "state": {"preset": "theta"}}"#, "state.theta"),
            (r#"{"dimension": 3, "observable_a": {"preset": "spin1_lx"},
                 "observable_b": {"preset": "spin1_ly"}, "state": {"preset": "theta", "theta": 0}, "bogus": 1}"#, "line 2"),
            (r#"{"dimension": 3, "observable_a": {"preset": "spin1_lx"}, "observable_b": {"preset": "spin1_ly"}, "state": {"preset": "theta", "theta": 0}, "optimizer": {"restarts": 0}}"#, "optimizer"),
        ];
        for (text, needle) in cases {
            let err = parse(text).unwrap_err();
            assert_eq!(err.exit_code(), 2);
            assert!(err.to_string().contains(needle), "{err} should mention {needle}");
        }
    }
}

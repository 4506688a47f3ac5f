//! Maximization of the Callebaut and Milne bounds over orthonormal bases.
//!
//! Bases are parameterized as an ordered product of complex Givens rotations
//! `G(i, j, θ, φ)`, one per index pair `i < j` in lexicographic order. Column
//! phases are left out: the bounds only see `|α_i|`, so they are flat
//! directions. Each restart runs a Nelder-Mead search over the raw angle
//! vector; raw angles are folded into canonical ranges before evaluation so
//! the objective stays continuous in the search coordinates.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{amplitude_noise_floor, callebaut_product, milne_product, MagnitudeVector, Weight};
use crate::error::{Error, Result};
use crate::neldermead::{self, Settings};
use crate::qcore::{
    centered_apply, variance, CMatrix, Complex64, ComplexVector, HermitianObservable,
    OrthonormalBasis, PureState,
};

/// Edge length (radians) of the starting simplex for each restart.
pub const SIMPLEX_STEP: f64 = 0.4;

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Folds any real angle onto `[0, π/2]` with a continuous triangle wave.
fn fold_theta(theta: f64) -> f64 {
    let t = theta.rem_euclid(PI);
    if t > FRAC_PI_2 {
        PI - t
    } else {
        t
    }
}

fn wrap_phi(phi: f64) -> f64 {
    let p = phi.rem_euclid(TAU);
    if p >= TAU {
        0.0
    } else {
        p
    }
}

/// Givens angles `(θ_k, φ_k)` for every pair `(i, j)`, `i < j`, in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisParams {
    n: usize,
    angles: Vec<(f64, f64)>,
}

impl BasisParams {
    /// Wraps each `(θ, φ)` into `[0, π/2] × [0, 2π)`.
    pub fn new(n: usize, angles: Vec<(f64, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDimension);
        }
        let expected = pair_count(n);
        if angles.len() != expected {
            return Err(Error::ParamCount { expected, found: angles.len() });
        }
        Ok(Self {
            n,
            angles: angles.into_iter().map(|(t, p)| (fold_theta(t), wrap_phi(p))).collect(),
        })
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, angles: vec![(0.0, 0.0); pair_count(n)] }
    }

    /// From a flat `[θ₀, φ₀, θ₁, φ₁, …]` vector.
    pub fn from_raw(n: usize, raw: &[f64]) -> Result<Self> {
        if raw.len() % 2 != 0 {
            return Err(Error::ParamCount { expected: pair_count(n), found: raw.len() / 2 });
        }
        Self::new(n, raw.chunks_exact(2).map(|p| (p[0], p[1])).collect())
    }

    /// Uniform draw over `[0, π/2] × [0, 2π)` per rotation.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let angles = (0..pair_count(n))
            .map(|_| (rng.random_range(0.0..FRAC_PI_2), rng.random_range(0.0..TAU)))
            .collect();
        Self { n, angles }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn angles(&self) -> &[(f64, f64)] {
        &self.angles
    }

    pub fn to_raw(&self) -> Vec<f64> {
        self.angles.iter().flat_map(|&(t, p)| [t, p]).collect()
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }
}

/// `G_m ⋯ G_2 G_1 I`, each `G_k` a rotation in the `(i, j)` plane:
/// `[[c, -e^{-iφ}s], [e^{iφ}s, c]]`.
pub fn unitary_from_params(p: &BasisParams, n: usize) -> Result<OrthonormalBasis> {
    let expected = pair_count(n);
    if p.n != n || p.angles.len() != expected {
        return Err(Error::ParamCount { expected, found: p.angles.len() });
    }
    let mut u = CMatrix::identity(n);
    for ((i, j), &(theta, phi)) in p.pairs().zip(&p.angles) {
        let (s, c) = theta.sin_cos();
        let e = Complex64::from_polar(1.0, phi);
        let g_ij = -e.conj() * s;
        let g_ji = e * s;
        for col in 0..n {
            let (ui, uj) = (u.get(i, col), u.get(j, col));
            u.set(i, col, ui * c + g_ij * uj);
            u.set(j, col, g_ji * ui + uj * c);
        }
    }
    Ok(OrthonormalBasis::from_unitary_unchecked(u))
}

/// Which bound the basis search maximizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ObjectiveKind {
    Callebaut(Weight),
    Milne,
}

impl ObjectiveKind {
    pub fn evaluate(self, a: &MagnitudeVector, b: &MagnitudeVector) -> Result<f64> {
        match self {
            Self::Callebaut(w) => callebaut_product(a, b, w),
            Self::Milne => milne_product(a, b),
        }
    }
}

/// Centered vectors `Ā|Ψ⟩`, `B̄|Ψ⟩` cached for repeated basis evaluation.
#[derive(Debug, Clone)]
pub struct Objective {
    n: usize,
    a_bar: ComplexVector,
    b_bar: ComplexVector,
    kind: ObjectiveKind,
    product: f64,
    floors: (f64, f64),
}

impl Objective {
    pub fn new(
        a: &HermitianObservable,
        b: &HermitianObservable,
        psi: &PureState,
        kind: ObjectiveKind,
    ) -> Result<Self> {
        let n = a.dim();
        if b.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.dim() });
        }
        Ok(Self {
            n,
            a_bar: centered_apply(a, psi)?,
            b_bar: centered_apply(b, psi)?,
            kind,
            product: variance(a, psi)? * variance(b, psi)?,
            floors: (amplitude_noise_floor(a), amplitude_noise_floor(b)),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// The basis-independent variance product bounding every objective value.
    pub fn variance_product(&self) -> f64 {
        self.product
    }

    pub fn in_basis(&self, basis: &OrthonormalBasis) -> Result<f64> {
        let a = MagnitudeVector::from_amplitudes_with_floor(&basis.coordinates(&self.a_bar)?, self.floors.0);
        let b = MagnitudeVector::from_amplitudes_with_floor(&basis.coordinates(&self.b_bar)?, self.floors.1);
        self.kind.evaluate(&a, &b)
    }

    pub fn at(&self, p: &BasisParams) -> Result<f64> {
        self.in_basis(&unitary_from_params(p, self.n)?)
    }
}

/// Bound value in the basis built from `p`.
pub fn objective(
    p: &BasisParams,
    a: &HermitianObservable,
    b: &HermitianObservable,
    psi: &PureState,
    kind: ObjectiveKind,
) -> Result<f64> {
    Objective::new(a, b, psi, kind)?.at(p)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { restarts: 16, max_iterations: 2000, tolerance: 1e-10, seed: 0 }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1"));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1"));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidConfig("tolerance must be positive and finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub best_value: f64,
    pub best_params: BasisParams,
    pub best_basis: OrthonormalBasis,
    pub evaluations: usize,
    pub per_restart_values: Vec<f64>,
}

struct RestartOutcome {
    value: f64,
    params: BasisParams,
    evaluations: usize,
}

fn run_restart(obj: &Objective, cfg: &OptimizerConfig, restart: usize) -> RestartOutcome {
    let n = obj.dim();
    let start = if restart == 0 {
        BasisParams::zeros(n)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(restart as u64));
        BasisParams::random(n, &mut rng)
    };
    let eval = |raw: &[f64]| {
        let p = BasisParams::from_raw(n, raw).expect("raw length fixed by the start point");
        -obj.at(&p).expect("dimensions fixed by the objective")
    };
    let settings = Settings {
        max_iterations: cfg.max_iterations,
        value_tol: cfg.tolerance,
        step: SIMPLEX_STEP,
    };
    let found = neldermead::minimize(eval, &start.to_raw(), settings);
    RestartOutcome {
        value: -found.value,
        params: BasisParams::from_raw(n, &found.x).expect("same length as start"),
        evaluations: found.evaluations,
    }
}

/// Multi-restart Nelder-Mead maximization of `kind` over bases. Restart 0
/// starts from the standard basis; restart `r > 0` from uniform angles drawn
/// with seed `cfg.seed + r`.
pub fn optimize(
    a: &HermitianObservable,
    b: &HermitianObservable,
    psi: &PureState,
    kind: ObjectiveKind,
    cfg: &OptimizerConfig,
) -> Result<OptResult> {
    cfg.validate()?;
    let obj = Objective::new(a, b, psi, kind)?;
    let outcomes: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(&obj, cfg, r))
        .collect();

    // first strict improvement wins, so ties go to the lowest restart index
    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.value > outcomes[best].value {
            best = i;
        }
    }
    let best_params = outcomes[best].params.clone();
    Ok(OptResult {
        best_value: outcomes[best].value,
        best_basis: unitary_from_params(&best_params, obj.dim())?,
        best_params,
        evaluations: outcomes.iter().map(|o| o.evaluations).sum(),
        per_restart_values: outcomes.iter().map(|o| o.value).collect(),
    })
}

/// Optimized `L₁` per weight and `L₂` for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizedBounds {
    pub l1: Vec<(f64, OptResult)>,
    pub l2: OptResult,
}

impl OptimizedBounds {
    pub fn combined(&self) -> f64 {
        self.l1.iter().map(|(_, r)| r.best_value).fold(self.l2.best_value, f64::max)
    }
}

pub fn optimize_all(
    a: &HermitianObservable,
    b: &HermitianObservable,
    psi: &PureState,
    weights: &[Weight],
    cfg: &OptimizerConfig,
) -> Result<OptimizedBounds> {
    if weights.is_empty() {
        return Err(Error::EmptyWeights);
    }
    let l1 = weights
        .iter()
        .map(|&w| Ok((w.value(), optimize(a, b, psi, ObjectiveKind::Callebaut(w), cfg)?)))
        .collect::<Result<Vec<_>>>()?;
    let l2 = optimize(a, b, psi, ObjectiveKind::Milne, cfg)?;
    Ok(OptimizedBounds { l1, l2 })
}

/// `max{L₁(λ) for λ in weights, L₂}`.
pub fn l1_l2_combined(
    a: &HermitianObservable,
    b: &HermitianObservable,
    psi: &PureState,
    weights: &[Weight],
    cfg: &OptimizerConfig,
) -> Result<f64> {
    Ok(optimize_all(a, b, psi, weights, cfg)?.combined())
}

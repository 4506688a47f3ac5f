//! Fixture constructors: spin-1 angular momentum, the θ state family, Pauli
//! matrices, seeded random ensembles, and θ sweeps over the bound report.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::basisopt::{optimize_all, OptimizedBounds, OptimizerConfig};
use crate::bounds::{full_report, BoundReport, Weight};
use crate::error::{Error, Result};
use crate::qcore::{CMatrix, Complex64, ComplexVector, HermitianObservable, OrthonormalBasis, PureState};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Spin-1 angular momentum matrices `(L_x, L_y, L_z)` with ħ = 1.
pub fn spin1_operators() -> (HermitianObservable, HermitianObservable, HermitianObservable) {
    let r = FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    let lx = HermitianObservable::from_rows(&[
        vec![z, c(r, 0.0), z],
        vec![c(r, 0.0), z, c(r, 0.0)],
        vec![z, c(r, 0.0), z],
    ]);
    let ly = HermitianObservable::from_rows(&[
        vec![z, c(0.0, -r), z],
        vec![c(0.0, r), z, c(0.0, -r)],
        vec![z, c(0.0, r), z],
    ]);
    let lz = HermitianObservable::diagonal(&[1.0, 0.0, -1.0]);
    (
        lx.expect("L_x is Hermitian"),
        ly.expect("L_y is Hermitian"),
        lz.expect("L_z is Hermitian"),
    )
}

/// `cos θ |1⟩ - sin θ |0⟩`, where `|1⟩ = e₁` and `|0⟩ = e₂` are the
/// `L_z` eigenvectors for eigenvalues 1 and 0.
pub fn theta_state(theta: f64) -> PureState {
    let (s, co) = theta.sin_cos();
    PureState::from_amplitudes(vec![c(co, 0.0), c(-s, 0.0), c(0.0, 0.0)])
        .expect("cos² + sin² = 1")
}

/// Pauli `(X, Y, Z)`.
pub fn pauli_operators() -> (HermitianObservable, HermitianObservable, HermitianObservable) {
    let z = c(0.0, 0.0);
    let x = HermitianObservable::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
    let y = HermitianObservable::from_rows(&[vec![z, c(0.0, -1.0)], vec![c(0.0, 1.0), z]]);
    let zz = HermitianObservable::diagonal(&[1.0, -1.0]);
    (
        x.expect("X is Hermitian"),
        y.expect("Y is Hermitian"),
        zz.expect("Z is Hermitian"),
    )
}

fn gaussian_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c(re, im)
}

/// `G + G†` with `G` complex Gaussian, deterministic per `(n, seed)`.
pub fn random_hermitian(n: usize, seed: u64) -> Result<HermitianObservable> {
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g: Vec<Complex64> = (0..n * n).map(|_| gaussian_complex(&mut rng)).collect();
    let g = CMatrix::from_row_major(n, g)?;
    HermitianObservable::new(g.add(&g.adjoint())?)
}

/// Normalized complex Gaussian vector, deterministic per `(n, seed)`.
pub fn random_state(n: usize, seed: u64) -> Result<PureState> {
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for stream in 1.. {
        let v: Vec<Complex64> = (0..n).map(|_| gaussian_complex(&mut rng)).collect();
        let v = ComplexVector::new(v)?;
        if v.norm_sqr() > 0.0 {
            return PureState::normalized(v);
        }
        // all-zero draw: move to a fresh substream
        rng.set_stream(stream);
    }
    unreachable!()
}

/// Haar-distributed-ish unitary via Gram-Schmidt on a complex Gaussian matrix.
pub fn random_basis(n: usize, seed: u64) -> Result<OrthonormalBasis> {
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n).map(|_| gaussian_complex(&mut rng)).collect();
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for q in &cols {
                let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    let mut m = CMatrix::zeros(n);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            m.set(i, j, z);
        }
    }
    OrthonormalBasis::new(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisMode {
    Standard,
    Optimized,
}

/// A θ grid plus what to evaluate at each point.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub theta_start: f64,
    pub theta_end: f64,
    pub steps: usize,
    pub weights: Vec<Weight>,
    pub basis_mode: BasisMode,
    pub optimizer: OptimizerConfig,
}

impl SweepSpec {
    /// `[0, π]` at 1° spacing in the standard basis.
    pub fn standard(weights: Vec<Weight>) -> Self {
        Self {
            theta_start: 0.0,
            theta_end: std::f64::consts::PI,
            steps: 181,
            weights,
            basis_mode: BasisMode::Standard,
            optimizer: OptimizerConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidSweep("steps must be at least 2"));
        }
        if !(self.theta_start.is_finite() && self.theta_end.is_finite()) {
            return Err(Error::InvalidSweep("theta range must be finite"));
        }
        if self.theta_end <= self.theta_start {
            return Err(Error::InvalidSweep("theta_end must exceed theta_start"));
        }
        if self.weights.is_empty() {
            return Err(Error::EmptyWeights);
        }
        if self.basis_mode == BasisMode::Optimized {
            self.optimizer.validate()?;
        }
        Ok(())
    }

    pub fn theta(&self, j: usize) -> f64 {
        if j + 1 == self.steps {
            return self.theta_end;
        }
        self.theta_start + j as f64 * (self.theta_end - self.theta_start) / (self.steps - 1) as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub report: BoundReport,
    /// Present when the sweep ran in optimized basis mode.
    pub optimized: Option<OptimizedBounds>,
}

/// Evaluates the bound report along `state_family` at each grid θ, rows in ascending θ.
pub fn sweep<F>(
    a: &HermitianObservable,
    b: &HermitianObservable,
    state_family: F,
    spec: &SweepSpec,
) -> Result<Vec<SweepRow>>
where
    F: Fn(f64) -> PureState + Sync,
{
    spec.validate()?;
    let basis = OrthonormalBasis::standard(a.dim());
    (0..spec.steps)
        .into_par_iter()
        .map(|j| {
            let theta = spec.theta(j);
            let psi = state_family(theta);
            let report = full_report(a, b, &psi, &basis, &spec.weights)?;
            let optimized = match spec.basis_mode {
                BasisMode::Standard => None,
                BasisMode::Optimized => Some(optimize_all(a, b, &psi, &spec.weights, &spec.optimizer)?),
            };
            Ok(SweepRow { theta, report, optimized })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::robertson_bound;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn commutator(a: &HermitianObservable, b: &HermitianObservable) -> CMatrix {
        a.matrix()
            .matmul(b.matrix())
            .unwrap()
            .sub(&b.matrix().matmul(a.matrix()).unwrap())
            .unwrap()
    }

    #[test]
    fn spin1_matrices() {
        let (lx, ly, lz) = spin1_operators();
        assert!((lx.matrix().get(0, 1).re - 0.70710678).abs() < 1e-8);
        assert_eq!(lz, HermitianObservable::diagonal(&[1.0, 0.0, -1.0]).unwrap());
        let i = c(0.0, 1.0);
        let ops = [&lx, &ly, &lz];
        // [L_i, L_j] = i ε_ijk L_k
        for (a, b, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            let lhs = commutator(ops[a], ops[b]);
            let rhs = ops[k].matrix().scale(i);
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn theta_state_examples() {
        assert_eq!(theta_state(0.0), PureState::basis(3, 0).unwrap());
        let s = theta_state(FRAC_PI_4);
        assert!((s.vector()[0].re - 0.70710678).abs() < 1e-8);
        assert!((s.vector()[1].re + 0.70710678).abs() < 1e-8);
        for t in [0.1, 1.0, 2.5] {
            assert!((theta_state(t).vector().norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pauli_algebra() {
        let (x, y, z) = pauli_operators();
        let x2 = x.matrix().matmul(x.matrix()).unwrap();
        assert!(x2.max_abs_diff(&CMatrix::identity(2)) < 1e-15);
        let xy = commutator(&x, &y);
        assert!(xy.max_abs_diff(&z.matrix().scale(c(0.0, 2.0))) < 1e-15);
        let up = PureState::basis(2, 0).unwrap();
        assert!((robertson_bound(&x, &y, &up).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_ensembles_are_valid_and_deterministic() {
        for n in 2..=6 {
            for seed in 0..100 {
                random_hermitian(n, seed).unwrap();
                let s = random_state(n, seed).unwrap();
                assert!((s.vector().norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
        assert_eq!(random_hermitian(4, 9).unwrap(), random_hermitian(4, 9).unwrap());
        assert_ne!(random_hermitian(4, 9).unwrap(), random_hermitian(4, 10).unwrap());
        assert_eq!(random_state(4, 9).unwrap(), random_state(4, 9).unwrap());
        assert_ne!(random_state(4, 9).unwrap(), random_state(4, 10).unwrap());
        let one = random_state(1, 3).unwrap();
        assert!((one.vector()[0].norm() - 1.0).abs() < 1e-12);
        assert_eq!(random_hermitian(0, 1), Err(Error::EmptyDimension));
    }

    #[test]
    fn random_basis_is_unitary() {
        for seed in 0..20 {
            let u = random_basis(5, seed).unwrap();
            assert!(crate::qcore::unitarity_deviation(u.matrix()) < 1e-12);
        }
    }

    fn standard_sweep() -> Vec<SweepRow> {
        let (lx, ly, _) = spin1_operators();
        let ws = vec![Weight::new(1.0 / 3.0).unwrap(), Weight::new(0.5).unwrap()];
        sweep(&lx, &ly, theta_state, &SweepSpec::standard(ws)).unwrap()
    }

    #[test]
    fn sweep_examples() {
        let rows = standard_sweep();
        assert_eq!(rows.len(), 181);
        assert_eq!(rows[0].theta, 0.0);
        assert_eq!(rows[180].theta, PI);
        let r0 = &rows[0].report;
        for v in [r0.product, r0.mbp, r0.milne, r0.callebaut[1].1] {
            assert!((v - 0.25).abs() < 1e-12);
        }
        let r45 = &rows[45].report;
        assert!((rows[45].theta - FRAC_PI_4).abs() < 1e-15);
        assert!((r45.milne - 0.125).abs() < 1e-12);
        assert!((r45.mbp - 0.0625).abs() < 1e-12);
        for row in &rows {
            let r = &row.report;
            assert!(r.callebaut[1].1 >= r.callebaut[0].1 - 1e-10);
            assert!(r.callebaut[0].1 >= r.mbp - 1e-10);
            assert!(row.theta > rows[0].theta || row.theta == 0.0);
        }
        assert!(rows.windows(2).all(|w| w[0].theta < w[1].theta));
    }

    #[test]
    fn sweep_tightness_and_periodicity() {
        let (lx, ly, _) = spin1_operators();
        let ws = vec![Weight::new(1.0 / 3.0).unwrap(), Weight::new(0.5).unwrap()];
        let spec = SweepSpec { theta_start: -1.0, theta_end: 2.0, steps: 31, ..SweepSpec::standard(ws.clone()) };
        let shifted = SweepSpec { theta_start: -1.0 + PI, theta_end: 2.0 + PI, ..spec.clone() };
        let a = sweep(&lx, &ly, theta_state, &spec).unwrap();
        let b = sweep(&lx, &ly, theta_state, &shifted).unwrap();
        for (ra, rb) in a.iter().zip(&b) {
            for ((_, x), (_, y)) in ra.report.bounds().iter().zip(rb.report.bounds()) {
                assert!((x - y).abs() < 1e-10);
            }
            assert!((ra.report.product - rb.report.product).abs() < 1e-10);
        }

        let basis = OrthonormalBasis::standard(3);
        for theta in [0.0, FRAC_PI_2] {
            let r = full_report(&lx, &ly, &theta_state(theta), &basis, &ws).unwrap();
            for v in [r.mbp, r.milne, r.callebaut[0].1, r.callebaut[1].1] {
                assert!((v - r.product).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn sweep_spec_validation() {
        let ws = vec![Weight::new(0.5).unwrap()];
        let bad_steps = SweepSpec { steps: 1, ..SweepSpec::standard(ws.clone()) };
        assert!(bad_steps.validate().is_err());
        let bad_range = SweepSpec { theta_end: -1.0, ..SweepSpec::standard(ws) };
        assert!(bad_range.validate().is_err());
        assert_eq!(SweepSpec::standard(vec![]).validate(), Err(Error::EmptyWeights));
    }
}

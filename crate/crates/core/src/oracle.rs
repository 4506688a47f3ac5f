//! Independent verifiers: random-basis search, inequality-chain scanners and
//! the aggregate property suite behind `varbound verify`.
//!
//! Reference sides of every inequality are recomputed here with compensated
//! summation rather than reusing the kernels under test.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::basisopt::{optimize, BasisParams, ObjectiveKind, Objective, OptimizerConfig};
use crate::bounds::{
    callebaut_product, full_report, magnitude_pair, mbp_bound, mbp_bound_literal, milne_product,
    robertson_bound, schrodinger_bound, MagnitudeVector, Weight, UPPER_BOUND_SLACK,
};
use crate::error::{Error, Result};
use crate::qcore::{
    amplitudes, centered_apply, inner, variance, CMatrix, Complex64, HermitianObservable,
    OrthonormalBasis, PureState,
};
use crate::scenarios::{random_basis, random_hermitian, random_state, spin1_operators, theta_state};

/// Relative tolerance for the Callebaut and Milne sandwich checks.
pub const SANDWICH_REL_TOL: f64 = 1e-10;

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Reference `(Σ a_i b_i)²` and `Σ a_i² · Σ b_i²`.
pub fn reference_endpoints(a: &[f64], b: &[f64]) -> (f64, f64) {
    let dot = compensated_sum(a.iter().zip(b).map(|(x, y)| x * y));
    let aa = compensated_sum(a.iter().map(|x| x * x));
    let bb = compensated_sum(b.iter().map(|y| y * y));
    (dot * dot, aa * bb)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub check: String,
    pub instance: String,
    pub observed: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckCount {
    pub runs: usize,
    pub failures: usize,
}

/// Aggregated outcome of a batch of checks.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks_run: usize,
    pub failures: Vec<Failure>,
    /// Most negative slack seen on any inequality check (`+∞` when none ran).
    pub worst_margin: f64,
    pub per_check: BTreeMap<String, CheckCount>,
}

impl Default for VerifyReport {
    fn default() -> Self {
        Self {
            checks_run: 0,
            failures: Vec::new(),
            worst_margin: f64::INFINITY,
            per_check: BTreeMap::new(),
        }
    }
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Records one check whose slack is `margin`; it fails when `margin < -tol`.
    pub fn record(&mut self, check: &str, instance: impl Into<String>, margin: f64, tol: f64, observed: impl Into<String>) {
        self.checks_run += 1;
        let entry = self.per_check.entry(check.to_string()).or_default();
        entry.runs += 1;
        // NaN margins count as failures
        let ok = margin >= -tol;
        if margin.is_nan() {
            self.worst_margin = f64::NEG_INFINITY;
        } else {
            self.worst_margin = self.worst_margin.min(margin);
        }
        if !ok {
            entry.failures += 1;
            self.failures.push(Failure {
                check: check.to_string(),
                instance: instance.into(),
                observed: observed.into(),
            });
        }
    }

    /// Records a pass/fail check that carries no numeric slack.
    pub fn record_outcome(&mut self, check: &str, instance: impl Into<String>, ok: bool, observed: impl Into<String>) {
        self.checks_run += 1;
        let entry = self.per_check.entry(check.to_string()).or_default();
        entry.runs += 1;
        if !ok {
            entry.failures += 1;
            self.failures.push(Failure {
                check: check.to_string(),
                instance: instance.into(),
                observed: observed.into(),
            });
        }
    }

    /// Commutative, associative combination of two reports (failure lists concatenate).
    pub fn merge(mut self, other: VerifyReport) -> VerifyReport {
        self.checks_run += other.checks_run;
        self.failures.extend(other.failures);
        self.worst_margin = self.worst_margin.min(other.worst_margin);
        for (k, v) in other.per_check {
            let e = self.per_check.entry(k).or_default();
            e.runs += v.runs;
            e.failures += v.failures;
        }
        self
    }
}

/// Relative slack `(hi - lo) / scale`, zero when everything vanishes.
fn rel_slack(lo: f64, hi: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        hi - lo
    } else {
        (hi - lo) / scale
    }
}

/// Best objective over `samples` uniformly drawn bases. Extending `samples`
/// with the same seed only appends draws, so the result never decreases.
pub fn random_basis_search(
    a: &HermitianObservable,
    b: &HermitianObservable,
    psi: &PureState,
    kind: ObjectiveKind,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidConfig("samples must be at least 1"));
    }
    let obj = Objective::new(a, b, psi, kind)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::NEG_INFINITY;
    for _ in 0..samples {
        let p = BasisParams::random(obj.dim(), &mut rng);
        best = best.max(obj.at(&p)?);
    }
    Ok(best)
}

fn describe(a: &[f64], b: &[f64]) -> String {
    format!("a={a:?} b={b:?}")
}

/// `(Σab)² ≤ callebaut(λ) ≤ Σa²Σb²` at every grid weight, plus monotonicity in λ.
///
/// Monotonicity is checked only between grid points with `λ < 1` when either
/// vector has a zero entry, since the zero-power convention makes the `λ = 1`
/// endpoint jump to `Σa²Σb²`.
pub fn check_sandwich_callebaut(a: &MagnitudeVector, b: &MagnitudeVector, grid: &[Weight]) -> VerifyReport {
    let mut report = VerifyReport::default();
    let (xa, xb) = (a.as_slice(), b.as_slice());
    if xa.len() != xb.len() {
        report.record_outcome("callebaut_sandwich", describe(xa, xb), false, "length mismatch");
        return report;
    }
    let (lower, upper) = reference_endpoints(xa, xb);
    let strictly_positive = xa.iter().chain(xb).all(|&x| x > 0.0);
    let mut prev: Option<(f64, f64)> = None;
    for &w in grid {
        let value = match callebaut_product(a, b, w) {
            Ok(v) => v,
            Err(e) => {
                report.record_outcome("callebaut_sandwich", describe(xa, xb), false, e.to_string());
                continue;
            }
        };
        let scale = upper.max(value).max(lower);
        let instance = || format!("{} lambda={}", describe(xa, xb), w.value());
        report.record(
            "callebaut_lower",
            instance(),
            rel_slack(lower, value, scale),
            SANDWICH_REL_TOL,
            format!("(sum ab)^2={lower} callebaut={value}"),
        );
        report.record(
            "callebaut_upper",
            instance(),
            rel_slack(value, upper, scale),
            SANDWICH_REL_TOL,
            format!("callebaut={value} sum a^2 sum b^2={upper}"),
        );
        if let Some((prev_lambda, prev_value)) = prev {
            let skip = !strictly_positive && w.value() == 1.0;
            if !skip {
                report.record(
                    "callebaut_monotone",
                    instance(),
                    rel_slack(prev_value, value, scale),
                    SANDWICH_REL_TOL,
                    format!("callebaut({prev_lambda})={prev_value} callebaut({})={value}", w.value()),
                );
            }
        }
        prev = Some((w.value(), value));
    }
    report
}

/// `(Σab)² ≤ milne ≤ Σa²Σb²`.
pub fn check_sandwich_milne(a: &MagnitudeVector, b: &MagnitudeVector) -> VerifyReport {
    let mut report = VerifyReport::default();
    let (xa, xb) = (a.as_slice(), b.as_slice());
    let value = match milne_product(a, b) {
        Ok(v) => v,
        Err(e) => {
            report.record_outcome("milne_sandwich", describe(xa, xb), false, e.to_string());
            return report;
        }
    };
    let (lower, upper) = reference_endpoints(xa, xb);
    let scale = upper.max(value).max(lower);
    report.record(
        "milne_lower",
        describe(xa, xb),
        rel_slack(lower, value, scale),
        SANDWICH_REL_TOL,
        format!("(sum ab)^2={lower} milne={value}"),
    );
    report.record(
        "milne_upper",
        describe(xa, xb),
        rel_slack(value, upper, scale),
        SANDWICH_REL_TOL,
        format!("milne={value} sum a^2 sum b^2={upper}"),
    );
    report
}

/// The λ grid `{0, 0.1, …, 1}`.
pub fn decile_grid() -> Vec<Weight> {
    (0..=10).map(|k| Weight::new(k as f64 / 10.0).expect("in range")).collect()
}

/// Random nonnegative vector pair; roughly one entry in eight is zeroed.
pub fn random_magnitudes(n: usize, rng: &mut ChaCha8Rng, allow_zeros: bool) -> (MagnitudeVector, MagnitudeVector) {
    let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..n)
            .map(|_| {
                if allow_zeros && rng.random_range(0..8) == 0 {
                    0.0
                } else {
                    // spread over several orders of magnitude
                    10f64.powf(rng.random_range(-2.0..2.0))
                }
            })
            .collect()
    };
    let a = draw(rng);
    let b = draw(rng);
    (
        MagnitudeVector::new(a).expect("nonnegative"),
        MagnitudeVector::new(b).expect("nonnegative"),
    )
}

/// Knobs for [`verify_suite_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// Corrupts one bound per trial so the harness can confirm failures surface.
    pub inject_fault: bool,
}

/// Optimizer budget used inside the verification suite.
pub fn verify_optimizer_config(seed: u64) -> OptimizerConfig {
    OptimizerConfig { restarts: 3, max_iterations: 300, tolerance: 1e-10, seed }
}

pub fn verify_suite(seed: u64, trials: usize) -> Result<VerifyReport> {
    verify_suite_with(seed, trials, VerifyOptions::default())
}

pub fn verify_suite_with(seed: u64, trials: usize, options: VerifyOptions) -> Result<VerifyReport> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1"));
    }
    let fixed = fixture_checks();
    let per_trial: Vec<VerifyReport> = (0..trials)
        .into_par_iter()
        .map(|t| trial_checks(seed.wrapping_add(t as u64), t, options))
        .collect();
    Ok(per_trial.into_iter().fold(fixed, VerifyReport::merge))
}

fn close_check(report: &mut VerifyReport, check: &str, instance: &str, got: f64, want: f64, tol: f64) {
    report.record(
        check,
        instance,
        -(got - want).abs(),
        tol,
        format!("got {got} want {want}"),
    );
}

/// Spin-1 analytic fixtures and construction rejection.
fn fixture_checks() -> VerifyReport {
    let mut report = VerifyReport::default();
    let (lx, ly, _) = spin1_operators();
    let std = OrthonormalBasis::standard(3);
    let weights = [Weight::new(1.0 / 3.0).expect("in range"), Weight::new(0.5).expect("in range")];
    let tol = 1e-10;

    let cases: [(f64, &str, [Option<f64>; 7]); 3] = [
        // product, robertson, schrodinger, mbp, milne, callebaut(1/3), callebaut(1/2)
        (0.0, "theta=0", [Some(0.25), Some(0.25), Some(0.25), Some(0.25), Some(0.25), Some(0.25), Some(0.25)]),
        (FRAC_PI_4, "theta=pi/4", [Some(0.1875), Some(0.0625), Some(0.0625), Some(0.0625), Some(0.125), Some(0.0625), Some(0.0625)]),
        (FRAC_PI_2, "theta=pi/2", [Some(1.0), Some(0.0), None, Some(1.0), Some(1.0), None, None]),
    ];
    for (theta, label, expected) in cases {
        match full_report(&lx, &ly, &theta_state(theta), &std, &weights) {
            Ok(r) => {
                let got = [r.product, r.robertson, r.schrodinger, r.mbp, r.milne, r.callebaut[0].1, r.callebaut[1].1];
                for (g, want) in got.iter().zip(expected) {
                    if let Some(w) = want {
                        close_check(&mut report, "spin1_fixture", label, *g, w, tol);
                    }
                }
            }
            Err(e) => report.record_outcome("spin1_fixture", label, false, e.to_string()),
        }
    }

    // deliberately non-Hermitian input must be rejected at construction
    let skew = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).expect("square");
    let rejected = matches!(HermitianObservable::new(skew), Err(Error::NotHermitian { .. }));
    report.record_outcome("rejects_non_hermitian", "[[0,1],[2,0]]", rejected, format!("rejected={rejected}"));
    report
}

fn trial_checks(seed: u64, trial: usize, options: VerifyOptions) -> VerifyReport {
    let mut report = VerifyReport::default();
    let n = 2 + trial % 5;
    let label = format!("seed={seed} n={n}");
    if let Err(e) = instance_checks(&mut report, seed, n, &label, options) {
        report.record_outcome("instance_setup", label.clone(), false, e.to_string());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a_5a5a);
    let len = 2 + trial % 7;
    let (a, b) = random_magnitudes(len, &mut rng, trial % 3 == 0);
    report = report.merge(check_sandwich_callebaut(&a, &b, &decile_grid()));
    report = report.merge(check_sandwich_milne(&a, &b));
    report
}

fn instance_checks(
    report: &mut VerifyReport,
    seed: u64,
    n: usize,
    label: &str,
    options: VerifyOptions,
) -> Result<()> {
    let a = random_hermitian(n, seed.wrapping_mul(3))?;
    let b = random_hermitian(n, seed.wrapping_mul(3).wrapping_add(1))?;
    let psi = random_state(n, seed.wrapping_mul(3).wrapping_add(2))?;
    let basis = random_basis(n, seed.wrapping_add(1 << 32))?;
    let var_a = variance(&a, &psi)?;
    let var_b = variance(&b, &psi)?;
    let product = var_a * var_b;
    let scale = product.max(1.0);

    // Parseval in a random basis
    let alpha = amplitudes(&a, &psi, &basis)?;
    let beta = amplitudes(&b, &psi, &basis)?;
    let parseval = compensated_sum(alpha.as_slice().iter().map(|z| z.norm_sqr()));
    close_check(report, "parseval", label, parseval, var_a, 1e-10 * var_a.max(1.0));

    // ⟨α|β⟩ = ⟨Ψ|ĀB̄|Ψ⟩
    let direct = inner(&centered_apply(&a, &psi)?, &centered_apply(&b, &psi)?)?;
    let via_basis: Complex64 = inner(&alpha, &beta)?;
    report.record(
        "completeness",
        label,
        -(direct - via_basis).norm(),
        1e-10 * scale,
        format!("direct={direct} basis={via_basis}"),
    );

    let simple = mbp_bound(&a, &b, &psi, &basis)?;
    let literal = mbp_bound_literal(&a, &b, &psi, &basis)?;
    close_check(report, "mbp_literal", label, literal, simple, 1e-12 * scale);

    let (ma, mb) = magnitude_pair(&a, &b, &psi, &basis)?;
    let mut milne = milne_product(&ma, &mb)?;
    if options.inject_fault {
        milne += 1.0 + product;
    }
    report.record("dominance_milne", label, milne - simple, 1e-10 * scale, format!("mbp={simple} milne={milne}"));
    for w in decile_grid() {
        let cb = callebaut_product(&ma, &mb, w)?;
        report.record(
            "dominance_callebaut",
            format!("{label} lambda={}", w.value()),
            cb - simple,
            1e-10 * scale,
            format!("mbp={simple} callebaut={cb}"),
        );
    }

    let weights = [Weight::new(1.0 / 3.0)?, Weight::new(0.5)?];
    let mut r = full_report(&a, &b, &psi, &basis, &weights)?;
    r.milne = milne;
    for (name, value) in r.bounds() {
        report.record(
            "upper_bound",
            format!("{label} {name}"),
            product + UPPER_BOUND_SLACK - value,
            0.0,
            format!("{name}={value} product={product}"),
        );
    }

    let rob = robertson_bound(&a, &b, &psi)?;
    let sch = schrodinger_bound(&a, &b, &psi)?;
    report.record("robertson_le_schrodinger", label, sch - rob, 1e-10 * scale, format!("robertson={rob} schrodinger={sch}"));
    report.record("schrodinger_le_product", label, product - sch, 1e-10 * scale, format!("schrodinger={sch} product={product}"));

    // optimizer anchor and soundness on a 3-dimensional instance
    let a3 = random_hermitian(3, seed.wrapping_mul(5))?;
    let b3 = random_hermitian(3, seed.wrapping_mul(5).wrapping_add(1))?;
    let psi3 = random_state(3, seed.wrapping_mul(5).wrapping_add(2))?;
    let kind = if seed % 2 == 0 { ObjectiveKind::Milne } else { ObjectiveKind::Callebaut(Weight::new(0.5)?) };
    let opt = optimize(&a3, &b3, &psi3, kind, &verify_optimizer_config(seed))?;
    let std_value = Objective::new(&a3, &b3, &psi3, kind)?.at(&BasisParams::zeros(3))?;
    let product3 = variance(&a3, &psi3)? * variance(&b3, &psi3)?;
    report.record(
        "optimizer_anchor",
        label,
        opt.best_value - std_value,
        1e-12,
        format!("optimized={} standard={std_value}", opt.best_value),
    );
    report.record(
        "optimizer_sound",
        label,
        product3 + UPPER_BOUND_SLACK - opt.best_value,
        0.0,
        format!("optimized={} product={product3}", opt.best_value),
    );
    Ok(())
}

//! Lower bounds on the variance product `(ΔA)²(ΔB)²`.
//!
//! The basis-free bounds (Robertson, Schrödinger) work directly on the
//! observables. The basis-dependent bounds reduce the centered amplitudes to
//! nonnegative magnitude vectors and hand them to real-sequence kernels
//! ([`callebaut_product`], [`milne_product`]) that can be tested in isolation.

use crate::error::{Error, Result};
use crate::qcore::{
    amplitudes, ComplexVector, anticommutator_expectation, commutator_expectation, expectation, variance,
    CMatrix, Complex64, HermitianObservable, OrthonormalBasis, PureState,
};

/// Slack allowed when checking a bound against the variance product.
pub const UPPER_BOUND_SLACK: f64 = 1e-8;

/// Entrywise magnitudes `|α_i|`: nonnegative and finite.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnitudeVector(Vec<f64>);

impl MagnitudeVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = entries
            .iter()
            .enumerate()
            .find(|(_, x)| !(x.is_finite() && **x >= 0.0))
        {
            return Err(Error::InvalidMagnitude { index, value });
        }
        Ok(Self(entries))
    }

    pub fn from_amplitudes(alpha: &ComplexVector) -> Self {
        Self(alpha.magnitudes())
    }

    /// Magnitudes with every entry at or below `floor` set to exactly zero.
    pub fn from_amplitudes_with_floor(alpha: &ComplexVector, floor: f64) -> Self {
        Self(
            alpha
                .as_slice()
                .iter()
                .map(|z| {
                    let m = z.norm();
                    if m <= floor {
                        0.0
                    } else {
                        m
                    }
                })
                .collect(),
        )
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Interpolation weight `λ ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Weight(f64);

impl Weight {
    pub fn new(lambda: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&lambda) {
            Ok(Self(lambda))
        } else {
            Err(Error::InvalidWeight(lambda))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Weight {
    type Error = Error;

    fn try_from(lambda: f64) -> Result<Self> {
        Self::new(lambda)
    }
}

/// `x^p` with `0^0 = 1` and `0^p = 0` for `p > 0`.
#[inline]
fn pow0(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        if p == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        x.powf(p)
    }
}

fn check_lengths(a: &MagnitudeVector, b: &MagnitudeVector) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    Ok(())
}

/// `Σ a^{1+λ} b^{1-λ} · Σ a^{1-λ} b^{1+λ}`.
pub fn callebaut_product(a: &MagnitudeVector, b: &MagnitudeVector, w: Weight) -> Result<f64> {
    check_lengths(a, b)?;
    let lam = w.value();
    let (mut left, mut right) = (0.0, 0.0);
    for (&x, &y) in a.0.iter().zip(&b.0) {
        left += pow0(x, 1.0 + lam) * pow0(y, 1.0 - lam);
        right += pow0(x, 1.0 - lam) * pow0(y, 1.0 + lam);
    }
    Ok(left * right)
}

/// `Σ (a² + b²) · Σ a²b² / (a² + b²)`, with `0/0` terms dropped.
pub fn milne_product(a: &MagnitudeVector, b: &MagnitudeVector) -> Result<f64> {
    check_lengths(a, b)?;
    let (mut total, mut harmonic) = (0.0, 0.0);
    for (&x, &y) in a.0.iter().zip(&b.0) {
        let (x2, y2) = (x * x, y * y);
        let s = x2 + y2;
        total += s;
        if s > 0.0 {
            harmonic += x2 * y2 / s;
        }
    }
    Ok(total * harmonic)
}

/// `(Σ a_i b_i)²`, the Cauchy-Schwarz side of both sandwiches.
pub fn cauchy_schwarz_product(a: &MagnitudeVector, b: &MagnitudeVector) -> Result<f64> {
    check_lengths(a, b)?;
    let s: f64 = a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum();
    Ok(s * s)
}

/// Robertson: `¼|⟨[A, B]⟩|²`.
pub fn robertson_bound(
    a: &HermitianObservable,
    b: &HermitianObservable,
    psi: &PureState,
) -> Result<f64> {
    Ok(0.25 * commutator_expectation(a, b, psi)?.norm_sqr())
}

/// Schrödinger: Robertson plus the squared covariance `½⟨{A,B}⟩ - ⟨A⟩⟨B⟩`.
pub fn schrodinger_bound(
    a: &HermitianObservable,
    b: &HermitianObservable,
    psi: &PureState,
) -> Result<f64> {
    let cov = 0.5 * anticommutator_expectation(a, b, psi)? - expectation(a, psi)? * expectation(b, psi)?;
    Ok(robertson_bound(a, b, psi)? + cov * cov)
}

/// Roundoff level of the centered amplitudes of `a` on a unit state.
///
/// The fractional powers in the Callebaut kernel turn a residue of 1e-16 into
/// an error of 1e-8 at λ = ½, so magnitudes below this level are treated as
/// exact zeros.
pub fn amplitude_noise_floor(a: &HermitianObservable) -> f64 {
    let frobenius = a.matrix().as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    16.0 * a.dim() as f64 * f64::EPSILON * frobenius
}

/// Magnitudes `(|α|, |β|)` of both centered observables in `basis`, with
/// roundoff-level entries snapped to zero.
pub fn magnitude_pair(
    a: &HermitianObservable,
    b: &HermitianObservable,
    psi: &PureState,
    basis: &OrthonormalBasis,
) -> Result<(MagnitudeVector, MagnitudeVector)> {
    let alpha = amplitudes(a, psi, basis)?;
    let beta = amplitudes(b, psi, basis)?;
    Ok((
        MagnitudeVector::from_amplitudes_with_floor(&alpha, amplitude_noise_floor(a)),
        MagnitudeVector::from_amplitudes_with_floor(&beta, amplitude_noise_floor(b)),
    ))
}

/// Mondal-Bagchi-Pati bound in amplitude form, `(Σ |α_n||β_n|)²`.
pub fn mbp_bound(
    a: &HermitianObservable,
    b: &HermitianObservable,
    psi: &PureState,
    basis: &OrthonormalBasis,
) -> Result<f64> {
    let (ma, mb) = magnitude_pair(a, b, psi, basis)?;
    cauchy_schwarz_product(&ma, &mb)
}

fn centered_matrix(a: &HermitianObservable, psi: &PureState) -> Result<CMatrix> {
    let mean = expectation(a, psi)?;
    a.matrix()
        .sub(&CMatrix::identity(a.dim()).scale(Complex64::new(mean, 0.0)))
}

/// Mondal-Bagchi-Pati bound evaluated in operator form:
/// `¼ (Σ_n |⟨[Ā, B̄_n]⟩ + ⟨{Ā, B̄_n}⟩|)²` with `B̄_n = |φ_n⟩⟨φ_n| B̄`.
pub fn mbp_bound_literal(
    a: &HermitianObservable,
    b: &HermitianObservable,
    psi: &PureState,
    basis: &OrthonormalBasis,
) -> Result<f64> {
    let n = a.dim();
    for d in [b.dim(), psi.dim(), basis.dim()] {
        if d != n {
            return Err(Error::DimensionMismatch { expected: n, found: d });
        }
    }
    let a_bar = centered_matrix(a, psi)?;
    let b_bar = centered_matrix(b, psi)?;
    let v = psi.vector();
    let mut total = 0.0;
    for k in 0..n {
        let phi = basis.column(k);
        let projector = CMatrix::outer(&phi, &phi);
        let b_k = projector.matmul(&b_bar)?;
        let ab = a_bar.matmul(&b_k)?;
        let ba = b_k.matmul(&a_bar)?;
        let commutator = ab.sub(&ba)?.sandwich(v, v)?;
        let anticommutator = ab.add(&ba)?.sandwich(v, v)?;
        total += (commutator + anticommutator).norm();
    }
    Ok(0.25 * total * total)
}

fn validate_weights(weights: &[Weight]) -> Result<()> {
    if weights.is_empty() {
        Err(Error::EmptyWeights)
    } else {
        Ok(())
    }
}

/// `max{callebaut_product(λ) for λ in weights, milne_product}` in a fixed basis.
pub fn combined_bound(
    a: &HermitianObservable,
    b: &HermitianObservable,
    psi: &PureState,
    basis: &OrthonormalBasis,
    weights: &[Weight],
) -> Result<f64> {
    validate_weights(weights)?;
    let (ma, mb) = magnitude_pair(a, b, psi, basis)?;
    let mut best = milne_product(&ma, &mb)?;
    for &w in weights {
        best = best.max(callebaut_product(&ma, &mb, w)?);
    }
    Ok(best)
}

/// Every bound for one `(A, B, Ψ, basis)` instance next to the variance product.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub variance_a: f64,
    pub variance_b: f64,
    pub product: f64,
    pub robertson: f64,
    pub schrodinger: f64,
    pub mbp: f64,
    /// `(λ, value)` in the order the weights were supplied.
    pub callebaut: Vec<(f64, f64)>,
    pub milne: f64,
    pub combined: f64,
}

impl BoundReport {
    /// Named bound values, in a fixed order.
    pub fn bounds(&self) -> Vec<(String, f64)> {
        let mut out = vec![
            ("robertson".to_string(), self.robertson),
            ("schrodinger".to_string(), self.schrodinger),
            ("mbp".to_string(), self.mbp),
        ];
        out.extend(self.callebaut.iter().map(|(l, v)| (format!("callebaut_{l:.6}"), *v)));
        out.push(("milne".to_string(), self.milne));
        out.push(("combined".to_string(), self.combined));
        out
    }

    /// Descriptions of any broken report invariants; empty when the report is sound.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, value) in self.bounds() {
            if value > self.product + UPPER_BOUND_SLACK {
                out.push(format!("{name} = {value} exceeds product {}", self.product));
            }
            if !(value >= 0.0) {
                out.push(format!("{name} = {value} is negative"));
            }
        }
        for (name, value) in [
            ("variance_a", self.variance_a),
            ("variance_b", self.variance_b),
            ("product", self.product),
        ] {
            if !(value >= 0.0) {
                out.push(format!("{name} = {value} is negative"));
            }
        }
        out
    }
}

pub fn full_report(
    a: &HermitianObservable,
    b: &HermitianObservable,
    psi: &PureState,
    basis: &OrthonormalBasis,
    weights: &[Weight],
) -> Result<BoundReport> {
    validate_weights(weights)?;
    let variance_a = variance(a, psi)?;
    let variance_b = variance(b, psi)?;
    let (ma, mb) = magnitude_pair(a, b, psi, basis)?;
    let callebaut = weights
        .iter()
        .map(|&w| Ok((w.value(), callebaut_product(&ma, &mb, w)?)))
        .collect::<Result<Vec<_>>>()?;
    let milne = milne_product(&ma, &mb)?;
    let combined = callebaut.iter().map(|&(_, v)| v).fold(milne, f64::max);
    Ok(BoundReport {
        variance_a,
        variance_b,
        product: variance_a * variance_b,
        robertson: robertson_bound(a, b, psi)?,
        schrodinger: schrodinger_bound(a, b, psi)?,
        mbp: cauchy_schwarz_product(&ma, &mb)?,
        callebaut,
        milne,
        combined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::{pauli_operators, spin1_operators, theta_state};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn mags(x: &[f64]) -> MagnitudeVector {
        MagnitudeVector::new(x.to_vec()).unwrap()
    }

    fn w(x: f64) -> Weight {
        Weight::new(x).unwrap()
    }

    fn spin_pair() -> (HermitianObservable, HermitianObservable) {
        let (lx, ly, _) = spin1_operators();
        (lx, ly)
    }

    #[test]
    fn weight_and_magnitude_validation() {
        assert_eq!(Weight::new(1.5), Err(Error::InvalidWeight(1.5)));
        assert_eq!(Weight::new(-0.1), Err(Error::InvalidWeight(-0.1)));
        assert!(Weight::new(f64::NAN).is_err());
        assert!(MagnitudeVector::new(vec![1.0, -1.0]).is_err());
        assert!(MagnitudeVector::new(vec![f64::INFINITY]).is_err());
        assert!(matches!(
            callebaut_product(&mags(&[1.0]), &mags(&[1.0, 2.0]), w(0.5)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(milne_product(&mags(&[1.0]), &mags(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn robertson_examples() {
        let d1 = HermitianObservable::diagonal(&[1.0, -2.0, 0.5]).unwrap();
        let d2 = HermitianObservable::diagonal(&[3.0, 1.0, 0.0]).unwrap();
        assert_eq!(robertson_bound(&d1, &d2, &theta_state(0.7)).unwrap(), 0.0);

        let (lx, ly) = spin_pair();
        assert!((robertson_bound(&lx, &ly, &theta_state(FRAC_PI_4)).unwrap() - 0.0625).abs() < 1e-12);
        assert!(robertson_bound(&lx, &ly, &theta_state(FRAC_PI_2)).unwrap().abs() < 1e-12);

        let (x, y, _) = pauli_operators();
        let up = PureState::basis(2, 0).unwrap();
        assert!((robertson_bound(&x, &y, &up).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn schrodinger_examples() {
        let (lx, ly) = spin_pair();
        let psi = theta_state(0.4);
        let v = variance(&lx, &psi).unwrap();
        assert!((schrodinger_bound(&lx, &lx, &psi).unwrap() - v * v).abs() < 1e-12);
        assert!((schrodinger_bound(&lx, &ly, &theta_state(FRAC_PI_4)).unwrap() - 0.0625).abs() < 1e-12);
        assert!((schrodinger_bound(&lx, &ly, &theta_state(0.0)).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn mbp_examples_both_forms() {
        let (lx, ly) = spin_pair();
        let std = OrthonormalBasis::standard(3);
        let id = HermitianObservable::identity(3);
        let cases = [
            (&id, &ly, theta_state(0.3), 0.0),
            (&lx, &ly, theta_state(0.0), 0.25),
            (&lx, &ly, theta_state(FRAC_PI_4), 0.0625),
            (&lx, &id, theta_state(0.9), 0.0),
        ];
        for (a, b, psi, want) in cases {
            let simple = mbp_bound(a, b, &psi, &std).unwrap();
            let literal = mbp_bound_literal(a, b, &psi, &std).unwrap();
            assert!((simple - want).abs() < 1e-12, "{simple} vs {want}");
            assert!((literal - simple).abs() < 1e-12, "{literal} vs {simple}");
        }
    }

    #[test]
    fn callebaut_examples() {
        let a = mags(&[1.0, 2.0]);
        let b = mags(&[2.0, 1.0]);
        assert!((callebaut_product(&a, &b, w(0.0)).unwrap() - 16.0).abs() < 1e-12);
        assert!((callebaut_product(&a, &b, w(0.5)).unwrap() - 18.0).abs() < 1e-12);
        assert!((callebaut_product(&a, &b, w(1.0)).unwrap() - 25.0).abs() < 1e-12);

        let alpha = mags(&[0.0, 0.0, 0.5]);
        let beta = mags(&[0.5, 0.5, 0.5]);
        assert!((callebaut_product(&alpha, &beta, w(0.5)).unwrap() - 0.0625).abs() < 1e-15);
        assert!((callebaut_product(&alpha, &beta, w(1.0)).unwrap() - 0.1875).abs() < 1e-15);
    }

    #[test]
    fn milne_examples() {
        assert_eq!(milne_product(&mags(&[0.0, 0.0]), &mags(&[0.0, 0.0])).unwrap(), 0.0);
        let v = milne_product(&mags(&[1.0, 2.0]), &mags(&[2.0, 1.0])).unwrap();
        assert!((v - 16.0).abs() < 1e-12);
        let v = milne_product(&mags(&[0.0, 0.0, 0.5]), &mags(&[0.5, 0.5, 0.5])).unwrap();
        assert!((v - 0.125).abs() < 1e-15);
    }

    #[test]
    fn combined_examples() {
        let (lx, ly) = spin_pair();
        let std = OrthonormalBasis::standard(3);
        let ws = [w(1.0 / 3.0), w(0.5)];
        let v = combined_bound(&lx, &ly, &theta_state(FRAC_PI_4), &std, &ws).unwrap();
        assert!((v - 0.125).abs() < 1e-12);
        let v = combined_bound(&lx, &ly, &theta_state(0.0), &std, &[w(0.7)]).unwrap();
        assert!((v - 0.25).abs() < 1e-12);
        let id = HermitianObservable::identity(3);
        assert_eq!(combined_bound(&id, &ly, &theta_state(0.2), &std, &ws).unwrap(), 0.0);
        assert_eq!(
            combined_bound(&lx, &ly, &theta_state(0.2), &std, &[]),
            Err(Error::EmptyWeights)
        );
    }

    #[test]
    fn full_report_examples() {
        let (lx, ly) = spin_pair();
        let std = OrthonormalBasis::standard(3);
        let ws = [w(1.0 / 3.0), w(0.5)];

        let r = full_report(&lx, &ly, &theta_state(FRAC_PI_4), &std, &ws).unwrap();
        let tol = 1e-12;
        assert!((r.product - 0.1875).abs() < tol);
        assert!((r.robertson - 0.0625).abs() < tol);
        assert!((r.schrodinger - 0.0625).abs() < tol);
        assert!((r.mbp - 0.0625).abs() < tol);
        for &(_, v) in &r.callebaut {
            assert!((v - 0.0625).abs() < tol);
        }
        assert!((r.milne - 0.125).abs() < tol);
        assert!((r.combined - 0.125).abs() < tol);
        assert!(r.invariant_violations().is_empty());

        let r = full_report(&lx, &ly, &theta_state(FRAC_PI_2), &std, &ws).unwrap();
        assert!((r.product - 1.0).abs() < tol);
        assert!(r.robertson.abs() < tol);
        assert!((r.mbp - 1.0).abs() < tol);
        assert!((r.milne - 1.0).abs() < tol);

        let id = HermitianObservable::identity(3);
        let r = full_report(&id, &id, &theta_state(1.1), &std, &ws).unwrap();
        assert_eq!(r.product, 0.0);
        for (_, v) in r.bounds() {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn violations_are_reported() {
        let mut r = full_report(
            &spin_pair().0,
            &spin_pair().1,
            &theta_state(FRAC_PI_4),
            &OrthonormalBasis::standard(3),
            &[w(0.5)],
        )
        .unwrap();
        r.milne = 1.0;
        assert_eq!(r.invariant_violations().len(), 1);
    }
}

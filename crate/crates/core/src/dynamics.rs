//! Time-dependent Hamiltonians H(t) = H₀/(1+t²) generated by the unitary
//! braid matrix, their closed-form propagators, and self-consistency
//! residuals against the unitary R̃ family.

use num_complex::Complex64;

use crate::braid::{BraidSpec, SpectralPoint};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::{TwoKaonState, NORM_TOL};

const MINUS_I: Complex64 = Complex64::new(0.0, -1.0);

/// Constant generator H₀ = −i·b̃² together with the envelope 1/(1+t²).
///
/// H₀ is Hermitian and squares to the identity because b̃⁴ = −I.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianFamily {
    spec: BraidSpec,
    generator: ComplexMatrix,
}

impl HamiltonianFamily {
    pub fn new(spec: BraidSpec) -> Self {
        let bt = spec.unitary_braid();
        let generator = (&bt * &bt).scale(MINUS_I);
        Self { spec, generator }
    }

    pub fn spec(&self) -> &BraidSpec {
        &self.spec
    }

    pub fn generator(&self) -> &ComplexMatrix {
        &self.generator
    }

    /// f(t) = 1/(1+t²); even in t, with ∫₀ᵗ f = arctan t.
    pub fn profile(t: f64) -> f64 {
        1.0 / (1.0 + t * t)
    }

    pub fn at(&self, t: f64) -> ComplexMatrix {
        self.generator.scale_real(Self::profile(t))
    }

    /// exp(−i·(arctan t₁ − arctan t₀)·H₀). Exact because H(t) commutes with
    /// itself at all times.
    pub fn propagator(&self, t0: f64, t1: f64) -> Result<ComplexMatrix> {
        if !(t0.is_finite() && t1.is_finite()) {
            return Err(Error::Domain("propagator times must be finite".into()));
        }
        if t0 == t1 {
            return Ok(ComplexMatrix::identity(4)?);
        }
        let angle = t1.atan() - t0.atan();
        Ok(self.generator.scale(MINUS_I * angle).exp_normal()?)
    }
}

pub fn hamiltonian_at(spec: &BraidSpec, t: f64) -> ComplexMatrix {
    HamiltonianFamily::new(*spec).at(t)
}

pub fn propagator(spec: &BraidSpec, t0: f64, t1: f64) -> Result<ComplexMatrix> {
    HamiltonianFamily::new(*spec).propagator(t0, t1)
}

pub fn evolve_state(
    state: &TwoKaonState,
    spec: &BraidSpec,
    t0: f64,
    t1: f64,
) -> Result<TwoKaonState> {
    let norm = state.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::Validation(format!(
            "state must be normalized before evolution, norm = {norm}"
        )));
    }
    if t0 == t1 {
        return Ok(*state);
    }
    state.apply(&propagator(spec, t0, t1)?)
}

/// Central-difference residual of i∂ₜΨ = H(t)Ψ along the trajectory that
/// starts from `state0` at t = 0.
pub fn schrodinger_residual(
    state0: &TwoKaonState,
    spec: &BraidSpec,
    t: f64,
    dt: f64,
) -> Result<f64> {
    if !(dt > 0.0 && dt <= 1e-3) {
        return Err(Error::Domain(format!("dt must lie in (0, 1e-3], got {dt}")));
    }
    let family = HamiltonianFamily::new(*spec);
    let psi0 = state0.to_vector();
    let at = |s: f64| -> Result<_> { Ok(family.propagator(0.0, s)?.apply(&psi0)?) };
    let (before, now, after) = (at(t - dt)?, at(t)?, at(t + dt)?);
    let h_psi = family.at(t).apply(&now)?;
    let scale = Complex64::new(0.0, 1.0 / (2.0 * dt));
    Ok(after.sub(&before)?.scale(scale).sub(&h_psi)?.norm())
}

/// ‖R̃(θ(t))·R̃(θ(0))⁻¹ − U(0, t)‖_F with θ(t) = arctan t.
pub fn r_vs_hamiltonian_consistency(spec: &BraidSpec, t: f64) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!("t must be finite and >= 0, got {t}")));
    }
    let r_t = spec.unitary_r(&SpectralPoint::from_x(t, spec.phi())?)?;
    let r_0 = spec.unitary_r(&SpectralPoint::from_x(0.0, spec.phi())?)?;
    let relative = &r_t * &r_0.inverse()?;
    Ok((&relative - &propagator(spec, 0.0, t)?).frobenius_norm())
}

/// The 4×4 bracket M in H(1) = (i/2)·M, written out entrywise:
/// rows (0,0,0,−e^{iφ}), (0,0,∓1,0), (0,±1,0,0), (e^{−iφ},0,0,0).
pub fn unit_time_bracket(spec: &BraidSpec) -> ComplexMatrix {
    let z = Complex64::new(0.0, 0.0);
    let s = Complex64::new(spec.sign().value(), 0.0);
    let q = spec.q();
    ComplexMatrix::from_rows([
        [z, z, z, -q],
        [z, z, -s, z],
        [z, s, z, z],
        [q.conj(), z, z, z],
    ])
    .expect("finite entries")
}

/// Comparison of the rows of M = −2i·H(1), read against the ket column, with
/// the reference component pattern (−e^{−iφ}K̄K̄, ∓K̄K, ±KK̄, e^{−iφ}KK).
#[derive(Debug, Clone, PartialEq)]
pub struct ImagePatternReport {
    pub computed: [[Complex64; 4]; 4],
    pub reference: [[Complex64; 4]; 4],
    /// Largest entry deviation per row.
    pub row_deltas: [f64; 4],
}

impl ImagePatternReport {
    pub fn max_delta(&self) -> f64 {
        self.row_deltas.iter().copied().fold(0.0, f64::max)
    }
}

pub fn unit_time_image_pattern(spec: &BraidSpec) -> ImagePatternReport {
    let m = HamiltonianFamily::new(*spec)
        .at(1.0)
        .scale(Complex64::new(0.0, -2.0));
    let z = Complex64::new(0.0, 0.0);
    let s = Complex64::new(spec.sign().value(), 0.0);
    let qbar = spec.q().conj();
    let reference = [
        [z, z, z, -qbar],
        [z, z, -s, z],
        [z, s, z, z],
        [qbar, z, z, z],
    ];
    let mut computed = [[z; 4]; 4];
    let mut row_deltas = [0.0; 4];
    for i in 0..4 {
        for j in 0..4 {
            computed[i][j] = m[(i, j)];
            row_deltas[i] = f64::max(row_deltas[i], (m[(i, j)] - reference[i][j]).norm());
        }
    }
    ImagePatternReport {
        computed,
        reference,
        row_deltas,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::Sign;
    use crate::states::canonical_basis;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn generator_is_hermitian_involution() {
        for sign in Sign::BOTH {
            for phi in [0.0, 1.0, 3.0] {
                let fam = HamiltonianFamily::new(BraidSpec::new(sign, phi).unwrap());
                let h0 = fam.generator();
                assert!(h0.is_hermitian(1e-12).passed);
                let sq = h0 * h0;
                assert!(
                    sq.max_abs_diff(&ComplexMatrix::identity(4).unwrap())
                        .unwrap()
                        < 1e-12
                );
            }
        }
    }

    #[test]
    fn unit_time_hamiltonian_plus_zero() {
        let spec = BraidSpec::new(Sign::Plus, 0.0).unwrap();
        let h = hamiltonian_at(&spec, 1.0);
        let half_i = c(0.0, 0.5);
        let z = c(0., 0.);
        let expect = ComplexMatrix::from_rows([
            [z, z, z, -half_i],
            [z, z, -half_i, z],
            [z, half_i, z, z],
            [half_i, z, z, z],
        ])
        .unwrap();
        assert!(h.max_abs_diff(&expect).unwrap() < 1e-15);
    }

    #[test]
    fn envelope_is_even_and_decays() {
        let spec = BraidSpec::new(Sign::Minus, 0.8).unwrap();
        for t in [0.3, 1.0, 7.5] {
            assert_eq!(hamiltonian_at(&spec, t), hamiltonian_at(&spec, -t));
        }
        let h0 = HamiltonianFamily::new(spec).generator().frobenius_norm();
        assert!(hamiltonian_at(&spec, 1e3).frobenius_norm() < 2e-6 * h0);
    }

    #[test]
    fn propagator_trivial_and_limit() {
        let spec = BraidSpec::new(Sign::Plus, 0.0).unwrap();
        assert_eq!(
            propagator(&spec, 2.0, 2.0).unwrap(),
            ComplexMatrix::identity(4).unwrap()
        );
        let u = propagator(&spec, 0.0, 1e6).unwrap();
        let (vals, _) = u.eig_normal().unwrap();
        for v in vals {
            // arctan(1e6) ≈ π/2 − 1e-6
            assert!((v - c(0.0, -1.0)).norm() < 2e-6 || (v - c(0.0, 1.0)).norm() < 2e-6);
        }
    }

    #[test]
    fn evolve_rejects_unnormalized_and_keeps_identity() {
        let spec = BraidSpec::new(Sign::Plus, 0.0).unwrap();
        let st = canonical_basis()[2];
        assert_eq!(evolve_state(&st, &spec, 0.4, 0.4).unwrap(), st);
    }

    #[test]
    fn evolve_kk_quarter_turn() {
        let spec = BraidSpec::new(Sign::Plus, 0.0).unwrap();
        let kk = canonical_basis()[0];
        let out = evolve_state(&kk, &spec, 0.0, 1.0).unwrap();
        // H₀|KK⟩ = i|K̄K̄⟩ for (plus, 0): cos(π/4)|KK⟩ − i sin(π/4)·i|K̄K̄⟩
        let expect = [
            c(FRAC_1_SQRT_2, 0.),
            c(0., 0.),
            c(0., 0.),
            c(FRAC_1_SQRT_2, 0.),
        ];
        for (a, b) in out.amplitudes().iter().zip(expect) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn schrodinger_residual_domain() {
        let spec = BraidSpec::new(Sign::Plus, 0.0).unwrap();
        let st = canonical_basis()[0];
        assert!(schrodinger_residual(&st, &spec, 0.5, 0.0).is_err());
        assert!(schrodinger_residual(&st, &spec, 0.5, 1e-2).is_err());
        assert!(schrodinger_residual(&st, &spec, 0.5, 1e-5).unwrap() < 1e-6);
    }

    #[test]
    fn consistency_at_origin_and_unit_time() {
        let spec = BraidSpec::new(Sign::Plus, 0.0).unwrap();
        assert!(r_vs_hamiltonian_consistency(&spec, 0.0).unwrap() < 1e-15);
        assert!(r_vs_hamiltonian_consistency(&spec, 1.0).unwrap() < 1e-12);
        assert!(r_vs_hamiltonian_consistency(&spec, -1.0).is_err());
    }

    #[test]
    fn bracket_matches_hamiltonian() {
        for sign in Sign::BOTH {
            for phi in [0.0, 0.9, PI] {
                let spec = BraidSpec::new(sign, phi).unwrap();
                let expected = unit_time_bracket(&spec).scale(c(0.0, 0.5));
                assert!(hamiltonian_at(&spec, 1.0).max_abs_diff(&expected).unwrap() < 1e-14);
            }
        }
    }

    #[test]
    fn image_pattern_differs_only_by_first_row_phase() {
        let spec = BraidSpec::new(Sign::Minus, 0.0).unwrap();
        assert!(unit_time_image_pattern(&spec).max_delta() < 1e-14);
        let spec = BraidSpec::new(Sign::Plus, 0.7).unwrap();
        let rep = unit_time_image_pattern(&spec);
        assert!((rep.row_deltas[0] - 2.0 * 0.7f64.sin()).abs() < 1e-14);
        assert!(rep.row_deltas[1..].iter().all(|d| *d < 1e-14));
    }
}

//! Neutral-kaon flavour oscillation in the K_S/K_L picture (ħ = c = 1).

use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};

/// Decay rates and masses of the short- and long-lived states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KaonParams {
    pub gamma_s: f64,
    pub gamma_l: f64,
    pub m_s: f64,
    pub m_l: f64,
}

impl Default for KaonParams {
    /// Rates and splitting in units where τ_S = 1.
    fn default() -> Self {
        Self {
            gamma_s: 1.0,
            gamma_l: 0.00175,
            m_s: 0.0,
            m_l: 0.474,
        }
    }
}

impl KaonParams {
    pub fn new(gamma_s: f64, gamma_l: f64, m_s: f64, m_l: f64) -> Result<Self> {
        let p = Self {
            gamma_s,
            gamma_l,
            m_s,
            m_l,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters given by the mass splitting Δm = m_L − m_S, with m_S = 0.
    pub fn with_splitting(gamma_s: f64, gamma_l: f64, delta_m: f64) -> Result<Self> {
        Self::new(gamma_s, gamma_l, 0.0, delta_m)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.gamma_s, self.gamma_l, self.m_s, self.m_l];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation("kaon parameters must be finite".into()));
        }
        if self.gamma_s < 0.0 || self.gamma_l < 0.0 {
            return Err(Error::Validation(format!(
                "decay rates must be >= 0, got gamma_s = {}, gamma_l = {}",
                self.gamma_s, self.gamma_l
            )));
        }
        Ok(())
    }

    /// α = γ/2 + i·m for the short-lived state.
    pub fn alpha_s(&self) -> Complex64 {
        Complex64::new(self.gamma_s / 2.0, self.m_s)
    }

    pub fn alpha_l(&self) -> Complex64 {
        Complex64::new(self.gamma_l / 2.0, self.m_l)
    }

    pub fn delta_m(&self) -> f64 {
        self.m_l - self.m_s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    K,
    KBar,
}

/// Amplitudes on |K⟩ and |K̄⟩ at some time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlavorAmplitudes {
    pub c_k: Complex64,
    pub c_kbar: Complex64,
}

impl FlavorAmplitudes {
    pub fn get(&self, flavor: Flavor) -> Complex64 {
        match flavor {
            Flavor::K => self.c_k,
            Flavor::KBar => self.c_kbar,
        }
    }

    pub fn total_probability(&self) -> f64 {
        self.c_k.norm_sqr() + self.c_kbar.norm_sqr()
    }
}

/// (a, b) ↦ ((a+b)/√2, (a−b)/√2); maps flavour to (S, L) components and is
/// its own inverse.
pub fn sl_basis(first: Complex64, second: Complex64) -> (Complex64, Complex64) {
    (
        (first + second) * FRAC_1_SQRT_2,
        (first - second) * FRAC_1_SQRT_2,
    )
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "proper time must be finite and >= 0, got {t}"
        )))
    }
}

/// U_{S,L}(t) = e^{−α_{S,L} t}.
pub fn u_factors(params: &KaonParams, t: f64) -> Result<(Complex64, Complex64)> {
    params.validate()?;
    check_time(t)?;
    Ok(((-params.alpha_s() * t).exp(), (-params.alpha_l() * t).exp()))
}

/// State that was a pure |K⟩ at t = 0.
pub fn evolve_k(params: &KaonParams, t: f64) -> Result<FlavorAmplitudes> {
    let (us, ul) = u_factors(params, t)?;
    Ok(FlavorAmplitudes {
        c_k: (us + ul) * 0.5,
        c_kbar: (us - ul) * 0.5,
    })
}

/// State that was a pure |K̄⟩ at t = 0.
pub fn evolve_kbar(params: &KaonParams, t: f64) -> Result<FlavorAmplitudes> {
    let (us, ul) = u_factors(params, t)?;
    Ok(FlavorAmplitudes {
        c_k: (us - ul) * 0.5,
        c_kbar: (us + ul) * 0.5,
    })
}

pub fn evolve_from(params: &KaonParams, t: f64, from: Flavor) -> Result<FlavorAmplitudes> {
    match from {
        Flavor::K => evolve_k(params, t),
        Flavor::KBar => evolve_kbar(params, t),
    }
}

/// |⟨to|from(t)⟩|².
pub fn transition_probability(
    params: &KaonParams,
    t: f64,
    from: Flavor,
    to: Flavor,
) -> Result<f64> {
    Ok(evolve_from(params, t, from)?.get(to).norm_sqr())
}

/// Closed forms
/// P_same = ¼(e^{−γ_S t} + e^{−γ_L t} + 2e^{−(γ_S+γ_L)t/2} cos Δm t),
/// P_flip = ¼(e^{−γ_S t} + e^{−γ_L t} − 2e^{−(γ_S+γ_L)t/2} cos Δm t).
pub fn transition_probability_closed_form(
    params: &KaonParams,
    t: f64,
    from: Flavor,
    to: Flavor,
) -> Result<f64> {
    params.validate()?;
    check_time(t)?;
    let es = (-params.gamma_s * t).exp();
    let el = (-params.gamma_l * t).exp();
    let cross =
        2.0 * (-(params.gamma_s + params.gamma_l) * t / 2.0).exp() * (params.delta_m() * t).cos();
    let sign = if from == to { 1.0 } else { -1.0 };
    Ok(0.25 * (es + el + sign * cross))
}

/// (e^{−γ_S t} + e^{−γ_L t})/2.
pub fn total_survival(params: &KaonParams, t: f64) -> f64 {
    0.5 * ((-params.gamma_s * t).exp() + (-params.gamma_l * t).exp())
}

/// Overall factors (U_S, U_L) carried by |S(t)⟩ and |L(t)⟩; both states keep
/// their flavour split (1/√2)(1, ±1).
pub fn evolve_sl_states(params: &KaonParams, t: f64) -> Result<(Complex64, Complex64)> {
    u_factors(params, t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillationRow {
    pub t: f64,
    pub p_kk: f64,
    pub p_kkbar: f64,
    /// (P_KK − P_KK̄)/(P_KK + P_KK̄); zero when both vanish.
    pub asymmetry: f64,
}

/// `steps` uniformly spaced samples on [0, t_max], both ends included.
pub fn oscillation_curve(
    params: &KaonParams,
    t_max: f64,
    steps: usize,
) -> Result<Vec<OscillationRow>> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::Validation(format!("t_max must be > 0, got {t_max}")));
    }
    if steps < 2 {
        return Err(Error::Validation(format!(
            "steps must be >= 2, got {steps}"
        )));
    }
    params.validate()?;
    (0..steps)
        .map(|i| {
            let t = if i + 1 == steps {
                t_max
            } else {
                t_max * i as f64 / (steps - 1) as f64
            };
            let amps = evolve_k(params, t)?;
            let (p_kk, p_kkbar) = (amps.c_k.norm_sqr(), amps.c_kbar.norm_sqr());
            let sum = p_kk + p_kkbar;
            let asymmetry = if sum > 0.0 {
                (p_kk - p_kkbar) / sum
            } else {
                0.0
            };
            Ok(OscillationRow {
                t,
                p_kk,
                p_kkbar,
                asymmetry,
            })
        })
        .collect()
}

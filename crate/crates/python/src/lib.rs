//! Python bindings. Matrices cross the boundary as lists of rows of
//! `complex`, two-kaon states as four `complex` amplitudes in the order
//! (KK, KKbar, KbarK, KbarKbar).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use twokaon::braid::{check_braid_relation, check_qybe, rho_check};
use twokaon::dynamics::{evolve_state, hamiltonian_at, propagator, schrodinger_residual};
use twokaon::phenomenology::{oscillation_curve, transition_probability, Flavor};
use twokaon::states::{self, SingleKaonOp};
use twokaon::{Complex64, ComplexMatrix, Sign, SpectralPoint, TwoKaonState};

type Rows = Vec<Vec<Complex64>>;

fn err(e: twokaon::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rows(m: &ComplexMatrix) -> Rows {
    (0..m.dim()).map(|i| m.row(i).to_vec()).collect()
}

fn state(amps: [Complex64; 4]) -> PyResult<TwoKaonState> {
    TwoKaonState::new(amps).map_err(err)
}

fn flavor(name: &str) -> PyResult<Flavor> {
    match name {
        "K" | "k" => Ok(Flavor::K),
        "Kbar" | "kbar" => Ok(Flavor::KBar),
        other => Err(PyValueError::new_err(format!(
            "flavour must be 'K' or 'Kbar', got '{other}'"
        ))),
    }
}

fn single_op(name: &str) -> PyResult<SingleKaonOp> {
    match name {
        "cp" | "CP" => Ok(SingleKaonOp::cp()),
        "s" | "S" => Ok(SingleKaonOp::strangeness()),
        other => Err(PyValueError::new_err(format!(
            "operator must be 'cp' or 's', got '{other}'"
        ))),
    }
}

/// Braid matrix b±(φ) and everything derived from it.
#[pyclass(name = "BraidSpec", frozen)]
struct PyBraidSpec {
    inner: twokaon::BraidSpec,
}

#[pymethods]
impl PyBraidSpec {
    #[new]
    #[pyo3(signature = (sign = "plus", phi = 0.0, stray_entry = false))]
    fn new(sign: &str, phi: f64, stray_entry: bool) -> PyResult<Self> {
        let sign: Sign = sign.parse().map_err(err)?;
        let spec = twokaon::BraidSpec::new(sign, phi).map_err(err)?;
        Ok(Self {
            inner: if stray_entry {
                spec.with_stray_entry()
            } else {
                spec
            },
        })
    }

    #[getter]
    fn sign(&self) -> String {
        self.inner.sign().to_string()
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.inner.phi()
    }

    fn braid_matrix(&self) -> Rows {
        rows(&self.inner.braid_matrix())
    }

    fn unitary_braid(&self) -> Rows {
        rows(&self.inner.unitary_braid())
    }

    fn yang_baxterize(&self, x: f64) -> PyResult<Rows> {
        Ok(rows(&self.inner.yang_baxterize(x).map_err(err)?))
    }

    /// R̃(θ) at angle θ ∈ [0, π/2).
    fn unitary_r(&self, theta: f64) -> PyResult<Rows> {
        let point = SpectralPoint::from_theta(theta, self.inner.phi()).map_err(err)?;
        Ok(rows(&self.inner.unitary_r(&point).map_err(err)?))
    }

    fn braid_residual(&self) -> f64 {
        check_braid_relation(&self.inner)
    }

    fn qybe_residual(&self, x: f64, y: f64) -> PyResult<f64> {
        check_qybe(&self.inner, x, y).map_err(err)
    }

    /// (scalar, is_scalar, residual, candidate q²+q⁻²−t−1/t) for R(t)R(1/t).
    fn rho(&self, t: f64) -> PyResult<(Complex64, bool, f64, Complex64)> {
        let r = rho_check(&self.inner, t).map_err(err)?;
        Ok((r.scalar, r.is_scalar, r.residual, r.candidate_formula))
    }

    fn hamiltonian(&self, t: f64) -> Rows {
        rows(&hamiltonian_at(&self.inner, t))
    }

    fn propagator(&self, t0: f64, t1: f64) -> PyResult<Rows> {
        Ok(rows(&propagator(&self.inner, t0, t1).map_err(err)?))
    }

    fn evolve(&self, amplitudes: [Complex64; 4], t0: f64, t1: f64) -> PyResult<[Complex64; 4]> {
        let out = evolve_state(&state(amplitudes)?, &self.inner, t0, t1).map_err(err)?;
        Ok(out.amplitudes())
    }

    #[pyo3(signature = (amplitudes, t, dt = 1e-5))]
    fn schrodinger_residual(&self, amplitudes: [Complex64; 4], t: f64, dt: f64) -> PyResult<f64> {
        schrodinger_residual(&state(amplitudes)?, &self.inner, t, dt).map_err(err)
    }

    /// Images b̃|e_j⟩ of the canonical basis.
    fn action_images(&self) -> PyResult<Vec<[Complex64; 4]>> {
        let images = states::braid_action_images(&self.inner).map_err(err)?;
        Ok(images.iter().map(TwoKaonState::amplitudes).collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "BraidSpec(sign='{}', phi={})",
            self.inner.sign(),
            self.inner.phi()
        )
    }
}

#[pyclass(name = "KaonParams", frozen)]
struct PyKaonParams {
    inner: twokaon::KaonParams,
}

#[pymethods]
impl PyKaonParams {
    #[new]
    #[pyo3(signature = (gamma_s = 1.0, gamma_l = 0.00175, dm = 0.474))]
    fn new(gamma_s: f64, gamma_l: f64, dm: f64) -> PyResult<Self> {
        let inner = twokaon::KaonParams::with_splitting(gamma_s, gamma_l, dm).map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn gamma_s(&self) -> f64 {
        self.inner.gamma_s
    }

    #[getter]
    fn gamma_l(&self) -> f64 {
        self.inner.gamma_l
    }

    #[getter]
    fn dm(&self) -> f64 {
        self.inner.delta_m()
    }

    /// |⟨to|from(t)⟩|² with flavours 'K' or 'Kbar'.
    fn probability(&self, t: f64, from_: &str, to: &str) -> PyResult<f64> {
        transition_probability(&self.inner, t, flavor(from_)?, flavor(to)?).map_err(err)
    }

    /// Rows (t, P(K->K), P(K->Kbar), asymmetry).
    fn oscillation_curve(&self, t_max: f64, steps: usize) -> PyResult<Vec<(f64, f64, f64, f64)>> {
        let curve = oscillation_curve(&self.inner, t_max, steps).map_err(err)?;
        Ok(curve
            .iter()
            .map(|r| (r.t, r.p_kk, r.p_kkbar, r.asymmetry))
            .collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "KaonParams(gamma_s={}, gamma_l={}, dm={})",
            self.inner.gamma_s,
            self.inner.gamma_l,
            self.inner.delta_m()
        )
    }
}

#[pyfunction]
fn concurrence(amplitudes: [Complex64; 4]) -> PyResult<f64> {
    Ok(state(amplitudes)?.concurrence())
}

#[pyfunction]
#[pyo3(signature = (amplitudes, tol = 1e-6))]
fn is_separable(amplitudes: [Complex64; 4], tol: f64) -> PyResult<bool> {
    Ok(states::is_separable(&state(amplitudes)?, tol))
}

#[pyfunction]
fn bell_quartet() -> Vec<[Complex64; 4]> {
    states::bell_quartet()
        .states
        .iter()
        .map(TwoKaonState::amplitudes)
        .collect()
}

/// Rows (index, strangeness, cp) for Φ₁…Φ₄.
#[pyfunction]
fn cp_s_eigentable() -> PyResult<Vec<(usize, i8, i8)>> {
    let table = states::cp_s_eigentable().map_err(err)?;
    Ok(table
        .iter()
        .map(|r| (r.index, r.strangeness, r.cp))
        .collect())
}

/// ⟨Ψ|A⊗B|Ψ⟩ with A, B each 'cp' or 's'.
#[pyfunction]
fn correlation(amplitudes: [Complex64; 4], a: &str, b: &str) -> PyResult<f64> {
    states::correlation(&state(amplitudes)?, &single_op(a)?, &single_op(b)?).map_err(err)
}

#[pyfunction]
fn deformed_phi1(phi: f64) -> [Complex64; 4] {
    states::deformed_phi1(phi).amplitudes()
}

#[pymodule]
fn twokaon_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBraidSpec>()?;
    m.add_class::<PyKaonParams>()?;
    m.add_function(wrap_pyfunction!(concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(is_separable, m)?)?;
    m.add_function(wrap_pyfunction!(bell_quartet, m)?)?;
    m.add_function(wrap_pyfunction!(cp_s_eigentable, m)?)?;
    m.add_function(wrap_pyfunction!(correlation, m)?)?;
    m.add_function(wrap_pyfunction!(deformed_phi1, m)?)?;
    Ok(())
}

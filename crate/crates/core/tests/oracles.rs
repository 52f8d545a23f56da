//! Cross-checks of the library against independent computations: explicit
//! index-loop products, a fixed-step RK4 integrator, a brute-force 2×2 SVD and
//! hand-expanded closed forms.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twokaon::braid::{check_qybe, unitary_r};
use twokaon::dynamics::{evolve_state, hamiltonian_at, propagator, schrodinger_residual};
use twokaon::linalg::tensor_product;
use twokaon::phenomenology::{
    evolve_k, transition_probability, transition_probability_closed_form, Flavor,
};
use twokaon::states::{concurrence, is_separable};
use twokaon::{BraidSpec, Complex64, ComplexMatrix, KaonParams, Sign, SpectralPoint, TwoKaonState};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| random_complex(rng)).unwrap()
}

fn random_state(rng: &mut ChaCha8Rng) -> TwoKaonState {
    TwoKaonState::normalized([0; 4].map(|_| random_complex(rng))).unwrap()
}

/// Plain triple loop, no shared code with the library product.
fn naive_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> Vec<Complex64> {
    let n = a.dim();
    let mut out = vec![c(0., 0.); n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[i * n + j] += a.as_slice()[i * n + k] * b.as_slice()[k * n + j];
            }
        }
    }
    out
}

fn naive_kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Vec<Complex64> {
    let (m, n) = (a.dim(), b.dim());
    let d = m * n;
    let mut out = vec![c(0., 0.); d * d];
    for r in 0..d {
        for s in 0..d {
            out[r * d + s] = a.as_slice()[(r / n) * m + s / n] * b.as_slice()[(r % n) * n + s % n];
        }
    }
    out
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[test]
fn mixed_product_against_direct_multiplication() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let (a, b, cc, d) = (
            random_matrix(&mut rng, 2),
            random_matrix(&mut rng, 2),
            random_matrix(&mut rng, 2),
            random_matrix(&mut rng, 2),
        );
        let ab = tensor_product(&a, &b).unwrap();
        assert!(max_diff(ab.as_slice(), &naive_kron(&a, &b)) == 0.0);
        let lhs = naive_mul(&ab, &tensor_product(&cc, &d).unwrap());
        let ac = ComplexMatrix::from_row_major(2, naive_mul(&a, &cc)).unwrap();
        let bd = ComplexMatrix::from_row_major(2, naive_mul(&b, &d)).unwrap();
        let rhs = naive_kron(&ac, &bd);
        assert!(max_diff(&lhs, &rhs) < 1e-12);
    }
}

/// Gram-Schmidt on the columns of a random matrix.
fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let m = random_matrix(rng, n);
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    for j in 0..n {
        let mut v: Vec<Complex64> = (0..n).map(|i| m[(i, j)]).collect();
        for u in &cols {
            let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(n, |i, j| cols[j][i]).unwrap()
}

#[test]
fn exponential_of_known_spectrum() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let u = random_unitary(&mut rng, 4);
        let spectrum = [0.5, 0.5, -0.5, -0.5];
        let h = ComplexMatrix::from_fn(4, |i, j| {
            (0..4)
                .map(|k| u[(i, k)] * spectrum[k] * u[(j, k)].conj())
                .sum()
        })
        .unwrap();
        let theta = rng.random_range(0.0..2.0 * PI);
        let e = h.scale(c(0.0, -theta)).exp_normal().unwrap();
        let expect = ComplexMatrix::from_fn(4, |i, j| {
            (0..4)
                .map(|k| {
                    u[(i, k)] * Complex64::from_polar(1.0, -theta * spectrum[k]) * u[(j, k)].conj()
                })
                .sum()
        })
        .unwrap();
        assert!(e.max_abs_diff(&expect).unwrap() < 1e-12);
        assert!(e.is_unitary(1e-12).passed);
    }
}

/// Fixed-step classical RK4 for i dΨ/dt = H(t)Ψ.
fn rk4(spec: &BraidSpec, psi0: [Complex64; 4], t0: f64, t1: f64, steps: usize) -> [Complex64; 4] {
    let deriv = |t: f64, psi: &[Complex64; 4]| -> [Complex64; 4] {
        let h = hamiltonian_at(spec, t);
        let mut out = [c(0., 0.); 4];
        for i in 0..4 {
            out[i] = (0..4).map(|j| h[(i, j)] * psi[j]).sum::<Complex64>() * c(0.0, -1.0);
        }
        out
    };
    let dt = (t1 - t0) / steps as f64;
    let mut psi = psi0;
    let mut t = t0;
    let axpy = |a: &[Complex64; 4], s: f64, b: &[Complex64; 4]| -> [Complex64; 4] {
        let mut o = *a;
        for i in 0..4 {
            o[i] += b[i] * s;
        }
        o
    };
    for _ in 0..steps {
        let k1 = deriv(t, &psi);
        let k2 = deriv(t + dt / 2.0, &axpy(&psi, dt / 2.0, &k1));
        let k3 = deriv(t + dt / 2.0, &axpy(&psi, dt / 2.0, &k2));
        let k4 = deriv(t + dt, &axpy(&psi, dt, &k3));
        for i in 0..4 {
            psi[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
        }
        t += dt;
    }
    psi
}

#[test]
fn closed_form_propagator_matches_rk4() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for sign in Sign::BOTH {
        for phi in [0.0, 1.0, FRAC_PI_2] {
            let spec = BraidSpec::new(sign, phi).unwrap();
            let st = random_state(&mut rng);
            let (t0, t1) = (-0.7, 2.3);
            let exact = evolve_state(&st, &spec, t0, t1).unwrap().amplitudes();
            let numeric = rk4(&spec, st.amplitudes(), t0, t1, 4000);
            assert!(max_diff(&exact, &numeric) < 1e-10, "{sign} {phi}");
        }
    }
}

#[test]
fn kk_quarter_turn_against_rk4() {
    let spec = BraidSpec::new(Sign::Plus, 0.0).unwrap();
    let kk = TwoKaonState::basis(0).unwrap();
    let numeric = rk4(&spec, kk.amplitudes(), 0.0, 1.0, 2000);
    // cos(π/4)|KK⟩ + sin(π/4)|K̄K̄⟩
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!(max_diff(&numeric, &[c(h, 0.), c(0., 0.), c(0., 0.), c(h, 0.)]) < 1e-12);
    let exact = evolve_state(&kk, &spec, 0.0, 1.0).unwrap().amplitudes();
    assert!(max_diff(&exact, &numeric) < 1e-12);
}

#[test]
fn eigenvector_phase_follows_arctan() {
    let spec = BraidSpec::new(Sign::Minus, 0.6).unwrap();
    let (vals, vecs) = twokaon::HamiltonianFamily::new(spec)
        .generator()
        .eigh()
        .unwrap();
    let col = vecs.column(3);
    assert!((vals[3] - 1.0).abs() < 1e-12);
    let s = col.as_slice();
    let st = TwoKaonState::new([s[0], s[1], s[2], s[3]]).unwrap();
    for t in [0.0, 0.4, 1.5] {
        let evolved = evolve_state(&st, &spec, 0.0, t).unwrap();
        let phase = Complex64::from_polar(1.0, -t.atan());
        let expect = st.amplitudes().map(|z| z * phase);
        assert!(max_diff(&evolved.amplitudes(), &expect) < 1e-12);
        assert!(schrodinger_residual(&st, &spec, t, 1e-5).unwrap() < 1e-8);
    }
}

#[test]
fn schrodinger_residual_is_time_reversal_symmetric_at_origin() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let spec = BraidSpec::new(Sign::Plus, 0.3).unwrap();
    let st = random_state(&mut rng);
    let dt = 1e-4;
    let fwd = schrodinger_residual(&st, &spec, 0.0, dt).unwrap();

    // Ψᵣ(s) = Ψ(−s) solves i∂ₛΨᵣ = −H(−s)Ψᵣ = −H(s)Ψᵣ by evenness of the envelope.
    let at = |s: f64| evolve_state(&st, &spec, 0.0, -s).unwrap().to_vector();
    let h0_psi = hamiltonian_at(&spec, 0.0).apply(&at(0.0)).unwrap();
    let deriv = at(dt)
        .sub(&at(-dt))
        .unwrap()
        .scale(c(0.0, 1.0 / (2.0 * dt)));
    let back = deriv.sub(&h0_psi.scale(c(-1.0, 0.0))).unwrap().norm();
    assert!((fwd - back).abs() < 1e-12);
    assert!(fwd < 1e-6);
}

/// Singular values of the 2×2 amplitude matrix from the eigenvalues of M†M.
fn schmidt_rank(st: &TwoKaonState) -> usize {
    let [a, b, cc, d] = st.amplitudes();
    // M = [[a, b], [c, d]], G = M†M
    let g00 = a.norm_sqr() + cc.norm_sqr();
    let g11 = b.norm_sqr() + d.norm_sqr();
    let g01 = a.conj() * b + cc.conj() * d;
    let disc = ((g00 - g11).powi(2) + 4.0 * g01.norm_sqr()).sqrt();
    let smallest = 0.5 * (g00 + g11 - disc);
    if smallest > 1e-12 {
        2
    } else {
        1
    }
}

#[test]
fn separability_agrees_with_schmidt_rank() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..1000 {
        let st = if i % 2 == 0 {
            TwoKaonState::product(
                [random_complex(&mut rng), random_complex(&mut rng)],
                [random_complex(&mut rng), random_complex(&mut rng)],
            )
            .unwrap()
        } else {
            random_state(&mut rng)
        };
        assert_eq!(is_separable(&st, 1e-6), schmidt_rank(&st) == 1, "state {i}");
        if i % 2 == 0 {
            assert!(concurrence(&st) < 1e-12);
        }
    }
}

#[test]
fn qybe_random_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for sign in Sign::BOTH {
        for phi in [0.0, 1.1, FRAC_PI_2] {
            let spec = BraidSpec::new(sign, phi).unwrap();
            for _ in 0..100 {
                let x = 10.0 - rng.random_range(0.0..10.0);
                let y = 10.0 - rng.random_range(0.0..10.0);
                assert!(check_qybe(&spec, x, y).unwrap() < 1e-10);
            }
        }
    }
}

#[test]
fn unitary_r_quarter_turn_by_matrix_addition() {
    // (b̃ + b̃†)/√2 with b̃ = b/√2 is (b + b†)/2; b + b† = 2I entrywise.
    let b = BraidSpec::new(Sign::Plus, 0.0).unwrap().braid_matrix();
    let sum = &b + &b.adjoint();
    assert_eq!(sum, ComplexMatrix::identity(4).unwrap().scale_real(2.0));
    let r = unitary_r(
        &SpectralPoint::from_theta(PI / 4.0, 0.0).unwrap(),
        Sign::Plus,
    )
    .unwrap();
    assert!(r.max_abs_diff(&sum.scale_real(0.5)).unwrap() < 1e-15);
}

#[test]
fn propagator_eigenvalues_at_large_time() {
    let spec = BraidSpec::new(Sign::Plus, 0.0).unwrap();
    let u = propagator(&spec, 0.0, 1e6).unwrap();
    // H₀² = I so U = cos(a)I − i sin(a)H₀ with a = arctan(1e6)
    let a = 1e6f64.atan();
    let h0 = twokaon::HamiltonianFamily::new(spec).generator().clone();
    let expect =
        &ComplexMatrix::identity(4).unwrap().scale_real(a.cos()) + &h0.scale(c(0.0, -a.sin()));
    assert!(u.max_abs_diff(&expect).unwrap() < 1e-12);
}

#[test]
fn transition_probabilities_two_routes() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let p = KaonParams::new(
            rng.random_range(0.0..2.0),
            rng.random_range(0.0..0.1),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        )
        .unwrap();
        let t = rng.random_range(0.0..15.0);
        for (from, to) in [
            (Flavor::K, Flavor::K),
            (Flavor::K, Flavor::KBar),
            (Flavor::KBar, Flavor::K),
            (Flavor::KBar, Flavor::KBar),
        ] {
            let a = transition_probability(&p, t, from, to).unwrap();
            let b = transition_probability_closed_form(&p, t, from, to).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
        let amps = evolve_k(&p, t).unwrap();
        let survival = 0.5 * ((-p.gamma_s * t).exp() + (-p.gamma_l * t).exp());
        assert!((amps.total_probability() - survival).abs() < 1e-12);
    }
}

#[test]
fn zero_splitting_limit() {
    let p = KaonParams::with_splitting(1.0, 0.1, 0.0).unwrap();
    for t in [0.5, 2.0, 9.0] {
        let pf = transition_probability(&p, t, Flavor::K, Flavor::KBar).unwrap();
        let expect = 0.25 * ((-p.gamma_s * t / 2.0).exp() - (-p.gamma_l * t / 2.0).exp()).powi(2);
        assert!((pf - expect).abs() < 1e-15);
    }
}

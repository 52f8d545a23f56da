//! The invariant suite behind `twokaon verify`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twokaon::braid::{check_braid_relation, check_qybe, rho_check};
use twokaon::dynamics::{
    hamiltonian_at, propagator, r_vs_hamiltonian_consistency, schrodinger_residual,
    unit_time_bracket,
};
use twokaon::phenomenology::{
    evolve_k, oscillation_curve, total_survival, transition_probability,
    transition_probability_closed_form, Flavor,
};
use twokaon::states::{
    bell_quartet, braid_action_images, braid_row_images, concurrence, correlation, cp_s_eigentable,
    deformed_phi1, is_separable, SingleKaonOp,
};
use twokaon::{Complex64, ComplexMatrix, KaonParams, Sign, SpectralPoint, TwoKaonState};

use crate::config::RunConfig;

/// Phases at which the braid relation and eigenvalue claims are checked.
pub const BRAID_PHASES: [f64; 6] = [0.0, PI / 7.0, PI / 3.0, 1.0, FRAC_PI_2, 2.5];
pub const QYBE_PHASES: [f64; 3] = [0.0, 1.1, FRAC_PI_2];
pub const QYBE_SAMPLES: usize = 100;
pub const UNITARITY_GRID: usize = 20;
pub const HERMITICITY_TIMES: [f64; 7] = [0.0, 0.5, -0.5, 1.0, -1.0, 10.0, -10.0];
pub const SCHRODINGER_STATES: usize = 10;
pub const SCHRODINGER_TIMES: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 5.0];
pub const SCHRODINGER_DT: f64 = 1e-5;
pub const CONSISTENCY_TIMES: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 10.0];
pub const CONSISTENCY_PHASES: [f64; 3] = [0.0, 1.0, FRAC_PI_2];
pub const SEPARABILITY_SAMPLES: usize = 1000;
/// Concurrence at or below this value counts as separable.
pub const SEPARABILITY_TOL: f64 = 1e-6;
/// Smallest reduced-density eigenvalue above this counts as Schmidt rank 2.
pub const SCHMIDT_EIGEN_TOL: f64 = 1e-12;
pub const RHO_TIMES: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
pub const OSCILLATION_SAMPLES: usize = 500;
pub const OSCILLATION_T_MAX: f64 = 12.0;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub note: String,
}

type CheckFn = fn(&RunConfig) -> twokaon::Result<(f64, String)>;

/// (name, default tolerance, check)
pub const CHECKS: &[(&str, f64, CheckFn)] = &[
    ("braid_relation", 1e-12, braid_relation),
    ("braid_eigenvalues", 1e-10, braid_eigenvalues),
    ("asymptotic_condition", 0.0, asymptotic_condition),
    ("qybe_random", 1e-10, qybe_random),
    ("unitary_braid", 1e-12, unitary_braid),
    ("unitary_r_grid", 1e-12, unitary_r_grid),
    ("hamiltonian_hermitian", 1e-12, hamiltonian_hermitian),
    ("hamiltonian_time_reversal", 0.0, hamiltonian_time_reversal),
    (
        "hamiltonian_unit_time_form",
        1e-14,
        hamiltonian_unit_time_form,
    ),
    ("schrodinger_residual", 1e-6, schrodinger),
    ("propagator_group", 1e-12, propagator_group),
    ("r_hamiltonian_consistency", 1e-11, r_consistency),
    ("bell_images", 1e-12, bell_images),
    ("bell_quartet", 1e-12, bell_quartet_check),
    ("cp_s_eigentable", 0.0, eigentable),
    ("decomposable_state", 1e-12, decomposable_state),
    ("separability_oracle", 0.0, separability_oracle),
    ("deformation_sweep", 1e-12, deformation_sweep),
    ("rho_relation", 1e-12, rho_relation),
    ("oscillation_stable", 1e-12, oscillation_stable),
    ("oscillation_decaying", 1e-12, oscillation_decaying),
    (
        "phenomenology_closed_form",
        1e-12,
        phenomenology_closed_form,
    ),
];

pub fn run_suite(cfg: &RunConfig) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|&(name, default_tol, check)| run_check(cfg, name, default_tol, check))
        .collect()
}

pub fn run_named(cfg: &RunConfig, name: &str) -> Option<CheckOutcome> {
    CHECKS
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|&(name, default_tol, check)| run_check(cfg, name, default_tol, check))
}

fn run_check(
    cfg: &RunConfig,
    name: &'static str,
    default_tol: f64,
    check: CheckFn,
) -> CheckOutcome {
    let tolerance = cfg.tol.unwrap_or(default_tol);
    match check(cfg) {
        Ok((residual, note)) => CheckOutcome {
            name,
            residual,
            tolerance,
            // NaN residuals fail
            passed: residual <= tolerance,
            note,
        },
        Err(e) => CheckOutcome {
            name,
            residual: f64::INFINITY,
            tolerance,
            passed: false,
            note: format!("error: {e}"),
        },
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |acc, v| {
        if v.is_nan() || acc.is_nan() {
            f64::NAN
        } else {
            acc.max(v)
        }
    })
}

fn all_specs(cfg: &RunConfig, phases: &[f64]) -> twokaon::Result<Vec<twokaon::BraidSpec>> {
    let mut out = Vec::new();
    for sign in Sign::BOTH {
        for &phi in phases {
            out.push(cfg.braid(sign, phi)?);
        }
    }
    Ok(out)
}

fn random_state(rng: &mut ChaCha8Rng) -> twokaon::Result<TwoKaonState> {
    let mut amps = [Complex64::new(0.0, 0.0); 4];
    for a in amps.iter_mut() {
        *a = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    TwoKaonState::normalized(amps)
}

fn braid_relation(cfg: &RunConfig) -> twokaon::Result<(f64, String)> {
    let specs = all_specs(cfg, &BRAID_PHASES)?;
    Ok((
        max_of(specs.iter().map(check_braid_relation)),
        String::new(),
    ))
}

fn braid_eigenvalues(cfg: &RunConfig) -> twokaon::Result<(f64, String)> {
    let mut worst = 0.0;
    for spec in all_specs(cfg, &BRAID_PHASES)? {
        let (mut vals, _) = spec.braid_matrix().eig_normal()?;
        vals.sort_by(|a, b| a.im.total_cmp(&b.im));
        let expect = [(1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (1.0, 1.0)];
        for (v, (re, im)) in vals.iter().zip(expect) {
            worst = max_of([worst, (v - Complex64::new(re, im)).norm()]);
        }
    }
    Ok((worst, "eigenvalues {1+i, 1+i, 1-i, 1-i}".into()))
}

fn asymptotic_condition(cfg: &RunConfig) -> twokaon::Result<(f64, String)> {
    let mut worst = 0.0;
    for spec in all_specs(cfg, &BRAID_PHASES)? {
        worst = max_of([
            worst,
            spec.yang_baxterize(0.0)?
                .max_abs_diff(&spec.braid_matrix())?,
        ]);
    }
    Ok((worst, "R(0) = b entrywise".into()))
}

fn qybe_random(cfg: &RunConfig) -> twokaon::Result<(f64, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = 0.0;
    for spec in all_specs(cfg, &QYBE_PHASES)? {
        for _ in 0..QYBE_SAMPLES {
            // (0, 10]
            let x = 10.0 - rng.random_range(0.0..10.0);
            let y = 10.0 - rng.random_range(0.0..10.0);
            worst = max_of([worst, check_qybe(&spec, x, y)?]);
        }
    }
    Ok((
        worst,
        format!("{} random (x, y) per sign and phase", QYBE_SAMPLES),
    ))
}

fn unitary_braid(cfg: &RunConfig) -> twokaon::Result<(f64, String)> {
    let minus_id = ComplexMatrix::identity(4)?.scale_real(-1.0);
    let mut worst = 0.0;
    for spec in all_specs(cfg, &BRAID_PHASES)? {
        let bt = spec.unitary_braid();
        worst = max_of([
            worst,
            bt.is_unitary(0.0).residual,
            (&bt.powi(4) - &minus_id).frobenius_norm(),
        ]);
    }
    Ok((worst, "b~ unitary and b~^4 = -I".into()))
}

fn unitary_r_grid(cfg: &RunConfig) -> twokaon::Result<(f64, String)> {
    let mut worst = 0.0;
    for sign in Sign::BOTH {
        for i in 0..UNITARITY_GRID {
            let theta = FRAC_PI_2 * i as f64 / UNITARITY_GRID as f64;
            for j in 0..UNITARITY_GRID {
                let phi = TAU * j as f64 / UNITARITY_GRID as f64;
                let spec = cfg.braid(sign, phi)?;
                let r = spec.unitary_r(&SpectralPoint::from_theta(theta, phi)?)?;
                worst = max_of([worst, r.is_unitary(0.0).residual]);
            }
        }
    }
    Ok((worst, format!("{0}x{0} (theta, phi) grid", UNITARITY_GRID)))
}

fn hamiltonian_hermitian(cfg: &RunConfig) -> twokaon::Result<(f64, String)> {
    let mut worst = 0.0;
    for spec in all_specs(cfg, &BRAID_PHASES)? {
        for t in HERMITICITY_TIMES {
            worst = max_of([worst, hamiltonian_at(&spec, t).is_hermitian(0.0).residual]);
        }
    }
    Ok((worst, String::new()))
}

fn hamiltonian_time_reversal(cfg: &RunConfig) -> twokaon::Result<(f64, String)> {
    let mut worst = 0.0;
    for spec in all_specs(cfg, &BRAID_PHASES)? {
        for t in HERMITICITY_TIMES {
            worst = max_of([
                worst,
                hamiltonian_at(&spec, t).max_abs_diff(&hamiltonian_at(&spec, -t))?,
            ]);
        }
    }
    Ok((worst, "H(t) = H(-t)".into()))
}

fn hamiltonian_unit_time_form(cfg: &RunConfig) -> twokaon::Result<(f64, String)> {
    let mut worst = 0.0;
    for spec in all_specs(cfg, &BRAID_PHASES)? {
        let expected = unit_time_bracket(&spec).scale(Complex64::new(0.0, 0.5));
        worst = max_of([worst, hamiltonian_at(&spec, 1.0).max_abs_diff(&expected)?]);
    }
    Ok((
        worst,
        "H(1) = (i/2)[[0,0,0,-e^{i phi}],[0,0,-+1,0],[0,+-1,0,0],[e^{-i phi},0,0,0]]".into(),
    ))
}

fn schrodinger(cfg: &RunConfig) -> twokaon::Result<(f64, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let mut worst = 0.0;
    for sign in Sign::BOTH {
        let spec = cfg.braid(sign, cfg.phi)?;
        for _ in 0..SCHRODINGER_STATES {
            let st = random_state(&mut rng)?;
            for t in SCHRODINGER_TIMES {
                worst = max_of([worst, schrodinger_residual(&st, &spec, t, SCHRODINGER_DT)?]);
            }
        }
    }
    Ok((
        worst,
        format!("central difference, dt = {SCHRODINGER_DT:e}"),
    ))
}

fn propagator_group(cfg: &RunConfig) -> twokaon::Result<(f64, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(2));
    let mut worst = 0.0;
    for spec in all_specs(cfg, &CONSISTENCY_PHASES)? {
        for _ in 0..10 {
            let [t0, t1, t2] = [0; 3].map(|_| rng.random_range(-5.0..5.0));
            let u01 = propagator(&spec, t0, t1)?;
            let u12 = propagator(&spec, t1, t2)?;
            let u02 = propagator(&spec, t0, t2)?;
            worst = max_of([
                worst,
                (&(&u12 * &u01) - &u02).frobenius_norm(),
                u02.is_unitary(0.0).residual,
            ]);
        }
    }
    Ok((worst, "U(t1,t2)U(t0,t1) = U(t0,t2), unitary".into()))
}

fn r_consistency(cfg: &RunConfig) -> twokaon::Result<(f64, String)> {
    let mut worst = 0.0;
    for spec in all_specs(cfg, &CONSISTENCY_PHASES)? {
        for t in CONSISTENCY_TIMES {
            worst = max_of([worst, r_vs_hamiltonian_consistency(&spec, t)?]);
        }
    }
    Ok((worst, "R~(t)R~(0)^-1 = U(0,t)".into()))
}

/// Bell index (0-based) each row image matches at phi = 0, per sign.
pub fn expected_row_pattern(sign: Sign) -> [usize; 4] {
    match sign {
        Sign::Plus => [0, 2, 3, 1],
        Sign::Minus => [0, 3, 2, 1],
    }
}

fn bell_images(cfg: &RunConfig) -> twokaon::Result<(f64, String)> {
    let bell = bell_quartet();
    let mut worst = 0.0;
    for sign in Sign::BOTH {
        let spec = cfg.braid(sign, 0.0)?;
        let images = braid_action_images(&spec)?;
        for i in 0..4 {
            worst = max_of([worst, (images[i].concurrence() - 1.0).abs()]);
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = max_of([
                    worst,
                    (images[i].inner(&images[j]) - Complex64::new(expect, 0.0)).norm(),
                ]);
            }
        }
        let rows = braid_row_images(&spec)?;
        for (row, idx) in rows.iter().zip(expected_row_pattern(sign)) {
            worst = max_of([worst, 1.0 - row.inner(bell.get(idx)).norm()]);
        }
    }
    Ok((
        worst,
        "images orthonormal, concurrence 1, rows match Bell pattern up to sign".into(),
    ))
}

fn bell_quartet_check(_cfg: &RunConfig) -> twokaon::Result<(f64, String)> {
    let q = bell_quartet();
    let mut worst = 0.0;
    for i in 0..4 {
        worst = max_of([worst, (q.get(i).concurrence() - 1.0).abs()]);
        for j in 0..4 {
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = max_of([
                worst,
                (q.get(i).inner(q.get(j)) - Complex64::new(expect, 0.0)).norm(),
            ]);
        }
    }
    Ok((worst, String::new()))
}

/// Expected (S, CP) eigenvalues of Φ₁…Φ₄.
pub const EXPECTED_EIGENTABLE: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

fn eigentable(_cfg: &RunConfig) -> twokaon::Result<(f64, String)> {
    let table = cp_s_eigentable()?;
    let mismatches = table
        .iter()
        .zip(EXPECTED_EIGENTABLE)
        .filter(|(row, (s, cp))| row.strangeness != *s || row.cp != *cp)
        .count();
    Ok((mismatches as f64, "S Phi3,4 = -Phi3,4 (not -Phi1,2)".into()))
}

fn decomposable_state(_cfg: &RunConfig) -> twokaon::Result<(f64, String)> {
    let st = TwoKaonState::new([Complex64::new(0.5, 0.0); 4])?;
    Ok((concurrence(&st), "(1,1,1,1)/2".into()))
}

/// Schmidt rank from the spectrum of the reduced density matrix M·M†.
pub fn schmidt_rank(state: &TwoKaonState) -> twokaon::Result<usize> {
    let [a, b, c, d] = state.amplitudes();
    let m = ComplexMatrix::from_rows([[a, b], [c, d]])?;
    let (vals, _) = (&m * &m.adjoint()).eigh()?;
    Ok(if vals[0] > SCHMIDT_EIGEN_TOL { 2 } else { 1 })
}

fn separability_oracle(cfg: &RunConfig) -> twokaon::Result<(f64, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(3));
    let mut disagreements = 0usize;
    for i in 0..SEPARABILITY_SAMPLES {
        let st = if i % 2 == 0 {
            let mut draw =
                || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            TwoKaonState::product([draw(), draw()], [draw(), draw()])?
        } else {
            random_state(&mut rng)?
        };
        if is_separable(&st, SEPARABILITY_TOL) != (schmidt_rank(&st)? == 1) {
            disagreements += 1;
        }
    }
    Ok((
        disagreements as f64,
        format!("disagreements over {SEPARABILITY_SAMPLES} states"),
    ))
}

fn deformation_sweep(cfg: &RunConfig) -> twokaon::Result<(f64, String)> {
    let cp = SingleKaonOp::cp();
    let s = SingleKaonOp::strangeness();
    let mut worst = 0.0;
    let n = cfg.grid.max(2);
    for k in 0..n {
        let phi = TAU * k as f64 / (n - 1) as f64;
        let st = deformed_phi1(phi);
        worst = max_of([
            worst,
            (correlation(&st, &cp, &cp)? - phi.cos()).abs(),
            (correlation(&st, &s, &s)? - 1.0).abs(),
            (st.concurrence() - 1.0).abs(),
        ]);
    }
    Ok((
        worst,
        "<CP x CP> = cos(phi), <S x S> = 1, concurrence = 1 for all phi".into(),
    ))
}

fn rho_relation(cfg: &RunConfig) -> twokaon::Result<(f64, String)> {
    let mut worst = 0.0;
    let mut candidate_gap: f64 = 0.0;
    for spec in all_specs(cfg, &BRAID_PHASES)? {
        for t in RHO_TIMES {
            let r = rho_check(&spec, t)?;
            let mirrored = rho_check(&spec, 1.0 / t)?;
            worst = max_of([
                worst,
                r.off_diagonal,
                r.diagonal_spread,
                (r.scalar - Complex64::new(r.expected_scalar(), 0.0)).norm(),
                (r.scalar - mirrored.scalar).norm(),
            ]);
            candidate_gap = candidate_gap.max(r.discrepancy());
        }
    }
    Ok((
        worst,
        format!("R(t)R(1/t) = 2(t+1/t) I; max gap to q^2+q^-2-t-1/t = {candidate_gap:.6}"),
    ))
}

fn oscillation_stable(cfg: &RunConfig) -> twokaon::Result<(f64, String)> {
    let p = KaonParams::with_splitting(0.0, 0.0, cfg.params.delta_m())?;
    let rows = oscillation_curve(&p, OSCILLATION_T_MAX, OSCILLATION_SAMPLES)?;
    let dm = p.delta_m();
    Ok((
        max_of(
            rows.iter()
                .map(|r| (r.p_kkbar - (dm * r.t / 2.0).sin().powi(2)).abs()),
        ),
        "P(K->Kbar) = sin^2(dm t / 2) without decay".into(),
    ))
}

fn oscillation_decaying(cfg: &RunConfig) -> twokaon::Result<(f64, String)> {
    let p = cfg.params;
    let mut worst: f64 = 0.0;
    for i in 0..OSCILLATION_SAMPLES {
        let t = OSCILLATION_T_MAX * i as f64 / (OSCILLATION_SAMPLES - 1) as f64;
        let probs = [
            transition_probability(&p, t, Flavor::K, Flavor::K)?,
            transition_probability(&p, t, Flavor::K, Flavor::KBar)?,
            transition_probability(&p, t, Flavor::KBar, Flavor::K)?,
            transition_probability(&p, t, Flavor::KBar, Flavor::KBar)?,
        ];
        if probs.iter().any(|v| !(0.0..=1.0).contains(v)) || probs[1] != probs[2] {
            worst = f64::INFINITY;
        }
        worst = max_of([
            worst,
            (evolve_k(&p, t)?.total_probability() - total_survival(&p, t)).abs(),
        ]);
    }
    Ok((
        worst,
        "0 <= P <= 1, survival closed form, P(K->Kbar) = P(Kbar->K)".into(),
    ))
}

fn phenomenology_closed_form(cfg: &RunConfig) -> twokaon::Result<(f64, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(4));
    let mut worst = 0.0;
    for _ in 0..200 {
        let p = KaonParams::new(
            rng.random_range(0.0..2.0),
            rng.random_range(0.0..0.1),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        )?;
        let t = rng.random_range(0.0..15.0);
        for (from, to) in [(Flavor::K, Flavor::K), (Flavor::K, Flavor::KBar)] {
            worst = max_of([
                worst,
                (transition_probability(&p, t, from, to)?
                    - transition_probability_closed_form(&p, t, from, to)?)
                .abs(),
            ]);
        }
    }
    Ok((
        worst,
        "|amplitude|^2 vs closed form on random parameters".into(),
    ))
}

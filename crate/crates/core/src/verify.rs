//! The acceptance checks, shared by `walklab verify` and the test suite.

use std::fmt;

use crate::closed_forms::{
    build_initial, psi_fourier_pi2, psi_grover_pi2, psi_ms_diagonal_parts, psi_ms_uniform, InitialKind,
    InitialSpec,
};
use crate::coin::{fourier_coin, fourier_coin_ff, fourier_coin_ms, grover_coin, Coin, ShiftKind};
use crate::error::{Result, WalkError};
use crate::evolution::{detect_period, evolve_torus, return_probability_series, running_average, Trajectory};
use crate::io::{certificate_to_json, spectrum_to_csv, state_to_csv};
use crate::linalg::{C64, ONE};
use crate::momentum::{eigen_unitary, evolve_via_momentum, momentum_matrix};
use crate::random::{random_alpha, random_coin, random_state, rng};
use crate::spectra::{
    constant_root_certificate, eig_ff_special, eig_ms_special, fourth_roots_of_i, spectrum_sweep, FfLine,
    MsLine, SpectrumLine, Verdict,
};
use crate::state::{Amplitude4, TorusState};

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2} {:<24} {}", self.id, self.name, self.detail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Pi2,
    ClosedForms,
    Spectra,
    Localization,
    Engines,
    Unitarity,
    All,
}

impl std::str::FromStr for Suite {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "pi2" => Suite::Pi2,
            "closed-forms" => Suite::ClosedForms,
            "spectra" => Suite::Spectra,
            "localization" => Suite::Localization,
            "engines" => Suite::Engines,
            "unitarity" => Suite::Unitarity,
            "all" => Suite::All,
            other => return Err(WalkError::Parse(format!("unknown suite '{other}'"))),
        })
    }
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Pi2 => &[1, 2, 3],
            Suite::ClosedForms => &[4, 5],
            Suite::Spectra => &[6, 7],
            Suite::Localization => &[8, 10],
            Suite::Engines => &[9],
            Suite::Unitarity => &[11],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11],
        }
    }
}

pub fn run_criterion(id: u8) -> CriterionOutcome {
    let (name, result) = match id {
        1 => ("pi2-fourier-tables", pi2_fourier_tables()),
        2 => ("pi2-grover-tables", pi2_grover_tables()),
        3 => ("period-detection", period_detection()),
        4 => ("uniform-closed-form", uniform_closed_form()),
        5 => ("diagonal-closed-form", diagonal_closed_form()),
        6 => ("spectral-correctness", spectral_correctness()),
        7 => ("closed-form-eigenpairs", closed_form_eigenpairs()),
        8 => ("localization-certificate", localization_certificates()),
        9 => ("engine-equivalence", engine_equivalence()),
        10 => ("non-localization-probe", non_localization_probe()),
        11 => ("unitarity-determinism", unitarity_and_determinism()),
        _ => ("unknown", Err(WalkError::InvalidArgument(format!("no criterion {id}")))),
    };
    match result {
        Ok((passed, detail)) => CriterionOutcome { id, name, passed, detail },
        Err(e) => CriterionOutcome {
            id,
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

pub fn run_suite(suite: Suite) -> Vec<CriterionOutcome> {
    suite.criteria().iter().map(|&id| run_criterion(id)).collect()
}

type Check = Result<(bool, String)>;

const TABLE_TOL: f64 = 1e-11;
const GROVER_PERIOD_TOL: f64 = 1e-12;

fn table_deviation(
    coin: &Coin,
    alpha: Amplitude4,
    steps: usize,
    table: fn(usize, ShiftKind, Amplitude4) -> TorusState,
) -> Result<(f64, Vec<TorusState>)> {
    let init = TorusState::delta(2, alpha)?;
    let states: Vec<TorusState> = Trajectory::new(&init, coin)?.take(steps).collect();
    let dev = states
        .iter()
        .enumerate()
        .map(|(n, s)| s.max_abs_diff(&table(n, coin.shift(), alpha)))
        .fold(0.0, f64::max);
    Ok((dev, states))
}

/// 1. Fourier π₂² tables against evolution: n ∈ 0..31, both shifts, 20 random α.
pub fn pi2_fourier_tables() -> Check {
    let mut worst: f64 = 0.0;
    for shift in [ShiftKind::Moving, ShiftKind::FlipFlop] {
        let coin = fourier_coin(shift);
        let mut r = rng(1);
        for _ in 0..20 {
            let (dev, _) = table_deviation(&coin, random_alpha(&mut r), 32, psi_fourier_pi2)?;
            worst = worst.max(dev);
        }
    }
    Ok((worst <= TABLE_TOL, format!("max deviation {worst:.2e} (tol {TABLE_TOL:.0e})")))
}

/// 2. Grover π₂² tables: n ∈ 0..15, plus Ψ_{n+4} = Ψ_n.
pub fn pi2_grover_tables() -> Check {
    let mut worst: f64 = 0.0;
    let mut period: f64 = 0.0;
    for shift in [ShiftKind::Moving, ShiftKind::FlipFlop] {
        let coin = grover_coin(shift);
        let mut r = rng(2);
        for _ in 0..20 {
            let (dev, states) = table_deviation(&coin, random_alpha(&mut r), 20, psi_grover_pi2)?;
            worst = worst.max(dev);
            for n in 0..16 {
                period = period.max(states[n + 4].max_abs_diff(&states[n]));
            }
        }
    }
    let passed = worst <= TABLE_TOL && period <= GROVER_PERIOD_TOL;
    Ok((
        passed,
        format!("max deviation {worst:.2e}, max |psi(n+4) - psi(n)| {period:.2e}"),
    ))
}

/// 3. Periods 16 (Fourier) and 4 (Grover) on π₂² from a delta start, horizon 64.
pub fn period_detection() -> Check {
    let mut passed = true;
    let mut parts = Vec::new();
    for (name, coin, want) in [
        ("fourier-ms", fourier_coin_ms(), 16),
        ("fourier-ff", fourier_coin_ff(), 16),
        ("grover-ms", grover_coin(ShiftKind::Moving), 4),
        ("grover-ff", grover_coin(ShiftKind::FlipFlop), 4),
    ] {
        let mut r = rng(3);
        let mut found = Vec::new();
        for _ in 0..5 {
            let report = detect_period(&TorusState::delta(2, random_alpha(&mut r))?, &coin, 64)?;
            passed &= report.period == Some(want);
            found.push(report.period);
        }
        found.dedup();
        let shown: Vec<String> = found
            .iter()
            .map(|p| p.map_or("none".to_string(), |p| p.to_string()))
            .collect();
        parts.push(format!("{name}={}", shown.join("/")));
    }
    Ok((passed, parts.join(" ")))
}

/// 4. Uniform-start closed form for N ∈ 2..=8, n ∈ 0..15, and its period dividing 4.
pub fn uniform_closed_form() -> Check {
    let coin = fourier_coin_ms();
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    let mut periods_ok = true;
    for n_side in 2..=8 {
        let alpha = random_alpha(&mut r);
        let init = build_initial(&InitialSpec::new(InitialKind::Uniform, alpha)?, n_side)?;
        for (n, s) in Trajectory::new(&init, &coin)?.take(16).enumerate() {
            worst = worst.max(s.max_abs_diff(&psi_ms_uniform(n, n_side, alpha)?));
        }
        let report = detect_period(&init, &coin, 16)?;
        periods_ok &= report.period.is_some_and(|p| 4 % p == 0);
    }
    Ok((
        worst <= 1e-12 && periods_ok,
        format!("max deviation {worst:.2e} (tol 1e-12), periods divide 4: {periods_ok}"),
    ))
}

/// 5. Diagonal-start closed form for N ∈ 2..=8, n ∈ 0..=32, trapped part on s ∈ {−1, 0, 1}.
pub fn diagonal_closed_form() -> Check {
    let coin = fourier_coin_ms();
    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    let mut stray = 0usize;
    for n_side in 2..=8 {
        let alpha = random_alpha(&mut r);
        let init = build_initial(&InitialSpec::new(InitialKind::DiagonalUniform, alpha)?, n_side)?;
        for (n, s) in Trajectory::new(&init, &coin)?.take(33).enumerate() {
            let parts = psi_ms_diagonal_parts(n, n_side, alpha)?;
            worst = worst.max(s.max_abs_diff(&parts.total()));
            for (a, b, v) in parts.trapped.iter() {
                let sum = (a + b) % n_side;
                if !v.is_zero() && sum != 0 && sum != 1 && sum != n_side - 1 {
                    stray += 1;
                }
            }
        }
    }
    Ok((
        worst <= 1e-11 && stray == 0,
        format!("max deviation {worst:.2e} (tol 1e-11), trapped sites off s in {{-1,0,1}}: {stray}"),
    ))
}

/// 6. Numerical eigenvalues satisfy the displayed polynomials on a 32×32 grid.
pub fn spectral_correctness() -> Check {
    let mut poly: f64 = 0.0;
    let mut relation: f64 = 0.0;
    for shift in [ShiftKind::Moving, ShiftKind::FlipFlop] {
        for row in spectrum_sweep(&fourier_coin(shift), 32, SpectrumLine::Full)? {
            poly = poly.max(row.poly_residual);
            relation = relation.max(row.relation_residual.unwrap_or(f64::INFINITY));
        }
    }
    Ok((
        poly <= 1e-9 && relation <= 1e-8,
        format!("max polynomial residual {poly:.2e} (tol 1e-9), max re/im residual {relation:.2e} (tol 1e-8)"),
    ))
}

/// 7. Closed-form eigenpairs on the special lines for N ∈ {2, 4, 8, 16}.
pub fn closed_form_eigenpairs() -> Check {
    let ms = fourier_coin_ms();
    let ff = fourier_coin_ff();
    let roots = fourth_roots_of_i();
    let mut worst: f64 = 0.0;
    let mut root_dev: f64 = 0.0;
    let mut fallbacks = 0usize;
    for n_side in [2usize, 4, 8, 16] {
        let origin = eig_ms_special(MsLine::Origin, 0, n_side)?;
        worst = worst.max(origin.pair_residual(&momentum_matrix(&ms, 0, 0, n_side)?.m));
        for k in 0..n_side {
            let d = eig_ms_special(MsLine::Diagonal, k, n_side)?;
            worst = worst.max(d.pair_residual(&momentum_matrix(&ms, k, k, n_side)?.m));

            let fd = eig_ff_special(FfLine::Diagonal, k, n_side)?;
            let m = momentum_matrix(&ff, k, k, n_side)?.m;
            worst = worst.max(fd.eigen.pair_residual(&m));
            fallbacks += fd.fallback.iter().filter(|&&f| f).count();
            for l in eigen_unitary(&m)?.eigenvalues {
                root_dev = root_dev.max(nearest_distance(l, &roots));
            }

            let fa = eig_ff_special(FfLine::AntiDiagonal, k, n_side)?;
            let m = momentum_matrix(&ff, k, (n_side - k) % n_side, n_side)?.m;
            worst = worst.max(fa.eigen.pair_residual(&m));
            fallbacks += fa.fallback.iter().filter(|&&f| f).count();
        }
    }
    Ok((
        worst <= 1e-9 && root_dev <= 1e-9,
        format!(
            "max |Uv - lv| {worst:.2e} (tol 1e-9), ff diagonal distance to 4th roots of i {root_dev:.2e}, \
             {fallbacks} vanishing ff vectors replaced numerically"
        ),
    ))
}

/// 8. Fourier walks have no constant root; Grover MS keeps ±1.
pub fn localization_certificates() -> Check {
    let mut passed = true;
    let mut fourier_min = f64::INFINITY;
    let mut grover_max: f64 = 0.0;
    for grid in [16, 32, 64] {
        for coin in [fourier_coin_ms(), fourier_coin_ff()] {
            let cert = constant_root_certificate(&coin, grid)?;
            passed &= cert.verdict == Verdict::NoConstantRoot;
            for cand in &cert.candidates {
                fourier_min = fourier_min.min(cand.max_residual);
            }
        }
        let cert = constant_root_certificate(&grover_coin(ShiftKind::Moving), grid)?;
        passed &= cert.verdict == Verdict::ConstantRoots;
        passed &= cert.has_root(ONE, 1e-10) && cert.has_root(-ONE, 1e-10);
        for root in &cert.constant_roots {
            let cand = cert
                .candidates
                .iter()
                .find(|c| c.lambda == *root)
                .expect("roots come from candidates");
            grover_max = grover_max.max(cand.max_residual);
        }
    }
    passed &= fourier_min >= 1e-2 && grover_max <= 1e-10;
    Ok((
        passed,
        format!("smallest rejected fourier residual {fourier_min:.3} (need >= 1e-2), largest grover root residual {grover_max:.2e} (tol 1e-10)"),
    ))
}

/// 9. Momentum-space evolution against position-space evolution.
pub fn engine_equivalence() -> Check {
    let mut worst: f64 = 0.0;
    for seed in 0..10u64 {
        let mut r = rng(900 + seed);
        let shift = if seed % 2 == 0 { ShiftKind::Moving } else { ShiftKind::FlipFlop };
        let coin = random_coin(&mut r, shift);
        for n_side in [2, 3, 4, 8, 16] {
            let init = random_state(&mut r, n_side)?;
            for steps in [1, 7, 64] {
                let a = evolve_torus(&init, &coin, steps)?;
                let b = evolve_via_momentum(&init, &coin, steps)?;
                worst = worst.max(a.max_abs_diff(&b));
            }
        }
    }
    Ok((worst <= 1e-9, format!("max deviation {worst:.2e} (tol 1e-9)")))
}

/// Grover MS floor for the running return average at horizon 128.
pub const GROVER_RETURN_FLOOR: f64 = 0.01;

/// 10. Return probabilities on ℤ² from α = e₁.
pub fn non_localization_probe() -> Check {
    let alpha = Amplitude4::basis(0);
    let mut passed = true;
    let mut parts = Vec::new();
    for (name, coin) in [("fourier-ms", fourier_coin_ms()), ("fourier-ff", fourier_coin_ff())] {
        let avg = running_average(&return_probability_series(&coin, alpha, 128)?);
        let (a32, a128) = (avg[31], avg[127]);
        passed &= a128 < a32;
        parts.push(format!("{name} avg32={a32:.5} avg128={a128:.5}"));
    }
    let avg = running_average(&return_probability_series(&grover_coin(ShiftKind::Moving), alpha, 128)?);
    passed &= avg[127] > GROVER_RETURN_FLOOR;
    parts.push(format!("grover-ms avg128={:.5} (floor {GROVER_RETURN_FLOOR})", avg[127]));
    Ok((passed, parts.join(", ")))
}

/// Outputs whose bytes must not depend on the thread count.
fn determinism_fingerprint() -> Result<Vec<String>> {
    let mut r = rng(11);
    let coin = random_coin(&mut r, ShiftKind::Moving);
    let init = random_state(&mut r, 16)?;
    Ok(vec![
        state_to_csv(&evolve_torus(&init, &coin, 40)?),
        state_to_csv(&evolve_via_momentum(&init, &coin, 40)?),
        certificate_to_json(&constant_root_certificate(&fourier_coin_ff(), 32)?),
        spectrum_to_csv(&spectrum_sweep(&fourier_coin_ms(), 16, SpectrumLine::Full)?),
    ])
}

/// 11. Norm drift over 1000 steps at N = 32 and byte-identical output across thread counts.
pub fn unitarity_and_determinism() -> Check {
    let mut drift: f64 = 0.0;
    let mut r = rng(12);
    for coin in [fourier_coin_ms(), fourier_coin_ff(), grover_coin(ShiftKind::Moving)] {
        let init = random_state(&mut r, 32)?;
        for s in Trajectory::new(&init, &coin)?.take(1001) {
            drift = drift.max((s.norm_sqr().sqrt() - 1.0).abs());
        }
    }
    let mut outputs = Vec::new();
    for threads in [1, 2, 8] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| WalkError::InvalidArgument(e.to_string()))?;
        outputs.push(pool.install(determinism_fingerprint)?);
    }
    let identical = outputs.windows(2).all(|w| w[0] == w[1]);
    Ok((
        drift <= 1e-10 && identical,
        format!("max norm drift {drift:.2e} (tol 1e-10), identical bytes across 1/2/8 threads: {identical}"),
    ))
}

/// Distance from `z` to the nearest entry of `set`.
pub fn nearest_distance(z: C64, set: &[C64]) -> f64 {
    set.iter().map(|s| (s - z).norm()).fold(f64::INFINITY, f64::min)
}

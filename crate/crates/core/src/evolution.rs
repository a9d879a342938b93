//! Position-space evolution on π_N² and on ℤ² windows.
//!
//! One step is
//!
//! Ψ_{n+1}(x₁,x₂) = U₁Ψ_n(x₁+1,x₂) + U₂Ψ_n(x₁−1,x₂) + U₃Ψ_n(x₁,x₂+1) + U₄Ψ_n(x₁,x₂−1)
//!
//! with U_j = P_j·U, so component j of the new amplitude is row j of the coin applied to
//! the neighbour the component arrives from.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coin::Coin;
use crate::error::{Result, WalkError};
use crate::linalg::C64;
use crate::state::{Amplitude4, PlaneState, Space, TorusState};

/// Tolerance used for period detection (max-norm of the amplitude difference).
pub const PERIOD_TOL: f64 = 1e-10;

/// Grids with at least this many rows are updated in parallel.
const PAR_MIN_ROWS: usize = 8;

#[inline]
fn dot(row: &[C64; 4], v: &Amplitude4) -> C64 {
    row[0] * v.0[0] + row[1] * v.0[1] + row[2] * v.0[2] + row[3] * v.0[3]
}

#[inline]
fn local_update(rows: &[[C64; 4]; 4], from: [&Amplitude4; 4]) -> Amplitude4 {
    Amplitude4([
        dot(&rows[0], from[0]),
        dot(&rows[1], from[1]),
        dot(&rows[2], from[2]),
        dot(&rows[3], from[3]),
    ])
}

fn coin_rows(coin: &Coin) -> [[C64; 4]; 4] {
    [coin.row(0), coin.row(1), coin.row(2), coin.row(3)]
}

fn require_position(state: &TorusState) -> Result<()> {
    if state.space() != Space::Position {
        return Err(WalkError::SpaceMismatch {
            expected: Space::Position,
            found: state.space(),
        });
    }
    Ok(())
}

/// One step of the walk on π_N² (indices mod N).
pub fn step_torus(state: &TorusState, coin: &Coin) -> Result<TorusState> {
    require_position(state)?;
    let n = state.n_side();
    if n == 0 {
        return Err(WalkError::EmptyLattice);
    }
    let rows = coin_rows(coin);
    let src = state.as_slice();
    let at = |a: usize, b: usize| &src[a * n + b];
    let fill_row = |a: usize, out: &mut [Amplitude4]| {
        let up = (a + 1) % n;
        let down = (a + n - 1) % n;
        for (b, cell) in out.iter_mut().enumerate() {
            let right = (b + 1) % n;
            let left = (b + n - 1) % n;
            *cell = local_update(&rows, [at(up, b), at(down, b), at(a, right), at(a, left)]);
        }
    };
    let mut next = vec![Amplitude4::ZERO; n * n];
    if n >= PAR_MIN_ROWS {
        next.par_chunks_mut(n)
            .enumerate()
            .for_each(|(a, out)| fill_row(a, out));
    } else {
        next.chunks_mut(n)
            .enumerate()
            .for_each(|(a, out)| fill_row(a, out));
    }
    Ok(TorusState::from_grid(n, Space::Position, next))
}

/// `steps`-fold application of [`step_torus`].
pub fn evolve_torus(initial: &TorusState, coin: &Coin, steps: usize) -> Result<TorusState> {
    require_position(initial)?;
    let mut s = initial.clone();
    for _ in 0..steps {
        s = step_torus(&s, coin)?;
    }
    Ok(s)
}

/// Ψ₀, Ψ₁, Ψ₂, … as an endless iterator.
pub struct Trajectory<'c> {
    next: TorusState,
    coin: &'c Coin,
}

impl<'c> Trajectory<'c> {
    pub fn new(initial: &TorusState, coin: &'c Coin) -> Result<Self> {
        require_position(initial)?;
        Ok(Trajectory {
            next: initial.clone(),
            coin,
        })
    }
}

impl Iterator for Trajectory<'_> {
    type Item = TorusState;

    fn next(&mut self) -> Option<TorusState> {
        let following = step_torus(&self.next, self.coin).expect("position state");
        Some(std::mem::replace(&mut self.next, following))
    }
}

/// One step on a ℤ² window. Refuses if the support already touches the window edge,
/// since the step would push amplitude out of the window.
pub fn step_plane(state: &PlaneState, coin: &Coin) -> Result<PlaneState> {
    if state.touches_boundary() {
        return Err(WalkError::BoundaryContact {
            radius: state.radius(),
        });
    }
    let rows = coin_rows(coin);
    let r = state.radius() as i64;
    let w = state.width();
    let mut next = vec![Amplitude4::ZERO; w * w];
    let fill_row = |i: usize, out: &mut [Amplitude4]| {
        let x1 = i as i64 - r;
        // The outer ring's sources that fall outside the window are zero.
        for (j, cell) in out.iter_mut().enumerate() {
            let x2 = j as i64 - r;
            let from = [
                state.get(x1 + 1, x2),
                state.get(x1 - 1, x2),
                state.get(x1, x2 + 1),
                state.get(x1, x2 - 1),
            ];
            *cell = local_update(&rows, [&from[0], &from[1], &from[2], &from[3]]);
        }
    };
    if w >= PAR_MIN_ROWS {
        next.par_chunks_mut(w)
            .enumerate()
            .for_each(|(i, out)| fill_row(i, out));
    } else {
        next.chunks_mut(w)
            .enumerate()
            .for_each(|(i, out)| fill_row(i, out));
    }
    Ok(PlaneState::from_grid(state.radius(), next))
}

pub fn evolve_plane(initial: &PlaneState, coin: &Coin, steps: usize) -> Result<PlaneState> {
    let mut s = initial.clone();
    for _ in 0..steps {
        s = step_plane(&s, coin)?;
    }
    Ok(s)
}

/// Site probabilities ‖Ψ(x)‖².
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measure {
    pub n_side: usize,
    /// Row-major, `probs[x1 * n_side + x2]`.
    pub probs: Vec<f64>,
}

impl Measure {
    pub fn prob(&self, x1: usize, x2: usize) -> f64 {
        self.probs[(x1 % self.n_side) * self.n_side + x2 % self.n_side]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn max_abs_diff(&self, other: &Measure) -> f64 {
        self.probs
            .iter()
            .zip(other.probs.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn measure(state: &TorusState) -> Result<Measure> {
    require_position(state)?;
    Ok(Measure {
        n_side: state.n_side(),
        probs: state.as_slice().iter().map(Amplitude4::norm_sqr).collect(),
    })
}

/// (1/T)·Σ_{n=0}^{T−1} measure(Ψ_n).
pub fn time_averaged_measure(initial: &TorusState, coin: &Coin, horizon: usize) -> Result<Measure> {
    if horizon == 0 {
        return Err(WalkError::InvalidArgument("horizon must be at least 1".into()));
    }
    let n = initial.n_side();
    let mut acc = vec![0.0; n * n];
    for state in Trajectory::new(initial, coin)?.take(horizon) {
        for (p, v) in acc.iter_mut().zip(state.as_slice()) {
            *p += v.norm_sqr();
        }
    }
    let t = horizon as f64;
    acc.iter_mut().for_each(|p| *p /= t);
    Ok(Measure { n_side: n, probs: acc })
}

/// p_n = ‖Ψ_n(0,0)‖² for n = 0..T−1 on ℤ², starting from `alpha` at the origin.
/// Runs on a window of radius T+1, which the light cone never reaches.
pub fn return_probability_series(coin: &Coin, alpha: Amplitude4, horizon: usize) -> Result<Vec<f64>> {
    if horizon == 0 {
        return Err(WalkError::InvalidArgument("horizon must be at least 1".into()));
    }
    let norm = alpha.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(WalkError::NotNormalized { norm });
    }
    let mut state = PlaneState::delta(horizon + 1, alpha);
    let mut out = Vec::with_capacity(horizon);
    for n in 0..horizon {
        out.push(state.get(0, 0).norm_sqr());
        if n + 1 < horizon {
            state = step_plane(&state, coin)?;
        }
    }
    Ok(out)
}

/// Running Cesàro means: entry t is (1/(t+1))·Σ_{n≤t} p_n.
pub fn running_average(series: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    series
        .iter()
        .enumerate()
        .map(|(t, p)| {
            acc += p;
            acc / (t + 1) as f64
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub period: Option<usize>,
    pub horizon: usize,
    /// With a period p: max over m ≤ horizon − p of ‖Ψ_{m+p} − Ψ_m‖_max.
    /// Without one: the smallest ‖Ψ_p − Ψ₀‖_max seen.
    pub max_residual: f64,
}

/// Smallest p ≤ horizon with Ψ_{m+p} = Ψ_m (to [`PERIOD_TOL`]) for every m ≤ horizon − p.
pub fn detect_period(initial: &TorusState, coin: &Coin, horizon: usize) -> Result<PeriodReport> {
    if horizon == 0 {
        return Err(WalkError::InvalidArgument("horizon must be at least 1".into()));
    }
    let states: Vec<TorusState> = Trajectory::new(initial, coin)?.take(horizon + 1).collect();
    let mut best = f64::INFINITY;
    for p in 1..=horizon {
        let first = states[p].max_abs_diff(&states[0]);
        best = best.min(first);
        if first > PERIOD_TOL {
            continue;
        }
        let worst = (0..=horizon - p)
            .map(|m| states[m + p].max_abs_diff(&states[m]))
            .fold(0.0, f64::max);
        if worst <= PERIOD_TOL {
            return Ok(PeriodReport {
                period: Some(p),
                horizon,
                max_residual: worst,
            });
        }
    }
    Ok(PeriodReport {
        period: None,
        horizon,
        max_residual: best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::{fourier_coin_ff, fourier_coin_ms, grover_coin, ShiftKind};
    use crate::linalg::c;

    fn e(j: usize) -> Amplitude4 {
        Amplitude4::basis(j)
    }

    #[test]
    fn one_step_light_cone_on_torus() {
        let s = TorusState::delta(4, e(0)).unwrap();
        let next = step_torus(&s, &fourier_coin_ms()).unwrap();
        let support: Vec<(usize, usize)> = next
            .iter()
            .filter(|(_, _, v)| !v.is_zero())
            .map(|(a, b, _)| (a, b))
            .collect();
        assert_eq!(support, vec![(0, 1), (0, 3), (1, 0), (3, 0)]);
        assert!((next.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn component_directions() {
        // Component 1 of the new state at x comes from x+e1, so it moves towards −x1.
        let n = 5;
        let coin = Coin::new(crate::linalg::Mat4::identity(), ShiftKind::Moving, crate::coin::CoinLabel::Custom).unwrap();
        for (j, expect) in [(0, (4, 0)), (1, (1, 0)), (2, (0, 4)), (3, (0, 1))] {
            let s = TorusState::delta(n, e(j)).unwrap();
            let next = step_torus(&s, &coin).unwrap();
            assert_eq!(next.get(expect.0, expect.1), e(j), "component {}", j + 1);
        }
    }

    #[test]
    fn grover_odd_step_empties_even_sites() {
        let s = TorusState::delta(2, e(0)).unwrap();
        let next = step_torus(&s, &grover_coin(ShiftKind::Moving)).unwrap();
        assert!(next.get(0, 0).is_zero());
        assert!(next.get(1, 1).is_zero());
    }

    #[test]
    fn fourier_two_steps_first_component() {
        let alpha = Amplitude4::new(c(0.5, 0.0), c(0.1, 0.3), c(-0.2, 0.4), c(0.0, -0.6)).normalized();
        let s = TorusState::delta(2, alpha).unwrap();
        let psi = evolve_torus(&s, &fourier_coin_ms(), 2).unwrap();
        let expected = (alpha[0] * 2.0 + c(1.0, 1.0) * alpha[1] - c(-1.0, 1.0) * alpha[3]) * 0.25;
        assert!((psi.get(0, 0)[0] - expected).norm() < 1e-15);
    }

    #[test]
    fn zero_steps_is_identity() {
        let s = TorusState::delta(3, e(1)).unwrap();
        assert_eq!(evolve_torus(&s, &fourier_coin_ff(), 0).unwrap(), s);
    }

    #[test]
    fn momentum_state_is_rejected() {
        let s = TorusState::zeros(2, Space::Momentum).unwrap();
        assert!(matches!(
            step_torus(&s, &fourier_coin_ms()),
            Err(WalkError::SpaceMismatch { .. })
        ));
    }

    #[test]
    fn periods_on_the_two_torus() {
        let s = TorusState::delta(2, Amplitude4::new(c(0.5, 0.0), c(0.0, 0.5), c(0.5, 0.0), c(0.0, -0.5))).unwrap();
        for coin in [fourier_coin_ms(), fourier_coin_ff()] {
            let rep = detect_period(&s, &coin, 64).unwrap();
            assert_eq!(rep.period, Some(16));
            assert!(rep.max_residual <= 1e-12);
        }
        for shift in [ShiftKind::Moving, ShiftKind::FlipFlop] {
            let rep = detect_period(&s, &grover_coin(shift), 64).unwrap();
            assert_eq!(rep.period, Some(4));
        }
        let short = detect_period(&s, &fourier_coin_ms(), 10).unwrap();
        assert_eq!(short.period, None);
        assert!(short.max_residual > 1e-3);
    }

    #[test]
    fn grover_measure_at_step_two() {
        // Ψ₂(0,0) = (1/4)(2,−2,0,0), Ψ₂(1,1) = (1/2)(1,1,0,0); odd-parity sites are empty.
        let s = TorusState::delta(2, e(0)).unwrap();
        let psi = evolve_torus(&s, &grover_coin(ShiftKind::Moving), 2).unwrap();
        let m = measure(&psi).unwrap();
        assert!((m.prob(0, 0) - 0.5).abs() < 1e-15);
        assert!((m.prob(1, 1) - 0.5).abs() < 1e-15);
        assert_eq!(m.prob(0, 1) + m.prob(1, 0), 0.0);
    }

    #[test]
    fn delta_measure() {
        let s = TorusState::delta(3, e(3)).unwrap();
        let m = measure(&s).unwrap();
        assert_eq!(m.prob(0, 0), 1.0);
        assert_eq!(m.total(), 1.0);
    }

    #[test]
    fn time_average_edge_cases() {
        let s = TorusState::delta(2, e(0)).unwrap();
        let coin = fourier_coin_ms();
        assert_eq!(time_averaged_measure(&s, &coin, 1).unwrap(), measure(&s).unwrap());
        assert!(time_averaged_measure(&s, &coin, 0).is_err());
        let one = time_averaged_measure(&s, &coin, 16).unwrap();
        let three = time_averaged_measure(&s, &coin, 48).unwrap();
        assert!(one.max_abs_diff(&three) < 1e-12);
        assert!((one.total() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn plane_refuses_boundary_contact() {
        let mut p = PlaneState::zeros(2);
        p.set(2, 0, e(0));
        assert!(matches!(
            step_plane(&p, &fourier_coin_ms()),
            Err(WalkError::BoundaryContact { radius: 2 })
        ));
        // Radius 1 delta: one step is fine, the second is refused.
        let p = PlaneState::delta(1, e(0));
        let p1 = step_plane(&p, &grover_coin(ShiftKind::Moving)).unwrap();
        assert_eq!(p1.support_extent(), Some(1));
        assert!(step_plane(&p1, &grover_coin(ShiftKind::Moving)).is_err());
    }

    #[test]
    fn return_probability_basic() {
        let coin = fourier_coin_ms();
        let p = return_probability_series(&coin, e(0), 1).unwrap();
        assert_eq!(p, vec![1.0]);
        let p = return_probability_series(&coin, e(0), 20).unwrap();
        assert!(p.iter().skip(1).step_by(2).all(|&x| x == 0.0));
        assert!(return_probability_series(&coin, e(0) * c(2.0, 0.0), 4).is_err());
        assert_eq!(running_average(&[1.0, 0.0, 0.5]), vec![1.0, 0.5, 0.5]);
    }
}

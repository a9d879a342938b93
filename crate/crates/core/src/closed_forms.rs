//! Exact Ψₙ for the initial conditions with known closed forms.
//!
//! The π₂² tables are stored as per-site transfer matrices: Ψₙ(x) = Tₙ(x)·α for a walk
//! started from α at the origin.

use crate::coin::ShiftKind;
use crate::error::{Result, WalkError};
use crate::linalg::{i_pow, mat_from_rows, sign_pow, Mat4, C64, I, ONE, ZERO};
use crate::state::{Amplitude4, Space, TorusState};

/// Tolerance on ‖α‖ = 1 for initial specs.
pub const ALPHA_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialKind {
    /// α at the origin.
    DeltaOrigin,
    /// α/N at every site.
    Uniform,
    /// α/√N on x₁ + x₂ ≡ 0 (mod N).
    DiagonalUniform,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitialSpec {
    pub kind: InitialKind,
    pub alpha: Amplitude4,
}

impl InitialSpec {
    pub fn new(kind: InitialKind, alpha: Amplitude4) -> Result<Self> {
        let norm = alpha.norm();
        if (norm - 1.0).abs() > ALPHA_TOL {
            return Err(WalkError::NotNormalized { norm });
        }
        Ok(InitialSpec { kind, alpha })
    }
}

pub fn build_initial(spec: &InitialSpec, n_side: usize) -> Result<TorusState> {
    let norm = spec.alpha.norm();
    if (norm - 1.0).abs() > ALPHA_TOL {
        return Err(WalkError::NotNormalized { norm });
    }
    if n_side < 2 {
        return Err(WalkError::InvalidArgument(format!("lattice side {n_side} is below 2")));
    }
    let alpha = spec.alpha;
    let nf = n_side as f64;
    match spec.kind {
        InitialKind::DeltaOrigin => TorusState::delta(n_side, alpha),
        InitialKind::Uniform => {
            let v = alpha * C64::new(1.0 / nf, 0.0);
            TorusState::from_fn(n_side, Space::Position, |_, _| v)
        }
        InitialKind::DiagonalUniform => {
            let v = alpha * C64::new(1.0 / nf.sqrt(), 0.0);
            TorusState::from_fn(n_side, Space::Position, |a, b| {
                if (a + b) % n_side == 0 {
                    v
                } else {
                    Amplitude4::ZERO
                }
            })
        }
    }
}

/// Fourier MS walk from the uniform start; independent of x and periodic with period 4.
pub fn psi_ms_uniform(n: usize, n_side: usize, alpha: Amplitude4) -> Result<TorusState> {
    let m = sign_pow(n as i64);
    let ii = i_pow(n as i64) * 2.0;
    let r = |x: f64| C64::new(x, 0.0);
    let t = mat_from_rows([
        [r(3.0 + m), r(1.0 - m), r(1.0 - m), r(1.0 - m)],
        [r(1.0 - m), (1.0 + m) + ii, r(-1.0 + m), (1.0 + m) - ii],
        [r(1.0 - m), r(-1.0 + m), r(3.0 + m), r(-1.0 + m)],
        [r(1.0 - m), (1.0 + m) - ii, r(-1.0 + m), (1.0 + m) + ii],
    ]) * C64::new(1.0 / (4.0 * n_side as f64), 0.0);
    let v = alpha.apply(&t);
    TorusState::from_fn(n_side, Space::Position, |_, _| v)
}

/// The diagonal-start state split into the part pinned near x₁ + x₂ ≡ 0 and the part
/// that travels along the anti-diagonals.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalParts {
    pub trapped: TorusState,
    pub ballistic: TorusState,
}

impl DiagonalParts {
    pub fn total(&self) -> TorusState {
        self.trapped.added(&self.ballistic)
    }
}

/// Trapped terms sit on s ∈ {0, −1, 1}, ballistic terms on s ≡ ∓n, where s = x₁ + x₂ mod N.
pub fn psi_ms_diagonal_parts(n: usize, n_side: usize, alpha: Amplitude4) -> Result<DiagonalParts> {
    if n_side == 0 {
        return Err(WalkError::EmptyLattice);
    }
    let [a1, a2, a3, a4] = alpha.0;
    let big = n_side as i64;
    let pre = 1.0 / (4.0 * (n_side as f64).sqrt());
    let m = sign_pow(n as i64);
    let even = C64::new((1.0 + m) * pre, 0.0);
    let odd = C64::new((1.0 - m) * pre, 0.0);
    let ni = n as i64;
    let at = |s: i64| s.rem_euclid(big) as usize;

    let t1 = Amplitude4::new(a1 - a3, a2 + a4, -(a1 - a3), a2 + a4) * even;
    // The (1 − (−1)ⁿ) factor here is the one consistent with direct evolution.
    let t2 = Amplitude4::new(a2 + a4, ZERO, -(a2 + a4), ZERO) * odd;
    let t3 = Amplitude4::new(ZERO, a1 - a3, ZERO, a1 - a3) * odd;
    let t4 = Amplitude4::new(a1 + a3, ZERO, a1 + a3, ZERO) * C64::new(2.0 * pre, 0.0);
    let t5 = Amplitude4::new(ZERO, a2 - a4, ZERO, -(a2 - a4)) * (i_pow(ni) * (2.0 * pre));

    let trapped_by_s = |s: usize| {
        let mut v = Amplitude4::ZERO;
        if s == at(0) {
            v = v + t1;
        }
        if s == at(-1) {
            v = v + t2;
        }
        if s == at(1) {
            v = v + t3;
        }
        v
    };
    let ballistic_by_s = |s: usize| {
        let mut v = Amplitude4::ZERO;
        if s == at(-ni) {
            v = v + t4;
        }
        if s == at(ni) {
            v = v + t5;
        }
        v
    };
    let trapped = TorusState::from_fn(n_side, Space::Position, |a, b| trapped_by_s((a + b) % n_side))?;
    let ballistic = TorusState::from_fn(n_side, Space::Position, |a, b| ballistic_by_s((a + b) % n_side))?;
    Ok(DiagonalParts { trapped, ballistic })
}

/// Fourier MS walk from the diagonal start.
pub fn psi_ms_diagonal(n: usize, n_side: usize, alpha: Amplitude4) -> Result<TorusState> {
    Ok(psi_ms_diagonal_parts(n, n_side, alpha)?.total())
}

/// Transfer matrices on π₂², indexed `[x1][x2]`.
pub type Pi2Transfer = [[Mat4; 2]; 2];

fn quarter(rows: [[C64; 4]; 4]) -> Mat4 {
    mat_from_rows(rows) * C64::new(0.25, 0.0)
}

fn on_sites(n: usize, even: (Mat4, Mat4), odd: (Mat4, Mat4)) -> Pi2Transfer {
    let z = Mat4::zeros();
    if n.is_multiple_of(2) {
        [[even.0, z], [z, even.1]]
    } else {
        [[z, odd.0], [odd.1, z]]
    }
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn fourier_ms_transfer(n: usize) -> Pi2Transfer {
    let k = (n / 4) as i64;
    let ik = i_pow(k);
    let ik1 = i_pow(k + 1);
    let o = ONE;
    let z = ZERO;
    let two = real(2.0);
    match n % 4 {
        0 => {
            let a = Mat4::identity() * ((o + ik) * 0.5);
            let b = Mat4::identity() * ((o - ik) * 0.5);
            on_sites(n, (a, b), (a, b))
        }
        1 => {
            let (p, m) = (o + ik, o - ik);
            let a = quarter([
                [m, m, m, m],
                [m, I - ik1, -m, -(I - ik1)],
                [p, -p, p, -p],
                [p, -I - ik1, -p, I + ik1],
            ]);
            let b = quarter([
                [p, p, p, p],
                [p, I + ik1, -p, -(I + ik1)],
                [m, -m, m, -m],
                [m, -I + ik1, -m, I - ik1],
            ]);
            on_sites(n, (a, b), (a, b))
        }
        2 => {
            let u = ik * (o + I);
            let v = ik * (I - o);
            // Row 2, column 1 is ±iᵏ(1 + i), as direct evolution gives.
            let a = quarter([[two, u, z, -v], [u, z, -v, two], [z, v, two, -u], [v, two, -u, z]]);
            let b = quarter([[two, -u, z, v], [-u, z, v, two], [z, -v, two, u], [-v, two, u, z]]);
            on_sites(n, (a, b), (a, b))
        }
        _ => {
            let (p, m) = (o + ik1, o - ik1);
            let a = quarter([
                [m, m, p, p],
                [m, -I - ik, -p, I - ik],
                [m, -m, p, -p],
                [m, I + ik, -p, -I + ik],
            ]);
            let b = quarter([
                [p, p, m, m],
                [p, -I + ik, -m, I + ik],
                [p, -p, m, -m],
                [p, I - ik, -m, -I - ik],
            ]);
            on_sites(n, (a, b), (a, b))
        }
    }
}

fn fourier_ff_transfer(n: usize) -> Pi2Transfer {
    let k = (n / 4) as i64;
    let ik = i_pow(k);
    let ik1 = i_pow(k + 1);
    let mk = sign_pow(k);
    let mk1 = -mk;
    let z = ZERO;
    match n % 4 {
        0 => {
            let d = ik * 2.0 + (1.0 + mk);
            let e = ik * 2.0 - (1.0 + mk);
            let (p, q) = (real(-1.0 + mk), real(1.0 - mk));
            let a = quarter([[d, z, p, z], [z, d, z, q], [p, z, d, z], [z, q, z, d]]);
            let b = quarter([[e, z, -p, z], [z, e, z, -q], [-p, z, e, z], [z, -q, z, e]]);
            on_sites(n, (a, b), (a, b))
        }
        1 => {
            let a = quarter([
                [-1.0 + ik, I * mk1 + ik1, 1.0 - ik, I * mk - ik1],
                [mk1 + ik, -1.0 + ik, mk1 + ik, -1.0 + ik],
                [1.0 + ik, I * mk1 - ik1, -1.0 - ik, I * mk + ik1],
                [mk + ik, -1.0 - ik, mk + ik, -1.0 - ik],
            ]);
            let b = quarter([
                [1.0 + ik, I * mk + ik1, -1.0 - ik, I * mk1 - ik1],
                [mk + ik, 1.0 + ik, mk + ik, 1.0 + ik],
                [-1.0 + ik, I * mk - ik1, 1.0 - ik, I * mk1 + ik1],
                [mk1 + ik, 1.0 - ik, mk1 + ik, 1.0 - ik],
            ]);
            on_sites(n, (a, b), (a, b))
        }
        2 => {
            let p = 1.0 + I * mk;
            let q = -1.0 + I * mk;
            let r = 1.0 - I * mk;
            let a = quarter([
                [p, ik1 * 2.0, q, z],
                [ik * 2.0, p, z, r],
                [q, z, p, ik1 * -2.0],
                [z, r, ik * -2.0, p],
            ]);
            let b = quarter([
                [-p, ik1 * 2.0, r, z],
                [ik * 2.0, -p, z, -r],
                [r, z, -p, ik1 * -2.0],
                [z, -r, ik * -2.0, -p],
            ]);
            on_sites(n, (a, b), (a, b))
        }
        _ => {
            let a = quarter([
                [-1.0 + ik1, mk + ik1, 1.0 + ik1, mk1 + ik1],
                [I * mk1 + ik, -1.0 + ik1, I * mk1 - ik, -1.0 - ik1],
                [1.0 - ik1, mk + ik1, -1.0 - ik1, mk1 + ik1],
                [I * mk - ik, -1.0 + ik1, I * mk + ik, -1.0 - ik1],
            ]);
            let b = quarter([
                [1.0 + ik1, mk1 + ik1, -1.0 + ik1, mk + ik1],
                [I * mk + ik, 1.0 + ik1, I * mk - ik, 1.0 - ik1],
                [-1.0 - ik1, mk1 + ik1, 1.0 - ik1, mk + ik1],
                [I * mk1 - ik, 1.0 + ik1, I * mk1 + ik, 1.0 - ik1],
            ]);
            on_sites(n, (a, b), (a, b))
        }
    }
}

fn grover_transfer(n: usize, shift: ShiftKind) -> Pi2Transfer {
    let ni = n as i64;
    let i_n = i_pow(ni);
    let i1 = i_pow(ni + 1);
    let p = (1.0 + sign_pow(ni)) / 8.0;
    let q = (ONE - i_n) * ((1.0 + sign_pow(ni)) / 8.0);
    let r = (1.0 + sign_pow(ni + 1)) / 8.0;
    let s = match shift {
        ShiftKind::Moving => 1.0,
        ShiftKind::FlipFlop => -1.0,
    };
    let z = ZERO;
    let o = ONE;
    let (d, e) = (i_n + 3.0, i_n - 1.0);
    let a = mat_from_rows([[d, e, z, z], [e, d, z, z], [z, z, d, e], [z, z, e, d]]) * real(p);
    let b = mat_from_rows([[o, o, z, z], [o, o, z, z], [z, z, o, o], [z, z, o, o]]) * q;
    let (pl, mi) = (1.0 + i1, 1.0 - i1);
    let (t, u) = (real(2.0 * s), real(-2.0 * s));
    let c01 = mat_from_rows([[z, z, pl, pl], [z, z, pl, pl], [mi, mi, u, t], [mi, mi, t, u]]) * real(r);
    let c10 = mat_from_rows([[u, t, mi, mi], [t, u, mi, mi], [pl, pl, z, z], [pl, pl, z, z]]) * real(r);
    [[a, c01], [c10, b]]
}

/// Per-site transfer matrices of the Fourier walk on π₂² at step n (period 16).
pub fn fourier_pi2_transfer(n: usize, shift: ShiftKind) -> Pi2Transfer {
    let n = n % 16;
    match shift {
        ShiftKind::Moving => fourier_ms_transfer(n),
        ShiftKind::FlipFlop => fourier_ff_transfer(n),
    }
}

/// Per-site transfer matrices of the Grover walk on π₂² at step n (period 4).
pub fn grover_pi2_transfer(n: usize, shift: ShiftKind) -> Pi2Transfer {
    grover_transfer(n % 4, shift)
}

fn apply_transfer(t: &Pi2Transfer, alpha: Amplitude4) -> TorusState {
    TorusState::from_fn(2, Space::Position, |a, b| alpha.apply(&t[a][b])).expect("side 2 is valid")
}

pub fn psi_fourier_pi2(n: usize, shift: ShiftKind, alpha: Amplitude4) -> TorusState {
    apply_transfer(&fourier_pi2_transfer(n, shift), alpha)
}

pub fn psi_grover_pi2(n: usize, shift: ShiftKind, alpha: Amplitude4) -> TorusState {
    apply_transfer(&grover_pi2_transfer(n, shift), alpha)
}

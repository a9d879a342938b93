//! Small dense complex linear algebra shared by every module.

use std::f64::consts::PI;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Mat4 = Matrix4<C64>;
pub type Vec4 = Vector4<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn mat_from_rows(rows: [[C64; 4]; 4]) -> Mat4 {
    Mat4::from_fn(|r, col| rows[r][col])
}

pub fn rows_of(m: &Mat4) -> [[C64; 4]; 4] {
    let mut out = [[ZERO; 4]; 4];
    for (r, row) in out.iter_mut().enumerate() {
        for (col, v) in row.iter_mut().enumerate() {
            *v = m[(r, col)];
        }
    }
    out
}

/// Largest entry modulus.
pub fn max_abs(m: &Mat4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_vec(v: &Vec4) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// ‖m·m† − I‖_max
pub fn unitarity_residual(m: &Mat4) -> f64 {
    max_abs(&(m * m.adjoint() - Mat4::identity()))
}

/// |v⟩⟨v|
pub fn outer(v: &Vec4) -> Mat4 {
    v * v.adjoint()
}

/// The pairwise swap that turns a moving-shift coin into its flip-flop partner.
pub fn swap_matrix() -> Mat4 {
    let o = ONE;
    let z = ZERO;
    mat_from_rows([[z, o, z, z], [o, z, z, z], [z, z, z, o], [z, z, o, z]])
}

/// iⁿ, exact for every integer n.
pub fn i_pow(n: i64) -> C64 {
    match n.rem_euclid(4) {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

/// (−1)ⁿ
pub fn sign_pow(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// ω^e with ω = exp(2πi/n). Exact at the quarter turns.
pub fn omega_pow(n: usize, e: i64) -> C64 {
    let n = n as i64;
    let r = e.rem_euclid(n);
    if (4 * r) % n == 0 {
        return i_pow(4 * r / n);
    }
    C64::from_polar(1.0, 2.0 * PI * r as f64 / n as f64)
}

/// Principal argument in [0, 2π); values within 1e−12 of 2π are mapped to 0.
pub fn principal_arg(z: C64) -> f64 {
    let mut a = z.arg();
    if a < 0.0 {
        a += 2.0 * PI;
    }
    if 2.0 * PI - a < 1e-12 {
        a = 0.0;
    }
    a
}

/// Determinant of λI − m expanded by cofactors (independent of any polynomial route).
pub fn det_shifted(m: &Mat4, lambda: C64) -> C64 {
    let a = Mat4::identity() * lambda - m;
    det4(&a)
}

pub fn det4(a: &Mat4) -> C64 {
    let m2 = |r0: usize, r1: usize, c0: usize, c1: usize| {
        a[(r0, c0)] * a[(r1, c1)] - a[(r0, c1)] * a[(r1, c0)]
    };
    // Laplace expansion along the first two rows.
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut det = ZERO;
    for &(c0, c1) in &pairs {
        let rest: Vec<usize> = (0..4).filter(|&x| x != c0 && x != c1).collect();
        let sign = if (c0 + c1 + 1) % 2 == 0 { 1.0 } else { -1.0 };
        det += m2(0, 1, c0, c1) * m2(2, 3, rest[0], rest[1]) * sign;
    }
    det
}

//! Walk states: one four-component amplitude per site.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::linalg::{Mat4, Vec4, C64, ZERO};

/// Chirality amplitudes (c₁, c₂, c₃, c₄) at one site or one momentum.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Amplitude4(pub [C64; 4]);

impl Amplitude4 {
    pub const ZERO: Amplitude4 = Amplitude4([ZERO; 4]);

    pub fn new(c1: C64, c2: C64, c3: C64, c4: C64) -> Self {
        Amplitude4([c1, c2, c3, c4])
    }

    /// From interleaved (re₁, im₁, …, re₄, im₄).
    pub fn from_reals(v: [f64; 8]) -> Self {
        Amplitude4([
            C64::new(v[0], v[1]),
            C64::new(v[2], v[3]),
            C64::new(v[4], v[5]),
            C64::new(v[6], v[7]),
        ])
    }

    pub fn to_reals(&self) -> [f64; 8] {
        let mut out = [0.0; 8];
        for (j, z) in self.0.iter().enumerate() {
            out[2 * j] = z.re;
            out[2 * j + 1] = z.im;
        }
        out
    }

    pub fn basis(j: usize) -> Self {
        let mut a = Self::ZERO;
        a.0[j] = C64::new(1.0, 0.0);
        a
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn normalized(&self) -> Self {
        *self * C64::new(1.0 / self.norm(), 0.0)
    }

    pub fn max_abs_diff(&self, other: &Amplitude4) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_vec4(&self) -> Vec4 {
        Vec4::new(self.0[0], self.0[1], self.0[2], self.0[3])
    }

    pub fn from_vec4(v: &Vec4) -> Self {
        Amplitude4([v[0], v[1], v[2], v[3]])
    }

    pub fn apply(&self, m: &Mat4) -> Self {
        Self::from_vec4(&(m * self.to_vec4()))
    }
}

impl Index<usize> for Amplitude4 {
    type Output = C64;
    fn index(&self, j: usize) -> &C64 {
        &self.0[j]
    }
}

impl IndexMut<usize> for Amplitude4 {
    fn index_mut(&mut self, j: usize) -> &mut C64 {
        &mut self.0[j]
    }
}

impl Add for Amplitude4 {
    type Output = Amplitude4;
    fn add(mut self, rhs: Amplitude4) -> Amplitude4 {
        for j in 0..4 {
            self.0[j] += rhs.0[j];
        }
        self
    }
}

impl Sub for Amplitude4 {
    type Output = Amplitude4;
    fn sub(mut self, rhs: Amplitude4) -> Amplitude4 {
        for j in 0..4 {
            self.0[j] -= rhs.0[j];
        }
        self
    }
}

impl Mul<C64> for Amplitude4 {
    type Output = Amplitude4;
    fn mul(mut self, s: C64) -> Amplitude4 {
        for z in self.0.iter_mut() {
            *z *= s;
        }
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Position,
    Momentum,
}

/// An N×N grid of amplitudes on π_N², in position or momentum space.
///
/// Storage is row-major in the first coordinate: site (a, b) lives at `a·N + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusState {
    n_side: usize,
    space: Space,
    grid: Vec<Amplitude4>,
}

impl TorusState {
    pub fn zeros(n_side: usize, space: Space) -> Result<Self> {
        if n_side == 0 {
            return Err(WalkError::EmptyLattice);
        }
        Ok(TorusState {
            n_side,
            space,
            grid: vec![Amplitude4::ZERO; n_side * n_side],
        })
    }

    pub fn from_fn(
        n_side: usize,
        space: Space,
        mut f: impl FnMut(usize, usize) -> Amplitude4,
    ) -> Result<Self> {
        let mut s = Self::zeros(n_side, space)?;
        for a in 0..n_side {
            for b in 0..n_side {
                s.grid[a * n_side + b] = f(a, b);
            }
        }
        Ok(s)
    }

    pub(crate) fn from_grid(n_side: usize, space: Space, grid: Vec<Amplitude4>) -> Self {
        debug_assert_eq!(grid.len(), n_side * n_side);
        TorusState { n_side, space, grid }
    }

    /// `alpha` at (0,0), zero elsewhere.
    pub fn delta(n_side: usize, alpha: Amplitude4) -> Result<Self> {
        let mut s = Self::zeros(n_side, Space::Position)?;
        s.grid[0] = alpha;
        Ok(s)
    }

    pub fn n_side(&self) -> usize {
        self.n_side
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn get(&self, a: usize, b: usize) -> Amplitude4 {
        self.grid[(a % self.n_side) * self.n_side + (b % self.n_side)]
    }

    pub fn set(&mut self, a: usize, b: usize, v: Amplitude4) {
        let n = self.n_side;
        self.grid[(a % n) * n + (b % n)] = v;
    }

    pub fn as_slice(&self) -> &[Amplitude4] {
        &self.grid
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [Amplitude4] {
        &mut self.grid
    }

    /// Sites in storage order with their coordinates.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Amplitude4)> + '_ {
        let n = self.n_side;
        self.grid.iter().enumerate().map(move |(i, v)| (i / n, i % n, v))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.grid.iter().map(Amplitude4::norm_sqr).sum()
    }

    /// max over sites and components of |self − other|.
    pub fn max_abs_diff(&self, other: &TorusState) -> f64 {
        assert_eq!(self.n_side, other.n_side, "lattice sizes differ");
        self.grid
            .iter()
            .zip(other.grid.iter())
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    /// The state moved by (d₁, d₂): new(x) = old(x − d).
    pub fn translated(&self, d1: usize, d2: usize) -> TorusState {
        let n = self.n_side;
        let mut out = self.clone();
        for (a, b, v) in self.iter() {
            out.set((a + d1) % n, (b + d2) % n, *v);
        }
        out
    }

    pub fn scaled(&self, s: C64) -> TorusState {
        let mut out = self.clone();
        for v in out.grid.iter_mut() {
            *v = *v * s;
        }
        out
    }

    pub fn added(&self, other: &TorusState) -> TorusState {
        assert_eq!(self.n_side, other.n_side, "lattice sizes differ");
        let mut out = self.clone();
        for (v, w) in out.grid.iter_mut().zip(other.grid.iter()) {
            *v = *v + *w;
        }
        out
    }
}

/// A (2R+1)×(2R+1) window of ℤ² centred on the origin. Amplitudes outside the
/// window are zero by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneState {
    radius: usize,
    grid: Vec<Amplitude4>,
}

impl PlaneState {
    pub fn zeros(radius: usize) -> Self {
        let w = 2 * radius + 1;
        PlaneState {
            radius,
            grid: vec![Amplitude4::ZERO; w * w],
        }
    }

    pub fn delta(radius: usize, alpha: Amplitude4) -> Self {
        let mut s = Self::zeros(radius);
        s.set(0, 0, alpha);
        s
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn width(&self) -> usize {
        2 * self.radius + 1
    }

    fn index(&self, x1: i64, x2: i64) -> Option<usize> {
        let r = self.radius as i64;
        if x1.abs() > r || x2.abs() > r {
            return None;
        }
        Some(((x1 + r) as usize) * self.width() + (x2 + r) as usize)
    }

    /// Zero outside the window.
    pub fn get(&self, x1: i64, x2: i64) -> Amplitude4 {
        self.index(x1, x2).map_or(Amplitude4::ZERO, |i| self.grid[i])
    }

    /// Panics outside the window.
    pub fn set(&mut self, x1: i64, x2: i64, v: Amplitude4) {
        let i = self.index(x1, x2).expect("site outside the window");
        self.grid[i] = v;
    }

    pub(crate) fn from_grid(radius: usize, grid: Vec<Amplitude4>) -> Self {
        PlaneState { radius, grid }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, &Amplitude4)> + '_ {
        let w = self.width();
        let r = self.radius as i64;
        self.grid
            .iter()
            .enumerate()
            .map(move |(i, v)| ((i / w) as i64 - r, (i % w) as i64 - r, v))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.grid.iter().map(Amplitude4::norm_sqr).sum()
    }

    /// True if any site on the outermost ring carries a nonzero amplitude.
    pub fn touches_boundary(&self) -> bool {
        let r = self.radius as i64;
        self.iter()
            .any(|(x1, x2, v)| (x1.abs() == r || x2.abs() == r) && !v.is_zero())
    }

    /// max |x₁|+|x₂| over sites with a nonzero amplitude (None if the state is zero).
    pub fn support_extent(&self) -> Option<i64> {
        self.iter()
            .filter(|(_, _, v)| !v.is_zero())
            .map(|(x1, x2, _)| x1.abs() + x2.abs())
            .max()
    }
}

//! The Heisenberg group: points, group law, dilations, the Korányi gauge and
//! the change of basis between coordinate vectors and the left-invariant
//! frame `X_1..X_n, Y_1..Y_n, T`.

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Q};

/// Index `n` of the group `H^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeisParams {
    n: usize,
}

impl HeisParams {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("Heisenberg index n must be at least 1".into()));
        }
        // blades are stored as u32 bitmasks
        if 2 * n + 1 > 31 {
            return Err(Error::Parameter(format!("n = {n} is too large")));
        }
        Ok(HeisParams { n })
    }

    pub fn n(self) -> usize {
        self.n
    }

    /// Topological dimension `2n + 1`.
    pub fn dim(self) -> usize {
        2 * self.n + 1
    }

    /// Homogeneous dimension `2n + 2`.
    pub fn homogeneous_dim(self) -> usize {
        2 * self.n + 2
    }

    /// Zero-based index of the vertical direction `T` (and of `theta`).
    pub fn vertical(self) -> usize {
        2 * self.n
    }

    pub fn check(self, other: HeisParams) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.n, found: other.n })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Point<S> {
    pub x: Vec<S>,
    pub y: Vec<S>,
    pub t: S,
}

impl<S: Scalar> Point<S> {
    pub fn new(x: Vec<S>, y: Vec<S>, t: S) -> Result<Self> {
        if x.len() != y.len() || x.is_empty() {
            return Err(Error::Parameter(format!(
                "x and y must have the same positive length (got {} and {})",
                x.len(),
                y.len()
            )));
        }
        Ok(Point { x, y, t })
    }

    pub fn origin(params: HeisParams) -> Self {
        Point { x: vec![S::zero(); params.n()], y: vec![S::zero(); params.n()], t: S::zero() }
    }

    /// From coordinates ordered `(x_1..x_n, y_1..y_n, t)`.
    pub fn from_coords(params: HeisParams, coords: &[S]) -> Result<Self> {
        if coords.len() != params.dim() {
            return Err(Error::Parameter(format!(
                "expected {} coordinates, found {}",
                params.dim(),
                coords.len()
            )));
        }
        let n = params.n();
        Ok(Point { x: coords[..n].to_vec(), y: coords[n..2 * n].to_vec(), t: coords[2 * n].clone() })
    }

    pub fn params(&self) -> HeisParams {
        HeisParams { n: self.x.len() }
    }

    pub fn coords(&self) -> Vec<S> {
        let mut c = Vec::with_capacity(2 * self.x.len() + 1);
        c.extend(self.x.iter().cloned());
        c.extend(self.y.iter().cloned());
        c.push(self.t.clone());
        c
    }

    pub fn to_f64(&self) -> Point<f64> {
        Point {
            x: self.x.iter().map(Scalar::to_f64).collect(),
            y: self.y.iter().map(Scalar::to_f64).collect(),
            t: self.t.to_f64(),
        }
    }

    /// `(x, y, t) * (x', y', t') = (x + x', y + y', t + t' + 1/2 sum(x_j y'_j - y_j x'_j))`.
    pub fn mul(&self, other: &Point<S>) -> Result<Point<S>> {
        self.params().check(other.params())?;
        let mut skew = S::zero();
        for j in 0..self.x.len() {
            skew = skew + self.x[j].clone() * other.y[j].clone() - self.y[j].clone() * other.x[j].clone();
        }
        Ok(Point {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a.clone() + b.clone()).collect(),
            y: self.y.iter().zip(&other.y).map(|(a, b)| a.clone() + b.clone()).collect(),
            t: self.t.clone() + other.t.clone() + skew.half(),
        })
    }

    pub fn inv(&self) -> Point<S> {
        Point {
            x: self.x.iter().map(|v| -v.clone()).collect(),
            y: self.y.iter().map(|v| -v.clone()).collect(),
            t: -self.t.clone(),
        }
    }

    /// Left translation by `q`: `p -> q * p`.
    pub fn translate_by(&self, q: &Point<S>) -> Result<Point<S>> {
        q.mul(self)
    }

    /// Anisotropic dilation `(r x, r y, r^2 t)`.
    pub fn dilate(&self, r: &S) -> Result<Point<S>> {
        if r.to_f64() <= 0.0 {
            return Err(Error::Parameter("dilation factor must be positive".into()));
        }
        Ok(Point {
            x: self.x.iter().map(|v| r.clone() * v.clone()).collect(),
            y: self.y.iter().map(|v| r.clone() * v.clone()).collect(),
            t: r.clone() * r.clone() * self.t.clone(),
        })
    }

    /// `|(x, y)|^4 + 16 t^2`, the fourth power of the Korányi norm, exact in `S`.
    pub fn koranyi_norm_pow4(&self) -> S {
        let mut r2 = S::zero();
        for v in self.x.iter().chain(&self.y) {
            r2 = r2 + v.clone() * v.clone();
        }
        let sixteen = S::from_i64(16);
        r2.clone() * r2 + sixteen * self.t.clone() * self.t.clone()
    }

    pub fn koranyi_norm(&self) -> f64 {
        self.koranyi_norm_pow4().to_f64().sqrt().sqrt()
    }
}

/// Korányi distance `||q^{-1} * p||`.
pub fn koranyi_dist<S: Scalar>(p: &Point<S>, q: &Point<S>) -> Result<f64> {
    Ok(q.inv().mul(p)?.koranyi_norm())
}

/// Coefficients of the coordinate vector `v` in the frame `W_1..W_{2n+1}` at `p`:
/// `a_j = v_{x_j}`, `b_j = v_{y_j}`, `tau = v_t + 1/2 sum(a_j y_j - b_j x_j)`.
pub fn frame_change<S: Scalar>(p: &Point<S>, v: &[S]) -> Result<Vec<S>> {
    let params = p.params();
    if v.len() != params.dim() {
        return Err(Error::Parameter(format!("vector must have {} components", params.dim())));
    }
    let n = params.n();
    let mut out = v.to_vec();
    let mut skew = S::zero();
    for j in 0..n {
        skew = skew + v[j].clone() * p.y[j].clone() - v[n + j].clone() * p.x[j].clone();
    }
    out[2 * n] = v[2 * n].clone() + skew.half();
    Ok(out)
}

/// Inverse of [`frame_change`]: expands frame coefficients in the coordinate basis.
pub fn frame_to_coords<S: Scalar>(p: &Point<S>, w: &[S]) -> Result<Vec<S>> {
    let params = p.params();
    if w.len() != params.dim() {
        return Err(Error::Parameter(format!("vector must have {} components", params.dim())));
    }
    let n = params.n();
    let mut out = w.to_vec();
    let mut skew = S::zero();
    for j in 0..n {
        skew = skew + w[j].clone() * p.y[j].clone() - w[n + j].clone() * p.x[j].clone();
    }
    out[2 * n] = w[2 * n].clone() - skew.half();
    Ok(out)
}

pub type QPoint = Point<Q>;

//! Affine functions on coordinates and regions built from open affine half-spaces.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::heis::{HeisParams, Point};
use crate::scalar::{q_near_f64, Q};

/// `f(p) = sum c_i p_i + c_0` in the coordinates `(x_1..x_n, y_1..y_n, t)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineFn {
    pub coeffs: Vec<Q>,
    pub constant: Q,
}

impl AffineFn {
    pub fn new(coeffs: Vec<Q>, constant: Q) -> Self {
        AffineFn { coeffs, constant }
    }

    /// The coordinate function with zero-based index `i`.
    pub fn coordinate(params: HeisParams, i: usize) -> Self {
        let mut coeffs = vec![Q::zero(); params.dim()];
        coeffs[i] = Q::from_integer(1.into());
        AffineFn { coeffs, constant: Q::zero() }
    }

    pub fn eval(&self, p: &Point<Q>) -> Q {
        self.eval_coords(&p.coords())
    }

    pub fn eval_coords(&self, coords: &[Q]) -> Q {
        self.coeffs.iter().zip(coords).fold(self.constant.clone(), |acc, (c, x)| acc + c * x)
    }

    pub fn eval_f64(&self, coords: &[f64]) -> f64 {
        use crate::scalar::Scalar;
        self.coeffs.iter().zip(coords).fold(self.constant.to_f64(), |acc, (c, x)| acc + c.to_f64() * x)
    }

    /// `f - level`.
    pub fn shifted(&self, level: &Q) -> Self {
        AffineFn { coeffs: self.coeffs.clone(), constant: &self.constant - level }
    }

    pub fn neg(&self) -> Self {
        AffineFn { coeffs: self.coeffs.iter().map(|c| -c).collect(), constant: -&self.constant }
    }

    /// No dependence on `t`, i.e. `f(p) = <(a, b), (x, y)> + c`.
    pub fn is_horizontal(&self) -> bool {
        self.coeffs.last().is_none_or(Zero::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `|(a, b)|`, the Korányi-Lipschitz constant of a horizontal-affine function.
    pub fn horizontal_lipschitz(&self) -> Result<f64> {
        use crate::scalar::Scalar;
        if !self.is_horizontal() {
            return Err(Error::Parameter("closed-form Lipschitz constant needs a horizontal-affine f".into()));
        }
        let n = self.coeffs.len() - 1;
        Ok(self.coeffs[..n].iter().map(|c| c.to_f64().powi(2)).sum::<f64>().sqrt())
    }
}

/// `scale * base(p)`: affine functions with an irrational overall factor such as `1/sqrt(2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledAffine {
    pub base: AffineFn,
    pub scale: f64,
}

impl ScaledAffine {
    pub fn exact(base: AffineFn) -> Self {
        ScaledAffine { base, scale: 1.0 }
    }

    pub fn eval_f64(&self, coords: &[f64]) -> f64 {
        self.scale * self.base.eval_f64(coords)
    }

    /// The level of `base` corresponding to level `t` of the scaled function.
    pub fn base_level(&self, t: f64) -> Result<Q> {
        if self.scale == 1.0 {
            q_near_f64(t)
        } else {
            q_near_f64(t / self.scale)
        }
    }

    /// Exact base level when `scale == 1`.
    pub fn base_level_exact(&self, t: &Q) -> Result<Q> {
        use crate::scalar::Scalar;
        if self.scale == 1.0 {
            Ok(t.clone())
        } else {
            q_near_f64(t.to_f64() / self.scale)
        }
    }

    pub fn is_horizontal(&self) -> bool {
        self.base.is_horizontal()
    }

    pub fn horizontal_lipschitz(&self) -> Result<f64> {
        Ok(self.scale.abs() * self.base.horizontal_lipschitz()?)
    }
}

/// A region given as a boolean combination of open half-spaces `{f > 0}`.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Everything,
    Nothing,
    Positive(AffineFn),
    And(Vec<Region>),
    Or(Vec<Region>),
}

impl Region {
    /// `{f > t}`.
    pub fn above(f: &AffineFn, t: &Q) -> Self {
        Region::Positive(f.shifted(t))
    }

    /// `{f < t}`.
    pub fn below(f: &AffineFn, t: &Q) -> Self {
        Region::Positive(f.shifted(t).neg())
    }

    /// `{a < f < b}`.
    pub fn band(f: &AffineFn, a: &Q, b: &Q) -> Self {
        Region::And(vec![Self::above(f, a), Self::below(f, b)])
    }

    pub fn contains(&self, coords: &[Q]) -> bool {
        match self {
            Region::Everything => true,
            Region::Nothing => false,
            Region::Positive(f) => f.eval_coords(coords).is_positive(),
            Region::And(rs) => rs.iter().all(|r| r.contains(coords)),
            Region::Or(rs) => rs.iter().any(|r| r.contains(coords)),
        }
    }

    /// Bounding hyperplanes in a fixed order, without repeats.
    pub fn hyperplanes(&self) -> Vec<AffineFn> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<AffineFn>) {
        match self {
            Region::Everything | Region::Nothing => {}
            Region::Positive(f) => {
                if !out.contains(f) && !out.contains(&f.neg()) {
                    out.push(f.clone());
                }
            }
            Region::And(rs) | Region::Or(rs) => rs.iter().for_each(|r| r.collect(out)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q_frac, q_int};

    #[test]
    fn evaluation_and_regions() {
        let p = HeisParams::new(1).unwrap();
        let x = AffineFn::coordinate(p, 0);
        let band = Region::band(&x, &q_frac(1, 4), &q_frac(1, 2));
        assert!(band.contains(&[q_frac(1, 3), q_int(9), q_int(9)]));
        assert!(!band.contains(&[q_frac(1, 2), q_int(0), q_int(0)]));
        assert_eq!(band.hyperplanes().len(), 2);
        assert!(Region::Or(vec![Region::Nothing, Region::Everything]).contains(&vec![q_int(0); 3]));
        assert_eq!(x.horizontal_lipschitz().unwrap(), 1.0);
        assert!(AffineFn::coordinate(p, 2).horizontal_lipschitz().is_err());
        let diag = ScaledAffine {
            base: AffineFn::new(vec![q_int(1), q_int(1), q_int(0)], q_int(0)),
            scale: std::f64::consts::FRAC_1_SQRT_2,
        };
        assert!((diag.horizontal_lipschitz().unwrap() - 1.0).abs() < 1e-15);
    }
}

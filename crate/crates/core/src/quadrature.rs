//! Grundmann–Möller quadrature on simplices with exact rational nodes and weights.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{q_int, Q};

/// Nodes in barycentric coordinates and weights normalized to sum to one, so the rule
/// computes the average of a function over the simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub dim: usize,
    pub degree: u32,
    pub nodes: Vec<Vec<Q>>,
    pub weights: Vec<Q>,
}

fn factorial(m: u32) -> Q {
    (1..=m).fold(Q::one(), |acc, i| acc * q_int(i as i64))
}

/// All `beta` in `N^{parts}` with `|beta| = total`.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl QuadratureRule {
    /// The rule on a `dim`-simplex exact for polynomials of total degree `degree`
    /// (rounded up to the next odd degree).
    pub fn grundmann_moller(dim: usize, degree: u32) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Parameter("quadrature order must be positive".into()));
        }
        if dim == 0 {
            return Ok(QuadratureRule { dim, degree, nodes: vec![vec![Q::one()]], weights: vec![Q::one()] });
        }
        let s = degree / 2;
        let d = 2 * s + 1;
        let k = dim as u32;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for i in 0..=s {
            let denom = q_int((d + k - 2 * i) as i64);
            let mut w = num_traits::pow(denom.clone(), d as usize) / (factorial(i) * factorial(d + k - i));
            if i % 2 == 1 {
                w = -w;
            }
            for beta in compositions(s - i, dim + 1) {
                nodes.push(beta.iter().map(|b| q_int((2 * b + 1) as i64) / denom.clone()).collect());
                weights.push(w.clone());
            }
        }
        let total: Q = weights.iter().fold(Q::zero(), |a, b| a + b);
        let weights = weights.into_iter().map(|w| w / total.clone()).collect();
        Ok(QuadratureRule { dim, degree: d, nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

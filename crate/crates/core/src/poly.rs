//! Sparse multivariate polynomials over the rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::scalar::{format_q, Scalar, Q};

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

/// A polynomial in a fixed number of variables, with no zero coefficients stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, i, 1, Q::one())
    }

    /// `c * v_i^e`.
    pub fn monomial(nvars: usize, i: usize, e: u32, c: Q) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut m = vec![0; nvars];
        m[i] = e;
        let mut p = Self::zero(nvars);
        p.add_term(m, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        assert_eq!(m.len(), self.nvars, "monomial arity");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if the polynomial has no variable part.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.iter().all(|e| *e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, s: &Q) -> Poly {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                let m = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Self::one(self.nvars), |acc, _| acc.mul(self))
    }

    /// Partial derivative in variable `i`.
    pub fn deriv(&self, i: usize) -> Poly {
        let mut out = Self::zero(self.nvars);
        for (m, c) in self.terms() {
            if m[i] > 0 {
                let mut m2 = m.clone();
                m2[i] -= 1;
                out.add_term(m2, c * Q::from_integer(m[i].into()));
            }
        }
        out
    }

    pub fn eval<S: Scalar>(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.nvars, "evaluation point arity");
        let mut acc = S::zero();
        for (m, c) in self.terms() {
            let mut term = S::from_q(c);
            for (x, e) in point.iter().zip(m) {
                for _ in 0..*e {
                    term = term * x.clone();
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// `p(s_0 v_0, ..., s_{m-1} v_{m-1})`.
    pub fn rescale_vars(&self, scales: &[Q]) -> Poly {
        let mut out = Self::zero(self.nvars);
        for (m, c) in self.terms() {
            let mut coeff = c.clone();
            for (s, e) in scales.iter().zip(m) {
                coeff *= num_traits::pow(s.clone(), *e as usize);
            }
            out.add_term(m.clone(), coeff);
        }
        out
    }

    /// Formats with the given variable names, e.g. `(3/2)*x1*x1*t - y1`.
    pub fn format_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            for (v, e) in m.iter().enumerate() {
                // powers are spelled as repeated factors, since `^` is reserved for the wedge
                for _ in 0..*e {
                    factors.push(names[v].clone());
                }
            }
            if factors.is_empty() || !abs.is_one() {
                let lit = format_q(&abs);
                factors.insert(0, if lit.contains('/') { format!("({lit})") } else { lit });
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("v{i}")).collect();
        f.write_str(&self.format_with(&names))
    }
}

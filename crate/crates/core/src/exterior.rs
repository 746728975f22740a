//! Constant-coefficient exterior algebra over the Heisenberg Lie algebra in the
//! orthonormal frame `W_1..W_{2n+1}` (with `W_{2n+1} = T`) and its dual coframe
//! `dw_1..dw_{2n+1}` (with `dw_{2n+1} = theta`).
//!
//! Blades are bitmasks over zero-based frame indices: bit `j - 1` is `dx_j`/`X_j`,
//! bit `n + j - 1` is `dy_j`/`Y_j`, bit `2n` is `theta`/`T`.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::heis::HeisParams;
use crate::scalar::{Scalar, Q};

pub type Blade = u32;

pub fn blade_grade(b: Blade) -> usize {
    b.count_ones() as usize
}

/// Zero-based indices of a blade in increasing order.
pub fn blade_indices(b: Blade) -> Vec<usize> {
    (0..32).filter(|i| b & (1 << i) != 0).collect()
}

pub fn blade_from_indices(indices: &[usize]) -> Blade {
    indices.iter().fold(0, |acc, &i| acc | (1 << i))
}

/// Sign of `e_a ^ e_b` relative to `e_{a|b}`, or `None` when the blades overlap.
pub fn wedge_sign(a: Blade, b: Blade) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        inversions += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

/// Sign of `e_I ^ e_{I*}` relative to the top blade: `(-1)^sigma(I)`.
pub fn complement_sign(b: Blade, top: Blade) -> i32 {
    wedge_sign(b, top & !b).expect("complement is disjoint")
}

/// All blades of grade `k` in `dim` generators, in increasing numeric order.
pub fn blades_of_grade(dim: usize, k: usize) -> Vec<Blade> {
    let mut out: Vec<Blade> = (0..(1u32 << dim)).filter(|b| blade_grade(*b) == k).collect();
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Vector,
    Covector,
}

/// A homogeneous element of the exterior algebra, stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector<S> {
    params: HeisParams,
    grade: usize,
    kind: Kind,
    coeffs: BTreeMap<Blade, S>,
}

pub type Covector<S> = Multivector<S>;

impl<S: Scalar> Multivector<S> {
    pub fn zero(params: HeisParams, grade: usize, kind: Kind) -> Self {
        Multivector { params, grade, kind, coeffs: BTreeMap::new() }
    }

    pub fn scalar(params: HeisParams, value: S, kind: Kind) -> Self {
        let mut m = Self::zero(params, 0, kind);
        m.add_term(0, value);
        m
    }

    /// `coeff * e_{i_1} ^ ... ^ e_{i_k}` for zero-based indices in any order.
    pub fn from_indices(params: HeisParams, indices: &[usize], coeff: S, kind: Kind) -> Result<Self> {
        let mut blade: Blade = 0;
        let mut sign = 1;
        for &i in indices {
            if i >= params.dim() {
                return Err(Error::Parameter(format!("frame index {} out of range", i + 1)));
            }
            match wedge_sign(blade, 1 << i) {
                Some(s) => sign *= s,
                None => return Ok(Self::zero(params, indices.len(), kind)),
            }
            blade |= 1 << i;
        }
        let mut m = Self::zero(params, indices.len(), kind);
        m.add_term(blade, if sign > 0 { coeff } else { -coeff });
        Ok(m)
    }

    /// Grade-one element with the given frame coefficients.
    pub fn from_components(params: HeisParams, components: &[S], kind: Kind) -> Result<Self> {
        if components.len() != params.dim() {
            return Err(Error::Parameter(format!("expected {} components", params.dim())));
        }
        let mut m = Self::zero(params, 1, kind);
        for (i, c) in components.iter().enumerate() {
            m.add_term(1 << i, c.clone());
        }
        Ok(m)
    }

    /// Adds `coeff * e_blade`, keeping the map free of zeros.
    pub fn add_term(&mut self, blade: Blade, coeff: S) {
        debug_assert_eq!(blade_grade(blade), self.grade);
        if coeff.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(blade).or_insert_with(S::zero);
        *entry = entry.clone() + coeff;
        if entry.is_zero() {
            self.coeffs.remove(&blade);
        }
    }

    pub fn params(&self) -> HeisParams {
        self.params
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn coeff(&self, blade: Blade) -> S {
        self.coeffs.get(&blade).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &S)> {
        self.coeffs.iter().map(|(b, c)| (*b, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        self.params.check(other.params)?;
        if self.kind != other.kind {
            return Err(Error::KindMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        if self.grade != other.grade {
            return Err(Error::GradeMismatch { left: self.grade, right: other.grade });
        }
        let mut out = self.clone();
        for (b, c) in other.terms() {
            out.add_term(b, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero(self.params, self.grade, self.kind);
        for (b, c) in self.terms() {
            out.add_term(b, s.clone() * c.clone());
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let grade = self.grade + other.grade;
        let mut out = Self::zero(self.params, grade, self.kind);
        if grade > self.params.dim() {
            return Ok(out);
        }
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                if let Some(sign) = wedge_sign(a, b) {
                    let prod = ca.clone() * cb.clone();
                    out.add_term(a | b, if sign > 0 { prod } else { -prod });
                }
            }
        }
        Ok(out)
    }

    /// Hodge star `*e_I = (-1)^sigma(I) e_{I*}`, extended to grades 0 and `2n + 1`.
    pub fn hodge_star(&self) -> Self {
        let top: Blade = (1 << self.params.dim()) - 1;
        let mut out = Self::zero(self.params, self.params.dim() - self.grade, self.kind);
        for (b, c) in self.terms() {
            let s = complement_sign(b, top);
            out.add_term(top & !b, if s > 0 { c.clone() } else { -c.clone() });
        }
        out
    }

    /// The vector `w*` with `<w*, V> = <w | V>`: `dw_I -> W_I`.
    pub fn dual_star(&self) -> Self {
        let mut out = self.clone();
        out.kind = match self.kind {
            Kind::Vector => Kind::Covector,
            Kind::Covector => Kind::Vector,
        };
        out
    }

    /// True iff no blade involves the vertical direction.
    pub fn is_horizontal(&self) -> bool {
        let vertical: Blade = 1 << self.params.vertical();
        self.coeffs.keys().all(|b| b & vertical == 0)
    }

    /// Frame `l2` norm of the coefficients.
    pub fn norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.to_f64().powi(2)).sum::<f64>().sqrt()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> Multivector<f64> {
        Multivector {
            params: self.params,
            grade: self.grade,
            kind: self.kind,
            coeffs: self.coeffs.iter().map(|(b, c)| (*b, c.to_f64())).filter(|(_, c)| *c != 0.0).collect(),
        }
    }
}

impl Multivector<Q> {
    pub fn from_f64(m: &Multivector<f64>) -> Result<Self> {
        let mut out = Self::zero(m.params, m.grade, m.kind);
        for (b, c) in m.terms() {
            out.add_term(b, crate::scalar::q_from_f64(*c)?);
        }
        Ok(out)
    }
}

/// The duality pairing `<w | v>` with `<dw_I | W_J> = delta_IJ` (determinant convention).
pub fn pair<S: Scalar>(w: &Covector<S>, v: &Multivector<S>) -> Result<S> {
    w.params.check(v.params)?;
    if w.kind != Kind::Covector || v.kind != Kind::Vector {
        return Err(Error::KindMismatch);
    }
    if w.grade != v.grade {
        return Err(Error::GradeMismatch { left: w.grade, right: v.grade });
    }
    let mut acc = S::zero();
    for (b, c) in w.terms() {
        if let Some(d) = v.coeffs.get(&b) {
            acc = acc + c.clone() * d.clone();
        }
    }
    Ok(acc)
}

/// The simple vector `v_1 ^ ... ^ v_k` from frame-coefficient columns.
pub fn simple_vector<S: Scalar>(params: HeisParams, columns: &[Vec<S>]) -> Result<Multivector<S>> {
    let mut acc = Multivector::scalar(params, S::one(), Kind::Vector);
    for col in columns {
        acc = acc.wedge(&Multivector::from_components(params, col, Kind::Vector)?)?;
    }
    Ok(acc)
}

/// A unit simple k-vector given by k orthonormal frame-coefficient columns.
#[derive(Debug, Clone)]
pub struct SimpleVectorSample {
    pub columns: Vec<Vec<f64>>,
}

impl SimpleVectorSample {
    /// Orthonormalizes the columns by Gram–Schmidt; `None` if they are (numerically) dependent.
    pub fn orthonormalize(mut columns: Vec<Vec<f64>>) -> Option<Self> {
        for i in 0..columns.len() {
            for j in 0..i {
                let d: f64 = columns[i].iter().zip(&columns[j]).map(|(a, b)| a * b).sum();
                let cj = columns[j].clone();
                for (a, b) in columns[i].iter_mut().zip(&cj) {
                    *a -= d * b;
                }
            }
            let norm = columns[i].iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm < 1e-9 {
                return None;
            }
            for a in columns[i].iter_mut() {
                *a /= norm;
            }
        }
        Some(SimpleVectorSample { columns })
    }

    pub fn random<R: Rng>(rng: &mut R, dim: usize, k: usize) -> Self {
        loop {
            let cols = (0..k).map(|_| (0..dim).map(|_| rng.sample(StandardNormal)).collect()).collect();
            if let Some(s) = Self::orthonormalize(cols) {
                return s;
            }
        }
    }

    pub fn to_multivector(&self, params: HeisParams) -> Result<Multivector<f64>> {
        simple_vector(params, &self.columns)
    }
}

/// Monte-Carlo lower estimate of the comass `sup <w | v>` over unit simple vectors.
///
/// Always includes every coordinate blade, then `samples` random Grassmannian draws, each
/// refined by a short randomized hill climb.
pub fn comass_with_rng<S: Scalar, R: Rng>(w: &Covector<S>, samples: usize, rng: &mut R) -> Result<f64> {
    if samples == 0 {
        return Err(Error::Parameter("comass needs at least one sample".into()));
    }
    if w.kind != Kind::Covector {
        return Err(Error::KindMismatch);
    }
    let wf = w.to_f64();
    let mut best = wf.max_abs_coeff();
    let k = w.grade;
    let dim = w.params.dim();
    if wf.is_zero() || k == 0 || k == dim {
        return Ok(best);
    }
    let value = |s: &SimpleVectorSample| -> f64 {
        let v = s.to_multivector(w.params).expect("matching params");
        pair(&wf, &v).expect("matching grades").abs()
    };
    for _ in 0..samples {
        let mut current = SimpleVectorSample::random(rng, dim, k);
        let mut current_val = value(&current);
        let mut step = 0.5;
        while step > 1e-6 {
            let mut improved = false;
            for _ in 0..8 {
                let cols = current
                    .columns
                    .iter()
                    .map(|c| c.iter().map(|a| a + step * rng.sample::<f64, _>(StandardNormal)).collect())
                    .collect();
                if let Some(candidate) = SimpleVectorSample::orthonormalize(cols) {
                    let val = value(&candidate);
                    if val > current_val {
                        current = candidate;
                        current_val = val;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best = best.max(current_val);
    }
    Ok(best)
}

/// [`comass_with_rng`] with a fixed internal seed, so repeated calls agree.
pub fn comass<S: Scalar>(w: &Covector<S>, samples: usize) -> Result<f64> {
    comass_with_rng(w, samples, &mut ChaCha8Rng::seed_from_u64(0x5eed_c0a5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q_int, Q};

    fn p(n: usize) -> HeisParams {
        HeisParams::new(n).unwrap()
    }

    fn co(n: usize, idx: &[usize]) -> Covector<Q> {
        Multivector::from_indices(p(n), idx, q_int(1), Kind::Covector).unwrap()
    }

    fn vec_(n: usize, idx: &[usize]) -> Multivector<Q> {
        Multivector::from_indices(p(n), idx, q_int(1), Kind::Vector).unwrap()
    }

    #[test]
    fn wedge_examples() {
        assert!(co(1, &[0]).wedge(&co(1, &[0])).unwrap().is_zero());
        let top = co(1, &[0]).wedge(&co(1, &[1])).unwrap().wedge(&co(1, &[2])).unwrap();
        assert_eq!(top.coeff(0b111), q_int(1));
        let shuffled = co(1, &[1]).wedge(&co(1, &[2])).unwrap().wedge(&co(1, &[0])).unwrap();
        assert_eq!(shuffled, top);
        assert!(matches!(co(1, &[0]).wedge(&vec_(1, &[1])), Err(Error::KindMismatch)));
    }

    #[test]
    fn pairing_examples() {
        // dx1 ^ dy1 against X1 ^ Y1 and Y1 ^ X1 at n = 2
        assert_eq!(pair(&co(2, &[0, 2]), &vec_(2, &[0, 2])).unwrap(), q_int(1));
        assert_eq!(pair(&co(2, &[0, 2]), &vec_(2, &[2, 0])).unwrap(), q_int(-1));
        // theta ^ dy against Y ^ T
        assert_eq!(pair(&co(1, &[2, 1]), &vec_(1, &[1, 2])).unwrap(), q_int(-1));
        assert!(matches!(pair(&co(1, &[0]), &vec_(1, &[0, 1])), Err(Error::GradeMismatch { .. })));
    }

    #[test]
    fn hodge_examples() {
        assert_eq!(vec_(1, &[0]).hodge_star(), vec_(1, &[1, 2]));
        assert_eq!(vec_(1, &[1]).hodge_star(), vec_(1, &[0, 2]).neg());
        let one = Multivector::scalar(p(1), q_int(1), Kind::Vector);
        assert_eq!(one.hodge_star(), vec_(1, &[0, 1, 2]));
    }

    #[test]
    fn hodge_is_an_involution_on_every_blade() {
        for n in 1..=2 {
            let dim = p(n).dim();
            for b in 0..(1u32 << dim) {
                let v = Multivector::from_indices(p(n), &blade_indices(b), q_int(1), Kind::Vector).unwrap();
                assert_eq!(v.hodge_star().hodge_star(), v, "n = {n}, blade {b:b}");
            }
        }
    }

    #[test]
    fn wedge_is_associative_and_graded_commutative_on_blades() {
        for n in 1..=2 {
            let dim = p(n).dim();
            let all: Vec<Covector<Q>> =
                (0..(1u32 << dim)).map(|b| co(n, &blade_indices(b))).collect();
            for a in &all {
                for b in &all {
                    let ab = a.wedge(b).unwrap();
                    let ba = b.wedge(a).unwrap();
                    let sign = if (a.grade() * b.grade()) % 2 == 0 { q_int(1) } else { q_int(-1) };
                    assert_eq!(ab, ba.scale(&sign));
                    for c in all.iter().step_by(3) {
                        assert_eq!(ab.wedge(c).unwrap(), a.wedge(&b.wedge(c).unwrap()).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn dual_star_and_horizontality() {
        let w = co(1, &[0, 2]).scale(&q_int(2)).sub(&co(1, &[1, 2])).unwrap();
        let expected = vec_(1, &[0, 2]).scale(&q_int(2)).sub(&vec_(1, &[1, 2])).unwrap();
        assert_eq!(w.dual_star(), expected);
        assert!(vec_(2, &[0, 3]).is_horizontal());
        assert!(!vec_(2, &[0, 4]).is_horizontal());
        assert!(Multivector::<Q>::zero(p(2), 2, Kind::Vector).is_horizontal());
    }

    #[test]
    fn comass_examples() {
        assert_eq!(comass(&co(1, &[0]), 10).unwrap(), 1.0);
        assert_eq!(comass(&Multivector::<Q>::zero(p(1), 2, Kind::Covector), 10).unwrap(), 0.0);
        let w = co(1, &[0, 1]).add(&co(1, &[2, 0])).unwrap();
        let c = comass(&w, 50).unwrap();
        assert!(c > 1.0 - 1e-9 && c <= 2f64.sqrt() + 1e-9, "{c}");
    }

    #[test]
    fn comass_matches_grid_search_in_dimension_three() {
        // brute-force oracle: maximize over unit normals, since 2-vectors in R^3 are all simple
        let w = co(1, &[0, 1]).scale(&q_int(3)).add(&co(1, &[1, 2]).scale(&q_int(-4))).unwrap();
        let mut best: f64 = 0.0;
        let steps = 400;
        for i in 0..=steps {
            for j in 0..=steps {
                let th = std::f64::consts::PI * i as f64 / steps as f64;
                let ph = 2.0 * std::f64::consts::PI * j as f64 / steps as f64;
                let nrm = [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()];
                // the unit 2-vector with normal nrm has coefficients (*nrm)
                let v = 3.0 * nrm[2] - 4.0 * nrm[0];
                best = best.max(v.abs());
            }
        }
        let est = comass(&w, 30).unwrap();
        assert!((est - best).abs() < 1e-3, "{est} vs {best}");
        assert!((est - 5.0).abs() < 1e-6);
    }

    #[test]
    fn random_samples_are_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let s = SimpleVectorSample::random(&mut rng, 5, 3);
            for i in 0..3 {
                for j in 0..3 {
                    let d: f64 = s.columns[i].iter().zip(&s.columns[j]).map(|(a, b)| a * b).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((d - want).abs() < 1e-10);
                }
            }
            assert!((s.to_multivector(p(2)).unwrap().norm() - 1.0).abs() < 1e-10);
        }
    }
}

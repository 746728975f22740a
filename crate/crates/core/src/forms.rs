//! Differential forms with polynomial coefficients in the coframe
//! `dx_1..dx_n, dy_1..dy_n, theta`, the left-invariant derivations, and `d`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::exterior::{blade_grade, blade_indices, wedge_sign, Blade, Covector, Kind, Multivector};
use crate::heis::{HeisParams, Point};
use crate::poly::Poly;
use crate::scalar::{q_half, Scalar, Q};

/// Names of the coordinate variables `x1..xn, y1..yn, t`.
pub fn var_names(params: HeisParams) -> Vec<String> {
    let n = params.n();
    (1..=n).map(|j| format!("x{j}")).chain((1..=n).map(|j| format!("y{j}"))).chain(["t".to_string()]).collect()
}

/// Names of the coframe atoms `dx1..dxn, dy1..dyn, theta`.
pub fn atom_names(params: HeisParams) -> Vec<String> {
    let n = params.n();
    (1..=n).map(|j| format!("dx{j}")).chain((1..=n).map(|j| format!("dy{j}"))).chain(["theta".to_string()]).collect()
}

/// Applies the frame field `W_{j+1}` (zero-based `j`) to `f`:
/// `X_j = d/dx_j - y_j/2 d/dt`, `Y_j = d/dy_j + x_j/2 d/dt`, `T = d/dt`.
pub fn derive_w(params: HeisParams, j: usize, f: &Poly) -> Poly {
    let n = params.n();
    let t = 2 * n;
    assert!(j <= t, "frame index out of range");
    let nv = params.dim();
    if j == t {
        return f.deriv(t);
    }
    let ft = f.deriv(t);
    if j < n {
        f.deriv(j).sub(&Poly::var(nv, n + j).mul(&ft).scale(&q_half()))
    } else {
        f.deriv(j).add(&Poly::var(nv, j - n).mul(&ft).scale(&q_half()))
    }
}

/// A homogeneous differential form of grade `k` with polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyForm {
    params: HeisParams,
    grade: usize,
    coeffs: BTreeMap<Blade, Poly>,
}

impl PolyForm {
    pub fn zero(params: HeisParams, grade: usize) -> Self {
        PolyForm { params, grade, coeffs: BTreeMap::new() }
    }

    pub fn function(params: HeisParams, f: Poly) -> Self {
        let mut out = Self::zero(params, 0);
        out.add_term(0, f);
        out
    }

    pub fn constant(params: HeisParams, c: Q) -> Self {
        Self::function(params, Poly::constant(params.dim(), c))
    }

    /// The coframe atom with zero-based index `i` (`theta` is `2n`).
    pub fn atom(params: HeisParams, i: usize) -> Self {
        let mut out = Self::zero(params, 1);
        out.add_term(1 << i, Poly::one(params.dim()));
        out
    }

    pub fn theta(params: HeisParams) -> Self {
        Self::atom(params, params.vertical())
    }

    /// `d theta = -sum_j dx_j ^ dy_j`.
    pub fn d_theta(params: HeisParams) -> Self {
        let n = params.n();
        let mut out = Self::zero(params, 2);
        for j in 0..n {
            out.add_term((1 << j) | (1 << (n + j)), Poly::constant(params.dim(), -Q::one()));
        }
        out
    }

    /// `f * e_{i_1} ^ ... ^ e_{i_k}` with zero-based indices in any order.
    pub fn monomial_form(params: HeisParams, indices: &[usize], f: Poly) -> Self {
        let mut out = Self::function(params, f);
        for &i in indices {
            out = out.wedge(&Self::atom(params, i)).expect("same params");
        }
        if out.grade != indices.len() {
            out = Self::zero(params, indices.len());
        }
        out
    }

    pub fn add_term(&mut self, blade: Blade, f: Poly) {
        debug_assert_eq!(blade_grade(blade), self.grade);
        if f.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&blade) {
            Some(g) => {
                *g = g.add(&f);
                if g.is_zero() {
                    self.coeffs.remove(&blade);
                }
            }
            None => {
                self.coeffs.insert(blade, f);
            }
        }
    }

    pub fn params(&self) -> HeisParams {
        self.params
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, blade: Blade) -> Poly {
        self.coeffs.get(&blade).cloned().unwrap_or_else(|| Poly::zero(self.params.dim()))
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &Poly)> {
        self.coeffs.iter().map(|(b, p)| (*b, p))
    }

    /// Highest coefficient degree.
    pub fn degree(&self) -> u32 {
        self.coeffs.values().map(Poly::degree).max().unwrap_or(0)
    }

    fn check_params(&self, other: &Self) -> Result<()> {
        self.params.check(other.params)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_params(other)?;
        if self.grade != other.grade {
            return Err(Error::GradeMismatch { left: self.grade, right: other.grade });
        }
        let mut out = self.clone();
        for (b, p) in other.terms() {
            out.add_term(b, p.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut out = Self::zero(self.params, self.grade);
        for (b, p) in self.terms() {
            out.add_term(b, p.scale(s));
        }
        out
    }

    /// Pointwise product with the function `g`.
    pub fn mul_fn(&self, g: &Poly) -> Self {
        let mut out = Self::zero(self.params, self.grade);
        for (b, p) in self.terms() {
            out.add_term(b, p.mul(g));
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_params(other)?;
        let grade = self.grade + other.grade;
        let mut out = Self::zero(self.params, grade);
        if grade > self.params.dim() {
            return Ok(out);
        }
        for (a, pa) in self.terms() {
            for (b, pb) in other.terms() {
                if let Some(sign) = wedge_sign(a, b) {
                    let prod = pa.mul(pb);
                    out.add_term(a | b, if sign > 0 { prod } else { prod.neg() });
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative via the Cartan rule in the coframe.
    pub fn exterior_d(&self) -> Self {
        let params = self.params;
        let vertical: Blade = 1 << params.vertical();
        let mut out = Self::zero(params, self.grade + 1);
        if self.grade + 1 > params.dim() {
            return out;
        }
        let d_theta = Self::d_theta(params);
        for (b, f) in self.terms() {
            for j in 0..params.dim() {
                if let Some(sign) = wedge_sign(1 << j, b) {
                    let wf = derive_w(params, j, f);
                    out.add_term(b | (1 << j), if sign > 0 { wf } else { wf.neg() });
                }
            }
            if b & vertical != 0 {
                // d(e_I' ^ theta) = (-1)^(k-1) e_I' ^ d theta
                let rest = Self::monomial_form(params, &blade_indices(b & !vertical), f.clone());
                let piece = rest.wedge(&d_theta).expect("same params");
                let piece = if (self.grade - 1) % 2 == 0 { piece } else { piece.neg() };
                out = out.add(&piece).expect("same grade");
            }
        }
        out
    }

    /// Drops every blade containing `theta`.
    pub fn horizontal_part(&self) -> Self {
        let vertical: Blade = 1 << self.params.vertical();
        let mut out = Self::zero(self.params, self.grade);
        for (b, p) in self.terms() {
            if b & vertical == 0 {
                out.add_term(b, p.clone());
            }
        }
        out
    }

    /// The `theta`-containing blades.
    pub fn vertical_part(&self) -> Self {
        self.sub(&self.horizontal_part()).expect("same grade")
    }

    pub fn is_horizontal(&self) -> bool {
        let vertical: Blade = 1 << self.params.vertical();
        self.coeffs.keys().all(|b| b & vertical == 0)
    }

    /// Substitutes the point into every coefficient.
    pub fn evaluate_at<S: Scalar>(&self, p: &Point<S>) -> Result<Covector<S>> {
        self.params.check(p.params())?;
        let coords = p.coords();
        let mut out = Multivector::zero(self.params, self.grade, Kind::Covector);
        for (b, f) in self.terms() {
            out.add_term(b, f.eval(&coords));
        }
        Ok(out)
    }

    /// The constant form with the coefficients of a rational covector.
    pub fn from_covector(w: &Covector<Q>) -> Self {
        let mut out = Self::zero(w.params(), w.grade());
        for (b, c) in w.terms() {
            out.add_term(b, Poly::constant(w.params().dim(), c.clone()));
        }
        out
    }
}

impl fmt::Display for PolyForm {
    /// `(coefficient)*dx1^dy1 + ...`; the zero form keeps its grade as `0*atoms`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = var_names(self.params);
        let atoms = atom_names(self.params);
        let wedge_of = |b: Blade| blade_indices(b).iter().map(|i| atoms[*i].clone()).collect::<Vec<_>>().join("^");
        if self.is_zero() {
            if self.grade == 0 {
                return f.write_str("0");
            }
            let b: Blade = (1 << self.grade) - 1;
            return write!(f, "0*{}", wedge_of(b));
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(b, p)| {
                let c = format!("({})", p.format_with(&vars));
                if b == 0 {
                    c
                } else {
                    format!("{c}*{}", wedge_of(b))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Horizontal gradient `sum_j (X_j f) X_j + (Y_j f) Y_j` as its `2n` coefficients.
pub fn horizontal_gradient(params: HeisParams, f: &Poly) -> Vec<Poly> {
    (0..2 * params.n()).map(|j| derive_w(params, j, f)).collect()
}

/// `sum_j (W_j f) dw_j`, the expansion of `df` in the coframe.
pub fn df_expansion(params: HeisParams, f: &Poly) -> PolyForm {
    let mut out = PolyForm::zero(params, 1);
    for j in 0..params.dim() {
        out.add_term(1 << j, derive_w(params, j, f));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::FormSampler;
    use crate::scalar::{q_frac, q_int};

    fn p1() -> HeisParams {
        HeisParams::new(1).unwrap()
    }

    fn var(params: HeisParams, i: usize) -> Poly {
        Poly::var(params.dim(), i)
    }

    #[test]
    fn derivation_examples() {
        let p = p1();
        let t = var(p, 2);
        assert_eq!(derive_w(p, 0, &t), var(p, 1).scale(&q_frac(-1, 2)));
        assert_eq!(derive_w(p, 1, &t), var(p, 0).scale(&q_frac(1, 2)));
        assert_eq!(derive_w(p, 2, &var(p, 0).mul(&t)), var(p, 0));
    }

    #[test]
    fn d_of_t_and_theta() {
        let p = p1();
        let dt = PolyForm::function(p, var(p, 2)).exterior_d();
        let mut want = PolyForm::zero(p, 1);
        want.add_term(0b001, var(p, 1).scale(&q_frac(-1, 2)));
        want.add_term(0b010, var(p, 0).scale(&q_frac(1, 2)));
        want.add_term(0b100, Poly::one(3));
        assert_eq!(dt, want);
        // d theta computed from theta = dt - 1/2 (x dy - y dx) matches the structure constant
        let theta = PolyForm::theta(p);
        assert_eq!(theta.exterior_d(), PolyForm::d_theta(p));
        let p2 = HeisParams::new(2).unwrap();
        assert_eq!(PolyForm::theta(p2).exterior_d(), PolyForm::d_theta(p2));
    }

    #[test]
    fn theta_matches_its_coordinate_definition() {
        // dt - 1/2 (x dy - y dx) computed from d of coordinate functions
        for n in 1..=2 {
            let p = HeisParams::new(n).unwrap();
            let mut theta = PolyForm::function(p, var(p, 2 * n)).exterior_d();
            for j in 0..n {
                let x = PolyForm::function(p, var(p, j));
                let y = PolyForm::function(p, var(p, n + j));
                let xdy = y.exterior_d().mul_fn(&var(p, j));
                let ydx = x.exterior_d().mul_fn(&var(p, n + j));
                theta = theta.sub(&xdy.sub(&ydx).unwrap().scale(&q_half())).unwrap();
            }
            assert_eq!(theta, PolyForm::theta(p));
        }
    }

    #[test]
    fn wedge_and_evaluation_examples() {
        let p = p1();
        let a = PolyForm::atom(p, 0).mul_fn(&var(p, 0));
        let b = PolyForm::atom(p, 1);
        assert_eq!(a.wedge(&b).unwrap(), PolyForm::monomial_form(p, &[0, 1], var(p, 0)));
        let at = Point::new(vec![q_int(2)], vec![q_int(0)], q_int(0)).unwrap();
        let w = a.evaluate_at(&at).unwrap();
        assert_eq!(w.coeff(0b001), q_int(2));
        assert_eq!(PolyForm::theta(p).evaluate_at(&at).unwrap().coeff(0b100), q_int(1));
        let t = var(p, 2);
        let f = PolyForm::atom(p, 1).mul_fn(&t.mul(&t).sub(&Poly::one(3)));
        let on_root = Point::new(vec![q_int(0)], vec![q_int(0)], q_int(1)).unwrap();
        assert!(f.evaluate_at(&on_root).unwrap().is_zero());
    }

    #[test]
    fn gradient_examples() {
        let p = p1();
        assert_eq!(horizontal_gradient(p, &var(p, 0)), vec![Poly::one(3), Poly::zero(3)]);
        assert_eq!(
            horizontal_gradient(p, &var(p, 2)),
            vec![var(p, 1).scale(&q_frac(-1, 2)), var(p, 0).scale(&q_frac(1, 2))]
        );
        assert!(horizontal_gradient(p, &Poly::constant(3, q_int(4))).iter().all(Poly::is_zero));
    }

    #[test]
    fn display_round_shapes() {
        let p = p1();
        assert_eq!(PolyForm::zero(p, 2).to_string(), "0*dx1^dy1");
        assert_eq!(PolyForm::zero(p, 0).to_string(), "0");
        assert_eq!(PolyForm::d_theta(p).to_string(), "(-1)*dx1^dy1");
    }

    #[test]
    fn d_squared_vanishes_on_random_forms() {
        for n in 1..=2 {
            let p = HeisParams::new(n).unwrap();
            let mut sampler = FormSampler::new(p, 11 + n as u64);
            for k in 0..=2 * n {
                for _ in 0..100 {
                    let w = sampler.form(k);
                    assert!(w.exterior_d().exterior_d().is_zero(), "n = {n}, k = {k}");
                }
            }
        }
    }

    #[test]
    fn df_matches_frame_expansion_and_commutators() {
        for n in 1..=2 {
            let p = HeisParams::new(n).unwrap();
            let mut sampler = FormSampler::new(p, 5);
            for _ in 0..50 {
                let f = sampler.poly();
                assert_eq!(PolyForm::function(p, f.clone()).exterior_d(), df_expansion(p, &f));
                for i in 0..p.dim() {
                    for j in 0..p.dim() {
                        let comm = derive_w(p, i, &derive_w(p, j, &f)).sub(&derive_w(p, j, &derive_w(p, i, &f)));
                        let want = if j == i + n && i < n {
                            derive_w(p, 2 * n, &f)
                        } else if i == j + n && j < n {
                            derive_w(p, 2 * n, &f).neg()
                        } else {
                            Poly::zero(p.dim())
                        };
                        assert_eq!(comm, want, "[W{}, W{}]", i + 1, j + 1);
                    }
                }
            }
        }
    }

    #[test]
    fn derivations_are_homogeneous() {
        for n in 1..=2 {
            let p = HeisParams::new(n).unwrap();
            let mut sampler = FormSampler::new(p, 9);
            for r in [q_int(2), q_frac(3, 7), q_frac(-5, 2)] {
                let mut scales = vec![r.clone(); 2 * n];
                scales.push(&r * &r);
                for _ in 0..20 {
                    let f = sampler.poly();
                    let fr = f.rescale_vars(&scales);
                    for j in 0..p.dim() {
                        let order = if j == 2 * n { &r * &r } else { r.clone() };
                        let lhs = derive_w(p, j, &fr);
                        let rhs = derive_w(p, j, &f).rescale_vars(&scales).scale(&order);
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn leibniz_rule_holds() {
        for n in 1..=2 {
            let p = HeisParams::new(n).unwrap();
            let mut sampler = FormSampler::new(p, 21);
            for _ in 0..60 {
                let ka = sampler.grade_up_to(p.dim());
                let kb = sampler.grade_up_to(p.dim() - ka);
                let a = sampler.form(ka);
                let b = sampler.form(kb);
                let lhs = a.wedge(&b).unwrap().exterior_d();
                let sign = if ka % 2 == 0 { q_int(1) } else { q_int(-1) };
                let rhs = a.exterior_d().wedge(&b).unwrap().add(&a.wedge(&b.exterior_d()).unwrap().scale(&sign)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

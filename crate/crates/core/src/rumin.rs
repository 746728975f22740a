//! The Rumin complex on the Heisenberg group: the ideals `I^k`, the spaces `J^k`,
//! primitive representatives of `Omega^k / I^k`, the Lefschetz map `L`, the lift
//! `script_l`, the second-order operator `D` and the unified differential `d_c`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exterior::{blades_of_grade, wedge_sign, Blade};
use crate::forms::PolyForm;
use crate::heis::HeisParams;
use crate::linalg::Matrix;
use crate::poly::{Monomial, Poly};
use crate::random::FormSampler;
use crate::scalar::{q_int, Q};

/// Exact data for `L_a : beta -> d theta ^ beta` on horizontal `a`-forms.
#[derive(Debug, Clone)]
pub struct LefschetzSolver {
    /// Horizontal blades of grade `a` (columns).
    pub domain: Vec<Blade>,
    /// Horizontal blades of grade `a + 2` (rows).
    pub codomain: Vec<Blade>,
    pub matrix: Matrix,
    /// Orthogonal projector onto the image.
    pub projector: Matrix,
    /// A right inverse on the image: `matrix * section * w = w` for `w` in the image.
    pub section: Matrix,
    /// Basis of the kernel.
    pub kernel: Vec<Vec<Q>>,
}

impl LefschetzSolver {
    fn new(params: HeisParams, a: usize) -> Self {
        let h = 2 * params.n();
        let domain = blades_of_grade(h, a);
        let codomain = if a + 2 <= h { blades_of_grade(h, a + 2) } else { Vec::new() };
        let index: BTreeMap<Blade, usize> = codomain.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let mut matrix = Matrix::zeros(codomain.len(), domain.len());
        for (col, &b) in domain.iter().enumerate() {
            for j in 0..params.n() {
                let pair: Blade = (1 << j) | (1 << (params.n() + j));
                if let Some(sign) = wedge_sign(pair, b) {
                    // d theta carries coefficient -1 on each dx_j ^ dy_j
                    let row = index[&(pair | b)];
                    let v = matrix.get(row, col) - q_int(sign as i64);
                    matrix.set(row, col, v);
                }
            }
        }
        let projector = matrix.column_space_projector();
        let (_, pivots) = matrix.rref();
        let mut section = Matrix::zeros(domain.len(), codomain.len());
        if !pivots.is_empty() {
            let basis: Vec<Vec<Q>> = pivots.iter().map(|&c| matrix.column(c)).collect();
            let b = Matrix::from_columns(codomain.len(), &basis);
            let bt = b.transpose();
            let left = bt.mul(&b).inverse().expect("independent columns").mul(&bt);
            for (i, &c) in pivots.iter().enumerate() {
                for r in 0..codomain.len() {
                    section.set(c, r, left.get(i, r).clone());
                }
            }
        }
        let kernel = matrix.nullspace();
        LefschetzSolver { domain, codomain, matrix, projector, section, kernel }
    }
}

/// Regime of a Rumin class: a quotient class below the middle, a `J^k` form above.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Low,
    High,
}

/// An element of the Rumin complex at degree `k`, held by a canonical payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuminClass {
    degree: usize,
    regime: Regime,
    payload: PolyForm,
}

impl RuminClass {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// The primitive horizontal representative (Low) or the `J^k` form (High).
    pub fn payload(&self) -> &PolyForm {
        &self.payload
    }

    pub fn is_zero(&self) -> bool {
        self.payload.is_zero()
    }
}

/// Splits a form into per-monomial coefficient vectors over the given blades.
fn split(form: &PolyForm, blades: &[Blade]) -> BTreeMap<Monomial, Vec<Q>> {
    let mut out: BTreeMap<Monomial, Vec<Q>> = BTreeMap::new();
    for (i, b) in blades.iter().enumerate() {
        for (m, c) in form.coeff(*b).terms() {
            out.entry(m.clone()).or_insert_with(|| vec![Q::zero(); blades.len()])[i] = c.clone();
        }
    }
    out
}

fn assemble(params: HeisParams, grade: usize, blades: &[Blade], parts: &BTreeMap<Monomial, Vec<Q>>) -> PolyForm {
    let mut out = PolyForm::zero(params, grade);
    for (m, v) in parts {
        for (b, c) in blades.iter().zip(v) {
            if !c.is_zero() {
                out.add_term(*b, Poly::from_terms(params.dim(), [(m.clone(), c.clone())]));
            }
        }
    }
    out
}

fn apply(params: HeisParams, m: &Matrix, form: &PolyForm, from: &[Blade], to: &[Blade], grade: usize) -> PolyForm {
    let parts: BTreeMap<Monomial, Vec<Q>> = split(form, from).into_iter().map(|(k, v)| (k, m.mul_vec(&v))).collect();
    assemble(params, grade, to, &parts)
}

/// Precomputed exact linear algebra of the complex for one value of `n`.
///
/// Immutable after construction and shareable between threads.
#[derive(Debug, Clone)]
pub struct Rumin {
    params: HeisParams,
    /// `solvers[a]` handles `L` on horizontal `a`-forms.
    solvers: Vec<LefschetzSolver>,
    l_inverse: Matrix,
}

impl Rumin {
    pub fn new(params: HeisParams) -> Self {
        let solvers: Vec<LefschetzSolver> = (0..=2 * params.n()).map(|a| LefschetzSolver::new(params, a)).collect();
        let mid = &solvers[params.n() - 1];
        let l_inverse = mid.matrix.inverse().expect("L is invertible from grade n-1 to grade n+1");
        Rumin { params, solvers, l_inverse }
    }

    pub fn params(&self) -> HeisParams {
        self.params
    }

    pub fn solver(&self, a: usize) -> &LefschetzSolver {
        &self.solvers[a]
    }

    fn check(&self, w: &PolyForm) -> Result<()> {
        self.params.check(w.params())
    }

    fn sign_n(&self) -> Q {
        if self.params.n() % 2 == 0 {
            q_int(1)
        } else {
            q_int(-1)
        }
    }

    /// `d theta ^ beta` for horizontal `beta`.
    pub fn l_apply(&self, beta: &PolyForm) -> Result<PolyForm> {
        self.check(beta)?;
        if !beta.is_horizontal() {
            return Err(Error::Parameter("L is applied to horizontal forms only".into()));
        }
        PolyForm::d_theta(self.params).wedge(beta)
    }

    /// The unique horizontal `(n-1)`-form `u` with `d theta ^ u = w`.
    pub fn l_inv(&self, w: &PolyForm) -> Result<PolyForm> {
        self.check(w)?;
        let n = self.params.n();
        if w.grade() != n + 1 || !w.is_horizontal() {
            return Err(Error::Parameter(format!(
                "L^-1 expects a horizontal form of grade {}, found grade {}",
                n + 1,
                w.grade()
            )));
        }
        let s = &self.solvers[n - 1];
        Ok(apply(self.params, &self.l_inverse, w, &s.codomain, &s.domain, n - 1))
    }

    /// Witness `(alpha, beta)` with `w = alpha ^ theta + beta ^ d theta`, if `w` lies in `I^k`.
    pub fn in_i_witness(&self, w: &PolyForm) -> Result<Option<(PolyForm, PolyForm)>> {
        self.check(w)?;
        let k = w.grade();
        let params = self.params;
        let vertical: Blade = 1 << params.vertical();
        let mut alpha = PolyForm::zero(params, k.saturating_sub(1));
        for (b, f) in w.terms() {
            if b & vertical != 0 {
                // blades are sorted, so e_I = e_{I \ theta} ^ theta
                alpha.add_term(b & !vertical, f.clone());
            }
        }
        let h = w.horizontal_part();
        if k < 2 {
            return Ok(if h.is_zero() { Some((alpha, PolyForm::zero(params, 0))) } else { None });
        }
        if k - 2 > 2 * params.n() {
            return Ok(Some((alpha, PolyForm::zero(params, k - 2))));
        }
        let s = &self.solvers[k - 2];
        let mut parts = BTreeMap::new();
        for (m, v) in split(&h, &s.codomain) {
            let u = s.section.mul_vec(&v);
            if s.matrix.mul_vec(&u) != v {
                return Ok(None);
            }
            parts.insert(m, u);
        }
        Ok(Some((alpha, assemble(params, k - 2, &s.domain, &parts))))
    }

    pub fn is_in_i(&self, w: &PolyForm) -> Result<bool> {
        Ok(self.in_i_witness(w)?.is_some())
    }

    /// `w ^ theta = 0` and `w ^ d theta = 0` identically.
    pub fn is_in_j(&self, w: &PolyForm) -> Result<bool> {
        self.check(w)?;
        Ok(w.wedge(&PolyForm::theta(self.params))?.is_zero() && w.wedge(&PolyForm::d_theta(self.params))?.is_zero())
    }

    /// Primitive horizontal representative of the class of `w` in `Omega^k / I^k`, `k <= n`.
    pub fn canonical_rep(&self, w: &PolyForm) -> Result<PolyForm> {
        self.check(w)?;
        let k = w.grade();
        if k > self.params.n() {
            return Err(Error::Parameter(format!(
                "quotient representatives exist for grades up to n = {}, found {k}",
                self.params.n()
            )));
        }
        let h = w.horizontal_part();
        if k < 2 {
            return Ok(h);
        }
        let s = &self.solvers[k - 2];
        let projected = apply(self.params, &s.projector, &h, &s.codomain, &s.codomain, k);
        h.sub(&projected)
    }

    /// `script_l(alpha) = L^-1((-1)^n (d alpha)_h)` for `alpha` of grade `n`, where `(.)_h`
    /// deletes the `theta`-containing blades; `d(alpha + script_l(alpha) ^ theta)` is then free of
    /// horizontal `(n+1)`-blades.
    pub fn script_l(&self, alpha: &PolyForm) -> Result<PolyForm> {
        self.check(alpha)?;
        if alpha.grade() != self.params.n() {
            return Err(Error::GradeMismatch { left: alpha.grade(), right: self.params.n() });
        }
        self.l_inv(&alpha.exterior_d().horizontal_part().scale(&self.sign_n()))
    }

    /// The second-order operator `D(alpha) = d(alpha + script_l(alpha) ^ theta)`.
    pub fn big_d(&self, alpha: &PolyForm) -> Result<PolyForm> {
        let lift = self.script_l(alpha)?.wedge(&PolyForm::theta(self.params))?;
        Ok(alpha.add(&lift)?.exterior_d())
    }

    /// The class of `w`: reduced modulo `I^k` below the middle, checked to lie in `J^k` above.
    pub fn class(&self, w: &PolyForm) -> Result<RuminClass> {
        self.check(w)?;
        let k = w.grade();
        if k <= self.params.n() {
            Ok(RuminClass { degree: k, regime: Regime::Low, payload: self.canonical_rep(w)? })
        } else if self.is_in_j(w)? {
            Ok(RuminClass { degree: k, regime: Regime::High, payload: w.clone() })
        } else {
            Err(Error::Parameter(format!("form of grade {k} is not in J^{k}")))
        }
    }

    fn certified_high(&self, w: PolyForm) -> RuminClass {
        assert!(
            self.is_in_j(&w).expect("same params"),
            "invariant violated: Rumin differential left J^{}",
            w.grade()
        );
        RuminClass { degree: w.grade(), regime: Regime::High, payload: w }
    }

    /// The Rumin differential.
    pub fn d_c(&self, c: &RuminClass) -> Result<RuminClass> {
        self.check(&c.payload)?;
        let n = self.params.n();
        let k = c.degree;
        if k < n {
            let w = c.payload.exterior_d();
            Ok(RuminClass { degree: k + 1, regime: Regime::Low, payload: self.canonical_rep(&w)? })
        } else if k == n {
            Ok(self.certified_high(self.big_d(&c.payload)?))
        } else {
            Ok(self.certified_high(c.payload.exterior_d()))
        }
    }

    /// `g c`, for a function `g`.
    pub fn mul_fn(&self, g: &Poly, c: &RuminClass) -> Result<RuminClass> {
        let w = c.payload.mul_fn(g);
        match c.regime {
            Regime::Low => self.class(&w),
            Regime::High => Ok(RuminClass { degree: c.degree, regime: Regime::High, payload: w }),
        }
    }

    /// `d_c(g c) - g d_c(c)` as a form in the codomain.
    pub fn leibniz_defect(&self, g: &Poly, c: &RuminClass) -> Result<PolyForm> {
        let lhs = self.d_c(&self.mul_fn(g, c)?)?;
        let rhs = self.d_c(c)?.payload.mul_fn(g);
        lhs.payload.sub(&rhs)
    }

    /// A random element of `I^k`: `alpha ^ theta + beta ^ d theta`.
    pub fn random_ideal_element(&self, sampler: &mut FormSampler, k: usize) -> PolyForm {
        let params = self.params;
        let mut out = PolyForm::zero(params, k);
        if k >= 1 {
            out = out.add(&sampler.form(k - 1).wedge(&PolyForm::theta(params)).unwrap()).unwrap();
        }
        if k >= 2 {
            out = out.add(&sampler.form(k - 2).wedge(&PolyForm::d_theta(params)).unwrap()).unwrap();
        }
        out
    }

    /// A random element of `J^k` for `k >= n + 1`: `theta ^ gamma` with `gamma` in `ker L`.
    pub fn random_j_element(&self, sampler: &mut FormSampler, k: usize) -> PolyForm {
        let params = self.params;
        assert!(k > params.n(), "J^k is sampled above the middle degree");
        let mut out = PolyForm::zero(params, k);
        if k > params.dim() {
            return out;
        }
        let s = &self.solvers[k - 1];
        while out.is_zero() {
            for v in &s.kernel {
                if sampler.rng().random_bool(0.7) {
                    let f = sampler.poly();
                    let mut gamma = PolyForm::zero(params, k - 1);
                    for (b, c) in s.domain.iter().zip(v) {
                        gamma.add_term(*b, f.scale(c));
                    }
                    out = out.add(&PolyForm::theta(params).wedge(&gamma).unwrap()).unwrap();
                }
            }
        }
        out
    }

    /// A random class of degree `k`.
    pub fn random_class(&self, sampler: &mut FormSampler, k: usize) -> RuminClass {
        if k <= self.params.n() {
            loop {
                let c = self.class(&sampler.form(k)).expect("valid grade");
                if !c.is_zero() || k == 0 {
                    return c;
                }
            }
        } else {
            self.class(&self.random_j_element(sampler, k)).expect("sampled inside J")
        }
    }
}

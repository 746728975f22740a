//! Weighted oriented affine simplicial chains as currents representable by integration:
//! pairing with forms and Rumin classes, the measure `mu_T`, exact clipping by affine regions,
//! weighted restriction and the combinatorial boundary.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exterior::{blades_of_grade, pair, simple_vector, Kind, Multivector};
use crate::forms::PolyForm;
use crate::heis::{frame_change, HeisParams, Point};
use crate::linalg::Matrix;
use crate::quadrature::QuadratureRule;
use crate::region::{AffineFn, Region};
use crate::rumin::{Regime, Rumin, RuminClass};
use crate::scalar::{q_int, Scalar, Q};

/// An oriented affine simplex with a rational multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    pub vertices: Vec<Point<Q>>,
    pub multiplicity: Q,
}

/// Frame orientation data at a point: `V(p)`, its norm and the unit `V / |V|`.
#[derive(Debug, Clone)]
pub struct OrientationField {
    pub vector: Multivector<f64>,
    pub norm: f64,
    pub unit: Multivector<f64>,
}

fn factorial(k: usize) -> Q {
    (1..=k).fold(Q::one(), |acc, i| acc * q_int(i as i64))
}

fn coords_of(p: &Point<Q>) -> Vec<Q> {
    p.coords()
}

impl Simplex {
    pub fn new(vertices: Vec<Point<Q>>, multiplicity: Q) -> Self {
        Simplex { vertices, multiplicity }
    }

    pub fn degree(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Coordinate edge vectors `v_i - v_0`.
    pub fn edges(&self) -> Vec<Vec<Q>> {
        let base = coords_of(&self.vertices[0]);
        self.vertices[1..]
            .iter()
            .map(|v| coords_of(v).iter().zip(&base).map(|(a, b)| a - b).collect())
            .collect()
    }

    /// `V(p)`: the wedge of the edge vectors expressed in the frame at `p`.
    pub fn frame_vector<S: Scalar>(&self, p: &Point<S>) -> Result<Multivector<S>> {
        let cols = self
            .edges()
            .iter()
            .map(|e| frame_change(p, &e.iter().map(S::from_q).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        simple_vector(p.params(), &cols)
    }

    pub fn orientation_at(&self, p: &Point<f64>) -> Result<OrientationField> {
        let vector = self.frame_vector(p)?;
        let norm = vector.norm();
        let unit = if norm > 0.0 { vector.scale(&(1.0 / norm)) } else { vector.clone() };
        Ok(OrientationField { vector, norm, unit })
    }

    /// Zero Euclidean `k`-volume.
    pub fn is_degenerate(&self) -> bool {
        let k = self.degree();
        if k == 0 {
            return false;
        }
        let dim = self.vertices[0].params().dim();
        Matrix::from_columns(dim, &self.edges()).rank() < k
    }

    pub fn point_at(&self, bary: &[Q]) -> Point<Q> {
        let params = self.vertices[0].params();
        let mut acc = vec![Q::zero(); params.dim()];
        for (v, l) in self.vertices.iter().zip(bary) {
            for (a, c) in acc.iter_mut().zip(coords_of(v)) {
                *a += l * c;
            }
        }
        Point::from_coords(params, &acc).expect("matching dimension")
    }

    pub fn barycenter(&self) -> Vec<Q> {
        let w = Q::one() / q_int(self.vertices.len() as i64);
        coords_of(&self.point_at(&vec![w; self.vertices.len()]))
    }

    /// Exact containment of `p` in the closed simplex.
    pub fn contains(&self, p: &Point<Q>) -> bool {
        let k = self.degree();
        let base = coords_of(&self.vertices[0]);
        let rhs: Vec<Q> = coords_of(p).iter().zip(&base).map(|(a, b)| a - b).collect();
        if k == 0 {
            return rhs.iter().all(Zero::is_zero);
        }
        let m = Matrix::from_columns(base.len(), &self.edges());
        match m.solve(&rhs) {
            Some(l) if m.mul_vec(&l) == rhs => {
                let sum = l.iter().fold(Q::zero(), |a, b| a + b);
                l.iter().all(|x| !x.is_negative()) && sum <= Q::one()
            }
            _ => false,
        }
    }

    /// Canonical vertex order (lexicographic in coordinates) with the permutation sign folded
    /// into the multiplicity.
    fn canonical(&self) -> (Vec<Vec<Q>>, Q) {
        let mut keyed: Vec<(Vec<Q>, usize)> =
            self.vertices.iter().enumerate().map(|(i, v)| (coords_of(v), i)).collect();
        keyed.sort();
        let perm: Vec<usize> = keyed.iter().map(|(_, i)| *i).collect();
        let mut inversions = 0;
        for i in 0..perm.len() {
            for j in i + 1..perm.len() {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        let m = if inversions % 2 == 0 { self.multiplicity.clone() } else { -self.multiplicity.clone() };
        (keyed.into_iter().map(|(c, _)| c).collect(), m)
    }

    /// Splits along `h = 0` by repeated edge bisection until no edge crosses strictly.
    ///
    /// The crossing edge chosen is the smallest by its ordered endpoint coordinates, so a face
    /// shared by two simplices is subdivided identically from both sides.
    pub fn split(&self, h: &AffineFn, out: &mut Vec<Simplex>) {
        let coords: Vec<Vec<Q>> = self.vertices.iter().map(coords_of).collect();
        let vals: Vec<Q> = coords.iter().map(|c| h.eval_coords(c)).collect();
        let mut best: Option<((&Vec<Q>, &Vec<Q>), usize, usize)> = None;
        for i in 0..coords.len() {
            for j in i + 1..coords.len() {
                if vals[i].is_negative() && vals[j].is_positive() || vals[i].is_positive() && vals[j].is_negative() {
                    let key = if coords[i] <= coords[j] { (&coords[i], &coords[j]) } else { (&coords[j], &coords[i]) };
                    if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                        best = Some((key, i, j));
                    }
                }
            }
        }
        let Some(((lo, hi), i, j)) = best else {
            out.push(self.clone());
            return;
        };
        let (vl, vh) = (h.eval_coords(lo), h.eval_coords(hi));
        let s = &vl / (&vl - &vh);
        let cut: Vec<Q> = lo.iter().zip(hi).map(|(a, b)| a + &s * (b - a)).collect();
        let cut = Point::from_coords(self.vertices[0].params(), &cut).expect("matching dimension");
        let mut first = self.clone();
        first.vertices[j] = cut.clone();
        let mut second = self.clone();
        second.vertices[i] = cut;
        first.split(h, out);
        second.split(h, out);
    }
}

enum Mass {
    Exact(Q),
    Approx(f64),
}

fn rational_sqrt(q: &Q) -> Option<Q> {
    if q.is_negative() {
        return None;
    }
    let (a, b) = (q.numer().sqrt(), q.denom().sqrt());
    (&a * &a == *q.numer() && &b * &b == *q.denom()).then(|| Q::new(a, b))
}

/// Pointwise weights for [`SimplicialCurrent::pair_weighted`].
#[derive(Debug, Clone, PartialEq)]
pub enum WeightFn {
    Const(Q),
    Affine(AffineFn),
    /// `gamma_h(f(p))` with threshold `t` and band width `h`: 0 below `t`, 1 above `t + h`,
    /// linear in between.
    Ramp { f: AffineFn, t: Q, h: Q },
    Indicator(Region),
}

/// A finite weighted oriented simplicial `k`-chain in the Heisenberg group.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialCurrent {
    params: HeisParams,
    degree: usize,
    simplices: Vec<Simplex>,
    quadrature_order: u32,
}

pub const DEFAULT_QUADRATURE_ORDER: u32 = 5;

/// Admissible `k`-vectors, `k <= n`, annihilate `I^k`: no `T` component and zero contraction
/// with `d theta`.
pub fn is_admissible(v: &Multivector<Q>) -> bool {
    if !v.is_horizontal() {
        return false;
    }
    let k = v.grade();
    if k < 2 {
        return true;
    }
    let params = v.params();
    let d_theta = PolyForm::d_theta(params).evaluate_at(&Point::<Q>::origin(params)).expect("same params");
    blades_of_grade(params.dim(), k - 2).into_iter().all(|b| {
        let other = Multivector::from_indices(params, &crate::exterior::blade_indices(b), Q::one(), Kind::Covector)
            .expect("valid indices");
        let w = d_theta.wedge(&other).expect("same kind");
        pair(&w, v).expect("same grade").is_zero()
    })
}

impl SimplicialCurrent {
    pub fn new(params: HeisParams, degree: usize, simplices: Vec<Simplex>, quadrature_order: u32) -> Result<Self> {
        if degree > params.dim() {
            return Err(Error::Parameter(format!("degree {degree} exceeds the dimension {}", params.dim())));
        }
        if quadrature_order == 0 {
            return Err(Error::Parameter("quadrature order must be positive".into()));
        }
        for (i, s) in simplices.iter().enumerate() {
            if s.vertices.len() != degree + 1 {
                return Err(Error::Parameter(format!("simplex {i} has {} vertices, expected {}", s.vertices.len(), degree + 1)));
            }
            for v in &s.vertices {
                params.check(v.params())?;
            }
        }
        Ok(SimplicialCurrent { params, degree, simplices, quadrature_order })
    }

    pub fn empty(params: HeisParams, degree: usize) -> Self {
        SimplicialCurrent { params, degree, simplices: Vec::new(), quadrature_order: DEFAULT_QUADRATURE_ORDER }
    }

    fn with_simplices(&self, degree: usize, simplices: Vec<Simplex>) -> Self {
        SimplicialCurrent { params: self.params, degree, simplices, quadrature_order: self.quadrature_order }
    }

    pub fn params(&self) -> HeisParams {
        self.params
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn quadrature_order(&self) -> u32 {
        self.quadrature_order
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    fn rule(&self, extra_degree: u32) -> Result<QuadratureRule> {
        QuadratureRule::grundmann_moller(self.degree, self.quadrature_order.max(extra_degree))
    }

    /// `T(omega) = sum_i m_i integral <omega | V> ds` over the standard parameter simplex, exact;
    /// the quadrature degree is raised to the integrand degree when needed.
    pub fn pair_form(&self, omega: &PolyForm) -> Result<Q> {
        self.pair_weighted(&WeightFn::Const(Q::one()), omega)
    }

    /// `(T restricted by g)(omega) = sum_i m_i integral g <omega | V> ds`, exact.
    pub fn pair_weighted(&self, g: &WeightFn, omega: &PolyForm) -> Result<Q> {
        self.params.check(omega.params())?;
        if omega.grade() != self.degree {
            return Err(Error::GradeMismatch { left: self.degree, right: omega.grade() });
        }
        let (pieces, weight_degree) = match g {
            WeightFn::Const(c) if c.is_zero() => return Ok(Q::zero()),
            WeightFn::Const(_) => (self.clone(), 0),
            WeightFn::Affine(_) => (self.clone(), 1),
            WeightFn::Ramp { f, t, h } => {
                if !h.is_positive() {
                    return Err(Error::Parameter("band width h must be positive".into()));
                }
                let lower = self.split_all(&f.shifted(t));
                (lower.split_all(&f.shifted(&(t + h))), 1)
            }
            WeightFn::Indicator(r) => (self.restrict(r), 0),
        };
        let rule = pieces.rule(omega.degree() + 1 + weight_degree)?;
        let scale = Q::one() / factorial(self.degree);
        let mut total = Q::zero();
        for s in &pieces.simplices {
            // after splitting at the kinks the ramp is one affine piece per simplex
            let ramp_regime = match g {
                WeightFn::Ramp { f, t, h } => {
                    let v = (f.eval_coords(&s.barycenter()) - t) / h;
                    Some(if v.is_negative() { Some(Q::zero()) } else if v > Q::one() { Some(Q::one()) } else { None })
                }
                _ => None,
            };
            let mut acc = Q::zero();
            for (node, w) in rule.nodes.iter().zip(&rule.weights) {
                let p = s.point_at(node);
                let weight = match (g, &ramp_regime) {
                    (_, Some(Some(c))) => c.clone(),
                    (WeightFn::Ramp { f, t, h }, _) => (f.eval(&p) - t) / h,
                    (WeightFn::Const(c), _) => c.clone(),
                    (WeightFn::Affine(a), _) => a.eval(&p),
                    (WeightFn::Indicator(_), _) => Q::one(),
                };
                if weight.is_zero() {
                    continue;
                }
                let v = s.frame_vector(&p)?;
                let wv = omega.evaluate_at(&p)?;
                acc += w * weight * pair(&wv, &v)?;
            }
            total += &s.multiplicity * acc;
        }
        Ok(total * scale)
    }

    /// Pairing with a Rumin class. Below the middle degree every tangent must be admissible.
    pub fn pair_current(&self, c: &RuminClass) -> Result<Q> {
        if c.degree() != self.degree {
            return Err(Error::GradeMismatch { left: self.degree, right: c.degree() });
        }
        if c.regime() == Regime::Low {
            self.check_admissible()?;
        }
        self.pair_form(c.payload())
    }

    /// `(boundary T)(c) = T(d_c c)`, the dual boundary; at the middle degree this is the only
    /// boundary model.
    pub fn pair_dual_boundary(&self, rumin: &Rumin, c: &RuminClass) -> Result<Q> {
        self.pair_current(&rumin.d_c(c)?)
    }

    /// Errors on the first simplex with an inadmissible tangent (degree at most `n`).
    ///
    /// The `T` component of `V(p)` is affine in `p` and its horizontal part is constant, so
    /// checking the vertices is exact.
    pub fn check_admissible(&self) -> Result<()> {
        for (i, s) in self.simplices.iter().enumerate() {
            for v in &s.vertices {
                if !is_admissible(&s.frame_vector(v)?) {
                    return Err(Error::Admissibility { simplex: i });
                }
            }
        }
        Ok(())
    }

    /// `mu_T` of one simplex. `V(p)` is affine in `p`, so `|V|^2` is a quadratic determined by
    /// its values at the vertices and edge midpoints; when these agree on a rational square the
    /// value is exact, otherwise `|V|` is integrated by quadrature.
    fn simplex_mass(&self, s: &Simplex, rule: &QuadratureRule) -> Result<Mass> {
        let m = s.multiplicity.abs();
        if self.degree == 0 {
            return Ok(Mass::Exact(m));
        }
        let at_vertices = s.vertices.iter().map(|v| s.frame_vector(v)).collect::<Result<Vec<_>>>()?;
        let square = |v: &Multivector<Q>| v.terms().fold(Q::zero(), |acc, (_, c)| acc + c * c);
        let first = square(&at_vertices[0]);
        let mut constant = at_vertices.iter().all(|v| square(v) == first);
        for i in 0..at_vertices.len() {
            for j in i + 1..at_vertices.len() {
                if constant {
                    let mid = at_vertices[i].add(&at_vertices[j])?.scale(&crate::scalar::q_half());
                    constant = square(&mid) == first;
                }
            }
        }
        let scale = m / factorial(self.degree);
        if constant {
            if let Some(root) = rational_sqrt(&first) {
                return Ok(Mass::Exact(scale * root));
            }
            return Ok(Mass::Approx(scale.to_f64() * first.to_f64().sqrt()));
        }
        let corners: Vec<Multivector<f64>> = at_vertices.iter().map(Multivector::to_f64).collect();
        let mut acc = 0.0;
        for (node, w) in rule.nodes.iter().zip(&rule.weights) {
            let mut v = corners[0].scale(&0.0);
            for (c, b) in corners.iter().zip(node) {
                v = v.add(&c.scale(&b.to_f64()))?;
            }
            acc += w.to_f64() * v.norm();
        }
        Ok(Mass::Approx(scale.to_f64() * acc))
    }

    fn total_mass(&self) -> (Q, f64) {
        let c = self.canonical();
        let rule = c.rule(0).expect("valid order");
        let mut exact = Q::zero();
        let mut approx = 0.0;
        for s in &c.simplices {
            match c.simplex_mass(s, &rule).expect("same params") {
                Mass::Exact(q) => exact += q,
                Mass::Approx(v) => approx += v,
            }
        }
        (exact, approx)
    }

    /// Mass `M(T) = mu_T` of everything (after cancelling overlapping simplices).
    pub fn mass(&self) -> f64 {
        let (exact, approx) = self.total_mass();
        exact.to_f64() + approx
    }

    /// The mass as an exact rational, when every simplex has rational constant `|V|`.
    pub fn mass_exact(&self) -> Option<Q> {
        let c = self.canonical();
        let rule = c.rule(0).expect("valid order");
        let mut exact = Q::zero();
        for s in &c.simplices {
            match c.simplex_mass(s, &rule).expect("same params") {
                Mass::Exact(q) => exact += q,
                Mass::Approx(_) => return None,
            }
        }
        Some(exact)
    }

    /// `mu_T(A)`.
    pub fn measure_of(&self, region: &Region) -> f64 {
        self.restrict(region).mass()
    }

    /// Splits every simplex along `h = 0`.
    pub fn split_all(&self, h: &AffineFn) -> SimplicialCurrent {
        let mut out = Vec::new();
        for s in &self.simplices {
            s.split(h, &mut out);
        }
        self.with_simplices(self.degree, out)
    }

    /// Exact clipping `T restricted to A`.
    pub fn restrict(&self, region: &Region) -> SimplicialCurrent {
        let mut pieces = self.clone();
        for h in region.hyperplanes() {
            pieces = pieces.split_all(&h);
        }
        let kept = pieces
            .simplices
            .into_iter()
            .filter(|s| !s.is_degenerate() && region.contains(&s.barycenter()))
            .collect();
        self.with_simplices(self.degree, kept)
    }

    /// Combinatorial boundary `sum_i (-1)^i face_i`, cancelled exactly.
    pub fn boundary(&self) -> Result<SimplicialCurrent> {
        if self.degree == 0 {
            return Err(Error::Parameter("the boundary of a 0-current is not a current".into()));
        }
        let mut faces = Vec::new();
        for s in &self.simplices {
            for i in 0..s.vertices.len() {
                let mut vertices = s.vertices.clone();
                vertices.remove(i);
                let m = if i % 2 == 0 { s.multiplicity.clone() } else { -s.multiplicity.clone() };
                faces.push(Simplex::new(vertices, m));
            }
        }
        Ok(self.with_simplices(self.degree - 1, faces).canonical())
    }

    /// Sum of multiplicities of a 0-chain (the augmentation).
    pub fn augmentation(&self) -> Q {
        self.simplices.iter().fold(Q::zero(), |acc, s| acc + &s.multiplicity)
    }

    fn canonical_map(&self) -> BTreeMap<Vec<Vec<Q>>, Q> {
        let mut map: BTreeMap<Vec<Vec<Q>>, Q> = BTreeMap::new();
        for s in &self.simplices {
            if s.multiplicity.is_zero() || s.is_degenerate() {
                continue;
            }
            let (key, m) = s.canonical();
            *map.entry(key).or_insert_with(Q::zero) += m;
        }
        map.retain(|_, m| !m.is_zero());
        map
    }

    /// Vertices sorted, coincident simplices merged, zero and degenerate simplices dropped.
    pub fn canonical(&self) -> SimplicialCurrent {
        let simplices = self
            .canonical_map()
            .into_iter()
            .map(|(key, m)| {
                Simplex::new(key.iter().map(|c| Point::from_coords(self.params, c).expect("dimension")).collect(), m)
            })
            .collect();
        self.with_simplices(self.degree, simplices)
    }

    /// Equality as chains: same simplices with the same multiplicities after canonicalization.
    pub fn same_chain(&self, other: &SimplicialCurrent) -> bool {
        self.params == other.params && self.degree == other.degree && self.canonical_map() == other.canonical_map()
    }

    pub fn add(&self, other: &SimplicialCurrent) -> Result<SimplicialCurrent> {
        self.params.check(other.params)?;
        if self.degree != other.degree {
            return Err(Error::GradeMismatch { left: self.degree, right: other.degree });
        }
        let mut simplices = self.simplices.clone();
        simplices.extend(other.simplices.iter().cloned());
        Ok(self.with_simplices(self.degree, simplices).canonical())
    }

    pub fn neg(&self) -> SimplicialCurrent {
        let simplices = self
            .simplices
            .iter()
            .map(|s| Simplex::new(s.vertices.clone(), -s.multiplicity.clone()))
            .collect();
        self.with_simplices(self.degree, simplices)
    }

    pub fn sub(&self, other: &SimplicialCurrent) -> Result<SimplicialCurrent> {
        self.add(&other.neg())
    }

    /// Quadrature nodes of every simplex at the chain's order.
    pub fn quadrature_points(&self) -> Vec<Point<Q>> {
        let rule = self.rule(0).expect("valid order");
        self.simplices.iter().flat_map(|s| rule.nodes.iter().map(|n| s.point_at(n)).collect::<Vec<_>>()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use crate::random::FormSampler;
    use crate::scalar::{q_frac, q_int};

    fn p1() -> HeisParams {
        HeisParams::new(1).unwrap()
    }

    fn pt(c: &[i64]) -> Point<Q> {
        let params = HeisParams::new((c.len() - 1) / 2).unwrap();
        Point::from_coords(params, &c.iter().map(|v| q_int(*v)).collect::<Vec<_>>()).unwrap()
    }

    fn segment() -> SimplicialCurrent {
        SimplicialCurrent::new(p1(), 1, vec![Simplex::new(vec![pt(&[0, 0, 0]), pt(&[1, 0, 0])], q_int(1))], 5).unwrap()
    }

    fn cube() -> SimplicialCurrent {
        crate::shapes::unit_cube()
    }

    fn form(params: HeisParams, idx: &[usize]) -> PolyForm {
        PolyForm::monomial_form(params, idx, Poly::one(params.dim()))
    }

    #[test]
    fn segment_pairings_and_mass() {
        let r = Rumin::new(p1());
        let seg = segment();
        assert_eq!(seg.pair_current(&r.class(&form(p1(), &[0])).unwrap()).unwrap(), q_int(1));
        assert_eq!(seg.pair_current(&r.class(&form(p1(), &[1])).unwrap()).unwrap(), q_int(0));
        assert_eq!(seg.mass(), 1.0);
        assert_eq!(SimplicialCurrent::empty(p1(), 2).mass(), 0.0);
    }

    #[test]
    fn cube_pairing_and_mass() {
        let c = cube();
        let top = PolyForm::monomial_form(p1(), &[2, 0, 1], Poly::one(3));
        assert_eq!(c.pair_form(&top).unwrap(), q_int(1));
        assert_eq!(c.mass_exact(), Some(q_int(1)));
        // brute-force oracle: Riemann sum of x t over the unit cube against dx^dy^theta
        let f = PolyForm::monomial_form(p1(), &[0, 1, 2], Poly::var(3, 0).mul(&Poly::var(3, 2)));
        assert_eq!(c.pair_form(&f).unwrap(), q_frac(1, 4));
    }

    #[test]
    fn inadmissible_tangents_are_refused() {
        let r = Rumin::new(p1());
        let vertical = SimplicialCurrent::new(p1(), 1, vec![Simplex::new(vec![pt(&[0, 0, 0]), pt(&[0, 0, 1])], q_int(1))], 5)
            .unwrap();
        let c = r.class(&form(p1(), &[0])).unwrap();
        assert!(matches!(vertical.pair_current(&c), Err(Error::Admissibility { simplex: 0 })));
        let p2 = HeisParams::new(2).unwrap();
        let x1x2 = Multivector::from_indices(p2, &[0, 1], q_int(1), Kind::Vector).unwrap();
        let x1y1 = Multivector::from_indices(p2, &[0, 2], q_int(1), Kind::Vector).unwrap();
        assert!(is_admissible(&x1x2));
        assert!(!is_admissible(&x1y1));
        assert!(!is_admissible(&Multivector::from_indices(p1(), &[2], q_int(1), Kind::Vector).unwrap()));
    }

    #[test]
    fn clipping_examples() {
        let p = p1();
        let x = AffineFn::coordinate(p, 0);
        let half = segment().restrict(&Region::above(&x, &q_frac(1, 2)));
        assert_eq!(half.simplices().len(), 1);
        assert!(half.same_chain(
            &SimplicialCurrent::new(p, 1, vec![Simplex::new(vec![pt(&[0, 0, 0]), pt(&[1, 0, 0])], q_int(1))], 5)
                .unwrap()
                .restrict(&Region::above(&x, &q_frac(1, 2)))
        ));
        assert_eq!(half.simplices()[0].vertices[0].x[0], q_frac(1, 2));
        assert_eq!(half.mass(), 0.5);
        let c = cube();
        assert!(c.restrict(&Region::Everything).same_chain(&c));
        assert!(c.restrict(&Region::above(&x, &q_int(1))).is_empty());
    }

    #[test]
    fn restriction_is_additive() {
        let c = cube();
        let f = AffineFn::new(vec![q_int(2), q_int(-1), q_int(1)], q_int(0));
        let t = q_frac(1, 3);
        let above = c.restrict(&Region::above(&f, &t));
        let below = c.restrict(&Region::below(&f, &t));
        assert!(above.add(&below).unwrap().pair_form(&form(p1(), &[0, 1, 2])).unwrap() == q_int(1));
        assert!((above.mass() + below.mass() - 1.0).abs() < 1e-13);
        let boundary_sum = above.boundary().unwrap().add(&below.boundary().unwrap()).unwrap();
        assert!(boundary_sum.same_chain(&c.boundary().unwrap().split_all(&f.shifted(&t))));
    }

    #[test]
    fn boundary_examples() {
        let b = segment().boundary().unwrap();
        let want =
            SimplicialCurrent::new(p1(), 0, vec![Simplex::new(vec![pt(&[1, 0, 0])], q_int(1)), Simplex::new(vec![pt(&[0, 0, 0])], q_int(-1))], 5)
                .unwrap();
        assert!(b.same_chain(&want));
        let c = cube();
        let surface = c.boundary().unwrap();
        assert_eq!(surface.simplices().len(), 12);
        assert!(surface.boundary().unwrap().is_empty());
        // oracle: the four side faces have |V| = 1; the faces t = 0, 1 have |V| = sqrt(1 + (x^2 + y^2)/4)
        let side = 4.0;
        let steps = 2000;
        let mut cap = 0.0;
        for i in 0..steps {
            for j in 0..steps {
                let (x, y) = ((i as f64 + 0.5) / steps as f64, (j as f64 + 0.5) / steps as f64);
                cap += (1.0 + (x * x + y * y) / 4.0).sqrt();
            }
        }
        cap /= (steps * steps) as f64;
        assert!((surface.mass() - (side + 2.0 * cap)).abs() < 1e-5, "{}", surface.mass());
    }

    #[test]
    fn weighted_restriction_example() {
        let p = p1();
        let x = AffineFn::coordinate(p, 0);
        let seg = segment();
        let dx = form(p, &[0]);
        let g = WeightFn::Ramp { f: x.clone(), t: q_int(0), h: q_frac(1, 2) };
        assert_eq!(seg.pair_weighted(&g, &dx).unwrap(), q_frac(3, 4));
        assert_eq!(seg.pair_weighted(&WeightFn::Const(q_int(1)), &dx).unwrap(), seg.pair_form(&dx).unwrap());
        assert!(seg.pair_weighted(&WeightFn::Const(q_int(0)), &dx).unwrap().is_zero());
        let ind = WeightFn::Indicator(Region::above(&x, &q_frac(1, 2)));
        assert_eq!(seg.pair_weighted(&ind, &dx).unwrap(), q_frac(1, 2));
        assert!(seg.pair_weighted(&WeightFn::Ramp { f: x, t: q_int(0), h: q_int(0) }, &dx).is_err());
    }

    #[test]
    fn stokes_holds_above_the_middle_degree() {
        let p = p1();
        let r = Rumin::new(p);
        let c = cube();
        let skew = c.restrict(&Region::above(&AffineFn::new(vec![q_int(1), q_int(2), q_int(-1)], q_int(0)), &q_frac(1, 5)));
        let mut s = FormSampler::new(p, 17);
        for _ in 0..10 {
            let cls = r.random_class(&mut s, 2);
            let lhs = skew.boundary().unwrap().pair_current(&cls).unwrap();
            let rhs = skew.pair_current(&r.d_c(&cls).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn stokes_and_representative_independence_below_the_middle_degree() {
        let p2 = HeisParams::new(2).unwrap();
        let r = Rumin::new(p2);
        // a segment in the plane y = 0, t = 0 is horizontal
        let seg = SimplicialCurrent::new(
            p2,
            1,
            vec![Simplex::new(vec![pt(&[0, 0, 0, 0, 0]), pt(&[2, 1, 0, 0, 0])], q_int(3))],
            5,
        )
        .unwrap();
        seg.check_admissible().unwrap();
        let mut s = FormSampler::new(p2, 2);
        for _ in 0..10 {
            let f = r.random_class(&mut s, 0);
            let lhs = seg.boundary().unwrap().pair_current(&f).unwrap();
            let rhs = seg.pair_current(&r.d_c(&f).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            let w = s.form(1);
            let phi = r.random_ideal_element(&mut s, 1);
            assert_eq!(seg.pair_form(&w).unwrap() - seg.pair_form(&w.add(&phi).unwrap()).unwrap(), q_int(0));
        }
    }

    #[test]
    fn orientation_field_is_unit() {
        let c = cube();
        for s in c.boundary().unwrap().simplices() {
            let o = s.orientation_at(&s.point_at(&[q_frac(1, 3), q_frac(1, 3), q_frac(1, 3)]).to_f64()).unwrap();
            assert!((o.unit.norm() - 1.0).abs() < 1e-14);
            assert!(o.norm >= 0.5);
        }
    }
}

//! Slices `<T, f, t+>` of simplicial currents by affine functions, the ramp functions
//! `gamma_h`, Lipschitz estimates, the coarea sweep and the property report.

use std::fmt;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::currents::{SimplicialCurrent, WeightFn};
use crate::error::{Error, Result};
use crate::forms::PolyForm;
use crate::heis::{koranyi_dist, Point};
use crate::random::FormSampler;
use crate::region::{AffineFn, Region, ScaledAffine};
use crate::scalar::{format_q, format_sig, q_int, Scalar, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Debug, Clone)]
pub struct SliceResult {
    pub slice: SimplicialCurrent,
    pub mass: f64,
    /// Largest `|direct - formula|` over the test-form battery (exact, so normally 0).
    pub residual: f64,
    /// The direct chain equals the defining formula as chains.
    pub chain_agrees: bool,
    /// The slice has the middle degree `n`, outside the scope of the mass estimates.
    pub middle_degree: bool,
}

const TEST_FORMS: usize = 20;
const TEST_FORM_SEED: u64 = 0x51ce;

/// `gamma_h(s) = (|s - t| - |s - (t + h)| + h) / (2h)`, evaluated in the clamped form
/// `min(max((s - t) / h, 0), 1)` so the flat parts are exact in floating point.
pub fn gamma_h_eval(s: f64, t: f64, h: f64) -> Result<f64> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::Parameter("band width h must be positive".into()));
    }
    Ok(((s - t) / h).clamp(0.0, 1.0))
}

/// Exact [`gamma_h_eval`].
pub fn gamma_h_exact(s: &Q, t: &Q, h: &Q) -> Result<Q> {
    if !h.is_positive() {
        return Err(Error::Parameter("band width h must be positive".into()));
    }
    Ok(((s - t).abs() - (s - (t + h)).abs() + h) / (q_int(2) * h))
}

/// Errors when `t` is a value of `f` at some vertex of `T`.
pub fn check_generic_level(current: &SimplicialCurrent, f: &AffineFn, t: &Q) -> Result<()> {
    for s in current.simplices() {
        for v in &s.vertices {
            if f.eval(v) == *t {
                return Err(Error::DegenerateLevel { level: format_q(t) });
            }
        }
    }
    Ok(())
}

fn side_region(f: &AffineFn, t: &Q, side: Side) -> Region {
    match side {
        Side::Plus => Region::above(f, t),
        Side::Minus => Region::below(f, t),
    }
}

/// The defining formula: `(dT)|{f>t} - d(T|{f>t})` for the plus side and
/// `d(T|{f<t}) - (dT)|{f<t}` for the minus side.
pub fn slice_formula(current: &SimplicialCurrent, f: &AffineFn, t: &Q, side: Side) -> Result<SimplicialCurrent> {
    let region = side_region(f, t, side);
    let restricted_boundary = current.boundary()?.restrict(&region);
    let boundary_of_restricted = current.restrict(&region).boundary()?;
    match side {
        Side::Plus => restricted_boundary.sub(&boundary_of_restricted),
        Side::Minus => boundary_of_restricted.sub(&restricted_boundary),
    }
}

/// The faces on `{f = t}` of the boundary of the clipped pieces, signed as a slice.
pub fn slice_direct(current: &SimplicialCurrent, f: &AffineFn, t: &Q, side: Side) -> Result<SimplicialCurrent> {
    let pieces = current.restrict(&side_region(f, t, side)).boundary()?;
    let level: Vec<_> =
        pieces.simplices().iter().filter(|s| s.vertices.iter().all(|v| f.eval(v) == *t)).cloned().collect();
    let chain = SimplicialCurrent::new(current.params(), current.degree() - 1, level, current.quadrature_order())?;
    Ok(match side {
        Side::Plus => chain.neg(),
        Side::Minus => chain,
    })
}

/// `<T, f, t+>` or `<T, f, t->` at a generic level, certified against the defining formula.
pub fn slice(current: &SimplicialCurrent, f: &AffineFn, t: &Q, side: Side) -> Result<SliceResult> {
    if current.degree() == 0 {
        return Err(Error::Parameter("0-currents have no slices".into()));
    }
    current.params().check(HeisParamsOf::of(f, current)?)?;
    check_generic_level(current, f, t)?;
    let direct = slice_direct(current, f, t, side)?.canonical();
    let formula = slice_formula(current, f, t, side)?;
    let chain_agrees = direct.same_chain(&formula);
    let mut sampler = FormSampler::new(current.params(), TEST_FORM_SEED);
    let mut residual = Q::zero();
    for _ in 0..TEST_FORMS {
        let w = sampler.form(direct.degree());
        let diff = (direct.pair_form(&w)? - formula.pair_form(&w)?).abs();
        if diff > residual {
            residual = diff;
        }
    }
    let middle_degree = direct.degree() == current.params().n();
    Ok(SliceResult { mass: direct.mass(), slice: direct, residual: residual.to_f64(), chain_agrees, middle_degree })
}

/// Dimension check helper for affine functions against a current.
struct HeisParamsOf;

impl HeisParamsOf {
    fn of(f: &AffineFn, current: &SimplicialCurrent) -> Result<crate::heis::HeisParams> {
        if f.coeffs.len() != current.params().dim() {
            return Err(Error::Parameter(format!(
                "f has {} coefficients, the chain lives in dimension {}",
                f.coeffs.len(),
                current.params().dim()
            )));
        }
        Ok(current.params())
    }
}

/// `(dT)|(gamma_h o f)(omega) - (T|(gamma_h o f))(d omega)`, which tends to the slice as `h -> 0`.
pub fn ramp_slice_pairing(current: &SimplicialCurrent, f: &AffineFn, t: &Q, h: &Q, omega: &PolyForm) -> Result<Q> {
    let g = WeightFn::Ramp { f: f.clone(), t: t.clone(), h: h.clone() };
    Ok(current.boundary()?.pair_weighted(&g, omega)? - current.pair_weighted(&g, &omega.exterior_d())?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzReport {
    /// Largest difference quotient over the sampled pairs (a lower bound).
    pub sampled: f64,
    pub closed_form: Option<f64>,
}

impl LipschitzReport {
    pub fn consistent(&self) -> bool {
        self.closed_form.is_none_or(|c| self.sampled <= c + 1e-9)
    }
}

/// `max |f(p) - f(q)| / d(p, q)` over the pairs, skipping coincident points.
pub fn lipschitz_estimate(f: &dyn Fn(&Point<f64>) -> f64, pairs: &[(Point<f64>, Point<f64>)]) -> Result<f64> {
    let mut best: f64 = 0.0;
    for (p, q) in pairs {
        let d = koranyi_dist(p, q)?;
        if d > 0.0 {
            best = best.max((f(p) - f(q)).abs() / d);
        }
    }
    Ok(best)
}

/// Sampled estimate together with the closed form `|(a, b)|` when `f` is horizontal-affine.
pub fn lipschitz_report(f: &ScaledAffine, pairs: &[(Point<f64>, Point<f64>)]) -> Result<LipschitzReport> {
    let sampled = lipschitz_estimate(&|p: &Point<f64>| f.eval_f64(&p.coords()), pairs)?;
    let closed_form = if f.is_horizontal() { Some(f.horizontal_lipschitz()?) } else { None };
    Ok(LipschitzReport { sampled, closed_form })
}

fn require_sweepable(current: &SimplicialCurrent, f: &ScaledAffine) -> Result<f64> {
    if current.degree() == 0 {
        return Err(Error::Parameter("0-currents have no slices".into()));
    }
    if current.degree() - 1 == current.params().n() {
        return Err(Error::Scope(format!(
            "slices of degree k = n = {} are outside the range of the mass estimates; the middle-degree case is open",
            current.params().n()
        )));
    }
    if !f.is_horizontal() {
        return Err(Error::Parameter("mass estimates need a horizontal-affine f (no t term)".into()));
    }
    f.horizontal_lipschitz()
}

fn band_measure(current: &SimplicialCurrent, f: &ScaledAffine, lo: f64, hi: f64) -> Result<f64> {
    let (mut a, mut b) = (f.base_level(lo)?, f.base_level(hi)?);
    if f.scale < 0.0 {
        std::mem::swap(&mut a, &mut b);
    }
    Ok(current.measure_of(&Region::band(&f.base, &a, &b)))
}

fn slice_mass_at(current: &SimplicialCurrent, f: &ScaledAffine, t: f64) -> Result<f64> {
    let level = f.base_level(t)?;
    check_generic_level(current, &f.base, &level)?;
    let side = if f.scale < 0.0 { Side::Minus } else { Side::Plus };
    Ok(slice_direct(current, &f.base, &level, side)?.mass())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoareaRow {
    pub t: f64,
    pub mass: f64,
    /// `Lip(f) mu_T(cell) / cell width` for the grid cell around `t`.
    pub band_bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoareaTable {
    pub rows: Vec<CoareaRow>,
    pub integral: f64,
    pub lipschitz: f64,
    pub band_measure: f64,
    pub ratio: f64,
}

impl CoareaTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,mass,band_bound,ratio\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                format_sig(r.t, 12),
                format_sig(r.mass, 12),
                format_sig(r.band_bound, 12),
                format_sig(r.ratio, 12)
            ));
        }
        out
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Slice masses at the cell midpoints `t_i = a + (i + 1/2)(b - a)/m`, their midpoint-rule
/// integral, and the ratio `integral / (Lip(f) mu_T({a < f < b}))`.
pub fn coarea_sweep(current: &SimplicialCurrent, f: &ScaledAffine, a: f64, b: f64, m: usize) -> Result<CoareaTable> {
    let lipschitz = require_sweepable(current, f)?;
    if a.partial_cmp(&b) != Some(std::cmp::Ordering::Less) || m == 0 {
        return Err(Error::Parameter("coarea sweep needs a < b and a positive grid size".into()));
    }
    let width = (b - a) / m as f64;
    let rows = (0..m)
        .into_par_iter()
        .map(|i| {
            let t = a + (i as f64 + 0.5) * width;
            let mass = slice_mass_at(current, f, t)?;
            let cell = band_measure(current, f, a + i as f64 * width, a + (i + 1) as f64 * width)?;
            let band_bound = lipschitz * cell / width;
            Ok(CoareaRow { t, mass, band_bound, ratio: ratio(mass, band_bound) })
        })
        .collect::<Result<Vec<_>>>()?;
    let integral: f64 = rows.iter().map(|r| r.mass * width).sum();
    let measure = band_measure(current, f, a, b)?;
    Ok(CoareaTable { integral, lipschitz, band_measure: measure, ratio: ratio(integral, lipschitz * measure), rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandPoint {
    pub h: f64,
    pub bound: f64,
    /// `max(0, M(slice) - bound)`.
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandTrend {
    pub t: f64,
    pub slice_mass: f64,
    pub points: Vec<BandPoint>,
}

impl BandTrend {
    pub fn final_excess(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.excess)
    }

    /// Excess over the `h -> 0` bound estimated by Richardson extrapolation of the last two
    /// widths (`2 bound(h) - bound(2h)` when they halve). Removes the `O(h)` term that appears
    /// where the slice mass varies with `t`.
    pub fn extrapolated_excess(&self) -> f64 {
        match self.points.as_slice() {
            [.., a, b] if (a.h - 2.0 * b.h).abs() <= 1e-15 * a.h => {
                (self.slice_mass - (2.0 * b.bound - a.bound)).max(0.0)
            }
            _ => self.final_excess(),
        }
    }
}

/// `M(<T, f, t+>)` against `Lip(f) mu_T({t < f < t + h}) / h` for each `h`.
pub fn band_trend(current: &SimplicialCurrent, f: &ScaledAffine, t: f64, hs: &[f64]) -> Result<BandTrend> {
    let lipschitz = require_sweepable(current, f)?;
    let slice_mass = slice_mass_at(current, f, t)?;
    let points = hs
        .iter()
        .map(|&h| {
            let bound = lipschitz * band_measure(current, f, t, t + h)? / h;
            Ok(BandPoint { h, bound, excess: (slice_mass - bound).max(0.0) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BandTrend { t, slice_mass, points })
}

/// `h = 2^-2, ..., 2^-8`.
pub fn default_band_widths() -> Vec<f64> {
    (2..=8).map(|e| 0.5f64.powi(e)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Scope,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Scope => "SCOPE",
        })
    }
}

#[derive(Debug, Clone)]
pub struct PropertyLine {
    pub key: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub lines: Vec<PropertyLine>,
}

impl PropertyReport {
    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.status == Status::Pass)
    }

    pub fn has_scope(&self) -> bool {
        self.lines.iter().any(|l| l.status == Status::Scope)
    }

    pub fn status(&self, key: &str) -> Option<Status> {
        self.lines.iter().find(|l| l.key == key).map(|l| l.status)
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{} {} {}", l.key, l.status, l.detail)?;
        }
        Ok(())
    }
}

/// Levels `t` of `f` on `T` at which some simplex of `T` or of its boundary has `f` constant.
pub fn atom_levels(current: &SimplicialCurrent, f: &AffineFn) -> Result<Vec<Q>> {
    let mut levels = Vec::new();
    let mut chains = vec![current.clone()];
    if current.degree() > 0 {
        chains.push(current.boundary()?);
    }
    for c in &chains {
        for s in c.simplices() {
            let v0 = f.eval(&s.vertices[0]);
            if s.vertices.iter().all(|v| f.eval(v) == v0) && !levels.contains(&v0) {
                levels.push(v0);
            }
        }
    }
    levels.sort();
    Ok(levels)
}

/// Generic levels strictly inside the range of `f` over the vertices, avoiding vertex values.
pub fn generic_levels(current: &SimplicialCurrent, f: &AffineFn, count: usize) -> Vec<Q> {
    let values: Vec<Q> = current.simplices().iter().flat_map(|s| s.vertices.iter().map(|v| f.eval(v))).collect();
    let (Some(lo), Some(hi)) = (values.iter().min(), values.iter().max()) else {
        return Vec::new();
    };
    if lo == hi {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut denom = 2 * count as i64;
    while out.len() < count && denom < 64 * count as i64 + 64 {
        out.clear();
        for i in 0..count as i64 {
            let t = lo + (hi - lo) * Q::new((2 * i + 1).into(), denom.into());
            if !values.contains(&t) {
                out.push(t);
            }
        }
        denom += 1;
    }
    out.truncate(count);
    out
}

fn boundary_mass(chain: &SimplicialCurrent) -> Result<f64> {
    if chain.degree() == 0 {
        Ok(chain.augmentation().abs().to_f64())
    } else {
        Ok(chain.boundary()?.mass())
    }
}

/// Pass/fail for the slicing properties `P0`..`P6` of `T` and `f` over `samples` generic levels.
pub fn property_report(current: &SimplicialCurrent, f: &ScaledAffine, samples: usize) -> Result<PropertyReport> {
    if current.degree() == 0 {
        return Err(Error::Parameter("0-currents have no slices".into()));
    }
    HeisParamsOf::of(&f.base, current)?;
    let base = &f.base;
    let mut lines = Vec::new();

    let atoms = atom_levels(current, base)?;
    let listed: Vec<String> = atoms.iter().map(|t| format_sig(f.scale * t.to_f64(), 12)).collect();
    lines.push(PropertyLine {
        key: "P0",
        status: Status::Pass,
        detail: format!("{} atom level(s) of mu_T∘f⁻¹ and mu_∂T∘f⁻¹: [{}]", atoms.len(), listed.join(", ")),
    });

    let levels = generic_levels(current, base, samples);
    let boundary = current.boundary()?;
    let (mut p1, mut p2, mut p3) = (0usize, 0usize, 0usize);
    let mut residual: f64 = 0.0;
    for t in &levels {
        let plus = slice(current, base, t, Side::Plus)?;
        let minus = slice(current, base, t, Side::Minus)?;
        residual = residual.max(plus.residual).max(minus.residual);
        if plus.slice.same_chain(&minus.slice) && plus.chain_agrees && minus.chain_agrees {
            p1 += 1;
        }
        let on_level = plus.slice.quadrature_points().iter().all(|p| base.eval(p) == *t)
            && plus.slice.simplices().iter().all(|s| {
                s.vertices.iter().all(|v| base.eval(v) == *t && current.simplices().iter().any(|c| c.contains(v)))
            });
        if on_level {
            p2 += 1;
        }
        let anticommutes = if current.degree() == 1 {
            let restricted = boundary.restrict(&Region::above(base, t));
            plus.slice.augmentation() == restricted.augmentation()
        } else {
            let of_boundary = slice_direct(&boundary, base, t, Side::Plus)?;
            plus.slice.boundary()?.same_chain(&of_boundary.neg())
        };
        if anticommutes {
            p3 += 1;
        }
    }
    let total = levels.len();
    let status = |ok: usize| if ok == total && total > 0 { Status::Pass } else { Status::Fail };
    lines.push(PropertyLine {
        key: "P1",
        status: status(p1),
        detail: format!("slice_plus = slice_minus at {p1}/{total} generic levels (formula residual {residual:e})"),
    });
    lines.push(PropertyLine {
        key: "P2",
        status: status(p2),
        detail: format!("support in f⁻¹(t) ∩ spt T at {p2}/{total} levels"),
    });
    lines.push(PropertyLine {
        key: "P3",
        status: status(p3),
        detail: format!("∂<T,f,t+> = -<∂T,f,t+> at {p3}/{total} levels"),
    });

    let lo = f.scale * levels.first().map_or(0.0, Scalar::to_f64);
    let hi = f.scale * levels.last().map_or(0.0, Scalar::to_f64);
    let (a, b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mid_level = levels.get(levels.len() / 2).map_or(0.0, |t| f.scale * t.to_f64());
    match require_sweepable(current, f) {
        Err(Error::Scope(msg)) => {
            for key in ["P4", "P5", "P6"] {
                lines.push(PropertyLine { key, status: Status::Scope, detail: msg.clone() });
            }
        }
        Err(e) => return Err(e),
        Ok(_) => {
            let trend = band_trend(current, f, mid_level, &default_band_widths())?;
            let excesses: Vec<String> = trend.points.iter().map(|p| format!("{:.3e}", p.excess)).collect();
            lines.push(PropertyLine {
                key: "P4",
                status: if trend.final_excess().min(trend.extrapolated_excess()) <= 1e-3 {
                    Status::Pass
                } else {
                    Status::Fail
                },
                detail: format!(
                    "t = {}: M(slice) = {}, excess over Lip·μ_T(band)/h for h = 2^-2..2^-8: [{}], extrapolated to h → 0: {:.3e}",
                    format_sig(trend.t, 12),
                    format_sig(trend.slice_mass, 12),
                    excesses.join(", "),
                    trend.extrapolated_excess()
                ),
            });
            let (va, vb) = vertex_range(current, f);
            let table = coarea_sweep(current, f, va.min(a), vb.max(b), 100)?;
            lines.push(PropertyLine {
                key: "P5",
                status: if table.ratio <= 1.0 + 1e-2 { Status::Pass } else { Status::Fail },
                detail: format!(
                    "∫M dt = {}, Lip·μ_T = {}, ratio = {}",
                    format_sig(table.integral, 12),
                    format_sig(table.lipschitz * table.band_measure, 12),
                    format_sig(table.ratio, 12)
                ),
            });
            let level = f.base_level(mid_level)?;
            let s = slice(current, base, &level, Side::Plus)?;
            let bm = boundary_mass(&s.slice)?;
            lines.push(PropertyLine {
                key: "P6",
                status: if s.mass.is_finite() && bm.is_finite() { Status::Pass } else { Status::Fail },
                detail: format!("M(slice) = {}, M(∂slice) = {}", format_sig(s.mass, 12), format_sig(bm, 12)),
            });
        }
    }
    Ok(PropertyReport { lines })
}

fn vertex_range(current: &SimplicialCurrent, f: &ScaledAffine) -> (f64, f64) {
    let values: Vec<f64> = current
        .simplices()
        .iter()
        .flat_map(|s| s.vertices.iter().map(|v| f.scale * f.base.eval(v).to_f64()))
        .collect();
    (values.iter().cloned().fold(f64::INFINITY, f64::min), values.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
}

//! Seeded randomized batteries for the Rumin complex identities.

use std::fmt;

use crate::error::Result;
use crate::forms::PolyForm;
use crate::heis::HeisParams;
use crate::random::FormSampler;
use crate::rumin::Rumin;
use crate::scalar::q_int;

/// Outcome of one exact identity checked on a batch of random cases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tally {
    pub name: String,
    pub passed: usize,
    pub total: usize,
}

impl Tally {
    fn new(name: impl Into<String>) -> Self {
        Tally { name: name.into(), passed: 0, total: 0 }
    }

    fn record(&mut self, ok: bool) {
        self.total += 1;
        if ok {
            self.passed += 1;
        }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

impl fmt::Display for Tally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}/{} exact", self.name, self.passed, self.total)
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub n: usize,
    pub seed: u64,
    pub tallies: Vec<Tally>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.tallies.iter().all(Tally::ok)
    }

    pub fn tally(&self, name: &str) -> Option<&Tally> {
        self.tallies.iter().find(|t| t.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}, seed = {}", self.n, self.seed)?;
        for t in &self.tallies {
            writeln!(f, "{} {t}", if t.ok() { "PASS" } else { "FAIL" })?;
        }
        Ok(())
    }
}

/// `d_c o d_c = 0` at every degree and invariance of `d_c` under the quotient.
///
/// Each of the `count` samples draws one random class per degree; the headline tally counts
/// samples for which every degree passes.
pub fn verify_complex(n: usize, seed: u64, count: usize) -> Result<Report> {
    let params = HeisParams::new(n)?;
    let rumin = Rumin::new(params);
    let mut sampler = FormSampler::new(params, seed);
    let top = params.dim();
    let mut headline = Tally::new("dc∘dc = 0");
    let mut per_degree: Vec<Tally> = (0..=top).map(|k| Tally::new(format!("dc∘dc = 0 at degree {k}"))).collect();
    let mut quotient = Tally::new("d_c well defined on classes");
    for _ in 0..count {
        let mut all = true;
        for k in 0..=top {
            let c = rumin.random_class(&mut sampler, k);
            let dd = rumin.d_c(&rumin.d_c(&c)?)?;
            per_degree[k].record(dd.is_zero());
            all &= dd.is_zero();
        }
        headline.record(all);
        for k in 0..=n {
            let w = sampler.form(k);
            let phi = rumin.random_ideal_element(&mut sampler, k);
            let moved = w.add(&phi)?;
            let same = if k < n {
                rumin.canonical_rep(&w.exterior_d())? == rumin.canonical_rep(&moved.exterior_d())?
            } else {
                rumin.big_d(&w)? == rumin.big_d(&moved)?
            };
            quotient.record(same);
        }
    }
    let mut tallies = vec![headline];
    tallies.extend(per_degree);
    tallies.push(quotient);
    Ok(Report { n, seed, tallies })
}

/// The Leibniz defect identities, the `script_l` product rule, `J^{n+1}` membership of the
/// defect, and invariance of `D` under the ideal.
pub fn verify_lemmas(n: usize, seed: u64, count: usize) -> Result<Report> {
    let params = HeisParams::new(n)?;
    let rumin = Rumin::new(params);
    let mut s = FormSampler::new(params, seed);
    let theta = PolyForm::theta(params);
    let sign_n = if n % 2 == 0 { q_int(1) } else { q_int(-1) };
    let df = |g: &crate::poly::Poly| PolyForm::function(params, g.clone()).exterior_d();

    let mut low = Tally::new("Leibniz defect k<n");
    let mut mid = Tally::new("Leibniz defect k=n");
    let mut high = Tally::new("Leibniz defect k>n");
    let mut product_rule = Tally::new("script_l product rule");
    let mut member_free = Tally::new("defect in J^(n+1), theta-free ω");
    let mut member_theta = Tally::new("defect in J^(n+1), ω = θ∧β");
    let mut two_pieces = Tally::new("two-piece defect formula");
    let mut well_defined = Tally::new("D invariant under I^n");

    for _ in 0..count {
        for k in 0..n {
            let g = s.poly();
            let c = rumin.random_class(&mut s, k);
            let defect = rumin.leibniz_defect(&g, &c)?;
            low.record(defect == rumin.canonical_rep(&df(&g).wedge(c.payload())?)?);
        }
        for k in n + 1..=params.dim() {
            let g = s.poly();
            let c = rumin.random_class(&mut s, k);
            let defect = rumin.leibniz_defect(&g, &c)?;
            let closed = df(&g).wedge(c.payload())?;
            high.record(rumin.is_in_j(&closed)? && defect == closed);
        }

        // middle degree, theta-free representative
        let g = s.poly();
        let w = s.horizontal_form(n);
        let lw = rumin.script_l(&w)?;
        let lgw = rumin.script_l(&w.mul_fn(&g))?;
        let diff = lgw.sub(&lw.mul_fn(&g))?;
        let closed = rumin.l_inv(&df(&g).wedge(&w)?.horizontal_part().scale(&sign_n))?;
        product_rule.record(diff == closed);

        let first = df(&g).wedge(&w.add(&lw.wedge(&theta)?)?)?;
        let expr = first.add(&diff.wedge(&theta)?.exterior_d())?;
        member_free.record(rumin.is_in_j(&expr)?);

        let c = rumin.class(&w)?;
        let defect = rumin.leibniz_defect(&g, &c)?;
        let rep = c.payload();
        let lrep = rumin.script_l(rep)?;
        let stated = {
            let d = rumin.script_l(&rep.mul_fn(&g))?.sub(&lrep.mul_fn(&g))?;
            df(&g).wedge(&rep.add(&lrep.wedge(&theta)?)?)?.add(&d.wedge(&theta)?.exterior_d())?
        };
        mid.record(defect == stated);
        let closed_rep = rumin.l_inv(&df(&g).wedge(rep)?.horizontal_part().scale(&sign_n))?;
        let pieces = df(&g).wedge(&rep.add(&lrep.wedge(&theta)?)?)?.add(&closed_rep.wedge(&theta)?.exterior_d())?;
        two_pieces.record(defect == pieces);

        // middle degree, omega = theta ^ beta
        let g = s.poly();
        let w = theta.wedge(&s.form(n - 1))?;
        let lw = rumin.script_l(&w)?;
        let diff = rumin.script_l(&w.mul_fn(&g))?.sub(&lw.mul_fn(&g))?;
        let expr = df(&g).wedge(&w.add(&lw.wedge(&theta)?)?)?.add(&diff.wedge(&theta)?.exterior_d())?;
        member_theta.record(rumin.is_in_j(&expr)?);

        let w = s.form(n);
        let base = rumin.big_d(&w)?;
        let base_rep = rumin.big_d(&rumin.canonical_rep(&w)?)?;
        let mut ok = base == base_rep;
        for _ in 0..20 {
            let moved = w.add(&rumin.random_ideal_element(&mut s, n))?;
            ok &= rumin.big_d(&moved)? == base;
        }
        well_defined.record(ok);
    }
    let mut tallies = Vec::new();
    if n > 1 {
        tallies.push(low);
    }
    tallies.extend([mid, high, product_rule, member_free, member_theta, two_pieces, well_defined]);
    Ok(Report { n, seed, tallies })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_batteries_pass() {
        for n in 1..=2 {
            let r = verify_complex(n, 3, 5).unwrap();
            assert!(r.ok(), "{r}");
            let r = verify_lemmas(n, 3, 5).unwrap();
            assert!(r.ok(), "{r}");
        }
    }

    #[test]
    fn report_lines_are_stable() {
        let r = verify_complex(1, 7, 2).unwrap();
        let text = r.to_string();
        assert!(text.contains("PASS dc∘dc = 0: 2/2 exact"), "{text}");
        assert_eq!(text, verify_complex(1, 7, 2).unwrap().to_string());
    }
}

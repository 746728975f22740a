//! Seeded random polynomials and forms for randomized identity checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exterior::blades_of_grade;
use crate::forms::PolyForm;
use crate::heis::HeisParams;
use crate::poly::Poly;
use crate::scalar::q_int;

/// Draws polynomials of degree at most 3 with integer coefficients in `[-9, 9]`.
#[derive(Debug, Clone)]
pub struct FormSampler {
    params: HeisParams,
    rng: ChaCha8Rng,
    max_degree: u32,
}

impl FormSampler {
    pub fn new(params: HeisParams, seed: u64) -> Self {
        FormSampler { params, rng: ChaCha8Rng::seed_from_u64(seed), max_degree: 3 }
    }

    pub fn with_max_degree(mut self, d: u32) -> Self {
        self.max_degree = d;
        self
    }

    pub fn params(&self) -> HeisParams {
        self.params
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn grade_up_to(&mut self, max: usize) -> usize {
        self.rng.random_range(0..=max)
    }

    fn coefficient(&mut self) -> i64 {
        loop {
            let c = self.rng.random_range(-9..=9);
            if c != 0 {
                return c;
            }
        }
    }

    /// A nonzero polynomial with one to three terms.
    pub fn poly(&mut self) -> Poly {
        let nv = self.params.dim();
        loop {
            let mut p = Poly::zero(nv);
            let terms = self.rng.random_range(1..=3);
            for _ in 0..terms {
                let degree = self.rng.random_range(0..=self.max_degree);
                let mut m = vec![0u32; nv];
                for _ in 0..degree {
                    m[self.rng.random_range(0..nv)] += 1;
                }
                let c = self.coefficient();
                p.add_term(m, q_int(c));
            }
            if !p.is_zero() {
                return p;
            }
        }
    }

    /// A nonzero form of grade `k` (zero only when the grade exceeds `2n + 1`).
    pub fn form(&mut self, k: usize) -> PolyForm {
        let blades = blades_of_grade(self.params.dim(), k);
        let mut out = PolyForm::zero(self.params, k);
        if blades.is_empty() {
            return out;
        }
        while out.is_zero() {
            for &b in &blades {
                if self.rng.random_bool(0.5) {
                    let p = self.poly();
                    out.add_term(b, p);
                }
            }
        }
        out
    }

    /// A nonzero horizontal form of grade `k`, if one exists.
    pub fn horizontal_form(&mut self, k: usize) -> PolyForm {
        if k > 2 * self.params.n() {
            return PolyForm::zero(self.params, k);
        }
        loop {
            let f = self.form(k).horizontal_part();
            if !f.is_zero() {
                return f;
            }
        }
    }
}

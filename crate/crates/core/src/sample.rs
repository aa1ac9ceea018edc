//! Seeded random inputs for self-tests and property drivers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::kquad::KQuadraticForm;
use crate::numfield::{FieldElement, NumberField};
use crate::quat::{real_ramification_count, QuaternionAlgebra};
use crate::rational::{frac, Rational};

pub const DEFAULT_SEED: u64 = 0x6b33_726d;
const MAX_ATTEMPTS: usize = 10_000;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn int(&mut self, bound: i64) -> i64 {
        self.rng.gen_range(-bound..=bound)
    }

    pub fn nonzero_int(&mut self, bound: i64) -> i64 {
        loop {
            let v = self.int(bound);
            if v != 0 {
                return v;
            }
        }
    }

    pub fn nonzero_rational(&mut self, num_bound: i64, den_bound: i64) -> Rational {
        let n = self.nonzero_int(num_bound);
        let d = self.rng.gen_range(1..=den_bound);
        frac(n, d)
    }

    pub fn element(&mut self, f: &NumberField, bound: i64) -> FieldElement {
        let coords: Vec<i64> = (0..f.degree()).map(|_| self.int(bound)).collect();
        f.elem(&coords)
    }

    pub fn nonzero_element(&mut self, f: &NumberField, bound: i64) -> FieldElement {
        loop {
            let e = self.element(f, bound);
            if !e.is_zero() {
                return e;
            }
        }
    }

    pub fn vector(&mut self, f: &NumberField, n: usize, bound: i64) -> Vec<FieldElement> {
        (0..n).map(|_| self.element(f, bound)).collect()
    }

    pub fn diagonal_form(&mut self, f: &NumberField, n: usize, bound: i64) -> Result<KQuadraticForm> {
        let entries: Vec<FieldElement> = (0..n).map(|_| self.nonzero_element(f, bound)).collect();
        KQuadraticForm::diagonal(f.clone(), &entries)
    }

    /// A diagonal ternary form of K3 type, by rejection.
    pub fn k3_ternary(&mut self, f: &NumberField, bound: i64) -> Result<KQuadraticForm> {
        for _ in 0..MAX_ATTEMPTS {
            let q = self.diagonal_form(f, 3, bound)?;
            if q.is_k3_type()? {
                return Ok(q);
            }
        }
        Err(crate::Error::Internal("no K3-type form sampled".into()))
    }

    /// An invertible matrix over `f`, by rejection.
    pub fn invertible(&mut self, f: &NumberField, n: usize, bound: i64) -> Result<Vec<Vec<FieldElement>>> {
        let q = KQuadraticForm::diagonal(f.clone(), &vec![f.one(); n])?;
        for _ in 0..MAX_ATTEMPTS {
            let p: Vec<Vec<FieldElement>> = (0..n).map(|_| self.vector(f, n, bound)).collect();
            if q.congruent(&p).is_ok() {
                return Ok(p);
            }
        }
        Err(crate::Error::Internal("no invertible matrix sampled".into()))
    }

    /// `(alpha, beta)` over `f` ramified at exactly `d - 1` real places.
    pub fn algebra_with_real_condition(&mut self, f: &NumberField, bound: i64) -> Result<QuaternionAlgebra> {
        for _ in 0..MAX_ATTEMPTS {
            let b = QuaternionAlgebra::new(
                f.clone(),
                self.nonzero_element(f, bound),
                self.nonzero_element(f, bound),
            )?;
            if real_ramification_count(&b)? + 1 == f.degree() {
                return Ok(b);
            }
        }
        Err(crate::Error::Internal("no algebra with the real condition sampled".into()))
    }

    pub fn rational_algebra(&mut self, bound: i64) -> Result<QuaternionAlgebra> {
        let a = self.nonzero_rational(bound, 4);
        let b = self.nonzero_rational(bound, 4);
        QuaternionAlgebra::over_q(a, b)
    }

    pub fn rational_diagonal(&mut self, n: usize, bound: i64) -> Vec<Rational> {
        (0..n).map(|_| self.nonzero_rational(bound, 1)).collect()
    }
}

//! Seeded sampling of algebra elements, Albert-algebra matrices and
//! representation vectors.
//!
//! Rational samples have numerators in `[-9, 9]` and denominators in
//! `{1, 2, 3}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgElem, Algebra};
use crate::conformal::FreudVec;
use crate::jordan::HermMat;
use crate::rational::Rational;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream derived from a base seed and a label.
    pub fn derived(seed: u64, label: &str) -> Self {
        // FNV-1a over the label, mixed into the seed.
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in label.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100_0000_01b3);
        }
        Self::new(seed ^ h.rotate_left(17))
    }

    pub fn rational(&mut self) -> Rational {
        let n: i64 = self.rng.random_range(-9..=9);
        let d: i64 = self.rng.random_range(1..=3);
        Rational::new(n, d)
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let r = self.rational();
            if !r.is_zero() {
                return r;
            }
        }
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn alg_elem(&mut self, alg: Algebra) -> AlgElem {
        let coeffs = (0..alg.dim()).map(|_| self.rational()).collect();
        AlgElem::new(alg, coeffs).expect("length matches")
    }

    pub fn herm_mat(&mut self, alg: Algebra) -> HermMat {
        let diag = [self.rational(), self.rational(), self.rational()];
        let off = [self.alg_elem(alg), self.alg_elem(alg), self.alg_elem(alg)];
        HermMat::from_parts(alg, diag, off)
    }

    /// Hermitian matrix whose entries are all real.
    pub fn real_herm_mat(&mut self, alg: Algebra) -> HermMat {
        let diag = [self.rational(), self.rational(), self.rational()];
        let off = [
            AlgElem::real(alg, self.rational()),
            AlgElem::real(alg, self.rational()),
            AlgElem::real(alg, self.rational()),
        ];
        HermMat::from_parts(alg, diag, off)
    }

    pub fn freud_vec(&mut self, alg: Algebra) -> FreudVec {
        let x = self.herm_mat(alg);
        let y = self.herm_mat(alg);
        FreudVec::new(x, y, self.rational(), self.rational()).expect("same algebra")
    }
}

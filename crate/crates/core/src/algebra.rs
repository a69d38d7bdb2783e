//! The Cayley–Dickson tower ℝ ⊂ ℂ ⊂ ℍ ⊂ 𝕆 over exact rationals.
//!
//! Doubling rule: `(a, b)(c, d) = (ac − d̄b, da + bc̄)`. Coefficient 0 is the
//! real part; coefficient `i` multiplies the imaginary unit `e_i`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("incompatible algebras: {0} and {1}")]
    Mismatch(Algebra, Algebra),
    #[error("coefficient vector of length {0} is not 1, 2, 4 or 8")]
    BadLength(usize),
    #[error("unknown algebra `{0}` (expected R, C, H or O)")]
    UnknownName(String),
    #[error("level {0} is out of range 0..=3")]
    BadLevel(u8),
}

/// One of the four normed division algebras, identified by its doubling level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algebra {
    #[serde(rename = "R")]
    Real,
    #[serde(rename = "C")]
    Complex,
    #[serde(rename = "H")]
    Quaternion,
    #[serde(rename = "O")]
    Octonion,
}

impl Algebra {
    pub const ALL: [Algebra; 4] = [
        Algebra::Real,
        Algebra::Complex,
        Algebra::Quaternion,
        Algebra::Octonion,
    ];

    pub fn from_level(level: u8) -> Result<Self, AlgebraError> {
        match level {
            0 => Ok(Algebra::Real),
            1 => Ok(Algebra::Complex),
            2 => Ok(Algebra::Quaternion),
            3 => Ok(Algebra::Octonion),
            l => Err(AlgebraError::BadLevel(l)),
        }
    }

    pub fn from_dim(dim: usize) -> Result<Self, AlgebraError> {
        match dim {
            1 => Ok(Algebra::Real),
            2 => Ok(Algebra::Complex),
            4 => Ok(Algebra::Quaternion),
            8 => Ok(Algebra::Octonion),
            n => Err(AlgebraError::BadLength(n)),
        }
    }

    pub fn level(self) -> u8 {
        self as u8
    }

    /// Real dimension `k = 2^level`.
    pub fn dim(self) -> usize {
        1 << self.level()
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Algebra::Real => "R",
            Algebra::Complex => "C",
            Algebra::Quaternion => "H",
            Algebra::Octonion => "O",
        }
    }

    /// Real dimension of the derivation algebra (0, 0, 3, 14).
    pub fn derivation_dim(self) -> usize {
        match self {
            Algebra::Real | Algebra::Complex => 0,
            Algebra::Quaternion => 3,
            Algebra::Octonion => 14,
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Algebra {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "R" | "r" | "real" => Ok(Algebra::Real),
            "C" | "c" | "complex" => Ok(Algebra::Complex),
            "H" | "h" | "quaternion" => Ok(Algebra::Quaternion),
            "O" | "o" | "octonion" => Ok(Algebra::Octonion),
            other => Err(AlgebraError::UnknownName(other.to_string())),
        }
    }
}

/// `e_i e_j = sign · e_index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitProduct {
    pub sign: i8,
    pub index: u8,
}

/// Literal Cayley–Dickson recursion on coefficient slices of equal
/// power-of-two length.
pub fn cd_mul_slices(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    debug_assert_eq!(x.len(), y.len());
    let n = x.len();
    if n == 1 {
        return vec![&x[0] * &y[0]];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let conj = |v: &[Rational]| -> Vec<Rational> {
        v.iter()
            .enumerate()
            .map(|(i, r)| if i == 0 { r.clone() } else { -r })
            .collect()
    };
    let ac = cd_mul_slices(a, c);
    let dbar_b = cd_mul_slices(&conj(d), b);
    let da = cd_mul_slices(d, a);
    let b_cbar = cd_mul_slices(b, &conj(c));
    let mut out = Vec::with_capacity(n);
    out.extend(ac.iter().zip(&dbar_b).map(|(p, q)| p - q));
    out.extend(da.iter().zip(&b_cbar).map(|(p, q)| p + q));
    out
}

fn build_table(level: u8) -> Vec<UnitProduct> {
    let k = 1usize << level;
    let mut table = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let mut x = vec![Rational::ZERO; k];
            let mut y = vec![Rational::ZERO; k];
            x[i] = Rational::ONE;
            y[j] = Rational::ONE;
            let p = cd_mul_slices(&x, &y);
            let (index, coeff) = p
                .iter()
                .enumerate()
                .find(|(_, c)| !c.is_zero())
                .expect("unit product is nonzero");
            table.push(UnitProduct {
                sign: coeff.signum() as i8,
                index: index as u8,
            });
        }
    }
    table
}

/// Unit multiplication table (row-major, `k × k`), generated once from the
/// doubling recursion.
pub fn unit_table(alg: Algebra) -> &'static [UnitProduct] {
    static TABLES: OnceLock<[Vec<UnitProduct>; 4]> = OnceLock::new();
    let tables = TABLES.get_or_init(|| [build_table(0), build_table(1), build_table(2), build_table(3)]);
    &tables[alg.level() as usize]
}

/// An element of ℝ, ℂ, ℍ or 𝕆 with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgElem {
    alg: Algebra,
    coeffs: Vec<Rational>,
}

impl AlgElem {
    pub fn new(alg: Algebra, coeffs: Vec<Rational>) -> Result<Self, AlgebraError> {
        if coeffs.len() != alg.dim() {
            return Err(AlgebraError::BadLength(coeffs.len()));
        }
        Ok(AlgElem { alg, coeffs })
    }

    /// Infers the algebra from the coefficient count.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Result<Self, AlgebraError> {
        let alg = Algebra::from_dim(coeffs.len())?;
        Ok(AlgElem { alg, coeffs })
    }

    pub fn zero(alg: Algebra) -> Self {
        AlgElem {
            alg,
            coeffs: vec![Rational::ZERO; alg.dim()],
        }
    }

    pub fn one(alg: Algebra) -> Self {
        Self::real(alg, Rational::ONE)
    }

    pub fn real(alg: Algebra, r: Rational) -> Self {
        let mut e = Self::zero(alg);
        e.coeffs[0] = r;
        e
    }

    /// The unit `e_i` (`e_0 = 1`).
    pub fn unit(alg: Algebra, i: usize) -> Self {
        assert!(i < alg.dim(), "unit index {i} out of range for {alg}");
        let mut e = Self::zero(alg);
        e.coeffs[i] = Rational::ONE;
        e
    }

    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs[1..].iter().all(Rational::is_zero)
    }

    pub fn re(&self) -> Rational {
        self.coeffs[0].clone()
    }

    pub fn im(&self) -> AlgElem {
        let mut e = self.clone();
        e.coeffs[0] = Rational::ZERO;
        e
    }

    pub fn conj(&self) -> AlgElem {
        AlgElem {
            alg: self.alg,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i == 0 { c.clone() } else { -c })
                .collect(),
        }
    }

    /// Sum of squared coefficients.
    pub fn norm(&self) -> Rational {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn scale(&self, r: &Rational) -> AlgElem {
        if r.is_zero() {
            return Self::zero(self.alg);
        }
        AlgElem {
            alg: self.alg,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    fn check(&self, other: &AlgElem) -> Result<(), AlgebraError> {
        if self.alg != other.alg {
            return Err(AlgebraError::Mismatch(self.alg, other.alg));
        }
        Ok(())
    }

    /// Product computed by the literal doubling recursion.
    pub fn cd_mul(&self, other: &AlgElem) -> Result<AlgElem, AlgebraError> {
        self.check(other)?;
        Ok(AlgElem {
            alg: self.alg,
            coeffs: cd_mul_slices(&self.coeffs, &other.coeffs),
        })
    }

    /// Product via the cached unit table (same result as [`AlgElem::cd_mul`]).
    pub fn try_mul(&self, other: &AlgElem) -> Result<AlgElem, AlgebraError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &AlgElem) -> AlgElem {
        let k = self.alg.dim();
        if k == 1 {
            return AlgElem {
                alg: self.alg,
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            };
        }
        let table = unit_table(self.alg);
        let mut out = vec![Rational::ZERO; k];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let u = table[i * k + j];
                let p = x * y;
                if u.sign > 0 {
                    out[u.index as usize] += p;
                } else {
                    out[u.index as usize] -= p;
                }
            }
        }
        AlgElem {
            alg: self.alg,
            coeffs: out,
        }
    }

    pub fn try_add(&self, other: &AlgElem) -> Result<AlgElem, AlgebraError> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn commutator(&self, other: &AlgElem) -> Result<AlgElem, AlgebraError> {
        Ok(&self.try_mul(other)? - &other.try_mul(self)?)
    }

    /// `(xy)z − x(yz)`.
    pub fn associator(&self, y: &AlgElem, z: &AlgElem) -> Result<AlgElem, AlgebraError> {
        self.check(y)?;
        self.check(z)?;
        Ok(&(self * y) * z - self * &(y * z))
    }

    /// Embeds into the next doubling level as `(x, 0)`.
    pub fn embed(&self) -> Result<AlgElem, AlgebraError> {
        let up = Algebra::from_level(self.alg.level() + 1)?;
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(up.dim(), Rational::ZERO);
        Ok(AlgElem { alg: up, coeffs })
    }
}

impl fmt::Debug for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                f.write_str(if c.signum() < 0 { " - " } else { " + " })?;
            } else if c.signum() < 0 {
                f.write_str("-")?;
            }
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "e{i}")?,
                (_, false) => write!(f, "{a}*e{i}")?,
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

// Operator impls panic on mismatched algebras; use the `try_*` methods when
// inputs are not known to agree.
impl Mul for &AlgElem {
    type Output = AlgElem;
    fn mul(self, rhs: &AlgElem) -> AlgElem {
        self.try_mul(rhs).expect("algebra mismatch in product")
    }
}

impl Add for &AlgElem {
    type Output = AlgElem;
    fn add(self, rhs: &AlgElem) -> AlgElem {
        assert_eq!(self.alg, rhs.alg, "algebra mismatch in sum");
        AlgElem {
            alg: self.alg,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &AlgElem {
    type Output = AlgElem;
    fn sub(self, rhs: &AlgElem) -> AlgElem {
        assert_eq!(self.alg, rhs.alg, "algebra mismatch in difference");
        AlgElem {
            alg: self.alg,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Add for AlgElem {
    type Output = AlgElem;
    fn add(self, rhs: AlgElem) -> AlgElem {
        &self + &rhs
    }
}

impl Sub for AlgElem {
    type Output = AlgElem;
    fn sub(self, rhs: AlgElem) -> AlgElem {
        &self - &rhs
    }
}

impl Sub<AlgElem> for &AlgElem {
    type Output = AlgElem;
    fn sub(self, rhs: AlgElem) -> AlgElem {
        self - &rhs
    }
}

impl Add<AlgElem> for &AlgElem {
    type Output = AlgElem;
    fn add(self, rhs: AlgElem) -> AlgElem {
        self + &rhs
    }
}

impl Sub<&AlgElem> for AlgElem {
    type Output = AlgElem;
    fn sub(self, rhs: &AlgElem) -> AlgElem {
        &self - rhs
    }
}

impl Add<&AlgElem> for AlgElem {
    type Output = AlgElem;
    fn add(self, rhs: &AlgElem) -> AlgElem {
        &self + rhs
    }
}

impl Mul for AlgElem {
    type Output = AlgElem;
    fn mul(self, rhs: AlgElem) -> AlgElem {
        &self * &rhs
    }
}

impl Neg for &AlgElem {
    type Output = AlgElem;
    fn neg(self) -> AlgElem {
        AlgElem {
            alg: self.alg,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for AlgElem {
    type Output = AlgElem;
    fn neg(self) -> AlgElem {
        -&self
    }
}

/// Renders `sign·e_index` as `+1`, `-e3`, etc.
pub fn unit_symbol(u: UnitProduct) -> String {
    let s = if u.sign < 0 { '-' } else { '+' };
    if u.index == 0 {
        format!("{s}1")
    } else {
        format!("{s}e{}", u.index)
    }
}

/// Aligned text rendering of the unit multiplication table.
pub fn format_unit_table(alg: Algebra) -> String {
    let k = alg.dim();
    let table = unit_table(alg);
    let header = |i: usize| if i == 0 { "1".to_string() } else { format!("e{i}") };
    let width = 4;
    let mut out = format!("{:>width$} |", "");
    for j in 0..k {
        out.push_str(&format!(" {:>width$}", header(j)));
    }
    out.push('\n');
    out.push_str(&"-".repeat(width + 2 + k * (width + 1)));
    out.push('\n');
    for i in 0..k {
        out.push_str(&format!("{:>width$} |", header(i)));
        for j in 0..k {
            out.push_str(&format!(" {:>width$}", unit_symbol(table[i * k + j])));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Sampler;
    use proptest::prelude::*;

    /// Hand-unrolled doubling on basis units, independent of `cd_mul_slices`.
    fn unit_mul_oracle(level: u8, i: usize, j: usize) -> (i8, usize) {
        if level == 0 {
            return (1, 0);
        }
        let h = 1usize << (level - 1);
        let conj_sign = |idx: usize| if idx == 0 { 1 } else { -1 };
        match (i < h, j < h) {
            // (a,0)(c,0) = (ac, 0)
            (true, true) => unit_mul_oracle(level - 1, i, j),
            // (a,0)(0,d) = (0, da)
            (true, false) => {
                let (s, k) = unit_mul_oracle(level - 1, j - h, i);
                (s, k + h)
            }
            // (0,b)(c,0) = (0, b c̄)
            (false, true) => {
                let (s, k) = unit_mul_oracle(level - 1, i - h, j);
                (s * conj_sign(j), k + h)
            }
            // (0,b)(0,d) = (−d̄ b, 0)
            (false, false) => {
                let (s, k) = unit_mul_oracle(level - 1, j - h, i - h);
                (-s * conj_sign(j - h), k)
            }
        }
    }

    #[test]
    fn octonion_table_matches_unrolled_recursion() {
        let t = unit_table(Algebra::Octonion);
        for i in 0..8 {
            for j in 0..8 {
                let (s, k) = unit_mul_oracle(3, i, j);
                assert_eq!(t[i * 8 + j], UnitProduct { sign: s, index: k as u8 }, "e{i}*e{j}");
            }
        }
    }

    #[test]
    fn imaginary_units_square_to_minus_one() {
        for alg in Algebra::ALL {
            for i in 1..alg.dim() {
                let e = AlgElem::unit(alg, i);
                assert_eq!(&e * &e, AlgElem::real(alg, Rational::from_int(-1)));
            }
        }
    }

    #[test]
    fn identity_and_conj_basics() {
        let mut s = Sampler::new(7);
        for alg in Algebra::ALL {
            let x = s.alg_elem(alg);
            assert_eq!(&AlgElem::one(alg) * &x, x);
            assert_eq!(&x * &AlgElem::one(alg), x);
            assert_eq!(AlgElem::one(alg).conj(), AlgElem::one(alg));
            assert_eq!(x.norm(), (&x * &x.conj()).re());
            assert!(x.commutator(&x).unwrap().is_zero());
        }
        assert_eq!(AlgElem::unit(Algebra::Octonion, 3).norm(), Rational::ONE);
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = AlgElem::one(Algebra::Complex);
        let b = AlgElem::one(Algebra::Quaternion);
        assert_eq!(
            a.try_mul(&b),
            Err(AlgebraError::Mismatch(Algebra::Complex, Algebra::Quaternion))
        );
        assert!(a.associator(&a, &b).is_err());
    }

    #[test]
    fn associativity_up_to_quaternions_only() {
        let mut s = Sampler::new(11);
        for alg in [Algebra::Real, Algebra::Complex, Algebra::Quaternion] {
            for _ in 0..20 {
                let (x, y, z) = (s.alg_elem(alg), s.alg_elem(alg), s.alg_elem(alg));
                assert!(x.associator(&y, &z).unwrap().is_zero());
            }
        }
        let o = |i| AlgElem::unit(Algebra::Octonion, i);
        assert!(!o(1).associator(&o(2), &o(4)).unwrap().is_zero());
    }

    #[test]
    fn composition_law_on_seeded_octonions() {
        let mut s = Sampler::new(2024);
        for _ in 0..100 {
            let x = s.alg_elem(Algebra::Octonion);
            let y = s.alg_elem(Algebra::Octonion);
            assert_eq!((&x * &y).norm(), &x.norm() * &y.norm());
        }
    }

    #[test]
    fn table_product_equals_recursive_product() {
        let mut s = Sampler::new(5);
        for alg in Algebra::ALL {
            for _ in 0..10 {
                let x = s.alg_elem(alg);
                let y = s.alg_elem(alg);
                assert_eq!(x.cd_mul(&y).unwrap(), &x * &y);
            }
        }
    }

    #[test]
    fn text_table_has_one_row_per_unit() {
        let t = format_unit_table(Algebra::Quaternion);
        assert_eq!(t.lines().count(), 2 + 4);
        assert!(t.contains("-1"));
    }

    fn arb_elem(alg: Algebra) -> impl Strategy<Value = AlgElem> {
        proptest::collection::vec((-9i64..=9, 1i64..=3), alg.dim()).prop_map(move |v| {
            AlgElem::new(alg, v.into_iter().map(|(n, d)| Rational::new(n, d)).collect()).unwrap()
        })
    }

    fn arb_any() -> impl Strategy<Value = (AlgElem, AlgElem)> {
        (0u8..4).prop_flat_map(|l| {
            let alg = Algebra::from_level(l).unwrap();
            (arb_elem(alg), arb_elem(alg))
        })
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative((x, y) in arb_any()) {
            prop_assert_eq!((&x * &y).norm(), &x.norm() * &y.norm());
        }

        #[test]
        fn conj_reverses_products((x, y) in arb_any()) {
            prop_assert_eq!((&x * &y).conj(), &y.conj() * &x.conj());
        }

        #[test]
        fn alternative_laws((x, y) in arb_any()) {
            prop_assert_eq!(&(&x * &x) * &y, &x * &(&x * &y));
            prop_assert_eq!(&(&y * &x) * &x, &y * &(&x * &x));
        }

        #[test]
        fn embedding_is_multiplicative((x, y) in arb_any()) {
            if x.algebra() != Algebra::Octonion {
                let (ex, ey) = (x.embed().unwrap(), y.embed().unwrap());
                prop_assert_eq!(&ex * &ey, (&x * &y).embed().unwrap());
            }
        }
    }
}

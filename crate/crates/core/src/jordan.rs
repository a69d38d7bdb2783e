//! 3×3 matrices over a composition algebra and the Albert-type Jordan
//! algebra of Hermitian ones.
//!
//! Matrix products are taken entrywise exactly as written, left entry times
//! right entry, with no reassociation.

use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgElem, Algebra, AlgebraError};
use crate::linalg::SparseMat;
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JordanError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("matrix is not Hermitian at entry ({0}, {1})")]
    NotHermitian(usize, usize),
    #[error("expected {expected} coordinates, got {got}")]
    BadCoordinates { expected: usize, got: usize },
    #[error("expected 9 entries, got {0}")]
    BadEntryCount(usize),
}

/// Off-diagonal positions in coordinate order: (2,3), (1,3), (1,2), 0-based.
/// Row and column of a matrix entry.
pub type Pos = (usize, usize);

pub const OFF_DIAGONAL: [(usize, usize); 3] = [(1, 2), (0, 2), (0, 1)];

/// General 3×3 matrix over ℝ, ℂ, ℍ or 𝕆, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat3 {
    alg: Algebra,
    e: Vec<AlgElem>,
}

impl Mat3 {
    pub fn zero(alg: Algebra) -> Self {
        Mat3 {
            alg,
            e: vec![AlgElem::zero(alg); 9],
        }
    }

    pub fn identity(alg: Algebra) -> Self {
        let mut m = Self::zero(alg);
        for i in 0..3 {
            m.e[i * 4] = AlgElem::one(alg);
        }
        m
    }

    pub fn from_entries(alg: Algebra, entries: Vec<AlgElem>) -> Result<Self, JordanError> {
        if entries.len() != 9 {
            return Err(JordanError::BadEntryCount(entries.len()));
        }
        if let Some(bad) = entries.iter().find(|x| x.algebra() != alg) {
            return Err(AlgebraError::Mismatch(alg, bad.algebra()).into());
        }
        Ok(Mat3 { alg, e: entries })
    }

    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    pub fn get(&self, i: usize, j: usize) -> &AlgElem {
        &self.e[i * 3 + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: AlgElem) {
        assert_eq!(x.algebra(), self.alg);
        self.e[i * 3 + j] = x;
    }

    pub fn entries(&self) -> &[AlgElem] {
        &self.e
    }

    fn check(&self, other: &Mat3) -> Result<(), AlgebraError> {
        if self.alg != other.alg {
            return Err(AlgebraError::Mismatch(self.alg, other.alg));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Mat3) -> Result<Mat3, AlgebraError> {
        self.check(other)?;
        let mut out = Mat3::zero(self.alg);
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = AlgElem::zero(self.alg);
                for m in 0..3 {
                    let (a, b) = (self.get(i, m), other.get(m, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc + a * b;
                }
                out.e[i * 3 + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Mat3) -> Result<Mat3, AlgebraError> {
        self.check(other)?;
        Ok(Mat3 {
            alg: self.alg,
            e: self.e.iter().zip(&other.e).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Mat3) -> Result<Mat3, AlgebraError> {
        self.check(other)?;
        Ok(Mat3 {
            alg: self.alg,
            e: self.e.iter().zip(&other.e).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, r: &Rational) -> Mat3 {
        Mat3 {
            alg: self.alg,
            e: self.e.iter().map(|x| x.scale(r)).collect(),
        }
    }

    pub fn neg(&self) -> Mat3 {
        self.scale(&Rational::from_int(-1))
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Mat3 {
        let mut out = Mat3::zero(self.alg);
        for i in 0..3 {
            for j in 0..3 {
                out.e[i * 3 + j] = self.get(j, i).conj();
            }
        }
        out
    }

    /// Algebra-valued trace.
    pub fn trace(&self) -> AlgElem {
        self.get(0, 0) + self.get(1, 1) + self.get(2, 2)
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(AlgElem::is_zero)
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.dagger()
    }

    pub fn is_anti_hermitian(&self) -> bool {
        *self == self.dagger().neg()
    }

    /// True when every entry of `self` commutes with every entry of `other`;
    /// otherwise reports the first offending pair of positions.
    pub fn commuting_entries(&self, other: &Mat3) -> Result<(), (Pos, Pos)> {
        for (i, x) in self.e.iter().enumerate() {
            for (j, y) in other.e.iter().enumerate() {
                if x.is_real() || y.is_real() {
                    continue;
                }
                if !(x * y - y * x).is_zero() {
                    return Err(((i / 3, i % 3), (j / 3, j % 3)));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Mat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..3 {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..3 {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// A 3×3 Hermitian matrix: an element of H₃(𝕂).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HermMat(Mat3);

impl fmt::Debug for HermMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Herm{:?}", self.0)
    }
}

/// Real dimension `3 + 3k` of H₃(𝕂).
pub fn herm_dim(alg: Algebra) -> usize {
    3 + 3 * alg.dim()
}

impl HermMat {
    pub fn from_mat3(m: Mat3) -> Result<Self, JordanError> {
        for i in 0..3 {
            for j in i..3 {
                if *m.get(i, j) != m.get(j, i).conj() {
                    return Err(JordanError::NotHermitian(i, j));
                }
            }
        }
        Ok(HermMat(m))
    }

    /// `diag` on the diagonal, `off` at positions (2,3), (1,3), (1,2) with the
    /// conjugates mirrored below.
    pub fn from_parts(alg: Algebra, diag: [Rational; 3], off: [AlgElem; 3]) -> Self {
        let mut m = Mat3::zero(alg);
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, AlgElem::real(alg, d));
        }
        for ((i, j), x) in OFF_DIAGONAL.into_iter().zip(off) {
            m.set(j, i, x.conj());
            m.set(i, j, x);
        }
        HermMat(m)
    }

    pub fn zero(alg: Algebra) -> Self {
        HermMat(Mat3::zero(alg))
    }

    pub fn identity(alg: Algebra) -> Self {
        HermMat(Mat3::identity(alg))
    }

    pub fn diag(alg: Algebra, d: [Rational; 3]) -> Self {
        Self::from_parts(alg, d, [AlgElem::zero(alg), AlgElem::zero(alg), AlgElem::zero(alg)])
    }

    pub fn algebra(&self) -> Algebra {
        self.0.alg
    }

    pub fn as_mat3(&self) -> &Mat3 {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> &AlgElem {
        self.0.get(i, j)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.0.e.iter().all(AlgElem::is_real)
    }

    /// Coordinates in the fixed basis: E₁₁, E₂₂, E₃₃, then positions
    /// (2,3), (1,3), (1,2) each expanded over the units.
    pub fn coords(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(herm_dim(self.algebra()));
        for i in 0..3 {
            out.push(self.get(i, i).re());
        }
        for (i, j) in OFF_DIAGONAL {
            out.extend(self.get(i, j).coeffs().iter().cloned());
        }
        out
    }

    pub fn from_coords(alg: Algebra, c: &[Rational]) -> Result<Self, JordanError> {
        let n = herm_dim(alg);
        if c.len() != n {
            return Err(JordanError::BadCoordinates { expected: n, got: c.len() });
        }
        let k = alg.dim();
        let off = |p: usize| AlgElem::new(alg, c[3 + p * k..3 + (p + 1) * k].to_vec()).expect("length");
        Ok(Self::from_parts(
            alg,
            [c[0].clone(), c[1].clone(), c[2].clone()],
            [off(0), off(1), off(2)],
        ))
    }

    /// The coordinate basis, in coordinate order.
    pub fn basis(alg: Algebra) -> Vec<HermMat> {
        let n = herm_dim(alg);
        (0..n)
            .map(|i| {
                let mut c = vec![Rational::ZERO; n];
                c[i] = Rational::ONE;
                Self::from_coords(alg, &c).expect("length")
            })
            .collect()
    }

    /// Value of the trace form `tr(E∘E)` on each basis element: 1 on the
    /// diagonal units, 2 on the off-diagonal ones.
    pub fn gram_diagonal(alg: Algebra) -> Vec<Rational> {
        let n = herm_dim(alg);
        (0..n)
            .map(|i| if i < 3 { Rational::ONE } else { Rational::from_int(2) })
            .collect()
    }

    pub fn add(&self, other: &HermMat) -> Result<HermMat, JordanError> {
        Ok(HermMat(self.0.add(&other.0)?))
    }

    pub fn sub(&self, other: &HermMat) -> Result<HermMat, JordanError> {
        Ok(HermMat(self.0.sub(&other.0)?))
    }

    pub fn scale(&self, r: &Rational) -> HermMat {
        HermMat(self.0.scale(r))
    }

    pub fn trace(&self) -> Rational {
        (0..3).map(|i| self.get(i, i).re()).sum()
    }

    /// `½(XY + YX)`.
    pub fn jordan(&self, other: &HermMat) -> Result<HermMat, JordanError> {
        let xy = self.0.mul(&other.0)?;
        let yx = other.0.mul(&self.0)?;
        let m = xy.add(&yx)?.scale(&Rational::new(1, 2));
        let h = HermMat::from_mat3(m);
        assert!(h.is_ok(), "Jordan product left H3");
        h
    }

    /// `X∘Y − ½((trX)Y + (trY)X) + ½((trX)(trY) − tr(X∘Y))·I`.
    pub fn freudenthal(&self, other: &HermMat) -> Result<HermMat, JordanError> {
        let half = Rational::new(1, 2);
        let j = self.jordan(other)?;
        let (tx, ty) = (self.trace(), other.trace());
        let mixed = other.scale(&tx).add(&self.scale(&ty))?.scale(&half);
        let s = (&(&tx * &ty) - &j.trace()) * &half;
        let out = j.sub(&mixed)?.add(&HermMat::identity(self.algebra()).scale(&s))?;
        assert!(out.0.is_hermitian(), "Freudenthal product left H3");
        Ok(out)
    }

    /// `⅓ tr((X∗X)∘X)`.
    pub fn det(&self) -> Rational {
        let sharp = self.freudenthal(self).expect("same algebra");
        sharp.jordan(self).expect("same algebra").trace() * Rational::new(1, 3)
    }

    /// `tr(X∘Y)`.
    pub fn trace_form(&self, other: &HermMat) -> Result<Rational, JordanError> {
        Ok(self.jordan(other)?.trace())
    }
}

/// `⟨X,Y⟩Z = Y∘(X∘Z) − X∘(Y∘Z) − (X∘Y)∘Z + ⅓ tr(X∘Y) Z`.
pub fn angle_apply(x: &HermMat, y: &HermMat, z: &HermMat) -> Result<HermMat, JordanError> {
    let xy = x.jordan(y)?;
    let t1 = y.jordan(&x.jordan(z)?)?;
    let t2 = x.jordan(&y.jordan(z)?)?;
    let t3 = xy.jordan(z)?;
    let t4 = z.scale(&(xy.trace() * Rational::new(1, 3)));
    t1.sub(&t2)?.sub(&t3)?.add(&t4)
}

/// The operator `Z ↦ ⟨X,Y⟩Z` as a matrix on H₃ coordinates.
pub fn angle_operator(x: &HermMat, y: &HermMat) -> Result<SparseMat, JordanError> {
    let alg = x.algebra();
    if y.algebra() != alg {
        return Err(AlgebraError::Mismatch(alg, y.algebra()).into());
    }
    let cols = HermMat::basis(alg)
        .iter()
        .map(|z| angle_apply(x, y, z).map(|w| w.coords()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SparseMat::from_columns(herm_dim(alg), &cols))
}

/// Matrix of a linear map on H₃ given as a closure, in the coordinate basis.
pub fn operator_matrix<F>(alg: Algebra, f: F) -> Result<SparseMat, JordanError>
where
    F: Fn(&HermMat) -> Result<HermMat, JordanError>,
{
    let cols = HermMat::basis(alg)
        .iter()
        .map(|z| f(z).map(|w| w.coords()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SparseMat::from_columns(herm_dim(alg), &cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Sampler;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn dimensions() {
        let dims: Vec<usize> = Algebra::ALL.iter().map(|a| herm_dim(*a)).collect();
        assert_eq!(dims, vec![6, 9, 15, 27]);
    }

    #[test]
    fn coords_round_trip() {
        let mut s = Sampler::new(3);
        for alg in Algebra::ALL {
            let x = s.herm_mat(alg);
            assert_eq!(HermMat::from_coords(alg, &x.coords()).unwrap(), x);
        }
        assert!(matches!(
            HermMat::from_coords(Algebra::Real, &[Rational::ONE]),
            Err(JordanError::BadCoordinates { expected: 6, got: 1 })
        ));
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = Mat3::zero(Algebra::Complex);
        m.set(0, 1, AlgElem::unit(Algebra::Complex, 1));
        assert_eq!(HermMat::from_mat3(m).unwrap_err(), JordanError::NotHermitian(0, 1));
    }

    #[test]
    fn identity_is_jordan_unit() {
        let mut s = Sampler::new(4);
        for alg in Algebra::ALL {
            let x = s.herm_mat(alg);
            assert_eq!(HermMat::identity(alg).jordan(&x).unwrap(), x);
        }
    }

    #[test]
    fn diagonal_products() {
        let a = HermMat::diag(Algebra::Octonion, [q(1, 1), q(2, 1), q(-1, 3)]);
        let b = HermMat::diag(Algebra::Octonion, [q(5, 1), q(1, 2), q(3, 1)]);
        let expect = HermMat::diag(Algebra::Octonion, [q(5, 1), q(1, 1), q(-1, 1)]);
        assert_eq!(a.jordan(&b).unwrap(), expect);
        assert_eq!(a.det(), q(-2, 3));
    }

    #[test]
    fn freudenthal_small_cases() {
        let alg = Algebra::Quaternion;
        let i = HermMat::identity(alg);
        assert_eq!(i.freudenthal(&i).unwrap(), i);
        let e11 = HermMat::diag(alg, [q(1, 1), q(0, 1), q(0, 1)]);
        assert!(e11.freudenthal(&e11).unwrap().is_zero());
        assert_eq!(i.trace(), q(3, 1));
        assert_eq!(i.det(), q(1, 1));
    }

    fn naive_product(x: &Mat3, y: &Mat3) -> Mat3 {
        let alg = x.algebra();
        let mut out = Mat3::zero(alg);
        for i in 0..3 {
            for j in 0..3 {
                let s = (0..3).fold(AlgElem::zero(alg), |acc, m| {
                    &acc + &x.get(i, m).cd_mul(y.get(m, j)).unwrap()
                });
                out.set(i, j, s);
            }
        }
        out
    }

    #[test]
    fn jordan_matches_direct_expansion_on_octonions() {
        let mut s = Sampler::new(99);
        for _ in 0..10 {
            let x = s.herm_mat(Algebra::Octonion);
            let y = s.herm_mat(Algebra::Octonion);
            let direct = naive_product(x.as_mat3(), y.as_mat3())
                .add(&naive_product(y.as_mat3(), x.as_mat3()))
                .unwrap()
                .scale(&q(1, 2));
            assert_eq!(x.jordan(&y).unwrap().as_mat3(), &direct);
        }
    }

    #[test]
    fn products_are_commutative() {
        let mut s = Sampler::new(12);
        for alg in Algebra::ALL {
            for _ in 0..5 {
                let (x, y) = (s.herm_mat(alg), s.herm_mat(alg));
                assert_eq!(x.jordan(&y).unwrap(), y.jordan(&x).unwrap());
                assert_eq!(x.freudenthal(&y).unwrap(), y.freudenthal(&x).unwrap());
            }
        }
    }

    #[test]
    fn trace_of_freudenthal_product() {
        let mut s = Sampler::new(13);
        for _ in 0..20 {
            let (x, y) = (s.herm_mat(Algebra::Real), s.herm_mat(Algebra::Real));
            // tr(XY) over real symmetric matrices, computed from entries.
            let trxy: Rational = (0..3)
                .flat_map(|i| (0..3).map(move |j| (i, j)))
                .map(|(i, j)| x.get(i, j).re() * y.get(j, i).re())
                .sum();
            let expect = (x.trace() * y.trace() - trxy) * q(1, 2);
            assert_eq!(x.freudenthal(&y).unwrap().trace(), expect);
        }
    }

    #[test]
    fn det_matches_classical_determinant_over_reals() {
        let mut s = Sampler::new(14);
        for _ in 0..100 {
            let x = s.herm_mat(Algebra::Real);
            let a = |i: usize, j: usize| x.get(i, j).re();
            let classical = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
                - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
                + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
            assert_eq!(x.det(), classical);
        }
    }

    #[test]
    fn angle_operator_basics() {
        let mut s = Sampler::new(15);
        for alg in Algebra::ALL {
            let x = s.herm_mat(alg);
            let y = s.herm_mat(alg);
            let i = HermMat::identity(alg);
            assert!(angle_operator(&i, &i).unwrap().is_zero());
            // ⟨X,X⟩ and ⟨I,Y⟩ reduce to tracefree multiplication operators.
            let x2 = x.jordan(&x).unwrap();
            let z = s.herm_mat(alg);
            let lhs = angle_apply(&x, &x, &z).unwrap();
            let rhs = z.scale(&(x2.trace() * q(1, 3))).sub(&x2.jordan(&z).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            let lhs = angle_apply(&i, &y, &z).unwrap();
            let rhs = z.scale(&(y.trace() * q(1, 3))).sub(&y.jordan(&z).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
        for _ in 0..20 {
            let x = s.herm_mat(Algebra::Octonion);
            let y = s.herm_mat(Algebra::Octonion);
            assert!(angle_operator(&x, &y).unwrap().trace().is_zero());
        }
    }

    #[test]
    fn jordan_freudenthal_identity_on_octonionic_triples() {
        let mut s = Sampler::new(16);
        let alg = Algebra::Octonion;
        for _ in 0..100 {
            let (a, b, x) = (s.herm_mat(alg), s.herm_mat(alg), s.herm_mat(alg));
            let lhs = a.jordan(&b).unwrap().freudenthal(&x).unwrap().scale(&q(-1, 1));
            let shifted = b.sub(&HermMat::identity(alg).scale(&b.trace())).unwrap();
            let rhs = shifted
                .jordan(&a.freudenthal(&x).unwrap())
                .unwrap()
                .add(&a.freudenthal(&b.jordan(&x).unwrap()).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

//! The conformal (Freudenthal) description of e₇.
//!
//! e₇ = e₆ ⊕ translations ⊕ conformal translations ⊕ dilation, acting on
//! quadruples `P = (X, Y, p, q)`. Elements `Θ = (φ, ρ, A, B)` carry their
//! e₆ part as a pair of operators (the action on `X` and the dual action on
//! `Y`) so that derived e₆ elements without a matrix form are first-class.

use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgElem, Algebra, AlgebraError};
use crate::jordan::{angle_operator, herm_dim, operator_matrix, HermMat, JordanError, Mat3, OFF_DIAGONAL};
use crate::linalg::{close_under_bracket, Closure, Echelon, LinalgError, SparseMat};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConformalError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Jordan(#[from] JordanError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("e6 element has no 3x3 matrix form")]
    NoMatrixForm,
    #[error("e6 matrix must be tracefree, trace is {0}")]
    NotTracefree(String),
    #[error("expected {expected} coordinates, got {got}")]
    BadCoordinates { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum E6Kind {
    /// Tracefree Hermitian matrix.
    Boost,
    /// Tracefree anti-Hermitian matrix.
    Rotation,
    /// Any other tracefree matrix (a linear combination of the above).
    Matrix,
    /// Produced by brackets or operator formulas; no matrix form attached.
    Derived,
}

/// An element of e₆ acting on H₃(𝕂): the action `act` and the dual action
/// `dual`, defined by `tr(φ(X)∘Y) = −tr(X∘φ′(Y))`.
#[derive(Clone, PartialEq, Eq)]
pub struct E6Op {
    alg: Algebra,
    pub act: SparseMat,
    pub dual: SparseMat,
    pub kind: E6Kind,
    pub matrix: Option<Mat3>,
}

impl fmt::Debug for E6Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("E6Op")
            .field("alg", &self.alg)
            .field("kind", &self.kind)
            .field("matrix", &self.matrix)
            .field("nnz", &self.act.nnz())
            .finish()
    }
}

/// `X ↦ φX + Xφ†` as a matrix on H₃ coordinates.
pub fn matrix_action(phi: &Mat3) -> Result<SparseMat, ConformalError> {
    let alg = phi.algebra();
    let dag = phi.dagger();
    Ok(operator_matrix(alg, |x| {
        let m = phi.mul(x.as_mat3())?.add(&x.as_mat3().mul(&dag)?)?;
        HermMat::from_mat3(m)
    })?)
}

/// Dual operator `−G⁻¹ Aᵀ G` with respect to the trace form, where `G` is
/// the (diagonal) Gram matrix of the H₃ coordinate basis.
pub fn dual_operator(alg: Algebra, act: &SparseMat) -> SparseMat {
    let g = HermMat::gram_diagonal(alg);
    let t = act.transpose();
    let n = herm_dim(alg);
    let mut dense = vec![Rational::ZERO; n * n];
    for i in 0..n {
        for (j, x) in t.row(i) {
            dense[i * n + j] = -(x * &g[*j] / &g[i]);
        }
    }
    SparseMat::from_dense(n, n, &dense)
}

impl E6Op {
    pub fn zero(alg: Algebra) -> Self {
        let n = herm_dim(alg);
        E6Op {
            alg,
            act: SparseMat::zeros(n, n),
            dual: SparseMat::zeros(n, n),
            kind: E6Kind::Matrix,
            matrix: Some(Mat3::zero(alg)),
        }
    }

    /// From a tracefree 3×3 matrix φ: act is `X ↦ φX + Xφ†`, dual is the
    /// same construction applied to `φ′ = −φ†`.
    pub fn from_matrix(phi: &Mat3) -> Result<Self, ConformalError> {
        let tr = phi.trace();
        if !tr.is_zero() {
            return Err(ConformalError::NotTracefree(tr.to_string()));
        }
        let kind = if phi.is_hermitian() {
            E6Kind::Boost
        } else if phi.is_anti_hermitian() {
            E6Kind::Rotation
        } else {
            E6Kind::Matrix
        };
        Ok(E6Op {
            alg: phi.algebra(),
            act: matrix_action(phi)?,
            dual: matrix_action(&phi.dagger().neg())?,
            kind,
            matrix: Some(phi.clone()),
        })
    }

    /// From an operator on H₃, with the dual computed from the trace form.
    pub fn from_operator(alg: Algebra, act: SparseMat) -> Self {
        let dual = dual_operator(alg, &act);
        E6Op {
            alg,
            act,
            dual,
            kind: E6Kind::Derived,
            matrix: None,
        }
    }

    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    pub fn is_zero(&self) -> bool {
        self.act.is_zero() && self.dual.is_zero()
    }

    pub fn apply(&self, x: &HermMat) -> HermMat {
        HermMat::from_coords(self.alg, &self.act.apply(&x.coords())).expect("operator preserves shape")
    }

    pub fn apply_dual(&self, y: &HermMat) -> HermMat {
        HermMat::from_coords(self.alg, &self.dual.apply(&y.coords())).expect("operator preserves shape")
    }

    /// `diag(act, dual)`: brackets act blockwise on this representation.
    pub fn paired(&self) -> SparseMat {
        self.act.block_diag(&self.dual)
    }

    pub fn from_paired(alg: Algebra, m: &SparseMat) -> Self {
        let n = herm_dim(alg);
        E6Op {
            alg,
            act: m.sub_block(0, n),
            dual: m.sub_block(n, n),
            kind: E6Kind::Derived,
            matrix: None,
        }
    }

    pub fn bracket(&self, other: &E6Op) -> Result<E6Op, ConformalError> {
        Ok(E6Op {
            alg: self.alg,
            act: self.act.commutator(&other.act)?,
            dual: self.dual.commutator(&other.dual)?,
            kind: E6Kind::Derived,
            matrix: None,
        })
    }

    /// 3×3 matrix form of φ, or `φ′ = −φ†` for the dual block.
    pub fn matrix_form(&self) -> Result<&Mat3, ConformalError> {
        self.matrix.as_ref().ok_or(ConformalError::NoMatrixForm)
    }

    /// Attaches a matrix form when `act` lies in the span of the matrix
    /// generators' actions.
    pub fn with_recovered_matrix(mut self, gens: &E6Generators) -> Result<Self, ConformalError> {
        if self.matrix.is_some() {
            return Ok(self);
        }
        if let Some(coords) = gens.span.coordinates(&self.act.flatten())? {
            let mut m = Mat3::zero(self.alg);
            for (c, g) in coords.iter().zip(&gens.ops) {
                if !c.is_zero() {
                    m = m.add(&g.matrix_form()?.scale(c))?;
                }
            }
            self.matrix = Some(m);
            self.kind = E6Kind::Matrix;
        }
        Ok(self)
    }
}

/// The boost and rotation generators of e₆ together with a span index over
/// their actions.
#[derive(Clone, Debug)]
pub struct E6Generators {
    pub ops: Vec<E6Op>,
    pub labels: Vec<String>,
    pub boosts: usize,
    span: Echelon,
}

fn unit_label(u: usize) -> String {
    if u == 0 {
        "1".to_string()
    } else {
        format!("e{u}")
    }
}

/// `3k+2` boosts (tracefree Hermitian) followed by `5k−2` rotations
/// (tracefree anti-Hermitian), each as an [`E6Op`] of matrix kind.
pub fn e6_generator_basis(alg: Algebra) -> E6Generators {
    let k = alg.dim();
    let one = AlgElem::one(alg);
    let mut mats: Vec<(Mat3, String)> = Vec::new();

    for (a, b) in [(0usize, 1usize), (1, 2)] {
        let mut m = Mat3::zero(alg);
        m.set(a, a, one.clone());
        m.set(b, b, -&one);
        mats.push((m, format!("boost diag E{}{} - E{}{}", a + 1, a + 1, b + 1, b + 1)));
    }
    for (i, j) in OFF_DIAGONAL {
        for u in 0..k {
            let e = AlgElem::unit(alg, u);
            let mut m = Mat3::zero(alg);
            m.set(j, i, e.conj());
            m.set(i, j, e);
            mats.push((m, format!("boost ({},{}) {}", i + 1, j + 1, unit_label(u))));
        }
    }
    let boosts = mats.len();
    for (i, j) in OFF_DIAGONAL {
        for u in 0..k {
            let e = AlgElem::unit(alg, u);
            let mut m = Mat3::zero(alg);
            m.set(j, i, -e.conj());
            m.set(i, j, e);
            mats.push((m, format!("rotation ({},{}) {}", i + 1, j + 1, unit_label(u))));
        }
    }
    for u in 1..k {
        let e = AlgElem::unit(alg, u);
        for (a, b) in [(0usize, 1usize), (1, 2)] {
            let mut m = Mat3::zero(alg);
            m.set(a, a, e.clone());
            m.set(b, b, -&e);
            mats.push((m, format!("rotation diag {} (E{}{} - E{}{})", unit_label(u), a + 1, a + 1, b + 1, b + 1)));
        }
    }

    let n = herm_dim(alg);
    let mut span = Echelon::new(n * n);
    let mut ops = Vec::with_capacity(mats.len());
    let mut labels = Vec::with_capacity(mats.len());
    for (m, label) in mats {
        let op = E6Op::from_matrix(&m).expect("generators are tracefree");
        let fresh = span.insert(&op.act.flatten()).expect("shape");
        assert!(fresh, "e6 generators are linearly independent");
        ops.push(op);
        labels.push(label);
    }
    E6Generators {
        ops,
        labels,
        boosts,
        span,
    }
}

/// Bracket closure of the e₆ generators, carrying act and dual together.
#[derive(Clone, Debug)]
pub struct E6Closure {
    /// Generators first, then derived elements in discovery order.
    pub ops: Vec<E6Op>,
    pub labels: Vec<String>,
    pub generators: usize,
    pub closure: Closure,
}

impl E6Closure {
    pub fn dim(&self) -> usize {
        self.ops.len()
    }

    pub fn derived(&self) -> usize {
        self.ops.len() - self.generators
    }
}

pub fn e6_closure(alg: Algebra) -> Result<E6Closure, ConformalError> {
    let gens = e6_generator_basis(alg);
    let paired: Vec<SparseMat> = gens.ops.iter().map(E6Op::paired).collect();
    let closure = close_under_bracket(&paired)?;
    assert_eq!(closure.from_generators, gens.ops.len());
    let mut ops = gens.ops.clone();
    let mut labels = gens.labels.clone();
    for (i, m) in closure.basis.iter().enumerate().skip(gens.ops.len()) {
        ops.push(E6Op::from_paired(alg, m));
        labels.push(format!("derived #{}", i - gens.ops.len()));
    }
    Ok(E6Closure {
        ops,
        labels,
        generators: gens.ops.len(),
        closure,
    })
}

/// `Θ = (φ, ρ, A, B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E7Elem {
    pub phi: E6Op,
    pub rho: Rational,
    pub a: HermMat,
    pub b: HermMat,
}

impl E7Elem {
    pub fn zero(alg: Algebra) -> Self {
        E7Elem {
            phi: E6Op::zero(alg),
            rho: Rational::ZERO,
            a: HermMat::zero(alg),
            b: HermMat::zero(alg),
        }
    }

    pub fn from_phi(phi: E6Op) -> Self {
        let alg = phi.algebra();
        E7Elem {
            phi,
            ..Self::zero(alg)
        }
    }

    pub fn dilation(alg: Algebra, rho: Rational) -> Self {
        E7Elem {
            rho,
            ..Self::zero(alg)
        }
    }

    pub fn translation(a: HermMat) -> Self {
        let alg = a.algebra();
        E7Elem { a, ..Self::zero(alg) }
    }

    pub fn conformal_translation(b: HermMat) -> Self {
        let alg = b.algebra();
        E7Elem { b, ..Self::zero(alg) }
    }

    pub fn algebra(&self) -> Algebra {
        self.a.algebra()
    }

    pub fn has_matrix_form(&self) -> bool {
        self.phi.matrix.is_some()
    }

    pub fn is_zero(&self) -> bool {
        self.phi.is_zero() && self.rho.is_zero() && self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, other: &E7Elem) -> Result<E7Elem, ConformalError> {
        let matrix = match (&self.phi.matrix, &other.phi.matrix) {
            (Some(x), Some(y)) => Some(x.add(y)?),
            _ => None,
        };
        Ok(E7Elem {
            phi: E6Op {
                alg: self.phi.alg,
                act: self.phi.act.add(&other.phi.act)?,
                dual: self.phi.dual.add(&other.phi.dual)?,
                kind: if matrix.is_some() { E6Kind::Matrix } else { E6Kind::Derived },
                matrix,
            },
            rho: &self.rho + &other.rho,
            a: self.a.add(&other.a)?,
            b: self.b.add(&other.b)?,
        })
    }

    /// 6×6 block form `[[φ − ⅓ρI, A], [B, φ′ + ⅓ρI]]` with `φ′ = −φ†`.
    pub fn block_form(&self) -> Result<Mat6, ConformalError> {
        let alg = self.algebra();
        let phi = self.phi.matrix_form()?;
        let third = &self.rho * &Rational::new(1, 3);
        let id = Mat3::identity(alg);
        let tl = phi.sub(&id.scale(&third))?;
        let br = phi.dagger().neg().add(&id.scale(&third))?;
        Ok(Mat6::from_blocks(&tl, self.a.as_mat3(), self.b.as_mat3(), &br))
    }
}

/// 6×6 matrix over 𝕂, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat6 {
    alg: Algebra,
    e: Vec<AlgElem>,
}

impl fmt::Debug for Mat6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..6 {
            let row: Vec<String> = (0..6).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Mat6 {
    pub fn zero(alg: Algebra) -> Self {
        Mat6 {
            alg,
            e: vec![AlgElem::zero(alg); 36],
        }
    }

    pub fn from_blocks(tl: &Mat3, tr: &Mat3, bl: &Mat3, br: &Mat3) -> Self {
        let mut m = Self::zero(tl.algebra());
        for i in 0..3 {
            for j in 0..3 {
                m.e[i * 6 + j] = tl.get(i, j).clone();
                m.e[i * 6 + j + 3] = tr.get(i, j).clone();
                m.e[(i + 3) * 6 + j] = bl.get(i, j).clone();
                m.e[(i + 3) * 6 + j + 3] = br.get(i, j).clone();
            }
        }
        m
    }

    pub fn from_entries(alg: Algebra, e: Vec<AlgElem>) -> Self {
        assert_eq!(e.len(), 36);
        Mat6 { alg, e }
    }

    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    pub fn get(&self, i: usize, j: usize) -> &AlgElem {
        &self.e[i * 6 + j]
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(AlgElem::is_zero)
    }

    pub fn mul(&self, other: &Mat6) -> Mat6 {
        let mut out = Mat6::zero(self.alg);
        for i in 0..6 {
            for j in 0..6 {
                let mut acc = AlgElem::zero(self.alg);
                for m in 0..6 {
                    let (a, b) = (self.get(i, m), other.get(m, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a * b;
                    }
                }
                out.e[i * 6 + j] = acc;
            }
        }
        out
    }

    pub fn add(&self, other: &Mat6) -> Mat6 {
        Mat6 {
            alg: self.alg,
            e: self.e.iter().zip(&other.e).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Mat6) -> Mat6 {
        Mat6 {
            alg: self.alg,
            e: self.e.iter().zip(&other.e).map(|(a, b)| a - b).collect(),
        }
    }

    /// Left scalar multiple by an algebra element.
    pub fn scale_left(&self, c: &AlgElem) -> Mat6 {
        Mat6 {
            alg: self.alg,
            e: self.e.iter().map(|x| c * x).collect(),
        }
    }

    pub fn dagger(&self) -> Mat6 {
        let mut out = Mat6::zero(self.alg);
        for i in 0..6 {
            for j in 0..6 {
                out.e[i * 6 + j] = self.get(j, i).conj();
            }
        }
        out
    }

    /// `Ω = [[0, I], [−I, 0]]`.
    pub fn omega(alg: Algebra) -> Mat6 {
        let z = Mat3::zero(alg);
        let id = Mat3::identity(alg);
        Mat6::from_blocks(&z, &id, &id.neg(), &z)
    }

    /// `ΘΩ + ΩΘ†`, which vanishes exactly on the symplectic algebra.
    pub fn symplectic_defect(&self) -> Mat6 {
        let omega = Mat6::omega(self.alg);
        self.mul(&omega).add(&omega.mul(&self.dagger()))
    }
}

/// `P = (X, Y, p, q)`, an element of the minimal representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreudVec {
    pub x: HermMat,
    pub y: HermMat,
    pub p: Rational,
    pub q: Rational,
}

/// Real dimension `6k + 8` of the minimal representation.
pub fn freud_dim(alg: Algebra) -> usize {
    6 * alg.dim() + 8
}

impl FreudVec {
    pub fn new(x: HermMat, y: HermMat, p: Rational, q: Rational) -> Result<Self, ConformalError> {
        if x.algebra() != y.algebra() {
            return Err(AlgebraError::Mismatch(x.algebra(), y.algebra()).into());
        }
        Ok(FreudVec { x, y, p, q })
    }

    pub fn zero(alg: Algebra) -> Self {
        FreudVec {
            x: HermMat::zero(alg),
            y: HermMat::zero(alg),
            p: Rational::ZERO,
            q: Rational::ZERO,
        }
    }

    pub fn algebra(&self) -> Algebra {
        self.x.algebra()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.p.is_zero() && self.q.is_zero()
    }

    /// X coordinates, then Y coordinates, then p, then q.
    pub fn coords(&self) -> Vec<Rational> {
        let mut c = self.x.coords();
        c.extend(self.y.coords());
        c.push(self.p.clone());
        c.push(self.q.clone());
        c
    }

    pub fn from_coords(alg: Algebra, c: &[Rational]) -> Result<Self, ConformalError> {
        let n = herm_dim(alg);
        if c.len() != 2 * n + 2 {
            return Err(ConformalError::BadCoordinates {
                expected: 2 * n + 2,
                got: c.len(),
            });
        }
        Ok(FreudVec {
            x: HermMat::from_coords(alg, &c[..n])?,
            y: HermMat::from_coords(alg, &c[n..2 * n])?,
            p: c[2 * n].clone(),
            q: c[2 * n + 1].clone(),
        })
    }

    pub fn basis(alg: Algebra) -> Vec<FreudVec> {
        let d = freud_dim(alg);
        (0..d)
            .map(|i| {
                let mut c = vec![Rational::ZERO; d];
                c[i] = Rational::ONE;
                Self::from_coords(alg, &c).expect("length")
            })
            .collect()
    }

    pub fn add(&self, other: &FreudVec) -> Result<FreudVec, ConformalError> {
        Ok(FreudVec {
            x: self.x.add(&other.x)?,
            y: self.y.add(&other.y)?,
            p: &self.p + &other.p,
            q: &self.q + &other.q,
        })
    }

    pub fn scale(&self, r: &Rational) -> FreudVec {
        FreudVec {
            x: self.x.scale(r),
            y: self.y.scale(r),
            p: &self.p * r,
            q: &self.q * r,
        }
    }
}

fn check_same(a: Algebra, b: Algebra) -> Result<(), ConformalError> {
    if a != b {
        return Err(AlgebraError::Mismatch(a, b).into());
    }
    Ok(())
}

/// Freudenthal's action of `Θ = (φ, ρ, A, B)` on `P = (X, Y, p, q)`:
///
/// ```text
/// X ↦ φ(X) + ⅓ρX + 2B∗Y + Aq
/// Y ↦ 2A∗X + φ′(Y) − ⅓ρY + Bp
/// p ↦ tr(A∘Y) − ρp
/// q ↦ tr(B∘X) + ρq
/// ```
pub fn freudenthal_action(theta: &E7Elem, pv: &FreudVec) -> Result<FreudVec, ConformalError> {
    let alg = pv.algebra();
    check_same(theta.algebra(), alg)?;
    let third = &theta.rho * &Rational::new(1, 3);
    let two = Rational::from_int(2);

    let mut x = theta.phi.apply(&pv.x).add(&pv.x.scale(&third))?;
    let mut y = theta.phi.apply_dual(&pv.y).sub(&pv.y.scale(&third))?;
    let mut p = -(&theta.rho * &pv.p);
    let mut q = &theta.rho * &pv.q;

    if !theta.a.is_zero() {
        x = x.add(&theta.a.scale(&pv.q))?;
        y = y.add(&theta.a.freudenthal(&pv.x)?.scale(&two))?;
        p += theta.a.trace_form(&pv.y)?;
    }
    if !theta.b.is_zero() {
        x = x.add(&theta.b.freudenthal(&pv.y)?.scale(&two))?;
        y = y.add(&theta.b.scale(&pv.p))?;
        q += theta.b.trace_form(&pv.x)?;
    }
    Ok(FreudVec { x, y, p, q })
}

/// Linearization of the Freudenthal action on the minimal representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepMatrix {
    pub alg: Algebra,
    pub mat: SparseMat,
}

impl RepMatrix {
    pub fn commutator(&self, other: &RepMatrix) -> Result<RepMatrix, ConformalError> {
        check_same(self.alg, other.alg)?;
        Ok(RepMatrix {
            alg: self.alg,
            mat: self.mat.commutator(&other.mat)?,
        })
    }
}

pub fn matrixize(theta: &E7Elem) -> Result<RepMatrix, ConformalError> {
    let alg = theta.algebra();
    let cols = FreudVec::basis(alg)
        .iter()
        .map(|b| freudenthal_action(theta, b).map(|v| v.coords()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RepMatrix {
        alg,
        mat: SparseMat::from_columns(freud_dim(alg), &cols),
    })
}

/// Matrix commutator `[M(Θ₁), M(Θ₂)]` of the matrixized actions.
pub fn bracket(t1: &E7Elem, t2: &E7Elem) -> Result<RepMatrix, ConformalError> {
    matrixize(t1)?.commutator(&matrixize(t2)?)
}

/// Which family a basis element of e₇ belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum E7Family {
    E6,
    Translation,
    ConformalTranslation,
    Dilation,
}

/// Basis of e₇: e₆ closure basis (generators then derived), the
/// translations `(0,0,Eᵢ,0)`, the conformal translations `(0,0,0,Eᵢ)` and
/// the dilation `(0,1,0,0)`.
#[derive(Clone, Debug)]
pub struct E7Basis {
    pub alg: Algebra,
    pub elems: Vec<E7Elem>,
    pub labels: Vec<String>,
    pub families: Vec<E7Family>,
    pub e6_generators: usize,
    pub e6_dim: usize,
}

/// Expected dimension `8k + dim Der(𝕂) + 2(3+3k) + 1`.
pub fn e7_expected_dim(alg: Algebra) -> usize {
    8 * alg.dim() + alg.derivation_dim() + 2 * herm_dim(alg) + 1
}

pub fn e7_basis(alg: Algebra) -> Result<E7Basis, ConformalError> {
    let e6 = e6_closure(alg)?;
    let mut elems = Vec::new();
    let mut labels = Vec::new();
    let mut families = Vec::new();
    for (op, label) in e6.ops.iter().zip(&e6.labels) {
        elems.push(E7Elem::from_phi(op.clone()));
        labels.push(label.clone());
        families.push(E7Family::E6);
    }
    for (i, e) in HermMat::basis(alg).into_iter().enumerate() {
        elems.push(E7Elem::translation(e));
        labels.push(format!("translation A=basis[{i}]"));
        families.push(E7Family::Translation);
    }
    for (i, e) in HermMat::basis(alg).into_iter().enumerate() {
        elems.push(E7Elem::conformal_translation(e));
        labels.push(format!("conformal translation B=basis[{i}]"));
        families.push(E7Family::ConformalTranslation);
    }
    elems.push(E7Elem::dilation(alg, Rational::ONE));
    labels.push("dilation".to_string());
    families.push(E7Family::Dilation);
    Ok(E7Basis {
        alg,
        elems,
        labels,
        families,
        e6_generators: e6.generators,
        e6_dim: e6.dim(),
    })
}

impl E7Basis {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn matrixized(&self) -> Result<MatrixizedBasis, ConformalError> {
        let mats = self
            .elems
            .iter()
            .map(|t| matrixize(t).map(|r| r.mat))
            .collect::<Result<Vec<_>, _>>()?;
        let d = freud_dim(self.alg);
        let mut echelon = Echelon::new(d * d);
        for m in &mats {
            let fresh = echelon.insert(&m.flatten())?;
            assert!(fresh, "matrixized e7 basis is linearly independent");
        }
        Ok(MatrixizedBasis {
            alg: self.alg,
            mats,
            echelon,
        })
    }
}

/// The matrixized e₇ basis with a span index.
#[derive(Clone, Debug)]
pub struct MatrixizedBasis {
    pub alg: Algebra,
    pub mats: Vec<SparseMat>,
    echelon: Echelon,
}

impl MatrixizedBasis {
    /// Coordinates in the e₇ basis, or `None` when outside the span.
    pub fn coordinates(&self, m: &SparseMat) -> Result<Option<Vec<Rational>>, ConformalError> {
        Ok(self.echelon.coordinates(&m.flatten())?)
    }

    pub fn contains(&self, m: &SparseMat) -> Result<bool, ConformalError> {
        Ok(self.echelon.contains(&m.flatten())?)
    }
}

/// The super-Freudenthal product `P∗P = (⟨X,Y⟩, ρ, A, B)` with
/// `ρ = −¼ tr(X∘Y − pq I)`, `A = −½(Y∗Y − pX)`, `B = ½(X∗X − qY)`.
pub fn super_freudenthal(pv: &FreudVec) -> Result<E7Elem, ConformalError> {
    let alg = pv.algebra();
    let (x, y) = (&pv.x, &pv.y);
    let pq = &pv.p * &pv.q;
    let phi = E6Op::from_operator(alg, angle_operator(x, y)?);
    let shifted = x.jordan(y)?.sub(&HermMat::identity(alg).scale(&pq))?;
    let rho = shifted.trace() * Rational::new(-1, 4);
    let a = y.freudenthal(y)?.sub(&x.scale(&pv.p))?.scale(&Rational::new(-1, 2));
    let b = x.freudenthal(x)?.sub(&y.scale(&pv.q))?.scale(&Rational::new(1, 2));
    Ok(E7Elem { phi, rho, a, b })
}

/// `tr((X∗X)∘(Y∗Y)) − p det X − q det Y − ¼(tr(X∘Y) − pq)²`.
pub fn quartic(pv: &FreudVec) -> Rational {
    let (x, y) = (&pv.x, &pv.y);
    let xs = x.freudenthal(x).expect("same algebra");
    let ys = y.freudenthal(y).expect("same algebra");
    let t = xs.trace_form(&ys).expect("same algebra");
    let s = x.trace_form(y).expect("same algebra") - &pv.p * &pv.q;
    t - &pv.p * &x.det() - &pv.q * &y.det() - &s * &s * Rational::new(1, 4)
}

/// Coefficient of `t` in the quartic polynomial `t ↦ J(P + tV)`, recovered
/// exactly from its values at `t ∈ {0, ±1, ±2}`.
pub fn quartic_linear_coefficient(pv: &FreudVec, dir: &FreudVec) -> Result<Rational, ConformalError> {
    let at = |t: i64| -> Result<Rational, ConformalError> {
        Ok(quartic(&pv.add(&dir.scale(&Rational::from_int(t)))?))
    };
    let (m2, m1, p1, p2) = (at(-2)?, at(-1)?, at(1)?, at(2)?);
    // The t = 0 sample only enters the even coefficients.
    let _ = at(0)?;
    Ok((m2 - m1 * Rational::from_int(8) + p1 * Rational::from_int(8) - p2) * Rational::new(1, 12))
}

/// All five interpolated coefficients `c₀..c₄` of `t ↦ J(P + tV)`.
pub fn quartic_polynomial(pv: &FreudVec, dir: &FreudVec) -> Result<[Rational; 5], ConformalError> {
    let ts = [-2i64, -1, 0, 1, 2];
    let vals = ts
        .iter()
        .map(|t| Ok(quartic(&pv.add(&dir.scale(&Rational::from_int(*t)))?)))
        .collect::<Result<Vec<_>, ConformalError>>()?;
    Ok(interpolate_quartic(&vals))
}

/// Solves the 5×5 Vandermonde system on nodes −2..2 exactly.
fn interpolate_quartic(vals: &[Rational]) -> [Rational; 5] {
    let r = |n: i64, d: i64| Rational::new(n, d);
    let (m2, m1, z, p1, p2) = (&vals[0], &vals[1], &vals[2], &vals[3], &vals[4]);
    let c0 = z.clone();
    let c1 = (m2 - &(m1 * &r(8, 1)) + &(p1 * &r(8, 1)) - p2) * r(1, 12);
    let c2 = (-(m2.clone()) + &(m1 * &r(16, 1)) - &(z * &r(30, 1)) + &(p1 * &r(16, 1)) - p2) * r(1, 24);
    let c3 = (-(m2.clone()) + &(m1 * &r(2, 1)) - &(p1 * &r(2, 1)) + p2) * r(1, 12);
    let c4 = (m2 - &(m1 * &r(4, 1)) + &(z * &r(6, 1)) - &(p1 * &r(4, 1)) + p2) * r(1, 24);
    [c0, c1, c2, c3, c4]
}

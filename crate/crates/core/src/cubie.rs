//! Rank-3 antisymmetric tensors: cubies (3×3×3) and cubes (6×6×6).
//!
//! Indices are 0-based throughout; "small" indices are `0..3`, "large"
//! ones `3..6`. A cube assembles `P = (X, Y, p, q)` as `p ε` on cubie 000,
//! `∗X` on 011, `∗Y` on 100 and `q ε` on 111, with total antisymmetry
//! fixing the rest.

use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgElem, Algebra, AlgebraError};
use crate::conformal::{ConformalError, E7Elem, FreudVec, Mat6};
use crate::jordan::{HermMat, JordanError, Mat3};
use crate::linalg::SparseMat;
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CubieError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Jordan(#[from] JordanError),
    #[error(transparent)]
    Conformal(#[from] ConformalError),
    #[error("not antisymmetric at ({a},{b},{c})")]
    NotAntisymmetric { a: usize, b: usize, c: usize },
    #[error("block {block} inconsistent: {detail}")]
    BlockInconsistent { block: &'static str, detail: String },
    #[error("entries X[{}][{}] and Y[{}][{}] do not commute", .x.0, .x.1, .y.0, .y.1)]
    NonCommuting { x: (usize, usize), y: (usize, usize) },
    #[error("expected {expected} coordinates, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("sided action not antisymmetric on cubie {block} at ({a},{b},{c})")]
    SidedInconsistent { block: &'static str, a: usize, b: usize, c: usize },
}

/// Sign of a permutation given as a list of distinct values, or 0 when
/// values repeat.
pub fn perm_sign(idx: &[usize]) -> i8 {
    let n = idx.len();
    let mut sign = 1i8;
    for i in 0..n {
        for j in i + 1..n {
            if idx[i] == idx[j] {
                return 0;
            }
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// `ε_{abc}` (equal to `ε^{abc}`), with `ε₀₁₂ = 1`.
pub fn eps3(a: usize, b: usize, c: usize) -> i8 {
    if a > 2 || b > 2 || c > 2 {
        return 0;
    }
    perm_sign(&[a, b, c])
}

/// `ε^{abcdef}` on six indices with `ε^{012345} = 1`.
pub fn eps6(i: [usize; 6]) -> i8 {
    if i.iter().any(|&x| x > 5) {
        return 0;
    }
    perm_sign(&i)
}

/// All permutations of `v` with their signs, in lexicographic order of the
/// permutation positions.
fn signed_perms(v: &[usize]) -> Vec<(Vec<usize>, i8)> {
    if v.len() <= 1 {
        return vec![(v.to_vec(), 1)];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let head = rest.remove(i);
        let s: i8 = if i % 2 == 0 { 1 } else { -1 };
        for (mut p, ps) in signed_perms(&rest) {
            p.insert(0, head);
            out.push((p, s * ps));
        }
    }
    out
}

const PERMS3: [([usize; 3], i8); 6] = [
    ([0, 1, 2], 1),
    ([1, 2, 0], 1),
    ([2, 0, 1], 1),
    ([0, 2, 1], -1),
    ([2, 1, 0], -1),
    ([1, 0, 2], -1),
];

fn rat(n: i8) -> Rational {
    Rational::from_int(n as i64)
}

/// A 3×3×3 tensor over 𝕂.
#[derive(Clone, PartialEq, Eq)]
pub struct Cubie {
    alg: Algebra,
    t: Vec<AlgElem>,
}

impl fmt::Debug for Cubie {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cubie({:?}, [", self.alg)?;
        for (i, x) in self.t.iter().enumerate() {
            if !x.is_zero() {
                write!(f, " {}{}{}:{}", i / 9, (i / 3) % 3, i % 3, x)?;
            }
        }
        write!(f, " ])")
    }
}

impl Cubie {
    pub fn zero(alg: Algebra) -> Self {
        Cubie {
            alg,
            t: vec![AlgElem::zero(alg); 27],
        }
    }

    /// The Levi-Civita symbol as a cubie.
    pub fn epsilon(alg: Algebra) -> Self {
        let mut c = Self::zero(alg);
        for (p, s) in PERMS3 {
            c.set(p[0], p[1], p[2], AlgElem::real(alg, rat(s)));
        }
        c
    }

    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &AlgElem {
        &self.t[a * 9 + b * 3 + c]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, x: AlgElem) {
        self.t[a * 9 + b * 3 + c] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.t.iter().all(AlgElem::is_zero)
    }

    pub fn scale(&self, r: &Rational) -> Cubie {
        Cubie {
            alg: self.alg,
            t: self.t.iter().map(|x| x.scale(r)).collect(),
        }
    }

    pub fn add(&self, other: &Cubie) -> Cubie {
        Cubie {
            alg: self.alg,
            t: self.t.iter().zip(&other.t).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn check_last_two_antisymmetric(&self) -> Result<(), CubieError> {
        for a in 0..3 {
            for b in 0..3 {
                for c in b..3 {
                    if *self.get(a, b, c) != -self.get(a, c, b) {
                        return Err(CubieError::NotAntisymmetric { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }
}

/// `(∗X)_{abc} = X_a^m ε_{mbc}`.
pub fn hodge(x: &HermMat) -> Cubie {
    hodge_mat(x.as_mat3())
}

fn hodge_mat(x: &Mat3) -> Cubie {
    let alg = x.algebra();
    let mut c = Cubie::zero(alg);
    for a in 0..3 {
        for b in 0..3 {
            for cc in 0..3 {
                let mut acc = AlgElem::zero(alg);
                for m in 0..3 {
                    let e = eps3(m, b, cc);
                    if e != 0 {
                        acc = acc + x.get(a, m).scale(&rat(e));
                    }
                }
                c.set(a, b, cc, acc);
            }
        }
    }
    c
}

fn unhodge_mat(c: &Cubie) -> Result<Mat3, CubieError> {
    c.check_last_two_antisymmetric()?;
    let alg = c.alg;
    let half = Rational::new(1, 2);
    let mut m3 = Mat3::zero(alg);
    for a in 0..3 {
        for b in 0..3 {
            let mut acc = AlgElem::zero(alg);
            for m in 0..3 {
                for n in 0..3 {
                    let e = eps3(b, m, n);
                    if e != 0 {
                        acc = acc + c.get(a, m, n).scale(&rat(e));
                    }
                }
            }
            m3.set(a, b, acc.scale(&half));
        }
    }
    Ok(m3)
}

/// `X_a^b = ½ C_{amn} ε^{bmn}`.
pub fn unhodge(c: &Cubie) -> Result<HermMat, CubieError> {
    Ok(HermMat::from_mat3(unhodge_mat(c)?)?)
}

/// Outcome of the Levi-Civita identity checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonReport {
    /// `ε_{mns} ε^{mns}`.
    pub full_contraction: i64,
    /// `ε_{amn} ε^{bmn} = 2δ_a^b` for all `a, b`.
    pub single_free_ok: bool,
    /// `ε_{abm} ε^{cdm} = δ_a^c δ_b^d − δ_a^d δ_b^c` for all index values.
    pub double_free_ok: bool,
    /// `ε_{abc} ε^{def}` equals the signed sum over permutations of `(d,e,f)`.
    pub standard_expansion_ok: bool,
    /// Index tuples `(a,b,c,d,e,f)` where the cyclic-minus-transposed six-term
    /// expansion disagrees with `ε_{abc} ε^{def}`.
    pub cyclic_expansion_mismatches: Vec<[usize; 6]>,
}

impl EpsilonReport {
    pub fn all_standard_ok(&self) -> bool {
        self.full_contraction == 6 && self.single_free_ok && self.double_free_ok && self.standard_expansion_ok
    }
}

fn delta(a: usize, b: usize) -> i64 {
    (a == b) as i64
}

/// Checks the rank-3 ε identities exhaustively.
///
/// The alternative expansion compared against is
/// `δ_a^d δ_b^e δ_c^f + δ_b^d δ_c^e δ_a^f + δ_c^d δ_a^e δ_b^f
///  − δ_a^d δ_c^e δ_b^f − δ_b^d δ_a^e δ_c^f − δ_c^d δ_a^e δ_b^f`,
/// whose last term repeats the third one's pattern.
pub fn epsilon_identity_suite() -> EpsilonReport {
    let e = |a, b, c| eps3(a, b, c) as i64;
    let mut full = 0;
    for m in 0..3 {
        for n in 0..3 {
            for s in 0..3 {
                full += e(m, n, s) * e(m, n, s);
            }
        }
    }
    let mut single = true;
    for a in 0..3 {
        for b in 0..3 {
            let mut s = 0;
            for m in 0..3 {
                for n in 0..3 {
                    s += e(a, m, n) * e(b, m, n);
                }
            }
            single &= s == 2 * delta(a, b);
        }
    }
    let mut double = true;
    let mut standard = true;
    let mut mismatches = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    let mut s = 0;
                    for m in 0..3 {
                        s += e(a, b, m) * e(c, d, m);
                    }
                    double &= s == delta(a, c) * delta(b, d) - delta(a, d) * delta(b, c);
                }
            }
        }
    }
    for idx in 0..729usize {
        let [a, b, c, d, ee, f] = [idx / 243, (idx / 81) % 3, (idx / 27) % 3, (idx / 9) % 3, (idx / 3) % 3, idx % 3];
        let lhs = e(a, b, c) * e(d, ee, f);
        let abc = [a, b, c];
        let std_sum: i64 = PERMS3
            .iter()
            .map(|(p, s)| *s as i64 * delta(abc[p[0]], d) * delta(abc[p[1]], ee) * delta(abc[p[2]], f))
            .sum();
        standard &= lhs == std_sum;
        let cyclic = delta(a, d) * delta(b, ee) * delta(c, f)
            + delta(b, d) * delta(c, ee) * delta(a, f)
            + delta(c, d) * delta(a, ee) * delta(b, f)
            - delta(a, d) * delta(c, ee) * delta(b, f)
            - delta(b, d) * delta(a, ee) * delta(c, f)
            - delta(c, d) * delta(a, ee) * delta(b, f);
        if cyclic != lhs {
            mismatches.push([a, b, c, d, ee, f]);
        }
    }
    EpsilonReport {
        full_contraction: full,
        single_free_ok: single,
        double_free_ok: double,
        standard_expansion_ok: standard,
        cyclic_expansion_mismatches: mismatches,
    }
}

fn check_pair(a: &Cubie, b: &Cubie) -> Result<(), CubieError> {
    if a.alg != b.alg {
        return Err(AlgebraError::Mismatch(a.alg, b.alg).into());
    }
    Ok(())
}

/// `½ C_{abc} ε^{abc}`, which is `tr X` for `C = ∗X`.
pub fn cubie_trace(c: &Cubie) -> AlgElem {
    let mut acc = AlgElem::zero(c.alg);
    for (p, s) in PERMS3 {
        acc = acc + c.get(p[0], p[1], p[2]).scale(&rat(s));
    }
    acc.scale(&Rational::new(1, 2))
}

/// `½ X_{amn} Y_{pbc} ε^{mnp}`, which is `∗(XY)` for `X, Y` Hodge duals.
pub fn cubie_product(x: &Cubie, y: &Cubie) -> Result<Cubie, CubieError> {
    check_pair(x, y)?;
    let alg = x.alg;
    let mut out = Cubie::zero(alg);
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let mut acc = AlgElem::zero(alg);
                for (p, s) in PERMS3 {
                    let (m, n, pp) = (p[0], p[1], p[2]);
                    let term = x.get(a, m, n) * y.get(pp, b, c);
                    acc = acc + term.scale(&rat(s));
                }
                out.set(a, b, c, acc.scale(&Rational::new(1, 2)));
            }
        }
    }
    Ok(out)
}

/// `¼ (X_{amn} Y_{pbc} + Y_{amn} X_{pbc}) ε^{mnp}`.
pub fn cubie_jordan(x: &Cubie, y: &Cubie) -> Result<Cubie, CubieError> {
    let half = Rational::new(1, 2);
    Ok(cubie_product(x, y)?.add(&cubie_product(y, x)?).scale(&half))
}

/// `⅛ (X_{amn} Y_{pbc} + Y_{pbc} X_{amn}) ε^{mnp} ε^{bca}`, i.e. `tr(X∘Y)`.
pub fn cubie_trace_jordan(x: &Cubie, y: &Cubie) -> Result<AlgElem, CubieError> {
    check_pair(x, y)?;
    let alg = x.alg;
    let mut acc = AlgElem::zero(alg);
    for (abc, s1) in PERMS3 {
        let (a, b, c) = (abc[0], abc[1], abc[2]);
        // ε^{bca} = ε^{abc}
        for (mnp, s2) in PERMS3 {
            let (m, n, p) = (mnp[0], mnp[1], mnp[2]);
            let (xa, yp) = (x.get(a, m, n), y.get(p, b, c));
            let term = &(xa * yp) + &(yp * xa);
            acc = acc + term.scale(&rat(s1 * s2));
        }
    }
    Ok(acc.scale(&Rational::new(1, 8)))
}

/// `½ X_c^m Y_d^n ε_{amn} ε^{bcd}` as a matrix; valid as the Freudenthal
/// product only when every entry of `X` commutes with every entry of `Y`.
pub fn cubie_freudenthal_commuting(x: &HermMat, y: &HermMat) -> Result<HermMat, CubieError> {
    x.as_mat3()
        .commuting_entries(y.as_mat3())
        .map_err(|(xi, yi)| CubieError::NonCommuting { x: xi, y: yi })?;
    let alg = x.algebra();
    let mut out = Mat3::zero(alg);
    for a in 0..3 {
        for b in 0..3 {
            let mut acc = AlgElem::zero(alg);
            for c in 0..3 {
                for d in 0..3 {
                    let e2 = eps3(b, c, d);
                    if e2 == 0 {
                        continue;
                    }
                    for m in 0..3 {
                        for n in 0..3 {
                            let e1 = eps3(a, m, n);
                            if e1 != 0 {
                                let t = x.as_mat3().get(c, m) * y.as_mat3().get(d, n);
                                acc = acc + t.scale(&rat(e1 * e2));
                            }
                        }
                    }
                }
            }
            out.set(a, b, acc.scale(&Rational::new(1, 2)));
        }
    }
    Ok(HermMat::from_mat3(out)?)
}

/// Right-hand side of the e₆ cubie action:
/// `φ_a^m X_m^n ε_{nbc} + X_a^n φ′_b^m ε_{nmc} + X_a^n φ′_c^m ε_{nbm}`
/// with `φ′ = −φ†`.
pub fn e6_cubie_action(phi: &Mat3, x: &HermMat) -> Result<Cubie, CubieError> {
    let alg = x.algebra();
    if phi.algebra() != alg {
        return Err(AlgebraError::Mismatch(phi.algebra(), alg).into());
    }
    let xm = x.as_mat3();
    let phid = phi.dagger().neg();
    let phix = phi.mul(xm)?;
    let mut out = Cubie::zero(alg);
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let mut acc = AlgElem::zero(alg);
                for n in 0..3 {
                    let e = eps3(n, b, c);
                    if e != 0 {
                        acc = acc + phix.get(a, n).scale(&rat(e));
                    }
                    for m in 0..3 {
                        let e = eps3(n, m, c);
                        if e != 0 {
                            acc = acc + (xm.get(a, n) * phid.get(b, m)).scale(&rat(e));
                        }
                        let e = eps3(n, b, m);
                        if e != 0 {
                            acc = acc + (xm.get(a, n) * phid.get(c, m)).scale(&rat(e));
                        }
                    }
                }
                out.set(a, b, c, acc);
            }
        }
    }
    Ok(out)
}

/// Image cubie `∗(φ(X))` with `φ(X) = φX + Xφ†`.
pub fn e6_cubie_image(phi: &Mat3, x: &HermMat) -> Result<Cubie, CubieError> {
    let m = phi.mul(x.as_mat3())?.add(&x.as_mat3().mul(&phi.dagger())?)?;
    Ok(hodge_mat(&m))
}

/// A 6×6×6 tensor over 𝕂.
#[derive(Clone, PartialEq, Eq)]
pub struct Cube {
    alg: Algebra,
    t: Vec<AlgElem>,
}

impl fmt::Debug for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cube({:?}, [", self.alg)?;
        for (a, b, c, x) in self.nonzero() {
            write!(f, " {a}{b}{c}:{x}")?;
        }
        write!(f, " ])")
    }
}

/// The 20 strictly increasing index triples, in lexicographic order.
pub fn sorted_triples() -> Vec<[usize; 3]> {
    let mut v = Vec::with_capacity(20);
    for a in 0..6 {
        for b in a + 1..6 {
            for c in b + 1..6 {
                v.push([a, b, c]);
            }
        }
    }
    v
}

fn is_large(i: usize) -> bool {
    i >= 3
}

impl Cube {
    pub fn zero(alg: Algebra) -> Self {
        Cube {
            alg,
            t: vec![AlgElem::zero(alg); 216],
        }
    }

    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &AlgElem {
        &self.t[a * 36 + b * 6 + c]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, x: AlgElem) {
        self.t[a * 36 + b * 6 + c] = x;
    }

    /// Sets `(a,b,c)` and all its permutations with the matching signs.
    pub fn set_antisymmetric(&mut self, a: usize, b: usize, c: usize, x: &AlgElem) {
        let idx = [a, b, c];
        for (p, s) in PERMS3 {
            self.set(idx[p[0]], idx[p[1]], idx[p[2]], x.scale(&rat(s)));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.t.iter().all(AlgElem::is_zero)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, usize, &AlgElem)> {
        self.t
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i / 36, (i / 6) % 6, i % 6, x))
    }

    pub fn add(&self, other: &Cube) -> Cube {
        Cube {
            alg: self.alg,
            t: self.t.iter().zip(&other.t).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Cube) -> Cube {
        Cube {
            alg: self.alg,
            t: self.t.iter().zip(&other.t).map(|(a, b)| a - b).collect(),
        }
    }

    /// First index triple where total antisymmetry fails.
    pub fn antisymmetry_violation(&self) -> Option<(usize, usize, usize)> {
        for a in 0..6 {
            for b in 0..6 {
                for c in 0..6 {
                    let x = self.get(a, b, c);
                    if (a == b || b == c || a == c) && !x.is_zero() {
                        return Some((a, b, c));
                    }
                    if *self.get(b, a, c) != -x || *self.get(a, c, b) != -x {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.antisymmetry_violation().is_none()
    }

    /// Coordinates on the antisymmetric subspace: for each sorted triple,
    /// the `k` real coefficients.
    pub fn antisym_coords(&self) -> Vec<Rational> {
        let mut v = Vec::with_capacity(20 * self.alg.dim());
        for [a, b, c] in sorted_triples() {
            v.extend(self.get(a, b, c).coeffs().iter().cloned());
        }
        v
    }

    pub fn from_antisym_coords(alg: Algebra, v: &[Rational]) -> Result<Cube, CubieError> {
        let k = alg.dim();
        if v.len() != 20 * k {
            return Err(CubieError::BadLength {
                expected: 20 * k,
                got: v.len(),
            });
        }
        let mut cube = Cube::zero(alg);
        for (i, [a, b, c]) in sorted_triples().into_iter().enumerate() {
            let x = AlgElem::new(alg, v[i * k..(i + 1) * k].to_vec())?;
            cube.set_antisymmetric(a, b, c, &x);
        }
        Ok(cube)
    }

    /// The cubie with the given small/large pattern, e.g. `[false, true, true]`
    /// for cubie 011.
    pub fn cubie(&self, pattern: [bool; 3]) -> Cubie {
        let off = |l: bool| if l { 3 } else { 0 };
        let mut c = Cubie::zero(self.alg);
        for a in 0..3 {
            for b in 0..3 {
                for cc in 0..3 {
                    let x = self.get(a + off(pattern[0]), b + off(pattern[1]), cc + off(pattern[2]));
                    c.set(a, b, cc, x.clone());
                }
            }
        }
        c
    }
}

/// Builds the cube of `P`.
pub fn assemble_cube(pv: &FreudVec) -> Cube {
    let alg = pv.algebra();
    let mut cube = Cube::zero(alg);
    let hx = hodge(&pv.x);
    let hy = hodge(&pv.y);
    cube.set_antisymmetric(0, 1, 2, &AlgElem::real(alg, pv.p.clone()));
    cube.set_antisymmetric(3, 4, 5, &AlgElem::real(alg, pv.q.clone()));
    for a in 0..3 {
        for (b, c) in [(0, 1), (0, 2), (1, 2)] {
            cube.set_antisymmetric(a, b + 3, c + 3, hx.get(a, b, c));
            cube.set_antisymmetric(a + 3, b, c, hy.get(a, b, c));
        }
    }
    cube
}

/// Reads `P` back from a cube.
pub fn extract_freudvec(cube: &Cube) -> Result<FreudVec, CubieError> {
    if let Some((a, b, c)) = cube.antisymmetry_violation() {
        return Err(CubieError::NotAntisymmetric { a, b, c });
    }
    let alg = cube.alg;
    let read_scalar = |block: &'static str, x: &AlgElem| -> Result<Rational, CubieError> {
        if !x.is_real() {
            return Err(CubieError::BlockInconsistent {
                block,
                detail: format!("scalar block entry {x} is not real"),
            });
        }
        Ok(x.re())
    };
    let p = read_scalar("000", cube.get(0, 1, 2))?;
    let q = read_scalar("111", cube.get(3, 4, 5))?;
    let hermitian = |block: &'static str, c: Cubie| -> Result<HermMat, CubieError> {
        match unhodge(&c) {
            Ok(h) => Ok(h),
            Err(CubieError::Jordan(JordanError::NotHermitian(..))) => Err(CubieError::BlockInconsistent {
                block,
                detail: "cubie is not the Hodge dual of a Hermitian matrix".to_string(),
            }),
            Err(e) => Err(e),
        }
    };
    let x = hermitian("011", cube.cubie([false, true, true]))?;
    let y = hermitian("100", cube.cubie([true, false, false]))?;
    debug_assert_eq!(alg, x.algebra());
    Ok(FreudVec::new(x, y, p, q)?)
}

/// `Θ_a^m P_{mbc} + Θ_b^m P_{amc} + Θ_c^m P_{abm}` with every Θ factor on
/// the left.
pub fn naive_action_mat(theta: &Mat6, cube: &Cube) -> Result<Cube, CubieError> {
    if theta.algebra() != cube.alg {
        return Err(AlgebraError::Mismatch(theta.algebra(), cube.alg).into());
    }
    let mut out = Cube::zero(cube.alg);
    for a in 0..6 {
        for b in 0..6 {
            for c in 0..6 {
                out.set(a, b, c, naive_entry(theta, cube, a, b, c));
            }
        }
    }
    Ok(out)
}

fn naive_entry(theta: &Mat6, cube: &Cube, a: usize, b: usize, c: usize) -> AlgElem {
    let mut acc = AlgElem::zero(cube.alg);
    for m in 0..6 {
        for (t, p) in [
            (theta.get(a, m), cube.get(m, b, c)),
            (theta.get(b, m), cube.get(a, m, c)),
            (theta.get(c, m), cube.get(a, b, m)),
        ] {
            if !p.is_zero() && !t.is_zero() {
                acc = acc + t * p;
            }
        }
    }
    acc
}

/// Naive action of `Θ`, which must have a block (matrix) form.
pub fn naive_action(theta: &E7Elem, cube: &Cube) -> Result<Cube, CubieError> {
    naive_action_mat(&theta.block_form()?, cube)
}

/// The naive action as a matrix on [`Cube::antisym_coords`].
pub fn naive_action_linear(theta: &Mat6) -> Result<SparseMat, CubieError> {
    let alg = theta.algebra();
    let k = alg.dim();
    let triples = sorted_triples();
    let mut cols = Vec::with_capacity(20 * k);
    for [a, b, c] in &triples {
        for u in 0..k {
            let mut cube = Cube::zero(alg);
            cube.set_antisymmetric(*a, *b, *c, &AlgElem::unit(alg, u));
            let mut col = Vec::with_capacity(20 * k);
            for [x, y, z] in &triples {
                col.extend(naive_entry(theta, &cube, *x, *y, *z).coeffs().iter().cloned());
            }
            cols.push(col);
        }
    }
    Ok(SparseMat::from_columns(20 * k, &cols))
}

fn sided_entry(theta: &Mat6, cube: &Cube, a: usize, b: usize, c: usize) -> AlgElem {
    let mut acc = AlgElem::zero(cube.alg);
    for m in 0..6 {
        let (t, p) = (theta.get(a, m), cube.get(m, b, c));
        if !t.is_zero() && !p.is_zero() {
            acc = acc + t * p;
        }
        let (p, t) = (cube.get(a, m, c), theta.get(b, m));
        if !t.is_zero() && !p.is_zero() {
            acc = acc + p * t;
        }
        let (p, t) = (cube.get(a, b, m), theta.get(c, m));
        if !t.is_zero() && !p.is_zero() {
            acc = acc + p * t;
        }
    }
    acc
}

/// `Θ_a^m P_{mbc} + P_{amc} Θ_b^m + P_{abm} Θ_c^m` evaluated on the defining
/// cubies 000, 011, 100 and 111, then extended to the full cube by signed
/// averaging over index permutations.
///
/// Cubies 000 and 111 must come out totally antisymmetric; otherwise the
/// extension is ambiguous and an error is returned.
pub fn sided_action_mat(theta: &Mat6, cube: &Cube) -> Result<Cube, CubieError> {
    let alg = cube.alg;
    if theta.algebra() != alg {
        return Err(AlgebraError::Mismatch(theta.algebra(), alg).into());
    }
    let mut raw = vec![None::<AlgElem>; 216];
    let defining = |a: usize, b: usize, c: usize| -> bool {
        let (la, lb, lc) = (is_large(a), is_large(b), is_large(c));
        (la == lb && lb == lc) || (lb == lc && la != lb)
    };
    for a in 0..6 {
        for b in 0..6 {
            for c in 0..6 {
                if defining(a, b, c) {
                    raw[a * 36 + b * 6 + c] = Some(sided_entry(theta, cube, a, b, c));
                }
            }
        }
    }
    for (block, base) in [("000", 0usize), ("111", 3)] {
        for a in base..base + 3 {
            for b in base..base + 3 {
                for c in base..base + 3 {
                    let x = raw[a * 36 + b * 6 + c].as_ref().expect("defining");
                    let idx = [a, b, c];
                    for (p, s) in PERMS3 {
                        let y = raw[idx[p[0]] * 36 + idx[p[1]] * 6 + idx[p[2]]].as_ref().expect("defining");
                        if *y != x.scale(&rat(s)) {
                            return Err(CubieError::SidedInconsistent { block, a, b, c });
                        }
                    }
                }
            }
        }
    }
    let mut out = Cube::zero(alg);
    for [a, b, c] in sorted_triples() {
        let idx = [a, b, c];
        let mut acc = AlgElem::zero(alg);
        let mut count = 0i64;
        for (p, s) in PERMS3 {
            let (x, y, z) = (idx[p[0]], idx[p[1]], idx[p[2]]);
            if let Some(v) = &raw[x * 36 + y * 6 + z] {
                acc = acc + v.scale(&rat(s));
                count += 1;
            }
        }
        out.set_antisymmetric(a, b, c, &acc.scale(&Rational::new(1, count)));
    }
    Ok(out)
}

/// Sided action of `Θ`, which must have a block (matrix) form.
pub fn sided_action(theta: &E7Elem, cube: &Cube) -> Result<Cube, CubieError> {
    sided_action_mat(&theta.block_form()?, cube)
}

/// Every ordering of `(0..6) \ {skip}` with its ε sign when `skip` is
/// placed at position `pos`.
fn eps6_with_fixed(skip: usize, pos: usize) -> Vec<([usize; 5], i8)> {
    let rest: Vec<usize> = (0..6).filter(|&i| i != skip).collect();
    signed_perms(&rest)
        .into_iter()
        .map(|(p, _)| {
            let mut full = p.clone();
            full.insert(pos, skip);
            let arr: [usize; 6] = full.try_into().expect("six indices");
            ([p[0], p[1], p[2], p[3], p[4]], eps6(arr))
        })
        .collect()
}

/// `M_a^b = P_{acd} P_{efg} ε^{cdefgb}`, a 6×6 matrix.
pub fn pstar_tensor(cube: &Cube) -> Mat6 {
    let alg = cube.alg;
    let mut e = vec![AlgElem::zero(alg); 36];
    for b in 0..6 {
        let perms = eps6_with_fixed(b, 5);
        for a in 0..6 {
            let mut acc = AlgElem::zero(alg);
            for ([c, d, ee, f, g], s) in &perms {
                let (x, y) = (cube.get(a, *c, *d), cube.get(*ee, *f, *g));
                if !x.is_zero() && !y.is_zero() {
                    acc = acc + (x * y).scale(&rat(*s));
                }
            }
            e[a * 6 + b] = acc;
        }
    }
    Mat6::from_entries(alg, e)
}

/// `P_{gab} P_{cde} P_{fhi} P_{jkl} ε^{abcdef} ε^{ghijkl}`, contracted as
/// `V_g^f W_f^g` with `V_g^f = P_{gab} P_{cde} ε^{abcdef}` and
/// `W_f^g = P_{fhi} P_{jkl} ε^{ghijkl}`; products are taken left to right.
pub fn quartic_tensor(cube: &Cube) -> AlgElem {
    let alg = cube.alg;
    let mut v = vec![AlgElem::zero(alg); 36];
    let mut w = vec![AlgElem::zero(alg); 36];
    for f in 0..6 {
        let last = eps6_with_fixed(f, 5);
        let first = eps6_with_fixed(f, 0);
        for g in 0..6 {
            let mut acc_v = AlgElem::zero(alg);
            for ([a, b, c, d, e], s) in &last {
                let (x, y) = (cube.get(g, *a, *b), cube.get(*c, *d, *e));
                if !x.is_zero() && !y.is_zero() {
                    acc_v = acc_v + (x * y).scale(&rat(*s));
                }
            }
            v[g * 6 + f] = acc_v;
            // W_g^f: lower index g, upper index f sits first in ε.
            let mut acc_w = AlgElem::zero(alg);
            for ([h, i, j, k, l], s) in &first {
                let (x, y) = (cube.get(g, *h, *i), cube.get(*j, *k, *l));
                if !x.is_zero() && !y.is_zero() {
                    acc_w = acc_w + (x * y).scale(&rat(*s));
                }
            }
            w[g * 6 + f] = acc_w;
        }
    }
    let mut acc = AlgElem::zero(alg);
    for g in 0..6 {
        for f in 0..6 {
            acc = acc + &v[g * 6 + f] * &w[f * 6 + g];
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Sampler;

    #[test]
    fn permutation_signs() {
        assert_eq!(perm_sign(&[0, 1, 2]), 1);
        assert_eq!(perm_sign(&[1, 0, 2]), -1);
        assert_eq!(perm_sign(&[0, 0, 2]), 0);
        assert_eq!(eps6([0, 1, 2, 3, 4, 5]), 1);
        assert_eq!(eps6([1, 2, 3, 4, 5, 0]), -1);
        let perms = signed_perms(&[0, 1, 2, 3]);
        assert_eq!(perms.len(), 24);
        for (p, s) in perms {
            assert_eq!(perm_sign(&p), s);
        }
    }

    #[test]
    fn epsilon_identities() {
        let r = epsilon_identity_suite();
        assert!(r.all_standard_ok());
        assert_eq!(r.full_contraction, 6);
        assert!(!r.cyclic_expansion_mismatches.is_empty());
    }

    #[test]
    fn hodge_of_identity_and_zero() {
        for alg in Algebra::ALL {
            assert_eq!(hodge(&HermMat::identity(alg)), Cubie::epsilon(alg));
            assert!(hodge(&HermMat::zero(alg)).is_zero());
            assert_eq!(unhodge(&Cubie::epsilon(alg)).unwrap(), HermMat::identity(alg));
            assert!(unhodge(&Cubie::zero(alg)).unwrap().is_zero());
            assert_eq!(cubie_trace(&Cubie::epsilon(alg)), AlgElem::real(alg, Rational::from_int(3)));
        }
    }

    #[test]
    fn hodge_round_trip() {
        let mut s = Sampler::new(31);
        for alg in Algebra::ALL {
            for _ in 0..20 {
                let x = s.herm_mat(alg);
                let c = hodge(&x);
                c.check_last_two_antisymmetric().unwrap();
                assert_eq!(unhodge(&c).unwrap(), x);
            }
        }
    }

    #[test]
    fn unhodge_rejects_bad_cubie() {
        let alg = Algebra::Real;
        let mut c = Cubie::zero(alg);
        c.set(0, 1, 2, AlgElem::one(alg));
        assert!(matches!(unhodge(&c), Err(CubieError::NotAntisymmetric { .. })));
    }

    #[test]
    fn cubie_products_match_jordan_module() {
        let mut s = Sampler::new(32);
        for alg in Algebra::ALL {
            let (x, y) = (s.herm_mat(alg), s.herm_mat(alg));
            let (hx, hy) = (hodge(&x), hodge(&y));
            assert_eq!(cubie_jordan(&hx, &hy).unwrap(), hodge(&x.jordan(&y).unwrap()));
            assert_eq!(cubie_trace(&hx), AlgElem::real(alg, x.trace()));
            let t = cubie_trace_jordan(&hx, &hy).unwrap();
            assert_eq!(t, AlgElem::real(alg, x.trace_form(&y).unwrap()));
        }
    }

    #[test]
    fn commuting_freudenthal_formula() {
        let mut s = Sampler::new(33);
        for alg in Algebra::ALL {
            let (x, y) = (s.real_herm_mat(alg), s.herm_mat(alg));
            assert_eq!(cubie_freudenthal_commuting(&x, &y).unwrap(), x.freudenthal(&y).unwrap());
        }
        let (x, y) = (s.herm_mat(Algebra::Quaternion), s.herm_mat(Algebra::Quaternion));
        assert!(matches!(
            cubie_freudenthal_commuting(&x, &y),
            Err(CubieError::NonCommuting { .. })
        ));
    }

    #[test]
    fn assemble_examples() {
        let alg = Algebra::Complex;
        let z = HermMat::zero(alg);
        let pv = FreudVec::new(z.clone(), z, Rational::ONE, Rational::ZERO).unwrap();
        let cube = assemble_cube(&pv);
        for a in 0..6 {
            for b in 0..6 {
                for c in 0..6 {
                    let expect = if a < 3 && b < 3 && c < 3 { eps3(a, b, c) } else { 0 };
                    assert_eq!(*cube.get(a, b, c), AlgElem::real(alg, rat(expect)));
                }
            }
        }
        assert!(extract_freudvec(&Cube::zero(alg)).unwrap().is_zero());
        let mut five = Cube::zero(alg);
        five.set_antisymmetric(0, 1, 2, &AlgElem::real(alg, Rational::from_int(5)));
        assert_eq!(extract_freudvec(&five).unwrap().p, Rational::from_int(5));
    }

    #[test]
    fn assemble_round_trip_and_antisymmetry() {
        let mut s = Sampler::new(34);
        for alg in Algebra::ALL {
            for _ in 0..5 {
                let pv = s.freud_vec(alg);
                let cube = assemble_cube(&pv);
                assert!(cube.is_antisymmetric());
                assert_eq!(extract_freudvec(&cube).unwrap(), pv);
                let back = Cube::from_antisym_coords(alg, &cube.antisym_coords()).unwrap();
                assert_eq!(back, cube);
            }
        }
    }

    #[test]
    fn extract_rejects_broken_cubes() {
        let alg = Algebra::Real;
        let mut c = Cube::zero(alg);
        c.set(0, 1, 2, AlgElem::one(alg));
        assert!(matches!(extract_freudvec(&c), Err(CubieError::NotAntisymmetric { .. })));
        let alg = Algebra::Complex;
        let mut c = Cube::zero(alg);
        c.set_antisymmetric(0, 1, 2, &AlgElem::unit(alg, 1));
        assert!(matches!(extract_freudvec(&c), Err(CubieError::BlockInconsistent { block: "000", .. })));
    }

    #[test]
    fn tensors_vanish_on_zero_cube() {
        let z = Cube::zero(Algebra::Complex);
        assert!(pstar_tensor(&z).is_zero());
        assert!(quartic_tensor(&z).is_zero());
    }

    #[test]
    fn linearized_naive_matches_direct() {
        let mut s = Sampler::new(35);
        let alg = Algebra::Quaternion;
        let theta = E7Elem::translation(s.herm_mat(alg)).block_form().unwrap();
        let cube = assemble_cube(&s.freud_vec(alg));
        let lin = naive_action_linear(&theta).unwrap();
        let direct = naive_action_mat(&theta, &cube).unwrap();
        assert_eq!(lin.apply(&cube.antisym_coords()), direct.antisym_coords());
    }
}

//! JSON formats used by the CLI and the Python bindings.
//!
//! * HermMat: array of 9 coefficient vectors in row-major order; each
//!   coefficient is an integer or a `"num/den"` string. The vector length
//!   (1, 2, 4 or 8) fixes the algebra.
//! * FreudVec: `{"X": HermMat, "Y": HermMat, "p": r, "q": r}`.
//! * Theta: `{"algebra": "O", "basis": 17}` selects an e₇ basis element;
//!   otherwise `{"phi"?: Mat3, "rho"?: r, "A"?: HermMat, "B"?: HermMat}` with
//!   `phi` a tracefree 3×3 matrix in the same layout as HermMat.
//! * Cube: list of nonzero entries `{"a", "b", "c", "coeffs"}` with 1-based
//!   indices, or `{"algebra": "C", "entries": [...]}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgElem, Algebra, AlgebraError};
use crate::conformal::{e7_basis, ConformalError, E6Op, E7Elem, FreudVec};
use crate::cubie::{Cube, CubieError};
use crate::jordan::{HermMat, JordanError, Mat3};
use crate::rational::Rational;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Jordan(#[from] JordanError),
    #[error(transparent)]
    Conformal(#[from] ConformalError),
    #[error(transparent)]
    Cubie(#[from] CubieError),
    #[error("{0}")]
    Invalid(String),
}

pub type MatJson = Vec<Vec<Rational>>;

fn infer_algebra(m: &MatJson) -> Result<Algebra, FormatError> {
    let first = m.first().ok_or_else(|| FormatError::Invalid("empty matrix".into()))?;
    Ok(Algebra::from_dim(first.len())?)
}

pub fn mat3_from_json(m: &MatJson) -> Result<Mat3, FormatError> {
    if m.len() != 9 {
        return Err(FormatError::Invalid(format!("matrix needs 9 entries, got {}", m.len())));
    }
    let alg = infer_algebra(m)?;
    let entries = m
        .iter()
        .map(|c| AlgElem::new(alg, c.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Mat3::from_entries(alg, entries)?)
}

pub fn mat3_to_json(m: &Mat3) -> MatJson {
    m.entries().iter().map(|e| e.coeffs().to_vec()).collect()
}

pub fn herm_from_json(m: &MatJson) -> Result<HermMat, FormatError> {
    Ok(HermMat::from_mat3(mat3_from_json(m)?)?)
}

pub fn herm_to_json(h: &HermMat) -> MatJson {
    mat3_to_json(h.as_mat3())
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FreudVecJson {
    #[serde(rename = "X")]
    pub x: MatJson,
    #[serde(rename = "Y")]
    pub y: MatJson,
    pub p: Rational,
    pub q: Rational,
}

impl From<&FreudVec> for FreudVecJson {
    fn from(v: &FreudVec) -> Self {
        FreudVecJson {
            x: herm_to_json(&v.x),
            y: herm_to_json(&v.y),
            p: v.p.clone(),
            q: v.q.clone(),
        }
    }
}

impl TryFrom<&FreudVecJson> for FreudVec {
    type Error = FormatError;

    fn try_from(j: &FreudVecJson) -> Result<Self, FormatError> {
        Ok(FreudVec::new(herm_from_json(&j.x)?, herm_from_json(&j.y)?, j.p.clone(), j.q.clone())?)
    }
}

pub fn parse_freudvec(s: &str) -> Result<FreudVec, FormatError> {
    FreudVec::try_from(&serde_json::from_str::<FreudVecJson>(s)?)
}

pub fn freudvec_to_string(v: &FreudVec) -> String {
    serde_json::to_string(&FreudVecJson::from(v)).expect("serializable")
}

pub fn parse_herm(s: &str) -> Result<HermMat, FormatError> {
    herm_from_json(&serde_json::from_str::<MatJson>(s)?)
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<Algebra>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<MatJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Rational>,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<MatJson>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<MatJson>,
}

impl ThetaJson {
    fn algebra(&self) -> Result<Algebra, FormatError> {
        let inferred = [&self.phi, &self.a, &self.b]
            .into_iter()
            .flatten()
            .next()
            .map(infer_algebra)
            .transpose()?;
        match (self.algebra, inferred) {
            (Some(x), Some(y)) if x != y => Err(AlgebraError::Mismatch(x, y).into()),
            (Some(x), _) | (None, Some(x)) => Ok(x),
            (None, None) => Err(FormatError::Invalid("cannot infer algebra; add \"algebra\"".into())),
        }
    }
}

pub fn theta_from_json(j: &ThetaJson) -> Result<E7Elem, FormatError> {
    let alg = j.algebra()?;
    if let Some(i) = j.basis {
        if j.phi.is_some() || j.rho.is_some() || j.a.is_some() || j.b.is_some() {
            return Err(FormatError::Invalid("\"basis\" excludes explicit components".into()));
        }
        let basis = e7_basis(alg)?;
        return basis
            .elems
            .get(i)
            .cloned()
            .ok_or_else(|| FormatError::Invalid(format!("basis index {i} out of range 0..{}", basis.len())));
    }
    let phi = match &j.phi {
        Some(m) => E6Op::from_matrix(&mat3_from_json(m)?)?,
        None => E6Op::zero(alg),
    };
    let herm = |m: &Option<MatJson>| -> Result<HermMat, FormatError> {
        m.as_ref().map(herm_from_json).unwrap_or_else(|| Ok(HermMat::zero(alg)))
    };
    Ok(E7Elem {
        phi,
        rho: j.rho.clone().unwrap_or(Rational::ZERO),
        a: herm(&j.a)?,
        b: herm(&j.b)?,
    })
}

pub fn parse_theta(s: &str) -> Result<E7Elem, FormatError> {
    theta_from_json(&serde_json::from_str::<ThetaJson>(s)?)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CubeEntryJson {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub coeffs: Vec<Rational>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CubeJson {
    Entries(Vec<CubeEntryJson>),
    Tagged { algebra: Algebra, entries: Vec<CubeEntryJson> },
}

pub fn cube_to_json(cube: &Cube) -> Vec<CubeEntryJson> {
    cube.nonzero()
        .map(|(a, b, c, x)| CubeEntryJson {
            a: a + 1,
            b: b + 1,
            c: c + 1,
            coeffs: x.coeffs().to_vec(),
        })
        .collect()
}

pub fn cube_from_json(j: &CubeJson) -> Result<Cube, FormatError> {
    let (alg, entries) = match j {
        CubeJson::Tagged { algebra, entries } => (*algebra, entries),
        CubeJson::Entries(entries) => {
            let first = entries
                .first()
                .ok_or_else(|| FormatError::Invalid("empty cube; use {\"algebra\", \"entries\"}".into()))?;
            (Algebra::from_dim(first.coeffs.len())?, entries)
        }
    };
    let mut cube = Cube::zero(alg);
    for e in entries {
        let idx = [e.a, e.b, e.c];
        if idx.iter().any(|&i| !(1..=6).contains(&i)) {
            return Err(FormatError::Invalid(format!("cube index out of range 1..=6: {idx:?}")));
        }
        cube.set(e.a - 1, e.b - 1, e.c - 1, AlgElem::new(alg, e.coeffs.clone())?);
    }
    if let Some((a, b, c)) = cube.antisymmetry_violation() {
        return Err(CubieError::NotAntisymmetric { a, b, c }.into());
    }
    Ok(cube)
}

pub fn parse_cube(s: &str) -> Result<Cube, FormatError> {
    cube_from_json(&serde_json::from_str::<CubeJson>(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Sampler;

    #[test]
    fn herm_json_accepts_integers_and_fractions() {
        let h = parse_herm(r#"[[1,0],[2,"1/2"],[0,0],[2,"-1/2"],[3,0],[0,0],[0,0],[0,0],["-5/3",0]]"#).unwrap();
        assert_eq!(h.algebra(), Algebra::Complex);
        assert_eq!(h.trace(), Rational::new(7, 3));
        assert!(parse_herm(r#"[[1],[2],[0],[3],[3],[0],[0],[0],[1]]"#).is_err());
    }

    #[test]
    fn freudvec_round_trip() {
        let mut s = Sampler::new(41);
        for alg in Algebra::ALL {
            let v = s.freud_vec(alg);
            assert_eq!(parse_freudvec(&freudvec_to_string(&v)).unwrap(), v);
        }
    }

    #[test]
    fn theta_forms() {
        let t = parse_theta(r#"{"algebra": "R", "basis": 20}"#).unwrap();
        assert_eq!(t.rho, Rational::ONE);
        let t = parse_theta(r#"{"rho": "2/3", "A": [[1],[0],[0],[0],[1],[0],[0],[0],[1]]}"#).unwrap();
        assert_eq!(t.a, HermMat::identity(Algebra::Real));
        assert!(parse_theta(r#"{"rho": 1}"#).is_err());
        assert!(parse_theta(r#"{"phi": [[1],[0],[0],[0],[1],[0],[0],[0],[1]]}"#).is_err());
        assert!(parse_theta(r#"{"algebra": "C", "basis": 35}"#).is_err());
    }

    #[test]
    fn cube_json_round_trip() {
        let mut s = Sampler::new(42);
        let cube = crate::cubie::assemble_cube(&s.freud_vec(Algebra::Quaternion));
        let text = serde_json::to_string(&cube_to_json(&cube)).unwrap();
        assert_eq!(parse_cube(&text).unwrap(), cube);
        assert!(parse_cube(r#"{"algebra": "O", "entries": []}"#).unwrap().is_zero());
        assert!(parse_cube(r#"[{"a":1,"b":2,"c":3,"coeffs":[1]}]"#).is_err());
    }
}

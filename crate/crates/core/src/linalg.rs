//! Exact sparse linear algebra over the rationals: sparse matrices, an
//! incrementally maintained reduced row-echelon basis with coordinate
//! tracking, and Lie bracket closure.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("shape mismatch: {0:?} vs {1:?}")]
    Shape((usize, usize), (usize, usize)),
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),
    #[error("vector length {got} does not match ambient dimension {expected}")]
    Length { expected: usize, got: usize },
}

/// Sparse vector: `(index, value)` pairs, strictly increasing index, no zeros.
pub type SparseVec = Vec<(usize, Rational)>;

pub fn sparse_from_dense(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// Row-sparse rational matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseMat {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl SparseMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMat {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, Rational::ONE));
        }
        m
    }

    pub fn from_dense(rows: usize, cols: usize, dense: &[Rational]) -> Self {
        assert_eq!(dense.len(), rows * cols);
        SparseMat {
            rows,
            cols,
            data: dense.chunks(cols).map(sparse_from_dense).collect(),
        }
    }

    /// Builds a matrix whose `j`-th column is `columns[j]` (dense, length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let cols = columns.len();
        let mut data = vec![Vec::new(); rows];
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                if !x.is_zero() {
                    data[i].push((j, x.clone()));
                }
            }
        }
        SparseMat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        match self.data[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(pos) => self.data[i][pos].1.clone(),
            Err(_) => Rational::ZERO,
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Rational> {
        let mut out = vec![Rational::ZERO; self.rows * self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, x) in row {
                out[i * self.cols + j] = x.clone();
            }
        }
        out
    }

    /// Row-major flattening as a sparse vector of length `rows * cols`.
    pub fn flatten(&self) -> SparseVec {
        let mut out = Vec::with_capacity(self.nnz());
        for (i, row) in self.data.iter().enumerate() {
            out.extend(row.iter().map(|(j, x)| (i * self.cols + j, x.clone())));
        }
        out
    }

    pub fn from_flat(rows: usize, cols: usize, v: &SparseVec) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (idx, x) in v {
            m.data[idx / cols].push((idx % cols, x.clone()));
        }
        m
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|row| row.iter().map(|(j, x)| x * &v[*j]).sum())
            .collect()
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn transpose(&self) -> SparseMat {
        let mut data = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, x) in row {
                data[*j].push((i, x.clone()));
            }
        }
        SparseMat {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn scale(&self, r: &Rational) -> SparseMat {
        if r.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        SparseMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|row| row.iter().map(|(j, x)| (*j, x * r)).collect())
                .collect(),
        }
    }

    fn combine(&self, other: &SparseMat, sign: bool) -> Result<SparseMat, LinalgError> {
        if self.shape() != other.shape() {
            return Err(LinalgError::Shape(self.shape(), other.shape()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| merge(a, b, sign))
            .collect();
        Ok(SparseMat {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn add(&self, other: &SparseMat) -> Result<SparseMat, LinalgError> {
        self.combine(other, true)
    }

    pub fn sub(&self, other: &SparseMat) -> Result<SparseMat, LinalgError> {
        self.combine(other, false)
    }

    pub fn mul(&self, other: &SparseMat) -> Result<SparseMat, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(self.shape(), other.shape()));
        }
        let mut acc = vec![Rational::ZERO; other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            for (k, a) in row {
                for (j, b) in &other.data[*k] {
                    if acc[*j].is_zero() {
                        touched.push(*j);
                    }
                    acc[*j] += a * b;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let mut out = Vec::with_capacity(touched.len());
            for &j in &touched {
                let x = std::mem::take(&mut acc[j]);
                if !x.is_zero() {
                    out.push((j, x));
                }
            }
            touched.clear();
            data.push(out);
        }
        Ok(SparseMat {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &SparseMat) -> Result<SparseMat, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        if self.shape() != other.shape() {
            return Err(LinalgError::Shape(self.shape(), other.shape()));
        }
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Block-diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &SparseMat) -> SparseMat {
        let mut data = self.data.clone();
        for row in &other.data {
            data.push(row.iter().map(|(j, x)| (j + self.cols, x.clone())).collect());
        }
        SparseMat {
            rows: self.rows + other.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    /// Extracts the square sub-block starting at `(start, start)` of size `n`.
    pub fn sub_block(&self, start: usize, n: usize) -> SparseMat {
        let data = self.data[start..start + n]
            .iter()
            .map(|row| {
                row.iter()
                    .filter(|(j, _)| *j >= start && *j < start + n)
                    .map(|(j, x)| (j - start, x.clone()))
                    .collect()
            })
            .collect();
        SparseMat { rows: n, cols: n, data }
    }
}

fn merge(a: &SparseVec, b: &SparseVec, add: bool) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let x = if add { b[j].1.clone() } else { -&b[j].1 };
            out.push((b[j].0, x));
            j += 1;
        } else {
            let x = if add { &a[i].1 + &b[j].1 } else { &a[i].1 - &b[j].1 };
            if !x.is_zero() {
                out.push((a[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Reduced row-echelon basis of a growing set of vectors.
///
/// Pivots are the first nonzero coordinate of each reduced vector. Each row
/// also records its expression as a combination of the accepted input
/// vectors, so membership tests can return coordinates in the original basis.
#[derive(Clone, Debug)]
pub struct Echelon {
    ambient: usize,
    rows: Vec<SparseVec>,
    pivots: BTreeMap<usize, usize>,
    combos: Vec<Vec<Rational>>,
}

impl Echelon {
    pub fn new(ambient: usize) -> Self {
        Echelon {
            ambient,
            rows: Vec::new(),
            pivots: BTreeMap::new(),
            combos: Vec::new(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Returns the dense remainder of `v` and the row multipliers used.
    fn reduce_dense(&self, v: &SparseVec) -> (Vec<Rational>, Vec<(usize, Rational)>) {
        let mut dense = vec![Rational::ZERO; self.ambient];
        for (i, x) in v {
            dense[*i] = x.clone();
        }
        let mut used = Vec::new();
        for (&p, &r) in &self.pivots {
            let c = std::mem::take(&mut dense[p]);
            if c.is_zero() {
                continue;
            }
            for (i, x) in self.rows[r].iter().skip(1) {
                dense[*i] -= &c * x;
            }
            used.push((r, c));
        }
        (dense, used)
    }

    fn check_len(&self, v: &SparseVec) -> Result<(), LinalgError> {
        match v.last() {
            Some((i, _)) if *i >= self.ambient => Err(LinalgError::Length {
                expected: self.ambient,
                got: i + 1,
            }),
            _ => Ok(()),
        }
    }

    pub fn contains(&self, v: &SparseVec) -> Result<bool, LinalgError> {
        self.check_len(v)?;
        let (rem, _) = self.reduce_dense(v);
        Ok(rem.iter().all(Rational::is_zero))
    }

    /// Coordinates of `v` in the accepted input vectors, or `None` when `v`
    /// lies outside the span.
    pub fn coordinates(&self, v: &SparseVec) -> Result<Option<Vec<Rational>>, LinalgError> {
        self.check_len(v)?;
        let (rem, used) = self.reduce_dense(v);
        if !rem.iter().all(Rational::is_zero) {
            return Ok(None);
        }
        let mut coords = vec![Rational::ZERO; self.rank()];
        for (r, c) in used {
            for (k, x) in self.combos[r].iter().enumerate() {
                if !x.is_zero() {
                    coords[k] += &c * x;
                }
            }
        }
        Ok(Some(coords))
    }

    /// Adds `v` if it is independent of the current span; returns whether it
    /// was added.
    pub fn insert(&mut self, v: &SparseVec) -> Result<bool, LinalgError> {
        self.check_len(v)?;
        let (rem, used) = self.reduce_dense(v);
        let Some(pivot) = rem.iter().position(|x| !x.is_zero()) else {
            return Ok(false);
        };
        let n = self.rank();
        let inv = rem[pivot].recip().expect("nonzero pivot");
        let row: SparseVec = rem
            .iter()
            .enumerate()
            .skip(pivot)
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x * &inv))
            .collect();
        let mut combo = vec![Rational::ZERO; n + 1];
        combo[n] = Rational::ONE;
        for (r, c) in &used {
            for (k, x) in self.combos[*r].iter().enumerate() {
                if !x.is_zero() {
                    combo[k] -= c * x;
                }
            }
        }
        for x in combo.iter_mut() {
            *x *= &inv;
        }
        for c in self.combos.iter_mut() {
            c.push(Rational::ZERO);
        }
        // Clear the new pivot column from existing rows.
        for r in 0..self.rows.len() {
            let Ok(pos) = self.rows[r].binary_search_by_key(&pivot, |(i, _)| *i) else {
                continue;
            };
            let f = self.rows[r][pos].1.clone();
            let scaled: SparseVec = row.iter().map(|(i, x)| (*i, x * &f)).collect();
            self.rows[r] = merge(&self.rows[r], &scaled, false);
            for (k, x) in combo.iter().enumerate() {
                if !x.is_zero() {
                    let d = &f * x;
                    self.combos[r][k] -= d;
                }
            }
        }
        self.pivots.insert(pivot, n);
        self.rows.push(row);
        self.combos.push(combo);
        Ok(true)
    }
}

/// Rank of a list of dense vectors.
pub fn rank(vectors: &[Vec<Rational>]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let mut e = Echelon::new(first.len());
    for v in vectors {
        e.insert(&sparse_from_dense(v)).expect("uniform length");
    }
    e.rank()
}

/// A Lie algebra of matrices obtained by bracket closure.
#[derive(Clone, Debug)]
pub struct Closure {
    /// Accepted generators first (in input order), then independent brackets
    /// in discovery order.
    pub basis: Vec<SparseMat>,
    /// Number of leading basis entries that came directly from the inputs.
    pub from_generators: usize,
    pub echelon: Echelon,
}

impl Closure {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `m` in `basis`, or `None` if outside the span.
    pub fn coordinates(&self, m: &SparseMat) -> Result<Option<Vec<Rational>>, LinalgError> {
        self.echelon.coordinates(&m.flatten())
    }
}

/// Repeatedly adjoins commutators until the span is closed under brackets.
///
/// Deterministic: pairs `(j, i)` with `j < i` are visited in increasing `i`,
/// then increasing `j`, over the growing basis.
pub fn close_under_bracket(gens: &[SparseMat]) -> Result<Closure, LinalgError> {
    let Some(first) = gens.first() else {
        return Ok(Closure {
            basis: Vec::new(),
            from_generators: 0,
            echelon: Echelon::new(0),
        });
    };
    let (n, m) = first.shape();
    if n != m {
        return Err(LinalgError::NotSquare(n, m));
    }
    let mut echelon = Echelon::new(n * n);
    let mut basis = Vec::new();
    for g in gens {
        if g.shape() != (n, n) {
            return Err(LinalgError::Shape((n, n), g.shape()));
        }
        if echelon.insert(&g.flatten())? {
            basis.push(g.clone());
        }
    }
    let from_generators = basis.len();
    let mut i = 0;
    while i < basis.len() {
        for j in 0..i {
            let c = basis[j].commutator(&basis[i])?;
            if c.is_zero() {
                continue;
            }
            if echelon.insert(&c.flatten())? {
                basis.push(c);
            }
        }
        i += 1;
    }
    Ok(Closure {
        basis,
        from_generators,
        echelon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn mat(rows: usize, cols: usize, v: &[i64]) -> SparseMat {
        SparseMat::from_dense(rows, cols, &v.iter().map(|x| r(*x)).collect::<Vec<_>>())
    }

    #[test]
    fn multiply_and_commutator() {
        let a = mat(2, 2, &[0, 1, 0, 0]);
        let b = mat(2, 2, &[0, 0, 1, 0]);
        let h = a.commutator(&b).unwrap();
        assert_eq!(h, mat(2, 2, &[1, 0, 0, -1]));
        assert_eq!(a.mul(&a).unwrap(), SparseMat::zeros(2, 2));
        assert!(a.commutator(&a).unwrap().is_zero());
    }

    #[test]
    fn shape_errors() {
        let a = mat(2, 3, &[1, 2, 3, 4, 5, 6]);
        assert!(matches!(a.commutator(&a), Err(LinalgError::NotSquare(2, 3))));
        let b = mat(2, 2, &[1, 0, 0, 1]);
        assert!(matches!(b.add(&a), Err(LinalgError::Shape(_, _))));
        assert!(close_under_bracket(&[a]).is_err());
        assert!(close_under_bracket(&[b.clone(), SparseMat::identity(3)]).is_err());
    }

    #[test]
    fn echelon_coordinates_recover_combination() {
        let vs = [vec![1, 2, 0, 1], vec![0, 1, 1, 0], vec![2, 0, 1, 3]];
        let mut e = Echelon::new(4);
        for v in &vs {
            let dense: Vec<Rational> = v.iter().map(|x| r(*x)).collect();
            assert!(e.insert(&sparse_from_dense(&dense)).unwrap());
        }
        // 3*v0 - 2*v1 + 1/2*v2
        let target: Vec<Rational> = (0..4)
            .map(|i| r(3 * vs[0][i]) - r(2 * vs[1][i]) + Rational::new(vs[2][i], 2))
            .collect();
        let coords = e.coordinates(&sparse_from_dense(&target)).unwrap().unwrap();
        assert_eq!(coords, vec![r(3), r(-2), Rational::new(1, 2)]);
        let outside = sparse_from_dense(&[r(0), r(0), r(0), r(1)]);
        // rank 3 in R^4: some vector must be outside
        let inside = e.contains(&outside).unwrap();
        let other = sparse_from_dense(&[r(0), r(0), r(1), r(0)]);
        assert!(!(inside && e.contains(&other).unwrap()));
    }

    #[test]
    fn sl2_closes_at_three() {
        let e = mat(2, 2, &[0, 1, 0, 0]);
        let f = mat(2, 2, &[0, 0, 1, 0]);
        let c = close_under_bracket(&[e, f]).unwrap();
        assert_eq!(c.dim(), 3);
        assert_eq!(c.from_generators, 2);
    }

    #[test]
    fn single_generator_has_dimension_one() {
        let g = mat(3, 3, &[1, 2, 3, 0, 1, 0, 5, 0, -2]);
        assert_eq!(close_under_bracket(&[g]).unwrap().dim(), 1);
    }

    #[test]
    fn closure_is_deterministic() {
        let gens = vec![
            mat(3, 3, &[0, 1, 0, 0, 0, 0, 0, 0, 0]),
            mat(3, 3, &[0, 0, 0, 0, 0, 1, 0, 0, 0]),
            mat(3, 3, &[0, 0, 0, 1, 0, 0, 0, 0, 0]),
            mat(3, 3, &[0, 0, 0, 0, 0, 0, 0, 1, 0]),
        ];
        let a = close_under_bracket(&gens).unwrap();
        let b = close_under_bracket(&gens).unwrap();
        assert_eq!(a.dim(), 8);
        assert_eq!(a.basis, b.basis);
    }

    #[test]
    fn block_helpers_round_trip() {
        let a = mat(2, 2, &[1, 2, 3, 4]);
        let b = mat(1, 1, &[7]);
        let d = a.block_diag(&b);
        assert_eq!(d.sub_block(0, 2), a);
        assert_eq!(d.sub_block(2, 1), b);
        assert_eq!(d.transpose().transpose(), d);
        assert_eq!(d.trace(), r(12));
    }
}

//! Exact integer linear algebra: Smith normal form and cokernels.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Panics when the rows have unequal lengths.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().cloned().map(Into::into).collect(),
        }
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone().into();
        }
        m
    }

    /// Matrix of the cyclic permutation `e_a -> e_{a + shift mod n}`.
    pub fn cyclic_shift(n: usize, shift: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for a in 0..n {
            m[((a + shift) % n, a)] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_permutation(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                let ones = (0..self.cols).filter(|&j| self[(i, j)].is_one()).count();
                let zeros = (0..self.cols).filter(|&j| self[(i, j)].is_zero()).count();
                ones == 1 && zeros + 1 == self.cols
            })
            && (0..self.cols).all(|j| (0..self.rows).filter(|&i| self[(i, j)].is_one()).count() == 1)
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        if n == 0 {
            return BigInt::one();
        }
        sign * &a[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// `row[dst] += factor * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for c in 0..self.cols {
            let v = &self[(src, c)] * factor;
            self[(dst, c)] += v;
        }
    }

    /// `col[dst] += factor * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for r in 0..self.rows {
            let v = &self[(r, src)] * factor;
            self[(r, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -&self[(i, c)];
            self[(i, c)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `A = U * S * V` with `U`, `V` unimodular and `S` diagonal, `d_1 | d_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal of `S` (length `min(rows, cols)`), all entries non-negative.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith normal form with transforms.
///
/// Pivot rule: the nonzero entry of least absolute value in the trailing
/// submatrix, first in row-major order. Row operations on the working matrix
/// are mirrored as inverse column operations on `U`, column operations as
/// inverse row operations on `V`, so `U * work * V = A` holds throughout.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pr, pc)) = min_pivot(&s, t) else {
                return SmithDecomposition { u, s, v };
            };
            s.swap_rows(t, pr);
            u.swap_cols(t, pr);
            s.swap_cols(t, pc);
            v.swap_rows(t, pc);

            let mut clean = true;
            for i in t + 1..rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = s[(i, t)].div_floor(&s[(t, t)]);
                s.add_row(i, t, &-&q);
                u.add_col(t, i, &q);
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = s[(t, j)].div_floor(&s[(t, t)]);
                s.add_col(j, t, &-&q);
                v.add_row(t, j, &q);
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // pivot must divide the rest; otherwise fold the offending row in
            let offending = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !s[(i, j)].is_multiple_of(&s[(t, t)]));
            match offending {
                Some((i, _)) => {
                    s.add_row(t, i, &BigInt::one());
                    u.add_col(i, t, &-BigInt::one());
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_col(t);
        }
    }
    SmithDecomposition { u, s, v }
}

fn min_pivot(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let x = &s[(i, j)];
            if x.is_zero() {
                continue;
            }
            let mag = x.abs();
            if best.as_ref().is_none_or(|(_, b)| mag < *b) {
                best = Some(((i, j), mag));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

/// `Z^free_rank + sum Z/t_k` with `t_1 | t_2 | ...`, every `t_k >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CokernelPresentation {
    pub free_rank: usize,
    #[serde(with = "decimal_list")]
    pub torsion: Vec<BigInt>,
}

/// Big integers as decimal strings.
pub(crate) mod decimal_list {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|x| x.parse().map_err(D::Error::custom))
            .collect()
    }
}

impl CokernelPresentation {
    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

/// Cokernel of `A: Z^cols -> Z^rows`.
pub fn cokernel(a: &IntMatrix) -> CokernelPresentation {
    cokernel_of(a.rows(), &smith_normal_form(a))
}

pub(crate) fn cokernel_of(rows: usize, snf: &SmithDecomposition) -> CokernelPresentation {
    let diag = snf.diagonal();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    CokernelPresentation {
        free_rank: rows - rank,
        torsion: diag.into_iter().filter(|d| *d > BigInt::one()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check(a: &IntMatrix) -> SmithDecomposition {
        let snf = smith_normal_form(a);
        assert_eq!(&(&snf.u * &snf.s) * &snf.v, *a, "reconstruction of {a}");
        assert_eq!(snf.u.determinant().abs(), BigInt::one());
        assert_eq!(snf.v.determinant().abs(), BigInt::one());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j {
                    assert!(snf.s[(i, j)].is_zero());
                }
            }
        }
        snf
    }

    #[test]
    fn snf_examples() {
        let snf = check(&IntMatrix::diagonal(&[2, 3]));
        assert_eq!(snf.diagonal(), big(&[1, 6]));
        let snf = check(&IntMatrix::zeros(2, 3));
        assert_eq!(snf.diagonal(), big(&[0, 0]));
        let snf = check(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(snf.diagonal(), big(&[2, 4]));
    }

    #[test]
    fn snf_empty_and_degenerate() {
        let snf = check(&IntMatrix::zeros(0, 0));
        assert!(snf.diagonal().is_empty());
        let snf = check(&IntMatrix::zeros(0, 3));
        assert_eq!(snf.v, IntMatrix::identity(3));
        let snf = check(&IntMatrix::from_rows(&[vec![-4], vec![6]]));
        assert_eq!(snf.diagonal(), big(&[2]));
    }

    #[test]
    fn snf_is_deterministic() {
        let a = IntMatrix::from_rows(&[vec![3, -7, 2], vec![5, 1, -9], vec![4, 4, 6]]);
        assert_eq!(smith_normal_form(&a), smith_normal_form(&a));
    }

    #[test]
    fn cokernel_examples() {
        let shift = |m, k| IntMatrix::cyclic_shift(m, k).sub(&IntMatrix::identity(m));
        let c = cokernel(&shift(2, 1));
        assert_eq!(c, CokernelPresentation { free_rank: 1, torsion: vec![] });
        let c = cokernel(&IntMatrix::zeros(5, 5));
        assert_eq!(c.free_rank, 5);
        let c = cokernel(&shift(4, 2));
        assert_eq!(c, CokernelPresentation { free_rank: 2, torsion: vec![] });
        let c = cokernel(&IntMatrix::diagonal(&[2, 3, 0]));
        assert_eq!(c, CokernelPresentation { free_rank: 1, torsion: big(&[6]) });
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]).determinant(), BigInt::from(-8));
        assert_eq!(IntMatrix::cyclic_shift(3, 1).determinant(), BigInt::one());
        assert_eq!(IntMatrix::cyclic_shift(2, 1).determinant(), BigInt::from(-1));
        assert_eq!(IntMatrix::zeros(0, 0).determinant(), BigInt::one());
        assert!(IntMatrix::from_rows(&[vec![0, 1], vec![0, 2]]).determinant().is_zero());
    }

    #[test]
    fn shift_matrices_are_permutations() {
        for n in 1..8 {
            for k in 0..n {
                assert!(IntMatrix::cyclic_shift(n, k).is_permutation());
            }
        }
        assert!(!IntMatrix::diagonal(&[1, 2]).is_permutation());
    }
}

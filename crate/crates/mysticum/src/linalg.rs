//! Dense exact linear algebra over the rationals.
//!
//! Rank uses one-step fraction-free (Bareiss) elimination on primitive
//! integer rows, so intermediate entries stay bounded by minors of the
//! input. Nullspace and solving reduce over Q but re-normalize every pivot
//! row to its primitive integer form, which keeps the same growth bound in
//! practice while making the reduced echelon form directly canonical.

use num::bigint::BigInt;
use num::{One, Zero};

use crate::rat::{ints_to_rats, primitive_from_rats, Rat};

/// Dense row-major matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Rat>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        RatMatrix { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, entries: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row);
        }
        RatMatrix { rows: r, cols: c, entries }
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rat {
        &mut self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    fn primitive_int_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| primitive_from_rats(self.row(i))).collect()
    }

    /// Exact rank over Q, via fraction-free Bareiss elimination.
    pub fn rank(&self) -> usize {
        int_rank(self.primitive_int_rows(), self.cols)
    }

    /// Basis of the right kernel: canonical primitive integer vectors, one
    /// per free column of the reduced echelon form, ordered by free column.
    /// Empty when the matrix has full column rank.
    pub fn nullspace(&self) -> Vec<Vec<BigInt>> {
        let (rref, pivots) = rref_int_rows(self.primitive_int_rows(), self.cols);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            // Pivot variables are read off the reduced form; the free
            // variable is set to the pivot "denominator" so the vector is
            // integral from the start.
            let mut v = vec![Rat::zero(); self.cols];
            v[fc] = Rat::one();
            for (r, &pc) in pivots.iter().enumerate() {
                let piv = &rref[r][pc];
                v[pc] = -Rat::new(rref[r][fc].clone(), BigInt::one()) / Rat::new(piv.clone(), BigInt::one());
            }
            basis.push(primitive_from_rats(&v));
        }
        basis
    }
}

/// Rank of integer rows by one-step Bareiss.
pub(crate) fn int_rank(mut m: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = m.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let t = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = &t / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Row-reduced echelon form over Q with every row rescaled to primitive
/// integers (so the result is canonical per row space). Returns the rows
/// and the pivot columns.
pub(crate) fn rref_int_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut m: Vec<Vec<Rat>> = rows.iter().map(|r| ints_to_rats(r)).collect();
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for j in c..cols {
            let q = &m[r][j] / &inv;
            m[r][j] = q;
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let q = &m[i][j] - &f * &m[r][j];
                    m[i][j] = q;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let out = m
        .into_iter()
        .map(|row| {
            let ints = primitive_from_rats(&row);
            if ints.iter().all(|x| x.is_zero()) {
                vec![BigInt::zero(); cols]
            } else {
                ints
            }
        })
        .collect();
    (out, pivots)
}

/// Solves A·x = b exactly. Returns None when the system is inconsistent;
/// with multiple solutions the free variables are set to zero.
pub fn solve_exact(a: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(a.rows, b.len());
    let n = a.cols;
    let mut m: Vec<Vec<Rat>> = (0..a.rows)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(b[i].clone());
            row
        })
        .collect();
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for j in c..=n {
            let q = &m[r][j] / &inv;
            m[r][j] = q;
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=n {
                    let q = &m[i][j] - &f * &m[r][j];
                    m[i][j] = q;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    for row in &m[r..] {
        if row[..n].iter().all(|x| x.is_zero()) && !row[n].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][n].clone();
    }
    Some(x)
}

/// Determinant by fraction-free elimination (exact). Square matrices only.
pub fn determinant(a: &RatMatrix) -> Rat {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut m: Vec<Vec<Rat>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return Rat::zero() };
        if p != c {
            m.swap(c, p);
            det = -det;
        }
        let piv = m[c][c].clone();
        det *= &piv;
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &piv;
            for j in c..n {
                let q = &m[i][j] - &f * &m[c][j];
                m[i][j] = q;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};
    use proptest::prelude::*;

    fn eval_row_conic(x: &Rat, y: &Rat, z: &Rat) -> Vec<Rat> {
        vec![x * x, x * y, x * z, y * y, y * z, z * z]
    }

    fn circle_point(t: &Rat) -> (Rat, Rat, Rat) {
        let one = Rat::one();
        (&one - t * t, rat(2) * t, &one + t * t)
    }

    #[test]
    fn rank_identity_and_duplicates() {
        assert_eq!(RatMatrix::identity(3).rank(), 3);
        let m = RatMatrix::from_rows(vec![
            vec![rat(1), rat(2), rat(3)],
            vec![rat(1), rat(2), rat(3)],
        ]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rank_of_conic_evaluation_matrix_matches_determinant_oracle() {
        // 6 unit-circle points: the 6x6 degree-2 evaluation matrix always
        // has the circle in its kernel, so the determinant-expansion oracle
        // gives 0 and the rank is exactly 5.
        let ts: Vec<Rat> = [(0, 1), (1, 1), (-1, 2), (2, 1), (-3, 1), (2, 5)]
            .iter()
            .map(|&(n, d)| ratio(n, d))
            .collect();
        let rows: Vec<Vec<Rat>> = ts
            .iter()
            .map(|t| {
                let (x, y, z) = circle_point(t);
                eval_row_conic(&x, &y, &z)
            })
            .collect();
        let m = RatMatrix::from_rows(rows);
        // Independent oracle: cofactor-expansion determinant.
        fn det_expand(m: &[Vec<Rat>]) -> Rat {
            let n = m.len();
            if n == 1 {
                return m[0][0].clone();
            }
            let mut acc = Rat::zero();
            for (j, mj) in m[0].iter().enumerate() {
                if mj.is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Rat>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(k, _)| k != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = mj * det_expand(&minor);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
        let rows_vec: Vec<Vec<Rat>> = (0..6).map(|i| m.row(i).to_vec()).collect();
        let det = det_expand(&rows_vec);
        assert!(det.is_zero());
        assert_eq!(determinant(&m), det);
        assert_eq!(m.rank(), 5);

        // Full rank needs a point off the conic: replace one row.
        let mut rows2: Vec<Vec<Rat>> = (0..6).map(|i| m.row(i).to_vec()).collect();
        rows2[5] = eval_row_conic(&rat(1), &rat(1), &rat(1));
        let m2 = RatMatrix::from_rows(rows2.clone());
        let det2 = det_expand(&rows2);
        assert!(!det2.is_zero());
        assert_eq!(determinant(&m2), det2);
        assert_eq!(m2.rank(), 6);
    }

    #[test]
    fn nullspace_simple_cases() {
        let m = RatMatrix::from_rows(vec![vec![rat(1), rat(0), rat(0)]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        assert_eq!(ns[0], vec![0.into(), 1.into(), 0.into()]);
        assert_eq!(ns[1], vec![0.into(), 0.into(), 1.into()]);
        assert!(RatMatrix::identity(3).nullspace().is_empty());
    }

    #[test]
    fn nullspace_of_five_circle_points_is_the_circle() {
        let ts: Vec<Rat> = [(0, 1), (1, 1), (-1, 1), (2, 1), (3, 1)]
            .iter()
            .map(|&(n, d)| ratio(n, d))
            .collect();
        let rows: Vec<Vec<Rat>> = ts
            .iter()
            .map(|t| {
                let (x, y, z) = circle_point(t);
                eval_row_conic(&x, &y, &z)
            })
            .collect();
        let ns = RatMatrix::from_rows(rows).nullspace();
        assert_eq!(ns.len(), 1);
        // x^2 + y^2 - z^2 in graded-lex order [x2 xy xz y2 yz z2].
        let circle: Vec<BigInt> =
            vec![1.into(), 0.into(), 0.into(), 1.into(), 0.into(), (-1).into()];
        assert_eq!(ns[0], circle);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = RatMatrix::from_rows(vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]]);
        assert!(solve_exact(&a, &[rat(1), rat(3)]).is_none());
        let x = solve_exact(&a, &[rat(1), rat(2)]).unwrap();
        assert_eq!(x, vec![rat(1), rat(0)]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn rank_equals_transpose_rank(rows in 1usize..=12, cols in 1usize..=15, seed in any::<u64>()) {
            let mut s = seed;
            let mut next = move || { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (s >> 33) as i64 % 7 - 3 };
            let m = RatMatrix::from_rows((0..rows).map(|_| (0..cols).map(|_| rat(next())).collect()).collect());
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn nullspace_vectors_annihilate(rows in 1usize..=8, cols in 1usize..=10, seed in any::<u64>()) {
            let mut s = seed;
            let mut next = move || { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (s >> 33) as i64 % 5 - 2 };
            let m = RatMatrix::from_rows((0..rows).map(|_| (0..cols).map(|_| rat(next())).collect()).collect());
            let ns = m.nullspace();
            prop_assert_eq!(ns.len(), cols - m.rank());
            for v in &ns {
                for i in 0..rows {
                    let mut acc = Rat::zero();
                    for j in 0..cols {
                        acc += m.at(i, j) * Rat::from_integer(v[j].clone());
                    }
                    prop_assert!(acc.is_zero());
                }
            }
            // pairwise independence: stacked rank equals count
            if !ns.is_empty() {
                let stacked = RatMatrix::from_rows(ns.iter().map(|v| ints_to_rats(v)).collect());
                prop_assert_eq!(stacked.rank(), ns.len());
            }
        }
    }
}

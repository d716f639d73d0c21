use std::fmt;

use crate::error::{CoreError, Result};

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, data: vec![0; nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn scalar(n: usize, s: i64) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, s);
        }
        m
    }

    /// Builds from rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(CoreError::DimensionMismatch { expected: ncols, found: bad.len() });
        }
        Ok(Self { nrows: rows.len(), ncols, data: rows.concat() })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.ncols + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        if self.ncols == 0 {
            return vec![Vec::new(); self.nrows];
        }
        self.data.chunks(self.ncols).map(<[i64]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.nrows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "matrix shapes do not compose");
        let mut out = Self::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.ncols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        (0..self.nrows)
            .map(|i| (0..self.ncols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        Self {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        Self {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Block-diagonal matrix with `copies` copies of `self`.
    pub fn block_diagonal(&self, copies: usize) -> Self {
        let mut out = Self::zeros(self.nrows * copies, self.ncols * copies);
        for c in 0..copies {
            for i in 0..self.nrows {
                for j in 0..self.ncols {
                    out.set(c * self.nrows + i, c * self.ncols + j, self.get(i, j));
                }
            }
        }
        out
    }

    /// Determinant via fraction-free elimination (Bareiss).
    pub fn det(&self) -> i64 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.nrows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> =
            self.rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                let Some(swap) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                    return 0;
                };
                a.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).expect("determinant overflows i64")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// `(U, D, V)` with `U·M·V = D`, `U` and `V` unimodular and `D` diagonal
/// with nonnegative entries `d₁ | d₂ | …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.nrows.min(self.d.ncols)).map(|i| self.d.get(i, i)).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|&&x| x != 0).count()
    }

    /// Columns of `V` spanning ker(M); a saturated basis.
    pub fn kernel_basis(&self) -> IntMatrix {
        let r = self.rank();
        let n = self.v.ncols;
        let mut k = IntMatrix::zeros(self.v.nrows, n - r);
        for (c, j) in (r..n).enumerate() {
            for i in 0..self.v.nrows {
                k.set(i, c, self.v.get(i, j));
            }
        }
        k
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.nrows, m.ncols);
    let mut d: Vec<Vec<i128>> =
        m.rows().into_iter().map(|row| row.into_iter().map(i128::from).collect()).collect();
    let mut u = identity128(r);
    let mut v = identity128(c);

    for t in 0..r.min(c) {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&d, t) else {
                return finish(u, d, v, r, c);
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);

            let p = d[t][t];
            let mut clean = true;
            for i in t + 1..r {
                let qt = d[i][t].div_euclid(p);
                if qt != 0 {
                    row_axpy(&mut d, i, t, -qt);
                    row_axpy(&mut u, i, t, -qt);
                }
                clean &= d[i][t] == 0;
            }
            for j in t + 1..c {
                let qt = d[t][j].div_euclid(p);
                if qt != 0 {
                    col_axpy(&mut d, j, t, -qt);
                    col_axpy(&mut v, j, t, -qt);
                }
                clean &= d[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| d[i][j] % p != 0));
            match offender {
                Some(i) => {
                    row_axpy(&mut d, t, i, 1);
                    row_axpy(&mut u, t, i, 1);
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            for x in d[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    finish(u, d, v, r, c)
}

fn identity128(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

fn smallest_nonzero(d: &[Vec<i128>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, i128)> = None;
    for (i, row) in d.iter().enumerate().skip(t) {
        for (j, &x) in row.iter().enumerate().skip(t) {
            if x != 0 && best.is_none_or(|(_, _, b)| x.abs() < b) {
                best = Some((i, j, x.abs()));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn swap_cols(m: &mut [Vec<i128>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// row[dst] += k · row[src]
fn row_axpy(m: &mut [Vec<i128>], dst: usize, src: usize, k: i128) {
    let src_row = m[src].clone();
    for (x, s) in m[dst].iter_mut().zip(src_row) {
        *x += k * s;
    }
}

/// col[dst] += k · col[src]
fn col_axpy(m: &mut [Vec<i128>], dst: usize, src: usize, k: i128) {
    for row in m.iter_mut() {
        row[dst] += k * row[src];
    }
}

fn to_i64(m: Vec<Vec<i128>>, r: usize, c: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(r, c);
    for (i, row) in m.into_iter().enumerate() {
        for (j, x) in row.into_iter().enumerate() {
            out.set(i, j, i64::try_from(x).expect("Smith form entry overflows i64"));
        }
    }
    out
}

fn finish(u: Vec<Vec<i128>>, d: Vec<Vec<i128>>, v: Vec<Vec<i128>>, r: usize, c: usize) -> SmithForm {
    SmithForm { u: to_i64(u, r, r), d: to_i64(d, r, c), v: to_i64(v, c, c) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn check(a: &IntMatrix, s: &SmithForm) {
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        assert_eq!(s.u.det().abs(), 1);
        assert_eq!(s.v.det().abs(), 1);
        let diag = s.diagonal();
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                if i != j {
                    assert_eq!(s.d.get(i, j), 0);
                }
            }
        }
        for w in diag.windows(2) {
            assert!(w[0] >= 0 && w[1] >= 0);
            if w[0] != 0 {
                assert_eq!(w[1] % w[0], 0);
            } else {
                assert_eq!(w[1], 0);
            }
        }
    }

    #[test]
    fn snf_examples() {
        let s = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
        assert_eq!(s.u, IntMatrix::identity(3));
        assert_eq!(s.v, IntMatrix::identity(3));
        assert_eq!(smith_normal_form(&m(&[&[2]])).diagonal(), vec![2]);
        let a = m(&[&[2, 4], &[6, 8]]);
        let s = smith_normal_form(&a);
        check(&a, &s);
        assert_eq!(s.diagonal(), vec![2, 4]);
    }

    #[test]
    fn snf_rectangular_and_zero() {
        let a = m(&[&[0, 0, 0], &[0, 0, 0]]);
        let s = smith_normal_form(&a);
        check(&a, &s);
        assert_eq!(s.rank(), 0);
        assert_eq!(s.kernel_basis().ncols(), 3);
        let a = m(&[&[1, 1], &[-1, -1], &[2, 3]]);
        let s = smith_normal_form(&a);
        check(&a, &s);
        assert_eq!(s.diagonal(), vec![1, 1]);
    }

    #[test]
    fn kernel_basis_is_kernel() {
        let a = m(&[&[1, 1, 0], &[0, 0, 0], &[2, 2, 0]]);
        let s = smith_normal_form(&a);
        let k = s.kernel_basis();
        assert_eq!(k.ncols(), 2);
        assert!(a.mul(&k).rows().iter().flatten().all(|&x| x == 0));
    }

    #[test]
    fn determinants() {
        assert_eq!(m(&[&[2, 4], &[6, 8]]).det(), -8);
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det(), -1);
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).det(), 0);
        assert_eq!(IntMatrix::zeros(0, 0).det(), 1);
    }

    proptest! {
        #[test]
        fn snf_round_trip(rows in 1usize..5, cols in 1usize..5, seed in prop::collection::vec(-9i64..=9, 16)) {
            let data: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 4 + j]).collect()).collect();
            let a = IntMatrix::from_rows(&data).unwrap();
            let s = smith_normal_form(&a);
            check(&a, &s);
            if a.is_square() {
                let prod: i64 = s.diagonal().iter().product();
                prop_assert_eq!(prod, a.det().abs());
            }
        }
    }
}

//! Dense exact matrices with deterministic Gaussian elimination.

use std::fmt;

use super::field::Field;
use super::scalar::{Rational, Scalar};

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

pub type QMatrix = Matrix<Rational>;
pub type CMatrix = Matrix<Scalar>;

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.data[k * n + k] = F::one();
        }
        m
    }

    /// Panics if the rows are ragged or do not have `cols` entries.
    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix row");
            data.extend(row);
        }
        Matrix { rows: r, cols, data }
    }

    pub fn from_columns(n_rows: usize, cols: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(n_rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), n_rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].plus(&a.times(b));
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.plus(&a.times(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix sum shape mismatch");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.plus(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix difference shape mismatch");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.minus(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| x.times(c))
    }

    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows, "hstack row mismatch");
        let mut m = Self::zeros(self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..o.cols {
                m.set(i, self.cols + j, o.get(i, j).clone());
            }
        }
        m
    }

    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                m.set(i, jj, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend(self.row(i).iter().cloned());
        }
        Matrix { rows: idx.len(), cols: self.cols, data }
    }

    /// Reduced row echelon form. Pivots are taken as the first nonzero entry
    /// scanning columns left to right, rows top to bottom.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv();
            for j in c..m.cols {
                let v = m.get(r, j).times(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let pr = m.get(r, j);
                    if pr.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j).minus(&f.times(pr));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space as columns, one per free column of the RREF.
    pub fn kernel(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(self.cols, free.len());
        for (jj, &f) in free.iter().enumerate() {
            k.set(f, jj, F::one());
            for (row, &pc) in pivots.iter().enumerate() {
                k.set(pc, jj, r.get(row, f).negate());
            }
        }
        k
    }

    /// Basis of the column space: the pivot columns of `self`.
    pub fn column_space(&self) -> Self {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    /// Solve `self · X = rhs`; `None` when some column is inconsistent.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows, "solve shape mismatch");
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.cols, rhs.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, r.get(row, self.cols + j).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&Self::identity(self.rows))?;
        (self.mul(&x) == Self::identity(self.rows)).then_some(x)
    }

    /// Square and of full rank (the empty matrix counts).
    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, o: &Self) -> Self {
        let mut m = Self::zeros(self.rows + o.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                m.set(self.rows + i, self.cols + j, o.get(i, j).clone());
            }
        }
        m
    }
}

impl CMatrix {
    pub fn conj(&self) -> Self {
        self.map(Scalar::conj)
    }

    /// Real form of a complex-linear map: `[[Re, -Im], [Im, Re]]` acting on
    /// `(re, im)` coordinate vectors.
    pub fn realify(&self) -> QMatrix {
        let (r, c) = (self.rows, self.cols);
        let mut m = QMatrix::zeros(2 * r, 2 * c);
        for i in 0..r {
            for j in 0..c {
                let z = self.get(i, j);
                m.set(i, j, z.re.clone());
                m.set(i, c + j, -z.im.clone());
                m.set(r + i, j, z.im.clone());
                m.set(r + i, c + j, z.re.clone());
            }
        }
        m
    }
}

impl QMatrix {
    pub fn to_complex(&self) -> CMatrix {
        self.map(|x| Scalar::real(x.clone()))
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

/// Realify a complex vector as `(re, im)`.
pub fn realify_vec(v: &[Scalar]) -> Vec<Rational> {
    v.iter().map(|z| z.re.clone()).chain(v.iter().map(|z| z.im.clone())).collect()
}

/// Inverse of [`realify_vec`].
pub fn complexify_vec(v: &[Rational]) -> Vec<Scalar> {
    assert!(v.len() % 2 == 0, "realified vector must have even length");
    let m = v.len() / 2;
    (0..m).map(|k| Scalar::new(v[k].clone(), v[m + k].clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::scalar::qi;

    fn qm(rows: &[&[i64]]) -> QMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect(), cols)
    }

    #[test]
    fn kernel_of_zero_and_identity() {
        assert_eq!(QMatrix::zeros(2, 2).kernel().cols(), 2);
        assert_eq!(QMatrix::identity(3).kernel().cols(), 0);
    }

    #[test]
    fn gaussian_kernel_matches_hand_solution() {
        // [[1, i], [i, -1]] v = 0  ⇔  v1 = -i v2, i.e. the line through (1, i).
        let i = Scalar::i();
        let m = CMatrix::from_rows(
            vec![vec![Scalar::one(), i.clone()], vec![i.clone(), Scalar::from_int(-1)]],
            2,
        );
        let k = m.kernel();
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert!(!v[1].is_zero());
        assert_eq!(v[0], -(&v[1] * &i));
        assert!(m.apply(&v).iter().all(Field::is_zero));
    }

    #[test]
    fn solve_and_inverse() {
        let a = qm(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), QMatrix::identity(2));
        let singular = qm(&[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_none());
        assert!(singular.solve(&qm(&[&[1], &[0]])).is_none());
        assert!(QMatrix::zeros(0, 0).is_invertible());
    }

    #[test]
    fn realify_is_a_ring_map() {
        let a = CMatrix::from_rows(
            vec![vec!["1+2i".parse().unwrap(), "3".parse().unwrap()], vec!["-i".parse().unwrap(), "1/2".parse().unwrap()]],
            2,
        );
        let b = a.conj().transpose();
        assert_eq!(a.mul(&b).realify(), a.realify().mul(&b.realify()));
        let v = vec![Scalar::i(), Scalar::from_int(2)];
        assert_eq!(realify_vec(&a.apply(&v)), a.realify().apply(&realify_vec(&v)));
        assert_eq!(complexify_vec(&realify_vec(&v)), v);
    }
}

//! Dense exact linear algebra over F_{p^m}.

use crate::error::{Error, Result};
use crate::field::{FieldRef, Fq};

#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub field: FieldRef,
    pub rows: usize,
    pub cols: usize,
    data: Vec<Fq>,
}

impl Mat {
    pub fn zero(field: &FieldRef, rows: usize, cols: usize) -> Mat {
        Mat {
            field: field.clone(),
            rows,
            cols,
            data: vec![Fq::zero(field); rows * cols],
        }
    }

    pub fn identity(field: &FieldRef, n: usize) -> Mat {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, Fq::one(field));
        }
        m
    }

    pub fn from_rows(field: &FieldRef, rows: Vec<Vec<Fq>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row);
        }
        Mat {
            field: field.clone(),
            rows: r,
            cols: c,
            data,
        }
    }

    /// Integer matrix reduced into the field.
    pub fn from_int(field: &FieldRef, m: &[Vec<i64>]) -> Mat {
        let rows = m.len();
        let cols = m.first().map_or(0, |r| r.len());
        let mut out = Mat::zero(field, rows, cols);
        for (i, row) in m.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                out.set(i, j, Fq::from_int(field, v));
            }
        }
        out
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &Fq {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fq) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fq] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn add(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.add(b))
            .collect();
        Mat {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.sub(b))
            .collect();
        Mat {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: &Fq) -> Mat {
        let data = self.data.iter().map(|a| a.mul(c)).collect();
        Mat {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn matmul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Mat::zero(&self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.at(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn matpow(&self, mut e: u64) -> Mat {
        assert_eq!(self.rows, self.cols);
        let mut acc = Mat::identity(&self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&base);
            }
            base = base.matmul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn apply(&self, v: &[Fq]) -> Vec<Fq> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Fq::zero(&self.field);
                for j in 0..self.cols {
                    let a = self.at(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc = acc.add(&a.mul(&v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j).clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = vec![];
        let mut r = 0;
        for c in 0..self.cols {
            let Some(pr) = (r..self.rows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                let tmp = self.at(r, j).clone();
                self.set(r, j, self.at(pr, j).clone());
                self.set(pr, j, tmp);
            }
            let inv = self.at(r, c).inv().expect("pivot nonzero");
            for j in 0..self.cols {
                let v = self.at(r, j).mul(&inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && !self.at(i, c).is_zero() {
                    let f = self.at(i, c).clone();
                    for j in 0..self.cols {
                        let v = self.at(i, j).sub(&f.mul(self.at(r, j)));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel, each vector normalized with a unit free
    /// coordinate, listed in increasing free-column order.
    pub fn kernel_basis(&self) -> Vec<Vec<Fq>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = vec![];
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Fq::zero(&self.field); self.cols];
            v[free] = Fq::one(&self.field);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = m.at(r, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of self * x = b, if consistent.
    pub fn solve(&self, b: &[Fq]) -> Option<Vec<Fq>> {
        assert_eq!(self.rows, b.len());
        let mut aug = Mat::zero(&self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Fq::zero(&self.field); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.at(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Result<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zero(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, n + i, Fq::one(&self.field));
        }
        let pivots = aug.rref();
        if pivots.len() < n {
            return Err(Error::Internal("matrix not invertible".into()));
        }
        let mut out = Mat::zero(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.at(i, n + j).clone());
            }
        }
        Ok(out)
    }

    pub fn det(&self) -> Fq {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Fq::one(&self.field);
        let mut r = 0;
        for c in 0..n {
            let Some(pr) = (r..n).find(|&i| !m.at(i, c).is_zero()) else {
                return Fq::zero(&self.field);
            };
            if pr != r {
                for j in 0..n {
                    let tmp = m.at(r, j).clone();
                    m.set(r, j, m.at(pr, j).clone());
                    m.set(pr, j, tmp);
                }
                det = det.neg();
            }
            det = det.mul(m.at(r, c));
            let inv = m.at(r, c).inv().expect("pivot nonzero");
            for i in r + 1..n {
                if !m.at(i, c).is_zero() {
                    let f = m.at(i, c).mul(&inv);
                    for j in c..n {
                        let v = m.at(i, j).sub(&f.mul(m.at(r, j)));
                        m.set(i, j, v);
                    }
                }
            }
            r += 1;
        }
        det
    }

    /// Minimal polynomial via the first Krylov dependency, coefficients
    /// ascending, monic.
    pub fn min_poly(&self) -> Vec<Fq> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        // vectorized powers I, A, A^2, ... as rows of a growing system
        let mut powers: Vec<Vec<Fq>> = vec![];
        let mut cur = Mat::identity(&self.field, n);
        loop {
            powers.push(cur.data.clone());
            // find dependency: solve powers[0..k-1]^T * x = powers[k-1]
            let k = powers.len();
            if k >= 2 {
                let mut sys = Mat::zero(&self.field, n * n, k - 1);
                for (col, pw) in powers[..k - 1].iter().enumerate() {
                    for (row, v) in pw.iter().enumerate() {
                        sys.set(row, col, v.clone());
                    }
                }
                if let Some(x) = sys.solve(&powers[k - 1]) {
                    let mut coeffs: Vec<Fq> = x.iter().map(|c| c.neg()).collect();
                    coeffs.push(Fq::one(&self.field));
                    return coeffs;
                }
            }
            cur = cur.matmul(self);
            assert!(powers.len() <= n + 1, "minimal polynomial search overran");
        }
    }
}

/// Evaluate a polynomial (ascending coefficients) at a square matrix.
pub fn poly_at_mat(coeffs: &[Fq], m: &Mat) -> Mat {
    let n = m.rows;
    let mut acc = Mat::zero(&m.field, n, n);
    for c in coeffs.iter().rev() {
        acc = acc.matmul(m);
        if !c.is_zero() {
            for i in 0..n {
                let v = acc.at(i, i).add(c);
                acc.set(i, i, v);
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    #[test]
    fn rref_kernel_solve() {
        let f = FieldSpec::new(3, 1).unwrap();
        let m = Mat::from_int(&f, &[vec![1, 2, 0], vec![0, 1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        for v in &k {
            assert!(m.apply(v).iter().all(|x| x.is_zero()));
        }
        let b = vec![Fq::from_int(&f, 1), Fq::from_int(&f, 2)];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.apply(&x), b);
    }

    #[test]
    fn det_and_inverse() {
        let f = FieldSpec::new(5, 1).unwrap();
        let m = Mat::from_int(&f, &[vec![1, 2], vec![3, 4]]);
        assert_eq!(m.det(), Fq::from_int(&f, -2));
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv), Mat::identity(&f, 2));
    }

    #[test]
    fn min_poly_of_jordan_block() {
        let f = FieldSpec::new(3, 1).unwrap();
        let m = Mat::from_int(&f, &[vec![1, 1], vec![0, 1]]);
        // (T - 1)^2 = T^2 - 2T + 1
        let mp = m.min_poly();
        assert_eq!(
            mp,
            vec![
                Fq::from_int(&f, 1),
                Fq::from_int(&f, -2),
                Fq::from_int(&f, 1)
            ]
        );
        assert!(poly_at_mat(&mp, &m).is_zero());
    }
}

use std::fmt;

use super::field::PrimeField;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
enum Storage {
    /// p = 2: one bit per entry, rows padded to whole words.
    Bits { words: usize, data: Vec<u64> },
    /// p > 2: one byte per entry.
    Bytes(Vec<u8>),
}

/// Dense matrix over F_p in row-major order.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixFp {
    field: PrimeField,
    rows: usize,
    cols: usize,
    storage: Storage,
}

impl MatrixFp {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> MatrixFp {
        let storage = if field.p() == 2 {
            let words = cols.div_ceil(64);
            Storage::Bits { words, data: vec![0; words * rows] }
        } else {
            Storage::Bytes(vec![0; rows * cols])
        };
        MatrixFp { field, rows, cols, storage }
    }

    pub fn identity(field: PrimeField, n: usize) -> MatrixFp {
        let mut m = MatrixFp::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from a function of (row, col); values are reduced mod p.
    pub fn from_fn(field: PrimeField, rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> MatrixFp {
        let mut m = MatrixFp::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = field.reduce(f(i, j));
                if v != 0 {
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    /// The nilpotent shift N_n sending basis vector i to i + 1 (column i has a one in row i + 1).
    pub fn shift(field: PrimeField, n: usize) -> MatrixFp {
        MatrixFp::from_fn(field, n, n, |i, j| (i == j + 1) as i64)
    }

    pub fn field(&self) -> PrimeField {
        self.field
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        debug_assert!(i < self.rows && j < self.cols);
        match &self.storage {
            Storage::Bits { words, data } => ((data[i * words + j / 64] >> (j % 64)) & 1) as u8,
            Storage::Bytes(data) => data[i * self.cols + j],
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        debug_assert!(i < self.rows && j < self.cols);
        let v = v % self.field.p() as u8;
        match &mut self.storage {
            Storage::Bits { words, data } => {
                let w = &mut data[i * *words + j / 64];
                if v == 1 {
                    *w |= 1 << (j % 64);
                } else {
                    *w &= !(1 << (j % 64));
                }
            }
            Storage::Bytes(data) => data[i * self.cols + j] = v,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.storage {
            Storage::Bits { data, .. } => data.iter().all(|&w| w == 0),
            Storage::Bytes(data) => data.iter().all(|&b| b == 0),
        }
    }

    /// F_p-rank by Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        match &self.storage {
            Storage::Bits { words, data } => rank_bits(data.clone(), self.rows, self.cols, *words),
            Storage::Bytes(data) => rank_bytes(data.clone(), self.rows, self.cols, self.field),
        }
    }

    pub fn matmul(&self, other: &MatrixFp) -> Result<MatrixFp> {
        if self.field != other.field || self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = MatrixFp::zeros(self.field, self.rows, other.cols);
        match (&self.storage, &other.storage, &mut out.storage) {
            (Storage::Bits { words: wa, data: a }, Storage::Bits { words: wb, data: b }, Storage::Bits { data: c, .. }) => {
                for i in 0..self.rows {
                    let crow = &mut c[i * wb..(i + 1) * wb];
                    for k in 0..self.cols {
                        if (a[i * wa + k / 64] >> (k % 64)) & 1 == 1 {
                            for (x, y) in crow.iter_mut().zip(&b[k * wb..(k + 1) * wb]) {
                                *x ^= y;
                            }
                        }
                    }
                }
            }
            (Storage::Bytes(a), Storage::Bytes(b), Storage::Bytes(c)) => {
                let p = self.field.p();
                let n = other.cols;
                // accumulate in u32 and reduce once per row; (p-1)^2 * cols stays far below 2^32
                // for the dimensions this type is used with, and we reduce early otherwise
                let limit = (u32::MAX / ((p - 1) * (p - 1))) as usize;
                let mut acc = vec![0u32; n];
                for i in 0..self.rows {
                    acc.iter_mut().for_each(|x| *x = 0);
                    let mut pending = 0;
                    for k in 0..self.cols {
                        let aik = a[i * self.cols + k] as u32;
                        if aik == 0 {
                            continue;
                        }
                        for (x, &y) in acc.iter_mut().zip(&b[k * n..(k + 1) * n]) {
                            *x += aik * y as u32;
                        }
                        pending += 1;
                        if pending + 1 >= limit {
                            acc.iter_mut().for_each(|x| *x %= p);
                            pending = 0;
                        }
                    }
                    for (j, x) in acc.iter().enumerate() {
                        c[i * n + j] = (x % p) as u8;
                    }
                }
            }
            _ => unreachable!("storage kind is determined by the field"),
        }
        Ok(out)
    }

    pub fn matpow(&self, k: u64) -> Result<MatrixFp> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!("power of a {}x{} matrix", self.rows, self.cols)));
        }
        let mut acc = MatrixFp::identity(self.field, self.rows);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.matmul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.matmul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn subtract_identity(&self) -> Result<MatrixFp> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!("{}x{} is not square", self.rows, self.cols)));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            let v = self.field.sub(self.get(i, i), 1);
            out.set(i, i, v);
        }
        Ok(out)
    }

    pub fn add_identity(&self) -> Result<MatrixFp> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!("{}x{} is not square", self.rows, self.cols)));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            let v = self.field.add(self.get(i, i), 1);
            out.set(i, i, v);
        }
        Ok(out)
    }

    /// Kronecker product; entry ((i, k), (j, l)) is a_ij * b_kl.
    pub fn kronecker(&self, other: &MatrixFp) -> Result<MatrixFp> {
        if self.field != other.field {
            return Err(Error::DimensionMismatch("fields differ".into()));
        }
        let f = self.field;
        let mut out = MatrixFp::zeros(f, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if b != 0 {
                            out.set(i * other.rows + k, j * other.cols + l, f.mul(a, b));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn block_diag(&self, other: &MatrixFp) -> Result<MatrixFp> {
        if self.field != other.field {
            return Err(Error::DimensionMismatch("fields differ".into()));
        }
        let mut out = MatrixFp::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> MatrixFp {
        let mut out = MatrixFp::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if v != 0 {
                    out.set(j, i, v);
                }
            }
        }
        out
    }
}

impl fmt::Debug for MatrixFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixFp(p={}, {}x{})", self.field.p(), self.rows, self.cols)?;
        for i in 0..self.rows.min(24) {
            let row: Vec<String> = (0..self.cols.min(24)).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

fn rank_bits(mut data: Vec<u64>, rows: usize, cols: usize, words: usize) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        let (w, bit) = (col / 64, 1u64 << (col % 64));
        let Some(piv) = (rank..rows).find(|&r| data[r * words + w] & bit != 0) else {
            continue;
        };
        if piv != rank {
            for k in 0..words {
                data.swap(piv * words + k, rank * words + k);
            }
        }
        for r in rank + 1..rows {
            if data[r * words + w] & bit != 0 {
                for k in w..words {
                    let v = data[rank * words + k];
                    data[r * words + k] ^= v;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn rank_bytes(mut data: Vec<u8>, rows: usize, cols: usize, field: PrimeField) -> usize {
    let p = field.p() as u16;
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| data[r * cols + col] != 0) else {
            continue;
        };
        if piv != rank {
            for k in 0..cols {
                data.swap(piv * cols + k, rank * cols + k);
            }
        }
        let inv = field.inv(data[rank * cols + col]) as u16;
        for k in col..cols {
            data[rank * cols + k] = (data[rank * cols + k] as u16 * inv % p) as u8;
        }
        for r in rank + 1..rows {
            let c = data[r * cols + col] as u16;
            if c == 0 {
                continue;
            }
            let nc = p - c;
            for k in col..cols {
                let v = data[rank * cols + k] as u16;
                let x = &mut data[r * cols + k];
                *x = ((*x as u16 + nc * v) % p) as u8;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn identity_rank() {
        assert_eq!(MatrixFp::identity(f(2), 3).rank(), 3);
        assert_eq!(MatrixFp::identity(f(5), 7).rank(), 7);
    }

    #[test]
    fn zero_rank() {
        assert_eq!(MatrixFp::zeros(f(3), 4, 4).rank(), 0);
    }

    #[test]
    fn shift_rank() {
        assert_eq!(MatrixFp::shift(f(2), 4).rank(), 3);
        assert_eq!(MatrixFp::shift(f(3), 70).rank(), 69);
    }

    #[test]
    fn shift_is_nilpotent() {
        let n = MatrixFp::shift(f(3), 3);
        assert!(n.matpow(3).unwrap().is_zero());
        assert!(!n.matpow(2).unwrap().is_zero());
    }

    #[test]
    fn identity_products() {
        let a = MatrixFp::from_fn(f(5), 3, 4, |i, j| (i * 7 + j * 3) as i64);
        assert_eq!(MatrixFp::identity(f(5), 3).matmul(&a).unwrap(), a);
        assert_eq!(a.matmul(&MatrixFp::identity(f(5), 4)).unwrap(), a);
        assert!(MatrixFp::identity(f(2), 5).subtract_identity().unwrap().is_zero());
        assert!(a.matmul(&a).is_err());
    }

    #[test]
    fn matpow_zero_is_identity() {
        let a = MatrixFp::from_fn(f(2), 70, 70, |i, j| ((i * j + 1) % 3) as i64);
        assert_eq!(a.matpow(0).unwrap(), MatrixFp::identity(f(2), 70));
    }

    #[test]
    fn kronecker_and_block_diag_shapes() {
        let a = MatrixFp::identity(f(3), 2);
        let b = MatrixFp::shift(f(3), 3);
        let k = a.kronecker(&b).unwrap();
        assert_eq!((k.rows(), k.cols()), (6, 6));
        assert_eq!(k.rank(), 4);
        let d = a.block_diag(&b).unwrap();
        assert_eq!(d.rank(), 4);
        assert_eq!(d.get(3, 2), 1);
    }
}

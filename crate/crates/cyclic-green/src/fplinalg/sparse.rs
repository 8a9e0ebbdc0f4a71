use super::field::PrimeField;
use super::matrix::MatrixFp;
use crate::error::{Error, Result};

/// A sparse vector: strictly increasing indices with nonzero coefficients.
pub type SparseVec = Vec<(u32, u8)>;

/// Square sparse matrix over F_p stored column by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseColumns {
    field: PrimeField,
    dim: usize,
    col_start: Vec<usize>,
    entries: Vec<(u32, u8)>,
}

impl SparseColumns {
    /// Builds from columns; each column must have increasing row indices and nonzero values.
    pub fn from_columns(field: PrimeField, cols: Vec<SparseVec>) -> Result<SparseColumns> {
        let dim = cols.len();
        let mut col_start = Vec::with_capacity(dim + 1);
        let mut entries = Vec::with_capacity(cols.iter().map(Vec::len).sum());
        col_start.push(0);
        for (j, col) in cols.into_iter().enumerate() {
            let mut prev: Option<u32> = None;
            for &(i, v) in &col {
                if i as usize >= dim || v == 0 || v as u32 >= field.p() || prev.is_some_and(|pi| pi >= i) {
                    return Err(Error::DimensionMismatch(format!("malformed sparse column {j}")));
                }
                prev = Some(i);
            }
            entries.extend(col);
            col_start.push(entries.len());
        }
        Ok(SparseColumns { field, dim, col_start, entries })
    }

    pub fn identity(field: PrimeField, dim: usize) -> SparseColumns {
        SparseColumns {
            field,
            dim,
            col_start: (0..=dim).collect(),
            entries: (0..dim as u32).map(|i| (i, 1)).collect(),
        }
    }

    pub fn from_dense(m: &MatrixFp) -> Result<SparseColumns> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!("{}x{} is not square", m.rows(), m.cols())));
        }
        let cols = (0..m.cols())
            .map(|j| (0..m.rows()).filter_map(|i| Some((i as u32, m.get(i, j))).filter(|e| e.1 != 0)).collect())
            .collect();
        SparseColumns::from_columns(m.field(), cols)
    }

    pub fn to_dense(&self) -> MatrixFp {
        let mut m = MatrixFp::zeros(self.field, self.dim, self.dim);
        for j in 0..self.dim {
            for &(i, v) in self.column(j) {
                m.set(i as usize, j, v);
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn column(&self, j: usize) -> &[(u32, u8)] {
        &self.entries[self.col_start[j]..self.col_start[j + 1]]
    }

    /// Returns this matrix minus the identity.
    pub fn minus_identity(&self) -> SparseColumns {
        let f = self.field;
        let cols = (0..self.dim)
            .map(|j| {
                let mut col: SparseVec = Vec::with_capacity(self.column(j).len() + 1);
                let mut seen = false;
                for &(i, v) in self.column(j) {
                    if i as usize == j {
                        seen = true;
                        let d = f.sub(v, 1);
                        if d != 0 {
                            col.push((i, d));
                        }
                    } else {
                        if !seen && i as usize > j {
                            seen = true;
                            col.push((j as u32, f.neg(1)));
                        }
                        col.push((i, v));
                    }
                }
                if !seen {
                    col.push((j as u32, f.neg(1)));
                }
                col
            })
            .collect();
        SparseColumns::from_columns(f, cols).expect("well formed by construction")
    }

    /// Relabels indices so that new index i is old index `order[i]`.
    pub fn permuted(&self, order: &[u32]) -> SparseColumns {
        let mut inverse = vec![0u32; self.dim];
        for (new, &old) in order.iter().enumerate() {
            inverse[old as usize] = new as u32;
        }
        let cols = order
            .iter()
            .map(|&old| {
                let mut col: SparseVec = self.column(old as usize).iter().map(|&(i, v)| (inverse[i as usize], v)).collect();
                col.sort_unstable_by_key(|e| e.0);
                col
            })
            .collect();
        SparseColumns::from_columns(self.field, cols).expect("permutation keeps columns well formed")
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &SparseColumns) -> SparseColumns {
        let shift = self.dim as u32;
        let mut cols: Vec<SparseVec> = (0..self.dim).map(|j| self.column(j).to_vec()).collect();
        cols.extend((0..other.dim).map(|j| other.column(j).iter().map(|&(i, v)| (i + shift, v)).collect()));
        SparseColumns::from_columns(self.field, cols).expect("well formed by construction")
    }
}

/// Scratch space for repeated sparse matrix-vector products.
pub struct Applier<'a> {
    m: &'a SparseColumns,
    acc: Vec<u32>,
    mark: Vec<bool>,
    support: Vec<u32>,
}

impl<'a> Applier<'a> {
    pub fn new(m: &'a SparseColumns) -> Applier<'a> {
        Applier { m, acc: vec![0; m.dim], mark: vec![false; m.dim], support: Vec::new() }
    }

    /// Computes M v.
    pub fn apply(&mut self, v: &[(u32, u8)]) -> SparseVec {
        let p = self.m.field.p();
        for &(j, c) in v {
            for &(i, t) in self.m.column(j as usize) {
                let iu = i as usize;
                if !self.mark[iu] {
                    self.mark[iu] = true;
                    self.support.push(i);
                }
                self.acc[iu] = (self.acc[iu] + c as u32 * t as u32) % p;
            }
        }
        self.support.sort_unstable();
        let out = self
            .support
            .iter()
            .filter_map(|&i| {
                let iu = i as usize;
                let c = self.acc[iu];
                self.acc[iu] = 0;
                self.mark[iu] = false;
                (c != 0).then_some((i, c as u8))
            })
            .collect();
        self.support.clear();
        out
    }
}

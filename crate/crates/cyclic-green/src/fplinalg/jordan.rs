use std::fmt;

use super::matrix::MatrixFp;
use crate::error::{Error, Result};

/// Multiplicities of Jordan block sizes 1..=q of a unipotent matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JordanType {
    counts: Vec<u64>,
}

impl JordanType {
    pub fn zero(q: usize) -> JordanType {
        JordanType { counts: vec![0; q] }
    }

    /// Builds a Jordan type from explicit multiplicities (index k-1 holds m_k).
    pub fn from_counts(counts: Vec<u64>) -> JordanType {
        JordanType { counts }
    }

    /// Recovers multiplicities from the rank profile r_k = rank((M - I)^k), k = 0..=q.
    ///
    /// Uses m_k = r_{k-1} - 2 r_k + r_{k+1} with r_{q+1} := r_q.
    pub fn from_ranks(ranks: &[usize], q: usize) -> Result<JordanType> {
        if ranks.len() != q + 1 {
            return Err(Error::Inconsistent(format!("expected {} ranks, got {}", q + 1, ranks.len())));
        }
        let r = |k: usize| ranks[k.min(q)] as i64;
        let mut counts = Vec::with_capacity(q);
        for k in 1..=q {
            let m = r(k - 1) - 2 * r(k) + r(k + 1);
            if m < 0 {
                return Err(Error::Inconsistent(format!(
                    "negative multiplicity {m} for block size {k} from ranks {ranks:?}"
                )));
            }
            counts.push(m as u64);
        }
        let jt = JordanType { counts };
        if jt.dimension() != ranks[0] as u64 {
            return Err(Error::Inconsistent(format!(
                "block sizes sum to {} but dimension is {}",
                jt.dimension(),
                ranks[0]
            )));
        }
        Ok(jt)
    }

    pub fn q(&self) -> usize {
        self.counts.len()
    }

    pub fn multiplicity(&self, k: usize) -> u64 {
        if k == 0 || k > self.counts.len() {
            0
        } else {
            self.counts[k - 1]
        }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn dimension(&self) -> u64 {
        self.counts.iter().enumerate().map(|(i, &m)| (i as u64 + 1) * m).sum()
    }

    /// Rank of (M - I)^k implied by this Jordan type.
    pub fn rank_of_power(&self, k: usize) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &m)| (i + 1).saturating_sub(k) as u64 * m)
            .sum()
    }

    pub fn add_block(&mut self, k: usize, times: u64) {
        self.counts[k - 1] += times;
    }

    pub fn merge(&mut self, other: &JordanType) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }
}

impl fmt::Display for JordanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(i, m)| format!("{}:{}", i + 1, m))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Jordan type of a unipotent matrix M with (M - I)^q = 0, from the rank profile of M - I.
pub fn jordan_type_unipotent(m: &MatrixFp, q: usize) -> Result<JordanType> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", m.rows(), m.cols())));
    }
    jordan_type_nilpotent(&m.subtract_identity()?, q)
}

/// Jordan type of I + N for a nilpotent N with N^q = 0.
pub fn jordan_type_nilpotent(n: &MatrixFp, q: usize) -> Result<JordanType> {
    if !n.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", n.rows(), n.cols())));
    }
    let dim = n.rows();
    let mut ranks = vec![dim];
    let mut power = MatrixFp::identity(n.field(), dim);
    for _ in 1..=q {
        if *ranks.last().unwrap() == 0 {
            ranks.push(0);
            continue;
        }
        power = power.matmul(n)?;
        ranks.push(power.rank());
    }
    if ranks[q] != 0 {
        return Err(Error::NotUnipotent { q });
    }
    JordanType::from_ranks(&ranks, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fplinalg::PrimeField;

    #[test]
    fn single_block() {
        let f = PrimeField::new(2).unwrap();
        let g = MatrixFp::shift(f, 4).add_identity().unwrap();
        assert_eq!(jordan_type_unipotent(&g, 4).unwrap().counts(), &[0, 0, 0, 1]);
    }

    #[test]
    fn identity_is_all_ones() {
        let f = PrimeField::new(3).unwrap();
        let jt = jordan_type_unipotent(&MatrixFp::identity(f, 5), 9).unwrap();
        assert_eq!(jt.multiplicity(1), 5);
        assert_eq!(jt.dimension(), 5);
    }

    #[test]
    fn rejects_non_unipotent() {
        let f = PrimeField::new(3).unwrap();
        let m = MatrixFp::from_fn(f, 2, 2, |i, j| if i == j { 2 } else { 0 });
        assert!(matches!(jordan_type_unipotent(&m, 3), Err(Error::NotUnipotent { .. })));
        // unipotent but of order 4 > q = 2
        let g = MatrixFp::shift(f, 4).add_identity().unwrap();
        assert!(jordan_type_unipotent(&g, 2).is_err());
    }

    #[test]
    fn negative_multiplicity_is_an_error() {
        assert!(JordanType::from_ranks(&[3, 1, 2, 0], 3).is_err());
    }
}

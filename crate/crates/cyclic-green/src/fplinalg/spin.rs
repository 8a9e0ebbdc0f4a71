//! Jordan type of a large nilpotent operator by cyclic chain spinning.
//!
//! Starting from basis vectors that are not yet leading terms, we spin chains
//! v, Tv, T^2 v, ... and reduce each vector into a semi-echelon basis with the
//! pivot at the highest index. A chain that reaches length q with T^q v = 0
//! spans a free summand. Every other chain contributes coordinates to the
//! quotient by the free part, on which T is recorded explicitly and decomposed
//! by rank profile.

use super::field::PrimeField;
use super::jordan::{jordan_type_nilpotent, JordanType};
use super::matrix::MatrixFp;
use super::sparse::{Applier, SparseColumns, SparseVec};
use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

/// Semi-echelon basis with pivots at the highest nonzero index of each row.
trait Echelon {
    /// Loads `v` into the work vector, reduces it, and either stores it as a new
    /// row (returning the pivot index and the coefficient it had there) or
    /// reports that it reduced to zero. Each row operation `work -= c * row` is
    /// appended to `ops` as (row id, c).
    fn reduce_insert(&mut self, v: &[(u32, u8)], ops: &mut Vec<(u32, u8)>) -> Option<(usize, u8)>;
    fn is_pivot(&self, i: usize) -> bool;
    fn rank(&self) -> usize;
}

/// Bit-sliced rows for p = 2 (one plane) and p = 3 (planes for the digits 1 and 2).
struct BitEchelon<const TERNARY: bool> {
    words: usize,
    work: Vec<u64>,
    pivot_row: Vec<u32>,
    row_start: Vec<usize>,
    row_lead_word: Vec<u32>,
    arena: Vec<u64>,
}

impl<const TERNARY: bool> BitEchelon<TERNARY> {
    const PLANES: usize = if TERNARY { 2 } else { 1 };

    fn new(dim: usize) -> Self {
        let words = dim.div_ceil(64).max(1);
        BitEchelon {
            words,
            work: vec![0; words * Self::PLANES],
            pivot_row: vec![NONE; dim],
            row_start: Vec::new(),
            row_lead_word: Vec::new(),
            arena: Vec::new(),
        }
    }
}

impl<const TERNARY: bool> Echelon for BitEchelon<TERNARY> {
    fn reduce_insert(&mut self, v: &[(u32, u8)], ops: &mut Vec<(u32, u8)>) -> Option<(usize, u8)> {
        let w = self.words;
        let &(top, _) = v.last()?;
        for &(i, c) in v {
            let (wi, b) = (i as usize / 64, i as usize % 64);
            let plane = if TERNARY && c == 2 { w } else { 0 };
            self.work[plane + wi] |= 1 << b;
        }
        let mut wi = top as usize / 64;
        loop {
            let word = if TERNARY { self.work[wi] | self.work[w + wi] } else { self.work[wi] };
            if word == 0 {
                if wi == 0 {
                    return None;
                }
                wi -= 1;
                continue;
            }
            let b = 63 - word.leading_zeros() as usize;
            let col = wi * 64 + b;
            let coeff = if TERNARY && (self.work[w + wi] >> b) & 1 == 1 { 2 } else { 1 };
            let r = self.pivot_row[col];
            if r == NONE {
                // store words 0..=wi, normalized to leading coefficient 1
                let id = self.row_start.len() as u32;
                self.row_start.push(self.arena.len());
                self.row_lead_word.push(wi as u32);
                if TERNARY {
                    let (one, two) = if coeff == 2 { (w, 0) } else { (0, w) };
                    self.arena.extend_from_slice(&self.work[one..one + wi + 1]);
                    self.arena.extend_from_slice(&self.work[two..two + wi + 1]);
                    self.work[w..w + wi + 1].fill(0);
                } else {
                    self.arena.extend_from_slice(&self.work[..wi + 1]);
                }
                self.work[..wi + 1].fill(0);
                self.pivot_row[col] = id;
                return Some((col, coeff));
            }
            ops.push((r, coeff));
            let start = self.row_start[r as usize];
            let len = self.row_lead_word[r as usize] as usize + 1;
            debug_assert_eq!(len, wi + 1);
            if TERNARY {
                let (r1, r2) = self.arena[start..start + 2 * len].split_at(len);
                // work - coeff * row; subtracting the row adds its negation (planes swapped)
                let (b1s, b2s) = if coeff == 1 { (r2, r1) } else { (r1, r2) };
                let (a1s, a2s) = self.work.split_at_mut(w);
                for k in 0..len {
                    let (a1, a2, b1, b2) = (a1s[k], a2s[k], b1s[k], b2s[k]);
                    a1s[k] = a2 ^ ((a1 ^ (a2 | b1)) & !b2);
                    a2s[k] = a1 ^ ((a1 | (a2 ^ b2)) & !b1);
                }
            } else {
                for (a, b) in self.work[..len].iter_mut().zip(&self.arena[start..start + len]) {
                    *a ^= b;
                }
            }
        }
    }

    fn is_pivot(&self, i: usize) -> bool {
        self.pivot_row[i] != NONE
    }

    fn rank(&self) -> usize {
        self.row_start.len()
    }
}

/// Byte rows for any prime.
struct ByteEchelon {
    p: usize,
    /// reduce[x] = x mod p for x < p + (p-1)^2
    reduce: Vec<u8>,
    inverse: Vec<u8>,
    work: Vec<u8>,
    pivot_row: Vec<u32>,
    row_start: Vec<usize>,
    row_lead: Vec<u32>,
    arena: Vec<u8>,
}

impl ByteEchelon {
    fn new(field: PrimeField, dim: usize) -> Self {
        let p = field.p() as usize;
        ByteEchelon {
            p,
            reduce: (0..p + (p - 1) * (p - 1)).map(|x| (x % p) as u8).collect(),
            inverse: (0..p).map(|a| if a == 0 { 0 } else { field.inv(a as u8) }).collect(),
            work: vec![0; dim],
            pivot_row: vec![NONE; dim],
            row_start: Vec::new(),
            row_lead: Vec::new(),
            arena: Vec::new(),
        }
    }
}

impl Echelon for ByteEchelon {
    fn reduce_insert(&mut self, v: &[(u32, u8)], ops: &mut Vec<(u32, u8)>) -> Option<(usize, u8)> {
        let &(top, _) = v.last()?;
        for &(i, c) in v {
            self.work[i as usize] = c;
        }
        let mut i = top as usize;
        loop {
            let c = self.work[i];
            if c != 0 {
                let r = self.pivot_row[i];
                if r == NONE {
                    let id = self.row_start.len() as u32;
                    let inv = self.inverse[c as usize] as usize;
                    self.row_start.push(self.arena.len());
                    self.row_lead.push(i as u32);
                    for x in &mut self.work[..=i] {
                        self.arena.push(self.reduce[*x as usize * inv]);
                        *x = 0;
                    }
                    self.pivot_row[i] = id;
                    return Some((i, c));
                }
                ops.push((r, c));
                let start = self.row_start[r as usize];
                let nc = self.p - c as usize;
                for (a, &b) in self.work[..=i].iter_mut().zip(&self.arena[start..start + i + 1]) {
                    *a = self.reduce[*a as usize + nc * b as usize];
                }
                debug_assert_eq!(self.work[i], 0);
            }
            if i == 0 {
                return None;
            }
            i -= 1;
        }
    }

    fn is_pivot(&self, i: usize) -> bool {
        self.pivot_row[i] != NONE
    }

    fn rank(&self) -> usize {
        self.row_start.len()
    }
}

/// Summary of a spinning run, kept for diagnostics and tests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinStats {
    pub free_chains: u64,
    pub short_chains: usize,
    pub quotient_dim: usize,
}

/// Jordan type of I + T for a nilpotent T with T^q = 0, given in sparse form.
///
/// Works best when T maps each basis vector to higher indices, which is the
/// case for the weight-ordered bases built by the oracle.
pub fn jordan_type_spinning(t: &SparseColumns, q: usize) -> Result<(JordanType, SpinStats)> {
    let field = t.field();
    let dim = t.dim();
    match field.p() {
        2 => spin(t, q, BitEchelon::<false>::new(dim)),
        3 => spin(t, q, BitEchelon::<true>::new(dim)),
        _ => spin(t, q, ByteEchelon::new(field, dim)),
    }
}

fn spin<E: Echelon>(t: &SparseColumns, q: usize, mut ech: E) -> Result<(JordanType, SpinStats)> {
    let field = t.field();
    let p = field.p();
    let dim = t.dim();
    let mut applier = Applier::new(t);
    let mut ops: Vec<(u32, u8)> = Vec::new();
    // tags[k]: row k expressed through chain vectors modulo the free part
    let mut tags: Vec<SparseVec> = Vec::new();
    let mut acc = vec![0u32; dim];
    let mut touched: Vec<u32> = Vec::new();
    let mut free_chains = 0u64;
    // short chains: (row ids in chain order, image of the last vector)
    let mut short: Vec<(Vec<u32>, SparseVec)> = Vec::new();
    let mut next_start = 0usize;

    while ech.rank() < dim {
        while ech.is_pivot(next_start) {
            next_start += 1;
        }
        let start: SparseVec = vec![(next_start as u32, 1)];
        let mut v = start.clone();
        let mut chain: Vec<u32> = Vec::new();
        let relation: SparseVec = loop {
            ops.clear();
            let inserted = ech.reduce_insert(&v, &mut ops);
            // s = sum of c * tag(row) over the row operations
            for &(r, c) in &ops {
                for &(k, x) in &tags[r as usize] {
                    let ku = k as usize;
                    if acc[ku] == 0 {
                        touched.push(k);
                    }
                    acc[ku] = (acc[ku] + c as u32 * x as u32) % p + p;
                }
            }
            touched.sort_unstable();
            let mut s: SparseVec = Vec::with_capacity(touched.len());
            for &k in &touched {
                let x = (acc[k as usize] - p) as u8;
                acc[k as usize] = 0;
                if x != 0 {
                    s.push((k, x));
                }
            }
            touched.clear();
            match inserted {
                None => break s,
                Some((_, lead)) => {
                    // new row = lead^{-1} (b_k - s)
                    let k = tags.len() as u32;
                    let inv = field.inv(lead);
                    let mut tag: SparseVec = s.iter().map(|&(i, x)| (i, field.mul(inv, field.neg(x)))).collect();
                    tag.push((k, inv));
                    tags.push(tag);
                    chain.push(k);
                    if chain.len() > q {
                        return Err(Error::NotUnipotent { q });
                    }
                    v = applier.apply(&v);
                    if v.is_empty() {
                        break Vec::new();
                    }
                }
            }
        };
        if chain.len() == q && relation.is_empty() && v.is_empty() {
            free_chains += 1;
            let first = chain[0];
            for &k in &chain {
                tags[k as usize].retain(|&(i, _)| i < first);
            }
        } else {
            // the chain generators must still be killed by T^q
            let mut w = start;
            for _ in 0..q {
                w = applier.apply(&w);
                if w.is_empty() {
                    break;
                }
            }
            if !w.is_empty() {
                return Err(Error::NotUnipotent { q });
            }
            short.push((chain, relation));
        }
    }

    // T on the quotient by the free part
    let mut index = vec![NONE; tags.len()];
    let mut d = 0usize;
    for (chain, _) in &short {
        for &k in chain {
            index[k as usize] = d as u32;
            d += 1;
        }
    }
    let mut quotient = MatrixFp::zeros(field, d, d);
    for (chain, relation) in &short {
        for pair in chain.windows(2) {
            quotient.set(index[pair[1] as usize] as usize, index[pair[0] as usize] as usize, 1);
        }
        let last = index[*chain.last().expect("chains are nonempty") as usize] as usize;
        for &(k, x) in relation {
            let row = index[k as usize];
            if row == NONE {
                return Err(Error::Inconsistent("relation refers to a free chain".into()));
            }
            quotient.set(row as usize, last, x);
        }
    }
    let mut jt = jordan_type_nilpotent(&quotient, q)?;
    jt.add_block(q, free_chains);
    if jt.dimension() != dim as u64 {
        return Err(Error::Inconsistent(format!("spinning found {} of {} dimensions", jt.dimension(), dim)));
    }
    let stats = SpinStats { free_chains, short_chains: short.len(), quotient_dim: d };
    Ok((jt, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fplinalg::jordan_type_unipotent;

    fn jordan_block(field: PrimeField, r: usize) -> MatrixFp {
        MatrixFp::shift(field, r).add_identity().unwrap()
    }

    #[test]
    fn single_blocks() {
        for p in [2, 3, 5] {
            let f = PrimeField::new(p).unwrap();
            for r in 1..=p as usize * p as usize {
                let t = SparseColumns::from_dense(&MatrixFp::shift(f, r)).unwrap();
                let (jt, _) = jordan_type_spinning(&t, (p * p) as usize).unwrap();
                assert_eq!(jt.multiplicity(r), 1, "p={p} r={r}");
                assert_eq!(jt.dimension(), r as u64);
            }
        }
    }

    #[test]
    fn agrees_with_rank_profile_on_tensor_products() {
        for (p, q) in [(2u32, 8usize), (3, 9), (5, 5)] {
            let f = PrimeField::new(p).unwrap();
            for r in 1..=q {
                for s in 1..=q {
                    let g = jordan_block(f, r).kronecker(&jordan_block(f, s)).unwrap();
                    let dense = jordan_type_unipotent(&g, q).unwrap();
                    let t = SparseColumns::from_dense(&g.subtract_identity().unwrap()).unwrap();
                    let (jt, _) = jordan_type_spinning(&t, q).unwrap();
                    assert_eq!(jt, dense, "p={p} r={r} s={s}");
                }
            }
        }
    }

    #[test]
    fn detects_non_nilpotent() {
        let f = PrimeField::new(3).unwrap();
        let t = SparseColumns::from_dense(&MatrixFp::shift(f, 5)).unwrap();
        assert!(jordan_type_spinning(&t, 3).is_err());
        let t = SparseColumns::identity(f, 2);
        assert!(jordan_type_spinning(&t, 3).is_err());
    }

    #[test]
    fn zero_operator() {
        let f = PrimeField::new(2).unwrap();
        let t = SparseColumns::from_columns(f, vec![vec![]; 7]).unwrap();
        let (jt, stats) = jordan_type_spinning(&t, 4).unwrap();
        assert_eq!(jt.multiplicity(1), 7);
        assert_eq!(stats.free_chains, 0);
    }
}

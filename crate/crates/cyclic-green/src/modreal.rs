//! Explicit modules for a cyclic p-group and their tensor, exterior and
//! symmetric powers, decomposed by Jordan type.
//!
//! A module is stored as the sparse matrix of the generator g together with a
//! weight on each basis vector. For the Jordan block I + N the weight of the
//! i-th basis vector is i, and weights add under all constructions, so g - I
//! always maps a basis vector to strictly heavier ones. Decomposition uses
//! that order when the module is large.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hash, Hasher};

use crate::arith::binomial;
use crate::error::{Error, Order, Result};
use crate::fplinalg::{jordan_type_spinning, jordan_type_unipotent, JordanType, MatrixFp, PrimeField, SparseColumns, SparseVec};
use crate::greenring::GreenElement;

/// Modules up to this dimension are decomposed by the dense rank profile.
pub const DENSE_LIMIT: usize = 192;

/// A KC-module given by the action of the generator g of C.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleRep {
    order: Order,
    gen: SparseColumns,
    weights: Vec<u32>,
}

impl ModuleRep {
    /// Wraps an explicit generator matrix, checking that g^q = I.
    pub fn from_matrix(order: Order, gen: &MatrixFp) -> Result<ModuleRep> {
        if gen.field().p() != order.p || !gen.is_square() {
            return Err(Error::DimensionMismatch("generator must be square over F_p".into()));
        }
        let power = gen.matpow(order.q as u64)?;
        if power != MatrixFp::identity(gen.field(), gen.rows()) {
            return Err(Error::NotUnipotent { q: order.q });
        }
        Ok(ModuleRep { order, gen: SparseColumns::from_dense(gen)?, weights: vec![0; gen.rows()] })
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.gen.dim()
    }

    pub fn generator(&self) -> &SparseColumns {
        &self.gen
    }

    pub fn generator_matrix(&self) -> MatrixFp {
        self.gen.to_dense()
    }

    fn field(&self) -> PrimeField {
        self.gen.field()
    }

    fn same_order(&self, other: &ModuleRep) -> Result<()> {
        if self.order != other.order {
            return Err(Error::ContextMismatch(self.order, other.order));
        }
        Ok(())
    }
}

fn field_of(order: Order) -> PrimeField {
    PrimeField::new(order.p).expect("orders are built from primes")
}

fn check_cap(object: impl FnOnce() -> String, dim: Option<u128>, cap: usize) -> Result<usize> {
    match dim {
        Some(d) if d <= cap as u128 => Ok(d as usize),
        Some(d) => Err(Error::CapExceeded { object: object(), dim: d, cap }),
        None => Err(Error::CapExceeded { object: object(), dim: u128::MAX, cap }),
    }
}

/// The zero module.
pub fn zero_module(order: Order) -> ModuleRep {
    ModuleRep { order, gen: SparseColumns::identity(field_of(order), 0), weights: Vec::new() }
}

/// The Jordan block J_r: generator I + N_r with N_r sending e_i to e_{i+1}.
pub fn indecomposable(order: Order, r: usize) -> Result<ModuleRep> {
    if r == 0 || r > order.q {
        return Err(Error::OutOfRange(format!("V_{r} needs 1 <= r <= q = {}", order.q)));
    }
    let f = field_of(order);
    let cols = (0..r as u32).map(|i| if (i as usize) + 1 < r { vec![(i, 1), (i + 1, 1)] } else { vec![(i, 1)] }).collect();
    Ok(ModuleRep { order, gen: SparseColumns::from_columns(f, cols)?, weights: (0..r as u32).collect() })
}

pub fn direct_sum(a: &ModuleRep, b: &ModuleRep) -> Result<ModuleRep> {
    a.same_order(b)?;
    let mut weights = a.weights.clone();
    weights.extend_from_slice(&b.weights);
    Ok(ModuleRep { order: a.order, gen: a.gen.block_diag(&b.gen), weights })
}

/// Tensor product with basis e_i ⊗ f_j at index i * dim(b) + j.
pub fn tensor(a: &ModuleRep, b: &ModuleRep, cap: usize) -> Result<ModuleRep> {
    a.same_order(b)?;
    let (da, db) = (a.dim(), b.dim());
    check_cap(|| format!("tensor product of modules of dimensions {da} and {db}"), Some(da as u128 * db as u128), cap)?;
    let f = a.field();
    let mut cols = Vec::with_capacity(da * db);
    let mut weights = Vec::with_capacity(da * db);
    for i in 0..da {
        for j in 0..db {
            let mut col: SparseVec = Vec::new();
            for &(k, x) in a.gen.column(i) {
                for &(l, y) in b.gen.column(j) {
                    col.push((k * db as u32 + l, f.mul(x, y)));
                }
            }
            col.sort_unstable_by_key(|e| e.0);
            cols.push(col);
            weights.push(a.weights[i] + b.weights[j]);
        }
    }
    Ok(ModuleRep { order: a.order, gen: SparseColumns::from_columns(f, cols)?, weights })
}

/// Lexicographically ordered n-subsets of 0..d.
fn subsets(d: usize, n: usize) -> Vec<Vec<u32>> {
    fn rec(start: usize, d: usize, n: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            if d - i < n - cur.len() {
                break;
            }
            cur.push(i as u32);
            rec(i + 1, d, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, d, n, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Lexicographically ordered n-multisets of 0..d, as sorted tuples.
fn multisets(d: usize, n: usize) -> Vec<Vec<u32>> {
    fn rec(start: usize, d: usize, n: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i as u32);
            rec(i, d, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if d > 0 || n == 0 {
        rec(0, d, n, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// n-th exterior power on the wedge basis of increasing index tuples.
pub fn exterior_power(a: &ModuleRep, n: usize, cap: usize) -> Result<ModuleRep> {
    let d = a.dim();
    check_cap(|| format!("exterior power {n} of a module of dimension {d}"), binomial(d as u128, n as u128), cap)?;
    let f = a.field();
    let basis = subsets(d, n);
    let index: HashMap<&[u32], u32> = basis.iter().enumerate().map(|(k, s)| (s.as_slice(), k as u32)).collect();
    let mut cols = Vec::with_capacity(basis.len());
    let mut weights = Vec::with_capacity(basis.len());
    for s in &basis {
        let mut terms: HashMap<Vec<u32>, u8> = HashMap::from([(Vec::new(), 1)]);
        for &i in s {
            let mut next: HashMap<Vec<u32>, u8> = HashMap::with_capacity(terms.len() * 2);
            for (tuple, &c) in &terms {
                for &(row, x) in a.gen.column(i as usize) {
                    let Err(pos) = tuple.binary_search(&row) else {
                        continue;
                    };
                    let mut t = tuple.clone();
                    t.insert(pos, row);
                    let mut v = f.mul(c, x);
                    if (tuple.len() - pos) % 2 == 1 {
                        v = f.neg(v);
                    }
                    let e = next.entry(t).or_insert(0);
                    *e = f.add(*e, v);
                }
            }
            next.retain(|_, c| *c != 0);
            terms = next;
        }
        let mut col: SparseVec = terms.into_iter().map(|(t, c)| (index[t.as_slice()], c)).collect();
        col.sort_unstable_by_key(|e| e.0);
        cols.push(col);
        weights.push(s.iter().map(|&i| a.weights[i as usize]).sum());
    }
    Ok(ModuleRep { order: a.order, gen: SparseColumns::from_columns(f, cols)?, weights })
}

/// Multiply-shift hasher for packed monomial keys.
#[derive(Default)]
struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0.rotate_left(5) ^ b as u64).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
        }
    }
    fn write_u128(&mut self, x: u128) {
        let folded = (x as u64) ^ ((x >> 64) as u64).rotate_left(29);
        self.0 = (self.0 ^ folded).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        self.0 ^= self.0 >> 32;
    }
}

type KeyMap<K, V> = HashMap<K, V, BuildHasherDefault<KeyHasher>>;

/// Monomial keys: exponent vectors, packed into a u128 when they fit.
trait Monomial: Clone + Eq + Hash {
    fn one(d: usize) -> Self;
    fn times(&self, var: u32) -> Self;
}

impl Monomial for u128 {
    fn one(_: usize) -> Self {
        0
    }
    fn times(&self, var: u32) -> Self {
        self + (1u128 << (8 * var))
    }
}

impl Monomial for Vec<u8> {
    fn one(d: usize) -> Self {
        vec![0; d]
    }
    fn times(&self, var: u32) -> Self {
        let mut m = self.clone();
        m[var as usize] += 1;
        m
    }
}

fn symmetric_columns<K: Monomial>(a: &ModuleRep, basis: &[Vec<u32>]) -> Vec<SparseVec> {
    let f = a.field();
    let d = a.dim();
    let key_of = |s: &[u32]| s.iter().fold(K::one(d), |m, &i| m.times(i));
    let index: KeyMap<K, u32> = basis.iter().enumerate().map(|(k, s)| (key_of(s), k as u32)).collect();
    let mut cols = Vec::with_capacity(basis.len());
    let mut terms: KeyMap<K, u8> = KeyMap::default();
    let mut next: KeyMap<K, u8> = KeyMap::default();
    for s in basis {
        terms.clear();
        terms.insert(K::one(d), 1);
        for &i in s {
            next.clear();
            for (m, &c) in &terms {
                for &(row, x) in a.gen.column(i as usize) {
                    let e = next.entry(m.times(row)).or_insert(0);
                    *e = f.add(*e, f.mul(c, x));
                }
            }
            next.retain(|_, c| *c != 0);
            std::mem::swap(&mut terms, &mut next);
        }
        let mut col: SparseVec = terms.iter().map(|(m, &c)| (index[m], c)).collect();
        col.sort_unstable_by_key(|e| e.0);
        cols.push(col);
    }
    cols
}

/// n-th symmetric power on the monomial basis of sorted multisets in lexicographic order.
pub fn symmetric_power(a: &ModuleRep, n: usize, cap: usize) -> Result<ModuleRep> {
    let d = a.dim();
    let dim = if d == 0 { Some((n == 0) as u128) } else { binomial((d + n - 1) as u128, n as u128) };
    check_cap(|| format!("symmetric power {n} of a module of dimension {d}"), dim, cap)?;
    let basis = multisets(d, n);
    let cols = if d <= 16 && n < 256 { symmetric_columns::<u128>(a, &basis) } else { symmetric_columns::<Vec<u8>>(a, &basis) };
    let weights = basis.iter().map(|s| s.iter().map(|&i| a.weights[i as usize]).sum()).collect();
    Ok(ModuleRep { order: a.order, gen: SparseColumns::from_columns(a.field(), cols)?, weights })
}

/// Jordan type of the generator.
pub fn jordan_type(a: &ModuleRep) -> Result<JordanType> {
    let q = a.order.q;
    if a.dim() == 0 {
        return Ok(JordanType::zero(q));
    }
    if a.dim() <= DENSE_LIMIT {
        return jordan_type_unipotent(&a.generator_matrix(), q);
    }
    let mut order: Vec<u32> = (0..a.dim() as u32).collect();
    order.sort_by_key(|&i| (a.weights[i as usize], i));
    let t = a.gen.minus_identity().permuted(&order);
    Ok(jordan_type_spinning(&t, q)?.0)
}

/// Decomposes a module into indecomposables: the coefficient of V_k is the
/// number of Jordan blocks of size k.
pub fn decompose(a: &ModuleRep) -> Result<GreenElement> {
    let jt = jordan_type(a)?;
    let coeffs = jt.counts().iter().map(|&m| m as i64).collect();
    GreenElement::from_coeffs(a.order, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: usize = 60_000;

    fn ord(p: u32, e: u32) -> Order {
        Order::new(p, e).unwrap()
    }

    fn v(o: Order, r: usize) -> ModuleRep {
        indecomposable(o, r).unwrap()
    }

    fn el(o: Order, c: &[i64]) -> GreenElement {
        let mut coeffs = c.to_vec();
        coeffs.resize(o.q, 0);
        GreenElement::from_coeffs(o, coeffs).unwrap()
    }

    #[test]
    fn round_trip_indecomposables() {
        let o = ord(2, 3);
        for r in 1..=8 {
            assert_eq!(decompose(&v(o, r)).unwrap(), GreenElement::basis(o, r).unwrap());
        }
        assert!(indecomposable(o, 0).is_err());
        assert!(indecomposable(o, 9).is_err());
    }

    #[test]
    fn small_tensor_products() {
        let o = ord(2, 2);
        assert_eq!(decompose(&tensor(&v(o, 2), &v(o, 2), CAP).unwrap()).unwrap(), el(o, &[0, 2]));
        let o = ord(3, 1);
        assert_eq!(decompose(&tensor(&v(o, 2), &v(o, 2), CAP).unwrap()).unwrap(), el(o, &[1, 0, 1]));
    }

    #[test]
    fn powers_of_the_regular_module() {
        let o = ord(2, 2);
        assert_eq!(decompose(&exterior_power(&v(o, 4), 2, CAP).unwrap()).unwrap(), el(o, &[0, 1, 0, 1]));
        assert_eq!(decompose(&symmetric_power(&v(o, 4), 2, CAP).unwrap()).unwrap(), el(o, &[0, 1, 0, 2]));
    }

    #[test]
    fn degenerate_powers() {
        let o = ord(3, 2);
        let j = v(o, 5);
        assert_eq!(exterior_power(&j, 6, CAP).unwrap().dim(), 0);
        assert_eq!(decompose(&exterior_power(&j, 0, CAP).unwrap()).unwrap(), el(o, &[1]));
        assert_eq!(decompose(&symmetric_power(&j, 0, CAP).unwrap()).unwrap(), el(o, &[1]));
        assert_eq!(decompose(&exterior_power(&j, 5, CAP).unwrap()).unwrap(), el(o, &[1]));
        assert_eq!(decompose(&zero_module(o)).unwrap(), el(o, &[]));
        assert_eq!(symmetric_power(&zero_module(o), 3, CAP).unwrap().dim(), 0);
    }

    #[test]
    fn cap_is_enforced() {
        let o = ord(3, 2);
        let err = symmetric_power(&v(o, 9), 11, CAP).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { dim: 75_582, .. }), "{err}");
        assert!(symmetric_power(&v(o, 9), 10, CAP).is_ok_and(|m| m.dim() == 43_758));
        assert!(tensor(&v(o, 9), &v(o, 9), 80).is_err());
    }

    #[test]
    fn context_mismatch() {
        assert!(direct_sum(&v(ord(2, 2), 1), &v(ord(2, 3), 1)).is_err());
    }

    #[test]
    fn spinning_agrees_with_dense_path() {
        // large enough for the spinning path, small enough for the dense one
        for (p, e, r, n) in [(2, 3, 5, 6), (3, 2, 4, 9), (5, 1, 4, 9), (2, 2, 3, 20)] {
            let o = ord(p, e);
            let m = symmetric_power(&v(o, r), n, CAP).unwrap();
            assert!(m.dim() > DENSE_LIMIT, "{}", m.dim());
            let dense = jordan_type_unipotent(&m.generator_matrix(), o.q).unwrap();
            assert_eq!(jordan_type(&m).unwrap(), dense, "p={p} r={r} n={n}");
        }
    }
}

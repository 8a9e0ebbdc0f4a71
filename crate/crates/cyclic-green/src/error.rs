use std::fmt;

/// Errors produced by the engine.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime in 2..=64")]
    NotPrime(u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not unipotent of order dividing {q}")]
    NotUnipotent { q: usize },
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("cap exceeded: {object} has dimension {dim} > {cap}")]
    CapExceeded { object: String, dim: u128, cap: usize },
    #[error("context mismatch: {0} vs {1}")]
    ContextMismatch(Order, Order),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("the trivial group has no index-p subgroup")]
    NoChild,
    #[error("cache format: {0}")]
    CacheFormat(String),
    #[error("report format: {0}")]
    ReportFormat(String),
    #[error("cache mismatch: {0}")]
    CacheMismatch(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Order of a cyclic p-group, written as q = p^e.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Order {
    pub p: u32,
    pub e: u32,
    pub q: usize,
}

impl Order {
    pub fn new(p: u32, e: u32) -> Result<Order> {
        crate::fplinalg::PrimeField::new(p)?;
        let q = (p as u128)
            .checked_pow(e)
            .filter(|&q| q <= 1 << 20)
            .ok_or_else(|| Error::OutOfRange(format!("{p}^{e} is too large")))?;
        Ok(Order { p, e, q: q as usize })
    }

    /// The order p^j for j <= e.
    pub fn factor(&self, j: u32) -> Result<Order> {
        if j > self.e {
            return Err(Error::OutOfRange(format!("p^{j} does not divide q = {}", self.q)));
        }
        Order::new(self.p, j)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={}, q={})", self.p, self.q)
    }
}

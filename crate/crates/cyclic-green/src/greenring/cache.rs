//! JSON persistence for the memo tables of a [`GreenContext`].
//!
//! Every table is a two-level map with decimal-string keys. The outer key is
//! the module index r for `tensor_table`, `lambda_table` and `s_table`, and the
//! Adams degree n for `adams_lambda` and `adams_s`:
//!
//! ```text
//! tensor_table[r][s] = V_r V_s        lambda_table[r][j] = Λ^j(V_r)
//! s_table[r][n]      = S^n(V_r)       adams_lambda[n][r] = ψ_Λ^n(V_r)
//! adams_s[n][r]      = ψ_S^n(V_r)
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::binomial;
use crate::error::{Error, Order, Result};

use super::context::{GreenContext, Table};
use super::element::GreenElement;

pub const CACHE_VERSION: u32 = 1;

/// Largest Adams degree stored in a cache file.
pub const MAX_CACHED_DEGREE: usize = 1024;

/// Fraction of entries re-derived when a cache is loaded.
pub const DEFAULT_SAMPLE_FRACTION: f64 = 0.05;

type Nested = BTreeMap<String, BTreeMap<String, Vec<i64>>>;

/// On-disk cache document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CacheFile {
    pub version: u32,
    pub p: u32,
    pub q: usize,
    pub tensor_table: Nested,
    pub lambda_table: Nested,
    pub s_table: Nested,
    pub adams_lambda: Nested,
    pub adams_s: Nested,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TableKind {
    Tensor,
    Lambda,
    Symmetric,
    AdamsLambda,
    AdamsS,
}

impl TableKind {
    pub const ALL: [TableKind; 5] = [TableKind::Tensor, TableKind::Lambda, TableKind::Symmetric, TableKind::AdamsLambda, TableKind::AdamsS];

    pub fn name(self) -> &'static str {
        match self {
            TableKind::Tensor => "tensor_table",
            TableKind::Lambda => "lambda_table",
            TableKind::Symmetric => "s_table",
            TableKind::AdamsLambda => "adams_lambda",
            TableKind::AdamsS => "adams_s",
        }
    }
}

/// One decoded cache entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheEntry {
    pub kind: TableKind,
    pub outer: usize,
    pub inner: usize,
    pub value: GreenElement,
}

impl CacheEntry {
    pub fn label(&self) -> String {
        let (a, b) = (self.outer, self.inner);
        match self.kind {
            TableKind::Tensor => format!("V{a}*V{b}"),
            TableKind::Lambda => format!("Λ^{b}(V{a})"),
            TableKind::Symmetric => format!("S^{b}(V{a})"),
            TableKind::AdamsLambda => format!("ψ_Λ^{a}(V{b})"),
            TableKind::AdamsS => format!("ψ_S^{a}(V{b})"),
        }
    }
}

/// Outcome of checking entries against fresh computations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub entries: usize,
    pub checked: usize,
    pub skipped_cap: usize,
    pub mismatches: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn parse_key(s: &str) -> Result<usize> {
    let canonical = !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) && (s == "0" || !s.starts_with('0'));
    if !canonical {
        return Err(Error::CacheFormat(format!("key {s:?} is not a canonical decimal integer")));
    }
    s.parse().map_err(|_| Error::CacheFormat(format!("key {s:?} is out of range")))
}

impl CacheFile {
    pub fn empty(order: Order) -> CacheFile {
        CacheFile {
            version: CACHE_VERSION,
            p: order.p,
            q: order.q,
            tensor_table: Nested::new(),
            lambda_table: Nested::new(),
            s_table: Nested::new(),
            adams_lambda: Nested::new(),
            adams_s: Nested::new(),
        }
    }

    /// The order (p, q) named in the header, checking that q is a power of p.
    pub fn order(&self) -> Result<Order> {
        if self.version != CACHE_VERSION {
            return Err(Error::CacheFormat(format!("unsupported version {}", self.version)));
        }
        let mut e = 0;
        let mut t = 1usize;
        while t < self.q {
            t = t.checked_mul(self.p as usize).ok_or_else(|| Error::CacheFormat("q overflows".into()))?;
            e += 1;
            if e > 64 {
                break;
            }
        }
        if t != self.q || self.p < 2 {
            return Err(Error::CacheFormat(format!("q = {} is not a power of p = {}", self.q, self.p)));
        }
        Order::new(self.p, e).map_err(|err| Error::CacheFormat(err.to_string()))
    }

    fn table(&self, kind: TableKind) -> &Nested {
        match kind {
            TableKind::Tensor => &self.tensor_table,
            TableKind::Lambda => &self.lambda_table,
            TableKind::Symmetric => &self.s_table,
            TableKind::AdamsLambda => &self.adams_lambda,
            TableKind::AdamsS => &self.adams_s,
        }
    }

    fn table_mut(&mut self, kind: TableKind) -> &mut Nested {
        match kind {
            TableKind::Tensor => &mut self.tensor_table,
            TableKind::Lambda => &mut self.lambda_table,
            TableKind::Symmetric => &mut self.s_table,
            TableKind::AdamsLambda => &mut self.adams_lambda,
            TableKind::AdamsS => &mut self.adams_s,
        }
    }

    pub fn insert(&mut self, kind: TableKind, outer: usize, inner: usize, value: &GreenElement) {
        self.table_mut(kind).entry(outer.to_string()).or_default().insert(inner.to_string(), value.coeffs().to_vec());
    }

    /// Decodes every entry and checks the structural invariants: key ranges,
    /// vector lengths, dimensions, and non-negativity of genuine modules.
    pub fn entries(&self) -> Result<Vec<CacheEntry>> {
        let order = self.order()?;
        let q = order.q;
        let mut out = Vec::new();
        for kind in TableKind::ALL {
            for (ko, row) in self.table(kind) {
                let outer = parse_key(ko)?;
                for (ki, coeffs) in row {
                    let inner = parse_key(ki)?;
                    let value = GreenElement::from_coeffs(order, coeffs.clone()).map_err(|e| Error::CacheFormat(e.to_string()))?;
                    let entry = CacheEntry { kind, outer, inner, value };
                    check_entry(&entry, q)?;
                    out.push(entry);
                }
            }
        }
        Ok(out)
    }

    pub fn from_json(text: &str) -> Result<CacheFile> {
        let file: CacheFile = serde_json::from_str(text).map_err(|e| Error::CacheFormat(e.to_string()))?;
        file.entries()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cache documents always serialize")
    }

    pub fn read(path: &Path) -> Result<CacheFile> {
        CacheFile::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.to_json() + "\n")?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}

fn check_entry(e: &CacheEntry, q: usize) -> Result<()> {
    let bad = |why: String| Err(Error::CacheFormat(format!("{}: {why}", e.label())));
    let (a, b) = (e.outer, e.inner);
    let in_range = |r: usize| (1..=q).contains(&r);
    let (ok, dim): (bool, Option<u128>) = match e.kind {
        TableKind::Tensor => (in_range(a) && in_range(b) && a <= b, Some(a as u128 * b as u128)),
        TableKind::Lambda => (in_range(a) && a < q && b <= a / 2, binomial(a as u128, b as u128)),
        TableKind::Symmetric => (in_range(a) && a < q, binomial(a as u128 + b as u128 - 1, b as u128)),
        TableKind::AdamsLambda | TableKind::AdamsS => ((1..=MAX_CACHED_DEGREE).contains(&a) && in_range(b), Some(b as u128)),
    };
    if !ok {
        return bad("key out of range".into());
    }
    let modules = matches!(e.kind, TableKind::Tensor | TableKind::Lambda | TableKind::Symmetric);
    if modules && e.value.coeffs().iter().any(|&c| c < 0) {
        return bad("negative multiplicity in a genuine module".into());
    }
    if dim.map(|d| d as i128) != Some(e.value.dimension()) {
        return bad(format!("dimension {} does not match the expected {dim:?}", e.value.dimension()));
    }
    Ok(())
}

impl GreenContext {
    /// Snapshot of every memoized table.
    pub fn export_cache(&self) -> CacheFile {
        let mut file = CacheFile::empty(self.order());
        let t = self.tables();
        let dump = |file: &mut CacheFile, kind, table: &Table| {
            for (&(x, y), v) in table.read().expect("cache lock").iter() {
                let adams = matches!(kind, TableKind::AdamsLambda | TableKind::AdamsS);
                if !adams || x <= MAX_CACHED_DEGREE {
                    file.insert(kind, x, y, v);
                }
            }
        };
        dump(&mut file, TableKind::Tensor, &t.tensor);
        dump(&mut file, TableKind::Lambda, &t.lambda);
        dump(&mut file, TableKind::Symmetric, &t.s);
        dump(&mut file, TableKind::AdamsLambda, &t.adams_lambda);
        dump(&mut file, TableKind::AdamsS, &t.adams_s);
        file
    }

    /// Recomputes one entry in a scratch context without any cache.
    fn recompute(scratch: &GreenContext, e: &CacheEntry) -> Result<GreenElement> {
        let (a, b) = (e.outer, e.inner);
        match e.kind {
            TableKind::Tensor => scratch.tensor_basis(a, b),
            TableKind::Lambda => scratch.lambda_power_oracle(a, b),
            TableKind::Symmetric => scratch.s_power_oracle(a, b),
            TableKind::AdamsLambda => scratch.adams_lambda_basis(a, b),
            TableKind::AdamsS => scratch.adams_s_via_lambda(a, b),
        }
    }

    /// Re-derives a deterministic sample of the entries in `file`.
    ///
    /// `fraction` is clamped to [0, 1]; at least one entry is checked when the
    /// file is non-empty and the fraction is positive.
    pub fn validate_cache(&self, file: &CacheFile, fraction: f64, seed: u64) -> Result<ValidationReport> {
        let order = file.order()?;
        if order != self.order() {
            return Err(Error::CacheMismatch(format!("cache is for {order}, context is {}", self.order())));
        }
        let mut entries = file.entries()?;
        let total = entries.len();
        let fraction = fraction.clamp(0.0, 1.0);
        let mut take = (fraction * total as f64).ceil() as usize;
        if fraction > 0.0 {
            take = take.max(1);
        }
        if take < total {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            entries.shuffle(&mut rng);
            entries.truncate(take);
            entries.sort_by_key(|e| (e.kind, e.outer, e.inner));
        }
        let scratch = GreenContext::from_order(self.order(), self.dim_cap());
        let mut report = ValidationReport { entries: total, ..Default::default() };
        for e in &entries {
            match Self::recompute(&scratch, e) {
                Ok(v) if v == e.value => report.checked += 1,
                Ok(v) => {
                    report.checked += 1;
                    report.mismatches.push(format!("{}: cached {} but computed {}", e.label(), e.value, v));
                }
                Err(Error::CapExceeded { .. }) => report.skipped_cap += 1,
                Err(err) => return Err(err),
            }
        }
        Ok(report)
    }

    /// Validates a sample of `file` and, if it is consistent, merges every entry
    /// into the memo tables.
    pub fn load_cache(&self, file: &CacheFile, fraction: f64, seed: u64) -> Result<ValidationReport> {
        let report = self.validate_cache(file, fraction, seed)?;
        if let Some(first) = report.mismatches.first() {
            return Err(Error::CacheMismatch(first.clone()));
        }
        let t = self.tables();
        for e in file.entries()? {
            let (table, key) = match e.kind {
                TableKind::Tensor => (&t.tensor, (e.outer, e.inner)),
                TableKind::Lambda => (&t.lambda, (e.outer, e.inner)),
                TableKind::Symmetric => (&t.s, (e.outer, e.inner)),
                TableKind::AdamsLambda => (&t.adams_lambda, (e.outer, e.inner)),
                TableKind::AdamsS => (&t.adams_s, (e.outer, e.inner)),
            };
            table.write().expect("cache lock").insert(key, e.value);
        }
        Ok(report)
    }

    /// Fills the tensor and exterior tables completely, the symmetric table for
    /// degrees up to `n_max` where the oracle fits under the cap, and both Adams
    /// tables for 1 <= n <= 2q. Returns the number of symmetric powers skipped.
    pub fn build_cache(&self, n_max: usize) -> Result<usize> {
        let q = self.q();
        for r in 1..=q {
            for s in r..=q {
                self.tensor_basis(r, s)?;
            }
            if r < q {
                for j in 0..=r / 2 {
                    self.lambda_power(r, j)?;
                }
            }
        }
        let mut skipped = 0;
        for r in 1..q {
            for n in 0..=n_max {
                match self.s_power(r, n) {
                    Ok(_) => {}
                    Err(Error::CapExceeded { .. }) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
        for n in 1..=2 * q {
            for r in 1..=q {
                self.adams_lambda_basis(n, r)?;
                self.adams_s_via_lambda(n, r)?;
            }
        }
        Ok(skipped)
    }
}

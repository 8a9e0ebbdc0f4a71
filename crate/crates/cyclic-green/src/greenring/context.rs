use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::arith::gcd_u;
use crate::error::{Error, Order, Result};
use crate::modreal;

use super::element::GreenElement;
use super::regular;

/// Default bound on the dimension of any matrix the oracle builds.
pub const DEFAULT_DIM_CAP: usize = 60_000;

pub(crate) type Table = RwLock<HashMap<(usize, usize), GreenElement>>;

#[derive(Default)]
pub(crate) struct Tables {
    /// (r, s) with r <= s: V_r V_s
    pub(crate) tensor: Table,
    /// (r, j) with j <= r/2: Λ^j(V_r)
    pub(crate) lambda: Table,
    /// (r, n): S^n(V_r)
    pub(crate) s: Table,
    /// (n, r): ψ_Λ^n(V_r) by the Newton recursion
    pub(crate) adams_lambda: Table,
    /// (n, r): ψ_S^n(V_r) by the conversion from ψ_Λ
    pub(crate) adams_s: Table,
    /// (n, r): ψ_S^n(V_r) by the Newton recursion on symmetric powers
    pub(crate) adams_s_direct: Table,
}

struct Inner {
    order: Order,
    dim_cap: usize,
    tables: Tables,
    factors: Vec<OnceLock<GreenContext>>,
}

/// The Green ring of a cyclic group of order q = p^e, with memoized tables.
///
/// Cloning is cheap and clones share caches. All methods take `&self`; the
/// caches allow concurrent reads and fill under an exclusive lock.
#[derive(Clone)]
pub struct GreenContext(Arc<Inner>);

impl fmt::Debug for GreenContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GreenContext").field("order", &self.0.order).field("dim_cap", &self.0.dim_cap).finish()
    }
}

fn memo(table: &Table, key: (usize, usize), fill: impl FnOnce() -> Result<GreenElement>) -> Result<GreenElement> {
    let hit = table.read().expect("cache lock").get(&key).cloned();
    if let Some(v) = hit {
        return Ok(v);
    }
    let v = fill()?;
    table.write().expect("cache lock").insert(key, v.clone());
    Ok(v)
}

fn sign(n: usize) -> i64 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl GreenContext {
    pub fn new(p: u32, e: u32) -> Result<GreenContext> {
        GreenContext::with_cap(p, e, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(p: u32, e: u32, dim_cap: usize) -> Result<GreenContext> {
        Ok(GreenContext::from_order(Order::new(p, e)?, dim_cap))
    }

    pub fn from_order(order: Order, dim_cap: usize) -> GreenContext {
        GreenContext(Arc::new(Inner {
            order,
            dim_cap,
            tables: Tables::default(),
            factors: (0..order.e).map(|_| OnceLock::new()).collect(),
        }))
    }

    pub fn order(&self) -> Order {
        self.0.order
    }

    pub fn p(&self) -> u32 {
        self.0.order.p
    }

    pub fn q(&self) -> usize {
        self.0.order.q
    }

    pub fn dim_cap(&self) -> usize {
        self.0.dim_cap
    }

    pub(crate) fn tables(&self) -> &Tables {
        &self.0.tables
    }

    pub fn zero(&self) -> GreenElement {
        GreenElement::zero(self.order())
    }

    pub fn one(&self) -> GreenElement {
        GreenElement::one(self.order())
    }

    /// V_r for 0 <= r <= q, with V_0 = 0.
    pub fn basis(&self, r: usize) -> Result<GreenElement> {
        GreenElement::basis(self.order(), r)
    }

    pub fn element(&self, coeffs: Vec<i64>) -> Result<GreenElement> {
        GreenElement::from_coeffs(self.order(), coeffs)
    }

    fn own(&self, a: &GreenElement) -> Result<()> {
        if a.order() != self.order() {
            return Err(Error::ContextMismatch(self.order(), a.order()));
        }
        Ok(())
    }

    fn check_r(&self, r: usize) -> Result<()> {
        if r == 0 || r > self.q() {
            return Err(Error::OutOfRange(format!("V_{r} needs 1 <= r <= q = {}", self.q())));
        }
        Ok(())
    }

    fn check_n(n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::OutOfRange("Adams operations are indexed by n >= 1".into()));
        }
        Ok(())
    }

    /// Context for the quotient of order p^j, sharing the dimension cap.
    pub fn factor(&self, j: u32) -> Result<GreenContext> {
        let order = self.order().factor(j)?;
        if j == self.order().e {
            return Ok(self.clone());
        }
        Ok(self.0.factors[j as usize].get_or_init(|| GreenContext::from_order(order, self.dim_cap())).clone())
    }

    /// Context for the subgroup of index p.
    pub fn child(&self) -> Result<GreenContext> {
        match self.order().e {
            0 => Err(Error::NoChild),
            e => self.factor(e - 1),
        }
    }

    /// V_r V_s from the oracle.
    pub fn tensor_basis(&self, r: usize, s: usize) -> Result<GreenElement> {
        self.check_r(r)?;
        self.check_r(s)?;
        let key = (r.min(s), r.max(s));
        memo(&self.tables().tensor, key, || {
            let o = self.order();
            let m = modreal::tensor(&modreal::indecomposable(o, key.0)?, &modreal::indecomposable(o, key.1)?, self.dim_cap())?;
            modreal::decompose(&m)
        })
    }

    pub fn mul(&self, a: &GreenElement, b: &GreenElement) -> Result<GreenElement> {
        self.own(a)?;
        self.own(b)?;
        let mut out = self.zero();
        for (i, &x) in a.coeffs().iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs().iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let k = x.checked_mul(y).ok_or_else(|| Error::Inconsistent("integer overflow in product".into()))?;
                out.add_scaled(k, &self.tensor_basis(i + 1, j + 1)?)?;
            }
        }
        Ok(out)
    }

    /// Restriction to the subgroup of index p: V_r ↦ (p − b)Ṽ_a + bṼ_{a+1} for r = ap + b.
    pub fn restrict(&self, a: &GreenElement) -> Result<GreenElement> {
        self.own(a)?;
        let child = self.child()?;
        let p = self.p() as usize;
        let mut out = child.zero();
        for r in 1..=self.q() {
            let x = a.coeff(r);
            if x == 0 {
                continue;
            }
            let (lo, b) = (r / p, r % p);
            out.add_scaled(x, &child.basis(lo)?.scale((p - b) as i64)?)?;
            if b > 0 {
                out.add_scaled(x, &child.basis(lo + 1)?.scale(b as i64)?)?;
            }
        }
        Ok(out)
    }

    /// Induction from the subgroup of index p: Ṽ_r ↦ V_{pr}.
    pub fn induce(&self, a: &GreenElement) -> Result<GreenElement> {
        let child = self.child()?;
        child.own(a)?;
        let p = self.p() as usize;
        let mut out = self.zero();
        for r in 1..=child.q() {
            out.add_scaled(a.coeff(r), &self.basis(p * r)?)?;
        }
        Ok(out)
    }

    /// Inflation from a quotient of order p^j <= q.
    pub fn inflate(&self, a: &GreenElement) -> Result<GreenElement> {
        a.inflate_to(self.order())
    }

    /// Ω^n, with Ω(V_r) = V_{q−r} and Ω(V_q) = 0.
    pub fn heller(&self, a: &GreenElement, n: usize) -> Result<GreenElement> {
        self.own(a)?;
        let q = self.q();
        let once = |x: &GreenElement| -> Result<GreenElement> {
            let mut out = self.zero();
            for r in 1..q {
                out.add_scaled(x.coeff(r), &self.basis(q - r)?)?;
            }
            Ok(out)
        };
        match n {
            0 => Ok(a.clone()),
            n if n % 2 == 1 => once(a),
            _ => once(&once(a)?),
        }
    }

    /// Λ^j(V_r), using Λ^j = Λ^{r−j} and the orbit count for r = q.
    pub fn lambda_power(&self, r: usize, j: usize) -> Result<GreenElement> {
        self.check_r(r)?;
        if j > r {
            return Ok(self.zero());
        }
        if r == self.q() {
            return self.lambda_regular(j);
        }
        let j = j.min(r - j);
        memo(&self.tables().lambda, (r, j), || self.lambda_power_oracle(r, j))
    }

    /// Λ^j(V_r) straight from the oracle, uncached.
    pub fn lambda_power_oracle(&self, r: usize, j: usize) -> Result<GreenElement> {
        self.check_r(r)?;
        let m = modreal::exterior_power(&modreal::indecomposable(self.order(), r)?, j, self.dim_cap())
            .map_err(|e| rename_cap(e, format!("Λ^{j}(V_{r})")))?;
        modreal::decompose(&m)
    }

    /// S^n(V_r), using the orbit count for r = q.
    pub fn s_power(&self, r: usize, n: usize) -> Result<GreenElement> {
        self.check_r(r)?;
        if r == self.q() {
            return self.s_regular(n);
        }
        memo(&self.tables().s, (r, n), || self.s_power_oracle(r, n))
    }

    /// S^n(V_r) straight from the oracle, uncached.
    pub fn s_power_oracle(&self, r: usize, n: usize) -> Result<GreenElement> {
        self.check_r(r)?;
        let m = modreal::symmetric_power(&modreal::indecomposable(self.order(), r)?, n, self.dim_cap())
            .map_err(|e| rename_cap(e, format!("S^{n}(V_{r})")))?;
        modreal::decompose(&m)
    }

    pub fn lambda_regular(&self, n: usize) -> Result<GreenElement> {
        regular::lambda_regular(self.order(), n)
    }

    pub fn s_regular(&self, n: usize) -> Result<GreenElement> {
        regular::s_regular(self.order(), n)
    }

    pub fn closed_form_adams_regular_lambda(&self, n: usize) -> Result<GreenElement> {
        regular::closed_form_adams_regular_lambda(self.order(), n)
    }

    pub fn closed_form_adams_regular_s(&self, n: usize) -> Result<GreenElement> {
        regular::closed_form_adams_regular_s(self.order(), n)
    }

    fn linear(&self, a: &GreenElement, f: impl Fn(usize) -> Result<GreenElement>) -> Result<GreenElement> {
        self.own(a)?;
        let mut out = self.zero();
        for r in 1..=self.q() {
            let x = a.coeff(r);
            if x != 0 {
                out.add_scaled(x, &f(r)?)?;
            }
        }
        Ok(out)
    }

    /// ψ_Λ^n(V_r) by Newton's recursion in the exterior powers of V_r.
    pub fn adams_lambda_basis(&self, n: usize, r: usize) -> Result<GreenElement> {
        Self::check_n(n)?;
        self.check_r(r)?;
        if n == 1 || self.q() == 1 {
            return self.basis(r);
        }
        let table = &self.tables().adams_lambda;
        // fill bottom-up so the recursion never nests deeply
        for m in 2..=n {
            memo(table, (m, r), || {
                let mut acc = self.zero();
                for j in 1..=(m - 1).min(r) {
                    let prev = if m - j == 1 { self.basis(r)? } else { table.read().expect("cache lock")[&(m - j, r)].clone() };
                    acc.add_scaled(-sign(j), &self.mul(&prev, &self.lambda_power(r, j)?)?)?;
                }
                if m <= r {
                    acc.add_scaled(-sign(m) * m as i64, &self.lambda_power(r, m)?)?;
                }
                Ok(acc)
            })?;
        }
        Ok(table.read().expect("cache lock")[&(n, r)].clone())
    }

    /// ψ_Λ^n by the raw recursion, extended linearly.
    pub fn adams_lambda(&self, n: usize, a: &GreenElement) -> Result<GreenElement> {
        Self::check_n(n)?;
        self.linear(a, |r| self.adams_lambda_basis(n, r))
    }

    /// ψ_S^n(V_r) by Newton's recursion in the symmetric powers of V_r.
    pub fn adams_s_direct_basis(&self, n: usize, r: usize) -> Result<GreenElement> {
        Self::check_n(n)?;
        self.check_r(r)?;
        if n == 1 || self.q() == 1 {
            return self.basis(r);
        }
        let table = &self.tables().adams_s_direct;
        for m in 2..=n {
            memo(table, (m, r), || {
                let mut acc = self.s_power(r, m)?.scale(m as i64)?;
                for j in 1..m {
                    let prev = if j == 1 { self.basis(r)? } else { table.read().expect("cache lock")[&(j, r)].clone() };
                    acc = acc.sub(&self.mul(&prev, &self.s_power(r, m - j)?)?)?;
                }
                Ok(acc)
            })?;
        }
        Ok(table.read().expect("cache lock")[&(n, r)].clone())
    }

    pub fn adams_s_direct(&self, n: usize, a: &GreenElement) -> Result<GreenElement> {
        Self::check_n(n)?;
        self.linear(a, |r| self.adams_s_direct_basis(n, r))
    }

    /// ψ_S^n(V_r) from ψ_Λ^n(V_{q−r}) through the Heller translate.
    ///
    /// For r < q/p the value is computed in the smallest quotient of order
    /// p^j >= r and inflated.
    pub fn adams_s_via_lambda(&self, n: usize, r: usize) -> Result<GreenElement> {
        Self::check_n(n)?;
        self.check_r(r)?;
        let (p, q) = (self.p() as usize, self.q());
        if q == 1 || n == 1 {
            return self.basis(r);
        }
        if r * p < q {
            let mut j = 0;
            while p.pow(j) < r {
                j += 1;
            }
            return self.inflate(&self.factor(j)?.adams_s_via_lambda(n, r)?);
        }
        memo(&self.tables().adams_s, (n, r), || {
            let lam = if r == q { self.zero() } else { self.adams_lambda_basis(n, q - r)? };
            let omega = self.heller(&lam, n)?;
            let s = omega.dimension();
            let mut out = omega.scale(sign(n - 1))?;
            let g = gcd_u(n, q);
            out.add_scaled(g as i64, &self.basis(q / g)?)?;
            let num = r as i128 + sign(n) as i128 * s - q as i128;
            if num % q as i128 != 0 {
                return Err(Error::Inconsistent(format!(
                    "projective coefficient ({num})/{q} is not an integer for ψ_S^{n}(V_{r}) at {}",
                    self.order()
                )));
            }
            let a = i64::try_from(num / q as i128).map_err(|_| Error::Inconsistent("projective coefficient overflows".into()))?;
            out.add_scaled(a, &self.basis(q)?)?;
            Ok(out)
        })
    }

    /// ψ_S^n, through the conversion from ψ_Λ.
    pub fn adams_s(&self, n: usize, a: &GreenElement) -> Result<GreenElement> {
        Self::check_n(n)?;
        self.linear(a, |r| self.adams_s_via_lambda(n, r))
    }

    /// Period of ψ_Λ: 2q.
    pub fn lambda_period(&self) -> usize {
        2 * self.q()
    }

    /// Period of ψ_S: q for p = 2, 2q otherwise.
    pub fn s_period(&self) -> usize {
        if self.p() == 2 {
            self.q()
        } else {
            2 * self.q()
        }
    }

    fn reduce(n: usize, period: usize) -> usize {
        let m = match n % period {
            0 => period,
            m => m,
        };
        if m < period && m > period / 2 {
            period - m
        } else {
            m
        }
    }

    /// ψ_Λ^n after reducing n by the period and the symmetry n ↦ 2q − n.
    pub fn adams_lambda_fast(&self, n: usize, a: &GreenElement) -> Result<GreenElement> {
        Self::check_n(n)?;
        if self.q() == 1 {
            return self.adams_lambda(1, a);
        }
        self.adams_lambda(Self::reduce(n, self.lambda_period()), a)
    }

    /// ψ_S^n after reducing n by the period σ and the symmetry n ↦ σ − n.
    pub fn adams_s_fast(&self, n: usize, a: &GreenElement) -> Result<GreenElement> {
        Self::check_n(n)?;
        if self.q() == 1 {
            return self.adams_s(1, a);
        }
        self.adams_s(Self::reduce(n, self.s_period()), a)
    }
}

fn rename_cap(e: Error, object: String) -> Error {
    match e {
        Error::CapExceeded { dim, cap, .. } => Error::CapExceeded { object, dim, cap },
        other => other,
    }
}

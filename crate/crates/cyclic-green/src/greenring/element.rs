use std::fmt;

use crate::error::{Error, Order, Result};

/// An element Σ α_i V_i of the Green ring, stored as (α_1, ..., α_q).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GreenElement {
    order: Order,
    coeffs: Vec<i64>,
}

fn overflow() -> Error {
    Error::Inconsistent("integer overflow in Green ring arithmetic".into())
}

impl GreenElement {
    pub fn zero(order: Order) -> GreenElement {
        GreenElement { order, coeffs: vec![0; order.q] }
    }

    pub fn from_coeffs(order: Order, coeffs: Vec<i64>) -> Result<GreenElement> {
        if coeffs.len() != order.q {
            return Err(Error::DimensionMismatch(format!("expected {} coefficients, got {}", order.q, coeffs.len())));
        }
        Ok(GreenElement { order, coeffs })
    }

    /// The indecomposable V_r. V_0 is the zero element.
    pub fn basis(order: Order, r: usize) -> Result<GreenElement> {
        if r > order.q {
            return Err(Error::OutOfRange(format!("V_{r} needs r <= q = {}", order.q)));
        }
        let mut e = GreenElement::zero(order);
        if r > 0 {
            e.coeffs[r - 1] = 1;
        }
        Ok(e)
    }

    pub fn one(order: Order) -> GreenElement {
        GreenElement::basis(order, 1).expect("q >= 1")
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// α_r; zero outside 1..=q.
    pub fn coeff(&self, r: usize) -> i64 {
        if r == 0 || r > self.coeffs.len() {
            0
        } else {
            self.coeffs[r - 1]
        }
    }

    pub fn alpha1(&self) -> i64 {
        self.coeff(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check(&self, other: &GreenElement) -> Result<()> {
        if self.order != other.order {
            return Err(Error::ContextMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn add(&self, other: &GreenElement) -> Result<GreenElement> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.checked_add(*b).ok_or_else(overflow)).collect::<Result<_>>()?;
        Ok(GreenElement { order: self.order, coeffs })
    }

    pub fn sub(&self, other: &GreenElement) -> Result<GreenElement> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.checked_sub(*b).ok_or_else(overflow)).collect::<Result<_>>()?;
        Ok(GreenElement { order: self.order, coeffs })
    }

    pub fn neg(&self) -> Result<GreenElement> {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> Result<GreenElement> {
        let coeffs = self.coeffs.iter().map(|a| a.checked_mul(k).ok_or_else(overflow)).collect::<Result<_>>()?;
        Ok(GreenElement { order: self.order, coeffs })
    }

    /// self += k * other, in place.
    pub fn add_scaled(&mut self, k: i64, other: &GreenElement) -> Result<()> {
        self.check(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = b.checked_mul(k).and_then(|x| a.checked_add(x)).ok_or_else(overflow)?;
        }
        Ok(())
    }

    /// δ(A) = Σ i α_i.
    pub fn dimension(&self) -> i128 {
        self.coeffs.iter().enumerate().map(|(i, &a)| (i as i128 + 1) * a as i128).sum()
    }

    /// The dimension endomorphism A ↦ dim(A) V_1.
    pub fn delta(&self) -> Result<GreenElement> {
        let d = i64::try_from(self.dimension()).map_err(|_| overflow())?;
        GreenElement::one(self.order).scale(d)
    }

    /// True when α_i = 0 for every i not divisible by p.
    pub fn is_induced(&self) -> bool {
        let p = self.order.p as usize;
        self.coeffs.iter().enumerate().all(|(i, &a)| a == 0 || (i + 1) % p == 0)
    }

    /// A − B is an integer multiple of V_q.
    pub fn proj_equiv(&self, other: &GreenElement) -> Result<bool> {
        let d = self.sub(other)?;
        Ok(d.coeffs[..d.coeffs.len() - 1].iter().all(|&a| a == 0))
    }

    /// A − B lies in the span of the induced modules V_p, V_2p, ..., V_q.
    pub fn ind_equiv(&self, other: &GreenElement) -> Result<bool> {
        Ok(self.sub(other)?.is_induced())
    }

    /// Pads the coefficient vector to a larger order with the same p.
    pub fn inflate_to(&self, order: Order) -> Result<GreenElement> {
        if order.p != self.order.p || order.q < self.order.q {
            return Err(Error::OutOfRange(format!("cannot inflate from {} to {}", self.order, order)));
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order.q, 0);
        Ok(GreenElement { order, coeffs })
    }

    /// Parses the rendering produced by `Display`, e.g. "2*V3 - V1 + 4*V2" or "0".
    pub fn parse(order: Order, s: &str) -> Result<GreenElement> {
        let bad = |why: &str| Error::OutOfRange(format!("cannot parse {s:?}: {why}"));
        let mut out = GreenElement::zero(order);
        let t = s.trim();
        if t == "0" {
            return Ok(out);
        }
        let mut rest = t;
        let mut first = true;
        while !rest.is_empty() {
            let mut sign = 1i64;
            if let Some(r) = rest.strip_prefix('-') {
                sign = -1;
                rest = r.trim_start();
            } else if let Some(r) = rest.strip_prefix('+') {
                if first {
                    return Err(bad("leading '+'"));
                }
                rest = r.trim_start();
            } else if !first {
                return Err(bad("expected '+' or '-' between terms"));
            }
            let skip = rest.chars().next().map_or(0, char::len_utf8);
            let end = rest[skip..].find(['+', '-']).map_or(rest.len(), |i| i + skip);
            let term = rest[..end].trim();
            rest = rest[end..].trim_start();
            let (k, v) = match term.split_once('*') {
                Some((k, v)) => (k.trim().parse::<i64>().map_err(|_| bad("bad coefficient"))?, v.trim()),
                None => (1, term),
            };
            let r: usize = v.strip_prefix('V').and_then(|i| i.parse().ok()).ok_or_else(|| bad("expected V<index>"))?;
            if r == 0 || r > order.q {
                return Err(bad("index out of range"));
            }
            let c = &mut out.coeffs[r - 1];
            *c = k.checked_mul(sign).and_then(|x| c.checked_add(x)).ok_or_else(|| bad("overflow"))?;
            first = false;
        }
        if first {
            return Err(bad("empty"));
        }
        Ok(out)
    }
}

impl fmt::Display for GreenElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let mag = a.unsigned_abs();
            match (first, a < 0) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            write!(f, "V{}", i + 1)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(p: u32, e: u32) -> Order {
        Order::new(p, e).unwrap()
    }

    #[test]
    fn rendering() {
        let q4 = o(2, 2);
        assert_eq!(GreenElement::from_coeffs(q4, vec![0, 0, 3, 0]).unwrap().to_string(), "3*V3");
        assert_eq!(GreenElement::from_coeffs(q4, vec![-2, 2, 0, 0]).unwrap().to_string(), "-2*V1 + 2*V2");
        assert_eq!(GreenElement::from_coeffs(q4, vec![1, -1, 0, -4]).unwrap().to_string(), "V1 - V2 - 4*V4");
        assert_eq!(GreenElement::zero(q4).to_string(), "0");
    }

    #[test]
    fn parse_round_trip() {
        let q9 = o(3, 2);
        for c in [vec![0, 0, 0, 0, 0, 0, 0, 0, 0], vec![-7, 0, 1, 0, 0, 0, 0, 0, 12], vec![0, -1, 0, 0, 0, 0, 0, 0, -1]] {
            let a = GreenElement::from_coeffs(q9, c).unwrap();
            assert_eq!(GreenElement::parse(q9, &a.to_string()).unwrap(), a);
        }
        assert_eq!(GreenElement::parse(q9, "V2 + V2").unwrap().coeff(2), 2);
        for bad in ["", "V0", "V10", "+V1", "V1 V2", "2*", "x*V1", "V1 +"] {
            assert!(GreenElement::parse(q9, bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn equivalences() {
        let q4 = o(2, 2);
        let a = GreenElement::from_coeffs(q4, vec![0, 1, 0, 3]).unwrap();
        assert!(a.is_induced());
        let b = GreenElement::from_coeffs(q4, vec![1, 1, 0, 10]).unwrap();
        assert!(!b.is_induced());
        assert!(b.proj_equiv(&GreenElement::from_coeffs(q4, vec![1, 1, 0, -3]).unwrap()).unwrap());
        assert!(!a.proj_equiv(&b).unwrap());
        assert!(b.ind_equiv(&GreenElement::from_coeffs(q4, vec![1, 5, 0, 0]).unwrap()).unwrap());
        assert_eq!(GreenElement::from_coeffs(q4, vec![0, 0, 1, 2]).unwrap().delta().unwrap().coeffs(), &[11, 0, 0, 0]);
    }

    #[test]
    fn mismatched_orders() {
        let a = GreenElement::one(o(2, 2));
        let b = GreenElement::one(o(2, 3));
        assert!(matches!(a.add(&b), Err(Error::ContextMismatch(..))));
        assert_eq!(a.inflate_to(o(2, 3)).unwrap(), b);
        assert!(b.inflate_to(o(2, 2)).is_err());
        assert!(a.inflate_to(o(3, 2)).is_err());
    }
}

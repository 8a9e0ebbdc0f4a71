//! Orbit counts for the rotation action on subsets and multisets of Z/q, and
//! the closed forms for Adams operations on the regular module.

use crate::arith::{binomial, gcd_u};
use crate::error::{Error, Order, Result};

use super::element::GreenElement;

/// Number of orbits of each size t = 1, p, ..., q of rotation on n-subsets
/// (or n-multisets) of Z/q, as (t, count) pairs.
pub fn orbit_counts(order: Order, n: u128, multisets: bool) -> Result<Vec<(usize, u128)>> {
    let q = order.q as u128;
    let too_big = || Error::OutOfRange(format!("orbit counts for n = {n} overflow 128 bits"));
    // F(t): points fixed by the subgroup of index t, i.e. configurations that are unions of q/t-periodic blocks
    let fixed = |t: u128| -> Result<u128> {
        let period = q / t;
        if !n.is_multiple_of(period) {
            return Ok(0);
        }
        let k = n / period;
        let c = if multisets {
            if k == 0 {
                Some(1)
            } else {
                binomial(t + k - 1, k)
            }
        } else {
            binomial(t, k)
        };
        c.ok_or_else(too_big)
    };
    let mut out = Vec::with_capacity(order.e as usize + 1);
    let mut prev = 0u128;
    let mut t = 1u128;
    loop {
        let f = fixed(t)?;
        let free = f.checked_sub(prev).filter(|d| d % t == 0).ok_or_else(|| {
            Error::Inconsistent(format!("orbit count for size {t} is not a non-negative integer (F = {f}, previous {prev})"))
        })?;
        out.push((t as usize, free / t));
        prev = f;
        if t == q {
            break;
        }
        t *= order.p as u128;
    }
    Ok(out)
}

fn counts_to_element(order: Order, counts: &[(usize, u128)]) -> Result<GreenElement> {
    let mut e = GreenElement::zero(order);
    for &(t, c) in counts {
        let c = i64::try_from(c).map_err(|_| Error::OutOfRange(format!("multiplicity {c} does not fit in 64 bits")))?;
        e.add_scaled(c, &GreenElement::basis(order, t)?)?;
    }
    Ok(e)
}

/// Λ^n(V_q) as the permutation module on n-subsets of Z/q.
pub fn lambda_regular(order: Order, n: usize) -> Result<GreenElement> {
    counts_to_element(order, &orbit_counts(order, n as u128, false)?)
}

/// S^n(V_q) as the permutation module on n-multisets of Z/q.
pub fn s_regular(order: Order, n: usize) -> Result<GreenElement> {
    counts_to_element(order, &orbit_counts(order, n as u128, true)?)
}

/// k V_{q/k} with k = gcd(n, m), inside an order whose q is at least m/k.
fn gcd_term(order: Order, n: usize, m: usize) -> Result<GreenElement> {
    let k = gcd_u(n, m);
    GreenElement::basis(order, m / k)?.scale(k as i64)
}

/// ψ_Λ^n(V_q) by the closed formula.
pub fn closed_form_adams_regular_lambda(order: Order, n: usize) -> Result<GreenElement> {
    let q = order.q;
    if order.p != 2 {
        return gcd_term(order, n, q);
    }
    if n % 2 == 1 {
        return GreenElement::basis(order, q);
    }
    gcd_term(order, n, 2 * q)?.sub(&gcd_term(order, n, q)?)
}

/// ψ_S^n(V_q) by the closed formula.
pub fn closed_form_adams_regular_s(order: Order, n: usize) -> Result<GreenElement> {
    gcd_term(order, n, order.q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(p: u32, e: u32) -> Order {
        Order::new(p, e).unwrap()
    }

    /// Brute-force orbit sizes under rotation, as a multiplicity vector indexed by size.
    fn brute(q: usize, n: usize, multisets: bool) -> Vec<i64> {
        let mut configs: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..n {
            configs = configs
                .into_iter()
                .flat_map(|c| {
                    let lo = match (c.last(), multisets) {
                        (None, _) => 0,
                        (Some(&l), true) => l,
                        (Some(&l), false) => l + 1,
                    };
                    (lo..q).map(move |i| {
                        let mut d = c.clone();
                        d.push(i);
                        d
                    })
                })
                .collect();
        }
        let mut seen = std::collections::HashSet::new();
        let mut out = vec![0i64; q];
        for c in configs {
            if seen.contains(&c) {
                continue;
            }
            let mut orbit = vec![c.clone()];
            let mut cur = c;
            loop {
                let mut next: Vec<usize> = cur.iter().map(|&i| (i + 1) % q).collect();
                next.sort();
                if next == orbit[0] {
                    break;
                }
                orbit.push(next.clone());
                cur = next;
            }
            out[orbit.len() - 1] += 1;
            seen.extend(orbit);
        }
        out
    }

    #[test]
    fn agrees_with_enumeration() {
        for (p, e) in [(2, 2), (2, 3), (3, 1), (3, 2), (5, 1)] {
            let ord = o(p, e);
            for n in 0..=7 {
                assert_eq!(lambda_regular(ord, n).unwrap().coeffs(), &brute(ord.q, n, false)[..], "Λ^{n} q={}", ord.q);
                assert_eq!(s_regular(ord, n).unwrap().coeffs(), &brute(ord.q, n, true)[..], "S^{n} q={}", ord.q);
            }
        }
    }

    #[test]
    fn small_examples() {
        let q4 = o(2, 2);
        assert_eq!(lambda_regular(q4, 2).unwrap().coeffs(), &[0, 1, 0, 1]);
        assert_eq!(s_regular(q4, 2).unwrap().coeffs(), &[0, 1, 0, 2]);
        assert_eq!(closed_form_adams_regular_lambda(q4, 4).unwrap().coeffs(), &[-4, 4, 0, 0]);
        assert_eq!(closed_form_adams_regular_lambda(o(2, 3), 3).unwrap(), GreenElement::basis(o(2, 3), 8).unwrap());
        assert_eq!(closed_form_adams_regular_s(o(2, 3), 4).unwrap().coeffs(), &[0, 4, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn large_degrees_stay_exact() {
        let q16 = o(2, 4);
        let s = s_regular(q16, 40).unwrap();
        assert_eq!(s.dimension(), binomial(55, 40).unwrap() as i128);
        assert!(lambda_regular(q16, 17).unwrap().is_zero());
    }
}

//! Hurwitz class numbers, the Eichler–Selberg trace formula for `T(n)` on
//! `S_k(SL(2, Z))`, Hecke characteristic polynomials and Frobenius traces of
//! the motives `S[k]`.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::zeta_bounds;

/// `12·H(n)` for `0 <= n < len`, grown on demand and shared.
#[derive(Debug, Default)]
pub struct HurwitzCache {
    twelve_h: Vec<i64>,
}

impl HurwitzCache {
    /// All values up to and including `n_max`, by reduced-form enumeration.
    pub fn up_to(n_max: usize) -> HurwitzCache {
        let mut t = vec![0i64; n_max + 1];
        t[0] = -1;
        // b² - 4ac = -n with |b| <= a <= c; then 3a² <= n.
        let mut a: i64 = 1;
        while 3 * a * a <= n_max as i64 {
            for b in -a..=a {
                let mut c = a;
                loop {
                    let n = 4 * a * c - b * b;
                    if n > n_max as i64 {
                        break;
                    }
                    let boundary = b.abs() == a || a == c;
                    if !(boundary && b < 0) {
                        let w = if a == c && b == 0 {
                            6
                        } else if a == c && b == a {
                            4
                        } else {
                            12
                        };
                        t[n as usize] += w;
                    }
                    c += 1;
                }
            }
            a += 1;
        }
        HurwitzCache { twelve_h: t }
    }

    pub fn len(&self) -> usize {
        self.twelve_h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.twelve_h.is_empty()
    }

    /// `12·H(n)`; zero for negative `n`.
    pub fn twelve_h(&self, n: i64) -> i64 {
        if n < 0 {
            0
        } else {
            self.twelve_h[n as usize]
        }
    }
}

fn cache() -> &'static RwLock<HurwitzCache> {
    static C: OnceLock<RwLock<HurwitzCache>> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HurwitzCache::up_to(1 << 12)))
}

fn twelve_h(n: i64) -> i64 {
    if n < 0 {
        return 0;
    }
    {
        let c = cache().read().unwrap();
        if (n as usize) < c.len() {
            return c.twelve_h(n);
        }
    }
    let mut c = cache().write().unwrap();
    if (n as usize) >= c.len() {
        *c = HurwitzCache::up_to((n as usize + 1).next_power_of_two());
    }
    c.twelve_h(n)
}

/// The Hurwitz class number `H(n)` (`H(0) = -1/12`, `H(n) = 0` for `n < 0`).
pub fn hurwitz(n: i64) -> Ratio<i64> {
    Ratio::new(twelve_h(n), 12)
}

/// Coefficient of `x^{k-2}` in `1/(1 - t x + n x²)`.
pub fn gegenbauer(k: u32, t: &BigInt, n: &BigInt) -> Result<BigInt> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("P_k needs k >= 2, got {k}")));
    }
    let (mut g0, mut g1) = (BigInt::one(), t.clone());
    if k == 2 {
        return Ok(g0);
    }
    for _ in 2..k - 1 {
        let g2 = t * &g1 - n * &g0;
        g0 = g1;
        g1 = g2;
    }
    Ok(g1)
}

/// `dim S_k(SL(2, Z))`.
pub fn dim_sk(k: i64) -> usize {
    if k < 4 || k % 2 != 0 {
        return 0;
    }
    let m = if k % 12 == 2 { k / 12 } else { k / 12 + 1 };
    (m - 1) as usize
}

/// `Tr T(n)` on `S_k(SL(2, Z))`; zero for odd `k` and `dim S_k = 0`.
pub fn trace_tn(k: u32, n: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::InvalidInput("T(n) needs n >= 1".into()));
    }
    if k % 2 == 1 || dim_sk(k as i64) == 0 {
        return Ok(BigInt::zero());
    }
    let nb = BigInt::from(n);
    // 12 * (sum over t of P_k(t, n) H(4n - t²)), with t and -t paired
    let mut class_sum = BigInt::zero();
    let four_n = 4 * n as i64;
    let mut t: i64 = 0;
    while t * t <= four_n {
        let h = twelve_h(four_n - t * t);
        if h != 0 {
            let p = gegenbauer(k, &BigInt::from(t), &nb)?;
            let mult = if t == 0 { 1 } else { 2 };
            class_sum += p * (h * mult);
        }
        t += 1;
    }
    let mut divisor_sum = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let m = BigInt::from(d).pow(k - 1);
            divisor_sum += if d * d == n { m } else { m * 2 };
        }
        d += 1;
    }
    // Tr = -class_sum/24 - divisor_sum/2
    let num: BigInt = -class_sum - divisor_sum * BigInt::from(12);
    let (q, r) = num.div_rem(&BigInt::from(24));
    if !r.is_zero() {
        return Err(Error::NonIntegral(format!("Tr T({n}) on S_{k}")));
    }
    Ok(q)
}

/// Power sums `Σ_f a_f(p)^m`, `m = 0..=top`, from traces of `T(p^i)`.
fn eigenvalue_power_sums(k: u32, p: u64, top: usize) -> Result<Vec<BigInt>> {
    let pk = BigInt::from(p).pow(k - 1);
    let traces: Vec<BigInt> = (0..=top as u32)
        .map(|i| trace_tn(k, p.pow(i)))
        .collect::<Result<_>>()?;
    // T(p)^m = Σ c_i T(p^i)
    let mut c = vec![BigInt::one()];
    let mut out = Vec::with_capacity(top + 1);
    for m in 0..=top {
        out.push(c.iter().zip(&traces).map(|(a, b)| a * b).sum());
        if m == top {
            break;
        }
        let mut next = vec![BigInt::zero(); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            if i >= 1 {
                next[i - 1] += ci * &pk;
            }
        }
        c = next;
    }
    Ok(out)
}

/// Characteristic polynomial of `T(p)` on `S_k`, ascending coefficients, monic.
pub fn hecke_charpoly(k: u32, p: u64) -> Result<Vec<BigInt>> {
    let d = dim_sk(k as i64);
    if d > 6 {
        return Err(Error::Unsupported(format!("dim S_{k} = {d} > 6")));
    }
    let sums = eigenvalue_power_sums(k, p, d)?;
    // Newton: elementary e_i from power sums, then t^d - e_1 t^{d-1} + ...
    let a = zeta_bounds::coeffs_from_power_sums(&sums, d)?;
    // a_i are coefficients of Π(1 - λ t); reverse for Π(t - λ).
    let mut poly: Vec<BigInt> = a.into_iter().rev().collect();
    if poly.is_empty() {
        poly.push(BigInt::one());
    }
    Ok(poly)
}

/// Trace of `Frob_{p^r}` on `S[k]`: `Σ_f (α_f^r + ᾱ_f^r)`.
pub fn sk_frobenius_trace(k: u32, p: u64, r: u32) -> Result<BigInt> {
    if k % 2 == 1 || dim_sk(k as i64) == 0 {
        return Ok(BigInt::zero());
    }
    if r == 0 {
        return Ok(BigInt::from(2 * dim_sk(k as i64)));
    }
    let pk = BigInt::from(p).pow(k - 1);
    let top = trace_tn(k, p.pow(r))?;
    let lower = if r >= 2 {
        trace_tn(k, p.pow(r - 2))?
    } else {
        BigInt::zero()
    };
    Ok(top - pk * lower)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hurwitz_values() {
        let expect = [
            (0, (-1, 12)),
            (3, (1, 3)),
            (4, (1, 2)),
            (7, (1, 1)),
            (8, (1, 1)),
            (11, (1, 1)),
            (12, (4, 3)),
            (15, (2, 1)),
        ];
        for (n, (a, b)) in expect {
            assert_eq!(hurwitz(n), Ratio::new(a, b), "H({n})");
        }
        assert_eq!(hurwitz(-5), Ratio::zero());
        for n in 1..2000 {
            if n % 4 == 1 || n % 4 == 2 {
                assert_eq!(hurwitz(n), Ratio::zero());
            }
        }
    }

    #[test]
    fn gegenbauer_values() {
        let b = |x: i64| BigInt::from(x);
        assert_eq!(gegenbauer(2, &b(7), &b(3)).unwrap(), b(1));
        assert_eq!(gegenbauer(4, &b(7), &b(3)).unwrap(), b(46));
        // x³ coefficient t³ - 2nt, and x⁴ coefficient t⁴ - 3nt² + n²
        assert_eq!(gegenbauer(5, &b(5), &b(6)).unwrap(), b(65));
        assert_eq!(gegenbauer(6, &b(5), &b(6)).unwrap(), b(211));
        assert!(gegenbauer(1, &b(0), &b(0)).is_err());
    }

    #[test]
    fn delta_coefficients() {
        let tau = [
            (2, -24),
            (3, 252),
            (4, -1472),
            (5, 4830),
            (6, -6048),
            (7, -16744),
        ];
        for (n, t) in tau {
            assert_eq!(trace_tn(12, n).unwrap(), BigInt::from(t));
        }
        assert_eq!(trace_tn(10, 2).unwrap(), BigInt::zero());
        for k in (2..=100).step_by(2) {
            assert_eq!(trace_tn(k, 1).unwrap(), BigInt::from(dim_sk(k as i64)));
        }
    }

    #[test]
    fn dimensions() {
        assert_eq!(dim_sk(12), 1);
        assert_eq!(dim_sk(2), 0);
        assert_eq!(dim_sk(68), 5);
        assert_eq!(dim_sk(14), 0);
        assert_eq!(dim_sk(24), 2);
    }

    #[test]
    fn charpolys() {
        assert_eq!(
            hecke_charpoly(12, 2).unwrap(),
            vec![BigInt::from(24), BigInt::one()]
        );
        assert_eq!(
            hecke_charpoly(16, 2).unwrap(),
            vec![BigInt::from(-216), BigInt::one()]
        );
        let c = hecke_charpoly(28, 37).unwrap();
        let disc = &c[1] * &c[1] - BigInt::from(4) * &c[0];
        let (q, r) = disc.div_rem(&BigInt::from(18209));
        assert!(r.is_zero());
        assert_eq!(num_integer::Roots::sqrt(&q).pow(2u32), q);
    }

    #[test]
    fn frobenius_traces() {
        assert_eq!(sk_frobenius_trace(12, 2, 1).unwrap(), BigInt::from(-24));
        assert_eq!(sk_frobenius_trace(12, 2, 2).unwrap(), BigInt::from(-3520));
        assert_eq!(sk_frobenius_trace(10, 3, 2).unwrap(), BigInt::zero());
    }
}

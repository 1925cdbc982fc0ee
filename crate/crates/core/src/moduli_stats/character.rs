//! Symplectic Weyl characters of Frobenius eigenvalue multisets.
//!
//! A multiset of `2g` eigenvalues closed under `α ↦ q/α` is stored as
//! `P(t) = Π (1 - α_i t)`. The character of the irreducible `Sp(2g)`
//! representation of highest weight `λ` is the determinant of the `g × g`
//! matrix with entries `h_{λ_i-i+1}` in the first column and
//! `h_{λ_i-i+j} + q^{j-1} h_{λ_i-i-j+2}` in column `j >= 2`, where `h_k` are
//! the complete homogeneous symmetric functions of the eigenvalues.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest `|λ|` accepted by the character routines.
pub const MAX_WEIGHT: u32 = 200;

/// A dominant weight `λ_1 >= ... >= λ_g >= 0`.
pub fn check_weight(g: usize, lambda: &[u32]) -> Result<()> {
    if lambda.len() != g || !(1..=3).contains(&g) {
        return Err(Error::InvalidInput(format!(
            "weight {lambda:?} does not have length g = {g}"
        )));
    }
    if lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidInput(format!(
            "weight {lambda:?} is not dominant"
        )));
    }
    if lambda.iter().sum::<u32>() > MAX_WEIGHT {
        return Err(Error::Unsupported(format!("|λ| > {MAX_WEIGHT}")));
    }
    Ok(())
}

/// Full `P(t)` of degree `2g` from `e_1..e_g` (elementary symmetric
/// functions of the eigenvalues) and `q`.
pub fn full_poly(q: u64, e: &[i64]) -> Vec<i64> {
    let g = e.len();
    let mut a = vec![0i64; 2 * g + 1];
    a[0] = 1;
    for i in 1..=g {
        a[i] = if i % 2 == 0 { e[i - 1] } else { -e[i - 1] };
    }
    for i in 0..g {
        a[2 * g - i] = (q as i64).pow((g - i) as u32) * a[i];
    }
    a
}

/// `h_0..=h_top` of the eigenvalues of `P(t)`, the coefficients of `1/P(t)`.
pub fn complete_homogeneous(p: &[i64], top: usize) -> Vec<BigInt> {
    let mut h: Vec<BigInt> = Vec::with_capacity(top + 1);
    h.push(BigInt::one());
    for k in 1..=top {
        let mut acc = BigInt::zero();
        for (i, &c) in p.iter().enumerate().skip(1) {
            if i > k {
                break;
            }
            if c != 0 {
                acc -= &h[k - i] * c;
            }
        }
        h.push(acc);
    }
    h
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    match m.len() {
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        3 => {
            &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
                - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
                + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
        }
        _ => unreachable!("g <= 3"),
    }
}

/// `χ_λ` at the eigenvalues whose `h_k` are given.
pub fn sp_character_from_h(q: u64, lambda: &[u32], h: &[BigInt]) -> BigInt {
    let g = lambda.len();
    let hk = |k: i64| -> BigInt {
        if k < 0 {
            BigInt::zero()
        } else {
            h[k as usize].clone()
        }
    };
    let qb = BigInt::from(q);
    let m: Vec<Vec<BigInt>> = (1..=g as i64)
        .map(|i| {
            let li = lambda[(i - 1) as usize] as i64;
            (1..=g as i64)
                .map(|j| {
                    let first = hk(li - i + j);
                    if j == 1 {
                        first
                    } else {
                        first + qb.pow((j - 1) as u32) * hk(li - i - j + 2)
                    }
                })
                .collect()
        })
        .collect();
    det(&m)
}

/// `χ_λ` at the eigenvalues of `P(t)`.
pub fn sp_character(q: u64, p: &[i64], lambda: &[u32]) -> BigInt {
    let top = lambda.first().copied().unwrap_or(0) as usize + lambda.len();
    let h = complete_homogeneous(p, top);
    sp_character_from_h(q, lambda, &h)
}

/// Weyl dimension of the irreducible `Sp(2g)` representation `λ`.
pub fn weyl_dimension(lambda: &[u32]) -> BigInt {
    // Π over positive roots of <λ+ρ, α>/<ρ, α>, with ρ = (g, g-1, ..., 1).
    let g = lambda.len();
    let l: Vec<i64> = (0..g).map(|i| lambda[i] as i64 + (g - i) as i64).collect();
    let r: Vec<i64> = (0..g).map(|i| (g - i) as i64).collect();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..g {
        num *= 2 * l[i];
        den *= 2 * r[i];
        for j in i + 1..g {
            num *= (l[i] - l[j]) * (l[i] + l[j]);
            den *= (r[i] - r[j]) * (r[i] + r[j]);
        }
    }
    num / den
}

// ---------------------------------------------------------------------------
// Symbolic characters.

/// Integer polynomial in `e_1..e_g, q`; exponent vectors have length `g + 1`
/// with the exponent of `q` last.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MPoly {
    fn zero(nvars: usize) -> MPoly {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    fn monomial(nvars: usize, exps: Vec<u32>, c: BigInt) -> MPoly {
        let mut m = MPoly::zero(nvars);
        if !c.is_zero() {
            m.terms.insert(exps, c);
        }
        m
    }

    fn var(nvars: usize, i: usize) -> MPoly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MPoly::monomial(nvars, e, BigInt::one())
    }

    fn constant(nvars: usize, c: i64) -> MPoly {
        MPoly::monomial(nvars, vec![0; nvars], BigInt::from(c))
    }

    fn add_scaled(&mut self, o: &MPoly, c: &BigInt) {
        for (e, x) in &o.terms {
            let v = self.terms.entry(e.clone()).or_default();
            *v += x * c;
            if v.is_zero() {
                self.terms.remove(e);
            }
        }
    }

    fn mul(&self, o: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let v = out.terms.entry(e.clone()).or_default();
                *v += c1 * c2;
                if v.is_zero() {
                    out.terms.remove(&e);
                }
            }
        }
        out
    }

    pub fn evaluate(&self, vals: &[BigInt]) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(vals)
                    .fold(c.clone(), |acc, (&k, v)| acc * v.pow(k))
            })
            .sum()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
}

fn var_name(g: usize, i: usize) -> String {
    if i == g {
        "q".into()
    } else {
        format!("e{}", i + 1)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let g = self.nvars - 1;
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if n == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        var_name(g, i)
                    } else {
                        format!("{}^{k}", var_name(g, i))
                    }
                })
                .collect();
            let a = c.abs();
            if factors.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{a}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// `χ_λ` as a polynomial in `e_1..e_g` and `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    pub g: usize,
    pub lambda: Vec<u32>,
    pub poly: MPoly,
}

impl CharPoly {
    /// Value at Weil coordinates `e_1..e_g` and `q`.
    pub fn evaluate(&self, e: &[i64], q: u64) -> BigInt {
        let mut vals: Vec<BigInt> = e.iter().map(|&x| BigInt::from(x)).collect();
        vals.push(BigInt::from(q));
        self.poly.evaluate(&vals)
    }

    /// Value at the identity (all eigenvalues 1, `q = 1`).
    pub fn dimension(&self) -> BigInt {
        let g = self.g as u64;
        let e: Vec<i64> = (1..=g).map(|i| binomial(2 * g, i) as i64).collect();
        self.evaluate(&e, 1)
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Builds `χ_λ` symbolically from the `h_k` recurrence, without the cache.
pub fn symplectic_character_uncached(g: usize, lambda: &[u32]) -> Result<CharPoly> {
    check_weight(g, lambda)?;
    if lambda.iter().sum::<u32>() > 70 {
        return Err(Error::Unsupported(
            "symbolic characters are built for |λ| <= 70".into(),
        ));
    }
    let nv = g + 1;
    let q = MPoly::var(nv, g);
    let qpow = |k: usize| (0..k).fold(MPoly::constant(nv, 1), |acc, _| acc.mul(&q));
    // Coefficients of P(t): a_i = (-1)^i e_i, a_{2g-i} = q^{g-i} a_i
    let mut a: Vec<MPoly> = vec![MPoly::zero(nv); 2 * g + 1];
    a[0] = MPoly::constant(nv, 1);
    for i in 1..=g {
        let mut v = MPoly::var(nv, i - 1);
        if i % 2 == 1 {
            let mut neg = MPoly::zero(nv);
            neg.add_scaled(&v, &BigInt::from(-1));
            v = neg;
        }
        a[i] = v;
    }
    for i in 0..g {
        a[2 * g - i] = qpow(g - i).mul(&a[i]);
    }
    let top = lambda[0] as usize + g;
    let mut h: Vec<MPoly> = vec![MPoly::constant(nv, 1)];
    for k in 1..=top {
        let mut acc = MPoly::zero(nv);
        for i in 1..=k.min(2 * g) {
            acc.add_scaled(&a[i].mul(&h[k - i]), &BigInt::from(-1));
        }
        h.push(acc);
    }
    let hk = |k: i64| {
        if k < 0 {
            MPoly::zero(nv)
        } else {
            h[k as usize].clone()
        }
    };
    let m: Vec<Vec<MPoly>> = (1..=g as i64)
        .map(|i| {
            let li = lambda[(i - 1) as usize] as i64;
            (1..=g as i64)
                .map(|j| {
                    let mut x = hk(li - i + j);
                    if j >= 2 {
                        x.add_scaled(
                            &qpow((j - 1) as usize).mul(&hk(li - i - j + 2)),
                            &BigInt::one(),
                        );
                    }
                    x
                })
                .collect()
        })
        .collect();
    let one = BigInt::one();
    let neg = BigInt::from(-1);
    let poly = match g {
        1 => m[0][0].clone(),
        2 => {
            let mut d = m[0][0].mul(&m[1][1]);
            d.add_scaled(&m[0][1].mul(&m[1][0]), &neg);
            d
        }
        _ => {
            let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
                let mut d = m[r1][c1].mul(&m[r2][c2]);
                d.add_scaled(&m[r1][c2].mul(&m[r2][c1]), &neg);
                d
            };
            let mut d = m[0][0].mul(&minor(1, 2, 1, 2));
            d.add_scaled(&m[0][1].mul(&minor(1, 2, 0, 2)), &neg);
            d.add_scaled(&m[0][2].mul(&minor(1, 2, 0, 1)), &one);
            d
        }
    };
    Ok(CharPoly {
        g,
        lambda: lambda.to_vec(),
        poly,
    })
}

type CharCache = Mutex<HashMap<(usize, Vec<u32>), Arc<CharPoly>>>;

fn char_cache() -> &'static CharCache {
    static C: OnceLock<CharCache> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// Cached symbolic character.
pub fn symplectic_character(g: usize, lambda: &[u32]) -> Result<Arc<CharPoly>> {
    let key = (g, lambda.to_vec());
    if let Some(c) = char_cache().lock().unwrap().get(&key) {
        return Ok(c.clone());
    }
    let c = Arc::new(symplectic_character_uncached(g, lambda)?);
    Ok(char_cache().lock().unwrap().entry(key).or_insert(c).clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_characters() {
        assert_eq!(symplectic_character(2, &[1, 0]).unwrap().to_string(), "e1");
        let c = symplectic_character(2, &[1, 1]).unwrap();
        assert_eq!(c.to_string(), "e2 - q");
        assert_eq!(c.dimension(), BigInt::from(5));
        assert_eq!(
            symplectic_character(1, &[2]).unwrap().to_string(),
            "e1^2 - q"
        );
    }

    #[test]
    fn genus_one_recurrence() {
        for q in [2u64, 3, 5] {
            for t in -4i64..=4 {
                let p = full_poly(q, &[t]);
                let mut h = vec![BigInt::one(), BigInt::from(t)];
                for a in 2..20 {
                    let next = BigInt::from(t) * &h[a - 1] - BigInt::from(q) * &h[a - 2];
                    h.push(next);
                }
                for (a, ha) in h.iter().enumerate() {
                    assert_eq!(&sp_character(q, &p, &[a as u32]), ha);
                }
            }
        }
    }

    #[test]
    fn dimensions_match_weyl() {
        for a in 0..=10u32 {
            for b in 0..=a {
                let c = symplectic_character(2, &[a, b]).unwrap();
                let expect = (a - b + 1) * (b + 1) * (a + 2) * (a + b + 3) / 6;
                assert_eq!(c.dimension(), BigInt::from(expect));
                assert_eq!(weyl_dimension(&[a, b]), BigInt::from(expect));
            }
        }
        for lam in [[2u32, 1, 0], [3, 3, 1], [4, 2, 2]] {
            let c = symplectic_character(3, &lam).unwrap();
            assert_eq!(c.dimension(), weyl_dimension(&lam));
        }
    }

    #[test]
    fn symbolic_and_numeric_agree() {
        let q = 3u64;
        for lam in [vec![4u32, 2], vec![3, 3], vec![5, 1]] {
            let c = symplectic_character(2, &lam).unwrap();
            for e in [[1i64, 2], [-3, 5], [0, -6]] {
                assert_eq!(c.evaluate(&e, q), sp_character(q, &full_poly(q, &e), &lam));
            }
        }
        let c = symplectic_character(3, &[3, 2, 1]).unwrap();
        for e in [[1i64, 2, 3], [-2, 0, 5]] {
            assert_eq!(
                c.evaluate(&e, 2),
                sp_character(2, &full_poly(2, &e), &[3, 2, 1])
            );
        }
    }

    #[test]
    fn cache_is_coherent() {
        for lam in [[6u32, 2], [7, 7]] {
            let cached = symplectic_character(2, &lam).unwrap();
            assert_eq!(*cached, symplectic_character_uncached(2, &lam).unwrap());
        }
    }

    #[test]
    fn weights_are_validated() {
        assert!(check_weight(2, &[1, 2]).is_err());
        assert!(check_weight(2, &[1]).is_err());
        assert!(symplectic_character(2, &[40, 40]).is_err());
    }
}

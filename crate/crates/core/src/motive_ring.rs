//! Exact arithmetic in `Z[L, L^{-1}, S[2], S[12], S[16], ...]`, Frobenius
//! traces of such classes, Gaussian binomials and Getzler's residue formula
//! for `e_c(M_{1,n+1})`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::eichler_selberg::{dim_sk, sk_frobenius_trace};
use crate::error::{Error, Result};

/// `L^l · Π S[k_i]`, with the `k_i` sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub l: i32,
    pub s: Vec<u32>,
}

impl Monomial {
    fn one() -> Monomial {
        Monomial {
            l: 0,
            s: Vec::new(),
        }
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        let mut s = self.s.clone();
        s.extend_from_slice(&o.s);
        s.sort_unstable();
        Monomial { l: self.l + o.l, s }
    }
}

/// A finite integer combination of monomials, kept canonical (no zero terms).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MotiveExpr {
    terms: BTreeMap<Monomial, BigInt>,
}

/// Whether `S[k]` is a nonzero class: `k = 2` (kept symbolic) or `S_k ≠ 0`.
fn s_is_symbol(k: u32) -> bool {
    k == 2 || dim_sk(k as i64) > 0
}

impl MotiveExpr {
    pub fn zero() -> MotiveExpr {
        MotiveExpr::default()
    }

    pub fn int<T: Into<BigInt>>(n: T) -> MotiveExpr {
        MotiveExpr::term(n.into(), Monomial::one())
    }

    pub fn one() -> MotiveExpr {
        MotiveExpr::int(1)
    }

    fn term(c: BigInt, m: Monomial) -> MotiveExpr {
        let mut e = MotiveExpr::zero();
        if !c.is_zero() {
            e.terms.insert(m, c);
        }
        e
    }

    /// The Lefschetz class.
    pub fn l() -> MotiveExpr {
        MotiveExpr::l_pow(1)
    }

    pub fn l_pow(e: i32) -> MotiveExpr {
        MotiveExpr::term(
            BigInt::one(),
            Monomial {
                l: e,
                s: Vec::new(),
            },
        )
    }

    /// `S[k]`: zero for odd `k` and for even `k > 2` with `S_k = 0`.
    pub fn s(k: u32) -> MotiveExpr {
        if !s_is_symbol(k) {
            return MotiveExpr::zero();
        }
        MotiveExpr::term(BigInt::one(), Monomial { l: 0, s: vec![k] })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    /// Coefficient of a monomial.
    pub fn coefficient(&self, l: i32, s: &[u32]) -> BigInt {
        let mut s = s.to_vec();
        s.sort_unstable();
        self.terms
            .get(&Monomial { l, s })
            .cloned()
            .unwrap_or_default()
    }

    /// No `S[k]` factors and no negative powers of `L`.
    pub fn is_polynomial_in_l(&self) -> bool {
        self.terms.keys().all(|m| m.s.is_empty() && m.l >= 0)
    }

    pub fn min_l_power(&self) -> Option<i32> {
        self.terms.keys().map(|m| m.l).min()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &BigInt) -> MotiveExpr {
        if c.is_zero() {
            return MotiveExpr::zero();
        }
        MotiveExpr {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MotiveExpr {
        (0..e).fold(MotiveExpr::one(), |acc, _| &acc * self)
    }

    /// Multiplies by `L^e`.
    pub fn shift_l(&self, e: i32) -> MotiveExpr {
        MotiveExpr {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    (
                        Monomial {
                            l: m.l + e,
                            s: m.s.clone(),
                        },
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    /// Frobenius trace at `q = p^r`: `L ↦ q`, `S[k] ↦ Tr(F_q | S[k])`, and
    /// `S[2] ↦ -1 - q`.
    pub fn evaluate_rational(&self, p: u64, r: u32) -> Result<BigRational> {
        let q = BigInt::from(p).pow(r);
        let mut s_cache: BTreeMap<u32, BigInt> = BTreeMap::new();
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut v = BigRational::from_integer(c.clone());
            let lp = BigRational::from_integer(q.clone()).pow(m.l);
            v *= lp;
            for &k in &m.s {
                let t = match s_cache.get(&k) {
                    Some(t) => t.clone(),
                    None => {
                        let t = s_trace(k, p, r)?;
                        s_cache.insert(k, t.clone());
                        t
                    }
                };
                v *= BigRational::from_integer(t);
            }
            total += v;
        }
        Ok(total)
    }

    /// Integer Frobenius trace; fails if negative `L` powers leave a fraction.
    pub fn evaluate(&self, p: u64, r: u32) -> Result<BigInt> {
        let v = self.evaluate_rational(p, r)?;
        if !v.is_integer() {
            return Err(Error::NonIntegral(format!(
                "trace of {self} at {p}^{r} is {v}"
            )));
        }
        Ok(v.to_integer())
    }
}

/// Trace of `F_q`, `q = p^r`, on `S[k]`, with `S[2] = -1 - L`.
pub fn s_trace(k: u32, p: u64, r: u32) -> Result<BigInt> {
    if k == 2 {
        return Ok(-BigInt::one() - BigInt::from(p).pow(r));
    }
    sk_frobenius_trace(k, p, r)
}

impl std::ops::Add for &MotiveExpr {
    type Output = MotiveExpr;
    fn add(self, o: &MotiveExpr) -> MotiveExpr {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &MotiveExpr {
    type Output = MotiveExpr;
    fn sub(self, o: &MotiveExpr) -> MotiveExpr {
        self + &(-o)
    }
}

impl std::ops::Neg for &MotiveExpr {
    type Output = MotiveExpr;
    fn neg(self) -> MotiveExpr {
        MotiveExpr {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl std::ops::Mul for &MotiveExpr {
    type Output = MotiveExpr;
    fn mul(self, o: &MotiveExpr) -> MotiveExpr {
        let mut out = MotiveExpr::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl std::ops::$tr for MotiveExpr {
            type Output = MotiveExpr;
            fn $f(self, o: MotiveExpr) -> MotiveExpr {
                std::ops::$tr::$f(&self, &o)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl fmt::Display for MotiveExpr {
    /// Canonical form: terms by descending `L` power, then descending `S` factors.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut order: Vec<(&Monomial, &BigInt)> = self.terms.iter().collect();
        order.sort_by(|a, b| b.0.l.cmp(&a.0.l).then_with(|| b.0.s.cmp(&a.0.s)));
        for (i, (m, c)) in order.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            let mut j = 0;
            while j < m.s.len() {
                let k = m.s[j];
                let mult = m.s[j..].iter().take_while(|&&x| x == k).count();
                factors.push(if mult == 1 {
                    format!("S[{k}]")
                } else {
                    format!("S[{k}]^{mult}")
                });
                j += mult;
            }
            match m.l {
                0 => {}
                1 => factors.push("L".into()),
                e => factors.push(format!("L^{e}")),
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

fn parse_factor(tok: &str) -> Result<MotiveExpr> {
    let bad = || Error::InvalidInput(format!("bad factor '{tok}'"));
    let (base, exp) = match tok.rsplit_once('^') {
        Some((b, e)) => (b, e.parse::<i32>().map_err(|_| bad())?),
        None => (tok, 1),
    };
    if base == "L" {
        return Ok(MotiveExpr::l_pow(exp));
    }
    if let Some(k) = base.strip_prefix("S[").and_then(|r| r.strip_suffix(']')) {
        let k: u32 = k.parse().map_err(|_| bad())?;
        if exp < 0 {
            return Err(bad());
        }
        return Ok(MotiveExpr::s(k).pow(exp as u32));
    }
    let n: BigInt = base.parse().map_err(|_| bad())?;
    if exp < 0 {
        return Err(bad());
    }
    Ok(MotiveExpr::int(num_traits::pow(n, exp as usize)))
}

impl FromStr for MotiveExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<MotiveExpr> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::InvalidInput("empty expression".into()));
        }
        let mut total = MotiveExpr::zero();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'-' => (-1, &rest[1..]),
                b'+' => (1, &rest[1..]),
                _ => (1, rest),
            };
            // A term ends at the next '+' or '-' that does not follow '^'.
            let bytes = body.as_bytes();
            let mut end = body.len();
            for i in 1..bytes.len() {
                if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                    end = i;
                    break;
                }
            }
            let term = &body[..end];
            if term.is_empty() {
                return Err(Error::InvalidInput(format!("dangling sign in '{s}'")));
            }
            let mut e = MotiveExpr::int(sign);
            for tok in term.split('*') {
                e = &e * &parse_factor(tok)?;
            }
            total = &total + &e;
            rest = &body[end..];
        }
        Ok(total)
    }
}

// ---------------------------------------------------------------------------
// Gaussian binomials.

/// `[m choose k]_L` by the L-Pascal rule (division-free).
pub fn gaussian_binomial(m: u32, k: u32) -> MotiveExpr {
    if k > m {
        return MotiveExpr::zero();
    }
    let mut row = vec![MotiveExpr::one()];
    for i in 1..=m {
        let mut next = vec![MotiveExpr::zero(); (i + 1) as usize];
        for j in 0..=i as usize {
            let a = if j >= 1 {
                row[j - 1].clone()
            } else {
                MotiveExpr::zero()
            };
            let b = if j < row.len() {
                row[j].shift_l(j as i32)
            } else {
                MotiveExpr::zero()
            };
            next[j] = &a + &b;
        }
        row = next;
    }
    row[k as usize].clone()
}

/// The class of the Grassmannian of `d`-planes in `P^n`: `[n+1 choose d+1]_L`.
pub fn q_binomial(n: u32, d: u32) -> MotiveExpr {
    gaussian_binomial(n + 1, d + 1)
}

/// `[P^n] = L^n + ... + 1`.
pub fn projective_space(n: u32) -> MotiveExpr {
    q_binomial(n, 0)
}

/// `[n+1 choose d+1]_q` at an integer `q`, by the quotient of products.
pub fn q_binomial_at(n: u32, d: u32, q: &BigInt) -> Result<BigInt> {
    if d > n {
        return Ok(BigInt::zero());
    }
    let (m, k) = (n + 1, d + 1);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= q.pow(m - i) - BigInt::one();
        den *= q.pow(k - i) - BigInt::one();
    }
    if den.is_zero() {
        return Err(Error::InvalidInput(format!(
            "q = {q} makes the quotient undefined"
        )));
    }
    let (quo, rem) = num.div_rem(&den);
    if !rem.is_zero() {
        return Err(Error::NonIntegral("Gaussian binomial quotient".into()));
    }
    Ok(quo)
}

// ---------------------------------------------------------------------------
// Laurent polynomials in an auxiliary variable.

/// Finite Laurent polynomial in `x` with motivic coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentSeries {
    coeffs: BTreeMap<i32, MotiveExpr>,
}

impl LaurentSeries {
    pub fn monomial(e: i32, c: MotiveExpr) -> LaurentSeries {
        let mut s = LaurentSeries::default();
        if !c.is_zero() {
            s.coeffs.insert(e, c);
        }
        s
    }

    pub fn constant(c: MotiveExpr) -> LaurentSeries {
        LaurentSeries::monomial(0, c)
    }

    pub fn coefficient(&self, e: i32) -> MotiveExpr {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    /// Coefficient of `x^{-1}`.
    pub fn residue(&self) -> MotiveExpr {
        self.coefficient(-1)
    }

    /// Largest `n` with a nonzero `x^{-n}` term (0 if none).
    pub fn pole_order(&self) -> u32 {
        self.coeffs.keys().next().map_or(0, |&e| (-e).max(0) as u32)
    }

    fn add_at(&mut self, e: i32, c: MotiveExpr) {
        let v = self.coeffs.remove(&e).unwrap_or_default();
        let v = &v + &c;
        if !v.is_zero() {
            self.coeffs.insert(e, v);
        }
    }
}

impl std::ops::Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, o: &LaurentSeries) -> LaurentSeries {
        let mut out = self.clone();
        for (&e, c) in &o.coeffs {
            out.add_at(e, c.clone());
        }
        out
    }
}

impl std::ops::Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, o: &LaurentSeries) -> LaurentSeries {
        let mut out = LaurentSeries::default();
        for (&e1, c1) in &self.coeffs {
            for (&e2, c2) in &o.coeffs {
                out.add_at(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Getzler's formula.

/// The two ways to parenthesize the integrand's constant term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GetzlerReading {
    /// `(Σ_k (S[2k+2]+1) L^{-2k-1} x^{2k}) - 1`.
    OuterConstant,
    /// `Σ_k ((S[2k+2]+1) L^{-2k-1} x^{2k} - 1)`, truncated at `k_max`.
    PerTermConstant,
}

/// `n! · res_0[binom(L - x - L/x, n) · A(x) · (x - L/x)]` with the `k`-sum
/// of `A` truncated at `k <= k_max`.
pub fn getzler_residue(n: u32, reading: GetzlerReading, k_max: u32) -> MotiveExpr {
    let l = MotiveExpr::l();
    let base = &(&LaurentSeries::constant(l.clone())
        + &LaurentSeries::monomial(1, MotiveExpr::int(-1)))
        + &LaurentSeries::monomial(-1, -&l);
    // falling factorial (X)(X - 1)...(X - n + 1) = n! · binom(X, n)
    let mut falling = LaurentSeries::constant(MotiveExpr::one());
    for i in 0..n {
        let shifted = &base + &LaurentSeries::constant(MotiveExpr::int(-(i as i64)));
        falling = &falling * &shifted;
    }
    let mut a = LaurentSeries::default();
    for k in 1..=k_max {
        let c = (&MotiveExpr::s(2 * k + 2) + &MotiveExpr::one()).shift_l(-(2 * k as i32) - 1);
        a = &a + &LaurentSeries::monomial(2 * k as i32, c);
    }
    let constant = match reading {
        GetzlerReading::OuterConstant => MotiveExpr::int(-1),
        GetzlerReading::PerTermConstant => MotiveExpr::int(-(k_max as i64)),
    };
    a = &a + &LaurentSeries::constant(constant);
    let tail = &LaurentSeries::monomial(1, MotiveExpr::one()) + &LaurentSeries::monomial(-1, -&l);
    (&(&falling * &a) * &tail).residue()
}

/// `e_c(M_{1,n+1})` for `n <= 12`.
///
/// The `k`-sum is truncated at `2k <= n + 2` (higher terms cannot reach the
/// residue) and the result is checked against truncation at `n + 4`.
pub fn getzler_ec_m1n(n: u32) -> Result<MotiveExpr> {
    if n > 12 {
        return Err(Error::Unsupported(
            "Getzler's formula is evaluated for n <= 12".into(),
        ));
    }
    let k_max = (n + 2) / 2;
    let r = getzler_residue(n, GetzlerReading::OuterConstant, k_max);
    let wider = getzler_residue(n, GetzlerReading::OuterConstant, (n + 4) / 2 + 1);
    if r != wider {
        return Err(Error::Internal(
            "Getzler residue depends on the truncation".into(),
        ));
    }
    if r.min_l_power().is_some_and(|e| e < 0) {
        return Err(Error::NonIntegral(format!(
            "e_c(M_1,{}) has negative L powers: {r}",
            n + 1
        )));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn evaluation_examples() {
        let l3 = MotiveExpr::l_pow(3);
        assert_eq!(l3.evaluate(2, 1).unwrap(), BigInt::from(8));
        let e: MotiveExpr = "S[12] + 1".parse().unwrap();
        assert_eq!(e.evaluate(2, 1).unwrap(), BigInt::from(-23));
        for p in [2u64, 3, 5] {
            assert_eq!(
                MotiveExpr::s(2).evaluate(p, 1).unwrap(),
                BigInt::from(-1 - p as i64)
            );
        }
        assert!(MotiveExpr::l_pow(-1).evaluate(2, 1).is_err());
        assert!(MotiveExpr::s(10).is_zero());
        assert!(MotiveExpr::s(13).is_zero());
    }

    #[test]
    fn text_round_trip() {
        let e: MotiveExpr = "3*L^4 + S[12]*L - 1".parse().unwrap();
        assert_eq!(e.to_string(), "3*L^4 + S[12]*L - 1");
        let f: MotiveExpr = "-2*S[16]^2*L^-3 + L".parse().unwrap();
        assert_eq!(f.to_string().parse::<MotiveExpr>().unwrap(), f);
        assert_eq!(MotiveExpr::zero().to_string(), "0");
        assert!("3*Q".parse::<MotiveExpr>().is_err());
    }

    #[test]
    fn gaussian_binomials() {
        let two = BigInt::from(2);
        assert_eq!(projective_space(2).evaluate(2, 1).unwrap(), BigInt::from(7));
        assert_eq!(q_binomial(3, 1).evaluate(2, 1).unwrap(), BigInt::from(35));
        for n in 0..6u32 {
            for d in 0..=n {
                if d < n {
                    assert_eq!(q_binomial(n, d), q_binomial(n, n - d - 1));
                }
                assert_eq!(
                    q_binomial(n, d).evaluate(2, 1).unwrap(),
                    q_binomial_at(n, d, &two).unwrap()
                );
            }
        }
    }

    #[test]
    fn subspace_counts_match_brute_force() {
        // k-dimensional subspaces of F_q^m, counted through row-reduced bases.
        for q in [2u64, 3] {
            for m in 1..=4u32 {
                for k in 0..=m {
                    let brute = count_subspaces(q, m, k);
                    assert_eq!(
                        gaussian_binomial(m, k).evaluate(q, 1).unwrap(),
                        BigInt::from(brute)
                    );
                }
            }
        }
    }

    fn count_subspaces(q: u64, m: u32, k: u32) -> u64 {
        // Count k-tuples of linearly independent vectors, divide by #GL_k.
        let mut ordered = 1u64;
        let mut gl = 1u64;
        for i in 0..k {
            ordered *= q.pow(m) - q.pow(i);
            gl *= q.pow(k) - q.pow(i);
        }
        // Independent check of the independence count for tiny cases.
        if q == 2 && m <= 3 {
            let vecs: Vec<u32> = (0..1u32 << m).collect();
            let mut n_ind = 0u64;
            let mut stack: Vec<Vec<u32>> = vec![vec![]];
            while let Some(v) = stack.pop() {
                if v.len() == k as usize {
                    n_ind += 1;
                    continue;
                }
                for &w in &vecs {
                    let span: Vec<u32> = (0..1u32 << v.len())
                        .map(|mask| {
                            v.iter()
                                .enumerate()
                                .filter(|(i, _)| mask >> i & 1 == 1)
                                .fold(0, |a, (_, &x)| a ^ x)
                        })
                        .collect();
                    if !span.contains(&w) {
                        let mut nv = v.clone();
                        nv.push(w);
                        stack.push(nv);
                    }
                }
            }
            assert_eq!(n_ind, ordered);
        }
        ordered / gl
    }

    #[test]
    fn getzler_small_cases() {
        assert_eq!(getzler_ec_m1n(0).unwrap(), MotiveExpr::l());
        assert_eq!(getzler_ec_m1n(1).unwrap(), MotiveExpr::l_pow(2));
        for n in 0..=8 {
            assert!(getzler_ec_m1n(n).unwrap().is_polynomial_in_l(), "n={n}");
        }
        let e10 = getzler_ec_m1n(10).unwrap();
        assert!(e10.terms().any(|(m, c)| m.s == vec![12] && !c.is_zero()));
    }

    #[test]
    fn per_term_reading_depends_on_truncation() {
        let n = 4;
        let a = getzler_residue(n, GetzlerReading::PerTermConstant, 3);
        let b = getzler_residue(n, GetzlerReading::PerTermConstant, 5);
        assert_ne!(a, b);
    }

    fn arb_expr() -> impl Strategy<Value = MotiveExpr> {
        let mono = (
            -3i32..4,
            prop::collection::vec(prop::sample::select(vec![2u32, 12, 16, 18]), 0..3),
            -5i64..6,
        );
        prop::collection::vec(mono, 0..4).prop_map(|ts| {
            ts.into_iter().fold(MotiveExpr::zero(), |acc, (l, s, c)| {
                let m = s
                    .iter()
                    .fold(MotiveExpr::l_pow(l), |e, &k| &e * &MotiveExpr::s(k));
                &acc + &m.scale(&BigInt::from(c))
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn ring_laws(a in arb_expr(), b in arb_expr(), c in arb_expr()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &a), &MotiveExpr::zero());
            prop_assert_eq!(a.to_string().parse::<MotiveExpr>().unwrap(), a.clone());
        }
    }
}

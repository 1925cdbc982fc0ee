//! Dense univariate polynomials over `Q` (ascending coefficients) with Sturm
//! sequences for exact real-root counting.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type QPoly = Vec<BigRational>;

pub fn from_ints<I: IntoIterator<Item = BigInt>>(c: I) -> QPoly {
    let mut p: QPoly = c.into_iter().map(BigRational::from_integer).collect();
    trim(&mut p);
    p
}

pub fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

pub fn derivative(p: &[BigRational]) -> QPoly {
    let mut d: QPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    trim(&mut d);
    d
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly) {
    let mut r: QPoly = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = &b[db];
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut quo = vec![BigRational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let d = r.len() - 1;
        let c = &r[d] / lead;
        for (i, bi) in b.iter().enumerate() {
            let idx = d - db + i;
            r[idx] = &r[idx] - &c * bi;
        }
        quo[d - db] = c;
        r.pop();
        trim(&mut r);
    }
    trim(&mut quo);
    (quo, r)
}

fn monic(mut p: QPoly) -> QPoly {
    if let Some(l) = p.last().cloned() {
        for c in p.iter_mut() {
            *c = &*c / &l;
        }
    }
    p
}

pub fn gcd(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let mut x: QPoly = a.to_vec();
    let mut y: QPoly = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    monic(x)
}

fn sturm_chain(p: &[BigRational]) -> Vec<QPoly> {
    let mut chain = vec![p.to_vec(), derivative(p)];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        let (_, r) = divrem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain
}

fn sign_changes(chain: &[QPoly], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for p in chain {
        let v = eval(p, x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Number of distinct real roots of `p` in the half-open interval `(lo, hi]`.
pub fn distinct_roots_in(p: &[BigRational], lo: &BigRational, hi: &BigRational) -> usize {
    if p.len() <= 1 {
        return 0;
    }
    let chain = sturm_chain(p);
    sign_changes(&chain, lo) - sign_changes(&chain, hi)
}

/// Number of real roots of `p` in the closed interval `[lo, hi]`, counted
/// with multiplicity.
pub fn roots_in_closed(p: &[BigRational], lo: &BigRational, hi: &BigRational) -> usize {
    let mut total = 0;
    let mut cur: QPoly = p.to_vec();
    trim(&mut cur);
    // Sturm counts need an endpoint that is not a root, so divide out x - lo.
    let linear = vec![-lo.clone(), BigRational::one()];
    while cur.len() > 1 && eval(&cur, lo).is_zero() {
        cur = divrem(&cur, &linear).0;
        total += 1;
    }
    while cur.len() > 1 {
        total += distinct_roots_in(&cur, lo, hi);
        let d = derivative(&cur);
        cur = gcd(&cur, &d);
    }
    total
}

/// Disjoint intervals `(l, r]`, each containing exactly one distinct root of
/// `p` in `(lo, hi]`, with endpoints that are not roots of `p`.
pub fn isolate_roots(
    p: &[BigRational],
    lo: &BigRational,
    hi: &BigRational,
) -> Vec<(BigRational, BigRational)> {
    let sq = {
        let g = gcd(p, &derivative(p));
        divrem(p, &g).0
    };
    let chain = sturm_chain(&sq);
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone())];
    let two = BigRational::from_integer(BigInt::from(2));
    while let Some((l, r)) = stack.pop() {
        let n = sign_changes(&chain, &l) - sign_changes(&chain, &r);
        if n == 0 {
            continue;
        }
        let r_is_root = eval(&sq, &r).is_zero();
        if n == 1 && !r_is_root && !eval(&sq, &l).is_zero() {
            out.push((l, r));
            continue;
        }
        let mid = (&l + &r) / &two;
        stack.push((mid.clone(), r));
        stack.push((l, mid));
    }
    out.sort();
    out
}

/// Whether `p >= 0` on all of `[lo, hi]`, decided exactly.
pub fn nonnegative_on(p: &[BigRational], lo: &BigRational, hi: &BigRational) -> bool {
    let mut p: QPoly = p.to_vec();
    trim(&mut p);
    if p.is_empty() {
        return true;
    }
    if eval(&p, lo).is_negative() || eval(&p, hi).is_negative() {
        return false;
    }
    // Between consecutive roots the sign is constant, and every gap contains
    // an isolation endpoint that is not a root.
    let isolated = isolate_roots(&p, lo, hi);
    let ok = isolated
        .iter()
        .flat_map(|(l, r)| [l, r])
        .all(|x| !eval(&p, x).is_negative());
    ok
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(c: &[i64]) -> QPoly {
        from_ints(c.iter().map(|&x| BigInt::from(x)))
    }
    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn root_counts() {
        // (x-1)^2 (x-3)
        let p = qp(&[-3, 7, -5, 1]);
        assert_eq!(distinct_roots_in(&p, &r(0), &r(4)), 2);
        assert_eq!(roots_in_closed(&p, &r(0), &r(4)), 3);
        assert_eq!(roots_in_closed(&p, &r(1), &r(1)), 2);
        assert_eq!(roots_in_closed(&p, &r(2), &r(3)), 1);
        // x^2 + 1
        assert_eq!(roots_in_closed(&qp(&[1, 0, 1]), &r(-10), &r(10)), 0);
        // z^2 (16 - z): double root at the lower endpoint
        assert_eq!(roots_in_closed(&qp(&[0, 0, 16, -1]), &r(0), &r(16)), 3);
    }

    #[test]
    fn nonnegativity() {
        assert!(nonnegative_on(&qp(&[1, -2, 1]), &r(-5), &r(5)));
        assert!(!nonnegative_on(&qp(&[-1, 0, 1]), &r(-5), &r(5)));
        assert!(nonnegative_on(&qp(&[-1, 0, 1]), &r(1), &r(5)));
        // (x-1)^2 (x-2)^2 - tiny dip check: (x-1)^2 (x-2)^2 - 1/1000
        let mut p = qp(&[4, -12, 13, -6, 1]);
        assert!(nonnegative_on(&p, &r(-5), &r(5)));
        p[0] = &p[0] - BigRational::new(BigInt::from(1), BigInt::from(1000));
        assert!(!nonnegative_on(&p, &r(-5), &r(5)));
    }
}

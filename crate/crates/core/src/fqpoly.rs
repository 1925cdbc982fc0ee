//! Dense polynomials over a finite field, coefficients ascending, as element codes.

use crate::gf::FieldDesc;

pub fn trim(p: &mut Vec<u32>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

pub fn degree(p: &[u32]) -> Option<usize> {
    p.iter().rposition(|&c| c != 0)
}

pub fn derivative(fd: &FieldDesc, p: &[u32]) -> Vec<u32> {
    let mut d: Vec<u32> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| fd.scale(c, (i as u64 % fd.characteristic() as u64) as u32))
        .collect();
    trim(&mut d);
    d
}

pub fn add(fd: &FieldDesc, a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out: Vec<u32> = (0..n)
        .map(|i| fd.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(&mut out);
    out
}

pub fn mul(fd: &FieldDesc, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = fd.add(out[i + j], fd.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

pub fn scale(fd: &FieldDesc, a: &[u32], c: u32) -> Vec<u32> {
    let mut out: Vec<u32> = a.iter().map(|&x| fd.mul(x, c)).collect();
    trim(&mut out);
    out
}

/// Remainder of `a` modulo nonzero `b`.
pub fn rem(fd: &FieldDesc, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = fd.inv(b[db]).unwrap();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = fd.mul(r[dr], lead_inv);
        for (i, &bi) in b[..=db].iter().enumerate() {
            let idx = dr - db + i;
            r[idx] = fd.sub(r[idx], fd.mul(c, bi));
        }
        trim(&mut r);
    }
    r
}

/// Monic gcd (empty for gcd(0, 0)).
pub fn gcd(fd: &FieldDesc, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(fd, &x, &y);
        x = y;
        y = r;
    }
    if let Some(d) = degree(&x) {
        let inv = fd.inv(x[d]).unwrap();
        x = scale(fd, &x, inv);
    }
    x
}

/// Whether a nonzero polynomial has no repeated factor.
pub fn is_squarefree(fd: &FieldDesc, p: &[u32]) -> bool {
    let d = derivative(fd, p);
    if d.is_empty() {
        // Derivative vanishes identically: constant or a p-th power.
        return degree(p).unwrap_or(0) == 0;
    }
    gcd(fd, p, &d).len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn gcd_and_squarefree() {
        let f3 = make_field(3, 1).unwrap();
        // x^5 + x over F_3: squarefree
        assert!(is_squarefree(&f3, &[0, 1, 0, 0, 0, 1]));
        // x^2 (x + 1)
        assert!(!is_squarefree(&f3, &[0, 0, 1, 1]));
        let f5 = make_field(5, 1).unwrap();
        assert!(!is_squarefree(&f5, &[0, 0, 0, 0, 0, 0, 1]));
        // x^3 + 1 = (x+1)^3 over F_3: derivative identically zero
        assert!(!is_squarefree(&f3, &[1, 0, 0, 1]));
        let g = gcd(&f5, &[4, 0, 1], &[1, 1]);
        assert_eq!(g, vec![1, 1]);
    }
}

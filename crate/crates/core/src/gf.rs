//! Finite fields `F_q` with `q = p^f <= 2^20`.
//!
//! Elements are encoded as `u32` codes: the coefficient vector `(c_0, ..., c_{f-1})`
//! of the polynomial-basis representation read as base-`p` digits, `c_0` least
//! significant. Prime-field elements therefore have the same code in every
//! extension, and enumeration order is the numeric order of codes.
//!
//! Fields up to [`TABLE_LIMIT`] elements carry discrete-log/antilog tables;
//! larger ones multiply by polynomial reduction.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;
/// Fields with at most this many elements use log/antilog multiplication.
pub const TABLE_LIMIT: u32 = 1 << 16;
const ADD_TABLE_LIMIT: u32 = 1 << 10;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a prime power into `(p, f)`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let fs = prime_factors(q);
    if fs.len() != 1 {
        return None;
    }
    let p = fs[0];
    let mut f = 0;
    let mut m = q;
    while m > 1 {
        m /= p;
        f += 1;
    }
    Some((p as u32, f))
}

// ---------------------------------------------------------------------------
// Dense polynomials over F_p, used to build and validate moduli.

fn fp_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let (mut t, mut newt) = (0i64, 1i64);
    let (mut r, mut newr) = (p as i64, a as i64);
    while newr != 0 {
        let qt = r / newr;
        (t, newt) = (newt, t - qt * newt);
        (r, newr) = (newr, r - qt * newr);
    }
    t.rem_euclid(p as i64) as u32
}

fn fp_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut r: Vec<u32> = prod.into_iter().map(|x| x as u32).collect();
    fp_rem(&mut r, m, p);
    r
}

fn fp_rem(r: &mut Vec<u32>, m: &[u32], p: u32) {
    fp_trim(r);
    let dm = m.len() - 1;
    let lead_inv = fp_inv(m[dm], p);
    while r.len() > dm {
        let d = r.len() - 1;
        let c = (r[d] as u64 * lead_inv as u64 % p as u64) as u32;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let idx = d - dm + i;
                r[idx] = ((r[idx] as u64 + (p - c) as u64 * mi as u64) % p as u64) as u32;
            }
        }
        fp_trim(r);
    }
}

fn fp_gcd(mut a: Vec<u32>, mut b: Vec<u32>, p: u32) -> Vec<u32> {
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        fp_rem(&mut a, &b, p);
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn fp_powmod_x(exp_p_power: u32, m: &[u32], p: u32) -> Vec<u32> {
    // x^(p^k) mod m by k successive p-th powerings.
    let mut cur = vec![0, 1];
    fp_rem(&mut cur, m, p);
    for _ in 0..exp_p_power {
        let mut acc = vec![1u32];
        let mut base = cur.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_mulmod(&acc, &base, m, p);
            }
            base = fp_mulmod(&base, &base, m, p);
            e >>= 1;
        }
        cur = acc;
    }
    cur
}

/// Rabin's test: a monic `m` of degree `f` is irreducible iff `x^(p^f) = x mod m`
/// and `gcd(x^(p^(f/r)) - x, m) = 1` for each prime `r | f`.
fn fp_is_irreducible(m: &[u32], p: u32) -> bool {
    let f = m.len() - 1;
    if f == 1 {
        return true;
    }
    let xpf = fp_powmod_x(f as u32, m, p);
    if xpf != vec![0, 1] {
        return false;
    }
    for r in prime_factors(f as u64) {
        let mut t = fp_powmod_x((f as u64 / r) as u32, m, p);
        if t.len() < 2 {
            t.resize(2, 0);
        }
        t[1] = (t[1] + p - 1) % p;
        let g = fp_gcd(t, m.to_vec(), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------

struct LogTables {
    log: Vec<u32>,
    exp: Vec<u32>,
}

/// Immutable description of `F_{p^f}`.
pub struct FieldDesc {
    p: u32,
    f: u32,
    q: u32,
    modulus: Vec<u32>,
    pow_p: Vec<u32>,
    generator: u32,
    tables: Option<LogTables>,
    add_table: Option<Vec<u32>>,
    quad_char: OnceLock<Vec<i8>>,
    trace_table: OnceLock<Vec<u32>>,
}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldDesc")
            .field("p", &self.p)
            .field("f", &self.f)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.f == other.f && self.modulus == other.modulus
    }
}
impl Eq for FieldDesc {}

type Registry = Mutex<HashMap<(u32, u32), Arc<FieldDesc>>>;

fn registry() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds (or fetches from the process-wide cache) the field `F_{p^f}`.
///
/// The modulus is the least monic irreducible polynomial of degree `f` when
/// monic polynomials are ordered by the code of their lower coefficients.
pub fn make_field(p: u32, f: u32) -> Result<Arc<FieldDesc>> {
    if !is_prime(p as u64) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if f == 0 {
        return Err(Error::InvalidInput("extension degree must be >= 1".into()));
    }
    let q = (p as u64).checked_pow(f).filter(|&q| q <= MAX_FIELD_SIZE);
    let Some(q) = q else {
        return Err(Error::Unsupported(format!(
            "field of size {p}^{f} exceeds the cap 2^20"
        )));
    };
    if let Some(fd) = registry().lock().unwrap().get(&(p, f)) {
        return Ok(fd.clone());
    }
    let fd = Arc::new(FieldDesc::build(p, f, q as u32));
    let mut reg = registry().lock().unwrap();
    Ok(reg.entry((p, f)).or_insert(fd).clone())
}

/// Field of size `q` (a prime power).
pub fn field_of_size(q: u64) -> Result<Arc<FieldDesc>> {
    let (p, f) =
        prime_power(q).ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))?;
    make_field(p, f)
}

impl FieldDesc {
    fn build(p: u32, f: u32, q: u32) -> FieldDesc {
        let modulus = if f == 1 {
            vec![0, 1]
        } else {
            let rest = q;
            (0..rest)
                .map(|code| {
                    let mut m = Vec::with_capacity(f as usize + 1);
                    let mut c = code;
                    for _ in 0..f {
                        m.push(c % p);
                        c /= p;
                    }
                    m.push(1);
                    m
                })
                .find(|m| m[0] != 0 && fp_is_irreducible(m, p))
                .expect("an irreducible polynomial exists in every degree")
        };
        let mut pow_p = vec![1u32; f as usize + 1];
        for i in 1..=f as usize {
            pow_p[i] = pow_p[i - 1] * p;
        }
        let mut fd = FieldDesc {
            p,
            f,
            q,
            modulus,
            pow_p,
            generator: 0,
            tables: None,
            add_table: None,
            quad_char: OnceLock::new(),
            trace_table: OnceLock::new(),
        };
        fd.generator = fd.find_generator();
        if q <= TABLE_LIMIT {
            let n = (q - 1) as usize;
            let mut exp = vec![0u32; 2 * n.max(1)];
            let mut log = vec![0u32; q as usize];
            let mut x = 1u32;
            for i in 0..n {
                exp[i] = x;
                log[x as usize] = i as u32;
                x = fd.mul_poly(x, fd.generator);
            }
            for i in n..2 * n {
                exp[i] = exp[i - n];
            }
            fd.tables = Some(LogTables { log, exp });
        }
        if f > 1 && p != 2 && q <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = fd.add_digits(a, b);
                }
            }
            fd.add_table = Some(t);
        }
        fd
    }

    fn find_generator(&self) -> u32 {
        if self.q == 2 {
            return 1;
        }
        let n = (self.q - 1) as u64;
        let factors = prime_factors(n);
        (1..self.q)
            .find(|&g| factors.iter().all(|&r| self.pow_poly(g, n / r) != 1))
            .expect("multiplicative group is cyclic")
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }
    pub fn degree(&self) -> u32 {
        self.f
    }
    pub fn size(&self) -> u32 {
        self.q
    }
    /// Coefficients `c_0..c_f` of the defining polynomial (monic).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// A fixed generator of the multiplicative group.
    pub fn generator(&self) -> u32 {
        self.generator
    }
    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// Digits `c_0..c_{f-1}` of an element code.
    pub fn coeffs(&self, a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.f as usize);
        let mut c = a;
        for _ in 0..self.f {
            out.push(c % self.p);
            c /= self.p;
        }
        out
    }

    pub fn from_coeffs(&self, c: &[u32]) -> u32 {
        c.iter()
            .take(self.f as usize)
            .enumerate()
            .map(|(i, &d)| (d % self.p) * self.pow_p[i])
            .sum()
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for i in 0..self.f as usize {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * self.pow_p[i];
            a /= self.p;
            b /= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            a ^ b
        } else if self.f == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else if let Some(t) = &self.add_table {
            t[(a * self.q + b) as usize]
        } else {
            self.add_digits(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 || a == 0 {
            a
        } else if self.f == 1 {
            self.p - a
        } else {
            let mut c = a;
            let mut out = 0;
            for i in 0..self.f as usize {
                let d = c % self.p;
                if d != 0 {
                    out += (self.p - d) * self.pow_p[i];
                }
                c /= self.p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        if self.f == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        if self.p == 2 {
            return self.mul_bits(a, b);
        }
        self.mul_digits(a, b)
    }

    /// Carry-less product reduced by the modulus, for characteristic 2.
    fn mul_bits(&self, a: u32, b: u32) -> u32 {
        let f = self.f;
        let mut prod = 0u64;
        let mut x = a as u64;
        let mut y = b;
        while y != 0 {
            if y & 1 == 1 {
                prod ^= x;
            }
            x <<= 1;
            y >>= 1;
        }
        let m = self
            .modulus
            .iter()
            .rev()
            .fold(0u64, |acc, &c| (acc << 1) | c as u64);
        for d in (f..2 * f).rev() {
            if prod >> d & 1 == 1 {
                prod ^= m << (d - f);
            }
        }
        prod as u32
    }

    /// Schoolbook product on stack digit arrays (monic modulus).
    fn mul_digits(&self, a: u32, b: u32) -> u32 {
        let f = self.f as usize;
        let p = self.p as u64;
        let mut da = [0u64; 20];
        let mut db = [0u64; 20];
        let (mut x, mut y) = (a, b);
        for i in 0..f {
            da[i] = (x % self.p) as u64;
            db[i] = (y % self.p) as u64;
            x /= self.p;
            y /= self.p;
        }
        let mut prod = [0u64; 40];
        for i in 0..f {
            if da[i] == 0 {
                continue;
            }
            for j in 0..f {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        for d in (f..2 * f - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            for (i, &mi) in self.modulus[..f].iter().enumerate() {
                let idx = d - f + i;
                prod[idx] = (prod[idx] + (p - c) * mi as u64) % p;
            }
            prod[d] = 0;
        }
        (0..f).map(|i| prod[i] as u32 * self.pow_p[i]).sum()
    }

    fn pow_poly(&self, a: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => self.mul_poly(a, b),
        }
    }

    /// Multiplicative inverse; `inv(0)` is reported as `None`.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        Some(match &self.tables {
            Some(t) => {
                let n = self.q - 1;
                t.exp[((n - t.log[a as usize]) % n) as usize]
            }
            None => self.pow_poly(a, self.q as u64 - 2),
        })
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                let n = (self.q - 1) as u64;
                t.exp[((t.log[a as usize] as u64 * (e % n)) % n) as usize]
            }
            None => self.pow_poly(a, e),
        }
    }

    /// Discrete logarithm to the fixed generator (tabled fields only).
    pub fn log(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        self.tables.as_ref().map(|t| t.log[a as usize])
    }

    /// Quadratic character: 0 at 0, 1 on nonzero squares, -1 otherwise. Odd `p` only.
    pub fn quadratic_character(&self, a: u32) -> i8 {
        debug_assert!(self.p != 2);
        if a == 0 {
            return 0;
        }
        if let Some(t) = &self.tables {
            return if t.log[a as usize] % 2 == 0 { 1 } else { -1 };
        }
        if self.pow_poly(a, (self.q as u64 - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    /// Tabulated quadratic character over all codes (odd `p`, tabled fields).
    pub fn quadratic_character_table(&self) -> &[i8] {
        self.quad_char
            .get_or_init(|| (0..self.q).map(|a| self.quadratic_character(a)).collect())
    }

    /// Absolute trace `F_q -> F_p`, returned as a prime-field code.
    pub fn trace(&self, a: u32) -> u32 {
        if let Some(t) = self.trace_table.get() {
            return t[a as usize];
        }
        self.trace_direct(a)
    }

    fn trace_direct(&self, a: u32) -> u32 {
        let mut acc = 0;
        let mut x = a;
        for _ in 0..self.f {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as u64);
        }
        acc
    }

    /// Tabulated absolute trace (tabled fields).
    pub fn trace_table(&self) -> &[u32] {
        self.trace_table
            .get_or_init(|| (0..self.q).map(|a| self.trace_direct(a)).collect())
    }

    /// All elements in code order.
    pub fn enumerate(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    /// Multiply by a prime-field scalar.
    #[inline]
    pub fn scale(&self, a: u32, k: u32) -> u32 {
        self.mul(a, k % self.p)
    }

    /// Evaluates `sum c_i x^i` (coefficients in this field) by Horner's rule.
    #[inline]
    pub fn eval_poly(&self, coeffs: &[u32], x: u32) -> u32 {
        let mut acc = 0;
        for &c in coeffs.iter().rev() {
            acc = self.add(self.mul(acc, x), c);
        }
        acc
    }
}

/// Element together with its field, for ergonomic arithmetic.
#[derive(Clone, Debug)]
pub struct FieldElem {
    field: Arc<FieldDesc>,
    code: u32,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code && Arc::ptr_eq(&self.field, &other.field)
    }
}
impl Eq for FieldElem {}

impl FieldElem {
    pub fn new(field: &Arc<FieldDesc>, code: u32) -> FieldElem {
        assert!(code < field.size(), "element code out of range");
        FieldElem {
            field: field.clone(),
            code,
        }
    }
    pub fn zero(field: &Arc<FieldDesc>) -> FieldElem {
        FieldElem::new(field, 0)
    }
    pub fn one(field: &Arc<FieldDesc>) -> FieldElem {
        FieldElem::new(field, 1)
    }
    pub fn code(&self) -> u32 {
        self.code
    }
    pub fn field(&self) -> &Arc<FieldDesc> {
        &self.field
    }
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.code)
    }
    pub fn is_zero(&self) -> bool {
        self.code == 0
    }
    pub fn inv(&self) -> Option<FieldElem> {
        self.field
            .inv(self.code)
            .map(|c| FieldElem::new(&self.field, c))
    }
    pub fn pow(&self, e: u64) -> FieldElem {
        FieldElem::new(&self.field, self.field.pow(self.code, e))
    }
    fn check(&self, other: &FieldElem) {
        assert!(
            *self.field == *other.field,
            "arithmetic between elements of different fields"
        );
    }
}

macro_rules! elem_op {
    ($tr:ident, $m:ident, $op:ident) => {
        impl std::ops::$tr for &FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: &FieldElem) -> FieldElem {
                self.check(rhs);
                FieldElem::new(&self.field, self.field.$op(self.code, rhs.code))
            }
        }
        impl std::ops::$tr for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                (&self).$m(&rhs)
            }
        }
    };
}
elem_op!(Add, add, add);
elem_op!(Sub, sub, sub);
elem_op!(Mul, mul, mul);

impl std::ops::Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem::new(&self.field, self.field.neg(self.code))
    }
}

/// All elements of a field as [`FieldElem`]s, in code order.
pub fn enumerate(field: &Arc<FieldDesc>) -> Vec<FieldElem> {
    field
        .enumerate()
        .map(|c| FieldElem::new(field, c))
        .collect()
}

// ---------------------------------------------------------------------------
// Embeddings.

/// A ring homomorphism `F_{p^a} -> F_{p^b}` fixing `F_p`.
#[derive(Debug)]
pub struct Embedding {
    src: Arc<FieldDesc>,
    dst: Arc<FieldDesc>,
    root: u32,
    basis: Vec<u32>,
    table: Option<Vec<u32>>,
}

impl Embedding {
    fn from_root(src: &Arc<FieldDesc>, dst: &Arc<FieldDesc>, root: u32) -> Embedding {
        let mut basis = Vec::with_capacity(src.f as usize);
        let mut x = 1;
        for _ in 0..src.f {
            basis.push(x);
            x = dst.mul(x, root);
        }
        let mut e = Embedding {
            src: src.clone(),
            dst: dst.clone(),
            root,
            basis,
            table: None,
        };
        if src.q <= TABLE_LIMIT {
            e.table = Some((0..src.q).map(|a| e.map_direct(a)).collect());
        }
        e
    }

    fn map_direct(&self, a: u32) -> u32 {
        let digits = self.src.coeffs(a);
        let mut acc = 0;
        for (d, &b) in digits.iter().zip(&self.basis) {
            if *d != 0 {
                acc = self.dst.add(acc, self.dst.scale(b, *d));
            }
        }
        acc
    }

    #[inline]
    pub fn map(&self, a: u32) -> u32 {
        match &self.table {
            Some(t) => t[a as usize],
            None => self.map_direct(a),
        }
    }

    /// Image of the polynomial generator of the source field.
    pub fn root(&self) -> u32 {
        self.root
    }
    pub fn source(&self) -> &Arc<FieldDesc> {
        &self.src
    }
    pub fn target(&self) -> &Arc<FieldDesc> {
        &self.dst
    }
}

type EmbedCache = Mutex<HashMap<(u32, u32, u32), Arc<Embedding>>>;

fn embed_cache() -> &'static EmbedCache {
    static C: OnceLock<EmbedCache> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Embedding of `src` into `dst`.
///
/// The image of the source generator is the least root (by code) of the source
/// modulus in `dst` that is compatible with the already-chosen embeddings of
/// every maximal proper subfield of `src`; this makes `embed(a,c)` equal to
/// `embed(b,c) . embed(a,b)` for every tower `a <= b <= c`.
pub fn embed(src: &Arc<FieldDesc>, dst: &Arc<FieldDesc>) -> Result<Arc<Embedding>> {
    if src.p != dst.p || !dst.f.is_multiple_of(src.f) {
        return Err(Error::InvalidInput(format!(
            "F_{}^{} does not embed in F_{}^{}",
            src.p, src.f, dst.p, dst.f
        )));
    }
    let key = (src.p, src.f, dst.f);
    if let Some(e) = embed_cache().lock().unwrap().get(&key) {
        return Ok(e.clone());
    }
    let root = if src.f == 1 {
        0
    } else {
        let mut constraints = Vec::new();
        for r in prime_factors(src.f as u64) {
            let sub_f = src.f / r as u32;
            if sub_f == 1 {
                continue;
            }
            let sub = make_field(src.p, sub_f)?;
            let into_src = embed(&sub, src)?;
            let into_dst = embed(&sub, dst)?;
            constraints.push((into_src.root(), into_dst.root()));
        }
        let m = &src.modulus;
        dst.enumerate()
            .filter(|&x| dst.eval_poly(m, x) == 0)
            .find(|&x| {
                let cand = Embedding::from_root_untabled(src, dst, x);
                constraints
                    .iter()
                    .all(|&(in_src, in_dst)| cand.map_direct(in_src) == in_dst)
            })
            .ok_or_else(|| Error::Internal("no compatible root for embedding".into()))?
    };
    let e = Arc::new(if src.f == 1 {
        Embedding {
            src: src.clone(),
            dst: dst.clone(),
            root: 0,
            basis: vec![1],
            table: Some((0..src.q).collect()),
        }
    } else {
        Embedding::from_root(src, dst, root)
    });
    let mut c = embed_cache().lock().unwrap();
    Ok(c.entry(key).or_insert(e).clone())
}

impl Embedding {
    fn from_root_untabled(src: &Arc<FieldDesc>, dst: &Arc<FieldDesc>, root: u32) -> Embedding {
        let mut basis = Vec::with_capacity(src.f as usize);
        let mut x = 1;
        for _ in 0..src.f {
            basis.push(x);
            x = dst.mul(x, root);
        }
        Embedding {
            src: src.clone(),
            dst: dst.clone(),
            root,
            basis,
            table: None,
        }
    }
}

/// The degree-`n` extension of `base` together with the embedding into it.
pub fn extension(base: &Arc<FieldDesc>, n: u32) -> Result<(Arc<FieldDesc>, Arc<Embedding>)> {
    let big = make_field(base.p, base.f * n)?;
    let e = embed(base, &big)?;
    Ok((big, e))
}

// ---------------------------------------------------------------------------
// Bit-sliced batch evaluation in characteristic 2.

/// A fixed list of points of `F_{2^f}` in bit-sliced layout: plane `b` holds
/// bit `b` of every point's value, 64 points per word.
#[derive(Clone, Debug)]
pub struct PackedPoints {
    field: Arc<FieldDesc>,
    points: Vec<u32>,
    words: usize,
    powers: Vec<PackedValues>,
}

/// Values of some function at every point of a [`PackedPoints`] set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackedValues {
    planes: Vec<Vec<u64>>,
}

impl PackedValues {
    fn zero(f: usize, words: usize) -> PackedValues {
        PackedValues {
            planes: vec![vec![0; words]; f],
        }
    }

    fn xor_assign(&mut self, other: &PackedValues) {
        for (a, b) in self.planes.iter_mut().zip(&other.planes) {
            for (x, y) in a.iter_mut().zip(b) {
                *x ^= *y;
            }
        }
    }
}

impl PackedPoints {
    /// Prepares bit-sliced powers `x^0..x^max_degree` for the given points.
    pub fn new(
        field: &Arc<FieldDesc>,
        points: Vec<u32>,
        max_degree: usize,
    ) -> Result<PackedPoints> {
        if field.p != 2 {
            return Err(Error::InvalidInput(
                "packed evaluation needs characteristic 2".into(),
            ));
        }
        let words = points.len().div_ceil(64).max(1);
        let mut pp = PackedPoints {
            field: field.clone(),
            points,
            words,
            powers: Vec::new(),
        };
        for k in 0..=max_degree {
            let vals: Vec<u32> = pp.points.iter().map(|&x| field.pow(x, k as u64)).collect();
            let packed = pp.pack(&vals);
            pp.powers.push(packed);
        }
        Ok(pp)
    }

    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn pack(&self, vals: &[u32]) -> PackedValues {
        let f = self.field.f as usize;
        let mut out = PackedValues::zero(f, self.words);
        for (j, &v) in vals.iter().enumerate() {
            for b in 0..f {
                if (v >> b) & 1 == 1 {
                    out.planes[b][j / 64] |= 1 << (j % 64);
                }
            }
        }
        out
    }

    pub fn unpack(&self, v: &PackedValues) -> Vec<u32> {
        (0..self.points.len())
            .map(|j| {
                v.planes
                    .iter()
                    .enumerate()
                    .map(|(b, pl)| (((pl[j / 64] >> (j % 64)) & 1) as u32) << b)
                    .sum()
            })
            .collect()
    }

    /// `c * v`, computed as an `F_2`-linear map on the bit planes.
    pub fn scale(&self, c: u32, v: &PackedValues) -> PackedValues {
        let f = self.field.f as usize;
        let mut out = PackedValues::zero(f, self.words);
        for b in 0..f {
            let img = self.field.mul(c, 1 << b);
            for r in 0..f {
                if (img >> r) & 1 == 1 {
                    for w in 0..self.words {
                        out.planes[r][w] ^= v.planes[b][w];
                    }
                }
            }
        }
        out
    }

    /// Values of `sum c_i x^i` at every point.
    pub fn eval_poly(&self, coeffs: &[u32]) -> PackedValues {
        let f = self.field.f as usize;
        let mut acc = PackedValues::zero(f, self.words);
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                acc.xor_assign(&self.scale(c, &self.powers[i]));
            }
        }
        acc
    }

    /// Bitmask of points where the packed values vanish.
    pub fn zero_mask(&self, v: &PackedValues) -> Vec<u64> {
        let mut mask = vec![!0u64; self.words];
        for pl in &v.planes {
            for (m, x) in mask.iter_mut().zip(pl) {
                *m &= !*x;
            }
        }
        let n = self.points.len();
        if !n.is_multiple_of(64) {
            mask[self.words - 1] &= (1u64 << (n % 64)) - 1;
        }
        mask
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_products_match_polynomial_reference() {
        for (p, f) in [(2u32, 20u32), (2, 7), (3, 12), (5, 8), (7, 3)] {
            let fd = make_field(p, f).unwrap();
            let mut rng = 0x9e3779b97f4a7c15u64;
            for _ in 0..2000 {
                rng = rng
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let a = ((rng >> 33) % fd.size() as u64) as u32;
                let b = ((rng >> 7) % fd.size() as u64) as u32;
                let r = fp_mulmod(&fd.coeffs(a), &fd.coeffs(b), fd.modulus(), p);
                assert_eq!(fd.mul_poly(a, b), fd.from_coeffs(&r), "p={p} f={f}");
            }
        }
    }

    #[test]
    fn small_fields_have_expected_moduli() {
        assert_eq!(make_field(2, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(make_field(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(make_field(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(make_field(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn modulus_is_least_irreducible_by_exhaustive_scan() {
        // Independent check: an irreducible quadratic/cubic has no root in F_p.
        for &(p, f) in &[(2u32, 2u32), (2, 3), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let fd = make_field(p, f).unwrap();
            let m = fd.modulus();
            let has_root = |m: &[u32]| {
                (0..p).any(|x| {
                    m.iter()
                        .rev()
                        .fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p as u64)
                        == 0
                })
            };
            assert!(!has_root(m));
            let code_of = |m: &[u32]| m[..f as usize].iter().rev().fold(0u32, |a, &c| a * p + c);
            for code in 0..code_of(m) {
                let mut cand = Vec::new();
                let mut c = code;
                for _ in 0..f {
                    cand.push(c % p);
                    c /= p;
                }
                cand.push(1);
                assert!(has_root(&cand), "{cand:?} precedes the chosen modulus");
            }
        }
    }

    #[test]
    fn errors_on_bad_parameters() {
        assert!(make_field(4, 1).is_err());
        assert!(make_field(2, 21).is_err());
        assert!(make_field(3, 13).is_err());
        assert!(make_field(2, 20).is_ok());
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for &(p, f) in &[
            (2u32, 1u32),
            (2, 2),
            (2, 3),
            (3, 2),
            (5, 1),
            (2, 4),
            (3, 3),
            (7, 2),
        ] {
            let fd = make_field(p, f).unwrap();
            let q = fd.size() as u64;
            for a in fd.enumerate() {
                assert_eq!(fd.pow(a, q), a);
                if a != 0 {
                    assert_eq!(fd.mul(a, fd.inv(a).unwrap()), 1);
                    assert_eq!(fd.pow(a, q - 1), 1);
                }
                assert_eq!(fd.add(a, fd.neg(a)), 0);
            }
            assert_eq!(fd.pow(fd.generator(), q - 1), 1);
            for r in prime_factors(q - 1) {
                assert_ne!(fd.pow(fd.generator(), (q - 1) / r), 1);
            }
        }
    }

    #[test]
    fn table_free_field_agrees_with_frobenius() {
        let fd = make_field(2, 18).unwrap();
        assert!(!fd.has_tables());
        let q = fd.size() as u64;
        for a in [1u32, 2, 3, 12345, 200000] {
            assert_eq!(fd.pow(a, q), a);
            assert_eq!(fd.mul(a, fd.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn enumeration_properties() {
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(f2.enumerate().collect::<Vec<_>>(), vec![0, 1]);
        let f4 = make_field(2, 2).unwrap();
        let e4: Vec<_> = f4.enumerate().collect();
        assert_eq!(e4.len(), 4);
        assert_eq!(&e4[..2], &[0, 1]);
        let f9 = make_field(3, 2).unwrap();
        let elems = enumerate(&f9);
        assert_eq!(elems.len(), 9);
        let sum = elems.iter().fold(FieldElem::zero(&f9), |acc, x| &acc + x);
        assert!(sum.is_zero());
    }

    #[test]
    fn embeddings_are_homomorphisms() {
        for &(p, a, b) in &[
            (2u32, 1u32, 2u32),
            (2, 2, 4),
            (2, 2, 6),
            (2, 3, 6),
            (3, 1, 2),
            (3, 2, 4),
        ] {
            let src = make_field(p, a).unwrap();
            let dst = make_field(p, b).unwrap();
            let e = embed(&src, &dst).unwrap();
            for x in src.enumerate() {
                for y in src.enumerate() {
                    assert_eq!(e.map(src.add(x, y)), dst.add(e.map(x), e.map(y)));
                    assert_eq!(e.map(src.mul(x, y)), dst.mul(e.map(x), e.map(y)));
                }
            }
        }
    }

    #[test]
    fn embedding_examples_and_errors() {
        let f2 = make_field(2, 1).unwrap();
        let f4 = make_field(2, 2).unwrap();
        let f8 = make_field(2, 3).unwrap();
        let f16 = make_field(2, 4).unwrap();
        let e = embed(&f2, &f4).unwrap();
        assert_eq!((e.map(0), e.map(1)), (0, 1));
        let e = embed(&f4, &f16).unwrap();
        let g = e.map(f4.generator());
        assert_eq!(f16.pow(g, 3), 1);
        assert_ne!(g, 1);
        assert!(embed(&f4, &f8).is_err());
        assert!(embed(&f4, &make_field(3, 2).unwrap()).is_err());
    }

    #[test]
    fn embeddings_compose_along_towers() {
        for &(p, a, b, c) in &[
            (2u32, 2u32, 4u32, 8u32),
            (2, 2, 4, 16),
            (3, 2, 4, 8),
            (2, 3, 6, 12),
            (2, 2, 6, 12),
        ] {
            let fa = make_field(p, a).unwrap();
            let fb = make_field(p, b).unwrap();
            let fc = make_field(p, c).unwrap();
            let ab = embed(&fa, &fb).unwrap();
            let bc = embed(&fb, &fc).unwrap();
            let ac = embed(&fa, &fc).unwrap();
            for x in fa.enumerate() {
                assert_eq!(ac.map(x), bc.map(ab.map(x)));
            }
        }
    }

    #[test]
    fn construction_is_deterministic() {
        let a = FieldDesc::build(3, 4, 81);
        let b = make_field(3, 4).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a.generator(), b.generator());
    }

    #[test]
    fn packed_evaluation_matches_scalar() {
        let f16 = make_field(2, 4).unwrap();
        let pts: Vec<u32> = f16.enumerate().collect();
        let pp = PackedPoints::new(&f16, pts.clone(), 6).unwrap();
        let coeffs = [3u32, 0, 7, 1, 0, 9, 15];
        let vals = pp.unpack(&pp.eval_poly(&coeffs));
        for (j, &x) in pts.iter().enumerate() {
            assert_eq!(vals[j], f16.eval_poly(&coeffs, x));
        }
        let zm = pp.zero_mask(&pp.eval_poly(&[0, 1]));
        assert_eq!(zm[0], 1);
    }
}

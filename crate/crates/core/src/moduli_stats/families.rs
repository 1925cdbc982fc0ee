//! Equation families and their point-count tallies.
//!
//! Every family returns `(tally, weight)` pairs: each equation counted in
//! `tally` contributes `weight` to the groupoid count, where `weight` is the
//! inverse order of the group whose orbits are the isomorphism classes.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::sweep::{gray_sweep, in_pool, merge, GrayState, Tally};
use crate::curve_models::{
    count_pair_in, form_is_squarefree, projective_plane, ternary_monomials,
    weierstrass_discriminant,
};
use crate::error::{Error, Result};
use crate::gf::{self, Embedding, FieldDesc};

pub(crate) struct Family {
    pub label: &'static str,
    pub tally: Tally,
    /// Inverse of the weight of one equation.
    pub group_order: u64,
}

impl Family {
    fn new(label: &'static str, tally: Tally, group_order: u64) -> Family {
        Family {
            label,
            tally,
            group_order,
        }
    }
}

pub(crate) fn gl2_order(q: u64) -> u64 {
    (q * q - 1) * (q * q - q)
}

pub(crate) fn gl3_order(q: u64) -> u64 {
    (q.pow(3) - 1) * (q.pow(3) - q) * (q.pow(3) - q * q)
}

struct Ext {
    fd: Arc<FieldDesc>,
    emb: Arc<Embedding>,
}

fn extensions(fd: &Arc<FieldDesc>, top: u32) -> Result<Vec<Ext>> {
    (1..=top)
        .map(|m| gf::extension(fd, m).map(|(fd, emb)| Ext { fd, emb }))
        .collect()
}

// ---------------------------------------------------------------------------
// Elliptic curves.

/// Every long Weierstrass equation, weighted by the substitution group of
/// order `q³(q - 1)`.
pub(crate) fn elliptic_full(fd: &Arc<FieldDesc>) -> Vec<Family> {
    let q = fd.size() as u64;
    let tally = in_pool(|| {
        (0..q * q)
            .into_par_iter()
            .map(|i| {
                let (a1, a2) = ((i / q) as u32, (i % q) as u32);
                let mut t = Tally::new();
                for a3 in fd.enumerate() {
                    for a4 in fd.enumerate() {
                        for a6 in fd.enumerate() {
                            if weierstrass_discriminant(fd, [a1, a2, a3, a4, a6]) == 0 {
                                continue;
                            }
                            let c = count_pair_in(fd, 1, &[a3, a1, 0], &[a6, a4, a2, 1, 0]);
                            *t.entry(vec![c as i64]).or_default() += 1;
                        }
                    }
                }
                t
            })
            .reduce(Tally::new, merge)
    });
    vec![Family::new("long Weierstrass", tally, q.pow(3) * (q - 1))]
}

fn tally_pairs<I>(fd: &FieldDesc, eqs: I) -> Tally
where
    I: ParallelIterator<Item = ([u32; 2], [u32; 4])>,
{
    eqs.fold(Tally::new, |mut t, (h, f)| {
        let c = count_pair_in(fd, 1, &[h[0], h[1], 0], &[f[0], f[1], f[2], f[3], 0]);
        *t.entry(vec![c as i64]).or_default() += 1;
        t
    })
    .reduce(Tally::new, merge)
}

/// Reduced Weierstrass families, one per characteristic, each weighted by
/// the subgroup preserving its shape.
pub(crate) fn elliptic_reduced(fd: &Arc<FieldDesc>) -> Vec<Family> {
    let q = fd.size() as u64;
    let qq = q as u32;
    let smooth = |a: [u32; 5]| weierstrass_discriminant(fd, a) != 0;
    in_pool(|| match fd.characteristic() {
        2 => {
            // y² + xy = x³ + a2 x² + a6, a6 != 0
            let ord = (0..qq * qq).into_par_iter().filter_map(|i| {
                let (a2, a6) = (i / qq, i % qq);
                (a6 != 0).then_some(([0, 1], [a6, 0, a2, 1]))
            });
            // y² + a3 y = x³ + a4 x + a6, a3 != 0
            let sup = (0..qq * qq * qq).into_par_iter().filter_map(|i| {
                let (a3, a4, a6) = (i / (qq * qq), (i / qq) % qq, i % qq);
                (a3 != 0).then_some(([a3, 0], [a6, a4, 0, 1]))
            });
            vec![
                Family::new("y^2+xy=x^3+a2x^2+a6", tally_pairs(fd, ord), q),
                Family::new("y^2+a3y=x^3+a4x+a6", tally_pairs(fd, sup), q * q * (q - 1)),
            ]
        }
        3 => {
            // y² = x³ + a2 x² + a4 x + a6
            let eqs = (0..qq * qq * qq).into_par_iter().filter_map(|i| {
                let (a2, a4, a6) = (i / (qq * qq), (i / qq) % qq, i % qq);
                smooth([0, a2, 0, a4, a6]).then_some(([0, 0], [a6, a4, a2, 1]))
            });
            vec![Family::new("y^2=cubic", tally_pairs(fd, eqs), q * (q - 1))]
        }
        _ => {
            // y² = x³ + a x + b
            let eqs = (0..qq * qq).into_par_iter().filter_map(|i| {
                let (a4, a6) = (i / qq, i % qq);
                smooth([0, 0, 0, a4, a6]).then_some(([0, 0], [a6, a4, 0, 1]))
            });
            vec![Family::new("y^2=x^3+ax+b", tally_pairs(fd, eqs), q - 1)]
        }
    })
}

// ---------------------------------------------------------------------------
// Hyperelliptic curves, odd characteristic: y² = F(x, z), F a squarefree
// binary form of degree 2g + 2.

struct OddCtx {
    fd: Arc<FieldDesc>,
    g: usize,
    f: usize,
    exts: Vec<Ext>,
    /// `cols[m][d][x]`: the value at `x ∈ F_{q^{m+1}}` of the digit-`d` column.
    cols: Vec<Vec<Vec<u32>>>,
    basis: Vec<u32>,
}

struct OddState<'a> {
    ctx: &'a OddCtx,
    coef: Vec<u32>,
    vals: Vec<Vec<u32>>,
}

impl GrayState for OddState<'_> {
    fn reset(&mut self, digits: &[u32]) {
        let c = self.ctx;
        let n = 2 * c.g + 3;
        self.coef = (0..n)
            .map(|j| {
                (0..c.f).fold(0, |acc, s| {
                    c.fd.add(acc, c.fd.scale(c.basis[s], digits[j * c.f + s]))
                })
            })
            .collect();
        self.vals = c
            .exts
            .iter()
            .map(|e| {
                let coef: Vec<u32> = self.coef.iter().map(|&a| e.emb.map(a)).collect();
                e.fd.enumerate().map(|x| e.fd.eval_poly(&coef, x)).collect()
            })
            .collect();
    }

    fn bump(&mut self, pos: usize, _new: u32) {
        let c = self.ctx;
        let (j, s) = (pos / c.f, pos % c.f);
        self.coef[j] = c.fd.add(self.coef[j], c.basis[s]);
        for (m, e) in c.exts.iter().enumerate() {
            let col = &c.cols[m][pos];
            for (v, &a) in self.vals[m].iter_mut().zip(col) {
                *v = e.fd.add(*v, a);
            }
        }
    }

    fn visit(&mut self, tally: &mut HashMap<Vec<i64>, u64>) {
        let c = self.ctx;
        let n = 2 * c.g + 2;
        if self.coef[n] == 0 && self.coef[n - 1] == 0 {
            return;
        }
        if !form_is_squarefree(&c.fd, &self.coef, n) {
            return;
        }
        let key = c
            .exts
            .iter()
            .zip(&self.vals)
            .map(|(e, vals)| {
                let chi = e.fd.quadratic_character_table();
                let affine: i64 = vals.iter().map(|&v| 1 + chi[v as usize] as i64).sum();
                affine + 1 + chi[e.emb.map(self.coef[n]) as usize] as i64
            })
            .collect();
        *tally.entry(key).or_default() += 1;
    }
}

/// Squarefree binary forms of degree `2g + 2`, weight `1/#GL_2(F_q)` each.
pub(crate) fn hyperelliptic_odd(fd: &Arc<FieldDesc>, g: usize) -> Result<Vec<Family>> {
    let q = fd.size() as u64;
    let p = fd.characteristic();
    let f = fd.degree() as usize;
    let exts = extensions(fd, g as u32)?;
    let n = 2 * g + 3;
    let basis: Vec<u32> = (0..f).map(|s| p.pow(s as u32)).collect();
    let cols = exts
        .iter()
        .map(|e| {
            (0..n * f)
                .map(|d| {
                    let (j, s) = (d / f, d % f);
                    let b = e.emb.map(basis[s]);
                    e.fd.enumerate()
                        .map(|x| e.fd.mul(b, e.fd.pow(x, j as u64)))
                        .collect()
                })
                .collect()
        })
        .collect();
    let ctx = OddCtx {
        fd: fd.clone(),
        g,
        f,
        exts,
        cols,
        basis,
    };
    let tally = gray_sweep(p, n * f, || OddState {
        ctx: &ctx,
        coef: vec![],
        vals: vec![],
    });
    Ok(vec![Family::new("y^2=F(x,z)", tally, gl2_order(q))])
}

// ---------------------------------------------------------------------------
// Hyperelliptic curves, characteristic 2: y² + h y = f with deg h <= g + 1,
// deg f <= 2g + 2.

struct Char2Ctx {
    /// Per extension degree: number of points where `h` vanishes.
    roots: Vec<i64>,
    /// Per extension degree: mask of the trace bits of the other points.
    masks: Vec<u128>,
    tr_cols: Vec<u128>,
    /// Smoothness functionals, one per root of `h` (and one at infinity).
    phi_cols: Vec<Vec<u32>>,
}

struct Char2State<'a> {
    ctx: &'a Char2Ctx,
    bits: u128,
    phi: Vec<u32>,
}

impl GrayState for Char2State<'_> {
    fn reset(&mut self, digits: &[u32]) {
        self.bits = 0;
        self.phi = vec![0; self.ctx.phi_cols.len()];
        for (d, _) in digits.iter().enumerate().filter(|(_, &v)| v == 1) {
            self.bump(d, 1);
        }
    }

    fn bump(&mut self, pos: usize, _new: u32) {
        self.bits ^= self.ctx.tr_cols[pos];
        for (v, col) in self.phi.iter_mut().zip(&self.ctx.phi_cols) {
            *v ^= col[pos];
        }
    }

    fn visit(&mut self, tally: &mut HashMap<Vec<i64>, u64>) {
        if self.phi.contains(&0) {
            return;
        }
        let c = self.ctx;
        let key = c
            .roots
            .iter()
            .zip(&c.masks)
            .map(|(&r, &mask)| {
                r + 2 * ((mask.count_ones() - (self.bits & mask).count_ones()) as i64)
            })
            .collect();
        *tally.entry(key).or_default() += 1;
    }
}

fn char2_context(fd: &Arc<FieldDesc>, g: usize, h: &[u32], exts: &[Ext]) -> Result<Char2Ctx> {
    let f = fd.degree() as usize;
    let nf = 2 * g + 3;
    let ndig = nf * f;
    let basis: Vec<u32> = (0..f).map(|s| 1u32 << s).collect();
    let lead = h[g + 1];
    let mut roots = Vec::new();
    let mut masks = Vec::new();
    let mut tr_cols = vec![0u128; ndig];
    let mut bit = 0usize;
    let next_bit = |bit: &mut usize| -> Result<usize> {
        if *bit >= 128 {
            return Err(Error::Unsupported(
                "more than 128 points in a characteristic-2 sweep".into(),
            ));
        }
        *bit += 1;
        Ok(*bit - 1)
    };
    for e in &exts[..g] {
        let he: Vec<u32> = h.iter().map(|&c| e.emb.map(c)).collect();
        let mut r = 0i64;
        let mut mask = 0u128;
        for x in e.fd.enumerate() {
            let hx = e.fd.eval_poly(&he, x);
            if hx == 0 {
                r += 1;
                continue;
            }
            let b = next_bit(&mut bit)?;
            mask |= 1 << b;
            let inv = e.fd.inv(e.fd.mul(hx, hx)).unwrap();
            for (d, col) in tr_cols.iter_mut().enumerate() {
                let (j, s) = (d / f, d % f);
                let v =
                    e.fd.mul(e.fd.mul(e.emb.map(basis[s]), e.fd.pow(x, j as u64)), inv);
                if e.fd.trace(v) == 1 {
                    *col |= 1 << b;
                }
            }
        }
        if lead == 0 {
            r += 1;
        } else {
            let b = next_bit(&mut bit)?;
            mask |= 1 << b;
            let l = e.emb.map(lead);
            let inv = e.fd.inv(e.fd.mul(l, l)).unwrap();
            for s in 0..f {
                let v = e.fd.mul(e.emb.map(basis[s]), inv);
                if e.fd.trace(v) == 1 {
                    tr_cols[(nf - 1) * f + s] |= 1 << b;
                }
            }
        }
        roots.push(r);
        masks.push(mask);
    }
    // h' has coefficients j·h_j; squaring in characteristic 2 is additive.
    let hd: Vec<u32> = (1..h.len())
        .map(|j| if j % 2 == 1 { h[j] } else { 0 })
        .collect();
    let mut phi_cols = Vec::new();
    for e in exts {
        let he: Vec<u32> = h.iter().map(|&c| e.emb.map(c)).collect();
        let hde: Vec<u32> = hd.iter().map(|&c| e.emb.map(c)).collect();
        for x0 in e.fd.enumerate().filter(|&x| e.fd.eval_poly(&he, x) == 0) {
            let hp = e.fd.eval_poly(&hde, x0);
            let hp2 = e.fd.mul(hp, hp);
            let col = (0..ndig)
                .map(|d| {
                    let (j, s) = (d / f, d % f);
                    let b = e.emb.map(basis[s]);
                    let val = e.fd.mul(hp2, e.fd.mul(b, e.fd.pow(x0, j as u64)));
                    let der = if j % 2 == 1 {
                        let t = e.fd.mul(b, e.fd.pow(x0, j as u64 - 1));
                        e.fd.mul(t, t)
                    } else {
                        0
                    };
                    val ^ der
                })
                .collect();
            phi_cols.push(col);
        }
    }
    if lead == 0 {
        let hg2 = fd.mul(h[g], h[g]);
        let col = (0..ndig)
            .map(|d| {
                let (j, s) = (d / f, d % f);
                if j == 2 * g + 2 {
                    fd.mul(hg2, basis[s])
                } else if j == 2 * g + 1 {
                    fd.mul(basis[s], basis[s])
                } else {
                    0
                }
            })
            .collect();
        phi_cols.push(col);
    }
    Ok(Char2Ctx {
        roots,
        masks,
        tr_cols,
        phi_cols,
    })
}

/// Artin–Schreier pairs `(h, f)`, weight `1/(#GL_2(F_q)·q^{g+2})` each.
pub(crate) fn hyperelliptic_char2(fd: &Arc<FieldDesc>, g: usize) -> Result<Vec<Family>> {
    let q = fd.size() as u64;
    let f = fd.degree() as usize;
    let exts = extensions(fd, g as u32 + 1)?;
    let nh = (q as u32).pow(g as u32 + 2);
    let tally = in_pool(|| {
        (1..nh)
            .into_par_iter()
            .map(|code| -> Result<Tally> {
                let h: Vec<u32> = (0..g + 2)
                    .map(|j| (code / (q as u32).pow(j as u32)) % q as u32)
                    .collect();
                let ctx = char2_context(fd, g, &h, &exts)?;
                let mut state = Char2State {
                    ctx: &ctx,
                    bits: 0,
                    phi: vec![],
                };
                let mut t = HashMap::new();
                super::sweep::gray_full(2, (2 * g + 3) * f, &mut state, &mut t);
                Ok(t.into_iter().collect())
            })
            .try_reduce(Tally::new, |a, b| Ok(merge(a, b)))
    })?;
    Ok(vec![Family::new(
        "y^2+hy=f",
        tally,
        gl2_order(q) * q.pow(g as u32 + 2),
    )])
}

// ---------------------------------------------------------------------------
// Plane quartics over a prime field.

/// Bitset of the quartic forms (coefficient digits in monomial order) that
/// are singular at some point of `P²` over `F_{p^k}`, `k <= 4`.
fn singular_quartics(p: u32) -> Result<Vec<u64>> {
    let mons = ternary_monomials(4);
    let total = (p as u64).pow(15);
    let mut bits = vec![0u64; total.div_ceil(64) as usize];
    let pw: Vec<u64> = (0..15).map(|i| (p as u64).pow(i)).collect();
    for k in 1..=4 {
        let e = gf::make_field(p, k)?;
        let kernels: Vec<Vec<Vec<u32>>> = in_pool(|| {
            projective_plane(&e)
                .into_par_iter()
                .map(|pt| {
                    let rows = singular_conditions(&e, &mons, pt);
                    kernel_mod_p(p, rows, 15)
                })
                .collect()
        });
        for basis in kernels {
            let dim = basis.len();
            let mut coef = vec![0u32; dim];
            loop {
                let mut code = 0u64;
                for i in 0..15 {
                    let c = basis
                        .iter()
                        .zip(&coef)
                        .fold(0u32, |acc, (v, &a)| (acc + a * v[i]) % p);
                    code += c as u64 * pw[i];
                }
                bits[(code / 64) as usize] |= 1 << (code % 64);
                let mut t = 0;
                while t < dim && coef[t] == p - 1 {
                    coef[t] = 0;
                    t += 1;
                }
                if t == dim {
                    break;
                }
                coef[t] += 1;
            }
        }
    }
    Ok(bits)
}

/// Rows over `F_p` of the conditions `Q = Q_x = Q_y = Q_z = 0` at `pt`.
fn singular_conditions(e: &FieldDesc, mons: &[[u32; 3]], pt: [u32; 3]) -> Vec<Vec<u32>> {
    let p = e.characteristic();
    let powv = |i: usize, k: u32| e.pow(pt[i], k as u64);
    let mono = |m: [u32; 3]| e.mul(e.mul(powv(0, m[0]), powv(1, m[1])), powv(2, m[2]));
    let mut funcs: Vec<Vec<u32>> = vec![mons.iter().map(|&m| mono(m)).collect()];
    for v in 0..3 {
        funcs.push(
            mons.iter()
                .map(|&m| {
                    if m[v] % p == 0 {
                        return 0;
                    }
                    let mut d = m;
                    d[v] -= 1;
                    e.scale(mono(d), m[v])
                })
                .collect(),
        );
    }
    let k = e.degree() as usize;
    let mut rows = Vec::new();
    for func in funcs {
        let digits: Vec<Vec<u32>> = func.iter().map(|&a| e.coeffs(a)).collect();
        for r in 0..k {
            rows.push(digits.iter().map(|d| d[r]).collect());
        }
    }
    rows
}

fn inv_mod(a: u32, p: u32) -> u32 {
    (1..p).find(|&b| a * b % p == 1).expect("unit")
}

/// Basis of the null space of `rows` over `F_p`.
fn kernel_mod_p(p: u32, mut rows: Vec<Vec<u32>>, ncols: usize) -> Vec<Vec<u32>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(i) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, i);
        let inv = inv_mod(rows[r][c], p);
        for v in rows[r].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..ncols {
                    rows[i][j] = (rows[i][j] + (p - f) * rows[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u32; ncols];
            v[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - rows[i][free]) % p;
            }
            v
        })
        .collect()
}

struct QuarticCtx {
    p: u32,
    fields: Vec<Arc<FieldDesc>>,
    /// `cols[k][d][i]`: monomial `d` at point `i` of `P²(F_{p^{k+1}})`.
    cols: Vec<Vec<Vec<u32>>>,
    singular: Vec<u64>,
    pw: Vec<u64>,
}

struct QuarticState<'a> {
    ctx: &'a QuarticCtx,
    code: u64,
    vals: Vec<Vec<u32>>,
}

impl GrayState for QuarticState<'_> {
    fn reset(&mut self, digits: &[u32]) {
        let c = self.ctx;
        self.code = digits.iter().zip(&c.pw).map(|(&d, &w)| d as u64 * w).sum();
        self.vals = c
            .fields
            .iter()
            .zip(&c.cols)
            .map(|(e, cols)| {
                (0..cols[0].len())
                    .map(|i| {
                        digits
                            .iter()
                            .zip(cols)
                            .fold(0, |acc, (&d, col)| e.add(acc, e.scale(col[i], d)))
                    })
                    .collect()
            })
            .collect();
    }

    fn bump(&mut self, pos: usize, new: u32) {
        let c = self.ctx;
        if new == 0 {
            self.code -= (c.p as u64 - 1) * c.pw[pos];
        } else {
            self.code += c.pw[pos];
        }
        for ((e, cols), vals) in c.fields.iter().zip(&c.cols).zip(self.vals.iter_mut()) {
            for (v, &a) in vals.iter_mut().zip(&cols[pos]) {
                *v = e.add(*v, a);
            }
        }
    }

    fn visit(&mut self, tally: &mut HashMap<Vec<i64>, u64>) {
        if self.ctx.singular[(self.code / 64) as usize] >> (self.code % 64) & 1 == 1 {
            return;
        }
        let key = self
            .vals
            .iter()
            .map(|v| v.iter().filter(|&&x| x == 0).count() as i64)
            .collect();
        *tally.entry(key).or_default() += 1;
    }
}

/// Smooth ternary quartic forms, weight `1/#GL_3(F_p)` each.
pub(crate) fn quartics(fd: &Arc<FieldDesc>) -> Result<Vec<Family>> {
    if fd.degree() != 1 || fd.size() > 3 {
        return Err(Error::Unsupported(
            "quartic sweeps run over F_2 and F_3 only".into(),
        ));
    }
    let p = fd.characteristic();
    let mons = ternary_monomials(4);
    let fields: Vec<Arc<FieldDesc>> = (1..=3)
        .map(|k| gf::make_field(p, k))
        .collect::<Result<_>>()?;
    let cols = fields
        .iter()
        .map(|e| {
            let pts = projective_plane(e);
            mons.iter()
                .map(|m| {
                    pts.iter()
                        .map(|pt| (0..3).fold(1, |acc, v| e.mul(acc, e.pow(pt[v], m[v] as u64))))
                        .collect()
                })
                .collect()
        })
        .collect();
    let ctx = QuarticCtx {
        p,
        fields,
        cols,
        singular: singular_quartics(p)?,
        pw: (0..15).map(|i| (p as u64).pow(i)).collect(),
    };
    let tally = gray_sweep(p, 15, || QuarticState {
        ctx: &ctx,
        code: 0,
        vals: vec![],
    });
    Ok(vec![Family::new(
        "plane quartic",
        tally,
        gl3_order(p as u64),
    )])
}

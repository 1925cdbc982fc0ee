//! Groupoid counts of curves and abelian varieties over `F_q`, weighted by
//! symplectic characters of their Frobenius eigenvalues.
//!
//! Classes are never enumerated individually: each family of equations is
//! the set of orbits of an explicit group `G`, so summing `f/#G` over
//! equations equals summing `f/#Aut` over classes. Entries are aggregated by
//! Weil polynomial.

pub mod cache;
pub mod character;
mod families;
mod sweep;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub use cache::EnsembleStore;
pub use character::{sp_character, symplectic_character, weyl_dimension, CharPoly, MPoly};
pub use sweep::{in_pool, with_threads, Tally};

use crate::error::{Error, Result};
use crate::gf;
use crate::zeta_bounds::{self, WeilData};
use families::Family;

/// One Weil polynomial with its accumulated groupoid weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnsembleEntry {
    /// `a_1..a_g` of `P(t) = 1 + a_1 t + ... + q^g t^{2g}`.
    pub coeffs: Vec<i64>,
    pub weight: BigRational,
    /// Evaluate characters as the average over `α` and `-α`.
    pub twisted: bool,
}

impl EnsembleEntry {
    /// Elementary symmetric functions `e_i = (-1)^i a_i` of the eigenvalues.
    pub fn elementary(&self) -> Vec<i64> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &a)| if i % 2 == 0 { -a } else { a })
            .collect()
    }
}

/// A parametrizing family and its group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyInfo {
    pub label: String,
    pub group_order: BigInt,
    pub equations: u64,
}

/// Weighted Weil polynomials of all classes of a moduli problem over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassEnsemble {
    pub genus: usize,
    pub q: u64,
    pub entries: Vec<EnsembleEntry>,
    pub families: Vec<FamilyInfo>,
}

impl ClassEnsemble {
    fn from_families(
        genus: usize,
        q: u64,
        fams: Vec<Family>,
        twisted: bool,
    ) -> Result<ClassEnsemble> {
        let mut acc: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
        let mut infos = Vec::new();
        for fam in fams {
            let w = BigRational::new(BigInt::one(), BigInt::from(fam.group_order));
            for (counts, n) in &fam.tally {
                let coeffs = coeffs_from_counts(q, genus, counts)?;
                *acc.entry(coeffs).or_insert_with(BigRational::zero) += &w * BigInt::from(*n);
            }
            infos.push(FamilyInfo {
                label: fam.label.to_string(),
                group_order: BigInt::from(fam.group_order),
                equations: fam.tally.values().sum(),
            });
        }
        let entries = acc
            .into_iter()
            .map(|(coeffs, weight)| EnsembleEntry {
                coeffs,
                weight,
                twisted,
            })
            .collect();
        let e = ClassEnsemble {
            genus,
            q,
            entries,
            families: infos,
        };
        e.validate()?;
        Ok(e)
    }

    fn merged(mut self, other: ClassEnsemble) -> ClassEnsemble {
        self.entries.extend(other.entries);
        self.families.extend(other.families);
        self
    }

    /// Total groupoid count.
    pub fn mass(&self) -> BigRational {
        self.entries.iter().map(|e| e.weight.clone()).sum()
    }

    /// `Σ weight · χ_λ(Frobenius)`.
    pub fn trace(&self, lambda: &[u32]) -> Result<BigRational> {
        FrobMeasure::from_ensemble(self).trace(lambda)
    }

    /// Functional equation and the Riemann hypothesis for every entry.
    pub fn validate(&self) -> Result<()> {
        let bound = 2.0 * self.genus as f64 * (self.q as f64).sqrt() + 1e-9;
        for e in &self.entries {
            if e.coeffs.len() != self.genus {
                return Err(Error::Internal(format!(
                    "entry {:?} has the wrong length",
                    e.coeffs
                )));
            }
            if (e.coeffs[0] as f64).abs() > bound {
                return Err(Error::Internal(format!(
                    "entry {:?} violates the Hasse window",
                    e.coeffs
                )));
            }
            let full = weil_poly(self.q, &e.coeffs);
            let w = WeilData::from_poly(self.q, full.iter().map(|&c| BigInt::from(c)).collect())?;
            if !w.roots_on_circle()? {
                return Err(Error::Internal(format!(
                    "entry {:?} has roots off the circle",
                    e.coeffs
                )));
            }
        }
        Ok(())
    }
}

fn coeffs_from_counts(q: u64, g: usize, counts: &[i64]) -> Result<Vec<i64>> {
    let c: Vec<BigInt> = counts.iter().map(|&x| BigInt::from(x)).collect();
    let w = zeta_bounds::weil_from_counts(q, g, &c)?;
    w.poly()?[1..=g]
        .iter()
        .map(|a| {
            a.to_i64()
                .ok_or_else(|| Error::Internal("Weil coefficient overflow".into()))
        })
        .collect()
}

/// The full `P(t)`, `a_0..a_{2g}`, from `a_1..a_g`.
pub fn weil_poly(q: u64, coeffs: &[i64]) -> Vec<i64> {
    let g = coeffs.len();
    let mut a = Vec::with_capacity(2 * g + 1);
    a.push(1);
    a.extend_from_slice(coeffs);
    for i in (0..g).rev() {
        a.push((q as i64).pow((g - i) as u32) * a[i]);
    }
    a
}

// ---------------------------------------------------------------------------
// Measures on Weil polynomials.

/// Rational weights on full Weil polynomials of a fixed degree over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobMeasure {
    pub q: u64,
    pub degree: usize,
    pub mass: BTreeMap<Vec<i64>, BigRational>,
}

impl FrobMeasure {
    pub fn empty(q: u64, degree: usize) -> FrobMeasure {
        FrobMeasure {
            q,
            degree,
            mass: BTreeMap::new(),
        }
    }

    fn insert(&mut self, key: Vec<i64>, w: BigRational) {
        let v = self
            .mass
            .entry(key.clone())
            .or_insert_with(BigRational::zero);
        *v += w;
        if v.is_zero() {
            self.mass.remove(&key);
        }
    }

    pub fn from_ensemble(e: &ClassEnsemble) -> FrobMeasure {
        let mut m = FrobMeasure::empty(e.q, 2 * e.genus);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        for entry in &e.entries {
            let p = weil_poly(e.q, &entry.coeffs);
            if entry.twisted {
                m.insert(twist_poly(&p), &entry.weight * &half);
                m.insert(p, &entry.weight * &half);
            } else {
                m.insert(p, entry.weight.clone());
            }
        }
        m
    }

    pub fn total(&self) -> BigRational {
        self.mass.values().cloned().sum()
    }

    /// Products: eigenvalue multisets unioned, weights multiplied.
    pub fn convolve(&self, o: &FrobMeasure) -> FrobMeasure {
        assert_eq!(self.q, o.q);
        let mut m = FrobMeasure::empty(self.q, self.degree + o.degree);
        for (a, wa) in &self.mass {
            for (b, wb) in &o.mass {
                let mut c = vec![0i64; a.len() + b.len() - 1];
                for (i, x) in a.iter().enumerate() {
                    for (j, y) in b.iter().enumerate() {
                        c[i + j] += x * y;
                    }
                }
                m.insert(c, wa * wb);
            }
        }
        m
    }

    /// Restriction of scalars from `F_{q^d}` to `F_q`: `P(t) ↦ P(t^d)`.
    pub fn induce(&self, d: u32) -> Result<FrobMeasure> {
        let q0 = integer_root(self.q, d)
            .ok_or_else(|| Error::InvalidInput(format!("{} is not a {d}-th power", self.q)))?;
        let d = d as usize;
        let mut m = FrobMeasure::empty(q0, self.degree * d);
        for (a, w) in &self.mass {
            let mut c = vec![0i64; (a.len() - 1) * d + 1];
            for (i, x) in a.iter().enumerate() {
                c[i * d] = *x;
            }
            m.insert(c, w.clone());
        }
        Ok(m)
    }

    /// Quadratic twist: `P(t) ↦ P(-t)`.
    pub fn twist(&self) -> FrobMeasure {
        let mut m = FrobMeasure::empty(self.q, self.degree);
        for (a, w) in &self.mass {
            m.insert(twist_poly(a), w.clone());
        }
        m
    }

    pub fn scale(&self, r: &BigRational) -> FrobMeasure {
        let mut m = FrobMeasure::empty(self.q, self.degree);
        for (a, w) in &self.mass {
            m.insert(a.clone(), w * r);
        }
        m
    }

    pub fn add(&self, o: &FrobMeasure) -> FrobMeasure {
        assert_eq!((self.q, self.degree), (o.q, o.degree));
        let mut m = self.clone();
        for (a, w) in &o.mass {
            m.insert(a.clone(), w.clone());
        }
        m
    }

    /// `Σ weight · χ_λ`, with `λ` of length `degree/2`.
    pub fn trace(&self, lambda: &[u32]) -> Result<BigRational> {
        character::check_weight(self.degree / 2, lambda)?;
        let top = lambda[0] as usize + lambda.len();
        let mut acc = BigRational::zero();
        for (a, w) in &self.mass {
            let h = character::complete_homogeneous(a, top);
            acc += w * character::sp_character_from_h(self.q, lambda, &h);
        }
        Ok(acc)
    }
}

fn twist_poly(a: &[i64]) -> Vec<i64> {
    a.iter()
        .enumerate()
        .map(|(i, &c)| if i % 2 == 1 { -c } else { c })
        .collect()
}

fn integer_root(n: u64, d: u32) -> Option<u64> {
    let r = (n as f64).powf(1.0 / d as f64).round() as u64;
    (r.saturating_sub(1)..=r + 1).find(|x| x.checked_pow(d) == Some(n))
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn to_integer(r: BigRational, what: &str) -> Result<BigInt> {
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(Error::NonIntegral(format!("{what} = {r}")))
    }
}

// ---------------------------------------------------------------------------
// Ensembles.

/// Largest `q` of the elliptic ensemble.
pub const ELLIPTIC_MAX_Q: u64 = 1 << 10;

fn field(q: u64) -> Result<Arc<gf::FieldDesc>> {
    gf::field_of_size(q)
}

/// Elliptic curves over `F_q` from the long Weierstrass equations, `q <= 16`.
pub fn elliptic_ensemble_full(q: u64) -> Result<ClassEnsemble> {
    if q > 16 {
        return Err(Error::Unsupported(format!(
            "the long Weierstrass sweep is capped at q = 16, got {q}"
        )));
    }
    let fd = field(q)?;
    ClassEnsemble::from_families(1, q, families::elliptic_full(&fd), false)
}

/// Elliptic curves over `F_q` from reduced Weierstrass families, `q <= 2^10`.
pub fn elliptic_ensemble(q: u64) -> Result<ClassEnsemble> {
    if q > ELLIPTIC_MAX_Q {
        return Err(Error::Unsupported(format!(
            "elliptic ensembles are capped at q = {ELLIPTIC_MAX_Q}, got {q}"
        )));
    }
    let fd = field(q)?;
    ClassEnsemble::from_families(1, q, families::elliptic_reduced(&fd), false)
}

/// Supported `q` of the genus-2 ensemble.
pub const GENUS2_Q: [u64; 7] = [2, 3, 4, 5, 7, 9, 11];

/// Hyperelliptic curves of genus `g` (2 or 3).
pub fn hyperelliptic_ensemble(q: u64, g: usize) -> Result<ClassEnsemble> {
    let fd = field(q)?;
    let fams = if fd.characteristic() == 2 {
        if q.pow(3 * g as u32 + 5) > 1 << 26 {
            return Err(Error::Unsupported(format!(
                "genus-{g} characteristic-2 sweep at q = {q}"
            )));
        }
        families::hyperelliptic_char2(&fd, g)?
    } else {
        if q.pow(2 * g as u32 + 3) > 1 << 25 {
            return Err(Error::Unsupported(format!(
                "genus-{g} hyperelliptic sweep at q = {q}"
            )));
        }
        families::hyperelliptic_odd(&fd, g)?
    };
    ClassEnsemble::from_families(g, q, fams, false)
}

/// All genus-2 curves over `F_q`.
pub fn genus2_ensemble(q: u64) -> Result<ClassEnsemble> {
    if !GENUS2_Q.contains(&q) {
        return Err(Error::Unsupported(format!(
            "genus-2 ensembles exist for q in {GENUS2_Q:?}, got {q}"
        )));
    }
    hyperelliptic_ensemble(q, 2)
}

/// Smooth plane quartics over `F_q`, `q ∈ {2, 3}`, flagged as twisted.
pub fn quartic_ensemble(q: u64) -> Result<ClassEnsemble> {
    let fd = field(q)?;
    ClassEnsemble::from_families(3, q, families::quartics(&fd)?, true)
}

/// All genus-3 curves over `F_q`, `q ∈ {2, 3}`.
pub fn genus3_ensemble(q: u64) -> Result<ClassEnsemble> {
    if !(2..=3).contains(&q) {
        return Err(Error::Unsupported(format!(
            "genus-3 ensembles exist for q in [2, 3], got {q}"
        )));
    }
    Ok(hyperelliptic_ensemble(q, 3)?.merged(quartic_ensemble(q)?))
}

// ---------------------------------------------------------------------------
// Traces.

/// `σ_a(q) = -Σ_E h_a(α_E, ᾱ_E)/#Aut(E)`.
pub fn sigma_moment(q: u64, a: u32) -> Result<BigInt> {
    sigma_moment_in(EnsembleStore::shared(), q, a)
}

pub fn sigma_moment_in(store: &EnsembleStore, q: u64, a: u32) -> Result<BigInt> {
    let e = store.get(1, q)?;
    to_integer(-e.trace(&[a])?, &format!("σ_{a}({q})"))
}

/// Groupoid count of `M_{1,n}(F_q)`: ordered `(n-1)`-tuples of distinct
/// nonzero rational points, weighted by `1/#Aut(E)`.
pub fn m1n_point_count(q: u64, n: u32) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::InvalidInput("M_{1,n} needs n >= 1".into()));
    }
    let e = EnsembleStore::shared().get(1, q)?;
    Ok(e.entries
        .iter()
        .map(|entry| {
            let big_n = q as i64 + 1 + entry.coeffs[0];
            let tuples: BigInt = (1..n as i64)
                .map(|i| BigInt::from((big_n - i).max(0)))
                .product();
            &entry.weight * tuples
        })
        .sum())
}

/// Cycle-index assembly of `Sym^n` from `T_d`, the ensembles over `F_{q^d}`.
pub fn sym_power_measure(n: usize, data: &[ClassEnsemble]) -> Result<FrobMeasure> {
    if data.len() < n || !(2..=3).contains(&n) {
        return Err(Error::InvalidInput(format!(
            "Sym^{n} needs ensembles over F_q..F_q^{n}"
        )));
    }
    let t: Vec<FrobMeasure> = data.iter().map(FrobMeasure::from_ensemble).collect();
    let ind = |d: usize| t[d - 1].induce(d as u32);
    match n {
        2 => {
            let pairs = t[0].convolve(&t[0]);
            Ok(pairs.add(&ind(2)?).scale(&rational(1, 2)))
        }
        _ => {
            let triples = t[0].convolve(&t[0]).convolve(&t[0]);
            let mixed = t[0].convolve(&ind(2)?).scale(&rational(3, 1));
            let cyc = ind(3)?.scale(&rational(2, 1));
            Ok(triples.add(&mixed).add(&cyc).scale(&rational(1, 6)))
        }
    }
}

pub fn sym_power_trace(n: usize, data: &[ClassEnsemble], lambda: &[u32]) -> Result<BigRational> {
    sym_power_measure(n, data)?.trace(lambda)
}

type MeasureCache = Mutex<HashMap<(usize, u64, Option<std::path::PathBuf>), Arc<FrobMeasure>>>;

fn measure_cache() -> &'static MeasureCache {
    static C: OnceLock<MeasureCache> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// The measure on `A_g(F_q)`, `g ∈ {2, 3}`, assembled from strata.
pub fn abelian_measure(store: &EnsembleStore, g: usize, q: u64) -> Result<Arc<FrobMeasure>> {
    let key = (g, q, store.dir().map(|d| d.to_path_buf()));
    if let Some(m) = measure_cache().lock().unwrap().get(&key) {
        return Ok(m.clone());
    }
    let ell = |d: u32| store.get(1, q.pow(d));
    let m = match g {
        2 => {
            let jac = FrobMeasure::from_ensemble(&*store.get(2, q)?);
            let sym2 = sym_power_measure(2, &[(*ell(1)?).clone(), (*ell(2)?).clone()])?;
            jac.add(&sym2)
        }
        3 => {
            let jac = FrobMeasure::from_ensemble(&*store.get(3, q)?);
            let e = FrobMeasure::from_ensemble(&*ell(1)?);
            let prod = e.convolve(&FrobMeasure::from_ensemble(&*store.get(2, q)?));
            let sym3 = sym_power_measure(
                3,
                &[(*ell(1)?).clone(), (*ell(2)?).clone(), (*ell(3)?).clone()],
            )?;
            jac.add(&prod).add(&sym3)
        }
        _ => return Err(Error::Unsupported(format!("A_{g} strata"))),
    };
    let m = Arc::new(m);
    Ok(measure_cache()
        .lock()
        .unwrap()
        .entry(key)
        .or_insert(m)
        .clone())
}

/// `Tr(F_q, e_c(A_2, V_{a,b}))`; zero when `a + b` is odd.
pub fn a2_trace(q: u64, lambda: [u32; 2]) -> Result<BigInt> {
    a2_trace_in(EnsembleStore::shared(), q, lambda)
}

pub fn a2_trace_in(store: &EnsembleStore, q: u64, lambda: [u32; 2]) -> Result<BigInt> {
    character::check_weight(2, &lambda)?;
    if (lambda[0] + lambda[1]) % 2 == 1 {
        return Ok(BigInt::zero());
    }
    let m = abelian_measure(store, 2, q)?;
    to_integer(
        m.trace(&lambda)?,
        &format!("Tr e_c(A_2, V{lambda:?}) at q = {q}"),
    )
}

/// `Tr(F_q, e_c(A_3, V_{a,b,c}))`; zero when `a + b + c` is odd.
pub fn a3_trace(q: u64, lambda: [u32; 3]) -> Result<BigInt> {
    a3_trace_in(EnsembleStore::shared(), q, lambda)
}

pub fn a3_trace_in(store: &EnsembleStore, q: u64, lambda: [u32; 3]) -> Result<BigInt> {
    character::check_weight(3, &lambda)?;
    if lambda.iter().sum::<u32>() % 2 == 1 {
        return Ok(BigInt::zero());
    }
    let m = abelian_measure(store, 3, q)?;
    to_integer(
        m.trace(&lambda)?,
        &format!("Tr e_c(A_3, V{lambda:?}) at q = {q}"),
    )
}

/// Largest absolute trace coefficient, for the Hasse-window property.
pub fn max_abs_trace(e: &ClassEnsemble) -> i64 {
    e.entries
        .iter()
        .map(|x| x.coeffs[0].abs())
        .max()
        .unwrap_or(0)
}

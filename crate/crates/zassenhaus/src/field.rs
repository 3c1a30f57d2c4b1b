//! Exact arithmetic in F_p and F_{p^m}.
//!
//! Elements are polynomials over F_p modulo a canonical irreducible modulus,
//! so the same (p, m) always names the same field and serialized data is
//! reproducible. Every identity checked elsewhere in the crate has structure
//! constants over F_p, so validity over these concrete fields implies
//! validity over any extension.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

pub const MAX_PRIME: u64 = 13;
/// Guard for element enumeration and embedding towers.
pub const MAX_FIELD_SIZE: u64 = 1_000_000;

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Description of F_{p^m} as F_p[x]/(modulus).
///
/// The modulus is the lexicographically smallest monic irreducible of degree
/// m, the coefficient sequence read from the constant term up.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub m: usize,
    /// Coefficients c_0..c_m of the modulus, c_m = 1.
    pub modulus: Vec<u64>,
}

pub type FieldRef = Arc<FieldSpec>;

fn registry() -> &'static Mutex<HashMap<(u64, usize), FieldRef>> {
    static REG: OnceLock<Mutex<HashMap<(u64, usize), FieldRef>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

impl FieldSpec {
    /// The canonical field with p^m elements.
    pub fn new(p: u64, m: usize) -> Result<FieldRef> {
        if !PRIMES.contains(&p) {
            return Err(Error::BadPrime { p });
        }
        if m == 0 {
            return Err(Error::Config("extension degree must be >= 1".into()));
        }
        if pow_checked(p, m).is_none() {
            return Err(Error::SizeGuard {
                what: "p^m",
                value: u64::MAX,
                limit: MAX_FIELD_SIZE,
            });
        }
        if let Some(spec) = registry().lock().unwrap().get(&(p, m)) {
            return Ok(spec.clone());
        }
        let modulus = canonical_modulus(p, m)
            .ok_or_else(|| Error::Internal(format!("no irreducible of degree {m} over F_{p}")))?;
        let spec = Arc::new(FieldSpec { p, m, modulus });
        registry()
            .lock()
            .unwrap()
            .insert((p, m), spec.clone());
        Ok(spec)
    }

    /// Parse q = p^m and return the canonical field with q elements.
    pub fn from_order(p: u64, q: u64) -> Result<FieldRef> {
        let mut m = 0usize;
        let mut t = q;
        while t > 1 && t % p == 0 {
            t /= p;
            m += 1;
        }
        if t != 1 || m == 0 {
            return Err(Error::Config(format!("{q} is not a positive power of {p}")));
        }
        FieldSpec::new(p, m)
    }

    pub fn order(&self) -> u64 {
        pow_checked(self.p, self.m).expect("order within guard")
    }

    pub fn name(&self) -> String {
        format!("{}^{}", self.p, self.m)
    }
}

fn pow_checked(p: u64, m: usize) -> Option<u64> {
    let mut v: u64 = 1;
    for _ in 0..m {
        v = v.checked_mul(p)?;
        if v > MAX_FIELD_SIZE {
            return None;
        }
    }
    Some(v)
}

// ---- dense polynomials over the prime field, used for modulus search ----

fn pp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn pp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    pp_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = (r[dr] * lead_inv) % p;
        for i in 0..=db {
            let idx = dr - db + i;
            r[idx] = (r[idx] + p - c * b[i] % p) % p;
        }
        pp_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn pp_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    pp_rem(&prod, f, p)
}

fn pp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    pp_trim(&mut a);
    pp_trim(&mut b);
    while !b.is_empty() {
        let r = pp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // p is tiny; Fermat is fine.
    mod_pow(a % p, p - 2, p)
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Irreducibility over F_p: f of degree m has no factor of degree <= m/2
/// iff gcd(f, x^{p^d} - x) = 1 for every d <= m/2.
fn pp_is_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    if m == 1 {
        return true;
    }
    // x^{p^d} mod f, iterated d = 1..m/2
    let mut xp = vec![0u64, 1]; // x
    for _ in 0..m / 2 {
        // raise to p-th power: repeated squaring in F_p[x]/(f)
        let mut acc = vec![1u64];
        let mut base = xp.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = pp_mulmod(&acc, &base, f, p);
            }
            base = pp_mulmod(&base, &base, f, p);
            e >>= 1;
        }
        xp = acc;
        // gcd(f, x^{p^d} - x)
        let mut diff = xp.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        pp_trim(&mut diff);
        let g = pp_gcd(f, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree m (constant term
/// first in the comparison order).
fn canonical_modulus(p: u64, m: usize) -> Option<Vec<u64>> {
    let mut coeffs = vec![0u64; m]; // c_0..c_{m-1}
    loop {
        let mut f = coeffs.clone();
        f.push(1);
        if pp_is_irreducible(&f, p) {
            return Some(f);
        }
        // odometer with c_0 most significant in the search order
        let mut i = m;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
        }
    }
}

// ---- field elements ----

/// Element of F_{p^m}, in the polynomial representation over F_p.
#[derive(Debug, Clone)]
pub struct Fq {
    spec: FieldRef,
    /// m residues mod p, constant term first.
    coeffs: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrobDir {
    Fwd,
    Inv,
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other) && self.coeffs == other.coeffs
    }
}
impl Eq for Fq {}

impl std::hash::Hash for Fq {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.spec.p.hash(state);
        self.spec.m.hash(state);
        self.coeffs.hash(state);
    }
}

impl PartialOrd for Fq {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fq {
    /// Enumeration order: the base-p index with the constant term as the
    /// lowest digit, so the prime-subfield constants 0, 1, .., p-1 come
    /// first. Elements of distinct fields compare by (p, m) first.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.spec.p, self.spec.m)
            .cmp(&(other.spec.p, other.spec.m))
            .then_with(|| self.index().cmp(&other.index()))
    }
}

impl Fq {
    pub fn zero(spec: &FieldRef) -> Fq {
        Fq {
            spec: spec.clone(),
            coeffs: vec![0; spec.m],
        }
    }

    pub fn one(spec: &FieldRef) -> Fq {
        Fq::from_int(spec, 1)
    }

    /// The residue of n in the prime subfield.
    pub fn from_int(spec: &FieldRef, n: i64) -> Fq {
        let p = spec.p as i64;
        let mut c = vec![0u64; spec.m];
        c[0] = n.rem_euclid(p) as u64;
        Fq {
            spec: spec.clone(),
            coeffs: c,
        }
    }

    pub fn from_coeffs(spec: &FieldRef, coeffs: Vec<u64>) -> Result<Fq> {
        if coeffs.len() != spec.m || coeffs.iter().any(|&c| c >= spec.p) {
            return Err(Error::Config(format!(
                "bad coefficient vector for F_{}",
                spec.name()
            )));
        }
        Ok(Fq {
            spec: spec.clone(),
            coeffs,
        })
    }

    /// Element with enumeration index k (base-p digits, constant term lowest).
    pub fn from_index(spec: &FieldRef, mut k: u64) -> Fq {
        let mut c = vec![0u64; spec.m];
        for ci in c.iter_mut() {
            *ci = k % spec.p;
            k /= spec.p;
        }
        Fq {
            spec: spec.clone(),
            coeffs: c,
        }
    }

    pub fn index(&self) -> u64 {
        let mut k = 0u64;
        for &c in self.coeffs.iter().rev() {
            k = k * self.spec.p + c;
        }
        k
    }

    pub fn spec(&self) -> &FieldRef {
        &self.spec
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn same_field(&self, other: &Fq) -> bool {
        Arc::ptr_eq(&self.spec, &other.spec) || *self.spec == *other.spec
    }

    fn check_field(&self, other: &Fq) -> Result<()> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.spec.name(),
                right: other.spec.name(),
            })
        }
    }

    pub fn add(&self, rhs: &Fq) -> Fq {
        debug_assert!(self.same_field(rhs));
        let p = self.spec.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| (a + b) % p)
            .collect();
        Fq {
            spec: self.spec.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, rhs: &Fq) -> Fq {
        debug_assert!(self.same_field(rhs));
        let p = self.spec.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| (a + p - b) % p)
            .collect();
        Fq {
            spec: self.spec.clone(),
            coeffs,
        }
    }

    pub fn neg(&self) -> Fq {
        let p = self.spec.p;
        let coeffs = self.coeffs.iter().map(|a| (p - a) % p).collect();
        Fq {
            spec: self.spec.clone(),
            coeffs,
        }
    }

    pub fn mul(&self, rhs: &Fq) -> Fq {
        debug_assert!(self.same_field(rhs));
        let p = self.spec.p;
        if self.spec.m == 1 {
            return Fq {
                spec: self.spec.clone(),
                coeffs: vec![self.coeffs[0] * rhs.coeffs[0] % p],
            };
        }
        let prod_len = 2 * self.spec.m - 1;
        let mut prod = vec![0u64; prod_len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % p;
            }
        }
        // reduce by the modulus: x^m = -(c_0 + .. + c_{m-1} x^{m-1})
        let m = self.spec.m;
        for d in (m..prod_len).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..m {
                let sub = c * self.spec.modulus[i] % p;
                prod[d - m + i] = (prod[d - m + i] + p - sub) % p;
            }
        }
        prod.truncate(m);
        Fq {
            spec: self.spec.clone(),
            coeffs: prod,
        }
    }

    pub fn mul_int(&self, n: i64) -> Fq {
        let p = self.spec.p as i64;
        let c = n.rem_euclid(p) as u64;
        let coeffs = self.coeffs.iter().map(|a| a * c % self.spec.p).collect();
        Fq {
            spec: self.spec.clone(),
            coeffs,
        }
    }

    pub fn inv(&self) -> Result<Fq> {
        if self.is_zero() {
            return Err(Error::DivisionByZero {
                p: self.spec.p,
                m: self.spec.m,
            });
        }
        // a^(q-2); q <= 10^6 so the exponentiation is cheap
        Ok(self.pow(self.spec.order() - 2))
    }

    pub fn div(&self, rhs: &Fq) -> Result<Fq> {
        self.check_field(rhs)?;
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Fq {
        let mut acc = Fq::one(&self.spec);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// a^p (fwd) or the unique p-th root a^{p^{m-1}} (inv).
    pub fn frobenius(&self, dir: FrobDir) -> Fq {
        match dir {
            FrobDir::Fwd => self.pow(self.spec.p),
            FrobDir::Inv => {
                let mut v = self.clone();
                for _ in 0..self.spec.m - 1 {
                    v = v.pow(self.spec.p);
                }
                v
            }
        }
    }

    /// True iff the element lies in the subfield copy of F_{p^d}.
    pub fn in_subfield(&self, d: usize) -> bool {
        if self.spec.m % d != 0 {
            return false;
        }
        let mut v = self.clone();
        for _ in 0..d {
            v = v.pow(self.spec.p);
        }
        v == *self
    }

    pub fn serialize_str(&self) -> String {
        let cs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("{}^{}:[{}]", self.spec.p, self.spec.m, cs.join(","))
    }

    pub fn parse(s: &str) -> Result<Fq> {
        let bad = || Error::Config(format!("bad field element literal: {s}"));
        let (head, tail) = s.split_once(':').ok_or_else(bad)?;
        let (ps, ms) = head.split_once('^').ok_or_else(bad)?;
        let p: u64 = ps.trim().parse().map_err(|_| bad())?;
        let m: usize = ms.trim().parse().map_err(|_| bad())?;
        let inner = tail
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(bad)?;
        let coeffs: Vec<u64> = if inner.trim().is_empty() {
            vec![]
        } else {
            inner
                .split(',')
                .map(|c| c.trim().parse().map_err(|_| bad()))
                .collect::<Result<_>>()?
        };
        let spec = FieldSpec::new(p, m)?;
        Fq::from_coeffs(&spec, coeffs)
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize_str())
    }
}

impl Serialize for Fq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.serialize_str())
    }
}

/// Contract surface for binary field arithmetic with checked errors.
pub fn field_arith(a: &Fq, b: &Fq, op: ArithOp) -> Result<Fq> {
    a.check_field(b)?;
    match op {
        ArithOp::Add => Ok(a.add(b)),
        ArithOp::Sub => Ok(a.sub(b)),
        ArithOp::Mul => Ok(a.mul(b)),
        ArithOp::Div => a.div(b),
    }
}

/// All p^m elements in the deterministic enumeration order (constants first).
pub fn enumerate_field(spec: &FieldRef) -> Result<Vec<Fq>> {
    let q = spec.order();
    if q > MAX_FIELD_SIZE {
        return Err(Error::SizeGuard {
            what: "field enumeration",
            value: q,
            limit: MAX_FIELD_SIZE,
        });
    }
    Ok((0..q).map(|k| Fq::from_index(spec, k)).collect())
}

// ---- canonical embeddings between extensions ----

struct Embedding {
    /// Images in the target field of the source power basis 1, x, .., x^{m-1}.
    basis_images: Vec<Fq>,
}

fn embedding_cache() -> &'static Mutex<HashMap<((u64, usize), (u64, usize)), Arc<Embedding>>> {
    static CACHE: OnceLock<Mutex<HashMap<((u64, usize), (u64, usize)), Arc<Embedding>>>> =
        OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Order of the multiplicative group factored by trial division.
fn factorize(mut n: u64) -> Vec<u64> {
    let mut fs = vec![];
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            fs.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        fs.push(n);
    }
    fs
}

/// Smallest multiplicative generator in the enumeration order.
pub fn multiplicative_generator(spec: &FieldRef) -> Result<Fq> {
    let q = spec.order();
    let n = q - 1;
    let primes = factorize(n);
    'outer: for k in 1..q {
        let g = Fq::from_index(spec, k);
        if g.is_zero() {
            continue;
        }
        for &r in &primes {
            if g.pow(n / r).is_one() {
                continue 'outer;
            }
        }
        return Ok(g);
    }
    Err(Error::Internal(format!(
        "no multiplicative generator found in F_{}",
        spec.name()
    )))
}

fn build_embedding(src: &FieldRef, dst: &FieldRef) -> Result<Arc<Embedding>> {
    if src.p != dst.p || dst.m % src.m != 0 {
        return Err(Error::NoEmbedding {
            p: src.p,
            src: src.m,
            dst: dst.m,
        });
    }
    // Find one root of the source modulus inside the subfield of order p^src.m,
    // realized as the powers of gen^((Q-1)/(q-1)).
    let root = if src.m == 1 {
        Fq::zero(dst) // unused: prime field embeds coefficient-wise
    } else {
        let q = src.order();
        let qq = dst.order();
        let gen = multiplicative_generator(dst)?;
        let delta = gen.pow((qq - 1) / (q - 1));
        let eval = |y: &Fq| -> Fq {
            let mut acc = Fq::zero(dst);
            for &c in src.modulus.iter().rev() {
                acc = acc.mul(y);
                if c != 0 {
                    acc = acc.add(&Fq::from_int(dst, c as i64));
                }
            }
            acc
        };
        let mut found: Option<Fq> = None;
        let mut cand = Fq::one(dst);
        for _ in 0..q - 1 {
            if eval(&cand).is_zero() {
                found = Some(cand.clone());
                break;
            }
            cand = cand.mul(&delta);
        }
        let mut r = found.ok_or_else(|| {
            Error::Internal(format!(
                "modulus of F_{} has no root in F_{}",
                src.name(),
                dst.name()
            ))
        })?;
        // canonical choice: the smallest conjugate in the enumeration order
        let mut best = r.clone();
        for _ in 1..src.m {
            r = r.pow(src.p);
            if r < best {
                best = r.clone();
            }
        }
        best
    };
    let mut basis_images = Vec::with_capacity(src.m);
    let mut acc = Fq::one(dst);
    for _ in 0..src.m {
        basis_images.push(acc.clone());
        acc = acc.mul(&root);
    }
    Ok(Arc::new(Embedding { basis_images }))
}

/// Canonical embedding of a into the target field (source degree must divide
/// the target degree). The generator goes to the smallest root of the source
/// modulus in the enumeration order.
pub fn embed(a: &Fq, dst: &FieldRef) -> Result<Fq> {
    let src = a.spec();
    if Arc::ptr_eq(src, dst) || **src == **dst {
        return Ok(a.clone());
    }
    let key = ((src.p, src.m), (dst.p, dst.m));
    let emb = {
        let cached = embedding_cache().lock().unwrap().get(&key).cloned();
        match cached {
            Some(e) => e,
            None => {
                let e = build_embedding(src, dst)?;
                embedding_cache().lock().unwrap().insert(key, e.clone());
                e
            }
        }
    };
    let mut acc = Fq::zero(dst);
    for (i, &c) in a.coeffs().iter().enumerate() {
        if c != 0 {
            acc = acc.add(&emb.basis_images[i].mul_int(c as i64));
        }
    }
    Ok(acc)
}

/// Express an element known to lie in the embedded copy of dst back in dst
/// coordinates. Fails if it does not lie in that copy.
pub fn project_to_subfield(a: &Fq, dst: &FieldRef) -> Result<Fq> {
    if **a.spec() == **dst {
        return Ok(a.clone());
    }
    for k in 0..dst.order() {
        let cand = Fq::from_index(dst, k);
        if embed(&cand, a.spec())? == *a {
            return Ok(cand);
        }
    }
    Err(Error::Internal(format!(
        "element {} not in the canonical copy of F_{}",
        a,
        dst.name()
    )))
}

/// The smallest common field F_{p^lcm(m1,m2)} for two specs over the same p.
pub fn common_field(a: &FieldRef, b: &FieldRef) -> Result<FieldRef> {
    if a.p != b.p {
        return Err(Error::FieldMismatch {
            left: a.name(),
            right: b.name(),
        });
    }
    if a.m == b.m {
        return Ok(a.clone());
    }
    let g = gcd(a.m as u64, b.m as u64) as usize;
    let l = a.m / g * b.m;
    FieldSpec::new(a.p, l)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Solutions of z^p - z = c over the field of c, or over its degree-p
/// extension when there is none (always solvable there). Returns the full
/// solution set, sorted in enumeration order.
pub fn solve_artin_schreier(c: &Fq) -> Result<Vec<Fq>> {
    if let Some(sols) = artin_schreier_in_field(c)? {
        return Ok(sols);
    }
    let spec = c.spec();
    let big = FieldSpec::new(spec.p, spec.m * spec.p as usize)?;
    let cc = embed(c, &big)?;
    artin_schreier_in_field(&cc)?.ok_or_else(|| {
        Error::Internal("Artin-Schreier equation unsolvable in the degree-p extension".into())
    })
}

fn artin_schreier_in_field(c: &Fq) -> Result<Option<Vec<Fq>>> {
    // z -> z^p - z is F_p-linear; solve the m x m system over F_p.
    let spec = c.spec().clone();
    let p = spec.p;
    let m = spec.m;
    let mut cols: Vec<Vec<u64>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut basis = vec![0u64; m];
        basis[i] = 1;
        let e = Fq::from_coeffs(&spec, basis)?;
        let img = e.pow(p).sub(&e);
        cols.push(img.coeffs().to_vec());
    }
    // augmented system over F_p
    let mut aug: Vec<Vec<u64>> = (0..m)
        .map(|r| {
            let mut row: Vec<u64> = (0..m).map(|cidx| cols[cidx][r]).collect();
            row.push(c.coeffs()[r]);
            row
        })
        .collect();
    let mut pivots = vec![];
    let mut rank_row = 0;
    for col in 0..m {
        let Some(pr) = (rank_row..m).find(|&r| aug[r][col] != 0) else {
            continue;
        };
        aug.swap(rank_row, pr);
        let inv = mod_inv(aug[rank_row][col], p);
        for x in aug[rank_row].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m {
            if r != rank_row && aug[r][col] != 0 {
                let f = aug[r][col];
                for cidx in 0..=m {
                    aug[r][cidx] = (aug[r][cidx] + p - f * aug[rank_row][cidx] % p) % p;
                }
            }
        }
        pivots.push(col);
        rank_row += 1;
    }
    for r in rank_row..m {
        if aug[r][m] != 0 {
            return Ok(None); // inconsistent: no solution in this field
        }
    }
    let mut part = vec![0u64; m];
    for (pi, &col) in pivots.iter().enumerate() {
        part[col] = aug[pi][m];
    }
    let z0 = Fq::from_coeffs(&spec, part)?;
    let mut sols: Vec<Fq> = (0..p)
        .map(|a| z0.add(&Fq::from_int(&spec, a as i64)))
        .collect();
    sols.sort();
    Ok(Some(sols))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64, m: usize) -> FieldRef {
        FieldSpec::new(p, m).unwrap()
    }

    #[test]
    fn canonical_moduli() {
        assert_eq!(f(3, 2).modulus, vec![1, 0, 1]); // x^2 + 1
        assert_eq!(f(2, 2).modulus, vec![1, 1, 1]); // x^2 + x + 1
        assert_eq!(f(2, 3).modulus, vec![1, 0, 1, 1]); // x^3 + x^2 + 1
        assert_eq!(f(3, 1).modulus, vec![0, 1]); // x
    }

    #[test]
    fn arith_in_f3() {
        let s = f(3, 1);
        let two = Fq::from_int(&s, 2);
        assert!(field_arith(&two, &two, ArithOp::Mul).unwrap().is_one());
    }

    #[test]
    fn arith_in_f9() {
        let s = f(3, 2);
        let x = Fq::from_coeffs(&s, vec![0, 1]).unwrap();
        // x * x = -1 = 2 modulo x^2 + 1
        assert_eq!(x.mul(&x), Fq::from_int(&s, 2));
        let xp1 = Fq::from_coeffs(&s, vec![1, 1]).unwrap();
        assert!(xp1.div(&xp1).unwrap().is_one());
    }

    #[test]
    fn division_by_zero_rejected() {
        let s = f(5, 1);
        let e = field_arith(&Fq::one(&s), &Fq::zero(&s), ArithOp::Div);
        assert!(matches!(e, Err(Error::DivisionByZero { .. })));
    }

    #[test]
    fn mismatched_fields_rejected() {
        let a = Fq::one(&f(3, 1));
        let b = Fq::one(&f(3, 2));
        assert!(matches!(
            field_arith(&a, &b, ArithOp::Add),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn frobenius_on_f9_generator() {
        let s = f(3, 2);
        let x = Fq::from_coeffs(&s, vec![0, 1]).unwrap();
        // oracle: a^p by naive repeated multiplication
        let mut naive = Fq::one(&s);
        for _ in 0..3 {
            naive = naive.mul(&x);
        }
        assert_eq!(x.frobenius(FrobDir::Fwd), naive);
        assert_eq!(naive, Fq::from_coeffs(&s, vec![0, 2]).unwrap()); // 2x
    }

    #[test]
    fn frobenius_bijective_all_of_f9() {
        let s = f(3, 2);
        for a in enumerate_field(&s).unwrap() {
            assert_eq!(a.frobenius(FrobDir::Fwd).frobenius(FrobDir::Inv), a);
            assert_eq!(a.frobenius(FrobDir::Inv).frobenius(FrobDir::Fwd), a);
        }
    }

    #[test]
    fn frobenius_fixed_on_prime_field() {
        let s = f(7, 1);
        for a in enumerate_field(&s).unwrap() {
            assert_eq!(a.frobenius(FrobDir::Fwd), a);
            assert_eq!(a.frobenius(FrobDir::Inv), a);
        }
    }

    #[test]
    fn enumeration_order() {
        let s = f(3, 1);
        let elems = enumerate_field(&s).unwrap();
        let idx: Vec<u64> = elems.iter().map(|e| e.index()).collect();
        assert_eq!(idx, vec![0, 1, 2]);

        let s9 = f(3, 2);
        let elems = enumerate_field(&s9).unwrap();
        assert_eq!(elems.len(), 9);
        // constants first under the stated order
        assert!(elems[0].is_zero());
        assert!(elems[1].is_one());
        assert_eq!(elems[2], Fq::from_int(&s9, 2));

        assert_eq!(enumerate_field(&f(5, 2)).unwrap().len(), 25);
    }

    #[test]
    fn frobenius_additive_small_fields() {
        for (p, m) in [(2, 2), (2, 3), (3, 2), (3, 4), (2, 6)] {
            let s = f(p, m);
            if s.order() > 81 {
                continue;
            }
            let elems = enumerate_field(&s).unwrap();
            for a in &elems {
                for b in &elems {
                    assert_eq!(
                        a.add(b).frobenius(FrobDir::Fwd),
                        a.frobenius(FrobDir::Fwd).add(&b.frobenius(FrobDir::Fwd))
                    );
                }
            }
        }
    }

    #[test]
    fn multiplicative_group_cyclic() {
        for (p, m) in [(3, 2), (2, 3), (5, 2), (7, 1)] {
            let s = f(p, m);
            let g = multiplicative_generator(&s).unwrap();
            let n = s.order() - 1;
            assert!(g.pow(n).is_one());
            for r in factorize(n) {
                assert!(!g.pow(n / r).is_one());
            }
        }
    }

    #[test]
    fn embedding_roundtrip() {
        let small = f(3, 2);
        let big = f(3, 4);
        let elems = enumerate_field(&small).unwrap();
        for a in &elems {
            for b in &elems {
                let ea = embed(a, &big).unwrap();
                let eb = embed(b, &big).unwrap();
                assert_eq!(embed(&a.mul(b), &big).unwrap(), ea.mul(&eb));
                assert_eq!(embed(&a.add(b), &big).unwrap(), ea.add(&eb));
            }
        }
        let x = Fq::from_coeffs(&small, vec![1, 2]).unwrap();
        let back = project_to_subfield(&embed(&x, &big).unwrap(), &small).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn embedding_requires_divisibility() {
        let a = Fq::one(&f(3, 2));
        assert!(embed(&a, &f(3, 3)).is_err());
    }

    #[test]
    fn artin_schreier_solutions() {
        let s9 = f(3, 2);
        // z^3 - z = i is solvable in F_9 (trace of i over F_3 vanishes)
        let i = Fq::from_coeffs(&s9, vec![0, 1]).unwrap();
        let sols = solve_artin_schreier(&i).unwrap();
        assert_eq!(sols.len(), 3);
        for z in &sols {
            assert_eq!(z.pow(3).sub(z), i);
            assert_eq!(z.spec().m, 2);
        }
        // z^3 - z = 1 needs the cubic extension of F_9
        let one = Fq::one(&s9);
        let sols = solve_artin_schreier(&one).unwrap();
        assert_eq!(sols.len(), 3);
        assert_eq!(sols[0].spec().m, 6);
        for z in &sols {
            let rhs = embed(&one, z.spec()).unwrap();
            assert_eq!(z.pow(3).sub(z), rhs);
        }
    }

    #[test]
    fn serialization_roundtrip() {
        let s = f(3, 2);
        let x = Fq::from_coeffs(&s, vec![1, 2]).unwrap();
        assert_eq!(x.serialize_str(), "3^2:[1,2]");
        assert_eq!(Fq::parse("3^2:[1,2]").unwrap(), x);
    }

    #[test]
    fn size_guard() {
        assert!(FieldSpec::new(13, 7).is_err());
    }
}

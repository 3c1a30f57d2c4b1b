//! The universal enveloping algebra: PBW normal forms and multiplication,
//! the canonical filtration, the adjoint action and the divided-power
//! operators that realize root-subgroup conjugation for invariance tests.
//!
//! Monomials are exponent vectors over the ordered basis (negative root
//! vectors, Cartan, positive root vectors), so the Cartan projection of the
//! triangular decomposition is literally a monomial projection.

use crate::error::{Error, Result};
use crate::field::{common_field, embed, FieldRef, Fq};
use crate::liealg::AlgRef;
use crate::poly::{Ambient, PolyElt};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// Guard on intermediate term counts during straightening.
pub const TERM_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone)]
pub struct UElt {
    pub alg: AlgRef,
    pub field: FieldRef,
    pub terms: BTreeMap<Vec<u32>, Fq>,
}

impl PartialEq for UElt {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.alg, &other.alg) && self.terms == other.terms
    }
}

impl UElt {
    pub fn zero(alg: &AlgRef, field: &FieldRef) -> UElt {
        UElt {
            alg: alg.clone(),
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(alg: &AlgRef, c: Fq) -> UElt {
        let field = c.spec().clone();
        let mut u = UElt::zero(alg, &field);
        if !c.is_zero() {
            u.terms.insert(vec![0; alg.dim], c);
        }
        u
    }

    pub fn one(alg: &AlgRef, field: &FieldRef) -> UElt {
        UElt::scalar(alg, Fq::one(field))
    }

    pub fn generator(alg: &AlgRef, i: usize, field: &FieldRef) -> UElt {
        let mut e = vec![0u32; alg.dim];
        e[i] = 1;
        UElt::monomial(alg, e, Fq::one(field))
    }

    pub fn monomial(alg: &AlgRef, exps: Vec<u32>, c: Fq) -> UElt {
        let field = c.spec().clone();
        let mut u = UElt::zero(alg, &field);
        if !c.is_zero() {
            u.terms.insert(exps, c);
        }
        u
    }

    /// Degree-one element from algebra coordinates.
    pub fn from_algebra(alg: &AlgRef, x: &[Fq]) -> UElt {
        let field = x[0].spec().clone();
        let mut u = UElt::zero(alg, &field);
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0u32; alg.dim];
                e[i] = 1;
                u.terms.insert(e, c.clone());
            }
        }
        u
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
    }

    pub fn to_field(&self, f: &FieldRef) -> Result<UElt> {
        if **f == *self.field {
            return Ok(self.clone());
        }
        let mut out = UElt::zero(&self.alg, f);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), embed(c, f)?);
        }
        Ok(out)
    }

    fn compatible(&self, other: &UElt) -> Result<()> {
        if !Arc::ptr_eq(&self.alg, &other.alg) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    fn insert_add(&mut self, exps: Vec<u32>, c: Fq) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(cur) => {
                let nc = cur.add(&c);
                if nc.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *cur = nc;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn add(&self, other: &UElt) -> Result<UElt> {
        self.compatible(other)?;
        let f = common_field(&self.field, &other.field)?;
        let mut a = self.to_field(&f)?;
        for (e, c) in other.to_field(&f)?.terms {
            a.insert_add(e, c);
        }
        Ok(a)
    }

    pub fn sub(&self, other: &UElt) -> Result<UElt> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> UElt {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, c: &Fq) -> Result<UElt> {
        let f = common_field(&self.field, c.spec())?;
        let cc = embed(c, &f)?;
        let mut out = UElt::zero(&self.alg, &f);
        if cc.is_zero() {
            return Ok(out);
        }
        for (e, v) in &self.terms {
            out.terms.insert(e.clone(), embed(v, &f)?.mul(&cc));
        }
        Ok(out)
    }

    pub fn scale_int(&self, n: i64) -> UElt {
        let mut out = UElt::zero(&self.alg, &self.field);
        for (e, v) in &self.terms {
            out.insert_add(e.clone(), v.mul_int(n));
        }
        out
    }

    pub fn serialize_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(e, c)| serde_json::json!({"exps": e, "coeff": c.serialize_str()}))
            .collect();
        serde_json::json!({ "terms": terms })
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = vec![];
        for (e, c) in &self.terms {
            let mut factors = vec![];
            if !c.is_one() || e.iter().all(|&x| x == 0) {
                factors.push(c.serialize_str());
            }
            for (i, &k) in e.iter().enumerate() {
                if k == 1 {
                    factors.push(self.alg.names[i].clone());
                } else if k > 1 {
                    factors.push(format!("{}^{}", self.alg.names[i], k));
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

fn max_index(e: &[u32]) -> Option<usize> {
    e.iter().rposition(|&x| x > 0)
}

/// Normal form of (monomial a) * x_j, coefficients in the prime field.
/// Memoized per algebra.
fn mono_mul_letter(alg: &AlgRef, a: &[u32], j: usize) -> Result<Arc<Vec<(Vec<u32>, u64)>>> {
    let key = (a.to_vec(), j);
    if let Some(hit) = alg.mul_cache.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let p = alg.p;
    let result: Vec<(Vec<u32>, u64)> = match max_index(a) {
        None => {
            let mut e = vec![0u32; alg.dim];
            e[j] = 1;
            vec![(e, 1)]
        }
        Some(k) if k <= j => {
            let mut e = a.to_vec();
            e[j] += 1;
            vec![(e, 1)]
        }
        Some(k) => {
            // x^a x_j = (x^{a'} x_j) x_k + x^{a'} [x_k, x_j],  a' = a - e_k
            let mut ap = a.to_vec();
            ap[k] -= 1;
            let mut acc: HashMap<Vec<u32>, u64> = HashMap::new();
            let r1 = mono_mul_letter(alg, &ap, j)?;
            for (b, c) in r1.iter() {
                let r2 = mono_mul_letter(alg, b, k)?;
                for (b2, c2) in r2.iter() {
                    let slot = acc.entry(b2.clone()).or_insert(0);
                    *slot = (*slot + c * c2) % p;
                }
            }
            for &(l, cl) in &alg.bracket_p[k][j] {
                let r3 = mono_mul_letter(alg, &ap, l)?;
                for (b3, c3) in r3.iter() {
                    let slot = acc.entry(b3.clone()).or_insert(0);
                    *slot = (*slot + cl * c3) % p;
                }
            }
            if acc.len() > TERM_LIMIT {
                return Err(Error::TermOverflow {
                    count: acc.len(),
                    limit: TERM_LIMIT,
                });
            }
            let mut v: Vec<(Vec<u32>, u64)> =
                acc.into_iter().filter(|&(_, c)| c != 0).collect();
            v.sort();
            v
        }
    };
    let arc = Arc::new(result);
    alg.mul_cache.lock().unwrap().insert(key, arc.clone());
    Ok(arc)
}

/// Normal form of the product of two monomials, prime-field coefficients.
fn mono_mul(alg: &AlgRef, a: &[u32], b: &[u32]) -> Result<Vec<(Vec<u32>, u64)>> {
    let p = alg.p;
    let mut cur: HashMap<Vec<u32>, u64> = HashMap::new();
    cur.insert(a.to_vec(), 1);
    for (j, &mult) in b.iter().enumerate() {
        for _ in 0..mult {
            let mut nxt: HashMap<Vec<u32>, u64> = HashMap::new();
            for (m, c) in &cur {
                let r = mono_mul_letter(alg, m, j)?;
                for (m2, c2) in r.iter() {
                    let slot = nxt.entry(m2.clone()).or_insert(0);
                    *slot = (*slot + c * c2) % p;
                }
            }
            nxt.retain(|_, c| *c != 0);
            if nxt.len() > TERM_LIMIT {
                return Err(Error::TermOverflow {
                    count: nxt.len(),
                    limit: TERM_LIMIT,
                });
            }
            cur = nxt;
        }
    }
    Ok(cur.into_iter().collect())
}

/// Product in the enveloping algebra.
pub fn pbw_mul(u: &UElt, v: &UElt) -> Result<UElt> {
    u.compatible(v)?;
    let alg = u.alg.clone();
    let f = common_field(&u.field, &v.field)?;
    let uu = u.to_field(&f)?;
    let vv = v.to_field(&f)?;
    let mut out = UElt::zero(&alg, &f);
    for (a, ca) in &uu.terms {
        for (b, cb) in &vv.terms {
            let c = ca.mul(cb);
            for (m, cp) in mono_mul(&alg, a, b)? {
                out.insert_add(m, c.mul_int(cp as i64));
            }
        }
        if out.terms.len() > TERM_LIMIT {
            return Err(Error::TermOverflow {
                count: out.terms.len(),
                limit: TERM_LIMIT,
            });
        }
    }
    Ok(out)
}

pub fn pbw_pow(u: &UElt, e: usize) -> Result<UElt> {
    let mut acc = UElt::one(&u.alg, &u.field);
    for _ in 0..e {
        acc = pbw_mul(&acc, u)?;
    }
    Ok(acc)
}

/// Adjoint action of basis element i: x.u = xu - ux.
pub fn adjoint_basis(i: usize, u: &UElt) -> Result<UElt> {
    let x = UElt::generator(&u.alg, i, &u.field);
    pbw_mul(&x, u)?.sub(&pbw_mul(u, &x)?)
}

/// Adjoint action of an arbitrary algebra element.
pub fn adjoint_act(x: &[Fq], u: &UElt) -> Result<UElt> {
    let xe = UElt::from_algebra(&u.alg, x);
    pbw_mul(&xe, u)?.sub(&pbw_mul(u, &xe)?)
}

/// Centrality test: killed by the adjoint action of every basis element.
pub fn is_central(u: &UElt) -> Result<bool> {
    for i in 0..u.alg.dim {
        if !adjoint_basis(i, u)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Divided-power operator for the s-th simple root (sign 0 positive side,
/// 1 negative side), extended over products by the divided Leibniz rule.
pub fn divided_power_act(u: &UElt, simple_pos: usize, sign: usize, m: usize) -> Result<UElt> {
    let alg = u.alg.clone();
    let ops = &alg.divided[2 * simple_pos + sign];
    let maxstep = ops.len() - 1;
    if m == 0 {
        return Ok(u.clone());
    }
    let mut out = UElt::zero(&alg, &u.field);
    for (e, c) in &u.terms {
        let mut seq = vec![];
        for (i, &k) in e.iter().enumerate() {
            for _ in 0..k {
                seq.push(i);
            }
        }
        let mut dp: Vec<UElt> = (0..=m)
            .map(|k| {
                if k == 0 {
                    UElt::scalar(&alg, c.clone())
                } else {
                    UElt::zero(&alg, &u.field)
                }
            })
            .collect();
        for &v in &seq {
            let mut ndp: Vec<UElt> = (0..=m).map(|_| UElt::zero(&alg, &u.field)).collect();
            for used in 0..=m {
                if dp[used].is_zero() {
                    continue;
                }
                for i in 0..=maxstep.min(m - used) {
                    let mut img = UElt::zero(&alg, &u.field);
                    for r in 0..alg.dim {
                        let cc = ops[i][r][v];
                        if cc != 0 {
                            let mut ee = vec![0u32; alg.dim];
                            ee[r] = 1;
                            img.insert_add(ee, Fq::from_int(&u.field, cc));
                        }
                    }
                    if img.is_zero() {
                        continue;
                    }
                    let prod = pbw_mul(&dp[used], &img)?;
                    ndp[used + i] = ndp[used + i].add(&prod)?;
                }
            }
            dp = ndp;
        }
        out = out.add(&dp[m])?;
    }
    Ok(out)
}

/// Bound past which every divided power vanishes on the element.
pub fn divided_power_bound(alg: &AlgRef, deg: usize) -> usize {
    let maxstep = alg
        .divided
        .iter()
        .map(|ops| ops.len() - 1)
        .max()
        .unwrap_or(1);
    deg * maxstep.max(1)
}

/// Invariance under the group: torus weight zero and killed by every
/// divided power of both root subgroups of every simple root.
pub fn is_g_invariant(u: &UElt) -> Result<bool> {
    let alg = &u.alg;
    for e in u.terms.keys() {
        if alg.monomial_weight(e).iter().any(|&w| w != 0) {
            return Ok(false);
        }
    }
    let d = u.degree().unwrap_or(0);
    let bound = divided_power_bound(alg, d);
    for sp in 0..alg.datum.simple.len() {
        for sign in 0..2 {
            for m in 1..=bound {
                if !divided_power_act(u, sp, sign, m)?.is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Leading term in the symmetric algebra: the top filtration layer.
pub fn gr_leading(u: &UElt) -> Result<PolyElt> {
    if u.is_zero() {
        return Err(Error::ZeroElement);
    }
    let d = u.degree().unwrap();
    let mut out = PolyElt::zero(&u.alg, Ambient::G, &u.field);
    for (e, c) in &u.terms {
        if e.iter().map(|&x| x as usize).sum::<usize>() == d {
            out.terms.insert(e.clone(), c.clone());
        }
    }
    Ok(out)
}

/// Whole element read into the symmetric algebra term by term (used for
/// comparisons of elements already known to lie in a commutative piece).
pub fn as_poly(u: &UElt) -> PolyElt {
    let mut out = PolyElt::zero(&u.alg, Ambient::G, &u.field);
    for (e, c) in &u.terms {
        out.terms.insert(e.clone(), c.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::liealg::{build_algebra, AlgebraKind};

    fn sl2(p: u64) -> AlgRef {
        build_algebra(AlgebraKind::Sl(2), p).unwrap()
    }

    fn gen(alg: &AlgRef, name: &str) -> UElt {
        let i = alg.names.iter().position(|n| n == name).unwrap();
        UElt::generator(alg, i, &alg.base)
    }

    /// Independent straightening oracle: free-word rewriting applied to
    /// fixpoint, x_j x_i -> x_i x_j + [x_j, x_i] for j > i.
    fn free_oracle(alg: &AlgRef, word: &[usize]) -> BTreeMap<Vec<u32>, u64> {
        let p = alg.p;
        let mut terms: HashMap<Vec<usize>, u64> = HashMap::new();
        terms.insert(word.to_vec(), 1);
        loop {
            let Some((w, &c)) = terms.iter().find(|(w, _)| {
                w.windows(2).any(|pair| pair[0] > pair[1])
            }) else {
                break;
            };
            let w = w.clone();
            terms.remove(&w);
            let pos = w
                .windows(2)
                .position(|pair| pair[0] > pair[1])
                .expect("inversion present");
            let mut swapped = w.clone();
            swapped.swap(pos, pos + 1);
            let e = terms.entry(swapped).or_insert(0);
            *e = (*e + c) % p;
            for &(l, cl) in &alg.bracket_p[w[pos]][w[pos + 1]] {
                let mut shorter = w.clone();
                shorter.remove(pos + 1);
                shorter[pos] = l;
                let e = terms.entry(shorter).or_insert(0);
                *e = (*e + c * cl) % p;
            }
            terms.retain(|_, c| *c != 0);
        }
        let mut out: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for (w, c) in terms {
            let mut exps = vec![0u32; alg.dim];
            for i in w {
                exps[i] += 1;
            }
            let e = out.entry(exps).or_insert(0);
            *e = (*e + c) % p;
        }
        out.retain(|_, c| *c != 0);
        out
    }

    fn word_of(alg: &AlgRef, names: &[&str]) -> Vec<usize> {
        names
            .iter()
            .map(|n| alg.names.iter().position(|x| x == n).unwrap())
            .collect()
    }

    #[test]
    fn defining_relations_sl2() {
        let alg = sl2(5);
        let (e, f, h) = (gen(&alg, "e1"), gen(&alg, "f1"), gen(&alg, "h1"));
        // e f = f e + h
        let ef = pbw_mul(&e, &f).unwrap();
        let fe_h = pbw_mul(&f, &e).unwrap().add(&h).unwrap();
        assert_eq!(ef, fe_h);
        // e h = h e - 2 e
        let eh = pbw_mul(&e, &h).unwrap();
        let he = pbw_mul(&h, &e).unwrap();
        assert_eq!(eh, he.sub(&e.scale_int(2)).unwrap());
    }

    #[test]
    fn straightening_matches_free_oracle() {
        let alg = sl2(5);
        // e * f^2 = f^2 e + 2 f h - 2 f, verified against the rewriting engine
        let w = word_of(&alg, &["e1", "f1", "f1"]);
        let oracle = free_oracle(&alg, &w);
        let e = gen(&alg, "e1");
        let f = gen(&alg, "f1");
        let prod = pbw_mul(&e, &pbw_pow(&f, 2).unwrap()).unwrap();
        let got: BTreeMap<Vec<u32>, u64> = prod
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c.coeffs()[0]))
            .collect();
        assert_eq!(got, oracle);
        // frozen expected value: f^2 e + 2 f h - 2 f
        let f2e = pbw_mul(&pbw_pow(&f, 2).unwrap(), &e).unwrap();
        let fh = pbw_mul(&f, &gen(&alg, "h1")).unwrap();
        let expect = f2e
            .add(&fh.scale_int(2))
            .unwrap()
            .sub(&f.scale_int(2))
            .unwrap();
        assert_eq!(prod, expect);
    }

    #[test]
    fn oracle_agreement_on_random_words() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(7);
        for &(kind, p) in &[(AlgebraKind::Sl(2), 3), (AlgebraKind::Gl(2), 2)] {
            let alg = build_algebra(kind, p).unwrap();
            for _ in 0..20 {
                let len = rng.gen_range(1..5);
                let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..alg.dim)).collect();
                let oracle = free_oracle(&alg, &word);
                let mut prod = UElt::one(&alg, &alg.base);
                for &i in &word {
                    prod = pbw_mul(&prod, &UElt::generator(&alg, i, &alg.base)).unwrap();
                }
                let got: BTreeMap<Vec<u32>, u64> = prod
                    .terms
                    .iter()
                    .map(|(e, c)| (e.clone(), c.coeffs()[0]))
                    .collect();
                assert_eq!(got, oracle, "word {word:?}");
            }
        }
    }

    #[test]
    fn associativity_randomized() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let alg = sl2(3);
        let mut rng = StdRng::seed_from_u64(11);
        let rand_elt = |rng: &mut StdRng| {
            let mut u = UElt::zero(&alg, &alg.base);
            for _ in 0..3 {
                let exps: Vec<u32> = (0..3).map(|_| rng.gen_range(0..3u32)).collect();
                u.insert_add(exps, Fq::from_int(&alg.base, rng.gen_range(0..3)));
            }
            u
        };
        for _ in 0..15 {
            let (a, b, c) = (rand_elt(&mut rng), rand_elt(&mut rng), rand_elt(&mut rng));
            let l = pbw_mul(&pbw_mul(&a, &b).unwrap(), &c).unwrap();
            let r = pbw_mul(&a, &pbw_mul(&b, &c).unwrap()).unwrap();
            assert_eq!(l, r);
        }
    }

    #[test]
    fn filtration_degree_additive() {
        let alg = sl2(3);
        let e = gen(&alg, "e1");
        let f = gen(&alg, "f1");
        let u = pbw_mul(&e, &f).unwrap(); // fe + h
        let v = pbw_pow(&f, 2).unwrap();
        assert_eq!(
            pbw_mul(&u, &v).unwrap().degree(),
            Some(u.degree().unwrap() + v.degree().unwrap())
        );
    }

    #[test]
    fn adjoint_examples() {
        let alg = sl2(5);
        let e = gen(&alg, "e1");
        let f = gen(&alg, "f1");
        let h = gen(&alg, "h1");
        let ei = alg.e_index(0);
        let hi = alg.h_index(0);
        assert_eq!(adjoint_basis(ei, &f).unwrap(), h);
        // h acting on the weight-zero monomial fe
        let fe = pbw_mul(&f, &e).unwrap();
        assert!(adjoint_basis(hi, &fe).unwrap().is_zero());
        // c = 4fe + (h+1)^2 is g-invariant, so e kills it
        let one = UElt::one(&alg, &alg.base);
        let hp1 = h.add(&one).unwrap();
        let c = fe
            .scale_int(4)
            .add(&pbw_mul(&hp1, &hp1).unwrap())
            .unwrap();
        assert!(adjoint_basis(ei, &c).unwrap().is_zero());
        assert!(is_central(&c).unwrap());
        assert!(is_g_invariant(&c).unwrap());
    }

    #[test]
    fn adjoint_is_derivation() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let alg = sl2(3);
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..10 {
            let exps: Vec<u32> = (0..3).map(|_| rng.gen_range(0..2u32)).collect();
            let exps2: Vec<u32> = (0..3).map(|_| rng.gen_range(0..2u32)).collect();
            let v = UElt::monomial(&alg, exps, Fq::one(&alg.base));
            let w = UElt::monomial(&alg, exps2, Fq::one(&alg.base));
            for i in 0..alg.dim {
                let lhs = adjoint_basis(i, &pbw_mul(&v, &w).unwrap()).unwrap();
                let rhs = pbw_mul(&adjoint_basis(i, &v).unwrap(), &w)
                    .unwrap()
                    .add(&pbw_mul(&v, &adjoint_basis(i, &w).unwrap()).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn divided_power_basics() {
        let alg = sl2(3);
        let f = gen(&alg, "f1");
        let f2 = pbw_pow(&f, 2).unwrap();
        // order zero is the identity
        assert_eq!(divided_power_act(&f2, 0, 0, 0).unwrap(), f2);
        // first divided power is the adjoint action of e
        let d1 = divided_power_act(&f2, 0, 0, 1).unwrap();
        let ad = adjoint_basis(alg.e_index(0), &f2).unwrap();
        assert_eq!(d1, ad);
    }

    #[test]
    fn divided_power_matches_conjugation_oracle() {
        // expand Ad(x(t))(f) = f + t h - t^2 e and multiply two copies as
        // polynomials in t; coefficient of t^m must equal D^(m)(f^2)
        let alg = sl2(3);
        let e = gen(&alg, "e1");
        let f = gen(&alg, "f1");
        let h = gen(&alg, "h1");
        let adf = vec![f.clone(), h.clone(), e.neg()]; // coefficients of t^0,t^1,t^2
        let mut conv: Vec<UElt> = (0..5).map(|_| UElt::zero(&alg, &alg.base)).collect();
        for (i, a) in adf.iter().enumerate() {
            for (j, b) in adf.iter().enumerate() {
                let prod = pbw_mul(a, b).unwrap();
                conv[i + j] = conv[i + j].add(&prod).unwrap();
            }
        }
        let f2 = pbw_pow(&f, 2).unwrap();
        for m in 0..5 {
            let dm = divided_power_act(&f2, 0, 0, m).unwrap();
            assert_eq!(dm, conv[m], "order {m}");
        }
    }

    #[test]
    fn strict_inclusion_witness() {
        // h^p - h is central but not G-invariant for p = 3
        let alg = sl2(3);
        let h = gen(&alg, "h1");
        let z = pbw_pow(&h, 3).unwrap().sub(&h).unwrap();
        assert!(is_central(&z).unwrap());
        assert!(!is_g_invariant(&z).unwrap());
        // explicit witness: the third divided power of the e side
        let d3 = divided_power_act(&z, 0, 0, 3).unwrap();
        assert!(!d3.is_zero());
    }

    #[test]
    fn gr_examples() {
        let alg = sl2(5);
        let e = gen(&alg, "e1");
        let f = gen(&alg, "f1");
        let h = gen(&alg, "h1");
        let fe = pbw_mul(&f, &e).unwrap();
        let u = fe.add(&h).unwrap();
        let lead = gr_leading(&u).unwrap();
        assert_eq!(lead.degree(), Some(2));
        assert_eq!(lead.terms.len(), 1);

        // gr(c) = 4fe + h^2
        let one = UElt::one(&alg, &alg.base);
        let hp1 = h.add(&one).unwrap();
        let c = fe
            .scale_int(4)
            .add(&pbw_mul(&hp1, &hp1).unwrap())
            .unwrap();
        let lead = gr_leading(&c).unwrap();
        assert_eq!(lead.terms.len(), 2);
        assert!(gr_leading(&UElt::zero(&alg, &alg.base)).is_err());
    }

    #[test]
    fn gr_multiplicative_random() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let alg = sl2(3);
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..50 {
            let mut u = UElt::zero(&alg, &alg.base);
            let mut v = UElt::zero(&alg, &alg.base);
            for _ in 0..2 {
                let e1: Vec<u32> = (0..3).map(|_| rng.gen_range(0..3u32)).collect();
                let e2: Vec<u32> = (0..3).map(|_| rng.gen_range(0..3u32)).collect();
                u.insert_add(e1, Fq::from_int(&alg.base, rng.gen_range(1..3)));
                v.insert_add(e2, Fq::from_int(&alg.base, rng.gen_range(1..3)));
            }
            if u.is_zero() || v.is_zero() {
                continue;
            }
            let lhs = gr_leading(&pbw_mul(&u, &v).unwrap()).unwrap();
            let rhs = gr_leading(&u)
                .unwrap()
                .mul(&gr_leading(&v).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn extension_coefficients() {
        let alg = sl2(3);
        let f9 = FieldSpec::new(3, 2).unwrap();
        let t = Fq::from_coeffs(&f9, vec![0, 1]).unwrap();
        let e = UElt::generator(&alg, alg.e_index(0), &f9).scale(&t).unwrap();
        let f = UElt::generator(&alg, alg.f_index(0), &f9);
        let prod = pbw_mul(&e, &f).unwrap();
        // t e f = t(fe + h)
        assert_eq!(prod.terms.len(), 2);
        for c in prod.terms.values() {
            assert_eq!(*c, t);
        }
    }
}

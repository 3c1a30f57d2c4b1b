//! Commutative algebra on the symmetric algebras of the Lie algebra and its
//! Cartan subalgebra: the restriction map, the rho shift, both Weyl actions
//! and per-degree invariant spaces by exact linear algebra.
//!
//! The Frobenius-twisted copies of these algebras carry the same terms; the
//! twist only shows up in the maps (their coefficient action is p-semilinear),
//! so no separate representation is kept for them.

use crate::error::{Error, Result};
use crate::field::{common_field, embed, FieldRef, Fq};
use crate::liealg::{AlgRef, WeylMode};
use crate::linalg::Mat;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

pub const DEFAULT_DEGREE_BOUND: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Ambient {
    /// S(g) = k[g*], one variable per basis element of g.
    G,
    /// S(t) = k[t*], one variable per Cartan basis element.
    T,
}

#[derive(Debug, Clone)]
pub struct PolyElt {
    pub alg: AlgRef,
    pub ambient: Ambient,
    pub field: FieldRef,
    pub terms: BTreeMap<Vec<u32>, Fq>,
}

impl PartialEq for PolyElt {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.terms == other.terms
    }
}

impl PolyElt {
    pub fn nvars(alg: &AlgRef, ambient: Ambient) -> usize {
        match ambient {
            Ambient::G => alg.dim,
            Ambient::T => alg.rank,
        }
    }

    pub fn zero(alg: &AlgRef, ambient: Ambient, field: &FieldRef) -> PolyElt {
        PolyElt {
            alg: alg.clone(),
            ambient,
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(alg: &AlgRef, ambient: Ambient, c: Fq) -> PolyElt {
        let field = c.spec().clone();
        let mut out = PolyElt::zero(alg, ambient, &field);
        if !c.is_zero() {
            out.terms.insert(vec![0; Self::nvars(alg, ambient)], c);
        }
        out
    }

    pub fn one(alg: &AlgRef, ambient: Ambient, field: &FieldRef) -> PolyElt {
        PolyElt::constant(alg, ambient, Fq::one(field))
    }

    pub fn var(alg: &AlgRef, ambient: Ambient, i: usize, field: &FieldRef) -> PolyElt {
        let mut exps = vec![0u32; Self::nvars(alg, ambient)];
        exps[i] = 1;
        let mut out = PolyElt::zero(alg, ambient, field);
        out.terms.insert(exps, Fq::one(field));
        out
    }

    pub fn monomial(alg: &AlgRef, ambient: Ambient, exps: Vec<u32>, c: Fq) -> PolyElt {
        let field = c.spec().clone();
        let mut out = PolyElt::zero(alg, ambient, &field);
        if !c.is_zero() {
            out.terms.insert(exps, c);
        }
        out
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

    fn compatible(&self, other: &PolyElt) -> Result<()> {
        if !Arc::ptr_eq(&self.alg, &other.alg) || self.ambient != other.ambient {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    /// Lift both operands into a common coefficient field.
    fn unify(&self, other: &PolyElt) -> Result<(PolyElt, PolyElt)> {
        let f = common_field(&self.field, &other.field)?;
        Ok((self.to_field(&f)?, other.to_field(&f)?))
    }

    pub fn to_field(&self, f: &FieldRef) -> Result<PolyElt> {
        if **f == *self.field {
            return Ok(self.clone());
        }
        let mut out = PolyElt::zero(&self.alg, self.ambient, f);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), embed(c, f)?);
        }
        Ok(out)
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

    pub fn add(&self, other: &PolyElt) -> Result<PolyElt> {
        self.compatible(other)?;
        let (mut a, b) = self.unify(other)?;
        for (e, c) in b.terms {
            a.insert_add(e, c);
        }
        Ok(a)
    }

    pub fn sub(&self, other: &PolyElt) -> Result<PolyElt> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PolyElt {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, c: &Fq) -> Result<PolyElt> {
        let f = common_field(&self.field, c.spec())?;
        let cc = embed(c, &f)?;
        let mut out = PolyElt::zero(&self.alg, self.ambient, &f);
        if cc.is_zero() {
            return Ok(out);
        }
        for (e, v) in &self.terms {
            out.terms.insert(e.clone(), embed(v, &f)?.mul(&cc));
        }
        Ok(out)
    }

    pub fn mul(&self, other: &PolyElt) -> Result<PolyElt> {
        self.compatible(other)?;
        let (a, b) = self.unify(other)?;
        let mut out = PolyElt::zero(&self.alg, self.ambient, &a.field);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert_add(exps, ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: usize) -> Result<PolyElt> {
        let mut acc = PolyElt::one(&self.alg, self.ambient, &self.field);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// The top-degree homogeneous part.
    pub fn top_part(&self) -> PolyElt {
        let Some(d) = self.degree() else {
            return self.clone();
        };
        let mut out = PolyElt::zero(&self.alg, self.ambient, &self.field);
        for (e, c) in &self.terms {
            if e.iter().map(|&x| x as usize).sum::<usize>() == d {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    pub fn homogeneous_part(&self, d: usize) -> PolyElt {
        let mut out = PolyElt::zero(&self.alg, self.ambient, &self.field);
        for (e, c) in &self.terms {
            if e.iter().map(|&x| x as usize).sum::<usize>() == d {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// Value at a point given by coordinates of the dual space.
    pub fn evaluate(&self, vals: &[Fq]) -> Result<Fq> {
        let mut f = self.field.clone();
        for v in vals {
            f = common_field(&f, v.spec())?;
        }
        let vals: Vec<Fq> = vals.iter().map(|v| embed(v, &f)).collect::<Result<_>>()?;
        let mut acc = Fq::zero(&f);
        for (e, c) in &self.terms {
            let mut t = embed(c, &f)?;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&vals[i].pow(k as u64));
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Apply an algebra substitution: variable i goes to images[i].
    pub fn substitute(&self, images: &[PolyElt]) -> Result<PolyElt> {
        let mut out = PolyElt::zero(&self.alg, self.ambient, &self.field);
        for (e, c) in &self.terms {
            let mut t = PolyElt::constant(&self.alg, self.ambient, c.clone());
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t.mul(&images[i])?;
                }
            }
            out = out.add(&t)?;
        }
        Ok(out)
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
        let names: Vec<String> = match self.ambient {
            Ambient::G => self.alg.names.clone(),
            Ambient::T => (0..self.alg.rank).map(|j| format!("h{}", j + 1)).collect(),
        };
        let mut parts = vec![];
        for (e, c) in &self.terms {
            let mut factors = vec![];
            if !c.is_one() || e.iter().all(|&x| x == 0) {
                factors.push(c.serialize_str());
            }
            for (i, &k) in e.iter().enumerate() {
                if k == 1 {
                    factors.push(names[i].clone());
                } else if k > 1 {
                    factors.push(format!("{}^{}", names[i], k));
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

/// Restriction to the Cartan: kills monomials with any non-Cartan variable.
pub fn phi_restrict(s: &PolyElt) -> Result<PolyElt> {
    if s.ambient != Ambient::G {
        return Err(Error::Precondition("phi acts on S(g)".into()));
    }
    let alg = &s.alg;
    let mut out = PolyElt::zero(alg, Ambient::T, &s.field);
    for (e, c) in &s.terms {
        let pure_cartan = e
            .iter()
            .enumerate()
            .all(|(i, &k)| k == 0 || alg.is_cartan(i));
        if pure_cartan {
            let te: Vec<u32> = (0..alg.rank).map(|j| e[alg.h_index(j)]).collect();
            out.insert_add(te, c.clone());
        }
    }
    Ok(out)
}

/// Ordinary or dot Weyl action on S(t) as an algebra map.
pub fn weyl_poly_act(s: &PolyElt, widx: usize, mode: WeylMode) -> Result<PolyElt> {
    if s.ambient != Ambient::T {
        return Err(Error::Precondition("Weyl action on S(t)".into()));
    }
    let alg = &s.alg;
    let rank = alg.rank;
    let w = &alg.datum.weyl[widx];
    let images: Vec<PolyElt> = (0..rank)
        .map(|j| {
            // w(h_j) as a linear polynomial, plus the affine dot shift
            let mut img = PolyElt::zero(alg, Ambient::T, &s.field);
            for k in 0..rank {
                let c = w.mat[k][j];
                if c != 0 {
                    let mut e = vec![0u32; rank];
                    e[k] = 1;
                    img.insert_add(e, Fq::from_int(&s.field, c));
                }
            }
            if mode == WeylMode::Dot {
                // rho(w(h_j)) - rho(h_j)
                let shift: i64 = (0..rank)
                    .map(|k| w.mat[k][j] * alg.datum.rho[k])
                    .sum::<i64>()
                    - alg.datum.rho[j];
                img.insert_add(vec![0; rank], Fq::from_int(&s.field, shift));
            }
            img
        })
        .collect();
    s.substitute(&images)
}

/// The rho shift: h -> h - rho(h) (fwd) or h -> h + rho(h) (inv).
pub fn gamma_shift(s: &PolyElt, forward: bool) -> Result<PolyElt> {
    if s.ambient != Ambient::T {
        return Err(Error::Precondition("gamma acts on S(t)".into()));
    }
    let alg = &s.alg;
    let rank = alg.rank;
    let sign = if forward { -1 } else { 1 };
    let images: Vec<PolyElt> = (0..rank)
        .map(|j| {
            let mut img = PolyElt::var(alg, Ambient::T, j, &s.field);
            img.insert_add(
                vec![0; rank],
                Fq::from_int(&s.field, sign * alg.datum.rho[j]),
            );
            img
        })
        .collect();
    s.substitute(&images)
}

/// Derivation action of basis element i on S(g), extending ad.
pub fn derivation_act(i: usize, s: &PolyElt) -> Result<PolyElt> {
    if s.ambient != Ambient::G {
        return Err(Error::Precondition("derivations act on S(g)".into()));
    }
    let alg = &s.alg;
    let mut out = PolyElt::zero(alg, Ambient::G, &s.field);
    for (e, c) in &s.terms {
        for (j, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            for &(l, v) in &alg.bracket_p[i][j] {
                let mut ne = e.clone();
                ne[j] -= 1;
                ne[l] += 1;
                out.insert_add(ne, c.mul_int(k as i64).mul_int(v as i64));
            }
        }
    }
    Ok(out)
}

/// Divided-power operator on S(g) for the s-th simple root (sign 0 for the
/// positive side, 1 for the negative), by the divided Leibniz rule.
pub fn divided_power_sym(s: &PolyElt, simple_pos: usize, sign: usize, m: usize) -> Result<PolyElt> {
    if s.ambient != Ambient::G {
        return Err(Error::Precondition("divided powers act on S(g)".into()));
    }
    let alg = s.alg.clone();
    let ops = &alg.divided[2 * simple_pos + sign];
    let maxstep = ops.len() - 1;
    let mut out = PolyElt::zero(&alg, Ambient::G, &s.field);
    for (e, c) in &s.terms {
        // positions of the monomial as a sequence of variables
        let mut seq = vec![];
        for (i, &k) in e.iter().enumerate() {
            for _ in 0..k {
                seq.push(i);
            }
        }
        // dp over used budget
        let mut dp: Vec<PolyElt> = (0..=m)
            .map(|u| {
                if u == 0 {
                    PolyElt::constant(&alg, Ambient::G, c.clone())
                } else {
                    PolyElt::zero(&alg, Ambient::G, &s.field)
                }
            })
            .collect();
        for &v in &seq {
            let mut ndp: Vec<PolyElt> = (0..=m)
                .map(|_| PolyElt::zero(&alg, Ambient::G, &s.field))
                .collect();
            for u in 0..=m {
                if dp[u].is_zero() {
                    continue;
                }
                for i in 0..=maxstep.min(m - u) {
                    // D^{(i)}(x_v) as a linear polynomial
                    let mut img = PolyElt::zero(&alg, Ambient::G, &s.field);
                    for r in 0..alg.dim {
                        let cc = ops[i][r][v];
                        if cc != 0 {
                            let mut ee = vec![0u32; alg.dim];
                            ee[r] = 1;
                            img.insert_add(ee, Fq::from_int(&s.field, cc));
                        }
                    }
                    if img.is_zero() {
                        continue;
                    }
                    ndp[u + i] = ndp[u + i].add(&dp[u].mul(&img)?)?;
                }
            }
            dp = ndp;
        }
        out = out.add(&dp[m])?;
    }
    Ok(out)
}

// ---- invariant subspaces per degree ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InvSpace {
    /// S(g)^G: torus weight zero and killed by all divided powers.
    GInv,
    /// S(g)^g: killed by all basis derivations.
    LieInv,
    /// S(t)^W under the ordinary action.
    WInv,
    /// S(t)^{W.} under the dot action.
    WDotInv,
}

impl InvSpace {
    pub fn tag(&self) -> &'static str {
        match self {
            InvSpace::GInv => "S(g)^G",
            InvSpace::LieInv => "S(g)^g",
            InvSpace::WInv => "S(t)^W",
            InvSpace::WDotInv => "S(t)^Wdot",
        }
    }
}

#[derive(Debug, Clone)]
pub struct InvariantBasis {
    pub space: InvSpace,
    pub degree: usize,
    pub basis: Vec<PolyElt>,
    /// Column labels of the echelon witness.
    pub monomials: Vec<Vec<u32>>,
    /// Row-reduced coordinate rows of the basis in the monomial order.
    pub echelon: Vec<Vec<Fq>>,
}

/// Monomials of exact total degree d in lexicographic order.
pub fn monomials_of_degree(nvars: usize, d: usize) -> Vec<Vec<u32>> {
    let mut out = vec![];
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() - 1 {
            cur[i] = left as u32;
            out.push(cur.clone());
            cur[i] = 0;
            return;
        }
        for take in 0..=left {
            cur[i] = take as u32;
            rec(i + 1, left - take, cur, out);
        }
        cur[i] = 0;
    }
    if nvars == 0 {
        if d == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

pub fn monomials_up_to(nvars: usize, d: usize) -> Vec<Vec<u32>> {
    (0..=d).flat_map(|k| monomials_of_degree(nvars, k)).collect()
}

fn poly_from_coords(
    alg: &AlgRef,
    ambient: Ambient,
    monos: &[Vec<u32>],
    row: &[Fq],
    field: &FieldRef,
) -> PolyElt {
    let mut out = PolyElt::zero(alg, ambient, field);
    for (e, c) in monos.iter().zip(row) {
        if !c.is_zero() {
            out.terms.insert(e.clone(), c.clone());
        }
    }
    out
}

pub fn coords_of_poly(s: &PolyElt, monos: &[Vec<u32>], field: &FieldRef) -> Result<Vec<Fq>> {
    let mut idx = BTreeMap::new();
    for (k, e) in monos.iter().enumerate() {
        idx.insert(e.clone(), k);
    }
    let mut v = vec![Fq::zero(field); monos.len()];
    for (e, c) in &s.terms {
        let Some(&k) = idx.get(e) else {
            return Err(Error::Internal("monomial outside coordinate range".into()));
        };
        v[k] = embed(c, field)?;
    }
    Ok(v)
}

/// Exact basis of the invariants of degree at most d, canonical echelon form.
pub fn invariant_basis(alg: &AlgRef, space: InvSpace, d: usize, bound: usize) -> Result<InvariantBasis> {
    if d > bound {
        return Err(Error::DegreeBound {
            requested: d,
            bound,
        });
    }
    let field = alg.base.clone();
    let graded = !matches!(space, InvSpace::WDotInv);
    let ambient = match space {
        InvSpace::GInv | InvSpace::LieInv => Ambient::G,
        _ => Ambient::T,
    };
    let nvars = PolyElt::nvars(alg, ambient);

    let mut all_monos: Vec<Vec<u32>> = vec![];
    let mut kernel_rows: Vec<Vec<Fq>> = vec![];

    let degree_blocks: Vec<Vec<usize>> = if graded {
        (0..=d).map(|k| vec![k]).collect()
    } else {
        vec![(0..=d).collect()]
    };

    for block in degree_blocks {
        // candidate monomials for this block
        let mut monos: Vec<Vec<u32>> = block
            .iter()
            .flat_map(|&k| monomials_of_degree(nvars, k))
            .collect();
        if space == InvSpace::GInv {
            monos.retain(|e| alg.monomial_weight(e).iter().all(|&w| w == 0));
        }
        if monos.is_empty() {
            continue;
        }
        // condition rows: images of an unknown combination must vanish
        let mut rows: Vec<Vec<Fq>> = vec![];
        let mut add_condition = |images: Vec<PolyElt>| -> Result<()> {
            // collect the union of image monomials
            let mut all: std::collections::BTreeSet<Vec<u32>> = Default::default();
            for img in &images {
                for e in img.terms.keys() {
                    all.insert(e.clone());
                }
            }
            for target in all {
                let row: Vec<Fq> = images
                    .iter()
                    .map(|img| img.terms.get(&target).cloned().unwrap_or(Fq::zero(&field)))
                    .collect();
                rows.push(row);
            }
            Ok(())
        };
        match space {
            InvSpace::LieInv => {
                for i in 0..alg.dim {
                    let images: Vec<PolyElt> = monos
                        .iter()
                        .map(|e| {
                            derivation_act(
                                i,
                                &PolyElt::monomial(alg, ambient, e.clone(), Fq::one(&field)),
                            )
                        })
                        .collect::<Result<_>>()?;
                    add_condition(images)?;
                }
            }
            InvSpace::GInv => {
                let dmax = block.iter().max().copied().unwrap_or(0);
                for sp in 0..alg.datum.simple.len() {
                    for sign in 0..2 {
                        let maxstep = alg.divided[2 * sp + sign].len() - 1;
                        for m in 1..=dmax * maxstep.max(1) {
                            let images: Vec<PolyElt> = monos
                                .iter()
                                .map(|e| {
                                    divided_power_sym(
                                        &PolyElt::monomial(
                                            alg,
                                            ambient,
                                            e.clone(),
                                            Fq::one(&field),
                                        ),
                                        sp,
                                        sign,
                                        m,
                                    )
                                })
                                .collect::<Result<_>>()?;
                            add_condition(images)?;
                        }
                    }
                }
            }
            InvSpace::WInv | InvSpace::WDotInv => {
                let mode = if space == InvSpace::WInv {
                    WeylMode::Ordinary
                } else {
                    WeylMode::Dot
                };
                for gi in 0..alg.datum.simple.len() {
                    let widx = alg
                        .datum
                        .weyl
                        .iter()
                        .position(|w| w.word == vec![gi])
                        .expect("generator present");
                    let images: Vec<PolyElt> = monos
                        .iter()
                        .map(|e| {
                            let mono =
                                PolyElt::monomial(alg, ambient, e.clone(), Fq::one(&field));
                            Ok(weyl_poly_act(&mono, widx, mode)?.sub(&mono)?)
                        })
                        .collect::<Result<_>>()?;
                    add_condition(images)?;
                }
            }
        }
        let kernel = if rows.is_empty() {
            // no conditions: everything invariant
            (0..monos.len())
                .map(|k| {
                    let mut v = vec![Fq::zero(&field); monos.len()];
                    v[k] = Fq::one(&field);
                    v
                })
                .collect()
        } else {
            Mat::from_rows(&field, rows).kernel_basis()
        };
        let offset = all_monos.len();
        all_monos.extend(monos.iter().cloned());
        for v in kernel {
            let mut row = vec![Fq::zero(&field); offset];
            row.extend(v);
            kernel_rows.push(row);
        }
    }

    // pad rows to the full width and echelonize canonically
    let width = all_monos.len();
    for r in kernel_rows.iter_mut() {
        r.resize(width, Fq::zero(&field));
    }
    let mut basis_mat = Mat::from_rows(&field, kernel_rows);
    let piv = basis_mat.rref();
    let mut echelon = vec![];
    let mut basis = vec![];
    for r in 0..piv.len() {
        let row: Vec<Fq> = (0..width).map(|c| basis_mat.at(r, c).clone()).collect();
        basis.push(poly_from_coords(alg, ambient, &all_monos, &row, &field));
        echelon.push(row);
    }
    Ok(InvariantBasis {
        space,
        degree: d,
        basis,
        monomials: all_monos,
        echelon,
    })
}

impl InvariantBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn serialize_json(&self) -> serde_json::Value {
        serde_json::json!({
            "space": self.space.tag(),
            "degree": self.degree,
            "dim": self.dim(),
            "monomials": self.monomials,
            "echelon": self.echelon.iter().map(|r| {
                r.iter().map(|c| c.serialize_str()).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        })
    }
}

/// Verify ordinary W-invariance of an element of S(t).
pub fn is_w_invariant(s: &PolyElt, mode: WeylMode) -> Result<bool> {
    for gi in 0..s.alg.datum.simple.len() {
        let widx = s
            .alg
            .datum
            .weyl
            .iter()
            .position(|w| w.word == vec![gi])
            .expect("generator present");
        if weyl_poly_act(s, widx, mode)? != *s {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The unique G-invariant preimage under the restriction map, of degree at
/// most the degree of sigma.
pub fn phi_inverse(sigma: &PolyElt, bound: usize) -> Result<PolyElt> {
    if sigma.ambient != Ambient::T {
        return Err(Error::Precondition("phi_inverse expects an element of S(t)".into()));
    }
    if !is_w_invariant(sigma, WeylMode::Ordinary)? {
        return Err(Error::NotInvariant(format!(
            "not W-invariant: {}",
            sigma.display()
        )));
    }
    let alg = sigma.alg.clone();
    let d = sigma.degree().unwrap_or(0);
    let inv = invariant_basis(&alg, InvSpace::GInv, d, bound)?;
    let monos = monomials_up_to(alg.rank, d);
    let field = sigma.field.clone();
    let mut cols = vec![];
    for b in &inv.basis {
        let fb = phi_restrict(&b.to_field(&field)?)?;
        cols.push(coords_of_poly(&fb, &monos, &field)?);
    }
    let target = coords_of_poly(sigma, &monos, &field)?;
    let rows = monos.len();
    let mut m = Mat::zero(&field, rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            m.set(i, j, v.clone());
        }
    }
    let x = m.solve(&target).ok_or_else(|| {
        Error::RestrictionViolation(format!(
            "no G-invariant preimage of {} at degree {}",
            sigma.display(),
            d
        ))
    })?;
    let mut out = PolyElt::zero(&alg, Ambient::G, &field);
    for (c, b) in x.iter().zip(&inv.basis) {
        if !c.is_zero() {
            out = out.add(&b.to_field(&field)?.scale(c)?)?;
        }
    }
    // exactness check
    let back = phi_restrict(&out)?;
    if back != *sigma {
        return Err(Error::RestrictionViolation(
            "preimage restriction mismatch".into(),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::liealg::{build_algebra, AlgebraKind};

    fn sl2(p: u64) -> AlgRef {
        build_algebra(AlgebraKind::Sl(2), p).unwrap()
    }

    fn hvar(alg: &AlgRef) -> PolyElt {
        PolyElt::var(alg, Ambient::T, 0, &alg.base)
    }

    #[test]
    fn phi_kills_non_cartan() {
        let alg = sl2(5);
        let f = &alg.base;
        // 4ef + h^2 restricts to h^2
        let mut s = PolyElt::zero(&alg, Ambient::G, f);
        let mut e = vec![0u32; 3];
        e[alg.e_index(0)] = 1;
        e[alg.f_index(0)] = 1;
        s.terms.insert(e, Fq::from_int(f, 4));
        let mut h2 = vec![0u32; 3];
        h2[alg.h_index(0)] = 2;
        s.terms.insert(h2, Fq::one(f));
        let r = phi_restrict(&s).unwrap();
        assert_eq!(r.display(), "h1^2");

        let evar = PolyElt::var(&alg, Ambient::G, alg.e_index(0), f);
        assert!(phi_restrict(&evar).unwrap().is_zero());
        let h3 = PolyElt::var(&alg, Ambient::G, alg.h_index(0), f)
            .pow(3)
            .unwrap();
        assert_eq!(phi_restrict(&h3).unwrap().degree(), Some(3));
    }

    #[test]
    fn weyl_dot_action_on_h() {
        let alg = sl2(3);
        let h = hvar(&alg);
        let s = alg
            .datum
            .weyl
            .iter()
            .position(|w| w.word == vec![0])
            .unwrap();
        let ordinary = weyl_poly_act(&h, s, WeylMode::Ordinary).unwrap();
        assert_eq!(ordinary, h.neg());
        let dot = weyl_poly_act(&h, s, WeylMode::Dot).unwrap();
        // s . h = -h - 2
        let expect = h
            .neg()
            .sub(&PolyElt::constant(&alg, Ambient::T, Fq::from_int(&alg.base, 2)))
            .unwrap();
        assert_eq!(dot, expect);
        // (h+1)^2 is a dot fixed point
        let hp1 = h
            .add(&PolyElt::one(&alg, Ambient::T, &alg.base))
            .unwrap()
            .pow(2)
            .unwrap();
        assert_eq!(weyl_poly_act(&hp1, s, WeylMode::Dot).unwrap(), hp1);
    }

    #[test]
    fn gamma_shift_examples() {
        let alg = sl2(3);
        let h = hvar(&alg);
        let hp1 = h.add(&PolyElt::one(&alg, Ambient::T, &alg.base)).unwrap();
        let g = gamma_shift(&hp1.pow(2).unwrap(), true).unwrap();
        assert_eq!(g, h.pow(2).unwrap());
        // gamma . gamma^{-1} = id on a sample of low-degree elements
        for k in 0..4usize {
            let s = hp1.pow(k).unwrap();
            let back = gamma_shift(&gamma_shift(&s, false).unwrap(), true).unwrap();
            assert_eq!(back, s);
        }
        // gamma intertwines: gamma(s.x) = s(gamma(x)) for x = h^2
        let sidx = alg
            .datum
            .weyl
            .iter()
            .position(|w| w.word == vec![0])
            .unwrap();
        let x = h.pow(2).unwrap();
        let lhs = gamma_shift(&weyl_poly_act(&x, sidx, WeylMode::Dot).unwrap(), true).unwrap();
        let rhs = weyl_poly_act(&gamma_shift(&x, true).unwrap(), sidx, WeylMode::Ordinary).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn invariant_bases_sl2() {
        let alg = sl2(5);
        let w = invariant_basis(&alg, InvSpace::WInv, 2, 8).unwrap();
        assert_eq!(w.dim(), 2); // 1 and h^2
        let wd = invariant_basis(&alg, InvSpace::WDotInv, 2, 8).unwrap();
        assert_eq!(wd.dim(), 2); // 1 and (h+1)^2
        // gamma maps the dot invariants onto the ordinary invariants
        for b in &wd.basis {
            let g = gamma_shift(b, true).unwrap();
            assert!(is_w_invariant(&g, WeylMode::Ordinary).unwrap());
        }
        let gi = invariant_basis(&alg, InvSpace::GInv, 2, 8).unwrap();
        assert_eq!(gi.dim(), 2); // 1 and 4ef + h^2
        // the nontrivial one restricts to h^2 up to scalar
        let q = &gi.basis[1];
        let r = phi_restrict(q).unwrap();
        assert_eq!(r.degree(), Some(2));
    }

    #[test]
    fn phi_inverse_examples() {
        let alg = sl2(5);
        let h2 = hvar(&alg).pow(2).unwrap();
        let q = phi_inverse(&h2, 8).unwrap();
        // q = 4ef + h^2: check the e,f coefficient
        let mut ef = vec![0u32; 3];
        ef[alg.e_index(0)] = 1;
        ef[alg.f_index(0)] = 1;
        assert_eq!(q.terms.get(&ef), Some(&Fq::from_int(&alg.base, 4)));
        let one = PolyElt::one(&alg, Ambient::T, &alg.base);
        assert_eq!(phi_inverse(&one, 8).unwrap(), PolyElt::one(&alg, Ambient::G, &alg.base));

        // linearity over F_3: phi^{-1}(-h^2) = -(ef + h^2)
        let alg3 = sl2(3);
        let mh2 = PolyElt::var(&alg3, Ambient::T, 0, &alg3.base)
            .pow(2)
            .unwrap()
            .neg();
        let q3 = phi_inverse(&mh2, 8).unwrap();
        let mut ef = vec![0u32; 3];
        ef[alg3.e_index(0)] = 1;
        ef[alg3.f_index(0)] = 1;
        assert_eq!(q3.terms.get(&ef), Some(&Fq::from_int(&alg3.base, -1)));
    }

    #[test]
    fn phi_inverse_rejects_non_invariant() {
        let alg = sl2(5);
        let h = hvar(&alg);
        assert!(matches!(
            phi_inverse(&h, 8),
            Err(Error::NotInvariant(_))
        ));
    }

    #[test]
    fn phi_multiplicative_on_monomials() {
        let alg = sl2(3);
        let f = &alg.base;
        for e1 in monomials_up_to(3, 2) {
            for e2 in monomials_up_to(3, 2) {
                let m1 = PolyElt::monomial(&alg, Ambient::G, e1.clone(), Fq::one(f));
                let m2 = PolyElt::monomial(&alg, Ambient::G, e2.clone(), Fq::one(f));
                let lhs = phi_restrict(&m1.mul(&m2).unwrap()).unwrap();
                let rhs = phi_restrict(&m1)
                    .unwrap()
                    .mul(&phi_restrict(&m2).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn restriction_dimension_match_low_degree() {
        let alg = sl2(3);
        for d in 0..=4 {
            let a = invariant_basis(&alg, InvSpace::GInv, d, 8).unwrap();
            let b = invariant_basis(&alg, InvSpace::WInv, d, 8).unwrap();
            assert_eq!(a.dim(), b.dim(), "degree {d}");
        }
    }

    #[test]
    fn evaluation_over_extension() {
        let alg = sl2(3);
        let f9 = FieldSpec::new(3, 2).unwrap();
        let t = Fq::from_coeffs(&f9, vec![0, 1]).unwrap();
        let h2 = hvar(&alg).pow(2).unwrap();
        assert_eq!(h2.evaluate(&[t.clone()]).unwrap(), t.mul(&t));
    }

    #[test]
    fn degree_bound_guard() {
        let alg = sl2(3);
        assert!(matches!(
            invariant_basis(&alg, InvSpace::WInv, 9, 8),
            Err(Error::DegreeBound { .. })
        ));
    }
}

//! Univariate polynomials over F_{p^m}: just enough for separable parts,
//! root finding and small identity checks.

use crate::field::{FieldRef, Fq};

/// Coefficients ascending; canonical form has a nonzero last entry or is empty.
#[derive(Debug, Clone, PartialEq)]
pub struct UPoly {
    pub field: FieldRef,
    pub coeffs: Vec<Fq>,
}

impl UPoly {
    pub fn new(field: &FieldRef, mut coeffs: Vec<Fq>) -> UPoly {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &FieldRef) -> UPoly {
        UPoly::new(field, vec![])
    }

    pub fn one(field: &FieldRef) -> UPoly {
        UPoly::new(field, vec![Fq::one(field)])
    }

    pub fn x(field: &FieldRef) -> UPoly {
        UPoly::new(field, vec![Fq::zero(field), Fq::one(field)])
    }

    pub fn constant(c: Fq) -> UPoly {
        let f = c.spec().clone();
        UPoly::new(&f, vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn add(&self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let z = Fq::zero(&self.field);
        let coeffs = (0..n)
            .map(|i| {
                self.coeffs
                    .get(i)
                    .unwrap_or(&z)
                    .add(rhs.coeffs.get(i).unwrap_or(&z))
            })
            .collect();
        UPoly::new(&self.field, coeffs)
    }

    pub fn sub(&self, rhs: &UPoly) -> UPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> UPoly {
        UPoly::new(&self.field, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn mul(&self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero(&self.field);
        }
        let mut out = vec![Fq::zero(&self.field); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        UPoly::new(&self.field, out)
    }

    pub fn scale(&self, c: &Fq) -> UPoly {
        UPoly::new(&self.field, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn pow(&self, e: usize) -> UPoly {
        let mut acc = UPoly::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// (quotient, remainder) for division by a nonzero polynomial.
    pub fn divmod(&self, rhs: &UPoly) -> (UPoly, UPoly) {
        assert!(!rhs.is_zero());
        let mut rem = self.clone();
        let mut quo = vec![Fq::zero(&self.field); self.coeffs.len()];
        let db = rhs.degree().unwrap();
        let lead_inv = rhs.coeffs[db].inv().expect("nonzero lead");
        while let Some(dr) = rem.degree() {
            if dr < db {
                break;
            }
            let c = rem.coeffs[dr].mul(&lead_inv);
            quo[dr - db] = c.clone();
            let mut shifted = vec![Fq::zero(&self.field); dr - db];
            shifted.extend(rhs.coeffs.iter().map(|a| a.mul(&c)));
            rem = rem.sub(&UPoly::new(&self.field, shifted));
        }
        (UPoly::new(&self.field, quo), rem)
    }

    pub fn gcd(&self, rhs: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        if let Some(d) = a.degree() {
            let inv = a.coeffs[d].inv().expect("nonzero lead");
            a = a.scale(&inv);
        }
        a
    }

    pub fn derivative(&self) -> UPoly {
        if self.coeffs.len() <= 1 {
            return UPoly::zero(&self.field);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul_int(i as i64))
            .collect();
        UPoly::new(&self.field, coeffs)
    }

    pub fn eval(&self, x: &Fq) -> Fq {
        let mut acc = Fq::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Monic product of the distinct irreducible factors. Perfect base
    /// field, so p-th power parts are peeled off with coefficient p-th roots.
    pub fn separable_part(&self) -> UPoly {
        assert!(!self.is_zero());
        let p = self.field.p as usize;
        let d = self.derivative();
        if d.is_zero() {
            // f = g(x^p); take the p-th root of each surviving coefficient
            let mut inner = vec![];
            for (i, c) in self.coeffs.iter().enumerate() {
                if i % p == 0 {
                    inner.push(c.frobenius(crate::field::FrobDir::Inv));
                } else {
                    assert!(c.is_zero(), "derivative zero forces p-power gaps");
                }
            }
            return UPoly::new(&self.field, inner).separable_part();
        }
        let g = self.gcd(&d);
        if g.degree() == Some(0) {
            let lead = self.coeffs.last().unwrap().inv().expect("nonzero lead");
            return self.scale(&lead);
        }
        // w carries each factor with multiplicity not divisible by p once;
        // the rest still hides inside g.
        let (w, r) = self.divmod(&g);
        debug_assert!(r.is_zero());
        let gs = g.separable_part();
        let ws = w.separable_part();
        let common = ws.gcd(&gs);
        let (extra, r2) = gs.divmod(&common);
        debug_assert!(r2.is_zero());
        ws.mul(&extra)
    }

    /// All roots in the coefficient field, sorted in enumeration order.
    pub fn roots_in_field(&self) -> Vec<Fq> {
        let mut out: Vec<Fq> = crate::field::enumerate_field(&self.field)
            .expect("guarded field size")
            .into_iter()
            .filter(|x| self.eval(x).is_zero())
            .collect();
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    #[test]
    fn separable_part_strips_multiplicity() {
        let f = FieldSpec::new(3, 1).unwrap();
        let x = UPoly::x(&f);
        let one = UPoly::one(&f);
        // (x-1)^3 (x+1) has derivative-degenerate factor structure at p = 3
        let g = x.sub(&one).pow(3).mul(&x.add(&one));
        let s = g.separable_part();
        let expect = x.sub(&one).mul(&x.add(&one));
        assert_eq!(s, expect);
    }

    #[test]
    fn pure_p_power() {
        let f = FieldSpec::new(3, 2).unwrap();
        let a = Fq::from_coeffs(&f, vec![0, 1]).unwrap();
        // (x - a)^3 = x^3 - a^3, derivative zero
        let x = UPoly::x(&f);
        let g = x.sub(&UPoly::constant(a.clone())).pow(3);
        assert!(g.derivative().is_zero());
        assert_eq!(g.separable_part(), x.sub(&UPoly::constant(a)));
    }

    #[test]
    fn roots() {
        let f = FieldSpec::new(5, 1).unwrap();
        let x = UPoly::x(&f);
        let g = x.pow(2).sub(&UPoly::constant(Fq::from_int(&f, 4)));
        let roots = g.roots_in_field();
        assert_eq!(roots, vec![Fq::from_int(&f, 2), Fq::from_int(&f, 3)]);
    }
}

//! Integral structure constants for a simple root system, generated from its
//! Cartan data with the extraspecial-pair sign convention. Used directly for
//! the rank-2 exceptional type and as a cross-check for the matrix
//! realizations.

use crate::rat::Rat;
use std::collections::HashMap;

/// A root system built from the Gram matrix of the simple roots.
pub struct ChevSystem {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates, ordered by (height, lex).
    pub pos: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    /// N[(a, b)] for positive-root index pairs with pos[a] + pos[b] a root.
    ntable: HashMap<(usize, usize), i64>,
}

/// A root as a signed index into the positive list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SRoot {
    pub idx: usize,
    pub positive: bool,
}

impl ChevSystem {
    pub fn new(gram: Vec<Vec<i64>>) -> ChevSystem {
        let rank = gram.len();
        let mut sys = ChevSystem {
            rank,
            gram,
            pos: vec![],
            index: HashMap::new(),
            ntable: HashMap::new(),
        };
        sys.generate_roots();
        sys.fill_ntable();
        sys
    }

    fn ip(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += a[i] * self.gram[i][j] * b[j];
            }
        }
        s
    }

    fn height(v: &[i64]) -> i64 {
        v.iter().sum()
    }

    fn simple(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0i64; self.rank];
        v[i] = 1;
        v
    }

    pub fn is_root(&self, v: &[i64]) -> Option<SRoot> {
        if let Some(&i) = self.index.get(v) {
            return Some(SRoot {
                idx: i,
                positive: true,
            });
        }
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        self.index.get(&neg).map(|&i| SRoot {
            idx: i,
            positive: false,
        })
    }

    fn generate_roots(&mut self) {
        let mut pos: Vec<Vec<i64>> = (0..self.rank).map(|i| self.simple(i)).collect();
        let mut seen: HashMap<Vec<i64>, ()> = pos.iter().cloned().map(|v| (v, ())).collect();
        let mut head = 0;
        while head < pos.len() {
            let beta = pos[head].clone();
            head += 1;
            for i in 0..self.rank {
                let alpha = self.simple(i);
                if beta == alpha {
                    continue;
                }
                // p = steps down the alpha-string through beta
                let mut p = 0i64;
                loop {
                    let down: Vec<i64> = beta
                        .iter()
                        .zip(&alpha)
                        .map(|(b, a)| b - (p + 1) * a)
                        .collect();
                    if seen.contains_key(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pairing = 2 * self.ip(&beta, &alpha) / self.ip(&alpha, &alpha);
                if p - pairing >= 1 {
                    let up: Vec<i64> = beta.iter().zip(&alpha).map(|(b, a)| b + a).collect();
                    if !seen.contains_key(&up) {
                        seen.insert(up.clone(), ());
                        pos.push(up);
                    }
                }
            }
        }
        pos.sort_by(|a, b| (Self::height(a), a.clone()).cmp(&(Self::height(b), b.clone())));
        self.index = pos
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        self.pos = pos;
    }

    fn root_vec(&self, r: SRoot) -> Vec<i64> {
        let v = &self.pos[r.idx];
        if r.positive {
            v.clone()
        } else {
            v.iter().map(|x| -x).collect()
        }
    }

    /// Max k with beta - k*alpha a root (the down-string length).
    fn string_down(&self, alpha: &[i64], beta: &[i64]) -> i64 {
        let mut k = 0i64;
        loop {
            let v: Vec<i64> = beta
                .iter()
                .zip(alpha)
                .map(|(b, a)| b - (k + 1) * a)
                .collect();
            if v.iter().all(|&x| x == 0) || self.is_root(&v).is_none() {
                return k;
            }
            k += 1;
        }
    }

    fn fill_ntable(&mut self) {
        // special pairs grouped by their sum, sums processed by index order
        // (index order refines height order)
        let n = self.pos.len();
        let mut by_sum: Vec<Vec<(usize, usize)>> = vec![vec![]; n];
        for a in 0..n {
            for b in a + 1..n {
                let sum: Vec<i64> = self.pos[a]
                    .iter()
                    .zip(&self.pos[b])
                    .map(|(x, y)| x + y)
                    .collect();
                if let Some(&s) = self.index.get(&sum) {
                    by_sum[s].push((a, b));
                }
            }
        }
        for s in 0..n {
            let mut pairs = by_sum[s].clone();
            pairs.sort();
            for (k, &(a, b)) in pairs.iter().enumerate() {
                if k == 0 {
                    // extraspecial pair
                    let p = self.string_down(&self.pos[a], &self.pos[b]);
                    self.ntable.insert((a, b), p + 1);
                } else {
                    let (ea, eb) = pairs[0];
                    let v = self.derive_n(ea, eb, a, b, s);
                    self.ntable.insert((a, b), v);
                }
            }
        }
    }

    /// N_{gamma,delta} from the extraspecial pair (alpha, beta) with the same
    /// sum, via the four-root identity.
    fn derive_n(&self, ea: usize, eb: usize, g: usize, d: usize, sum: usize) -> i64 {
        let alpha = SRoot {
            idx: ea,
            positive: true,
        };
        let beta = SRoot {
            idx: eb,
            positive: true,
        };
        let ng = SRoot {
            idx: g,
            positive: false,
        };
        let nd = SRoot {
            idx: d,
            positive: false,
        };
        let eps = &self.pos[sum];
        let eps_len = Rat::int(self.ip(eps, eps) as i128);
        let t2 = self.pair_term(beta, ng, alpha, nd);
        let t3 = self.pair_term(ng, alpha, beta, nd);
        let nab = Rat::int(self.n_pos(ea, eb) as i128);
        let val = eps_len.mul(&t2.add(&t3)).div(&nab);
        val.as_integer().expect("structure constant must be integral")
    }

    /// N(x,y) * N(z,w) / (x + y, x + y), zero when x + y is not a root.
    fn pair_term(&self, x: SRoot, y: SRoot, z: SRoot, w: SRoot) -> Rat {
        let vx = self.root_vec(x);
        let vy = self.root_vec(y);
        let sum: Vec<i64> = vx.iter().zip(&vy).map(|(a, b)| a + b).collect();
        if sum.iter().all(|&v| v == 0) || self.is_root(&sum).is_none() {
            return Rat::zero();
        }
        let nf = Rat::int((self.n(x, y) * self.n(z, w)) as i128);
        nf.div(&Rat::int(self.ip(&sum, &sum) as i128))
    }

    fn n_pos(&self, a: usize, b: usize) -> i64 {
        if a == b {
            return 0;
        }
        if a < b {
            *self.ntable.get(&(a, b)).unwrap_or(&0)
        } else {
            -*self.ntable.get(&(b, a)).unwrap_or(&0)
        }
    }

    /// N(x, y) for arbitrary signed roots with x + y a root.
    pub fn n(&self, x: SRoot, y: SRoot) -> i64 {
        let vx = self.root_vec(x);
        let vy = self.root_vec(y);
        let sum: Vec<i64> = vx.iter().zip(&vy).map(|(a, b)| a + b).collect();
        if sum.iter().all(|&v| v == 0) || self.is_root(&sum).is_none() {
            return 0;
        }
        match (x.positive, y.positive) {
            (true, true) => self.n_pos(x.idx, y.idx),
            (false, false) => -self.n(
                SRoot {
                    idx: x.idx,
                    positive: true,
                },
                SRoot {
                    idx: y.idx,
                    positive: true,
                },
            ),
            (false, true) => -self.n(y, x),
            (true, false) => {
                // x positive, y = -u with u positive, s = x - u
                let u = &self.pos[y.idx];
                let xv = &vx;
                let s: Vec<i64> = xv.iter().zip(u).map(|(a, b)| a - b).collect();
                let sr = self.is_root(&s).expect("difference is a root here");
                if sr.positive {
                    // N(x,-u) = (s,s) N(s,u) / (x,x)
                    let nsu = self.n_pos(sr.idx, y.idx);
                    let val = Rat::int((self.ip(&s, &s) * nsu) as i128)
                        .div(&Rat::int(self.ip(xv, xv) as i128));
                    val.as_integer().expect("integral")
                } else {
                    // t = u - x positive: N(x,-u) = (t,t) N(t,x) / (u,u)
                    let t: Vec<i64> = s.iter().map(|v| -v).collect();
                    let tr = self.is_root(&t).expect("t is a positive root");
                    debug_assert!(tr.positive);
                    let ntx = self.n_pos(tr.idx, x.idx);
                    let val = Rat::int((self.ip(&t, &t) * ntx) as i128)
                        .div(&Rat::int(self.ip(u, u) as i128));
                    val.as_integer().expect("integral")
                }
            }
        }
    }

    /// Coroot of a positive root in simple-coroot coordinates.
    pub fn coroot(&self, idx: usize) -> Vec<i64> {
        let beta = &self.pos[idx];
        let bb = self.ip(beta, beta);
        (0..self.rank)
            .map(|i| {
                let ai = self.simple(i);
                let v = beta[i] as i128 * self.ip(&ai, &ai) as i128;
                assert!(v % bb as i128 == 0, "coroot coordinates must be integral");
                (v / bb as i128) as i64
            })
            .collect()
    }

    /// Value of the root on the coroot basis element h_i.
    pub fn value_on_coroot(&self, beta: &[i64], i: usize) -> i64 {
        let ai = self.simple(i);
        2 * self.ip(beta, &ai) / self.ip(&ai, &ai)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_matches_matrix_realization() {
        // all simple roots length 2, angle 120 degrees
        let sys = ChevSystem::new(vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(sys.pos.len(), 3);
        let a1 = SRoot {
            idx: 0,
            positive: true,
        };
        let a2 = SRoot {
            idx: 1,
            positive: true,
        };
        assert_eq!(sys.n(a1, a2), 1); // [E12, E23] = E13
        let sum = SRoot {
            idx: 2,
            positive: true,
        };
        let na1 = SRoot {
            idx: 0,
            positive: false,
        };
        let na2 = SRoot {
            idx: 1,
            positive: false,
        };
        // [E13, E21] = -E23 and [E32, E13] = -E12
        assert_eq!(sys.n(sum, na1), -1);
        assert_eq!(sys.n(na2, sum), -1);
        assert_eq!(sys.n(na1, na2), -1);
    }

    #[test]
    fn g2_has_six_positive_roots() {
        let sys = ChevSystem::new(vec![vec![2, -3], vec![-3, 6]]);
        assert_eq!(sys.pos.len(), 6);
        let heights: Vec<i64> = sys.pos.iter().map(|v| v.iter().sum()).collect();
        assert_eq!(heights, vec![1, 1, 2, 3, 4, 5]);
        // the highest root is 3a1 + 2a2
        assert_eq!(sys.pos[5], vec![3, 2]);
        // coroots are integral by construction; spot check the long simple root
        assert_eq!(sys.coroot(0), vec![0, 1]);
    }
}

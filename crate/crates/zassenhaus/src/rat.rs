//! Minimal exact rational arithmetic for integral structure-constant work.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rat {
    pub num: i128,
    pub den: i128, // > 0
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rat {
    pub fn new(num: i128, den: i128) -> Rat {
        assert!(den != 0);
        let s = if den < 0 { -1 } else { 1 };
        let g = gcd(num, den).max(1);
        Rat {
            num: s * num / g,
            den: s * den / g,
        }
    }

    pub fn int(n: i128) -> Rat {
        Rat { num: n, den: 1 }
    }

    pub fn zero() -> Rat {
        Rat::int(0)
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn add(&self, o: &Rat) -> Rat {
        Rat::new(self.num * o.den + o.num * self.den, self.den * o.den)
    }

    pub fn sub(&self, o: &Rat) -> Rat {
        Rat::new(self.num * o.den - o.num * self.den, self.den * o.den)
    }

    pub fn mul(&self, o: &Rat) -> Rat {
        Rat::new(self.num * o.num, self.den * o.den)
    }

    pub fn div(&self, o: &Rat) -> Rat {
        assert!(o.num != 0);
        Rat::new(self.num * o.den, self.den * o.num)
    }

    pub fn as_integer(&self) -> Option<i64> {
        if self.den == 1 {
            i64::try_from(self.num).ok()
        } else {
            None
        }
    }
}

/// Solve A x = b exactly over the rationals (A given by integer rows).
/// Returns None when inconsistent.
pub fn solve_rational(a_rows: &[Vec<i64>], b: &[i64]) -> Option<Vec<Rat>> {
    let rows = a_rows.len();
    let cols = a_rows.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Rat>> = a_rows
        .iter()
        .zip(b)
        .map(|(r, &bv)| {
            let mut row: Vec<Rat> = r.iter().map(|&v| Rat::int(v as i128)).collect();
            row.push(Rat::int(bv as i128));
            row
        })
        .collect();
    let mut pivots = vec![];
    let mut rr = 0;
    for c in 0..cols {
        let Some(pr) = (rr..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rr, pr);
        let inv = m[rr][c];
        for x in m[rr].iter_mut() {
            *x = x.div(&inv);
        }
        for i in 0..rows {
            if i != rr && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..=cols {
                    m[i][j] = m[i][j].sub(&f.mul(&m[rr][j]));
                }
            }
        }
        pivots.push(c);
        rr += 1;
    }
    for row in m.iter().skip(rr) {
        if !row[cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); cols];
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = m[i][cols];
    }
    Some(x)
}

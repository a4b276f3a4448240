//! Minimal double-double arithmetic for phases of widely spread lattice shifts.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const TWO_PI: [f64; 3] = [std::f64::consts::TAU, 2.449_293_598_294_706_4e-16, -5.989_539_619_436_679e-33];

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn norm(hi: f64, lo: f64) -> Dd {
        let (s, e) = two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        Dd::norm(s, e + self.lo + o.lo)
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        Dd::norm(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    pub fn mul_f64(self, x: f64) -> Dd {
        let (p, e) = two_prod(self.hi, x);
        Dd::norm(p, e + self.lo * x)
    }

    pub fn recip(self) -> Dd {
        let q = 1.0 / self.hi;
        // one Newton step: q + q (1 - self q)
        let r = Dd::ONE.add(self.mul_f64(q).mul_f64(-1.0));
        Dd::from_f64(q).add(r.mul_f64(q))
    }

    /// `self^n` for any integer `n` by repeated squaring.
    pub fn powi(self, n: i64) -> Dd {
        let base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Dd::ONE;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(b);
            }
            b = b.mul(b);
            e >>= 1;
        }
        acc
    }

    /// `cos(self)` with the argument reduced modulo 2 pi in extended precision.
    pub fn cos(self) -> f64 {
        let r = self.rem_two_pi();
        r.hi.cos() - r.hi.sin() * r.lo
    }

    /// `sin(self)` with the argument reduced modulo 2 pi in extended precision.
    pub fn sin(self) -> f64 {
        let r = self.rem_two_pi();
        r.hi.sin() + r.hi.cos() * r.lo
    }

    fn rem_two_pi(self) -> Dd {
        let n = (self.hi / TWO_PI[0]).round();
        if n == 0.0 {
            return self;
        }
        let (p0, e0) = two_prod(n, TWO_PI[0]);
        let (p1, e1) = two_prod(n, TWO_PI[1]);
        let p2 = n * TWO_PI[2];
        let (s, e) = two_sum(self.hi, -p0);
        let mut r = Dd::norm(s, e);
        r = r.add(Dd { hi: self.lo - e0, lo: 0.0 });
        r = r.add(Dd { hi: -p1, lo: -e1 - p2 });
        r
    }
}

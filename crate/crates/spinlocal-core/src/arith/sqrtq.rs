use super::laurent::Coeff;
use super::{rat_to_string, Rat};
use num::{One, Zero};
use std::fmt;

/// a + b·s with s² = q. `q == 0` marks a plain rational that adopts the
/// q of whatever it is combined with.
#[derive(Clone, PartialEq, Eq)]
pub struct SqrtQ {
    pub q: u64,
    pub a: Rat,
    pub b: Rat,
}

impl SqrtQ {
    pub fn new(q: u64, a: Rat, b: Rat) -> Self {
        let q = if b.is_zero() && q == 0 { 0 } else { q };
        SqrtQ { q, a, b }
    }

    pub fn rational(a: Rat) -> Self {
        SqrtQ { q: 0, a, b: Rat::zero() }
    }

    /// The distinguished square root s of q.
    pub fn sqrt_q(q: u64) -> Self {
        SqrtQ { q, a: Rat::zero(), b: Rat::one() }
    }

    fn join(&self, o: &Self) -> u64 {
        match (self.q, o.q) {
            (0, x) | (x, 0) => x,
            (x, y) => {
                assert_eq!(x, y, "mixed square-root fields");
                x
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        SqrtQ { q: self.join(o), a: &self.a + &o.a, b: &self.b + &o.b }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        SqrtQ { q: self.q, a: -&self.a, b: -&self.b }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let q = self.join(o);
        let qr = Rat::from_integer(q.into());
        SqrtQ {
            q,
            a: &self.a * &o.a + &self.b * &o.b * qr,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }

    pub fn conj(&self) -> Self {
        SqrtQ { q: self.q, a: self.a.clone(), b: -&self.b }
    }

    /// a² − q b², a rational.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - &self.b * &self.b * Rat::from_integer(self.q.into())
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(SqrtQ { q: self.q, a: c.a / &n, b: c.b / n })
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv().expect("inverse of zero") } else { self.clone() };
        let mut r = SqrtQ::rational(Rat::one());
        for _ in 0..e.unsigned_abs() {
            r = r.mul(&base);
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl fmt::Debug for SqrtQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·√{}", rat_to_string(&self.a), rat_to_string(&self.b), self.q)
    }
}

impl Coeff for SqrtQ {
    fn c_zero() -> Self {
        SqrtQ::rational(Rat::zero())
    }
    fn c_one() -> Self {
        SqrtQ::rational(Rat::one())
    }
    fn c_is_zero(&self) -> bool {
        SqrtQ::is_zero(self)
    }
    fn c_add(&self, o: &Self) -> Self {
        SqrtQ::add(self, o)
    }
    fn c_mul(&self, o: &Self) -> Self {
        SqrtQ::mul(self, o)
    }
    fn c_neg(&self) -> Self {
        SqrtQ::neg(self)
    }
    fn c_from_rat(r: &Rat) -> Self {
        SqrtQ::rational(r.clone())
    }
}

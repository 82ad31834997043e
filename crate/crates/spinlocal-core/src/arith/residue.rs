use super::{inv_mod, ipow, modp, val_int};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Element of ℤ/pⁿ, stored as a representative in [0, pⁿ).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueInt {
    pub value: i128,
    pub p: u64,
    pub n: u32,
}

impl ResidueInt {
    pub fn new(value: i128, p: u64, n: u32) -> Self {
        ResidueInt { value: modp(value, ipow(p, n)), p, n }
    }

    pub fn zero(p: u64, n: u32) -> Self {
        Self::new(0, p, n)
    }

    pub fn one(p: u64, n: u32) -> Self {
        Self::new(1, p, n)
    }

    pub fn modulus(&self) -> i128 {
        ipow(self.p, self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Valuation in [0, n]; n for zero.
    pub fn val(&self) -> u32 {
        if self.value == 0 {
            self.n
        } else {
            val_int(self.value, self.p)
        }
    }

    pub fn is_unit(&self) -> bool {
        self.value % self.p as i128 != 0
    }

    pub fn inv(&self) -> Option<Self> {
        inv_mod(self.value, self.modulus()).map(|v| Self::new(v, self.p, self.n))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut b = *self;
        let mut r = Self::one(self.p, self.n);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b;
            }
            b = b * b;
            e >>= 1;
        }
        r
    }

    /// Reduction to a lower precision.
    pub fn truncate(&self, n: u32) -> Self {
        assert!(n <= self.n);
        Self::new(self.value, self.p, n)
    }

    /// Exact division by p^k when the value is divisible by it; the result
    /// is determined modulo p^{n-k}.
    pub fn div_p_pow(&self, k: u32) -> Option<Self> {
        let pk = ipow(self.p, k);
        if self.value % pk != 0 {
            return None;
        }
        Some(Self::new(self.value / pk, self.p, self.n - k))
    }

    fn check(&self, o: &Self) {
        assert!(self.p == o.p && self.n == o.n, "mixed residue rings");
    }
}

impl Add for ResidueInt {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.check(&o);
        Self::new(self.value + o.value, self.p, self.n)
    }
}

impl Sub for ResidueInt {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.check(&o);
        Self::new(self.value - o.value, self.p, self.n)
    }
}

impl Mul for ResidueInt {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.check(&o);
        Self::new(self.value * o.value, self.p, self.n)
    }
}

impl Neg for ResidueInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, self.p, self.n)
    }
}

impl fmt::Debug for ResidueInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.value, self.p, self.n)
    }
}

impl fmt::Display for ResidueInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

//! Exact scalars: rationals with q-adic valuation, residues mod pⁿ,
//! Laurent polynomials, cyclotomic fields and ℚ(√q).

mod cyclo;
mod laurent;
mod residue;
mod sqrtq;

pub use cyclo::{additive_character, additive_character_scaled, CycloAcc, CycloField, CycloScalar};
pub use laurent::{f_chi_pair, laurent_eval, Coeff, LaurentPoly, MLaurent};
pub use residue::ResidueInt;
pub use sqrtq::SqrtQ;

use num::bigint::BigInt;
use num::{One, Signed, ToPrimitive, Zero};

pub type Rat = num::BigRational;

/// Valuation of zero.
pub const VAL_INF: i64 = i64::MAX;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Serialized form `num/den` (den omitted when 1).
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_from_str(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => Some(Rat::from_integer(s.parse().ok()?)),
    }
}

fn val_bigint(x: &BigInt, q: u64) -> i64 {
    let qb = BigInt::from(q);
    let mut v = 0;
    let mut y = x.clone();
    while (&y % &qb).is_zero() {
        y /= &qb;
        v += 1;
    }
    v
}

/// q-adic valuation; `VAL_INF` for zero.
pub fn val_q(x: &Rat, q: u64) -> i64 {
    if x.is_zero() {
        return VAL_INF;
    }
    val_bigint(x.numer(), q) - val_bigint(x.denom(), q)
}

/// Normalized absolute value |x|_q as an exact rational.
pub fn abs_q(x: &Rat, q: u64) -> Rat {
    let v = val_q(x, q);
    assert!(v != VAL_INF, "abs_q of zero");
    rat_pow(&rint(q as i64), -v)
}

pub fn rat_pow(x: &Rat, e: i64) -> Rat {
    if e >= 0 {
        num::pow(x.clone(), e as usize)
    } else {
        num::pow(x.recip(), (-e) as usize)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn ipow(q: u64, e: u32) -> i128 {
    (q as i128).pow(e)
}

pub fn modp(a: i128, m: i128) -> i128 {
    // hardware division when both operands fit in 64 bits
    if a as i64 as i128 == a && m as i64 as i128 == m {
        return (a as i64).rem_euclid(m as i64) as i128;
    }
    let r = a % m;
    if r < 0 {
        r + m
    } else {
        r
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i128, m: i128) -> Option<i128> {
    let (mut r0, mut r1) = (modp(a, m), m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(modp(s0, m))
}

/// Valuation of a nonzero integer.
pub fn val_int(mut x: i128, q: u64) -> u32 {
    debug_assert!(x != 0);
    let q = q as i128;
    let mut v = 0;
    while x % q == 0 {
        x /= q;
        v += 1;
    }
    v
}

/// Image of a q-integral rational in ℤ/q^k, as a representative in [0, q^k).
pub fn rat_mod(x: &Rat, q: u64, k: u32) -> Option<i128> {
    let m = ipow(q, k);
    let qb = BigInt::from(q);
    if (x.denom() % &qb).is_zero() {
        return None;
    }
    let mb = BigInt::from(m);
    let n = (x.numer() % &mb).to_i128()?;
    let d = (x.denom() % &mb).to_i128()?;
    Some(modp(n * inv_mod(d, m)?, m))
}

/// Legendre symbol (a/p) for odd prime p, 0 when p | a.
pub fn legendre(a: i128, p: u64) -> i32 {
    let p = p as i128;
    let a = modp(a, p);
    if a == 0 {
        return 0;
    }
    let mut e = (p - 1) / 2;
    let mut b = a;
    let mut r = 1i128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

/// Square class of a q-adic unit: true for squares. Returns `None` on non-units.
pub fn is_square_unit(x: &Rat, q: u64) -> Option<bool> {
    if val_q(x, q) != 0 {
        return None;
    }
    Some(legendre(rat_mod(x, q, 1)?, q) == 1)
}

pub fn rat_is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

pub fn rat_abs(x: &Rat) -> Rat {
    x.abs()
}

/// Serde adapters writing rationals as `"num/den"` strings.
pub mod serde_rat {
    use super::{rat_from_str, rat_to_string, Rat};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        parse_value(&v).ok_or_else(|| D::Error::custom(format!("not a rational: {v}")))
    }

    /// Accepts JSON integers and `"num/den"` strings.
    pub fn parse_value(v: &serde_json::Value) -> Option<Rat> {
        match v {
            serde_json::Value::Number(n) => n.as_i64().map(super::rint),
            serde_json::Value::String(s) => rat_from_str(s),
            _ => None,
        }
    }
}

pub mod serde_mat {
    use super::serde_rat::parse_value;
    use super::{rat_to_string, Rat};
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(rat_to_string).collect()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rat>>, D::Error> {
        let v = Vec::<Vec<serde_json::Value>>::deserialize(d)?;
        v.iter()
            .map(|r| r.iter().map(|x| parse_value(x).ok_or_else(|| D::Error::custom("bad entry"))).collect())
            .collect()
    }
}

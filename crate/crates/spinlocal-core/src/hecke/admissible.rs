//! Admissible primes and the unramified characters attached to them.
//!
//! Character values are recorded at the uniformizer q and live in
//! F_p(√q): the field F_{p²} when q is not a square mod p, and F_p with a
//! chosen root otherwise.

use std::fmt;

use super::satake::Scalar;
use crate::arith::{inv_mod, legendre, modp, ResidueInt};
use crate::error::{Result, SpinError};

/// The forbidden values ±1, ±q, q², q⁻¹ mod p. The set is stable under
/// α ↦ q/α.
pub fn forbidden(q: u64, p: u64) -> Vec<i128> {
    let (q, m) = (q as i128, p as i128);
    let qi = inv_mod(q, m).expect("q is a unit mod p");
    let mut v: Vec<i128> = [1, -1, q, -q, q * q, qi].iter().map(|&x| modp(x, m)).collect();
    v.sort();
    v.dedup();
    v
}

/// The α of an admissible multiset {q, 1, α, q/α}, if there is one.
pub fn admissible_alpha(eigs: &[i64], q: u64, p: u64) -> Result<Option<i128>> {
    if eigs.len() != 4 {
        return Err(SpinError::Input(format!("expected 4 eigenvalues, got {}", eigs.len())));
    }
    if p % 2 == 0 || q % p == 0 {
        return Err(SpinError::Input(format!("need p odd and q ≠ p, got p={p} q={q}")));
    }
    let m = p as i128;
    let qq = modp(q as i128, m);
    if modp(qq.pow(4) - 1, m) == 0 {
        return Ok(None);
    }
    let mut rest: Vec<i128> = eigs.iter().map(|&e| modp(e as i128, m)).collect();
    for target in [qq, 1] {
        match rest.iter().position(|&x| x == target) {
            Some(i) => {
                rest.remove(i);
            }
            None => return Ok(None),
        }
    }
    let (x, y) = (rest[0], rest[1]);
    if modp(x * y - qq, m) != 0 {
        return Ok(None);
    }
    Ok((!forbidden(q, p).contains(&x)).then_some(x))
}

/// q⁴ ≢ 1 mod p and eigs = {q, 1, α, q/α} with α ∉ {±1, ±q, q², q⁻¹}.
pub fn is_admissible(eigs: &[i64], q: u64, p: u64) -> Result<bool> {
    Ok(admissible_alpha(eigs, q, p)?.is_some())
}

/// The same test on a characteristic polynomial mod p (coefficients from
/// low to high degree), without locating α: the quadratic cofactor
/// x² − tx + q must not vanish on the forbidden set.
pub fn is_admissible_charpoly(f: &[i128], q: u64, p: u64) -> bool {
    let m = p as i128;
    let qq = modp(q as i128, m);
    if f.len() != 5 || modp(f[4] - 1, m) != 0 || modp(qq.pow(4) - 1, m) == 0 {
        return false;
    }
    // divide by (x − q)(x − 1) = x² − (q+1)x + q
    let g = [qq, modp(-(qq + 1), m), 1];
    let (quot, rem) = divmod_monic(f, &g, m);
    if rem.iter().any(|&r| r != 0) {
        return false;
    }
    if modp(quot[0] - qq, m) != 0 {
        return false;
    }
    let h = |x: i128| modp(quot[0] + quot[1] * x + quot[2] * x % m * x, m);
    forbidden(q, p).into_iter().all(|x| h(x) != 0)
}

/// Quotient and remainder by a monic polynomial over ℤ/m.
pub fn divmod_monic(f: &[i128], g: &[i128], m: i128) -> (Vec<i128>, Vec<i128>) {
    let dg = g.len() - 1;
    let mut r: Vec<i128> = f.iter().map(|&x| modp(x, m)).collect();
    if r.len() <= dg {
        return (vec![0], r);
    }
    let mut quot = vec![0i128; r.len() - dg];
    for k in (0..quot.len()).rev() {
        let c = r[k + dg];
        quot[k] = c;
        for (i, &gi) in g.iter().enumerate() {
            r[k + i] = modp(r[k + i] - c * gi, m);
        }
    }
    r.truncate(dg);
    (quot, r)
}

/// min(n, v_p(f(q))) for f over ℤ/pⁿ.
pub fn n_of_q(f: &[ResidueInt], q: u64) -> u32 {
    let first = f.first().expect("nonempty polynomial");
    let x = first.int(q as i64);
    let val = f.iter().rev().fold(first.int(0), |acc, c| acc * x + *c);
    val.val()
}

/// a + b·√q over F_p. When q is a square mod p the root is substituted
/// at once, so b = 0.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Fq2 {
    pub p: u64,
    pub q: u64,
    root: Option<i128>,
    pub a: i128,
    pub b: i128,
}

impl Fq2 {
    /// Zero of F_p(√q); p must be an odd prime not dividing q.
    pub fn field(p: u64, q: u64) -> Fq2 {
        let m = p as i128;
        let root = (legendre(q as i128, p) == 1).then(|| (1..m).find(|r| modp(r * r - q as i128, m) == 0).unwrap());
        Fq2 { p, q, root, a: 0, b: 0 }
    }

    pub fn with(&self, a: i128, b: i128) -> Fq2 {
        let m = self.p as i128;
        match self.root {
            Some(r) => Fq2 { a: modp(a + modp(b, m) * r, m), b: 0, ..*self },
            None => Fq2 { a: modp(a, m), b: modp(b, m), ..*self },
        }
    }

    /// The distinguished square root of q.
    pub fn sqrt_q(&self) -> Fq2 {
        self.with(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn pow(&self, e: i64) -> Fq2 {
        let base = if e < 0 { self.inverse().expect("unit") } else { *self };
        (0..e.unsigned_abs()).fold(self.int(1), |acc, _| acc.times(&base))
    }
}

impl Scalar for Fq2 {
    fn int(&self, n: i64) -> Self {
        self.with(n as i128, 0)
    }
    fn plus(&self, o: &Self) -> Self {
        self.with(self.a + o.a, self.b + o.b)
    }
    fn minus(&self, o: &Self) -> Self {
        self.with(self.a - o.a, self.b - o.b)
    }
    fn times(&self, o: &Self) -> Self {
        let m = self.p as i128;
        let q = self.q as i128 % m;
        self.with(self.a * o.a + self.b * o.b % m * q, self.a * o.b + self.b * o.a)
    }
    fn inverse(&self) -> Option<Self> {
        let m = self.p as i128;
        let norm = modp(self.a * self.a - self.b * self.b % m * (self.q as i128 % m), m);
        let ni = inv_mod(norm, m)?;
        Some(self.with(self.a * ni, -self.b * ni))
    }
}

impl fmt::Debug for Fq2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+{}√{}", self.a, self.b, self.q)
        }
    }
}

impl fmt::Display for Fq2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// χ = χ₁ ⊠ ⋯ ⊠ χₙ unramified, recorded by the values χᵢ(q).
#[derive(Clone, Debug, PartialEq)]
pub struct UnramifiedChar {
    pub vals: Vec<Fq2>,
}

impl UnramifiedChar {
    pub fn new(vals: Vec<Fq2>) -> UnramifiedChar {
        assert!(!vals.is_empty());
        UnramifiedChar { vals }
    }

    fn unit(&self) -> Fq2 {
        self.vals[0].int(1)
    }

    /// x ∈ {|q|, |q|⁻¹, 1} = {q⁻¹, q, 1}.
    fn is_norm_power(&self, x: &Fq2) -> bool {
        let one = self.unit();
        let q = one.int(one.q as i64);
        *x == one || *x == q || *x == q.inverse().unwrap()
    }

    fn is_norm_pm(&self, x: &Fq2) -> bool {
        let q = self.unit().int(self.unit().q as i64);
        *x == q || *x == q.inverse().unwrap()
    }

    fn pairs_ok(&self) -> bool {
        let v = &self.vals;
        (0..v.len()).all(|i| {
            (i + 1..v.len()).all(|j| {
                let prod = v[i].times(&v[j]);
                let quo = v[i].times(&v[j].inverse().unwrap());
                !self.is_norm_power(&prod) && !self.is_norm_power(&quo)
            })
        })
    }

    pub fn is_generic(&self) -> bool {
        self.pairs_ok() && self.vals.iter().all(|x| !self.is_norm_power(&x.times(x)))
    }

    pub fn is_almost_generic(&self) -> bool {
        let one = self.unit();
        self.pairs_ok()
            && self.vals.iter().all(|x| !self.is_norm_pm(&x.times(x)))
            && self.vals.iter().filter(|x| x.times(x) == one).count() <= 1
    }

    /// The unique index with χᵢ = |·|^{1/2}, i.e. χᵢ(q) = q^{-1/2}.
    pub fn half_index(&self) -> Option<usize> {
        let h = self.unit().sqrt_q().inverse().unwrap();
        let hits: Vec<usize> = (0..self.vals.len()).filter(|&i| self.vals[i] == h).collect();
        (hits.len() == 1).then(|| hits[0])
    }

    pub fn is_level_raising_generic(&self) -> bool {
        let Some(i0) = self.half_index() else { return false };
        self.pairs_ok()
            && self.vals.iter().enumerate().all(|(i, x)| i == i0 || !self.is_norm_power(&x.times(x)))
    }

    pub fn is_almost_level_raising_generic(&self) -> bool {
        let Some(i0) = self.half_index() else { return false };
        let one = self.unit();
        let others: Vec<&Fq2> = self.vals.iter().enumerate().filter(|&(i, _)| i != i0).map(|(_, x)| x).collect();
        self.pairs_ok()
            && others.iter().all(|x| !self.is_norm_pm(&x.times(x)))
            && others.iter().filter(|x| x.times(x) == one).count() <= 1
    }
}

/// χ = |·|^{1/2} ⊠ χ₂ with χ₂(q)·q^{1/2} = α the Frobenius eigenvalue
/// outside {q, 1}. Errors unless the eigenvalues are admissible; the
/// result is then almost level-raising generic.
pub fn alrg_character_of(eigs: &[i64], q: u64, p: u64) -> Result<UnramifiedChar> {
    let alpha = admissible_alpha(eigs, q, p)?.ok_or_else(|| SpinError::NotAdmissible(format!("{eigs:?} at q={q}, p={p}")))?;
    let f = Fq2::field(p, q);
    let si = f.sqrt_q().inverse().expect("q is a unit mod p");
    let chi = UnramifiedChar::new(vec![si, f.int(alpha as i64).times(&si)]);
    assert!(chi.is_almost_level_raising_generic(), "admissible eigenvalues give an alrg character");
    Ok(chi)
}

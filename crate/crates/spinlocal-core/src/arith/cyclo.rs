use super::laurent::Coeff;
use super::{ipow, rat_mod, val_q, Rat, VAL_INF};
use crate::error::{Result, SpinError};
use num::integer::Integer;
use num::{One, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// ℚ(ζ_M) presented as ℚ[x]/Φ_M with the power basis. Holds the reduction
/// of every x^j, 0 ≤ j < M, so group-ring sums reduce in one pass.
#[derive(Debug)]
pub struct CycloField {
    pub m: u64,
    pub phi: usize,
    pub poly: Vec<i64>,
    red: Vec<Vec<i64>>,
}

fn poly_divexact(a: &[i64], b: &[i64]) -> Vec<i64> {
    // b monic
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db];
        q[i] = c;
        for j in 0..=db {
            r[i + j] -= c * b[j];
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

fn cyclotomic_poly(n: u64, memo: &mut HashMap<u64, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let pd = cyclotomic_poly(d, memo);
            p = poly_divexact(&p, &pd);
        }
    }
    memo.insert(n, p.clone());
    p
}

impl CycloField {
    fn build(m: u64) -> Self {
        let mut memo = HashMap::new();
        let poly = cyclotomic_poly(m, &mut memo);
        let phi = poly.len() - 1;
        let mut red = Vec::with_capacity(m as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..m {
            red.push(cur.clone());
            // multiply by x and reduce the overflow with the monic Φ_M
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1] - top * poly[i];
            }
            cur[0] = -top * poly[0];
        }
        CycloField { m, phi, poly, red }
    }

    /// Shared instance for conductor m.
    pub fn get(m: u64) -> Arc<CycloField> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut g = cache.lock().unwrap();
        g.entry(m).or_insert_with(|| Arc::new(CycloField::build(m))).clone()
    }

    pub fn reduction(&self, j: usize) -> &[i64] {
        &self.red[j % self.m as usize]
    }
}

/// Element of ℚ(ζ_M). Elements with different conductors combine in the
/// compositum (lcm of conductors).
#[derive(Clone)]
pub struct CycloScalar {
    pub m: u64,
    pub c: Vec<Rat>,
}

impl CycloScalar {
    pub fn from_rat(r: Rat) -> Self {
        CycloScalar { m: 1, c: vec![r] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(Rat::from_integer(n.into()))
    }

    pub fn zeta_pow(m: u64, k: i64) -> Self {
        let f = CycloField::get(m);
        let j = k.rem_euclid(m as i64) as usize;
        CycloScalar { m, c: f.reduction(j).iter().map(|&x| Rat::from_integer(x.into())).collect() }
    }

    pub fn zero_in(m: u64) -> Self {
        let f = CycloField::get(m);
        CycloScalar { m, c: vec![Rat::zero(); f.phi] }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// Rational value, when the element lies in ℚ.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.c.iter().skip(1).all(|x| x.is_zero()) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    /// Re-express in ℚ(ζ_{m2}); requires m | m2.
    pub fn lift(&self, m2: u64) -> Self {
        if m2 == self.m {
            return self.clone();
        }
        assert!(m2 % self.m == 0, "cannot lift conductor {} to {}", self.m, m2);
        let step = (m2 / self.m) as usize;
        let mut acc = CycloAcc::new(m2);
        for (j, cj) in self.c.iter().enumerate() {
            acc.add(j * step, cj);
        }
        acc.finish()
    }

    fn common(&self, o: &Self) -> (Self, Self) {
        let l = self.m.lcm(&o.m);
        (self.lift(l), o.lift(l))
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b) = self.common(o);
        CycloScalar { m: a.m, c: a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        CycloScalar { m: self.m, c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, k: &Rat) -> Self {
        CycloScalar { m: self.m, c: self.c.iter().map(|x| x * k).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = self.common(o);
        let mut acc = CycloAcc::new(a.m);
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                if !y.is_zero() {
                    acc.add(i + j, &(x * y));
                }
            }
        }
        acc.finish()
    }

    /// Multiply by ζ_M^k where M is the current conductor.
    pub fn mul_zeta(&self, k: i64) -> Self {
        let mut acc = CycloAcc::new(self.m);
        let k = k.rem_euclid(self.m as i64) as usize;
        for (j, x) in self.c.iter().enumerate() {
            acc.add(j + k, x);
        }
        acc.finish()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::from_int(1);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Complex conjugate (ζ ↦ ζ⁻¹).
    pub fn conj(&self) -> Self {
        let mut acc = CycloAcc::new(self.m);
        let m = self.m as usize;
        for (j, x) in self.c.iter().enumerate() {
            acc.add((m - j) % m, x);
        }
        acc.finish()
    }

    /// Floating-point value, for diagnostics only.
    pub fn approx(&self) -> (f64, f64) {
        use num::ToPrimitive;
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, x) in self.c.iter().enumerate() {
            let a = 2.0 * std::f64::consts::PI * j as f64 / self.m as f64;
            let v = x.to_f64().unwrap_or(f64::NAN);
            re += v * a.cos();
            im += v * a.sin();
        }
        (re, im)
    }
}

impl PartialEq for CycloScalar {
    fn eq(&self, o: &Self) -> bool {
        let (a, b) = self.common(o);
        a.c == b.c
    }
}

impl fmt::Debug for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rat() {
            return write!(f, "{}", super::rat_to_string(&r));
        }
        let parts: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(j, x)| format!("({})z{}^{}", super::rat_to_string(x), self.m, j))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Coeff for CycloScalar {
    fn c_zero() -> Self {
        Self::from_int(0)
    }
    fn c_one() -> Self {
        Self::from_int(1)
    }
    fn c_is_zero(&self) -> bool {
        CycloScalar::is_zero(self)
    }
    fn c_add(&self, o: &Self) -> Self {
        CycloScalar::add(self, o)
    }
    fn c_mul(&self, o: &Self) -> Self {
        CycloScalar::mul(self, o)
    }
    fn c_neg(&self) -> Self {
        CycloScalar::neg(self)
    }
    fn c_from_rat(r: &Rat) -> Self {
        Self::from_rat(r.clone())
    }
}

/// Accumulator in the group ring ℚ[ℤ/M]; reduced modulo Φ_M on `finish`.
pub struct CycloAcc {
    pub m: u64,
    buf: Vec<Rat>,
}

impl CycloAcc {
    pub fn new(m: u64) -> Self {
        CycloAcc { m, buf: vec![Rat::zero(); m as usize] }
    }

    pub fn add(&mut self, j: usize, c: &Rat) {
        let k = j % self.m as usize;
        self.buf[k] += c;
    }

    /// Add s·ζ_M^k for an element s whose conductor divides M.
    pub fn add_scaled(&mut self, s: &CycloScalar, k: i64) {
        let s = s.lift(self.m);
        let k = k.rem_euclid(self.m as i64) as usize;
        for (j, x) in s.c.iter().enumerate() {
            if !x.is_zero() {
                self.add(j + k, x);
            }
        }
    }

    pub fn finish(self) -> CycloScalar {
        let f = CycloField::get(self.m);
        let mut c = vec![Rat::zero(); f.phi];
        for (j, x) in self.buf.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, r) in f.reduction(j).iter().enumerate() {
                if *r != 0 {
                    c[i] += x * Rat::from_integer((*r).into());
                }
            }
        }
        CycloScalar { m: self.m, c }
    }
}

/// ψ(x) = ζ_{q^N}^{q^N x mod q^N}, valued in ℚ(ζ_{8q^N}).
pub fn additive_character(x: &Rat, q: u64, depth: u32) -> Result<CycloScalar> {
    additive_character_scaled(&Rat::one(), x, q, depth)
}

/// ψ(c·x) for a q-adic unit or integer scale c.
pub fn additive_character_scaled(c: &Rat, x: &Rat, q: u64, depth: u32) -> Result<CycloScalar> {
    let m = 8 * ipow(q, depth) as u64;
    let y = c * x;
    let v = val_q(&y, q);
    if v != VAL_INF && v < -(depth as i64) {
        return Err(SpinError::DepthTooSmall { depth: depth as i64, val: v });
    }
    let qn = ipow(q, depth);
    let shifted = &y * Rat::from_integer(qn.into());
    let r = rat_mod(&shifted, q, depth).expect("integral after shift");
    Ok(CycloScalar::zeta_pow(m, 8 * r as i64))
}

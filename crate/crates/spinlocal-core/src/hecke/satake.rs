//! Satake parameters of unramified GSp₄ representations and the Hecke
//! eigenvalues they determine.
//!
//! Everything is generic over a small coefficient interface so that the same
//! formulas run over ℤ/pⁿ, over ℚ(√q) and symbolically over the Laurent ring
//! ℚ[α^±, β^±, ν^±, s^±] with s² = q.

use std::fmt;

use num::{One, Zero};

use crate::arith::{rint, MLaurent, Rat, ResidueInt, SqrtQ};
use crate::error::{Result, SpinError};
use crate::report::Check;

/// Commutative ring with partially defined inversion. `int` builds an
/// integer in the same ring as `self`.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn int(&self, n: i64) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn inverse(&self) -> Option<Self>;
}

impl Scalar for ResidueInt {
    fn int(&self, n: i64) -> Self {
        ResidueInt::new(n as i128, self.p, self.n)
    }
    fn plus(&self, o: &Self) -> Self {
        *self + *o
    }
    fn minus(&self, o: &Self) -> Self {
        *self - *o
    }
    fn times(&self, o: &Self) -> Self {
        *self * *o
    }
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
}

impl Scalar for SqrtQ {
    fn int(&self, n: i64) -> Self {
        SqrtQ::new(self.q, rint(n), Rat::zero())
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
}

/// Symbolic variables: α, β, ν and s = q^{1/2}.
pub type Symbolic = MLaurent<Rat>;

pub const SYM_VARS: usize = 4;

impl Scalar for Symbolic {
    fn int(&self, n: i64) -> Self {
        MLaurent::constant(SYM_VARS, rint(n))
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    /// Only monomials are units.
    fn inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        if c.is_zero() {
            return None;
        }
        Some(MLaurent::monomial(e.iter().map(|x| -x).collect(), c.recip()))
    }
}

/// The data {α, β, ν} with a chosen square root of q.
#[derive(Clone, Debug, PartialEq)]
pub struct SatakeParam<R> {
    pub alpha: R,
    pub beta: R,
    pub nu: R,
    pub sqrt_q: R,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeckeEigenvalues<R> {
    pub t1: R,
    pub t2: R,
    pub z: R,
    /// q, carried along for the genericity test.
    pub q: R,
}

fn inv<R: Scalar>(x: &R, what: &str) -> Result<R> {
    x.inverse().ok_or_else(|| SpinError::Input(format!("{what} is not invertible")))
}

impl<R: Scalar> SatakeParam<R> {
    pub fn new(alpha: R, beta: R, nu: R, sqrt_q: R) -> Result<Self> {
        inv(&alpha, "alpha")?;
        inv(&beta, "beta")?;
        inv(&nu, "nu")?;
        inv(&sqrt_q, "sqrt(q)")?;
        Ok(SatakeParam { alpha, beta, nu, sqrt_q })
    }

    pub fn q(&self) -> R {
        self.sqrt_q.times(&self.sqrt_q)
    }

    /// The multiset {α, β, ν/α, ν/β}.
    pub fn parameter(&self) -> [R; 4] {
        let ai = self.alpha.inverse().unwrap();
        let bi = self.beta.inverse().unwrap();
        [self.alpha.clone(), self.beta.clone(), self.nu.times(&ai), self.nu.times(&bi)]
    }

    pub fn eigenvalues(&self) -> HeckeEigenvalues<R> {
        let (a, b, nu) = (&self.alpha, &self.beta, &self.nu);
        let ai = a.inverse().unwrap();
        let bi = b.inverse().unwrap();
        let nui = nu.inverse().unwrap();
        let q = self.q();
        let q2 = q.times(&q);
        let q32 = q.times(&self.sqrt_q);
        let ab = a.times(b);
        let inner = ab
            .times(&nui)
            .plus(&a.times(&bi))
            .plus(&b.times(&ai))
            .plus(&nu.times(&ai).times(&bi));
        let t1 = q2.times(&inner).plus(&q2.minus(&q.int(1)));
        let sum = self.parameter().iter().fold(q.int(0), |s, x| s.plus(x));
        let t2 = q32.times(&sum);
        HeckeEigenvalues { t1, t2, z: nu.clone(), q }
    }

    /// Frobenius eigenvalues q^{1/2}·{α, β, ν/α, ν/β} on the attached
    /// Galois representation.
    pub fn frob_eigenvalues(&self) -> [R; 4] {
        self.parameter().map(|x| self.sqrt_q.times(&x))
    }

    pub fn frob_trace(&self) -> R {
        self.frob_eigenvalues().iter().fold(self.q().int(0), |s, x| s.plus(x))
    }

    /// q⁻¹·∏(λ − q) over the Frobenius eigenvalues.
    pub fn t_lr_via_frob(&self) -> R {
        let q = self.q();
        let p = self.frob_eigenvalues().iter().fold(q.int(1), |s, l| s.times(&l.minus(&q)));
        p.times(&q.inverse().unwrap())
    }

    /// The Weyl-group generators α ↔ β and α ↦ ν/α.
    pub fn weyl_images(&self) -> [SatakeParam<R>; 2] {
        let ai = self.alpha.inverse().unwrap();
        [
            SatakeParam { alpha: self.beta.clone(), beta: self.alpha.clone(), ..self.clone() },
            SatakeParam { alpha: self.nu.times(&ai), ..self.clone() },
        ]
    }
}

impl<R: Scalar> HeckeEigenvalues<R> {
    /// Eigenvalue of T_lr = T₁ + (q+1)(q²+1) − (q+1)T₂.
    pub fn t_lr(&self) -> R {
        let q = &self.q;
        let q1 = q.plus(&q.int(1));
        let q21 = q.times(q).plus(&q.int(1));
        self.t1.plus(&q1.times(&q21)).minus(&q1.times(&self.t2))
    }

    /// z⁻¹T₂² − 4q²(q+1)².
    pub fn genericity_form(&self) -> Result<R> {
        let zi = inv(&self.z, "z")?;
        let q = &self.q;
        let q1 = q.plus(&q.int(1));
        let c = q.int(4).times(q).times(q).times(&q1).times(&q1);
        Ok(zi.times(&self.t2).times(&self.t2).minus(&c))
    }

    /// Weak q-genericity: the genericity form is a unit.
    pub fn weakly_q_generic(&self) -> Result<bool> {
        Ok(self.genericity_form()?.inverse().is_some())
    }
}

/// q²(tr² − 4(q+1)²) for a Frobenius trace tr.
pub fn genericity_from_trace<R: Scalar>(tr: &R, q: &R) -> R {
    let q1 = q.plus(&q.int(1));
    q.times(q).times(&tr.times(tr).minus(&q.int(4).times(&q1).times(&q1)))
}

/// The generic parameter over ℚ[α^±, β^±, ν^±, s^±].
pub fn symbolic_param() -> SatakeParam<Symbolic> {
    let v = |i| MLaurent::var(SYM_VARS, i, 1);
    SatakeParam { alpha: v(0), beta: v(1), nu: v(2), sqrt_q: v(3) }
}

/// Specialize the symbolic parameter to ν = 1.
pub fn trivial_central(p: &SatakeParam<Symbolic>) -> SatakeParam<Symbolic> {
    SatakeParam { nu: MLaurent::constant(SYM_VARS, Rat::one()), ..p.clone() }
}

fn show<R: fmt::Debug>(x: &R) -> String {
    format!("{x:?}")
}

/// The symbolic identities: T_lr against the Frobenius product (ν = 1),
/// the two genericity forms (ν = 1), and Weyl invariance (general ν).
pub fn symbolic_checks() -> Vec<Check> {
    let gen = symbolic_param();
    let triv = trivial_central(&gen);
    let e = triv.eigenvalues();
    let mut out = vec![];
    let (l, r) = (e.t_lr(), triv.t_lr_via_frob());
    out.push(Check::new("satake: t_lr = q^-1 prod(frob - q)", 0, "symbolic nu=1", show(&l), show(&r), l == r));
    let l = e.genericity_form().expect("nu = 1");
    let r = genericity_from_trace(&triv.frob_trace(), &triv.q());
    out.push(Check::new("satake: weakly generic forms agree", 0, "symbolic nu=1", show(&l), show(&r), l == r));
    let e = gen.eigenvalues();
    for (k, w) in gen.weyl_images().iter().enumerate() {
        let ew = w.eigenvalues();
        out.push(Check::new("satake: weyl invariance", 0, &format!("generator {k}"), show(&ew), show(&e), ew == e));
    }
    out
}

/// The same identities over ℤ/p for random units α, β with ν = 1 and a
/// square root of a prime q that is a square mod p.
pub fn random_checks(p: u64, q: u64, count: usize, rng: &mut impl rand::Rng) -> Result<Vec<Check>> {
    let s = (1..p as i128)
        .find(|s| (s * s - q as i128).rem_euclid(p as i128) == 0)
        .ok_or_else(|| SpinError::Input(format!("{q} is not a square mod {p}")))?;
    let sq = ResidueInt::new(s, p, 1);
    let mut out = vec![];
    for _ in 0..count {
        let a = ResidueInt::new(rng.gen_range(1..p) as i128, p, 1);
        let b = ResidueInt::new(rng.gen_range(1..p) as i128, p, 1);
        let sp = SatakeParam::new(a, b, sq.int(1), sq)?;
        let e = sp.eigenvalues();
        let inputs = format!("p={p} alpha={} beta={}", a.value, b.value);
        let g = e.genericity_form()?;
        let gt = genericity_from_trace(&sp.frob_trace(), &sp.q());
        out.push(Check::equal("satake: weakly generic forms agree", q, &inputs, &g, &gt));
        out.push(Check::equal("satake: t_lr = q^-1 prod(frob - q)", q, &inputs, &e.t_lr(), &sp.t_lr_via_frob()));
    }
    Ok(out)
}

impl<R: fmt::Display> fmt::Display for HeckeEigenvalues<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t1={} t2={} z={}", self.t1, self.t2, self.z)
    }
}

//! The projections f_χ on ℤ_q^×-invariant functions of one variable, for
//! unramified χ recorded by u = χ(q).

use num::{One, Zero};

use super::SchwartzFn;
use crate::arith::{f_chi_pair, inv_mod, ipow, modp, LaurentPoly, MLaurent, Rat};
use crate::error::{Result, SpinError};

/// A ℤ_q^×-invariant function on ℚ_q supported on q^{lo}ℤ_q and invariant
/// under q^{hi}ℤ_q: `shells[k − lo]` is the value on q^kℤ_q^× for
/// lo ≤ k < hi and `tail` the value on q^{hi}ℤ_q.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialFn {
    pub lo: i64,
    pub hi: i64,
    pub shells: Vec<Rat>,
    pub tail: Rat,
}

impl RadialFn {
    pub fn new(lo: i64, shells: Vec<Rat>, tail: Rat) -> RadialFn {
        RadialFn { lo, hi: lo + shells.len() as i64, shells, tail }
    }

    /// φ(q^k).
    pub fn at(&self, k: i64) -> Rat {
        if k < self.lo {
            Rat::zero()
        } else if k >= self.hi {
            self.tail.clone()
        } else {
            self.shells[(k - self.lo) as usize].clone()
        }
    }

    /// t ↦ φ(q^{-k}t).
    pub fn dilate(&self, k: i64) -> RadialFn {
        RadialFn { lo: self.lo + k, hi: self.hi + k, ..self.clone() }
    }

    /// The basis of S_{a,b}: shell indicators for a ≤ k < b, then 1_{q^bℤ}.
    pub fn basis(a: i64, b: i64) -> Vec<RadialFn> {
        let n = (b - a + 1) as usize;
        (0..n)
            .map(|i| {
                let mut v = vec![Rat::zero(); n];
                v[i] = Rat::one();
                let tail = v.pop().unwrap();
                RadialFn::new(a, v, tail)
            })
            .collect()
    }

    /// Read off a function on ℚ_q (one copy of a line); fails unless the
    /// values are rational and constant on ℤ_q^×-orbits.
    pub fn from_schwartz(f: &SchwartzFn) -> Result<RadialFn> {
        if f.len() != 1 {
            return Err(SpinError::Dimension { expected: 1, got: f.len() });
        }
        let (a, b) = (f.window.a as i64, f.window.b as i64);
        let m = f.modulus() as i128;
        let q = f.q as i128;
        let rat_of = |key: i64| f.tracked(f.get(&[key])).normalized(f.q);
        let mut shells = vec![];
        for k in -a..b {
            let base = q.pow((a + k) as u32);
            let (v0, h) = rat_of(base as i64);
            for u in 1..m {
                if u % q == 0 {
                    continue;
                }
                if rat_of((base * u % m) as i64) != (v0.clone(), h) {
                    return Err(SpinError::Input("function is not invariant under units".into()));
                }
            }
            if h != 0 {
                return Err(SpinError::Input("odd power of q^1/2".into()));
            }
            shells.push(v0.as_rat().ok_or_else(|| SpinError::Input("irrational value".into()))?);
        }
        let (t, _) = rat_of(0);
        let tail = t.as_rat().ok_or_else(|| SpinError::Input("irrational value".into()))?;
        Ok(RadialFn::new(-a, shells, tail))
    }
}

/// f_χ(φ) = (1 − u)⁻¹∫(φ(t) − φ(t/q))χ(t)d^×t with vol(ℤ_q^×) = 1, as a
/// reduced (numerator, denominator) pair in u.
pub fn f_chi(phi: &RadialFn) -> (LaurentPoly, LaurentPoly) {
    let mut num = LaurentPoly::zero();
    for k in phi.lo..=phi.hi {
        num.add_term(k, phi.at(k) - phi.at(k - 1));
    }
    f_chi_pair(num)
}

/// The same projection by the closed form for S_{a,b}:
/// Σ_{a≤k<b} φ(q^k)(u^k − u^{k+1}) + φ(q^b)u^b over (1 − u).
pub fn f_chi_lemma(phi: &RadialFn) -> (LaurentPoly, LaurentPoly) {
    f_chi_pair(lemma_numerator(phi))
}

/// The lemma's numerator before reduction.
fn lemma_numerator(phi: &RadialFn) -> LaurentPoly {
    let mut num = LaurentPoly::zero();
    for (i, v) in phi.shells.iter().enumerate() {
        let k = phi.lo + i as i64;
        num.add_term(k, v.clone());
        num.add_term(k + 1, -v.clone());
    }
    num.add_term(phi.hi, phi.tail.clone());
    num
}

fn to_var(p: &LaurentPoly, nvars: usize, i: usize) -> MLaurent<Rat> {
    let mut out = MLaurent::zero(nvars);
    for k in p.min_degree().unwrap_or(0)..=p.max_degree().unwrap_or(-1) {
        let c = p.coeff(k);
        if !c.is_zero() {
            let mut e = vec![0; nvars];
            e[i] = k;
            out.add_term(e, c);
        }
    }
    out
}

fn det_leibniz(m: &[Vec<MLaurent<Rat>>], nvars: usize) -> MLaurent<Rat> {
    let n = m.len();
    let mut total = MLaurent::zero(nvars);
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        let mut term = MLaurent::constant(nvars, if inversions % 2 == 0 { Rat::one() } else { -Rat::one() });
        for (i, &j) in p.iter().enumerate() {
            term = term.mul(&m[i][j]);
        }
        total = total.add(&term);
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// The determinant of (1 − xᵢ)·f_{χᵢ}(e_k) over the basis e_k of S_{a,b},
/// with m = b − a + 1 independent variables xᵢ = χᵢ(q).
pub fn vandermonde_det(a: i64, b: i64) -> MLaurent<Rat> {
    let basis = RadialFn::basis(a, b);
    let m = basis.len();
    let rows: Vec<Vec<MLaurent<Rat>>> =
        (0..m).map(|i| basis.iter().map(|e| to_var(&lemma_numerator(e), m, i)).collect()).collect();
    det_leibniz(&rows, m)
}

/// Rank over F_p of the evaluation matrix f_{χᵢ}(e_k) for the given
/// values xᵢ = χᵢ(q) ≠ 1.
pub fn vandermonde_rank_mod_p(a: i64, b: i64, xs: &[i64], p: u64) -> Result<usize> {
    let m = p as i128;
    let basis = RadialFn::basis(a, b);
    let mut rows = vec![];
    for &x in xs {
        let x = modp(x as i128, m);
        let xi = inv_mod(x, m).ok_or_else(|| SpinError::Input("x must be a unit".into()))?;
        let den = inv_mod(modp(1 - x, m), m).ok_or_else(|| SpinError::Input("x = 1 is trivial".into()))?;
        let pw = |k: i64| if k >= 0 { modp_pow(x, k as u64, m) } else { modp_pow(xi, (-k) as u64, m) };
        let row: Vec<i128> = basis
            .iter()
            .map(|e| {
                let n = lemma_numerator(e);
                let lo = n.min_degree().unwrap_or(0);
                let hi = n.max_degree().unwrap_or(-1);
                let s = (lo..=hi).fold(0i128, |s, k| {
                    let c = n.coeff(k);
                    let c = modp(crate::arith::rat_mod(&c, p, 1).unwrap_or(0), m);
                    modp(s + c * pw(k), m)
                });
                modp(s * den, m)
            })
            .collect();
        rows.push(row);
    }
    Ok(rank_mod(rows, m))
}

fn modp_pow(x: i128, e: u64, m: i128) -> i128 {
    (0..e).fold(1, |s, _| modp(s * x, m))
}

fn rank_mod(mut a: Vec<Vec<i128>>, m: i128) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        let inv = inv_mod(a[r][c], m).unwrap();
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = modp(a[i][c] * inv, m);
                for j in 0..cols {
                    a[i][j] = modp(a[i][j] - f * a[r][j], m);
                }
            }
        }
        r += 1;
    }
    r
}

/// f_{α|·|^{1/2}} of a radial function, with u = χ(q) = a·s⁻¹ for the
/// variables a = α(q) and s = q^{1/2}.
#[derive(Clone, Debug, PartialEq)]
pub struct CChiTot {
    /// Numerator in (a, s).
    pub num: MLaurent<Rat>,
    /// True when (1 − u) divided the numerator.
    pub reduced: bool,
}

impl CChiTot {
    /// The single term (exponent of a, exponent of s, coefficient), if the
    /// value is a monomial.
    pub fn monomial(&self) -> Option<(i64, i64, Rat)> {
        if !self.reduced || self.num.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.num.terms.iter().next().unwrap();
        Some((e[0], e[1], c.clone()))
    }

    /// Nonvanishing for every unit a: a monomial with nonzero coefficient.
    pub fn nonvanishing(&self) -> bool {
        self.monomial().map_or(false, |(_, _, c)| !c.is_zero())
    }
}

pub fn c_chi_tot(s_tot: &RadialFn) -> CChiTot {
    let (num, den) = f_chi(s_tot);
    let reduced = den == LaurentPoly::constant(Rat::one());
    let mut out = MLaurent::zero(2);
    for k in num.min_degree().unwrap_or(0)..=num.max_degree().unwrap_or(-1) {
        let c = num.coeff(k);
        if !c.is_zero() {
            out.add_term(vec![k, -k], c);
        }
    }
    CChiTot { num: out, reduced }
}

/// (q − 1)²/q³, the expected coefficient of a⁻¹s.
pub fn expected_c_chi_coefficient(q: u64) -> Rat {
    Rat::new(((q as i64 - 1).pow(2)).into(), (ipow(q, 3) as i64).into())
}

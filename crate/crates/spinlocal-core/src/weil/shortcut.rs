//! A sufficient criterion for (C_χ) with χ generic and unramified: for
//! φ ≥ 0 on V² supported on L × q⁻¹L, invariant under qL × q²L and
//! nonzero somewhere on y·v₁ = 0, some Weyl conjugate χ^w has
//! f_{χ^w}(c) ≠ 0, where
//!
//! c(t₁, t₂) = q²∫φ(x, y)ψ(t₁x·v₁ + t₂y·v₂)·1[y·v₁ ∈ q²ℤ] dx dy.
//!
//! φ is a pointwise function on the window (1, 2) of the split V of
//! dimension 5; c is computed by exact enumeration, which is only
//! affordable for q = 3.

use std::collections::BTreeMap;

use num::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::{PointFn, Window};
use crate::arith::{ipow, rint, CycloAcc, MLaurent, Rat};
use crate::error::{Result, SpinError};

/// Largest enumeration the criterion will run.
pub const MAX_EVALS: u64 = 1 << 28;

/// Which of the three hypotheses hold (from exhaustive and sampled scans).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conditions {
    pub nonnegative: bool,
    pub support_invariance: bool,
    pub nonzero_on_y1: bool,
}

impl Conditions {
    pub fn all(&self) -> bool {
        self.nonnegative && self.support_invariance && self.nonzero_on_y1
    }
}

/// A Weyl element of the (χ₁, χ₂) torus: χ^w = (χ_{σ1}^{ε1}, χ_{σ2}^{ε2}).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeylElt {
    pub swap: bool,
    pub signs: [i64; 2],
}

impl WeylElt {
    pub fn all() -> Vec<WeylElt> {
        let mut out = vec![];
        for swap in [false, true] {
            for s1 in [1, -1] {
                for s2 in [1, -1] {
                    out.push(WeylElt { swap, signs: [s1, s2] });
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct ShortcutWitness {
    pub w: WeylElt,
    /// c on valuation classes (v(t₁), v(t₂)), with v = hi standing for the
    /// tail q^{hi}ℤ_q: t₁ ∈ {−1, 0}, t₂ ∈ {−2, −1, 0, 1}.
    pub c: BTreeMap<(i64, i64), Rat>,
    /// (1 − u₁)(1 − u₂)·f_{χ^w}(c) in the variables (x₁, x₂, s), where
    /// xᵢ = χᵢ(q) and s = q^{1/2}.
    pub numerator: MLaurent<Rat>,
}

fn check_shape(f: &dyn PointFn) -> Result<u64> {
    let q = f.q();
    if f.dim() != 5 || f.copies() != 2 {
        return Err(SpinError::Dimension { expected: 5, got: f.dim() });
    }
    if f.window() != (Window { a: 1, b: 2 }) {
        return Err(SpinError::Window);
    }
    let evals = ipow(q, 17) as u64;
    if evals > MAX_EVALS {
        return Err(SpinError::Guardrail(format!("shortcut enumeration needs {evals} evaluations")));
    }
    Ok(q)
}

/// Sampled checks of positivity, support in L × q⁻¹L and invariance under
/// qL × q²L on random keys.
fn sampled_conditions(f: &dyn PointFn, samples: usize) -> (bool, bool) {
    let q = f.q() as i64;
    let m = q.pow(3);
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let (mut nonneg, mut inv) = (true, true);
    for i in 0..samples {
        let mut pt: Vec<i64> = (0..10).map(|_| rng.gen_range(0..m)).collect();
        // half the samples start inside L × q⁻¹L
        if i % 2 == 0 {
            for x in &mut pt[..5] {
                *x = *x * q % m;
            }
        }
        let v = f.eval(&pt);
        if v < Rat::zero() {
            nonneg = false;
        }
        let in_l = pt[..5].iter().all(|x| x % q == 0);
        if !in_l && !v.is_zero() {
            inv = false;
        }
        let mut moved = pt.clone();
        let j = rng.gen_range(0..5);
        moved[j] = (moved[j] + q * q * rng.gen_range(1..q)) % m;
        if f.eval(&moved) != v {
            inv = false;
        }
    }
    (nonneg, inv)
}

/// Integer-valued enumeration of φ over x ∈ L/qL and y ∈ q⁻¹L/q²L with
/// y·v₁ ∈ q²ℤ, bucketed by (x·v₁ mod q, q·y·v₂ mod q³).
struct Buckets {
    q: i64,
    counts: Vec<Rat>,
    nonneg: bool,
    nonzero: bool,
}

fn enumerate(f: &dyn PointFn) -> Buckets {
    let q = f.q() as i64;
    let m = q.pow(3);
    let mut small = vec![0i64; (q * m) as usize];
    let mut counts = vec![Rat::zero(); (q * m) as usize];
    let (mut nonneg, mut nonzero) = (true, false);
    let mut pt = [0i64; 10];
    super::for_each_offset(5, q, |x| {
        for i in 0..5 {
            pt[i] = q * x[i];
        }
        // y coordinates 0, 1, 2, 4 free; y₁* (index 3) is 0 mod q³
        super::for_each_offset(4, m, |y| {
            pt[5] = y[0];
            pt[6] = y[1];
            pt[7] = y[2];
            pt[8] = 0;
            pt[9] = y[3];
            let bucket = (x[3] * m + y[3]) as usize;
            match f.eval_small(&pt) {
                Some(0) => {}
                Some(v) => {
                    nonzero = true;
                    nonneg &= v > 0;
                    small[bucket] += v;
                }
                None => {
                    let v = f.eval(&pt);
                    nonneg &= v > Rat::zero();
                    nonzero = true;
                    counts[bucket] += v;
                }
            }
        });
    });
    for (c, s) in counts.iter_mut().zip(small) {
        *c += rint(s);
    }
    Buckets { q, counts, nonneg, nonzero }
}

fn class(k: i64, q: i64, lo: i64, hi: i64) -> i64 {
    // k·q^{lo} runs over q^{lo}ℤ/q^{hi}ℤ; classes are valuations, hi for the tail
    if k == 0 {
        return hi;
    }
    let mut v = 0;
    let mut k = k;
    while k % q == 0 {
        k /= q;
        v += 1;
    }
    (lo + v).min(hi)
}

/// c(t₁, t₂) for t₁ = j/q (j mod q) and t₂ = k/q² (k mod q³), reduced to
/// valuation classes; fails if c is not rational and constant on them.
fn c_classes(b: &Buckets) -> Result<BTreeMap<(i64, i64), Rat>> {
    let q = b.q;
    let m = q.pow(3);
    // dx = q^{-5} per x coset, dy = q^{-10} per y coset, times vol(q⁻²ℤ)
    let vol = Rat::new(1.into(), (q.pow(13)).into());
    let mut out: BTreeMap<(i64, i64), Rat> = BTreeMap::new();
    for j in 0..q {
        for k in 0..m {
            let mut acc = CycloAcc::new(m as u64);
            for x1 in 0..q {
                for y2 in 0..m {
                    let c = &b.counts[(x1 * m + y2) as usize];
                    if !c.is_zero() {
                        // ψ(j x₁*/q + k Y₂*/q³)
                        acc.add((j * x1 * q * q + k * y2).rem_euclid(m) as usize, c);
                    }
                }
            }
            let v = acc.finish().as_rat().ok_or_else(|| SpinError::Input("c is not rational".into()))? * &vol;
            let key = (class(j, q, -1, 0), class(k, q, -2, 1));
            match out.get(&key) {
                Some(prev) if *prev != v => return Err(SpinError::Input(format!("c is not radial at {key:?}"))),
                Some(_) => {}
                None => {
                    out.insert(key, v);
                }
            }
        }
    }
    Ok(out)
}

/// Σ over the grid of mixed backward differences of c times u₁^{k₁}u₂^{k₂}:
/// the numerator of f_χ(c) over (1 − u₁)(1 − u₂), in three variables with
/// the third unused.
fn numerator(c: &BTreeMap<(i64, i64), Rat>) -> MLaurent<Rat> {
    let at = |a: i64, b: i64| -> Rat {
        if a < -1 || b < -2 {
            Rat::zero()
        } else {
            c.get(&(a.min(0), b.min(1))).cloned().unwrap_or_else(Rat::zero)
        }
    };
    let mut out = MLaurent::zero(3);
    for k1 in -1..=0 {
        for k2 in -2..=1 {
            let d = at(k1, k2) - at(k1 - 1, k2) - at(k1, k2 - 1) + at(k1 - 1, k2 - 1);
            if !d.is_zero() {
                out.add_term(vec![k1, k2, 0], d);
            }
        }
    }
    out
}

/// uᵢ = χᵢ^w(q)·q^{-1/2} in the variables (x₁, x₂, s).
fn substitute(n: &MLaurent<Rat>, w: WeylElt) -> MLaurent<Rat> {
    let src = |i: usize| if w.swap { 1 - i } else { i };
    let rows: Vec<Vec<i64>> = (0..2)
        .map(|i| {
            let mut r = vec![0i64; 3];
            r[src(i)] = w.signs[i];
            r[2] = -1;
            r
        })
        .chain(std::iter::once(vec![0, 0, 1]))
        .collect();
    n.monomial_substitute(&rows)
}

/// The hypotheses, evaluated without computing c.
pub fn shortcut_conditions(f: &dyn PointFn) -> Result<Conditions> {
    check_shape(f)?;
    let (nonneg, inv) = sampled_conditions(f, 4000);
    let b = enumerate(f);
    Ok(Conditions { nonnegative: nonneg && b.nonneg, support_invariance: inv, nonzero_on_y1: b.nonzero })
}

/// The criterion: `None` when a hypothesis fails, otherwise the first
/// Weyl conjugate (in [`WeylElt::all`] order) with f_{χ^w}(c) ≠ 0.
pub fn shortcut_criterion(f: &dyn PointFn) -> Result<Option<ShortcutWitness>> {
    check_shape(f)?;
    let (nonneg, inv) = sampled_conditions(f, 4000);
    if !(nonneg && inv) {
        return Ok(None);
    }
    let b = enumerate(f);
    if !(b.nonneg && b.nonzero) {
        return Ok(None);
    }
    let c = c_classes(&b)?;
    let n = numerator(&c);
    for w in WeylElt::all() {
        let s = substitute(&n, w);
        if !s.is_zero() {
            return Ok(Some(ShortcutWitness { w, c, numerator: s }));
        }
    }
    Ok(None)
}

/// c(ℤ_q, qℤ_q), which the hypotheses force to be positive.
pub fn c_at_origin(w: &ShortcutWitness) -> Rat {
    w.c.get(&(0, 1)).cloned().unwrap_or_else(Rat::zero)
}

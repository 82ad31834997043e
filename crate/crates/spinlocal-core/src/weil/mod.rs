//! Schwartz functions on Vⁿ ⊗ ℚ_q and the operators of the Weil
//! representation: orthogonal translation, unipotent characters, Levi
//! rescaling and the full Fourier transform.
//!
//! A function with window (a, b) is supported on q^{-a}L₀ⁿ and invariant
//! under q^bL₀ⁿ, where L₀ = ℤ_q^d is self-dual for the Gram matrix. A coset
//! x + q^bL₀ⁿ is keyed by the integer vector q^a·x mod q^{a+b}, copy by
//! copy. Eighth roots of unity coming from γ_w and χ_ψ are not computed;
//! each operator that would produce one bumps a unit counter instead.

mod fchi;
mod shortcut;
mod stable;

pub use fchi::{
    c_chi_tot, expected_c_chi_coefficient, f_chi, f_chi_lemma, vandermonde_det, vandermonde_rank_mod_p, CChiTot, RadialFn,
};
pub use shortcut::{c_at_origin, shortcut_conditions, shortcut_criterion, Conditions, ShortcutWitness, WeylElt};
pub use stable::{expected_s, psi_weights, s_table, s_table_brute, s_table_checks, s_tot_radial, sample_points, STable, SVariant};

use std::collections::BTreeMap;

use num::integer::Integer;
use num::{One, ToPrimitive, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::arith::{
    additive_character, ipow, rat_from_str, rat_mod, rat_pow, rat_to_string, rint, val_q, CycloField, CycloScalar,
    Rat,
};
use crate::error::{Result, SpinError};
use crate::spaces::{det, inverse, mat_mul, transpose, QuadSpace, RatMat};

/// Largest number of cosets an operator will materialize.
pub const MAX_CELLS: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Window {
    pub a: i32,
    pub b: i32,
}

impl Window {
    pub fn new(a: i32, b: i32) -> Result<Window> {
        if a + b < 0 {
            return Err(SpinError::Window);
        }
        Ok(Window { a, b })
    }

    /// a + b: the number of q-adic digits per coordinate.
    pub fn depth(&self) -> u32 {
        (self.a + self.b) as u32
    }

    pub fn join(&self, o: &Window) -> Window {
        Window { a: self.a.max(o.a), b: self.b.max(o.b) }
    }

    pub fn contains(&self, o: &Window) -> bool {
        self.a >= o.a && self.b >= o.b
    }
}

/// A cyclotomic value times q^{half_q/2}, with `unit` undetermined
/// root-of-unity factors.
#[derive(Clone, Debug)]
pub struct TrackedScalar {
    pub value: CycloScalar,
    pub half_q: i64,
    pub unit: u32,
}

impl TrackedScalar {
    pub fn new(value: CycloScalar) -> TrackedScalar {
        TrackedScalar { value, half_q: 0, unit: 0 }
    }

    pub fn mul(&self, o: &TrackedScalar) -> TrackedScalar {
        TrackedScalar { value: self.value.mul(&o.value), half_q: self.half_q + o.half_q, unit: self.unit + o.unit }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Fold the even part of the q^{1/2} power into the value.
    pub fn normalized(&self, q: u64) -> (CycloScalar, i64) {
        let h = self.half_q.rem_euclid(2);
        let e = (self.half_q - h) / 2;
        (self.value.scale(&rat_pow(&rint(q as i64), e)), h)
    }

    /// Equality ignoring the unit factors.
    pub fn eq_up_to_unit(&self, o: &TrackedScalar, q: u64) -> bool {
        if self.is_zero() || o.is_zero() {
            return self.is_zero() && o.is_zero();
        }
        self.normalized(q) == o.normalized(q)
    }
}

/// Functions that can be evaluated pointwise without being stored. Points
/// are integer vectors X = q^a·x for the window (a, b), in any range.
pub trait PointFn {
    fn q(&self) -> u64;
    fn dim(&self) -> usize;
    fn copies(&self) -> usize;
    fn window(&self) -> Window;
    fn eval(&self, pt: &[i64]) -> Rat;
    /// The value when it is a machine integer; implementors on hot paths
    /// override this to skip the rational.
    fn eval_small(&self, pt: &[i64]) -> Option<i64> {
        let v = self.eval(pt);
        if v.is_integer() {
            v.to_integer().to_i64()
        } else {
            None
        }
    }
}

#[derive(Clone, Debug)]
pub struct SchwartzFn {
    pub q: u64,
    pub space: QuadSpace,
    pub n: usize,
    pub window: Window,
    pub values: BTreeMap<Vec<i64>, CycloScalar>,
    pub half_q: i64,
    pub unit: u32,
}

fn integral_gram(space: &QuadSpace, q: u64) -> Result<Vec<Vec<i64>>> {
    let g: Option<Vec<Vec<i64>>> =
        space.gram.iter().map(|r| r.iter().map(|x| x.is_integer().then(|| x.to_integer().to_i64()).flatten()).collect()).collect();
    let g = g.ok_or_else(|| SpinError::Input("Gram matrix must be integral".into()))?;
    let d = det(&space.gram);
    if d.is_zero() || val_q(&d, q) != 0 {
        return Err(SpinError::Input(format!("standard lattice is not self-dual at {q}")));
    }
    Ok(g)
}

impl SchwartzFn {
    pub fn zero(q: u64, space: QuadSpace, n: usize, window: Window) -> Result<SchwartzFn> {
        if q % 2 == 0 || !crate::arith::is_prime(q) {
            return Err(SpinError::NotOddPrime(q));
        }
        integral_gram(&space, q)?;
        Window::new(window.a, window.b)?;
        Ok(SchwartzFn { q, space, n, window, values: BTreeMap::new(), half_q: 0, unit: 0 })
    }

    /// 1_{L₀ⁿ}.
    pub fn lattice_indicator(q: u64, space: QuadSpace, n: usize) -> Result<SchwartzFn> {
        let mut f = SchwartzFn::zero(q, space, n, Window { a: 0, b: 0 })?;
        let len = f.len();
        f.values.insert(vec![0; len], CycloScalar::from_int(1));
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Number of coordinates d·n.
    pub fn len(&self) -> usize {
        self.dim() * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn modulus(&self) -> i64 {
        ipow(self.q, self.window.depth()) as i64
    }

    pub fn cells(&self) -> u64 {
        (self.modulus() as u64).saturating_pow(self.len() as u32)
    }

    fn gram(&self) -> Vec<Vec<i64>> {
        integral_gram(&self.space, self.q).expect("checked on construction")
    }

    fn reduce_key(&self, key: &[i64]) -> Vec<i64> {
        let m = self.modulus();
        key.iter().map(|x| x.rem_euclid(m)).collect()
    }

    /// Set the value on the coset keyed by `key` (reduced mod q^{a+b}).
    pub fn set(&mut self, key: &[i64], v: CycloScalar) {
        assert_eq!(key.len(), self.len());
        let k = self.reduce_key(key);
        if v.is_zero() {
            self.values.remove(&k);
        } else {
            self.values.insert(k, v);
        }
    }

    pub fn get(&self, key: &[i64]) -> CycloScalar {
        self.values.get(&self.reduce_key(key)).cloned().unwrap_or_else(|| CycloScalar::from_int(0))
    }

    pub fn tracked(&self, v: CycloScalar) -> TrackedScalar {
        TrackedScalar { value: v, half_q: self.half_q, unit: self.unit }
    }

    /// φ(x) at a rational point of Vⁿ (coordinates copy by copy).
    pub fn value_at(&self, x: &[Rat]) -> TrackedScalar {
        let s = rat_pow(&rint(self.q as i64), self.window.a as i64);
        let mut key = Vec::with_capacity(x.len());
        for c in x {
            let y = c * &s;
            if val_q(&y, self.q) < 0 {
                return self.tracked(CycloScalar::from_int(0));
            }
            key.push(rat_mod(&y, self.q, self.window.depth()).unwrap() as i64);
        }
        self.tracked(self.get(&key))
    }

    /// The same function on a finer window.
    pub fn refine(&self, w: Window) -> Result<SchwartzFn> {
        if !w.contains(&self.window) {
            return Err(SpinError::Window);
        }
        let da = (w.a - self.window.a) as u32;
        let db = (w.b - self.window.b) as u32;
        let spread = ipow(self.q, db) as i64;
        let per = (spread as u64).saturating_pow(self.len() as u32);
        if per.saturating_mul(self.values.len() as u64) > MAX_CELLS {
            return Err(SpinError::Precision { needed: w.depth() as i64, have: self.window.depth() as i64 });
        }
        let scale = ipow(self.q, da) as i64;
        let step = ipow(self.q, (w.a + self.window.b) as u32) as i64;
        let mut out = SchwartzFn { window: w, values: BTreeMap::new(), ..self.clone() };
        for (k, v) in &self.values {
            let base: Vec<i64> = k.iter().map(|x| x * scale).collect();
            for_each_offset(self.len(), spread, |off| {
                let key: Vec<i64> = base.iter().zip(off).map(|(b, o)| b + step * o).collect();
                out.values.insert(key, v.clone());
            });
        }
        Ok(out)
    }

    /// Equality as functions, with the q^{1/2} powers folded in and the
    /// unit counters ignored.
    pub fn same_function(&self, o: &SchwartzFn) -> bool {
        if self.q != o.q || self.n != o.n || self.space.gram != o.space.gram {
            return false;
        }
        let w = self.window.join(&o.window);
        let (Ok(a), Ok(b)) = (self.refine(w), o.refine(w)) else { return false };
        if a.values.is_empty() || b.values.is_empty() {
            return a.values.is_empty() && b.values.is_empty();
        }
        if a.values.len() != b.values.len() {
            return false;
        }
        a.values.iter().all(|(k, v)| match b.values.get(k) {
            Some(u) => a.tracked(v.clone()).eq_up_to_unit(&b.tracked(u.clone()), a.q),
            None => false,
        })
    }

    /// x ↦ φ(−x).
    pub fn reflect(&self) -> SchwartzFn {
        let m = self.modulus();
        let values = self.values.iter().map(|(k, v)| (k.iter().map(|x| (-x).rem_euclid(m)).collect(), v.clone())).collect();
        SchwartzFn { values, ..self.clone() }
    }

    /// Pointwise sum; both summands must carry the same tracking.
    pub fn add(&self, o: &SchwartzFn) -> Result<SchwartzFn> {
        if self.half_q != o.half_q || self.unit != o.unit || self.space.gram != o.space.gram || self.n != o.n {
            return Err(SpinError::Input("summands carry different scalar tracking".into()));
        }
        let w = self.window.join(&o.window);
        let mut a = self.refine(w)?;
        for (k, v) in o.refine(w)?.values {
            let s = a.get(&k).add(&v);
            a.set(&k, s);
        }
        Ok(a)
    }

    pub fn scale(&self, c: &Rat) -> SchwartzFn {
        let mut out = SchwartzFn { values: BTreeMap::new(), ..self.clone() };
        for (k, v) in &self.values {
            out.set(k, v.scale(c));
        }
        out
    }

    /// ∫|φ|² with the self-dual measure, as (value, half-power of q).
    pub fn l2_mass(&self) -> (CycloScalar, i64) {
        let vol = rat_pow(&rint(self.q as i64), -(self.window.b as i64) * self.len() as i64);
        let s = self.values.values().fold(CycloScalar::from_int(0), |s, v| s.add(&v.mul(&v.conj())));
        (s.scale(&vol), 2 * self.half_q)
    }

    /// A function with `support` random cosets carrying small nonzero
    /// integer values.
    pub fn random(q: u64, space: QuadSpace, n: usize, window: Window, support: usize, rng: &mut impl Rng) -> Result<SchwartzFn> {
        let mut f = SchwartzFn::zero(q, space, n, window)?;
        let m = f.modulus();
        let len = f.len();
        for _ in 0..support {
            let key: Vec<i64> = (0..len).map(|_| rng.gen_range(0..m)).collect();
            let v = loop {
                let v = rng.gen_range(-3i64..=3);
                if v != 0 {
                    break v;
                }
            };
            f.set(&key, CycloScalar::from_int(v));
        }
        Ok(f)
    }

    /// Materialize a pointwise-defined function on its window.
    pub fn from_point_fn(f: &dyn PointFn, space: QuadSpace) -> Result<SchwartzFn> {
        let mut out = SchwartzFn::zero(f.q(), space, f.copies(), f.window())?;
        if out.dim() != f.dim() {
            return Err(SpinError::Dimension { expected: out.dim(), got: f.dim() });
        }
        if out.cells() > MAX_CELLS {
            return Err(SpinError::Guardrail(format!("{} cosets", out.cells())));
        }
        let m = out.modulus();
        for_each_offset(out.len(), m, |key| {
            let v = f.eval(key);
            if !v.is_zero() {
                out.values.insert(key.to_vec(), CycloScalar::from_rat(v));
            }
        });
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self.values.iter().map(|(k, v)| json!({"coords": k, "value": cyclo_to_json(v)})).collect();
        let gram: Vec<Vec<String>> = self.space.gram.iter().map(|r| r.iter().map(rat_to_string).collect()).collect();
        json!({
            "space": {"q": self.q, "gram": gram},
            "n": self.n,
            "window": [self.window.a, self.window.b],
            "half_q": self.half_q,
            "unit": self.unit,
            "entries": entries,
        })
    }

    pub fn from_json(v: &Value) -> Result<SchwartzFn> {
        let bad = |s: &str| SpinError::Input(format!("Schwartz function JSON: {s}"));
        let q = v["space"]["q"].as_u64().ok_or_else(|| bad("space.q"))?;
        let gram: Option<RatMat> = v["space"]["gram"]
            .as_array()
            .ok_or_else(|| bad("space.gram"))?
            .iter()
            .map(|r| r.as_array().and_then(|r| r.iter().map(crate::arith::serde_rat::parse_value).collect()))
            .collect();
        let space = QuadSpace::new(gram.ok_or_else(|| bad("gram entries"))?)?;
        let n = v["n"].as_u64().ok_or_else(|| bad("n"))? as usize;
        let w = v["window"].as_array().ok_or_else(|| bad("window"))?;
        let (a, b) = (w.first().and_then(Value::as_i64), w.get(1).and_then(Value::as_i64));
        let window = Window::new(a.ok_or_else(|| bad("window"))? as i32, b.ok_or_else(|| bad("window"))? as i32)?;
        let mut f = SchwartzFn::zero(q, space, n, window)?;
        f.half_q = v["half_q"].as_i64().unwrap_or(0);
        f.unit = v["unit"].as_u64().unwrap_or(0) as u32;
        for e in v["entries"].as_array().ok_or_else(|| bad("entries"))? {
            let key: Option<Vec<i64>> = e["coords"].as_array().map(|c| c.iter().filter_map(Value::as_i64).collect());
            let key = key.filter(|k| k.len() == f.len()).ok_or_else(|| bad("coords"))?;
            f.set(&key, cyclo_from_json(&e["value"]).ok_or_else(|| bad("value"))?);
        }
        Ok(f)
    }
}

fn cyclo_to_json(v: &CycloScalar) -> Value {
    match v.as_rat() {
        Some(r) => json!(rat_to_string(&r)),
        None => json!({"m": v.m, "c": v.c.iter().map(rat_to_string).collect::<Vec<_>>()}),
    }
}

fn cyclo_from_json(v: &Value) -> Option<CycloScalar> {
    if let Some(s) = v.as_str() {
        return Some(CycloScalar::from_rat(rat_from_str(s)?));
    }
    if let Some(n) = v.as_i64() {
        return Some(CycloScalar::from_int(n));
    }
    let m = v["m"].as_u64()?;
    let c: Option<Vec<Rat>> = v["c"].as_array()?.iter().map(|x| rat_from_str(x.as_str()?)).collect();
    let c = c?;
    (c.len() == CycloField::get(m).phi).then_some(CycloScalar { m, c })
}

/// Visit every vector in (ℤ/m)^len in lexicographic order.
pub fn for_each_offset(len: usize, m: i64, mut f: impl FnMut(&[i64])) {
    let mut v = vec![0i64; len];
    loop {
        f(&v);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            v[i] += 1;
            if v[i] < m {
                break;
            }
            v[i] = 0;
        }
    }
}

fn mat_mod(g: &RatMat, q: u64, k: u32) -> Option<Vec<Vec<i64>>> {
    g.iter().map(|r| r.iter().map(|x| rat_mod(x, q, k).map(|v| v as i64)).collect()).collect()
}

fn is_q_integral(g: &RatMat, q: u64) -> bool {
    g.iter().flatten().all(|x| x.is_zero() || val_q(x, q) >= 0)
}

/// (g·φ)(x) = φ(g⁻¹x) for g ∈ O(V) with g, g⁻¹ integral at q (so g
/// stabilizes L₀ and the window is unchanged).
pub fn act_orthogonal(g: &RatMat, phi: &SchwartzFn) -> Result<SchwartzFn> {
    let d = phi.dim();
    if g.len() != d || g.iter().any(|r| r.len() != d) {
        return Err(SpinError::Dimension { expected: d, got: g.len() });
    }
    if mat_mul(&mat_mul(&transpose(g), &phi.space.gram), g) != phi.space.gram {
        return Err(SpinError::Input("g does not preserve the Gram matrix".into()));
    }
    let gi = inverse(g)?;
    if !is_q_integral(g, phi.q) || !is_q_integral(&gi, phi.q) {
        return Err(SpinError::Window);
    }
    let gm = mat_mod(g, phi.q, phi.window.depth()).expect("q-integral");
    let m = phi.modulus() as i128;
    let mut out = SchwartzFn { values: BTreeMap::new(), ..phi.clone() };
    for (k, v) in &phi.values {
        // φ(g⁻¹x) = v exactly when x = g·(stored point)
        let key: Vec<i64> = k
            .chunks(d)
            .flat_map(|x| {
                gm.iter()
                    .map(|r| (r.iter().zip(x).map(|(a, b)| *a as i128 * *b as i128).sum::<i128>().rem_euclid(m)) as i64)
                    .collect::<Vec<_>>()
            })
            .collect();
        out.values.insert(key, v.clone());
    }
    Ok(out)
}

/// Multiply by ψ(½·Σᵢⱼ u_ij xᵢ·xⱼ) for a symmetric n×n matrix u. The
/// window is refined when the character would not be constant on cosets;
/// the error is reported when that refinement is too large.
pub fn act_unipotent(u: &RatMat, phi: &SchwartzFn) -> Result<SchwartzFn> {
    let n = phi.n;
    if u.len() != n || u.iter().any(|r| r.len() != n) {
        return Err(SpinError::Dimension { expected: n, got: u.len() });
    }
    if (0..n).any(|i| (0..n).any(|j| u[i][j] != u[j][i])) {
        return Err(SpinError::Input("u must be symmetric".into()));
    }
    let q = phi.q;
    let k = u.iter().flatten().filter(|x| !x.is_zero()).map(|x| -val_q(x, q)).max().unwrap_or(0).max(0) as i32;
    let w = phi.window;
    let need_b = w.b.max(w.a + k).max((k + 1) / 2);
    let phi = if need_b > w.b {
        phi.refine(Window { a: w.a, b: need_b }).map_err(|_| SpinError::DepthTooSmall { depth: w.b as i64, val: need_b as i64 })?
    } else {
        phi.clone()
    };
    let d = phi.dim();
    let g = phi.gram();
    let depth = (2 * phi.window.a + k).max(0) as u32;
    // every stored value becomes dense in ℚ(ζ_{8q^depth})
    let width = CycloField::get(8 * ipow(q, depth) as u64).phi as u64;
    if (phi.values.len() as u64).saturating_mul(width) > MAX_CELLS * 4 {
        return Err(SpinError::Guardrail(format!("{} cosets in a field of degree {width}", phi.values.len())));
    }
    let denom = rint(2) * rat_pow(&rint(q as i64), 2 * phi.window.a as i64);
    let mut out = SchwartzFn { values: BTreeMap::new(), ..phi.clone() };
    for (key, v) in &phi.values {
        let xs: Vec<&[i64]> = key.chunks(d).collect();
        let mut s = Rat::zero();
        for i in 0..n {
            for j in 0..n {
                if u[i][j].is_zero() {
                    continue;
                }
                s += &u[i][j] * rint(pair_int(&g, xs[i], xs[j]) as i64);
            }
        }
        let arg = s / &denom;
        let chi = additive_character(&arg, q, depth)?;
        out.set(key, v.mul(&chi));
    }
    Ok(out)
}

fn pair_int(g: &[Vec<i64>], x: &[i64], y: &[i64]) -> i128 {
    let mut s = 0i128;
    for (i, r) in g.iter().enumerate() {
        if x[i] == 0 {
            continue;
        }
        for (j, c) in r.iter().enumerate() {
            if *c != 0 {
                s += x[i] as i128 * *c as i128 * y[j] as i128;
            }
        }
    }
    s
}

/// Which copy feeds which under a monomial matrix: row i of M = mᵗ has
/// its entry c·q^k in column π(i).
struct Monomial {
    perm: Vec<usize>,
    unit: Vec<Rat>,
    exp: Vec<i64>,
}

fn monomial_parts(mt: &RatMat, q: u64) -> Result<Monomial> {
    let n = mt.len();
    let mut perm = vec![0; n];
    let mut unit = vec![Rat::zero(); n];
    let mut exp = vec![0; n];
    let mut seen = vec![false; n];
    for i in 0..n {
        let nz: Vec<usize> = (0..n).filter(|&j| !mt[i][j].is_zero()).collect();
        if nz.len() != 1 || seen[nz[0]] {
            return Err(SpinError::Input("Levi element must be a monomial matrix".into()));
        }
        let j = nz[0];
        seen[j] = true;
        perm[i] = j;
        exp[i] = val_q(&mt[i][j], q);
        unit[i] = &mt[i][j] / rat_pow(&rint(q as i64), exp[i]);
    }
    Ok(Monomial { perm, unit, exp })
}

/// ω(m)φ(x) = χ_ψ(m)|det m|^{d/2}φ(mᵗx) for m in GL_n whose entries form a
/// monomial pattern c·q^k with c a q-unit. χ_ψ(m) is recorded as one unit
/// factor when m ≠ 1.
pub fn act_levi(m: &RatMat, phi: &SchwartzFn) -> Result<SchwartzFn> {
    let n = phi.n;
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(SpinError::Dimension { expected: n, got: m.len() });
    }
    let q = phi.q;
    let mono = monomial_parts(&transpose(m), q)?;
    let kmax = *mono.exp.iter().max().unwrap();
    let kmin = *mono.exp.iter().min().unwrap();
    let w = phi.window;
    let nw = Window::new(w.a + kmax as i32, w.b - kmin as i32)?;
    let d = phi.dim();
    let mut out = SchwartzFn { window: nw, values: BTreeMap::new(), ..phi.clone() };
    if out.cells() > MAX_CELLS.saturating_mul(16) {
        return Err(SpinError::Window);
    }
    let nm = out.modulus() as i128;
    let qq = q as i128;
    // x_{π(i)} = c_i⁻¹q^{-k_i}·y_i; in keys X' = c_i⁻¹q^{a'−a−k_i}Y_i plus
    // offsets from the coarser invariance q^{b−k_i}L.
    let cinv: Vec<i128> = mono.unit.iter().map(|c| rat_mod(&c.recip(), q, nw.depth()).expect("unit")).collect();
    let mut spreads = vec![];
    for i in 0..n {
        let extra = nw.b - (w.b - mono.exp[i] as i32);
        let step = qq.pow((nw.a + w.b - mono.exp[i] as i32) as u32);
        spreads.push((qq.pow(extra as u32) as i64, step));
    }
    for (key, v) in &phi.values {
        let mut per_copy: Vec<Vec<Vec<i64>>> = vec![vec![]; n];
        for i in 0..n {
            let y = &key[i * d..(i + 1) * d];
            let sh = qq.pow((nw.a - w.a - mono.exp[i] as i32) as u32);
            let base: Vec<i128> = y.iter().map(|&c| (c as i128 * sh % nm * cinv[i]).rem_euclid(nm)).collect();
            let (spread, step) = spreads[i];
            let mut opts = vec![];
            for_each_offset(d, spread, |off| {
                opts.push(base.iter().zip(off).map(|(b, o)| ((b + step * *o as i128).rem_euclid(nm)) as i64).collect());
            });
            per_copy[mono.perm[i]] = opts;
        }
        let mut idx = vec![0usize; n];
        loop {
            let k: Vec<i64> = (0..n).flat_map(|c| per_copy[c][idx[c]].clone()).collect();
            out.values.insert(k, v.clone());
            let mut c = n;
            loop {
                if c == 0 {
                    break;
                }
                c -= 1;
                idx[c] += 1;
                if idx[c] < per_copy[c].len() {
                    break;
                }
                idx[c] = 0;
            }
            if idx.iter().all(|&x| x == 0) {
                break;
            }
        }
    }
    let ksum: i64 = mono.exp.iter().sum();
    out.half_q -= ksum * d as i64;
    let ident = (0..n).all(|i| mono.perm[i] == i && mono.exp[i] == 0 && mono.unit[i].is_one());
    if !ident {
        out.unit += 1;
    }
    Ok(out)
}

/// φ̂(x) = ∫φ(y)ψ(x·y)dy on Vⁿ with the self-dual measure; output window
/// (b, a). γ_w is one unit factor.
pub fn fourier_full(phi: &SchwartzFn) -> Result<SchwartzFn> {
    let w = phi.window;
    let out_w = Window { a: w.b, b: w.a };
    let big_q = phi.modulus();
    let conductor = phi.values.values().fold(big_q as u64, |m, v| m.lcm(&v.m));
    let mut out = SchwartzFn { window: out_w, values: BTreeMap::new(), unit: phi.unit + 1, ..phi.clone() };
    if phi.values.is_empty() {
        return Ok(out);
    }
    let vol = rat_pow(&rint(phi.q as i64), -(w.b as i64) * phi.len() as i64);
    let cells = phi.cells();
    let dense_ok = cells.saturating_mul(conductor) <= 1 << 24;
    let values = if dense_ok { dft_dense(phi, conductor)? } else { dft_sparse(phi, conductor) };
    for (k, v) in values {
        let v = v.scale(&vol);
        if !v.is_zero() {
            out.values.insert(k, v);
        }
    }
    Ok(out)
}

/// The transform by the defining sum, one output coset at a time.
pub fn fourier_naive(phi: &SchwartzFn) -> Result<SchwartzFn> {
    let w = phi.window;
    let big_q = phi.modulus();
    let conductor = phi.values.values().fold(big_q as u64, |m, v| m.lcm(&v.m));
    let mut out = SchwartzFn { window: Window { a: w.b, b: w.a }, values: BTreeMap::new(), unit: phi.unit + 1, ..phi.clone() };
    if phi.cells() > MAX_CELLS {
        return Err(SpinError::Guardrail(format!("{} cosets", phi.cells())));
    }
    let vol = rat_pow(&rint(phi.q as i64), -(w.b as i64) * phi.len() as i64);
    for (k, v) in dft_sparse(phi, conductor) {
        let v = v.scale(&vol);
        if !v.is_zero() {
            out.values.insert(k, v);
        }
    }
    Ok(out)
}

fn dft_sparse(phi: &SchwartzFn, conductor: u64) -> Vec<(Vec<i64>, CycloScalar)> {
    let d = phi.dim();
    let g = phi.gram();
    let big_q = phi.modulus() as i128;
    let step = conductor as i128 / big_q;
    let lifted: Vec<(Vec<i64>, CycloScalar)> = phi.values.iter().map(|(k, v)| (k.clone(), v.lift(conductor))).collect();
    let mut res = vec![];
    for_each_offset(phi.len(), big_q as i64, |x| {
        let mut acc = crate::arith::CycloAcc::new(conductor);
        for (y, v) in &lifted {
            let e: i128 = x.chunks(d).zip(y.chunks(d)).map(|(a, b)| pair_int(&g, a, b)).sum();
            acc.add_scaled(v, (e.rem_euclid(big_q) * step) as i64);
        }
        res.push((x.to_vec(), acc.finish()));
    });
    res
}

/// Separable transform: substitute z = G·y copy by copy so the pairing
/// becomes the dot product, then run one-dimensional DFTs along each axis
/// in the integral group ring ℤ[ℤ/M] with a common denominator.
fn dft_dense(phi: &SchwartzFn, conductor: u64) -> Result<Vec<(Vec<i64>, CycloScalar)>> {
    let d = phi.dim();
    let len = phi.len();
    let big_q = phi.modulus();
    let mm = conductor as usize;
    let cells = phi.cells() as usize;
    let mut den = num::BigInt::one();
    for v in phi.values.values() {
        for c in &v.c {
            den = den.lcm(c.denom());
        }
    }
    let den_i = den.to_i128().ok_or(SpinError::Precision { needed: 128, have: 64 })?;
    let gm = mat_mod(&phi.space.gram, phi.q, phi.window.depth()).expect("integral");
    let mut buf = vec![0i128; cells * mm];
    let index = |k: &[i64]| k.iter().fold(0usize, |s, &c| s * big_q as usize + c as usize);
    for (k, v) in &phi.values {
        let z: Vec<i64> = k
            .chunks(d)
            .flat_map(|y| {
                gm.iter().map(|r| r.iter().zip(y).map(|(a, b)| a * b).sum::<i64>().rem_euclid(big_q)).collect::<Vec<_>>()
            })
            .collect();
        let base = index(&z) * mm;
        let stepv = mm / v.m as usize;
        for (j, c) in v.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let num = (c * Rat::from_integer(den.clone())).to_integer().to_i128().ok_or(SpinError::Precision { needed: 128, have: 64 })?;
            buf[base + j * stepv] += num;
        }
    }
    let qz = mm / big_q as usize;
    let bq = big_q as usize;
    let mut line = vec![0i128; bq * mm];
    for axis in 0..len {
        let stride = bq.pow((len - 1 - axis) as u32);
        for start in 0..cells {
            if (start / stride) % bq != 0 {
                continue;
            }
            line.iter_mut().for_each(|x| *x = 0);
            for kk in 0..bq {
                for j in 0..bq {
                    let src = (start + j * stride) * mm;
                    let rot = (kk * j * qz) % mm;
                    let dst = kk * mm;
                    for t in 0..mm {
                        let c = buf[src + t];
                        if c != 0 {
                            line[dst + (t + rot) % mm] += c;
                        }
                    }
                }
            }
            for kk in 0..bq {
                let dst = (start + kk * stride) * mm;
                buf[dst..dst + mm].copy_from_slice(&line[kk * mm..(kk + 1) * mm]);
            }
        }
    }
    let field = CycloField::get(conductor);
    let dr = Rat::from_integer(den_i.into());
    let mut res = vec![];
    let mut key = vec![0i64; len];
    for cell in 0..cells {
        let slice = &buf[cell * mm..(cell + 1) * mm];
        if slice.iter().all(|&x| x == 0) {
            continue;
        }
        let mut c = vec![0i128; field.phi];
        for (j, &x) in slice.iter().enumerate() {
            if x != 0 {
                for (i, r) in field.reduction(j).iter().enumerate() {
                    c[i] += x * *r as i128;
                }
            }
        }
        if c.iter().all(|&x| x == 0) {
            continue;
        }
        let mut rem = cell;
        for i in (0..len).rev() {
            key[i] = (rem % bq) as i64;
            rem /= bq;
        }
        let v = CycloScalar { m: conductor, c: c.into_iter().map(|x| Rat::from_integer(x.into()) / &dr).collect() };
        res.push((key.clone(), v));
    }
    Ok(res)
}

/// φ̄(t₁,…,tₙ) = ∫φ(t₁v₁, t₂v₂ + a₁v₁, …)da on the split space
/// v₀, v₁…v_m, v₁*…v_m* with m ≥ n. The result lives on ℚ_qⁿ (a line per
/// copy, Gram (1)) with the same window.
pub fn phi_bar(phi: &SchwartzFn) -> Result<SchwartzFn> {
    let d = phi.dim();
    let n = phi.n;
    if d % 2 == 0 || (d - 1) / 2 < n || phi.space.gram != crate::spaces::split_quadratic((d - 1) / 2).gram {
        return Err(SpinError::Input("phi_bar needs the split space with m ≥ n".into()));
    }
    let line = QuadSpace::new(vec![vec![Rat::one()]])?;
    let mut out = SchwartzFn { space: line, values: BTreeMap::new(), ..phi.clone() };
    let m = phi.modulus();
    let na = n * (n - 1) / 2;
    if (m as u64).saturating_pow((n + na) as u32) > MAX_CELLS {
        return Err(SpinError::Window);
    }
    let da = rat_pow(&rint(phi.q as i64), -(phi.window.b as i64) * na as i64);
    for_each_offset(n, m, |t| {
        let mut acc = CycloScalar::from_int(0);
        for_each_offset(na, m, |a| {
            let mut key = vec![0i64; n * d];
            let mut ai = 0;
            for i in 0..n {
                key[i * d + 1 + i] = t[i];
                for j in 0..i {
                    key[i * d + 1 + j] = a[ai];
                    ai += 1;
                }
            }
            if let Some(v) = phi.values.get(&key) {
                acc = acc.add(v);
            }
        });
        let acc = acc.scale(&da);
        if !acc.is_zero() {
            out.values.insert(t.to_vec(), acc);
        }
    });
    Ok(out)
}

/// Valuation of an integer key coordinate relative to the window:
/// v_q(x) for x = X/q^a, capped at b.
pub fn coord_val(x: i64, q: u64, w: Window) -> i64 {
    if x == 0 {
        return w.b as i64;
    }
    let v = crate::arith::val_int(x as i128, q) as i64;
    (v - w.a as i64).min(w.b as i64)
}

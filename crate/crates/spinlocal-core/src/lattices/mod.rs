//! Full-rank ℤ_q-lattices in ℚ_q^d (d ≤ 5) in a canonical Hermite form.
//!
//! A lattice is stored as q^shift·M where M ⊆ ℤ^d, M ⊄ qℤ^d, and M is
//! upper triangular with diagonal q^{e_j} and entries (i, j), i < j,
//! reduced into [0, q^{e_i}). Two lattices are equal iff their stored data
//! agree, so the struct doubles as a hash key.
//!
//! Hot-path construction takes integer generators at a common scale plus a
//! promised floor q^f ℤ^d contained in the span, and runs the reduction
//! modulo q^{f-t}. The exact rational path in [`Lattice::from_rational_gens`]
//! computes the floor itself.

mod families;
mod form;
mod meets;
mod subspaces;
mod vertex;

pub use families::{is_siegel_pair, l_index, pa_index, symplectic_form, Family};
pub use form::Form;
pub use meets::{coset_invariant, meet_with_summand, orbit_meets, self_dual_neighbors};
pub use subspaces::{between, for_each_subspace, rref_mod, subspaces, Between};
pub use vertex::{is_integral, vl_type, Endo, VertexSpace};

use crate::arith::{ipow, modp, rat_mod, val_q, Rat};
use crate::error::{Result, SpinError};
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

pub const MAXD: usize = 5;
pub type IVec = [i128; MAXD];
const MAXG: usize = 28;

/// Largest P with q^P < 2^62.
pub fn pmax(q: u64) -> u32 {
    let mut p = 0;
    let mut x: i128 = 1;
    while x * (q as i128) < (1i128 << 62) {
        x *= q as i128;
        p += 1;
    }
    p
}

#[inline]
fn val_capped(x: i128, q: i128, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    if x as i64 as i128 == x && q as i64 as i128 == q {
        return val_w(x as i64, q as i64, cap);
    }
    let mut y = x;
    while v < cap && y % q == 0 {
        y /= q;
        v += 1;
    }
    v
}

/// Working integer for the modular Hermite reduction.
trait Word:
    Copy
    + PartialEq
    + PartialOrd
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Rem<Output = Self>
{
    const ZERO: Self;
    const ONE: Self;
    fn of(x: i128) -> Self;
    fn wide(self) -> i128;
}

impl Word for i64 {
    const ZERO: Self = 0;
    const ONE: Self = 1;
    fn of(x: i128) -> Self {
        x as i64
    }
    fn wide(self) -> i128 {
        self as i128
    }
}

impl Word for i128 {
    const ZERO: Self = 0;
    const ONE: Self = 1;
    fn of(x: i128) -> Self {
        x
    }
    fn wide(self) -> i128 {
        self
    }
}

#[inline]
fn md<T: Word>(x: T, m: T) -> T {
    let r = x % m;
    if r < T::ZERO {
        r + m
    } else {
        r
    }
}

#[inline]
fn val_w<T: Word>(x: T, q: T, cap: u32) -> u32 {
    if x == T::ZERO {
        return cap;
    }
    let mut v = 0;
    let mut y = x;
    while v < cap && y % q == T::ZERO {
        y = y / q;
        v += 1;
    }
    v
}

/// Inverse of a unit u modulo m (extended Euclid).
fn inv_w<T: Word>(u: T, m: T) -> T {
    let (mut a, mut b) = (md(u, m), m);
    let (mut x0, mut x1) = (T::ONE, T::ZERO);
    while b != T::ZERO {
        let k = a / b;
        let r = a - k * b;
        a = b;
        b = r;
        let x2 = x0 - k * x1;
        x0 = x1;
        x1 = x2;
    }
    assert!(a == T::ONE, "not a unit");
    md(x0, m)
}

/// Hermite reduction of q^t·span(gens) modulo q^pp.
fn hnf_mod<T: Word>(q: u64, d: usize, t: i32, gens: &[IVec], pp: u32) -> Lattice {
    let qq = T::of(q as i128);
    let pw_t = |k: u32| T::of(ipow(q, k));
    let big = pw_t(pp);
    let bigw = big.wide();
    let mut g = [[T::ZERO; MAXD]; MAXG];
    let mut n = 0;
    for v in gens {
        let mut w = [T::ZERO; MAXD];
        let mut nz = false;
        for i in 0..d {
            w[i] = T::of(modp(v[i], bigw));
            nz |= w[i] != T::ZERO;
        }
        if nz {
            assert!(n < MAXG, "too many generators");
            g[n] = w;
            n += 1;
        }
    }
    let mut cols = [[T::ZERO; MAXD]; MAXD];
    let mut e = [0u32; MAXD];
    for r in (0..d).rev() {
        let mut best = usize::MAX;
        let mut bv = pp;
        for (k, gk) in g.iter().enumerate().take(n) {
            if gk[r] != T::ZERO {
                let v = val_w(gk[r], qq, pp);
                if v < bv {
                    bv = v;
                    best = k;
                    if v == 0 {
                        break;
                    }
                }
            }
        }
        if best == usize::MAX {
            let mut c = [T::ZERO; MAXD];
            c[r] = big;
            cols[r] = c;
            e[r] = pp;
            continue;
        }
        let mut p = g[best];
        n -= 1;
        g[best] = g[n];
        let qv = pw_t(bv);
        let ui = inv_w(p[r] / qv, big);
        for x in p.iter_mut().take(r + 1) {
            *x = md(*x * ui, big);
        }
        for gk in g.iter_mut().take(n) {
            if gk[r] != T::ZERO {
                let f = gk[r] / qv;
                for i in 0..=r {
                    gk[i] = md(gk[i] - md(f * p[i], big), big);
                }
            }
        }
        if bv > 0 {
            let sc = pw_t(pp - bv);
            let mut o = [T::ZERO; MAXD];
            let mut nz = false;
            for i in 0..r {
                o[i] = md(p[i] * sc, big);
                nz |= o[i] != T::ZERO;
            }
            if nz {
                assert!(n < MAXG, "too many generators");
                g[n] = o;
                n += 1;
            }
        }
        // drop vectors that became zero
        let mut k = 0;
        while k < n {
            if g[k][..r].iter().all(|&x| x == T::ZERO) {
                n -= 1;
                g[k] = g[n];
            } else {
                k += 1;
            }
        }
        cols[r] = p;
        e[r] = bv;
    }
    let pw: Vec<T> = (0..d).map(|i| pw_t(e[i])).collect();
    for j in 0..d {
        for i in (0..j).rev() {
            let x = cols[j][i];
            let k = md(x, pw[i]);
            let k = (x - k) / pw[i];
            if k != T::ZERO {
                for t2 in 0..=i {
                    cols[j][t2] = md(cols[j][t2] - md(k * cols[i][t2], big), big);
                }
                cols[j][i] = md(x, pw[i]);
            }
        }
    }
    let mut mu = pp;
    for j in 0..d {
        mu = mu.min(e[j]);
        for i in 0..j {
            if cols[j][i] != T::ZERO {
                mu = mu.min(val_w(cols[j][i], qq, pp));
            }
        }
    }
    let qm = pw_t(mu);
    let mut m = [[0i64; MAXD]; MAXD];
    let mut ee = [0u8; MAXD];
    for j in 0..d {
        ee[j] = (e[j] - mu) as u8;
        for i in 0..=j {
            m[i][j] = (cols[j][i] / qm).wide() as i64;
        }
    }
    Lattice { q: q as u32, d: d as u8, shift: t + mu as i32, e: ee, m }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Lattice {
    pub q: u32,
    pub d: u8,
    pub shift: i32,
    pub e: [u8; MAXD],
    pub m: [[i64; MAXD]; MAXD],
}

/// Generators q^t·v_k with a promised floor.
pub struct Gens {
    pub t: i32,
    pub v: Vec<IVec>,
}

impl Lattice {
    pub fn dim(&self) -> usize {
        self.d as usize
    }

    /// The standard lattice ℤ_q^d.
    pub fn standard(q: u64, d: usize) -> Lattice {
        let mut m = [[0i64; MAXD]; MAXD];
        for (i, row) in m.iter_mut().enumerate().take(d) {
            row[i] = 1;
        }
        Lattice { q: q as u32, d: d as u8, shift: 0, e: [0; MAXD], m }
    }

    /// Lattice q^t·span(gens), given that q^floor·ℤ^d lies in it.
    pub fn from_scaled(q: u64, d: usize, t: i32, gens: &[IVec], floor: i32) -> Lattice {
        let pp = floor - t;
        assert!(pp >= 0, "floor {floor} below generator scale {t}");
        let pm = pmax(q);
        assert!(pp as u32 <= pm, "precision {pp} exceeds {pm} for q = {q}");
        let pp = pp as u32;
        let big = ipow(q, pp);
        // products of two residues must fit the working integer type
        if big < (1i128 << 31) {
            hnf_mod::<i64>(q, d, t, gens, pp)
        } else {
            hnf_mod::<i128>(q, d, t, gens, pp)
        }
    }

    /// Exact construction from rational generators (must span a full-rank lattice).
    pub fn from_rational_gens(q: u64, d: usize, gens: &[Vec<Rat>]) -> Result<Lattice> {
        if d == 0 || d > MAXD {
            return Err(SpinError::Dimension { expected: MAXD, got: d });
        }
        for g in gens {
            if g.len() != d {
                return Err(SpinError::Dimension { expected: d, got: g.len() });
            }
        }
        let mut g: Vec<Vec<Rat>> = gens.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
        let mut t_cols: Vec<Vec<Rat>> = vec![vec![]; d];
        for r in (0..d).rev() {
            let best = g
                .iter()
                .enumerate()
                .filter(|(_, v)| !v[r].is_zero())
                .min_by_key(|(_, v)| val_q(&v[r], q))
                .map(|(k, _)| k)
                .ok_or(SpinError::NotFullRank)?;
            let p = g.swap_remove(best);
            for v in g.iter_mut() {
                if !v[r].is_zero() {
                    let f = &v[r] / &p[r];
                    for i in 0..=r {
                        let t = &f * &p[i];
                        v[i] -= t;
                    }
                }
            }
            g.retain(|v| v.iter().any(|x| !x.is_zero()));
            t_cols[r] = p;
        }
        // floor from the inverse of the triangular basis T (columns t_cols)
        let mut tinv = vec![vec![Rat::zero(); d]; d];
        for c in 0..d {
            let mut x = vec![Rat::zero(); d];
            for i in (0..d).rev() {
                let mut b = if i == c { Rat::one() } else { Rat::zero() };
                for k in i + 1..d {
                    b -= &t_cols[k][i] * &x[k];
                }
                x[i] = b / &t_cols[i][i];
            }
            for i in 0..d {
                tinv[i][c] = x[i].clone();
            }
        }
        let minv = |it: &mut dyn Iterator<Item = &Rat>| {
            it.filter(|x| !x.is_zero()).map(|x| val_q(x, q)).min().unwrap_or(0)
        };
        let floor = -(minv(&mut tinv.iter().flatten()) as i32);
        let t = minv(&mut t_cols.iter().flatten()) as i32;
        let pp = (floor - t) as u32;
        if pp > pmax(q) {
            return Err(SpinError::Precision { needed: pp as i64, have: pmax(q) as i64 });
        }
        let scale = crate::arith::rat_pow(&Rat::from_integer((q as i64).into()), -(t as i64));
        let mut iv = vec![];
        for col in &t_cols {
            let mut w = [0i128; MAXD];
            for i in 0..d {
                w[i] = rat_mod(&(&col[i] * &scale), q, pp).expect("q-integral");
            }
            iv.push(w);
        }
        Ok(Lattice::from_scaled(q, d, t, &iv, floor))
    }

    /// Columns of M (unscaled); the lattice is q^shift times their span.
    pub fn cols(&self) -> Vec<IVec> {
        let d = self.dim();
        (0..d)
            .map(|j| {
                let mut c = [0i128; MAXD];
                for i in 0..=j {
                    c[i] = self.m[i][j] as i128;
                }
                c
            })
            .collect()
    }

    /// Basis vectors at scale t ≤ shift.
    pub fn cols_at(&self, t: i32) -> Vec<IVec> {
        assert!(t <= self.shift);
        let s = ipow(self.q as u64, (self.shift - t) as u32);
        self.cols().into_iter().map(|mut c| {
            for x in c.iter_mut() {
                *x *= s;
            }
            c
        }).collect()
    }

    pub fn basis_rat(&self) -> Vec<Vec<Rat>> {
        let s = crate::arith::rat_pow(&Rat::from_integer((self.q as i64).into()), self.shift as i64);
        self.cols().iter().map(|c| (0..self.dim()).map(|i| Rat::from_integer(c[i].into()) * &s).collect()).collect()
    }

    pub fn sum_e(&self) -> u32 {
        self.e.iter().take(self.dim()).map(|&x| x as u32).sum()
    }

    /// Covolume exponent: [ℤ_q^d : Λ] = q^{covol} (negative when Λ is larger).
    pub fn covol(&self) -> i64 {
        self.shift as i64 * self.d as i64 + self.sum_e() as i64
    }

    /// adj(M) = q^{Σe}·M^{-1}, computed exactly.
    pub fn adj(&self) -> [[i128; MAXD]; MAXD] {
        let d = self.dim();
        let q = self.q as u64;
        let big = ipow(q, self.sum_e());
        let mut x = [[0i128; MAXD]; MAXD];
        for c in 0..d {
            for i in (0..d).rev() {
                let mut b: i128 = if i == c { big } else { 0 };
                for k in i + 1..d {
                    b = b.checked_sub((self.m[i][k] as i128).checked_mul(x[k][c]).expect("adj overflow")).expect("adj overflow");
                }
                let pi = ipow(q, self.e[i] as u32);
                x[i][c] = if b as i64 as i128 == b && pi as i64 as i128 == pi {
                    (b as i64 / pi as i64) as i128
                } else {
                    b / pi
                };
            }
        }
        x
    }

    /// Smallest k with q^k ℤ^d ⊆ M.
    pub fn exponent(&self) -> u32 {
        let x = self.adj();
        let d = self.dim();
        let se = self.sum_e();
        let qq = self.q as i128;
        let mut mv = se;
        for row in x.iter().take(d) {
            for &v in row.iter().take(d) {
                if v != 0 {
                    mv = mv.min(val_capped(v, qq, se));
                }
            }
        }
        se - mv
    }

    /// Absolute floor: q^floor ℤ^d ⊆ Λ.
    pub fn floor(&self) -> i32 {
        self.shift + self.exponent() as i32
    }

    pub fn scale(&self, k: i32) -> Lattice {
        Lattice { shift: self.shift + k, ..*self }
    }

    /// Representative of the homothety class (shift 0).
    pub fn class_rep(&self) -> Lattice {
        Lattice { shift: 0, ..*self }
    }

    pub fn gens(&self) -> Gens {
        Gens { t: self.shift, v: self.cols() }
    }

    pub fn sum(&self, o: &Lattice) -> Lattice {
        assert_eq!((self.q, self.d), (o.q, o.d));
        let t = self.shift.min(o.shift);
        let mut g = self.cols_at(t);
        g.extend(o.cols_at(t));
        let f = self.floor().min(o.floor());
        Lattice::from_scaled(self.q as u64, self.dim(), t, &g, f)
    }

    /// Λ + span(extra), extra given at scale t.
    pub fn extend(&self, t: i32, extra: &[IVec]) -> Lattice {
        let t0 = self.shift.min(t);
        let mut g = self.cols_at(t0);
        let s = ipow(self.q as u64, (t - t0) as u32);
        for v in extra {
            let mut w = *v;
            for x in w.iter_mut() {
                *x *= s;
            }
            g.push(w);
        }
        Lattice::from_scaled(self.q as u64, self.dim(), t0, &g, self.floor())
    }

    /// Dual for the standard pairing Σ x_i y_i.
    pub fn std_dual(&self) -> Lattice {
        let x = self.adj();
        let d = self.dim();
        let se = self.sum_e() as i32;
        let rows: Vec<IVec> = (0..d).map(|i| {
            let mut r = [0i128; MAXD];
            r[..d].copy_from_slice(&x[i][..d]);
            r
        }).collect();
        Lattice::from_scaled(self.q as u64, d, -self.shift - se, &rows, -self.shift)
    }

    pub fn intersect(&self, o: &Lattice) -> Lattice {
        self.std_dual().sum(&o.std_dual()).std_dual()
    }

    /// v·q^t ∈ Λ.
    pub fn contains_scaled(&self, t: i32, v: &IVec) -> bool {
        Membership::new(self).contains_scaled(t, v)
    }

    pub fn contains_rat(&self, v: &[Rat]) -> bool {
        Membership::new(self).contains_rat(v)
    }

    pub fn contains_lattice(&self, o: &Lattice) -> bool {
        let mb = Membership::new(self);
        o.cols().iter().all(|c| mb.contains_scaled(o.shift, c))
    }

    /// log_q [sup : sub]; callers are responsible for sub ⊆ sup.
    pub fn colength(sub: &Lattice, sup: &Lattice) -> i64 {
        sub.covol() - sup.covol()
    }

    /// Apply an integral (over ℤ_(q)) matrix given modulo q^PMAX to the lattice.
    /// The matrix must be invertible over ℤ_q so the floor is preserved.
    pub fn map_unimodular(&self, a: &[[i128; MAXD]; MAXD]) -> Lattice {
        let d = self.dim();
        let q = self.q as u64;
        let f = self.floor();
        let big = ipow(q, (f - self.shift) as u32);
        let mut am = [[0i128; MAXD]; MAXD];
        for i in 0..d {
            for k in 0..d {
                am[i][k] = modp(a[i][k], big);
            }
        }
        // column entries lie in [0, big), so one reduction per product suffices
        let g: Vec<IVec> = self.cols().iter().map(|c| {
            let mut w = [0i128; MAXD];
            for i in 0..d {
                let mut s = 0i128;
                for k in 0..d {
                    s = modp(s + am[i][k] * c[k], big);
                }
                w[i] = s;
            }
            w
        }).collect();
        Lattice::from_scaled(q, d, self.shift, &g, f)
    }

    pub fn key(&self) -> String {
        format!("{}", self)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.dim();
        let rows: Vec<String> = (0..d)
            .map(|i| (0..d).map(|j| self.m[i][j].to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "q^{}[{}]", self.shift, rows.join(";"))
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Precomputed membership test for a fixed lattice.
pub struct Membership {
    q: u64,
    d: usize,
    shift: i32,
    se: u32,
    adj: [[i128; MAXD]; MAXD],
    floor: i32,
}

impl Membership {
    pub fn new(l: &Lattice) -> Self {
        Membership { q: l.q as u64, d: l.dim(), shift: l.shift, se: l.sum_e(), adj: l.adj(), floor: l.floor() }
    }

    pub fn contains_scaled(&self, t: i32, v: &IVec) -> bool {
        let (t, v) = match strip_content(t, v, self.q, self.d) {
            Some(x) => x,
            None => return true,
        };
        if t >= self.floor {
            return true;
        }
        if t < self.shift {
            return false;
        }
        // v·q^t ∈ q^s M  ⟺  adj·v ≡ 0 mod q^{Σe − (t − s)}
        let need = self.se as i32 - (t - self.shift);
        if need <= 0 {
            return true;
        }
        let k = need as u32;
        if k > pmax(self.q) {
            // only possible when v has huge negative valuation relative to Λ
            return v.iter().take(self.d).all(|&x| x == 0);
        }
        let big = ipow(self.q, k);
        let w: Vec<i128> = v.iter().take(self.d).map(|&x| modp(x, big)).collect();
        for i in 0..self.d {
            let mut s = 0i128;
            for kk in 0..self.d {
                s = modp(s + modp(self.adj[i][kk], big) * w[kk], big);
            }
            if s != 0 {
                return false;
            }
        }
        true
    }

    pub fn contains_rat(&self, v: &[Rat]) -> bool {
        let (t, w) = match scale_rat_vec(v, self.q, self.floor) {
            Some(x) => x,
            None => return true,
        };
        self.contains_scaled(t, &w)
    }
}

/// Move the q-content of v into the exponent; `None` for zero.
fn strip_content(t: i32, v: &IVec, q: u64, d: usize) -> Option<(i32, IVec)> {
    let qq = q as i128;
    let mut w = *v;
    let mut t = t;
    if w.iter().take(d).all(|&x| x == 0) {
        return None;
    }
    while w.iter().take(d).all(|&x| x % qq == 0) {
        for x in w.iter_mut() {
            *x /= qq;
        }
        t += 1;
    }
    Some((t, w))
}

/// Write a rational vector as q^t·w with w integral, keeping w modulo
/// q^{floor − t}. Returns `None` for the zero vector.
pub fn scale_rat_vec(v: &[Rat], q: u64, floor: i32) -> Option<(i32, IVec)> {
    let t = v.iter().filter(|x| !x.is_zero()).map(|x| val_q(x, q)).min()? as i32;
    if t >= floor {
        return Some((floor, [0; MAXD]));
    }
    let k = (floor - t) as u32;
    let qr = Rat::from_integer((q as i64).into());
    let s = crate::arith::rat_pow(&qr, -(t as i64));
    let mut w = [0i128; MAXD];
    for (i, x) in v.iter().enumerate() {
        w[i] = rat_mod(&(x * &s), q, k).unwrap();
    }
    Some((t, w))
}

/// Integer matrix over ℤ_(q) reduced modulo q^PMAX (unit denominators inverted).
pub fn mat_mod(a: &[Vec<Rat>], q: u64) -> Result<[[i128; MAXD]; MAXD]> {
    let p = pmax(q);
    let mut out = [[0i128; MAXD]; MAXD];
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            out[i][j] = rat_mod(x, q, p).ok_or(SpinError::Input("matrix not q-integral".into()))?;
        }
    }
    Ok(out)
}

/// Is the rational matrix in GL_d(ℤ_q)?
pub fn is_unimodular(a: &[Vec<Rat>], q: u64) -> bool {
    let integral = a.iter().flatten().all(|x| x.is_zero() || val_q(x, q) >= 0);
    let dt = crate::spaces::det(&a.to_vec());
    integral && !dt.is_zero() && val_q(&dt, q) == 0
}

//! The named test functions on V² for the split five-dimensional V, and the
//! lattice-chain description of T_ℓ^∘ on the split four-dimensional space.
//!
//! The functions on V² have too many cosets to store, so they are pointwise
//! predicates on keys X = q·x, Y = q·y (window (1, 2)).

use num::{One, Zero};
use rand::Rng;

use crate::arith::{legendre, rat, rint, Rat};
use crate::error::Result;
use crate::lattices::{Form, Lattice};
use crate::report::Check;
use crate::spaces::{mat_from_ints, split_even, split_quadratic, QuadSpace, RatMat};
use crate::weil::{PointFn, Window};

const INF: u32 = 99;

fn v(x: i128, q: u64) -> u32 {
    if x == 0 {
        INF
    } else {
        crate::arith::val_int(x, q)
    }
}

fn gram_of(space: &QuadSpace) -> Vec<Vec<i64>> {
    space.gram.iter().map(|r| r.iter().map(|x| x.to_integer().try_into().unwrap()).collect()).collect()
}

pub fn pair(g: &[Vec<i64>], x: &[i64], y: &[i64]) -> i128 {
    let mut s = 0i128;
    for (i, r) in g.iter().enumerate() {
        for (j, c) in r.iter().enumerate() {
            if *c != 0 {
                s += x[i] as i128 * *c as i128 * y[j] as i128;
            }
        }
    }
    s
}

/// Level of x = X/q: the largest k with x ∈ q^kL (capped).
fn level(x: &[i64], q: u64) -> i64 {
    x.iter().map(|&c| v(c as i128, q)).min().unwrap_or(INF) as i64 - 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyTag {
    Phi0,
    Phi1,
    Star,
    Tot,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 4] = [FamilyTag::Phi0, FamilyTag::Phi1, FamilyTag::Star, FamilyTag::Tot];

    pub fn name(&self) -> &'static str {
        match self {
            FamilyTag::Phi0 => "phi0",
            FamilyTag::Phi1 => "phi1",
            FamilyTag::Star => "star",
            FamilyTag::Tot => "tot",
        }
    }
}

/// Which of X⁽⁰⁾, X⁽¹⁾, X★ contains (x, y), from the levels and the three
/// inner products (all in the key scaling: X·X = q²·x·x).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Membership {
    pub in_x: bool,
    pub zero: bool,
    pub one: bool,
    pub star: bool,
}

pub fn membership(q: u64, lx: i64, ly: i64, xx: i128, yy: i128, xy: i128) -> Membership {
    let in_x = v(xx, q) >= 3 && v(yy, q) >= 3 && v(xy, q) == 2;
    Membership {
        in_x,
        zero: in_x && lx == 0 && ly == 0,
        one: in_x && lx == 1 && ly == -1,
        star: in_x && lx == 0 && ly == -1,
    }
}

impl Membership {
    pub fn value(&self, tag: FamilyTag, q: u64) -> i64 {
        let b = |x: bool| x as i64;
        match tag {
            FamilyTag::Phi0 => b(self.zero),
            FamilyTag::Phi1 => b(self.one),
            FamilyTag::Star => b(self.star),
            FamilyTag::Tot => b(self.star) + (1 - q as i64) * (b(self.zero) + b(self.one)),
        }
    }
}

/// φ⁽⁰⁾, φ⁽¹⁾, φ★, φ^tot on V² for the split V of dimension 5 with its
/// standard self-dual lattice.
#[derive(Clone, Debug)]
pub struct PhiFamily {
    pub q: u64,
    pub tag: FamilyTag,
    gram: Vec<Vec<i64>>,
}

impl PhiFamily {
    pub fn new(q: u64, tag: FamilyTag) -> PhiFamily {
        PhiFamily { q, tag, gram: gram_of(&split_quadratic(2)) }
    }

    pub fn membership(&self, pt: &[i64]) -> Membership {
        let (x, y) = pt.split_at(5);
        let g = &self.gram;
        membership(self.q, level(x, self.q), level(y, self.q), pair(g, x, x), pair(g, y, y), pair(g, x, y))
    }
}

pub fn build_phi_family(q: u64) -> Vec<PhiFamily> {
    FamilyTag::ALL.iter().map(|&t| PhiFamily::new(q, t)).collect()
}

impl PointFn for PhiFamily {
    fn q(&self) -> u64 {
        self.q
    }
    fn dim(&self) -> usize {
        5
    }
    fn copies(&self) -> usize {
        2
    }
    fn window(&self) -> Window {
        Window { a: 1, b: 2 }
    }
    fn eval(&self, pt: &[i64]) -> Rat {
        rint(self.membership(pt).value(self.tag, self.q))
    }
    fn eval_small(&self, pt: &[i64]) -> Option<i64> {
        Some(self.membership(pt).value(self.tag, self.q))
    }
}

/// 1_{L×L} on V² (V split of dimension 5).
#[derive(Clone, Copy, Debug)]
pub struct LatticeSquare {
    pub q: u64,
}

impl PointFn for LatticeSquare {
    fn q(&self) -> u64 {
        self.q
    }
    fn dim(&self) -> usize {
        5
    }
    fn copies(&self) -> usize {
        2
    }
    fn window(&self) -> Window {
        Window { a: 1, b: 2 }
    }
    fn eval(&self, pt: &[i64]) -> Rat {
        rint(self.eval_small(pt).unwrap())
    }
    fn eval_small(&self, pt: &[i64]) -> Option<i64> {
        Some(pt.iter().all(|x| x.rem_euclid(self.q as i64) == 0) as i64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimeVariant {
    /// (ℓ+1)·1_{L²∩X_ℓ} + 1_{(L×(ℓ⁻¹L∖L))∩X_ℓ}.
    Li,
    /// 1 on x·x a non-square unit, x·y ∈ ℓℤ, y·y ∈ ℓℤ^×, x, y ∈ L.
    L0,
}

/// The modified test functions φ′_ℓ at an auxiliary prime ℓ.
#[derive(Clone, Debug)]
pub struct PhiPrime {
    pub l: u64,
    pub variant: PrimeVariant,
    gram: Vec<Vec<i64>>,
}

impl PhiPrime {
    pub fn new(l: u64, variant: PrimeVariant) -> PhiPrime {
        PhiPrime { l, variant, gram: gram_of(&split_quadratic(2)) }
    }

    pub fn tag(&self) -> &'static str {
        match self.variant {
            PrimeVariant::Li => "prime_l",
            PrimeVariant::L0 => "prime_l0",
        }
    }
}

impl PointFn for PhiPrime {
    fn q(&self) -> u64 {
        self.l
    }
    fn dim(&self) -> usize {
        5
    }
    fn copies(&self) -> usize {
        2
    }
    fn window(&self) -> Window {
        Window { a: 1, b: 2 }
    }
    fn eval(&self, pt: &[i64]) -> Rat {
        rint(self.value(pt))
    }
    fn eval_small(&self, pt: &[i64]) -> Option<i64> {
        Some(self.value(pt))
    }
}

impl PhiPrime {
    pub fn value(&self, pt: &[i64]) -> i64 {
        let l = self.l;
        let (x, y) = pt.split_at(5);
        let g = &self.gram;
        let (xx, yy, xy) = (pair(g, x, x), pair(g, y, y), pair(g, x, y));
        let (lx, ly) = (level(x, l), level(y, l));
        // unit part of a key product sitting at valuation 2, i.e. a unit inner product
        let sq = |z: i128| legendre(z / (l as i128 * l as i128), l);
        let val = match self.variant {
            PrimeVariant::Li => {
                let in_x = v(xx, l) == 2 && sq(xx) == 1 && v(xy, l) >= 2 && v(yy, l) == 2 && sq(yy) == -1;
                match (in_x, lx >= 0, ly) {
                    (true, true, ly) if ly >= 0 => l as i64 + 1,
                    (true, true, -1) => 1,
                    _ => 0,
                }
            }
            PrimeVariant::L0 => {
                let ok = lx >= 0 && ly >= 0 && v(xx, l) == 2 && sq(xx) == -1 && v(xy, l) >= 3 && v(yy, l) == 3;
                ok as i64
            }
        };
        val
    }
}

/// A reflection s_r(x) = x − 2(x·r)/(r·r)·r in a vector r ∈ L with r·r a
/// q-unit; it lies in the stabilizer of L.
pub fn reflection(space: &QuadSpace, r: &[i64], q: u64) -> Option<RatMat> {
    let d = space.dim();
    let rr: Vec<Rat> = r.iter().map(|&c| rint(c)).collect();
    let n = space.norm(&rr);
    if n.is_zero() || crate::arith::val_q(&n, q) != 0 {
        return None;
    }
    let gr = crate::spaces::mat_vec(&space.gram, &rr);
    let two = rint(2);
    Some(
        (0..d)
            .map(|i| (0..d).map(|j| if i == j { Rat::one() } else { Rat::zero() } - &two * &rr[i] * &gr[j] / &n).collect())
            .collect(),
    )
}

/// A random element of SO(V) ∩ Stab(L): a product of two random
/// reflections.
pub fn random_stabilizer(space: &QuadSpace, q: u64, rng: &mut impl Rng) -> RatMat {
    let d = space.dim();
    let mut pick = || loop {
        let r: Vec<i64> = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
        if let Some(s) = reflection(space, &r, q) {
            return s;
        }
    };
    let (a, b) = (pick(), pick());
    crate::spaces::mat_mul(&a, &b)
}

/// g applied to a key vector modulo q^k, copy by copy.
pub fn apply_mod(g: &RatMat, pt: &[i64], q: u64, k: u32) -> Vec<i64> {
    let m = crate::arith::ipow(q, k);
    let d = g.len();
    let gm: Vec<Vec<i128>> = g.iter().map(|r| r.iter().map(|x| crate::arith::rat_mod(x, q, k).expect("integral")).collect()).collect();
    pt.chunks(d)
        .flat_map(|x| gm.iter().map(|r| (r.iter().zip(x).map(|(a, b)| a * *b as i128).sum::<i128>().rem_euclid(m)) as i64).collect::<Vec<_>>())
        .collect()
}

/// A random key in the window (1, 2), biased towards the support: the
/// first `tries` samples are retried until f is nonzero.
pub fn sample_support(f: &dyn PointFn, rng: &mut impl Rng, tries: usize) -> Vec<i64> {
    let q = f.q() as i64;
    let m = q.pow(f.window().depth());
    let len = f.dim() * f.copies();
    let mut last = vec![0; len];
    for _ in 0..tries {
        // mix levels: scale each copy by a random power of q
        let mut pt: Vec<i64> = (0..len).map(|_| rng.gen_range(0..m)).collect();
        for c in 0..f.copies() {
            let s = q.pow(rng.gen_range(0..3));
            for x in &mut pt[c * f.dim()..(c + 1) * f.dim()] {
                *x = (*x * s) % m;
            }
        }
        if !f.eval(&pt).is_zero() {
            return pt;
        }
        last = pt;
    }
    last
}

/// Checks on a family member or a φ′: integer values from the allowed
/// set, invariance under translation by the window and under random
/// stabilizer elements.
pub fn invariance_checks(f: &dyn PointFn, name: &str, allowed: &[i64], samples: usize, rng: &mut impl Rng) -> Vec<Check> {
    let q = f.q();
    let space = split_quadratic(2);
    let w = f.window();
    let depth = w.depth();
    let m = (q as i64).pow(depth);
    let mut out = vec![];
    let mut bad_val = None;
    let mut bad_trans = None;
    let mut bad_stab = None;
    for s in 0..samples {
        let pt = sample_support(f, rng, 200);
        let val = f.eval(&pt);
        if !val.is_integer() || !allowed.iter().any(|a| rint(*a) == val) {
            bad_val.get_or_insert(format!("{pt:?} -> {val}"));
        }
        // translate by q^b in a random coordinate with a random full lift
        let mut moved = pt.clone();
        let i = rng.gen_range(0..pt.len());
        moved[i] += m * rng.gen_range(1..4);
        if f.eval(&moved) != val {
            bad_trans.get_or_insert(format!("{pt:?} coordinate {i}"));
        }
        let g = random_stabilizer(&space, q, rng);
        let moved = apply_mod(&g, &pt, q, depth);
        if f.eval(&moved) != val {
            bad_stab.get_or_insert(format!("sample {s}"));
        }
    }
    let inputs = format!("q={q} samples={samples}");
    out.push(Check::new(&format!("phi-families: {name} values in {allowed:?}"), q, &inputs, bad_val.clone().unwrap_or("ok".into()), "ok", bad_val.is_none()));
    out.push(Check::new(&format!("phi-families: {name} window invariance"), q, &inputs, bad_trans.clone().unwrap_or("ok".into()), "ok", bad_trans.is_none()));
    out.push(Check::new(&format!("phi-families: {name} stabilizer invariance"), q, &inputs, bad_stab.clone().unwrap_or("ok".into()), "ok", bad_stab.is_none()));
    out
}

/// Scan of the relation φ^tot = φ★ + (1−q)(φ⁽⁰⁾ + φ⁽¹⁾) and pairwise
/// disjointness of X⁽⁰⁾, X⁽¹⁾, X★ on sampled cosets, with supports hit.
pub fn family_scan(q: u64, samples: usize, rng: &mut impl Rng) -> Vec<Check> {
    let fam = build_phi_family(q);
    let tot = &fam[3];
    let mut overlaps = 0;
    let mut mismatch = 0;
    let mut hits = [0usize; 3];
    for k in 0..samples {
        let pt = sample_support(&fam[k % 3], rng, 400);
        let mb = tot.membership(&pt);
        let n = mb.zero as usize + mb.one as usize + mb.star as usize;
        if n > 1 {
            overlaps += 1;
        }
        for (h, b) in hits.iter_mut().zip([mb.zero, mb.one, mb.star]) {
            *h += b as usize;
        }
        let lhs = tot.eval(&pt);
        let rhs = fam[2].eval(&pt) + rint(1 - q as i64) * (fam[0].eval(&pt) + fam[1].eval(&pt));
        if lhs != rhs {
            mismatch += 1;
        }
        let allowed = [rint(0), rint(1), rint(1 - q as i64)];
        if !allowed.contains(&lhs) {
            mismatch += 1;
        }
    }
    let inputs = format!("q={q} samples={samples}");
    vec![
        Check::new("phi-families: supports pairwise disjoint", q, &inputs, overlaps, 0, overlaps == 0),
        Check::new("phi-families: tot = star + (1-q)(phi0 + phi1)", q, &inputs, mismatch, 0, mismatch == 0),
        Check::new(
            "phi-families: each support sampled",
            q,
            &inputs,
            format!("{hits:?}"),
            "all > 0",
            hits.iter().all(|&h| h > 0),
        ),
    ]
}

/// Self-dual lattices L′ adjacent to L∘ = ℤ_ℓ⁴ in the split space of
/// dimension 4, one per isotropic line in L∘/ℓL∘. Each line is stored by
/// a lift v with v·v ≡ 0 mod ℓ², and L′ = {x ∈ L∘ : x·v ∈ ℓℤ} + ℤ·ℓ⁻¹v.
#[derive(Clone, Debug)]
pub struct TCirc {
    pub l: u64,
    pub gram: Vec<Vec<i64>>,
    pub lines: Vec<Vec<i64>>,
}

impl TCirc {
    pub fn new(l: u64) -> TCirc {
        let gram = gram_of(&split_even(2));
        let li = l as i64;
        let mut lines = vec![];
        crate::weil::for_each_offset(4, li, |x| {
            let lead = x.iter().position(|&c| c != 0);
            if lead.map_or(true, |i| x[i] != 1) {
                return;
            }
            if pair(&gram, x, x) % li as i128 != 0 {
                return;
            }
            let mut v = x.to_vec();
            let k = (pair(&gram, &v, &v) / li as i128) as i64;
            if k % li != 0 {
                // v → v + ℓc·e_j changes v·v/ℓ by 2c(Gv)_j mod ℓ
                let gv: Vec<i64> = gram.iter().map(|r| r.iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
                let j = gv.iter().position(|&c| c.rem_euclid(li) != 0).expect("isotropic vector is not radical");
                let inv = crate::arith::inv_mod((2 * gv[j]).rem_euclid(li) as i128, li as i128).unwrap() as i64;
                let c = (-k * inv).rem_euclid(li);
                v[j] += li * c;
            }
            lines.push(v);
        });
        TCirc { l, gram, lines }
    }

    /// y ∈ L′_v for y = Y/ℓ with Y taken mod ℓ².
    pub fn contains(&self, v: &[i64], y: &[i64]) -> bool {
        let l = self.l as i64;
        (0..l).any(|c| {
            let w: Vec<i64> = y.iter().zip(v).map(|(a, b)| a - c * b).collect();
            if w.iter().any(|x| x.rem_euclid(l) != 0) {
                return false;
            }
            let w: Vec<i64> = w.iter().map(|x| x / l).collect();
            pair(&self.gram, &w, v).rem_euclid(l as i128) == 0
        })
    }

    /// (T_ℓ^∘·1_{L∘})(y) = #{L′ ∼ L∘ : y ∈ L′}.
    pub fn value(&self, y: &[i64]) -> u32 {
        self.lines.iter().filter(|v| self.contains(v, y)).count() as u32
    }

    /// (ℓ+1)·1_{L∘} + 1_{ℓ⁻¹L∘ ∖ L∘} at y = Y/ℓ.
    pub fn claimed(&self, y: &[i64]) -> u32 {
        let l = self.l as i64;
        if y.iter().all(|c| c.rem_euclid(l) == 0) {
            self.l as u32 + 1
        } else {
            1
        }
    }

    /// Whether the coset y + ℓL∘ contains a point with y·y ∈ ℤ_ℓ^×: for
    /// y ∈ L∘ this is y·y a unit; otherwise it is y·y ∈ ℤ_ℓ, since
    /// y ↦ y + ℓm then moves y·y through every residue class.
    pub fn coset_has_unit_norm(&self, y: &[i64]) -> bool {
        let l = self.l as i128;
        let n = pair(&self.gram, y, y);
        if y.iter().all(|c| (*c as i128).rem_euclid(l) == 0) {
            (n / (l * l)).rem_euclid(l) != 0
        } else {
            n.rem_euclid(l * l) == 0
        }
    }

    /// The same question by brute force over the lifts Y + ℓ²m, m mod ℓ.
    pub fn coset_has_unit_norm_brute(&self, y: &[i64]) -> bool {
        let l = self.l as i64;
        let mut found = false;
        crate::weil::for_each_offset(4, l, |m| {
            if found {
                return;
            }
            let z: Vec<i64> = y.iter().zip(m).map(|(a, b)| a + l * l * b).collect();
            let n = pair(&self.gram, &z, &z);
            found = v(n, self.l) == 2;
        });
        found
    }

    /// L′_v as a lattice, for structural checks.
    pub fn lattice(&self, v: &[i64]) -> Result<Lattice> {
        let l = self.l as i64;
        let mut gens: Vec<Vec<Rat>> = vec![];
        for i in 0..4 {
            let mut e = vec![Rat::zero(); 4];
            e[i] = rint(l);
            gens.push(e);
        }
        // x ∈ L∘ with x·v ≡ 0 mod ℓ: e_i − (e_i·v)/(e_j·v)·e_j
        let gv: Vec<i64> = self.gram.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect();
        let j = gv.iter().position(|&c| c.rem_euclid(l) != 0).unwrap();
        let inv = crate::arith::inv_mod(gv[j].rem_euclid(l) as i128, l as i128).unwrap() as i64;
        for i in 0..4 {
            let mut e = vec![Rat::zero(); 4];
            e[i] = Rat::one();
            e[j] -= rint((gv[i] * inv).rem_euclid(l));
            gens.push(e);
        }
        gens.push(v.iter().map(|&c| rat(c, l)).collect());
        Lattice::from_rational_gens(self.l, 4, &gens)
    }

    pub fn form(&self) -> Result<Form> {
        Form::new(self.l, &mat_from_ints(&self.gram.iter().map(|r| r.as_slice()).collect::<Vec<_>>()))
    }
}

/// The claim on every coset of ℓ⁻¹L∘/ℓL∘ that contains a point of unit
/// norm, plus the count of neighbours and their self-duality.
pub fn t_circ_checks(l: u64) -> Result<Vec<Check>> {
    let t = TCirc::new(l);
    let mut out = vec![];
    let want = (l as usize + 1).pow(2);
    out.push(Check::new("t-circ: neighbours = isotropic lines", l, "split rank 4", t.lines.len(), want, t.lines.len() == want));
    let form = t.form()?;
    let std = Lattice::standard(l, 4);
    let mut self_dual = 0;
    let mut chain = 0;
    for v in &t.lines {
        let lp = t.lattice(v)?;
        if form.dual(&lp) == lp {
            self_dual += 1;
        }
        if Lattice::colength(&lp.intersect(&std), &std) == 1 && Lattice::colength(&std.intersect(&lp), &lp) == 1 {
            chain += 1;
        }
    }
    out.push(Check::new("t-circ: neighbours self-dual", l, "split rank 4", self_dual, want, self_dual == want));
    out.push(Check::new("t-circ: neighbours meet L in index l", l, "split rank 4", chain, want, chain == want));
    let l2 = (l * l) as i64;
    let (mut scanned, mut bad) = (0u64, vec![]);
    let mut by_value = std::collections::BTreeMap::new();
    crate::weil::for_each_offset(4, l2, |y| {
        if !t.coset_has_unit_norm(y) {
            return;
        }
        scanned += 1;
        let (got, claim) = (t.value(y), t.claimed(y));
        *by_value.entry(claim).or_insert(0u64) += 1;
        if got != claim && bad.len() < 3 {
            bad.push(format!("{y:?}: {got} vs {claim}"));
        }
    });
    let inputs = format!("l={l} cosets={scanned}");
    out.push(Check::new("t-circ: T 1_L = (l+1)1_L + 1_(l^-1 L - L) on unit norms", l, &inputs, if bad.is_empty() { "ok".into() } else { bad.join("; ") }, "ok", bad.is_empty()));
    let seen: Vec<u32> = by_value.keys().copied().collect();
    out.push(Check::new("t-circ: both values occur", l, &inputs, format!("{seen:?}"), format!("{:?}", [1, l as u32 + 1]), seen == [1, l as u32 + 1]));
    // outside ℓ⁻¹L∘ no neighbour contains y: every L′ ⊆ ℓ⁻¹L∘
    let outside = t.lines.iter().all(|v| {
        let lp = t.lattice(v).unwrap();
        std.scale(-1).contains_lattice(&lp)
    });
    out.push(Check::new("t-circ: value 0 outside l^-1 L", l, "split rank 4", outside, true, outside));
    Ok(out)
}

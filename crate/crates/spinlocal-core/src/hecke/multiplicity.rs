//! Multiplicity of L_Λ in the potential of the special-cycle orbit.
//!
//! V = V_sp ⊕ V_◊ with V_sp the hyperbolic plane on the first two vertex
//! coordinates (e₁, e₂) and V_◊ the rest. L_sp = ⟨e₁, qe₂⟩, and
//! L⁽⁰⁾ = ⟨q⁻¹e₁, qe₂⟩, L⁽¹⁾ = ⟨e₁, e₂⟩ are the self-dual lattices over it.
//! VL(2)^◊ consists of L_sp ⊕ L_◊ with L_◊ ⊆ V_◊ self-dual; those L_◊ form
//! a (q+1)-regular tree, enumerated here by distance from ℤ_q³.

use std::collections::BTreeSet;

use super::{ball, Hecke};
use crate::error::{Result, SpinError};
use crate::report::Check;
use crate::lattices::{is_integral, Between, Form, IVec, Lattice, VertexSpace, MAXD};

/// Position of L_Λ ∩ V_sp relative to L_sp.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
pub enum SpecialMeet {
    Special,
    SelfDual0,
    SelfDual1,
    Other,
}

pub struct Multiplicity {
    pub vs: VertexSpace,
    pub diamond: Form,
    pub l_sp: Lattice,
    pub l_sp0: Lattice,
    pub l_sp1: Lattice,
}

fn diag2(q: u64, s0: i32, s1: i32) -> Lattice {
    let qq = q as i128;
    let mut g = vec![[0i128; MAXD]; 2];
    let lo = s0.min(s1);
    g[0][0] = qq.pow((s0 - lo) as u32);
    g[1][1] = qq.pow((s1 - lo) as u32);
    Lattice::from_scaled(q, 2, lo, &g, s0.max(s1))
}

impl Multiplicity {
    pub fn new(q: u64) -> Multiplicity {
        let diamond = Form::from_ints(q, &[&[2, 0, 0], &[0, 0, 1], &[0, 1, 0]]).expect("unimodular for odd q");
        Multiplicity {
            vs: VertexSpace::new(q),
            diamond,
            l_sp: diag2(q, 0, 1),
            l_sp0: diag2(q, -1, 1),
            l_sp1: diag2(q, 0, 0),
        }
    }

    pub fn q(&self) -> u64 {
        self.vs.q
    }

    /// L ∩ V_sp: the first two Hermite columns span it.
    pub fn special_part(&self, l: &Lattice) -> Lattice {
        let cols = l.cols();
        let g: Vec<IVec> = cols[..2].to_vec();
        let f = l.shift + l.e[0] as i32 + l.e[1] as i32;
        Lattice::from_scaled(self.q(), 2, l.shift, &g, f)
    }

    pub fn classify(&self, l: &Lattice) -> SpecialMeet {
        let s = self.special_part(l);
        if s == self.l_sp {
            SpecialMeet::Special
        } else if s == self.l_sp0 {
            SpecialMeet::SelfDual0
        } else if s == self.l_sp1 {
            SpecialMeet::SelfDual1
        } else {
            SpecialMeet::Other
        }
    }

    /// 4, 4 − 4q or 0 according to L_Λ ∩ V_sp.
    pub fn formula(&self, l_lambda: &Lattice) -> i64 {
        let q = self.q() as i64;
        match self.classify(l_lambda) {
            SpecialMeet::Special => 4,
            SpecialMeet::SelfDual0 | SpecialMeet::SelfDual1 => 4 - 4 * q,
            SpecialMeet::Other => 0,
        }
    }

    /// Self-dual neighbors of L_◊ in the tree: L' with L ∩ L' of index q.
    pub fn diamond_neighbors(&self, l: &Lattice) -> Vec<Lattice> {
        let mut out = BTreeSet::new();
        for m in Between::new(&l.scale(1), l).enumerate(2, |_| true) {
            let md = self.diamond.dual(&m);
            for c in Between::new(&m, &md).enumerate(1, |_| true) {
                if c != *l && is_integral(&self.diamond, &c) {
                    out.insert(c);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Self-dual L_◊ within tree distance `radius` of ℤ_q³.
    pub fn diamond_ball(&self, radius: usize) -> Vec<Lattice> {
        let c = Lattice::standard(self.q(), 3);
        let mut seen = BTreeSet::from([c]);
        let mut frontier = vec![c];
        for _ in 0..radius {
            let mut next = vec![];
            for l in &frontier {
                for m in self.diamond_neighbors(l) {
                    if seen.insert(m) {
                        next.push(m);
                    }
                }
            }
            frontier = next;
        }
        seen.into_iter().collect()
    }

    /// L₂ = L_sp ⊕ L_◊.
    pub fn l2_of(&self, ld: &Lattice) -> Lattice {
        let q = self.q();
        let t = ld.shift.min(0);
        let s = ipow_i(q, (0 - t) as u32);
        let mut g: Vec<IVec> = vec![[0; MAXD]; 2];
        g[0][0] = s;
        g[1][1] = s * q as i128;
        for c in ld.cols_at(t) {
            let mut v = [0i128; MAXD];
            v[2..5].copy_from_slice(&c[..3]);
            g.push(v);
        }
        let f = ld.floor().max(1);
        Lattice::from_scaled(q, 5, t, &g, f)
    }

    fn contains_count(&self, l_lambda: &Lattice, l2: &Lattice) -> i64 {
        l_lambda.contains_lattice(l2) as i64
    }

    /// mult(L_Λ, (1−3q)·δ̄_Sie(L₂) + Σ_{L₀ ∩ L₂ ∈ VL(4)} [L₀]).
    pub fn term_simplified(&self, l_lambda: &Lattice, l2: &Lattice) -> i64 {
        let q = self.q() as i64;
        let meet = l_lambda.intersect(l2);
        let vl4 = self.vs.vl_type(&meet).map_or(false, |t| t == 4) as i64;
        (1 - 3 * q) * self.contains_count(l_lambda, l2) + vl4
    }

    /// mult(L_Λ, −4q·δ̄_Sie(L₂) + δ̄∘θ̄_Sie^Pa(L₂)).
    pub fn term_raw(&self, l_lambda: &Lattice, l2: &Lattice) -> Result<i64> {
        let q = self.q() as i64;
        let under = self.vs.vl4_under(l2)?;
        let hits = under.iter().filter(|l4| l_lambda.contains_lattice(l4)).count() as i64;
        Ok(-4 * q * self.contains_count(l_lambda, l2) + hits)
    }

    /// Both brute-force sums over VL(2)^◊ ∩ (tree ball of the given radius),
    /// doubled for the two orbits: (simplified form, −4q form).
    pub fn bruteforce(&self, l_lambda: &Lattice, radius: usize) -> Result<(i64, i64)> {
        self.bruteforce_over(l_lambda, &self.diamond_ball(radius))
    }

    pub fn bruteforce_over(&self, l_lambda: &Lattice, diamonds: &[Lattice]) -> Result<(i64, i64)> {
        if self.vs.vl_type(l_lambda)? != 0 {
            return Err(SpinError::TypeMismatch { expected: 0, got: self.vs.vl_type(l_lambda)? as i64 });
        }
        let (mut a, mut b) = (0, 0);
        for ld in diamonds {
            let l2 = self.l2_of(ld);
            // a nonzero term needs L_Λ ∩ L₂ of colength ≤ 1 in L₂
            let meet = l_lambda.intersect(&l2);
            if Lattice::colength(&meet, &l2) > 1 {
                continue;
            }
            a += self.term_simplified(l_lambda, &l2);
            b += self.term_raw(l_lambda, &l2)?;
        }
        Ok((2 * a, 2 * b))
    }

    /// The L_◊ whose L₂ contributes to the sum at L_Λ.
    pub fn support(&self, l_lambda: &Lattice, diamonds: &[Lattice]) -> Vec<Lattice> {
        diamonds
            .iter()
            .filter(|ld| {
                let l2 = self.l2_of(ld);
                self.term_simplified(l_lambda, &l2) != 0
            })
            .copied()
            .collect()
    }
}

/// Brute force against the closed form at every Λ of the T₂-ball, with
/// the tree sum repeated at `tree_radius + 1` as a stabilization check.
pub fn multiplicity_checks(h: &Hecke, ball_radius: usize, tree_radius: usize) -> Vec<Check> {
    let m = Multiplicity::new(h.q);
    let inner = m.diamond_ball(tree_radius);
    let outer = m.diamond_ball(tree_radius + 1);
    let mut out = vec![];
    for (_, l) in ball(h, &h.base(), ball_radius) {
        let lv = m.vs.vertex_lattice_of(&l);
        let key = l.key();
        let f = m.formula(&lv);
        match (m.bruteforce_over(&lv, &inner), m.bruteforce_over(&lv, &outer)) {
            (Ok((a, b)), Ok((a2, b2))) => {
                out.push(Check::equal("multiplicity: (1-3q) form = closed form", h.q, &key, &a, &f));
                out.push(Check::equal("multiplicity: -4q form = closed form", h.q, &key, &b, &f));
                out.push(Check::new(
                    "multiplicity: stable under larger tree radius",
                    h.q,
                    &key,
                    format!("{a},{b}"),
                    format!("{a2},{b2}"),
                    (a, b) == (a2, b2),
                ));
            }
            (Err(e), _) | (_, Err(e)) => out.push(Check::new("multiplicity", h.q, &key, e, f, false)),
        }
    }
    out
}

fn ipow_i(q: u64, e: u32) -> i128 {
    (q as i128).pow(e)
}

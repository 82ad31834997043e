//! The bottom row of the vertex-lattice diagrams: δ̄, δ̄_Sie and θ̄_Sie^Pa,
//! plus the checks that the projection Λ ↦ L_Λ intertwines them with
//! δ₊+δ₋, δ₊^Sie+δ₋^Sie and θ_Sie^Pa.

use super::{FormalSum, Hecke};
use crate::error::{Result, SpinError};
use crate::lattices::{is_integral, Between, Lattice, VertexSpace};
use crate::report::Check;

impl VertexSpace {
    fn expect_type(&self, l: &Lattice, t: u32) -> Result<()> {
        let got = self.vl_type(l)?;
        if got != t {
            return Err(SpinError::TypeMismatch { expected: t as i64, got: got as i64 });
        }
        Ok(())
    }

    /// Self-dual L₀ ⊇ L, i.e. maximal isotropic subspaces of L^∨/L.
    fn self_dual_over(&self, l: &Lattice, half: usize) -> Vec<Lattice> {
        let dual = self.form.dual(l);
        let b = Between::new(l, &dual);
        // lifts are scaled by q^t; M is integral iff the lifts pair integrally
        let need = -2 * b.t;
        let pairs_ok = |v: &[crate::lattices::IVec]| {
            need <= 0 || v.iter().enumerate().all(|(i, x)| v[i..].iter().all(|y| self.form.pair_mod(x, y, need as u32) == 0))
        };
        b.enumerate(half, pairs_ok).into_iter().filter(|m| is_integral(&self.form, m)).collect()
    }

    /// δ̄(L₄) = Σ_{L₀ ⊇ L₄} [L₀].
    pub fn bar_delta(&self, l4: &Lattice) -> Result<FormalSum> {
        self.expect_type(l4, 4)?;
        Ok(FormalSum::from_list(self.self_dual_over(l4, 2)))
    }

    /// δ̄_Sie(L₂) = Σ_{L₀ ⊇ L₂} [L₀].
    pub fn bar_delta_sie(&self, l2: &Lattice) -> Result<FormalSum> {
        self.expect_type(l2, 2)?;
        Ok(FormalSum::from_list(self.self_dual_over(l2, 1)))
    }

    /// The L₄ ∈ VL(4) contained in L₂: index-q sublattices containing qL₂^∨.
    pub fn vl4_under(&self, l2: &Lattice) -> Result<Vec<Lattice>> {
        self.expect_type(l2, 2)?;
        let bottom = self.form.dual(l2).scale(1);
        Ok(Between::new(&bottom, l2)
            .enumerate(2, |_| true)
            .into_iter()
            .filter(|m| self.vl_type(m).map_or(false, |t| t == 4))
            .collect())
    }

    /// θ̄_Sie^Pa(L₂) = Σ_{L₄ ⊆ L₂} [L₄].
    pub fn bar_theta_sie_pa(&self, l2: &Lattice) -> Result<FormalSum> {
        Ok(FormalSum::from_list(self.vl4_under(l2)?))
    }

    /// Push a formal sum over symplectic lattices to vertex lattices.
    pub fn project(&self, s: &FormalSum) -> FormalSum {
        let mut out = FormalSum::new();
        for (l, c) in &s.terms {
            out.add(self.vertex_lattice_of(l), *c);
        }
        out
    }
}

/// The three commuting squares, checked at one Λ ∈ 𝓛: on every
/// Λ_Pa ∈ θ₊(Λ) and on every Siegel pair (Λ, Λ₋).
pub fn vertex_diagram_checks(h: &Hecke, vs: &VertexSpace, l: &Lattice) -> Vec<Check> {
    let q = h.q;
    let qi = q as i64;
    let mut out = vec![];
    let l0 = vs.vertex_lattice_of(l);
    out.push(Check::equal("type of L_Lambda = 0", q, l.key(), &vs.vl_type(&l0).map_or(-1, |t| t as i64), &(0)));
    for p in h.theta_plus_list(l) {
        let key = p.key();
        let l4 = vs.vertex_lattice_of(&p);
        out.push(Check::equal("type of L_Pa = 4", q, &key, &vs.vl_type(&l4).map_or(-1, |t| t as i64), &(4)));
        let top = vs.project(&h.delta_plus(&p).plus(&h.delta_minus(&p)));
        match vs.bar_delta(&l4) {
            Ok(bottom) => {
                out.push(Check::equal("deg bar_delta = 2(q+1)", q, &key, &bottom.degree(), &(2 * (qi + 1))));
                out.push(Check::sums("L o (delta_plus + delta_minus) = bar_delta o L", q, &key, &top, &bottom));
            }
            Err(e) => out.push(Check::new("L o (delta_plus + delta_minus) = bar_delta o L", q, &key, top.render(), e, false)),
        }
    }
    for (plus, minus) in h.siegel_pairs(l) {
        let key = format!("{}|{}", plus.key(), minus.key());
        let l2 = vs.siegel_vertex(&plus, &minus);
        out.push(Check::equal("type of L_Sie = 2", q, &key, &vs.vl_type(&l2).map_or(-1, |t| t as i64), &(2)));
        let top = vs.project(&FormalSum::from_list([plus, minus]));
        let theta = vs.project(&FormalSum::from_list(h.theta_sie_pa(&plus, &minus)));
        match (vs.bar_delta_sie(&l2), vs.bar_theta_sie_pa(&l2)) {
            (Ok(d), Ok(t)) => {
                out.push(Check::equal("deg bar_delta_sie = 2", q, &key, &d.degree(), &2));
                out.push(Check::equal("deg bar_theta_sie_pa = q+1", q, &key, &t.degree(), &(qi + 1)));
                out.push(Check::sums("L o (delta_plus_sie + delta_minus_sie) = bar_delta_sie o L", q, &key, &top, &d));
                out.push(Check::sums("L o theta_sie_pa = bar_theta_sie_pa o L", q, &key, &theta, &t));
            }
            (a, b) => {
                let e = a.err().or(b.err()).map(|e| e.to_string()).unwrap_or_default();
                out.push(Check::new("siegel vertex diagrams", q, &key, top.render(), e, false));
            }
        }
    }
    out
}

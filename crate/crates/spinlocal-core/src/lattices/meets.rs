//! Intersections M ∩ V₁ of self-dual lattices M with one summand of an
//! orthogonal splitting V = V₀ ⊕ V₁. Coordinates put V₀ first.

use std::collections::BTreeSet;

use super::{is_integral, Between, Form, Lattice};
use crate::arith::{rat_pow, rint, Rat};
use crate::error::{Result, SpinError};

/// Self-dual M' with M ∩ M' of index q in M, one per isotropic line of M/qM.
pub fn self_dual_neighbors(form: &Form, m: &Lattice) -> Vec<Lattice> {
    let d = m.dim();
    let mut out = BTreeSet::new();
    for h in Between::new(&m.scale(1), m).enumerate(d - 1, |_| true) {
        let hd = form.dual(&h);
        // h = v^⊥ for v isotropic exactly when h^∨/h is killed by q
        if !h.contains_lattice(&hd.scale(1)) {
            continue;
        }
        for c in Between::new(&h, &hd).enumerate(1, |_| true) {
            if c != *m && is_integral(form, &c) {
                out.insert(c);
            }
        }
    }
    out.into_iter().collect()
}

/// M ∩ V₁ as a lattice in the last `d1` coordinates, given q^r ℤ^d ⊆ M.
pub fn meet_with_summand(m: &Lattice, d1: usize, r: i32) -> Result<Lattice> {
    let (q, d) = (m.q as u64, m.dim());
    if d1 == 0 || d1 >= d {
        return Err(SpinError::Dimension { expected: d - 1, got: d1 });
    }
    // x ∈ M with V₀-part in q^r ℤ^{d0} has that part in M, so projecting
    // M ∩ (q^r ℤ^{d0} ⊕ q^{-r'} ℤ^{d1}) to V₁ gives M ∩ V₁ once r' is large
    let wide = r.max(0) + m.shift.min(0).abs();
    let qr = rint(q as i64);
    let gens: Vec<Vec<Rat>> = (0..d)
        .map(|i| {
            let mut v = vec![Rat::from_integer(0.into()); d];
            v[i] = if i < d - d1 { rat_pow(&qr, r as i64) } else { rat_pow(&qr, -(wide as i64)) };
            v
        })
        .collect();
    let box_ = Lattice::from_rational_gens(q, d, &gens)?;
    let cut = m.intersect(&box_);
    let proj: Vec<Vec<Rat>> = cut.basis_rat().into_iter().map(|v| v[d - d1..].to_vec()).collect();
    Lattice::from_rational_gens(q, d1, &proj)
}

/// Whether L₁ ⊂ V₁ arises as g·L ∩ V₁ for a self-dual L ⊂ V and g ∈ SO(V).
/// When dim V₁ < dim V₀ this happens exactly when L₁ is integral.
pub fn coset_invariant(v0: &Form, v1: &Form, l1: &Lattice) -> Result<bool> {
    if l1.dim() != v1.d {
        return Err(SpinError::Dimension { expected: v1.d, got: l1.dim() });
    }
    if v1.d >= v0.d {
        return Err(SpinError::Input(format!("dim V1 = {} is not below dim V0 = {}", v1.d, v0.d)));
    }
    Ok(is_integral(v1, l1))
}

/// All M ∩ V₁ for self-dual M within `depth` neighbor steps of ℤ_q^d.
/// Self-dual lattices form one SO(V)-orbit, so this enumerates the
/// g·L ∩ V₁ coming from g near the identity coset.
pub fn orbit_meets(form: &Form, d1: usize, depth: usize) -> Result<BTreeSet<Lattice>> {
    let start = Lattice::standard(form.q, form.d);
    let mut seen = BTreeSet::from([start]);
    let mut frontier = vec![start];
    for _ in 0..depth {
        let mut next = vec![];
        for m in &frontier {
            for n in self_dual_neighbors(form, m) {
                if seen.insert(n) {
                    next.push(n);
                }
            }
        }
        frontier = next;
    }
    seen.iter().map(|m| meet_with_summand(m, d1, depth as i32)).collect()
}

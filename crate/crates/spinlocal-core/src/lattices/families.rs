//! The lattice families of W = ℚ_q⁴ with the standard symplectic form:
//! 𝓛 (Λ = qⁿΛ^∨), paramodular 𝓛_Pa (q^{n+1}Λ^∨ ⊂₂ Λ ⊂₂ qⁿΛ^∨) and
//! Siegel pairs qΛ₊ ⊂₂ Λ₋ ⊂₂ Λ₊.

use super::{Form, Lattice};

pub fn symplectic_form(q: u64) -> Form {
    Form::from_ints(q, &[&[0, 0, 1, 0], &[0, 0, 0, 1], &[-1, 0, 0, 0], &[0, -1, 0, 0]]).expect("Ω is unimodular")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Family {
    Hyperspecial,
    Paramodular,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Hyperspecial => "L",
            Family::Paramodular => "L_Pa",
        }
    }
}

/// n with Λ = qⁿΛ^∨, if Λ ∈ 𝓛.
pub fn l_index(f: &Form, l: &Lattice) -> Option<i64> {
    let d = f.dual(l);
    let c = l.covol() - d.covol();
    if c % 4 != 0 {
        return None;
    }
    let n = c / 4;
    (d.scale(n as i32) == *l).then_some(n)
}

/// n with q^{n+1}Λ^∨ ⊂₂ Λ ⊂₂ qⁿΛ^∨, if Λ ∈ 𝓛_Pa.
pub fn pa_index(f: &Form, l: &Lattice) -> Option<i64> {
    let d = f.dual(l);
    let c = l.covol() - d.covol() - 2;
    if c % 4 != 0 {
        return None;
    }
    let n = c / 4;
    let upper = d.scale(n as i32);
    let lower = d.scale(n as i32 + 1);
    (upper.contains_lattice(l) && l.contains_lattice(&lower)).then_some(n)
}

pub fn is_siegel_pair(f: &Form, plus: &Lattice, minus: &Lattice) -> bool {
    l_index(f, plus).is_some()
        && l_index(f, minus).is_some()
        && plus.contains_lattice(minus)
        && minus.contains_lattice(&plus.scale(1))
        && Lattice::colength(minus, plus) == 2
}

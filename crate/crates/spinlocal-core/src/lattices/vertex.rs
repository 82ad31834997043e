//! The 5-dimensional quadratic space V = End(W)^{†=1, tr=0} and its vertex
//! lattices.
//!
//! Coordinates (a, b, p, r, s) stand for
//!
//! ```text
//! X = [ Pᵀ  −bJ ]     P = [ p   r ]     J = [  0  1 ]
//!     [ aJ   P  ]         [ s  −p ]         [ −1  0 ]
//! ```
//!
//! which is Ω-self-adjoint and traceless, with X² = (ab + p² + rs)·1. The
//! pairing is (X, Y) = tr(XY)/2, so the coordinate lattice ℤ_q⁵ is
//! End(Λ₀) ∩ V and is self-dual. The hyperbolic pair (a, b) spans V_sp and
//! (p, r, s) spans its orthogonal complement V_◊.

use super::{Form, IVec, Lattice, MAXD};
use crate::arith::ipow;
use crate::error::{Result, SpinError};

pub type Endo = [[i128; 4]; 4];

#[derive(Clone, Debug)]
pub struct VertexSpace {
    pub q: u64,
    pub form: Form,
    basis: [Endo; 5],
}

impl VertexSpace {
    pub fn new(q: u64) -> VertexSpace {
        let form = Form::from_ints(
            q,
            &[&[0, 1, 0, 0, 0], &[1, 0, 0, 0, 0], &[0, 0, 2, 0, 0], &[0, 0, 0, 0, 1], &[0, 0, 0, 1, 0]],
        )
        .expect("unimodular for odd q");
        let mut basis = [[[0i128; 4]; 4]; 5];
        for (k, b) in basis.iter_mut().enumerate() {
            let mut c = [0i128; 5];
            c[k] = 1;
            *b = endo(&c);
        }
        VertexSpace { q, form, basis }
    }

    pub fn endo(&self, c: &[i128; 5]) -> Endo {
        endo(c)
    }

    /// L_Λ = {X ∈ V : XΛ ⊆ Λ}.
    pub fn vertex_lattice_of(&self, l: &Lattice) -> Lattice {
        assert_eq!(l.dim(), 4);
        let q = self.q;
        let adj = l.adj();
        let se = l.sum_e();
        // X ∈ q^{-k} M₄(ℤ_q) whenever XΛ ⊆ Λ
        let k = l.exponent();
        let r = se + k;
        // rows a_(i,j) of c ↦ (adj·X(c)·M)_(i,j); require ≡ 0 mod q^r on c' = q^k c
        let m: [[i128; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| l.m[i][j] as i128));
        let mut gens: Vec<IVec> = Vec::with_capacity(21);
        let big = ipow(q, r);
        for i in 0..5 {
            let mut v = [0i128; MAXD];
            v[i] = big;
            gens.push(v);
        }
        let prods: Vec<Endo> = self.basis.iter().map(|b| mul4(&mul4(&adj4(&adj), b), &m)).collect();
        for i in 0..4 {
            for j in 0..4 {
                let mut v = [0i128; MAXD];
                for (kk, p) in prods.iter().enumerate() {
                    v[kk] = p[i][j] % big;
                }
                if v.iter().any(|&x| x != 0) {
                    gens.push(v);
                }
            }
        }
        // N = ℤ⁵ + Σ q^{-r}ℤ·a_(i,j); its standard dual is {c' ∈ ℤ⁵ : a·c' ≡ 0 mod q^r}
        let n = Lattice::from_scaled(q, 5, -(r as i32), &gens, 0);
        n.std_dual().scale(-(k as i32))
    }

    /// Pairings on L are ℤ_q-valued.
    pub fn is_integral(&self, l: &Lattice) -> bool {
        is_integral(&self.form, l)
    }

    /// dim L^∨/L for a vertex lattice, an error otherwise.
    pub fn vl_type(&self, l: &Lattice) -> Result<u32> {
        vl_type(&self.form, l)
    }

    /// L_{Λ₊} ∩ L_{Λ₋} for a Siegel pair.
    pub fn siegel_vertex(&self, plus: &Lattice, minus: &Lattice) -> Lattice {
        self.vertex_lattice_of(plus).intersect(&self.vertex_lattice_of(minus))
    }
}

/// Pairings on L are ℤ_q-valued.
pub fn is_integral(form: &Form, l: &Lattice) -> bool {
    let need = -2 * l.shift;
    if need <= 0 {
        return true;
    }
    let cols = l.cols();
    let d = l.dim();
    (0..d).all(|i| (i..d).all(|j| form.pair_mod(&cols[i], &cols[j], need as u32) == 0))
}

/// dim L^∨/L, provided qL^∨ ⊆ L ⊆ L^∨.
pub fn vl_type(form: &Form, l: &Lattice) -> Result<u32> {
    let dual = form.dual(l);
    if !dual.contains_lattice(l) || !l.contains_lattice(&dual.scale(1)) {
        return Err(SpinError::Input(format!("{l} is not a vertex lattice")));
    }
    Ok(Lattice::colength(l, &dual) as u32)
}

fn endo(c: &[i128; 5]) -> Endo {
    let [a, b, p, r, s] = *c;
    [[p, s, 0, -b], [r, -p, b, 0], [0, a, p, r], [-a, 0, s, -p]]
}

fn adj4(a: &[[i128; MAXD]; MAXD]) -> Endo {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j]))
}

fn mul4(x: &Endo, y: &Endo) -> Endo {
    let mut z = [[0i128; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            if x[i][k] != 0 {
                for j in 0..4 {
                    z[i][j] += x[i][k] * y[k][j];
                }
            }
        }
    }
    z
}

//! Hecke and degeneracy operators on 𝓛 and 𝓛_Pa, each realized as an
//! enumeration of intermediate lattices.

use super::FormalSum;
use crate::lattices::{l_index, symplectic_form, Between, Form, IVec, Lattice};

#[derive(Clone, Debug)]
pub struct Hecke {
    pub q: u64,
    pub form: Form,
}

impl Hecke {
    pub fn new(q: u64) -> Hecke {
        Hecke { q, form: symplectic_form(q) }
    }

    pub fn base(&self) -> Lattice {
        Lattice::standard(self.q, 4)
    }

    fn n_l(&self, l: &Lattice) -> i64 {
        l_index(&self.form, l).unwrap_or_else(|| panic!("{l} is not in 𝓛"))
    }

    /// n and the dual of a paramodular lattice. The covolume fixes n; the
    /// containments are asserted by the `Between` built on top.
    fn pa_dual(&self, l: &Lattice) -> (i64, Lattice) {
        let d = self.form.dual(l);
        let c = l.covol() - d.covol() - 2;
        assert!(c % 4 == 0, "{l} is not in 𝓛_Pa");
        (c / 4, d)
    }

    /// ⟨x, y⟩ for lifts at scale t is divisible by q^k.
    fn isotropic(&self, x: &IVec, y: &IVec, t: i32, k: i64) -> bool {
        let need = k - 2 * t as i64;
        need <= 0 || self.form.pair_mod(x, y, need as u32) == 0
    }

    /// T_{q,2}: the Lagrangian planes of Λ/qΛ.
    pub fn t2_list(&self, l: &Lattice) -> Vec<Lattice> {
        let n = self.n_l(l);
        let b = Between::new(&l.scale(1), l);
        let t = b.t;
        b.enumerate(2, |v| self.isotropic(&v[0], &v[1], t, n + 1))
    }

    pub fn t2(&self, l: &Lattice) -> FormalSum {
        FormalSum::from_list(self.t2_list(l))
    }

    /// T_{q,1}: Λ' ∈ 𝓛 with the same n and Λ'/(Λ∩Λ') ≅ Λ/(Λ∩Λ') ≅ 𝔽_q.
    pub fn t1(&self, l: &Lattice) -> FormalSum {
        let n = self.n_l(l);
        let b = Between::new(&l.scale(1), l);
        let mut out = FormalSum::new();
        crate::lattices::for_each_subspace(b.quotient_dim(), 1, self.q, |u| {
            let v = b.lift(&u[0]);
            let wide = l.extend(b.t - 1, &[v]);
            let p = self.form.dual(&wide).scale(n as i32);
            for m in Between::new(&p, &wide).enumerate(1, |_| true) {
                if m != *l {
                    out.add(m, 1);
                }
            }
        });
        out
    }

    /// θ₊: 𝓛 → 𝓛_Pa, the index-q sublattices (hyperplanes of Λ/qΛ).
    pub fn theta_plus_list(&self, l: &Lattice) -> Vec<Lattice> {
        self.n_l(l);
        Between::new(&l.scale(1), l).enumerate(3, |_| true)
    }

    pub fn theta_plus(&self, l: &Lattice) -> FormalSum {
        FormalSum::from_list(self.theta_plus_list(l))
    }

    /// θ₋: 𝓛 → 𝓛_Pa, the superlattices Λ + q⁻¹v.
    pub fn theta_minus_list(&self, l: &Lattice) -> Vec<Lattice> {
        self.n_l(l);
        Between::new(l, &l.scale(-1)).enumerate(1, |_| true)
    }

    pub fn theta_minus(&self, l: &Lattice) -> FormalSum {
        FormalSum::from_list(self.theta_minus_list(l))
    }

    /// δ₊: 𝓛_Pa → 𝓛, lines of qⁿΛ^∨/Λ.
    pub fn delta_plus_list(&self, p: &Lattice) -> Vec<Lattice> {
        let (n, d) = self.pa_dual(p);
        let top = d.scale(n as i32);
        Between::new(p, &top).enumerate(1, |_| true)
    }

    pub fn delta_plus(&self, p: &Lattice) -> FormalSum {
        FormalSum::from_list(self.delta_plus_list(p))
    }

    /// δ₋: 𝓛_Pa → 𝓛, lines of Λ/q^{n+1}Λ^∨.
    pub fn delta_minus_list(&self, p: &Lattice) -> Vec<Lattice> {
        let (n, d) = self.pa_dual(p);
        let bottom = d.scale(n as i32 + 1);
        Between::new(&bottom, p).enumerate(1, |_| true)
    }

    pub fn delta_minus(&self, p: &Lattice) -> FormalSum {
        FormalSum::from_list(self.delta_minus_list(p))
    }

    /// T_lr = T₁ + (q+1)(q²+1) − (q+1)T₂.
    pub fn t_lr(&self, l: &Lattice) -> FormalSum {
        let q = self.q as i64;
        let mut s = self.t1(l);
        s.add(*l, (q + 1) * (q * q + 1));
        s.add_sum(&self.t2(l), -(q + 1));
        s
    }

    /// Siegel pairs (Λ, Λ₋) over Λ.
    pub fn siegel_pairs(&self, l: &Lattice) -> Vec<(Lattice, Lattice)> {
        self.t2_list(l).into_iter().map(|m| (*l, m)).collect()
    }

    /// θ_Sie^Pa: the q+1 lattices strictly between Λ₋ and Λ₊.
    pub fn theta_sie_pa(&self, plus: &Lattice, minus: &Lattice) -> Vec<Lattice> {
        Between::new(minus, plus).enumerate(1, |_| true)
    }

    /// (δ₊+δ₋)∘θ_Sie^Pa(y) − 4q·Λ₊ − 4q·Λ₋.
    pub fn siegel_potential(&self, plus: &Lattice, minus: &Lattice) -> FormalSum {
        let q = self.q as i64;
        let mut s = FormalSum::new();
        for p in self.theta_sie_pa(plus, minus) {
            s.add_sum(&self.delta_plus(&p), 1);
            s.add_sum(&self.delta_minus(&p), 1);
        }
        s.add(*plus, -4 * q);
        s.add(*minus, -4 * q);
        s
    }
}

pub fn deg_t1(q: i64) -> i64 {
    q * (q + 1) * (q * q + 1)
}

pub fn deg_t2(q: i64) -> i64 {
    (q + 1) * (q * q + 1)
}

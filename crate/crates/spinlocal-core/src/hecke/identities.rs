use super::{ball, FormalSum, Hecke};
use crate::lattices::Lattice;
use crate::report::Check;

/// ∇ on a vector (a, b, c) of the three incidence components:
/// (δ₊+δ₋)a + 2b + 2c.
pub fn nabla(h: &Hecke, pa: &FormalSum, b: &FormalSum, c: &FormalSum) -> FormalSum {
    let mut out = pa.apply(|p| h.delta_plus(p).plus(&h.delta_minus(p)));
    out.add_sum(b, 2);
    out.add_sum(c, 2);
    out
}

/// The four composite identities δ±∘θ± at one lattice of 𝓛.
pub fn composite_checks(h: &Hecke, l: &Lattice) -> Vec<Check> {
    let q = h.q as i64;
    let key = l.key();
    let tp = h.theta_plus(l);
    let tm = h.theta_minus(l);
    let t2 = h.t2(l);
    let mut base = h.t1(l);
    base.add(*l, (q + 1) * (q * q + 1));
    let dp = |s: &FormalSum| s.apply(|p| h.delta_plus(p));
    let dm = |s: &FormalSum| s.apply(|p| h.delta_minus(p));
    vec![
        Check::sums("delta_plus.theta_plus = T1 + (q+1)(q^2+1)", h.q, &key, &dp(&tp), &base),
        Check::sums("delta_minus.theta_minus = T1 + (q+1)(q^2+1)", h.q, &key, &dm(&tm), &base),
        Check::sums("delta_minus.theta_plus = (q+1)T2", h.q, &key, &dm(&tp), &t2.scaled(q + 1)),
        Check::sums(
            "delta_plus.theta_minus = <q>^-1 (q+1)T2",
            h.q,
            &key,
            &dp(&tm),
            &t2.scaled(q + 1).scale_lattices(-1),
        ),
    ]
}

/// Row identity (δ₊+δ₋, 2, 2)·M = (0, −T_lr, −T_lr + (⟨q⟩⁻¹−1)(q+1)T₂),
/// evaluated on one lattice of 𝓛 (second and third entries) and on
/// each of its θ₊-neighbors in 𝓛_Pa (first entry).
pub fn nabla_row_checks(h: &Hecke, l: &Lattice) -> Vec<Check> {
    let q = h.q as i64;
    let key = l.key();
    let zero = FormalSum::new();
    let tp = h.theta_plus(l);
    let tm = h.theta_minus(l);
    let t2 = h.t2(l);
    let tlr = h.t_lr(l);

    let mut out = vec![];
    for p in h.theta_plus_list(l) {
        let g = FormalSum::single(p);
        // column 1 of M: (2g, −δ₊g, −δ₋g)
        let lhs = nabla(h, &g.scaled(2), &h.delta_plus(&p).scaled(-1), &h.delta_minus(&p).scaled(-1));
        out.push(Check::sums("nabla row entry 1 = 0", h.q, p.key(), &lhs, &zero));
    }
    // column 2: (−θ₊Λ, 0, (q+1)T₂Λ)
    let lhs2 = nabla(h, &tp.scaled(-1), &zero, &t2.scaled(q + 1));
    out.push(Check::sums("nabla row entry 2 = -T_lr", h.q, &key, &lhs2, &tlr.scaled(-1)));
    // column 3: (−θ₋Λ, (q+1)⟨q⟩⁻¹T₂Λ, 0)
    let lhs3 = nabla(h, &tm.scaled(-1), &t2.scaled(q + 1).scale_lattices(-1), &zero);
    let mut rhs3 = tlr.scaled(-1);
    rhs3.add_sum(&t2.scaled(q + 1).scale_lattices(-1), 1);
    rhs3.add_sum(&t2.scaled(q + 1), -1);
    out.push(Check::sums("nabla row entry 3 = -T_lr + (<q>^-1 - 1)(q+1)T2", h.q, &key, &lhs3, &rhs3));
    out
}

/// Siegel potential versus ∇ of the incidence vector
/// (θ_Sie, −2qΛ₊, −2qΛ₋), with θ_Sie taken from θ₊(Λ₊) filtered by Λ₋ ⊆ P.
pub fn siegel_checks(h: &Hecke, l: &Lattice) -> Vec<Check> {
    let q = h.q as i64;
    let mut out = vec![];
    for (plus, minus) in h.siegel_pairs(l) {
        let theta = FormalSum::from_list(h.theta_plus_list(&plus).into_iter().filter(|p| p.contains_lattice(&minus)));
        let raw = nabla(
            h,
            &theta,
            &FormalSum::single(plus).scaled(-2 * q),
            &FormalSum::single(minus).scaled(-2 * q),
        );
        let pot = h.siegel_potential(&plus, &minus);
        let key = format!("{}|{}", plus.key(), minus.key());
        out.push(Check::sums("siegel potential = nabla(theta_Sie, -2q, -2q)", h.q, &key, &pot, &raw));
        let deg = 2 * (q + 1) * (q + 1) - 8 * q;
        out.push(Check::equal("siegel potential degree = 2(q+1)^2 - 8q", h.q, &key, &pot.degree(), &deg));
        out.push(Check::equal("siegel potential coefficient of plus = (q+1) - 4q", h.q, &key, &pot.coeff(&plus), &(q + 1 - 4 * q)));
    }
    out
}

/// Checks over every lattice of the T₂-ball.
pub fn over_ball(h: &Hecke, center: &Lattice, radius: usize, f: impl Fn(&Hecke, &Lattice) -> Vec<Check>) -> Vec<Check> {
    ball(h, center, radius).iter().flat_map(|(_, l)| f(h, l)).collect()
}

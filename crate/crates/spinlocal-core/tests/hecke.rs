use std::collections::BTreeSet;

use spinlocal_core::hecke::{
    ball, composite_checks, deg_t1, deg_t2, nabla_row_checks, over_ball, siegel_checks, FormalSum, Hecke,
};
use spinlocal_core::lattices::{l_index, pa_index, Lattice};
use spinlocal_core::arith::rat;

#[test]
fn operator_degrees_at_base() {
    for q in [3u64, 5] {
        let h = Hecke::new(q);
        let l = h.base();
        let qi = q as i64;
        assert_eq!(h.t2(&l).degree(), deg_t2(qi));
        assert_eq!(h.theta_plus(&l).degree(), deg_t2(qi));
        assert_eq!(h.theta_minus(&l).degree(), deg_t2(qi));
        let t1 = h.t1(&l);
        assert_eq!(t1.degree(), deg_t1(qi));
        assert_eq!(t1.len(), deg_t1(qi) as usize);
        for p in h.theta_plus_list(&l) {
            assert_eq!(pa_index(&h.form, &p), Some(0));
            assert_eq!(h.delta_plus(&p).degree(), qi + 1);
            assert_eq!(h.delta_minus(&p).degree(), qi + 1);
        }
        for m in h.t2_list(&l) {
            assert_eq!(l_index(&h.form, &m), Some(1));
        }
        assert_eq!(h.t_lr(&l).degree(), 0);
    }
}

// All lattices M with qΛ ⊆ M ⊆ q⁻¹Λ, M self-dual and [Λ : Λ∩M] = q,
// found by scanning Hermite normal forms of qM inside Λ.
fn t1_oracle(h: &Hecke) -> BTreeSet<Lattice> {
    let q = h.q as i64;
    let base = h.base();
    let mut out = BTreeSet::new();
    let mut es = vec![];
    for a in 0..3u32 {
        for b in 0..3u32 {
            for c in 0..3u32 {
                for d in 0..3u32 {
                    if a + b + c + d == 4 {
                        es.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    for e in es {
        // off-diagonal slots (i, j), i < j, entry in [0, q^{e_i})
        let slots: Vec<(usize, usize)> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
        let ranges: Vec<i64> = slots.iter().map(|&(i, _)| q.pow(e[i])).collect();
        let total: i64 = ranges.iter().product();
        for mut idx in 0..total {
            let mut m = [[0i64; 4]; 4];
            for i in 0..4 {
                m[i][i] = q.pow(e[i]);
            }
            for (s, &(i, j)) in slots.iter().enumerate() {
                m[i][j] = idx % ranges[s];
                idx /= ranges[s];
            }
            let gens: Vec<Vec<_>> =
                (0..4).map(|j| (0..4).map(|i| rat(m[i][j], q)).collect()).collect();
            let lat = Lattice::from_rational_gens(h.q as u64, 4, &gens).unwrap();
            if lat == base || l_index(&h.form, &lat) != Some(0) {
                continue;
            }
            let meet = lat.intersect(&base);
            if Lattice::colength(&meet, &base) == 1 && lat.contains_lattice(&base.scale(1)) {
                out.insert(lat);
            }
        }
    }
    out
}

#[test]
fn t1_matches_hnf_scan_q3() {
    let h = Hecke::new(3);
    let t1 = h.t1(&h.base());
    let found: BTreeSet<Lattice> = t1.terms.keys().copied().collect();
    assert!(t1.terms.values().all(|&c| c == 1));
    assert_eq!(found, t1_oracle(&h));
}

#[test]
fn composites_and_nabla_on_ball_q3() {
    let h = Hecke::new(3);
    let c = h.base();
    let checks = over_ball(&h, &c, 1, composite_checks);
    assert_eq!(checks.len(), 41 * 4);
    assert!(checks.iter().all(|k| k.pass), "{:?}", checks.iter().find(|k| !k.pass));
    let rows = over_ball(&h, &c, 1, nabla_row_checks);
    assert!(rows.iter().all(|k| k.pass), "{:?}", rows.iter().find(|k| !k.pass));
}

#[test]
fn composites_at_base_q5() {
    let h = Hecke::new(5);
    assert!(composite_checks(&h, &h.base()).iter().all(|k| k.pass));
    assert!(nabla_row_checks(&h, &h.base()).iter().all(|k| k.pass));
}

#[test]
fn siegel_potential_q3() {
    let h = Hecke::new(3);
    let checks = siegel_checks(&h, &h.base());
    assert_eq!(checks.len(), 3 * 40);
    assert!(checks.iter().all(|k| k.pass), "{:?}", checks.iter().find(|k| !k.pass));
    for (plus, minus) in h.siegel_pairs(&h.base()) {
        assert_eq!(h.theta_sie_pa(&plus, &minus).len(), 4);
        // support contains qΛ₊
        let pot = h.siegel_potential(&plus, &minus);
        assert!(pot.terms.keys().all(|m| m.contains_lattice(&plus.scale(1))));
    }
}

#[test]
fn ball_sizes() {
    let h = Hecke::new(3);
    let b = ball(&h, &h.base(), 1);
    assert_eq!(b.len(), 41);
    assert_eq!(b.iter().filter(|(r, _)| *r == 1).count(), 40);
    let h7 = Hecke::new(7);
    assert_eq!(ball(&h7, &h7.base(), 1).len(), 401);
}

#[test]
fn formal_sum_arithmetic() {
    let a = Lattice::standard(3, 4);
    let b = a.scale(1);
    let mut s = FormalSum::from_list([a, b, a]);
    assert_eq!(s.coeff(&a), 2);
    s.add(a, -2);
    assert_eq!(s.len(), 1);
    assert_eq!(s.scale_lattices(-1).coeff(&a), 1);
}

use std::collections::BTreeSet;

use spinlocal_core::arith::{rat, rint};
use spinlocal_core::hecke::{ball, vertex_diagram_checks, Hecke};
use spinlocal_core::lattices::{Lattice, VertexSpace};
use spinlocal_core::Rat;

fn omega() -> [[i128; 4]; 4] {
    [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]
}

fn mul(x: &[[i128; 4]; 4], y: &[[i128; 4]; 4]) -> [[i128; 4]; 4] {
    let mut z = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                z[i][j] += x[i][k] * y[k][j];
            }
        }
    }
    z
}

fn tr(x: &[[i128; 4]; 4]) -> i128 {
    (0..4).map(|i| x[i][i]).sum()
}

#[test]
fn coordinates_realize_v() {
    let vs = VertexSpace::new(3);
    let om = omega();
    let samples: [[i128; 5]; 4] = [[1, 0, 0, 0, 0], [2, -1, 3, 1, 5], [0, 0, 1, 0, 0], [4, 7, -2, 3, -1]];
    for c in &samples {
        let x = vs.endo(c);
        let xt: [[i128; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| x[j][i]));
        assert_eq!(mul(&xt, &om), mul(&om, &x), "self-adjoint");
        assert_eq!(tr(&x), 0);
        let sq = mul(&x, &x);
        let qv = c[0] * c[1] + c[2] * c[2] + c[3] * c[4];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(sq[i][j], if i == j { qv } else { 0 });
            }
        }
        for d in &samples {
            let y = vs.endo(d);
            assert_eq!(tr(&mul(&x, &y)), 2 * vs.form.pair_int(c, d));
        }
    }
}

// X(c)Λ ⊆ Λ checked column by column with rational arithmetic
fn stabilizes(vs: &VertexSpace, l: &Lattice, c: &[Rat; 5]) -> bool {
    let q = vs.q as i64;
    let den = rat(1, q);
    let ci: [i128; 5] = std::array::from_fn(|k| (c[k].clone() / den.clone()).to_integer().try_into().unwrap());
    let x = vs.endo(&ci);
    l.basis_rat().iter().all(|col| {
        let img: Vec<Rat> = (0..4)
            .map(|i| (0..4).map(|j| rint(x[i][j] as i64) * col[j].clone() * den.clone()).sum())
            .collect();
        l.contains_rat(&img)
    })
}

#[test]
fn vertex_lattice_matches_window_scan() {
    let q = 3u64;
    let h = Hecke::new(q);
    let vs = VertexSpace::new(q);
    let b = ball(&h, &h.base(), 1);
    let mut picks: Vec<Lattice> = vec![b[0].1, b[7].1, b[33].1];
    picks.push(h.theta_plus_list(&h.base())[5]);
    for l in picks {
        let lv = vs.vertex_lattice_of(&l);
        // window q^{-1}ℤ⁵ / qℤ⁵
        let n = (q * q) as i64;
        for idx in 0..n.pow(5) {
            let mut k = idx;
            let c: [Rat; 5] = std::array::from_fn(|_| {
                let v = k % n;
                k /= n;
                rat(v, q as i64)
            });
            assert_eq!(stabilizes(&vs, &l, &c), lv.contains_rat(&c), "{l} at {c:?}");
        }
    }
}

#[test]
fn base_vertex_lattice_is_standard() {
    let vs = VertexSpace::new(5);
    let l = vs.vertex_lattice_of(&Lattice::standard(5, 4));
    assert_eq!(l, Lattice::standard(5, 5));
    assert_eq!(vs.vl_type(&l).unwrap(), 0);
    assert_eq!(vs.vertex_lattice_of(&Lattice::standard(5, 4).scale(3)), l);
}

#[test]
fn split_vertex_lattice_has_type_two() {
    let q = 3;
    let vs = VertexSpace::new(q);
    let gens: Vec<Vec<Rat>> = (0..5)
        .map(|j| (0..5).map(|i| if i == j { rint(if j == 1 { q as i64 } else { 1 }) } else { rint(0) }).collect())
        .collect();
    let l2 = Lattice::from_rational_gens(q, 5, &gens).unwrap();
    assert_eq!(vs.vl_type(&l2).unwrap(), 2);
    assert_eq!(vs.bar_delta_sie(&l2).unwrap().degree(), 2);
    assert_eq!(vs.bar_theta_sie_pa(&l2).unwrap().degree(), q as i64 + 1);
    assert!(vs.bar_delta(&l2).is_err());
}

#[test]
fn diagrams_commute_on_ball_q3() {
    let h = Hecke::new(3);
    let vs = VertexSpace::new(3);
    let b = ball(&h, &h.base(), 1);
    let mut images = BTreeSet::new();
    for (_, l) in &b {
        let checks = vertex_diagram_checks(&h, &vs, l);
        assert!(checks.iter().all(|c| c.pass), "{:?}", checks.iter().find(|c| !c.pass));
        images.insert(vs.vertex_lattice_of(l));
    }
    assert_eq!(images.len(), b.len(), "Λ ↦ L_Λ is injective on classes");
}

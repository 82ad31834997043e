use spinlocal_core::hecke::{multiplicity_checks, Hecke, Multiplicity, SpecialMeet};
use spinlocal_core::lattices::Lattice;

#[test]
fn special_lattices_are_what_they_claim() {
    let m = Multiplicity::new(3);
    let h = Form2::hyperbolic();
    for l in [m.l_sp0, m.l_sp1] {
        assert!(h.self_dual(&l), "{l}");
        assert!(l.contains_lattice(&m.l_sp));
    }
    assert!(!h.self_dual(&m.l_sp));
}

// the hyperbolic plane with Gram [[0,1],[1,0]], checked by hand
struct Form2;
impl Form2 {
    fn hyperbolic() -> Form2 {
        Form2
    }
    fn self_dual(&self, l: &Lattice) -> bool {
        // diagonal lattices ⟨q^a e₁, q^b e₂⟩ are self-dual iff a + b = 0
        l.m[0][1] == 0 && (l.shift * 2 + l.e[0] as i32 + l.e[1] as i32) == 0
    }
}

#[test]
fn diamond_tree_is_regular() {
    for q in [3u64, 5] {
        let m = Multiplicity::new(q);
        let ball = m.diamond_ball(2);
        assert_eq!(ball.len() as u64, 1 + (q + 1) + (q + 1) * q);
        for l in &ball {
            assert_eq!(m.diamond_neighbors(l).len() as u64, q + 1);
        }
    }
}

#[test]
fn base_lattice_meets_v_sp_in_l1() {
    let h = Hecke::new(3);
    let m = Multiplicity::new(3);
    let lv = m.vs.vertex_lattice_of(&h.base());
    assert_eq!(m.classify(&lv), SpecialMeet::SelfDual1);
    assert_eq!(m.formula(&lv), 4 - 4 * 3);
    assert_eq!(m.bruteforce(&lv, 3).unwrap(), (-8, -8));
}

#[test]
fn bruteforce_matches_formula_on_ball_q3() {
    let h = Hecke::new(3);
    let checks = multiplicity_checks(&h, 1, 3);
    assert_eq!(checks.len(), 41 * 3);
    assert!(checks.iter().all(|c| c.pass), "{:?}", checks.iter().find(|c| !c.pass));
}

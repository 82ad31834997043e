use num::{One, Zero};
use rand::{rngs::StdRng, Rng, SeedableRng};
use spinlocal_core::arith::{rat, rint, LaurentPoly, MLaurent, Rat};
use spinlocal_core::spaces::{mat_from_ints, split_even, split_quadratic, QuadSpace};
use spinlocal_core::testfns::{FamilyTag, LatticeSquare, PhiFamily, PhiPrime, PrimeVariant};
use spinlocal_core::weil::*;
use spinlocal_core::CycloScalar;

#[test]
fn s_table_matches_paper_values() {
    for q in [3u64, 5, 7] {
        for c in s_table_checks(q).unwrap() {
            assert!(c.pass, "{c:?}");
        }
    }
}

#[test]
fn s_table_factored_matches_direct_sum() {
    for c in [1, 2] {
        let fast = s_table(3, c).unwrap();
        let slow = s_table_brute(3, c).unwrap();
        assert_eq!(fast.rows, slow.rows, "c = {c}");
    }
    assert!(s_table_brute(5, 1).is_err());
}

#[test]
fn s_table_spot_values() {
    let t = s_table(3, 1).unwrap();
    assert_eq!(t.value(FamilyTag::Phi1, &rat(1, 3)), Some(rat(2, 81)));
    assert_eq!(t.value(FamilyTag::Star, &rat(2, 3)), Some(rat(16, 81)));
    assert_eq!(t.value(FamilyTag::Phi0, &rint(2)), Some(rat(2, 9)));
    assert_eq!(t.value(FamilyTag::Tot, &rat(1, 3)), Some(rat(4, 27)));
    assert_eq!(t.value(FamilyTag::Tot, &rint(1)), Some(Rat::zero()));
}

#[test]
fn c_chi_coefficients() {
    for (q, want) in [(3u64, rat(4, 27)), (5, rat(16, 125))] {
        let r = s_tot_radial(&s_table(q, 1).unwrap()).unwrap();
        let cc = c_chi_tot(&r);
        assert_eq!(cc.monomial(), Some((-1, 1, want)));
        assert!(cc.nonvanishing());
    }
}

#[test]
fn f_chi_of_lattice_indicator() {
    let one = RadialFn::new(0, vec![], Rat::one());
    let (n, d) = f_chi(&one);
    assert_eq!(n, LaurentPoly::constant(Rat::one()));
    assert_eq!(d, LaurentPoly::from_terms(&[(0, Rat::one()), (1, -Rat::one())]));
}

#[test]
fn f_chi_dilation_and_lemma() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..40 {
        let lo = rng.gen_range(-3..2);
        let shells: Vec<Rat> = (0..rng.gen_range(0..4)).map(|_| rint(rng.gen_range(-4..5))).collect();
        let phi = RadialFn::new(lo, shells, rint(rng.gen_range(-4..5)));
        assert_eq!(f_chi(&phi), f_chi_lemma(&phi));
        for k in -2..3 {
            let (n0, d0) = f_chi(&phi);
            let (n1, d1) = f_chi(&phi.dilate(k));
            // f(φ(q^{-k}·)) = u^k f(φ), compared cross-multiplied
            assert_eq!(n1.mul(&d0), n0.shift(k).mul(&d1));
        }
    }
}

fn closed_form(a: i64, m: usize) -> MLaurent<Rat> {
    let mut p = MLaurent::constant(m, Rat::one());
    for i in 0..m {
        p = p.mul(&MLaurent::var(m, i, a));
    }
    for i in 0..m {
        for j in i + 1..m {
            p = p.mul(&MLaurent::var(m, j, 1).sub(&MLaurent::var(m, i, 1)));
        }
    }
    p
}

#[test]
fn vandermonde_independence() {
    for (a, b) in [(-2i64, 1i64), (-1, 0), (0, 2)] {
        let m = (b - a + 1) as usize;
        let det = vandermonde_det(a, b);
        let cf = closed_form(a, m);
        assert!(det == cf || det == cf.neg(), "({a}, {b}): {det:?}");
    }
    assert_eq!(vandermonde_rank_mod_p(-2, 1, &[2, 3, 5, 7], 101).unwrap(), 4);
    assert_eq!(vandermonde_rank_mod_p(-2, 1, &[2, 2, 5, 7], 101).unwrap(), 3);
    assert!(vandermonde_rank_mod_p(-2, 1, &[1, 2, 5, 7], 101).is_err());
}

fn spaces() -> Vec<QuadSpace> {
    vec![
        QuadSpace::new(mat_from_ints(&[&[1]])).unwrap(),
        split_even(1),
        QuadSpace::new(mat_from_ints(&[&[1, 0], &[0, 2]])).unwrap(),
        split_quadratic(1),
    ]
}

#[test]
fn fourier_inversion_and_plancherel() {
    let mut rng = StdRng::seed_from_u64(17);
    let mut done = 0;
    for i in 0..50 {
        let q = [3u64, 5][i % 2];
        let space = spaces()[i % 4].clone();
        let d = space.dim();
        let n = if d == 1 { 1 + i % 2 } else { 1 };
        let (a, b) = [(0, 1), (1, 0), (1, 1), (0, 0), (2, -1)][i % 5];
        let w = Window::new(a, b).unwrap();
        let f = SchwartzFn::random(q, space, n, w, 1 + i % 5, &mut rng).unwrap();
        if f.cells() > 20_000 {
            continue;
        }
        let hat = fourier_full(&f).unwrap();
        let naive = fourier_naive(&f).unwrap();
        assert!(hat.same_function(&naive), "dense vs naive, case {i}");
        let back = fourier_full(&hat).unwrap();
        assert!(back.same_function(&f.reflect()), "inversion, case {i}");
        assert_eq!(back.unit, f.unit + 2);
        assert_eq!(hat.l2_mass(), f.l2_mass(), "plancherel, case {i}");
        done += 1;
    }
    assert!(done >= 40, "{done}");
}

#[test]
fn fourier_of_lattice_indicator_is_itself() {
    for space in spaces() {
        let one = SchwartzFn::lattice_indicator(3, space, 1).unwrap();
        assert!(fourier_full(&one).unwrap().same_function(&one));
    }
}

#[test]
fn unipotent_is_additive() {
    let mut rng = StdRng::seed_from_u64(23);
    for i in 0..20 {
        let q = [3u64, 5][i % 2];
        let space = split_even(1);
        let w = Window::new(0, 0).unwrap();
        let f = SchwartzFn::random(q, space, 2, w, 6, &mut rng).unwrap();
        let sym = |rng: &mut StdRng| {
            let x = rat(rng.gen_range(-4..5), q as i64);
            let y = rint(rng.gen_range(-3..4));
            let z = rat(rng.gen_range(-4..5), 1);
            vec![vec![x, y.clone()], vec![y, z]]
        };
        let (u1, u2) = (sym(&mut rng), sym(&mut rng));
        let sum: Vec<Vec<Rat>> = u1.iter().zip(&u2).map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect()).collect();
        let lhs = act_unipotent(&sum, &f).unwrap();
        let rhs = act_unipotent(&u1, &act_unipotent(&u2, &f).unwrap()).unwrap();
        assert!(lhs.same_function(&rhs), "case {i}");
    }
    let big = SchwartzFn::random(5, split_even(1), 2, Window::new(1, 1).unwrap(), 2000, &mut rng).unwrap();
    let u = vec![vec![rat(1, 25), Rat::zero()], vec![Rat::zero(), Rat::zero()]];
    assert!(act_unipotent(&u, &big).is_err());
}

#[test]
fn unipotent_integral_character_is_trivial_on_lattice() {
    let one = SchwartzFn::lattice_indicator(5, split_even(1), 1).unwrap();
    let u = vec![vec![rint(2)]];
    assert!(act_unipotent(&u, &one).unwrap().same_function(&one));
}

#[test]
fn levi_composition_and_scaling() {
    let q = 3u64;
    let one = SchwartzFn::lattice_indicator(q, QuadSpace::new(mat_from_ints(&[&[1]])).unwrap(), 2).unwrap();
    // q·I on two copies of a line: φ(qx), amplitude q^{-1}
    let qi = vec![vec![rint(3), Rat::zero()], vec![Rat::zero(), rint(3)]];
    let g = act_levi(&qi, &one).unwrap();
    assert_eq!(g.half_q, -2);
    assert_eq!(g.window, Window { a: 1, b: -1 });
    let inside = g.value_at(&[rat(1, 3), rat(2, 3)]);
    assert_eq!(inside.normalized(q), (CycloScalar::from_rat(rat(1, 3)), 0));
    // five-dimensional split space: amplitude q^{-5}
    let one5 = SchwartzFn::lattice_indicator(q, split_quadratic(2), 2).unwrap();
    assert_eq!(act_levi(&qi, &one5).unwrap().half_q, -10);
    let mut rng = StdRng::seed_from_u64(29);
    let f = SchwartzFn::random(q, split_even(1), 2, Window::new(1, 1).unwrap(), 5, &mut rng).unwrap();
    let m1 = vec![vec![Rat::zero(), rint(2)], vec![rint(1), Rat::zero()]];
    let m2 = vec![vec![rint(3), Rat::zero()], vec![Rat::zero(), rat(1, 3)]];
    let prod = spinlocal_core::spaces::mat_mul(&m1, &m2);
    let lhs = act_levi(&prod, &f).unwrap();
    let rhs = act_levi(&m1, &act_levi(&m2, &f).unwrap()).unwrap();
    assert!(lhs.same_function(&rhs));
    assert!(act_levi(&vec![vec![rint(1), rint(1)], vec![Rat::zero(), rint(1)]], &f).is_err());
}

#[test]
fn orthogonal_action() {
    let q = 5u64;
    let space = split_quadratic(2);
    let mut rng = StdRng::seed_from_u64(31);
    let f = SchwartzFn::random(q, space.clone(), 1, Window::new(1, 0).unwrap(), 20, &mut rng).unwrap();
    // swap the two hyperbolic planes
    let p = mat_from_ints(&[&[1, 0, 0, 0, 0], &[0, 0, 1, 0, 0], &[0, 1, 0, 0, 0], &[0, 0, 0, 0, 1], &[0, 0, 0, 1, 0]]);
    let twice = act_orthogonal(&p, &act_orthogonal(&p, &f).unwrap()).unwrap();
    assert!(twice.same_function(&f));
    assert!(!act_orthogonal(&p, &f).unwrap().same_function(&f));
    // v1 ↦ 2v1, v1* ↦ v1*/2 is integral at 5 and commutes with the swap test
    let d = vec![
        vec![rint(1), Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()],
        vec![Rat::zero(), rint(2), Rat::zero(), Rat::zero(), Rat::zero()],
        vec![Rat::zero(), Rat::zero(), rint(1), Rat::zero(), Rat::zero()],
        vec![Rat::zero(), Rat::zero(), Rat::zero(), rat(1, 2), Rat::zero()],
        vec![Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero(), rint(1)],
    ];
    let dp = spinlocal_core::spaces::mat_mul(&d, &p);
    let lhs = act_orthogonal(&dp, &f).unwrap();
    let rhs = act_orthogonal(&d, &act_orthogonal(&p, &f).unwrap()).unwrap();
    assert!(lhs.same_function(&rhs));
    let one = SchwartzFn::lattice_indicator(q, space, 1).unwrap();
    assert!(act_orthogonal(&d, &one).unwrap().same_function(&one));
    // not integral at 2 would be fine; a non-isometry is rejected
    let bad = mat_from_ints(&[&[2, 0, 0, 0, 0], &[0, 1, 0, 0, 0], &[0, 0, 1, 0, 0], &[0, 0, 0, 1, 0], &[0, 0, 0, 0, 1]]);
    assert!(act_orthogonal(&bad, &f).is_err());
}

#[test]
fn phi_bar_examples() {
    let line = QuadSpace::new(mat_from_ints(&[&[1]])).unwrap();
    let one1 = SchwartzFn::lattice_indicator(3, split_quadratic(1), 1).unwrap();
    let bar = phi_bar(&one1).unwrap();
    assert!(bar.same_function(&SchwartzFn::lattice_indicator(3, line.clone(), 1).unwrap()));
    let one2 = SchwartzFn::lattice_indicator(3, split_quadratic(2), 2).unwrap();
    let bar = phi_bar(&one2).unwrap();
    assert!(bar.same_function(&SchwartzFn::lattice_indicator(3, line, 2).unwrap()));
    assert!(phi_bar(&SchwartzFn::lattice_indicator(3, split_even(1), 1).unwrap()).is_err());
}

#[test]
fn radial_round_trip() {
    let line = QuadSpace::new(mat_from_ints(&[&[1]])).unwrap();
    let mut f = SchwartzFn::zero(3, line, 1, Window::new(1, 1).unwrap()).unwrap();
    // 2 on 3⁻¹ℤ^×, 5 on ℤ^×, 7 on 3ℤ
    for k in 0..9i64 {
        let v = if k % 3 != 0 { 2 } else if k != 0 { 5 } else { 7 };
        f.set(&[k], CycloScalar::from_int(v));
    }
    let r = RadialFn::from_schwartz(&f).unwrap();
    assert_eq!(r, RadialFn::new(-1, vec![rint(2), rint(5)], rint(7)));
    f.set(&[1], CycloScalar::from_int(0));
    assert!(RadialFn::from_schwartz(&f).is_err());
}

#[test]
fn schwartz_json_round_trip() {
    let mut rng = StdRng::seed_from_u64(37);
    let f = SchwartzFn::random(5, split_even(1), 1, Window::new(1, 1).unwrap(), 8, &mut rng).unwrap();
    let g = SchwartzFn::from_json(&f.to_json()).unwrap();
    assert!(g.same_function(&f));
    assert_eq!((g.half_q, g.unit), (f.half_q, f.unit));
}

struct Zero3;

impl PointFn for Zero3 {
    fn q(&self) -> u64 {
        3
    }
    fn dim(&self) -> usize {
        5
    }
    fn copies(&self) -> usize {
        2
    }
    fn window(&self) -> Window {
        Window { a: 1, b: 2 }
    }
    fn eval(&self, _: &[i64]) -> Rat {
        Rat::zero()
    }
    fn eval_small(&self, _: &[i64]) -> Option<i64> {
        Some(0)
    }
}

#[test]
fn shortcut_examples() {
    assert!(shortcut_criterion(&Zero3).unwrap().is_none());
    let w = shortcut_criterion(&LatticeSquare { q: 3 }).unwrap().expect("1_(LxL) conforms");
    assert!(c_at_origin(&w) > Rat::zero());
    assert!(!w.numerator.is_zero());
    let prime = PhiPrime::new(3, PrimeVariant::Li);
    let w = shortcut_criterion(&prime).unwrap().expect("phi' conforms");
    assert!(c_at_origin(&w) > Rat::zero());
    // c vanishes off q^{-1}Z x q^{-2}Z by construction; its classes are the ones listed
    assert!(w.c.keys().all(|&(a, b)| (-1..=0).contains(&a) && (-2..=1).contains(&b)));
    let star = PhiFamily::new(3, FamilyTag::Star);
    let cond = shortcut_conditions(&star).unwrap();
    assert!(cond.nonnegative && cond.nonzero_on_y1 && !cond.support_invariance);
    assert!(shortcut_criterion(&star).unwrap().is_none());
    assert!(shortcut_criterion(&LatticeSquare { q: 5 }).is_err());
}

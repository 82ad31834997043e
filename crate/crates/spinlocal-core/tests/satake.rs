use rand::{rngs::StdRng, SeedableRng};
use spinlocal_core::arith::{rat, rint};
use spinlocal_core::hecke::satake::{genericity_from_trace, random_checks, symbolic_checks, Scalar, SatakeParam};
use spinlocal_core::{ResidueInt, SqrtQ};

fn sq(q: u64, a: i64) -> SqrtQ {
    SqrtQ::new(q, rint(a), rint(0))
}

#[test]
fn trivial_parameter() {
    let q = 3;
    let one = sq(q, 1);
    let p = SatakeParam::new(one.clone(), one.clone(), one.clone(), SqrtQ::sqrt_q(q)).unwrap();
    let e = p.eigenvalues();
    assert_eq!(e.t2, SqrtQ::new(q, rint(0), rint(12)));
    assert_eq!(e.t1, sq(q, 5 * 9 - 1));
    assert_eq!(e.z, one);
}

#[test]
fn t_lr_hand_expanded_q5() {
    // A = α + 1/α = 5/2, B = 10/3; T_lr = q²AB + q² − 1 + (q+1)(q²+1) − (q+1)q^{3/2}(A+B)
    let q = 5;
    let p = SatakeParam::new(sq(q, 2), sq(q, 3), sq(q, 1), SqrtQ::sqrt_q(q)).unwrap();
    let want = SqrtQ::new(q, rat(1165, 3), rint(-175));
    assert_eq!(p.eigenvalues().t_lr(), want);
    assert_eq!(p.t_lr_via_frob(), want);
}

#[test]
fn t_lr_vanishes_when_q_is_a_frobenius_eigenvalue() {
    for q in [3u64, 5, 7] {
        let s = SqrtQ::sqrt_q(q);
        let alpha = s.inverse().unwrap();
        let p = SatakeParam::new(alpha, sq(q, 2), sq(q, 1), s).unwrap();
        assert!(p.frob_eigenvalues().contains(&sq(q, q as i64)));
        assert!(p.eigenvalues().t_lr().is_zero());
    }
}

#[test]
fn symbolic_identities() {
    let checks = symbolic_checks();
    assert_eq!(checks.len(), 4);
    for c in &checks {
        assert!(c.pass, "{c:?}");
    }
}

#[test]
fn random_identities_mod_p() {
    let mut rng = StdRng::seed_from_u64(7);
    // only the q that are squares mod 1009 take part
    let mut ran = 0;
    for q in [3u64, 5, 7, 11, 13] {
        if let Ok(cs) = random_checks(1009, q, 20, &mut rng) {
            ran += cs.len();
            assert!(cs.iter().all(|c| c.pass));
        }
    }
    assert!(ran >= 40);
}

#[test]
fn weak_genericity_examples() {
    let (p, q) = (1009u64, 3u64);
    let s = (1..p as i128).find(|s| (s * s - 3) % p as i128 == 0).unwrap();
    let s = ResidueInt::new(s, p, 1);
    let one = s.int(1);
    // α = β = q^{1/2}: trace 2(q+1)
    let bad = SatakeParam::new(s, s, one, s).unwrap();
    assert_eq!(bad.frob_trace(), s.int(2 * (q as i64 + 1)));
    assert!(!bad.eigenvalues().weakly_q_generic().unwrap());
    // β = −α: trace 0
    let a = s.int(5);
    let good = SatakeParam::new(a, s.int(-5), one, s).unwrap();
    assert!(good.frob_trace().is_zero());
    assert!(good.eigenvalues().weakly_q_generic().unwrap());
    assert_eq!(good.eigenvalues().genericity_form().unwrap(), genericity_from_trace(&good.frob_trace(), &s.int(3)));
}

#[test]
fn non_invertible_inputs_rejected() {
    let z = ResidueInt::new(0, 7, 1);
    let o = ResidueInt::new(1, 7, 1);
    assert!(SatakeParam::new(z, o, o, o).is_err());
}

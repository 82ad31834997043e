use proptest::prelude::*;
use rand::{rngs::StdRng, Rng, SeedableRng};
use spinlocal_core::galoislocal::{block_model, charpoly, cokernel, det, kernel, local_checks, random_admissible, FrobData, Mat};
use spinlocal_core::hecke::admissible::{alrg_character_of, forbidden, is_admissible, n_of_q, Fq2, UnramifiedChar};
use spinlocal_core::hecke::satake::Scalar;
use spinlocal_core::ResidueInt;

#[test]
fn admissibility_examples() {
    assert_eq!(forbidden(2, 11), vec![1, 2, 4, 6, 9, 10]);
    assert!(is_admissible(&[2, 1, 3, 8], 2, 11).unwrap());
    assert!(!is_admissible(&[2, 1, 4, 6], 2, 11).unwrap());
    assert!(!is_admissible(&[2, 1, 1, 2], 2, 11).unwrap());
    // order does not matter, lifts are reduced
    assert!(is_admissible(&[8, 13, 3, 1], 2, 11).unwrap());
    // q⁴ ≡ 1 mod 5 for q = 2
    assert!(!is_admissible(&[2, 1, 3, 4], 2, 5).unwrap());
    assert!(is_admissible(&[2, 1, 3], 2, 11).is_err());
}

#[test]
fn n_of_q_on_charpolys() {
    let r = |v: i128| ResidueInt::new(v, 11, 3);
    // (x − 2)(x − 1) exactly: f(2) = 0
    assert_eq!(n_of_q(&[r(2), r(-3), r(1)], 2), 3);
    // (x − 13)(x − 1): f(2) = −11
    assert_eq!(n_of_q(&[r(13), r(-14), r(1)], 2), 1);
    // (x − 3)(x − 1): f(2) = −1
    assert_eq!(n_of_q(&[r(3), r(-4), r(1)], 2), 0);
}

#[test]
fn alrg_character() {
    let chi = alrg_character_of(&[2, 1, 3, 8], 2, 11).unwrap();
    assert!(chi.is_almost_level_raising_generic());
    assert_eq!(chi.half_index(), Some(0));
    assert!(alrg_character_of(&[2, 1, 4, 6], 2, 11).is_err());
    // strict genericity fails exactly when α² = q: 2 is not a square mod 11, so it never does here
    for a in 1..11i64 {
        let b = (2 * ResidueInt::new(a as i128, 11, 1).inv().unwrap().value) as i64;
        if let Ok(chi) = alrg_character_of(&[2, 1, a, b], 2, 11) {
            assert!(chi.is_level_raising_generic());
        }
    }
    // p = 7, q = 2 is a square (3² = 2); α = 3 has α² = q
    let chi = alrg_character_of(&[2, 1, 3, 3], 2, 7).unwrap();
    assert!(chi.is_almost_level_raising_generic());
    assert!(!chi.is_level_raising_generic());
}

#[test]
fn generic_character_classifier() {
    let mut rng = StdRng::seed_from_u64(3);
    let (p, q) = (101u64, 3u64);
    let f = Fq2::field(p, q);
    let bad = |x: Fq2| [f.int(1), f.int(q as i64), f.int(q as i64).inverse().unwrap()].contains(&x);
    let mut accepted = 0;
    for _ in 0..200 {
        let x = f.int(rng.gen_range(1..p as i64));
        let y = f.int(rng.gen_range(1..p as i64));
        let chi = UnramifiedChar::new(vec![x, y]);
        // direct restatement of the six exclusions
        let want = !bad(x.times(&y)) && !bad(x.times(&y.inverse().unwrap())) && !bad(x.times(&x)) && !bad(y.times(&y));
        assert_eq!(chi.is_generic(), want);
        if want {
            assert!(chi.is_almost_generic());
            accepted += 1;
        }
    }
    assert!(accepted > 100);
    // χ₁² = 1 for one index is allowed for almost generic, not generic
    let chi = UnramifiedChar::new(vec![f.int(-1), f.int(5)]);
    assert!(!chi.is_generic() && chi.is_almost_generic());
}

fn diag(p: u64, n: u32, q: u64, d: [i128; 4]) -> FrobData {
    // (e₁, e₂, f₁, f₂) with eigenvalues d[0] on e₁, d[1] on f₁, d[2] on e₂, d[3] on f₂
    block_model(p, n, q, [[d[0], 0], [0, d[1]]], [[d[2], 0], [0, d[3]]]).unwrap()
}

#[test]
fn diagonal_example_mod_121() {
    // 41 ≡ 8 mod 11 and 3·41 ≡ 2 mod 121
    let d = diag(11, 2, 2, [2, 1, 3, 41]);
    assert!(d.is_admissible());
    assert_eq!(d.n_of_q(), 2);
    assert!(d.h1_unr().is_free_rank1());
    assert!(d.h1_sing().is_free_rank1());
    assert!(d.pairing_report().unwrap().perfect);
    let (p0, p1) = d.decompose().unwrap();
    let mut want0 = vec![vec![0i128; 4]; 4];
    want0[0][0] = 1;
    want0[2][2] = 1;
    assert_eq!(p0, want0);
    assert_eq!(p1[1][1] + p1[3][3], 2);
}

#[test]
fn one_admissible_example() {
    // λ = 13 ≡ q, partner 2/13 = 56 ≡ 1 mod 11
    let d = diag(11, 2, 2, [13, 56, 3, 41]);
    assert!(d.is_admissible());
    assert_eq!(d.n_of_q(), 1);
    assert_eq!(d.h1_unr().exps, vec![1]);
    assert_eq!(d.h1_sing().exps, vec![1]);
    let v = d.pairing_report().unwrap().value;
    assert!(v != 0 && v % 11 == 0);
    let t = d.truncate(1);
    assert!(t.h1_unr().is_free_rank1() && t.h1_sing().is_free_rank1());
    assert!(t.pairing_report().unwrap().perfect);
}

#[test]
fn not_admissible_without_eigenvalue_one() {
    // eigenvalues 3, 3·(2/3) … no 1 and no q on the first block
    let d = diag(11, 1, 2, [3, 8, 5, 7]);
    assert!(!d.is_admissible());
    assert!(d.h1_unr().exps.is_empty());
    assert!(d.decompose().is_err());
}

#[test]
fn similitude_enforced() {
    let mut phi = vec![vec![0i128; 4]; 4];
    for (i, v) in [2, 1, 3, 8].iter().enumerate() {
        phi[i][i] = *v;
    }
    let j = spinlocal_core::galoislocal::standard_j(121);
    assert!(FrobData::new(11, 2, 2, phi, j).is_err());
}

#[test]
fn random_suite() {
    let mut rng = StdRng::seed_from_u64(11);
    let mut total = 0;
    for s in 0..200 {
        let p = [7u64, 11][s % 2];
        let n = 1 + (s / 2 % 3) as u32;
        let q = [2u64, 3, 5][s / 6 % 3];
        let d = random_admissible(p, n, q, &mut rng);
        for c in local_checks(&d, &format!("sample {s}"), &mut rng) {
            assert!(c.pass, "{c:?} for {d:?}");
            total += 1;
        }
    }
    assert_eq!(total, 200 * 8);
}

fn brute_kernel_size(a: &Mat, m: i128) -> u64 {
    let mut count = 0;
    for x0 in 0..m {
        for x1 in 0..m {
            for x2 in 0..m {
                for x3 in 0..m {
                    let x = [x0, x1, x2, x3];
                    if a.iter().all(|r| r.iter().zip(&x).map(|(u, v)| u * v).sum::<i128>() % m == 0) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn smith_matches_brute_force(entries in proptest::collection::vec(0i128..9, 16)) {
        let a: Mat = entries.chunks(4).map(|c| c.to_vec()).collect();
        let k = kernel(&a, 3, 2);
        let c = cokernel(&a, 3, 2);
        prop_assert_eq!(3u64.pow(k.length()), brute_kernel_size(&a, 9));
        prop_assert_eq!(&k.exps, &c.exps);
        for g in &k.gens {
            for r in &a {
                prop_assert_eq!(r.iter().zip(g).map(|(u, v)| u * v).sum::<i128>() % 9, 0);
            }
        }
        let dv = det(&a, 9);
        if dv != 0 {
            prop_assert_eq!(c.length(), if dv % 3 == 0 { 1 } else { 0 });
        }
    }

    #[test]
    fn charpoly_cayley_hamilton(entries in proptest::collection::vec(0i128..49, 16)) {
        let a: Mat = entries.chunks(4).map(|c| c.to_vec()).collect();
        let f = charpoly(&a, 49);
        prop_assert_eq!(f[4], 1);
        // f(A) = 0 by Horner
        let mut r = vec![vec![0i128; 4]; 4];
        for &c in f.iter().rev() {
            let mut nr = vec![vec![0i128; 4]; 4];
            for i in 0..4 { for j in 0..4 { nr[i][j] = (0..4).map(|t| r[i][t] * a[t][j]).sum::<i128>() % 49; } }
            for i in 0..4 { nr[i][i] += c; }
            r = nr;
        }
        prop_assert!(r.iter().flatten().all(|x| x % 49 == 0));
    }
}

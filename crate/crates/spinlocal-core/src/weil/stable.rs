//! The one-variable functions s^?(t) obtained from φ^? on V² (V split of
//! dimension 5) by a Weyl element in the first copy, restriction of the
//! second copy to t·v₂ + a·v₁ and integration over a and t₁:
//!
//! s^?(t) = ∫∫∫ φ^?(z, t v₂ + a v₁) ψ(c·t₁ z·v₁) dz da dt₁.
//!
//! `c` is a unit twisting ψ; the values must not depend on it.

use num::{One, Zero};

use super::{c_chi_tot, RadialFn};
use crate::arith::{ipow, rat, rint, val_q, CycloAcc, Rat};
use crate::error::{Result, SpinError};
use crate::report::Check;
use crate::testfns::{membership, FamilyTag, PhiFamily};

pub use crate::testfns::FamilyTag as SVariant;

const BIG: i64 = 99;

#[derive(Clone, Debug, PartialEq)]
pub struct STable {
    pub q: u64,
    pub c: i64,
    /// (t, [s⁽⁰⁾, s⁽¹⁾, s★, s^tot]).
    pub rows: Vec<(Rat, [Rat; 4])>,
}

impl STable {
    pub fn value(&self, tag: SVariant, t: &Rat) -> Option<Rat> {
        let i = FamilyTag::ALL.iter().position(|x| *x == tag)?;
        self.rows.iter().find(|(s, _)| s == t).map(|(_, v)| v[i].clone())
    }
}

/// The sample points: q⁻¹u and u for every unit residue u, then q, 0, q⁻².
pub fn sample_points(q: u64) -> Vec<Rat> {
    let qi = q as i64;
    let mut out: Vec<Rat> = (1..qi).map(|u| rat(u, qi)).collect();
    out.extend((1..qi).map(rint));
    out.extend([rint(qi), Rat::zero(), rat(1, qi * qi)]);
    out
}

fn v_of(t: &Rat, q: u64) -> i64 {
    if t.is_zero() {
        BIG
    } else {
        val_q(t, q)
    }
}

fn v_int(x: i64, q: u64) -> i64 {
    if x == 0 {
        BIG
    } else {
        crate::arith::val_int(x as i128, q) as i64
    }
}

/// Σ_{k mod q²} ψ(c·k·r/q²) for every r mod q², as rationals.
pub fn psi_weights(q: u64, c: i64) -> Result<Vec<Rat>> {
    let m = (q * q) as i64;
    (0..m)
        .map(|r| {
            let mut acc = CycloAcc::new(m as u64);
            for k in 0..m {
                acc.add((c * k * r).rem_euclid(m) as usize, &Rat::one());
            }
            acc.finish().as_rat().ok_or_else(|| SpinError::Input("character sum is not rational".into()))
        })
        .collect()
}

fn check_q(q: u64, c: i64) -> Result<()> {
    if !crate::arith::is_prime(q) || q == 2 {
        return Err(SpinError::NotOddPrime(q));
    }
    if c.rem_euclid(q as i64) == 0 {
        return Err(SpinError::Input("c must be a unit".into()));
    }
    Ok(())
}

/// Factored evaluation. z ∈ L/q²L is split into (z₁*, z₂*) and the triple
/// (z₀, z₁, z₂); φ sees the triple only through its level and, at level 0,
/// whether z is isotropic mod q, so the triples are counted once.
pub fn s_table(q: u64, c: i64) -> Result<STable> {
    check_q(q, c)?;
    let qi = q as i64;
    let q2 = qi * qi;
    let q3 = q2 * qi;
    let w = psi_weights(q, c)?;
    // iso[r1][r2] = #{nonzero triple mod q : z0² + 2(z1 r1 + z2 r2) ≡ 0}
    let mut iso = vec![vec![0i64; q as usize]; q as usize];
    for (r1, row) in iso.iter_mut().enumerate() {
        for (r2, cell) in row.iter_mut().enumerate() {
            super::for_each_offset(3, qi, |z| {
                if z.iter().any(|&x| x != 0) && (z[0] * z[0] + 2 * (z[1] * r1 as i64 + z[2] * r2 as i64)).rem_euclid(qi) == 0 {
                    *cell += 1;
                }
            });
        }
    }
    // triple counts by level 0, 1, ≥ 2 (lifts to mod q²)
    let lifts = q3;
    let vol = Rat::new(1.into(), (ipow(q, 12) as i64).into());
    let mut rows = vec![];
    for t in sample_points(q) {
        let vt = v_of(&t, q);
        if vt < -1 {
            // t v₂ ∉ q⁻¹L, so y lies outside every support
            rows.push((t, std::array::from_fn(|_| Rat::zero())));
            continue;
        }
        let tt: i64 = (&t * rint(qi)).to_integer().try_into().unwrap();
        let mut sums = [0i64; 4];
        for z1 in 0..q2 {
            let wz = &w[z1 as usize];
            if wz.is_zero() {
                continue;
            }
            let wz: i64 = wz.to_integer().try_into().unwrap();
            for z2 in 0..q2 {
                let lev_star = v_int(z1, q).min(v_int(z2, q)).min(2);
                let counts = [lifts * iso[(z1 % qi) as usize][(z2 % qi) as usize], q3 - 1, 1];
                for (lt, &n) in counts.iter().enumerate() {
                    if n == 0 {
                        continue;
                    }
                    let lx = (lt as i64).min(lev_star);
                    for a in 0..q3 {
                        let ly = vt.min(v_int(a, q) - 1);
                        let xy = (tt * z2 + a * z1).rem_euclid(q2);
                        // key scaling: X·X = q²x·x with x isotropic mod q, Y·Y = 0
                        let mb = membership(q, lx, ly, q3 as i128, 0, (qi * xy) as i128);
                        for (s, tag) in sums.iter_mut().zip(FamilyTag::ALL) {
                            *s += n * wz * mb.value(tag, q);
                        }
                    }
                }
            }
        }
        rows.push((t, sums.map(|s| rint(s) * &vol)));
    }
    Ok(STable { q, c, rows })
}

/// Direct evaluation at q = 3 by summing the pointwise φ^? over every
/// z ∈ L/9L, a ∈ 3⁻¹ℤ/9ℤ and t₁ ∈ 9⁻¹ℤ/ℤ.
pub fn s_table_brute(q: u64, c: i64) -> Result<STable> {
    check_q(q, c)?;
    if q != 3 {
        return Err(SpinError::Guardrail("direct s-table only at q = 3".into()));
    }
    let qi = q as i64;
    let (q2, q3) = (qi * qi, qi * qi * qi);
    let fam = PhiFamily::new(q, FamilyTag::Tot);
    let vol = Rat::new(1.into(), (ipow(q, 12) as i64).into());
    let mut rows = vec![];
    for t in sample_points(q) {
        let scaled = &t * rint(qi);
        if !scaled.is_integer() {
            rows.push((t, std::array::from_fn(|_| Rat::zero())));
            continue;
        }
        let tt: i64 = scaled.to_integer().try_into().unwrap();
        let mut counts = vec![[0i64; 4]; q2 as usize];
        super::for_each_offset(5, q2, |z| {
            let mut pt = [0i64; 10];
            for i in 0..5 {
                pt[i] = (qi * z[i]).rem_euclid(q3);
            }
            // y = t v₂ + a v₁ with keys Y = q·y
            pt[5 + 2] = tt.rem_euclid(q3);
            let mut f = [0i64; 4];
            for a in 0..q3 {
                pt[5 + 1] = a;
                let mb = fam.membership(&pt);
                for (s, tag) in f.iter_mut().zip(FamilyTag::ALL) {
                    *s += mb.value(tag, q);
                }
            }
            if f.iter().any(|&x| x != 0) {
                // ψ(c t₁ z·v₁) for t₁ = k/q², z·v₁ = z₁*
                for k in 0..q2 {
                    let j = (c * k * z[3]).rem_euclid(q2) as usize;
                    for (s, x) in counts[j].iter_mut().zip(f) {
                        *s += x;
                    }
                }
            }
        });
        let vals = std::array::from_fn(|i| {
            let mut acc = CycloAcc::new(q2 as u64);
            for (j, row) in counts.iter().enumerate() {
                acc.add(j, &rint(row[i]));
            }
            acc.finish().as_rat().expect("character sum is rational") * &vol
        });
        rows.push((t, vals));
    }
    Ok(STable { q, c, rows })
}

/// The tabulated values on q⁻¹ℤ_q^× and ℤ_q^×.
pub fn expected_s(tag: SVariant, shell: i64, q: u64) -> Rat {
    let qi = q as i64;
    let r = |n: i64, e: u32| Rat::new(n.into(), qi.pow(e).into());
    match (tag, shell) {
        (FamilyTag::Phi0, -1) => Rat::zero(),
        (FamilyTag::Phi1, -1) => r(qi - 1, 4),
        (FamilyTag::Star, -1) => r((qi * qi - 1) * (qi - 1), 4),
        (FamilyTag::Tot, -1) => r((qi - 1) * (qi - 1), 3),
        (FamilyTag::Phi0, 0) => r(qi - 1, 2),
        (FamilyTag::Phi1, 0) => Rat::zero(),
        (FamilyTag::Star, 0) => r((qi - 1) * (qi - 1), 2),
        (FamilyTag::Tot, 0) => Rat::zero(),
        _ => Rat::zero(),
    }
}

/// s^tot as a radial function: shells q⁻¹ℤ^×, ℤ^×, then the value on qℤ.
pub fn s_tot_radial(t: &STable) -> Option<RadialFn> {
    let q = t.q as i64;
    let at = |x: Rat| t.value(FamilyTag::Tot, &x);
    Some(RadialFn::new(-1, vec![at(rat(1, q))?, at(rint(1))?], at(rint(q))?))
}

pub fn s_table_checks(q: u64) -> Result<Vec<Check>> {
    let mut out = vec![];
    let qi = q as i64;
    let w = psi_weights(q, 1)?;
    let orth = w.iter().enumerate().all(|(r, x)| *x == if r == 0 { rint(qi * qi) } else { Rat::zero() });
    out.push(Check::new("s-table: sum of psi(t1 z.v1) over t1 is q^2 on z.v1 in q^2 Z", q, "c=1", orth, true, orth));
    let nonsq = (2..qi).find(|&u| crate::arith::legendre(u as i128, q) == -1).unwrap_or(2);
    let tab = s_table(q, 1)?;
    let twisted = s_table(q, nonsq)?;
    let same = tab.rows == twisted.rows;
    out.push(Check::new("s-table: independent of the choice of psi", q, format!("c=1 vs c={nonsq}"), same, true, same));
    for (i, tag) in FamilyTag::ALL.iter().enumerate() {
        for shell in [-1i64, 0] {
            let pts: Vec<&(Rat, [Rat; 4])> = tab.rows.iter().filter(|(t, _)| !t.is_zero() && v_of(t, q) == shell).collect();
            let first = pts[0].1[i].clone();
            let constant = pts.iter().all(|(_, v)| v[i] == first);
            let want = expected_s(*tag, shell, q);
            let inputs = format!("t in q^{shell} Z^x, {} samples", pts.len());
            out.push(Check::new(&format!("s-table: s_{} constant on units", tag.name()), q, &inputs, constant, true, constant));
            out.push(Check::equal(&format!("s-table: s_{} value", tag.name()), q, &inputs, &first, &want));
        }
        let outside: Vec<Rat> = tab.rows.iter().filter(|(t, _)| t.is_zero() || v_of(t, q) > 0 || v_of(t, q) < -1).map(|(_, v)| v[i].clone()).collect();
        let zero = outside.iter().all(|x| x.is_zero());
        out.push(Check::new(&format!("s-table: s_{} vanishes off q^-1 Z^x and Z^x", tag.name()), q, "t = q, 0, q^-2", zero, true, zero));
    }
    let rel = tab.rows.iter().all(|(_, v)| v[3] == &v[2] + rint(1 - qi) * (&v[0] + &v[1]));
    out.push(Check::new("s-table: s_tot = s_star + (1-q)(s_0 + s_1)", q, "all samples", rel, true, rel));
    let radial = s_tot_radial(&tab).ok_or_else(|| SpinError::Input("missing sample".into()))?;
    let cc = c_chi_tot(&radial);
    let mono = cc.monomial();
    let want = Some((-1, 1, super::fchi::expected_c_chi_coefficient(q)));
    let fmt = |m: &Option<(i64, i64, Rat)>| m.as_ref().map_or("none".to_string(), |(a, s, c)| format!("{c}*a^{a}*s^{s}"));
    out.push(Check::new("s-table: f_chi(s_tot) is a nonzero monomial", q, "u = a s^-1", fmt(&mono), fmt(&want), mono == want && cc.nonvanishing()));
    Ok(out)
}

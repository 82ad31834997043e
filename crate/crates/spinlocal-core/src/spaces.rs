//! Quadratic and symplectic spaces over ℚ, with local invariants.

use crate::arith::{is_prime, legendre, rat_mod, rint, val_q, Rat};
use crate::error::{Result, SpinError};
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub type RatMat = Vec<Vec<Rat>>;

pub fn mat_from_ints(rows: &[&[i64]]) -> RatMat {
    rows.iter().map(|r| r.iter().map(|&x| rint(x)).collect()).collect()
}

pub fn identity(n: usize) -> RatMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect()
}

pub fn mat_mul(a: &RatMat, b: &RatMat) -> RatMat {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).map(|t| &a[i][t] * &b[t][j]).fold(Rat::zero(), |x, y| x + y))
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &RatMat, v: &[Rat]) -> Vec<Rat> {
    a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).fold(Rat::zero(), |s, t| s + t)).collect()
}

pub fn transpose(a: &RatMat) -> RatMat {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn det(a: &RatMat) -> Rat {
    let n = a.len();
    let mut m = a.clone();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else { return Rat::zero() };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        let piv = m[c][c].clone();
        d *= &piv;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &piv;
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
        }
    }
    d
}

pub fn inverse(a: &RatMat) -> Result<RatMat> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero()).ok_or(SpinError::Singular)?;
        m.swap(p, c);
        let piv = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x /= &piv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..2 * n {
                    let t = &f * &m[c][k];
                    m[r][k] -= t;
                }
            }
        }
    }
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Quadratic space (V, x·y) with x·y = xᵀ G y.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadSpace {
    #[serde(with = "crate::arith::serde_mat")]
    pub gram: RatMat,
    pub names: Vec<String>,
}

impl QuadSpace {
    pub fn new(gram: RatMat) -> Result<Self> {
        let n = gram.len();
        for i in 0..n {
            if gram[i].len() != n {
                return Err(SpinError::Dimension { expected: n, got: gram[i].len() });
            }
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(SpinError::Input("Gram matrix not symmetric".into()));
                }
            }
        }
        if det(&gram).is_zero() {
            return Err(SpinError::Degenerate);
        }
        let names = (0..n).map(|i| format!("b{i}")).collect();
        Ok(QuadSpace { gram, names })
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn pair(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let gy = mat_vec(&self.gram, y);
        x.iter().zip(&gy).map(|(a, b)| a * b).fold(Rat::zero(), |s, t| s + t)
    }

    pub fn norm(&self, x: &[Rat]) -> Rat {
        self.pair(x, x)
    }
}

/// Split space of dimension 2m+1 with basis v₀, v₁…v_m, v₁*…v_m*.
pub fn split_quadratic(m: usize) -> QuadSpace {
    let n = 2 * m + 1;
    let mut g = vec![vec![Rat::zero(); n]; n];
    g[0][0] = Rat::one();
    for i in 1..=m {
        g[i][m + i] = Rat::one();
        g[m + i][i] = Rat::one();
    }
    let mut names = vec!["v0".to_string()];
    names.extend((1..=m).map(|i| format!("v{i}")));
    names.extend((1..=m).map(|i| format!("v{i}*")));
    QuadSpace { gram: g, names }
}

/// Even-dimensional split space: hyperbolic planes w_i, w_i*.
pub fn split_even(m: usize) -> QuadSpace {
    let n = 2 * m;
    let mut g = vec![vec![Rat::zero(); n]; n];
    for i in 0..m {
        g[i][m + i] = Rat::one();
        g[m + i][i] = Rat::one();
    }
    let mut names: Vec<String> = (1..=m).map(|i| format!("w{i}")).collect();
    names.extend((1..=m).map(|i| format!("w{i}*")));
    QuadSpace { gram: g, names }
}

/// Standard symplectic space W_{2n} with basis e₁…e_n, e₁*…e_n* and
/// Ω = [[0, I], [−I, 0]].
#[derive(Clone, Debug, PartialEq)]
pub struct SympSpace {
    pub n: usize,
    pub omega: RatMat,
}

impl SympSpace {
    pub fn new(n: usize) -> Self {
        let d = 2 * n;
        let mut o = vec![vec![Rat::zero(); d]; d];
        for i in 0..n {
            o[i][n + i] = Rat::one();
            o[n + i][i] = -Rat::one();
        }
        SympSpace { n, omega: o }
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn pair(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let oy = mat_vec(&self.omega, y);
        x.iter().zip(&oy).map(|(a, b)| a * b).fold(Rat::zero(), |s, t| s + t)
    }
}

/// A place of ℚ: a prime ℓ, or the real place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Place {
    Prime(u64),
    Real,
}

fn split_unit(x: &Rat, l: u64) -> (i64, Rat) {
    let v = val_q(x, l);
    let lr = rint(l as i64);
    (v, x / crate::arith::rat_pow(&lr, v))
}

/// Hilbert symbol (a, b)_v.
pub fn hilbert_symbol(a: &Rat, b: &Rat, place: Place) -> i32 {
    assert!(!a.is_zero() && !b.is_zero(), "Hilbert symbol of zero");
    match place {
        Place::Real => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (al, u) = split_unit(a, 2);
            let (be, v) = split_unit(b, 2);
            let u8_ = rat_mod(&u, 2, 3).unwrap() as i64;
            let v8 = rat_mod(&v, 2, 3).unwrap() as i64;
            let eps = |t: i64| ((t - 1) / 2) % 2;
            let omega = |t: i64| ((t * t - 1) / 8) % 2;
            let e = eps(u8_) * eps(v8) + al.rem_euclid(2) * omega(v8) + be.rem_euclid(2) * omega(u8_);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(l) => {
            let (al, u) = split_unit(a, l);
            let (be, v) = split_unit(b, l);
            let mut s = 1;
            if (al * be).rem_euclid(2) == 1 && (l % 4 == 3) {
                s = -s;
            }
            if be.rem_euclid(2) == 1 {
                s *= legendre(rat_mod(&u, l, 1).unwrap(), l);
            }
            if al.rem_euclid(2) == 1 {
                s *= legendre(rat_mod(&v, l, 1).unwrap(), l);
            }
            s
        }
    }
}

/// Diagonal entries of a congruent diagonalization (symmetric Gaussian
/// elimination, first nonzero diagonal pivot).
pub fn diagonalize(g: &RatMat) -> Result<Vec<Rat>> {
    let n = g.len();
    let mut m = g.clone();
    let mut out = Vec::with_capacity(n);
    for c in 0..n {
        if m[c][c].is_zero() {
            if let Some(r) = (c + 1..n).find(|&r| !m[r][r].is_zero()) {
                m.swap(r, c);
                for row in m.iter_mut() {
                    row.swap(r, c);
                }
            } else if let Some(r) = (c + 1..n).find(|&r| !m[c][r].is_zero()) {
                // e_c ← e_c + e_r makes the pivot 2·m[c][r] ≠ 0
                for k in 0..n {
                    let t = m[r][k].clone();
                    m[c][k] += t;
                }
                for k in 0..n {
                    let t = m[k][r].clone();
                    m[k][c] += t;
                }
            } else {
                return Err(SpinError::Degenerate);
            }
        }
        let piv = m[c][c].clone();
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &piv;
            for k in 0..n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
            for k in 0..n {
                let t = &f * &m[k][c];
                m[k][r] -= t;
            }
        }
        out.push(piv);
    }
    Ok(out)
}

/// Π_{i<j} (a_i, a_j)_v over a diagonalization.
pub fn hasse_invariant(g: &RatMat, place: Place) -> Result<i32> {
    let d = diagonalize(g)?;
    let mut s = 1;
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            s *= hilbert_symbol(&d[i], &d[j], place);
        }
    }
    Ok(s)
}

pub fn is_rational_square(x: &Rat) -> bool {
    if x.is_negative() {
        return false;
    }
    let sq = |n: &num::BigInt| {
        let r = n.sqrt();
        &r * &r == *n
    };
    sq(x.numer()) && sq(x.denom())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TAssumptions {
    pub t1: bool,
    pub t2: bool,
    /// Primes ℓ ∤ D, ℓ ≤ 50, at which the Hasse invariant of T is −1.
    pub witnesses: Vec<u64>,
}

impl TAssumptions {
    pub fn pass(&self) -> bool {
        self.t1 && self.t2
    }
}

pub fn check_t_assumptions(t: &RatMat, d: u64) -> Result<TAssumptions> {
    if t.len() != 2 {
        return Err(SpinError::Dimension { expected: 2, got: t.len() });
    }
    let t1 = !is_rational_square(&t[0][0]);
    let mut witnesses = vec![];
    for l in 2..=50u64 {
        if is_prime(l) && d % l != 0 && hasse_invariant(t, Place::Prime(l))? == -1 {
            witnesses.push(l);
        }
    }
    Ok(TAssumptions { t1, t2: !witnesses.is_empty(), witnesses })
}

/// T ≡ antidiag(α, α) mod q for some α ∈ 𝔽_q^×.
pub fn is_antidiag_mod_q(t: &RatMat, q: u64) -> bool {
    let r = |x: &Rat| rat_mod(x, q, 1);
    match (r(&t[0][0]), r(&t[1][1]), r(&t[0][1]), r(&t[1][0])) {
        (Some(0), Some(0), Some(a), Some(b)) => a == b && a != 0,
        _ => false,
    }
}

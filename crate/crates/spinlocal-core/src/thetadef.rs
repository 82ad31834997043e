//! Positive definite integral lattices: short vectors, representation
//! numbers and the coefficients a_T of the degree-n theta series.
//!
//! Enumeration is exact: the search box comes from an LDLᵀ decomposition
//! in rationals and every candidate is tested with integer arithmetic.

use std::collections::BTreeMap;

use num::{Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{rint, Rat};
use crate::error::{Result, SpinError};
use crate::report::Check;
use crate::spaces::{det, RatMat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZLattice {
    pub gram: Vec<Vec<i64>>,
}

fn rat_mat(g: &[Vec<i64>]) -> RatMat {
    g.iter().map(|r| r.iter().map(|&x| rint(x)).collect()).collect()
}

impl ZLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<ZLattice> {
        let m = gram.len();
        if m == 0 || gram.iter().any(|r| r.len() != m) {
            return Err(SpinError::Input("Gram matrix must be square and nonempty".into()));
        }
        if (0..m).any(|i| (0..i).any(|j| gram[i][j] != gram[j][i])) {
            return Err(SpinError::Input("Gram matrix must be symmetric".into()));
        }
        for k in 1..=m {
            let minor: Vec<Vec<i64>> = gram[..k].iter().map(|r| r[..k].to_vec()).collect();
            if !det(&rat_mat(&minor)).is_positive() {
                return Err(SpinError::Input(format!("leading minor {k} is not positive")));
            }
        }
        Ok(ZLattice { gram })
    }

    /// ℤ^m with the identity Gram matrix.
    pub fn standard(m: usize) -> ZLattice {
        ZLattice { gram: (0..m).map(|i| (0..m).map(|j| (i == j) as i64).collect()).collect() }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0;
        for (i, r) in self.gram.iter().enumerate() {
            for (j, g) in r.iter().enumerate() {
                s += x[i] * g * y[j];
            }
        }
        s
    }

    /// The same lattice in the basis given by the columns of u.
    pub fn base_change(&self, u: &[Vec<i64>]) -> Result<ZLattice> {
        let m = self.rank();
        if u.len() != m || u.iter().any(|r| r.len() != m) {
            return Err(SpinError::Dimension { expected: m, got: u.len() });
        }
        if det(&rat_mat(u)).abs() != rint(1) {
            return Err(SpinError::Input("base change must be unimodular".into()));
        }
        let col = |j: usize| -> Vec<i64> { u.iter().map(|r| r[j]).collect() };
        let g = (0..m).map(|i| (0..m).map(|j| self.pair(&col(i), &col(j))).collect()).collect();
        ZLattice::new(g)
    }

    /// Q(x) = Σ dᵢ(xᵢ + Σ_{j>i} μᵢⱼxⱼ)².
    fn ldl(&self) -> (Vec<Rat>, Vec<Vec<Rat>>) {
        let m = self.rank();
        let mut a = rat_mat(&self.gram);
        let mut d = vec![Rat::zero(); m];
        let mut mu = vec![vec![Rat::zero(); m]; m];
        for i in 0..m {
            d[i] = a[i][i].clone();
            for j in i + 1..m {
                mu[i][j] = &a[i][j] / &d[i];
            }
            for j in i + 1..m {
                for k in i + 1..m {
                    let t = &mu[i][j] * &a[i][k];
                    a[j][k] -= t;
                }
            }
        }
        (d, mu)
    }
}

fn isqrt_floor(x: &Rat) -> i64 {
    if !x.is_positive() {
        return 0;
    }
    let f = x.floor().to_integer().to_i64().unwrap_or(i64::MAX);
    let mut r = (f as f64).sqrt() as i64;
    while r * r > f {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= f {
        r += 1;
    }
    r
}

/// Every x with x·x ≤ B, including 0, in lexicographic order.
pub fn short_vectors(l: &ZLattice, bound: i64) -> Vec<Vec<i64>> {
    let m = l.rank();
    let (d, mu) = l.ldl();
    let mut out = vec![];
    let mut x = vec![0i64; m];
    fn rec(i: usize, rem: Rat, x: &mut Vec<i64>, d: &[Rat], mu: &[Vec<Rat>], out: &mut Vec<Vec<i64>>) {
        let m = x.len();
        let c: Rat = (i + 1..m).map(|j| &mu[i][j] * rint(x[j])).sum();
        // (xᵢ + c)² ≤ rem/dᵢ; the float centre is widened and then filtered exactly
        let s = &rem / &d[i];
        let r = isqrt_floor(&s) + 1;
        let centre = -c.to_f64().unwrap_or(0.0);
        let lo = centre.floor() as i64 - r - 1;
        let hi = centre.ceil() as i64 + r + 1;
        for v in lo..=hi {
            let t = rint(v) + &c;
            let used = &d[i] * &t * &t;
            if used > rem {
                continue;
            }
            x[i] = v;
            if i == 0 {
                out.push(x.clone());
            } else {
                rec(i - 1, &rem - used, x, d, mu, out);
            }
        }
        x[i] = 0;
    }
    if bound < 0 {
        return out;
    }
    rec(m - 1, rint(bound), &mut x, &d, &mu, &mut out);
    out.sort();
    out
}

/// The same set by the coordinate box |xᵢ|² ≤ B·(G⁻¹)ᵢᵢ, with no pruning.
pub fn short_vectors_box(l: &ZLattice, bound: i64) -> Result<Vec<Vec<i64>>> {
    let m = l.rank();
    let inv = crate::spaces::inverse(&rat_mat(&l.gram))?;
    let r: Vec<i64> = (0..m).map(|i| isqrt_floor(&(rint(bound) * &inv[i][i]))).collect();
    let mut out = vec![];
    let mut x: Vec<i64> = r.iter().map(|v| -v).collect();
    loop {
        if l.pair(&x, &x) <= bound {
            out.push(x.clone());
        }
        let mut i = m;
        loop {
            if i == 0 {
                out.sort();
                return Ok(out);
            }
            i -= 1;
            if x[i] < r[i] {
                x[i] += 1;
                break;
            }
            x[i] = -r[i];
        }
    }
}

/// A symmetric 1×1 or 2×2 target Gram matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GramTarget {
    One(i64),
    /// [[a, b], [b, c]].
    Two(i64, i64, i64),
}

impl GramTarget {
    pub fn trace(&self) -> i64 {
        match *self {
            GramTarget::One(a) => a,
            GramTarget::Two(a, _, c) => a + c,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            GramTarget::One(_) => 1,
            GramTarget::Two(..) => 2,
        }
    }

    pub fn is_psd(&self) -> bool {
        match *self {
            GramTarget::One(a) => a >= 0,
            GramTarget::Two(a, b, c) => a >= 0 && c >= 0 && a * c >= b * b,
        }
    }

    /// uᵗTu for u ∈ GL₂(ℤ) given by rows.
    pub fn transform(&self, u: [[i64; 2]; 2]) -> GramTarget {
        match *self {
            GramTarget::One(a) => GramTarget::One(a),
            GramTarget::Two(a, b, c) => {
                let t = [[a, b], [b, c]];
                let e = |i: usize, j: usize| (0..2).map(|k| (0..2).map(|l| u[k][i] * t[k][l] * u[l][j]).sum::<i64>()).sum::<i64>();
                GramTarget::Two(e(0, 0), e(0, 1), e(1, 1))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            GramTarget::One(a) => format!("({a})"),
            GramTarget::Two(a, b, c) => format!("[[{a},{b}],[{b},{c}]]"),
        }
    }
}

/// #{(x₁,…,xₙ) ∈ Lⁿ : xᵢ·xⱼ = T_ij}, by pairs of short vectors.
pub fn rep_number(l: &ZLattice, t: GramTarget) -> Result<u64> {
    if !t.is_psd() {
        return Err(SpinError::Input(format!("{} is not positive semidefinite", t.label())));
    }
    Ok(match t {
        GramTarget::One(a) => short_vectors(l, a).iter().filter(|x| l.pair(x, x) == a).count() as u64,
        GramTarget::Two(a, b, c) => {
            let xs: Vec<Vec<i64>> = short_vectors(l, a).into_iter().filter(|x| l.pair(x, x) == a).collect();
            let ys: Vec<Vec<i64>> = short_vectors(l, c).into_iter().filter(|y| l.pair(y, y) == c).collect();
            let mut n = 0;
            for x in &xs {
                n += ys.iter().filter(|y| l.pair(x, y) == b).count() as u64;
            }
            n
        }
    })
}

/// The degree-2 count fibered over x: for each x of norm a, the y of
/// norm c on the affine hyperplane x·y = b, found in the unpruned box.
pub fn rep_number_fibered(l: &ZLattice, t: GramTarget) -> Result<u64> {
    let GramTarget::Two(a, b, c) = t else {
        return rep_number(l, t);
    };
    if !t.is_psd() {
        return Err(SpinError::Input(format!("{} is not positive semidefinite", t.label())));
    }
    let ys = short_vectors_box(l, c)?;
    let mut fibre: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
    for x in short_vectors_box(l, a)?.into_iter().filter(|x| l.pair(x, x) == a) {
        let n = ys.iter().filter(|y| l.pair(y, y) == c && l.pair(&x, y) == b).count() as u64;
        fibre.insert(x, n);
    }
    Ok(fibre.values().sum())
}

/// a_T for every T with tr T ≤ B (n = 1 or 2); T with a_T = 0 are omitted.
pub fn theta_coeffs(l: &ZLattice, n: usize, bound: i64) -> Result<BTreeMap<GramTarget, u64>> {
    let vs = short_vectors(l, bound.max(0));
    let norms: Vec<i64> = vs.iter().map(|x| l.pair(x, x)).collect();
    let mut out = BTreeMap::new();
    match n {
        1 => {
            for &a in &norms {
                *out.entry(GramTarget::One(a)).or_insert(0) += 1;
            }
        }
        2 => {
            for (x, &a) in vs.iter().zip(&norms) {
                for (y, &c) in vs.iter().zip(&norms) {
                    if a + c <= bound {
                        *out.entry(GramTarget::Two(a, l.pair(x, y), c)).or_insert(0) += 1;
                    }
                }
            }
        }
        _ => return Err(SpinError::Dimension { expected: 2, got: n }),
    }
    Ok(out)
}

/// r(k) = #{x : x·x = k} for k ≤ N.
pub fn theta_series(l: &ZLattice, n_max: usize) -> Vec<u64> {
    let mut r = vec![0u64; n_max + 1];
    for x in short_vectors(l, n_max as i64) {
        r[l.pair(&x, &x) as usize] += 1;
    }
    r
}

/// Coefficientwise product of power series truncated at the common length.
pub fn series_mul(a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().min(b.len());
    (0..n).map(|k| (0..=k).map(|i| a[i] * b[k - i]).sum()).collect()
}

pub fn random_unimodular2(rng: &mut impl Rng) -> [[i64; 2]; 2] {
    let mut u = [[1i64, 0], [0, 1]];
    for _ in 0..rng.gen_range(1..5) {
        let k = rng.gen_range(-2..=2);
        let e = match rng.gen_range(0..3) {
            0 => [[1, k], [0, 1]],
            1 => [[1, 0], [k, 1]],
            _ => [[0, 1], [1, 0]],
        };
        u = [
            [u[0][0] * e[0][0] + u[0][1] * e[1][0], u[0][0] * e[0][1] + u[0][1] * e[1][1]],
            [u[1][0] * e[0][0] + u[1][1] * e[1][0], u[1][0] * e[0][1] + u[1][1] * e[1][1]],
        ];
    }
    u
}

fn random_unimodular(m: usize, rng: &mut impl Rng) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..m).map(|i| (0..m).map(|j| (i == j) as i64).collect()).collect();
    for _ in 0..6 {
        let (i, j) = (rng.gen_range(0..m), rng.gen_range(0..m));
        if i != j {
            let k = rng.gen_range(-1..=1);
            for r in u.iter_mut() {
                r[j] += k * r[i];
            }
        }
    }
    u
}

pub fn theta_checks(trace_bound: i64, rng: &mut impl Rng) -> Result<Vec<Check>> {
    let z5 = ZLattice::standard(5);
    let mut out = vec![];
    let inputs = "Z^5";
    out.push(Check::equal("theta-basic: short vectors B=1", 0, inputs, &(short_vectors(&z5, 1).len() as u64), &11));
    out.push(Check::equal("theta-basic: short vectors B=2", 0, inputs, &(short_vectors(&z5, 2).len() as u64), &51));
    out.push(Check::equal("theta-basic: short vectors B=0", 0, inputs, &(short_vectors(&z5, 0).len() as u64), &1));
    let boxed = short_vectors_box(&z5, 3)? == short_vectors(&z5, 3);
    out.push(Check::new("theta-basic: pruned search equals box search", 0, "Z^5 B=3", boxed, true, boxed));
    out.push(Check::equal("theta-basic: r((1)) = 10", 0, inputs, &rep_number(&z5, GramTarget::One(1))?, &10));
    out.push(Check::equal("theta-basic: r(I_2) = 80", 0, inputs, &rep_number(&z5, GramTarget::Two(1, 0, 1))?, &80));
    out.push(Check::equal("theta-basic: r(0_2) = 1", 0, inputs, &rep_number(&z5, GramTarget::Two(0, 0, 0))?, &1));
    out.push(Check::equal("theta-basic: a_(2) = 40", 0, inputs, &rep_number(&z5, GramTarget::One(2))?, &40));
    let coeffs = theta_coeffs(&z5, 2, trace_bound)?;
    out.push(Check::equal("theta-basic: a_0 = 1", 0, inputs, &coeffs.get(&GramTarget::Two(0, 0, 0)).copied().unwrap_or(0), &1));
    let mut fib_bad = vec![];
    for (t, a) in &coeffs {
        let f = rep_number_fibered(&z5, *t)?;
        if f != *a {
            fib_bad.push(t.label());
        }
    }
    out.push(Check::new("theta-basic: fibered pair count", 0, format!("Z^5 tr <= {trace_bound}"), fib_bad.join(" "), "", fib_bad.is_empty()));
    let mut gl_bad = vec![];
    let keys: Vec<GramTarget> = coeffs.keys().copied().collect();
    for k in 0..20 {
        let t = keys[rng.gen_range(0..keys.len())];
        let u = random_unimodular2(rng);
        let tu = t.transform(u);
        if rep_number(&z5, tu)? != coeffs[&t] {
            gl_bad.push(format!("{} u={u:?} (sample {k})", t.label()));
        }
    }
    out.push(Check::new("theta-basic: a_(u^t T u) = a_T", 0, "20 random u in GL_2(Z)", gl_bad.join("; "), "", gl_bad.is_empty()));
    let g = ZLattice::new(vec![vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]])?;
    let g2 = g.base_change(&random_unimodular(3, rng))?;
    let same = theta_coeffs(&g, 2, trace_bound)? == theta_coeffs(&g2, 2, trace_bound)?;
    out.push(Check::new("theta-basic: coefficients invariant under base change", 0, "A_3 root lattice", same, true, same));
    let n = 12;
    let z1 = theta_series(&ZLattice::standard(1), n);
    for m in [2usize, 3, 5] {
        let mut pow = z1.clone();
        for _ in 1..m {
            pow = series_mul(&pow, &z1);
        }
        let direct = theta_series(&ZLattice::standard(m), n);
        out.push(Check::new(&format!("theta-basic: theta(Z^{m}) = theta(Z)^{m}"), 0, format!("q^k, k <= {n}"), format!("{direct:?}"), format!("{pow:?}"), direct == pow));
    }
    Ok(out)
}

//! Local linear algebra at an admissible prime q ≠ p: Frobenius on a free
//! ℤ/pⁿ-module with a symplectic form, its M₀ ⊕ M₁ splitting, the
//! unramified and singular quotients, and the pairing between them.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, ipow, modp, val_int};
use crate::error::{Result, SpinError};
use crate::hecke::admissible::is_admissible_charpoly;
use crate::report::Check;

pub type Mat = Vec<Vec<i128>>;

/// Frobenius φ with φᵀJφ = qJ over ℤ/pⁿ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrobData {
    pub p: u64,
    pub n: u32,
    pub q: u64,
    pub phi: Mat,
    #[serde(rename = "J")]
    pub j: Mat,
}

fn identity(d: usize) -> Mat {
    (0..d).map(|i| (0..d).map(|k| (i == k) as i128).collect()).collect()
}

fn reduce(a: &Mat, m: i128) -> Mat {
    a.iter().map(|r| r.iter().map(|&x| modp(x, m)).collect()).collect()
}

fn mul(a: &Mat, b: &Mat, m: i128) -> Mat {
    let (r, k, c) = (a.len(), b.len(), b[0].len());
    (0..r).map(|i| (0..c).map(|j| modp((0..k).map(|t| a[i][t] * b[t][j] % m).sum(), m)).collect()).collect()
}

fn sub(a: &Mat, b: &Mat, m: i128) -> Mat {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| modp(u - v, m)).collect()).collect()
}

fn scalar(a: &Mat, c: i128, m: i128) -> Mat {
    a.iter().map(|r| r.iter().map(|&x| modp(x * c, m)).collect()).collect()
}

fn transpose(a: &Mat) -> Mat {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

fn mat_vec(a: &Mat, v: &[i128], m: i128) -> Vec<i128> {
    a.iter().map(|r| modp(r.iter().zip(v).map(|(x, y)| x * y % m).sum(), m)).collect()
}

/// Characteristic polynomial det(xI − A) over ℤ/m, low degree first, by
/// expansion over permutations (d ≤ 4).
pub fn charpoly(a: &Mat, m: i128) -> Vec<i128> {
    let d = a.len();
    let entry = |i: usize, j: usize| -> Vec<i128> {
        if i == j {
            vec![modp(-a[i][j], m), 1]
        } else {
            vec![modp(-a[i][j], m)]
        }
    };
    let mut out = vec![0i128; d + 1];
    let mut perm: Vec<usize> = (0..d).collect();
    permutations(&mut perm, 0, &mut |p, sign| {
        let mut prod = vec![1i128];
        for (i, &j) in p.iter().enumerate() {
            prod = poly_mul(&prod, &entry(i, j), m);
        }
        for (k, c) in prod.iter().enumerate() {
            out[k] = modp(out[k] + sign * c, m);
        }
    });
    out
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize], i128)) {
    fn go(p: &mut Vec<usize>, k: usize, sign: i128, f: &mut impl FnMut(&[usize], i128)) {
        if k == p.len() {
            f(p, sign);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            go(p, k + 1, if i == k { sign } else { -sign }, f);
            p.swap(k, i);
        }
    }
    go(p, k, 1, f)
}

fn poly_mul(a: &[i128], b: &[i128], m: i128) -> Vec<i128> {
    let mut r = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] = modp(r[i + j] + x * y, m);
        }
    }
    r
}

pub fn det(a: &Mat, m: i128) -> i128 {
    let c = charpoly(a, m);
    if a.len() % 2 == 0 {
        c[0]
    } else {
        modp(-c[0], m)
    }
}

/// U·A·V = diag(p^{e₁}, …) over ℤ/pⁿ with e sorted ascending; e = n marks
/// a zero diagonal entry.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u_inv: Mat,
    pub v: Mat,
    pub exps: Vec<u32>,
}

pub fn smith(a: &Mat, p: u64, n: u32) -> Smith {
    let m = ipow(p, n);
    let d = a.len();
    let mut a = reduce(a, m);
    let mut u_inv = identity(d);
    let mut v = identity(d);
    let val = |x: i128| if x == 0 { n } else { val_int(x, p) };
    let mut exps = vec![];
    for k in 0..d {
        let mut best = (n, k, k);
        for i in k..d {
            for j in k..d {
                let e = val(a[i][j]);
                if e < best.0 {
                    best = (e, i, j);
                }
            }
        }
        let (e, bi, bj) = best;
        if e == n {
            exps.extend(std::iter::repeat(n).take(d - k));
            break;
        }
        // rows: A ← P·A, so U⁻¹ ← U⁻¹·P⁻¹ (swap columns)
        a.swap(k, bi);
        for r in u_inv.iter_mut() {
            r.swap(k, bi);
        }
        for r in a.iter_mut() {
            r.swap(k, bj);
        }
        for r in v.iter_mut() {
            r.swap(k, bj);
        }
        let pe = ipow(p, e);
        let unit_inv = inv_mod(a[k][k] / pe, m).expect("unit part");
        for i in k + 1..d {
            let c = modp(a[i][k] / pe * unit_inv, m);
            if c != 0 {
                for j in 0..d {
                    a[i][j] = modp(a[i][j] - c * a[k][j], m);
                }
                // row_i −= c·row_k, so U⁻¹ column k += c·column i
                for r in u_inv.iter_mut() {
                    r[k] = modp(r[k] + c * r[i], m);
                }
            }
        }
        for j in k + 1..d {
            let c = modp(a[k][j] / pe * unit_inv, m);
            if c != 0 {
                for i in 0..d {
                    a[i][j] = modp(a[i][j] - c * a[i][k], m);
                }
                for r in v.iter_mut() {
                    r[j] = modp(r[j] - c * r[k], m);
                }
            }
        }
        exps.push(e);
    }
    Smith { u_inv, v, exps }
}

/// A finite ℤ/pⁿ-module ⊕ ℤ/p^{eᵢ} with one generator per summand.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModuleDesc {
    pub p: u64,
    pub n: u32,
    pub exps: Vec<u32>,
    pub gens: Vec<Vec<i128>>,
}

impl ModuleDesc {
    pub fn is_free_rank1(&self) -> bool {
        self.exps == [self.n]
    }

    pub fn length(&self) -> u32 {
        self.exps.iter().sum()
    }
}

/// coker(A) with generators U⁻¹eᵢ for the nonzero summands.
pub fn cokernel(a: &Mat, p: u64, n: u32) -> ModuleDesc {
    let s = smith(a, p, n);
    let mut exps = vec![];
    let mut gens = vec![];
    for (i, &e) in s.exps.iter().enumerate() {
        if e > 0 {
            exps.push(e);
            gens.push(s.u_inv.iter().map(|r| r[i]).collect());
        }
    }
    ModuleDesc { p, n, exps, gens }
}

/// ker(A) with generators p^{n−eᵢ}·Veᵢ.
pub fn kernel(a: &Mat, p: u64, n: u32) -> ModuleDesc {
    let m = ipow(p, n);
    let s = smith(a, p, n);
    let mut exps = vec![];
    let mut gens = vec![];
    for (i, &e) in s.exps.iter().enumerate() {
        if e > 0 {
            let c = ipow(p, n - e);
            exps.push(e);
            gens.push(s.v.iter().map(|r| modp(r[i] * c, m)).collect());
        }
    }
    ModuleDesc { p, n, exps, gens }
}

impl FrobData {
    pub fn new(p: u64, n: u32, q: u64, phi: Mat, j: Mat) -> Result<FrobData> {
        let d = FrobData { p, n, q, phi, j };
        d.validate()?;
        Ok(d)
    }

    pub fn modulus(&self) -> i128 {
        ipow(self.p, self.n)
    }

    pub fn dim(&self) -> usize {
        self.phi.len()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        if !(d == 2 || d == 4) || self.phi.iter().chain(&self.j).any(|r| r.len() != d) || self.j.len() != d {
            return Err(SpinError::Dimension { expected: 4, got: d });
        }
        if self.p % 2 == 0 || self.q % self.p == 0 || self.n == 0 {
            return Err(SpinError::Input(format!("need p odd, q ≠ p, n ≥ 1 (p={}, q={}, n={})", self.p, self.q, self.n)));
        }
        let m = self.modulus();
        let jt = transpose(&self.j);
        if reduce(&jt, m) != scalar(&self.j, -1, m) || det(&self.j, m) % self.p as i128 == 0 {
            return Err(SpinError::Input("J must be invertible and antisymmetric".into()));
        }
        let lhs = mul(&mul(&transpose(&self.phi), &self.j, m), &self.phi, m);
        if lhs != scalar(&self.j, self.q as i128, m) {
            return Err(SpinError::Input("phi^T J phi != q J".into()));
        }
        Ok(())
    }

    /// Reduction to precision m ≤ n.
    pub fn truncate(&self, m: u32) -> FrobData {
        assert!(m >= 1 && m <= self.n);
        let md = ipow(self.p, m);
        FrobData { n: m, phi: reduce(&self.phi, md), j: reduce(&self.j, md), ..self.clone() }
    }

    fn shifted(&self, c: i128) -> Mat {
        let m = self.modulus();
        sub(&self.phi, &scalar(&identity(self.dim()), c, m), m)
    }

    /// Admissibility of the mod-p reduction.
    pub fn is_admissible(&self) -> bool {
        self.dim() == 4 && is_admissible_charpoly(&charpoly(&self.phi, self.p as i128), self.q, self.p)
    }

    /// max m ≤ n with det(φ − q) ≡ 0 mod p^m.
    pub fn n_of_q(&self) -> u32 {
        let v = det(&self.shifted(self.q as i128), self.modulus());
        if v == 0 {
            self.n
        } else {
            val_int(v, self.p)
        }
    }

    /// H¹_unr = coker(φ − 1).
    pub fn h1_unr(&self) -> ModuleDesc {
        cokernel(&self.shifted(1), self.p, self.n)
    }

    /// H¹_sing = ker(φ − q).
    pub fn h1_sing(&self) -> ModuleDesc {
        kernel(&self.shifted(self.q as i128), self.p, self.n)
    }

    /// J(a, b) = aᵀJb.
    pub fn tate_pairing(&self, a: &[i128], b: &[i128]) -> i128 {
        let m = self.modulus();
        let jb = mat_vec(&self.j, b, m);
        modp(a.iter().zip(&jb).map(|(x, y)| x * y % m).sum(), m)
    }

    /// Pairing of the generators of H¹_unr and H¹_sing when both are cyclic.
    pub fn pairing_report(&self) -> Option<PairingReport> {
        let (u, s) = (self.h1_unr(), self.h1_sing());
        if u.gens.len() != 1 || s.gens.len() != 1 {
            return None;
        }
        let value = self.tate_pairing(&u.gens[0], &s.gens[0]);
        Some(PairingReport { value, perfect: value % self.p as i128 != 0 })
    }

    /// Idempotents (P₀, P₁) onto the generalized {q, 1}- and {α, q/α}-parts.
    pub fn decompose(&self) -> Result<(Mat, Mat)> {
        if !self.is_admissible() {
            return Err(SpinError::NotAdmissible("charpoly mod p does not split as required".into()));
        }
        let (p, m) = (self.p as i128, self.modulus());
        let f = charpoly(&self.phi, p);
        let qq = modp(self.q as i128, p);
        let g = vec![qq, modp(-(qq + 1), p), 1];
        let (h, _) = crate::hecke::admissible::divmod_monic(&f, &g, p);
        // b with a·g + b·h = 1 mod p; E = b(φ)h(φ) is idempotent mod p
        let (_, b) = bezout(&g, &h, p).ok_or_else(|| SpinError::NotAdmissible("factors not coprime".into()))?;
        let bh = poly_mul(&b, &h, p);
        let mut e = poly_at(&bh, &self.phi, m);
        let id = identity(4);
        // Newton iteration E ← 3E² − 2E³ doubles the precision each step
        for _ in 0..8 {
            let e2 = mul(&e, &e, m);
            if e2 == e {
                break;
            }
            let e3 = mul(&e2, &e, m);
            e = sub(&scalar(&e2, 3, m), &scalar(&e3, 2, m), m);
        }
        debug_assert_eq!(mul(&e, &e, m), e);
        let p1 = sub(&id, &e, m);
        Ok((e, p1))
    }

    /// A basis of the image of an idempotent.
    pub fn image_basis(&self, proj: &Mat) -> Vec<Vec<i128>> {
        let s = smith(proj, self.p, self.n);
        (0..4).filter(|&i| s.exps[i] == 0).map(|i| s.u_inv.iter().map(|r| r[i]).collect()).collect()
    }

    /// det of J on a pair of vectors is a unit.
    pub fn nondegenerate_on(&self, basis: &[Vec<i128>]) -> bool {
        basis.len() == 2 && self.tate_pairing(&basis[0], &basis[1]) % self.p as i128 != 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairingReport {
    pub value: i128,
    pub perfect: bool,
}

fn poly_at(f: &[i128], a: &Mat, m: i128) -> Mat {
    let d = a.len();
    let mut r = vec![vec![0i128; d]; d];
    for &c in f.iter().rev() {
        r = mul(&r, a, m);
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = modp(row[i] + c, m);
        }
    }
    r
}

fn trim(mut f: Vec<i128>) -> Vec<i128> {
    while f.len() > 1 && *f.last().unwrap() == 0 {
        f.pop();
    }
    f
}

/// (s, t) with s·f + t·g = 1 over F_p, if f and g are coprime.
fn bezout(f: &[i128], g: &[i128], p: i128) -> Option<(Vec<i128>, Vec<i128>)> {
    let (mut r0, mut r1) = (trim(f.to_vec()), trim(g.to_vec()));
    let (mut s0, mut s1) = (vec![1i128], vec![0i128]);
    let (mut t0, mut t1) = (vec![0i128], vec![1i128]);
    while !(r1.len() == 1 && r1[0] == 0) {
        let lc = inv_mod(*r1.last().unwrap(), p)?;
        let monic: Vec<i128> = r1.iter().map(|&x| modp(x * lc, p)).collect();
        let (qt, rem) = crate::hecke::admissible::divmod_monic(&r0, &monic, p);
        let qt: Vec<i128> = qt.iter().map(|&x| modp(x * lc, p)).collect();
        let step = |a: &[i128], b: &[i128]| -> Vec<i128> {
            let qb = poly_mul(&qt, b, p);
            let n = a.len().max(qb.len());
            trim((0..n).map(|i| modp(a.get(i).copied().unwrap_or(0) - qb.get(i).copied().unwrap_or(0), p)).collect())
        };
        let s2 = step(&s0, &s1);
        let t2 = step(&t0, &t1);
        (r0, r1) = (r1, trim(if rem.is_empty() { vec![0] } else { rem }));
        (s0, s1) = (s1, s2);
        (t0, t1) = (t1, t2);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = inv_mod(r0[0], p)?;
    Some((s0.iter().map(|&x| modp(x * c, p)).collect(), t0.iter().map(|&x| modp(x * c, p)).collect()))
}

/// The standard J = [[0, I], [−I, 0]] on (e₁, e₂, f₁, f₂).
pub fn standard_j(m: i128) -> Mat {
    let mut j = vec![vec![0i128; 4]; 4];
    j[0][2] = 1;
    j[1][3] = 1;
    j[2][0] = modp(-1, m);
    j[3][1] = modp(-1, m);
    j
}

/// Block model: A on span(e₁, f₁), B on span(e₂, f₂), each of determinant q.
pub fn block_model(p: u64, n: u32, q: u64, a: [[i128; 2]; 2], b: [[i128; 2]; 2]) -> Result<FrobData> {
    let m = ipow(p, n);
    let mut phi = vec![vec![0i128; 4]; 4];
    for (blk, (x, y)) in [(a, (0, 2)), (b, (1, 3))] {
        let idx = [x, y];
        for i in 0..2 {
            for k in 0..2 {
                phi[idx[i]][idx[k]] = modp(blk[i][k], m);
            }
        }
    }
    FrobData::new(p, n, q, phi, standard_j(m))
}

/// Random symplectic g as a product of transvections x ↦ x + c·J(x, v)·v.
pub fn random_symplectic(p: u64, n: u32, rng: &mut impl Rng) -> (Mat, Mat) {
    let m = ipow(p, n);
    let j = standard_j(m);
    let mut g = identity(4);
    let mut gi = identity(4);
    for _ in 0..8 {
        let v: Vec<i128> = (0..4).map(|_| rng.gen_range(0..m)).collect();
        let c = rng.gen_range(0..m);
        // T = I + c·v·(Jᵀv)ᵀ since J(x, v) = xᵀJv
        let jv = mat_vec(&j, &v, m);
        let outer: Mat = (0..4).map(|i| (0..4).map(|k| modp(c * v[i] % m * jv[k], m)).collect()).collect();
        let t: Mat = identity(4).iter().zip(&outer).map(|(r, o)| r.iter().zip(o).map(|(x, y)| modp(x + y, m)).collect()).collect();
        let t_inv: Mat = identity(4).iter().zip(&outer).map(|(r, o)| r.iter().zip(o).map(|(x, y)| modp(x - y, m)).collect()).collect();
        g = mul(&g, &t, m);
        gi = mul(&t_inv, &gi, m);
    }
    (g, gi)
}

/// An admissible sample: a random block model with n(q) drawn from 1..=n,
/// conjugated by a random symplectic matrix.
pub fn random_admissible(p: u64, n: u32, q: u64, rng: &mut impl Rng) -> FrobData {
    let m = ipow(p, n);
    let qq = q as i128;
    loop {
        // M₀: eigenvalues λ ≡ q and q/λ ≡ 1, with λ − q of valuation k
        let k = rng.gen_range(1..=n);
        let unit = loop {
            let u = rng.gen_range(1..m);
            if u % p as i128 != 0 {
                break u;
            }
        };
        let lam = if k == n { qq } else { modp(qq + ipow(p, k) * unit, m) };
        let Some(lam_inv) = inv_mod(lam, m) else { continue };
        let a = [[lam, rng.gen_range(0..m)], [0, modp(qq * lam_inv, m)]];
        // M₁: random 2×2 block of determinant q
        let b00 = rng.gen_range(1..m);
        let Some(b00_inv) = inv_mod(b00, m) else { continue };
        let (b01, b10) = (rng.gen_range(0..m), rng.gen_range(0..m));
        let b11 = modp((qq + b01 * b10) % m * b00_inv, m);
        let Ok(model) = block_model(p, n, q, a, [[b00, b01], [b10, b11]]) else { continue };
        if !model.is_admissible() {
            continue;
        }
        let (g, gi) = random_symplectic(p, n, rng);
        let phi = mul(&mul(&gi, &model.phi, m), &g, m);
        return FrobData::new(p, n, q, phi, model.j.clone()).expect("conjugation preserves the similitude");
    }
}

/// The local suite on one FrobData: splitting, freeness after truncation
/// to n(q), perfectness, and representative independence of the pairing.
pub fn local_checks(d: &FrobData, tag: &str, rng: &mut impl Rng) -> Vec<Check> {
    let mut out = vec![];
    let nq = d.n_of_q();
    let id = |s: &str| format!("admissible-local: {s}");
    let (p0, p1) = match d.decompose() {
        Ok(x) => x,
        Err(e) => {
            out.push(Check::new(&id("decompose"), d.q, tag, e, "admissible", false));
            return out;
        }
    };
    let m = d.modulus();
    let zero = vec![vec![0i128; 4]; 4];
    let sum_ok = sub(&identity(4), &p0, m) == p1 && mul(&p0, &p1, m) == zero;
    let comm = mul(&d.phi, &p0, m) == mul(&p0, &d.phi, m);
    out.push(Check::new(&id("P0 + P1 = I, P0 P1 = 0, phi P0 = P0 phi"), d.q, tag, sum_ok && comm, true, sum_ok && comm));
    let b0 = d.image_basis(&p0);
    let b1 = d.image_basis(&p1);
    out.push(Check::equal(&id("M0 free of rank 2"), d.q, tag, &b0.len(), &2));
    out.push(Check::equal(&id("M1 free of rank 2"), d.q, tag, &b1.len(), &2));
    let nd = d.nondegenerate_on(&b0) && d.nondegenerate_on(&b1);
    out.push(Check::new(&id("J nondegenerate on M0 and M1"), d.q, tag, nd, true, nd));
    let t = d.truncate(nq);
    let (u, s) = (t.h1_unr(), t.h1_sing());
    out.push(Check::new(&id("H1_unr free of rank 1 mod p^n(q)"), d.q, tag, format!("{:?}", u.exps), format!("[{nq}]"), u.is_free_rank1()));
    out.push(Check::new(&id("H1_sing free of rank 1 mod p^n(q)"), d.q, tag, format!("{:?}", s.exps), format!("[{nq}]"), s.is_free_rank1()));
    let rep = t.pairing_report();
    let perfect = rep.as_ref().map_or(false, |r| r.perfect);
    out.push(Check::new(&id("pairing perfect"), d.q, tag, rep.map_or(-1, |r| r.value), "unit", perfect));
    if let (Some(a), Some(b)) = (u.gens.first(), s.gens.first()) {
        let tm = t.modulus();
        let base = t.tate_pairing(a, b);
        let sh = t.shifted(1);
        let stable = (0..10).all(|_| {
            let x: Vec<i128> = (0..4).map(|_| rng.gen_range(0..tm)).collect();
            let dx = mat_vec(&sh, &x, tm);
            let a2: Vec<i128> = a.iter().zip(&dx).map(|(u, v)| modp(u + v, tm)).collect();
            t.tate_pairing(&a2, b) == base
        });
        out.push(Check::new(&id("pairing independent of representative"), d.q, tag, stable, true, stable));
    }
    out
}

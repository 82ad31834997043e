use super::{IVec, Lattice, MAXD};
use crate::arith::{ipow, modp};

/// Reduced row echelon form over 𝔽_q. Returns the nonzero rows and their
/// pivot columns.
pub fn rref_mod(rows: &[Vec<i64>], q: u64) -> (Vec<Vec<i64>>, Vec<usize>) {
    let q = q as i64;
    let mut m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(q)).collect()).collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = vec![];
    let mut row = 0;
    for c in 0..ncols {
        let Some(p) = (row..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(row, p);
        let inv = crate::arith::inv_mod(m[row][c] as i128, q as i128).unwrap() as i64;
        for x in m[row].iter_mut() {
            *x = *x * inv % q;
        }
        for r in 0..m.len() {
            if r != row && m[r][c] != 0 {
                let f = m[r][c];
                for k in 0..ncols {
                    m[r][k] = (m[r][k] - f * m[row][k]).rem_euclid(q);
                }
            }
        }
        pivots.push(c);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    m.truncate(row);
    (m, pivots)
}

/// Visit every r-dimensional subspace of 𝔽_q^k once, as its RREF basis.
pub fn for_each_subspace(k: usize, r: usize, q: u64, mut f: impl FnMut(&[Vec<i64>])) {
    if r > k {
        return;
    }
    let mut piv = (0..r).collect::<Vec<_>>();
    loop {
        // free slots: (row i, column c) with c > piv[i] and c not a pivot
        let mut free = vec![];
        for (i, &p) in piv.iter().enumerate() {
            for c in p + 1..k {
                if !piv.contains(&c) {
                    free.push((i, c));
                }
            }
        }
        let mut digits = vec![0u64; free.len()];
        loop {
            let mut basis = vec![vec![0i64; k]; r];
            for (i, &p) in piv.iter().enumerate() {
                basis[i][p] = 1;
            }
            for (s, &(i, c)) in free.iter().enumerate() {
                basis[i][c] = digits[s] as i64;
            }
            f(&basis);
            let mut s = 0;
            while s < digits.len() {
                digits[s] += 1;
                if digits[s] < q {
                    break;
                }
                digits[s] = 0;
                s += 1;
            }
            if s == digits.len() {
                break;
            }
        }
        // next combination of pivot columns
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if piv[i] < k - r + i {
                piv[i] += 1;
                for j in i + 1..r {
                    piv[j] = piv[j - 1] + 1;
                }
                break;
            }
        }
        if r == 0 {
            return;
        }
    }
}

pub fn subspaces(k: usize, r: usize, q: u64) -> Vec<Vec<Vec<i64>>> {
    let mut out = vec![];
    for_each_subspace(k, r, q, |b| out.push(b.to_vec()));
    out
}

/// Lattices M with A ⊆ M ⊆ B, for qB ⊆ A ⊆ B. The quotient B/A is
/// identified with the span of the non-pivot coordinates of A's image in
/// B/qB, so subspaces of 𝔽_q^k correspond bijectively to such M.
pub struct Between {
    pub q: u64,
    pub d: usize,
    pub t: i32,
    pub floor: i32,
    pub a_gens: Vec<IVec>,
    /// Lifts (at scale t) of a basis of B/A.
    pub comp: Vec<IVec>,
}

impl Between {
    pub fn new(a: &Lattice, b: &Lattice) -> Between {
        let q = a.q as u64;
        let d = a.dim();
        let t = b.shift;
        assert!(a.shift >= t, "A not inside B");
        let adj = b.adj();
        let k = b.sum_e() as i32;
        let mut coords = vec![];
        for c in a.cols_at(t) {
            let mut row = vec![0i64; d];
            {
                let big = ipow(q, k as u32 + 1);
                let pk = ipow(q, k as u32);
                for i in 0..d {
                    let mut s = 0i128;
                    for j in 0..d {
                        s = modp(s + modp(adj[i][j], big) * modp(c[j], big), big);
                    }
                    assert!(s % pk == 0, "A not inside B");
                    row[i] = (s / pk % q as i128) as i64;
                }
            }
            coords.push(row);
        }
        let (_, piv) = rref_mod(&coords, q);
        let bcols = b.cols();
        let comp: Vec<IVec> = (0..d).filter(|c| !piv.contains(c)).map(|c| bcols[c]).collect();
        Between { q, d, t, floor: a.floor(), a_gens: a.cols_at(t), comp }
    }

    pub fn quotient_dim(&self) -> usize {
        self.comp.len()
    }

    /// Lift of a quotient vector u ∈ 𝔽_q^k, at scale t.
    pub fn lift(&self, u: &[i64]) -> IVec {
        let mut v = [0i128; MAXD];
        for (j, &uj) in u.iter().enumerate() {
            if uj != 0 {
                for i in 0..self.d {
                    v[i] += uj as i128 * self.comp[j][i];
                }
            }
        }
        v
    }

    pub fn lattice(&self, lifts: &[IVec]) -> Lattice {
        let mut g = [[0i128; MAXD]; 2 * MAXD];
        let k = self.a_gens.len();
        g[..k].copy_from_slice(&self.a_gens);
        g[k..k + lifts.len()].copy_from_slice(lifts);
        Lattice::from_scaled(self.q, self.d, self.t, &g[..k + lifts.len()], self.floor)
    }

    /// All M with dim(M/A) = r whose lifted basis passes `keep`.
    pub fn enumerate(&self, r: usize, mut keep: impl FnMut(&[IVec]) -> bool) -> Vec<Lattice> {
        let mut out = vec![];
        let mut lifts = [[0i128; MAXD]; MAXD];
        for_each_subspace(self.quotient_dim(), r, self.q, |basis| {
            for (x, u) in lifts.iter_mut().zip(basis) {
                *x = self.lift(u);
            }
            if keep(&lifts[..r]) {
                out.push(self.lattice(&lifts[..r]));
            }
        });
        out
    }
}

/// Convenience wrapper: all M with A ⊆ M ⊆ B and dim(M/A) = r.
pub fn between(a: &Lattice, b: &Lattice, r: usize) -> Vec<Lattice> {
    Between::new(a, b).enumerate(r, |_| true)
}

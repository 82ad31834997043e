use super::{mat_mod, pmax, IVec, Lattice, MAXD};
use crate::arith::{ipow, modp, Rat};
use crate::error::{Result, SpinError};
use crate::spaces::{inverse, RatMat};

/// A bilinear form with Gram matrix in GL_d(ℤ_q) ∩ M_d(ℤ): pairings of
/// integral vectors are integers, and the form dual of a lattice is
/// G⁻¹ times its standard dual.
#[derive(Clone, Debug)]
pub struct Form {
    pub q: u64,
    pub d: usize,
    pub g: [[i64; MAXD]; MAXD],
    ginv: [[i128; MAXD]; MAXD],
}

impl Form {
    pub fn new(q: u64, gram: &RatMat) -> Result<Form> {
        let d = gram.len();
        let mut g = [[0i64; MAXD]; MAXD];
        for i in 0..d {
            for j in 0..d {
                let x = &gram[i][j];
                if !x.is_integer() {
                    return Err(SpinError::Input("Gram matrix must be integral".into()));
                }
                g[i][j] = x.to_integer().try_into().map_err(|_| SpinError::Input("entry too large".into()))?;
            }
        }
        let inv = inverse(gram)?;
        if !super::is_unimodular(gram, q) {
            return Err(SpinError::Input("Gram matrix not unimodular at q".into()));
        }
        let ginv = mat_mod(&inv, q)?;
        Ok(Form { q, d, g, ginv })
    }

    pub fn from_ints(q: u64, rows: &[&[i64]]) -> Result<Form> {
        let m: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().map(|&x| crate::arith::rint(x)).collect()).collect();
        Form::new(q, &m)
    }

    /// Integer value xᵀ G y (no reduction; inputs must be small enough).
    pub fn pair_int(&self, x: &IVec, y: &IVec) -> i128 {
        let mut s = 0i128;
        for i in 0..self.d {
            if x[i] == 0 {
                continue;
            }
            let mut t = 0i128;
            for j in 0..self.d {
                t += self.g[i][j] as i128 * y[j];
            }
            s += x[i] * t;
        }
        s
    }

    /// xᵀ G y modulo q^k.
    pub fn pair_mod(&self, x: &IVec, y: &IVec, k: u32) -> i128 {
        let big = ipow(self.q, k);
        let mut s = 0i128;
        for i in 0..self.d {
            let xi = modp(x[i], big);
            if xi == 0 {
                continue;
            }
            let mut t = 0i128;
            for j in 0..self.d {
                t = modp(t + self.g[i][j] as i128 * modp(y[j], big), big);
            }
            s = modp(s + xi * t, big);
        }
        s
    }

    pub fn dual(&self, l: &Lattice) -> Lattice {
        l.std_dual().map_unimodular(&self.ginv)
    }

    pub fn ginv_mod(&self) -> &[[i128; MAXD]; MAXD] {
        &self.ginv
    }

    pub fn precision(&self) -> u32 {
        pmax(self.q)
    }
}

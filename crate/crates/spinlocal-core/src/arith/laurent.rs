use super::{rat_pow, rat_to_string, Rat};
use num::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Minimal ring interface used by the polynomial containers.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn c_zero() -> Self;
    fn c_one() -> Self;
    fn c_is_zero(&self) -> bool;
    fn c_add(&self, o: &Self) -> Self;
    fn c_mul(&self, o: &Self) -> Self;
    fn c_neg(&self) -> Self;
    fn c_from_rat(r: &Rat) -> Self;
}

impl Coeff for Rat {
    fn c_zero() -> Self {
        Zero::zero()
    }
    fn c_one() -> Self {
        One::one()
    }
    fn c_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn c_add(&self, o: &Self) -> Self {
        self + o
    }
    fn c_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn c_from_rat(r: &Rat) -> Self {
        r.clone()
    }
}

/// Laurent polynomial in one variable with rational coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    pub coeffs: BTreeMap<i64, Rat>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(e: i64, c: Rat) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// u + u⁻¹ style constructors read better with this.
    pub fn from_terms(terms: &[(i64, Rat)]) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(*e, c.clone());
        }
        p
    }

    pub fn add_term(&mut self, e: i64, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i64) -> Rat {
        self.coeffs.get(&e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.coeffs {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn scale(&self, k: &Rat) -> Self {
        let mut r = Self::zero();
        for (e, c) in &self.coeffs {
            r.add_term(*e, c * k);
        }
        r
    }

    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &o.coeffs {
                r.add_term(e1 + e2, c1 * c2);
            }
        }
        r
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs.iter().map(|(e, c)| c * rat_pow(x, *e)).fold(Rat::zero(), |a, b| a + b)
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Exact division by (1 − u); `None` if (1 − u) does not divide.
    pub fn div_one_minus_u(&self) -> Option<Self> {
        // N(u) = (1-u) Q(u)  =>  Q_k = Σ_{j<=k} N_j
        let (lo, hi) = match (self.min_degree(), self.max_degree()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Some(Self::zero()),
        };
        let mut q = Self::zero();
        let mut acc = Rat::zero();
        for k in lo..=hi {
            acc += self.coeff(k);
            if k < hi {
                q.add_term(k, acc.clone());
            }
        }
        if acc.is_zero() {
            Some(q)
        } else {
            None
        }
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.coeffs.iter().map(|(e, c)| format!("({})u^{}", rat_to_string(c), e)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn laurent_eval(p: &LaurentPoly, x: &Rat) -> Rat {
    p.eval(x)
}

/// Reduce a pair numerator/(1 − u) to lowest terms: when (1 − u) divides
/// the numerator the denominator becomes 1.
pub fn f_chi_pair(num: LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    match num.div_one_minus_u() {
        Some(q) => (q, LaurentPoly::constant(Rat::one())),
        None => (num, LaurentPoly::from_terms(&[(0, Rat::one()), (1, -Rat::one())])),
    }
}

/// Multivariate Laurent polynomial over a coefficient ring.
#[derive(Clone, PartialEq)]
pub struct MLaurent<R: Coeff> {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<i64>, R>,
}

impl<R: Coeff> MLaurent<R> {
    pub fn zero(nvars: usize) -> Self {
        MLaurent { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: R) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exps: Vec<i64>, c: R) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// The variable x_i raised to the power e.
    pub fn var(nvars: usize, i: usize, e: i64) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = e;
        Self::monomial(exps, R::c_one())
    }

    pub fn add_term(&mut self, exps: Vec<i64>, c: R) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.c_is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(slot) => {
                let s = slot.c_add(&c);
                if s.c_is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *slot = s;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        MLaurent { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.c_neg())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &R) -> Self {
        let mut r = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            r.add_term(e.clone(), c.c_mul(k));
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1.c_mul(c2));
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::constant(self.nvars, R::c_one());
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Substitute each variable by a Laurent monomial given by an exponent row:
    /// x_i ↦ Π_j x_j^{m[i][j]}.
    pub fn monomial_substitute(&self, m: &[Vec<i64>]) -> Self {
        let mut r = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0i64; self.nvars];
            for (i, ei) in e.iter().enumerate() {
                for j in 0..self.nvars {
                    ne[j] += ei * m[i][j];
                }
            }
            r.add_term(ne, c.clone());
        }
        r
    }
}

impl<R: Coeff> fmt::Debug for MLaurent<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("{:?}*x^{:?}", c, e)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

use crate::lattices::Lattice;
use std::collections::BTreeMap;
use std::fmt;

/// Finite ℤ-linear combination of lattices; zero coefficients are dropped.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct FormalSum {
    pub terms: BTreeMap<Lattice, i64>,
}

impl FormalSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(l: Lattice) -> Self {
        let mut s = Self::new();
        s.add(l, 1);
        s
    }

    pub fn from_list(ls: impl IntoIterator<Item = Lattice>) -> Self {
        let mut s = Self::new();
        for l in ls {
            s.add(l, 1);
        }
        s
    }

    pub fn add(&mut self, l: Lattice, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(l).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&l);
        }
    }

    pub fn add_sum(&mut self, o: &FormalSum, c: i64) {
        for (l, k) in &o.terms {
            self.add(*l, c * k);
        }
    }

    pub fn plus(&self, o: &FormalSum) -> FormalSum {
        let mut r = self.clone();
        r.add_sum(o, 1);
        r
    }

    pub fn minus(&self, o: &FormalSum) -> FormalSum {
        let mut r = self.clone();
        r.add_sum(o, -1);
        r
    }

    pub fn scaled(&self, c: i64) -> FormalSum {
        let mut r = FormalSum::new();
        r.add_sum(self, c);
        r
    }

    pub fn coeff(&self, l: &Lattice) -> i64 {
        self.terms.get(l).copied().unwrap_or(0)
    }

    /// Sum of coefficients.
    pub fn degree(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Linear extension of a map on basis elements.
    pub fn apply(&self, f: impl Fn(&Lattice) -> FormalSum) -> FormalSum {
        let mut r = FormalSum::new();
        for (l, c) in &self.terms {
            r.add_sum(&f(l), *c);
        }
        r
    }

    /// Push forward along a map of basis elements.
    pub fn map_keys(&self, f: impl Fn(&Lattice) -> Lattice) -> FormalSum {
        let mut r = FormalSum::new();
        for (l, c) in &self.terms {
            r.add(f(l), *c);
        }
        r
    }

    /// ⟨q⟩^k: Λ ↦ q^kΛ.
    pub fn scale_lattices(&self, k: i32) -> FormalSum {
        self.map_keys(|l| l.scale(k))
    }

    /// Compact text form used in reports: "c·key + …", sorted by key.
    pub fn render(&self) -> String {
        if self.is_empty() {
            return "0".into();
        }
        self.terms.iter().map(|(l, c)| format!("{c}*{l}")).collect::<Vec<_>>().join(" + ")
    }

    /// Short digest for large sums: term count, degree and a content hash.
    pub fn digest(&self) -> String {
        // FNV-1a over the stored lattice data, stable across builds
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |x: i64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        for (l, c) in &self.terms {
            eat(l.shift as i64);
            for i in 0..l.dim() {
                for j in i..l.dim() {
                    eat(l.m[i][j]);
                }
            }
            eat(*c);
        }
        format!("terms={} degree={} fnv={:016x}", self.len(), self.degree(), h)
    }
}

impl fmt::Debug for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

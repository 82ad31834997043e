//! Named verification suites, their configuration and the JSON report
//! they produce.

use std::time::{SystemTime, UNIX_EPOCH};

use num::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, legendre, rat, rint, Rat};
use crate::error::{Result, SpinError};
use crate::galoislocal::{local_checks, random_admissible};
use crate::hecke::{
    composite_checks, deg_t1, deg_t2, multiplicity_checks, nabla_row_checks, over_ball, satake, siegel_checks,
    vertex_diagram_checks, Hecke,
};
use crate::lattices::VertexSpace;
use crate::report::Check;
use crate::spaces::{mat_from_ints, mat_mul, split_even, split_quadratic, QuadSpace};
use crate::testfns::{
    build_phi_family, family_scan, invariance_checks, t_circ_checks, FamilyTag, LatticeSquare, PhiFamily, PhiPrime,
    PrimeVariant,
};
use crate::thetadef::theta_checks;
use crate::weil::{
    act_levi, act_unipotent, c_at_origin, c_chi_tot, expected_c_chi_coefficient, f_chi, f_chi_lemma, fourier_full,
    fourier_naive, s_table, s_table_checks, s_tot_radial, shortcut_conditions, shortcut_criterion, vandermonde_det,
    vandermonde_rank_mod_p, PointFn, RadialFn, SchwartzFn, Window,
};

/// Version of the report layout below.
pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable naming the directory for reports written without
/// an explicit path.
pub const REPORT_DIR_ENV: &str = "SPINLOCAL_REPORT_DIR";

pub const MAX_Q: u64 = 13;
pub const MAX_RADIUS: usize = 3;

/// Suite name and the statement it checks, quoted in part.
pub const SUITES: &[(&str, &str)] = &[
    ("hecke-composites", "The Hecke operators θ±, δ± satisfy δ₊∘θ₊ = δ₋∘θ₋ = T_{q,1} + (q+1)(q²+1)"),
    ("vertex-diagrams", "The projections fit into the following commutative diagrams"),
    ("multiplicity", "depends only on L_Λ ∈ VL(0), and is given by 4, 4 − 4q or 0"),
    ("s-table", "The test function φ̄_q^tot satisfies condition (C_χ)"),
    ("c-chi", "The maximal quotient of S(Q_q^×, k) on which the first factor acts by χ"),
    ("shortcut", "A convenient shortcut that we will use to check condition (C_χ)"),
    ("t-circ", "T°_ℓ·φ°_ℓ = (ℓ+1)φ°_ℓ + 1_{ℓ⁻¹L° − L°} on y·y ∈ Z_ℓ^×"),
    ("phi-families", "Indicator functions of the following compact open subsets of V²"),
    ("satake-identities", "T_q^lr acts on the spherical vector of π_q with eigenvalue q⁻¹ det(Frob_q − q)"),
    ("admissible-local", "H¹_f and H¹_/f are each free of rank one over O/ϖⁿ"),
    ("theta-basic", "Let φ_∞ be the Gaussian φ_∞(x) = e^{−x·x}"),
    ("nabla-row", "Define the potential map ∇ as the composite inc* followed by M"),
    ("degeneracy-degrees", "B₊(g) has degree q+1"),
];

/// Parameters of one run. Every field has a default, so a config file may
/// list only what it changes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub suite: String,
    /// Residue characteristic of the local field (ℓ for t-circ).
    pub q: u64,
    /// Coefficient prime for admissible-local; both 7 and 11 when unset.
    pub p: Option<u64>,
    /// Radius of the T₂-ball around the base lattice.
    pub radius: usize,
    /// Trace bound for theta-basic.
    pub trace_bound: i64,
    /// Seed for every random choice of a suite.
    pub seed: u64,
    /// Sample count for randomized suites; each suite has its own default.
    pub samples: Option<usize>,
    /// Lift the q and radius guardrails. Runs beyond them are unsupported.
    pub unchecked: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            suite: String::new(),
            q: 3,
            p: None,
            radius: 1,
            trace_bound: 4,
            seed: 0,
            samples: None,
            unchecked: false,
        }
    }
}

impl RunConfig {
    pub fn new(suite: &str) -> RunConfig {
        RunConfig { suite: suite.to_string(), ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !SUITES.iter().any(|(s, _)| *s == self.suite) {
            return Err(SpinError::Input(format!("unknown suite '{}'", self.suite)));
        }
        if self.q == 2 || !is_prime(self.q) {
            return Err(SpinError::NotOddPrime(self.q));
        }
        if !self.unchecked {
            if self.q > MAX_Q {
                return Err(SpinError::Guardrail(format!("q = {} exceeds {MAX_Q}", self.q)));
            }
            if self.radius > MAX_RADIUS {
                return Err(SpinError::Guardrail(format!("radius {} exceeds {MAX_RADIUS}", self.radius)));
            }
        }
        if let Some(p) = self.p {
            if p == 2 || !is_prime(p) {
                return Err(SpinError::NotOddPrime(p));
            }
        }
        if self.trace_bound < 0 {
            return Err(SpinError::Input("trace bound must be nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub suite: String,
    pub config: RunConfig,
    pub checks: Vec<Check>,
    pub summary: Summary,
    pub version: String,
    /// Seconds since the Unix epoch; the only field that varies between
    /// identical runs.
    pub timestamp: u64,
}

impl Report {
    fn build(config: &RunConfig, mut checks: Vec<Check>) -> Report {
        checks.sort_by_key(|c| c.sort_key());
        let passed = checks.iter().filter(|c| c.pass).count();
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        Report {
            schema: SCHEMA_VERSION,
            suite: config.suite.clone(),
            config: config.clone(),
            summary: Summary { total: checks.len(), passed, failed: checks.len() - passed },
            checks,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0 && self.summary.total > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// `suite → statement`, one line per suite.
pub fn list_suites() -> String {
    SUITES.iter().map(|(s, a)| format!("{s} → {a}\n")).collect()
}

pub fn run_suite(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let checks = suite_checks(config)?;
    Ok(Report::build(config, checks))
}

fn suite_checks(cfg: &RunConfig) -> Result<Vec<Check>> {
    let q = cfg.q;
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let samples = |default: usize| cfg.samples.unwrap_or(default);
    Ok(match cfg.suite.as_str() {
        "hecke-composites" => {
            let h = Hecke::new(q);
            over_ball(&h, &h.base(), cfg.radius, composite_checks)
        }
        "vertex-diagrams" => {
            let h = Hecke::new(q);
            let vs = VertexSpace::new(q);
            over_ball(&h, &h.base(), cfg.radius, |h, l| vertex_diagram_checks(h, &vs, l))
        }
        "multiplicity" => multiplicity_checks(&Hecke::new(q), cfg.radius, 3),
        "s-table" => s_table_checks(q)?.into_iter().filter(|c| c.identity.ends_with(" value")).collect(),
        "c-chi" => c_chi_checks(q, samples(40), &mut rng)?,
        "shortcut" => shortcut_checks(q)?,
        "t-circ" => t_circ_checks(q)?,
        "phi-families" => phi_family_checks(q, samples(3000), &mut rng),
        "satake-identities" => {
            let mut out = satake::symbolic_checks();
            out.extend(satake::random_checks(square_prime(q), q, samples(100), &mut rng)?);
            out
        }
        "admissible-local" => admissible_checks(cfg.p, samples(200), &mut rng),
        "theta-basic" => theta_checks(cfg.trace_bound, &mut rng)?,
        "nabla-row" => {
            let h = Hecke::new(q);
            let mut out = over_ball(&h, &h.base(), cfg.radius, nabla_row_checks);
            out.extend(siegel_checks(&h, &h.base()));
            out
        }
        "degeneracy-degrees" => {
            let h = Hecke::new(q);
            let vs = VertexSpace::new(q);
            over_ball(&h, &h.base(), cfg.radius, |h, l| degree_checks(h, &vs, l))
        }
        other => return Err(SpinError::Input(format!("unknown suite '{other}'"))),
    })
}

/// Smallest prime above 1000 modulo which q is a square.
fn square_prime(q: u64) -> u64 {
    (1000..).find(|&p| is_prime(p) && legendre(q as i128, p) == 1).expect("infinitely many primes")
}

/// Degrees of the Hecke and degeneracy correspondences at one Λ, and of
/// the vertex-lattice maps below it.
pub fn degree_checks(h: &Hecke, vs: &VertexSpace, l: &crate::lattices::Lattice) -> Vec<Check> {
    let q = h.q as i64;
    let key = l.key();
    let big = (q + 1) * (q * q + 1);
    let mut out = vec![
        Check::equal("deg theta_plus = (q+1)(q^2+1)", h.q, &key, &h.theta_plus(l).degree(), &big),
        Check::equal("deg theta_minus = (q+1)(q^2+1)", h.q, &key, &h.theta_minus(l).degree(), &big),
        Check::equal("deg T2 = (q+1)(q^2+1)", h.q, &key, &h.t2(l).degree(), &deg_t2(q)),
        Check::equal("deg T1 = q(q+1)(q^2+1)", h.q, &key, &h.t1(l).degree(), &deg_t1(q)),
        Check::equal("deg T_lr = 0", h.q, &key, &h.t_lr(l).degree(), &0),
    ];
    for p in h.theta_plus_list(l) {
        let pk = p.key();
        let (dp, dm) = (h.delta_plus(&p).degree(), h.delta_minus(&p).degree());
        out.push(Check::equal("deg delta_plus = q+1", h.q, &pk, &dp, &(q + 1)));
        out.push(Check::equal("deg delta_minus = q+1", h.q, &pk, &dm, &(q + 1)));
        out.push(Check::equal("deg (delta_plus + delta_minus) = 2(q+1)", h.q, &pk, &(dp + dm), &(2 * (q + 1))));
        let bar = vs.bar_delta(&vs.vertex_lattice_of(&p)).map_or(-1, |s| s.degree());
        out.push(Check::equal("deg bar_delta = 2(q+1)", h.q, &pk, &bar, &(2 * (q + 1))));
    }
    for (plus, minus) in h.siegel_pairs(l) {
        let key = format!("{}|{}", plus.key(), minus.key());
        let bar = vs.bar_theta_sie_pa(&vs.siegel_vertex(&plus, &minus)).map_or(-1, |s| s.degree());
        out.push(Check::equal("deg bar_theta_sie_pa = q+1", h.q, &key, &bar, &(q + 1)));
        let theta = h.theta_sie_pa(&plus, &minus).len() as i64;
        out.push(Check::equal("deg theta_sie_pa = q+1", h.q, &key, &theta, &(q + 1)));
    }
    out
}

/// f_χ(s^tot) as a monomial, the lemma's expression for f_χ against the
/// direct sum, and Vandermonde independence of four characters.
pub fn c_chi_checks(q: u64, samples: usize, rng: &mut impl Rng) -> Result<Vec<Check>> {
    let mut out = vec![];
    let radial = s_tot_radial(&s_table(q, 1)?).ok_or_else(|| SpinError::Input("missing s-table sample".into()))?;
    let cc = c_chi_tot(&radial);
    let want = (-1, 1, expected_c_chi_coefficient(q));
    let show = |m: &Option<(i64, i64, Rat)>| m.as_ref().map_or("none".into(), |(a, s, c)| format!("{c}*a^{a}*s^{s}"));
    let mono = cc.monomial();
    out.push(Check::new(
        "c-chi: f_chi(s_tot) = (q-1)^2/q^3 * a^-1 * s",
        q,
        "u = a s^-1",
        show(&mono),
        show(&Some(want.clone())),
        mono == Some(want) && cc.nonvanishing(),
    ));
    for i in 0..samples {
        let lo = rng.gen_range(-3..2);
        let shells: Vec<Rat> = (0..rng.gen_range(0..4)).map(|_| rint(rng.gen_range(-4..5))).collect();
        let phi = RadialFn::new(lo, shells, rint(rng.gen_range(-4..5)));
        let (a, b) = (f_chi(&phi), f_chi_lemma(&phi));
        out.push(Check::new("c-chi: f_chi by shells = f_chi by the lemma", q, format!("sample {i}"), format!("{a:?}"), format!("{b:?}"), a == b));
    }
    for (a, b) in [(-2i64, 1i64), (-1, 0), (0, 2)] {
        let m = (b - a + 1) as usize;
        let det = vandermonde_det(a, b);
        let cf = vandermonde_closed_form(a, m);
        let ok = det == cf || det == cf.neg();
        out.push(Check::new("c-chi: evaluation determinant = +-Vandermonde", q, format!("S_{{{a},{b}}}"), ok, true, ok));
    }
    let rank = vandermonde_rank_mod_p(-2, 1, &[2, 3, 5, 7], 101)?;
    out.push(Check::equal("c-chi: evaluation rank on S_{-2,1}", q, "x = 2, 3, 5, 7 mod 101", &rank, &4));
    Ok(out)
}

fn vandermonde_closed_form(a: i64, m: usize) -> crate::arith::MLaurent<Rat> {
    use crate::arith::MLaurent;
    let mut p = MLaurent::constant(m, rint(1));
    for i in 0..m {
        p = p.mul(&MLaurent::var(m, i, a));
    }
    for i in 0..m {
        for j in i + 1..m {
            p = p.mul(&MLaurent::var(m, j, 1).sub(&MLaurent::var(m, i, 1)));
        }
    }
    p
}

/// The shortcut criterion on 1_{L×L} and φ′ (which conform) and on
/// 1_{X★} (which is not invariant under qL × q²L).
pub fn shortcut_checks(q: u64) -> Result<Vec<Check>> {
    let mut out = vec![];
    let conforming: Vec<(&str, Box<dyn PointFn>)> =
        vec![("1_(LxL)", Box::new(LatticeSquare { q })), ("phi_prime", Box::new(PhiPrime::new(q, PrimeVariant::Li)))];
    for (name, f) in &conforming {
        match shortcut_criterion(f.as_ref())? {
            Some(w) => {
                let c0 = c_at_origin(&w);
                out.push(Check::new("shortcut: some Weyl conjugate has f_chi(c) != 0", q, name, format!("{:?}", w.w), "nonzero", true));
                out.push(Check::new("shortcut: c(Z_q, qZ_q) > 0", q, name, &c0, "> 0", c0 > Rat::zero()));
            }
            None => out.push(Check::new("shortcut: some Weyl conjugate has f_chi(c) != 0", q, name, "none", "nonzero", false)),
        }
    }
    let star = PhiFamily::new(q, FamilyTag::Star);
    let cond = shortcut_conditions(&star)?;
    let expected = cond.nonnegative && cond.nonzero_on_y1 && !cond.support_invariance;
    out.push(Check::new("shortcut: 1_(X_star) is not invariant under qL x q^2L", q, "star", format!("{cond:?}"), "invariance fails", expected));
    Ok(out)
}

pub fn phi_family_checks(q: u64, samples: usize, rng: &mut impl Rng) -> Vec<Check> {
    let mut out = family_scan(q, samples, rng);
    let inv = (samples / 10).max(1);
    for f in build_phi_family(q) {
        let allowed: Vec<i64> = if f.tag == FamilyTag::Tot { vec![0, 1, 1 - q as i64] } else { vec![0, 1] };
        out.extend(invariance_checks(&f, f.tag.name(), &allowed, inv, rng));
    }
    for v in [PrimeVariant::Li, PrimeVariant::L0] {
        let f = PhiPrime::new(q, v);
        out.extend(invariance_checks(&f, f.tag(), &[0, 1, q as i64 + 1], inv, rng));
    }
    out
}

/// Random admissible Frobenius data over ℤ/pⁿ, alternating p ∈ {7, 11}
/// unless p is fixed, with n = 1, 2, 3 and q ∈ {2, 3, 5}.
pub fn admissible_checks(p: Option<u64>, samples: usize, rng: &mut impl Rng) -> Vec<Check> {
    let mut out = vec![];
    for s in 0..samples {
        let p = p.unwrap_or([7u64, 11][s % 2]);
        let n = 1 + (s / 2 % 3) as u32;
        let q = [2u64, 3, 5].into_iter().cycle().skip(s / 6 % 3).find(|&q| q != p).expect("q differs from p");
        let d = random_admissible(p, n, q, rng);
        out.extend(local_checks(&d, &format!("sample {s} p={p} n={n} q={q}"), rng));
    }
    out
}

fn weil_spaces() -> Vec<QuadSpace> {
    vec![
        QuadSpace::new(mat_from_ints(&[&[1]])).expect("unit line"),
        split_even(1),
        QuadSpace::new(mat_from_ints(&[&[1, 0], &[0, 2]])).expect("diagonal plane"),
        split_quadratic(1),
    ]
}

/// Fourier inversion (up to the tracked unit), unipotent additivity and
/// composition of the Levi action, on random sparse Schwartz functions.
/// Functions too large for the dense transform are skipped and reported.
pub fn weil_checks(count: usize, rng: &mut impl Rng) -> Result<Vec<Check>> {
    let mut out = vec![];
    for i in 0..count {
        let q = [3u64, 5][i % 2];
        let space = weil_spaces()[i % 4].clone();
        let n = if space.dim() == 1 { 1 + i % 2 } else { 1 };
        let (a, b) = [(0, 1), (1, 0), (1, 1), (0, 0), (2, -1)][i % 5];
        let f = SchwartzFn::random(q, space, n, Window::new(a, b)?, 1 + i % 5, rng)?;
        let key = format!("sample {i}");
        let hat = fourier_full(&f)?;
        let naive = fourier_naive(&f)?;
        let back = fourier_full(&hat)?;
        out.push(Check::new("weil: fast transform = naive transform", q, &key, f.cells(), hat.cells(), hat.same_function(&naive)));
        out.push(Check::new(
            "weil: F(F(phi)) = phi(-x) with unit +2",
            q,
            &key,
            back.unit,
            f.unit + 2,
            back.same_function(&f.reflect()) && back.unit == f.unit + 2,
        ));
    }
    for i in 0..count.min(20) {
        let q = [3u64, 5][i % 2];
        let f = SchwartzFn::random(q, split_even(1), 2, Window::new(0, 0)?, 6, rng)?;
        let mut sym = || {
            let x = rat(rng.gen_range(-4..5), q as i64);
            let y = rint(rng.gen_range(-3..4));
            let z = rint(rng.gen_range(-4..5));
            vec![vec![x, y.clone()], vec![y, z]]
        };
        let (u1, u2) = (sym(), sym());
        let sum: Vec<Vec<Rat>> = u1.iter().zip(&u2).map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect()).collect();
        let lhs = act_unipotent(&sum, &f)?;
        let rhs = act_unipotent(&u1, &act_unipotent(&u2, &f)?)?;
        out.push(Check::new("weil: n(u1 + u2) = n(u1) n(u2)", q, format!("sample {i}"), "", "", lhs.same_function(&rhs)));
    }
    let m1 = vec![vec![Rat::zero(), rint(2)], vec![rint(1), Rat::zero()]];
    let m2 = vec![vec![rint(3), Rat::zero()], vec![Rat::zero(), rat(1, 3)]];
    let m3 = vec![vec![Rat::zero(), rint(1)], vec![rint(1), Rat::zero()]];
    for i in 0..count.min(10) {
        let f = SchwartzFn::random(3, split_even(1), 2, Window::new(1, 1)?, 5, rng)?;
        let whole = act_levi(&mat_mul(&mat_mul(&m1, &m2), &m3), &f)?;
        let steps = act_levi(&m1, &act_levi(&m2, &act_levi(&m3, &f)?)?)?;
        out.push(Check::new("weil: m(abc) = m(a) m(b) m(c)", 3, format!("sample {i}"), "", "", whole.same_function(&steps)));
    }
    Ok(out)
}

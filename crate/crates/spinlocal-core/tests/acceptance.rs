//! One PASS/FAIL line per acceptance criterion. Every comparison is exact
//! (zero tolerance); the time limits are wall-clock seconds.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{rngs::StdRng, SeedableRng};
use spinlocal_core::hecke::{
    composite_checks, multiplicity_checks, nabla_row_checks, over_ball, satake, siegel_checks, vertex_diagram_checks,
    Hecke,
};
use spinlocal_core::lattices::VertexSpace;
use spinlocal_core::report::Check;
use spinlocal_core::testfns::t_circ_checks;
use spinlocal_core::thetadef::theta_checks;
use spinlocal_core::verify::{admissible_checks, c_chi_checks, degree_checks, weil_checks};
use spinlocal_core::weil::s_table_checks;
use spinlocal_core::Result;

struct Outcome {
    id: u32,
    name: &'static str,
    checks: usize,
    failed: Vec<Check>,
    error: Option<String>,
    elapsed: Duration,
    limit: Option<u64>,
    extra: Option<String>,
}

impl Outcome {
    fn pass(&self) -> bool {
        self.error.is_none()
            && self.extra.is_none()
            && self.checks > 0
            && self.failed.is_empty()
            && self.limit.map_or(true, |s| self.elapsed <= Duration::from_secs(s))
    }

    fn line(&self) -> String {
        let limit = self.limit.map_or("none".to_string(), |s| format!("{s}s"));
        let mut s = format!(
            "{} {:>2} {}: {} checks, {} failed, tol=exact, {:.2}s (limit {limit})",
            if self.pass() { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.checks,
            self.failed.len(),
            self.elapsed.as_secs_f64(),
        );
        if let Some(e) = &self.error {
            s += &format!(" error: {e}");
        }
        if let Some(e) = &self.extra {
            s += &format!(" {e}");
        }
        if let Some(c) = self.failed.first() {
            s += &format!(" first failure: {} at {} ({} vs {})", c.identity, c.inputs, c.lhs, c.rhs);
        }
        s
    }
}

fn run(id: u32, name: &'static str, limit: Option<u64>, f: impl FnOnce() -> Result<(Vec<Check>, Option<String>)>) -> Outcome {
    let t = Instant::now();
    let res = f();
    let elapsed = t.elapsed();
    match res {
        Ok((checks, extra)) => Outcome {
            id,
            name,
            checks: checks.len(),
            failed: checks.into_iter().filter(|c| !c.pass).collect(),
            error: None,
            elapsed,
            limit,
            extra,
        },
        Err(e) => Outcome { id, name, checks: 0, failed: vec![], error: Some(e.to_string()), elapsed, limit, extra: None },
    }
}

fn ball1(qs: &[u64], f: impl Fn(&Hecke, &spinlocal_core::lattices::Lattice) -> Vec<Check>) -> Vec<Check> {
    qs.iter()
        .flat_map(|&q| {
            let h = Hecke::new(q);
            over_ball(&h, &h.base(), 1, &f)
        })
        .collect()
}

#[test]
fn acceptance() {
    let mut out = vec![];

    out.push(run(1, "Hecke composites, q = 3, 5, 7, radius-1 ball", Some(30), || {
        Ok((ball1(&[3, 5, 7], composite_checks), None))
    }));

    out.push(run(2, "s-table and f_chi(s_tot) monomial, q = 3, 5, 7", Some(10), || {
        let mut all = vec![];
        let mut extra = None;
        for q in [3u64, 5, 7] {
            let cs = s_table_checks(q)?;
            let values = cs.iter().filter(|c| c.identity.ends_with(" value")).count();
            if values != 8 {
                extra = Some(format!("q={q} has {values} table entries"));
            }
            all.extend(cs);
        }
        Ok((all, extra))
    }));

    out.push(run(3, "multiplicity on the radius-2 ball, q = 3, tree radius 3 vs 4", Some(60), || {
        Ok((multiplicity_checks(&Hecke::new(3), 2, 3), None))
    }));

    out.push(run(4, "vertex-lattice diagrams and degeneracy degrees, q = 3, 5", None, || {
        let mut all = vec![];
        for q in [3u64, 5] {
            let vs = VertexSpace::new(q);
            let h = Hecke::new(q);
            all.extend(over_ball(&h, &h.base(), 1, |h, l| vertex_diagram_checks(h, &vs, l)));
            all.extend(over_ball(&h, &h.base(), 1, |h, l| degree_checks(h, &vs, l)));
        }
        Ok((all, None))
    }));

    out.push(run(5, "potential-map row identity, q = 3, 5", None, || Ok((ball1(&[3, 5], nabla_row_checks), None))));

    out.push(run(6, "Siegel potential against raw degeneracy maps, q = 3", None, || {
        let h = Hecke::new(3);
        Ok((siegel_checks(&h, &h.base()), None))
    }));

    out.push(run(7, "Satake identities, symbolic and 100 random parameters", None, || {
        let mut rng = StdRng::seed_from_u64(7);
        let mut all = satake::symbolic_checks();
        // 3 is a square mod 1009
        all.extend(satake::random_checks(1009, 3, 100, &mut rng)?);
        Ok((all, None))
    }));

    out.push(run(8, "local admissibility, 200 samples", Some(20), || {
        let mut rng = StdRng::seed_from_u64(8);
        let all = admissible_checks(None, 200, &mut rng);
        let samples = all.iter().map(|c| c.inputs.split(' ').take(2).collect::<Vec<_>>().join(" ")).collect::<std::collections::BTreeSet<_>>().len();
        Ok((all, (samples != 200).then(|| format!("{samples} samples"))))
    }));

    out.push(run(9, "T_circ claim, l = 3, 5", None, || {
        let mut all = t_circ_checks(3)?;
        all.extend(t_circ_checks(5)?);
        Ok((all, None))
    }));

    out.push(run(10, "Vandermonde independence on S_{-2,1}", None, || {
        let mut rng = StdRng::seed_from_u64(10);
        let all: Vec<Check> = c_chi_checks(3, 0, &mut rng)?.into_iter().filter(|c| c.identity.contains("evaluation")).collect();
        Ok((all, None))
    }));

    out.push(run(11, "theta basics on Z^5 and convolution", Some(10), || {
        let mut rng = StdRng::seed_from_u64(11);
        Ok((theta_checks(4, &mut rng)?, None))
    }));

    out.push(run(12, "Weil operators: inversion on 50 functions, additivity, composition", None, || {
        let mut rng = StdRng::seed_from_u64(12);
        let all = weil_checks(50, &mut rng)?;
        let inv = all.iter().filter(|c| c.identity.starts_with("weil: F(F(phi))")).count();
        Ok((all, (inv != 50).then(|| format!("{inv} inversion samples"))))
    }));

    // written to the handle directly so the lines survive libtest capture
    let mut stdout = std::io::stdout().lock();
    for o in &out {
        writeln!(stdout, "{}", o.line()).unwrap();
    }
    drop(stdout);
    let failed: Vec<u32> = out.iter().filter(|o| !o.pass()).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

use super::Hecke;
use crate::lattices::Lattice;
use std::collections::BTreeSet;

/// Homothety classes of 𝓛 within T₂-distance `radius` of `center`,
/// listed by distance and then by key. Representatives have shift 0.
pub fn ball(h: &Hecke, center: &Lattice, radius: usize) -> Vec<(usize, Lattice)> {
    let c = center.class_rep();
    let mut seen: BTreeSet<Lattice> = BTreeSet::from([c]);
    let mut out = vec![(0, c)];
    let mut frontier = vec![c];
    for r in 1..=radius {
        let mut next = BTreeSet::new();
        for l in &frontier {
            for m in h.t2_list(l) {
                let m = m.class_rep();
                if !seen.contains(&m) {
                    next.insert(m);
                }
            }
        }
        for m in &next {
            seen.insert(*m);
            out.push((r, *m));
        }
        frontier = next.into_iter().collect();
    }
    out
}

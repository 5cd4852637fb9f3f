//! Small transition graphs covering the qualitatively different cases:
//! full shifts, a proper mixing SFT, single cycles, several strongly
//! connected components, and transient parts.

use crate::dynamics::SftGraph;

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub description: &'static str,
    pub graph: SftGraph,
}

fn entry(id: &'static str, description: &'static str, rows: &[&[u8]]) -> CatalogEntry {
    let rows: Vec<Vec<u8>> = rows.iter().map(|r| r.to_vec()).collect();
    CatalogEntry {
        id,
        description,
        graph: SftGraph::from_matrix(&rows).expect("catalog graphs are valid"),
    }
}

pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        entry("full2", "full 2-shift", &[&[1, 1], &[1, 1]]),
        entry(
            "full3",
            "full 3-shift",
            &[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]],
        ),
        entry("golden", "golden-mean shift (no 11)", &[&[1, 1], &[1, 0]]),
        entry("fixed1", "a single fixed point", &[&[1]]),
        entry("cycle2", "a single 2-cycle", &[&[0, 1], &[1, 0]]),
        entry(
            "cycle3",
            "a single 3-cycle",
            &[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]],
        ),
        entry(
            "two-scc",
            "two fixed points joined by a transient edge",
            &[&[1, 1], &[0, 1]],
        ),
        entry(
            "chord3",
            "3-cycle with a loop at 0",
            &[&[1, 1, 0], &[0, 0, 1], &[1, 0, 0]],
        ),
        entry(
            "disjoint",
            "a 2-cycle and a fixed point, disconnected",
            &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]],
        ),
        entry(
            "full-into-cycle",
            "full 2-shift on {0,1} feeding a 2-cycle on {2,3}",
            &[&[1, 1, 1, 0], &[1, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]],
        ),
        entry(
            "bipartite",
            "0 <-> {1, 2}, period 2",
            &[&[0, 1, 1], &[1, 0, 0], &[1, 0, 0]],
        ),
    ]
}

pub fn lookup(id: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.id == id)
}

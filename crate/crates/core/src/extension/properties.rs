//! Dynamical predicates on the one-sided system and on its natural
//! extension, computed along two unrelated routes that must agree.

use serde::Serialize;

use crate::dynamics::SftGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    /// Some orbit is dense.
    Transitive,
    PeriodicDense,
    Minimal,
    RecurrentDense,
}

impl Property {
    pub const ALL: [Property; 4] = [
        Property::Transitive,
        Property::PeriodicDense,
        Property::Minimal,
        Property::RecurrentDense,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Property::Transitive => "transitive",
            Property::PeriodicDense => "periodic_dense",
            Property::Minimal => "minimal",
            Property::RecurrentDense => "recurrent_dense",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Base,
    Extension,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport {
    pub property: Property,
    pub base: bool,
    pub extension: bool,
    pub agreement: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
}

const TRANSITIVE_NOTE: &str =
    "standard sense (a dense forward orbit); the stronger all-orbits-dense reading is not checked";

pub fn property_check(graph: &SftGraph, property: Property, side: Side) -> bool {
    match side {
        Side::Base => OneSided::new(graph).holds(property),
        Side::Extension => TwoSided::new(graph).holds(property),
    }
}

/// Evaluates all four predicates on both sides.
pub fn transfer_check(graph: &SftGraph) -> Vec<PropertyReport> {
    let base = OneSided::new(graph);
    let ext = TwoSided::new(graph);
    Property::ALL
        .iter()
        .map(|&property| {
            let b = base.holds(property);
            let e = ext.holds(property);
            PropertyReport {
                property,
                base: b,
                extension: e,
                agreement: b == e,
                note: (property == Property::Transitive).then_some(TRANSITIVE_NOTE),
            }
        })
        .collect()
}

/// Strongly connected components (Tarjan) of the transition graph.
pub fn strongly_connected_components(graph: &SftGraph) -> Vec<Vec<usize>> {
    struct State {
        index: usize,
        stack: Vec<usize>,
        on_stack: Vec<bool>,
        idx: Vec<Option<usize>>,
        low: Vec<usize>,
        comps: Vec<Vec<usize>>,
    }

    fn connect(v: usize, g: &SftGraph, st: &mut State) {
        st.idx[v] = Some(st.index);
        st.low[v] = st.index;
        st.index += 1;
        st.stack.push(v);
        st.on_stack[v] = true;
        for w in g.successors(v) {
            match st.idx[w] {
                None => {
                    connect(w, g, st);
                    st.low[v] = st.low[v].min(st.low[w]);
                }
                Some(iw) if st.on_stack[w] => st.low[v] = st.low[v].min(iw),
                _ => {}
            }
        }
        if Some(st.low[v]) == st.idx[v] {
            let mut comp = Vec::new();
            loop {
                let w = st.stack.pop().expect("tarjan stack underflow");
                st.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            st.comps.push(comp);
        }
    }

    let n = graph.alphabet_size();
    let mut st = State {
        index: 0,
        stack: Vec::new(),
        on_stack: vec![false; n],
        idx: vec![None; n],
        low: vec![0; n],
        comps: Vec::new(),
    };
    for v in 0..n {
        if st.idx[v].is_none() {
            connect(v, graph, &mut st);
        }
    }
    st.comps.sort();
    st.comps
}

/// Base route: SCC decomposition of the one-sided transition graph.
struct OneSided<'a> {
    graph: &'a SftGraph,
    comp_of: Vec<usize>,
    comps: usize,
}

impl<'a> OneSided<'a> {
    fn new(graph: &'a SftGraph) -> Self {
        let sccs = strongly_connected_components(graph);
        let mut comp_of = vec![usize::MAX; graph.alphabet_size()];
        for (c, comp) in sccs.iter().enumerate() {
            for &v in comp {
                comp_of[v] = c;
            }
        }
        OneSided {
            graph,
            comp_of,
            comps: sccs.len(),
        }
    }

    fn holds(&self, property: Property) -> bool {
        match property {
            Property::Transitive => self.comps == 1,
            // every cylinder [ab] meets a periodic orbit iff ab lies in an SCC;
            // periodic points are recurrent and recurrent words close into
            // cycles, so both closures coincide
            Property::PeriodicDense | Property::RecurrentDense => self
                .graph
                .edge_list()
                .iter()
                .all(|&(a, b)| self.comp_of[a] == self.comp_of[b]),
            Property::Minimal => self.comps == 1 && self.graph.is_permutation(),
        }
    }
}

/// Extension route: word language of the two-sided shift via the
/// reachability closure of the transition matrix.
struct TwoSided<'a> {
    graph: &'a SftGraph,
    reach: Vec<Vec<bool>>,
}

impl<'a> TwoSided<'a> {
    fn new(graph: &'a SftGraph) -> Self {
        let n = graph.alphabet_size();
        let mut reach = graph.rows();
        // Warshall: reach[a][b] iff some path of length >= 1 runs a -> b
        #[allow(clippy::needless_range_loop)]
        for k in 0..n {
            for a in 0..n {
                if reach[a][k] {
                    for b in 0..n {
                        if reach[k][b] {
                            reach[a][b] = true;
                        }
                    }
                }
            }
        }
        TwoSided { graph, reach }
    }

    /// Any two admissible bi-infinite words `u`, `v` can be bridged `u ... v`.
    fn words_connect(&self) -> bool {
        self.reach.iter().all(|row| row.iter().all(|&r| r))
    }

    /// The two-symbol word `ab` occurs in a bi-infinite periodic sequence
    /// (equivalently recurs in some point) iff `b` leads back to `a`.
    fn every_edge_recurs(&self) -> bool {
        let n = self.graph.alphabet_size();
        (0..n).all(|a| (0..n).all(|b| !self.graph.has_edge(a, b) || self.reach[b][a]))
    }

    fn holds(&self, property: Property) -> bool {
        match property {
            Property::Transitive => self.words_connect(),
            Property::PeriodicDense | Property::RecurrentDense => self.every_edge_recurs(),
            // one orbit: as many two-symbol words as symbols, all connected
            Property::Minimal => {
                self.graph.count_words(2) == self.graph.alphabet_size() as u128
                    && self.words_connect()
            }
        }
    }
}

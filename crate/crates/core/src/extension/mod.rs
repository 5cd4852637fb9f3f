//! The natural extension of a one-sided shift: the two-sided shift on the
//! same graph, whose points are backward orbits `(x_1, x_2, ...)` with
//! `x_n = phi(x_{n+1})`.

mod bilasso;
mod cylinder;
mod properties;

use std::collections::HashMap;

pub use bilasso::{BiLassoPoint, ExtendedClass};
pub use cylinder::TwoSidedCylinder;
pub use properties::{
    property_check, strongly_connected_components, transfer_check, Property, PropertyReport, Side,
};

use crate::dynamics::{CylinderFunction, LassoPoint, SftGraph, Symbol, Word};

/// The natural extension of a one-sided shift is the two-sided shift on
/// the same transition matrix.
pub fn extend_system(graph: &SftGraph) -> SftGraph {
    graph.with_two_sided(true)
}

/// `p(x~) = x_1`, the ray from coordinate 1.
pub fn project_p(point: &BiLassoPoint) -> LassoPoint {
    point.ray(1)
}

pub fn apply_phi_tilde(point: &BiLassoPoint, n: i64) -> BiLassoPoint {
    point.shift(n)
}

/// A canonical point of the fiber `p^-1(x)`.
///
/// Periodic points lift to the bi-infinite periodic sequence. Otherwise the
/// sequence is continued to the left one symbol at a time by the least
/// predecessor of the current leftmost symbol, until a symbol repeats; the
/// repeating stretch becomes the left period.
pub fn lift_point(graph: &SftGraph, x: &LassoPoint) -> BiLassoPoint {
    if x.is_periodic() {
        return BiLassoPoint::normalized(x.period().to_vec(), Word::new(), 1, x.period().to_vec());
    }
    // chain[k] is the symbol at coordinate 1 - k
    let mut chain: Vec<Symbol> = vec![x.symbol(0)];
    let mut seen: HashMap<Symbol, usize> = HashMap::from([(x.symbol(0), 0)]);
    let (cycle_start, period) = loop {
        let next = graph.least_predecessor(*chain.last().unwrap() as usize) as Symbol;
        let k = chain.len();
        if let Some(&i) = seen.get(&next) {
            break (i, k - i);
        }
        seen.insert(next, k);
        chain.push(next);
    };
    // chain[k] for k >= first repeats with the given period; the left tail
    // must start strictly left of coordinate 1
    let first = cycle_start.max(1);
    let at = |k: usize| chain[cycle_start + (k - cycle_start) % period];
    let left: Word = (first..first + period).rev().map(at).collect();
    let mut center: Word = (1..first).rev().map(|k| chain[k]).collect();
    center.extend_from_slice(x.preperiod());
    BiLassoPoint::normalized(left, center, 2 - first as i64, x.period().to_vec())
}

/// `(x_1, ..., x_depth)` with `x_n` the ray from coordinate `2 - n`.
pub fn backward_orbit_view(point: &BiLassoPoint, depth: usize) -> Vec<LassoPoint> {
    (1..=depth as i64).map(|n| point.ray(2 - n)).collect()
}

/// `f o p` as a function on the extension.
pub fn embed_function(f: &CylinderFunction) -> TwoSidedCylinder {
    TwoSidedCylinder::from_base(f, 1)
}

pub fn shift_window(f: &TwoSidedCylinder, n: i64) -> TwoSidedCylinder {
    f.shift_window(n)
}

pub fn classify_extended_point(point: &BiLassoPoint) -> ExtendedClass {
    point.classify()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{parse_word, Coordinates};
    use std::sync::Arc;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    fn golden() -> SftGraph {
        SftGraph::from_matrix(&[vec![1, 1], vec![1, 0]]).unwrap()
    }

    #[test]
    fn extend_system_examples() {
        for g in [
            SftGraph::full_shift(2).unwrap(),
            golden(),
            SftGraph::cycle(2).unwrap(),
        ] {
            let e = extend_system(&g);
            assert!(e.is_two_sided());
            assert!(e.same_edges(&g));
        }
    }

    #[test]
    fn projection_examples() {
        let g = SftGraph::full_shift(2).unwrap();
        let at0 = BiLassoPoint::new(&g, &w("0"), &w("1"), 0, &w("0")).unwrap();
        assert_eq!(project_p(&at0), LassoPoint::periodic(&g, &w("0")).unwrap());
        let at1 = BiLassoPoint::new(&g, &w("0"), &w("1"), 1, &w("0")).unwrap();
        assert_eq!(
            project_p(&at1),
            LassoPoint::new(&g, &w("1"), &w("0")).unwrap()
        );
        let per = BiLassoPoint::periodic(&g, &w("01")).unwrap();
        assert_eq!(project_p(&per), LassoPoint::periodic(&g, &w("01")).unwrap());
    }

    #[test]
    fn phi_tilde_examples() {
        let g = SftGraph::full_shift(2).unwrap();
        let x = BiLassoPoint::new(&g, &w("0"), &w("1"), 1, &w("0")).unwrap();
        assert_eq!(apply_phi_tilde(&x, 0), x);
        assert_eq!(apply_phi_tilde(&apply_phi_tilde(&x, 1), -1), x);
        let moved = apply_phi_tilde(&x, 1);
        assert_eq!(moved.symbol(0), 1);
        assert_eq!(moved.symbol(1), 0);
    }

    #[test]
    fn lift_examples() {
        let full = SftGraph::full_shift(2).unwrap();
        let zero = LassoPoint::periodic(&full, &w("0")).unwrap();
        let lift = lift_point(&full, &zero);
        assert_eq!(lift, BiLassoPoint::periodic(&full, &w("0")).unwrap());

        let gm = golden();
        let alt = LassoPoint::periodic(&gm, &w("01")).unwrap();
        let lift = lift_point(&gm, &alt);
        assert!(lift.is_globally_periodic());
        assert_eq!(project_p(&lift), alt);

        // 1 0^inf on the golden mean: least predecessor of 1 is 0, of 0 is 0
        let spike = LassoPoint::new(&gm, &w("1"), &w("0")).unwrap();
        let lift = lift_point(&gm, &spike);
        assert_eq!(
            lift,
            BiLassoPoint::new(&gm, &w("0"), &w("1"), 1, &w("0")).unwrap()
        );
    }

    #[test]
    fn lift_closes_on_longer_cycles() {
        // least predecessors of 0 run 0 <- 2 <- 1 <- 0, back to the start
        let g = SftGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0), (1, 1)]).unwrap();
        let x = LassoPoint::new(&g, &w("0"), &w("1")).unwrap();
        let lift = lift_point(&g, &x);
        assert_eq!(project_p(&lift), x);
        assert_eq!(lift.symbols(-5, 6).unwrap(), w("012012"));
        assert!(g.is_admissible(&lift.symbols(-10, 20).unwrap()));
    }

    #[test]
    fn backward_orbit_examples() {
        let g = SftGraph::full_shift(2).unwrap();
        let per = BiLassoPoint::periodic(&g, &w("01")).unwrap();
        let view = backward_orbit_view(&per, 3);
        let a = LassoPoint::periodic(&g, &w("01")).unwrap();
        let b = LassoPoint::periodic(&g, &w("10")).unwrap();
        assert_eq!(view, vec![a.clone(), b, a]);
        assert_eq!(backward_orbit_view(&per, 1), vec![project_p(&per)]);
    }

    #[test]
    fn embedded_functions() {
        let g = Arc::new(SftGraph::full_shift(2).unwrap());
        let f = CylinderFunction::from_fn(g.clone(), 1, |s| {
            crate::C64::new(if s[0] == 0 { 2.0 } else { 5.0 }, 0.0)
        });
        let ef = embed_function(&f);
        assert_eq!(ef.start(), 1);
        assert_eq!(shift_window(&ef, 0), ef);
        assert_eq!(shift_window(&shift_window(&ef, -2), 2), ef);
        assert_eq!(ef.to_one_sided().unwrap(), f);
        let shifted = shift_window(&ef, 2).to_one_sided().unwrap();
        assert_eq!(shifted, f.compose_shift(2));
        assert!(shift_window(&ef, -1).to_one_sided().is_none());
    }
}

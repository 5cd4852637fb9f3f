//! Verdicts about the C*-envelope of the semicrossed product: simplicity,
//! the semisimplicity predicate, and the numerical check that the embedding
//! into the crossed product over the natural extension is isometric.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{CrossedPoly, SemicrossedPoly};
use crate::error::{Error, Result};
use crate::extension::{property_check, transfer_check, Property, PropertyReport, Side};
use crate::representations::{crossed_norm, semicrossed_norm, TruncationPolicy};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmbeddingRow {
    pub element: String,
    pub semicrossed: f64,
    pub crossed: f64,
    pub gap: f64,
    pub k: usize,
    /// `|semicrossed - crossed|` at each truncation stage.
    pub gap_history: Vec<(usize, f64)>,
}

/// `G U^m` for a sample `G` outside the semicrossed image.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularizationCheck {
    pub sample: String,
    pub m: usize,
    /// Every power of `G U^m` is nonnegative and every window starts at
    /// coordinate 1 or later.
    pub in_subalgebra: bool,
    pub crossed_before: f64,
    pub crossed_after: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopeReport {
    pub system: String,
    pub minimal_extension: bool,
    /// The envelope is the crossed product over the extension, which is
    /// simple exactly when the extension is minimal.
    pub envelope_simple: bool,
    pub recurrent_dense: bool,
    /// The dynamical hypothesis (recurrent points dense) under which the
    /// semicrossed product is semisimple; a predicate, not a proof.
    pub semisimple_predicate: bool,
    pub implication_ok: bool,
    pub transfer: Vec<PropertyReport>,
    pub embedding_sweep: Vec<EmbeddingRow>,
    pub regularization: Vec<RegularizationCheck>,
}

/// Number of regularization samples checked per report.
pub const REGULARIZATION_SAMPLES: usize = 3;

/// `U^-j alpha~^-j(embed(E))`: a crossed polynomial with negative powers and
/// windows reaching left of coordinate 1.
pub fn regularization_sample(e: &SemicrossedPoly, j: i64) -> CrossedPoly {
    let g = e.embed();
    CrossedPoly::unitary_power(g.graph().clone(), -j).multiply(&g.alpha_power(-j))
}

pub fn envelope_report(
    system: &str,
    elements: &[(String, SemicrossedPoly)],
    policy: &TruncationPolicy,
) -> Result<EnvelopeReport> {
    let graph: Arc<_> = match elements.first() {
        Some((_, e)) => e.graph().clone(),
        None => return Err(Error::InvalidPolicy("no elements to compare".into())),
    };
    let minimal_extension = property_check(&graph, Property::Minimal, Side::Extension);
    let recurrent_dense = property_check(&graph, Property::RecurrentDense, Side::Base);
    let envelope_simple = minimal_extension;
    let semisimple_predicate = recurrent_dense;

    let embedding_sweep = elements
        .par_iter()
        .map(|(id, e)| {
            let s = semicrossed_norm(e, policy)?;
            let c = crossed_norm(&e.embed(), policy)?;
            let gap_history = s
                .estimate
                .history
                .iter()
                .zip(&c.estimate.history)
                .map(|(&(k, a), &(_, b))| (k, (a - b).abs()))
                .collect();
            Ok(EmbeddingRow {
                element: id.clone(),
                semicrossed: s.estimate.value,
                crossed: c.estimate.value,
                gap: (s.estimate.value - c.estimate.value).abs(),
                k: s.estimate.k,
                gap_history,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let regularization = (0..REGULARIZATION_SAMPLES)
        .into_par_iter()
        .map(|i| {
            let (id, e) = &elements[i % elements.len()];
            let j = i as i64 + 1;
            let g = regularization_sample(e, j);
            let (m, f) = g.regularize_right_multiply();
            let before = crossed_norm(&g, policy)?.estimate.value;
            let after = crossed_norm(&f.embed(), policy)?.estimate.value;
            Ok(RegularizationCheck {
                sample: format!("U^-{j} alpha~^-{j}({id})"),
                m,
                in_subalgebra: g.right_multiply_u(m as i64).in_semicrossed_image(),
                crossed_before: before,
                crossed_after: after,
                gap: (before - after).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(EnvelopeReport {
        system: system.to_string(),
        minimal_extension,
        envelope_simple,
        recurrent_dense,
        semisimple_predicate,
        implication_ok: !envelope_simple || semisimple_predicate,
        transfer: transfer_check(&graph),
        embedding_sweep,
        regularization,
    })
}

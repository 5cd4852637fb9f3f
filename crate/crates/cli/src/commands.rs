use std::collections::BTreeMap;

use anyhow::Result;
use serde_json::{json, Value};

use semicross_core::algebra::SemicrossedPoly;
use semicross_core::dynamics::{enumerate_cycles, format_word, Coordinates, Point};
use semicross_core::envelope::envelope_report;
use semicross_core::extension::{
    backward_orbit_view, extend_system, lift_point, project_p, strongly_connected_components,
    transfer_check, BiLassoPoint,
};
use semicross_core::representations::{
    build_pi_x, crossed_norm, has_aperiodic_points, semicrossed_norm, verify_nest_truncation,
    verify_nest_truncation_two_sided, verify_norm_lemmas, LemmaSuite, NormReport,
    DEFAULT_SEPARATION_CAP,
};
use semicross_core::Error;

use crate::config::{describe_point, normalized, ConfigError, System, SystemPoint};
use crate::report::Diagnostics;

/// Truncation sizes of the nest checks (one-sided, two-sided half-width).
const NEST_K: usize = 16;
const NEST_K_TWO_SIDED: usize = 8;
const COVARIANCE_K: usize = 64;
const ORBIT_DEPTH: usize = 4;

pub struct Outcome {
    pub results: Value,
    pub diagnostics: Diagnostics,
    /// False when a truncation history did not settle or a check failed.
    pub converged: bool,
}

impl Outcome {
    fn exact(results: Value) -> Self {
        Outcome {
            results,
            diagnostics: Diagnostics::default(),
            converged: true,
        }
    }
}

pub fn element<'a>(system: &'a System, file: &str, name: &str) -> Result<&'a SemicrossedPoly> {
    system.elements.get(name).ok_or_else(|| {
        let known: Vec<&str> = system.elements.keys().map(|s| s.as_str()).collect();
        ConfigError {
            file: file.to_string(),
            location: format!("elements.{name}"),
            message: format!("no such element (known: {})", known.join(", ")),
        }
        .into()
    })
}

pub fn validate(system: &System) -> Outcome {
    Outcome::exact(normalized(system))
}

pub fn analyze(system: &System) -> Outcome {
    let g = &system.graph;
    let transfer = transfer_check(g);
    let all_agree = transfer.iter().all(|r| r.agreement);
    Outcome::exact(json!({
        "alphabet_size": g.alphabet_size(),
        "strongly_connected_components": strongly_connected_components(g),
        "aperiodic_points": has_aperiodic_points(g),
        "transfer": transfer,
        "all_agree": all_agree,
        "diagnostic": "exact",
    }))
}

fn orbit_strings(x: &BiLassoPoint) -> Vec<String> {
    backward_orbit_view(x, ORBIT_DEPTH)
        .iter()
        .map(|p| p.to_string())
        .collect()
}

pub fn extend(system: &System) -> Result<Outcome> {
    let g = &system.graph;
    let ext = extend_system(g);
    let mut fibers = BTreeMap::new();
    for (name, point) in &system.points {
        let entry = match point {
            SystemPoint::OneSided(Point::Lasso(x)) => {
                let lift = lift_point(g, x);
                json!({
                    "point": x.to_string(),
                    "class": x.classify(),
                    "lift": lift.to_string(),
                    "lift_class": lift.classify(),
                    "projection_matches": project_p(&lift) == *x,
                    "backward_orbit": orbit_strings(&lift),
                })
            }
            SystemPoint::OneSided(p) => json!({
                "point": describe_point(point),
                "class": p.classify(64),
                "prefix": format_word(&p.symbols(1, 32)?),
                "lift": null,
            }),
            SystemPoint::TwoSided(x) => json!({
                "point": x.to_string(),
                "class": x.classify(),
                "coordinates_repeat_finitely": x.classify().coordinates_repeat_finitely(),
                "projection": project_p(x).to_string(),
                "backward_orbit": orbit_strings(x),
            }),
        };
        fibers.insert(name.clone(), entry);
    }
    Ok(Outcome::exact(json!({
        "extension": {
            "alphabet_size": ext.alphabet_size(),
            "two_sided": ext.is_two_sided(),
            "same_transition_matrix": ext.same_edges(g),
        },
        "fibers": fibers,
        "diagnostic": "exact",
    })))
}

fn norm_outcome(report: NormReport) -> Result<Outcome> {
    let mut diagnostics = Diagnostics {
        lambda_resolution: report.b.as_ref().map(|b| b.resolution),
        caps_hit: report.caps_hit.clone(),
        ..Diagnostics::default()
    };
    diagnostics
        .k_history
        .insert("norm".into(), report.estimate.history.clone());
    diagnostics
        .k_history
        .insert("sample".into(), report.sample_history.clone());
    let a: Vec<(usize, f64)> = report
        .a_history
        .iter()
        .filter_map(|s| s.value.map(|v| (s.k, v)))
        .collect();
    if !a.is_empty() {
        diagnostics.k_history.insert("A".into(), a);
    }
    Ok(Outcome {
        converged: report.estimate.converged,
        results: serde_json::to_value(&report)?,
        diagnostics,
    })
}

pub fn norm(system: &System, f: &SemicrossedPoly) -> Result<Outcome> {
    norm_outcome(semicrossed_norm(f, &system.policy)?)
}

pub fn crossed(system: &System, f: &SemicrossedPoly) -> Result<Outcome> {
    norm_outcome(crossed_norm(&f.embed(), &system.policy)?)
}

/// `pi_x(f) pi_x(U)` against `pi_x(U (f o phi))`: the diagonal times the
/// shift is exact under truncation, so the two must agree entrywise.
fn covariance(system: &System, points: &[(String, Point)]) -> Result<Value> {
    let g = &system.graph;
    let u = SemicrossedPoly::u(g.clone());
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for (fname, f) in &system.functions {
        let lhs_poly = SemicrossedPoly::monomial(0, f.clone());
        let rhs_poly = SemicrossedPoly::monomial(1, f.compose_shift(1));
        for (pname, x) in points {
            let lhs = build_pi_x(&lhs_poly, x, COVARIANCE_K)? * build_pi_x(&u, x, COVARIANCE_K)?;
            let rhs = build_pi_x(&rhs_poly, x, COVARIANCE_K)?;
            let diff = (lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
            worst = worst.max(diff);
            rows.push(json!({ "function": fname, "point": pname, "max_entry_diff": diff }));
        }
    }
    Ok(json!({ "k": COVARIANCE_K, "checks": rows, "max_entry_diff": worst, "exact": worst == 0.0 }))
}

pub fn verify(system: &System) -> Result<Outcome> {
    let g = &system.graph;
    let policy = &system.policy;
    let cycles = enumerate_cycles(g, policy.max_period, policy.cycle_cap)?;

    let mut one_sided: Vec<(String, Point)> = cycles
        .iter()
        .map(|c| (format!("cycle {c}"), c.point().into()))
        .collect();
    let mut two_sided = Vec::new();
    for (name, p) in &system.points {
        match p {
            SystemPoint::OneSided(x) => {
                if let Point::Lasso(l) = x {
                    two_sided.push(lift_point(g, l));
                }
                one_sided.push((name.clone(), x.clone()));
            }
            SystemPoint::TwoSided(x) => two_sided.push(x.clone()),
        }
    }
    let suite = LemmaSuite {
        cycles: cycles.clone(),
        points: two_sided,
        k: policy.k_max,
        tolerance: 5e-2,
        policy: policy.clone(),
    };

    let mut lemmas = BTreeMap::new();
    let mut violations = 0;
    for (name, f) in &system.elements {
        let r = verify_norm_lemmas(f, &suite)?;
        violations += r.violations;
        lemmas.insert(name.clone(), r);
    }

    let mut nest = BTreeMap::new();
    for (name, p) in &system.points {
        let r = match p {
            SystemPoint::OneSided(x) => {
                verify_nest_truncation(g, x, NEST_K, DEFAULT_SEPARATION_CAP)
            }
            SystemPoint::TwoSided(x) => {
                verify_nest_truncation_two_sided(g, x, NEST_K_TWO_SIDED, DEFAULT_SEPARATION_CAP)
            }
        };
        let entry = match r {
            Ok(report) => json!({ "verified": report.chain_verified, "report": report }),
            Err(e @ Error::SeparationFailure { .. }) => {
                json!({ "verified": false, "rejected": e.to_string() })
            }
            Err(e) => return Err(e.into()),
        };
        nest.insert(name.clone(), entry);
    }

    let covariance = covariance(system, &one_sided)?;
    let diagnostics = Diagnostics {
        lambda_resolution: Some(lambda_resolution(policy.lambda_grid, policy.refine_steps)),
        ..Diagnostics::default()
    };
    Ok(Outcome {
        converged: violations == 0,
        results: json!({
            "norm_lemmas": lemmas,
            "lemma_violations": violations,
            "nest": nest,
            "covariance": covariance,
        }),
        diagnostics,
    })
}

/// Half-width of the refined lambda bracket for period 1, the coarsest
/// grid any cycle gets.
fn lambda_resolution(grid: usize, steps: usize) -> f64 {
    let cell = std::f64::consts::TAU / grid as f64;
    cell * 0.618_033_988_749_894_9_f64.powi(steps as i32)
}

pub fn envelope(system: &System) -> Result<Outcome> {
    let elements: Vec<(String, SemicrossedPoly)> = system
        .elements
        .iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    let report = envelope_report(&system.id, &elements, &system.policy)?;
    let mut diagnostics = Diagnostics::default();
    for row in &report.embedding_sweep {
        diagnostics
            .k_history
            .insert(format!("gap:{}", row.element), row.gap_history.clone());
    }
    Ok(Outcome {
        converged: true,
        results: serde_json::to_value(&report)?,
        diagnostics,
    })
}

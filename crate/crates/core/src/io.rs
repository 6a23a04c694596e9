//! JSON documents: matchings, critical reports and solver results.
//!
//! Faces are written as lists of vertex labels. Labels that parse as
//! integers are emitted as JSON numbers, other labels as strings; both forms
//! are accepted on input.

use serde_json::{json, Map, Value};

use crate::complex::{ArcId, FaceId, HasseDiagram, SimplicialComplex};
use crate::error::FormatError;
use crate::homology::BettiVector;
use crate::matching::{CriticalReport, DiscreteMorseFunction, MorseMatching};
use crate::solver::{SolveResult, SolveStatus, SolverConfig};

/// Version of every top-level document written by the CLI.
pub const SCHEMA_VERSION: u32 = 1;

fn label_value(label: &str) -> Value {
    match label.parse::<u64>() {
        Ok(v) if v.to_string() == label => json!(v),
        _ => json!(label),
    }
}

pub fn face_json(complex: &SimplicialComplex, face: FaceId) -> Value {
    Value::Array(complex.face_labels(face).iter().map(|l| label_value(l)).collect())
}

fn face_from_json(complex: &SimplicialComplex, value: &Value) -> Result<FaceId, FormatError> {
    let items = value.as_array().ok_or(FormatError::Shape("a face as a list of vertices"))?;
    let labels = items
        .iter()
        .map(|v| match v {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) if n.is_u64() => Ok(n.to_string()),
            _ => Err(FormatError::Shape("vertex labels as strings or non-negative integers")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    complex.face_id_by_labels(&labels).ok_or(FormatError::UnknownFace(labels))
}

/// `[{"upper": [...], "lower": [...]}, ...]` in arc order.
pub fn matching_json(complex: &SimplicialComplex, h: &HasseDiagram, matching: &MorseMatching) -> Value {
    Value::Array(
        matching
            .arcs()
            .iter()
            .map(|&a| {
                let arc = h.arc(a);
                json!({ "upper": face_json(complex, arc.upper), "lower": face_json(complex, arc.lower) })
            })
            .collect(),
    )
}

/// Reads a matching document into arc ids. Only the pairs are checked to be
/// arcs; matching and acyclicity are left to the caller.
pub fn parse_matching(complex: &SimplicialComplex, h: &HasseDiagram, text: &str) -> Result<Vec<ArcId>, FormatError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    // a full result document carries the matching under "matching"
    let list = match &doc {
        Value::Object(map) => map.get("matching").ok_or(FormatError::Shape("a list of pairs"))?,
        other => other,
    };
    let pairs = list.as_array().ok_or(FormatError::Shape("a list of pairs"))?;
    pairs
        .iter()
        .map(|pair| {
            let upper = face_from_json(complex, pair.get("upper").ok_or(FormatError::Shape("an \"upper\" face"))?)?;
            let lower = face_from_json(complex, pair.get("lower").ok_or(FormatError::Shape("a \"lower\" face"))?)?;
            h.find_arc(upper, lower).ok_or_else(|| FormatError::NotAnArc {
                upper: complex.face_labels(upper),
                lower: complex.face_labels(lower),
            })
        })
        .collect()
}

pub fn report_json(complex: &SimplicialComplex, report: &CriticalReport) -> Value {
    json!({
        "c": report.total,
        "counts": report.counts,
        "critical": report.critical.iter().map(|&f| face_json(complex, f)).collect::<Vec<_>>(),
    })
}

pub fn function_json(complex: &SimplicialComplex, function: &DiscreteMorseFunction) -> Value {
    Value::Array(
        function
            .values
            .iter()
            .enumerate()
            .map(|(f, v)| json!({ "face": face_json(complex, f), "value": v }))
            .collect(),
    )
}

pub fn betti_json(vectors: &[BettiVector]) -> Value {
    Value::Array(
        vectors
            .iter()
            .map(|b| json!({ "field": b.field, "betti": b.betti, "total": b.total() }))
            .collect(),
    )
}

pub fn status_json(status: &SolveStatus) -> Value {
    let mut map = Map::new();
    map.insert("name".into(), json!(status.name()));
    if let SolveStatus::Feasible { gap } = status {
        map.insert("gap".into(), json!(gap));
    }
    Value::Object(map)
}

fn finite_or_null(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

/// The `solve` document.
pub fn result_json(complex: &SimplicialComplex, result: &SolveResult, config: &SolverConfig) -> Value {
    let h = HasseDiagram::new(complex);
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": "solve",
        "status": status_json(&result.status),
        "n": complex.num_faces(),
        "m": h.num_arcs(),
        "d": complex.dim(),
        "c": result.report.total,
        "counts": result.report.counts,
        "matching_size": result.matching.len(),
        "objective": result.objective,
        "dual_bound": finite_or_null(result.dual_bound),
        "betti_bounds": result.betti,
        "critical_lower_bound": result.critical_bound,
        "matching": matching_json(complex, &h, &result.matching),
        "critical": report_json(complex, &result.report)["critical"],
        "stats": {
            "nodes": result.stats.nodes,
            "depth": result.stats.max_depth,
            "time": result.stats.time_seconds,
            "beta": result.betti_bound,
            "c": result.report.total,
            "root_bound": finite_or_null(result.stats.root_bound),
            "cycle_cuts": result.stats.cycle_cuts,
            "free_face_cuts": result.stats.free_face_cuts,
            "lazy_cuts": result.stats.lazy_cuts,
            "gomory_cuts": result.stats.gomory_cuts,
            "cuts_added": result.stats.cuts_added(),
            "separation_rounds": result.stats.separation_rounds,
            "lp_iterations": result.stats.lp_iterations,
            "heuristic_calls": result.stats.heuristic_calls,
            "heuristic_improvements": result.stats.heuristic_improvements,
        },
        "config": {
            "fields": config.fields,
            "separation_rounds": config.separation_rounds,
            "heuristic_frequency": config.heuristic_frequency,
            "max_cuts": config.max_cuts,
            "branching": config.branching,
            "gomory": config.gomory,
            "separate": config.separate,
            "free_face_cuts": config.free_face_cuts,
            "time_limit": config.time_limit.map(|t| t.as_secs_f64()),
            "node_limit": config.node_limit,
            "split_components": config.split_components,
        },
    })
}

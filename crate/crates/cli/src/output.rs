//! Writers for the output formats. Every writer returns the full file
//! contents; output is deterministic for a given run.

use std::fmt::Write as _;

use relclust::eval::VMeasure;
use relclust::{Dendrogram, SpanningTree};
use serde::Serialize;

use crate::error::Result;

const SIGNIFICANT_DIGITS: usize = 12;

/// Formats a real with 12 significant digits, dropping trailing zeros.
/// Exponent form is used below 1e-5 and from 1e12 up.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn rounded(x: f64) -> f64 {
    format_real(x).parse().unwrap_or(x)
}

/// `rep_a,rep_b,distance,level,order`, one row per record in `order` order.
pub fn linkage_csv(dendrogram: &Dendrogram) -> String {
    let mut out = String::from("rep_a,rep_b,distance,level,order\n");
    for r in dendrogram.records() {
        let _ = writeln!(out, "{},{},{},{},{}", r.a, r.b, format_real(r.distance), r.level, r.order);
    }
    out
}

#[derive(Serialize)]
struct LinkageJson {
    rep_a: usize,
    rep_b: usize,
    distance: f64,
    level: usize,
    order: usize,
}

#[derive(Serialize)]
struct EventJson {
    level: usize,
    inputs: Vec<usize>,
    output: usize,
    linkages: Vec<LinkageJson>,
}

/// Array with one object per merge event.
pub fn events_json(dendrogram: &Dendrogram) -> Result<String> {
    let events: Vec<EventJson> = dendrogram
        .events()
        .iter()
        .map(|e| EventJson {
            level: e.level,
            inputs: e.inputs.clone(),
            output: e.output,
            linkages: e
                .linkages
                .iter()
                .map(|r| LinkageJson {
                    rep_a: r.a,
                    rep_b: r.b,
                    distance: rounded(r.distance),
                    level: r.level,
                    order: r.order,
                })
                .collect(),
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&events)?;
    s.push('\n');
    Ok(s)
}

/// Graphviz digraph: leaves `o<i>`, one node `m<e>` per merge event labelled
/// `L<level>:<distance>`, where the distance is the event's largest linkage.
pub fn dot(dendrogram: &Dendrogram) -> String {
    let n = dendrogram.n();
    let mut out = String::from("digraph dendrogram {\n  rankdir=BT;\n  node [shape=box];\n");
    for i in 0..n {
        let _ = writeln!(out, "  o{i} [label=\"{i}\", shape=ellipse];");
    }
    // Node currently standing for the cluster with this smallest member.
    let mut node: Vec<String> = (0..n).map(|i| format!("o{i}")).collect();
    for (e, (event, reps)) in dendrogram.events().iter().zip(dendrogram.event_input_reps()).enumerate() {
        let height = event
            .linkages
            .iter()
            .map(|r| r.distance)
            .fold(f64::NEG_INFINITY, f64::max);
        let _ = writeln!(out, "  m{e} [label=\"L{}:{}\"];", event.level, format_real(height));
        for &r in &reps {
            let _ = writeln!(out, "  {} -> m{e};", node[r]);
        }
        node[reps[0]] = format!("m{e}");
    }
    out.push_str("}\n");
    out
}

/// External validity of a cut against ground truth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metrics {
    pub nmi: f64,
    pub ari: f64,
    pub v_measure: f64,
    pub k: usize,
    pub criterion: String,
    pub strategy: String,
}

impl Metrics {
    pub fn new(nmi: f64, ari: f64, v: VMeasure, k: usize, criterion: &str, strategy: &str) -> Self {
        Metrics {
            nmi,
            ari,
            v_measure: v.v_measure,
            k,
            criterion: criterion.to_owned(),
            strategy: strategy.to_owned(),
        }
    }
}

pub fn metrics_json(metrics: &Metrics) -> Result<String> {
    let rounded_metrics = Metrics {
        nmi: rounded(metrics.nmi),
        ari: rounded(metrics.ari),
        v_measure: rounded(metrics.v_measure),
        ..metrics.clone()
    };
    let mut s = serde_json::to_string_pretty(&rounded_metrics)?;
    s.push('\n');
    Ok(s)
}

/// `i,j,weight` rows followed by a `total,,<weight>` row.
pub fn mst_csv(tree: &SpanningTree) -> String {
    let mut out = String::from("i,j,weight\n");
    for e in tree.edges() {
        let _ = writeln!(out, "{},{},{}", e.i, e.j, format_real(e.weight));
    }
    let _ = writeln!(out, "total,,{}", format_real(tree.total_weight()));
    out
}

/// `object,join_level,score`.
pub fn outlier_csv(dendrogram: &Dendrogram, scores: &[f64]) -> String {
    let mut out = String::from("object,join_level,score\n");
    for (i, (&level, &score)) in dendrogram.join_levels().iter().zip(scores).enumerate() {
        let _ = writeln!(out, "{i},{level},{}", format_real(score));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_real(81.0), "81");
        assert_eq!(format_real(0.25), "0.25");
        assert_eq!(format_real(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_real(2.0 / 3.0 * 1000.0), "666.666666667");
        assert_eq!(format_real(1.5e-7), "1.5e-7");
        assert_eq!(format_real(123456789012345.0), "1.23456789012e14");
        assert_eq!(format_real(-2.5), "-2.5");
        assert_eq!(format_real(0.0), "0");
    }
}

//! JSON report (schema "1").

use serde::{Serialize, Serializer};

use crate::bounds::{Analysis, StateStats};
use crate::stategraph::Smoothing;

pub const SCHEMA_VERSION: &str = "1";

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn ser_round<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_f64(round12(*x) + 0.0),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct StateJson {
    pub vertices: usize,
    pub edges: usize,
    pub reduced_edges: usize,
    pub components: usize,
    pub chi_minus: u64,
    pub adequate: bool,
}

impl From<&StateStats> for StateJson {
    fn from(s: &StateStats) -> Self {
        Self {
            vertices: s.vertices,
            edges: s.edges,
            reduced_edges: s.reduced_edges,
            components: s.components,
            chi_minus: s.chi_minus,
            adequate: s.adequate,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct StatesJson {
    #[serde(rename = "A")]
    pub a: Option<StateJson>,
    #[serde(rename = "B")]
    pub b: Option<StateJson>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BoundsJson {
    pub thm1_applicable: bool,
    pub thm1_state: Option<&'static str>,
    #[serde(serialize_with = "ser_round")]
    pub thm1_lower_raw_a: Option<f64>,
    #[serde(serialize_with = "ser_round")]
    pub thm1_lower_raw_b: Option<f64>,
    #[serde(serialize_with = "ser_round")]
    pub thm1_lower_raw: Option<f64>,
    #[serde(serialize_with = "ser_round")]
    pub thm1_lower: Option<f64>,
    pub thm2_applicable: bool,
    #[serde(serialize_with = "ser_round")]
    pub thm2_lower_raw: Option<f64>,
    #[serde(serialize_with = "ser_round")]
    pub thm2_lower: Option<f64>,
    #[serde(serialize_with = "ser_round")]
    pub thm2_upper: Option<f64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ReportJson {
    pub schema_version: &'static str,
    pub input: String,
    pub normalized_slopes: Vec<String>,
    pub class: &'static str,
    pub crossings: Option<usize>,
    pub twist_number: Option<usize>,
    pub components: Option<usize>,
    pub q_half: Option<usize>,
    pub states: StatesJson,
    pub ec_bound: Option<u8>,
    pub bounds: BoundsJson,
    pub hyperbolicity: &'static str,
    pub mirrored: bool,
}

impl From<&Analysis> for ReportJson {
    fn from(a: &Analysis) -> Self {
        let d = a.diagram.as_ref();
        let state_name = |s: Smoothing| match s {
            Smoothing::A => "A",
            Smoothing::B => "B",
        };
        Self {
            schema_version: SCHEMA_VERSION,
            input: a.input.clone(),
            normalized_slopes: a.slopes.iter().map(|q| q.to_string()).collect(),
            class: a.class.name(),
            crossings: d.map(|d| d.crossings),
            twist_number: d.map(|d| d.twist_number),
            components: d.map(|d| d.components),
            q_half: d.map(|d| d.q_half),
            states: StatesJson {
                a: d.map(|d| (&d.a.stats).into()),
                b: d.map(|d| (&d.b.stats).into()),
            },
            ec_bound: a.ec_bound,
            bounds: BoundsJson {
                thm1_applicable: a.thm1.applicable,
                thm1_state: a.thm1.state.map(state_name),
                thm1_lower_raw_a: a.thm1.raw_a,
                thm1_lower_raw_b: a.thm1.raw_b,
                thm1_lower_raw: a.thm1.raw,
                thm1_lower: a.thm1.lower,
                thm2_applicable: a.thm2.applicable,
                thm2_lower_raw: a.thm2.lower_raw,
                thm2_lower: a.thm2.lower,
                thm2_upper: a.thm2.upper,
            },
            hyperbolicity: a.hyperbolicity.name(),
            mirrored: a.mirrored,
        }
    }
}

impl ReportJson {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

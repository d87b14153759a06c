//! The JSON report documents printed by the command-line interface.
//!
//! Reports are plain data. Field order is fixed by the struct definitions,
//! rationals are serialized as `num/den` strings, and every float goes
//! through [`Sig12`], so a report is byte-identical across runs, platforms,
//! and worker counts given the same inputs.

use serde::{Serialize, Serializer};

use crate::check::CheckReport;

/// A float serialized after rounding to 12 significant digits.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Sig12(pub f64);

impl Serialize for Sig12 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(round_sig12(self.0))
    }
}

/// Round to 12 significant decimal digits.
pub fn round_sig12(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().expect("rounded floats reparse")
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightEntry {
    pub symbol: String,
    /// Exact rational as `num/den`.
    pub weight: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberEntry {
    pub anchor: String,
    pub weight: String,
    pub branches: Vec<WeightEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasuresSection {
    pub p_minus: Vec<WeightEntry>,
    pub fibers: Vec<FiberEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropySection {
    pub positive_alphabet: Sig12,
    pub negative_alphabet: Sig12,
    pub ks_entropy: Sig12,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceEntry {
    pub n: u32,
    pub k: u32,
    pub words: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enumerated: Option<Sig12>,
    pub closed_form: Sig12,
    pub gap: Sig12,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentitySection {
    pub ks_entropy: Sig12,
    pub folding_plus_negative_entropy: Sig12,
    pub residual: Sig12,
}

#[derive(Clone, Debug, Serialize)]
pub struct FoldingSection {
    pub fiber_average: Sig12,
    pub cylinder_difference: Sig12,
    pub residual: Sig12,
    pub identity: IdentitySection,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub verdict: String,
    pub cases: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl From<&CheckReport> for CheckEntry {
    fn from(report: &CheckReport) -> CheckEntry {
        CheckEntry {
            name: report.name.to_string(),
            verdict: report.verdict.to_string(),
            cases: report.cases,
            note: report.counterexample.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockEntropyEntry {
    pub samples: u64,
    pub block: u32,
    pub estimate: Sig12,
    pub std_error: Sig12,
    pub analytic: Sig12,
    pub abs_error: Sig12,
    pub distinct_words: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BandCountEntry {
    pub symbol: String,
    pub count: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FoldingEstimateEntry {
    pub samples: u64,
    pub estimate: Sig12,
    pub std_error: Sig12,
    pub analytic: Sig12,
    pub abs_error: Sig12,
    pub band_counts: Vec<BandCountEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonteCarloSection {
    pub seed: u64,
    pub block_entropy: BlockEntropyEntry,
    pub folding_entropy: FoldingEstimateEntry,
}

#[derive(Clone, Debug, Serialize)]
pub struct PreimagesSection {
    pub point: [Sig12; 2],
    pub band: String,
    pub count: usize,
    pub points: Vec<[Sig12; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WindowEntry {
    pub lo: i64,
    pub hi: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ItinerarySection {
    pub point: [Sig12; 2],
    pub window: WindowEntry,
    pub symbols: Vec<String>,
    pub display: String,
}

/// The single JSON document a command prints on standard output.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub label: Option<String>,
    pub command: String,
    pub units: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measures: Option<MeasuresSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy: Option<EntropySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence: Option<Vec<ConvergenceEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub folding: Option<FoldingSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<CheckEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<MonteCarloSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preimages: Option<PreimagesSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub itinerary: Option<ItinerarySection>,
}

impl Report {
    pub fn new(label: Option<&str>, command: &str, units: &str) -> Report {
        Report {
            label: label.map(str::to_string),
            command: command.to_string(),
            units: units.to_string(),
            measures: None,
            entropy: None,
            convergence: None,
            folding: None,
            checks: None,
            monte_carlo: None,
            preimages: None,
            itinerary: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only serializable data")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        let v = std::f64::consts::LN_2;
        assert_eq!(round_sig12(v), 0.693147180560);
        assert_eq!(round_sig12(0.0), 0.0);
        assert_eq!(round_sig12(-1.0 / 3.0), -0.333333333333);
    }

    #[test]
    fn empty_sections_are_omitted() {
        let report = Report::new(Some("x"), "entropy", "nats");
        let json = report.to_json();
        assert!(json.contains("\"command\": \"entropy\""));
        assert!(!json.contains("monte_carlo"));
    }
}

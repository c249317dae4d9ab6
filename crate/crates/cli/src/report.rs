//! JSON report shapes. Every report deserializes back into its own type.

use grassmetric_core::axioms::{AxiomReport, SampleConfig, Verdict};
use grassmetric_core::DualAngleCheck;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueReport {
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecomposeEntry {
    pub lambdas: Vec<f64>,
    pub projection: Vec<f64>,
    /// Component orthogonal to the subspace.
    pub residual: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub decompositions: Vec<DecomposeEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub distances: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisReport {
    pub basis: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualReport {
    #[serde(flatten)]
    pub check: DualAngleCheck,
    /// `gap <= tol`.
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomsReport {
    pub form: String,
    pub config: SampleConfig,
    pub verdict: Verdict,
    pub reports: Vec<AxiomReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinorEntry {
    pub n: usize,
    /// 1-based column indices.
    pub idx: Vec<usize>,
    pub minor: f64,
    pub cominor: f64,
    pub sign: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaplaceEntry {
    pub n: usize,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinorReport {
    pub m: usize,
    pub determinant: f64,
    pub orthogonality_defect: f64,
    pub max_residual: f64,
    pub minors: Vec<MinorEntry>,
    pub laplace: Vec<LaplaceEntry>,
}

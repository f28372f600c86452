use classical_protocols::ClassicalError;
use graph_core::GraphError;
use paley::PaleyError;
use prob_model::ProbError;
use quantum_protocols::QuantumError;
use recon_sim::SimError;
use relation::RelationError;
use std::fmt;

/// Failure with the process exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2.
    Params(String),
    /// Exit 3.
    Inconsistent(String),
    /// Exit 4.
    Cap(String),
    /// Exit 5.
    Exhausted(String),
    /// Exit 1.
    Io(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Params(_) => 2,
            CliError::Inconsistent(_) => 3,
            CliError::Cap(_) => 4,
            CliError::Exhausted(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Params(m)
            | CliError::Inconsistent(m)
            | CliError::Cap(m)
            | CliError::Exhausted(m)
            | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Params(e.to_string())
    }
}

impl From<RelationError> for CliError {
    fn from(e: RelationError) -> Self {
        match e {
            RelationError::InconsistentRelation(_) => CliError::Inconsistent(e.to_string()),
            _ => CliError::Params(e.to_string()),
        }
    }
}

impl From<ProbError> for CliError {
    fn from(e: ProbError) -> Self {
        match e {
            ProbError::T0Violated(_) => CliError::Inconsistent(e.to_string()),
            _ => CliError::Params(e.to_string()),
        }
    }
}

impl From<ClassicalError> for CliError {
    fn from(e: ClassicalError) -> Self {
        let m = e.to_string();
        match e {
            ClassicalError::SearchExhausted(_) => CliError::Exhausted(m),
            ClassicalError::CapExceeded(_) => CliError::Cap(m),
            ClassicalError::ConditionsFail(_) => CliError::Inconsistent(m),
            ClassicalError::InvalidParams(_) => CliError::Params(m),
        }
    }
}

impl From<QuantumError> for CliError {
    fn from(e: QuantumError) -> Self {
        let m = e.to_string();
        match e {
            QuantumError::InvalidParams(_) | QuantumError::Malformed(_) => CliError::Params(m),
            QuantumError::ConstructionFailed(_) | QuantumError::NoFaithfulStart => CliError::Exhausted(m),
            QuantumError::Prob(p) => p.into(),
            _ => CliError::Inconsistent(m),
        }
    }
}

impl From<PaleyError> for CliError {
    fn from(e: PaleyError) -> Self {
        let m = e.to_string();
        match e {
            PaleyError::NotPrime(_) | PaleyError::NotOneModFour(_) => CliError::Params(m),
            PaleyError::Quantum(q) => q.into(),
            _ => CliError::Inconsistent(m),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        let m = e.to_string();
        match e {
            SimError::NotNormalized | SimError::NotT0 => CliError::Inconsistent(m),
            SimError::CapExceeded(_) => CliError::Cap(m),
            SimError::EmptyLog => CliError::Params(m),
            SimError::Prob(p) => p.into(),
            SimError::Csv(_) | SimError::Io(_) => CliError::Io(m),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Params(format!("bad JSON input: {e}"))
    }
}

use std::fmt;

use graph_hodge::infinite::InfiniteError;
use graph_hodge::{GraphError, OperatorError, SpectraError};

/// A failed run, by exit code.
#[derive(Debug)]
pub enum Failure {
    /// 1: a certificate or check came out false.
    Verdict(String),
    /// 2: unreadable or invalid input.
    Input(String),
    /// 3: the numerics could not deliver a reliable answer.
    Numerical(String),
    /// 4: the input is valid but the analysis does not apply.
    Precondition(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Verdict(_) => 1,
            Failure::Input(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Precondition(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (Failure::Verdict(m) | Failure::Input(m) | Failure::Numerical(m) | Failure::Precondition(m)) = self;
        f.write_str(m)
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<OperatorError> for Failure {
    fn from(e: OperatorError) -> Self {
        match e {
            OperatorError::TooLarge { .. } => Failure::Precondition(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<SpectraError> for Failure {
    fn from(e: SpectraError) -> Self {
        match e {
            SpectraError::Graph(g) => g.into(),
            SpectraError::Operator(o) => o.into(),
            SpectraError::BadTolerance(_) => Failure::Input(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<InfiniteError> for Failure {
    fn from(e: InfiniteError) -> Self {
        use InfiniteError as E;
        match e {
            E::UnknownFamily(_) | E::BadParameter(_) | E::BadRuleValue { .. } | E::Expr(_) | E::Parse(_) => {
                Failure::Input(e.to_string())
            }
            E::Graph(g) => g.into(),
            E::Operator(o) => o.into(),
            E::Spectra(s) => s.into(),
            E::WitnessMismatch { .. } | E::NoPositiveGap { .. } => Failure::Verdict(e.to_string()),
            E::WindowTooSmall { .. }
            | E::ChordsUnsupported
            | E::NonUnitMass { .. }
            | E::SupportTooCloseToBoundary { .. } => Failure::Precondition(e.to_string()),
        }
    }
}

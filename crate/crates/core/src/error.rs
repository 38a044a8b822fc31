use thiserror::Error;

/// Errors shared across the crate.
///
/// The variants map onto the CLI exit code classes: parse/validation
/// failures, hypothesis violations, exceeded budgets and internal
/// invariant faults.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed multiplication table: {0}")]
    MalformedTable(String),

    #[error("closure exceeds the configured order cap {cap} (reached {reached})")]
    SizeLimit { cap: usize, reached: usize },

    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("the given elements do not generate the source group")]
    DoesNotGenerate,

    #[error("subgroup is not normal: element {elem} conjugated by {by} leaves the subgroup")]
    NotNormal { elem: usize, by: usize },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

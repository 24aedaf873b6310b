use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which inequality of the α ≥ 3 hypothesis `2β > max{(α−3)(g−1)+eα, (g−1)+eα}` failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum CondBranch {
    /// `2β > (α−3)(g−1) + eα`
    #[serde(rename = "(alpha-3)(g-1)+e*alpha")]
    Budget,
    /// `2β > (g−1) + eα`
    #[serde(rename = "(g-1)+e*alpha")]
    Genus,
}

impl std::fmt::Display for CondBranch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CondBranch::Budget => f.write_str("(alpha-3)(g-1)+e*alpha"),
            CondBranch::Genus => f.write_str("(g-1)+e*alpha"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ruled surface (g = {g}, e = {e}): need g >= 0 and e >= 1")]
    InvalidSurface { g: String, e: String },

    #[error("invalid polarization alpha = {alpha}, beta = {beta} on e = {e}: need alpha >= 1 and beta > alpha*e")]
    InvalidPolarization {
        alpha: String,
        beta: String,
        e: String,
    },

    #[error("condition 2*beta > max{{(alpha-3)(g-1)+e*alpha, (g-1)+e*alpha}} violated on branch(es) {}",
        .branches.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(", "))]
    ConditionViolated { branches: Vec<CondBranch> },

    #[error("{0} requires alpha >= {1}")]
    AlphaTooSmall(&'static str, i64),

    #[error("class carries a twist label {0}; cohomology over P^1 needs an untwisted class")]
    TwistedClass(String),

    #[error("odd numerator {numerator} in exact halving ({context})")]
    NonIntegral {
        context: &'static str,
        numerator: String,
    },

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

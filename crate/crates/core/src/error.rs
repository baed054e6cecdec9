use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation requires a nonempty polyhedron")]
    EmptyOperand,

    #[error("feasible region is empty")]
    EmptyRegion,

    #[error("improper function: {0}")]
    ImproperFunction(String),

    /// The sum has an empty effective domain.
    #[error("improper sum: the function domain does not meet the set")]
    ImproperSum,

    #[error("point lies outside the function domain")]
    PointOutsideDomain,

    #[error("point is not a solution of the system")]
    PointNotFeasible,

    #[error("no solution of the system lies in the objective domain")]
    HiddenAssumptionFails,

    #[error("premise violated: {0}")]
    PremiseViolated(&'static str),

    #[error("the system is inconsistent")]
    InconsistentSystem,

    #[error("resource limit exceeded: {what} (limit {limit})")]
    ResourceLimit { what: &'static str, limit: usize },
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

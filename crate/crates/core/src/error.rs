use thiserror::Error;

use crate::setfam::{SubsetMask, Verdict};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground set of {0} points is outside 1..={max}", max = crate::setfam::MAX_POINTS)]
    BadGround(usize),
    #[error("point {point} is out of range for a ground set of {n} points")]
    OutOfRangePoint { point: i64, n: usize },
    #[error("ground set of {n} points exceeds the enumeration limit of {max}")]
    GroundTooLarge { n: usize, max: usize },
    #[error("expected a single point, the defining intersection is {0}")]
    NotSingleton(SubsetMask),
    #[error("target set is empty")]
    EmptyTarget,
    #[error("set-valued map has an empty value at point {0}")]
    EmptyValue(usize),
    #[error("the empty set has no plus-set")]
    EmptySet,
    #[error("map is not surjective: codomain point {0} has an empty fiber")]
    NotSurjective(usize),
    #[error("family is not linked: {0} and {1} are disjoint")]
    NotLinked(SubsetMask, SubsetMask),
    #[error("set {0} is not closed in the domain")]
    NotClosed(SubsetMask),
    #[error("component {component} meets values {first} and {second}; no continuous extension exists")]
    NotExtendable {
        component: SubsetMask,
        first: usize,
        second: usize,
    },
    #[error("precondition failed: {0}")]
    PreconditionFailed(Box<Verdict>),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(Box<Verdict>),
    #[error("nearest-point map failed at point {point}: intersection {set}")]
    InternalXiFailure { point: usize, set: SubsetMask },
    #[error("internal postcondition failed: {0}")]
    Postcondition(String),
    #[error("assignment is not a lift at domain point {0}")]
    NotALift(usize),
    #[error("invalid value: {0}")]
    Invariant(String),
}

use crate::rat::Rat;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("torus rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("radius must be positive, got {0}")]
    BadRadius(Rat),
    #[error("map is not a delta-homomorphism: defect {defect} >= {delta}")]
    NotApproxHom { defect: Rat, delta: Rat },
    #[error("homomorphism correction failed: nearest character at sup-distance {sup_dist} >= 2*{delta}")]
    CorrectionFailed { sup_dist: Rat, delta: Rat },
    #[error("base set is empty")]
    EmptyBase,
    #[error("candidate budget exceeded: {evaluated} candidates evaluated, budget {budget}")]
    BudgetExceeded { evaluated: u64, budget: u64 },
    #[error("malformed witness: {0}")]
    MalformedWitness(String),
    #[error("set is not a union of cosets")]
    NotCosetUnion,
    #[error("pair size mismatch: |C| = {0}, |D| = {1}")]
    SizeMismatch(usize, usize),
    #[error("bad set generator: {0}")]
    BadGenerator(String),
    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

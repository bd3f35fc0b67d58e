//! One builder per construction family. Every builder returns a
//! [`ConstructionResult`] that has already been re-verified: the block list
//! is checked to be an exact edge partition and the attached colouring to
//! be proper with the claimed class structure. A builder that cannot
//! instantiate a case for degenerate inputs reports
//! [`ConstructionError::UnsupportedCase`] rather than emitting anything
//! unchecked.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baranyai::BaranyaiError;
use crate::system::{Colouring, StarSystem, SystemError};
use crate::verify::{check_colouring, validate_decomposition};

mod estar;
mod helpers;
mod threestar;
mod unique;

pub use estar::{build_2chromatic_estar, extend_kchromatic_estar, lift_estar_chromatic};
pub use threestar::{
    build_equitable_2chromatic_3star, extend_kchromatic_3star, lift_3star_chromatic,
};
pub use unique::{
    build_unique_2chromatic_estar, extend_unique_2chromatic, extend_unique_kchromatic,
    lift_unique_to_strong_equitable_k, make_unique_kchromatic,
};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("order {n} is not admissible for e = {e}")]
    InadmissibleOrder { e: u32, n: u64 },
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("self-verification failed: {0}")]
    SelfCheckFailed(String),
    #[error(transparent)]
    Baranyai(#[from] BaranyaiError),
    #[error(transparent)]
    System(#[from] SystemError),
}

/// What a construction claims about its output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claims {
    /// Claimed chromatic number; the attached colouring is proper with
    /// exactly this many nonempty classes.
    pub k: u32,
    pub equitable: bool,
    pub strongly_equitable: bool,
    pub unique: bool,
    pub provenance: Provenance,
}

/// Which construction produced a system, and with which parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub theorem: String,
    pub params: BTreeMap<String, u64>,
}

impl Provenance {
    pub fn new(theorem: &str, params: &[(&str, u64)]) -> Self {
        Provenance {
            theorem: theorem.to_string(),
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionResult {
    pub system: StarSystem,
    pub colouring: Colouring,
    pub claims: Claims,
}

/// Gate every construction through the exact checkers before release.
pub(crate) fn finalize(
    system: StarSystem,
    colouring: Colouring,
    claims: Claims,
) -> Result<ConstructionResult, ConstructionError> {
    let d = validate_decomposition(&system);
    if !d.ok {
        return Err(ConstructionError::SelfCheckFailed(format!(
            "{} not an edge partition: {} uncovered, {} multiply covered, {}/{} blocks",
            claims.provenance.theorem,
            d.uncovered_count,
            d.multiply_covered_count,
            d.block_count_actual,
            d.block_count_expected,
        )));
    }
    let c = check_colouring(&system, &colouring);
    if !c.proper {
        return Err(ConstructionError::SelfCheckFailed(format!(
            "{} colouring has {} monochromatic blocks (first: {:?})",
            claims.provenance.theorem,
            c.monochromatic_count,
            c.monochromatic_blocks.first(),
        )));
    }
    if colouring.nonempty_class_count() != claims.k {
        return Err(ConstructionError::SelfCheckFailed(format!(
            "{} colouring uses {} classes, claims k = {}",
            claims.provenance.theorem,
            colouring.nonempty_class_count(),
            claims.k,
        )));
    }
    if c.equitable != claims.equitable || c.strongly_equitable != claims.strongly_equitable {
        return Err(ConstructionError::SelfCheckFailed(format!(
            "{} equitability flags disagree: checker ({}, {}), claims ({}, {})",
            claims.provenance.theorem,
            c.equitable,
            c.strongly_equitable,
            claims.equitable,
            claims.strongly_equitable,
        )));
    }
    Ok(ConstructionResult {
        system,
        colouring,
        claims,
    })
}

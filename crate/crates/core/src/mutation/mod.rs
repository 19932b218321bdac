// SPDX-License-Identifier: Apache-2.0

//! Candidates and the generators that produce them.

mod advice;
mod candidate;
mod generator;
mod mutator;

use thiserror::Error;

pub use advice::{build_advice, AdviceBundle, ScoreNote, HYBRID_INSTRUCTION};
pub use candidate::{Candidate, ParamConfig, ParamValue, Payload, PayloadKind};
pub use generator::{
    Endpoint, ExternalGenerator, GenerateRequest, GenerateResponse, Generated, GeneratorHandle,
    DEFAULT_GENERATOR_TIMEOUT, PROTOCOL_VERSION,
};
pub use mutator::{mutate_config, Mutation, MutationSchedule, StepLaw};

#[derive(Debug, Error, PartialEq)]
pub enum MutationError {
    #[error("candidate payload is empty")]
    EmptyPayload,
    #[error("config key `{0}` holds a non-finite number")]
    NonFiniteValue(String),
    #[error("config key `{0}` has no entry in the mutation schedule")]
    UnscheduledKey(String),
    #[error("config key `{0}` does not match the type its step law expects")]
    TypeMismatch(String),
    #[error("invalid mutation schedule: {0}")]
    BadSchedule(String),
}

/// Failure to produce a child. Distinct from a child that fails when run.
#[derive(Debug, Error)]
pub enum GenerationError {
    #[error("generator unavailable: {0}")]
    Unavailable(String),
    #[error("generator did not answer within {0:?}")]
    Timeout(std::time::Duration),
    #[error("generator protocol error: {0}")]
    Protocol(String),
    #[error("generator reported an error: {0}")]
    Remote(String),
    #[error(transparent)]
    Mutation(#[from] MutationError),
}

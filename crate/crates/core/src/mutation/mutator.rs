// SPDX-License-Identifier: Apache-2.0

//! Deterministic one-key-at-a-time configuration mutator.
//!
//! Stands in for an LLM so the search loop can be exercised and tested
//! without a model. Randomness comes from ChaCha8 seeded per call, which
//! gives the same stream on every platform.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{MutationError, ParamConfig, ParamValue};

/// How one configuration key may change.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum StepLaw {
    /// `x ± step`, with the step drawn from `steps`.
    Additive {
        steps: Vec<f64>,
        lower: f64,
        upper: f64,
    },
    /// `x · factor` or `x / factor`, with the factor drawn from `factors` (each > 1).
    Multiplicative {
        factors: Vec<f64>,
        lower: f64,
        upper: f64,
    },
    /// Replace the current choice by a different one.
    Categorical { choices: Vec<String> },
}

impl StepLaw {
    fn validate(&self, key: &str) -> Result<(), MutationError> {
        let bad = |why: &str| Err(MutationError::BadSchedule(format!("{key}: {why}")));
        match self {
            StepLaw::Additive {
                steps,
                lower,
                upper,
            } => {
                if steps.is_empty() || steps.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
                    return bad("additive steps must be positive and finite");
                }
                if !(lower <= upper) {
                    return bad("lower bound exceeds upper bound");
                }
            }
            StepLaw::Multiplicative {
                factors,
                lower,
                upper,
            } => {
                if factors.is_empty() || factors.iter().any(|f| !(f.is_finite() && *f > 1.0)) {
                    return bad("multiplicative factors must exceed 1");
                }
                if !(lower <= upper) {
                    return bad("lower bound exceeds upper bound");
                }
            }
            StepLaw::Categorical { choices } => {
                if choices.len() < 2 {
                    return bad("categorical law needs at least two choices");
                }
            }
        }
        Ok(())
    }
}

/// Per-key perturbation laws.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MutationSchedule {
    pub laws: BTreeMap<String, StepLaw>,
}

impl MutationSchedule {
    pub fn with(mut self, key: &str, law: StepLaw) -> Self {
        self.laws.insert(key.to_string(), law);
        self
    }

    pub fn validate(&self) -> Result<(), MutationError> {
        self.laws.iter().try_for_each(|(k, law)| law.validate(k))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mutation {
    pub config: ParamConfig,
    /// Key that changed; `None` when the config had nothing to mutate.
    pub key: Option<String>,
    pub exhausted: bool,
}

/// Perturb exactly one key of `parent`, chosen by a seeded draw.
///
/// Numeric results are clamped to the law's bounds. An empty config comes
/// back unchanged with `exhausted` set.
pub fn mutate_config(
    parent: &ParamConfig,
    schedule: &MutationSchedule,
    seed: u64,
) -> Result<Mutation, MutationError> {
    for key in parent.keys() {
        let law = schedule
            .laws
            .get(key)
            .ok_or_else(|| MutationError::UnscheduledKey(key.clone()))?;
        law.validate(key)?;
    }
    if parent.is_empty() {
        return Ok(Mutation {
            config: parent.clone(),
            key: None,
            exhausted: true,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let index = rng.random_range(0..parent.len());
    let (key, value) = parent.iter().nth(index).expect("index in range");
    let law = &schedule.laws[key];

    let new_value = match (law, value) {
        (
            StepLaw::Additive {
                steps,
                lower,
                upper,
            },
            ParamValue::Number(x),
        ) => {
            let step = steps[rng.random_range(0..steps.len())];
            let signed = if rng.random_bool(0.5) { step } else { -step };
            ParamValue::Number((x + signed).clamp(*lower, *upper))
        }
        (
            StepLaw::Multiplicative {
                factors,
                lower,
                upper,
            },
            ParamValue::Number(x),
        ) => {
            let factor = factors[rng.random_range(0..factors.len())];
            let scaled = if rng.random_bool(0.5) {
                x * factor
            } else {
                x / factor
            };
            ParamValue::Number(scaled.clamp(*lower, *upper))
        }
        (StepLaw::Categorical { choices }, ParamValue::Choice(current)) => {
            let others: Vec<&String> = choices.iter().filter(|c| *c != current).collect();
            if others.is_empty() {
                return Err(MutationError::BadSchedule(format!(
                    "{key}: no alternative to `{current}`"
                )));
            }
            ParamValue::Choice(others[rng.random_range(0..others.len())].clone())
        }
        _ => return Err(MutationError::TypeMismatch(key.clone())),
    };

    let mut config = parent.clone();
    let key = key.clone();
    config.insert(key.clone(), new_value);
    Ok(Mutation {
        config,
        key: Some(key),
        exhausted: false,
    })
}

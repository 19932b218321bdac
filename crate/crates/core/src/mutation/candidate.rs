// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{AdviceBundle, MutationError};

/// One entry of a structured parameter configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Number(f64),
    Choice(String),
}

impl ParamValue {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            ParamValue::Number(v) => Some(*v),
            ParamValue::Choice(_) => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            ParamValue::Number(_) => None,
            ParamValue::Choice(s) => Some(s),
        }
    }
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Number(v)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Choice(v.to_string())
    }
}

/// Key-ordered so that serialization, and therefore the digest, is canonical.
pub type ParamConfig = BTreeMap<String, ParamValue>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PayloadKind {
    ProgramText,
    ParameterConfig,
}

impl PayloadKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PayloadKind::ProgramText => "program_text",
            PayloadKind::ParameterConfig => "parameter_config",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Payload {
    ProgramText(String),
    ParameterConfig(ParamConfig),
}

impl Payload {
    pub fn kind(&self) -> PayloadKind {
        match self {
            Payload::ProgramText(_) => PayloadKind::ProgramText,
            Payload::ParameterConfig(_) => PayloadKind::ParameterConfig,
        }
    }

    /// Bytes the digest is computed over: a kind tag, a newline, then the
    /// program text or the canonical JSON of the configuration.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let body = match self {
            Payload::ProgramText(text) => text.clone(),
            Payload::ParameterConfig(cfg) => serde_json::to_string(cfg).expect("config serializes"),
        };
        let mut out = Vec::with_capacity(body.len() + 20);
        out.extend_from_slice(self.kind().as_str().as_bytes());
        out.push(b'\n');
        out.extend_from_slice(body.as_bytes());
        out
    }

    /// Hex SHA-256 of [`Payload::canonical_bytes`].
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_bytes()))
    }

    pub fn validate(&self) -> Result<(), MutationError> {
        match self {
            Payload::ProgramText(text) if text.trim().is_empty() => {
                Err(MutationError::EmptyPayload)
            }
            Payload::ParameterConfig(cfg) => {
                for (key, value) in cfg {
                    if let ParamValue::Number(v) = value {
                        if !v.is_finite() {
                            return Err(MutationError::NonFiniteValue(key.clone()));
                        }
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// An executable payload plus where it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub payload: Payload,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub advice_context: Option<AdviceBundle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent_digest: Option<String>,
}

impl Candidate {
    pub fn new(payload: Payload) -> Result<Self, MutationError> {
        payload.validate()?;
        Ok(Self {
            payload,
            advice_context: None,
            parent_digest: None,
        })
    }

    pub fn program(text: impl Into<String>) -> Result<Self, MutationError> {
        Self::new(Payload::ProgramText(text.into()))
    }

    pub fn config(cfg: ParamConfig) -> Result<Self, MutationError> {
        Self::new(Payload::ParameterConfig(cfg))
    }

    /// Child of `parent` carrying `payload`, with the parent's digest recorded.
    pub fn child_of(
        parent: &Candidate,
        payload: Payload,
        advice: Option<AdviceBundle>,
    ) -> Result<Self, MutationError> {
        let mut child = Self::new(payload)?;
        child.parent_digest = Some(parent.digest());
        child.advice_context = advice;
        Ok(child)
    }

    pub fn kind(&self) -> PayloadKind {
        self.payload.kind()
    }

    pub fn digest(&self) -> String {
        self.payload.digest()
    }

    pub fn as_config(&self) -> Option<&ParamConfig> {
        match &self.payload {
            Payload::ParameterConfig(cfg) => Some(cfg),
            Payload::ProgramText(_) => None,
        }
    }

    /// One-line description used in advice score histories.
    pub fn summary(&self) -> String {
        match &self.payload {
            Payload::ParameterConfig(cfg) => {
                let parts: Vec<String> = cfg
                    .iter()
                    .map(|(k, v)| match v {
                        ParamValue::Number(x) => format!("{k}={x}"),
                        ParamValue::Choice(s) => format!("{k}={s}"),
                    })
                    .collect();
                format!("config {{{}}}", parts.join(", "))
            }
            Payload::ProgramText(text) => {
                format!(
                    "program {} ({} lines)",
                    &self.digest()[..12],
                    text.lines().count()
                )
            }
        }
    }
}

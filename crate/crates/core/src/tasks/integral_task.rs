// SPDX-License-Identifier: Apache-2.0

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::mutation::{Candidate, MutationSchedule, ParamConfig, ParamValue, StepLaw};
use crate::quadrature::{integrate_oscillatory, Method, QuadResult, SegmentScheme};

use super::integrals::{
    fractional_error, integral_score, integral_task_score, IntegralManifest, IntegralSpec, Split,
};
use super::{number, InputFile, ScorableTask, SplitPolicy, TaskError};

pub(super) const DESCRIPTION: &str =
    "Tune the segment scheme of the oscillatory integrator; score is the mean \
of -ln(1 + fractional error) over the training integrals.";

/// Tolerance the task passes to the integrator.
pub const TASK_TOLERANCE: f64 = 1e-6;

/// Result of integrating one benchmark entry.
#[derive(Debug, Clone, Serialize)]
pub struct IntegralOutcome {
    pub spec_id: String,
    pub split: Split,
    pub value: f64,
    pub reference: f64,
    pub fractional_error: f64,
    pub score: f64,
    pub method_used: Method,
    pub segments_used: usize,
    pub converged: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

pub fn evaluate_integral(
    spec: &IntegralSpec,
    scheme: SegmentScheme,
    tol: f64,
) -> Result<IntegralOutcome, TaskError> {
    let f = spec.integrand()?;
    let start = Instant::now();
    let r: QuadResult = integrate_oscillatory(|x| f(x), spec.lower_limit, scheme, tol);
    let reference = spec.reference_answer();
    Ok(IntegralOutcome {
        spec_id: spec.spec_id.clone(),
        split: spec.split,
        value: r.value,
        reference,
        fractional_error: fractional_error(r.value, reference),
        score: integral_score(r.value, reference),
        method_used: r.method_used,
        segments_used: r.segments_used,
        converged: r.converged,
        elapsed: start.elapsed(),
    })
}

/// Hill-climbs the segment scheme on the train split. The test split is
/// dropped at construction, so nothing here can score against it.
#[derive(Debug, Clone)]
pub struct IntegralsTask {
    train: Vec<IntegralSpec>,
}

impl IntegralsTask {
    pub fn builtin() -> Self {
        Self::from_manifest(&IntegralManifest::builtin())
    }

    pub fn from_manifest(manifest: &IntegralManifest) -> Self {
        Self {
            train: manifest.split(Split::Train).cloned().collect(),
        }
    }

    /// Every spec the scorer can see.
    pub fn specs(&self) -> &[IntegralSpec] {
        &self.train
    }

    fn scheme_of(config: &ParamConfig) -> Result<SegmentScheme, TaskError> {
        let segments = number(config, "max_segments")?.round();
        if !(segments >= 1.0) {
            return Err(TaskError::Invalid(format!(
                "max_segments must be >= 1, got {segments}"
            )));
        }
        SegmentScheme::new(
            number(config, "first_length")?,
            number(config, "growth_ratio")?,
            segments as usize,
        )
        .map_err(|e| TaskError::Invalid(e.to_string()))
    }
}

impl ScorableTask for IntegralsTask {
    fn task_id(&self) -> &str {
        "integrals"
    }

    fn description(&self) -> &str {
        DESCRIPTION
    }

    fn split_policy(&self) -> SplitPolicy {
        SplitPolicy::TrainHoldout
    }

    fn inputs(&self) -> Vec<InputFile> {
        let body = serde_json::json!({ "integrals": self.train });
        vec![InputFile {
            name: "integrals_train.json".into(),
            bytes: serde_json::to_vec_pretty(&body).expect("specs serialize"),
        }]
    }

    fn root_candidate(&self) -> Candidate {
        let d = SegmentScheme::default();
        let cfg: ParamConfig = [
            ("first_length", d.first_length),
            ("growth_ratio", d.growth_ratio),
            ("max_segments", d.max_segments as f64),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), ParamValue::Number(v)))
        .collect();
        Candidate::config(cfg).expect("valid root")
    }

    fn mutation_schedule(&self) -> MutationSchedule {
        MutationSchedule::default()
            .with(
                "first_length",
                StepLaw::Multiplicative {
                    factors: vec![1.5, 1.1],
                    lower: 0.05,
                    upper: 50.0,
                },
            )
            .with(
                "growth_ratio",
                StepLaw::Additive {
                    steps: vec![0.1, 0.02],
                    lower: 1.0,
                    upper: 3.0,
                },
            )
            .with(
                "max_segments",
                StepLaw::Additive {
                    steps: vec![10.0, 2.0],
                    lower: 4.0,
                    upper: 400.0,
                },
            )
    }

    fn score_config(&self, config: &ParamConfig) -> Result<f64, TaskError> {
        let scheme = Self::scheme_of(config)?;
        let scores = self
            .train
            .iter()
            .map(|spec| evaluate_integral(spec, scheme, TASK_TOLERANCE).map(|o| o.score))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(integral_task_score(&scores))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scorer_sees_only_train_specs() {
        let task = IntegralsTask::builtin();
        assert_eq!(task.specs().len(), 19);
        assert!(task.specs().iter().all(|s| s.split == Split::Train));
        let inputs = String::from_utf8(task.inputs()[0].bytes.clone()).unwrap();
        let manifest = IntegralManifest::builtin();
        for test_spec in manifest.split(Split::Test) {
            assert!(
                !inputs.contains(&format!("\"{}\"", test_spec.spec_id)),
                "{} leaked",
                test_spec.spec_id
            );
        }
    }

    #[test]
    fn bad_scheme_is_rejected() {
        let task = IntegralsTask::builtin();
        let mut cfg = task.root_candidate().as_config().unwrap().clone();
        cfg.insert("growth_ratio".into(), ParamValue::Number(0.5));
        assert!(task.score_config(&cfg).is_err());
    }
}

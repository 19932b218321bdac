// SPDX-License-Identifier: Apache-2.0

use crate::mutation::{Candidate, MutationSchedule, ParamConfig, ParamValue, StepLaw};

use super::{number, InputFile, ScorableTask, SplitPolicy, TaskError};

pub(super) const DESCRIPTION: &str =
    "Minimise the squared distance to a fixed target vector; score is -sum((x_i - a_i)^2), optimum 0.";

/// Published target. Dimensions past its length wrap around.
pub const SYNTHETIC_TARGET: [f64; 8] = [1.37, -0.82, 2.61, 0.44, -1.93, 0.71, 3.08, -2.26];

const STEPS: [f64; 5] = [1.0, 0.3, 0.1, 0.03, 0.01];
const BOUND: f64 = 5.0;

/// Quadratic bowl in `dimension` variables named `x0`, `x1`, ...
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticTask {
    target: Vec<f64>,
}

pub fn synthetic_task(dimension: usize) -> Result<SyntheticTask, TaskError> {
    if dimension == 0 {
        return Err(TaskError::Invalid(
            "synthetic task needs dimension >= 1".into(),
        ));
    }
    let target = (0..dimension)
        .map(|i| SYNTHETIC_TARGET[i % SYNTHETIC_TARGET.len()])
        .collect();
    Ok(SyntheticTask { target })
}

impl SyntheticTask {
    pub fn target(&self) -> &[f64] {
        &self.target
    }

    pub fn key(i: usize) -> String {
        format!("x{i}")
    }

    pub fn config_of(values: &[f64]) -> ParamConfig {
        values
            .iter()
            .enumerate()
            .map(|(i, v)| (Self::key(i), ParamValue::Number(*v)))
            .collect()
    }
}

impl ScorableTask for SyntheticTask {
    fn task_id(&self) -> &str {
        "synthetic"
    }

    fn description(&self) -> &str {
        DESCRIPTION
    }

    fn split_policy(&self) -> SplitPolicy {
        SplitPolicy::TrainOnly
    }

    fn inputs(&self) -> Vec<InputFile> {
        let body = serde_json::json!({ "target": self.target });
        vec![InputFile {
            name: "target.json".into(),
            bytes: serde_json::to_vec(&body).expect("target serializes"),
        }]
    }

    fn root_candidate(&self) -> Candidate {
        Candidate::config(Self::config_of(&vec![0.0; self.target.len()])).expect("valid root")
    }

    fn mutation_schedule(&self) -> MutationSchedule {
        let law = StepLaw::Additive {
            steps: STEPS.to_vec(),
            lower: -BOUND,
            upper: BOUND,
        };
        (0..self.target.len()).fold(MutationSchedule::default(), |s, i| {
            s.with(&Self::key(i), law.clone())
        })
    }

    fn score_config(&self, config: &ParamConfig) -> Result<f64, TaskError> {
        let mut total = 0.0;
        for (i, a) in self.target.iter().enumerate() {
            let x = number(config, &Self::key(i))?;
            total += (x - a) * (x - a);
        }
        Ok(-total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn optimum_and_unit_offset() {
        let t = synthetic_task(4).unwrap();
        let a = t.target().to_vec();
        assert_eq!(t.score_config(&SyntheticTask::config_of(&a)).unwrap(), 0.0);
        let mut off = a.clone();
        off[0] += 1.0;
        assert!((t.score_config(&SyntheticTask::config_of(&off)).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn missing_key() {
        let t = synthetic_task(2).unwrap();
        let err = t
            .score_config(&SyntheticTask::config_of(&[0.0]))
            .unwrap_err();
        assert_eq!(err, TaskError::MissingKey("x1".into()));
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(synthetic_task(0).is_err());
    }

    #[test]
    fn target_wraps() {
        let t = synthetic_task(10).unwrap();
        assert_eq!(t.target()[8], SYNTHETIC_TARGET[0]);
    }
}

use std::collections::BTreeMap;

use crate::error::ScenarioError;

/// Reads parameters with defaults and records the resolved values.
pub(super) struct Params {
    given: BTreeMap<String, f64>,
    pub(super) resolved: BTreeMap<String, f64>,
}

impl Params {
    pub(super) fn new(given: &BTreeMap<String, f64>) -> Self {
        Self {
            given: given.clone(),
            resolved: BTreeMap::new(),
        }
    }

    pub(super) fn get(&mut self, key: &str, default: f64) -> Result<f64, ScenarioError> {
        let v = self.given.remove(key).unwrap_or(default);
        if !v.is_finite() {
            return Err(out_of_range(key, v, "must be finite"));
        }
        self.resolved.insert(key.to_string(), v);
        Ok(v)
    }

    pub(super) fn int(&mut self, key: &str, default: usize, lo: usize, hi: usize) -> Result<usize, ScenarioError> {
        let v = self.get(key, default as f64)?;
        if v.fract() != 0.0 || v < lo as f64 || v > hi as f64 {
            return Err(out_of_range(key, v, &format!("must be an integer in {lo}..={hi}")));
        }
        Ok(v as usize)
    }

    pub(super) fn flag(&mut self, key: &str) -> Result<bool, ScenarioError> {
        Ok(self.int(key, 0, 0, 1)? == 1)
    }

    /// Fails on any parameter that was never read.
    pub(super) fn finish(self) -> Result<BTreeMap<String, f64>, ScenarioError> {
        if let Some(key) = self.given.keys().next() {
            return Err(ScenarioError::UnknownParam(key.clone()));
        }
        Ok(self.resolved)
    }
}

pub(super) fn out_of_range(name: &str, value: f64, reason: &str) -> ScenarioError {
    ScenarioError::ParamOutOfRange {
        name: name.to_string(),
        value,
        reason: reason.to_string(),
    }
}

pub(super) fn require(cond: bool, name: &str, value: f64, reason: &str) -> Result<(), ScenarioError> {
    if cond {
        Ok(())
    } else {
        Err(out_of_range(name, value, reason))
    }
}

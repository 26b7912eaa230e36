use serde::{Deserialize, Serialize};

/// Whether a reported value is the quantity itself or its natural log.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Ln,
}

/// One precondition of a bound. `required` conditions gate the value;
/// advisory ones only flag it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub valid: bool,
    pub required: bool,
}

/// A bound evaluated at specific inputs, together with the conditions under
/// which it means anything.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub inputs: Vec<(String, f64)>,
    /// `None` when a required condition fails.
    pub value: Option<f64>,
    pub scale: Scale,
    pub conditions: Vec<Condition>,
}

impl BoundReport {
    pub(crate) fn new(name: &str, inputs: &[(&str, f64)], scale: Scale) -> Self {
        BoundReport {
            name: name.to_string(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            value: None,
            scale,
            conditions: Vec::new(),
        }
    }

    pub(crate) fn require(mut self, name: &str, valid: bool) -> Self {
        self.conditions.push(Condition { name: name.to_string(), valid, required: true });
        self
    }

    pub(crate) fn advise(mut self, name: &str, valid: bool) -> Self {
        self.conditions.push(Condition { name: name.to_string(), valid, required: false });
        self
    }

    /// Stores `f()` if every required condition holds.
    pub(crate) fn evaluate(mut self, f: impl FnOnce() -> f64) -> Self {
        if self.conditions.iter().filter(|c| c.required).all(|c| c.valid) {
            self.value = Some(f());
        }
        self
    }

    /// All conditions, required and advisory, hold.
    pub fn valid(&self) -> bool {
        self.conditions.iter().all(|c| c.valid)
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

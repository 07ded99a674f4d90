//! Outcome records shared by the identity checks.

use std::fmt;

/// Inputs and nonzero residual of a failed sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub inputs: Vec<(String, String)>,
    pub residual: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, value) in &self.inputs {
            write!(f, "{name} = {value}; ")?;
        }
        write!(f, "residual = {}", self.residual)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub id: String,
    pub anchor: String,
    pub samples: usize,
    pub failures: usize,
    pub witness: Option<Witness>,
}

impl Outcome {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>) -> Self {
        Outcome {
            id: id.into(),
            anchor: anchor.into(),
            samples: 0,
            failures: 0,
            witness: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Record one sample; the first failure keeps its witness.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        self.samples += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    /// Record a sample whose residual should vanish.
    pub fn record_residual<R: fmt::Display>(
        &mut self,
        residual: &R,
        is_zero: bool,
        inputs: impl FnOnce() -> Vec<(String, String)>,
    ) {
        self.record(is_zero, || Witness {
            inputs: inputs(),
            residual: residual.to_string(),
        });
    }
}

pub(crate) fn named<T: fmt::Display>(name: &str, value: &T) -> (String, String) {
    (name.to_string(), value.to_string())
}

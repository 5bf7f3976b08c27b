//! Exact homological algebra over F2 for unstable modules over the Steenrod
//! algebra: Brown-Gitler complexes, their suspensions, minimal injective
//! resolutions of spheres, the Lambda algebra and Poincaré series of
//! resolutions of strict polynomial functors.

use serde::Serialize;

pub mod brown_gitler;
pub mod f2_linalg;
pub mod lambda;
pub mod polyfun;
pub mod psr;
pub mod sphere_ext;
pub mod steenrod;

/// Outcome of a batch of numeric checks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checked: usize,
    pub passed: usize,
    pub failures: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(what());
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.checked += other.checked;
        self.passed += other.passed;
        self.failures.extend(other.failures);
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

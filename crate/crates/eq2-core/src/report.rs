//! Residual reports for numerically verified identities.

/// Outcome of one numeric identity check on one test vector.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ResidualReport {
    /// Registered identity name.
    pub identity: String,
    /// Description of the test vector.
    pub vector: String,
    /// l^2 residual between the two sides.
    pub residual: f64,
    /// Parameters used, echoed for reproducibility.
    pub params: String,
    /// Independent estimate of the functional-calculus truncation error.
    pub truncation_estimate: f64,
    /// Number of exceptional-modulus fibers touched (computed with enlarged
    /// sampling and reflected in the estimate).
    pub slow_fibers: usize,
}

impl ResidualReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.residual <= tol + self.truncation_estimate
    }
}

//! Newtonian potential of a source term and near-origin blow-up probes.

mod boundary;
mod field;
mod newton;
mod probe;

pub use field::{AnalyticField, Field2D, FieldSource, SampledGrid, ScalarFn};
pub use newton::{
    eval_grad_psi, eval_grad_psi_boundary, eval_hessian_psi, eval_hessian_psi_with, eval_psi, eval_psi_boundary,
    HessianMethod,
};
pub use probe::{
    blowup_probe, fit_line, gradient_growth_check, hessian_verdict, probe_source, scaled_gradient, BlowupReport,
    DerivativeSource, GrowthModel, Newtonian, ProbeQuantity, ProbeSample,
};

#[cfg(test)]
mod tests;

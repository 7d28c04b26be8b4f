//! Verification metrics on grid measures and sample clouds: marginals,
//! copula evaluation and sup-distance bounds, exact Wasserstein-1 transport,
//! the conditional-kernel L1 metric, dependence diagnostics and KS tests.

mod copula;
mod d1;
mod dependence;
mod ks;
mod marginal;
mod transport;

pub use copula::{copula_eval, copula_sup_distance, CopulaDistance};
pub use d1::d1_distance;
pub use dependence::{empirical_dependence_check, fiber_uniqueness};
pub use ks::{ks_uniformity, KsResult};
pub use marginal::{first_nonuniform_cell, marginal};
pub use transport::{wasserstein1, TransportPlan, Wasserstein1, DEFAULT_TRANSPORT_BUDGET};

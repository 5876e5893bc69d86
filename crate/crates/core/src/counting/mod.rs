//! Counting functions, the Perron root θ, the a-vector and β-coefficients.

mod beta;
mod growth;
mod tables;

pub use beta::{beta_coefficients, beta_coefficients_up, transducer, transducer_output, BetaCoeffs, TransducerEdge};
pub use growth::{
    check_hypothesis, growth_profile, growth_profile_with, largest_root_field, ln_big, perron_theta, ratio_f64, simplify_language,
    Exactness, GrowthClass, GrowthOptions, GrowthProfile, HypothesisReport, Verdict, DEFAULT_CROSS_CHECK_TOL,
    DEFAULT_HORIZON,
};
pub use tables::{count_u_v, CountingTables};

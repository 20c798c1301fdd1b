//! Statistics over pooled trials and price paths.

mod aggregate;
mod bayes;
mod chi2;
mod dfa;
mod powerlaw;

pub use aggregate::{aggregate_trials, Aggregate, TrialCounts};
pub use bayes::{bayes_estimate, BounceStats};
pub use chi2::{
    chi2_independence, chi2_independence_with, chi2_pvalue, CenterEstimate, ChiSquareConfig,
    ChiSquareResult, Decision,
};
pub use dfa::{dfa_hurst, dfa_hurst_with, log_spaced_windows, DfaConfig, HurstEstimate};
pub use powerlaw::{powerlaw_fit, PowerLawFit};

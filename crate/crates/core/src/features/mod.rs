//! Recurrence time and maximum excursion between consecutive trials on a
//! level, and the histograms their distributions are fitted on.

mod extract;
mod histogram;

pub use extract::{extract_features, write_features_csv, BounceFeature, Pairing, FEATURE_CSV_HEADER};
pub use histogram::{build_histogram, Binning, Histogram};

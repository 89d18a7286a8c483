//! Finite-quotient fingerprints and separation of finite subgroups.

mod quotients;
mod separate;

pub use quotients::{
    compare, count_epimorphisms, minimal_separating_bound, quotients_up_to, symmetric_group, verify_fingerprint,
    with_jobs, Comparison, Fingerprint, QuotientEntry, QuotientTargets, DEFAULT_NODE_BUDGET,
};
pub use separate::{separating_quotient, Separation, SeparationCase, DEFAULT_CONJUGATOR_LENGTH};

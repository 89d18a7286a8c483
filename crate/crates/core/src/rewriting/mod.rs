//! Word problems in Coxeter groups and graph products, and retractions.

pub mod coxeter;
pub mod product;
pub mod retract;

pub use coxeter::{coxeter_equal, CoxeterSolver, DEFAULT_NODE_BUDGET};
pub use product::{product_normal_form, GSyllable, ProductSolver};
pub use retract::{restrict_word, retraction, retraction_failures, retraction_obstructions};

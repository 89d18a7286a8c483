//! Finite permutation groups, subgroup classes and isomorphism invariants.

pub mod coset;
pub mod group;
pub mod perm;
pub mod schreier;
pub mod signature;
pub mod subgroups;

pub use group::{FiniteGroup, Subgroup, DEFAULT_ORDER_BOUND};
pub use perm::Perm;
pub use signature::{find_isomorphism, isomorphic, iso_signature, IsoSignature};
pub use subgroups::{subgroup_classes, ClassPoset, SubgroupClass};
pub use coset::{coset_enumerate, enumerate_group, CosetTable, DEFAULT_ROW_BUDGET};
pub use schreier::{check_homomorphism, evaluate, finite_presentation, kernel_generators, KernelData};

//! Higman–Thompson groups `V_n`: tree-pair arithmetic and the four-involution generating set.

pub mod address;
pub mod claims;
pub mod element;
pub mod gens;
pub mod random;
pub mod synth;
pub mod words;

pub use address::Address;
pub use claims::{verify_generation, ClaimBounds, ClaimReport};
pub use element::{Order, Parity, VnElement};
pub use random::{random_element, random_elements, random_tree};
pub use gens::{d_element, generator, pull_up, pull_up2, transposition_element};
pub use synth::Synthesizer;
pub use words::{Gen, GenWord};

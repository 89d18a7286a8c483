//! Labeled graphs, Coxeter groups and graph products of finite groups.

pub mod graph;
pub mod ops;

pub use graph::{graph_isomorphic, graph_isomorphism, letter_ids, LabeledGraph, Mode, Vertex};
pub use ops::{
    amalgam_split, collapse, coxeter_presentation, find_modules, graph_product_presentation,
    is_even, is_module, is_right_angled, join_components, join_decomposition, presentation,
    presentation_blocks, splice, split_indecomposable, vertex_presentation, AmalgamSplit,
    BlockPresentation, JoinDecomposition,
};

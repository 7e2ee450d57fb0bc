//! Exact computation and verification of zero-sum invariants of finite
//! abelian groups: the Davenport constant `D(G)`, `η(G)`, the
//! Erdős–Ginzburg–Ziv constant `s(G)`, and the families `ζ_i(G)` and `η_i(G)`,
//! all as instances of `s_L(G)` for a set `L` of admissible lengths.

pub mod automorphism;
pub mod catalog;
pub mod closed_forms;
pub mod enumerate;
pub mod group;
pub mod oracle;
pub mod search;
pub mod sequence;
pub mod spec;
pub mod verifier;

pub use closed_forms::{d_star, FormulaValue};
pub use group::{AbelianGroup, Element, GroupError, GroupTable};
pub use search::{named_invariant, s_l, Invariant, InvariantResult, SearchConfig};
pub use sequence::{extract_witness, has_zero_sum_in, length_set, LengthSet, Sequence};
pub use spec::LengthSpec;
pub use verifier::{verify_group, Report};

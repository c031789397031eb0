//! Exact computation of Engel sinks, subgroup ranks and the nilpotent
//! residual for finite permutation groups.

pub mod arith;
pub mod bsgs;
pub mod catalog;
pub mod checks;
pub mod error;
pub mod group;
pub mod harness;
pub mod lattice;
pub mod par;
pub mod perm;
pub mod rank;
pub mod sinks;
pub mod structure;
pub mod subgroup;

pub use error::{Error, Result};
pub use group::{Elt, Group, GroupHandle};
pub use perm::Permutation;
pub use subgroup::{Subgroup, SubgroupHandle};

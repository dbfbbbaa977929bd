//! Entangled coherent-state simulation: hybrid Fock/coherent product states,
//! optical elements, Bell-type correlators, and a truncated-Fock oracle.

// `!(x > tol)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bell;
pub mod circuits;
pub mod elements;
pub mod error;
pub mod fockoracle;
pub mod measure;
pub mod optimize;
pub mod states;

pub use error::{EcsError, Result};
pub use states::{HybridState, KetFactor, ProductTerm, C64};

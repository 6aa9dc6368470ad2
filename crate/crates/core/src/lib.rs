pub mod config;
pub mod coordinate;
pub mod error;
pub mod group;

pub use config::{Budget, Limits};
pub use error::{Error, NotAGroupReason, Result};
pub use group::{Elem, FiniteGroup, Subgroup};
pub mod power;
pub mod structure;
pub mod word;
pub mod zariski;

pub use word::{EquationSystem, Letter, Mode, Word};

//! Numerical constructions of explicit hyperkähler spaces and checks of the
//! hyperholomorphic line bundle identities on them.

pub mod bgmetric;
pub mod error;
pub mod ghspace;
pub mod hkquotient;
pub mod hkspace;
pub mod numcalc;
pub mod suite;
pub mod twistor;

pub use error::{Error, Result};

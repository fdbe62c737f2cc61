//! Exact cohomology, intersection forms, Hodge theory and signatures of
//! triangulated manifolds.

pub mod chain;
pub mod cohomology;
pub mod complex;
pub mod error;
pub mod flatmodel;
pub mod hodge;
pub mod io;
pub mod library;
pub mod linalg;
pub mod maps;
pub mod par;

pub use error::{Error, Result};

//! Companion sections of the Chevalley map, realized as explicit data: a finite free
//! algebra over the invariant ring, the endomorphism given by multiplication by `x`,
//! and an invariant tensor on the algebra.

pub mod error;
pub mod group;
pub mod algebra;
pub mod companion;
pub mod forms;
pub mod g2;
pub mod lattice;
pub mod polyring;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use group::Group;

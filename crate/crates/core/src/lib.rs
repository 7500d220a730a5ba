//! Waldhausen's S-construction on explicit finite categories with
//! cofibrations, and exhaustive checks of its 2-Segal comparison maps.

pub mod cofcat;
pub mod error;
pub mod fincat;
pub mod gpd2lim;
pub mod polygon;
pub mod sconstr;
pub mod segal;

pub use error::{Error, Result};

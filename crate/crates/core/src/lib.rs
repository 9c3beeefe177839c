//! Hives, determinantal plane curves, tropical honeycombs and patchworking.

pub mod asymptotics;
pub mod error;
pub mod form;
pub mod hive;
pub mod hyperbolicity;
pub mod patchwork;
pub mod pencil;
pub mod poly;
pub mod rational;
pub mod tropical;

pub use error::{Error, Result};

/// Version tag carried by every JSON document.
pub const SCHEMA: &str = "hivecurve/1";

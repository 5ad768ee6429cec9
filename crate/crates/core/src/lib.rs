//! Exact, finite-scale verification of comparison maps between tensor and
//! hom constructions over orbit categories.
//!
//! The crate is organised bottom-up: [`exact_abelian`] does integer linear
//! algebra, [`fincat`] builds finite categories and group data, [`catmod`]
//! handles modules over those categories, [`chainplex`] chain complexes,
//! [`cellspaces`] cellular models, and [`verify`] runs the hypothesis and
//! comparison checks. [`cli`] holds the manifest format and command runner.

pub mod error;
pub mod exact_abelian;
pub mod catmod;
pub mod fincat;
pub mod chainplex;
pub mod cellspaces;
pub mod verify;
pub mod cli;

pub use error::{Error, Result};

//! Manifest files and the command runner behind the `orbifunctor` binary.
//!
//! A manifest is one JSON object whose top-level keys are the sections
//! `version`, `group`, `family`, `category`, `module`, `complex`, `icw`,
//! `gcw`, `bifunctor`, `instance` and `sequences`. Each section maps names to
//! definitions tagged by `kind`; definitions refer to each other by name.
//! All integers are decimal strings.
//!
//! Exit codes: 0 when every verdict passes, 1 on a failing verdict, 2 on
//! input errors.

mod commands;
mod export;
mod format;
mod report;
mod resolve;

pub use commands::{inputs_digest, run, run_text, Command, Options};
pub use export::{
    ab_group_def, bifunctor_def, category_def, complex_def, family_def, gcw_def, group_def, icw_def, matrix_def, module_def, seq_spec_def,
    to_manifest_text,
};
pub use format::*;
pub use report::{GroupEntry, Report, Verdict, Witness};
pub use resolve::{parse_manifest, resolve, CategoryEntry, Manifest, BUILTIN_GCW};

pub const MANIFEST_VERSION: &str = "1";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VERDICT_FAILURE: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

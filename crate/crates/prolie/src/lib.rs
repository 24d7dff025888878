//! Command-line front end for `prolie-core`: the `.lie` language, the builtin
//! catalog, report rendering and command dispatch.

pub mod catalog;
pub mod cli;
pub mod dsl;
pub mod report;

//! File formats, data loading and the command-line front end for `scodes-core`.

pub mod cli;
pub mod codefile;
pub mod data;
pub mod error;
pub mod recipes;
pub mod table;

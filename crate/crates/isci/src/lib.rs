//! Command-line front end, structured documents and renderers for the
//! `isci-core` decision procedure.

pub mod cli;
pub mod export;
pub mod render;

pub use cli::run;

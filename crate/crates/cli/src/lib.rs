//! Command line and HTTP front end.

pub mod cli;
pub mod complex;
pub mod server;

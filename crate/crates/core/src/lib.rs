pub mod bench;
pub mod classic;
pub mod cutoff;
pub mod error;
pub mod io;
mod index;
pub mod metric;
pub mod oracle;
pub mod reductions;
pub mod scenarios;
pub mod sensitivity;

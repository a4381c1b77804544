//! File formats, multi-threaded drivers and the `commaware` command-line
//! tool built on [`commaware_core`].

pub mod cli;
pub mod io;
pub mod manifest;
pub mod parallel;

pub use commaware_core;

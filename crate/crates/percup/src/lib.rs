//! File formats, JSON/SVG output and the command-line front end for
//! `percup-core`.

pub mod cli;
pub mod io;
pub mod json;
pub mod svg;

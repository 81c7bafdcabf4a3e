//! Command-line front end for `gencomp`: dataset files, the locate, build,
//! verify and universal commands, and the experiment harness.

pub mod app;
pub mod dataset;

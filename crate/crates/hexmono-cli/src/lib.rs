//! Command-line front end and local HTTP service for the hexmono engine.

pub mod cli;
pub mod service;

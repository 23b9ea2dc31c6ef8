//! Command-line front end for `genus0-core`: an expression language for ring
//! and divisor elements, JSON point configurations, and the `genus0` commands.

pub mod cli;
pub mod config;
pub mod expr;
mod selftest;

pub use cli::{run, Outcome};
pub use expr::{parse_expression, Expression, ParseError};

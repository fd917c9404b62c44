pub mod analytic;
pub mod atom;
pub mod bound;
pub mod cli;
pub mod config;
pub mod continuum;
pub mod error;
pub mod fields;
pub mod observables;
pub mod oracles;
pub mod output;
pub mod pipeline;
pub mod quadrature;
pub mod units;
pub mod validation;

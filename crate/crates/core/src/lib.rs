//! Coded caching for networks where every user has a private cache and
//! reads one shared helper cache.

pub mod bounds;
pub mod cli;
pub mod combinatorics;
pub mod config;
pub mod converse;
pub mod envelope;
pub mod error;
pub mod hull;
pub mod lp;
pub mod model;
pub mod rational;
pub mod scheme1;
pub mod scheme2;
pub mod scheme_unknown;
pub mod simulator;

pub use error::{Error, Result};
pub use rational::Rational;

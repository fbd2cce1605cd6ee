//! Monte Carlo assessment of power-line front-haul for small radio cells.
//!
//! A replication places cells uniformly in a square territory, wires each
//! angular sector around the concentrator into a power-line tree (bus, tree
//! or chain rule), decides which cells the grid can serve, generates voice
//! and data sessions per cell and aggregates the front-haul rate seen at the
//! concentrator.

pub mod cli;
pub mod config;
pub mod deployment;
pub mod error;
pub mod geometry;
pub mod gridgen;
pub mod seed;
pub mod simulator;
pub mod traffic;

pub use config::{HubMode, SimulationConfig, SizeUnit, Topology};
pub use error::{Result, SimError};

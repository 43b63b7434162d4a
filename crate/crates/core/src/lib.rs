//! Polynomial vector fields on the torus `(x² + y² − a²)² + z² = 1`.

pub mod algebra;
pub mod cli;
pub mod curves;
pub mod dynamics;
pub mod families;
pub mod integrator;
pub mod parser;
pub mod report;
pub mod sample;
pub mod vfield;

//! Distributed synthesis of coordination modules for networks of
//! discrete-event agents.
//!
//! The pipeline: [`synthesis::cm_basic_subnet`] solves each inter-agent
//! constraint locally, [`planning`] picks an order in which solved subnets
//! are merged, and [`synthesis::solve_dcsn`] executes that order,
//! resolving conflicts between subnets as it goes.

pub mod automata;
pub mod dcsn;
pub mod error;
pub mod exec;
pub mod models;
pub mod planning;
pub mod supervisory;
pub mod synthesis;

pub use error::{Error, Result};
pub use exec::ExecMode;

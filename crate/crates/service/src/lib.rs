//! Session service, HTTP API and command-line front end for fair consensus
//! ranking.

pub mod api;
pub mod cli;
pub mod oracle_report;
pub mod session;
pub mod wire;

pub use session::{ServiceError, Session, SessionStore};

//! Library surface of the csflux CLI: configuration schema, report
//! serialization and the verification suite. The binary in `main.rs` is a
//! thin wrapper over these modules.

pub mod config;
pub mod report;
pub mod verify;

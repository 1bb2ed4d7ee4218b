//! Benchmark harness: suite management, wire protocol, agent backends,
//! the attempt-driving runner, and scoring artifacts. The `stabbench`
//! binary is a thin CLI over these modules.

pub mod agent;
pub mod protocol;
pub mod record;
pub mod report;
pub mod runner;
pub mod suite;
pub mod tools;

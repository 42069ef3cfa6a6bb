//! Record-level validation against the numeric oracles.

/// Placeholder until the record types land.
pub fn validate_problem() {}

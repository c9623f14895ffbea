//! Candidate evaluation harness (placeholder while the core is built).

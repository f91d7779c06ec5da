//! Command-line plumbing: corpus loading, the oracle sweep and the self-test.

pub mod corpus;
pub mod oracle;
pub mod selftest;

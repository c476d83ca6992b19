pub mod arith;
pub mod char;
pub mod classifier;
pub mod group;
pub mod idempotents;
pub mod oracle;

//! Randomized verification of the supcone kernel: model files, seeded
//! generation, property suites with mutation self-tests, and reports.

pub mod error;
pub mod eval;
pub mod generate;
pub mod model;
pub mod mutation;
pub mod report;
pub mod suite;
pub mod suites;

pub use error::{VerifyError, VerifyResult};
pub use generate::{generate_model, SizeBounds};
pub use model::{Model, ModelSpec};
pub use mutation::Mutation;
pub use report::{Counterexample, Counts, SuiteReport};
pub use suite::{replay, run_suite, RunConfig, Suite};

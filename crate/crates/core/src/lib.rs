pub mod cli;
pub mod corpus;
pub mod error;
pub mod format;
pub mod galois;
pub mod instance;
pub mod post;
pub mod pp;
pub mod reductions;
pub mod relation;
pub mod solvers;
pub mod template;
pub mod verify;

pub use error::{Error, Result};
pub use instance::{Assignment, BotTop, BotTopOrder, Constraint, Instance};
pub use pp::{Atom, PpFormula};
pub use relation::Relation;
pub use template::Template;

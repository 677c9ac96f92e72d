//! Concurrent games on event structures, with relational many-sorted
//! algebras.

pub mod access;
pub mod algebra;
pub mod error;
pub mod compose;
pub mod doc;
pub mod es;
pub mod expansion;
pub mod game;
pub mod iso;
pub mod logic;
pub mod model_games;
pub mod neutral;
pub mod random;
pub mod report;
pub mod strategy;
pub mod tag;
mod util;

pub use algebra::{Algebra, Element, Relation, Variable, VariableSet};
pub use error::{Error, Result};
pub use es::{EsMap, EventSet, EventStructure};
pub use game::{AGame, Polarity, PolarizedES};
pub use logic::{Formula, Term, Valuation};
pub use report::{Rule, ValidationReport, Violation};
pub use strategy::{AStrategy, Strategy};
pub use tag::Side;

//! Hereditarily finite sets under Ackermann coding, with the orderings,
//! arithmetic, numeral systems and bounded term language built on them.

pub mod budget;
pub mod cardarith;
pub mod error;
pub mod hf;
pub mod linord;
pub mod numerals;
pub mod systems;
pub mod term_lang;
pub mod verify;

pub use budget::Budget;
pub use error::{Error, Result};
pub use hf::{HFSet, IteratedPower};
pub use linord::LinearOrdering;
pub use numerals::{Numeral, NumerationBase};
pub use systems::{System, SystemNumber, Term};
pub use term_lang::{Env, FormulaAst, TermAst};
pub use verify::{run_suite, SuiteReport};

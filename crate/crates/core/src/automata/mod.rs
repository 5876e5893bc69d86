//! Finite automata over totally ordered alphabets.

pub mod alphabet;
pub mod dfa;
pub mod format;
pub mod minimize;
pub mod nfa;
pub mod rank;
pub mod scc;
pub mod upword;

pub use alphabet::{genealogical_cmp, Alphabet, Letter, Word};
pub use dfa::{Dfa, StateId};
pub use format::{parse_dfa, parse_nfa, write_dfa, write_nfa};
pub use minimize::{minimize, minimize_with_provenance};
pub use nfa::Nfa;
pub use rank::{genealogical_rep, genealogical_val};
pub use scc::{scc_decompose, Scc, SccDecomposition};
pub use upword::UpWord;

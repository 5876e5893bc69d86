//! Automata shipped with the crate, used by tests, examples and the CLI.

use crate::automata::{parse_dfa, Dfa};

/// Three states over `a < b < c`; θ = 2 with a = (1, 2, 1).
pub const EX5: &str = include_str!("../fixtures/ex5.an");
/// `{ε} ∪ 1{0,1}*`, the radix-2 numerals.
pub const BINARY: &str = include_str!("../fixtures/binary.an");
/// Words over `a < b` with an even number of `a`.
pub const EVENA: &str = include_str!("../fixtures/evena.an");
/// `{ε} ∪ 1{0,01}*`, the Zeckendorf numerals.
pub const FIB: &str = include_str!("../fixtures/fib.an");

pub fn ex5() -> Dfa {
    parse_dfa(EX5).expect("fixture parses")
}

pub fn binary() -> Dfa {
    parse_dfa(BINARY).expect("fixture parses")
}

pub fn evena() -> Dfa {
    parse_dfa(EVENA).expect("fixture parses")
}

pub fn fib() -> Dfa {
    parse_dfa(FIB).expect("fixture parses")
}

/// Looks up a shipped fixture by name (`ex5`, `binary`, `evena`, `fib`).
pub fn by_name(name: &str) -> Option<&'static str> {
    match name {
        "ex5" => Some(EX5),
        "binary" => Some(BINARY),
        "evena" => Some(EVENA),
        "fib" => Some(FIB),
        _ => None,
    }
}

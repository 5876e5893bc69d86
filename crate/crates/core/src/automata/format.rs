//! Line-oriented automaton text format.
//!
//! ```text
//! alphabet: a b c        # declaration order = total order
//! states: q0 q1 q2
//! initial: q0
//! final: q0 q1 q2
//! trans: q0 a q1
//! ```
//!
//! `#` starts a comment. `final:` and `trans:` may repeat; the other keys
//! appear exactly once. NFAs may list several initial states and repeat a
//! `(state, letter)` pair; DFAs may not.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::alphabet::Alphabet;
use super::dfa::{Dfa, StateId};
use super::nfa::Nfa;
use crate::error::{Error, Result};

struct Raw {
    alphabet: Alphabet,
    names: Vec<String>,
    initials: Vec<(usize, StateId)>,
    finals: Vec<bool>,
    saw_final: bool,
    trans: Vec<(usize, StateId, usize, StateId)>,
}

fn parse_raw(text: &str) -> Result<Raw> {
    let mut alphabet: Option<Alphabet> = None;
    let mut names: Option<(Vec<String>, HashMap<String, StateId>)> = None;
    let mut initial_tokens: Option<(usize, Vec<String>)> = None;
    let mut final_tokens: Vec<(usize, String)> = Vec::new();
    let mut saw_final = false;
    let mut trans_tokens: Vec<(usize, Vec<String>)> = Vec::new();

    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| Error::format(lineno, "expected `key: values`"))?;
        let tokens: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
        match key.trim() {
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(Error::format(lineno, "duplicate alphabet declaration"));
                }
                alphabet = Some(Alphabet::new(tokens).map_err(|e| relocate(e, lineno))?);
            }
            "states" => {
                if names.is_some() {
                    return Err(Error::format(lineno, "duplicate states declaration"));
                }
                let mut idx = HashMap::new();
                for (i, t) in tokens.iter().enumerate() {
                    if idx.insert(t.clone(), i).is_some() {
                        return Err(Error::format(lineno, format!("duplicate state {t:?}")));
                    }
                }
                if tokens.is_empty() {
                    return Err(Error::format(lineno, "no states declared"));
                }
                names = Some((tokens, idx));
            }
            "initial" => {
                if initial_tokens.is_some() {
                    return Err(Error::format(lineno, "duplicate initial declaration"));
                }
                initial_tokens = Some((lineno, tokens));
            }
            "final" => {
                saw_final = true;
                final_tokens.extend(tokens.into_iter().map(|t| (lineno, t)));
            }
            "trans" => {
                if tokens.len() != 3 {
                    return Err(Error::format(lineno, "expected `trans: state letter state`"));
                }
                trans_tokens.push((lineno, tokens));
            }
            other => return Err(Error::format(lineno, format!("unknown key {other:?}"))),
        }
    }

    let alphabet = alphabet.ok_or_else(|| Error::format(0, "missing alphabet"))?;
    let (names, idx) = names.ok_or_else(|| Error::format(0, "missing states"))?;
    let state = |line: usize, t: &str| {
        idx.get(t)
            .copied()
            .ok_or_else(|| Error::format(line, format!("undeclared state {t:?}")))
    };
    let (init_line, init_tokens) = initial_tokens.ok_or_else(|| Error::format(0, "missing initial state"))?;
    if init_tokens.is_empty() {
        return Err(Error::format(init_line, "missing initial state"));
    }
    let initials = init_tokens
        .iter()
        .map(|t| state(init_line, t).map(|q| (init_line, q)))
        .collect::<Result<Vec<_>>>()?;
    let mut finals = vec![false; names.len()];
    for (line, t) in &final_tokens {
        finals[state(*line, t)?] = true;
    }
    let mut trans = Vec::new();
    for (line, t) in &trans_tokens {
        let p = state(*line, &t[0])?;
        let l = alphabet
            .rank(&t[1])
            .ok_or_else(|| Error::format(*line, format!("undeclared letter {:?}", t[1])))?;
        let q = state(*line, &t[2])?;
        trans.push((*line, p, l, q));
    }
    Ok(Raw {
        alphabet,
        names,
        initials,
        finals,
        saw_final,
        trans,
    })
}

fn relocate(e: Error, line: usize) -> Error {
    match e {
        Error::Format { msg, .. } => Error::Format { line, msg },
        other => other,
    }
}

/// Parses a deterministic automaton. Alphabet order is declaration order.
pub fn parse_dfa(text: &str) -> Result<Dfa> {
    let raw = parse_raw(text)?;
    if raw.initials.len() != 1 {
        return Err(Error::format(raw.initials[0].0, "a DFA needs exactly one initial state"));
    }
    if !raw.saw_final || !raw.finals.iter().any(|&f| f) {
        return Err(Error::format(0, "missing final states"));
    }
    let mut delta = vec![vec![None; raw.alphabet.len()]; raw.names.len()];
    for &(_, p, l, q) in &raw.trans {
        if delta[p][l].is_some() {
            return Err(Error::Determinism {
                state: raw.names[p].clone(),
                letter: raw.alphabet.name(l).to_string(),
            });
        }
        delta[p][l] = Some(q);
    }
    Dfa::new(raw.alphabet, raw.names, raw.initials[0].1, raw.finals, delta)
}

/// Parses a nondeterministic automaton (several initial states allowed).
pub fn parse_nfa(text: &str) -> Result<Nfa> {
    let raw = parse_raw(text)?;
    if !raw.saw_final {
        return Err(Error::format(0, "missing final states"));
    }
    let mut initials = vec![false; raw.names.len()];
    for &(_, q) in &raw.initials {
        initials[q] = true;
    }
    let mut delta = vec![vec![Vec::new(); raw.alphabet.len()]; raw.names.len()];
    for &(_, p, l, q) in &raw.trans {
        delta[p][l].push(q);
    }
    Nfa::new(raw.alphabet, raw.names, initials, raw.finals, delta)
}

fn header(out: &mut String, alphabet: &Alphabet, names: &[String]) {
    writeln!(out, "alphabet: {}", alphabet.letters().join(" ")).unwrap();
    writeln!(out, "states: {}", names.join(" ")).unwrap();
}

fn select(names: &[String], mask: &[bool]) -> String {
    names
        .iter()
        .zip(mask)
        .filter(|(_, m)| **m)
        .map(|(n, _)| n.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Serializes a DFA; transitions are listed by source state, then letter.
pub fn write_dfa(d: &Dfa) -> String {
    let mut out = String::new();
    header(&mut out, d.alphabet(), d.names());
    writeln!(out, "initial: {}", d.name(d.initial())).unwrap();
    writeln!(out, "final: {}", select(d.names(), d.finals())).unwrap();
    for p in d.states() {
        for (l, q) in d.edges(p) {
            writeln!(out, "trans: {} {} {}", d.name(p), d.alphabet().name(l), d.name(q)).unwrap();
        }
    }
    out
}

pub fn write_nfa(m: &Nfa) -> String {
    let mut out = String::new();
    header(&mut out, m.alphabet(), m.names());
    writeln!(out, "initial: {}", select(m.names(), m.initials())).unwrap();
    writeln!(out, "final: {}", select(m.names(), m.finals())).unwrap();
    for p in 0..m.num_states() {
        for l in 0..m.alphabet().len() {
            for &q in m.targets(p, l) {
                writeln!(out, "trans: {} {} {}", m.name(p), m.alphabet().name(l), m.name(q)).unwrap();
            }
        }
    }
    out
}

/// Strips comments, blank lines and redundant whitespace.
pub fn normalize(text: &str) -> String {
    let mut out = String::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let joined = toks.join(" ");
        let joined = match joined.split_once(':') {
            Some((k, v)) => format!("{}: {}", k.trim(), v.trim()),
            None => joined,
        };
        out.push_str(joined.trim_end());
        out.push('\n');
    }
    out
}

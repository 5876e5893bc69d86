use std::collections::VecDeque;
use std::fmt;

use super::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};

/// Index of a state inside an automaton.
pub type StateId = usize;

/// Deterministic automaton with a partial transition function.
///
/// A missing transition denotes the implicit sink, which is never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    names: Vec<String>,
    initial: StateId,
    finals: Vec<bool>,
    delta: Vec<Vec<Option<StateId>>>,
}

impl fmt::Debug for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::format::write_dfa(self))
    }
}

impl Dfa {
    /// Builds an automaton from named transitions.
    ///
    /// `delta[q][σ]` is the target of `q` on letter `σ`.
    pub fn new(
        alphabet: Alphabet,
        names: Vec<String>,
        initial: StateId,
        finals: Vec<bool>,
        delta: Vec<Vec<Option<StateId>>>,
    ) -> Result<Self> {
        let n = names.len();
        if initial >= n {
            return Err(Error::format(0, "initial state out of range"));
        }
        if finals.len() != n || delta.len() != n {
            return Err(Error::format(0, "state tables have inconsistent sizes"));
        }
        for row in &delta {
            if row.len() != alphabet.len() {
                return Err(Error::format(0, "transition row has wrong width"));
            }
            if row.iter().flatten().any(|&t| t >= n) {
                return Err(Error::format(0, "transition target out of range"));
            }
        }
        Ok(Dfa {
            alphabet,
            names,
            initial,
            finals,
            delta,
        })
    }

    /// Convenience constructor from string triples; panics on bad input.
    /// Intended for tests and fixtures written in code.
    pub fn from_triples(
        letters: &[&str],
        states: &[&str],
        initial: &str,
        finals: &[&str],
        trans: &[(&str, &str, &str)],
    ) -> Self {
        let alphabet = Alphabet::new(letters.iter().copied()).unwrap();
        let idx = |s: &str| states.iter().position(|x| *x == s).unwrap();
        let mut delta = vec![vec![None; alphabet.len()]; states.len()];
        for (p, a, q) in trans {
            let l = alphabet.rank(a).unwrap();
            assert!(delta[idx(p)][l].is_none(), "duplicate transition");
            delta[idx(p)][l] = Some(idx(q));
        }
        let mut fin = vec![false; states.len()];
        for f in finals {
            fin[idx(f)] = true;
        }
        Dfa::new(
            alphabet,
            states.iter().map(|s| s.to_string()).collect(),
            idx(initial),
            fin,
            delta,
        )
        .unwrap()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.names.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> &[bool] {
        &self.finals
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name)
    }

    #[inline]
    pub fn step(&self, q: StateId, l: Letter) -> Option<StateId> {
        self.delta[q][l]
    }

    pub fn transitions(&self) -> &[Vec<Option<StateId>>] {
        &self.delta
    }

    /// Outgoing edges of `q` in letter order.
    pub fn edges(&self, q: StateId) -> impl Iterator<Item = (Letter, StateId)> + '_ {
        self.delta[q]
            .iter()
            .enumerate()
            .filter_map(|(l, t)| t.map(|t| (l, t)))
    }

    pub fn run_from(&self, q: StateId, w: &[Letter]) -> Option<StateId> {
        w.iter().try_fold(q, |s, &l| self.step(s, l))
    }

    pub fn run(&self, w: &[Letter]) -> Option<StateId> {
        self.run_from(self.initial, w)
    }

    pub fn accepts(&self, w: &[Letter]) -> bool {
        self.run(w).is_some_and(|q| self.finals[q])
    }

    /// Adjacency counts `A[p][q] = #{σ : p.σ = q}`.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let n = self.num_states();
        let mut a = vec![vec![0u32; n]; n];
        for p in self.states() {
            for (_, q) in self.edges(p) {
                a[p][q] += 1;
            }
        }
        a
    }

    /// States reachable from the initial state.
    pub fn accessible(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(p) = queue.pop_front() {
            for (_, q) in self.edges(p) {
                if !seen[q] {
                    seen[q] = true;
                    queue.push_back(q);
                }
            }
        }
        seen
    }

    /// States from which some final state is reachable.
    pub fn coaccessible(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut rev = vec![Vec::new(); n];
        for p in self.states() {
            for (_, q) in self.edges(p) {
                rev[q].push(p);
            }
        }
        let mut seen = self.finals.clone();
        let mut queue: VecDeque<_> = self.states().filter(|&q| self.finals[q]).collect();
        while let Some(q) = queue.pop_front() {
            for &p in &rev[q] {
                if !seen[p] {
                    seen[p] = true;
                    queue.push_back(p);
                }
            }
        }
        seen
    }

    /// Induced sub-automaton on the kept states. The initial state must be kept.
    /// Returns the new automaton and, for each new state, its old id.
    pub fn restrict(&self, keep: &[bool]) -> (Dfa, Vec<StateId>) {
        assert!(keep[self.initial], "initial state must be kept");
        let old: Vec<StateId> = self.states().filter(|&q| keep[q]).collect();
        let mut new_id = vec![None; self.num_states()];
        for (i, &q) in old.iter().enumerate() {
            new_id[q] = Some(i);
        }
        let delta = old
            .iter()
            .map(|&q| {
                self.delta[q]
                    .iter()
                    .map(|t| t.and_then(|t| new_id[t]))
                    .collect()
            })
            .collect();
        let d = Dfa {
            alphabet: self.alphabet.clone(),
            names: old.iter().map(|&q| self.names[q].clone()).collect(),
            initial: new_id[self.initial].unwrap(),
            finals: old.iter().map(|&q| self.finals[q]).collect(),
            delta,
        };
        (d, old)
    }

    /// Keeps exactly the states that are both accessible and coaccessible.
    pub fn trim(&self) -> Result<Dfa> {
        Ok(self.trim_with_map()?.0)
    }

    pub fn trim_with_map(&self) -> Result<(Dfa, Vec<StateId>)> {
        let acc = self.accessible();
        let co = self.coaccessible();
        if !co[self.initial] {
            return Err(Error::EmptyLanguage);
        }
        let keep: Vec<bool> = acc.iter().zip(&co).map(|(a, c)| *a && *c).collect();
        Ok(self.restrict(&keep))
    }

    /// Same transition structure with a different set of final states.
    pub fn with_finals(&self, finals: Vec<bool>) -> Dfa {
        assert_eq!(finals.len(), self.num_states());
        Dfa {
            finals,
            ..self.clone()
        }
    }

    /// Same transition structure with a different initial state.
    pub fn with_initial(&self, q: StateId) -> Dfa {
        Dfa {
            initial: q,
            ..self.clone()
        }
    }

    /// True when the accepted language is finite (and possibly empty).
    pub fn is_finite_language(&self) -> bool {
        match self.trim() {
            Err(_) => true,
            Ok(t) => super::scc::scc_decompose(&t)
                .components
                .iter()
                .all(|c| !c.nontrivial),
        }
    }

    /// All accepted words of length at most `max_len`, in genealogical order.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Vec<Letter>> {
        let mut out = Vec::new();
        let mut layer: Vec<(Vec<Letter>, StateId)> = vec![(Vec::new(), self.initial)];
        for len in 0..=max_len {
            for (w, q) in &layer {
                if self.finals[*q] {
                    out.push(w.clone());
                }
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for (w, q) in &layer {
                for (l, t) in self.edges(*q) {
                    let mut w2 = w.clone();
                    w2.push(l);
                    next.push((w2, t));
                }
            }
            layer = next;
        }
        out
    }
}

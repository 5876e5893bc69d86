use std::collections::HashMap;

use super::alphabet::{Alphabet, Letter};
use super::dfa::{Dfa, StateId};
use crate::error::{Error, Result};

/// Default cap on the number of subsets explored by determinization.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// Nondeterministic automaton without ε-moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    names: Vec<String>,
    initials: Vec<bool>,
    finals: Vec<bool>,
    /// `delta[q][σ]` lists the targets of `q` on `σ`, sorted and deduplicated.
    delta: Vec<Vec<Vec<StateId>>>,
}

impl Nfa {
    pub fn new(
        alphabet: Alphabet,
        names: Vec<String>,
        initials: Vec<bool>,
        finals: Vec<bool>,
        mut delta: Vec<Vec<Vec<StateId>>>,
    ) -> Result<Self> {
        let n = names.len();
        if initials.len() != n || finals.len() != n || delta.len() != n {
            return Err(Error::format(0, "state tables have inconsistent sizes"));
        }
        for row in delta.iter_mut() {
            if row.len() != alphabet.len() {
                return Err(Error::format(0, "transition row has wrong width"));
            }
            for targets in row.iter_mut() {
                if targets.iter().any(|&t| t >= n) {
                    return Err(Error::format(0, "transition target out of range"));
                }
                targets.sort_unstable();
                targets.dedup();
            }
        }
        Ok(Nfa {
            alphabet,
            names,
            initials,
            finals,
            delta,
        })
    }

    pub fn from_dfa(d: &Dfa) -> Nfa {
        let n = d.num_states();
        let mut initials = vec![false; n];
        initials[d.initial()] = true;
        let delta = d
            .transitions()
            .iter()
            .map(|row| row.iter().map(|t| t.iter().copied().collect()).collect())
            .collect();
        Nfa {
            alphabet: d.alphabet().clone(),
            names: d.names().to_vec(),
            initials,
            finals: d.finals().to_vec(),
            delta,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn initials(&self) -> &[bool] {
        &self.initials
    }

    pub fn finals(&self) -> &[bool] {
        &self.finals
    }

    pub fn targets(&self, q: StateId, l: Letter) -> &[StateId] {
        &self.delta[q][l]
    }

    pub fn transitions(&self) -> &[Vec<Vec<StateId>>] {
        &self.delta
    }

    /// Set of states reached from `from` on `w`.
    pub fn reach(&self, from: &[bool], w: &[Letter]) -> Vec<bool> {
        let mut cur = from.to_vec();
        for &l in w {
            let mut next = vec![false; self.num_states()];
            for q in 0..self.num_states() {
                if cur[q] {
                    for &t in &self.delta[q][l] {
                        next[t] = true;
                    }
                }
            }
            cur = next;
        }
        cur
    }

    pub fn accepts(&self, w: &[Letter]) -> bool {
        self.reach(&self.initials, w)
            .iter()
            .zip(&self.finals)
            .any(|(r, f)| *r && *f)
    }

    /// Subset construction. Only nonempty subsets become states.
    pub fn determinize(&self, cap: usize) -> Result<Dfa> {
        let n = self.num_states();
        let k = self.alphabet.len();
        let start: Vec<StateId> = (0..n).filter(|&q| self.initials[q]).collect();
        let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
        let mut subsets = vec![start.clone()];
        index.insert(start, 0);
        let mut delta: Vec<Vec<Option<StateId>>> = Vec::new();
        let mut i = 0;
        while i < subsets.len() {
            let mut row = vec![None; k];
            for (l, slot) in row.iter_mut().enumerate() {
                let mut next: Vec<StateId> = subsets[i]
                    .iter()
                    .flat_map(|&q| self.delta[q][l].iter().copied())
                    .collect();
                next.sort_unstable();
                next.dedup();
                if next.is_empty() {
                    continue;
                }
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        if subsets.len() >= cap {
                            return Err(Error::Explosion(cap));
                        }
                        let id = subsets.len();
                        index.insert(next.clone(), id);
                        subsets.push(next);
                        id
                    }
                };
                *slot = Some(id);
            }
            delta.push(row);
            i += 1;
        }
        let finals = subsets
            .iter()
            .map(|s| s.iter().any(|&q| self.finals[q]))
            .collect();
        let names = (0..subsets.len()).map(|i| format!("d{i}")).collect();
        Dfa::new(self.alphabet.clone(), names, 0, finals, delta)
    }
}

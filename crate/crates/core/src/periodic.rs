//! Periods, preperiods and ultimately periodic words of `ℒ∞`.
//!
//! A maximal cycle set is a maximal set of coaccessible states covered by one
//! closed walk that stays inside the set. Any such set lies in one strongly
//! connected component, and a nontrivial component admits a closed walk
//! through all its states, so the maximal sets are exactly the nontrivial
//! coaccessible components.

use std::collections::{HashMap, VecDeque};

use crate::automata::{minimize, scc_decompose, write_dfa, Dfa, Letter, Nfa, StateId, UpWord, Word};
use crate::automata::nfa::DEFAULT_STATE_CAP;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleSet {
    /// Member states, sorted.
    pub states: Vec<StateId>,
    /// Closed walk from `states[0]` visiting every member.
    pub witness: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleSets {
    pub sets: Vec<CycleSet>,
}

impl CycleSets {
    pub fn contains(&self, q: StateId) -> bool {
        self.sets.iter().any(|c| c.states.binary_search(&q).is_ok())
    }
}

/// Shortest path from `from` to `to` (nonempty when equal) inside `allowed`,
/// breadth-first in letter order.
fn shortest_path(d: &Dfa, from: StateId, to: StateId, allowed: &[bool]) -> Option<Word> {
    let mut parent: Vec<Option<(StateId, Letter)>> = vec![None; d.num_states()];
    let mut seen = vec![false; d.num_states()];
    let mut queue = VecDeque::from([from]);
    while let Some(s) = queue.pop_front() {
        for (l, t) in d.edges(s) {
            if !allowed[t] {
                continue;
            }
            if t == to {
                let mut out = vec![l];
                let mut c = s;
                while c != from {
                    let (p, l2) = parent[c].expect("visited");
                    out.push(l2);
                    c = p;
                }
                out.reverse();
                return Some(out);
            }
            if !seen[t] {
                seen[t] = true;
                parent[t] = Some((s, l));
                queue.push_back(t);
            }
        }
    }
    None
}

pub fn maximal_cycle_sets(d: &Dfa) -> CycleSets {
    let dec = scc_decompose(d);
    let mut sets: Vec<CycleSet> = dec
        .components
        .iter()
        .filter(|c| c.nontrivial && c.coaccessible)
        .map(|c| {
            let mut inside = vec![false; d.num_states()];
            c.states.iter().for_each(|&q| inside[q] = true);
            let mut witness = Vec::new();
            let k = c.states.len();
            for i in 0..k {
                let (a, b) = (c.states[i], c.states[(i + 1) % k]);
                witness.extend(shortest_path(d, a, b, &inside).expect("strongly connected"));
            }
            CycleSet { states: c.states.clone(), witness }
        })
        .collect();
    sets.sort_by_key(|c| c.states[0]);
    CycleSets { sets }
}

/// Union of one copy of each cycle set per choice of start state; the copy's
/// start is its unique initial and final state.
pub fn build_period_nfa(d: &Dfa, c: &CycleSets) -> Nfa {
    let mut names = Vec::new();
    let mut initials = Vec::new();
    let mut finals = Vec::new();
    let mut delta = Vec::new();
    for set in &c.sets {
        for &start in &set.states {
            let base = names.len();
            let local = |q: StateId| set.states.binary_search(&q).ok();
            for &q in &set.states {
                names.push(format!("{}@{}", d.name(q), d.name(start)));
                initials.push(q == start);
                finals.push(q == start);
                let row = (0..d.alphabet().len())
                    .map(|l| d.step(q, l).and_then(local).map(|i| base + i).into_iter().collect())
                    .collect();
                delta.push(row);
            }
        }
    }
    Nfa::new(d.alphabet().clone(), names, initials, finals, delta).expect("consistent construction")
}

/// Boolean relation on NFA states, rows as bitsets.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Rel {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Rel {
    fn identity(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        let mut r = Rel { n, words, bits: vec![0; n * words] };
        for i in 0..n {
            r.set(i, i);
        }
        r
    }

    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    /// `self` followed by the letter relation `step`.
    fn then(&self, step: &Rel) -> Rel {
        let mut out = Rel { n: self.n, words: self.words, bits: vec![0; self.bits.len()] };
        for i in 0..self.n {
            for j in ones(self.row(i)) {
                for (o, s) in out.bits[i * self.words..(i + 1) * self.words].iter_mut().zip(step.row(j)) {
                    *o |= s;
                }
            }
        }
        out
    }

    /// Image of the set `s` under the relation.
    fn image(&self, s: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.words];
        for i in ones(s) {
            for (o, r) in out.iter_mut().zip(self.row(i)) {
                *o |= r;
            }
        }
        out
    }
}

fn ones(s: &[u64]) -> impl Iterator<Item = usize> + '_ {
    s.iter().enumerate().flat_map(|(w, &b)| (0..64).filter(move |i| b >> i & 1 == 1).map(move |i| w * 64 + i))
}

fn bitset(flags: &[bool]) -> Vec<u64> {
    let mut out = vec![0; flags.len().div_ceil(64).max(1)];
    for (i, _) in flags.iter().enumerate().filter(|x| *x.1) {
        out[i / 64] |= 1 << (i % 64);
    }
    out
}

/// DFA over the transition relations of `m`: reading `u` leads to the state
/// keyed by the relation of `u`. A word is accepted when `u^k ∈ L(m)` for
/// some `k ∈ powers`. With `drop_empty`, the empty word gets its own start
/// state and is rejected.
fn roots_union(m: &Nfa, powers: &[usize], drop_empty: bool, cap: usize) -> Result<Dfa> {
    let n = m.num_states();
    let k = m.alphabet().len();
    let letters: Vec<Rel> = (0..k)
        .map(|l| {
            let mut r = Rel::identity(n);
            r.bits.iter_mut().for_each(|b| *b = 0);
            for q in 0..n {
                for &t in m.targets(q, l) {
                    r.set(q, t);
                }
            }
            r
        })
        .collect();
    let init = bitset(m.initials());
    let fin = bitset(m.finals());
    let accepts = |r: &Rel| {
        let mut s = init.clone();
        let top = powers.iter().copied().max().unwrap_or(0);
        for e in 1..=top {
            s = r.image(&s);
            if powers.contains(&e) && s.iter().zip(&fin).any(|(a, b)| a & b != 0) {
                return true;
            }
        }
        false
    };

    let mut rels = vec![Rel::identity(n)];
    let mut index: HashMap<Rel, StateId> = HashMap::new();
    if !drop_empty {
        index.insert(rels[0].clone(), 0);
    }
    let mut delta: Vec<Vec<Option<StateId>>> = Vec::new();
    let mut i = 0;
    while i < rels.len() {
        let mut row = vec![None; k];
        for (l, slot) in row.iter_mut().enumerate() {
            let next = rels[i].then(&letters[l]);
            if next.is_empty() {
                continue;
            }
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    if rels.len() >= cap {
                        return Err(Error::Explosion(cap));
                    }
                    index.insert(next.clone(), rels.len());
                    rels.push(next);
                    rels.len() - 1
                }
            };
            *slot = Some(id);
        }
        delta.push(row);
        i += 1;
    }
    let mut finals: Vec<bool> = rels.iter().map(accepts).collect();
    if drop_empty {
        finals[0] = false;
    } else {
        // ε ∈ √k L iff ε ∈ L.
        finals[0] = init.iter().zip(&fin).any(|(a, b)| a & b != 0);
    }
    let names = (0..rels.len()).map(|i| format!("r{i}")).collect();
    let d = Dfa::new(m.alphabet().clone(), names, 0, finals, delta)?;
    Ok(minimize(&d))
}

/// `{u : u^k ∈ L(m)}`, minimized.
pub fn kth_root(m: &Nfa, k: usize) -> Result<Dfa> {
    kth_root_capped(m, k, DEFAULT_STATE_CAP)
}

pub fn kth_root_capped(m: &Nfa, k: usize, cap: usize) -> Result<Dfa> {
    if k == 0 {
        return Err(Error::domain("the root index must be at least 1"));
    }
    roots_union(m, &[k], false, cap)
}

/// The nonempty words `v` with `u·v^ω ∈ ℒ∞` for some `u`: the union of the
/// `k`-th roots of the period automaton for `k ≤ #Q`, without `ε`.
pub fn per_language(d: &Dfa) -> Result<Dfa> {
    let m = build_period_nfa(d, &maximal_cycle_sets(d));
    let powers: Vec<usize> = (1..=d.num_states()).collect();
    roots_union(&m, &powers, true, DEFAULT_STATE_CAP)
}

/// The words `u` with `u·v^ω ∈ ℒ∞` for some nonempty `v`: those leading to a
/// state of a maximal cycle set.
pub fn aper_language(d: &Dfa) -> Dfa {
    let c = maximal_cycle_sets(d);
    let finals = d.states().map(|q| c.contains(q)).collect();
    minimize(&d.with_finals(finals))
}

/// One block `L(prefix)·L(period)^ω` of an ω-rational expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaBlock {
    pub state: StateId,
    pub prefix: Dfa,
    pub period: Dfa,
}

/// Finite union of blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaRegExpr {
    pub blocks: Vec<OmegaBlock>,
}

impl OmegaRegExpr {
    /// Blocks in the standard automaton format, each introduced by a comment.
    pub fn to_text(&self, d: &Dfa) -> String {
        let mut out = String::new();
        for (i, b) in self.blocks.iter().enumerate() {
            out.push_str(&format!("# block {i} at {}: prefix\n", d.name(b.state)));
            out.push_str(&write_dfa(&b.prefix));
            out.push_str(&format!("# block {i} at {}: period\n", d.name(b.state)));
            out.push_str(&write_dfa(&b.period));
        }
        out
    }
}

/// One block per state `q` of a maximal cycle set `C`: the words leading to
/// `q`, followed by the ω-power of the nonempty `k`-th roots (`k ≤ #C`) of
/// the closed walks at `q` inside `C`.
pub fn uper_omega(d: &Dfa) -> Result<OmegaRegExpr> {
    let c = maximal_cycle_sets(d);
    let mut blocks = Vec::new();
    for set in &c.sets {
        for &q in &set.states {
            let only = CycleSets { sets: vec![CycleSet { states: set.states.clone(), witness: Vec::new() }] };
            let full = build_period_nfa(d, &only);
            let at = set.states.binary_search(&q).expect("member");
            // keep only the copy started at q
            let copy: Vec<bool> = (0..full.num_states()).map(|i| i / set.states.len() == at).collect();
            let m = restrict_nfa(&full, &copy);
            let powers: Vec<usize> = (1..=set.states.len()).collect();
            let period = roots_union(&m, &powers, true, DEFAULT_STATE_CAP)?;
            let mut finals = vec![false; d.num_states()];
            finals[q] = true;
            let prefix = minimize(&d.with_finals(finals));
            blocks.push(OmegaBlock { state: q, prefix, period });
        }
    }
    Ok(OmegaRegExpr { blocks })
}

fn restrict_nfa(m: &Nfa, keep: &[bool]) -> Nfa {
    let ids: Vec<StateId> = (0..m.num_states()).filter(|&q| keep[q]).collect();
    let new = |q: StateId| ids.binary_search(&q).ok();
    let delta = ids
        .iter()
        .map(|&q| {
            (0..m.alphabet().len())
                .map(|l| m.targets(q, l).iter().filter_map(|&t| new(t)).collect())
                .collect()
        })
        .collect();
    Nfa::new(
        m.alphabet().clone(),
        ids.iter().map(|&q| m.name(q).to_string()).collect(),
        ids.iter().map(|&q| m.initials()[q]).collect(),
        ids.iter().map(|&q| m.finals()[q]).collect(),
        delta,
    )
    .expect("restriction of a valid automaton")
}

/// Whether `u·v^ω` belongs to `ℒ∞`: its run never leaves the coaccessible
/// states. After `u`, the states reached at the starts of the copies of `v`
/// repeat within `#Q + 1` copies, which bounds the check.
pub fn is_up_in_linfty(d: &Dfa, w: &UpWord) -> bool {
    let co = d.coaccessible();
    let mut q = d.initial();
    if !co[q] {
        return false;
    }
    let walk = |q: StateId, x: &[Letter]| -> Option<StateId> {
        let mut q = q;
        for &l in x {
            q = d.step(q, l).filter(|&p| co[p])?;
        }
        Some(q)
    };
    match walk(q, w.preperiod()) {
        Some(p) => q = p,
        None => return false,
    }
    let mut seen = vec![false; d.num_states()];
    while !seen[q] {
        seen[q] = true;
        match walk(q, w.period()) {
            Some(p) => q = p,
            None => return false,
        }
    }
    true
}

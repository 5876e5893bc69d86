use std::collections::{HashMap, VecDeque};

use super::dfa::{Dfa, StateId};

/// Minimal automaton of the same language.
pub fn minimize(d: &Dfa) -> Dfa {
    minimize_with_provenance(d).0
}

/// Minimal automaton plus, for each new state, the sorted list of input
/// states merged into it.
///
/// States are numbered in breadth-first order from the initial state, taking
/// letters in alphabet order, so equal languages give identical automata up
/// to state names. Each new state keeps the name of its smallest member.
/// States with empty future (the implicit sink's class) are dropped.
pub fn minimize_with_provenance(d: &Dfa) -> (Dfa, Vec<Vec<StateId>>) {
    let n = d.num_states();
    let k = d.alphabet().len();
    let sink = n;
    let target = |p: StateId, l: usize| -> StateId {
        if p == sink {
            sink
        } else {
            d.step(p, l).unwrap_or(sink)
        }
    };

    // Moore refinement on the completed automaton.
    let mut class: Vec<usize> = (0..=n)
        .map(|p| usize::from(p != sink && d.is_final(p)))
        .collect();
    let mut count = if class.contains(&1) { 2 } else { 1 };
    if count == 1 {
        class.iter_mut().for_each(|c| *c = 0);
    }
    loop {
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut next = vec![0; n + 1];
        for p in 0..=n {
            let mut sig = Vec::with_capacity(k + 1);
            sig.push(class[p]);
            sig.extend((0..k).map(|l| class[target(p, l)]));
            let len = ids.len();
            next[p] = *ids.entry(sig).or_insert(len);
        }
        let new_count = ids.len();
        class = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }

    let dead = class[sink];
    let mut members: Vec<Vec<StateId>> = vec![Vec::new(); count];
    for p in 0..n {
        members[class[p]].push(p);
    }

    // Breadth-first renumbering of live classes.
    let start = class[d.initial()];
    let mut new_id: HashMap<usize, StateId> = HashMap::new();
    let mut order = Vec::new();
    if start != dead {
        new_id.insert(start, 0);
        order.push(start);
    }
    let mut queue: VecDeque<usize> = order.iter().copied().collect();
    while let Some(c) = queue.pop_front() {
        let rep = members[c][0];
        for l in 0..k {
            let t = class[target(rep, l)];
            if t != dead && !new_id.contains_key(&t) {
                new_id.insert(t, order.len());
                order.push(t);
                queue.push_back(t);
            }
        }
    }

    if order.is_empty() {
        // Empty language: a lone non-final state.
        let out = Dfa::new(
            d.alphabet().clone(),
            vec![d.name(d.initial()).to_string()],
            0,
            vec![false],
            vec![vec![None; k]],
        )
        .expect("well-formed");
        return (out, vec![members[start].clone()]);
    }

    let names = order.iter().map(|&c| d.name(members[c][0]).to_string()).collect();
    let finals = order.iter().map(|&c| d.is_final(members[c][0])).collect();
    let delta = order
        .iter()
        .map(|&c| {
            let rep = members[c][0];
            (0..k)
                .map(|l| new_id.get(&class[target(rep, l)]).copied())
                .collect()
        })
        .collect();
    let out = Dfa::new(d.alphabet().clone(), names, 0, finals, delta).expect("well-formed");
    let prov = order.iter().map(|&c| members[c].clone()).collect();
    (out, prov)
}

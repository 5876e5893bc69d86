use super::dfa::{Dfa, StateId};

/// One strongly connected component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scc {
    /// Member states, sorted.
    pub states: Vec<StateId>,
    /// Has at least one internal edge (a self-loop counts).
    pub nontrivial: bool,
    /// Some final state is reachable from the component.
    pub coaccessible: bool,
}

/// SCC partition together with the condensation DAG.
#[derive(Clone, Debug)]
pub struct SccDecomposition {
    /// Components in reverse topological order (sinks of the DAG first),
    /// as produced by Tarjan's algorithm.
    pub components: Vec<Scc>,
    /// Component index of each state.
    pub comp_of: Vec<usize>,
    /// `succ[i]` lists the distinct components reached by an edge leaving
    /// component `i`, sorted.
    pub succ: Vec<Vec<usize>>,
}

impl SccDecomposition {
    /// Component indices in topological order (sources first).
    pub fn topological(&self) -> impl Iterator<Item = usize> {
        (0..self.components.len()).rev()
    }
}

/// Tarjan's algorithm, iterative so deep automata do not overflow the stack.
pub fn scc_decompose(d: &Dfa) -> SccDecomposition {
    let n = d.num_states();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp_of = vec![UNSEEN; n];
    let mut groups: Vec<Vec<StateId>> = Vec::new();
    let mut counter = 0;

    let succs: Vec<Vec<StateId>> = d.states().map(|p| d.edges(p).map(|(_, q)| q).collect()).collect();

    for root in d.states() {
        if index[root] != UNSEEN {
            continue;
        }
        // (state, next successor position)
        let mut call: Vec<(StateId, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&(v, pos)) = call.last() {
            if pos < succs[v].len() {
                let w = succs[v][pos];
                call.last_mut().unwrap().1 += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut group = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp_of[w] = groups.len();
                        group.push(w);
                        if w == v {
                            break;
                        }
                    }
                    group.sort_unstable();
                    groups.push(group);
                }
            }
        }
    }

    let co = d.coaccessible();
    let mut succ = vec![Vec::new(); groups.len()];
    let mut nontrivial = vec![false; groups.len()];
    for p in d.states() {
        for &q in &succs[p] {
            let (cp, cq) = (comp_of[p], comp_of[q]);
            if cp == cq {
                nontrivial[cp] = true;
            } else {
                succ[cp].push(cq);
            }
        }
    }
    for s in succ.iter_mut() {
        s.sort_unstable();
        s.dedup();
    }
    let components = groups
        .into_iter()
        .enumerate()
        .map(|(i, states)| Scc {
            coaccessible: states.iter().any(|&q| co[q]),
            nontrivial: nontrivial[i],
            states,
        })
        .collect();
    SccDecomposition {
        components,
        comp_of,
        succ,
    }
}

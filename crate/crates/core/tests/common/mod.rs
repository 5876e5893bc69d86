//! Oracles shared by the integration tests.
#![allow(dead_code)]

use numera::automata::{Alphabet, Dfa, Letter, Nfa, Word};
use rand::Rng;

/// Every word over `k` letters of length at most `max_len`, in genealogical
/// order.
pub fn all_words(k: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| (0..k).map(move |l| [w.as_slice(), &[l]].concat()))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// The first `n` accepted words in genealogical order, by enumeration.
pub fn first_words(d: &Dfa, n: usize) -> Vec<Word> {
    let k = d.alphabet().len();
    let mut out = Vec::new();
    let mut layer: Vec<Word> = vec![Vec::new()];
    let mut len = 0;
    while out.len() < n {
        out.extend(layer.iter().filter(|w| d.accepts(w)).cloned());
        layer = layer
            .iter()
            .flat_map(|w| (0..k).map(move |l| [w.as_slice(), &[l]].concat()))
            .collect();
        len += 1;
        assert!(len < 64, "language too sparse to enumerate");
    }
    out.truncate(n);
    out
}

pub fn power(u: &[Letter], k: usize) -> Word {
    u.repeat(k)
}

/// Random NFA over `{a, b}` with `n` states: each transition present with
/// probability 1/3, each state initial or final with probability 1/3.
pub fn random_nfa(rng: &mut impl Rng, n: usize) -> Nfa {
    let alphabet = Alphabet::new(["a", "b"]).unwrap();
    let names = (0..n).map(|i| format!("s{i}")).collect();
    let flags = |rng: &mut dyn rand::RngCore| (0..n).map(|_| rng.gen_range(0..3) == 0).collect::<Vec<bool>>();
    let initials = flags(rng);
    let finals = flags(rng);
    let delta = (0..n)
        .map(|_| (0..2).map(|_| (0..n).filter(|_| rng.gen_range(0..3) == 0).collect()).collect())
        .collect();
    Nfa::new(alphabet, names, initials, finals, delta).unwrap()
}

/// States lying on a cycle from which a final state is reachable.
pub fn cyclic_coaccessible(d: &Dfa) -> Vec<bool> {
    let n = d.num_states();
    let reach = |from: usize| -> Vec<bool> {
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = d.edges(from).map(|(_, t)| t).collect();
        while let Some(p) = stack.pop() {
            if !seen[p] {
                seen[p] = true;
                stack.extend(d.edges(p).map(|(_, t)| t));
            }
        }
        seen
    };
    (0..n)
        .map(|q| {
            let r = reach(q);
            r[q] && (d.is_final(q) || (0..n).any(|p| r[p] && d.is_final(p)))
        })
        .collect()
}

/// `w ∈ per(L)`: some state on a coaccessible cycle returns to itself on
/// `w^t`, `1 ≤ t ≤ #Q`.
pub fn per_oracle(d: &Dfa, w: &[Letter]) -> bool {
    if w.is_empty() {
        return false;
    }
    let c = cyclic_coaccessible(d);
    d.states()
        .filter(|&q| c[q])
        .any(|q| (1..=d.num_states()).any(|t| d.run_from(q, &power(w, t)) == Some(q)))
}

/// Greedy base-2 digits of `p/q ∈ [0, 1)`, or `1^n` at 1.
pub fn binary_digits(p: u64, q: u64, n: usize) -> Word {
    if p == q {
        return vec![1; n];
    }
    let mut r = p;
    (0..n)
        .map(|_| {
            r *= 2;
            let d = (r >= q) as usize;
            r -= d as u64 * q;
            d
        })
        .collect()
}

//! The β-coefficients of an infinite word and the transducer producing them.

use std::collections::HashMap;

use crate::automata::{Dfa, Letter, StateId, UpWord};
use crate::error::{Error, Result};

/// Edge `from --letter--> to` of the β-transducer with its output vector:
/// `counts[i] = #{τ < letter : from.τ = q_i} + [i = q0]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransducerEdge {
    pub from: StateId,
    pub letter: Letter,
    pub to: StateId,
    pub counts: Vec<u32>,
}

/// Output vector of reading `l` from `p`.
pub fn transducer_output(d: &Dfa, p: StateId, l: Letter) -> Vec<u32> {
    let mut counts = vec![0u32; d.num_states()];
    for tau in 0..l {
        if let Some(t) = d.step(p, tau) {
            counts[t] += 1;
        }
    }
    counts[d.initial()] += 1;
    counts
}

/// All edges of the β-transducer, by source state then letter.
pub fn transducer(d: &Dfa) -> Vec<TransducerEdge> {
    d.states()
        .flat_map(|p| {
            d.edges(p).map(move |(l, to)| TransducerEdge {
                from: p,
                letter: l,
                to,
                counts: transducer_output(d, p, l),
            })
        })
        .collect()
}

/// β-coefficients `beta[q][j]` for `j < len`, plus per-state minimal
/// preperiod and period when the input word is ultimately periodic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaCoeffs {
    pub beta: Vec<Vec<u32>>,
    /// `(r_q, p_q)` per state.
    pub periodicity: Option<Vec<(usize, usize)>>,
}

impl BetaCoeffs {
    pub fn len(&self) -> usize {
        self.beta.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `r = max r_q`.
    pub fn preperiod(&self) -> Option<usize> {
        self.periodicity.as_ref().map(|v| v.iter().map(|x| x.0).max().unwrap_or(0))
    }

    /// `p = lcm p_q`.
    pub fn period(&self) -> Option<usize> {
        self.periodicity
            .as_ref()
            .map(|v| v.iter().fold(1, |acc, x| num_integer::lcm(acc, x.1)))
    }
}

fn read(d: &Dfa, w: impl Iterator<Item = Letter>, len: usize, render: impl Fn(usize) -> String) -> Result<Vec<Vec<u32>>> {
    let mut beta = vec![Vec::with_capacity(len); d.num_states()];
    let mut q = d.initial();
    for (j, l) in w.take(len).enumerate() {
        let out = transducer_output(d, q, l);
        for (i, c) in out.into_iter().enumerate() {
            beta[i].push(c);
        }
        q = d.step(q, l).ok_or_else(|| Error::NotALeftFactor(render(j + 1)))?;
    }
    Ok(beta)
}

/// β-coefficients of a finite prefix, for `j < min(horizon, |w|)`.
pub fn beta_coefficients(d: &Dfa, w: &[Letter], horizon: usize) -> Result<BetaCoeffs> {
    let len = horizon.min(w.len());
    let beta = read(d, w.iter().copied(), len, |n| d.alphabet().render(&w[..n]))?;
    Ok(BetaCoeffs { beta, periodicity: None })
}

/// β-coefficients of `u·v^ω` for `j < horizon`, with the per-state
/// periodicity detected from the joint (state, phase) cycle.
pub fn beta_coefficients_up(d: &Dfa, w: &UpWord, horizon: usize) -> Result<BetaCoeffs> {
    let (u, v) = (w.preperiod(), w.period());
    // Joint preperiod R and period T of the (state, phase in v) sequence.
    let mut seen: HashMap<(StateId, usize), usize> = HashMap::new();
    let mut q = d.initial();
    let mut j = 0;
    let (big_r, big_t) = loop {
        if j >= u.len() {
            let phase = (j - u.len()) % v.len();
            if let Some(&i) = seen.get(&(q, phase)) {
                break (i, j - i);
            }
            seen.insert((q, phase), j);
        }
        q = d
            .step(q, w.at(j))
            .ok_or_else(|| Error::NotALeftFactor(d.alphabet().render(&w.prefix(j + 1))))?;
        j += 1;
    };
    let need = (big_r + 2 * big_t).max(horizon);
    let full = read(d, (0..).map(|i| w.at(i)), need, |n| d.alphabet().render(&w.prefix(n)))?;
    let periodicity = full
        .iter()
        .map(|b| {
            let p = (1..=big_t)
                .find(|&p| big_t % p == 0 && (big_r..big_r + big_t).all(|i| b[i] == b[i + p]))
                .expect("T is a period");
            let mut r = big_r;
            while r > 0 && b[r - 1] == b[r - 1 + p] {
                r -= 1;
            }
            (r, p)
        })
        .collect();
    let beta = full.into_iter().map(|mut b| {
        b.truncate(horizon);
        b
    });
    Ok(BetaCoeffs {
        beta: beta.collect(),
        periodicity: Some(periodicity),
    })
}

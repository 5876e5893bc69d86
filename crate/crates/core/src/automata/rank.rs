//! Genealogical ranking (`val`) and unranking (`rep`) of the words of a
//! regular language, driven by the counting tables.

use num_bigint::BigUint;
use num_traits::Zero;

use super::alphabet::{Letter, Word};
use super::dfa::Dfa;
use crate::counting::CountingTables;
use crate::error::{Error, Result};

/// Number of words of the language that are genealogically smaller than `w`.
pub fn genealogical_val(d: &Dfa, w: &[Letter]) -> Result<BigUint> {
    if !d.accepts(w) {
        return Err(Error::NotInLanguage(d.alphabet().render(w)));
    }
    let t = CountingTables::new(d, w.len());
    let q0 = d.initial();
    let mut total: BigUint = (0..w.len()).map(|i| t.u(q0, i)).sum();
    let mut q = q0;
    for (j, &l) in w.iter().enumerate() {
        let rest = w.len() - j - 1;
        for s in 0..l {
            if let Some(t_state) = d.step(q, s) {
                total += t.u(t_state, rest);
            }
        }
        q = d.step(q, l).expect("accepted word stays in the automaton");
    }
    Ok(total)
}

/// The `n`-th word (0-based) of the language in genealogical order.
pub fn genealogical_rep(d: &Dfa, n: &BigUint) -> Result<Word> {
    let q0 = d.initial();
    let finite = d.is_finite_language();
    // Words of a finite language are shorter than the number of states.
    let cap = if finite { d.num_states() } else { usize::MAX };
    let mut t = CountingTables::new(d, 0);
    let mut below = BigUint::zero();
    let mut len = 0;
    loop {
        if len >= cap {
            return Err(Error::domain(format!(
                "the language has only {below} words; index {n} is out of range"
            )));
        }
        t.extend_to(d, len);
        let here = t.u(q0, len);
        if &(&below + here) > n {
            break;
        }
        below += here;
        len += 1;
    }
    let mut r = n - &below;
    let mut q = q0;
    let mut out = Vec::with_capacity(len);
    for j in 0..len {
        let rest = len - j - 1;
        let mut chosen = None;
        for (l, next) in d.edges(q) {
            let c = t.u(next, rest);
            if r < *c {
                chosen = Some((l, next));
                break;
            }
            r -= c;
        }
        let (l, next) = chosen.ok_or_else(|| Error::Internal("ranking tables inconsistent".into()))?;
        out.push(l);
        q = next;
    }
    Ok(out)
}

/// Convenience wrapper for small indices.
pub fn rep_usize(d: &Dfa, n: usize) -> Result<Word> {
    genealogical_rep(d, &BigUint::from(n))
}

/// `val` as a machine integer; panics on overflow (test helper).
pub fn val_usize(d: &Dfa, w: &[Letter]) -> Result<usize> {
    let v = genealogical_val(d, w)?;
    Ok(v.try_into().expect("value fits in usize"))
}

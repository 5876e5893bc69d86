use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::automata::{Dfa, StateId};

/// Exact counts `u_q(n)` (words of length `n` accepted from `q`) and their
/// running sums `v_q(n)`, for `n = 0..=horizon`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingTables {
    u: Vec<Vec<BigUint>>,
    v: Vec<Vec<BigUint>>,
}

impl CountingTables {
    pub fn new(d: &Dfa, horizon: usize) -> Self {
        let u0: Vec<Vec<BigUint>> = d
            .states()
            .map(|q| vec![if d.is_final(q) { BigUint::one() } else { BigUint::zero() }])
            .collect();
        let mut t = CountingTables { v: u0.clone(), u: u0 };
        t.extend_to(d, horizon);
        t
    }

    pub fn horizon(&self) -> usize {
        self.u.first().map_or(0, |r| r.len() - 1)
    }

    pub fn num_states(&self) -> usize {
        self.u.len()
    }

    /// Grows the tables so that `horizon() >= n`.
    pub fn extend_to(&mut self, d: &Dfa, n: usize) {
        while self.horizon() < n {
            let m = self.horizon();
            let next: Vec<BigUint> = d
                .states()
                .map(|q| d.edges(q).map(|(_, t)| &self.u[t][m]).sum())
                .collect();
            for (q, x) in next.into_iter().enumerate() {
                let s = &self.v[q][m] + &x;
                self.v[q].push(s);
                self.u[q].push(x);
            }
        }
    }

    pub fn u(&self, q: StateId, n: usize) -> &BigUint {
        &self.u[q][n]
    }

    pub fn v(&self, q: StateId, n: usize) -> &BigUint {
        &self.v[q][n]
    }

    pub fn u_row(&self, q: StateId) -> &[BigUint] {
        &self.u[q]
    }

    pub fn v_row(&self, q: StateId) -> &[BigUint] {
        &self.v[q]
    }
}

/// Builds the tables up to `n_max`.
pub fn count_u_v(d: &Dfa, n_max: usize) -> CountingTables {
    CountingTables::new(d, n_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn brute(d: &Dfa, n: usize) -> Vec<u64> {
        let words = d.words_up_to(n);
        (0..=n).map(|k| words.iter().filter(|w| w.len() == k).count() as u64).collect()
    }

    fn row(t: &CountingTables, q: StateId) -> Vec<u64> {
        t.u_row(q).iter().map(|x| x.try_into().unwrap()).collect()
    }

    #[test]
    fn ex5_counts() {
        let d = fixtures::ex5();
        let t = count_u_v(&d, 5);
        assert_eq!(row(&t, 0), vec![1, 1, 3, 5, 11, 21]);
        assert_eq!(row(&t, 0), brute(&d, 5));
    }

    #[test]
    fn binary_and_fib_counts() {
        let t = count_u_v(&fixtures::binary(), 10);
        for n in 1..=10 {
            assert_eq!(*t.u(0, n), BigUint::from(1u32) << (n - 1));
        }
        let d = fixtures::fib();
        let t = count_u_v(&d, 5);
        assert_eq!(row(&t, 0), vec![1, 1, 1, 2, 3, 5]);
        assert_eq!(row(&t, 0), brute(&d, 5));
    }

    #[test]
    fn recurrence_and_sums() {
        for d in [fixtures::ex5(), fixtures::binary(), fixtures::evena(), fixtures::fib()] {
            let t = count_u_v(&d, 60);
            for q in d.states() {
                let mut acc = BigUint::zero();
                for n in 0..=60 {
                    if n > 0 {
                        let s: BigUint = d.edges(q).map(|(_, p)| t.u(p, n - 1)).sum();
                        assert_eq!(&s, t.u(q, n));
                    }
                    acc += t.u(q, n);
                    assert_eq!(&acc, t.v(q, n));
                }
            }
        }
    }
}

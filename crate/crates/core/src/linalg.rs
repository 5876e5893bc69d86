//! Gaussian elimination over ℚ(θ).

use crate::algnum::AlgNum;

/// Outcome of solving a (possibly overdetermined) linear system.
#[derive(Clone, Debug)]
pub enum Solution {
    Unique(Vec<AlgNum>),
    Inconsistent,
    /// Consistent with this many degrees of freedom left.
    Underdetermined(usize),
}

/// Solves `m · x = rhs`. `m` has one row per equation.
pub fn solve(mut m: Vec<Vec<AlgNum>>, mut rhs: Vec<AlgNum>) -> Solution {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        rhs.swap(r, p);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for j in c..cols {
            m[r][j] = &m[r][j] * &inv;
        }
        rhs[r] = &rhs[r] * &inv;
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone();
            for j in c..cols {
                let t = &m[r][j] * &factor;
                m[i][j] = &m[i][j] - &t;
            }
            let t = &rhs[r] * &factor;
            rhs[i] = &rhs[i] - &t;
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if rhs[r..].iter().any(|x| !x.is_zero()) {
        return Solution::Inconsistent;
    }
    if pivots.len() < cols {
        return Solution::Underdetermined(cols - pivots.len());
    }
    let mut x = vec![None; cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = Some(rhs[i].clone());
    }
    Solution::Unique(x.into_iter().map(|v| v.expect("every column has a pivot")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algnum::AlgField;
    use crate::poly::{q, qi, Poly};

    #[test]
    fn small_systems() {
        let f = AlgField::new(Poly::from_ints(&[-1, -1, 1]), q(3, 2), qi(2)).unwrap();
        let t = f.theta();
        // x + y = θ, x − y = 1
        let m = vec![vec![f.one(), f.one()], vec![f.one(), f.from_int(-1)]];
        match solve(m, vec![t.clone(), f.one()]) {
            Solution::Unique(x) => {
                assert_eq!(&x[0] + &x[1], t);
                assert_eq!(&x[0] - &x[1], f.one());
            }
            other => panic!("{other:?}"),
        }
        let m = vec![vec![f.one(), f.one()], vec![f.from_int(2), f.from_int(2)]];
        assert!(matches!(solve(m.clone(), vec![f.one(), f.from_int(2)]), Solution::Underdetermined(1)));
        assert!(matches!(solve(m, vec![f.one(), f.one()]), Solution::Inconsistent));
    }
}

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use super::tables::CountingTables;
use crate::algnum::{AlgField, AlgNum};
use crate::automata::{scc_decompose, Dfa, StateId};
use crate::error::{Error, Result};
use crate::linalg::{solve, Solution};
use crate::poly::{char_poly, isolate_largest_root_above, qi, Poly, Q};

/// Default horizon for numeric estimates.
pub const DEFAULT_HORIZON: usize = 200;
/// Default tolerance of the exact-versus-numeric cross-check.
pub const DEFAULT_CROSS_CHECK_TOL: f64 = 1e-6;

fn require_trim(d: &Dfa) -> Result<()> {
    let t = d.trim()?;
    if t.num_states() != d.num_states() {
        return Err(Error::domain("the automaton must be trim (every state accessible and coaccessible)"));
    }
    Ok(())
}

fn adjacency_i64(d: &Dfa, states: &[StateId]) -> Vec<Vec<i64>> {
    let full = d.adjacency();
    states
        .iter()
        .map(|&p| states.iter().map(|&q| i64::from(full[p][q])).collect())
        .collect()
}

/// The Perron root θ of a trim automaton with an infinite language: the
/// largest real root of the characteristic polynomial of its adjacency
/// matrix, which must exceed 1.
///
/// The returned field's modulus is the squarefree part of the characteristic
/// polynomial with the factors `x` removed, or `x − k` when θ is an integer.
pub fn perron_theta(d: &Dfa) -> Result<AlgField> {
    require_trim(d)?;
    let states: Vec<StateId> = d.states().collect();
    let cp = char_poly(&adjacency_i64(d, &states));
    let m = cp.strip_x().squarefree_part().monic();
    let sub = || Error::SubExponential("no eigenvalue of the adjacency matrix exceeds 1: the language grows polynomially".into());
    if m.deg() == 0 {
        return Err(sub());
    }
    largest_root_field(&m).ok_or_else(sub)?
}

/// ℚ(θ) for the largest real root θ > 1 of the squarefree polynomial `m`,
/// or `None` when every real root is at most 1. A root that is an integer
/// (the only possible rational roots of a monic integer polynomial) gets the
/// modulus `x − k`.
pub fn largest_root_field(m: &Poly) -> Option<Result<AlgField>> {
    let half = Q::new(BigInt::from(1), BigInt::from(2));
    Some(match isolate_largest_root_above(m, &qi(1))? {
        Err(root) => AlgField::new(Poly::linear_root(&root), &root - &half, &root + &half),
        Ok((lo, hi)) => {
            let mut k = lo.floor().to_integer();
            let top = hi.ceil().to_integer();
            while k <= top {
                let kq = Q::from_integer(k.clone());
                if kq > lo && kq < hi && m.sign_at(&kq) == 0 {
                    return Some(AlgField::new(Poly::linear_root(&kq), &kq - &half, &kq + &half));
                }
                k += 1;
            }
            AlgField::new(m.clone(), lo, hi)
        }
    })
}

/// Asymptotic behavior of `u_q(n)` relative to `u_{q0}(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthClass {
    /// `u_q(n) = 0` for all large `n`.
    Finite,
    /// Infinite, but negligible against `u_{q0}`: `a_q = 0`.
    Subdominant,
    /// Same order as `u_{q0}`: `a_q > 0`.
    Dominant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    NumericFallback,
}

/// θ, the a-vector and the growth classification of every state.
#[derive(Clone, Debug)]
pub struct GrowthProfile {
    pub field: AlgField,
    pub theta: AlgNum,
    /// `a[q]`, normalized so that `a[q0] = 1`.
    pub a: Vec<AlgNum>,
    /// Degree of the polynomial factor in `u_{q0}(n) ~ n^d θ^n`.
    pub poly_degree: usize,
    pub class: Vec<GrowthClass>,
    pub exactness: Exactness,
    /// Numeric estimates `u_q(N) / u_{q0}(N)` at the horizon `N`.
    pub estimates: Vec<f64>,
    pub horizon: usize,
    /// Largest gap between an exact `a_q` and its estimate.
    pub max_deviation: f64,
}

impl GrowthProfile {
    pub fn a(&self, q: StateId) -> &AlgNum {
        &self.a[q]
    }

    pub fn theta(&self) -> &AlgNum {
        &self.theta
    }

    /// The estimates agree with the exact values within `tol`. Only
    /// meaningful when `poly_degree == 0`; with a polynomial factor the
    /// ratios converge like `1/n`.
    pub fn cross_check_passes(&self, tol: f64) -> bool {
        self.max_deviation <= tol
    }
}

/// Options for [`growth_profile_with`].
#[derive(Clone, Copy, Debug)]
pub struct GrowthOptions {
    /// Return rational estimates instead of failing when the eigensystem
    /// does not pin down the a-vector.
    pub numeric_fallback: bool,
}

/// Ratio of two big integers as a float, robust to huge magnitudes.
pub fn ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    if b.is_zero() {
        return f64::NAN;
    }
    if a.is_zero() {
        return 0.0;
    }
    (ln_big(a) - ln_big(b)).exp()
}

/// Natural logarithm of a positive big integer.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().unwrap_or(f64::INFINITY).ln()
    } else {
        let shift = bits - 64;
        (x >> shift).to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// Structural facts used by the classification and the hypothesis check.
struct Structure {
    /// Length of the longest chain of θ-components reachable from each state.
    chain: Vec<usize>,
    finite: Vec<bool>,
}

fn structure(d: &Dfa, theta: &AlgNum) -> Structure {
    let s = scc_decompose(d);
    let k = s.components.len();
    let dominant_comp: Vec<bool> = s
        .components
        .iter()
        .map(|c| {
            if !c.nontrivial {
                return false;
            }
            let cp = char_poly(&adjacency_i64(d, &c.states));
            eval_at(&cp, theta).is_zero()
        })
        .collect();
    // Components are in reverse topological order, so successors come first.
    let mut chain = vec![0usize; k];
    let mut infinite = vec![false; k];
    for i in 0..k {
        let c = &s.components[i];
        let best = s.succ[i].iter().map(|&j| chain[j]).max().unwrap_or(0);
        chain[i] = best + usize::from(dominant_comp[i] && c.coaccessible);
        infinite[i] = (c.nontrivial && c.coaccessible) || s.succ[i].iter().any(|&j| infinite[j]);
    }
    Structure {
        chain: d.states().map(|q| chain[s.comp_of[q]]).collect(),
        finite: d.states().map(|q| !infinite[s.comp_of[q]]).collect(),
    }
}

fn eval_at(p: &Poly, x: &AlgNum) -> AlgNum {
    let f = x.field();
    let mut acc = f.zero();
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * x) + &f.from_q(c.clone());
    }
    acc
}

/// Computes the a-vector: `a_q = lim u_q(n) / (P(n) θ^n)` normalized by
/// `a_{q0} = 1`.
///
/// States are classified structurally: a state is dominant exactly when the
/// longest chain of components with spectral radius θ reachable from it is as
/// long as the one reachable from the initial state. The eigen-equations
/// `θ a_q = Σ_σ a_{q.σ}` restricted to dominant states, together with
/// `a_{q0} = 1`, are then solved exactly over ℚ(θ).
pub fn growth_profile(d: &Dfa, t: &CountingTables, f: &AlgField) -> Result<GrowthProfile> {
    growth_profile_with(d, t, f, GrowthOptions { numeric_fallback: false })
}

pub fn growth_profile_with(d: &Dfa, t: &CountingTables, f: &AlgField, opts: GrowthOptions) -> Result<GrowthProfile> {
    require_trim(d)?;
    let theta = f.theta();
    let st = structure(d, &theta);
    let q0 = d.initial();
    let top = st.chain[q0];
    if top == 0 {
        return Err(Error::SubExponential("no component of spectral radius θ is reachable".into()));
    }
    let class: Vec<GrowthClass> = d
        .states()
        .map(|q| {
            if st.finite[q] {
                GrowthClass::Finite
            } else if st.chain[q] == top {
                GrowthClass::Dominant
            } else {
                GrowthClass::Subdominant
            }
        })
        .collect();
    let horizon = t.horizon();
    let estimates: Vec<f64> = d
        .states()
        .map(|q| ratio_f64(t.u(q, horizon), t.u(q0, horizon)))
        .collect();

    let dom: Vec<StateId> = d.states().filter(|&q| class[q] == GrowthClass::Dominant).collect();
    let col = |q: StateId| dom.iter().position(|&x| x == q);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for &q in &dom {
        let mut row = vec![f.zero(); dom.len()];
        row[col(q).unwrap()] = theta.clone();
        for (_, p) in d.edges(q) {
            if let Some(j) = col(p) {
                row[j] = &row[j] - &f.one();
            }
        }
        rows.push(row);
        rhs.push(f.zero());
    }
    let mut norm = vec![f.zero(); dom.len()];
    norm[col(q0).expect("initial state is dominant")] = f.one();
    rows.push(norm);
    rhs.push(f.one());

    let (a, exactness) = match solve(rows, rhs) {
        Solution::Unique(x) if x.iter().all(|v| v.is_positive()) => {
            let mut a = vec![f.zero(); d.num_states()];
            for (i, &q) in dom.iter().enumerate() {
                a[q] = x[i].clone();
            }
            (a, Exactness::Exact)
        }
        other => {
            let why = match other {
                Solution::Unique(_) => "the eigen-solution is not positive".to_string(),
                Solution::Inconsistent => "the eigen-equations have no solution".to_string(),
                Solution::Underdetermined(k) => format!("the eigen-equations leave {k} degrees of freedom"),
            };
            if !opts.numeric_fallback {
                return Err(Error::AmbiguousGrowth(why));
            }
            log::warn!("a-vector from numeric estimates: {why}");
            let a = d
                .states()
                .map(|q| {
                    if class[q] == GrowthClass::Dominant {
                        let r = Q::new(BigInt::from(t.u(q, horizon).clone()), BigInt::from(t.u(q0, horizon).clone()));
                        f.from_q(r)
                    } else {
                        f.zero()
                    }
                })
                .collect();
            (a, Exactness::NumericFallback)
        }
    };
    let max_deviation = d
        .states()
        .map(|q| (a[q].to_f64() - estimates[q]).abs())
        .fold(0.0, f64::max);
    if exactness == Exactness::Exact && top == 1 && max_deviation > DEFAULT_CROSS_CHECK_TOL {
        log::warn!("exact a-vector deviates from the numeric estimates by {max_deviation:e}");
    }
    Ok(GrowthProfile {
        field: f.clone(),
        theta,
        a,
        poly_degree: top - 1,
        class,
        exactness,
        estimates,
        horizon,
        max_deviation,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Inconclusive,
}

/// Result of [`check_hypothesis`].
#[derive(Clone, Debug)]
pub struct HypothesisReport {
    pub verdict: Verdict,
    pub language_infinite: bool,
    /// A coaccessible component carries two distinct cycles.
    pub branching_cycles: bool,
    pub degree: Option<usize>,
    /// Fitted limit of `u(n) / (n^d θ^n)`.
    pub constant: Option<f64>,
    pub converging: bool,
    pub reasons: Vec<String>,
}

/// Sufficient checks for the standing growth hypothesis: an infinite
/// language, an uncountable set of infinite words (two distinct cycles in a
/// coaccessible component), and numeric convergence of `u(n) / (n^d θ^n)`
/// over the last quarter of the horizon.
pub fn check_hypothesis(d: &Dfa, t: &CountingTables) -> HypothesisReport {
    let mut rep = HypothesisReport {
        verdict: Verdict::Inconclusive,
        language_infinite: false,
        branching_cycles: false,
        degree: None,
        constant: None,
        converging: false,
        reasons: Vec::new(),
    };
    let trimmed = match d.trim_with_map() {
        Ok(x) => x,
        Err(_) => {
            rep.reasons.push("L finite (empty)".into());
            return rep;
        }
    };
    let (td, old) = trimmed;
    if td.is_finite_language() {
        rep.reasons.push("L finite".into());
        return rep;
    }
    rep.language_infinite = true;
    let s = scc_decompose(&td);
    rep.branching_cycles = s.components.iter().any(|c| {
        let edges: usize = c
            .states
            .iter()
            .map(|&p| td.edges(p).filter(|(_, q)| s.comp_of[*q] == s.comp_of[p]).count())
            .sum();
        c.nontrivial && c.coaccessible && edges > c.states.len()
    });
    if !rep.branching_cycles {
        rep.reasons.push("no component carries two distinct cycles; the infinite words may be countable".into());
    }
    let field = match perron_theta(&td) {
        Ok(f) => f,
        Err(e) => {
            rep.reasons.push(e.to_string());
            return rep;
        }
    };
    let theta = field.theta();
    let st = structure(&td, &theta);
    let deg = st.chain[td.initial()].saturating_sub(1);
    rep.degree = Some(deg);

    let q0 = old[td.initial()];
    let n_max = t.horizon();
    if n_max < 8 {
        rep.reasons.push("horizon too short for a numeric check".into());
        return rep;
    }
    let ln_theta = theta.to_f64().ln();
    let r = |n: usize| -> f64 {
        let u = t.u(q0, n);
        if u.is_zero() {
            return 0.0;
        }
        let poly = if deg == 0 || n == 0 { 0.0 } else { deg as f64 * (n as f64).ln() };
        (ln_big(u) - poly - n as f64 * ln_theta).exp()
    };
    let c = r(n_max);
    rep.constant = Some(c);
    let start = n_max - n_max / 4;
    let noise = 1e-12 * c.abs().max(1e-300);
    let mut prev = f64::INFINITY;
    let mut ok = c.is_finite() && c > 0.0;
    for n in start..n_max {
        let e = (r(n) - c).abs();
        if e > prev + noise {
            ok = false;
            break;
        }
        prev = e;
    }
    rep.converging = ok;
    if !ok {
        rep.reasons.push(format!("u(n)/(n^{deg} θ^n) does not settle over n ∈ [{start}, {n_max}]"));
    }
    if rep.branching_cycles && rep.converging {
        rep.verdict = Verdict::Pass;
    }
    rep
}

/// Removes the states with `a_q = 0` and their edges.
pub fn simplify_language(d: &Dfa, g: &GrowthProfile) -> Result<Dfa> {
    let keep: Vec<bool> = d.states().map(|q| !g.a[q].is_zero()).collect();
    if !keep[d.initial()] {
        return Err(Error::Internal("the initial state has a_q0 = 0".into()));
    }
    Ok(d.restrict(&keep).0)
}

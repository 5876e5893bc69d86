//! Real numbers in `[1/θ, 1]` and their infinite representations: the
//! intervals `I_w`, the per-state partitions of `[0,1]`, the dynamical system
//! `h`, the representation algorithms with exact periodicity detection, and
//! the evaluation of ultimately periodic words.

use std::collections::{BTreeMap, VecDeque};

use crate::algnum::{AlgField, AlgNum};
use crate::automata::{minimize, scc_decompose, Dfa, Letter, StateId, UpWord, Word};
use crate::counting::{beta_coefficients_up, growth_profile, perron_theta, simplify_language, CountingTables, GrowthProfile, DEFAULT_HORIZON};
use crate::error::{Error, Result};
use crate::periodic::is_up_in_linfty;

/// Default step budget of [`represent`].
pub const DEFAULT_MAX_STEPS: usize = 10_000;

/// A minimal automaton whose states all have `a_q > 0`, bundled with its
/// growth profile.
#[derive(Clone, Debug)]
pub struct System {
    dfa: Dfa,
    growth: GrowthProfile,
}

impl System {
    /// Minimizes `d`, computes θ and the a-vector, and drops the states with
    /// `a_q = 0`.
    pub fn new(d: &Dfa) -> Result<Self> {
        let m = minimize(d);
        let g = profile(&m)?;
        let s = simplify_language(&m, &g)?;
        if s.num_states() == m.num_states() {
            return Ok(System { dfa: m, growth: g });
        }
        let g = profile(&s)?;
        Ok(System { dfa: s, growth: g })
    }

    /// As [`System::new`], but with θ taken from `f`, which must be the
    /// Perron root of `d`.
    pub fn with_field(d: &Dfa, f: &AlgField) -> Result<Self> {
        let prof = |d: &Dfa| growth_profile(d, &CountingTables::new(d, DEFAULT_HORIZON), f);
        let m = minimize(d);
        let g = prof(&m)?;
        let s = simplify_language(&m, &g)?;
        if s.num_states() == m.num_states() {
            return Ok(System { dfa: m, growth: g });
        }
        let g = prof(&s)?;
        Ok(System { dfa: s, growth: g })
    }

    /// Uses `dfa` and `growth` as given; every state must have `a_q > 0`.
    pub fn from_parts(dfa: Dfa, growth: GrowthProfile) -> Result<Self> {
        if let Some(q) = dfa.states().find(|&q| !growth.a(q).is_positive()) {
            return Err(Error::domain(format!("state {} has a_q = 0", dfa.name(q))));
        }
        Ok(System { dfa, growth })
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn growth(&self) -> &GrowthProfile {
        &self.growth
    }

    pub fn field(&self) -> &AlgField {
        &self.growth.field
    }

    pub fn theta(&self) -> &AlgNum {
        &self.growth.theta
    }

    pub fn a(&self, q: StateId) -> &AlgNum {
        self.growth.a(q)
    }

    /// `a_{q.σ}`, zero for the sink.
    fn a_step(&self, q: StateId, l: Letter) -> AlgNum {
        match self.dfa.step(q, l) {
            Some(p) => self.a(p).clone(),
            None => self.field().zero(),
        }
    }
}

fn profile(d: &Dfa) -> Result<GrowthProfile> {
    let f = perron_theta(d)?;
    growth_profile(d, &CountingTables::new(d, DEFAULT_HORIZON), &f)
}

/// Increasing affine map `x ↦ slope·x + offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub slope: AlgNum,
    pub offset: AlgNum,
}

impl AffineMap {
    /// The map sending `[lo, hi]` onto `[0, 1]`.
    pub fn rescale(lo: &AlgNum, hi: &AlgNum) -> Result<Self> {
        let slope = (hi - lo).inv()?;
        let offset = -(lo * &slope);
        Ok(AffineMap { slope, offset })
    }

    pub fn identity(f: &AlgField) -> Self {
        AffineMap { slope: f.one(), offset: f.zero() }
    }

    pub fn apply(&self, x: &AlgNum) -> AlgNum {
        &(&self.slope * x) + &self.offset
    }

    pub fn apply_inverse(&self, y: &AlgNum) -> Result<AlgNum> {
        (y - &self.offset).try_div(&self.slope)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &AffineMap) -> AffineMap {
        AffineMap {
            slope: &next.slope * &self.slope,
            offset: &(&next.slope * &self.offset) + &next.offset,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.slope == self.slope.field().one() && self.offset.is_zero()
    }
}

/// Exact interval `I_w = [L_w, U_w]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IwInterval {
    pub prefix: Word,
    pub lower: AlgNum,
    pub upper: AlgNum,
}

impl IwInterval {
    pub fn length(&self) -> AlgNum {
        &self.upper - &self.lower
    }
}

/// Running form of the closed-form endpoints of `I_w`:
/// `L_w = 1/θ + (θ−1)/θ^{ℓ+1} · S_w` with `S_w = Σ_{|m|=ℓ, m<w} a_{q0.m}`.
/// Appending `σ` gives `S_{wσ} = θ·S_w + Σ_{τ<σ} a_{q0.wτ}`, because the
/// words below `wσ` either branch off before the last letter (and each such
/// branch extends in `θ·a` ways by the eigen-relation) or end in `τ < σ`.
struct PrefixTracker<'a> {
    sys: &'a System,
    state: StateId,
    sum: AlgNum,
    theta_pow: AlgNum,
}

impl<'a> PrefixTracker<'a> {
    fn new(sys: &'a System) -> Self {
        PrefixTracker {
            sys,
            state: sys.dfa.initial(),
            sum: sys.field().zero(),
            theta_pow: sys.theta().clone(),
        }
    }

    fn push(&mut self, l: Letter) -> Option<()> {
        let q = self.state;
        let next = self.sys.dfa.step(q, l)?;
        let below = (0..l).fold(self.sys.field().zero(), |acc, t| &acc + &self.sys.a_step(q, t));
        self.sum = &(&self.sum * self.sys.theta()) + &below;
        self.theta_pow = &self.theta_pow * self.sys.theta();
        self.state = next;
        Some(())
    }

    fn interval(&self, prefix: Word) -> IwInterval {
        let th = self.sys.theta();
        let one = self.sys.field().one();
        let scale = (th - &one).try_div(&self.theta_pow).expect("θ > 1");
        let lower = &th.inv().expect("θ > 1") + &(&scale * &self.sum);
        let upper = &lower + &(&scale * self.sys.a(self.state));
        IwInterval { prefix, lower, upper }
    }
}

/// `I_w`, exactly.
pub fn interval_of_prefix(sys: &System, w: &[Letter]) -> Result<IwInterval> {
    let mut t = PrefixTracker::new(sys);
    for (i, &l) in w.iter().enumerate() {
        t.push(l)
            .ok_or_else(|| Error::NotALeftFactor(sys.dfa.alphabet().render(&w[..=i])))?;
    }
    if !sys.a(t.state).is_positive() {
        return Err(Error::NotALeftFactor(sys.dfa.alphabet().render(w)));
    }
    Ok(t.interval(w.to_vec()))
}

/// One cell `A′_{q,σ}` of a state's partition of `[0,1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub letter: Letter,
    pub target: StateId,
    pub lo: AlgNum,
    pub hi: AlgNum,
    /// Relative position inside the cell.
    pub map: AffineMap,
}

/// The partition of `[0,1]` attached to a state; cells are listed in letter
/// order and tile `[0,1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionRow {
    pub state: StateId,
    pub cells: Vec<Cell>,
}

/// Which side owns a shared cell endpoint.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CellConvention {
    /// `[ℓ, u)` except the last cell `[ℓ, 1]`.
    #[default]
    Right,
    /// `(ℓ, u]` except the first cell `[0, u]`: left-limit representations.
    Left,
}

impl PartitionRow {
    /// The cell containing `y ∈ [0,1]`.
    pub fn locate(&self, y: &AlgNum, conv: CellConvention) -> &Cell {
        let n = self.cells.len();
        let i = match conv {
            CellConvention::Right => self.cells.iter().position(|c| y < &c.hi).unwrap_or(n - 1),
            CellConvention::Left => self.cells.iter().position(|c| y <= &c.hi).unwrap_or(n - 1),
        };
        &self.cells[i]
    }
}

/// One row per state: `ℓ_{q,σ} = Σ_{τ<σ} a_{q.τ} / (θ a_q)` and
/// `u_{q,σ} = ℓ_{q,σ} + a_{q.σ} / (θ a_q)`, for the letters with `a_{q.σ} > 0`.
pub fn partition_table(sys: &System) -> Vec<PartitionRow> {
    let th = sys.theta();
    sys.dfa
        .states()
        .map(|q| {
            let total = th * sys.a(q);
            let mut acc = sys.field().zero();
            let mut cells = Vec::new();
            for (l, p) in sys.dfa.edges(q) {
                let ap = sys.a(p);
                if !ap.is_positive() {
                    continue;
                }
                let lo = acc.try_div(&total).expect("a_q > 0");
                acc = &acc + ap;
                let hi = acc.try_div(&total).expect("a_q > 0");
                let map = AffineMap::rescale(&lo, &hi).expect("nonempty cell");
                cells.push(Cell { letter: l, target: p, lo, hi, map });
            }
            PartitionRow { state: q, cells }
        })
        .collect()
}

fn check_unit(x: &AlgNum) -> Result<()> {
    if x.is_negative() || x > &x.field().one() {
        return Err(Error::domain(format!("{x} is not in [0, 1]")));
    }
    Ok(())
}

/// `h(q, x) = (q.σ, relative position of x in A′_{q,σ})`.
pub fn h_step(sys: &System, q: StateId, x: &AlgNum) -> Result<(StateId, AlgNum)> {
    check_unit(x)?;
    if q >= sys.dfa.num_states() {
        return Err(Error::domain(format!("no state {q}")));
    }
    let rows = partition_table(sys);
    let c = rows[q].locate(x, CellConvention::Right);
    Ok((c.target, c.map.apply(x)))
}

/// One iteration of the representation algorithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub state: StateId,
    /// Relative position of the input inside the current interval.
    pub y: AlgNum,
    pub letter: Letter,
}

/// The visited pairs `(q_n, y_n)` with the emitted letters. When periodicity
/// was detected, `detection = (i, j)` with `(q_i, y_i) = (q_j, y_j)` and the
/// trace ends at step `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepTrace {
    pub steps: Vec<TraceStep>,
    pub detection: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Representation {
    Periodic { word: UpWord, trace: RepTrace },
    /// No repetition within the budget; the letters emitted so far.
    PrefixOnly { prefix: Word, trace: RepTrace },
}

impl Representation {
    pub fn trace(&self) -> &RepTrace {
        match self {
            Representation::Periodic { trace, .. } | Representation::PrefixOnly { trace, .. } => trace,
        }
    }

    pub fn up_word(&self) -> Option<&UpWord> {
        match self {
            Representation::Periodic { word, .. } => Some(word),
            Representation::PrefixOnly { .. } => None,
        }
    }

    /// The first `n` letters, if known.
    pub fn letters(&self, n: usize) -> Option<Word> {
        match self {
            Representation::Periodic { word, .. } => Some(word.prefix(n)),
            Representation::PrefixOnly { prefix, .. } => (prefix.len() >= n).then(|| prefix[..n].to_vec()),
        }
    }
}

/// How the relative position is updated at each step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Algorithm {
    /// Rescale the current point into the chosen cell.
    #[default]
    Rescaled,
    /// Recompute the position of the input inside `I_w` from scratch.
    Global,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RepOptions {
    pub max_steps: usize,
    pub convention: CellConvention,
    pub algorithm: Algorithm,
}

impl Default for RepOptions {
    fn default() -> Self {
        RepOptions {
            max_steps: DEFAULT_MAX_STEPS,
            convention: CellConvention::Right,
            algorithm: Algorithm::Rescaled,
        }
    }
}

/// Representation of `x ∈ [1/θ, 1]`, with the default cell convention.
pub fn represent(sys: &System, x: &AlgNum, max_steps: usize) -> Result<Representation> {
    represent_with(sys, x, &RepOptions { max_steps, ..RepOptions::default() })
}

pub fn represent_with(sys: &System, x: &AlgNum, opts: &RepOptions) -> Result<Representation> {
    let th = sys.theta();
    let one = sys.field().one();
    let low = th.inv()?;
    if x < &low || x > &one {
        return Err(Error::domain(format!("{x} is not in [1/θ, 1]")));
    }
    let rows = partition_table(sys);
    let mut tracker = PrefixTracker::new(sys);
    let mut prefix = Vec::new();
    let mut y = (&(th * x) - &one).try_div(&(th - &one))?;
    let mut q = sys.dfa.initial();
    let mut seen: Vec<BTreeMap<AlgNum, usize>> = vec![BTreeMap::new(); sys.dfa.num_states()];
    let mut steps: Vec<TraceStep> = Vec::new();
    for n in 0..=opts.max_steps {
        let cell = rows[q].locate(&y, opts.convention);
        steps.push(TraceStep { state: q, y: y.clone(), letter: cell.letter });
        if let Some(&i) = seen[q].get(&y) {
            let letters: Word = steps[..n].iter().map(|s| s.letter).collect();
            let word = UpWord::new(letters[..i].to_vec(), letters[i..].to_vec())?;
            let trace = RepTrace { steps, detection: Some((i, n)) };
            return Ok(Representation::Periodic { word, trace });
        }
        if n == opts.max_steps {
            steps.pop();
            break;
        }
        seen[q].insert(y.clone(), n);
        y = match opts.algorithm {
            Algorithm::Rescaled => cell.map.apply(&y),
            Algorithm::Global => {
                prefix.push(cell.letter);
                tracker.push(cell.letter).expect("cells follow transitions");
                let iw = tracker.interval(Vec::new());
                (x - &iw.lower).try_div(&iw.length())?
            }
        };
        q = cell.target;
    }
    let prefix = steps.iter().map(|s| s.letter).collect();
    Ok(Representation::PrefixOnly { prefix, trace: RepTrace { steps, detection: None } })
}

/// Both representations of `x`: from the right cells and, when different,
/// the left-limit one.
pub fn represent_both(sys: &System, x: &AlgNum, max_steps: usize) -> Result<(Representation, Option<Representation>)> {
    let right = represent(sys, x, max_steps)?;
    let opts = RepOptions { max_steps, convention: CellConvention::Left, ..RepOptions::default() };
    let left = represent_with(sys, x, &opts)?;
    let same = match (right.up_word(), left.up_word()) {
        (Some(a), Some(b)) => a == b,
        _ => right.letters(max_steps) == left.letters(max_steps),
    };
    Ok((right, (!same).then_some(left)))
}

/// `Σ_{j ∈ range} β_j θ^{−j}`.
fn weighted(beta: &[u32], range: std::ops::Range<usize>, theta_inv: &AlgNum) -> AlgNum {
    let f = theta_inv.field();
    let mut acc = f.zero();
    let mut p = theta_inv.pow(range.start as u32);
    for j in range {
        if beta[j] != 0 {
            acc = &acc + &(&p * &f.from_int(i64::from(beta[j])));
        }
        p = &p * theta_inv;
    }
    acc
}

/// Exact value of an ultimately periodic word of `ℒ∞`:
/// `x = (θ−1)/θ² Σ_q a_q (Σ_{j<r_q} β_{q,j}θ^{−j} + θ^{p_q}/(θ^{p_q}−1) Σ_{r_q≤j<r_q+p_q} β_{q,j}θ^{−j})`.
pub fn value_of_up(sys: &System, w: &UpWord) -> Result<AlgNum> {
    let d = &sys.dfa;
    if !is_up_in_linfty(d, w) {
        return Err(Error::NotRepresentable(w.display(d.alphabet()).to_string()));
    }
    let per = beta_coefficients_up(d, w, 0)?.periodicity.expect("ultimately periodic input");
    let horizon = per.iter().map(|&(r, p)| r + p).max().unwrap_or(0);
    let b = beta_coefficients_up(d, w, horizon)?;
    let f = sys.field();
    let th = sys.theta();
    let ti = th.inv()?;
    let one = f.one();
    let mut total = f.zero();
    for q in d.states() {
        let (r, p) = per[q];
        let beta = &b.beta[q];
        let tp = th.pow(p as u32);
        let tail = tp.try_div(&(&tp - &one))?;
        let s = &weighted(beta, 0..r, &ti) + &(&tail * &weighted(beta, r..r + p, &ti));
        total = &total + &(sys.a(q) * &s);
    }
    Ok(&(&(th - &one) * &ti.pow(2)) * &total)
}

/// An ultimately periodic word of `ℒ∞` starting with the left factor `w`,
/// so sharing at least `ell ≤ |w|` letters with any word of `ℒ∞` extending
/// `w`: `w` is followed by a shortest path to a cycle, which is pumped.
pub fn densify(d: &Dfa, w: &[Letter], ell: usize) -> Result<UpWord> {
    if ell > w.len() {
        return Err(Error::domain(format!("ℓ = {ell} exceeds |w| = {}", w.len())));
    }
    let not_lf = || Error::NotALeftFactor(d.alphabet().render(w));
    let q = d.run(w).ok_or_else(not_lf)?;
    let coacc = d.coaccessible();
    let sccs = scc_decompose(d);
    let on_cycle = |p: StateId| {
        let c = &sccs.components[sccs.comp_of[p]];
        c.nontrivial && coacc[p]
    };
    // Breadth-first search from q over coaccessible states.
    let mut parent: Vec<Option<(StateId, Letter)>> = vec![None; d.num_states()];
    let mut visited = vec![false; d.num_states()];
    let mut queue = VecDeque::from([q]);
    visited[q] = coacc[q];
    let path_to = |parent: &[Option<(StateId, Letter)>], mut p: StateId| {
        let mut out = Vec::new();
        while let Some((prev, l)) = parent[p] {
            out.push(l);
            p = prev;
            if p == q {
                break;
            }
        }
        out.reverse();
        out
    };
    let mut hub = None;
    while let Some(p) = queue.pop_front() {
        if !coacc[p] {
            continue;
        }
        if on_cycle(p) {
            hub = Some(p);
            break;
        }
        for (l, t) in d.edges(p) {
            if !visited[t] && coacc[t] {
                visited[t] = true;
                parent[t] = Some((p, l));
                queue.push_back(t);
            }
        }
    }
    let hub = hub.ok_or_else(not_lf)?;
    let lead = if hub == q { Vec::new() } else { path_to(&parent, hub) };
    let cycle = shortest_cycle(d, hub, &coacc).expect("state of a nontrivial component");
    let mut pre = w.to_vec();
    pre.extend(lead);
    UpWord::new(pre, cycle)
}

/// Shortest nonempty closed walk at `p`, breadth-first in letter order.
fn shortest_cycle(d: &Dfa, p: StateId, allowed: &[bool]) -> Option<Word> {
    let mut parent: Vec<Option<(StateId, Letter)>> = vec![None; d.num_states()];
    let mut visited = vec![false; d.num_states()];
    let mut queue = VecDeque::from([p]);
    while let Some(s) = queue.pop_front() {
        for (l, t) in d.edges(s) {
            if t == p {
                let mut out = vec![l];
                let mut c = s;
                while c != p {
                    let (prev, l2) = parent[c].expect("visited");
                    out.push(l2);
                    c = prev;
                }
                out.reverse();
                return Some(out);
            }
            if !visited[t] && allowed[t] {
                visited[t] = true;
                parent[t] = Some((s, l));
                queue.push_back(t);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::poly::{q, qi, Q};

    fn ex5() -> System {
        System::new(&fixtures::ex5()).unwrap()
    }

    fn num(s: &System, r: Q) -> AlgNum {
        s.field().from_q(r)
    }

    fn word(s: &System, t: &str) -> Word {
        s.dfa().alphabet().parse_word(t).unwrap()
    }

    fn rat(x: &AlgNum) -> Q {
        x.to_rational().unwrap()
    }

    /// `I_w` by direct summation over all words of length `|w|`.
    fn summation_oracle(s: &System, w: &[Letter]) -> (AlgNum, AlgNum) {
        let k = s.dfa().alphabet().len();
        let ell = w.len();
        let mut below = s.field().zero();
        let mut upto = s.field().zero();
        let total = k.pow(ell as u32);
        for idx in 0..total {
            let mut m = vec![0; ell];
            let mut r = idx;
            for i in (0..ell).rev() {
                m[i] = r % k;
                r /= k;
            }
            let a = match s.dfa().run(&m) {
                Some(p) => s.a(p).clone(),
                None => s.field().zero(),
            };
            if m.as_slice() < w {
                below = &below + &a;
            }
            if m.as_slice() <= w {
                upto = &upto + &a;
            }
        }
        let th = s.theta();
        let one = s.field().one();
        let c = (th - &one).try_div(&th.pow(ell as u32 + 1)).unwrap();
        let base = th.inv().unwrap();
        (&base + &(&c * &below), &base + &(&c * &upto))
    }

    #[test]
    fn ex5_intervals() {
        let s = ex5();
        let cases = [
            ("", q(1, 2), qi(1)),
            ("a", q(1, 2), qi(1)),
            ("aa", q(1, 2), q(5, 8)),
            ("ab", q(5, 8), q(3, 4)),
            ("ac", q(3, 4), qi(1)),
            ("aca", q(3, 4), q(13, 16)),
            ("acb", q(13, 16), q(7, 8)),
            ("acc", q(7, 8), qi(1)),
            ("aac", q(1, 2), q(5, 8)),
            ("aba", q(5, 8), q(3, 4)),
        ];
        for (w, lo, hi) in cases {
            let iw = interval_of_prefix(&s, &word(&s, w)).unwrap();
            assert_eq!((rat(&iw.lower), rat(&iw.upper)), (lo, hi), "{w}");
        }
        assert!(matches!(interval_of_prefix(&s, &word(&s, "b")), Err(Error::NotALeftFactor(_))));
    }

    #[test]
    fn closed_form_matches_summation() {
        let s = ex5();
        for w in s.dfa().words_up_to(5).into_iter().chain(
            // prefixes that are not words of L still have intervals
            [word(&s, "aa"), word(&s, "aacb")],
        ) {
            let Some(p) = s.dfa().run(&w) else { continue };
            if !s.a(p).is_positive() {
                continue;
            }
            let iw = interval_of_prefix(&s, &w).unwrap();
            let (lo, hi) = summation_oracle(&s, &w);
            assert_eq!((iw.lower.clone(), iw.upper.clone()), (lo, hi));
            let th = s.theta();
            let len = &(&(th - &s.field().one()) * s.a(p)).try_div(&th.pow(w.len() as u32 + 1)).unwrap();
            assert_eq!(&iw.length(), len);
        }
    }

    #[test]
    fn partitions() {
        let s = ex5();
        let rows = partition_table(&s);
        let show = |r: &PartitionRow| -> Vec<(Letter, Q, Q)> {
            r.cells.iter().map(|c| (c.letter, rat(&c.lo), rat(&c.hi))).collect()
        };
        assert_eq!(show(&rows[0]), vec![(0, qi(0), qi(1))]);
        assert_eq!(
            show(&rows[1]),
            vec![(0, qi(0), q(1, 4)), (1, q(1, 4), q(1, 2)), (2, q(1, 2), qi(1))]
        );
        assert_eq!(show(&rows[2]), vec![(2, qi(0), qi(1))]);
        let b = System::new(&fixtures::binary()).unwrap();
        let rows = partition_table(&b);
        assert_eq!(show(&rows[1]), vec![(0, qi(0), q(1, 2)), (1, q(1, 2), qi(1))]);
        for sys in [&s, &b, &System::new(&fixtures::fib()).unwrap()] {
            for r in partition_table(sys) {
                let total = r.cells.iter().fold(sys.field().zero(), |acc, c| &acc + &(&c.hi - &c.lo));
                assert_eq!(total, sys.field().one());
                assert!(r.cells[0].lo.is_zero());
                for pair in r.cells.windows(2) {
                    assert_eq!(pair[0].hi, pair[1].lo);
                }
            }
        }
    }

    #[test]
    fn nesting_matches_partition() {
        let s = ex5();
        let rows = partition_table(&s);
        for w in all_words(3, 4) {
            let Ok(iw) = interval_of_prefix(&s, &w) else { continue };
            let q = s.dfa().run(&w).unwrap();
            let rel = AffineMap::rescale(&iw.lower, &iw.upper).unwrap();
            for c in &rows[q].cells {
                let mut ws = w.clone();
                ws.push(c.letter);
                let child = interval_of_prefix(&s, &ws).unwrap();
                assert_eq!(rel.apply(&child.lower), c.lo);
                assert_eq!(rel.apply(&child.upper), c.hi);
            }
        }
    }

    fn all_words(k: usize, max: usize) -> Vec<Word> {
        let mut out = vec![Vec::new()];
        let mut layer = vec![Vec::new()];
        for _ in 0..max {
            layer = layer
                .iter()
                .flat_map(|w: &Word| (0..k).map(move |l| [w.clone(), vec![l]].concat()))
                .collect();
            out.extend(layer.iter().cloned());
        }
        out
    }

    #[test]
    fn h_orbit_of_four_sevenths() {
        let s = ex5();
        let mut state = (0, num(&s, q(1, 7)));
        let expect = [(1, q(1, 7)), (2, q(4, 7)), (1, q(4, 7)), (1, q(1, 7))];
        for (p, y) in expect {
            state = h_step(&s, state.0, &state.1).unwrap();
            assert_eq!((state.0, rat(&state.1)), (p, y));
        }
        assert_eq!(h_step(&s, 1, &s.field().zero()).unwrap(), (2, s.field().zero()));
        let b = System::new(&fixtures::binary()).unwrap();
        let (p, y) = h_step(&b, 1, &num(&b, q(1, 3))).unwrap();
        assert_eq!((p, rat(&y)), (1, q(2, 3)));
        assert!(matches!(h_step(&s, 0, &num(&s, q(3, 2))), Err(Error::Domain(_))));
    }

    #[test]
    fn trace_of_four_sevenths() {
        let s = ex5();
        let r = represent(&s, &num(&s, q(4, 7)), DEFAULT_MAX_STEPS).unwrap();
        let w = r.up_word().unwrap();
        assert_eq!(w.display(s.dfa().alphabet()).to_string(), "a(acc)^w");
        let t = r.trace();
        assert_eq!(t.detection, Some((1, 4)));
        let st: Vec<StateId> = t.steps.iter().map(|x| x.state).collect();
        assert_eq!(st, vec![0, 1, 2, 1, 1]);
        let ys: Vec<Q> = t.steps.iter().map(|x| rat(&x.y)).collect();
        assert_eq!(ys, vec![q(1, 7), q(1, 7), q(4, 7), q(4, 7), q(1, 7)]);
    }

    #[test]
    fn both_algorithms_agree() {
        let s = ex5();
        for (n, d) in [(4, 7), (2, 3), (3, 5), (11, 13), (5, 8), (1, 2), (1, 1), (29, 37)] {
            let x = num(&s, q(n, d));
            let a = represent(&s, &x, 200).unwrap();
            let opts = RepOptions { max_steps: 200, algorithm: Algorithm::Global, ..RepOptions::default() };
            let b = represent_with(&s, &x, &opts).unwrap();
            assert_eq!(a, b, "{n}/{d}");
        }
    }

    #[test]
    fn values() {
        let s = ex5();
        for (w, v) in [("a(acc)^w", q(4, 7)), ("(ab)^w", q(2, 3)), ("a(c)^w", qi(1)), ("(aacb)^w", q(8, 15))] {
            let u = UpWord::parse(s.dfa().alphabet(), w).unwrap();
            assert_eq!(rat(&value_of_up(&s, &u).unwrap()), v, "{w}");
        }
        let bad = UpWord::parse(s.dfa().alphabet(), "(b)^w").unwrap();
        assert!(matches!(value_of_up(&s, &bad), Err(Error::NotRepresentable(_))));
        let b = System::new(&fixtures::binary()).unwrap();
        let u = UpWord::parse(b.dfa().alphabet(), "1(0)^w").unwrap();
        assert_eq!(rat(&value_of_up(&b, &u).unwrap()), q(1, 2));
    }

    #[test]
    fn ex5_two_thirds_and_endpoints() {
        let s = ex5();
        let r = represent(&s, &num(&s, q(2, 3)), 100).unwrap();
        assert_eq!(r.up_word().unwrap().display(s.dfa().alphabet()).to_string(), "(ab)^w");
        let b = System::new(&fixtures::binary()).unwrap();
        let (right, left) = represent_both(&b, &num(&b, q(3, 4)), 100).unwrap();
        assert_eq!(right.up_word().unwrap().display(b.dfa().alphabet()).to_string(), "11(0)^w");
        let left = left.unwrap();
        assert_eq!(left.up_word().unwrap().display(b.dfa().alphabet()).to_string(), "10(1)^w");
        let (_, none) = represent_both(&b, &num(&b, q(1, 3) + q(1, 3)), 100).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn domain_errors() {
        let s = ex5();
        assert!(matches!(represent(&s, &num(&s, q(1, 3)), 10), Err(Error::Domain(_))));
        assert!(matches!(represent(&s, &num(&s, q(4, 3)), 10), Err(Error::Domain(_))));
    }

    #[test]
    fn budget_gives_prefix() {
        let s = ex5();
        // 29/37 needs more than three steps before repeating.
        match represent(&s, &num(&s, q(29, 37)), 3).unwrap() {
            Representation::PrefixOnly { prefix, trace } => {
                assert_eq!(prefix.len(), 3);
                assert_eq!(trace.steps.len(), 3);
                assert!(trace.detection.is_none());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn densify_examples() {
        let s = ex5();
        let d = s.dfa();
        let show = |u: UpWord| u.display(d.alphabet()).to_string();
        let aac = densify(d, &word(&s, "aac"), 3).unwrap();
        assert_eq!(aac, UpWord::parse(d.alphabet(), "aac(c)^w").unwrap());
        assert_eq!(show(densify(d, &word(&s, "ab"), 2).unwrap()), "(ab)^w");
        let b = fixtures::binary();
        let w = b.alphabet().parse_word("10").unwrap();
        assert_eq!(densify(&b, &w, 2).unwrap(), UpWord::parse(b.alphabet(), "10(0)^w").unwrap());
        assert!(matches!(densify(d, &word(&s, "b"), 1), Err(Error::NotALeftFactor(_))));
        for w in d.words_up_to(6) {
            let u = densify(d, &w, w.len()).unwrap();
            assert!(is_up_in_linfty(d, &u));
            assert_eq!(u.prefix(w.len()), w);
        }
    }
}

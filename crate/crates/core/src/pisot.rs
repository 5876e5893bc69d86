//! θ-expansions for a real algebraic θ > 1, Parry's admissibility test, and
//! the Bertrand numeration system of θ with its automata `A` and `A′`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algnum::{AlgField, AlgNum};
use crate::automata::{Alphabet, Dfa, Letter, StateId, UpWord, Word};
use crate::counting::largest_root_field;
use crate::error::{Error, Result};
use crate::poly::{Poly, Q};
use crate::realline::{interval_of_prefix, represent, System, DEFAULT_MAX_STEPS};

/// Digits computed before giving up on a repetition in the expansion of 1.
pub const DEFAULT_EXPANSION_BUDGET: usize = 10_000;

/// Size cap on a remainder, in bits over all its rational coefficients.
/// Remainders of a Pisot θ range over a finite set; past this size the
/// expansion is abandoned like an exhausted digit budget.
pub const MAX_REMAINDER_BITS: u64 = 256;

fn remainder_bits(x: &AlgNum) -> u64 {
    x.residue().coeffs().iter().map(|c| c.numer().bits() + c.denom().bits()).sum()
}

/// Shape of `e_θ(1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionKind {
    /// `t_1 … t_m` followed by zeros, `t_m ≠ 0`.
    Finite,
    /// `t_1 … t_N (t_{N+1} … t_{N+p})^ω`.
    Periodic { preperiod: usize },
}

/// The greedy θ-expansion of 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaExpansionOfOne {
    /// `t_1 … t_m` or `t_1 … t_{N+p}`.
    pub digits: Vec<u32>,
    pub kind: ExpansionKind,
}

impl ThetaExpansionOfOne {
    pub fn is_finite(&self) -> bool {
        self.kind == ExpansionKind::Finite
    }

    /// `e_θ(1)` as an infinite word, padded with zeros when finite.
    pub fn e(&self) -> UpWord {
        let d = letters(&self.digits);
        match self.kind {
            ExpansionKind::Finite => UpWord::new(d, vec![0]),
            ExpansionKind::Periodic { preperiod } => UpWord::new(d[..preperiod].to_vec(), d[preperiod..].to_vec()),
        }
        .expect("nonempty period")
    }

    /// `e*_θ(1) = (t_1 … t_{m−1}(t_m − 1))^ω` when finite, `e_θ(1)` otherwise.
    pub fn e_star(&self) -> UpWord {
        match self.kind {
            ExpansionKind::Finite => {
                let mut d = letters(&self.digits);
                *d.last_mut().expect("nonempty expansion") -= 1;
                UpWord::new(Vec::new(), d).expect("nonempty period")
            }
            ExpansionKind::Periodic { .. } => self.e(),
        }
    }

    /// Coefficient `d_i` (1-based) of the Bertrand recurrence: the letters of
    /// `e*_θ(1)`.
    pub fn d(&self, i: usize) -> u32 {
        self.e_star().at(i - 1) as u32
    }
}

impl fmt::Display for ThetaExpansionOfOne {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ExpansionKind::Finite => f.write_str(&join(&letters(&self.digits))),
            ExpansionKind::Periodic { .. } => f.write_str(&digits_text(&self.e())),
        }
    }
}

fn letters(d: &[u32]) -> Word {
    d.iter().map(|&t| t as Letter).collect()
}

fn join(d: &[Letter]) -> String {
    d.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ")
}

/// `d1 d2 … (dk …)^w`.
pub fn digits_text(w: &UpWord) -> String {
    let pre = join(w.preperiod());
    let per = format!("({})^w", join(w.period()));
    if pre.is_empty() {
        per
    } else {
        format!("{pre} {per}")
    }
}

fn require_expanding(f: &AlgField) -> Result<AlgNum> {
    let th = f.theta();
    if th <= f.one() {
        return Err(Error::domain(format!("θ = {} is not greater than 1", f.theta_decimal(10))));
    }
    Ok(th)
}

/// `e_θ(1)` with [`DEFAULT_EXPANSION_BUDGET`].
pub fn theta_expansion_of_one(f: &AlgField) -> Result<ThetaExpansionOfOne> {
    theta_expansion_of_one_with(f, DEFAULT_EXPANSION_BUDGET)
}

/// Greedy digits `t_i = ⌊θ r_{i−1}⌋`, `r_i = θ r_{i−1} − t_i`, `r_0 = 1`,
/// stopping at a zero remainder or at the first repeated remainder. Fails
/// after `budget` digits or once a remainder exceeds [`MAX_REMAINDER_BITS`].
pub fn theta_expansion_of_one_with(f: &AlgField, budget: usize) -> Result<ThetaExpansionOfOne> {
    let th = require_expanding(f)?;
    let mut r = f.one();
    let mut seen: BTreeMap<AlgNum, usize> = BTreeMap::new();
    let mut digits = Vec::new();
    while digits.len() < budget {
        let x = &th * &r;
        let t = x.floor();
        r = &x - &f.from_bigint(t.clone());
        digits.push(t.to_u32().ok_or_else(|| Error::domain("digit of e(1) does not fit in u32"))?);
        if r.is_zero() {
            return Ok(ThetaExpansionOfOne { digits, kind: ExpansionKind::Finite });
        }
        if let Some(&j) = seen.get(&r) {
            return Ok(ThetaExpansionOfOne { digits, kind: ExpansionKind::Periodic { preperiod: j } });
        }
        if remainder_bits(&r) > MAX_REMAINDER_BITS {
            break;
        }
        seen.insert(r.clone(), digits.len());
    }
    Err(Error::NotEventuallyPeriodicWithinBudget(digits.len()))
}

/// Outcome of [`pisot_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PisotStatus {
    Pisot,
    NotPisot,
    Unknown,
}

impl fmt::Display for PisotStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PisotStatus::Pisot => "Pisot",
            PisotStatus::NotPisot => "not Pisot",
            PisotStatus::Unknown => "unknown",
        })
    }
}

/// Decides whether θ is a Pisot number from its field modulus `m`.
///
/// The cofactor `m / (x − θ)` has coefficients in ℚ(θ) ⊂ ℝ; the Schur–Cohn
/// recursion on it decides exactly whether every other root of `m` lies in
/// the open unit disk. When it does and `m` is monic with integer
/// coefficients, θ is Pisot. Otherwise θ is not Pisot provided `m` is
/// irreducible, which is only certified here for degree at most 3.
pub fn pisot_check(f: &AlgField) -> PisotStatus {
    if f.theta() <= f.one() {
        return PisotStatus::NotPisot;
    }
    let m = f.modulus().monic();
    let integral = m.coeffs().iter().all(|c| c.is_integer());
    let irreducible = m.deg() == 1 || (m.deg() <= 3 && !has_rational_root(&m).unwrap_or(true));
    if integral && inside_unit_disk(&cofactor(f)) {
        return PisotStatus::Pisot;
    }
    if irreducible {
        PisotStatus::NotPisot
    } else {
        PisotStatus::Unknown
    }
}

/// Coefficients (ascending) of `m(x) / (x − θ)` by synthetic division.
fn cofactor(f: &AlgField) -> Vec<AlgNum> {
    let m = f.modulus().monic();
    let n = m.deg();
    let th = f.theta();
    let mut b = vec![f.zero(); n];
    b[n - 1] = f.from_q(m.coeff(n));
    for k in (1..n).rev() {
        b[k - 1] = &f.from_q(m.coeff(k)) + &(&th * &b[k]);
    }
    b
}

/// Schur–Cohn: every root of `Σ a_k x^k` has modulus < 1.
fn inside_unit_disk(a: &[AlgNum]) -> bool {
    let mut a = a.to_vec();
    while a.len() > 1 {
        let n = a.len() - 1;
        let (a0, an) = (a[0].clone(), a[n].clone());
        if a0.abs() >= an.abs() {
            return false;
        }
        a = (1..=n).map(|k| &(&an * &a[k]) - &(&a0 * &a[n - k])).collect();
    }
    true
}

/// Rational root test on a polynomial with rational coefficients; `None`
/// when the coefficients are too large to enumerate divisors.
fn has_rational_root(p: &Poly) -> Option<bool> {
    let den = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * Q::from_integer(den.clone())).to_integer()).collect();
    if ints[0].is_zero() {
        return Some(true);
    }
    let (c0, cn) = (ints[0].abs().to_u64()?, ints.last()?.abs().to_u64()?);
    if c0 > 1 << 40 || cn > 1 << 40 {
        return None;
    }
    for num in divisors(c0) {
        for den in divisors(cn) {
            for s in [1i64, -1] {
                let r = Q::new(BigInt::from(s) * BigInt::from(num), BigInt::from(den));
                if p.sign_at(&r) == 0 {
                    return Some(true);
                }
            }
        }
    }
    Some(false)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            out.push(i);
            out.push(n / i);
        }
        i += 1;
    }
    out
}

/// ℚ(θ) for the largest real root θ > 1 of the integer polynomial with
/// ascending coefficients `coeffs`.
pub fn field_from_coefficients(coeffs: &[i64]) -> Result<AlgField> {
    let p = Poly::from_ints(coeffs);
    if p.deg() == 0 {
        return Err(Error::domain("the polynomial must have positive degree"));
    }
    let m = p.squarefree_part().monic();
    largest_root_field(&m).unwrap_or_else(|| Err(Error::domain("the polynomial has no real root greater than 1")))
}

/// The Bertrand system attached to `e_θ(1)`.
///
/// States of `A` are `q_1 … q_K` (indices `0 … K−1`); `A′` adds the initial
/// state `q_0` at index `K`. Letters are digits, in numeric order.
#[derive(Clone, Debug)]
pub struct BertrandSystem {
    pub expansion: ThetaExpansionOfOne,
    pub field: AlgField,
    pub a: Dfa,
    pub a_prime: Dfa,
}

/// Builds `A` and `A′` from `e`. From `q_i`, digits `0 … t_i − 1` go to `q_1`
/// and `t_i` goes to `q_{i+1}`; the last state wraps to `q_{N+1}` in the
/// periodic case and has no `t_m` edge in the finite case. In `A′`, `q_0`
/// reads `1 … t_1 − 1` to `q_1` and `t_1` as `q_1` does, when that edge
/// exists.
pub fn build_bertrand(e: &ThetaExpansionOfOne, f: &AlgField) -> Result<BertrandSystem> {
    let t = &e.digits;
    let k = t.len();
    if k == 0 || t[0] == 0 {
        return Err(Error::domain("e(1) must start with a nonzero digit"));
    }
    let follow = |i: usize| -> Option<StateId> {
        if i + 1 < k {
            Some(i + 1)
        } else {
            match e.kind {
                ExpansionKind::Finite => None,
                ExpansionKind::Periodic { preperiod } => Some(preperiod),
            }
        }
    };
    let mut edges: Vec<Vec<(usize, StateId)>> = (0..k)
        .map(|i| {
            let mut row: Vec<(usize, StateId)> = (0..t[i] as usize).map(|l| (l, 0)).collect();
            row.extend(follow(i).map(|to| (t[i] as usize, to)));
            row
        })
        .collect();
    let mut q0: Vec<(usize, StateId)> = (1..t[0] as usize).map(|l| (l, 0)).collect();
    q0.extend(follow(0).map(|to| (t[0] as usize, to)));
    let max_letter = edges.iter().chain([&q0]).flatten().map(|x| x.0).max().unwrap_or(0);
    let alphabet = Alphabet::digits(max_letter);
    let table = |rows: &[Vec<(usize, StateId)>]| -> Vec<Vec<Option<StateId>>> {
        rows.iter()
            .map(|row| {
                let mut r = vec![None; max_letter + 1];
                for &(l, to) in row {
                    r[l] = Some(to);
                }
                r
            })
            .collect()
    };
    let names: Vec<String> = (1..=k).map(|i| format!("q{i}")).collect();
    let a = Dfa::new(alphabet.clone(), names.clone(), 0, vec![true; k], table(&edges))?;
    edges.push(q0);
    let mut names_p = names;
    names_p.push("q0".into());
    let a_prime = Dfa::new(alphabet, names_p, k, vec![true; k + 1], table(&edges))?;
    Ok(BertrandSystem { expansion: e.clone(), field: f.clone(), a, a_prime })
}

impl BertrandSystem {
    /// `U_0 … U_{n−1}` with `U_n = d_1 U_{n−1} + … + d_n U_0 + 1`.
    pub fn u_sequence(&self, n: usize) -> Vec<BigUint> {
        let d: Vec<BigUint> = (1..n.max(1)).map(|i| BigUint::from(self.expansion.d(i))).collect();
        let mut u: Vec<BigUint> = Vec::with_capacity(n);
        for j in 0..n {
            let s = (1..=j).fold(BigUint::one(), |acc, i| acc + &d[i - 1] * &u[j - i]);
            u.push(s);
        }
        u
    }

    /// The abstract numeration system on `L(A′)`, with θ from this field.
    pub fn system(&self) -> Result<System> {
        System::with_field(&self.a_prime, &self.field)
    }

    /// State index of `q_0` in `A′`.
    pub fn q0(&self) -> StateId {
        self.a_prime.initial()
    }
}

/// Greedy digits of `x ∈ [0,1]` in base θ, ultimately periodic when a
/// remainder repeats within `n_digits` digits and stays within
/// [`MAX_REMAINDER_BITS`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GreedyExpansion {
    Periodic(UpWord),
    Prefix(Word),
}

impl GreedyExpansion {
    /// The first `n` digits, if known.
    pub fn letters(&self, n: usize) -> Option<Word> {
        match self {
            GreedyExpansion::Periodic(w) => Some(w.prefix(n)),
            GreedyExpansion::Prefix(p) => (p.len() >= n).then(|| p[..n].to_vec()),
        }
    }
}

impl fmt::Display for GreedyExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GreedyExpansion::Periodic(w) => f.write_str(&digits_text(w)),
            GreedyExpansion::Prefix(p) => write!(f, "{} …", join(p)),
        }
    }
}

pub fn greedy_theta_expansion(x: &AlgNum, f: &AlgField, n_digits: usize) -> Result<GreedyExpansion> {
    let th = require_expanding(f)?;
    if x.is_negative() || x > &f.one() {
        return Err(Error::domain(format!("{x} is not in [0, 1]")));
    }
    let mut r = x.clone();
    let mut seen: BTreeMap<AlgNum, usize> = BTreeMap::new();
    let mut digits: Word = Vec::new();
    loop {
        if let Some(&j) = seen.get(&r) {
            let per = digits.split_off(j);
            return Ok(GreedyExpansion::Periodic(UpWord::new(digits, per)?));
        }
        if digits.len() >= n_digits || remainder_bits(&r) > MAX_REMAINDER_BITS {
            return Ok(GreedyExpansion::Prefix(digits));
        }
        seen.insert(r.clone(), digits.len());
        let y = &th * &r;
        let t = y.floor();
        r = &y - &f.from_bigint(t.clone());
        digits.push(t.to_usize().expect("digits are bounded by θ"));
    }
}

/// Strict lexicographic comparison of two ultimately periodic words.
pub fn up_cmp(a: &UpWord, b: &UpWord) -> std::cmp::Ordering {
    let n = a.preperiod().len().max(b.preperiod().len()) + a.period().len().lcm(&b.period().len());
    (0..n).map(|i| a.at(i).cmp(&b.at(i))).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
}

/// Every shift of `s` is lexicographically smaller than `e*_θ(1)`.
pub fn parry_check(s: &UpWord, e: &ThetaExpansionOfOne) -> bool {
    let bound = e.e_star();
    (0..s.preperiod().len() + s.period().len()).all(|k| up_cmp(&shift(s, k), &bound).is_lt())
}

fn shift(s: &UpWord, k: usize) -> UpWord {
    let pre = s.preperiod();
    if k <= pre.len() {
        UpWord::new(pre[k..].to_vec(), s.period().to_vec())
    } else {
        let mut v = s.period().to_vec();
        let n = v.len();
        v.rotate_left((k - pre.len()) % n);
        UpWord::new(Vec::new(), v)
    }
    .expect("nonempty period")
}

/// `count` distinct elements `(c_0 + c_1 θ + … + c_{d−1} θ^{d−1}) / c` of
/// `[1/θ, 1]` with `|c_i| ≤ height` and `1 ≤ c ≤ height`, drawn from a
/// seeded generator.
pub fn random_samples(f: &AlgField, count: usize, height: i64, seed: u64) -> Vec<AlgNum> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let low = f.theta().inv().expect("θ > 1");
    let mut out: Vec<AlgNum> = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < 1000 * count.max(1) {
        attempts += 1;
        let num: Vec<Q> = (0..f.degree()).map(|_| Q::from_integer(rng.gen_range(-height..=height).into())).collect();
        let den = f.from_int(rng.gen_range(1..=height.max(1)));
        let x = f.elem(Poly::new(num)).try_div(&den).expect("nonzero denominator");
        if x >= low && x <= f.one() && !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// A disagreement found by [`equivalence_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mismatch {
    /// Greedy digits and the abstract representation differ on a sample.
    Digits { x: AlgNum, greedy: Option<Word>, abstract_rep: Option<Word> },
    /// The sample is outside `[1/θ, 1]`.
    OutOfRange { x: AlgNum },
    /// The closed-form interval of a left factor differs from the one
    /// computed from the counting limits.
    Interval { word: Word, closed_form: (AlgNum, AlgNum), computed: (AlgNum, AlgNum) },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub samples: usize,
    pub words_checked: usize,
    /// Left factors checked in each case: following `e`, just left `e`,
    /// left `e` and then followed it again.
    pub cases: [usize; 3],
    pub mismatches: Vec<Mismatch>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Closed-form `I_w` for a left factor of `L(A′)`, plus the case it falls
/// in (0: `w` is a prefix of `e_θ(1)`, 1: the last digit is below `t_i`,
/// 2: a digit below `t_i` followed by a prefix of `e_θ(1)`).
pub fn closed_form_interval(b: &BertrandSystem, w: &[Letter]) -> Result<(usize, AlgNum, AlgNum)> {
    let f = &b.field;
    let inv = f.theta().inv()?;
    let t = &b.expansion.digits;
    let k = t.len();
    let mut q = b.q0();
    let mut last_drop = None;
    let mut sums = Vec::with_capacity(w.len());
    let mut s = f.zero();
    let mut p = f.one();
    for (i, &l) in w.iter().enumerate() {
        let ti = if q == k { t[0] } else { t[q] } as usize;
        if l < ti {
            last_drop = Some(i);
        }
        q = b.a_prime.step(q, l).ok_or_else(|| Error::NotALeftFactor(b.a_prime.alphabet().render(&w[..=i])))?;
        p = &p * &inv;
        s = &s + &(&f.from_int(l as i64) * &p);
        sums.push((s.clone(), p.clone()));
    }
    Ok(match last_drop {
        None => (0, s, f.one()),
        Some(r) => {
            let (sr, pr) = &sums[r];
            (if r + 1 == w.len() { 1 } else { 2 }, s, sr + pr)
        }
    })
}

/// Compares greedy θ-expansions with abstract representations on `samples`
/// (first `n_digits` digits each), and the closed-form intervals `I_w` with
/// the computed ones for every nonempty left factor of length at most 5.
///
/// At `x = 1` with a finite `e_θ(1)` the abstract representation is the
/// quasi-greedy `e*_θ(1)`, which is what is compared.
pub fn equivalence_check(b: &BertrandSystem, samples: &[AlgNum], n_digits: usize) -> Result<EquivalenceReport> {
    equivalence_check_with(b, samples, n_digits, DEFAULT_INTERVAL_DEPTH)
}

/// Left-factor length covered by [`equivalence_check`].
pub const DEFAULT_INTERVAL_DEPTH: usize = 5;

/// [`equivalence_check`] with the left factors limited to length `max_len`.
pub fn equivalence_check_with(
    b: &BertrandSystem,
    samples: &[AlgNum],
    n_digits: usize,
    max_len: usize,
) -> Result<EquivalenceReport> {
    let sys = b.system()?;
    let f = &b.field;
    let low = f.theta().inv()?;
    let budget = DEFAULT_MAX_STEPS.max(n_digits);
    let mut mismatches = Vec::new();
    for x in samples {
        if x < &low || x > &f.one() {
            mismatches.push(Mismatch::OutOfRange { x: x.clone() });
            continue;
        }
        let greedy = if x == &f.one() && b.expansion.is_finite() {
            Some(b.expansion.e_star().prefix(n_digits))
        } else {
            greedy_theta_expansion(x, f, budget)?.letters(n_digits)
        };
        let abstract_rep = represent(&sys, x, budget)?.letters(n_digits);
        if greedy.is_none() || greedy != abstract_rep {
            mismatches.push(Mismatch::Digits { x: x.clone(), greedy, abstract_rep });
        }
    }
    let mut cases = [0; 3];
    let words: Vec<Word> = b.a_prime.words_up_to(max_len).into_iter().filter(|w| !w.is_empty()).collect();
    for w in &words {
        let (case, lo, hi) = closed_form_interval(b, w)?;
        cases[case] += 1;
        let iw = interval_of_prefix(&sys, w)?;
        if iw.lower != lo || iw.upper != hi {
            mismatches.push(Mismatch::Interval {
                word: w.clone(),
                closed_form: (lo, hi),
                computed: (iw.lower, iw.upper),
            });
        }
    }
    Ok(EquivalenceReport { samples: samples.len(), words_checked: words.len(), cases, mismatches })
}

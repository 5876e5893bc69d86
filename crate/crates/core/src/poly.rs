//! Dense univariate polynomials over ℚ, Sturm sequences and exact interval
//! evaluation.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational.
pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Formats a rational as `p/q` (or `p` when integral), in lowest terms.
pub fn fmt_rational(r: &Q) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q`, `p` or a finite decimal such as `0.25`.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = ip.starts_with('-');
        let ip_val: BigInt = if ip.is_empty() || ip == "-" || ip == "+" {
            BigInt::zero()
        } else {
            ip.parse().ok()?
        };
        let scale = BigInt::from(10u32).pow(fp.len() as u32);
        let frac: BigInt = fp.parse().ok()?;
        let mut n = ip_val.abs() * &scale + frac;
        if neg {
            n = -n;
        }
        return Some(Q::new(n, scale));
    }
    s.parse::<BigInt>().ok().map(Q::from_integer)
}

/// Floor of a rational as an integer.
pub fn floor_q(r: &Q) -> BigInt {
    r.floor().to_integer()
}

/// Polynomial with ascending coefficients and no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<Q>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `[c0,c1,...]` with rationals as `p/q`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = if self.c.is_empty() {
            vec!["0".into()]
        } else {
            self.c.iter().map(fmt_rational).collect()
        };
        write!(f, "[{}]", parts.join(","))
    }
}

impl Poly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| qi(x)).collect())
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        Poly::new(c.iter().cloned().map(Q::from_integer).collect())
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn x() -> Self {
        Poly::new(vec![Q::zero(), Q::one()])
    }

    pub fn constant(r: Q) -> Self {
        Poly::new(vec![r])
    }

    /// `x − r`.
    pub fn linear_root(r: &Q) -> Self {
        Poly::new(vec![-r.clone(), Q::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial has degree `None`.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.c.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn lead(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn scale(&self, r: &Q) -> Poly {
        Poly::new(self.c.iter().map(|x| x * r).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().recip();
        self.scale(&l)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, x)| x * qi(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Q) -> i32 {
        sign(&self.eval(x))
    }

    /// Euclidean division: `self = q·d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.deg();
        if self.c.len() < d.c.len() {
            return (Poly::zero(), self.clone());
        }
        let lead_inv = d.lead().recip();
        let mut r = self.c.clone();
        let mut quo = vec![Q::zero(); r.len() - dd];
        for i in (0..quo.len()).rev() {
            let coef = &r[i + dd] * &lead_inv;
            if coef.is_zero() {
                continue;
            }
            for (j, dc) in d.c.iter().enumerate() {
                r[i + j] -= &coef * dc;
            }
            quo[i] = coef;
        }
        r.truncate(dd);
        (Poly::new(quo), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        if d.deg() == 0 {
            return Poly::zero();
        }
        self.divrem(d).1
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s·a + t·b = g`, `g` monic.
    pub fn ext_gcd(a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (quo, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&quo * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&quo * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let l = r0.lead().recip();
        (r0.scale(&l), s0.scale(&l), t0.scale(&l))
    }

    /// `p / gcd(p, p')`.
    pub fn squarefree_part(&self) -> Poly {
        if self.deg() == 0 {
            return self.clone();
        }
        let g = Poly::gcd(self, &self.derivative());
        self.divrem(&g).0
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && Poly::gcd(self, &self.derivative()).deg() == 0
    }

    /// Exact enclosure of `{p(x) : lo ≤ x ≤ hi}` by interval Horner evaluation.
    pub fn eval_interval(&self, lo: &Q, hi: &Q) -> (Q, Q) {
        let mut a = Q::zero();
        let mut b = Q::zero();
        for c in self.c.iter().rev() {
            let prods = [&a * lo, &a * hi, &b * lo, &b * hi];
            let mn = prods.iter().min().unwrap().clone();
            let mx = prods.iter().max().unwrap().clone();
            a = mn + c;
            b = mx + c;
        }
        (a, b)
    }

    /// Bound `B` such that every real root lies in `(-B, B)`.
    pub fn cauchy_bound(&self) -> Q {
        let l = self.lead().abs();
        let m = self.c[..self.deg()]
            .iter()
            .map(|x| x.abs() / &l)
            .max()
            .unwrap_or_else(Q::zero);
        m + Q::one()
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Q::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly::new(c)
    }

    /// Largest `k` with `x^k | p`.
    pub fn x_valuation(&self) -> usize {
        self.c.iter().take_while(|x| x.is_zero()).count()
    }

    /// Removes the factor `x^k`, `k` the valuation.
    pub fn strip_x(&self) -> Poly {
        Poly::new(self.c[self.x_valuation()..].to_vec())
    }
}

pub fn sign(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.c.iter().map(|x| -x).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }
}

/// Sturm sequence of a polynomial.
#[derive(Clone, Debug)]
pub struct Sturm {
    seq: Vec<Poly>,
}

impl Sturm {
    pub fn new(p: &Poly) -> Self {
        let mut seq = vec![p.clone()];
        if !p.is_zero() {
            let mut prev = p.clone();
            let mut cur = p.derivative();
            while !cur.is_zero() {
                let r = prev.divrem(&cur).1;
                seq.push(cur.clone());
                prev = cur;
                cur = -&r;
            }
        }
        Sturm { seq }
    }

    fn variations(signs: impl Iterator<Item = i32>) -> usize {
        let mut last = 0;
        let mut v = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    pub fn variations_at(&self, x: &Q) -> usize {
        Sturm::variations(self.seq.iter().map(|p| p.sign_at(x)))
    }

    fn variations_pos_inf(&self) -> usize {
        Sturm::variations(self.seq.iter().map(|p| sign(&p.lead())))
    }

    fn variations_neg_inf(&self) -> usize {
        Sturm::variations(self.seq.iter().map(|p| {
            let s = sign(&p.lead());
            if p.deg() % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    /// Distinct real roots in `(a, b]`.
    pub fn count_half_open(&self, a: &Q, b: &Q) -> usize {
        if a >= b {
            return 0;
        }
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    /// Distinct real roots in the open interval `(a, b)`.
    pub fn count_open(&self, a: &Q, b: &Q) -> usize {
        let n = self.count_half_open(a, b);
        if n > 0 && self.seq[0].sign_at(b) == 0 {
            n - 1
        } else {
            n
        }
    }

    /// Distinct real roots.
    pub fn count_all(&self) -> usize {
        self.variations_neg_inf() - self.variations_pos_inf()
    }

    /// Distinct real roots strictly greater than `a`.
    pub fn count_above(&self, a: &Q) -> usize {
        self.variations_at(a) - self.variations_pos_inf()
    }
}

/// Largest real root of `p` strictly greater than `lower`, isolated by an
/// open interval `(lo, hi)` whose endpoints are not roots and that contains no
/// other root. Returns `Ok(root)` directly when bisection lands on it exactly.
pub fn isolate_largest_root_above(p: &Poly, lower: &Q) -> Option<Result<(Q, Q), Q>> {
    let sturm = Sturm::new(p);
    if sturm.count_above(lower) == 0 {
        return None;
    }
    let mut lo = lower.clone();
    let mut hi = p.cauchy_bound().max(lower + Q::one());
    // Invariant: the largest root lies in (lo, hi], and p(hi) != 0 since hi
    // is above every root.
    loop {
        let n = sturm.count_open(&lo, &hi);
        if n == 1 && p.sign_at(&lo) != 0 {
            return Some(Ok((lo, hi)));
        }
        let mid = (&lo + &hi) / qi(2);
        if p.sign_at(&mid) == 0 && sturm.count_open(&mid, &hi) == 0 {
            return Some(Err(mid));
        }
        if sturm.count_open(&mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Integer determinant by fraction-free (Bareiss) elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Characteristic polynomial `det(xI − A)` of an integer matrix, obtained by
/// evaluating the determinant at `x = 0..=n` and interpolating.
pub fn char_poly(a: &[Vec<i64>]) -> Poly {
    let n = a.len();
    let xs: Vec<i64> = (0..=n as i64).collect();
    let ys: Vec<Q> = xs
        .iter()
        .map(|&x| {
            let m = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| BigInt::from(if i == j { x } else { 0 } - a[i][j]))
                        .collect()
                })
                .collect();
            Q::from_integer(bareiss_det(m))
        })
        .collect();
    interpolate(&xs.iter().map(|&x| qi(x)).collect::<Vec<_>>(), &ys)
}

/// Newton interpolation through the points `(xs[i], ys[i])`.
pub fn interpolate(xs: &[Q], ys: &[Q]) -> Poly {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut p = Poly::constant(coef[n - 1].clone());
    for i in (0..n - 1).rev() {
        p = &(&p * &Poly::linear_root(&xs[i])) + &Poly::constant(coef[i].clone());
    }
    p
}

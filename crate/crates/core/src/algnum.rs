//! Exact arithmetic in ℚ(θ) for a real algebraic θ.
//!
//! A field is a squarefree rational polynomial `m` together with an interval
//! isolating one real root θ. Elements are residues modulo `m`; their value is
//! the residue evaluated at θ. The modulus may be reducible, in which case the
//! residue ring has zero divisors, but every comparison and division is decided
//! on values: an element is zero exactly when `gcd(residue, m)` vanishes at θ.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{fmt_rational, parse_rational, qi, sign, Poly, Sturm, Q};

/// Bisection steps applied when a field is created, so that most sign
/// decisions need no further refinement.
const PREREFINE_BITS: u32 = 96;

struct FieldInner {
    modulus: Poly,
    iso: (Q, Q),
    /// Interval around θ after the initial refinement, with `m(lo)`, `m(hi)`
    /// nonzero of opposite sign unless θ is rational. Tried first since its
    /// endpoints are small.
    base: (Q, Q),
    /// Sign of `m` just left of θ.
    sign_lo: i32,
    /// θ itself when it is rational.
    exact: Option<Q>,
    /// Narrowest interval around θ reached by any refinement so far.
    tight: Mutex<(Q, Q)>,
}

impl FieldInner {
    /// Bisects around θ from the narrowest known interval until `decide`
    /// answers. A degenerate interval `(θ, θ)` is passed when a midpoint
    /// hits θ exactly.
    fn refine<T>(&self, mut decide: impl FnMut(&Q, &Q) -> Option<T>) -> T {
        if let Some(t) = decide(&self.base.0, &self.base.1) {
            return t;
        }
        let (mut lo, mut hi) = self.tight.lock().expect("refinement lock").clone();
        let start = &hi - &lo;
        let out = loop {
            if let Some(t) = decide(&lo, &hi) {
                break t;
            }
            let mid = (&lo + &hi) / qi(2);
            let s = self.modulus.sign_at(&mid);
            if s == 0 {
                break decide(&mid, &mid).expect("a degenerate interval decides");
            }
            if s == self.sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        };
        if &hi - &lo < start {
            let mut t = self.tight.lock().expect("refinement lock");
            if &hi - &lo < &t.1 - &t.0 {
                *t = (lo, hi);
            }
        }
        out
    }
}

/// Handle to ℚ(θ). Cheap to clone.
#[derive(Clone)]
pub struct AlgField {
    inner: Arc<FieldInner>,
}

impl fmt::Debug for AlgField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

/// Two handles are equal when they share the modulus and isolating interval.
impl PartialEq for AlgField {
    fn eq(&self, o: &Self) -> bool {
        self.same(o)
    }
}

impl AlgField {
    /// Validates `modulus` and the open isolating interval `(lo, hi)`.
    pub fn new(modulus: Poly, lo: Q, hi: Q) -> Result<Self> {
        if modulus.degree().unwrap_or(0) == 0 {
            return Err(Error::domain("the modulus must have degree at least 1"));
        }
        if !modulus.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        if lo >= hi {
            return Err(Error::Isolation(0));
        }
        let sturm = Sturm::new(&modulus);
        let n = sturm.count_open(&lo, &hi);
        if n != 1 {
            return Err(Error::Isolation(n));
        }
        let iso = (lo.clone(), hi.clone());
        let (mut lo, mut hi) = (lo, hi);
        let mut exact = None;
        if modulus.deg() == 1 {
            exact = Some(-modulus.coeff(0) / modulus.coeff(1));
        } else {
            // Move the endpoints off other roots using Sturm counts, then
            // continue by sign bisection.
            while modulus.sign_at(&lo) == 0 || modulus.sign_at(&hi) == 0 {
                let mid = (&lo + &hi) / qi(2);
                if modulus.sign_at(&mid) == 0 && sturm.count_open(&lo, &mid) == 0 && sturm.count_open(&mid, &hi) == 0 {
                    exact = Some(mid);
                    break;
                }
                if sturm.count_open(&lo, &mid) == 1 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            if exact.is_none() {
                let target = (&hi - &lo) / Q::from_integer(BigInt::one() << PREREFINE_BITS);
                let target = target.min(Q::new(BigInt::one(), BigInt::one() << PREREFINE_BITS));
                let s_lo = modulus.sign_at(&lo);
                while &hi - &lo > target {
                    let mid = (&lo + &hi) / qi(2);
                    let s = modulus.sign_at(&mid);
                    if s == 0 {
                        exact = Some(mid);
                        break;
                    }
                    if s == s_lo {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
            }
        }
        if let Some(e) = &exact {
            lo = e.clone();
            hi = e.clone();
        }
        let sign_lo = modulus.sign_at(&lo);
        Ok(AlgField {
            inner: Arc::new(FieldInner {
                modulus,
                iso,
                base: (lo.clone(), hi.clone()),
                sign_lo,
                exact,
                tight: Mutex::new((lo, hi)),
            }),
        })
    }

    /// ℚ itself, presented as ℚ(r) for the rational `r`.
    pub fn rational(r: Q) -> Self {
        let lo = &r - Q::one();
        let hi = &r + Q::one();
        AlgField::new(Poly::linear_root(&r), lo, hi).expect("linear modulus isolates its root")
    }

    pub fn modulus(&self) -> &Poly {
        &self.inner.modulus
    }

    /// The isolating interval given at construction.
    pub fn iso(&self) -> (&Q, &Q) {
        (&self.inner.iso.0, &self.inner.iso.1)
    }

    pub fn degree(&self) -> usize {
        self.inner.modulus.deg()
    }

    /// θ as a rational, when it is one.
    pub fn exact_root(&self) -> Option<&Q> {
        self.inner.exact.as_ref()
    }

    fn same(&self, o: &AlgField) -> bool {
        Arc::ptr_eq(&self.inner, &o.inner) || self.inner.modulus == o.inner.modulus && self.inner.iso == o.inner.iso
    }

    pub fn elem(&self, residue: Poly) -> AlgNum {
        let r = residue.rem(&self.inner.modulus);
        let r = match &self.inner.exact {
            Some(e) if !r.is_constant() => Poly::constant(r.eval(e)),
            _ => r,
        };
        AlgNum { field: self.clone(), r }
    }

    pub fn from_q(&self, x: Q) -> AlgNum {
        AlgNum {
            field: self.clone(),
            r: Poly::constant(x),
        }
    }

    pub fn from_int(&self, n: i64) -> AlgNum {
        self.from_q(qi(n))
    }

    pub fn from_bigint(&self, n: BigInt) -> AlgNum {
        self.from_q(Q::from_integer(n))
    }

    pub fn zero(&self) -> AlgNum {
        self.from_q(Q::zero())
    }

    pub fn one(&self) -> AlgNum {
        self.from_q(Q::one())
    }

    /// The selected root θ.
    pub fn theta(&self) -> AlgNum {
        self.elem(Poly::x())
    }

    /// Serialization `[m0,m1,...] iso:(lo,hi)`.
    pub fn describe(&self) -> String {
        format!(
            "field:{} iso:({},{})",
            self.inner.modulus,
            fmt_rational(&self.inner.iso.0),
            fmt_rational(&self.inner.iso.1)
        )
    }

    /// Decimal rendering of θ.
    pub fn theta_decimal(&self, digits: usize) -> String {
        self.theta().to_decimal(digits)
    }
}

/// Element of ℚ(θ). Equality and ordering compare values at θ.
#[derive(Clone)]
pub struct AlgNum {
    field: AlgField,
    r: Poly,
}

impl fmt::Debug for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_rational() {
            Some(x) => write!(f, "{}", fmt_rational(&x)),
            None => write!(f, "{} (≈ {})", self.r, self.to_decimal(12)),
        }
    }
}

/// Rationals print as `p/q`; other values print as the residue polynomial in
/// `θ` followed by a decimal approximation.
impl fmt::Display for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_rational() {
            Some(x) => write!(f, "{}", fmt_rational(&x)),
            None => write!(f, "{}", self.poly_in_theta()),
        }
    }
}

impl AlgNum {
    pub fn field(&self) -> &AlgField {
        &self.field
    }

    pub fn residue(&self) -> &Poly {
        &self.r
    }

    fn check(&self, o: &AlgNum) {
        assert!(self.field.same(&o.field), "elements of different fields");
    }

    /// The value as a rational, when the residue is constant or θ is rational.
    pub fn to_rational(&self) -> Option<Q> {
        if self.r.is_constant() {
            return Some(self.r.coeff(0));
        }
        self.field.inner.exact.as_ref().map(|e| self.r.eval(e))
    }

    /// Sign of the value at θ, decided exactly.
    pub fn sign(&self) -> i32 {
        if self.r.is_constant() {
            return sign(&self.r.coeff(0));
        }
        let fi = &self.field.inner;
        if let Some(e) = &fi.exact {
            return self.r.sign_at(e);
        }
        let mut zero_tested = false;
        fi.refine(|lo, hi| {
            if lo == hi {
                return Some(self.r.sign_at(lo));
            }
            let (a, b) = self.r.eval_interval(lo, hi);
            if a.is_positive() {
                return Some(1);
            }
            if b.is_negative() {
                return Some(-1);
            }
            if !zero_tested {
                zero_tested = true;
                let g = Poly::gcd(&self.r, &fi.modulus);
                if g.deg() >= 1 && Sturm::new(&g).count_open(lo, hi) == 1 {
                    return Some(0);
                }
            }
            None
        })
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == 0
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    /// Multiplicative inverse; fails on a value-zero element.
    pub fn inv(&self) -> Result<AlgNum> {
        if self.r.is_constant() {
            let c = self.r.coeff(0);
            if c.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(self.field.from_q(c.recip()));
        }
        let m = &self.field.inner.modulus;
        let (g, s, _) = Poly::ext_gcd(&self.r, m);
        if g.deg() == 0 {
            return Ok(self.field.elem(s));
        }
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // θ is a root of m/g; invert there.
        let cof = m.divrem(&g).0;
        let (g2, s2, _) = Poly::ext_gcd(&self.r.rem(&cof), &cof);
        if g2.deg() != 0 {
            return Err(Error::Internal("inverse in cofactor failed".into()));
        }
        Ok(self.field.elem(s2))
    }

    pub fn try_div(&self, o: &AlgNum) -> Result<AlgNum> {
        self.check(o);
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: u32) -> AlgNum {
        let mut acc = self.field.one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn abs(&self) -> AlgNum {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Rational enclosure `[a, b]` of the value with `b − a ≤ width`.
    pub fn enclosure(&self, width: &Q) -> (Q, Q) {
        if let Some(x) = self.to_rational() {
            return (x.clone(), x);
        }
        self.field.inner.refine(|lo, hi| {
            let (a, b) = self.r.eval_interval(lo, hi);
            (&(&b - &a) <= width).then_some((a, b))
        })
    }

    /// ⌊value⌋, exact.
    pub fn floor(&self) -> BigInt {
        if let Some(x) = self.to_rational() {
            return x.floor().to_integer();
        }
        let (a, _) = self.enclosure(&Q::new(BigInt::one(), BigInt::from(2)));
        let k = a.floor().to_integer();
        let next = self - &self.field.from_bigint(&k + BigInt::one());
        if next.sign() >= 0 {
            k + BigInt::one()
        } else {
            k
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (a, b) = self.enclosure(&Q::new(BigInt::one(), BigInt::one() << 64u32));
        ((a + b) / qi(2)).to_f64().unwrap_or(f64::NAN)
    }

    /// Correctly rounded decimal with `digits` fractional digits (ties away
    /// from zero).
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let neg = self.is_negative();
        let a = self.abs();
        let half = self.field.from_q(Q::new(BigInt::one(), BigInt::from(2)));
        let n = (&(&a * &self.field.from_bigint(scale.clone())) + &half).floor();
        let ip = &n / &scale;
        let fp = &n % &scale;
        let sign = if neg && !n.is_zero() { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{ip}")
        } else {
            format!("{sign}{ip}.{:0>width$}", fp.to_string(), width = digits)
        }
    }

    /// Residue as a polynomial in `θ`, e.g. `θ - 1` or `2θ^2 + 1/3`.
    pub fn poly_in_theta(&self) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.r.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let mono = match i {
                0 => String::new(),
                1 => "θ".to_string(),
                _ => format!("θ^{i}"),
            };
            let coef = if i > 0 && mag.is_one() {
                String::new()
            } else {
                fmt_rational(&mag)
            };
            let term = if i > 0 && !coef.is_empty() { format!("{coef}·{mono}") } else { format!("{coef}{mono}") };
            let s = if c.is_negative() { "-" } else { "+" };
            parts.push((s, term));
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (s, t)) in parts.iter().enumerate() {
            if i == 0 {
                if *s == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {s} "));
            }
            out.push_str(t);
        }
        out
    }

    /// `poly:[c0,c1,...] field:[m0,m1,...] iso:(lo,hi)`.
    pub fn serialize(&self) -> String {
        format!("poly:{} {}", self.r, self.field.describe())
    }

    /// Inverse of [`AlgNum::serialize`]; a trailing decimal field is ignored.
    pub fn deserialize(text: &str) -> Result<AlgNum> {
        let bad = || Error::format(0, format!("malformed algebraic number {text:?}"));
        let list = |s: &str| -> Result<Poly> {
            let s = s.trim().strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(bad)?;
            let c = s
                .split(',')
                .map(|x| parse_rational(x).ok_or_else(bad))
                .collect::<Result<Vec<_>>>()?;
            Ok(Poly::new(c))
        };
        let rest = text.trim().strip_prefix("poly:").ok_or_else(bad)?;
        let (p, rest) = rest.split_once(" field:").ok_or_else(bad)?;
        let (m, rest) = rest.split_once(" iso:").ok_or_else(bad)?;
        let iso = rest.split_whitespace().next().ok_or_else(bad)?;
        let iso = iso.strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
        let (lo, hi) = iso.split_once(',').ok_or_else(bad)?;
        let lo = parse_rational(lo).ok_or_else(bad)?;
        let hi = parse_rational(hi).ok_or_else(bad)?;
        let field = AlgField::new(list(m)?, lo, hi)?;
        Ok(field.elem(list(p)?))
    }
}

impl PartialEq for AlgNum {
    fn eq(&self, o: &AlgNum) -> bool {
        (self - o).sign() == 0
    }
}

impl Eq for AlgNum {}

impl PartialOrd for AlgNum {
    fn partial_cmp(&self, o: &AlgNum) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for AlgNum {
    fn cmp(&self, o: &AlgNum) -> Ordering {
        (self - o).sign().cmp(&0)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&AlgNum> for &AlgNum {
            type Output = AlgNum;
            fn $m(self, o: &AlgNum) -> AlgNum {
                self.check(o);
                let f: fn(&Poly, &Poly) -> Poly = $body;
                self.field.elem(f(&self.r, &o.r))
            }
        }
        impl $tr<AlgNum> for AlgNum {
            type Output = AlgNum;
            fn $m(self, o: AlgNum) -> AlgNum {
                (&self).$m(&o)
            }
        }
        impl $tr<&AlgNum> for AlgNum {
            type Output = AlgNum;
            fn $m(self, o: &AlgNum) -> AlgNum {
                (&self).$m(o)
            }
        }
        impl $tr<AlgNum> for &AlgNum {
            type Output = AlgNum;
            fn $m(self, o: AlgNum) -> AlgNum {
                self.$m(&o)
            }
        }
    };
}

binop!(Add, add, |a, b| a + b);
binop!(Sub, sub, |a, b| a - b);
binop!(Mul, mul, |a, b| a * b);

impl Neg for &AlgNum {
    type Output = AlgNum;
    fn neg(self) -> AlgNum {
        AlgNum {
            field: self.field.clone(),
            r: -&self.r,
        }
    }
}

impl Neg for AlgNum {
    type Output = AlgNum;
    fn neg(self) -> AlgNum {
        -&self
    }
}

/// Validates and builds a field; see [`AlgField::new`].
pub fn field_make(modulus: Poly, iso: (Q, Q)) -> Result<AlgField> {
    AlgField::new(modulus, iso.0, iso.1)
}

use std::fmt;

use super::alphabet::{Alphabet, Letter, Word};
use crate::error::{Error, Result};

/// Ultimately periodic infinite word `u·v^ω` in canonical form: `v` is
/// primitive and `u` is as short as possible.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpWord {
    pre: Word,
    period: Word,
}

impl UpWord {
    /// Canonicalizes `pre·period^ω`. Fails on an empty period.
    pub fn new(pre: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::domain("period of an ultimately periodic word must be nonempty"));
        }
        let mut period = primitive_root(&period).to_vec();
        let mut pre = pre;
        while let (Some(&a), Some(&b)) = (pre.last(), period.last()) {
            if a != b {
                break;
            }
            pre.pop();
            period.rotate_right(1);
        }
        Ok(UpWord { pre, period })
    }

    pub fn preperiod(&self) -> &[Letter] {
        &self.pre
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    /// Letter at position `i` (0-based).
    pub fn at(&self, i: usize) -> Letter {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.period[(i - self.pre.len()) % self.period.len()]
        }
    }

    /// The first `n` letters.
    pub fn prefix(&self, n: usize) -> Word {
        (0..n).map(|i| self.at(i)).collect()
    }

    /// Parses `u(v)^w` (also accepts `^ω`). Letters inside `u` and `v` follow
    /// [`Alphabet::parse_word`].
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self> {
        let text = text.trim();
        let body = text
            .strip_suffix(")^w")
            .or_else(|| text.strip_suffix(")^ω"))
            .ok_or_else(|| Error::format(0, format!("expected `u(v)^w`, got {text:?}")))?;
        let open = body
            .rfind('(')
            .ok_or_else(|| Error::format(0, format!("expected `u(v)^w`, got {text:?}")))?;
        let pre = alphabet.parse_word(&body[..open])?;
        let period = alphabet.parse_word(&body[open + 1..])?;
        if period.is_empty() {
            return Err(Error::format(0, "empty period"));
        }
        UpWord::new(pre, period)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        Rendered { w: self, alphabet }
    }
}

struct Rendered<'a> {
    w: &'a UpWord,
    alphabet: &'a Alphabet,
}

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pre = self.alphabet.render(&self.w.pre);
        let per = self.alphabet.render(&self.w.period);
        let spaced = self.alphabet.render(&[0, 0]).contains(' ');
        if spaced && !pre.is_empty() {
            write!(f, "{pre} ({per})^w")
        } else {
            write!(f, "{pre}({per})^w")
        }
    }
}

/// Shortest `r` with `v = r^k`.
pub fn primitive_root(v: &[Letter]) -> &[Letter] {
    let n = v.len();
    for p in 1..n {
        if n.is_multiple_of(p) && (p..n).all(|i| v[i] == v[i - p]) {
            return &v[..p];
        }
    }
    v
}

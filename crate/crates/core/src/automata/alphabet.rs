use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Rank of a letter in its alphabet (0-based, declaration order).
pub type Letter = usize;

/// A finite word, stored as letter ranks.
pub type Word = Vec<Letter>;

/// A totally ordered finite alphabet. The order is the declaration order.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<String>,
    index: HashMap<String, Letter>,
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.letters).finish()
    }
}

impl Alphabet {
    pub fn new<I, S>(letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Alphabet {
            letters: Vec::new(),
            index: HashMap::new(),
        };
        for l in letters {
            let l = l.into();
            if l.is_empty() || l.chars().any(|c| c.is_whitespace() || "()#".contains(c)) {
                return Err(Error::format(0, format!("invalid letter {l:?}")));
            }
            if out.index.contains_key(&l) {
                return Err(Error::format(0, format!("duplicate letter {l:?}")));
            }
            out.index.insert(l.clone(), out.letters.len());
            out.letters.push(l);
        }
        if out.letters.is_empty() {
            return Err(Error::format(0, "empty alphabet"));
        }
        Ok(out)
    }

    /// Alphabet of decimal digit tokens `0 < 1 < … < max`.
    pub fn digits(max: usize) -> Self {
        Alphabet::new((0..=max).map(|d| d.to_string())).expect("digit tokens are valid")
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn name(&self, l: Letter) -> &str {
        &self.letters[l]
    }

    pub fn rank(&self, token: &str) -> Option<Letter> {
        self.index.get(token).copied()
    }

    fn single_chars(&self) -> bool {
        self.letters.iter().all(|l| l.chars().count() == 1)
    }

    /// Parses a word. Whitespace-separated tokens are used when present;
    /// otherwise the text is split greedily into the longest matching letters.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "ε" || text == "eps" {
            return Ok(Vec::new());
        }
        if text.contains(char::is_whitespace) {
            return text
                .split_whitespace()
                .map(|t| {
                    self.rank(t)
                        .ok_or_else(|| Error::format(0, format!("unknown letter {t:?}")))
                })
                .collect();
        }
        let mut out = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let best = self
                .letters
                .iter()
                .enumerate()
                .filter(|(_, l)| rest.starts_with(l.as_str()))
                .max_by_key(|(_, l)| l.len());
            match best {
                Some((i, l)) => {
                    out.push(i);
                    rest = &rest[l.len()..];
                }
                None => return Err(Error::format(0, format!("cannot split {rest:?} into letters"))),
            }
        }
        Ok(out)
    }

    /// Renders a word; letters are concatenated when every letter is a single
    /// character and space-separated otherwise.
    pub fn render(&self, w: &[Letter]) -> String {
        let sep = if self.single_chars() { "" } else { " " };
        w.iter()
            .map(|&l| self.letters[l].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }
}

/// Genealogical (radix) order: length first, then lexicographic.
pub fn genealogical_cmp(a: &[Letter], b: &[Letter]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        let s = Alphabet::new(["a", "b", "c"]).unwrap();
        assert_eq!(s.parse_word("aac").unwrap(), vec![0, 0, 2]);
        assert_eq!(s.parse_word("a a c").unwrap(), vec![0, 0, 2]);
        assert_eq!(s.render(&[0, 2, 1]), "acb");
        assert!(s.parse_word("ad").is_err());
        let d = Alphabet::digits(10);
        assert_eq!(d.parse_word("1 10 0").unwrap(), vec![1, 10, 0]);
        assert_eq!(d.parse_word("110").unwrap(), vec![1, 10]);
        assert_eq!(d.render(&[1, 10]), "1 10");
    }

    #[test]
    fn duplicate_letters_rejected() {
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
    }

    #[test]
    fn genealogical() {
        use std::cmp::Ordering::*;
        assert_eq!(genealogical_cmp(&[1], &[0, 0]), Less);
        assert_eq!(genealogical_cmp(&[0, 1], &[0, 0]), Greater);
        assert_eq!(genealogical_cmp(&[], &[]), Equal);
    }
}

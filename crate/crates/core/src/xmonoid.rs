//! The free monoid `X*` on generators `x_0, x_1, ...` and its quotient, the
//! positive Thompson monoid `P_k = < x_i x_j = x_{j+k-1} x_i, i < j >`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{check_arity, Error, Result};

/// A word `x_{i_1} x_{i_2} ... x_{i_n}`, stored as its index sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XWord(Vec<usize>);

impl XWord {
    pub fn new(indices: Vec<usize>) -> Self {
        XWord(indices)
    }

    pub fn empty() -> Self {
        XWord(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn into_indices(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &XWord) -> XWord {
        let mut indices = Vec::with_capacity(self.len() + other.len());
        indices.extend_from_slice(&self.0);
        indices.extend_from_slice(&other.0);
        XWord(indices)
    }

    fn pair_at(&self, pos: usize) -> Result<(usize, usize)> {
        if pos + 1 >= self.len() {
            return Err(Error::PositionOutOfRange {
                pos,
                len: self.len(),
            });
        }
        Ok((self.0[pos], self.0[pos + 1]))
    }

    /// Rewrites `x_m x_n -> x_{n+k-1} x_m` at letters `pos, pos + 1`
    /// (zero-based), which requires `m < n`.
    pub fn apply_rule_up(&self, k: usize, pos: usize) -> Result<XWord> {
        check_arity(k)?;
        let (m, n) = self.pair_at(pos)?;
        if m >= n {
            return Err(Error::RuleNotApplicable {
                pos,
                left: m,
                right: n,
                reason: "upward rule needs left index < right index",
            });
        }
        let mut out = self.0.clone();
        out[pos] = n + k - 1;
        out[pos + 1] = m;
        Ok(XWord(out))
    }

    /// Rewrites `x_a x_b -> x_b x_{a-k+1}` at letters `pos, pos + 1`
    /// (zero-based), which requires `a >= b + k`.
    pub fn apply_rule_down(&self, k: usize, pos: usize) -> Result<XWord> {
        check_arity(k)?;
        let (a, b) = self.pair_at(pos)?;
        if a < b + k {
            return Err(Error::RuleNotApplicable {
                pos,
                left: a,
                right: b,
                reason: "downward rule needs left index >= right index + k",
            });
        }
        let mut out = self.0.clone();
        out[pos] = b;
        out[pos + 1] = a - k + 1;
        Ok(XWord(out))
    }

    /// Positions where the upward rule applies.
    pub fn up_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] < w[1])
            .map(|(i, _)| i)
    }

    /// Positions where the downward rule applies for arity `k`.
    pub fn down_positions(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        self.0
            .windows(2)
            .enumerate()
            .filter(move |(_, w)| w[0] >= w[1] + k)
            .map(|(i, _)| i)
    }

    /// The equivalent word with non-increasing indices.
    pub fn top_normal_form(&self, k: usize) -> Result<XWord> {
        check_arity(k)?;
        let mut w = self.0.clone();
        // leftmost-first rewriting
        while let Some(p) = w.windows(2).position(|p| p[0] < p[1]) {
            let (m, n) = (w[p], w[p + 1]);
            w[p] = n + k - 1;
            w[p + 1] = m;
        }
        Ok(XWord(w))
    }

    /// The equivalent word in which no index drops by `k` or more.
    pub fn bottom_normal_form(&self, k: usize) -> Result<XWord> {
        check_arity(k)?;
        let mut w = self.0.clone();
        while let Some(p) = w.windows(2).position(|p| p[0] >= p[1] + k) {
            let (a, b) = (w[p], w[p + 1]);
            w[p] = b;
            w[p + 1] = a - k + 1;
        }
        Ok(XWord(w))
    }

    pub fn is_top_normal(&self) -> bool {
        self.0.windows(2).all(|p| p[0] >= p[1])
    }

    pub fn is_bottom_normal(&self, k: usize) -> bool {
        self.0.windows(2).all(|p| p[0] < p[1] + k)
    }

    pub fn equivalent(&self, other: &XWord, k: usize) -> Result<bool> {
        if self.len() != other.len() {
            check_arity(k)?;
            return Ok(false);
        }
        Ok(self.top_normal_form(k)? == other.top_normal_form(k)?)
    }

    /// Every word equivalent to `self`, closed under both rule directions.
    pub fn enumerate_class(&self, k: usize) -> Result<BTreeSet<XWord>> {
        check_arity(k)?;
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(self.clone());
        queue.push_back(self.clone());
        while let Some(w) = queue.pop_front() {
            let ups = w.up_positions().map(|p| w.apply_rule_up(k, p));
            let downs = w.down_positions(k).map(|p| w.apply_rule_down(k, p));
            for next in ups.chain(downs) {
                let next = next?;
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        Ok(seen)
    }

    /// Membership in `X_{k,n}`: length `n` and `i_j <= (k-1)(n-j)`.
    pub fn is_inversion_word(&self, k: usize, n: usize) -> bool {
        self.len() == n
            && self
                .0
                .iter()
                .enumerate()
                .all(|(j, &i)| i <= (k - 1) * (n - j - 1))
    }
}

impl From<Vec<usize>> for XWord {
    fn from(indices: Vec<usize>) -> Self {
        XWord(indices)
    }
}

impl fmt::Display for XWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, i) in self.0.iter().enumerate() {
            if j > 0 {
                f.write_str(" ")?;
            }
            write!(f, "x{i}")?;
        }
        Ok(())
    }
}

/// Accepts `x4 x1 x0` or `4,1,0`. Blank input is the empty word.
impl FromStr for XWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "ε" || s == "e" {
            return Ok(XWord::empty());
        }
        let tokens: Vec<&str> = if s.contains(',') {
            s.split(',').map(str::trim).collect()
        } else {
            s.split_whitespace().collect()
        };
        tokens
            .into_iter()
            .map(|tok| {
                let digits = tok.strip_prefix('x').unwrap_or(tok);
                digits
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad X-word letter {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(XWord)
    }
}

/// An element of `P_k`, stored by its top normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThompsonElement {
    arity: usize,
    canonical: XWord,
}

impl ThompsonElement {
    pub fn new(word: &XWord, k: usize) -> Result<Self> {
        Ok(ThompsonElement {
            arity: k,
            canonical: word.top_normal_form(k)?,
        })
    }

    pub fn identity(k: usize) -> Result<Self> {
        check_arity(k)?;
        Ok(ThompsonElement {
            arity: k,
            canonical: XWord::empty(),
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn canonical(&self) -> &XWord {
        &self.canonical
    }

    pub fn bottom_form(&self) -> XWord {
        self.canonical
            .bottom_normal_form(self.arity)
            .expect("arity validated on construction")
    }

    pub fn mul(&self, other: &ThompsonElement) -> Result<ThompsonElement> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        ThompsonElement::new(&self.canonical.concat(&other.canonical), self.arity)
    }
}

impl fmt::Display for ThompsonElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.canonical)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> XWord {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("x4 x1 x0 x1 x0"), w("4,1,0,1,0"));
        assert_eq!(w("4,1,0,1,0").to_string(), "x4 x1 x0 x1 x0");
        assert_eq!(w(""), XWord::empty());
        assert!("x4 y1".parse::<XWord>().is_err());
    }

    #[test]
    fn concat_examples() {
        assert_eq!(
            w("x4 x1 x0 x1 x0").concat(&w("x2 x0")),
            w("x4 x1 x0 x1 x0 x2 x0")
        );
        assert_eq!(XWord::empty().concat(&w("x3 x1")), w("x3 x1"));
        assert_eq!(
            w("x6 x0 x0 x3").concat(&w("x0")),
            w("x6 x0 x0 x3 x0")
        );
    }

    #[test]
    fn rule_up() {
        assert_eq!(w("x0 x1 x0").apply_rule_up(2, 0).unwrap(), w("x2 x0 x0"));
        assert_eq!(w("x0 x1").apply_rule_up(3, 0).unwrap(), w("x3 x0"));
        let err = w("x2 x1").apply_rule_up(2, 0).unwrap_err();
        assert!(matches!(
            err,
            Error::RuleNotApplicable {
                pos: 0,
                left: 2,
                right: 1,
                ..
            }
        ));
        assert!(matches!(
            w("x0 x1").apply_rule_up(2, 1),
            Err(Error::PositionOutOfRange { .. })
        ));
    }

    #[test]
    fn rule_down() {
        assert_eq!(w("x2 x0 x0").apply_rule_down(2, 0).unwrap(), w("x0 x1 x0"));
        assert_eq!(w("x3 x0").apply_rule_down(3, 0).unwrap(), w("x0 x1"));
        assert!(matches!(
            w("x1 x0").apply_rule_down(2, 0),
            Err(Error::RuleNotApplicable { .. })
        ));
    }

    #[test]
    fn normal_forms() {
        assert_eq!(w("x0 x1 x0").top_normal_form(2).unwrap(), w("x2 x0 x0"));
        assert_eq!(
            w("x5 x1 x0 x0").top_normal_form(3).unwrap(),
            w("x5 x1 x0 x0")
        );
        assert_eq!(w("x0 x0 x0").top_normal_form(2).unwrap(), w("x0 x0 x0"));
        assert_eq!(w("x2 x0 x0").bottom_normal_form(2).unwrap(), w("x0 x1 x0"));
        assert_eq!(XWord::empty().bottom_normal_form(2).unwrap(), XWord::empty());
        assert!(w("x0 x0").top_normal_form(1).is_err());
    }

    #[test]
    fn predicates() {
        assert!(w("x2 x0 x0").is_top_normal());
        assert!(w("x0 x1 x0").is_bottom_normal(2));
        assert!(!w("x0 x1 x0").is_top_normal());
        assert!(!w("x2 x0").is_bottom_normal(2));
        assert!(w("x2 x0").is_bottom_normal(3));
    }

    #[test]
    fn equivalence_and_classes() {
        assert!(w("x0 x1 x0").equivalent(&w("x2 x0 x0"), 2).unwrap());
        assert!(!w("x0 x0").equivalent(&w("x1 x0"), 2).unwrap());
        assert!(!w("x0").equivalent(&w("x0 x0"), 2).unwrap());
        let class: Vec<_> = w("x0 x1 x0").enumerate_class(2).unwrap().into_iter().collect();
        assert_eq!(class, vec![w("x0 x1 x0"), w("x2 x0 x0")]);
        assert_eq!(w("x0").enumerate_class(2).unwrap().len(), 1);
        let class: Vec<_> = w("x0 x1").enumerate_class(2).unwrap().into_iter().collect();
        assert_eq!(class, vec![w("x0 x1"), w("x2 x0")]);
    }

    #[test]
    fn inversion_word_membership() {
        assert!(w("x4 x1 x0 x1 x0").is_inversion_word(2, 5));
        assert!(w("x5 x1 x0 x0").is_inversion_word(3, 4));
        assert!(!w("x5").is_inversion_word(2, 1));
        assert!(!w("x0").is_inversion_word(2, 2));
    }

    #[test]
    fn thompson_elements() {
        let a = ThompsonElement::new(&w("x0"), 2).unwrap();
        let b = ThompsonElement::new(&w("x1"), 2).unwrap();
        assert_eq!(a.mul(&b).unwrap().canonical(), &w("x2 x0"));
        let e = ThompsonElement::identity(2).unwrap();
        assert_eq!(e.mul(&a).unwrap(), a);
        let c = ThompsonElement::new(&w("x0"), 3).unwrap();
        assert!(matches!(
            a.mul(&c),
            Err(Error::ArityMismatch { left: 2, right: 3 })
        ));
        let p = ThompsonElement::new(&w("x6 x0 x0 x3"), 3).unwrap();
        let q = ThompsonElement::new(&w("x0"), 3).unwrap();
        assert_eq!(
            p.mul(&q).unwrap().canonical(),
            &w("x6 x0 x0 x3 x0").top_normal_form(3).unwrap()
        );
        assert_eq!(
            ThompsonElement::new(&w("x2 x0 x0"), 2).unwrap().bottom_form(),
            w("x0 x1 x0")
        );
    }
}

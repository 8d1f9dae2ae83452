#![allow(dead_code)]

use itertools::Itertools;
use tamari::{BlockPattern, StarSequence, Term, XWord};

/// Every star-free sequence in which each of `1..=n` occurs `k - 1` times
/// and the sequence invariants hold, found by brute force over arrangements.
pub fn star_free(k: usize, n: usize) -> Vec<StarSequence> {
    fn go(k: usize, left: &mut [usize], cur: &mut Vec<Term>, out: &mut Vec<StarSequence>) {
        if left.iter().all(|&c| c == 0) {
            if let Ok(s) = StarSequence::new(k, cur.clone()) {
                out.push(s);
            }
            return;
        }
        for v in 0..left.len() {
            if left[v] > 0 {
                left[v] -= 1;
                cur.push(Term::Value(v + 1));
                go(k, left, cur, out);
                cur.pop();
                left[v] += 1;
            }
        }
    }
    let mut out = Vec::new();
    go(k, &mut vec![k - 1; n], &mut Vec::new(), &mut out);
    out
}

/// `s` with stars inserted: runs of one or two stars in at most `max_gaps`
/// interior gaps, optionally also a leading star. Invalid results are skipped.
pub fn with_stars(s: &StarSequence, max_gaps: usize) -> Vec<StarSequence> {
    let terms = s.terms().to_vec();
    let k = s.arity();
    let mut out = Vec::new();
    let interior: Vec<usize> = (1..terms.len()).collect();
    for gaps in 0..=max_gaps.min(interior.len()) {
        for chosen in interior.iter().copied().combinations(gaps) {
            for lens in (0..gaps).map(|_| 1..=2usize).multi_cartesian_product() {
                for leading in [false, true] {
                    let mut t = Vec::new();
                    if leading {
                        t.push(Term::Star);
                    }
                    for (p, &term) in terms.iter().enumerate() {
                        if let Some(g) = chosen.iter().position(|&c| c == p) {
                            t.extend(std::iter::repeat_n(Term::Star, lens[g]));
                        }
                        t.push(term);
                    }
                    if let Ok(x) = StarSequence::new(k, t) {
                        out.push(x);
                    }
                }
            }
        }
    }
    out.sort_by_key(|x| x.to_string());
    out.dedup();
    out
}

pub fn permutations(n: usize) -> Vec<StarSequence> {
    (1..=n)
        .permutations(n)
        .map(|p| StarSequence::permutation(&p).unwrap())
        .collect()
}

/// All words of length `len` with every index at most `max_index`.
pub fn words(len: usize, max_index: usize) -> Vec<XWord> {
    (0..len)
        .map(|_| 0..=max_index)
        .multi_cartesian_product()
        .map(XWord::new)
        .chain((len == 0).then(XWord::empty))
        .collect()
}

/// Words of `X_{k,n}`: index `j` (1-based) bounded by `(k-1)(n-j)`.
pub fn inversion_words(k: usize, n: usize) -> Vec<XWord> {
    if n == 0 {
        return vec![XWord::empty()];
    }
    (1..=n)
        .map(|j| 0..=(k - 1) * (n - j))
        .multi_cartesian_product()
        .map(XWord::new)
        .collect()
}

pub fn binomial(n: u128, r: u128) -> u128 {
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `binom(kn, n) / ((k-1)n + 1)`.
pub fn fuss_catalan(k: usize, n: usize) -> usize {
    let (k, n) = (k as u128, n as u128);
    (binomial(k * n, n) / ((k - 1) * n + 1)) as usize
}

pub fn seq(text: &str, k: usize) -> StarSequence {
    StarSequence::parse(text, k).unwrap()
}

pub fn word(text: &str) -> XWord {
    text.parse().unwrap()
}

/// Block patterns with `n` concrete slots: every composition of `n` into
/// blocks, star gaps of length 1 or 2 between blocks, and an optional
/// leading star.
pub fn patterns(n: usize) -> Vec<BlockPattern> {
    fn compositions(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        (1..=n)
            .flat_map(|first| {
                compositions(n - first).into_iter().map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
            })
            .collect()
    }
    let mut out = Vec::new();
    for sizes in compositions(n) {
        let gap_count = sizes.len().saturating_sub(1);
        for gaps in (0..gap_count).map(|_| 1..=2usize).multi_cartesian_product() {
            for leading in 0..=1 {
                out.push(BlockPattern::from_blocks_and_gaps(&sizes, &gaps, leading).unwrap());
            }
        }
        if gap_count == 0 {
            for leading in 0..=1 {
                out.push(BlockPattern::from_blocks_and_gaps(&sizes, &[], leading).unwrap());
            }
        }
    }
    out.sort_by_key(|p| p.to_string());
    out.dedup();
    out
}

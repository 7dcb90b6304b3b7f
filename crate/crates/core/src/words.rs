//! Words over the alphabet `{A, B}`, ordered `A < B`.
//!
//! Words of length at most `n` are indexed densely: the word of length `m`
//! whose letters read as binary digits (A = 0, B = 1, first letter most
//! significant) give `bits` has index `2^m - 1 + bits`. This orders words by
//! length, then lexicographically.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    fn bit(self) -> usize {
        match self {
            Letter::A => 0,
            Letter::B => 1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    pub fn suffix_from(&self, start: usize) -> Word {
        Word(self.0[start..].to_vec())
    }

    pub fn index(&self) -> usize {
        index_of(self.len(), self.bits())
    }

    fn bits(&self) -> usize {
        self.0.iter().fold(0, |acc, l| (acc << 1) | l.bit())
    }

    pub fn from_index(idx: usize) -> Word {
        let (len, bits) = split_index(idx);
        Word(
            (0..len)
                .map(|i| {
                    if (bits >> (len - 1 - i)) & 1 == 1 {
                        Letter::B
                    } else {
                        Letter::A
                    }
                })
                .collect(),
        )
    }

    /// Number of words of length at most `level`.
    pub fn count_up_to(level: usize) -> usize {
        (1usize << (level + 1)) - 1
    }

    /// All words of length at most `level` in index order.
    pub fn all_up_to(level: usize) -> impl Iterator<Item = Word> {
        (0..Self::count_up_to(level)).map(Word::from_index)
    }

    pub fn all_of_length(len: usize) -> impl Iterator<Item = Word> {
        let start = (1usize << len) - 1;
        (start..start + (1usize << len)).map(Word::from_index)
    }

    /// Lyndon test: strictly smaller than every proper rotation.
    pub fn is_lyndon(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return false;
        }
        (1..n).all(|i| {
            let rot: Vec<Letter> = self.0[i..].iter().chain(&self.0[..i]).copied().collect();
            self.0 < rot
        })
    }
}

pub(crate) fn index_of(len: usize, bits: usize) -> usize {
    (1usize << len) - 1 + bits
}

/// Inverse of [`index_of`]: `(length, bits)`.
pub(crate) fn split_index(idx: usize) -> (usize, usize) {
    let len = (usize::BITS - (idx + 1).leading_zeros() - 1) as usize;
    (len, idx + 1 - (1usize << len))
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(match l {
                Letter::A => "A",
                Letter::B => "B",
            })?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        s.chars()
            .map(|c| match c {
                'A' => Ok(Letter::A),
                'B' => Ok(Letter::B),
                other => Err(Error::Invalid(format!("letter '{other}' not in {{A, B}}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

/// All order-preserving interleavings of `u` and `v`, with multiplicities.
pub fn shuffle(u: &Word, v: &Word) -> BTreeMap<Word, u64> {
    let mut out = BTreeMap::new();
    let mut buf = Vec::with_capacity(u.len() + v.len());
    shuffle_rec(u.letters(), v.letters(), &mut buf, &mut out);
    out
}

fn shuffle_rec(u: &[Letter], v: &[Letter], buf: &mut Vec<Letter>, out: &mut BTreeMap<Word, u64>) {
    if u.is_empty() || v.is_empty() {
        let mut w = buf.clone();
        w.extend_from_slice(u);
        w.extend_from_slice(v);
        *out.entry(Word(w)).or_insert(0) += 1;
        return;
    }
    buf.push(u[0]);
    shuffle_rec(&u[1..], v, buf, out);
    buf.pop();
    buf.push(v[0]);
    shuffle_rec(u, &v[1..], buf, out);
    buf.pop();
}

/// The `|w| + 1` splittings `w = prefix * suffix`, shortest prefix first.
pub fn deconcatenations(w: &Word) -> Vec<(Word, Word)> {
    (0..=w.len())
        .map(|i| (w.prefix(i), w.suffix_from(i)))
        .collect()
}

/// Lyndon words of length exactly `n`, sorted lexicographically (Duval's generator).
pub fn lyndon_words(n: usize) -> Vec<Word> {
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut w: Vec<usize> = vec![0];
    loop {
        if w.len() == n {
            out.push(Word(
                w.iter()
                    .map(|&d| if d == 0 { Letter::A } else { Letter::B })
                    .collect(),
            ));
        }
        let m = w.len();
        while w.len() < n {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last == 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out
}

/// Standard factorization `w = uv` of a Lyndon word of length at least 2:
/// `v` is the longest proper suffix that is itself Lyndon.
pub fn standard_factorization(w: &Word) -> Option<(Word, Word)> {
    if w.len() < 2 || !w.is_lyndon() {
        return None;
    }
    (1..w.len())
        .map(|i| (w.prefix(i), w.suffix_from(i)))
        .find(|(_, v)| v.is_lyndon())
}

/// Möbius function by trial division.
pub fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Rank `r_n` of the degree-n piece of the free Lie algebra on two generators.
pub fn witt_rank(n: u32) -> u64 {
    assert!((1..64).contains(&n), "witt_rank defined for 1 <= n < 64");
    let n64 = n as u64;
    let total: i128 = (1..=n64)
        .filter(|d| n64.is_multiple_of(*d))
        .map(|d| mobius(d) as i128 * (1i128 << (n64 / d)))
        .sum();
    (total / n64 as i128) as u64
}

/// Chen–Fox–Lyndon factorization into a non-increasing product of Lyndon words (Duval).
pub fn lyndon_factorization(w: &Word) -> Vec<Word> {
    let s = w.letters();
    let n = s.len();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        let mut k = i;
        while j < n && s[k] <= s[j] {
            if s[k] < s[j] {
                k = i;
            } else {
                k += 1;
            }
            j += 1;
        }
        while i <= k {
            out.push(Word(s[i..i + j - k].to_vec()));
            i += j - k;
        }
    }
    out
}

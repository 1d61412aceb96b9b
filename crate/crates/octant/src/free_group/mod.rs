//! Words over the free group F(c1, ..., cN).
//!
//! Words are immutable values: every operation returns a new word. The text
//! format accepts lowercase letters `a`..`z` or indexed generators `c1`..`cN`,
//! each optionally followed by `'` for the inverse; whitespace is ignored and
//! the single token `e` denotes the empty word.

mod lambda;
mod search;

pub use lambda::{optimal_pairing, spelling_length, Pairing};
pub use search::{
    certified_lower_bound, min_spelling_over_product, ClassProductSpec, Conjecture, ProductShape,
    SearchResult, Variant,
};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: u32,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: u32, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn pos(generator: u32) -> Self {
        Letter::new(generator, false)
    }

    pub fn neg(generator: u32) -> Self {
        Letter::new(generator, true)
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Self {
        Letter::new(self.generator, !self.inverse)
    }

    pub fn is_inverse_of(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    alphabet_size: u32,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(alphabet_size: u32, letters: Vec<Letter>) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::InvalidWord("alphabet size must be at least 1".into()));
        }
        if let Some(l) = letters
            .iter()
            .find(|l| l.generator == 0 || l.generator > alphabet_size)
        {
            return Err(Error::InvalidWord(format!(
                "generator {} outside alphabet of size {alphabet_size}",
                l.generator
            )));
        }
        Ok(Word { alphabet_size, letters })
    }

    pub fn empty(alphabet_size: u32) -> Self {
        Word { alphabet_size: alphabet_size.max(1), letters: Vec::new() }
    }

    /// Word from signed generator indices: `3` is c3, `-3` is c3⁻¹.
    pub fn from_signed(alphabet_size: u32, signed: &[i32]) -> Result<Self> {
        let letters = signed
            .iter()
            .map(|&s| {
                if s == 0 {
                    Err(Error::InvalidWord("zero is not a generator index".into()))
                } else {
                    Ok(Letter::new(s.unsigned_abs(), s < 0))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(alphabet_size, letters)
    }

    /// `g^e` for a single generator; negative exponents give inverse letters.
    pub fn power(alphabet_size: u32, generator: u32, exponent: i64) -> Result<Self> {
        let l = Letter::new(generator, exponent < 0);
        Word::new(alphabet_size, vec![l; exponent.unsigned_abs() as usize])
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { alphabet_size: self.alphabet_size.max(other.alphabet_size), letters }
    }

    pub fn inverse(&self) -> Word {
        inverse(self)
    }

    pub fn reduced(&self) -> Word {
        free_reduce(self)
    }

    /// Rotate the letters left by `k` positions.
    pub fn rotate(&self, k: usize) -> Word {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let n = letters.len();
            letters.rotate_left(k % n);
        }
        Word { alphabet_size: self.alphabet_size, letters }
    }

    pub fn parse(text: &str) -> Result<Word> {
        Word::parse_with_alphabet(text, 0)
    }

    /// Parse with a minimum alphabet size; the result's alphabet is the larger
    /// of `min_alphabet` and the largest generator used.
    pub fn parse_with_alphabet(text: &str, min_alphabet: u32) -> Result<Word> {
        let trimmed = text.trim();
        if trimmed == "e" || trimmed.is_empty() {
            return Ok(Word::empty(min_alphabet.max(1)));
        }
        let chars: Vec<char> = trimmed.chars().collect();
        let mut letters = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let ch = chars[i];
            if ch.is_whitespace() || ch == '*' || ch == '.' {
                i += 1;
                continue;
            }
            let generator = if ch == 'c' && i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[i + 1..j].iter().collect();
                i = j;
                digits
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidWord(format!("bad generator index c{digits}")))?
            } else if ch.is_ascii_lowercase() {
                i += 1;
                ch as u32 - 'a' as u32 + 1
            } else {
                return Err(Error::InvalidWord(format!("unexpected character {ch:?}")));
            };
            if generator == 0 {
                return Err(Error::InvalidWord("generator c0 does not exist".into()));
            }
            let mut inverse = false;
            while i < chars.len() && chars[i] == '\'' {
                inverse = !inverse;
                i += 1;
            }
            letters.push(Letter::new(generator, inverse));
        }
        let n = letters.iter().map(|l| l.generator).max().unwrap_or(1).max(min_alphabet);
        Word::new(n, letters)
    }

    /// Render with `c1 c2' ...` notation regardless of alphabet size.
    pub fn to_indexed_string(&self) -> String {
        if self.letters.is_empty() {
            return "e".into();
        }
        self.letters
            .iter()
            .map(|l| format!("c{}{}", l.generator, if l.inverse { "'" } else { "" }))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Word {
    /// Letters `a`..`z` when the alphabet fits, `c1..cN` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        if self.alphabet_size > 26 {
            return write!(f, "{}", self.to_indexed_string());
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| {
                let c = char::from_u32('a' as u32 + l.generator - 1).unwrap_or('?');
                format!("{c}{}", if l.inverse { "'" } else { "" })
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Word::parse(&text).map_err(serde::de::Error::custom)
    }
}

pub fn free_reduce(u: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(u.letters.len());
    for &l in &u.letters {
        match out.last() {
            Some(&top) if top.is_inverse_of(l) => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    Word { alphabet_size: u.alphabet_size, letters: out }
}

/// Free reduction followed by cancelling inverse letters at the two ends.
pub fn cyclic_reduce(u: &Word) -> Word {
    let r = free_reduce(u);
    let l = &r.letters;
    let (mut a, mut b) = (0usize, l.len());
    while b >= a + 2 && l[a].is_inverse_of(l[b - 1]) {
        a += 1;
        b -= 1;
    }
    Word { alphabet_size: r.alphabet_size, letters: l[a..b].to_vec() }
}

pub fn inverse(u: &Word) -> Word {
    Word {
        alphabet_size: u.alphabet_size,
        letters: u.letters.iter().rev().map(|l| l.inv()).collect(),
    }
}

pub fn generator_degree(u: &Word, g: u32) -> Result<i64> {
    if g == 0 || g > u.alphabet_size {
        return Err(Error::OutOfRange(format!(
            "generator {g} outside alphabet of size {}",
            u.alphabet_size
        )));
    }
    Ok(u.letters.iter().filter(|l| l.generator == g).map(|l| l.sign()).sum())
}

/// Degrees of all generators, indexed from c1.
pub fn degrees(u: &Word) -> Vec<i64> {
    let mut d = vec![0i64; u.alphabet_size as usize];
    for l in &u.letters {
        d[l.generator as usize - 1] += l.sign();
    }
    d
}

/// The abelian bound Σ_g |deg_g(u)|.
pub fn abelian_bound(u: &Word) -> i64 {
    degrees(u).iter().map(|d| d.abs()).sum()
}

/// Substitute `images[g-1]` for every cg (inverse images for inverse
/// letters), then reduce.
pub fn apply_homomorphism(u: &Word, images: &[Word]) -> Result<Word> {
    if images.len() < u.alphabet_size as usize {
        return Err(Error::OutOfRange(format!(
            "{} images supplied for an alphabet of size {}",
            images.len(),
            u.alphabet_size
        )));
    }
    let target = images.iter().map(|w| w.alphabet_size).max().unwrap_or(1);
    let mut letters = Vec::new();
    for l in &u.letters {
        let img = &images[l.generator as usize - 1];
        if l.inverse {
            letters.extend(img.letters.iter().rev().map(|x| x.inv()));
        } else {
            letters.extend_from_slice(&img.letters);
        }
    }
    Ok(free_reduce(&Word { alphabet_size: target, letters }))
}

/// All freely reduced words of length ≤ `max_len`, ordered by length and
/// then lexicographically on (generator, inverse).
pub fn reduced_words(alphabet_size: u32, max_len: usize) -> Vec<Word> {
    let alphabet: Vec<Letter> = (1..=alphabet_size)
        .flat_map(|g| [Letter::pos(g), Letter::neg(g)])
        .collect();
    let mut out = vec![Word::empty(alphabet_size)];
    let mut frontier = vec![Vec::<Letter>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &alphabet {
                if w.last().is_some_and(|t| t.is_inverse_of(l)) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().map(|v| Word { alphabet_size, letters: v.clone() }));
        frontier = next;
    }
    out
}

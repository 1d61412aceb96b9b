use super::{Letter, Word};
use serde::{Deserialize, Serialize};

/// A set of 1-based index pairs (a, b), a < b, sorted by a.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing {
    pub pairs: Vec<(usize, usize)>,
}

impl Pairing {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Checks the three pairing conditions against `u`: paired letters are
    /// mutual inverses, intervals are disjoint or nested, indices are unique.
    pub fn is_valid_for(&self, u: &Word) -> bool {
        let n = u.len();
        let mut used = vec![false; n + 1];
        for &(a, b) in &self.pairs {
            if a == 0 || b > n || a >= b || used[a] || used[b] {
                return false;
            }
            used[a] = true;
            used[b] = true;
            if !u.letters()[a - 1].is_inverse_of(u.letters()[b - 1]) {
                return false;
            }
        }
        for (i, &(a1, b1)) in self.pairs.iter().enumerate() {
            for &(a2, b2) in &self.pairs[i + 1..] {
                let disjoint = b1 < a2 || b2 < a1;
                let nested = (a1 < a2 && b2 < b1) || (a2 < a1 && b1 < b2);
                if !(disjoint || nested) {
                    return false;
                }
            }
        }
        true
    }
}

impl std::fmt::Display for Pairing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(a, b)| format!("{{{a},{b}}}")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

struct Table {
    n: usize,
    v: Vec<u32>,
}

impl Table {
    fn get(&self, i: usize, j: usize) -> u32 {
        self.v[i * (self.n + 1) + j]
    }
}

/// λ over every contiguous subword: entry (i, j) is λ(U[i..j]).
fn table(letters: &[Letter]) -> Table {
    let n = letters.len();
    let w = n + 1;
    let mut v = vec![0u32; w * w];
    for len in 1..=n {
        for i in 0..=n - len {
            let j = i + len;
            let mut best = 1 + v[(i + 1) * w + j];
            let inv = letters[i].inv();
            for l in i + 1..j {
                if letters[l] == inv {
                    let c = v[(i + 1) * w + l] + v[(l + 1) * w + j];
                    if c < best {
                        best = c;
                    }
                }
            }
            v[i * w + j] = best;
        }
    }
    Table { n, v }
}

pub fn spelling_length(u: &Word) -> u32 {
    if u.is_empty() {
        return 0;
    }
    table(u.letters()).get(0, u.len())
}

/// An optimal pairing from the DP backtrace. Pairing the first letter is
/// preferred over leaving it unpaired, and among partners the smallest
/// index wins.
pub fn optimal_pairing(u: &Word) -> Pairing {
    let letters = u.letters();
    let t = table(letters);
    let mut pairs = Vec::new();
    let mut stack = vec![(0usize, letters.len())];
    while let Some((i, j)) = stack.pop() {
        if i >= j {
            continue;
        }
        let target = t.get(i, j);
        let inv = letters[i].inv();
        let partner = (i + 1..j)
            .find(|&l| letters[l] == inv && t.get(i + 1, l) + t.get(l + 1, j) == target);
        match partner {
            Some(l) => {
                pairs.push((i + 1, l + 1));
                stack.push((i + 1, l));
                stack.push((l + 1, j));
            }
            None => stack.push((i + 1, j)),
        }
    }
    pairs.sort();
    Pairing { pairs }
}

use super::{abelian_bound, cyclic_reduce, free_reduce, inverse, reduced_words, spelling_length, Word};
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Upper limit on conjugator tuples examined by one search.
pub const MAX_CANDIDATES: u64 = 2_000_000;
const BATCH: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    /// Factors are conjugates of CBA and its inverse.
    P,
    /// Factors are conjugates of ABC and its inverse.
    Q,
}

/// ⟨A^i B^j C^k⟩ ⟨X⟩^p ⟨X⁻¹⟩^n in F(A, B, C) with X = CBA (P) or ABC (Q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductShape {
    pub variant: Variant,
    pub i: u32,
    pub j: u32,
    pub k: u32,
    pub p: u32,
    pub n: u32,
}

impl ProductShape {
    fn factor_word(variant: Variant) -> Word {
        let signed: &[i32] = match variant {
            Variant::P => &[3, 2, 1],
            Variant::Q => &[1, 2, 3],
        };
        Word::from_signed(3, signed).expect("fixed word")
    }

    fn base_word(i: u32, j: u32, k: u32) -> Word {
        let mut signed = Vec::new();
        signed.extend(std::iter::repeat(1).take(i as usize));
        signed.extend(std::iter::repeat(2).take(j as usize));
        signed.extend(std::iter::repeat(3).take(k as usize));
        Word::from_signed(3, &signed).expect("fixed word")
    }

    /// Recognise a spec of this shape (alphabet of size 3 read as A, B, C).
    pub fn detect(spec: &ClassProductSpec) -> Option<ProductShape> {
        if spec.base.alphabet_size() != 3 {
            return None;
        }
        let base = free_reduce(&spec.base);
        let mut counts = [0u32; 3];
        let mut last = 1u32;
        for l in base.letters() {
            if l.inverse || l.generator < last {
                return None;
            }
            last = l.generator;
            counts[l.generator as usize - 1] += 1;
        }
        let mut variant = None;
        let (mut p, mut n) = (0u32, 0u32);
        for (w, mult) in &spec.factors {
            if *mult == 0 {
                continue;
            }
            let w = free_reduce(w);
            let mut matched = false;
            for v in [Variant::P, Variant::Q] {
                let x = ProductShape::factor_word(v);
                let positive = w == x;
                if positive || w == inverse(&x) {
                    if variant.is_some_and(|old| old != v) {
                        return None;
                    }
                    variant = Some(v);
                    if positive {
                        p += mult;
                    } else {
                        n += mult;
                    }
                    matched = true;
                    break;
                }
            }
            if !matched {
                return None;
            }
        }
        Some(ProductShape {
            variant: variant.unwrap_or(Variant::P),
            i: counts[0],
            j: counts[1],
            k: counts[2],
            p,
            n,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassProductSpec {
    pub base: Word,
    pub factors: Vec<(Word, u32)>,
    pub search_budget: u32,
}

impl ClassProductSpec {
    pub fn new(base: Word, factors: Vec<(Word, u32)>, search_budget: u32) -> Self {
        ClassProductSpec { base, factors, search_budget }
    }

    pub fn from_shape(shape: ProductShape, search_budget: u32) -> Self {
        let x = ProductShape::factor_word(shape.variant);
        let mut factors = Vec::new();
        if shape.p > 0 {
            factors.push((x.clone(), shape.p));
        }
        if shape.n > 0 {
            factors.push((inverse(&x), shape.n));
        }
        ClassProductSpec {
            base: ProductShape::base_word(shape.i, shape.j, shape.k),
            factors,
            search_budget,
        }
    }

    fn instances(&self) -> Vec<Word> {
        self.factors
            .iter()
            .flat_map(|(w, m)| std::iter::repeat(free_reduce(w)).take(*m as usize))
            .collect()
    }
}

/// The stronger bound i+j+k−n conjectured for 𝒫; reported, never certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conjecture {
    pub bound: i64,
    pub consistent_with_upper: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub upper: i64,
    pub lower: i64,
    pub witness: Word,
    pub exact: bool,
    pub budget_exhausted: bool,
    pub effective_budget: u32,
    pub candidates_examined: u64,
    pub shape: Option<ProductShape>,
    pub conjecture: Option<Conjecture>,
}

/// Certified lower bound for the minimum spelling length over 𝒫_{p,n} or
/// 𝒬_{p,n}: the larger of the proposition bound and the abelian bound,
/// raised to the parity of the total degree.
pub fn certified_lower_bound(i: u32, j: u32, k: u32, p: u32, n: u32, variant: Variant) -> i64 {
    let (i, j, k, p, n) = (i as i64, j as i64, k as i64, p as i64, n as i64);
    let prop = match variant {
        Variant::P => i + j + k - (p + n),
        Variant::Q => i + j + k - (p + n + 2),
    };
    let shift = p - n;
    let abelian = (i + shift).abs() + (j + shift).abs() + (k + shift).abs();
    let total_degree = i + j + k + 3 * shift;
    let mut b = prop.max(abelian).max(0);
    if (b - total_degree).rem_euclid(2) == 1 {
        b += 1;
    }
    b
}

fn product(base: &Word, instances: &[Word], conj: &[&Word]) -> Word {
    let mut w = base.clone();
    for (f, h) in instances.iter().zip(conj) {
        w = w.concat(h).concat(f).concat(&inverse(h));
    }
    free_reduce(&w)
}

/// Bounded minimisation of λ over base · h1 f1 h1⁻¹ ··· with every conjugator
/// a reduced word of at most `search_budget` letters.
pub fn min_spelling_over_product(spec: &ClassProductSpec) -> Result<SearchResult> {
    let n_alpha = spec
        .factors
        .iter()
        .map(|(w, _)| w.alphabet_size())
        .chain([spec.base.alphabet_size()])
        .max()
        .unwrap_or(1);
    if spec.factors.iter().any(|(w, _)| w.alphabet_size() != n_alpha)
        || spec.base.alphabet_size() != n_alpha
    {
        return Err(Error::InvalidWord("words of a class product must share one alphabet".into()));
    }
    let instances = spec.instances();
    let f = instances.len() as u32;
    let mut budget = spec.search_budget;
    let mut conjugators = reduced_words(n_alpha, budget as usize);
    while f > 0 && budget > 0 && (conjugators.len() as u64).saturating_pow(f) > MAX_CANDIDATES {
        budget -= 1;
        conjugators = reduced_words(n_alpha, budget as usize);
    }
    let total: u64 = if f == 0 { 1 } else { (conjugators.len() as u64).pow(f) };

    let shape = ProductShape::detect(spec);
    let mut all = spec.base.clone();
    for w in &instances {
        all = all.concat(w);
    }
    let lower = match shape {
        Some(s) => certified_lower_bound(s.i, s.j, s.k, s.p, s.n, s.variant).max(abelian_bound(&all)),
        None => abelian_bound(&all),
    };

    let base = free_reduce(&spec.base);
    let m = conjugators.len() as u64;
    let evaluate = |t: u64| -> (u32, Word) {
        let mut digits = vec![0usize; f as usize];
        let mut rest = t;
        for d in digits.iter_mut().rev() {
            *d = (rest % m) as usize;
            rest /= m;
        }
        let conj: Vec<&Word> = digits.iter().map(|&d| &conjugators[d]).collect();
        let w = product(&base, &instances, &conj);
        (spelling_length(&cyclic_reduce(&w)), w)
    };

    let mut best: Option<(u32, Word)> = None;
    let mut examined = 0u64;
    let mut start = 0u64;
    while start < total {
        let end = (start + BATCH).min(total);
        let batch_best = (start..end)
            .into_par_iter()
            .map(evaluate)
            .min_by(|a, b| a.cmp(b))
            .expect("non-empty batch");
        examined += end - start;
        best = match best {
            Some(b) if b <= batch_best => Some(b),
            _ => Some(batch_best),
        };
        if best.as_ref().is_some_and(|b| b.0 as i64 <= lower) {
            break;
        }
        start = end;
    }
    let (upper, witness) = best.expect("at least one candidate");
    let upper = upper as i64;
    if lower > upper {
        return Err(Error::Consistency(format!(
            "certified lower bound {lower} exceeds witness length {upper} for {witness}"
        )));
    }
    let conjecture = shape.filter(|s| s.variant == Variant::P).map(|s| {
        let bound = s.i as i64 + s.j as i64 + s.k as i64 - s.n as i64;
        Conjecture { bound, consistent_with_upper: upper >= bound }
    });
    let exact = upper == lower;
    Ok(SearchResult {
        upper,
        lower,
        witness,
        exact,
        budget_exhausted: !exact,
        effective_budget: budget,
        candidates_examined: examined,
        shape,
        conjecture,
    })
}

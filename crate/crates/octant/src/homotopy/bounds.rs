use super::{classify, infimum_energy, wrapping_from_invariants, OctantTopology, Sector};
use crate::error::{Error, Result};
use crate::free_group::{
    apply_homomorphism, inverse, min_spelling_over_product, ClassProductSpec, ProductShape,
    SearchResult, Word,
};
use serde::{Deserialize, Serialize};

/// Energy bounds for the reflection-symmetric prism with edge lengths
/// L_x ≥ L_y ≥ L_z > 0, in the same units as `energy`.
pub fn prism_bounds(energy: f64, lx: f64, ly: f64, lz: f64) -> Result<(f64, f64)> {
    if !(lz > 0.0 && lz <= ly && ly <= lx) {
        return Err(Error::OutOfRange(format!(
            "prism edges must satisfy 0 < L_z <= L_y <= L_x, got ({lx}, {ly}, {lz})"
        )));
    }
    let diag = (lx * lx + ly * ly + lz * lz).sqrt();
    Ok((4.0 * lz * energy, 4.0 * diag * energy))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KinkCase {
    PositiveKinks,
    NegativeKinks,
}

/// Which four sectors the excised sphere surrounds: s0 and its three
/// neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SectorFamily {
    /// s0 in Σ_{+++}.
    Top,
    /// s0 in Σ_{−−−}.
    Bottom,
}

impl SectorFamily {
    pub fn base_sector(self) -> Sector {
        match self {
            SectorFamily::Top => Sector([1, 1, 1]),
            SectorFamily::Bottom => Sector([-1, -1, -1]),
        }
    }
}

fn gen_power(g: u32, e: i64) -> Word {
    Word::power(3, g, e).expect("generator within alphabet")
}

/// Boundary class [∂μ] and the loop c0 around s0, as words in F(c1, c2, c3),
/// for any kink triple.
pub fn sector_boundary_word(k: [i64; 3], family: SectorFamily) -> (Word, Word) {
    let [kx, ky, kz] = k;
    match family {
        SectorFamily::Top => {
            let b = gen_power(3, kz - 1).concat(&gen_power(1, kx - 1)).concat(&gen_power(2, ky - 1));
            let c0 = inverse(&Word::from_signed(3, &[2, 1, 3]).expect("fixed word"));
            (b, c0)
        }
        SectorFamily::Bottom => {
            let b = gen_power(3, -kz).concat(&gen_power(1, -kx)).concat(&gen_power(2, -ky));
            let c0 = Word::from_signed(3, &[-2, -1, -3]).expect("fixed word");
            (b, c0)
        }
    }
}

pub fn boundary_word(k: [i64; 3], case: KinkCase) -> Result<(Word, Word)> {
    match case {
        KinkCase::PositiveKinks if k.iter().all(|v| *v > 0) => {
            Ok(sector_boundary_word(k, SectorFamily::Top))
        }
        KinkCase::NegativeKinks if k.iter().all(|v| *v < 0) => {
            Ok(sector_boundary_word(k, SectorFamily::Bottom))
        }
        _ => Err(Error::Unsupported(format!(
            "kink sign pattern {k:?} is not covered by the {case:?} boundary word"
        ))),
    }
}

/// The set {[∂μ]} ⟨c0⁻¹⟩^P ⟨c0⟩^N rewritten over (A, B, C) = (c3, c1, c2);
/// when the boundary exponents are non-positive every generator is inverted
/// first (an automorphism, so spelling lengths are unchanged).
fn product_spec(k: [i64; 3], family: SectorFamily, p: u32, n: u32, budget: u32) -> ClassProductSpec {
    let (b, c0) = sector_boundary_word(k, family);
    let exps: Vec<i64> = match family {
        SectorFamily::Top => vec![k[2] - 1, k[0] - 1, k[1] - 1],
        SectorFamily::Bottom => vec![-k[2], -k[0], -k[1]],
    };
    let flip = exps.iter().all(|e| *e <= 0) && exps.iter().any(|e| *e < 0);
    let s = if flip { -1 } else { 1 };
    // c1 ↦ B, c2 ↦ C, c3 ↦ A, optionally inverted.
    let images = [
        Word::from_signed(3, &[2 * s]).expect("fixed word"),
        Word::from_signed(3, &[3 * s]).expect("fixed word"),
        Word::from_signed(3, &[s]).expect("fixed word"),
    ];
    let map = |w: &Word| apply_homomorphism(w, &images).expect("three images");
    let mut factors = Vec::new();
    if p > 0 {
        factors.push((map(&inverse(&c0)), p));
    }
    if n > 0 {
        factors.push((map(&c0), n));
    }
    ClassProductSpec::new(map(&b), factors, budget)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyBound {
    pub family: SectorFamily,
    pub d0: u32,
    pub p: u32,
    pub n: u32,
    pub shape: Option<ProductShape>,
    pub search: SearchResult,
    /// Σ_σ |w_σ| over the four sectors outside the family.
    pub outside: i64,
    /// D0 + certified lower bound + outside, in units of π.
    pub bound: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpellingBound {
    /// Certified lower bound on Σ_σ D(s_σ), i.e. on E/π.
    pub value: i64,
    /// Σ_σ|w_σ| + Δ(H).
    pub infimum: i64,
    /// Per family, the minimising D0.
    pub families: Vec<FamilyBound>,
}

/// Lower bound on Σ_σ D(s_σ) from the excised-sphere argument. For each
/// sector family the admissible preimage counts D0 of s0 (D0 ≥ |d(s0)|,
/// D0 ≡ d(s0) mod 2, up to `d0_max`) are scanned; the family bound is the
/// minimum over D0 and the result is the larger family bound.
pub fn spelling_lower_bound_check(t: &OctantTopology, d0_max: u32, budget: u32) -> Result<SpellingBound> {
    let k = t.k;
    let uniform = k.iter().all(|v| *v > 0) || k.iter().all(|v| *v < 0);
    if !uniform {
        return Err(Error::Unsupported(format!(
            "spelling bound needs all kink numbers nonzero with one sign, got {k:?}"
        )));
    }
    let w = wrapping_from_invariants(t)?;
    let c = classify(&w, t);
    let infimum = infimum_energy(&w, &c)?;
    let mut families = Vec::new();
    for family in [SectorFamily::Top, SectorFamily::Bottom] {
        let s0 = family.base_sector();
        let members: Vec<Sector> = std::iter::once(s0).chain(s0.neighbours()).collect();
        let outside: i64 =
            Sector::ALL.iter().filter(|s| !members.contains(s)).map(|s| w.get(*s).abs()).sum();
        let d = -w.get(s0);
        let lo = d.unsigned_abs() as u32;
        let mut best: Option<FamilyBound> = None;
        for d0 in (lo..=lo.max(d0_max)).step_by(2) {
            let p = ((d0 as i64 + d) / 2) as u32;
            let n = ((d0 as i64 - d) / 2) as u32;
            let spec = product_spec(k, family, p, n, budget);
            let shape = ProductShape::detect(&spec);
            let search = min_spelling_over_product(&spec)?;
            let bound = d0 as i64 + search.lower + outside;
            if best.as_ref().is_none_or(|b| bound < b.bound) {
                best = Some(FamilyBound { family, d0, p, n, shape, search, outside, bound });
            }
        }
        families.push(best.expect("at least one admissible D0"));
    }
    let value = families.iter().map(|f| f.bound).max().expect("two families");
    if value > infimum {
        return Err(Error::Consistency(format!(
            "spelling bound {value} exceeds the infimum energy {infimum} for {t}"
        )));
    }
    Ok(SpellingBound { value, infimum, families })
}

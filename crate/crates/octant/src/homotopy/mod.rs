//! Invariant algebra of homotopy classes of tangent maps on the octant.
//!
//! A class is given either by its invariants (edge signs e, kink numbers k,
//! trapped area Ω = omega_units·π/2) or by its eight wrapping numbers
//!
//! ```text
//! w_σ = Ω/4π + ½ Σ_j σ_j k_j + e_x e_y e_z (1/8 − δ_{σ,e}).
//! ```

mod bounds;
mod classify;

pub use bounds::{
    boundary_word, prism_bounds, sector_boundary_word, spelling_lower_bound_check, FamilyBound,
    KinkCase, SectorFamily, SpellingBound,
};
pub use classify::{classify, classify_with_chi, delta_invariant, infimum_energy, Classification, Kind};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Sector(pub [i8; 3]);

impl Serialize for Sector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Sector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Sector::parse(&text).map_err(serde::de::Error::custom)
    }
}

impl Sector {
    /// All sectors in lexicographic order with + before −, x most significant.
    pub const ALL: [Sector; 8] = [
        Sector([1, 1, 1]),
        Sector([1, 1, -1]),
        Sector([1, -1, 1]),
        Sector([1, -1, -1]),
        Sector([-1, 1, 1]),
        Sector([-1, 1, -1]),
        Sector([-1, -1, 1]),
        Sector([-1, -1, -1]),
    ];

    pub fn new(signs: [i8; 3]) -> Result<Self> {
        if signs.iter().all(|s| *s == 1 || *s == -1) {
            Ok(Sector(signs))
        } else {
            Err(Error::OutOfRange(format!("sector signs must be ±1, got {signs:?}")))
        }
    }

    pub fn index(self) -> usize {
        let b = |s: i8| usize::from(s < 0);
        4 * b(self.0[0]) + 2 * b(self.0[1]) + b(self.0[2])
    }

    pub fn signs(self) -> [i8; 3] {
        self.0
    }

    pub fn adjacent(self, other: Sector) -> bool {
        (0..3).filter(|&j| self.0[j] == other.0[j]).count() == 2
    }

    pub fn neighbours(self) -> impl Iterator<Item = Sector> {
        Sector::ALL.into_iter().filter(move |t| self.adjacent(*t))
    }

    pub fn negated(self) -> Sector {
        Sector([-self.0[0], -self.0[1], -self.0[2]])
    }

    /// Unit vector through the centre of the open octant.
    pub fn centroid(self) -> [f64; 3] {
        let c = 1.0 / 3f64.sqrt();
        [self.0[0] as f64 * c, self.0[1] as f64 * c, self.0[2] as f64 * c]
    }

    pub fn parse(text: &str) -> Result<Sector> {
        let signs: Vec<i8> = text
            .trim()
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' | '−' => Ok(-1),
                _ => Err(Error::InvalidWrapping(format!("bad sector label {text:?}"))),
            })
            .collect::<Result<_>>()?;
        if signs.len() != 3 {
            return Err(Error::InvalidWrapping(format!("bad sector label {text:?}")));
        }
        Ok(Sector([signs[0], signs[1], signs[2]]))
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.0 {
            write!(f, "{}", if s > 0 { '+' } else { '-' })?;
        }
        Ok(())
    }
}

/// (e, k, Ω) with Ω stored in units of π/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OctantTopology {
    pub e: [i8; 3],
    pub k: [i64; 3],
    pub omega_units: i64,
}

impl OctantTopology {
    pub fn new(e: [i8; 3], k: [i64; 3], omega_units: i64) -> Result<Self> {
        let t = OctantTopology { e, k, omega_units };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.e.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidTopology(format!("edge signs must be ±1, got {:?}", self.e)));
        }
        let p = self.parity();
        let k: i64 = self.k.iter().sum();
        if (self.omega_units + p + 4 * k).rem_euclid(8) != 0 {
            return Err(Error::InvalidTopology(format!(
                "wrapping numbers are not integral: omega_units + e_x e_y e_z + 4 Σk = {} is not divisible by 8",
                self.omega_units + p + 4 * k
            )));
        }
        Ok(())
    }

    /// e_x e_y e_z.
    pub fn parity(&self) -> i64 {
        (self.e[0] * self.e[1] * self.e[2]) as i64
    }

    pub fn chi(&self) -> u8 {
        u8::from(self.k[0] * self.k[1] * self.k[2] < 0)
    }

    pub fn wrapping(&self) -> Result<WrappingNumbers> {
        wrapping_from_invariants(self)
    }
}

impl fmt::Display for OctantTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "e=({}) k=({},{},{}) omega={}·π/2",
            Sector(self.e),
            self.k[0],
            self.k[1],
            self.k[2],
            self.omega_units
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WrappingNumbers {
    pub w: [i64; 8],
}

impl WrappingNumbers {
    pub fn new(w: [i64; 8]) -> Self {
        WrappingNumbers { w }
    }

    pub fn zero() -> Self {
        WrappingNumbers { w: [0; 8] }
    }

    pub fn get(&self, s: Sector) -> i64 {
        self.w[s.index()]
    }

    pub fn set(&mut self, s: Sector, v: i64) {
        self.w[s.index()] = v;
    }

    pub fn from_fn(f: impl Fn(Sector) -> i64) -> Self {
        let mut w = WrappingNumbers::zero();
        for s in Sector::ALL {
            w.set(s, f(s));
        }
        w
    }

    pub fn iter(&self) -> impl Iterator<Item = (Sector, i64)> + '_ {
        Sector::ALL.into_iter().map(move |s| (s, self.get(s)))
    }

    pub fn abs_sum(&self) -> i64 {
        self.w.iter().map(|v| v.abs()).sum()
    }

    pub fn sum(&self) -> i64 {
        self.w.iter().sum()
    }

    pub fn to_map(&self) -> BTreeMap<String, i64> {
        self.iter().map(|(s, v)| (s.to_string(), v)).collect()
    }

    pub fn from_map(map: &BTreeMap<String, i64>) -> Result<Self> {
        let mut w = WrappingNumbers::zero();
        let mut seen = [false; 8];
        for (label, v) in map {
            let s = Sector::parse(label)?;
            w.set(s, *v);
            seen[s.index()] = true;
        }
        if let Some(missing) = Sector::ALL.iter().find(|s| !seen[s.index()]) {
            return Err(Error::InvalidWrapping(format!("missing sector {missing}")));
        }
        Ok(w)
    }
}

impl Serialize for WrappingNumbers {
    /// `{"w": {"+++": .., ...}}` in the fixed sector order.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        struct Ordered<'a>(&'a WrappingNumbers);
        impl Serialize for Ordered<'_> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(8))?;
                for (sec, v) in self.0.iter() {
                    m.serialize_entry(&sec.to_string(), &v)?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(1))?;
        m.serialize_entry("w", &Ordered(self))?;
        m.end()
    }
}

impl<'de> Deserialize<'de> for WrappingNumbers {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            w: BTreeMap<String, i64>,
        }
        let r = Repr::deserialize(d)?;
        WrappingNumbers::from_map(&r.w).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for WrappingNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(s, v)| format!("{s}:{v}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Eight wrapping numbers of a class; errors when any is non-integral.
pub fn wrapping_from_invariants(t: &OctantTopology) -> Result<WrappingNumbers> {
    t.validate()?;
    let p = t.parity();
    let e = Sector(t.e);
    let mut w = WrappingNumbers::zero();
    for s in Sector::ALL {
        let dot: i64 = (0..3).map(|j| s.0[j] as i64 * t.k[j]).sum();
        let delta = i64::from(s == e);
        let eight_w = t.omega_units + 4 * dot + p * (1 - 8 * delta);
        if eight_w.rem_euclid(8) != 0 {
            return Err(Error::InvalidTopology(format!("w_{s} = {eight_w}/8 is not an integer")));
        }
        w.set(s, eight_w / 8);
    }
    Ok(w)
}

/// The unique (e, k, Ω) reproducing `w`, found by trying all eight edge-sign
/// triples and solving the affine system exactly.
pub fn invariants_from_wrapping(w: &WrappingNumbers) -> Result<OctantTopology> {
    let mut found = Vec::new();
    for e in Sector::ALL {
        let p = (e.0[0] * e.0[1] * e.0[2]) as i64;
        let hat = |s: Sector| w.get(s) + if s == e { p } else { 0 };
        let total: i64 = Sector::ALL.iter().map(|&s| hat(s)).sum();
        let top = hat(Sector([1, 1, 1]));
        let k = [
            top - hat(Sector([-1, 1, 1])),
            top - hat(Sector([1, -1, 1])),
            top - hat(Sector([1, 1, -1])),
        ];
        // hat(σ) = total/8 + ½ Σ σ_j k_j must hold in every sector.
        let affine = Sector::ALL.iter().all(|&s| {
            let dot: i64 = (0..3).map(|j| s.0[j] as i64 * k[j]).sum();
            8 * hat(s) == total + 4 * dot
        });
        if affine {
            let t = OctantTopology { e: e.0, k, omega_units: total - p };
            if wrapping_from_invariants(&t).ok().as_ref() == Some(w) {
                found.push(t);
            }
        }
    }
    match found.len() {
        1 => Ok(found[0]),
        0 => Err(Error::InvalidWrapping(format!(
            "no (e, k, Ω) reproduces {w}; w_σ − e_x e_y e_z δ_(σ,e) must be affine in σ for some e"
        ))),
        _ => Err(Error::Consistency(format!("several classes reproduce {w}"))),
    }
}

/// JSON input accepted for a class: invariants or wrapping numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassInput {
    Invariants(OctantTopology),
    Wrapping(WrappingNumbers),
}

impl ClassInput {
    pub fn from_json(value: &serde_json::Value) -> Result<ClassInput> {
        if value.get("w").is_some() {
            let w: WrappingNumbers = serde_json::from_value(value.clone())
                .map_err(|e| Error::InvalidWrapping(e.to_string()))?;
            Ok(ClassInput::Wrapping(w))
        } else {
            let t: OctantTopology = serde_json::from_value(value.clone())
                .map_err(|e| Error::InvalidTopology(e.to_string()))?;
            t.validate()?;
            Ok(ClassInput::Invariants(t))
        }
    }

    /// Both representations; fails for inconsistent wrapping numbers.
    pub fn resolve(&self) -> Result<(OctantTopology, WrappingNumbers)> {
        match self {
            ClassInput::Invariants(t) => Ok((*t, wrapping_from_invariants(t)?)),
            ClassInput::Wrapping(w) => Ok((invariants_from_wrapping(w)?, *w)),
        }
    }
}

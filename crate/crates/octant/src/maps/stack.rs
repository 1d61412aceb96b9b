use super::complex::{Axis, ExtComplex, Finite};
use crate::error::{Error, Result};
use crate::homotopy::{Sector, WrappingNumbers};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Which layer formulas a stack uses. The 2c variants replace the first
/// `modified` layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StackVariant {
    Standard,
    Case2cX { modified: u32 },
    Case2cY { modified: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayerKind {
    /// −u/(√ε ρ_m): conformal, covers (−−±).
    Conformal,
    /// ρ_{m−1}/(√ε ū): anticonformal, covers (++±).
    AntiInverse,
    /// ρ_{m−1}/(√ε u): conformal, covers (+−±).
    ConformalInverse,
    /// ū/(√ε ρ_m): anticonformal, covers (+−±).
    AntiConjugate,
}

impl LayerKind {
    /// Wrapping contribution in the z-frame: (σx, σy) pair covered and its sign.
    fn coverage(self) -> ([i8; 2], i64) {
        match self {
            LayerKind::Conformal => ([-1, -1], -1),
            LayerKind::AntiInverse => ([1, 1], 1),
            LayerKind::ConformalInverse => ([1, -1], -1),
            LayerKind::AntiConjugate => ([1, -1], 1),
        }
    }
}

/// Region of the stack disc |u| ≤ ρ_L containing a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StackRegion {
    Layer(u32),
    Interp(u32),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuarterSphereStack {
    pub layers: u32,
    pub epsilon: f64,
    pub variant: StackVariant,
}

impl QuarterSphereStack {
    pub fn new(layers: u32, epsilon: f64, variant: StackVariant) -> Result<Self> {
        if layers == 0 {
            return Err(Error::InvalidSpec("a stack needs at least one layer".into()));
        }
        if !(epsilon > 0.0 && epsilon < 0.125) {
            return Err(Error::InvalidSpec(format!("epsilon {epsilon} outside (0, 1/8)")));
        }
        let modified = match variant {
            StackVariant::Standard => 0,
            StackVariant::Case2cX { modified } | StackVariant::Case2cY { modified } => modified,
        };
        if modified > layers {
            return Err(Error::InvalidSpec(format!(
                "{modified} modified layers exceed the {layers} layers of the stack"
            )));
        }
        Ok(QuarterSphereStack { layers, epsilon, variant })
    }

    pub fn standard(layers: u32, epsilon: f64) -> Result<Self> {
        Self::new(layers, epsilon, StackVariant::Standard)
    }

    /// ρ_m = ε^{L+1−m}, with ρ_0 = 0.
    pub fn radius(&self, m: u32) -> f64 {
        if m == 0 {
            0.0
        } else {
            self.epsilon.powi((self.layers + 1 - m) as i32)
        }
    }

    pub fn layer_kind(&self, m: u32) -> LayerKind {
        let odd = m % 2 == 1;
        match self.variant {
            StackVariant::Case2cX { modified } if m <= modified => {
                if odd {
                    LayerKind::Conformal
                } else {
                    LayerKind::ConformalInverse
                }
            }
            StackVariant::Case2cY { modified } if m <= modified => {
                if odd {
                    LayerKind::AntiConjugate
                } else {
                    LayerKind::AntiInverse
                }
            }
            _ => {
                if odd {
                    LayerKind::Conformal
                } else {
                    LayerKind::AntiInverse
                }
            }
        }
    }

    /// g_m by formula, at any u (no annulus check).
    pub fn layer_value(&self, m: u32, u: Complex64) -> ExtComplex {
        let c = self.epsilon.sqrt();
        let rho = self.radius(m);
        let rho_prev = self.radius(m - 1);
        let v = match self.layer_kind(m) {
            LayerKind::Conformal => -u / (c * rho),
            LayerKind::AntiConjugate => u.conj() / (c * rho),
            LayerKind::AntiInverse => return ExtComplex::from(u.conj()).recip().scale(rho_prev / c),
            LayerKind::ConformalInverse => return ExtComplex::from(u).recip().scale(rho_prev / c),
        };
        ExtComplex::from(v)
    }

    fn check_range(&self, r: f64, lo: f64, hi: f64) -> Result<()> {
        let tol = 1e-12 * hi;
        if r < lo - tol || r > hi + tol {
            return Err(Error::OutOfRange(format!("|w| = {r} outside [{lo}, {hi}]")));
        }
        Ok(())
    }

    /// g_{m,ε} on its annulus 2ρ_{m−1} ≤ |u| ≤ ρ_m.
    pub fn quarter_sphere_layer(&self, m: u32, u: Complex64) -> Result<ExtComplex> {
        if m == 0 || m > self.layers {
            return Err(Error::OutOfRange(format!("layer {m} not in 1..={}", self.layers)));
        }
        self.check_range(u.norm(), 2.0 * self.radius(m - 1), self.radius(m))?;
        Ok(self.layer_value(m, u))
    }

    /// h_{n,ε} on ρ_n ≤ |u| ≤ 2ρ_n, blending g_n into g_{n+1}.
    pub fn interpolant_layer(&self, n: u32, u: Complex64) -> Result<ExtComplex> {
        if n == 0 || n >= self.layers {
            return Err(Error::OutOfRange(format!("interpolant {n} not in 1..{}", self.layers)));
        }
        let rho = self.radius(n);
        self.check_range(u.norm(), rho, 2.0 * rho)?;
        Ok(self.interpolant_value(n, u))
    }

    fn interpolant_value(&self, n: u32, u: Complex64) -> ExtComplex {
        let rho = self.radius(n);
        let s = ((u.norm() - rho) / rho).clamp(0.0, 1.0);
        blend(n % 2 == 1, s, self.layer_value(n, u), self.layer_value(n + 1, u))
    }

    pub fn region(&self, u: Complex64) -> StackRegion {
        let r = u.norm();
        for m in 1..self.layers {
            let rho = self.radius(m);
            if r <= rho {
                return StackRegion::Layer(m);
            }
            if r < 2.0 * rho {
                return StackRegion::Interp(m);
            }
        }
        StackRegion::Layer(self.layers)
    }

    pub fn eval_region(&self, region: StackRegion, u: Complex64) -> ExtComplex {
        match region {
            StackRegion::Layer(m) => self.layer_value(m, u),
            StackRegion::Interp(n) => self.interpolant_value(n, u),
        }
    }

    /// Γ_{L,ε}(u); beyond ρ_L the top layer formula continues.
    pub fn eval(&self, u: Complex64) -> ExtComplex {
        self.eval_region(self.region(u), u)
    }

    /// Radii where the formula changes: ρ_m and 2ρ_m for m < L, then ρ_L.
    pub fn seams(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for m in 1..self.layers {
            out.push(self.radius(m));
            out.push(2.0 * self.radius(m));
        }
        out.push(self.radius(self.layers));
        out
    }

    /// Predicted wrapping contribution of the unrelocated stack.
    pub fn z_table(&self) -> WrappingNumbers {
        let mut w = WrappingNumbers::zero();
        for m in 1..=self.layers {
            let (pair, sign) = self.layer_kind(m).coverage();
            for z in [1i8, -1] {
                let s = Sector([pair[0], pair[1], z]);
                w.set(s, w.get(s) + sign);
            }
        }
        w
    }
}

/// Harmonic ((1−s)/a + s/b)⁻¹ when `harmonic`, linear (1−s)a + s b otherwise,
/// with ∞ handled on the sphere.
pub fn blend(harmonic: bool, s: f64, a: ExtComplex, b: ExtComplex) -> ExtComplex {
    if s <= 0.0 {
        return a;
    }
    if s >= 1.0 {
        return b;
    }
    if harmonic {
        let (ra, rb) = (a.recip(), b.recip());
        match (ra, rb) {
            (Finite(x), Finite(y)) => ExtComplex::from(x * (1.0 - s) + y * s).recip(),
            _ => super::complex::Infinity,
        }
    } else {
        match (a, b) {
            (Finite(x), Finite(y)) => ExtComplex::from(x * (1.0 - s) + y * s),
            _ => super::complex::Infinity,
        }
    }
}

/// Predicted per-sector wrapping contribution of the stack relocated to `axis`.
pub fn stack_degree_table(stack: &QuarterSphereStack, axis: Axis) -> WrappingNumbers {
    let w = stack.z_table();
    WrappingNumbers::from_fn(|s| {
        let [x, y, z] = s.signs();
        match axis {
            Axis::Z => w.get(s),
            Axis::X => w.get(Sector([y, z, x])),
            Axis::Y => w.get(Sector([z, x, y])),
        }
    })
}

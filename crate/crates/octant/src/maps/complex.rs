use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A point of the Riemann sphere ℂ ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

pub use ExtComplex::{Finite, Infinity};

impl From<Complex64> for ExtComplex {
    fn from(z: Complex64) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            Finite(z)
        } else {
            Infinity
        }
    }
}

impl ExtComplex {
    pub fn real(x: f64) -> Self {
        Finite(Complex64::new(x, 0.0))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Infinity)
    }

    pub fn finite(self) -> Option<Complex64> {
        match self {
            Finite(z) => Some(z),
            Infinity => None,
        }
    }

    /// |z|, with |∞| = +∞.
    pub fn norm(self) -> f64 {
        match self {
            Finite(z) => z.norm(),
            Infinity => f64::INFINITY,
        }
    }

    pub fn recip(self) -> Self {
        match self {
            Infinity => Finite(Complex64::new(0.0, 0.0)),
            Finite(z) if z.re == 0.0 && z.im == 0.0 => Infinity,
            Finite(z) => Finite(z.inv()),
        }
    }

    pub fn conj(self) -> Self {
        match self {
            Finite(z) => Finite(z.conj()),
            Infinity => Infinity,
        }
    }

    pub fn neg(self) -> Self {
        match self {
            Finite(z) => Finite(-z),
            Infinity => Infinity,
        }
    }

    pub fn scale(self, c: f64) -> Self {
        match self {
            Finite(z) => Finite(z * c),
            Infinity => Infinity,
        }
    }

    /// (a z + b)/(c z + d), evaluated through 1/z when |z| > 1.
    pub fn mobius(self, a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        let (num, den) = match self {
            Infinity => (a, c),
            Finite(z) if z.norm() > 1.0 => {
                let q = z.inv();
                (a + b * q, c + d * q)
            }
            Finite(z) => (a * z + b, c * z + d),
        };
        if den.re == 0.0 && den.im == 0.0 {
            Infinity
        } else {
            Finite(num / den).normalize()
        }
    }

    fn normalize(self) -> Self {
        match self {
            Finite(z) if !(z.re.is_finite() && z.im.is_finite()) => Infinity,
            other => other,
        }
    }

    /// Unit vector P⁻¹(z).
    pub fn to_sphere(self) -> [f64; 3] {
        stereographic_inverse(self)
    }

    /// Euclidean distance between the sphere points of `self` and `other`.
    pub fn chordal_distance(self, other: ExtComplex) -> f64 {
        let a = self.to_sphere();
        let b = other.to_sphere();
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
    }
}

/// P(s) = (s_x + i s_y)/(1 + s_z); the south pole goes to ∞.
pub fn stereographic(s: [f64; 3]) -> ExtComplex {
    let [x, y, z] = s;
    if z >= 0.0 {
        Finite(Complex64::new(x, y) / (1.0 + z))
    } else {
        // (1 + s_z)(1 − s_z) = s_x² + s_y² gives the well-conditioned form.
        let den = Complex64::new(x, -y);
        if den.norm() == 0.0 {
            Infinity
        } else {
            Finite(Complex64::new(1.0 - z, 0.0) / den)
        }
    }
}

pub fn stereographic_inverse(w: ExtComplex) -> [f64; 3] {
    match w {
        Infinity => [0.0, 0.0, -1.0],
        Finite(z) => {
            let n2 = z.norm_sqr();
            if n2 <= 1.0 {
                let d = 1.0 + n2;
                [2.0 * z.re / d, 2.0 * z.im / d, (1.0 - n2) / d]
            } else {
                let q = z.inv();
                let m2 = q.norm_sqr();
                let d = 1.0 + m2;
                [2.0 * q.re / d, -2.0 * q.im / d, (m2 - 1.0) / d]
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// γ(w) = (i − w)/(i + w), the rotation of the sphere sending ẑ ↦ x̂ ↦ ŷ ↦ ẑ.
pub fn gamma(w: ExtComplex) -> ExtComplex {
    w.mobius(c(-1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0), c(0.0, 1.0))
}

/// γ⁻¹(z) = i(1 − z)/(1 + z) = γ²(z).
pub fn gamma_inv(z: ExtComplex) -> ExtComplex {
    z.mobius(c(0.0, -1.0), c(0.0, 1.0), c(1.0, 0.0), c(1.0, 0.0))
}

/// γ_x = γ, γ_y = γ², γ_z = id: sends the vertex 0 of Q to the vertex of `axis`.
pub fn mobius_relocate(axis: Axis, w: ExtComplex) -> ExtComplex {
    match axis {
        Axis::X => gamma(w),
        Axis::Y => gamma_inv(w),
        Axis::Z => w,
    }
}

pub fn mobius_relocate_inv(axis: Axis, w: ExtComplex) -> ExtComplex {
    match axis {
        Axis::X => gamma_inv(w),
        Axis::Y => gamma(w),
        Axis::Z => w,
    }
}

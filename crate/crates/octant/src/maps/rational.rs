use super::complex::{ExtComplex, Finite, Infinity};
use super::condition::condition;
use crate::error::{Error, Result};
use crate::homotopy::{wrapping_from_invariants, invariants_from_wrapping, OctantTopology, Sector, WrappingNumbers};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Conformal,
    Anticonformal,
}

/// f(w) = ± w^{2m+1} Π_j R(w; r_j)^{ρ_j} Π_k I(w; s_k)^{σ_k} Π_l T(w; t_l)^{τ_l},
/// evaluated at w̄ when anticonformal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalMapSpec {
    pub overall_sign: i8,
    pub m: i32,
    #[serde(default)]
    pub real_factors: Vec<(f64, i8)>,
    #[serde(default)]
    pub imaginary_factors: Vec<(f64, i8)>,
    #[serde(default)]
    pub complex_factors: Vec<(Complex64, i8)>,
    pub orientation: Orientation,
}

fn unit_sign(s: i8, what: &str) -> Result<()> {
    if s == 1 || s == -1 {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("{what} must be ±1, got {s}")))
    }
}

fn sorted_distinct(values: &mut [f64], what: &str) -> Result<()> {
    values.sort_by(|a, b| a.total_cmp(b));
    if values.windows(2).any(|p| p[0] == p[1]) {
        return Err(Error::InvalidSpec(format!("repeated {what} parameter")));
    }
    Ok(())
}

impl RationalMapSpec {
    pub fn identity() -> Self {
        RationalMapSpec {
            overall_sign: 1,
            m: 0,
            real_factors: vec![],
            imaginary_factors: vec![],
            complex_factors: vec![],
            orientation: Orientation::Conformal,
        }
    }

    pub fn validate(&self) -> Result<()> {
        unit_sign(self.overall_sign, "overall sign")?;
        let mut rs = Vec::new();
        for &(r, rho) in &self.real_factors {
            unit_sign(rho, "real factor exponent")?;
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::InvalidSpec(format!("real factor parameter {r} outside (0,1)")));
            }
            rs.push(r);
        }
        sorted_distinct(&mut rs, "real factor")?;
        let mut ss = Vec::new();
        for &(s, sigma) in &self.imaginary_factors {
            unit_sign(sigma, "imaginary factor exponent")?;
            if !(s > 0.0 && s < 1.0) {
                return Err(Error::InvalidSpec(format!(
                    "imaginary factor parameter {s} outside (0,1)"
                )));
            }
            ss.push(s);
        }
        sorted_distinct(&mut ss, "imaginary factor")?;
        for (i, &(t, tau)) in self.complex_factors.iter().enumerate() {
            unit_sign(tau, "complex factor exponent")?;
            let arg = t.arg();
            if !(t.norm() < 1.0 && arg > 0.0 && arg < std::f64::consts::FRAC_PI_2) {
                return Err(Error::InvalidSpec(format!(
                    "complex factor parameter {t} must satisfy |t| < 1, 0 < arg t < π/2"
                )));
            }
            if self.complex_factors[..i].iter().any(|&(u, _)| u == t) {
                return Err(Error::InvalidSpec("repeated complex factor parameter".into()));
            }
        }
        Ok(())
    }

    /// Total degree |2m+1| + 2a + 2b + 4c of the rational function.
    pub fn degree(&self) -> i64 {
        (2 * self.m as i64 + 1).abs()
            + 2 * self.real_factors.len() as i64
            + 2 * self.imaginary_factors.len() as i64
            + 4 * self.complex_factors.len() as i64
    }

    pub fn evaluate(&self, w: ExtComplex) -> Result<ExtComplex> {
        let w = match self.orientation {
            Orientation::Conformal => w,
            Orientation::Anticonformal => w.conj(),
        };
        match w {
            Infinity => self.eval_infinity(),
            Finite(z) if z.norm() > 1.0 => {
                // f(1/q) through the reciprocal variable keeps the products bounded.
                self.eval_ratio(z.inv(), true)
            }
            Finite(z) => self.eval_ratio(z, false),
        }
    }

    /// Like `evaluate` but treating 0/0 as ∞; for sampling inside validated specs.
    pub fn eval(&self, w: ExtComplex) -> ExtComplex {
        self.evaluate(w).unwrap_or(Infinity)
    }

    fn eval_infinity(&self) -> Result<ExtComplex> {
        // Each factor pair tends to a finite nonzero constant at ∞; only the power matters.
        let p = 2 * self.m + 1;
        if p > 0 {
            Ok(Infinity)
        } else {
            Ok(Finite(Complex64::new(0.0, 0.0)))
        }
    }

    /// Numerator and denominator at z (or at 1/z when `recip`), accumulated
    /// with rescaling, then divided.
    fn eval_ratio(&self, z: Complex64, recip: bool) -> Result<ExtComplex> {
        let mut num = Complex64::new(self.overall_sign as f64, 0.0);
        let mut den = Complex64::new(1.0, 0.0);
        let z2 = z * z;
        let p = 2 * self.m + 1;
        // With q = 1/w each factor (w² − a)/(a w² − 1) becomes (1 − a q²)/(a − q²)
        // and w^p becomes q^{−p}.
        let power = if recip { -p } else { p };
        let zp = z.powi(power.abs());
        if power >= 0 {
            num *= zp;
        } else {
            den *= zp;
        }
        let mut mul = |a: Complex64, b: Complex64, e: i8| {
            if e > 0 {
                num *= a;
                den *= b;
            } else {
                num *= b;
                den *= a;
            }
            let scale = num.norm().max(den.norm());
            if scale > 1e150 || (scale < 1e-150 && scale > 0.0) {
                num /= scale;
                den /= scale;
            }
        };
        for &(r, rho) in &self.real_factors {
            let r2 = r * r;
            let (a, b) = pair(z2, Complex64::new(r2, 0.0), recip);
            mul(a, b, rho);
        }
        for &(s, sigma) in &self.imaginary_factors {
            // (w² + s²)/(s² w² + 1) is the negated pair at −s².
            let s2 = -s * s;
            let (a, b) = pair(z2, Complex64::new(s2, 0.0), recip);
            mul(a, -b, sigma);
        }
        for &(t, tau) in &self.complex_factors {
            let t2 = t * t;
            let (a1, b1) = pair(z2, t2, recip);
            let (a2, b2) = pair(z2, t2.conj(), recip);
            mul(a1 * a2, b1 * b2, tau);
        }
        let zero = |c: Complex64| c.re == 0.0 && c.im == 0.0;
        match (zero(num), zero(den)) {
            (true, true) => Err(Error::InvalidSpec("indeterminate 0/0 at a parameter collision".into())),
            (_, true) => Ok(Infinity),
            _ => Ok(ExtComplex::from(num / den)),
        }
    }

    /// Closed-form (e, k, Ω) of the map.
    pub fn invariants(&self) -> Result<OctantTopology> {
        self.validate()?;
        let conformal = self.conformal_invariants()?;
        match self.orientation {
            Orientation::Conformal => Ok(conformal),
            Orientation::Anticonformal => {
                let wf = wrapping_from_invariants(&conformal)?;
                invariants_from_wrapping(&reflect_y(&wf))
            }
        }
    }

    pub fn wrapping(&self) -> Result<WrappingNumbers> {
        wrapping_from_invariants(&self.invariants()?)
    }

    fn conformal_invariants(&self) -> Result<OctantTopology> {
        let mut reals = self.real_factors.clone();
        reals.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut imags = self.imaginary_factors.clone();
        imags.sort_by(|a, b| a.0.total_cmp(&b.0));
        let rho: Vec<i8> = reals.iter().map(|f| f.1).collect();
        let sigma: Vec<i8> = imags.iter().map(|f| f.1).collect();
        let tau: i64 = self.complex_factors.iter().map(|f| f.1 as i64).sum();
        let m = self.m as i64;
        let s = self.overall_sign as i64;
        let a = rho.len() as i64;
        let b = sigma.len() as i64;
        let ez = if m >= 0 { 1 } else { -1 };
        let ex = s * parity_sign(a);
        let ey = s * parity_sign(m + b);
        let start = if m >= 0 { Special::Zero } else { Special::Pole };
        let a1 = walk(start, &rho, s);
        let a2 = walk(start, &sigma, s * parity_sign(m));
        let a3 = (2 * m + 1)
            + 2 * rho.iter().map(|&x| x as i64).sum::<i64>()
            + 2 * sigma.iter().map(|&x| x as i64).sum::<i64>()
            + 4 * tau;
        let theta0 = if ez > 0 { 0 } else { 2 };
        let target = |e: i64| if e > 0 { 1 } else { 3 };
        let ky = -(a1 - short_turn(theta0, target(ex))) / 4;
        let kx = -(a2 - short_turn(theta0, target(ey))) / 4;
        let kz = -(a3 - short_turn(if ex > 0 { 0 } else { 2 }, target(ey))) / 4;
        OctantTopology::new([ex as i8, ey as i8, ez as i8], [kx, ky, kz], -self.degree())
    }
}

/// (w² − a, a w² − 1) at w = z, or its q-form (1 − a q², a − q²) at q = z.
fn pair(z2: Complex64, a: Complex64, recip: bool) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    if recip {
        (one - a * z2, a - z2)
    } else {
        (z2 - a, a * z2 - one)
    }
}

fn parity_sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// w^g_σ = −w^f_{(σx,−σy,σz)} for g = conj ∘ f.
pub fn reflect_y(w: &WrappingNumbers) -> WrappingNumbers {
    WrappingNumbers::from_fn(|s| {
        let [x, y, z] = s.signs();
        -w.get(Sector([x, -y, z]))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Special {
    Zero,
    Pole,
    Unit,
}

/// Position of a special value on the real (or imaginary) image line,
/// in quarter turns of tan(θ/2): 0 at 0, ±1 at ±1, ±2 at ∞.
fn position(c: Special, sign: i64) -> i64 {
    let p = match c {
        Special::Zero => 0,
        Special::Unit => 1,
        Special::Pole => 2,
    };
    p * sign
}

/// Net angle (in quarter turns) travelled by the image along an axis edge,
/// from the vertex through the interior zeros/poles to the arc.
fn walk(start: Special, exps: &[i8], first_sign: i64) -> i64 {
    let mut a = 0;
    let mut cur = start;
    let mut s = first_sign;
    for &e in exps {
        let c = if e > 0 { Special::Zero } else { Special::Pole };
        a += position(c, s) - position(cur, s);
        cur = c;
        s = -s;
    }
    a + position(Special::Unit, s) - position(cur, s)
}

/// Shortest signed quarter-turn step from a to b (b − a ≡ ±1 mod 4).
fn short_turn(a: i64, b: i64) -> i64 {
    match (b - a).rem_euclid(4) {
        1 => 1,
        3 => -1,
        d => panic!("short_turn between positions {d} apart"),
    }
}

/// (A, Σ exponents) reachable with n factors, each with a witness sequence.
fn reachable(n: usize, start: Special, first_sign: i64) -> BTreeMap<(i64, i64), Vec<i8>> {
    // state: (partial A, Σ, last class) → witness
    let mut states: BTreeMap<(i64, i64, Special), Vec<i8>> = BTreeMap::new();
    states.insert((0, 0, start), vec![]);
    for j in 0..n {
        let s = first_sign * parity_sign(j as i64);
        let mut next: BTreeMap<(i64, i64, Special), Vec<i8>> = BTreeMap::new();
        for ((a, sum, last), seq) in &states {
            for e in [1i8, -1] {
                let c = if e > 0 { Special::Zero } else { Special::Pole };
                let key = (a + position(c, s) - position(*last, s), sum + e as i64, c);
                next.entry(key).or_insert_with(|| {
                    let mut v = seq.clone();
                    v.push(e);
                    v
                });
            }
        }
        states = next;
    }
    let s = first_sign * parity_sign(n as i64);
    let mut out = BTreeMap::new();
    for ((a, sum, last), seq) in states {
        let key = (a + position(Special::Unit, s) - position(last, s), sum);
        out.entry(key).or_insert(seq);
    }
    out
}

fn spread(count: usize) -> Vec<f64> {
    (0..count).map(|j| 0.3 + 0.3 * (j as f64 + 0.5) / count as f64).collect()
}

/// A conformal or anticonformal rational representative of `t`.
pub fn realize_class(t: &OctantTopology) -> Result<RationalMapSpec> {
    let w = t.wrapping()?;
    if w.iter().all(|(_, v)| v <= 0) {
        let mut spec = condition(&realize_conformal(t)?);
        spec.orientation = Orientation::Conformal;
        return check(spec, t);
    }
    if w.iter().all(|(_, v)| v >= 0) {
        let f = invariants_from_wrapping(&reflect_y(&w))?;
        let mut spec = condition(&realize_conformal(&f)?);
        spec.orientation = Orientation::Anticonformal;
        return check(spec, t);
    }
    Err(Error::NotApplicable(format!("{t} is nonconformal; no rational representative")))
}

fn check(spec: RationalMapSpec, t: &OctantTopology) -> Result<RationalMapSpec> {
    let got = spec.invariants()?;
    if got != *t {
        return Err(Error::Consistency(format!("realization of {t} has invariants {got}")));
    }
    Ok(spec)
}

fn realize_conformal(t: &OctantTopology) -> Result<RationalMapSpec> {
    let [ex, ey, ez] = t.e.map(|v| v as i64);
    let [kx, ky, kz] = t.k;
    let d = -t.omega_units;
    if d <= 0 {
        return Err(Error::Construction(format!("{t} has no conformal representative")));
    }
    let mut ms: Vec<i64> = (-(d + 1) / 2..=d / 2).filter(|m| (2 * m + 1).abs() <= d).collect();
    ms.sort_by_key(|&m| ((2 * m + 1).abs(), -m));
    let target = |e: i64| if e > 0 { 1 } else { 3 };
    let theta0 = if ez > 0 { 0 } else { 2 };
    let a1_target = short_turn(theta0, target(ex)) - 4 * ky;
    let a2_target = short_turn(theta0, target(ey)) - 4 * kx;
    let a3_target = short_turn(if ex > 0 { 0 } else { 2 }, target(ey)) - 4 * kz;
    for m in ms {
        if (if m >= 0 { 1 } else { -1 }) != ez {
            continue;
        }
        let rest = d - (2 * m + 1).abs();
        if rest < 0 || rest % 2 != 0 {
            continue;
        }
        let start = if m >= 0 { Special::Zero } else { Special::Pole };
        for a in 0..=rest / 2 {
            for b in 0..=(rest - 2 * a) / 2 {
                let r4 = rest - 2 * a - 2 * b;
                if r4 % 4 != 0 {
                    continue;
                }
                let c = r4 / 4;
                let sign = ex * parity_sign(a);
                if sign * parity_sign(m + b) != ey {
                    continue;
                }
                let rr = reachable(a as usize, start, sign);
                let ii = reachable(b as usize, start, sign * parity_sign(m));
                for ((ar, sr), rseq) in &rr {
                    if *ar != a1_target {
                        continue;
                    }
                    for ((ai, si), iseq) in &ii {
                        if *ai != a2_target {
                            continue;
                        }
                        let rem = a3_target - (2 * m + 1) - 2 * sr - 2 * si;
                        if rem % 4 != 0 {
                            continue;
                        }
                        let tt = rem / 4;
                        if tt.abs() > c || (c - tt) % 2 != 0 {
                            continue;
                        }
                        let plus = ((c + tt) / 2) as usize;
                        let taus: Vec<i8> =
                            std::iter::repeat(1).take(plus).chain(std::iter::repeat(-1).take(c as usize - plus)).collect();
                        let rpar = spread(rseq.len());
                        let ipar = spread(iseq.len());
                        let nc = taus.len();
                        return Ok(RationalMapSpec {
                            overall_sign: sign as i8,
                            m: m as i32,
                            real_factors: rpar.into_iter().zip(rseq.iter().copied()).collect(),
                            imaginary_factors: ipar.into_iter().zip(iseq.iter().copied()).collect(),
                            complex_factors: taus
                                .iter()
                                .enumerate()
                                .map(|(l, &tau)| {
                                    let phi = std::f64::consts::FRAC_PI_2 * (l as f64 + 0.5) / nc as f64;
                                    (Complex64::from_polar(0.5, phi), tau)
                                })
                                .collect(),
                            orientation: Orientation::Conformal,
                        });
                    }
                }
            }
        }
    }
    Err(Error::Construction(format!("no rational realization found for {t}")))
}

//! Placement of the zeros and poles of a rational representative.
//!
//! The topology of a rational spec depends only on the order of the real
//! and imaginary parameters and on the complex ones lying in the open
//! quarter disc, so positions are free. We move them to keep the peak
//! energy density small, which keeps every preimage bubble resolvable by
//! the quadrature grids, while staying out of the vertex charts.

use super::complex::{gamma, gamma_inv, ExtComplex};
use super::rational::RationalMapSpec;
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

/// Special points stay at least this far from each vertex in its chart.
pub const CHART_CLEARANCE: f64 = 0.3;
const MAX_MODULUS: f64 = 0.92;
const MIN_SEPARATION: f64 = 0.04;
const MIN_ANGLE: f64 = 0.08;
const VERTEX_WEIGHT: f64 = 1.0;
const VERTICES: [Complex64; 3] =
    [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];

fn density_at(spec: &RationalMapSpec, w: Complex64) -> f64 {
    let h = 1e-6;
    let centre = spec.eval(ExtComplex::Finite(w));
    let flip = centre.norm() > 1.0;
    let val = |z: Complex64| {
        let v = spec.eval(ExtComplex::Finite(z));
        if flip {
            v.recip()
        } else {
            v
        }
    };
    let (Some(k), Some(a), Some(b), Some(c), Some(d)) = (
        val(w).finite(),
        val(w + h).finite(),
        val(w - h).finite(),
        val(w + Complex64::new(0.0, h)).finite(),
        val(w - Complex64::new(0.0, h)).finite(),
    ) else {
        return f64::INFINITY;
    };
    let du = (a - b) / (2.0 * h);
    let dv = (c - d) / (2.0 * h);
    let q = 1.0 + k.norm_sqr();
    4.0 * (du.norm_sqr() + dv.norm_sqr()) / (q * q)
}

struct Layout {
    a: usize,
    b: usize,
    c: usize,
}

impl Layout {
    fn of(spec: &RationalMapSpec) -> Self {
        Layout { a: spec.real_factors.len(), b: spec.imaginary_factors.len(), c: spec.complex_factors.len() }
    }

    fn pack(&self, spec: &RationalMapSpec) -> Vec<f64> {
        let mut x: Vec<f64> = spec.real_factors.iter().map(|f| f.0).collect();
        x.extend(spec.imaginary_factors.iter().map(|f| f.0));
        for (t, _) in &spec.complex_factors {
            x.push(t.norm());
            x.push(t.arg());
        }
        x
    }

    fn unpack(&self, x: &[f64], spec: &mut RationalMapSpec) {
        for j in 0..self.a {
            spec.real_factors[j].0 = x[j];
        }
        for k in 0..self.b {
            spec.imaginary_factors[k].0 = x[self.a + k];
        }
        for l in 0..self.c {
            let i = self.a + self.b + 2 * l;
            spec.complex_factors[l].0 = Complex64::from_polar(x[i], x[i + 1]);
        }
    }

    fn points(&self, x: &[f64]) -> Vec<Complex64> {
        let mut p: Vec<Complex64> = x[..self.a].iter().map(|&r| Complex64::new(r, 0.0)).collect();
        p.extend(x[self.a..self.a + self.b].iter().map(|&s| Complex64::new(0.0, s)));
        for l in 0..self.c {
            let i = self.a + self.b + 2 * l;
            p.push(Complex64::from_polar(x[i], x[i + 1]));
        }
        p
    }

    /// Total constraint violation (0 when feasible).
    fn violation(&self, x: &[f64]) -> f64 {
        let mut v = 0.0;
        let under = |value: f64, bound: f64| (bound - value).max(0.0);
        for w in [&x[..self.a], &x[self.a..self.a + self.b]] {
            for p in w.windows(2) {
                v += under(p[1] - p[0], MIN_SEPARATION);
            }
        }
        for l in 0..self.c {
            let phi = x[self.a + self.b + 2 * l + 1];
            v += under(phi, MIN_ANGLE) + under(FRAC_PI_2 - phi, MIN_ANGLE);
        }
        let pts = self.points(x);
        for (i, &z) in pts.iter().enumerate() {
            let e = ExtComplex::Finite(z);
            v += under(z.norm(), CHART_CLEARANCE);
            v += under(gamma_inv(e).norm(), CHART_CLEARANCE);
            v += under(gamma(e).norm(), CHART_CLEARANCE);
            v += under(MAX_MODULUS, z.norm());
            for &y in &pts[..i] {
                v += under((z - y).norm(), MIN_SEPARATION);
            }
        }
        v
    }
}

fn probes() -> Vec<Complex64> {
    let mut out = Vec::new();
    for i in 0..12 {
        for j in 0..12 {
            let r = (i as f64 + 0.5) / 12.0;
            out.push(Complex64::from_polar(r, FRAC_PI_2 * (j as f64 + 0.5) / 12.0));
        }
    }
    for j in 0..=16 {
        out.push(Complex64::from_polar(1.0, FRAC_PI_2 * j as f64 / 16.0));
    }
    // The vertices and their neighbourhoods, where bubbles also form.
    for r in [0.0, 0.01, 0.03] {
        for v in [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
            let toward = if v.norm() == 0.0 { Complex64::from_polar(1.0, FRAC_PI_2 / 2.0) } else { -v };
            out.push(v + toward * r);
        }
    }
    out
}

fn objective(layout: &Layout, x: &[f64], spec: &mut RationalMapSpec, probes: &[Complex64]) -> f64 {
    let viol = layout.violation(x);
    layout.unpack(x, spec);
    let mut peak = 0.0f64;
    for z in layout.points(x).into_iter().chain(probes.iter().copied()) {
        peak = peak.max(density_at(spec, z));
    }
    // Stacks are glued in at the vertices; a flat bulk there is cheap to blend.
    let vertex = VERTICES.iter().map(|&v| density_at(spec, v)).fold(0.0, f64::max);
    peak.ln() + VERTEX_WEIGHT * vertex.ln() + 1e3 * viol
}

/// Pattern search over the parameter positions; deterministic.
pub fn condition(spec: &RationalMapSpec) -> RationalMapSpec {
    let layout = Layout::of(spec);
    let mut work = spec.clone();
    let mut x = layout.pack(spec);
    if x.is_empty() {
        return work;
    }
    let probes = probes();
    let mut best = objective(&layout, &x, &mut work, &probes);
    let mut step = 0.08;
    let mut iterations = 0;
    while step > 2e-3 && iterations < 600 {
        iterations += 1;
        let mut improved = false;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                let mut y = x.clone();
                y[i] += dir * step;
                let v = objective(&layout, &y, &mut work, &probes);
                if v < best - 1e-9 {
                    best = v;
                    x = y;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    layout.unpack(&x, &mut work);
    work
}

/// Largest energy density over the probe set and the special points.
pub fn peak_density(spec: &RationalMapSpec) -> f64 {
    let layout = Layout::of(spec);
    let x = layout.pack(spec);
    layout
        .points(&x)
        .into_iter()
        .chain(probes())
        .map(|z| density_at(spec, z))
        .fold(0.0, f64::max)
}

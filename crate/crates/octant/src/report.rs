//! Artifact writers: CSV field dumps and SVG sector figures.

use crate::homotopy::Sector;
use crate::maps::{mobius_relocate, Axis, ExtComplex, Patchwork, SampledMap};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

/// Sample points of Q on a polar grid, excluding nothing.
fn polar_samples(n_r: usize, n_phi: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n_r * (n_phi + 1) + 1);
    out.push(Complex64::new(0.0, 0.0));
    for i in 1..=n_r {
        let r = i as f64 / n_r as f64;
        for j in 0..=n_phi {
            out.push(Complex64::from_polar(r, FRAC_PI_2 * j as f64 / n_phi as f64));
        }
    }
    out
}

fn fmt_f(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.12e}")
    } else {
        "inf".into()
    }
}

/// CSV with header `u,v,re_k,im_k,nu_x,nu_y,nu_z,subdomain`.
pub fn field_csv(map: &dyn SampledMap, n_r: usize, n_phi: usize) -> String {
    let mut s = String::from("u,v,re_k,im_k,nu_x,nu_y,nu_z,subdomain\n");
    for w in polar_samples(n_r, n_phi) {
        let k = map.eval(ExtComplex::Finite(w));
        let nu = k.to_sphere();
        let (re, im) = match k {
            ExtComplex::Finite(z) => (z.re, z.im),
            ExtComplex::Infinity => (f64::INFINITY, f64::INFINITY),
        };
        let tag = map.tag(ExtComplex::Finite(w));
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            fmt_f(w.re),
            fmt_f(w.im),
            fmt_f(re),
            fmt_f(im),
            fmt_f(nu[0]),
            fmt_f(nu[1]),
            fmt_f(nu[2]),
            tag
        );
    }
    s
}

fn sector_of(nu: [f64; 3]) -> Sector {
    let sg = |x: f64| if x >= 0.0 { 1 } else { -1 };
    Sector([sg(nu[0]), sg(nu[1]), sg(nu[2])])
}

const COLORS: [&str; 8] = ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#ffff33", "#a65628", "#f781bf"];

/// SVG 1.1 of Q tiled by polar cells, each filled by the image sector of
/// its midpoint; chart boundaries |u| = ε, 2ε are overlaid for patchworks.
pub fn sector_svg(map: &dyn SampledMap, patchwork: Option<&Patchwork>, n_r: usize, n_phi: usize) -> String {
    let size = 512.0;
    let margin = 16.0;
    let scale = size - 2.0 * margin;
    let to_xy = |w: Complex64| (margin + scale * w.re, size - margin - scale * w.im);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    for i in 0..n_r {
        let (r0, r1) = (i as f64 / n_r as f64, (i + 1) as f64 / n_r as f64);
        for j in 0..n_phi {
            let (p0, p1) = (FRAC_PI_2 * j as f64 / n_phi as f64, FRAC_PI_2 * (j + 1) as f64 / n_phi as f64);
            let mid = Complex64::from_polar(0.5 * (r0 + r1), 0.5 * (p0 + p1));
            let sector = sector_of(map.eval(ExtComplex::Finite(mid)).to_sphere());
            let corners = [
                Complex64::from_polar(r0, p0),
                Complex64::from_polar(r1, p0),
                Complex64::from_polar(r1, p1),
                Complex64::from_polar(r0, p1),
            ];
            let pts: Vec<String> = corners
                .iter()
                .map(|c| {
                    let (x, y) = to_xy(*c);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let _ = writeln!(
                s,
                r#"<polygon points="{}" fill="{}" stroke="none"><title>{}</title></polygon>"#,
                pts.join(" "),
                COLORS[sector.index()],
                sector
            );
        }
    }
    if let Some(p) = patchwork {
        let eps = p.epsilon();
        for axis in Axis::ALL {
            if p.stacks[axis.index()].is_none() {
                continue;
            }
            for r in [eps, 2.0 * eps] {
                let pts: Vec<String> = (0..=64)
                    .filter_map(|i| {
                        let u = Complex64::from_polar(r, FRAC_PI_2 * i as f64 / 64.0);
                        mobius_relocate(axis, ExtComplex::Finite(u)).finite().map(|w| {
                            let (x, y) = to_xy(w);
                            format!("{x:.2},{y:.2}")
                        })
                    })
                    .collect();
                let _ = writeln!(
                    s,
                    r#"<polyline points="{}" fill="none" stroke="black" stroke-width="1"/>"#,
                    pts.join(" ")
                );
            }
        }
    }
    let _ = writeln!(s, "</svg>");
    s
}

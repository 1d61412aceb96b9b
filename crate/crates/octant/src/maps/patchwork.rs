use super::complex::{mobius_relocate, mobius_relocate_inv, Axis, ExtComplex};
use super::rational::{realize_class, RationalMapSpec};
use super::sampled::{Piece, SampledMap, Subdomain};
use super::stack::{blend, stack_degree_table, QuarterSphereStack, StackRegion, StackVariant};
use crate::error::{Error, Result};
use crate::homotopy::{
    classify, delta_invariant, invariants_from_wrapping, Kind, OctantTopology, Sector, WrappingNumbers,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseId {
    #[serde(rename = "1a")]
    C1a,
    #[serde(rename = "1b")]
    C1b,
    #[serde(rename = "1c")]
    C1c,
    #[serde(rename = "1d")]
    C1d,
    #[serde(rename = "1e")]
    C1e,
    #[serde(rename = "1f")]
    C1f,
    #[serde(rename = "2a")]
    C2a,
    #[serde(rename = "2b")]
    C2b,
    #[serde(rename = "2c", alias = "2c-special")]
    C2c,
    #[serde(rename = "2d")]
    C2d,
    #[serde(rename = "2e")]
    C2e,
    #[serde(rename = "2f")]
    C2f,
    #[serde(rename = "general-sign")]
    GeneralSign,
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("serializable");
        write!(f, "{}", s.as_str().expect("string id"))
    }
}

/// Everything needed to assemble K_{H0,M,ε}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchworkSpec {
    /// The class as requested.
    pub input: OctantTopology,
    /// Target reflections (x, y, z) taking `input` to `target`.
    pub reflection: [bool; 3],
    /// The class actually constructed, with e = (+,+,+).
    pub target: OctantTopology,
    pub case_id: CaseId,
    pub h0: OctantTopology,
    pub m: [u32; 3],
    pub variants: [StackVariant; 3],
    pub epsilon: f64,
    /// Why the tabulated case was not used, when it was not.
    #[serde(default)]
    pub fallback: Option<String>,
}

/// The checked quantities of a spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecCheck {
    pub bulk: WrappingNumbers,
    pub stacks: [WrappingNumbers; 3],
    pub assembled: WrappingNumbers,
    pub coverage_lhs: i64,
    pub coverage_rhs: i64,
}

fn sector_reflect(s: Sector, axis: usize) -> Sector {
    let mut v = s.signs();
    v[axis] = -v[axis];
    Sector(v)
}

/// The class of R_j ∘ ν for the target reflection flipping coordinate `axis`.
pub fn reflect_class(t: &OctantTopology, axis: usize) -> Result<OctantTopology> {
    let w = t.wrapping()?;
    let r = WrappingNumbers::from_fn(|s| -w.get(sector_reflect(s, axis)));
    invariants_from_wrapping(&r)
}

/// Apply the target reflections to a value in the stereographic plane.
pub fn reflect_value(z: ExtComplex, reflection: [bool; 3]) -> ExtComplex {
    let mut z = z;
    if reflection[0] {
        z = z.conj().neg();
    }
    if reflection[1] {
        z = z.conj();
    }
    if reflection[2] {
        z = z.conj().recip();
    }
    z
}

type TableEntry = (CaseId, OctantTopology, [u32; 3], [StackVariant; 3]);

/// The case tables for e = (+,+,+), 0 < k_x ≤ k_y ≤ k_z, 1 ≤ n ≤ K − 2.
fn tabulated(t: &OctantTopology) -> Result<Option<TableEntry>> {
    let [kx, ky, kz] = t.k;
    if t.e != [1, 1, 1] || !(0 < kx && kx <= ky && ky <= kz) {
        return Ok(None);
    }
    let kk = kx + ky + kz;
    let n = t.wrapping()?.get(Sector([1, 1, 1]));
    use CaseId::*;
    let case = if kz < kx + ky {
        if 1 <= n && n < ky {
            C1a
        } else if ky <= n && 2 * n <= kk - 2 {
            C1b
        } else if 2 * n >= kk - 1 && n <= kx + ky - 2 {
            C1c
        } else if kx + ky - 1 <= n && n <= kx + kz - 2 {
            C1d
        } else if kx + kz - 1 <= n && n <= ky + kz - 2 {
            C1e
        } else if ky + kz - 1 <= n && n <= kk - 2 {
            C1f
        } else {
            return Ok(None);
        }
    } else if 1 <= n && n < ky {
        C2a
    } else if ky <= n && n <= kx + ky - 2 {
        C2b
    } else if kx + ky - 1 <= n && n <= kz - 1 {
        C2c
    } else if kz <= n && n <= kx + kz - 2 {
        C2d
    } else if kx + kz - 1 <= n && n <= ky + kz - 2 {
        C2e
    } else if ky + kz - 1 <= n && n <= kk - 2 {
        C2f
    } else {
        return Ok(None);
    };
    let std3 = [StackVariant::Standard; 3];
    let om_ab = -4 * kk + 7 + 8 * n;
    let (e0, k0, om0, m, variants): ([i8; 3], [i64; 3], i64, [i64; 3], [StackVariant; 3]) = match case {
        C1a | C2a => ([1, 1, 1], [kx, ky - n, kz - n], om_ab, [2 * n, 0, 0], std3),
        C1b | C2b => (
            [1, 1, 1],
            [1, 1, kk - 2 * n - 2],
            om_ab,
            [2 * (n - kx + 1), 2 * (n - ky + 1), 2 * (kx + ky - n - 2)],
            std3,
        ),
        C1c => (
            [1, 1, 1],
            [0, 0, 2 * n + 2 - kk],
            om_ab,
            [2 * (ky + kz - n - 1), 2 * (kx + kz - n - 1), 2 * (n - kz + 1)],
            std3,
        ),
        C1d | C2d => (
            [-1, -1, 1],
            [0, 0, 2 * n + 3 - kk],
            -4 * kk + 11 + 8 * n,
            [2 * (ky + kz - n - 2) + 1, 2 * (kx + kz - n - 2) + 1, 2 * (n - kz + 1)],
            std3,
        ),
        C1e | C2e => (
            [-1, -1, 1],
            [0, n - kz + 1, n - kx - ky + 2],
            -4 * kk + 11 + 8 * n,
            [2 * (ky + kz - n - 2) + 1, 2 * kx - 1, 0],
            std3,
        ),
        C1f | C2f => (
            [-1, 1, 1],
            [kx, n - kx - kz + 1, n - kx - ky + 1],
            -4 * kk + 9 + 8 * n,
            [2 * (kk - n - 2) + 1, 0, 0],
            std3,
        ),
        C2c => (
            [1, -1, 1],
            [0, 0, 0],
            1,
            [2 * ky + 2 * (kz - n - 1), 2 * (n - ky) + 1, 0],
            [
                StackVariant::Case2cX { modified: (2 * (kz - n - 1)) as u32 },
                StackVariant::Case2cY { modified: (2 * (n - kx - ky + 1)) as u32 },
                StackVariant::Standard,
            ],
        ),
        GeneralSign => unreachable!("not a table case"),
    };
    if m.iter().any(|&v| v < 0) {
        return Err(Error::Consistency(format!("case {case} table gives negative M {m:?}")));
    }
    let h0 = OctantTopology::new(e0, k0, om0)?;
    Ok(Some((case, h0, m.map(|v| v as u32), variants)))
}

fn stacks_for(m: [u32; 3], variants: [StackVariant; 3], epsilon: f64) -> Result<[Option<QuarterSphereStack>; 3]> {
    let mut out = [None, None, None];
    for j in 0..3 {
        if m[j] > 0 {
            out[j] = Some(QuarterSphereStack::new(m[j], epsilon, variants[j])?);
        }
    }
    Ok(out)
}

fn stack_tables(m: [u32; 3], variants: [StackVariant; 3], epsilon: f64) -> Result<[WrappingNumbers; 3]> {
    let stacks = stacks_for(m, variants, epsilon)?;
    let mut out = [WrappingNumbers::zero(); 3];
    for (j, axis) in Axis::ALL.into_iter().enumerate() {
        if let Some(s) = &stacks[j] {
            out[j] = stack_degree_table(s, axis);
        }
    }
    Ok(out)
}

/// Checks e₀ⱼ = (−1)^{Mⱼ}, that H0 is conformal or anticonformal, that the
/// assembled wrapping numbers equal the target, and the coverage identity.
pub fn verify_spec(spec: &PatchworkSpec) -> Result<SpecCheck> {
    let target_w = spec.target.wrapping()?;
    let bulk = spec.h0.wrapping()?;
    for j in 0..3 {
        let expect = if spec.m[j] % 2 == 0 { 1 } else { -1 };
        if spec.h0.e[j] != expect {
            return Err(Error::Consistency(format!(
                "bulk edge sign e0[{j}] = {} but M[{j}] = {}",
                spec.h0.e[j], spec.m[j]
            )));
        }
    }
    let kind = classify(&bulk, &spec.h0).kind;
    if kind == Kind::Nonconformal {
        return Err(Error::Consistency(format!("bulk class {} is nonconformal", spec.h0)));
    }
    let stacks = stack_tables(spec.m, spec.variants, spec.epsilon)?;
    let assembled = WrappingNumbers::from_fn(|s| bulk.get(s) + stacks.iter().map(|t| t.get(s)).sum::<i64>());
    if assembled != target_w {
        return Err(Error::Consistency(format!(
            "assembled wrapping numbers {assembled} differ from target {target_w}"
        )));
    }
    let lhs = bulk.abs_sum() + stacks.iter().map(|t| t.abs_sum()).sum::<i64>();
    let rhs = target_w.abs_sum() + delta_invariant(&target_w, &classify(&target_w, &spec.target))?;
    if lhs != rhs {
        return Err(Error::Consistency(format!("coverage identity fails: {lhs} ≠ {rhs}")));
    }
    Ok(SpecCheck { bulk, stacks, assembled, coverage_lhs: lhs, coverage_rhs: rhs })
}

/// Reflect the target so every edge sign is +.
pub fn normalize(t: &OctantTopology) -> Result<(OctantTopology, [bool; 3])> {
    let mut cur = *t;
    let mut refl = [false; 3];
    for j in 0..3 {
        if cur.e[j] < 0 {
            cur = reflect_class(&cur, j)?;
            refl[j] = true;
        }
    }
    Ok((cur, refl))
}

/// First M (by M_x+M_y+M_z, then lexicographically) with standard stacks
/// whose bulk class is valid, realizable and satisfies every spec check.
fn search_m(target: &OctantTopology, epsilon: f64, input: &OctantTopology, refl: [bool; 3]) -> Result<PatchworkSpec> {
    let w = target.wrapping()?;
    let total = w.abs_sum() + delta_invariant(&w, &classify(&w, target))?;
    let std3 = [StackVariant::Standard; 3];
    for sum in 0..=(total / 2) as u32 {
        for mx in 0..=sum {
            for my in 0..=sum - mx {
                let m = [mx, my, sum - mx - my];
                let tables = stack_tables(m, std3, epsilon)?;
                let w0 = WrappingNumbers::from_fn(|s| w.get(s) - tables.iter().map(|t| t.get(s)).sum::<i64>());
                let Ok(h0) = invariants_from_wrapping(&w0) else { continue };
                let spec = PatchworkSpec {
                    input: *input,
                    reflection: refl,
                    target: *target,
                    case_id: CaseId::GeneralSign,
                    h0,
                    m,
                    variants: std3,
                    epsilon,
                    fallback: None,
                };
                if verify_spec(&spec).is_ok() && realize_class(&h0).is_ok() {
                    return Ok(spec);
                }
            }
        }
    }
    Err(Error::Unsupported(format!(
        "no stack multiplicities M with M_x+M_y+M_z ≤ {} realize {target}",
        total / 2
    )))
}

/// Choose H0 and M for a nonconformal class: the case tables when they
/// apply and validate, the M-search otherwise.
pub fn select_case(input: &OctantTopology, epsilon: f64) -> Result<PatchworkSpec> {
    input.validate()?;
    if !(epsilon > 0.0 && epsilon < 0.125) {
        return Err(Error::OutOfRange(format!("epsilon {epsilon} outside (0, 1/8)")));
    }
    let w = input.wrapping()?;
    let kind = classify(&w, input).kind;
    if kind != Kind::Nonconformal {
        return Err(Error::NotApplicable(format!(
            "{input} is {kind}; it has a rational representative and needs no patchwork"
        )));
    }
    let (target, refl) = normalize(input)?;
    let fallback = match tabulated(&target)? {
        Some((case_id, h0, m, variants)) => {
            let spec = PatchworkSpec {
                input: *input,
                reflection: refl,
                target,
                case_id,
                h0,
                m,
                variants,
                epsilon,
                fallback: None,
            };
            match verify_spec(&spec).and_then(|_| realize_class(&h0)) {
                Ok(_) => return Ok(spec),
                Err(e) => Some(format!("case {case_id} table rejected: {e}")),
            }
        }
        None => None,
    };
    let mut spec = search_m(&target, epsilon, input, refl)?;
    spec.fallback = fallback;
    verify_spec(&spec)?;
    Ok(spec)
}

/// K_{H0,M,ε}: the bulk rational map with a quarter-sphere stack spliced in
/// at each vertex with M_j > 0.
#[derive(Debug, Clone)]
pub struct Patchwork {
    pub spec: PatchworkSpec,
    pub bulk: RationalMapSpec,
    pub stacks: [Option<QuarterSphereStack>; 3],
}

pub fn assemble_patchwork(spec: &PatchworkSpec) -> Result<Patchwork> {
    verify_spec(spec)?;
    let bulk = realize_class(&spec.h0)
        .map_err(|e| Error::Construction(format!("no rational bulk map for {}: {e}", spec.h0)))?;
    let stacks = stacks_for(spec.m, spec.variants, spec.epsilon)?;
    Ok(Patchwork { spec: spec.clone(), bulk, stacks })
}

impl Patchwork {
    pub fn epsilon(&self) -> f64 {
        self.spec.epsilon
    }

    /// F in the normalized frame.
    fn bulk_value(&self, w: ExtComplex) -> ExtComplex {
        self.bulk.eval(w)
    }

    /// The chart value B(u) = γ_j⁻¹ K γ_j (u), normalized frame, for |u| ≤ 2ε.
    fn chart_value(&self, axis: Axis, u: Complex64) -> ExtComplex {
        let eps = self.spec.epsilon;
        let Some(stack) = &self.stacks[axis.index()] else {
            return self.bulk_chart(axis, u);
        };
        let r = u.norm();
        if r <= eps {
            return stack.eval(u);
        }
        let f = self.bulk_chart(axis, u);
        if r >= 2.0 * eps {
            return f;
        }
        let s = (r - eps) / eps;
        let l = stack.layers;
        blend(l % 2 == 1, s, stack.layer_value(l, u), f)
    }

    fn bulk_chart(&self, axis: Axis, u: Complex64) -> ExtComplex {
        mobius_relocate_inv(axis, self.bulk_value(mobius_relocate(axis, ExtComplex::from(u))))
    }

    fn output(&self, z: ExtComplex) -> ExtComplex {
        reflect_value(z, self.spec.reflection)
    }

    /// Chart containing w, if any, with its coordinate.
    fn locate(&self, w: ExtComplex) -> Option<(Axis, Complex64)> {
        for axis in Axis::ALL {
            if self.stacks[axis.index()].is_none() {
                continue;
            }
            if let Some(u) = mobius_relocate_inv(axis, w).finite() {
                if u.norm() < 2.0 * self.spec.epsilon {
                    return Some((axis, u));
                }
            }
        }
        None
    }

    /// Seam radii of the chart at `axis` (stack seams, then ε and 2ε).
    pub fn chart_seams(&self, axis: Axis) -> Vec<f64> {
        let mut seams = match &self.stacks[axis.index()] {
            Some(s) => s.seams(),
            None => vec![],
        };
        seams.retain(|&r| r < self.spec.epsilon * (1.0 - 1e-12));
        seams.push(self.spec.epsilon);
        seams
    }
}

impl SampledMap for Patchwork {
    fn eval(&self, w: ExtComplex) -> ExtComplex {
        match self.locate(w) {
            Some((axis, u)) => self.output(mobius_relocate(axis, self.chart_value(axis, u))),
            None => self.output(self.bulk_value(w)),
        }
    }

    fn tag(&self, w: ExtComplex) -> Subdomain {
        let Some((axis, u)) = self.locate(w) else {
            return Subdomain::Bulk;
        };
        if u.norm() > self.spec.epsilon {
            return Subdomain::Switch { axis };
        }
        let stack = self.stacks[axis.index()].as_ref().expect("located charts have stacks");
        match stack.region(u) {
            StackRegion::Layer(m) => Subdomain::Annulus { axis, layer: m },
            StackRegion::Interp(n) => Subdomain::Interp { axis, layer: n },
        }
    }

    fn pieces(&self) -> Vec<Piece> {
        let mut out = vec![Piece::whole()];
        let r = 2.0 * self.spec.epsilon;
        for axis in Axis::ALL {
            if self.stacks[axis.index()].is_none() {
                continue;
            }
            let seams = self.chart_seams(axis);
            let id = out.len();
            out.push(Piece::vertex(id, axis, r, -1, seams.clone(), &format!("bulk@{}", axis.name())));
            out.push(Piece::vertex(id + 1, axis, r, 1, seams, &format!("chart@{}", axis.name())));
        }
        out
    }

    fn eval_piece(&self, piece: &Piece, u: Complex64) -> ExtComplex {
        match piece.frame {
            super::sampled::Frame::Vertex(axis) if piece.radius < 1.0 => {
                let b = if piece.weight < 0 { self.bulk_chart(axis, u) } else { self.chart_value(axis, u) };
                self.output(mobius_relocate(axis, b))
            }
            _ => self.output(self.bulk_value(piece.point(u))),
        }
    }

    fn seam_samples(&self, per_seam: usize) -> Vec<(ExtComplex, ExtComplex)> {
        let mut out = Vec::new();
        let delta = 1e-10;
        for axis in Axis::ALL {
            if self.stacks[axis.index()].is_none() {
                continue;
            }
            let mut radii = self.chart_seams(axis);
            radii.push(2.0 * self.spec.epsilon);
            for &r in &radii {
                for i in 0..per_seam {
                    let phi = std::f64::consts::FRAC_PI_2 * (i as f64 + 0.5) / per_seam as f64;
                    let inner = Complex64::from_polar(r * (1.0 - delta), phi);
                    let outer = Complex64::from_polar(r * (1.0 + delta), phi);
                    let a = mobius_relocate(axis, self.chart_value(axis, inner));
                    let b = mobius_relocate(axis, self.chart_value(axis, outer));
                    out.push((self.output(a), self.output(b)));
                }
            }
        }
        out
    }
}

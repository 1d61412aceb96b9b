//! Shared test fixtures.
#![allow(dead_code)]

use num_complex::Complex64;
use octant::homotopy::OctantTopology;
use octant::maps::{realize_class, ExtComplex, Piece, RationalMapSpec, SampledMap, Subdomain};

/// Anticonformal bulk of class e = (+,+,+), k = (1,1,1), Ω = 11π/2 with a
/// conformal bubble inserted in a small interior disc. The result lies in
/// the class Ω = 3π/2 and covers the four top sectors three times.
pub struct BubbleFixture {
    pub bulk: RationalMapSpec,
    pub center: Complex64,
    pub radius: f64,
    pub scale: f64,
    /// F(center), sent to 0 by the target rotation.
    anchor: Complex64,
}

impl BubbleFixture {
    pub fn new() -> Self {
        let t = OctantTopology::new([1, 1, 1], [1, 1, 1], 11).expect("valid class");
        let bulk = realize_class(&t).expect("anticonformal realization");
        let center = Complex64::from_polar(0.5, 0.6);
        let anchor = bulk.eval(ExtComplex::Finite(center)).finite().expect("finite at the centre");
        let radius = 0.04;
        BubbleFixture { bulk, center, radius, scale: 0.1 * radius, anchor }
    }

    fn bulk_at(&self, w: ExtComplex) -> ExtComplex {
        self.bulk.eval(w)
    }

    /// Rotation of the sphere taking the anchor to 0 and its inverse.
    fn rotate(&self, z: ExtComplex) -> ExtComplex {
        let a = self.anchor;
        z.mobius(Complex64::new(1.0, 0.0), -a, a.conj(), Complex64::new(1.0, 0.0))
    }

    fn unrotate(&self, z: ExtComplex) -> ExtComplex {
        let a = self.anchor;
        z.mobius(Complex64::new(1.0, 0.0), a, -a.conj(), Complex64::new(1.0, 0.0))
    }

    /// The map on the disc, u = w − centre.
    fn inside(&self, u: Complex64) -> ExtComplex {
        let rho = u.norm();
        let cutoff = if rho <= 0.5 * self.radius { 1.0 } else { (2.0 * (1.0 - rho / self.radius)).max(0.0) };
        if rho == 0.0 {
            return self.unrotate(ExtComplex::Infinity);
        }
        let base = self.rotate(self.bulk_at(ExtComplex::Finite(self.center + u)));
        match base.finite() {
            Some(g) => self.unrotate(ExtComplex::from(g + cutoff * self.scale / u)),
            None => self.unrotate(base),
        }
    }
}

impl SampledMap for BubbleFixture {
    fn eval(&self, w: ExtComplex) -> ExtComplex {
        match w.finite() {
            Some(z) if (z - self.center).norm() < self.radius => self.inside(z - self.center),
            _ => self.bulk_at(w),
        }
    }

    fn tag(&self, w: ExtComplex) -> Subdomain {
        match w.finite() {
            Some(z) if (z - self.center).norm() < self.radius => Subdomain::Bubble,
            _ => Subdomain::Bulk,
        }
    }

    fn pieces(&self) -> Vec<Piece> {
        let seams = vec![self.scale, 0.5 * self.radius];
        vec![
            Piece::whole(),
            Piece::disc(1, self.center, self.radius, -1, seams.clone(), "disc bulk"),
            Piece::disc(2, self.center, self.radius, 1, seams, "bubble"),
        ]
    }

    fn eval_piece(&self, piece: &Piece, u: Complex64) -> ExtComplex {
        match piece.id {
            2 => self.inside(u),
            _ => self.bulk_at(piece.point(u)),
        }
    }
}

/// Deterministic generator for ad hoc corpora.
pub fn rng(seed: u64) -> rand::rngs::StdRng {
    use rand::SeedableRng;
    rand::rngs::StdRng::seed_from_u64(seed)
}

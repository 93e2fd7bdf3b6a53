//! Canonical compact sets and their exterior conformal maps.
//!
//! A domain here is a compact set `E` (containing the origin, with connected
//! complement) together with the conformal map `Φ` of the complement of `E`
//! onto the complement of the closed unit disk, normalized by `Φ(∞) = ∞` and
//! `Φ′(∞) = 1/cap(E) > 0`, where `cap(E)` is the logarithmic capacity. `Ψ`
//! denotes the inverse map. Level curves `Γ_ρ = {z : |Φ(z)| = ρ}` for
//! `ρ > 1` bound the canonical domains `D_ρ` on which all the quadrature in
//! this crate takes place.
//!
//! Every supported set has an inverse map with a *finite* Laurent expansion
//! at infinity,
//!
//! ```text
//! Ψ(w) = cap·w + c₀ + c₁/w + … + c_p/w^p ,
//! ```
//!
//! which the Faber-polynomial recurrence consumes directly:
//!
//! * disk of radius `r` centered at `c`: `Ψ(w) = r·w + c`, capacity `r`;
//! * ellipse with semi-axes `a ≥ b > 0` centered at `c` (axes parallel to the
//!   coordinate axes): `Ψ(w) = c + ((a+b)/2)·w + ((a−b)/2)/w`, capacity
//!   `(a+b)/2`;
//! * segment `[a, b]`: the rotated Joukowski map, capacity `|b−a|/4`;
//! * an explicit finite Laurent map, inverted by damped Newton iteration.
//!
//! Square roots pick the branch that maximizes the modulus of the result,
//! which is the branch mapping onto the exterior of the unit disk. Points on
//! the boundary of `E` return unimodular values of `Φ`; only points in the
//! interior of `E` (which has no exterior image) are errors.

use std::fmt;

use num_complex::Complex64;

/// Errors produced by domain construction and the conformal maps.
#[derive(Clone, Debug, PartialEq)]
pub enum ConformalError {
    /// The domain parameters do not describe a supported compact set.
    InvalidDomain(String),
    /// `Φ` was evaluated at a point in the interior of `E`.
    PointInsideDomain { z: Complex64 },
    /// `Ψ` was evaluated strictly inside the unit disk.
    InsideUnitDisk { w: Complex64 },
    /// A level-curve radius must satisfy `ρ > 1`.
    BadRho { rho: f64 },
    /// Contour sampling requires a power-of-two node count of at least 8.
    BadNodeCount { node_count: usize },
    /// Newton inversion of a Laurent map failed to converge at an exterior
    /// point.
    InversionFailed { z: Complex64 },
}

impl fmt::Display for ConformalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConformalError::InvalidDomain(msg) => write!(f, "invalid domain: {}", msg),
            ConformalError::PointInsideDomain { z } => {
                write!(f, "point {} lies in the interior of the domain", z)
            }
            ConformalError::InsideUnitDisk { w } => {
                write!(f, "point {} lies inside the unit disk", w)
            }
            ConformalError::BadRho { rho } => {
                write!(f, "level curve radius must exceed 1, got {}", rho)
            }
            ConformalError::BadNodeCount { node_count } => write!(
                f,
                "node count must be a power of two >= 8, got {}",
                node_count
            ),
            ConformalError::InversionFailed { z } => {
                write!(f, "Newton inversion failed to converge at {}", z)
            }
        }
    }
}

impl std::error::Error for ConformalError {}

type Result<T> = std::result::Result<T, ConformalError>;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Relative slack used when classifying points against the unit circle.
const BOUNDARY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
enum DomainKind {
    Disk {
        center: Complex64,
        radius: f64,
    },
    Ellipse {
        center: Complex64,
        semi_major: f64,
        semi_minor: f64,
    },
    Segment {
        a: Complex64,
        b: Complex64,
    },
    LaurentMap {
        cap: f64,
        c0: Complex64,
        tail: Vec<Complex64>,
    },
}

/// A canonical compact set together with its exterior conformal map.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    kind: DomainKind,
}

/// Equispaced sample of a level curve `Γ_ρ`.
///
/// Node `k` sits at `t_k = Ψ(ρ·e^{iθ_k})` with `θ_k = 2πk/N`. The node count
/// is a power of two so the contour quadrature can hand the values straight
/// to an FFT.
#[derive(Clone, Debug)]
pub struct ContourSample {
    /// Level-curve index `ρ > 1`.
    pub rho: f64,
    /// The points `Ψ(ρ·e^{iθ_k})` in node order.
    pub points: Vec<Complex64>,
}

impl ContourSample {
    /// Number of quadrature nodes.
    pub fn node_count(&self) -> usize {
        self.points.len()
    }

    /// Node angle `θ_k = 2πk/N`.
    pub fn theta(&self, k: usize) -> f64 {
        2.0 * std::f64::consts::PI * (k as f64) / (self.points.len() as f64)
    }
}

impl Domain {
    /// Closed disk `{|z - center| ≤ radius}`. The origin must lie in the
    /// disk.
    pub fn disk(center: Complex64, radius: f64) -> Result<Domain> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(ConformalError::InvalidDomain(format!(
                "disk radius must be positive and finite, got {}",
                radius
            )));
        }
        let d = Domain {
            kind: DomainKind::Disk { center, radius },
        };
        d.check_contains_origin(center.norm() <= radius * (1.0 + 1e-12))?;
        Ok(d)
    }

    /// Closed ellipse centered at `center` with semi-axes `semi_major ≥
    /// semi_minor > 0` parallel to the coordinate axes. Degenerate ellipses
    /// are rejected; use [`Domain::segment`] for a slit.
    pub fn ellipse(center: Complex64, semi_major: f64, semi_minor: f64) -> Result<Domain> {
        if !(semi_minor > 0.0) || !semi_major.is_finite() || !semi_minor.is_finite() {
            return Err(ConformalError::InvalidDomain(format!(
                "ellipse semi-axes must be positive and finite, got ({}, {})",
                semi_major, semi_minor
            )));
        }
        if semi_major < semi_minor {
            return Err(ConformalError::InvalidDomain(format!(
                "ellipse semi-major axis {} is smaller than semi-minor axis {}",
                semi_major, semi_minor
            )));
        }
        let d = Domain {
            kind: DomainKind::Ellipse {
                center,
                semi_major,
                semi_minor,
            },
        };
        let dx = -center.re / semi_major;
        let dy = -center.im / semi_minor;
        d.check_contains_origin(dx * dx + dy * dy <= 1.0 + 1e-12)?;
        Ok(d)
    }

    /// Straight segment from `a` to `b`. The origin must lie on the segment.
    pub fn segment(a: Complex64, b: Complex64) -> Result<Domain> {
        if (b - a).norm() == 0.0 {
            return Err(ConformalError::InvalidDomain(
                "segment endpoints coincide".to_string(),
            ));
        }
        let d = Domain {
            kind: DomainKind::Segment { a, b },
        };
        let len = (b - a).norm();
        d.check_contains_origin(a.norm() + b.norm() <= len * (1.0 + 1e-12))?;
        Ok(d)
    }

    /// A compact set given by the finite Laurent expansion of its exterior
    /// inverse map, `Ψ(w) = cap·w + c0 + Σ_k tail[k-1]·w^{-k}`.
    ///
    /// The caller is responsible for `Ψ` being univalent on `{|w| > 1}`; the
    /// constructor verifies `cap > 0` and that the origin belongs to `E`.
    pub fn laurent_map(cap: f64, c0: Complex64, tail: Vec<Complex64>) -> Result<Domain> {
        if !(cap > 0.0) || !cap.is_finite() {
            return Err(ConformalError::InvalidDomain(format!(
                "capacity must be positive and finite, got {}",
                cap
            )));
        }
        let d = Domain {
            kind: DomainKind::LaurentMap { cap, c0, tail },
        };
        // The origin is in E exactly when it has no exterior preimage.
        match d.phi(ZERO) {
            Ok(w) if w.norm() > 1.0 + 1e-9 => d.check_contains_origin(false)?,
            _ => {}
        }
        Ok(d)
    }

    fn check_contains_origin(&self, ok: bool) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(ConformalError::InvalidDomain(
                "the origin must lie in the compact set".to_string(),
            ))
        }
    }

    /// Logarithmic capacity `cap(E) = 1/Φ′(∞)`.
    pub fn capacity(&self) -> f64 {
        match &self.kind {
            DomainKind::Disk { radius, .. } => *radius,
            DomainKind::Ellipse {
                semi_major,
                semi_minor,
                ..
            } => 0.5 * (semi_major + semi_minor),
            DomainKind::Segment { a, b } => 0.25 * (*b - *a).norm(),
            DomainKind::LaurentMap { cap, .. } => *cap,
        }
    }

    /// The finite Laurent data `(cap, c₀, [c₁, …, c_p])` of `Ψ` at infinity.
    pub fn laurent_data(&self) -> (f64, Complex64, Vec<Complex64>) {
        match &self.kind {
            DomainKind::Disk { center, radius } => (*radius, *center, Vec::new()),
            DomainKind::Ellipse {
                center,
                semi_major,
                semi_minor,
            } => (
                0.5 * (semi_major + semi_minor),
                *center,
                vec![Complex64::new(0.5 * (semi_major - semi_minor), 0.0)],
            ),
            DomainKind::Segment { a, b } => {
                let h = 0.5 * (*b - *a);
                let mid = 0.5 * (*a + *b);
                // Rotate so the leading coefficient is positive real:
                // Ψ(w) = mid + (|h|/2)·w + (h²/(2|h|))/w.
                (0.5 * h.norm(), mid, vec![h * h / (2.0 * h.norm())])
            }
            DomainKind::LaurentMap { cap, c0, tail } => (*cap, *c0, tail.clone()),
        }
    }

    /// Re-expresses this domain in its explicit Laurent-map form.
    pub fn to_laurent_map(&self) -> Domain {
        let (cap, c0, tail) = self.laurent_data();
        Domain {
            kind: DomainKind::LaurentMap { cap, c0, tail },
        }
    }

    /// Inverse exterior map `Ψ(w)` for `|w| ≥ 1`.
    pub fn psi(&self, w: Complex64) -> Result<Complex64> {
        if w.norm() < 1.0 - 1e-12 {
            return Err(ConformalError::InsideUnitDisk { w });
        }
        Ok(self.psi_unchecked(w))
    }

    fn psi_unchecked(&self, w: Complex64) -> Complex64 {
        let (cap, c0, tail) = match &self.kind {
            DomainKind::LaurentMap { cap, c0, tail } => (*cap, *c0, tail.as_slice()),
            _ => return self.psi_closed_form(w),
        };
        let mut value = cap * w + c0;
        let winv = w.inv();
        let mut power = winv;
        for &c in tail {
            value += c * power;
            power *= winv;
        }
        value
    }

    fn psi_closed_form(&self, w: Complex64) -> Complex64 {
        match &self.kind {
            DomainKind::Disk { center, radius } => center + radius * w,
            DomainKind::Ellipse {
                center,
                semi_major,
                semi_minor,
            } => {
                let p = Complex64::new(0.5 * (semi_major + semi_minor), 0.0);
                let q = Complex64::new(0.5 * (semi_major - semi_minor), 0.0);
                center + p * w + q / w
            }
            DomainKind::Segment { a, b } => {
                let h = 0.5 * (*b - *a);
                let mid = 0.5 * (*a + *b);
                let u = h / h.norm();
                // v lives on the standard Joukowski side: w = u·v.
                let v = w / u;
                mid + h * 0.5 * (v + v.inv())
            }
            DomainKind::LaurentMap { .. } => unreachable!(),
        }
    }

    /// Exterior map `Φ(z)` for `z` outside (or on the boundary of) `E`.
    pub fn phi(&self, z: Complex64) -> Result<Complex64> {
        match &self.kind {
            DomainKind::Disk { center, radius } => {
                let w = (z - center) / *radius;
                if w.norm() < 1.0 - BOUNDARY_TOL {
                    Err(ConformalError::PointInsideDomain { z })
                } else {
                    Ok(w)
                }
            }
            DomainKind::Ellipse {
                center,
                semi_major,
                semi_minor,
                ..
            } => {
                let x = z - center;
                let f2 = Complex64::new(
                    semi_major * semi_major - semi_minor * semi_minor,
                    0.0,
                );
                let w = outward_root(x, f2) / (semi_major + semi_minor);
                if w.norm() < 1.0 - BOUNDARY_TOL {
                    Err(ConformalError::PointInsideDomain { z })
                } else {
                    Ok(w)
                }
            }
            DomainKind::Segment { a, b } => {
                let h = 0.5 * (*b - *a);
                let mid = 0.5 * (*a + *b);
                let u = h / h.norm();
                let x = (z - mid) / h;
                let v = outward_root(x, Complex64::new(1.0, 0.0));
                // Points on the segment itself sit on Γ₁; the set has empty
                // interior, so there is nothing to reject.
                Ok(u * v)
            }
            DomainKind::LaurentMap { .. } => self.phi_newton(z),
        }
    }

    /// Damped Newton inversion of a Laurent map.
    fn phi_newton(&self, z: Complex64) -> Result<Complex64> {
        let (cap, c0, tail) = self.laurent_data();
        let scale = 1e-13 * (1.0 + z.norm() + cap);
        let psi = |w: Complex64| self.psi_unchecked(w);
        let dpsi = |w: Complex64| {
            let winv = w.inv();
            let mut power = winv * winv;
            let mut d = Complex64::new(cap, 0.0);
            for (k, &c) in tail.iter().enumerate() {
                d -= ((k + 1) as f64) * c * power;
                power *= winv;
            }
            d
        };

        let mut w = (z - c0) / cap;
        if w.norm() < 1.0 + 1e-6 {
            let n = w.norm();
            w = if n == 0.0 {
                Complex64::new(1.0 + 1e-6, 0.0)
            } else {
                w * ((1.0 + 1e-6) / n)
            };
        }
        let mut fw = psi(w) - z;
        for _ in 0..50 {
            if fw.norm() <= scale {
                return Ok(w);
            }
            let d = dpsi(w);
            if d.norm() == 0.0 {
                break;
            }
            let step = fw / d;
            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..30 {
                let mut cand = w - lambda * step;
                // Keep the iterate out of the unit disk, where Ψ need not be
                // univalent.
                if cand.norm() < 1.0 - 1e-9 {
                    cand *= (1.0 - 1e-9) / cand.norm();
                }
                let fc = psi(cand) - z;
                if fc.norm() < fw.norm() {
                    w = cand;
                    fw = fc;
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if fw.norm() <= scale {
            return Ok(w);
        }
        if w.norm() <= 1.0 + 1e-6 {
            // The iteration stalled at the boundary: no exterior preimage.
            Err(ConformalError::PointInsideDomain { z })
        } else {
            Err(ConformalError::InversionFailed { z })
        }
    }

    /// Samples `Γ_ρ` at `node_count` equispaced angles.
    ///
    /// `node_count` must be a power of two, at least 8, so the sample can be
    /// consumed by the FFT-based quadrature directly.
    pub fn sample_level_curve(&self, rho: f64, node_count: usize) -> Result<ContourSample> {
        if !(rho > 1.0) || !rho.is_finite() {
            return Err(ConformalError::BadRho { rho });
        }
        if node_count < 8 || !node_count.is_power_of_two() {
            return Err(ConformalError::BadNodeCount { node_count });
        }
        let mut points = Vec::with_capacity(node_count);
        for k in 0..node_count {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (node_count as f64);
            let w = Complex64::from_polar(rho, theta);
            points.push(self.psi_unchecked(w));
        }
        Ok(ContourSample { rho, points })
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            DomainKind::Disk { center, radius } => {
                write!(f, "disk(center={}, radius={})", center, radius)
            }
            DomainKind::Ellipse {
                center,
                semi_major,
                semi_minor,
            } => write!(
                f,
                "ellipse(center={}, semi-axes={}, {})",
                center, semi_major, semi_minor
            ),
            DomainKind::Segment { a, b } => write!(f, "segment({} .. {})", a, b),
            DomainKind::LaurentMap { cap, c0, tail } => {
                write!(f, "laurent-map(cap={}, c0={}, tail=[", cap, c0)?;
                for (k, c) in tail.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", c)?;
                }
                write!(f, "])")
            }
        }
    }
}

/// `x + √(x² − f²)` with the branch of the square root chosen so the result
/// has the larger modulus of the two candidates.
fn outward_root(x: Complex64, f2: Complex64) -> Complex64 {
    let s = (x * x - f2).sqrt();
    let plus = x + s;
    let minus = x - s;
    if plus.norm() >= minus.norm() {
        plus
    } else {
        minus
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit_disk() -> Domain {
        Domain::disk(ZERO, 1.0).unwrap()
    }

    #[test]
    fn capacities_of_the_catalog() {
        assert_eq!(Domain::disk(c(0.2, 0.0), 2.0).unwrap().capacity(), 2.0);
        // Segment of length L has capacity L/4.
        let seg = Domain::segment(c(-1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((seg.capacity() - 0.5).abs() < 1e-15);
        let seg2 = Domain::segment(c(-2.0, -2.0), c(2.0, 2.0)).unwrap();
        assert!((seg2.capacity() - 32.0f64.sqrt() / 4.0).abs() < 1e-15);
        let ell = Domain::ellipse(ZERO, 2.0, 1.0).unwrap();
        assert!((ell.capacity() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn disk_maps_are_affine() {
        let d = Domain::disk(c(0.5, 0.0), 2.0).unwrap();
        let z = c(4.5, 0.0);
        assert!((d.phi(z).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
        assert!((d.psi(c(2.0, 0.0)).unwrap() - z).norm() < 1e-15);
    }

    #[test]
    fn segment_exterior_map_hits_known_values() {
        let seg = Domain::segment(c(-1.0, 0.0), c(1.0, 0.0)).unwrap();
        // Φ(2) = 2 + √3 for the Joukowski inverse.
        let w = seg.phi(c(2.0, 0.0)).unwrap();
        assert!((w - c(2.0 + 3f64.sqrt(), 0.0)).norm() < 1e-12);
        // Points on the segment sit on the image of the unit circle.
        let on = seg.phi(c(0.3, 0.0)).unwrap();
        assert!((on.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ellipse_boundary_maps_to_unit_circle() {
        let ell = Domain::ellipse(c(0.1, -0.2), 2.0, 1.0).unwrap();
        for k in 0..16 {
            let t = 2.0 * std::f64::consts::PI * (k as f64) / 16.0;
            let z = c(0.1 + 2.0 * t.cos(), -0.2 + 1.0 * t.sin());
            let w = ell.phi(z).unwrap();
            assert!(
                (w.norm() - 1.0).abs() < 1e-10,
                "|Φ| = {} at boundary point {}",
                w.norm(),
                z
            );
        }
    }

    #[test]
    fn interior_points_are_rejected() {
        let d = unit_disk();
        match d.phi(c(0.3, 0.1)) {
            Err(ConformalError::PointInsideDomain { .. }) => {}
            other => panic!("expected PointInsideDomain, got {:?}", other),
        }
        let ell = Domain::ellipse(ZERO, 2.0, 1.0).unwrap();
        match ell.phi(c(1.0, 0.2)) {
            Err(ConformalError::PointInsideDomain { .. }) => {}
            other => panic!("expected PointInsideDomain, got {:?}", other),
        }
    }

    #[test]
    fn psi_rejects_the_open_unit_disk() {
        let d = unit_disk();
        match d.psi(c(0.5, 0.0)) {
            Err(ConformalError::InsideUnitDisk { .. }) => {}
            other => panic!("expected InsideUnitDisk, got {:?}", other),
        }
    }

    #[test]
    fn phi_psi_round_trip_on_all_variants() {
        let domains = vec![
            unit_disk(),
            Domain::disk(c(0.3, -0.1), 1.7).unwrap(),
            Domain::ellipse(c(0.1, 0.05), 2.0, 1.0).unwrap(),
            Domain::segment(c(-1.0, 0.0), c(1.0, 0.0)).unwrap(),
            Domain::segment(c(-1.0, -0.5), c(2.0, 1.0)).unwrap(),
            Domain::laurent_map(1.2, c(0.1, 0.2), vec![c(0.2, 0.0), c(-0.05, 0.1)]).unwrap(),
        ];
        for d in &domains {
            for i in 0..8 {
                for &rho in &[1.05, 1.5, 2.0, 4.0] {
                    let theta = 2.0 * std::f64::consts::PI * (i as f64) / 8.0;
                    let w = Complex64::from_polar(rho, theta);
                    let z = d.psi(w).unwrap();
                    let back = d.phi(z).unwrap();
                    assert!(
                        (back - w).norm() < 1e-10,
                        "round trip failed on {}: w={}, back={}",
                        d,
                        w,
                        back
                    );
                }
            }
        }
    }

    #[test]
    fn laurent_form_agrees_with_closed_forms() {
        let originals = vec![
            Domain::disk(c(0.3, -0.1), 1.7).unwrap(),
            Domain::ellipse(c(0.1, 0.05), 2.0, 1.0).unwrap(),
            Domain::segment(c(-1.0, -0.5), c(2.0, 1.0)).unwrap(),
        ];
        for d in &originals {
            let lm = d.to_laurent_map();
            assert!((d.capacity() - lm.capacity()).abs() < 1e-14);
            for i in 0..6 {
                let theta = 2.0 * std::f64::consts::PI * (i as f64) / 6.0 + 0.1;
                let w = Complex64::from_polar(1.8, theta);
                let z = d.psi(w).unwrap();
                // The Newton inversion must reproduce the closed form.
                let w_newton = lm.phi(z).unwrap();
                assert!(
                    (w_newton - w).norm() < 1e-10,
                    "laurent inversion mismatch on {}: {} vs {}",
                    d,
                    w_newton,
                    w
                );
            }
        }
    }

    #[test]
    fn origin_must_lie_in_the_set() {
        match Domain::disk(c(5.0, 0.0), 1.0) {
            Err(ConformalError::InvalidDomain(_)) => {}
            other => panic!("expected InvalidDomain, got {:?}", other),
        }
        match Domain::segment(c(1.0, 0.0), c(2.0, 0.0)) {
            Err(ConformalError::InvalidDomain(_)) => {}
            other => panic!("expected InvalidDomain, got {:?}", other),
        }
    }

    #[test]
    fn degenerate_ellipses_are_rejected() {
        match Domain::ellipse(ZERO, 2.0, 0.0) {
            Err(ConformalError::InvalidDomain(_)) => {}
            other => panic!("expected InvalidDomain, got {:?}", other),
        }
        match Domain::ellipse(ZERO, 1.0, 2.0) {
            Err(ConformalError::InvalidDomain(_)) => {}
            other => panic!("expected InvalidDomain, got {:?}", other),
        }
    }

    #[test]
    fn level_curve_samples_lie_on_the_curve() {
        let domains = vec![
            Domain::ellipse(c(0.1, 0.05), 2.0, 1.0).unwrap(),
            Domain::segment(c(-1.0, 0.0), c(1.0, 0.0)).unwrap(),
        ];
        for d in &domains {
            let sample = d.sample_level_curve(1.7, 64).unwrap();
            assert_eq!(sample.node_count(), 64);
            for &t in &sample.points {
                let w = d.phi(t).unwrap();
                assert!((w.norm() - 1.7).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn bad_sampling_parameters_are_rejected() {
        let d = unit_disk();
        match d.sample_level_curve(1.0, 64) {
            Err(ConformalError::BadRho { .. }) => {}
            other => panic!("expected BadRho, got {:?}", other),
        }
        match d.sample_level_curve(2.0, 48) {
            Err(ConformalError::BadNodeCount { .. }) => {}
            other => panic!("expected BadNodeCount, got {:?}", other),
        }
    }
}

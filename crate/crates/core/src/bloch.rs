//! Bloch-sphere geometry of two-level paths.
//!
//! Solid angles are sums of signed geodesic triangles fanned out from a
//! reference pole. Between samples the curve is taken to follow great circles,
//! so for a polyline the result equals the line integral of
//! `(1 - cos Theta) dPhi` with a continuously unwrapped azimuth; in particular
//! it accumulates over repeated windings instead of being reduced mod `4 pi`.

use std::f64::consts::TAU;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::StateVector;
use crate::phase::wrap;
use crate::propagator::SampledPath;

pub const UNIT_TOL: f64 = 1e-10;

/// Geodesic endpoint gap up to which a path counts as closed.
pub const CLOSURE_TOL: f64 = 1e-6;

/// Samples closer than this to the reference pole make the azimuth undefined.
pub const POLE_TOL: f64 = 1e-8;

/// Side-of-plane tolerance in the crossing test.
pub const CROSSING_TOL: f64 = 1e-9;

/// Segments longer than this (radians) are too coarse to test for crossings.
pub const MAX_SEGMENT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let p = Self { x, y, z };
        let n = p.dot(&p).sqrt();
        if !n.is_finite() {
            return Err(Error::NonFinite);
        }
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(p)
    }

    /// Projects a nonzero vector onto the sphere.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(Self {
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    pub const NORTH: BlochPoint = BlochPoint {
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };

    pub const SOUTH: BlochPoint = BlochPoint {
        x: 0.0,
        y: 0.0,
        z: -1.0,
    };

    pub fn dot(&self, o: &BlochPoint) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &BlochPoint) -> [f64; 3] {
        [
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        ]
    }

    /// Great-circle distance.
    pub fn geodesic_distance(&self, o: &BlochPoint) -> f64 {
        let c = self.cross(o);
        let s = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
        s.atan2(self.dot(o))
    }

    pub fn chord(&self, o: &BlochPoint) -> f64 {
        ((self.x - o.x).powi(2) + (self.y - o.y).powi(2) + (self.z - o.z).powi(2)).sqrt()
    }

    /// Applies a 3x3 matrix given row by row.
    pub fn rotated(&self, r: &[[f64; 3]; 3]) -> BlochPoint {
        let v = [self.x, self.y, self.z];
        let f = |row: &[f64; 3]| row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
        BlochPoint {
            x: f(&r[0]),
            y: f(&r[1]),
            z: f(&r[2]),
        }
    }
}

fn det(p: &BlochPoint, a: &BlochPoint, b: &BlochPoint) -> f64 {
    let c = a.cross(b);
    p.x * c[0] + p.y * c[1] + p.z * c[2]
}

/// `(2 Re(psi0* psi1), 2 Im(psi0* psi1), |psi0|^2 - |psi1|^2)`.
pub fn to_bloch(state: &StateVector) -> Result<BlochPoint> {
    if state.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: state.dim(),
        });
    }
    let a = state.as_slice();
    let c = a[0].conj() * a[1];
    BlochPoint::normalized(2.0 * c.re, 2.0 * c.im, a[0].norm_sqr() - a[1].norm_sqr())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlochPath {
    /// Path parameter of each point.
    pub s: Vec<f64>,
    pub points: Vec<BlochPoint>,
    /// Endpoint gap at most [`CLOSURE_TOL`].
    pub closed: bool,
}

impl BlochPath {
    /// Consecutive points must be less than `pi / 2` apart.
    pub fn new(s: Vec<f64>, points: Vec<BlochPoint>) -> Result<Self> {
        if s.len() != points.len() || points.len() < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least two points with one parameter each (got {} and {})",
                points.len(),
                s.len()
            )));
        }
        for (k, w) in points.windows(2).enumerate() {
            let d = w[0].geodesic_distance(&w[1]);
            if d >= std::f64::consts::FRAC_PI_2 {
                return Err(Error::TooCoarse {
                    segment: k,
                    length: d,
                });
            }
        }
        let closed = points[0].geodesic_distance(points.last().unwrap()) <= CLOSURE_TOL;
        Ok(Self { s, points, closed })
    }

    /// Points parameterized by their index scaled to `[0, 1]`.
    pub fn from_points(points: Vec<BlochPoint>) -> Result<Self> {
        let m = (points.len().max(2) - 1) as f64;
        let s = (0..points.len()).map(|k| k as f64 / m).collect();
        Self::new(s, points)
    }

    pub fn from_sampled(path: &SampledPath) -> Result<Self> {
        let points = path
            .states
            .iter()
            .map(to_bloch)
            .collect::<Result<Vec<_>>>()?;
        Self::new(path.grid.clone(), points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn reversed(&self) -> BlochPath {
        let mut points = self.points.clone();
        points.reverse();
        let s = self.s.iter().rev().map(|v| 1.0 - v).collect();
        BlochPath {
            s,
            points,
            closed: self.closed,
        }
    }

    pub fn rotated(&self, r: &[[f64; 3]; 3]) -> BlochPath {
        BlochPath {
            s: self.s.clone(),
            points: self.points.iter().map(|p| p.rotated(r)).collect(),
            closed: self.closed,
        }
    }

    /// Concatenation; the first point of `other` is dropped if it repeats the
    /// last point of `self`.
    pub fn concat(&self, other: &BlochPath) -> Result<BlochPath> {
        let mut points = self.points.clone();
        let skip = usize::from(self.points.last().unwrap().chord(&other.points[0]) <= CLOSURE_TOL);
        points.extend(other.points.iter().skip(skip).copied());
        BlochPath::from_points(points)
    }

    /// CSV with columns `s, x, y, z`.
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["s", "x", "y", "z"])?;
        for (s, p) in self.s.iter().zip(&self.points) {
            out.write_record([
                format!("{s:.16e}"),
                format!("{:.16e}", p.x),
                format!("{:.16e}", p.y),
                format!("{:.16e}", p.z),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_csv_file(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Closure {
    /// Use the samples as given (the last point is expected to repeat the
    /// first).
    AlreadyClosed,
    /// Return from the last point to the first along the shorter great
    /// circle.
    GeodesicClose,
}

/// Signed solid angle of the closed curve, measured in the north-pole gauge
/// of `(1 - cos Theta) dPhi`.
///
/// Triangles are fanned from whichever pole lies farther from the centroid of
/// the samples. With the south pole as apex the result is shifted by `4 pi`
/// times the winding number about the `z` axis, which expresses it in the
/// north-pole gauge.
pub fn solid_angle(path: &BlochPath, closure: Closure) -> Result<f64> {
    if path.len() < 3 {
        return Err(Error::InvalidGrid(format!(
            "solid angle needs at least 3 points, got {}",
            path.len()
        )));
    }
    let first = path.points[0];
    let last = *path.points.last().unwrap();
    if closure == Closure::GeodesicClose && first.chord(&last) > 2.0 - 1e-12 {
        return Err(Error::AntipodalEndpoints);
    }
    let cz = path.points.iter().map(|p| p.z).sum::<f64>() / path.len() as f64;
    let pole = if cz > 0.0 {
        BlochPoint::SOUTH
    } else {
        BlochPoint::NORTH
    };
    for (k, p) in path.points.iter().enumerate() {
        if p.chord(&pole) < POLE_TOL {
            return Err(Error::PoleCrossing { index: k });
        }
    }

    let segments = path
        .points
        .windows(2)
        .map(|w| (w[0], w[1]))
        .chain(std::iter::once((last, first)));
    let mut area = 0.0;
    let mut azimuth = 0.0;
    for (a, b) in segments {
        let num = det(&pole, &a, &b);
        let den = 1.0 + pole.dot(&a) + pole.dot(&b) + a.dot(&b);
        area += 2.0 * num.atan2(den);
        azimuth += (a.x * b.y - a.y * b.x).atan2(a.x * b.x + a.y * b.y);
    }
    if pole == BlochPoint::SOUTH {
        let winding = (azimuth / TAU).round();
        area += 2.0 * TAU * winding;
    }
    Ok(area)
}

/// Counts transverse intersections between non-adjacent great-circle
/// segments of the polyline.
pub fn count_self_crossings(path: &BlochPath) -> Result<usize> {
    let pts = &path.points;
    let nseg = pts.len() - 1;
    for k in 0..nseg {
        let d = pts[k].geodesic_distance(&pts[k + 1]);
        if d > MAX_SEGMENT {
            return Err(Error::TooCoarse {
                segment: k,
                length: d,
            });
        }
    }
    let normals: Vec<[f64; 3]> = (0..nseg).map(|k| pts[k].cross(&pts[k + 1])).collect();
    let side = |n: &[f64; 3], p: &BlochPoint| n[0] * p.x + n[1] * p.y + n[2] * p.z;
    let straddles = |u: f64, v: f64| {
        (u > CROSSING_TOL && v < -CROSSING_TOL) || (u < -CROSSING_TOL && v > CROSSING_TOL)
    };
    let mut count = 0;
    for i in 0..nseg {
        let (a, b) = (pts[i], pts[i + 1]);
        for j in (i + 2)..nseg {
            if path.closed && i == 0 && j == nseg - 1 {
                continue;
            }
            let (c, d) = (pts[j], pts[j + 1]);
            // Both segments are shorter than MAX_SEGMENT, so they can only
            // meet if their starts are within twice that.
            if a.chord(&c) > 2.0 * MAX_SEGMENT {
                continue;
            }
            if straddles(side(&normals[i], &c), side(&normals[i], &d))
                && straddles(side(&normals[j], &a), side(&normals[j], &b))
                && a.dot(&c) > 0.0
            {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `Omega' = Omega - 2 |a1|^2 w0 T`: the solid angle with the signed area of
/// the small loops (`-4 pi |a1|^2` each, `w0 T / 2 pi` of them) removed.
pub fn corrected_solid_angle(omega: f64, a1_mag2: f64, omega0: f64, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a1_mag2) {
        return Err(Error::InvalidParameter(format!(
            "|a1|^2 must lie in [0, 1], got {a1_mag2}"
        )));
    }
    Ok(omega - 2.0 * a1_mag2 * omega0 * t)
}

/// `wrap(-Omega / 2)`.
pub fn gp_from_solid_angle(omega: f64) -> f64 {
    wrap(-0.5 * omega)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolidAngleReport {
    pub omega: f64,
    pub crossings: usize,
    pub omega_corrected: f64,
    /// `wrap(-omega / 2)`.
    pub gp_predicted: f64,
    /// `wrap(-omega_corrected / 2)`.
    pub gp_corrected: f64,
    /// `w0 T / 2 pi`, the expected number of small loops.
    pub expected_loops: f64,
}

/// Solid angle with geodesic closure, crossing count and the corrected
/// solid angle for excited weight `a1_mag2`.
pub fn solid_angle_report(
    path: &BlochPath,
    a1_mag2: f64,
    omega0: f64,
    t: f64,
) -> Result<SolidAngleReport> {
    let omega = solid_angle(path, Closure::GeodesicClose)?;
    let crossings = count_self_crossings(path)?;
    let omega_corrected = corrected_solid_angle(omega, a1_mag2, omega0, t)?;
    Ok(SolidAngleReport {
        omega,
        crossings,
        omega_corrected,
        gp_predicted: gp_from_solid_angle(omega),
        gp_corrected: gp_from_solid_angle(omega_corrected),
        expected_loops: omega0 * t / TAU,
    })
}

/// `m` points on the circle of polar angle `theta`, traversed `turns` times
/// with increasing azimuth; the last point repeats the first.
pub fn latitude_circle(theta: f64, m: usize, turns: u32) -> Result<BlochPath> {
    let (st, ct) = theta.sin_cos();
    let points = (0..=m)
        .map(|k| {
            let phi = TAU * turns as f64 * k as f64 / m as f64;
            BlochPoint::normalized(st * phi.cos(), st * phi.sin(), ct)
        })
        .collect::<Result<Vec<_>>>()?;
    BlochPath::from_points(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{spin_half_eigensystem, SpinHalfParams};
    use crate::linalg::C64;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn basis_state_is_north_pole() {
        let p = to_bloch(&StateVector::basis(2, 0)).unwrap();
        assert_eq!(p, BlochPoint::NORTH);
        assert!(matches!(
            to_bloch(&StateVector::basis(3, 0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn ground_eigenvector_lies_on_latitude_circle() {
        let params = SpinHalfParams::new(1.1, 10.0).unwrap();
        for k in 0..=10 {
            let s = k as f64 / 10.0;
            let v = &spin_half_eigensystem(&params, s).vectors[0];
            let p = to_bloch(v).unwrap();
            let (st, ct) = 1.1f64.sin_cos();
            let phi = TAU * s;
            assert!((p.x - st * phi.cos()).abs() < 1e-15);
            assert!((p.y - st * phi.sin()).abs() < 1e-15);
            assert!((p.z - ct).abs() < 1e-15);
        }
    }

    #[test]
    fn bloch_map_ignores_global_phase() {
        let v = StateVector::from_slice(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let p = to_bloch(&v).unwrap();
        for k in 0..100 {
            let phi = -PI + TAU * k as f64 / 100.0 + 0.013;
            let q = to_bloch(&v.scaled(C64::from_polar(1.0, phi))).unwrap();
            assert!(p.chord(&q) < 1e-15);
        }
    }

    #[test]
    fn latitude_circles_enclose_caps() {
        for k in 0..20 {
            let theta = 0.05 + (PI - 0.1) * k as f64 / 19.0;
            let path = latitude_circle(theta, 20_000, 1).unwrap();
            let omega = solid_angle(&path, Closure::AlreadyClosed).unwrap();
            let want = TAU * (1.0 - theta.cos());
            assert!(
                (omega - want).abs() <= 1e-6,
                "theta {theta}: {omega} vs {want}"
            );
        }
    }

    #[test]
    fn equator_accumulates_over_windings() {
        let once = latitude_circle(PI / 2.0, 2000, 1).unwrap();
        let twice = latitude_circle(PI / 2.0, 4000, 2).unwrap();
        assert!((solid_angle(&once, Closure::AlreadyClosed).unwrap() - TAU).abs() < 1e-9);
        assert!((solid_angle(&twice, Closure::AlreadyClosed).unwrap() - 2.0 * TAU).abs() < 1e-9);
        let joined = once.concat(&once).unwrap();
        assert!((solid_angle(&joined, Closure::AlreadyClosed).unwrap() - 2.0 * TAU).abs() < 1e-9);
    }

    #[test]
    fn open_arc_is_closed_along_geodesic() {
        // Three quarters of the equator closed by the geodesic through the
        // missing quarter is the full hemisphere.
        let pts: Vec<BlochPoint> = (0..=300)
            .map(|k| {
                let phi = 1.5 * PI * k as f64 / 300.0;
                BlochPoint::normalized(phi.cos(), phi.sin(), 0.0).unwrap()
            })
            .collect();
        let path = BlochPath::from_points(pts).unwrap();
        assert!(!path.closed);
        assert!((solid_angle(&path, Closure::GeodesicClose).unwrap() - TAU).abs() < 1e-12);
    }

    #[test]
    fn antipodal_endpoints_rejected() {
        let pts: Vec<BlochPoint> = (0..=100)
            .map(|k| {
                let phi = PI * k as f64 / 100.0;
                BlochPoint::normalized(phi.cos(), phi.sin(), 0.0).unwrap()
            })
            .collect();
        let path = BlochPath::from_points(pts).unwrap();
        assert!(matches!(
            solid_angle(&path, Closure::GeodesicClose),
            Err(Error::AntipodalEndpoints)
        ));
    }

    #[test]
    fn sample_on_reference_pole_is_flagged() {
        // Mostly southern loop with an excursion to the north pole.
        let mut pts = Vec::new();
        for k in 0..=50 {
            let th = (PI - 0.3) * (1.0 - k as f64 / 50.0);
            pts.push(BlochPoint::normalized(th.sin(), 0.0, th.cos()).unwrap());
        }
        for k in 1..=50 {
            let th = (PI - 0.3) * k as f64 / 50.0;
            pts.push(BlochPoint::normalized(0.0, th.sin(), th.cos()).unwrap());
        }
        for k in 1..=400 {
            let phi = PI / 2.0 * (1.0 - k as f64 / 400.0);
            let th = PI - 0.3;
            pts.push(
                BlochPoint::normalized(th.sin() * phi.cos(), th.sin() * phi.sin(), th.cos())
                    .unwrap(),
            );
        }
        let path = BlochPath::from_points(pts).unwrap();
        assert!(matches!(
            solid_angle(&path, Closure::AlreadyClosed),
            Err(Error::PoleCrossing { index: 50 })
        ));
    }

    #[test]
    fn reversing_negates_solid_angle() {
        for &theta in &[0.4, 1.3, 2.6] {
            let path = latitude_circle(theta, 999, 1).unwrap();
            let a = solid_angle(&path, Closure::AlreadyClosed).unwrap();
            let b = solid_angle(&path.reversed(), Closure::AlreadyClosed).unwrap();
            assert!((a + b).abs() <= 1e-9);
        }
    }

    #[test]
    fn simple_circle_has_no_crossings() {
        let path = latitude_circle(1.0, 500, 1).unwrap();
        assert_eq!(count_self_crossings(&path).unwrap(), 0);
    }

    #[test]
    fn figure_eight_crosses_once() {
        let m = 400;
        let pts: Vec<BlochPoint> = (0..=m)
            .map(|k| {
                let t = TAU * (k as f64 + 0.5) / m as f64;
                let (a, b) = (0.4 * t.sin(), 0.2 * (2.0 * t).sin());
                // tangent-plane figure eight centred on a point at latitude 1.0
                let (st, ct) = 1.0f64.sin_cos();
                BlochPoint::normalized(st + a * ct, b, ct - a * st).unwrap()
            })
            .collect();
        let path = BlochPath::from_points(pts).unwrap();
        assert!(path.closed);
        assert_eq!(count_self_crossings(&path).unwrap(), 1);
        // Opposite lobes enclose opposite signed areas.
        let w = solid_angle(&path, Closure::AlreadyClosed).unwrap();
        assert!(w.abs() < 1e-9, "{w}");
    }

    #[test]
    fn coarse_polyline_is_refused() {
        let path = latitude_circle(PI / 2.0, 10, 1).unwrap();
        assert!(matches!(
            count_self_crossings(&path),
            Err(Error::TooCoarse { .. })
        ));
    }

    #[test]
    fn corrected_angle_and_phase_examples() {
        assert_eq!(corrected_solid_angle(1.7, 0.0, 5000.0, 0.04).unwrap(), 1.7);
        let w = corrected_solid_angle(TAU, 1.0 / 400.0, 5000.0, 0.04).unwrap();
        assert!((w - (TAU - 1.0)).abs() < 1e-12);
        assert!(corrected_solid_angle(TAU, 1.2, 5000.0, 0.04).is_err());
        assert!((gp_from_solid_angle(TAU) - PI).abs() < 1e-15);
        assert_eq!(gp_from_solid_angle(0.0), 0.0);
        assert!(
            gp_from_solid_angle(2.0 * TAU) < 1e-15 || gp_from_solid_angle(2.0 * TAU) > TAU - 1e-15
        );
    }

    #[test]
    fn corrected_angle_reproduces_large_t_approximation() {
        let params = SpinHalfParams::new(PI / 2.0, 5000.0).unwrap();
        let omega = TAU * (1.0 - params.theta.cos());
        for &t in &[0.04, 0.3, 2.2] {
            let w = corrected_solid_angle(omega, 1.0 / 400.0, params.omega0, t).unwrap();
            let approx = crate::phase::approx_gp_imperfect(&params, t, 1.0 / 400.0).unwrap();
            assert!(crate::phase::phase_distance(gp_from_solid_angle(w), approx.wrapped) < 1e-12);
        }
    }

    #[test]
    fn csv_has_header_and_rows() {
        let path = latitude_circle(1.0, 4, 1).unwrap();
        let mut buf = Vec::new();
        path.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "s,x,y,z");
        assert_eq!(lines.len(), 6);
    }

    fn rotation(axis: [f64; 3], angle: f64) -> [[f64; 3]; 3] {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        let [x, y, z] = [axis[0] / n, axis[1] / n, axis[2] / n];
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        [
            [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
            [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
            [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn solid_angle_is_rotation_invariant(
            ax in proptest::array::uniform3(-1.0..1.0f64),
            angle in -PI..PI,
            center_theta in 1.0..2.1f64,
            center_phi in 0.0..TAU,
            radius in 0.05..0.4f64,
            wobble in 0.0..0.5f64,
        ) {
            prop_assume!(ax.iter().map(|v| v * v).sum::<f64>() > 1e-2);
            // A wobbly loop around a center well away from both poles.
            let (st, ct) = center_theta.sin_cos();
            let (sp, cp) = center_phi.sin_cos();
            let cen = [st * cp, st * sp, ct];
            let e1 = [ct * cp, ct * sp, -st];
            let e2 = [-sp, cp, 0.0];
            let m = 600;
            let pts: Vec<BlochPoint> = (0..=m).map(|k| {
                let t = TAU * k as f64 / m as f64;
                let r = radius * (1.0 + wobble * (3.0 * t).sin());
                let (a, b) = (r * t.cos(), r * t.sin());
                BlochPoint::normalized(
                    cen[0] + a * e1[0] + b * e2[0],
                    cen[1] + a * e1[1] + b * e2[1],
                    cen[2] + a * e1[2] + b * e2[2],
                ).unwrap()
            }).collect();
            let path = BlochPath::from_points(pts).unwrap();
            let rot = rotation(ax, angle);
            let moved = path.rotated(&rot);
            prop_assume!(moved.points.iter().all(|p| p.z.abs() < 0.95));
            let a = solid_angle(&path, Closure::AlreadyClosed).unwrap();
            let b = solid_angle(&moved, Closure::AlreadyClosed).unwrap();
            prop_assert!((a - b).abs() <= 1e-8, "{} vs {}", a, b);
            let r = solid_angle(&path.reversed(), Closure::AlreadyClosed).unwrap();
            prop_assert!((a + r).abs() <= 1e-9);
        }
    }
}

//! Closed-form localization geometry for the two radar architectures.
//!
//! A distributed SISO pair at `(a, 0)` and `(b, 0)` measures two ranges
//! `r1`, `r2`. The target is the upper intersection of the two range
//! circles; its polar coordinates seen from the baseline midpoint are the
//! *equivalent* range and azimuth. Perturbing one range per node by the
//! range resolution `Δr` sweeps the fix over an azimuth interval — the
//! equivalent angular resolution — which plays the role the physical-
//! aperture beamwidth plays for a monostatic MIMO array.
//!
//! Angles are radians throughout. Azimuths of equivalent-polar fixes are
//! measured from the positive x-axis at the baseline midpoint; MIMO steering
//! angles are measured from broadside (+y).

use thiserror::Error;

/// Speed of light (m/s), exact.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Relative slack used by circle-intersection feasibility tests.
const FEASIBILITY_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    /// The two range circles do not intersect beyond tolerance.
    #[error("infeasible geometry: circles r1={r1}, r2={r2} with baseline {baseline} do not intersect")]
    InfeasibleGeometry { r1: f64, r2: f64, baseline: f64 },
    /// Both nodes sit at the same abscissa; the circle system is singular.
    #[error("degenerate baseline: both nodes at x={a}")]
    DegenerateBaseline { a: f64 },
    /// Steering angle at or beyond ±90° from broadside.
    #[error("invalid steering angle {angle_rad} rad: cos(theta) <= 0")]
    InvalidSteering { angle_rad: f64 },
    /// Target outside the array's field of view.
    #[error("target at {angle_rad} rad from broadside is outside the ±{half_fov_rad} rad FoV")]
    OutsideFov { angle_rad: f64, half_fov_rad: f64 },
}

/// A point in room coordinates (m). Valid room targets have `y > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance_to(&self, other: Point2D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Two SISO radar nodes on the wall `y = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SisoPairConfig {
    /// Node-1 abscissa (m).
    pub a: f64,
    /// Node-2 abscissa (m).
    pub b: f64,
    /// Full field-of-view cone of each node (rad), broadside +y.
    pub fov: f64,
    /// Range-measurement resolution Δr (m) used by the equivalent angular
    /// resolution. Defaults to half a range bin, c/(4B); see
    /// [`default_delta_r`].
    pub delta_r: f64,
}

impl SisoPairConfig {
    pub fn new(a: f64, b: f64, fov: f64, delta_r: f64) -> Self {
        Self { a, b, fov, delta_r }
    }

    /// Baseline midpoint `((a+b)/2, 0)`.
    pub fn midpoint(&self) -> Point2D {
        Point2D::new(0.5 * (self.a + self.b), 0.0)
    }

    /// Node separation |a − b| (m).
    pub fn baseline(&self) -> f64 {
        (self.a - self.b).abs()
    }
}

/// Monostatic MIMO array on the wall `y = 0`, broadside +y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MimoArrayConfig {
    /// Array phase center.
    pub position: Point2D,
    /// Number of virtual elements (>= 2).
    pub n_channels: usize,
    /// Carrier wavelength (m).
    pub wavelength: f64,
    /// Virtual element spacing (m); aperture L = n_channels * element_spacing.
    pub element_spacing: f64,
    /// Full field-of-view cone (rad).
    pub fov: f64,
}

impl MimoArrayConfig {
    /// Array with the conventional λ/2 element spacing, so the broadside
    /// beamwidth is 2/N rad.
    pub fn half_wavelength(position: Point2D, n_channels: usize, wavelength: f64, fov: f64) -> Self {
        Self {
            position,
            n_channels,
            wavelength,
            element_spacing: 0.5 * wavelength,
            fov,
        }
    }

    /// Physical aperture length L (m).
    pub fn aperture(&self) -> f64 {
        self.n_channels as f64 * self.element_spacing
    }
}

/// Range measurements from the two nodes (m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangePair {
    pub r1: f64,
    pub r2: f64,
}

impl RangePair {
    pub fn new(r1: f64, r2: f64) -> Self {
        Self { r1, r2 }
    }

    /// The pair with both measurements swapped (mirror about the midline).
    pub fn swapped(&self) -> Self {
        Self { r1: self.r2, r2: self.r1 }
    }
}

/// Equivalent polar fix: range and azimuth seen from the baseline midpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarFix {
    /// Equivalent range (m).
    pub r_eq: f64,
    /// Azimuth from the positive x-axis (rad); in (0, π) for room targets.
    pub theta: f64,
}

/// Forward model of the circle system: exact ranges from both nodes to a
/// room target (`target.y > 0`).
pub fn true_ranges(target: Point2D, pair: &SisoPairConfig) -> RangePair {
    RangePair {
        r1: (target.x - pair.a).hypot(target.y),
        r2: (target.x - pair.b).hypot(target.y),
    }
}

/// Intersects the two range circles and returns the y >= 0 solution.
///
/// `x` is the signed quotient `(a² − b² − r1² + r2²) / (2(a − b))`; near-
/// tangent inputs (within a relative slack of the circle radii) are clamped
/// to the tangency point on the baseline.
pub fn triangulate(ranges: RangePair, pair: &SisoPairConfig) -> Result<Point2D, GeometryError> {
    let (a, b) = (pair.a, pair.b);
    if a == b {
        return Err(GeometryError::DegenerateBaseline { a });
    }
    let (r1, r2) = (ranges.r1, ranges.r2);
    let d = (a - b).abs();
    let slack = FEASIBILITY_SLACK * (r1 + r2 + d);
    if d > r1 + r2 + slack || (r1 - r2).abs() > d + slack {
        return Err(GeometryError::InfeasibleGeometry { r1, r2, baseline: d });
    }
    let x = (a * a - b * b - r1 * r1 + r2 * r2) / (2.0 * (a - b));
    // Within the slack band y² can come out marginally negative; tangency.
    let y_sq = r1 * r1 - (x - a) * (x - a);
    let y = if y_sq > 0.0 { y_sq.sqrt() } else { 0.0 };
    Ok(Point2D::new(x, y))
}

/// Equivalent polar coordinates of the circle intersection, seen from the
/// baseline midpoint: `r_eq = √(2(r1²+r2²) − (a−b)²)/2`, `theta` the
/// full-quadrant azimuth of the triangulated point from the positive x-axis.
pub fn equivalent_polar(ranges: RangePair, pair: &SisoPairConfig) -> Result<PolarFix, GeometryError> {
    let fix = triangulate(ranges, pair)?;
    let (r1, r2) = (ranges.r1, ranges.r2);
    let d = pair.baseline();
    let radicand = 2.0 * (r1 * r1 + r2 * r2) - d * d;
    if radicand < 0.0 {
        return Err(GeometryError::InfeasibleGeometry { r1, r2, baseline: d });
    }
    let mid = pair.midpoint();
    Ok(PolarFix {
        r_eq: 0.5 * radicand.sqrt(),
        theta: fix.y.atan2(fix.x - mid.x),
    })
}

/// Equivalent angular resolution: the absolute azimuth spread between the
/// two fixes obtained by perturbing one node's range at a time by Δr.
pub fn equivalent_angular_resolution(
    ranges: RangePair,
    pair: &SisoPairConfig,
) -> Result<f64, GeometryError> {
    let dr = pair.delta_r;
    let theta_1 = equivalent_polar(RangePair::new(ranges.r1, ranges.r2 + dr), pair)?.theta;
    let theta_2 = equivalent_polar(RangePair::new(ranges.r1 + dr, ranges.r2), pair)?.theta;
    Ok((theta_1 - theta_2).abs())
}

/// Multi-site localization error margin `ε' = ½·r_eq·sin(Δθ_eq)`, with
/// `r_eq` taken at the unperturbed fix.
pub fn multisite_error_margin(ranges: RangePair, pair: &SisoPairConfig) -> Result<f64, GeometryError> {
    let r_eq = equivalent_polar(ranges, pair)?.r_eq;
    let dtheta = equivalent_angular_resolution(ranges, pair)?;
    Ok(0.5 * r_eq * dtheta.sin())
}

/// MIMO Rayleigh angular resolution `Δθ = λ / (L·cos θ_s)` at a steering
/// angle measured from broadside.
pub fn mimo_angular_resolution(
    array: &MimoArrayConfig,
    steering_angle: f64,
) -> Result<f64, GeometryError> {
    let cos_s = steering_angle.cos();
    if cos_s <= 0.0 {
        return Err(GeometryError::InvalidSteering { angle_rad: steering_angle });
    }
    Ok(array.wavelength / (array.aperture() * cos_s))
}

/// MIMO cross-range error margin `ε = ½·r·sin(Δθ)` for a target inside the
/// array's field of view.
pub fn mimo_error_margin(array: &MimoArrayConfig, target: Point2D) -> Result<f64, GeometryError> {
    let dx = target.x - array.position.x;
    let dy = target.y - array.position.y;
    // Steering angle from broadside (+y).
    let theta_s = dx.atan2(dy);
    let half_fov = 0.5 * array.fov;
    if theta_s.abs() > half_fov {
        return Err(GeometryError::OutsideFov { angle_rad: theta_s, half_fov_rad: half_fov });
    }
    let r = dx.hypot(dy);
    let dtheta = mimo_angular_resolution(array, theta_s)?;
    Ok(0.5 * r * dtheta.sin())
}

/// Range resolution of a bandwidth-B FMCW chirp: one DFT bin, `Δr = c/(2B)`.
pub fn range_resolution(bandwidth_hz: f64) -> f64 {
    SPEED_OF_LIGHT / (2.0 * bandwidth_hz)
}

/// Default Δr for the equivalent angular resolution: half a range bin,
/// `c/(4B)` — the worst-case quantization error of a bin-index range
/// estimate. One full bin, `c/(2B)`, overstates the post-detection range
/// uncertainty and inverts the multi-site vs MIMO comparison everywhere in
/// the room.
pub fn default_delta_r(bandwidth_hz: f64) -> f64 {
    0.5 * range_resolution(bandwidth_hz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    const PAPER_FOV: f64 = 120.0 * std::f64::consts::PI / 180.0;

    fn paper_pair(delta_r: f64) -> SisoPairConfig {
        SisoPairConfig::new(1.5, 2.5, PAPER_FOV, delta_r)
    }

    #[test]
    fn true_ranges_symmetric_target() {
        let pair = paper_pair(0.15);
        let r = true_ranges(Point2D::new(2.0, 2.0), &pair);
        assert_relative_eq!(r.r1, 4.25f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(r.r2, 4.25f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn true_ranges_pythagorean() {
        let pair = paper_pair(0.15);
        let r = true_ranges(Point2D::new(1.0, 1.0), &pair);
        assert_relative_eq!(r.r1, 1.25f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(r.r2, 3.25f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn true_ranges_at_node() {
        let pair = paper_pair(0.15);
        let eps = 1e-6;
        let r = true_ranges(Point2D::new(1.5, eps), &pair);
        assert_abs_diff_eq!(r.r1, eps, epsilon = 1e-12);
        assert_abs_diff_eq!(r.r2, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn triangulate_round_trips_examples() {
        let pair = paper_pair(0.15);
        for target in [Point2D::new(2.0, 2.0), Point2D::new(1.0, 1.0)] {
            let p = triangulate(true_ranges(target, &pair), &pair).unwrap();
            assert_abs_diff_eq!(p.x, target.x, epsilon = 1e-9);
            assert_abs_diff_eq!(p.y, target.y, epsilon = 1e-9);
        }
    }

    #[test]
    fn triangulate_rejects_disjoint_circles() {
        let pair = paper_pair(0.15);
        let err = triangulate(RangePair::new(0.4, 0.4), &pair).unwrap_err();
        assert!(matches!(err, GeometryError::InfeasibleGeometry { .. }));
    }

    #[test]
    fn triangulate_rejects_degenerate_baseline() {
        let pair = SisoPairConfig::new(2.0, 2.0, PAPER_FOV, 0.15);
        let err = triangulate(RangePair::new(1.0, 1.0), &pair).unwrap_err();
        assert!(matches!(err, GeometryError::DegenerateBaseline { .. }));
    }

    #[test]
    fn triangulate_clamps_tangency() {
        let pair = paper_pair(0.15);
        // Circles exactly tangent on the baseline between the nodes.
        let p = triangulate(RangePair::new(0.5, 0.5), &pair).unwrap();
        assert_abs_diff_eq!(p.x, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.y, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn equivalent_polar_midline_target() {
        let pair = paper_pair(0.15);
        let fix = equivalent_polar(true_ranges(Point2D::new(2.0, 2.0), &pair), &pair).unwrap();
        assert_abs_diff_eq!(fix.r_eq, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fix.theta, std::f64::consts::FRAC_PI_2, epsilon = 1e-12);
    }

    #[test]
    fn equivalent_polar_matches_euclidean_oracle() {
        // Oracle: distance/azimuth of (1,1) from the midpoint (2,0).
        let pair = paper_pair(0.15);
        let fix = equivalent_polar(RangePair::new(1.25f64.sqrt(), 3.25f64.sqrt()), &pair).unwrap();
        assert_abs_diff_eq!(fix.r_eq, std::f64::consts::SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(fix.theta, 3.0 * std::f64::consts::FRAC_PI_4, epsilon = 1e-12);
    }

    #[test]
    fn equivalent_polar_median_identity() {
        let pair = paper_pair(0.15);
        for target in [
            Point2D::new(0.3, 0.7),
            Point2D::new(1.9, 3.2),
            Point2D::new(3.6, 1.1),
        ] {
            let ranges = true_ranges(target, &pair);
            let fix = equivalent_polar(ranges, &pair).unwrap();
            let tri = triangulate(ranges, &pair).unwrap();
            assert_abs_diff_eq!(fix.r_eq, tri.distance_to(pair.midpoint()), epsilon = 1e-9);
        }
    }

    // Frozen from an independent 50-digit evaluation of the circle system,
    // the equivalent polar transform, and the perturbed-fix difference at
    // r1 = r2 = sqrt(4.25), a = 1.5, b = 2.5, delta_r = 0.15.
    const ORACLE_DTHETA_EQ: f64 = 0.309602643883578;
    const ORACLE_ERROR_MARGIN: f64 = 0.304680196801392;
    const ORACLE_DTHETA_EQ_HALF: f64 = 0.154573360649566;

    #[test]
    fn equivalent_angular_resolution_oracle_value() {
        let pair = paper_pair(0.15);
        let r = 4.25f64.sqrt();
        let dtheta = equivalent_angular_resolution(RangePair::new(r, r), &pair).unwrap();
        assert_abs_diff_eq!(dtheta, ORACLE_DTHETA_EQ, epsilon = 1e-12);
    }

    #[test]
    fn equivalent_angular_resolution_midline_symmetry() {
        // For r1 = r2 the perturbed fixes mirror about the midline, so the
        // spread is twice the offset of theta_1 from π/2.
        let pair = paper_pair(0.15);
        let r = 4.25f64.sqrt();
        let theta_1 = equivalent_polar(RangePair::new(r, r + 0.15), &pair).unwrap().theta;
        let dtheta = equivalent_angular_resolution(RangePair::new(r, r), &pair).unwrap();
        assert_abs_diff_eq!(dtheta, 2.0 * (theta_1 - std::f64::consts::FRAC_PI_2), epsilon = 1e-12);
    }

    #[test]
    fn equivalent_angular_resolution_first_order_in_delta_r() {
        let r = 4.25f64.sqrt();
        let half = equivalent_angular_resolution(RangePair::new(r, r), &paper_pair(0.075)).unwrap();
        assert_abs_diff_eq!(half, ORACLE_DTHETA_EQ_HALF, epsilon = 1e-12);
        let full = equivalent_angular_resolution(RangePair::new(r, r), &paper_pair(0.15)).unwrap();
        assert!((full / half - 2.0).abs() < 0.05, "ratio {}", full / half);
    }

    #[test]
    fn equivalent_angular_resolution_infeasible_perturbation() {
        let pair = paper_pair(0.15);
        // Target essentially at node 1: r2 + dr exceeds r1 + baseline.
        let err = equivalent_angular_resolution(RangePair::new(0.01, 0.995), &pair).unwrap_err();
        assert!(matches!(err, GeometryError::InfeasibleGeometry { .. }));
    }

    #[test]
    fn multisite_error_margin_oracle_value() {
        let pair = paper_pair(0.15);
        let r = 4.25f64.sqrt();
        let eps = multisite_error_margin(RangePair::new(r, r), &pair).unwrap();
        assert_abs_diff_eq!(eps, ORACLE_ERROR_MARGIN, epsilon = 1e-12);
        assert_abs_diff_eq!(eps, 0.5 * 2.0 * ORACLE_DTHETA_EQ.sin(), epsilon = 1e-12);
    }

    #[test]
    fn multisite_error_margin_monotone_in_delta_r() {
        let r = 4.25f64.sqrt();
        let small = multisite_error_margin(RangePair::new(r, r), &paper_pair(0.075)).unwrap();
        let large = multisite_error_margin(RangePair::new(r, r), &paper_pair(0.15)).unwrap();
        assert!(small < large);
        assert!(small > 0.0);
    }

    fn paper_array() -> MimoArrayConfig {
        let wavelength = SPEED_OF_LIGHT / 60e9;
        MimoArrayConfig::half_wavelength(Point2D::new(2.0, 0.0), 8, wavelength, PAPER_FOV)
    }

    #[test]
    fn mimo_resolution_broadside() {
        let dtheta = mimo_angular_resolution(&paper_array(), 0.0).unwrap();
        assert_relative_eq!(dtheta, 0.25, max_relative = 1e-12);
    }

    #[test]
    fn mimo_resolution_doubles_at_sixty_degrees() {
        let dtheta = mimo_angular_resolution(&paper_array(), std::f64::consts::FRAC_PI_3).unwrap();
        assert_relative_eq!(dtheta, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn mimo_resolution_rejects_endfire() {
        for angle in [std::f64::consts::FRAC_PI_2, -std::f64::consts::FRAC_PI_2, 2.0] {
            let err = mimo_angular_resolution(&paper_array(), angle).unwrap_err();
            assert!(matches!(err, GeometryError::InvalidSteering { .. }));
        }
    }

    #[test]
    fn mimo_error_margin_broadside_oracle() {
        let eps = mimo_error_margin(&paper_array(), Point2D::new(2.0, 2.0)).unwrap();
        assert_abs_diff_eq!(eps, 0.25f64.sin(), epsilon = 1e-12);
        // Linear in range at fixed steering angle.
        let far = mimo_error_margin(&paper_array(), Point2D::new(2.0, 4.0)).unwrap();
        assert_relative_eq!(far, 2.0 * eps, max_relative = 1e-12);
    }

    #[test]
    fn mimo_error_margin_sixty_degree_oracle() {
        // Steering angle sits exactly on the 120° FoV edge; use a wide-open
        // array so the boundary comparison cannot wobble the test.
        let array = MimoArrayConfig::half_wavelength(
            Point2D::new(2.0, 0.0),
            8,
            SPEED_OF_LIGHT / 60e9,
            std::f64::consts::PI,
        );
        let (s, c) = std::f64::consts::FRAC_PI_3.sin_cos();
        let target = Point2D::new(2.0 + 2.0 * s, 2.0 * c);
        let eps = mimo_error_margin(&array, target).unwrap();
        assert_abs_diff_eq!(eps, 0.5f64.sin(), epsilon = 1e-12);
    }

    #[test]
    fn mimo_error_margin_outside_fov() {
        let err = mimo_error_margin(&paper_array(), Point2D::new(0.0, 0.5)).unwrap_err();
        assert!(matches!(err, GeometryError::OutsideFov { .. }));
    }

    #[test]
    fn range_resolution_values() {
        assert_abs_diff_eq!(range_resolution(1e9), 0.149896229, epsilon = 1e-12);
        assert_abs_diff_eq!(range_resolution(2e9), 0.0749481145, epsilon = 1e-12);
        assert_abs_diff_eq!(range_resolution(0.5e9), 0.299792458, epsilon = 1e-12);
        assert_abs_diff_eq!(default_delta_r(1e9), 0.0749481145, epsilon = 1e-12);
    }

    #[test]
    fn mirror_symmetry_about_midline() {
        let pair = paper_pair(0.15);
        let ranges = true_ranges(Point2D::new(1.2, 1.7), &pair);
        let fix = equivalent_polar(ranges, &pair).unwrap();
        let mirrored = equivalent_polar(ranges.swapped(), &pair).unwrap();
        assert_abs_diff_eq!(mirrored.theta, std::f64::consts::PI - fix.theta, epsilon = 1e-12);
        assert_abs_diff_eq!(mirrored.r_eq, fix.r_eq, epsilon = 1e-12);
        let d = equivalent_angular_resolution(ranges, &pair).unwrap();
        let d_m = equivalent_angular_resolution(ranges.swapped(), &pair).unwrap();
        assert_abs_diff_eq!(d, d_m, epsilon = 1e-12);
        let e = multisite_error_margin(ranges, &pair).unwrap();
        let e_m = multisite_error_margin(ranges.swapped(), &pair).unwrap();
        assert_abs_diff_eq!(e, e_m, epsilon = 1e-12);
    }
}

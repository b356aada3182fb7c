//! Disc primitives and the angular-interval algebra behind every
//! accessibility query.
//!
//! All angles are radians normalized to `[0, 2π)`. Intervals are stored as
//! `(start, extent)` so wrap-around is representable; an extent of exactly
//! `2π` denotes the full circle.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use thiserror::Error;

/// Endpoint snapping tolerance. Gaps narrower than this are treated as
/// closed so floating-point noise cannot fabricate approach directions.
pub const ANGLE_EPS: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("disc radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("target and blocker centers coincide")]
    CoincidentCenters,
}

/// A point (or pose) in the plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Direction from `self` toward `other`, normalized to `[0, 2π)`.
    pub fn angle_to(&self, other: Point) -> f64 {
        normalize_angle((other.y - self.y).atan2(other.x - self.x))
    }
}

/// A closed disc in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: Point,
    pub radius: f64,
}

impl Disc {
    pub fn new(center: Point, radius: f64) -> Result<Self, GeometryError> {
        if radius <= 0.0 || !radius.is_finite() {
            return Err(GeometryError::NonPositiveRadius(radius));
        }
        Ok(Self { center, radius })
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius
    }

    /// True when the disc interiors intersect. Tangent contact is allowed.
    pub fn overlaps(&self, other: &Disc) -> bool {
        self.center.distance(other.center) < self.radius + other.radius - 1e-12
    }
}

/// Maps any angle into `[0, 2π)`.
pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// A circular arc of directions: `[start, start + extent)` modulo `2π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularInterval {
    start: f64,
    extent: f64,
}

impl AngularInterval {
    /// `start` is normalized into `[0, 2π)`; `extent` must be positive and is
    /// clamped to at most `2π`.
    pub fn new(start: f64, extent: f64) -> Self {
        debug_assert!(extent > 0.0, "interval extent must be positive");
        Self {
            start: normalize_angle(start),
            extent: extent.min(TAU),
        }
    }

    pub fn full() -> Self {
        Self {
            start: 0.0,
            extent: TAU,
        }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    /// Unwrapped end angle; may exceed `2π` for wrap-around intervals.
    pub fn end(&self) -> f64 {
        self.start + self.extent
    }

    pub fn is_full(&self) -> bool {
        self.extent >= TAU - ANGLE_EPS
    }

    pub fn contains(&self, angle: f64) -> bool {
        normalize_angle(angle - self.start) < self.extent
    }

    pub fn midpoint(&self) -> f64 {
        normalize_angle(self.start + self.extent / 2.0)
    }
}

/// Blocked approach directions toward `target` induced by `blocker`.
///
/// The end effector sweeps a straight strip of half-width
/// `target.radius + corridor_radius` toward the target center from far away.
/// A direction is blocked when the blocker disc intrudes into that strip on
/// the approach side: the perpendicular distance from the blocker center to
/// the approach ray is below `blocker.radius + half-width` while the blocker
/// center projects onto the approach side. For discs this yields a single
/// interval centered on the direction from the target toward the blocker
/// with half-angle `asin(min(1, (blocker.radius + half_width) / d))`.
///
/// Returns `None` only when the blocked arc is below the snapping
/// tolerance; coincident centers are rejected as malformed input.
pub fn blocked_interval(
    target: &Disc,
    blocker: &Disc,
    corridor_radius: f64,
) -> Result<Option<AngularInterval>, GeometryError> {
    debug_assert!(corridor_radius >= 0.0, "corridor radius must be >= 0");
    let d = target.center.distance(blocker.center);
    if d < 1e-12 {
        return Err(GeometryError::CoincidentCenters);
    }
    let reach = blocker.radius + target.radius + corridor_radius;
    let half = (reach / d).min(1.0).asin();
    if half <= ANGLE_EPS {
        return Ok(None);
    }
    let center = target.center.angle_to(blocker.center);
    Ok(Some(AngularInterval::new(center - half, 2.0 * half)))
}

/// Merged disjoint segments `[s, e)` of the union, split at the 0/2π seam,
/// sorted by start. Segments closer than `ANGLE_EPS` are fused.
fn merged_segments(intervals: &[AngularInterval]) -> Vec<(f64, f64)> {
    if intervals.iter().any(|iv| iv.is_full()) {
        return vec![(0.0, TAU)];
    }
    let mut segs: Vec<(f64, f64)> = Vec::with_capacity(intervals.len() + 1);
    for iv in intervals {
        let end = iv.end();
        if end > TAU {
            segs.push((iv.start(), TAU));
            segs.push((0.0, end - TAU));
        } else {
            segs.push((iv.start(), end));
        }
    }
    segs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(segs.len());
    for (s, e) in segs {
        match merged.last_mut() {
            Some(last) if s <= last.1 + ANGLE_EPS => last.1 = last.1.max(e),
            _ => merged.push((s, e)),
        }
    }
    merged
}

/// True iff the union of the intervals is the whole circle.
pub fn union_covers_circle(intervals: &[AngularInterval]) -> bool {
    let merged = merged_segments(intervals);
    merged.len() == 1 && merged[0].0 <= ANGLE_EPS && merged[0].1 >= TAU - ANGLE_EPS
}

/// Complement of the union in `[0, 2π)` as maximal disjoint intervals sorted
/// by start. A gap across the 0/2π seam is reported as a single wrap-around
/// interval starting at the last covered end.
pub fn free_gaps(intervals: &[AngularInterval]) -> Vec<AngularInterval> {
    let merged = merged_segments(intervals);
    if merged.is_empty() {
        return vec![AngularInterval::full()];
    }
    let mut gaps = Vec::new();
    for w in merged.windows(2) {
        let (gap_start, gap_end) = (w[0].1, w[1].0);
        if gap_end - gap_start > ANGLE_EPS {
            gaps.push(AngularInterval::new(gap_start, gap_end - gap_start));
        }
    }
    // Seam gap: from the last covered end around to the first covered start.
    let lead = merged[0].0;
    let trail = TAU - merged.last().unwrap().1;
    let seam = lead + trail;
    if seam > ANGLE_EPS {
        if trail > ANGLE_EPS {
            gaps.push(AngularInterval::new(merged.last().unwrap().1, seam));
        } else {
            gaps.insert(0, AngularInterval::new(0.0, lead));
        }
    }
    gaps
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn disc(x: f64, y: f64, r: f64) -> Disc {
        Disc::new(Point::new(x, y), r).unwrap()
    }

    /// Per-ray strip intersection test, written independently of the
    /// interval construction: blocked iff the blocker center is on the
    /// approach side and its perpendicular distance to the ray is inside
    /// the inflated strip.
    fn ray_blocked(target: &Disc, blocker: &Disc, corridor: f64, theta: f64) -> bool {
        let (ux, uy) = (theta.cos(), theta.sin());
        let vx = blocker.center.x - target.center.x;
        let vy = blocker.center.y - target.center.y;
        let along = vx * ux + vy * uy;
        let perp = (vx * uy - vy * ux).abs();
        along > 0.0 && perp < blocker.radius + target.radius + corridor
    }

    #[test]
    fn rejects_coincident_centers() {
        let a = disc(0.0, 0.0, 0.15);
        let b = disc(0.0, 0.0, 0.2);
        assert_eq!(
            blocked_interval(&a, &b, 0.05),
            Err(GeometryError::CoincidentCenters)
        );
    }

    #[test]
    fn rejects_nonpositive_radius() {
        assert!(Disc::new(Point::new(0.0, 0.0), 0.0).is_err());
        assert!(Disc::new(Point::new(0.0, 0.0), -1.0).is_err());
    }

    #[test]
    fn tangent_contact_blocks_half_plane() {
        // reach = 0.15 + 0.15 + 0.05 = 0.35 = d: asin(1) = pi/2.
        let target = disc(0.0, 0.0, 0.15);
        let blocker = disc(0.35, 0.0, 0.15);
        let iv = blocked_interval(&target, &blocker, 0.05).unwrap().unwrap();
        assert_relative_eq!(iv.extent(), PI, epsilon = 1e-12);
        assert_relative_eq!(iv.midpoint(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn double_distance_blocks_sixth_turn() {
        // asin(0.35 / 0.70) = pi/6 half-angle.
        let target = disc(0.0, 0.0, 0.15);
        let blocker = disc(0.70, 0.0, 0.15);
        let iv = blocked_interval(&target, &blocker, 0.05).unwrap().unwrap();
        assert_relative_eq!(iv.extent(), PI / 3.0, epsilon = 1e-12);
        assert_relative_eq!(iv.midpoint(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn far_blocker_blocks_thin_sliver() {
        let target = disc(0.0, 0.0, 0.15);
        let blocker = disc(10.0, 0.0, 0.15);
        let iv = blocked_interval(&target, &blocker, 0.05).unwrap().unwrap();
        assert_relative_eq!(iv.extent(), 2.0 * (0.35f64 / 10.0).asin(), epsilon = 1e-12);
    }

    #[test]
    fn blocked_fraction_matches_ray_casting() {
        // 1e6 sampled directions against the per-ray strip test; the blocked
        // fraction must match extent / 2pi within 1e-3.
        let target = disc(0.0, 0.0, 0.15);
        let blocker = disc(0.70, 0.0, 0.15);
        let iv = blocked_interval(&target, &blocker, 0.05).unwrap().unwrap();
        let samples = 1_000_000u32;
        let mut blocked = 0u32;
        for i in 0..samples {
            let theta = TAU * (i as f64 + 0.5) / samples as f64;
            if ray_blocked(&target, &blocker, 0.05, theta) {
                blocked += 1;
            }
        }
        let frac = blocked as f64 / samples as f64;
        assert!((frac - iv.extent() / TAU).abs() < 1e-3);
    }

    #[test]
    fn union_trivials() {
        assert!(!union_covers_circle(&[]));
        assert!(union_covers_circle(&[AngularInterval::full()]));
    }

    #[test]
    fn union_with_wrap_covers() {
        // (0, pi) plus an interval starting just before pi and wrapping past
        // 2pi: verified by fine discretization at 1e-4 rad.
        let ivs = [
            AngularInterval::new(0.0, PI),
            AngularInterval::new(PI - 0.1, PI + 0.2),
        ];
        assert!(union_covers_circle(&ivs));
        let steps = (TAU / 1e-4) as u32;
        for i in 0..steps {
            let theta = TAU * i as f64 / steps as f64;
            assert!(
                ivs.iter().any(|iv| iv.contains(theta)),
                "direction {theta} not covered"
            );
        }
    }

    #[test]
    fn gaps_trivials() {
        let gaps = free_gaps(&[]);
        assert_eq!(gaps.len(), 1);
        assert!(gaps[0].is_full());

        assert!(free_gaps(&[AngularInterval::full()]).is_empty());

        let gaps = free_gaps(&[AngularInterval::new(0.0, PI)]);
        assert_eq!(gaps.len(), 1);
        assert_relative_eq!(gaps[0].start(), PI, epsilon = 1e-12);
        assert_relative_eq!(gaps[0].extent(), PI, epsilon = 1e-12);
    }

    #[test]
    fn seam_gap_is_single_interval() {
        // Covered [1, 5]; free gap wraps from 5 through 0 back to 1.
        let gaps = free_gaps(&[AngularInterval::new(1.0, 4.0)]);
        assert_eq!(gaps.len(), 1);
        assert_relative_eq!(gaps[0].start(), 5.0, epsilon = 1e-12);
        assert_relative_eq!(gaps[0].extent(), TAU - 4.0, epsilon = 1e-12);
    }

    fn arb_interval() -> impl Strategy<Value = AngularInterval> {
        (0.0..TAU, 1e-6..TAU).prop_map(|(s, e)| AngularInterval::new(s, e))
    }

    proptest! {
        #[test]
        fn covered_xor_gaps(ivs in prop::collection::vec(arb_interval(), 0..12)) {
            let covered = union_covers_circle(&ivs);
            let gaps = free_gaps(&ivs);
            prop_assert!(covered ^ !gaps.is_empty());
        }

        #[test]
        fn measures_sum_to_full_turn(ivs in prop::collection::vec(arb_interval(), 0..12)) {
            let union: f64 = merged_segments(&ivs).iter().map(|(s, e)| e - s).sum();
            let gaps: f64 = free_gaps(&ivs).iter().map(|g| g.extent()).sum();
            prop_assert!((union + gaps - TAU).abs() < 1e-9);
        }

        #[test]
        fn blocked_interval_rotation_symmetry(
            bx in -2.0f64..2.0,
            by in -2.0f64..2.0,
            alpha in 0.0..TAU,
        ) {
            let d = bx.hypot(by);
            prop_assume!(d > 0.31);
            let target = disc(0.0, 0.0, 0.15);
            let blocker = disc(bx, by, 0.15);
            let rotated = disc(
                bx * alpha.cos() - by * alpha.sin(),
                bx * alpha.sin() + by * alpha.cos(),
                0.15,
            );
            let base = blocked_interval(&target, &blocker, 0.05).unwrap().unwrap();
            let rot = blocked_interval(&target, &rotated, 0.05).unwrap().unwrap();
            prop_assert!((base.extent() - rot.extent()).abs() < 1e-9);
            let start_diff = normalize_angle(rot.start() - base.start() - alpha);
            let wrapped = start_diff.min(TAU - start_diff);
            prop_assert!(wrapped < 1e-8);
        }

        #[test]
        fn interval_agrees_with_rays(
            bx in -3.0f64..3.0,
            by in -3.0f64..3.0,
            rt in 0.12f64..0.18,
            rb in 0.12f64..0.18,
        ) {
            let d = bx.hypot(by);
            prop_assume!(d >= rt + rb);
            let target = disc(0.0, 0.0, rt);
            let blocker = disc(bx, by, rb);
            let iv = blocked_interval(&target, &blocker, 0.05).unwrap();
            let mut mismatches = 0u32;
            let samples = 2000u32;
            for i in 0..samples {
                let theta = TAU * (i as f64 + 0.5) / samples as f64;
                let analytic = iv.map_or(false, |iv| iv.contains(theta));
                if analytic != ray_blocked(&target, &blocker, 0.05, theta) {
                    mismatches += 1;
                }
            }
            // Disagreement only at interval endpoints.
            prop_assert!(mismatches <= 2);
        }
    }
}

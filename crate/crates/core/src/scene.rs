//! Scene-level identifiers and fixed descriptions shared by the instance
//! model, the search state and the executor.

use crate::geometry::{Disc, Point};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Identifier of a sortable object. Stable across the whole pipeline.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct ObjectId(pub u32);

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An object of the scene: a disc tagged with its group and its priority
/// rank within that group (rank 1 is sorted first).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneObject {
    pub id: ObjectId,
    pub group: usize,
    pub rank: usize,
    pub disc: Disc,
}

/// Start pose and speed of one robot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobotParams {
    pub id: u32,
    pub position: Point,
    pub speed: f64,
}

/// Axis-aligned rectangle, used for the clutter workspace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    pub fn new(min: Point, max: Point) -> Self {
        Self { min, max }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn center(&self) -> Point {
        Point::new(
            (self.min.x + self.max.x) / 2.0,
            (self.min.y + self.max.y) / 2.0,
        )
    }

    /// True when the whole disc lies inside the rectangle.
    pub fn contains_disc(&self, disc: &Disc) -> bool {
        disc.center.x - disc.radius >= self.min.x - 1e-9
            && disc.center.x + disc.radius <= self.max.x + 1e-9
            && disc.center.y - disc.radius >= self.min.y - 1e-9
            && disc.center.y + disc.radius <= self.max.y + 1e-9
    }
}

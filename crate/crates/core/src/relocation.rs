//! Relocation planning: the smallest ordered set of occluding discs to park
//! in buffers so that an inaccessible target gains a free approach.
//!
//! The count of discs blocking a direction is piecewise constant in the
//! direction, with breakpoints only at blocked-interval endpoints, so
//! evaluating the midpoints of the arcs between consecutive endpoints (plus
//! the blocker center directions) finds an exact minimizer.

use crate::accessibility::{accessible_in_set, blocked_by_set, Catalog, Configuration};
use crate::geometry::Point;
use crate::scene::ObjectId;
use std::collections::BTreeSet;
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RelocationError {
    #[error("unknown object id {0}")]
    UnknownObject(ObjectId),
    #[error("object {0} is already accessible; nothing to relocate")]
    TargetAccessible(ObjectId),
    #[error("relocation recursion exceeded the object count while clearing {0}")]
    DepthExceeded(ObjectId),
    #[error("no blocking set for {0} avoids objects that must stay put")]
    NoMovableSet(ObjectId),
}

#[derive(Debug, Error, PartialEq)]
#[error("all {0} buffer slots are occupied")]
pub struct BufferExhausted(pub usize);

/// Ordered buffer moves that leave `target` reachable along `direction`.
///
/// The list never repeats an object, never contains the target, and every
/// entry is accessible at the moment it is scheduled.
#[derive(Debug, Clone, PartialEq)]
pub struct RelocationPlan {
    pub target: ObjectId,
    pub to_relocate: Vec<ObjectId>,
    pub direction: f64,
}

/// Smallest ordered relocation set making `target` accessible.
///
/// Candidate approach directions are enumerated at the blocked-interval
/// breakpoints; the direction hit by the fewest blockers wins, with ties
/// broken by smaller total disc area and then by lexicographically smallest
/// id set. The winning set is ordered by repeatedly extracting a member
/// that is accessible in the residual clutter; a member that is itself
/// occluded is cleared by a recursive plan spliced in front of it.
pub fn reloc_objs(
    config: &Configuration,
    target: ObjectId,
    corridor_radius: f64,
) -> Result<RelocationPlan, RelocationError> {
    let catalog = config.catalog();
    if catalog.get(target).is_none() {
        return Err(RelocationError::UnknownObject(target));
    }
    let mut present: BTreeSet<ObjectId> = config.unsorted().iter().copied().collect();
    if !present.contains(&target) || accessible_in_set(catalog, &present, target, corridor_radius)
    {
        return Err(RelocationError::TargetAccessible(target));
    }
    let mut order = Vec::new();
    let mut forbidden = BTreeSet::new();
    let max_depth = catalog.len();
    let direction = clear_target(
        catalog,
        &mut present,
        target,
        &mut forbidden,
        0,
        max_depth,
        corridor_radius,
        &mut order,
    )?;
    debug_assert!(accessible_in_set(catalog, &present, target, corridor_radius));
    Ok(RelocationPlan {
        target,
        to_relocate: order,
        direction,
    })
}

#[allow(clippy::too_many_arguments)]
fn clear_target(
    catalog: &Catalog,
    present: &mut BTreeSet<ObjectId>,
    target: ObjectId,
    forbidden: &mut BTreeSet<ObjectId>,
    depth: usize,
    max_depth: usize,
    corridor_radius: f64,
    order: &mut Vec<ObjectId>,
) -> Result<f64, RelocationError> {
    if depth >= max_depth {
        return Err(RelocationError::DepthExceeded(target));
    }
    let (set, direction) =
        minimal_blocking_set(catalog, present, target, forbidden, corridor_radius)
            .ok_or(RelocationError::NoMovableSet(target))?;
    let mut remaining: BTreeSet<ObjectId> = set.into_iter().collect();
    while !remaining.is_empty() {
        // Deeper calls may already have parked some members.
        remaining.retain(|id| present.contains(id));
        if remaining.is_empty() {
            break;
        }
        let movable = remaining
            .iter()
            .copied()
            .find(|&id| accessible_in_set(catalog, present, id, corridor_radius));
        match movable {
            Some(id) => {
                order.push(id);
                present.remove(&id);
                remaining.remove(&id);
            }
            None => {
                let occluded = *remaining.iter().next().unwrap();
                forbidden.insert(target);
                clear_target(
                    catalog,
                    present,
                    occluded,
                    forbidden,
                    depth + 1,
                    max_depth,
                    corridor_radius,
                    order,
                )?;
                forbidden.remove(&target);
            }
        }
    }
    Ok(direction)
}

/// Exact minimum blocking set over all approach directions, skipping sets
/// that touch `forbidden` ids. Returns the set together with the chosen
/// direction, or `None` when every direction requires a forbidden object.
fn minimal_blocking_set(
    catalog: &Catalog,
    present: &BTreeSet<ObjectId>,
    target: ObjectId,
    forbidden: &BTreeSet<ObjectId>,
    corridor_radius: f64,
) -> Option<(Vec<ObjectId>, f64)> {
    let entries = blocked_by_set(catalog, present, target, corridor_radius);
    if entries.is_empty() {
        return None;
    }
    let mut boundaries: Vec<f64> = Vec::with_capacity(entries.len() * 2);
    for (_, iv) in &entries {
        boundaries.push(iv.start());
        boundaries.push(crate::geometry::normalize_angle(iv.end()));
    }
    boundaries.sort_by(f64::total_cmp);
    let mut candidates: Vec<f64> = Vec::with_capacity(boundaries.len() + entries.len());
    for i in 0..boundaries.len() {
        let a = boundaries[i];
        let b = if i + 1 < boundaries.len() {
            boundaries[i + 1]
        } else {
            boundaries[0] + TAU
        };
        candidates.push(crate::geometry::normalize_angle((a + b) / 2.0));
    }
    candidates.extend(entries.iter().map(|(_, iv)| iv.midpoint()));

    let mut best: Option<(Vec<ObjectId>, f64, f64)> = None; // ids, area, direction
    for theta in candidates {
        let ids: Vec<ObjectId> = entries
            .iter()
            .filter(|(_, iv)| iv.contains(theta))
            .map(|(id, _)| *id)
            .collect();
        if ids.is_empty() || ids.iter().any(|id| forbidden.contains(id)) {
            continue;
        }
        let area: f64 = ids
            .iter()
            .map(|id| catalog.get(*id).expect("blocker in catalog").disc.area())
            .sum();
        let better = match &best {
            None => true,
            Some((bids, barea, _)) => match ids.len().cmp(&bids.len()) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => {
                    if area < barea - 1e-12 {
                        true
                    } else if area > barea + 1e-12 {
                        false
                    } else {
                        ids < *bids
                    }
                }
            },
        };
        if better {
            best = Some((ids, area, theta));
        }
    }
    best.map(|(ids, _, theta)| (ids, theta))
}

/// Lowest-indexed free buffer slot.
pub fn choose_buffer_slot(
    config: &Configuration,
    buffers: &[Point],
) -> Result<usize, BufferExhausted> {
    (0..buffers.len())
        .find(|slot| config.is_slot_free(*slot))
        .ok_or(BufferExhausted(buffers.len()))
}

//! World state during search and execution, plus the accessibility test:
//! which objects admit at least one collision-free straight approach.
//!
//! Only unsorted discs block approaches. Buffered objects sit outside the
//! clutter and are accessible by construction; sorted objects live on depot
//! stacks and are never queried again.

use crate::geometry::{blocked_interval, free_gaps, union_covers_circle, AngularInterval};
use crate::scene::{ObjectId, SceneObject};
use std::collections::BTreeSet;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CatalogError {
    #[error("duplicate object id {0}")]
    DuplicateId(ObjectId),
    #[error("object {id} references group {group} but only {groups} groups exist")]
    GroupOutOfRange {
        id: ObjectId,
        group: usize,
        groups: usize,
    },
    #[error("group {0} is empty; every group must hold at least one object")]
    EmptyGroup(usize),
    #[error("group {group} ranks are not consecutive from 1 (found {found:?})")]
    BadRanks { group: usize, found: Vec<usize> },
    #[error("catalog holds no objects")]
    Empty,
}

#[derive(Debug, Error, PartialEq)]
pub enum StateError {
    #[error("unknown object id {0}")]
    UnknownObject(ObjectId),
    #[error("object {0} is not in the clutter")]
    NotUnsorted(ObjectId),
    #[error("object {0} is neither in the clutter nor buffered")]
    NotMovable(ObjectId),
    #[error("object {id} has rank {rank} but group {group} expects rank {expected} next")]
    RankOrder {
        id: ObjectId,
        group: usize,
        rank: usize,
        expected: usize,
    },
    #[error("buffer slot {0} is already occupied")]
    SlotOccupied(usize),
}

/// Immutable description of all objects: id, group, rank and disc geometry.
/// Shared by every `Configuration` derived from one instance.
#[derive(Debug)]
pub struct Catalog {
    objects: Vec<SceneObject>,
    by_group: Vec<Vec<ObjectId>>,
}

impl Catalog {
    /// Builds a catalog and checks the grouping invariants: ids unique,
    /// every group below the group count nonempty, ranks consecutive from 1.
    pub fn new(mut objects: Vec<SceneObject>) -> Result<Self, CatalogError> {
        if objects.is_empty() {
            return Err(CatalogError::Empty);
        }
        objects.sort_by_key(|o| o.id);
        for w in objects.windows(2) {
            if w[0].id == w[1].id {
                return Err(CatalogError::DuplicateId(w[0].id));
            }
        }
        let groups = objects.iter().map(|o| o.group).max().unwrap() + 1;
        let mut by_group: Vec<Vec<(usize, ObjectId)>> = vec![Vec::new(); groups];
        for o in &objects {
            by_group[o.group].push((o.rank, o.id));
        }
        let mut ranked = Vec::with_capacity(groups);
        for (g, mut members) in by_group.into_iter().enumerate() {
            if members.is_empty() {
                return Err(CatalogError::EmptyGroup(g));
            }
            members.sort();
            let ranks: Vec<usize> = members.iter().map(|(r, _)| *r).collect();
            if ranks.iter().enumerate().any(|(i, r)| *r != i + 1) {
                return Err(CatalogError::BadRanks {
                    group: g,
                    found: ranks,
                });
            }
            ranked.push(members.into_iter().map(|(_, id)| id).collect());
        }
        Ok(Self {
            objects,
            by_group: ranked,
        })
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn group_count(&self) -> usize {
        self.by_group.len()
    }

    pub fn group_size(&self, group: usize) -> usize {
        self.by_group[group].len()
    }

    pub fn objects(&self) -> &[SceneObject] {
        &self.objects
    }

    pub fn get(&self, id: ObjectId) -> Option<&SceneObject> {
        self.objects
            .binary_search_by_key(&id, |o| o.id)
            .ok()
            .map(|i| &self.objects[i])
    }

    /// Object holding `rank` (1-based) within `group`.
    pub fn object_at_rank(&self, group: usize, rank: usize) -> Option<ObjectId> {
        self.by_group.get(group)?.get(rank - 1).copied()
    }
}

/// Mutable world state: which objects are still in the clutter, which are
/// parked in buffer slots and which sit on each group's depot stack.
///
/// Every object id is in exactly one of the three places, and each stack
/// holds consecutive ranks from 1 at all times.
#[derive(Debug, Clone)]
pub struct Configuration {
    catalog: Arc<Catalog>,
    unsorted: Vec<ObjectId>,
    buffered: Vec<(ObjectId, usize)>,
    stacks: Vec<Vec<ObjectId>>,
}

impl Configuration {
    /// Initial state: everything unsorted, all stacks empty.
    pub fn new(catalog: Arc<Catalog>) -> Self {
        let unsorted = catalog.objects().iter().map(|o| o.id).collect();
        let stacks = vec![Vec::new(); catalog.group_count()];
        Self {
            catalog,
            unsorted,
            buffered: Vec::new(),
            stacks,
        }
    }

    pub fn catalog(&self) -> &Arc<Catalog> {
        &self.catalog
    }

    pub fn total_objects(&self) -> usize {
        self.catalog.len()
    }

    pub fn unsorted(&self) -> &[ObjectId] {
        &self.unsorted
    }

    pub fn buffered(&self) -> &[(ObjectId, usize)] {
        &self.buffered
    }

    pub fn stacks(&self) -> &[Vec<ObjectId>] {
        &self.stacks
    }

    pub fn sorted_count(&self) -> usize {
        self.stacks.iter().map(Vec::len).sum()
    }

    pub fn is_goal(&self) -> bool {
        self.sorted_count() == self.catalog.len()
    }

    pub fn is_unsorted(&self, id: ObjectId) -> bool {
        self.unsorted.binary_search(&id).is_ok()
    }

    pub fn is_buffered(&self, id: ObjectId) -> bool {
        self.buffered.binary_search_by_key(&id, |(o, _)| *o).is_ok()
    }

    pub fn is_slot_free(&self, slot: usize) -> bool {
        !self.buffered.iter().any(|(_, s)| *s == slot)
    }

    pub fn group_of(&self, id: ObjectId) -> Option<usize> {
        self.catalog.get(id).map(|o| o.group)
    }

    pub fn rank_of(&self, id: ObjectId) -> Option<usize> {
        self.catalog.get(id).map(|o| o.rank)
    }

    /// Moves an unsorted object into a free buffer slot.
    pub fn place_in_buffer(&mut self, id: ObjectId, slot: usize) -> Result<(), StateError> {
        let pos = self
            .unsorted
            .binary_search(&id)
            .map_err(|_| StateError::NotUnsorted(id))?;
        if !self.is_slot_free(slot) {
            return Err(StateError::SlotOccupied(slot));
        }
        self.unsorted.remove(pos);
        let at = self
            .buffered
            .binary_search_by_key(&id, |(o, _)| *o)
            .unwrap_err();
        self.buffered.insert(at, (id, slot));
        Ok(())
    }

    /// Pushes an object onto its group stack, enforcing the rank order.
    /// The object may come from the clutter or from a buffer slot.
    pub fn sort_to_depot(&mut self, id: ObjectId) -> Result<usize, StateError> {
        let obj = *self
            .catalog
            .get(id)
            .ok_or(StateError::UnknownObject(id))?;
        let expected = self.stacks[obj.group].len() + 1;
        if obj.rank != expected {
            return Err(StateError::RankOrder {
                id,
                group: obj.group,
                rank: obj.rank,
                expected,
            });
        }
        if let Ok(pos) = self.unsorted.binary_search(&id) {
            self.unsorted.remove(pos);
        } else if let Ok(pos) = self.buffered.binary_search_by_key(&id, |(o, _)| *o) {
            self.buffered.remove(pos);
        } else {
            return Err(StateError::NotMovable(id));
        }
        self.stacks[obj.group].push(id);
        Ok(obj.group)
    }

    /// Test helper: rebuilds a mid-sort state from explicit parts.
    pub fn from_parts(
        catalog: Arc<Catalog>,
        unsorted: Vec<ObjectId>,
        buffered: Vec<(ObjectId, usize)>,
        stacks: Vec<Vec<ObjectId>>,
    ) -> Self {
        let mut unsorted = unsorted;
        unsorted.sort();
        let mut buffered = buffered;
        buffered.sort_by_key(|(o, _)| *o);
        Self {
            catalog,
            unsorted,
            buffered,
            stacks,
        }
    }
}

/// Collects the blocked intervals cast onto `target` by every other
/// unsorted disc in `present`, in ascending blocker id order.
pub(crate) fn blocked_by_set(
    catalog: &Catalog,
    present: &BTreeSet<ObjectId>,
    target: ObjectId,
    corridor_radius: f64,
) -> Vec<(ObjectId, AngularInterval)> {
    let target_disc = catalog.get(target).expect("target in catalog").disc;
    let mut out = Vec::new();
    for &other in present {
        if other == target {
            continue;
        }
        let blocker = catalog.get(other).expect("blocker in catalog").disc;
        if let Ok(Some(iv)) = blocked_interval(&target_disc, &blocker, corridor_radius) {
            out.push((other, iv));
        }
    }
    out
}

pub(crate) fn accessible_in_set(
    catalog: &Catalog,
    present: &BTreeSet<ObjectId>,
    target: ObjectId,
    corridor_radius: f64,
) -> bool {
    let intervals: Vec<AngularInterval> = blocked_by_set(catalog, present, target, corridor_radius)
        .into_iter()
        .map(|(_, iv)| iv)
        .collect();
    !union_covers_circle(&intervals)
}

/// Every unsorted object with at least one free approach direction, plus all
/// buffered objects (buffered objects never block and are always reachable).
pub fn get_accessible_objects(config: &Configuration, corridor_radius: f64) -> BTreeSet<ObjectId> {
    let present: BTreeSet<ObjectId> = config.unsorted().iter().copied().collect();
    let mut out: BTreeSet<ObjectId> = config.buffered().iter().map(|(id, _)| *id).collect();
    for &id in &present {
        if accessible_in_set(config.catalog(), &present, id, corridor_radius) {
            out.insert(id);
        }
    }
    out
}

/// Free approach directions toward an unsorted object, as the complement of
/// the blocked-interval union over all other unsorted discs. Empty exactly
/// when the object is inaccessible.
pub fn free_directions(
    target: ObjectId,
    config: &Configuration,
    corridor_radius: f64,
) -> Result<Vec<AngularInterval>, StateError> {
    if config.catalog().get(target).is_none() {
        return Err(StateError::UnknownObject(target));
    }
    if !config.is_unsorted(target) {
        return Err(StateError::NotUnsorted(target));
    }
    let present: BTreeSet<ObjectId> = config.unsorted().iter().copied().collect();
    let intervals: Vec<AngularInterval> =
        blocked_by_set(config.catalog(), &present, target, corridor_radius)
            .into_iter()
            .map(|(_, iv)| iv)
            .collect();
    Ok(free_gaps(&intervals))
}

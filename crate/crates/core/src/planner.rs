//! Sequence search: finds a minimum-length ordered sorting sequence under
//! four interchangeable frontier strategies.
//!
//! Each tree edge sorts exactly one object to its depot; when none of the
//! next-by-rank objects is reachable the expansion first parks a minimal
//! set of occluders in buffers, and those buffer moves become a prefix
//! shared by all children of that node. Paths therefore reach the goal
//! after exactly N depot steps plus however many buffer moves the clutter
//! forced, and the sequence length is the manipulation count.

use crate::accessibility::{get_accessible_objects, Catalog, Configuration, StateError};
use crate::instance::{Instance, InstanceError};
use crate::relocation::{choose_buffer_slot, reloc_objs, BufferExhausted, RelocationError};
use crate::scene::ObjectId;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, BinaryHeap, VecDeque};
use std::sync::Arc;
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlanError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Relocation(#[from] RelocationError),
    #[error(transparent)]
    Buffer(#[from] BufferExhausted),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Where a step delivers its object: a group's depot stack or a buffer slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Destination {
    Depot(usize),
    Buffer(usize),
}

/// One manipulation in the sorting sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub object: ObjectId,
    pub destination: Destination,
}

impl Step {
    pub fn is_buffer(&self) -> bool {
        matches!(self.destination, Destination::Buffer(_))
    }
}

/// Frontier discipline used by the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Bfs,
    Dfs,
    BestFirst,
    AStar,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Bfs,
        Strategy::Dfs,
        Strategy::BestFirst,
        Strategy::AStar,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Bfs => "bfs",
            Strategy::Dfs => "dfs",
            Strategy::BestFirst => "best",
            Strategy::AStar => "astar",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bfs" => Ok(Strategy::Bfs),
            "dfs" => Ok(Strategy::Dfs),
            "best" | "bestfirst" | "best-first" => Ok(Strategy::BestFirst),
            "astar" | "a*" => Ok(Strategy::AStar),
            other => Err(format!(
                "unknown strategy '{other}' (expected bfs, dfs, best or astar)"
            )),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Success,
    Infeasible,
    Failure,
    Timeout,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Outcome::Success => "Success",
            Outcome::Infeasible => "Infeasible",
            Outcome::Failure => "Failure",
            Outcome::Timeout => "Timeout",
        };
        f.write_str(s)
    }
}

/// Search output: the sorting sequence plus bookkeeping.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanResult {
    pub outcome: Outcome,
    pub sequence: Vec<Step>,
    pub nodes_expanded: usize,
    /// Wall-clock seconds spent searching.
    pub elapsed: f64,
}

struct PathLink {
    step: Step,
    parent: Option<Arc<PathLink>>,
}

/// One node of the search tree: a world state plus the path that built it.
#[derive(Clone)]
pub struct SearchNode {
    config: Configuration,
    path: Option<Arc<PathLink>>,
    /// Objects manipulated from the root (path length).
    manipulated: u32,
    /// Objects not yet sorted to a depot.
    remaining: u32,
    /// Same-group adjacency count over the most recent window of steps.
    penalty: u32,
}

impl SearchNode {
    pub fn root(instance: &Instance) -> Self {
        let config = instance.initial_config();
        let remaining = config.total_objects() as u32;
        Self {
            config,
            path: None,
            manipulated: 0,
            remaining,
            penalty: 0,
        }
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn manipulated(&self) -> u32 {
        self.manipulated
    }

    pub fn remaining(&self) -> u32 {
        self.remaining
    }

    pub fn penalty(&self) -> u32 {
        self.penalty
    }

    pub fn is_goal(&self) -> bool {
        self.remaining == 0
    }

    /// Materializes the path from the root.
    pub fn sequence(&self) -> Vec<Step> {
        let mut steps = Vec::with_capacity(self.manipulated as usize);
        let mut cur = self.path.as_ref();
        while let Some(link) = cur {
            steps.push(link.step);
            cur = link.parent.as_ref();
        }
        steps.reverse();
        steps
    }

    fn pushed(&self, step: Step) -> (Option<Arc<PathLink>>, u32) {
        let link = Arc::new(PathLink {
            step,
            parent: self.path.clone(),
        });
        (Some(link), self.manipulated + 1)
    }
}

/// The object each incomplete group expects next (rank = stack height + 1).
pub fn get_next_objs(config: &Configuration) -> BTreeSet<ObjectId> {
    let catalog = config.catalog();
    (0..catalog.group_count())
        .filter_map(|g| catalog.object_at_rank(g, config.stacks()[g].len() + 1))
        .collect()
}

/// Same-group adjacency count over the last `min(window, len)` steps.
/// Buffer moves count with the group of the object moved.
pub fn penalty(path: &[Step], window: usize, catalog: &Catalog) -> u32 {
    let tail = &path[path.len().saturating_sub(window)..];
    let mut count = 0;
    for w in tail.windows(2) {
        let a = catalog.get(w[0].object).map(|o| o.group);
        let b = catalog.get(w[1].object).map(|o| o.group);
        if a == b && a.is_some() {
            count += 1;
        }
    }
    count
}

fn penalty_from_chain(chain: &Option<Arc<PathLink>>, window: usize, catalog: &Catalog) -> u32 {
    if window < 2 {
        return 0;
    }
    // Newest first; adjacency is preserved under reversal.
    let mut groups: Vec<usize> = Vec::with_capacity(window);
    let mut cur = chain.as_ref();
    while let Some(link) = cur {
        if groups.len() == window {
            break;
        }
        if let Some(o) = catalog.get(link.step.object) {
            groups.push(o.group);
        }
        cur = link.parent.as_ref();
    }
    groups.windows(2).filter(|w| w[0] == w[1]).count() as u32
}

/// Result of expanding one node.
pub enum Expansion {
    Children(Vec<SearchNode>),
    /// Nothing in the clutter can be manipulated at all.
    Infeasible,
}

/// Generates the children of a non-goal node: one child per object that is
/// both accessible and next by rank. When no such object exists the cheapest
/// relocation plan over the next-by-rank candidates is applied first, and
/// its buffer moves become a path prefix shared by every child.
pub fn expand(
    node: &SearchNode,
    instance: &Instance,
    window: usize,
) -> Result<Expansion, PlanError> {
    let corridor = instance.corridor_radius();
    let catalog = instance.catalog();
    let accessible = get_accessible_objects(&node.config, corridor);
    if accessible.is_empty() {
        return Ok(Expansion::Infeasible);
    }
    let next_by_rank = get_next_objs(&node.config);

    let mut base_config = node.config.clone();
    let mut base_path = node.path.clone();
    let mut base_cost = node.manipulated;

    let mut sortable: Vec<ObjectId> = next_by_rank
        .iter()
        .copied()
        .filter(|id| accessible.contains(id))
        .collect();

    if sortable.is_empty() {
        // Nonmonotone: park the cheapest blocking set in buffers.
        let mut best: Option<(crate::relocation::RelocationPlan, f64)> = None;
        for &target in &next_by_rank {
            let plan = reloc_objs(&node.config, target, corridor)?;
            let area: f64 = plan
                .to_relocate
                .iter()
                .map(|id| catalog.get(*id).expect("relocated object").disc.area())
                .sum();
            let replace = match &best {
                None => true,
                Some((b, barea)) => match plan.to_relocate.len().cmp(&b.to_relocate.len()) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Greater => false,
                    std::cmp::Ordering::Equal => {
                        if area < barea - 1e-12 {
                            true
                        } else if area > barea + 1e-12 {
                            false
                        } else {
                            plan.target < b.target
                        }
                    }
                },
            };
            if replace {
                best = Some((plan, area));
            }
        }
        let (plan, _) = best.expect("next-by-rank set is nonempty on non-goal nodes");
        for id in &plan.to_relocate {
            let slot = choose_buffer_slot(&base_config, instance.buffers())?;
            base_config.place_in_buffer(*id, slot)?;
            let link = Arc::new(PathLink {
                step: Step {
                    object: *id,
                    destination: Destination::Buffer(slot),
                },
                parent: base_path,
            });
            base_path = Some(link);
            base_cost += 1;
        }
        let accessible = get_accessible_objects(&base_config, corridor);
        sortable = next_by_rank
            .iter()
            .copied()
            .filter(|id| accessible.contains(id))
            .collect();
        debug_assert!(
            !sortable.is_empty(),
            "relocation must leave its target sortable"
        );
    }

    // Children in group order for deterministic frontiers.
    sortable.sort_by_key(|id| catalog.get(*id).map(|o| o.group));
    let children = sortable
        .into_iter()
        .map(|id| {
            let mut config = base_config.clone();
            let group = config.sort_to_depot(id)?;
            let link = Arc::new(PathLink {
                step: Step {
                    object: id,
                    destination: Destination::Depot(group),
                },
                parent: base_path.clone(),
            });
            let path = Some(link);
            let penalty = penalty_from_chain(&path, window, catalog);
            Ok(SearchNode {
                config,
                path,
                manipulated: base_cost + 1,
                remaining: node.remaining - 1,
                penalty,
            })
        })
        .collect::<Result<Vec<_>, PlanError>>()?;
    Ok(Expansion::Children(children))
}

struct Prioritized {
    value: u32,
    penalty: u32,
    seq: u64,
    node: SearchNode,
}

impl PartialEq for Prioritized {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}

impl Eq for Prioritized {}

impl Ord for Prioritized {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Reversed for a min-heap: smaller value, then smaller penalty,
        // then first-in wins.
        (other.value, other.penalty, other.seq).cmp(&(self.value, self.penalty, self.seq))
    }
}

impl PartialOrd for Prioritized {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

enum Frontier {
    Queue(VecDeque<SearchNode>),
    Stack(Vec<SearchNode>),
    Priority(BinaryHeap<Prioritized>),
}

impl Frontier {
    fn new(strategy: Strategy) -> Self {
        match strategy {
            Strategy::Bfs => Frontier::Queue(VecDeque::new()),
            Strategy::Dfs => Frontier::Stack(Vec::new()),
            Strategy::BestFirst | Strategy::AStar => Frontier::Priority(BinaryHeap::new()),
        }
    }

    fn push(&mut self, node: SearchNode, strategy: Strategy, seq: u64) {
        match self {
            Frontier::Queue(q) => q.push_back(node),
            Frontier::Stack(s) => s.push(node),
            Frontier::Priority(heap) => {
                let value = match strategy {
                    Strategy::BestFirst => node.remaining,
                    Strategy::AStar => node.remaining + node.manipulated,
                    _ => unreachable!("priority frontier only for informed strategies"),
                };
                heap.push(Prioritized {
                    value,
                    penalty: node.penalty,
                    seq,
                    node,
                });
            }
        }
    }

    fn pop(&mut self) -> Option<SearchNode> {
        match self {
            Frontier::Queue(q) => q.pop_front(),
            Frontier::Stack(s) => s.pop(),
            Frontier::Priority(heap) => heap.pop().map(|p| p.node),
        }
    }

    fn is_empty(&self) -> bool {
        match self {
            Frontier::Queue(q) => q.is_empty(),
            Frontier::Stack(s) => s.is_empty(),
            Frontier::Priority(heap) => heap.is_empty(),
        }
    }
}

/// Runs the chosen frontier strategy until a goal node is reached and
/// returns its path as the sorting sequence. `window` is the robot count
/// used by the same-group penalty tie-break of the informed strategies.
pub fn sort_objects(
    instance: &Instance,
    strategy: Strategy,
    time_limit: Duration,
    window: usize,
) -> Result<PlanResult, PlanError> {
    instance.validate()?;
    let started = Instant::now();
    let mut frontier = Frontier::new(strategy);
    let mut seq_counter = 0u64;
    let mut nodes_expanded = 0usize;
    frontier.push(SearchNode::root(instance), strategy, seq_counter);

    while !frontier.is_empty() {
        if started.elapsed() > time_limit {
            return Ok(PlanResult {
                outcome: Outcome::Timeout,
                sequence: Vec::new(),
                nodes_expanded,
                elapsed: started.elapsed().as_secs_f64(),
            });
        }
        let node = frontier.pop().expect("frontier nonempty");
        if node.is_goal() {
            return Ok(PlanResult {
                outcome: Outcome::Success,
                sequence: node.sequence(),
                nodes_expanded,
                elapsed: started.elapsed().as_secs_f64(),
            });
        }
        nodes_expanded += 1;
        match expand(&node, instance, window)? {
            Expansion::Infeasible => {
                return Ok(PlanResult {
                    outcome: Outcome::Infeasible,
                    sequence: Vec::new(),
                    nodes_expanded,
                    elapsed: started.elapsed().as_secs_f64(),
                });
            }
            Expansion::Children(mut children) => {
                if strategy == Strategy::Dfs {
                    // Reversed so the first-generated child pops first.
                    children.reverse();
                }
                for child in children {
                    seq_counter += 1;
                    frontier.push(child, strategy, seq_counter);
                }
            }
        }
    }
    Ok(PlanResult {
        outcome: Outcome::Failure,
        sequence: Vec::new(),
        nodes_expanded,
        elapsed: started.elapsed().as_secs_f64(),
    })
}

/// Replays a sequence against the instance: true iff every stepped object is
/// accessible at its turn, every depot step obeys the rank rule and the
/// final state has everything sorted.
pub fn replay_validate(instance: &Instance, sequence: &[Step]) -> bool {
    let mut config = instance.initial_config();
    let corridor = instance.corridor_radius();
    for step in sequence {
        if !get_accessible_objects(&config, corridor).contains(&step.object) {
            return false;
        }
        match step.destination {
            Destination::Buffer(slot) => {
                if slot >= instance.buffers().len()
                    || config.place_in_buffer(step.object, slot).is_err()
                {
                    return false;
                }
            }
            Destination::Depot(group) => {
                if config.group_of(step.object) != Some(group)
                    || config.sort_to_depot(step.object).is_err()
                {
                    return false;
                }
            }
        }
    }
    config.is_goal()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Disc, Point};
    use crate::instance::Instance;
    use crate::scene::{Rect, RobotParams, SceneObject};
    use std::f64::consts::TAU;

    const LIMIT: Duration = Duration::from_secs(30);

    /// Hand-built instance: depots/buffers/robots on rings far outside the
    /// given discs.
    fn instance_from(objects: Vec<SceneObject>, groups: usize) -> Instance {
        let span = objects
            .iter()
            .map(|o| o.disc.center.x.abs().max(o.disc.center.y.abs()) + o.disc.radius)
            .fold(1.0f64, f64::max);
        let lo = -span - 0.2;
        let hi = span + 0.2;
        let ring = span + 2.0;
        let depots = (0..groups)
            .map(|g| {
                let a = TAU * g as f64 / groups as f64;
                Point::new(ring * a.cos(), ring * a.sin())
            })
            .collect();
        let n = objects.len();
        let buffers = (0..n)
            .map(|i| Point::new(lo + i as f64 * 0.5, -ring - 1.0))
            .collect();
        let robots = vec![RobotParams {
            id: 0,
            position: Point::new(0.0, ring + 1.0),
            speed: 1.0,
        }];
        Instance::new(
            Rect::new(Point::new(lo, lo), Point::new(hi, hi)),
            objects,
            depots,
            buffers,
            robots,
            0.05,
            0,
        )
        .unwrap()
    }

    fn obj(id: u32, group: usize, rank: usize, x: f64, y: f64) -> SceneObject {
        SceneObject {
            id: ObjectId(id),
            group,
            rank,
            disc: Disc::new(Point::new(x, y), 0.15).unwrap(),
        }
    }

    /// Seven objects in three groups, all mutually distant so everything is
    /// accessible from the start.
    fn spread_instance() -> Instance {
        let mut objects = Vec::new();
        let layout: [(usize, usize); 7] = [
            (0, 1),
            (0, 2),
            (1, 1),
            (1, 2),
            (1, 3),
            (2, 1),
            (2, 2),
        ];
        for (i, (group, rank)) in layout.into_iter().enumerate() {
            let a = TAU * i as f64 / 7.0;
            objects.push(obj(i as u32, group, rank, 3.0 * a.cos(), 3.0 * a.sin()));
        }
        instance_from(objects, 3)
    }

    /// Rank-1 object of a single group enclosed by its three groupmates at
    /// close range: the only legal opening move is a buffer relocation.
    fn enclosed_instance() -> Instance {
        let mut objects = vec![obj(0, 0, 1, 0.0, 0.0)];
        for i in 0..3 {
            let a = TAU * i as f64 / 3.0;
            objects.push(obj(i as u32 + 1, 0, i + 2, 0.38 * a.cos(), 0.38 * a.sin()));
        }
        instance_from(objects, 1)
    }

    #[test]
    fn next_objects_per_group() {
        // Group sizes (2, 3, 3); stacks hold rank 1 of group 0, nothing of
        // group 1 and ranks 1-2 of group 2, so the next objects are the
        // group-0 rank 2, the group-1 rank 1 and the group-2 rank 3.
        let layout: [(usize, usize); 8] = [
            (0, 1),
            (0, 2),
            (1, 1),
            (1, 2),
            (1, 3),
            (2, 1),
            (2, 2),
            (2, 3),
        ];
        let objects: Vec<SceneObject> = layout
            .into_iter()
            .enumerate()
            .map(|(i, (group, rank))| {
                let a = TAU * i as f64 / 8.0;
                obj(i as u32, group, rank, 3.0 * a.cos(), 3.0 * a.sin())
            })
            .collect();
        let instance = instance_from(objects, 3);
        let catalog = instance.catalog().clone();
        let config = Configuration::from_parts(
            catalog.clone(),
            vec![ObjectId(1), ObjectId(2), ObjectId(3), ObjectId(4), ObjectId(7)],
            vec![],
            vec![vec![ObjectId(0)], vec![], vec![ObjectId(5), ObjectId(6)]],
        );
        let next = get_next_objs(&config);
        assert_eq!(
            next.into_iter().collect::<Vec<_>>(),
            vec![ObjectId(1), ObjectId(2), ObjectId(7)]
        );

        let root = instance.initial_config();
        let next = get_next_objs(&root);
        assert_eq!(
            next.into_iter().collect::<Vec<_>>(),
            vec![ObjectId(0), ObjectId(2), ObjectId(5)]
        );

        let done = Configuration::from_parts(
            catalog,
            vec![],
            vec![],
            vec![
                vec![ObjectId(0), ObjectId(1)],
                vec![ObjectId(2), ObjectId(3), ObjectId(4)],
                vec![ObjectId(5), ObjectId(6), ObjectId(7)],
            ],
        );
        assert!(get_next_objs(&done).is_empty());
    }

    #[test]
    fn spread_instance_solves_at_length_n() {
        let instance = spread_instance();
        for strategy in Strategy::ALL {
            let result = sort_objects(&instance, strategy, LIMIT, 3).unwrap();
            assert_eq!(result.outcome, Outcome::Success, "{strategy}");
            assert_eq!(result.sequence.len(), 7, "{strategy}");
            assert!(replay_validate(&instance, &result.sequence), "{strategy}");
        }
    }

    #[test]
    fn monotone_expansion_decrements_remaining() {
        let instance = spread_instance();
        let root = SearchNode::root(&instance);
        match expand(&root, &instance, 1).unwrap() {
            Expansion::Children(children) => {
                assert_eq!(children.len(), 3);
                for child in children {
                    assert_eq!(child.manipulated(), root.manipulated() + 1);
                    assert_eq!(child.remaining(), root.remaining() - 1);
                }
            }
            Expansion::Infeasible => panic!("spread instance is feasible"),
        }
    }

    #[test]
    fn enclosed_instance_buffers_then_sorts() {
        let instance = enclosed_instance();
        let root = SearchNode::root(&instance);
        match expand(&root, &instance, 1).unwrap() {
            Expansion::Children(children) => {
                assert_eq!(children.len(), 1);
                let steps = children[0].sequence();
                assert_eq!(steps.len(), 2);
                assert_eq!(
                    steps[0],
                    Step {
                        object: ObjectId(1),
                        destination: Destination::Buffer(0)
                    }
                );
                assert_eq!(
                    steps[1],
                    Step {
                        object: ObjectId(0),
                        destination: Destination::Depot(0)
                    }
                );
            }
            Expansion::Infeasible => panic!("enclosed instance is feasible"),
        }

        let result = sort_objects(&instance, Strategy::AStar, LIMIT, 1).unwrap();
        assert_eq!(result.outcome, Outcome::Success);
        assert_eq!(result.sequence.len(), 5); // 4 sorts + 1 buffer move
        assert!(replay_validate(&instance, &result.sequence));
    }

    #[test]
    fn penalty_window_rule() {
        let instance = spread_instance();
        let catalog = instance.catalog();
        let dep = |id: u32, group: usize| Step {
            object: ObjectId(id),
            destination: Destination::Depot(group),
        };
        // Groups (0, 1, 0): no adjacent pair.
        let path = [dep(0, 0), dep(2, 1), dep(1, 0)];
        assert_eq!(penalty(&path, 3, catalog), 0);
        // Groups (1, 1, 1): two adjacent pairs.
        let path = [dep(2, 1), dep(3, 1), dep(4, 1)];
        assert_eq!(penalty(&path, 3, catalog), 2);
        // Groups (0, 0, 1, 1) with window 3: window is (0, 1, 1).
        let path = [dep(0, 0), dep(1, 0), dep(2, 1), dep(3, 1)];
        assert_eq!(penalty(&path, 3, catalog), 1);
    }

    #[test]
    fn searches_are_deterministic() {
        let instance = spread_instance();
        for strategy in Strategy::ALL {
            let a = sort_objects(&instance, strategy, LIMIT, 3).unwrap();
            let b = sort_objects(&instance, strategy, LIMIT, 3).unwrap();
            assert_eq!(a.sequence, b.sequence, "{strategy}");
        }
    }

    #[test]
    fn replay_rejects_bad_sequences() {
        let instance = spread_instance();
        let good = sort_objects(&instance, Strategy::Bfs, LIMIT, 3)
            .unwrap()
            .sequence;
        assert!(replay_validate(&instance, &good));

        // Swap the two group-0 objects: rank order violated.
        let mut swapped = good.clone();
        let i0 = swapped
            .iter()
            .position(|s| s.object == ObjectId(0))
            .unwrap();
        let i1 = swapped
            .iter()
            .position(|s| s.object == ObjectId(1))
            .unwrap();
        swapped.swap(i0, i1);
        assert!(!replay_validate(&instance, &swapped));

        // Dropping a step leaves objects unsorted.
        let mut short = good.clone();
        short.pop();
        assert!(!replay_validate(&instance, &short));
    }

    #[test]
    fn zero_time_limit_reports_timeout() {
        let instance = spread_instance();
        let result = sort_objects(&instance, Strategy::Bfs, Duration::ZERO, 3).unwrap();
        assert_eq!(result.outcome, Outcome::Timeout);
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("bogus".parse::<Strategy>().is_err());
    }
}

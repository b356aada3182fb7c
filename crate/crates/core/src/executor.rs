//! Kinematics-free execution: greedy in-order task allocation and a
//! deterministic discrete-event simulation of the robot fleet.
//!
//! Robots travel in straight lines at constant speed and pass through each
//! other; the only contention modeled is at the depots, which admit one
//! placing robot at a time and gate placements by rank. That is exactly the
//! congestion phenomenon the same-group penalty in the planner is meant to
//! reduce.

use crate::geometry::Point;
use crate::instance::Instance;
use crate::planner::{Destination, Outcome, PlanResult, Step};
use crate::scene::ObjectId;
use std::collections::BinaryHeap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("plan outcome is {0}, only Success plans can be executed")]
    PlanNotSuccess(crate::planner::Outcome),
    #[error("plan references object {0} which the instance does not contain")]
    UnknownObject(ObjectId),
    #[error("step {index} sends object {object} to depot {depot} but its group is {group}")]
    GroupMismatch {
        index: usize,
        object: ObjectId,
        depot: usize,
        group: usize,
    },
    #[error("step {index} uses buffer slot {slot} but the instance has {slots} slots")]
    SlotOutOfRange {
        index: usize,
        slot: usize,
        slots: usize,
    },
    #[error("step {index} moves object {object} which is not at rest in the clutter or a buffer")]
    ObjectNotMovable { index: usize, object: ObjectId },
    #[error("execution stalled with {remaining} steps left; the sequence violates the rank order")]
    Stuck { remaining: usize },
}

/// Durations of the manipulation phases, seconds. A speed override replaces
/// every robot's own speed when set.
#[derive(Debug, Clone, Copy)]
pub struct TimingParams {
    pub pick_duration: f64,
    pub place_duration: f64,
    pub speed_override: Option<f64>,
}

impl Default for TimingParams {
    fn default() -> Self {
        Self {
            pick_duration: 3.0,
            place_duration: 3.0,
            speed_override: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RobotState {
    Idle,
    ToPick,
    Picking,
    ToPlace,
    Waiting,
    Placing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Assign,
    Travel,
    Pick,
    Wait,
    Place,
}

impl EventKind {
    pub fn name(&self) -> &'static str {
        match self {
            EventKind::Assign => "assign",
            EventKind::Travel => "travel",
            EventKind::Pick => "pick",
            EventKind::Wait => "wait",
            EventKind::Place => "place",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TraceEvent {
    pub time: f64,
    pub robot: u32,
    pub kind: EventKind,
    pub object: ObjectId,
    pub location: Point,
}

/// Timestamped record of one execution.
#[derive(Debug, Clone)]
pub struct ExecutionTrace {
    pub events: Vec<TraceEvent>,
    pub makespan: f64,
    /// Total seconds robots spent waiting at each group's depot.
    pub per_depot_wait: Vec<f64>,
}

impl ExecutionTrace {
    pub fn total_wait(&self) -> f64 {
        self.per_depot_wait.iter().sum()
    }

    /// Line-delimited export: `time,robot,event,object,x,y`.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&format!(
                "{:.6},{},{},{},{:.6},{:.6}\n",
                e.time,
                e.robot,
                e.kind.name(),
                e.object,
                e.location.x,
                e.location.y
            ));
        }
        out
    }
}

/// Where an object currently rests (or travels).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ObjectSite {
    Clutter,
    Slot(usize),
    Carried(u32),
    Sorted,
}

/// Picks the idle robot closest to the head step's object, ties broken by
/// smaller robot id. `None` when no robot is idle. Steps are consumed
/// strictly in sequence order, so only the head is ever offered.
pub fn assign_next(step: &Step, object_pos: Point, idle: &[(u32, Point)]) -> Option<(u32, Step)> {
    idle.iter()
        .min_by(|(ia, pa), (ib, pb)| {
            pa.distance(object_pos)
                .total_cmp(&pb.distance(object_pos))
                .then(ia.cmp(ib))
        })
        .map(|(id, _)| (*id, *step))
}

#[derive(Debug, Clone, Copy)]
enum SimEvent {
    ArrivePick { robot: usize },
    FinishPick { robot: usize },
    ArriveDest { robot: usize },
    FinishPlace { robot: usize },
}

struct Scheduled {
    time: f64,
    seq: u64,
    event: SimEvent,
}

impl PartialEq for Scheduled {
    fn eq(&self, other: &Self) -> bool {
        self.time == other.time && self.seq == other.seq
    }
}

impl Eq for Scheduled {}

impl Ord for Scheduled {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Reversed: earliest time first, then creation order.
        other
            .time
            .total_cmp(&self.time)
            .then(other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Scheduled {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

struct RobotRt {
    id: u32,
    position: Point,
    speed: f64,
    state: RobotState,
    task: Option<Task>,
}

#[derive(Debug, Clone, Copy)]
struct Task {
    step: Step,
    pickup: Point,
    dest: Point,
    arrived_at_dest: f64,
}

/// Event-driven execution of a successful plan.
///
/// Assignment happens at every instant a robot is idle: the head of the
/// sequence goes to the nearest idle robot as soon as its object is at rest
/// at the right place. A robot arriving at a depot waits until the depot is
/// free and its object's predecessor rank has been placed; buffers have no
/// lock and no gate.
pub fn simulate(
    instance: &Instance,
    plan: &PlanResult,
    timing: &TimingParams,
) -> Result<ExecutionTrace, SimError> {
    if plan.outcome != Outcome::Success {
        return Err(SimError::PlanNotSuccess(plan.outcome));
    }
    let catalog = instance.catalog();
    let sequence = &plan.sequence;

    // Expected pickup site of every step, following each object through its
    // buffer detour. Also validates plan/instance consistency.
    let mut site: std::collections::BTreeMap<ObjectId, ObjectSite> = catalog
        .objects()
        .iter()
        .map(|o| (o.id, ObjectSite::Clutter))
        .collect();
    let mut expected: Vec<ObjectSite> = Vec::with_capacity(sequence.len());
    {
        let mut tracked = site.clone();
        for (index, step) in sequence.iter().enumerate() {
            let obj = catalog
                .get(step.object)
                .ok_or(SimError::UnknownObject(step.object))?;
            let at = tracked
                .get_mut(&step.object)
                .ok_or(SimError::UnknownObject(step.object))?;
            match (*at, step.destination) {
                (ObjectSite::Clutter, Destination::Buffer(slot)) => {
                    if slot >= instance.buffers().len() {
                        return Err(SimError::SlotOutOfRange {
                            index,
                            slot,
                            slots: instance.buffers().len(),
                        });
                    }
                    expected.push(ObjectSite::Clutter);
                    *at = ObjectSite::Slot(slot);
                }
                (from @ (ObjectSite::Clutter | ObjectSite::Slot(_)), Destination::Depot(depot)) => {
                    if obj.group != depot {
                        return Err(SimError::GroupMismatch {
                            index,
                            object: step.object,
                            depot,
                            group: obj.group,
                        });
                    }
                    expected.push(from);
                    *at = ObjectSite::Sorted;
                }
                _ => {
                    return Err(SimError::ObjectNotMovable {
                        index,
                        object: step.object,
                    })
                }
            }
        }
    }

    let site_pos = |instance: &Instance, id: ObjectId, s: ObjectSite| -> Point {
        match s {
            ObjectSite::Clutter => catalog.get(id).expect("validated").disc.center,
            ObjectSite::Slot(slot) => instance.buffers()[slot],
            _ => unreachable!("pickup sites are at rest"),
        }
    };

    let mut robots: Vec<RobotRt> = instance
        .robots()
        .iter()
        .map(|r| RobotRt {
            id: r.id,
            position: r.position,
            speed: timing.speed_override.unwrap_or(r.speed),
            state: RobotState::Idle,
            task: None,
        })
        .collect();

    let groups = instance.group_count();
    let mut depot_busy = vec![false; groups];
    let mut next_rank = vec![1usize; groups];
    let mut waiting: Vec<Vec<(f64, usize)>> = vec![Vec::new(); groups]; // (arrival, robot)
    let mut per_depot_wait = vec![0.0f64; groups];

    let mut events: Vec<TraceEvent> = Vec::new();
    let mut heap: BinaryHeap<Scheduled> = BinaryHeap::new();
    let mut seq_counter = 0u64;
    let mut cursor = 0usize;
    let mut makespan = 0.0f64;
    let mut placed_steps = 0usize;

    macro_rules! schedule {
        ($time:expr, $event:expr) => {{
            seq_counter += 1;
            heap.push(Scheduled {
                time: $time,
                seq: seq_counter,
                event: $event,
            });
        }};
    }

    macro_rules! try_assign {
        ($now:expr) => {{
            loop {
                if cursor >= sequence.len() {
                    break;
                }
                let step = sequence[cursor];
                if site[&step.object] != expected[cursor] {
                    break; // object still in transit toward this step's source
                }
                let pickup = site_pos(instance, step.object, expected[cursor]);
                let idle: Vec<(u32, Point)> = robots
                    .iter()
                    .filter(|r| r.state == RobotState::Idle)
                    .map(|r| (r.id, r.position))
                    .collect();
                let Some((rid, step)) = assign_next(&step, pickup, &idle) else {
                    break;
                };
                let ridx = robots.iter().position(|r| r.id == rid).expect("robot id");
                let dest = match step.destination {
                    Destination::Depot(g) => instance.depots()[g],
                    Destination::Buffer(s) => instance.buffers()[s],
                };
                events.push(TraceEvent {
                    time: $now,
                    robot: rid,
                    kind: EventKind::Assign,
                    object: step.object,
                    location: robots[ridx].position,
                });
                events.push(TraceEvent {
                    time: $now,
                    robot: rid,
                    kind: EventKind::Travel,
                    object: step.object,
                    location: pickup,
                });
                let travel = robots[ridx].position.distance(pickup) / robots[ridx].speed;
                robots[ridx].state = RobotState::ToPick;
                robots[ridx].task = Some(Task {
                    step,
                    pickup,
                    dest,
                    arrived_at_dest: 0.0,
                });
                schedule!($now + travel, SimEvent::ArrivePick { robot: ridx });
                cursor += 1;
            }
        }};
    }

    macro_rules! start_place {
        ($now:expr, $ridx:expr) => {{
            robots[$ridx].state = RobotState::Placing;
            schedule!(
                $now + timing.place_duration,
                SimEvent::FinishPlace { robot: $ridx }
            );
        }};
    }

    try_assign!(0.0);

    while let Some(Scheduled { time: now, event, .. }) = heap.pop() {
        match event {
            SimEvent::ArrivePick { robot } => {
                let task = robots[robot].task.expect("task while traveling");
                robots[robot].position = task.pickup;
                robots[robot].state = RobotState::Picking;
                schedule!(now + timing.pick_duration, SimEvent::FinishPick { robot });
            }
            SimEvent::FinishPick { robot } => {
                let task = robots[robot].task.expect("task while picking");
                let rid = robots[robot].id;
                site.insert(task.step.object, ObjectSite::Carried(rid));
                events.push(TraceEvent {
                    time: now,
                    robot: rid,
                    kind: EventKind::Pick,
                    object: task.step.object,
                    location: task.pickup,
                });
                events.push(TraceEvent {
                    time: now,
                    robot: rid,
                    kind: EventKind::Travel,
                    object: task.step.object,
                    location: task.dest,
                });
                robots[robot].state = RobotState::ToPlace;
                let travel = task.pickup.distance(task.dest) / robots[robot].speed;
                schedule!(now + travel, SimEvent::ArriveDest { robot });
            }
            SimEvent::ArriveDest { robot } => {
                let mut task = robots[robot].task.expect("task while traveling");
                task.arrived_at_dest = now;
                robots[robot].task = Some(task);
                robots[robot].position = task.dest;
                match task.step.destination {
                    Destination::Buffer(_) => start_place!(now, robot),
                    Destination::Depot(g) => {
                        let rank = catalog
                            .get(task.step.object)
                            .expect("validated")
                            .rank;
                        if !depot_busy[g] && rank == next_rank[g] {
                            depot_busy[g] = true;
                            start_place!(now, robot);
                        } else {
                            robots[robot].state = RobotState::Waiting;
                            waiting[g].push((now, robot));
                            events.push(TraceEvent {
                                time: now,
                                robot: robots[robot].id,
                                kind: EventKind::Wait,
                                object: task.step.object,
                                location: task.dest,
                            });
                        }
                    }
                }
            }
            SimEvent::FinishPlace { robot } => {
                let task = robots[robot].task.take().expect("task while placing");
                let rid = robots[robot].id;
                events.push(TraceEvent {
                    time: now,
                    robot: rid,
                    kind: EventKind::Place,
                    object: task.step.object,
                    location: task.dest,
                });
                placed_steps += 1;
                makespan = makespan.max(now);
                match task.step.destination {
                    Destination::Buffer(slot) => {
                        site.insert(task.step.object, ObjectSite::Slot(slot));
                    }
                    Destination::Depot(g) => {
                        site.insert(task.step.object, ObjectSite::Sorted);
                        next_rank[g] += 1;
                        depot_busy[g] = false;
                        // The rank gate dominates arrival order: wake the
                        // waiter carrying exactly the next needed rank.
                        let eligible = waiting[g]
                            .iter()
                            .position(|(_, r)| {
                                let t = robots[*r].task.expect("waiting robot has a task");
                                catalog.get(t.step.object).expect("validated").rank
                                    == next_rank[g]
                            });
                        if let Some(pos) = eligible {
                            let (arrival, waiter) = waiting[g].remove(pos);
                            per_depot_wait[g] += now - arrival;
                            depot_busy[g] = true;
                            start_place!(now, waiter);
                        }
                    }
                }
                robots[robot].state = RobotState::Idle;
                try_assign!(now);
            }
        }
    }

    if placed_steps != sequence.len() {
        return Err(SimError::Stuck {
            remaining: sequence.len() - placed_steps,
        });
    }
    debug_assert!(site.values().all(|s| matches!(*s, ObjectSite::Sorted)));

    Ok(ExecutionTrace {
        events,
        makespan,
        per_depot_wait,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Disc;
    use crate::scene::{Rect, RobotParams, SceneObject};
    use approx::assert_relative_eq;

    fn obj(id: u32, group: usize, rank: usize, x: f64, y: f64) -> SceneObject {
        SceneObject {
            id: ObjectId(id),
            group,
            rank,
            disc: Disc::new(Point::new(x, y), 0.15).unwrap(),
        }
    }

    fn two_object_instance(robots: Vec<RobotParams>) -> Instance {
        // One group: rank 1 far from the depot, rank 2 close to it.
        let objects = vec![obj(0, 0, 1, 4.0, 0.0), obj(1, 0, 2, 1.0, 0.0)];
        Instance::new(
            Rect::new(Point::new(0.0, -1.0), Point::new(5.0, 1.0)),
            objects,
            vec![Point::new(0.0, 4.0)],
            vec![Point::new(6.0, 4.0), Point::new(7.0, 4.0)],
            robots,
            0.05,
            0,
        )
        .unwrap()
    }

    fn plan_of(steps: Vec<Step>) -> PlanResult {
        PlanResult {
            outcome: Outcome::Success,
            sequence: steps,
            nodes_expanded: 0,
            elapsed: 0.0,
        }
    }

    fn dep(id: u32, group: usize) -> Step {
        Step {
            object: ObjectId(id),
            destination: Destination::Depot(group),
        }
    }

    #[test]
    fn closest_robot_wins_with_id_tiebreak() {
        let step = dep(0, 0);
        let idle = vec![
            (0, Point::new(3.0, 0.0)),
            (1, Point::new(2.0, 0.0)),
        ];
        assert_eq!(assign_next(&step, Point::new(0.0, 0.0), &idle), Some((1, step)));
        let tied = vec![(5, Point::new(2.0, 0.0)), (3, Point::new(-2.0, 0.0))];
        assert_eq!(assign_next(&step, Point::new(0.0, 0.0), &tied), Some((3, step)));
        assert_eq!(assign_next(&step, Point::new(0.0, 0.0), &[]), None);
    }

    #[test]
    fn single_robot_makespan_is_closed_form() {
        let robot = RobotParams {
            id: 0,
            position: Point::new(4.0, 4.0),
            speed: 2.0,
        };
        let instance = two_object_instance(vec![robot]);
        let plan = plan_of(vec![dep(0, 0), dep(1, 0)]);
        let timing = TimingParams {
            pick_duration: 3.0,
            place_duration: 2.0,
            speed_override: None,
        };
        let trace = simulate(&instance, &plan, &timing).unwrap();

        let p0 = Point::new(4.0, 0.0); // object 0
        let p1 = Point::new(1.0, 0.0); // object 1
        let depot = Point::new(0.0, 4.0);
        let start = Point::new(4.0, 4.0);
        let expected = (start.distance(p0) + p0.distance(depot)) / 2.0
            + (depot.distance(p1) + p1.distance(depot)) / 2.0
            + 2.0 * (3.0 + 2.0);
        assert_relative_eq!(trace.makespan, expected, epsilon = 1e-9);
        assert_relative_eq!(trace.total_wait(), 0.0);
    }

    #[test]
    fn rank_gate_forces_second_rank_to_wait() {
        // Robot 1 sits next to the rank-2 object and would reach the depot
        // first; it must wait until rank 1 is placed.
        let robots = vec![
            RobotParams {
                id: 0,
                position: Point::new(4.2, 2.0),
                speed: 1.0,
            },
            RobotParams {
                id: 1,
                position: Point::new(1.0, 2.0),
                speed: 1.0,
            },
        ];
        let instance = two_object_instance(robots);
        let plan = plan_of(vec![dep(0, 0), dep(1, 0)]);
        let trace = simulate(&instance, &plan, &TimingParams::default()).unwrap();

        let waits: Vec<_> = trace
            .events
            .iter()
            .filter(|e| e.kind == EventKind::Wait)
            .collect();
        assert_eq!(waits.len(), 1);
        assert_eq!(waits[0].robot, 1);

        let places: Vec<_> = trace
            .events
            .iter()
            .filter(|e| e.kind == EventKind::Place)
            .collect();
        assert_eq!(places.len(), 2);
        assert_eq!(places[0].object, ObjectId(0));
        assert_eq!(places[1].object, ObjectId(1));
        // Depot exclusivity: completions at one depot are spaced by at
        // least one full place duration.
        assert!(places[1].time - places[0].time >= 3.0 - 1e-9);
        assert!(trace.per_depot_wait[0] > 0.0);
    }

    #[test]
    fn buffer_detour_is_picked_from_slot() {
        let robot = RobotParams {
            id: 0,
            position: Point::new(2.0, 2.0),
            speed: 1.0,
        };
        let instance = two_object_instance(vec![robot]);
        let plan = plan_of(vec![
            Step {
                object: ObjectId(1),
                destination: Destination::Buffer(0),
            },
            dep(0, 0),
            dep(1, 0),
        ]);
        let trace = simulate(&instance, &plan, &TimingParams::default()).unwrap();
        // The second pick of object 1 happens at the buffer slot.
        let picks: Vec<_> = trace
            .events
            .iter()
            .filter(|e| e.kind == EventKind::Pick && e.object == ObjectId(1))
            .collect();
        assert_eq!(picks.len(), 2);
        assert_relative_eq!(picks[1].location.x, 6.0);
        assert_relative_eq!(picks[1].location.y, 4.0);
        assert_eq!(
            trace.events.last().unwrap().object,
            ObjectId(1),
            "buffered object is sorted last"
        );
    }

    #[test]
    fn invalid_plans_are_rejected() {
        let robot = RobotParams {
            id: 0,
            position: Point::new(2.0, 2.0),
            speed: 1.0,
        };
        let instance = two_object_instance(vec![robot]);

        let not_success = PlanResult {
            outcome: Outcome::Timeout,
            sequence: vec![],
            nodes_expanded: 0,
            elapsed: 0.0,
        };
        assert_eq!(
            simulate(&instance, &not_success, &TimingParams::default()),
            Err(SimError::PlanNotSuccess(Outcome::Timeout))
        );

        let unknown = plan_of(vec![dep(9, 0)]);
        assert_eq!(
            simulate(&instance, &unknown, &TimingParams::default()),
            Err(SimError::UnknownObject(ObjectId(9)))
        );

        let wrong_group = plan_of(vec![Step {
            object: ObjectId(0),
            destination: Destination::Depot(1),
        }]);
        assert!(matches!(
            simulate(&instance, &wrong_group, &TimingParams::default()),
            Err(SimError::GroupMismatch { .. })
        ));

        // Rank order violated: the gate can never open.
        let reversed = plan_of(vec![dep(1, 0), dep(0, 0)]);
        assert!(matches!(
            simulate(&instance, &reversed, &TimingParams::default()),
            Err(SimError::Stuck { .. })
        ));
    }

    #[test]
    fn events_are_time_ordered_and_conserving() {
        let robots = vec![
            RobotParams {
                id: 0,
                position: Point::new(4.0, 2.0),
                speed: 1.0,
            },
            RobotParams {
                id: 1,
                position: Point::new(2.0, 2.0),
                speed: 1.5,
            },
        ];
        let instance = two_object_instance(robots);
        let plan = plan_of(vec![dep(0, 0), dep(1, 0)]);
        let trace = simulate(&instance, &plan, &TimingParams::default()).unwrap();
        for w in trace.events.windows(2) {
            assert!(w[0].time <= w[1].time + 1e-12);
        }
        let places = trace
            .events
            .iter()
            .filter(|e| e.kind == EventKind::Place)
            .count();
        assert_eq!(places, 2);
        assert_relative_eq!(
            trace.makespan,
            trace.events.last().unwrap().time,
            epsilon = 1e-12
        );
    }
}

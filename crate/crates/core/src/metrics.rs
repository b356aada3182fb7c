//! Benchmark metrics, the exhaustive optimality oracle and the seeded
//! benchmark harness.

use crate::accessibility::{get_accessible_objects, Catalog, Configuration};
use crate::instance::{generate_instance, GenParams, GenerationError, Instance};
use crate::planner::{
    get_next_objs, replay_validate, sort_objects, Outcome, PlanResult, Step, Strategy,
};
use crate::scene::ObjectId;
use rayon::prelude::*;
use std::collections::HashMap;
use std::time::Duration;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("exhaustive enumeration is limited to 8 objects, got {0}")]
    TooLarge(usize),
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("failed to generate instance (N={n}, K={k}, seed={seed}): {source}")]
    Generation {
        n: usize,
        k: usize,
        seed: u64,
        source: GenerationError,
    },
    #[error("planning failed on (N={n}, K={k}, seed={seed}, {strategy}): {message}")]
    Planning {
        n: usize,
        k: usize,
        seed: u64,
        strategy: Strategy,
        message: String,
    },
}

/// Count of adjacent same-group entries over the whole sequence. A proxy
/// for how often consecutive deliveries pile onto one depot.
pub fn repetitiveness(sequence: &[Step], catalog: &Catalog) -> usize {
    sequence
        .windows(2)
        .filter(|w| {
            let a = catalog.get(w[0].object).map(|o| o.group);
            let b = catalog.get(w[1].object).map(|o| o.group);
            a == b && a.is_some()
        })
        .count()
}

/// True iff the solved sequence is longer than the object count, i.e. some
/// object took a buffer detour.
pub fn is_nonmonotone(instance: &Instance, result: &PlanResult) -> bool {
    debug_assert_eq!(result.outcome, Outcome::Success);
    let longer = result.sequence.len() > instance.object_count();
    debug_assert_eq!(longer, result.sequence.iter().any(Step::is_buffer));
    longer
}

/// Exhaustive minimum manipulation count over every legal action sequence:
/// sorting an accessible next-by-rank object, or parking any accessible
/// clutter object in a buffer. Branch-and-bound with the remaining-object
/// count as the (admissible) bound, plus state memoization.
pub fn brute_force_min_sequence(instance: &Instance) -> Result<usize, OracleError> {
    let n = instance.object_count();
    if n > 8 {
        return Err(OracleError::TooLarge(n));
    }
    let corridor = instance.corridor_radius();
    let mut best = 2 * n + 1; // any solution uses at most one buffer detour per object
    let mut memo: HashMap<(u64, u64), usize> = HashMap::new();
    let config = instance.initial_config();
    search(instance, &config, 0, corridor, &mut best, &mut memo);
    Ok(best)
}

fn state_key(config: &Configuration) -> (u64, u64) {
    // Ids are at most 8 per the oracle guard, but hash positions not ids to
    // stay correct for arbitrary id values.
    let mut unsorted = 0u64;
    let mut buffered = 0u64;
    for (pos, o) in config.catalog().objects().iter().enumerate() {
        if config.is_unsorted(o.id) {
            unsorted |= 1 << pos;
        } else if config.is_buffered(o.id) {
            buffered |= 1 << pos;
        }
    }
    (unsorted, buffered)
}

fn search(
    instance: &Instance,
    config: &Configuration,
    used: usize,
    corridor: f64,
    best: &mut usize,
    memo: &mut HashMap<(u64, u64), usize>,
) {
    let remaining = config.total_objects() - config.sorted_count();
    if remaining == 0 {
        *best = (*best).min(used);
        return;
    }
    if used + remaining >= *best {
        return;
    }
    let key = state_key(config);
    if let Some(&g) = memo.get(&key) {
        if g <= used {
            return;
        }
    }
    memo.insert(key, used);

    let accessible = get_accessible_objects(config, corridor);
    let next = get_next_objs(config);
    for &id in next.iter().filter(|id| accessible.contains(id)) {
        let mut child = config.clone();
        child.sort_to_depot(id).expect("accessible next object sorts");
        search(instance, &child, used + 1, corridor, best, memo);
    }
    for &id in accessible.iter().filter(|id| config.is_unsorted(**id)) {
        let slot = (0..instance.buffers().len())
            .find(|s| config.is_slot_free(*s))
            .expect("instances carry a slot per object");
        let mut child = config.clone();
        child
            .place_in_buffer(id, slot)
            .expect("accessible clutter object buffers");
        search(instance, &child, used + 1, corridor, best, memo);
    }
}

/// One benchmark measurement: an instance/strategy pair and its outcome.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub seed: u64,
    pub strategy: Strategy,
    pub outcome: Outcome,
    pub len_os: usize,
    pub nodes: usize,
    pub planning_ms: f64,
    pub repetitiveness: usize,
    pub nonmonotone: bool,
}

impl BenchRow {
    pub fn csv_header() -> &'static str {
        "N,K,M,seed,strategy,outcome,len_os,nodes,planning_ms,repetitiveness,nonmonotone"
    }

    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{:.3},{},{}",
            self.n,
            self.k,
            self.m,
            self.seed,
            self.strategy,
            self.outcome,
            self.len_os,
            self.nodes,
            self.planning_ms,
            self.repetitiveness,
            self.nonmonotone as u8
        )
    }
}

/// Benchmark request: a grid of (N, K) cells, a seed count per cell, the
/// strategies to compare and the per-search time limit.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub grid: Vec<(usize, usize)>,
    pub seeds: usize,
    pub strategies: Vec<Strategy>,
    pub time_limit: f64,
    pub m: usize,
    pub gen: GenParams,
    pub jobs: Option<usize>,
}

/// Runs every strategy over the same seeded instance set and returns one
/// row per (instance, strategy), ordered by (N, K, seed, strategy). Rows
/// are bit-identical across runs apart from the timing column.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    let mut instances = Vec::new();
    for &(n, k) in &cfg.grid {
        for seed in 0..cfg.seeds as u64 {
            let instance = generate_instance(n, k, cfg.m, seed, &cfg.gen).map_err(|source| {
                BenchError::Generation { n, k, seed, source }
            })?;
            instances.push((n, k, seed, instance));
        }
    }
    let tasks: Vec<(usize, usize, u64, &Instance, Strategy)> = instances
        .iter()
        .flat_map(|(n, k, seed, inst)| {
            cfg.strategies.iter().map(move |s| (*n, *k, *seed, inst, *s))
        })
        .collect();

    let limit = Duration::from_secs_f64(cfg.time_limit);
    let run = |(n, k, seed, inst, strategy): &(usize, usize, u64, &Instance, Strategy)| {
        let result = sort_objects(inst, *strategy, limit, cfg.m).map_err(|e| {
            BenchError::Planning {
                n: *n,
                k: *k,
                seed: *seed,
                strategy: *strategy,
                message: e.to_string(),
            }
        })?;
        debug_assert!(
            result.outcome != Outcome::Success || replay_validate(inst, &result.sequence)
        );
        Ok(BenchRow {
            n: *n,
            k: *k,
            m: cfg.m,
            seed: *seed,
            strategy: *strategy,
            outcome: result.outcome,
            len_os: result.sequence.len(),
            nodes: result.nodes_expanded,
            planning_ms: result.elapsed * 1e3,
            repetitiveness: repetitiveness(&result.sequence, inst.catalog()),
            nonmonotone: result.outcome == Outcome::Success && is_nonmonotone(inst, &result),
        })
    };

    let mut rows: Vec<BenchRow> = match cfg.jobs {
        Some(1) => tasks.iter().map(run).collect::<Result<_, _>>()?,
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool")
            .install(|| tasks.par_iter().map(run).collect::<Result<_, _>>())?,
        None => tasks.par_iter().map(run).collect::<Result<_, _>>()?,
    };

    let strategy_index =
        |s: Strategy| Strategy::ALL.iter().position(|x| *x == s).unwrap_or(usize::MAX);
    rows.sort_by_key(|r| (r.n, r.k, r.seed, strategy_index(r.strategy)));
    Ok(rows)
}

/// Per-cell aggregate over benchmark rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellSummary {
    pub runs: usize,
    pub successes: usize,
    pub mean_len: f64,
    pub sd_len: f64,
    pub mean_nodes: f64,
    pub mean_repetitiveness: f64,
    pub nonmonotone_ratio: f64,
}

pub fn summarize(
    rows: &[BenchRow],
) -> std::collections::BTreeMap<(usize, usize, &'static str), CellSummary> {
    let mut cells: std::collections::BTreeMap<(usize, usize, &'static str), Vec<&BenchRow>> =
        std::collections::BTreeMap::new();
    for row in rows {
        cells
            .entry((row.n, row.k, row.strategy.name()))
            .or_default()
            .push(row);
    }
    cells
        .into_iter()
        .map(|(key, rows)| {
            let ok: Vec<&&BenchRow> = rows
                .iter()
                .filter(|r| r.outcome == Outcome::Success)
                .collect();
            let mean = |xs: &[f64]| {
                if xs.is_empty() {
                    0.0
                } else {
                    xs.iter().sum::<f64>() / xs.len() as f64
                }
            };
            let lens: Vec<f64> = ok.iter().map(|r| r.len_os as f64).collect();
            let mean_len = mean(&lens);
            let sd_len = if lens.len() > 1 {
                (lens.iter().map(|l| (l - mean_len).powi(2)).sum::<f64>()
                    / (lens.len() - 1) as f64)
                    .sqrt()
            } else {
                0.0
            };
            let summary = CellSummary {
                runs: rows.len(),
                successes: ok.len(),
                mean_len,
                sd_len,
                mean_nodes: mean(&ok.iter().map(|r| r.nodes as f64).collect::<Vec<_>>()),
                mean_repetitiveness: mean(
                    &ok.iter().map(|r| r.repetitiveness as f64).collect::<Vec<_>>(),
                ),
                nonmonotone_ratio: if ok.is_empty() {
                    0.0
                } else {
                    ok.iter().filter(|r| r.nonmonotone).count() as f64 / ok.len() as f64
                },
            };
            (key, summary)
        })
        .collect()
}

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{cycle_decomposition, FunctionalGraph};
use crate::error::{Error, Result};
use crate::stats::{interval_bounds, AccumulatorConfig, Ensemble, StatsAccumulator};

use super::{Mode, ResolvedRun, SpaceChoice};

/// Indices (exhaustive) or draws (sampled) handled by one chunk.
pub const CHUNK_SIZE: u64 = 1 << 16;

/// One unit of work: a half-open index range and the number of maps it
/// contributed (fewer than the range for rational candidates that are not
/// coprime).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChunkInfo {
    pub index: u64,
    pub start: u64,
    pub end: u64,
    pub maps: u64,
}

pub struct Census {
    pub accumulator: StatsAccumulator,
    pub chunks: Vec<ChunkInfo>,
}

/// Deterministic stream for one chunk: the config seed selects the key and
/// the chunk index selects the stream.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

pub(crate) fn accumulator_config(run: &ResolvedRun) -> AccumulatorConfig {
    let interval = match run.config.space {
        SpaceChoice::Mapping => None,
        _ if run.config.degree >= 2 => Some(interval_bounds(run.config.degree)),
        _ => None,
    };
    AccumulatorConfig {
        truncation: run.config.truncation,
        clip: run.config.clip,
        max_moment_weight: run.config.max_moment_weight,
        interval,
    }
}

fn run_chunk(
    run: &ResolvedRun,
    ensemble: Ensemble,
    index: u64,
    start: u64,
    end: u64,
) -> Result<(StatsAccumulator, ChunkInfo)> {
    let mut acc = StatsAccumulator::new(ensemble, accumulator_config(run))?;
    match (&run.config.mode, &run.space) {
        (Mode::Exhaustive, Some(space)) => {
            for i in start..end {
                if let Some(m) = space.member_at(i) {
                    acc.absorb(&cycle_decomposition(&FunctionalGraph::from_member(space.field(), &m)));
                }
            }
        }
        (Mode::Exhaustive, None) => {
            for i in start..end {
                acc.absorb(&cycle_decomposition(&FunctionalGraph::mapping_at(run.config.n, i)));
            }
        }
        (Mode::Sample, space) => {
            let mut rng = chunk_rng(run.config.seed, index);
            for _ in start..end {
                let g = match space {
                    Some(space) => FunctionalGraph::from_member(space.field(), &space.sample(&mut rng)),
                    None => FunctionalGraph::random_mapping(run.config.n, &mut rng)?,
                };
                acc.absorb(&cycle_decomposition(&g));
            }
        }
    }
    let maps = acc.count();
    Ok((acc, ChunkInfo { index, start, end, maps }))
}

/// Runs the census on a pool of `workers` threads. Chunks are merged in
/// ascending order, so the result does not depend on the worker count.
pub fn run_census(run: &ResolvedRun, workers: usize) -> Result<Census> {
    if workers == 0 {
        return Err(Error::InvalidConfig("workers must be at least 1".into()));
    }
    let total = run.work_items()?;
    let ensemble = run.ensemble();
    let n_chunks = total.div_ceil(CHUNK_SIZE);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start worker pool: {e}")))?;
    let parts: Vec<(StatsAccumulator, ChunkInfo)> = pool.install(|| {
        (0..n_chunks)
            .into_par_iter()
            .map(|i| {
                let start = i * CHUNK_SIZE;
                run_chunk(run, ensemble, i, start, (start + CHUNK_SIZE).min(total))
            })
            .collect::<Result<_>>()
    })?;
    let mut accumulator = StatsAccumulator::new(ensemble, accumulator_config(run))?;
    let mut chunks = Vec::with_capacity(parts.len());
    for (acc, info) in parts {
        accumulator.merge(&acc)?;
        chunks.push(info);
    }
    Ok(Census { accumulator, chunks })
}

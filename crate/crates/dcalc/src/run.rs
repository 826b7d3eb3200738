//! Candidate checking on a worker pool.
//!
//! Linkings are enumerated by one thread and checked in batches; results
//! are handed to the collector in enumeration order, so the outcome is the
//! same for every pool size.

use dcalc_core::aps::ApsError;
use dcalc_core::prover::{self, Collector, Outcome, Problem, SearchOptions};
use rayon::prelude::*;
use rayon::ThreadPool;

pub struct Runner {
    pool: Option<ThreadPool>,
    batch: usize,
}

impl Runner {
    /// `jobs <= 1` checks candidates on the calling thread.
    pub fn new(jobs: usize) -> Runner {
        let pool = (jobs > 1).then(|| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .expect("thread pool")
        });
        Runner {
            pool,
            batch: jobs.max(1) * 8,
        }
    }

    pub fn search(&self, problem: &Problem, options: SearchOptions) -> Result<Outcome, ApsError> {
        let Some(pool) = &self.pool else {
            return prover::search(problem, options);
        };
        let frame = problem.frame();
        let mut collector = Collector::new(&frame, options);
        let Ok(mut linkings) = frame.linkings() else {
            return Ok(collector.finish());
        };
        let mut index = 0;
        while collector.wants_more() {
            let batch: Vec<_> = linkings.by_ref().take(self.batch).collect();
            if batch.is_empty() {
                break;
            }
            let checked: Vec<_> = pool.install(|| {
                batch
                    .into_par_iter()
                    .map(|l| {
                        let ps = frame.apply(&l);
                        let c = problem.check(&ps);
                        (l, ps, c)
                    })
                    .collect()
            });
            for (l, ps, c) in checked {
                if !collector.wants_more() {
                    break;
                }
                collector.push(index, l, ps, c?);
                index += 1;
            }
        }
        Ok(collector.finish())
    }
}

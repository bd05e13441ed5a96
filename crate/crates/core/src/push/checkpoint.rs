use std::io::Write;
use std::time::Instant;

use crate::error::Result;
use crate::push::{PushObserver, PushState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checkpoint {
    pub pushes: u64,
    pub r_sum: f64,
    pub time_ns: u128,
}

/// Samples `r_sum` each time the edge-push counter crosses a multiple of
/// `every`.
#[derive(Debug, Clone)]
pub struct Checkpoints {
    every: u64,
    next: u64,
    start: Instant,
    samples: Vec<Checkpoint>,
}

impl Checkpoints {
    pub fn new(every: u64) -> Self {
        let every = every.max(1);
        Self {
            every,
            next: every,
            start: Instant::now(),
            samples: Vec::new(),
        }
    }

    pub fn samples(&self) -> &[Checkpoint] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Checkpoint> {
        self.samples
    }

    fn sample(&mut self, state: &PushState) {
        let pushes = state.edge_pushes();
        if pushes >= self.next {
            self.samples.push(Checkpoint {
                pushes,
                r_sum: state.r_sum(),
                time_ns: self.start.elapsed().as_nanos(),
            });
            self.next = (pushes / self.every + 1) * self.every;
        }
    }
}

impl PushObserver for Checkpoints {
    fn on_push(&mut self, state: &PushState) {
        self.sample(state);
    }

    fn on_round(&mut self, state: &PushState) {
        self.sample(state);
    }
}

/// `pushes,r_sum,time_ns`
pub fn write_checkpoint_csv<W: Write>(mut w: W, samples: &[Checkpoint]) -> Result<()> {
    writeln!(w, "pushes,r_sum,time_ns")?;
    for c in samples {
        writeln!(w, "{},{:.16e},{}", c.pushes, c.r_sum, c.time_ns)?;
    }
    w.flush()?;
    Ok(())
}

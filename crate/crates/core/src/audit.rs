//! Live length-n buffer accounting for the low-memory code paths.

use std::cell::Cell;
use std::ops::{Deref, DerefMut};
use std::rc::Rc;

#[derive(Debug, Default)]
struct Counters {
    live: Cell<usize>,
    peak: Cell<usize>,
}

/// Counts simultaneously live [`TrackedVec`]s allocated through it.
#[derive(Debug, Clone, Default)]
pub struct BufferAudit {
    counters: Rc<Counters>,
}

impl BufferAudit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn live(&self) -> usize {
        self.counters.live.get()
    }

    pub fn peak(&self) -> usize {
        self.counters.peak.get()
    }

    pub fn zeros(&self, n: usize) -> TrackedVec {
        self.register();
        TrackedVec {
            data: vec![0.0; n],
            audit: Some(self.counters.clone()),
        }
    }

    fn register(&self) {
        let live = self.counters.live.get() + 1;
        self.counters.live.set(live);
        if live > self.counters.peak.get() {
            self.counters.peak.set(live);
        }
    }
}

/// A `Vec<f64>` that reports its lifetime to an optional [`BufferAudit`].
#[derive(Debug)]
pub struct TrackedVec {
    data: Vec<f64>,
    audit: Option<Rc<Counters>>,
}

impl TrackedVec {
    pub fn zeros(n: usize, audit: Option<&BufferAudit>) -> Self {
        match audit {
            Some(a) => a.zeros(n),
            None => Self {
                data: vec![0.0; n],
                audit: None,
            },
        }
    }

    pub fn into_vec(mut self) -> Vec<f64> {
        std::mem::take(&mut self.data)
    }
}

impl Deref for TrackedVec {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.data
    }
}

impl DerefMut for TrackedVec {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }
}

impl Drop for TrackedVec {
    fn drop(&mut self) {
        if let Some(c) = &self.audit {
            c.live.set(c.live.get() - 1);
        }
    }
}

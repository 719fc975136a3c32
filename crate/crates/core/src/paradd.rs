//! Parallel limb addition with barrier-separated carry iterations.
//!
//! Limb positions are split into contiguous blocks, one per worker. In the
//! first iteration every worker adds its operand limbs and flags overflow in
//! the shared `carries` array (`carries[i + 1]` for an overflow at `i`). Each
//! later iteration applies the carries flagged in the previous one, and the
//! loop stops once an iteration flags nothing. Slot `n` is the overflow slot:
//! it is owned by the worker holding position `n - 1` and, when set, produces
//! a new top limb of value 1 in one extra iteration.
//!
//! Every carry slot is set by at most one worker (the owner of the position
//! below it), and read and cleared by the owner of its position in a strictly
//! later iteration.

use std::any::Any;
use std::ops::Range;
use std::panic::{self, AssertUnwindSafe};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Barrier, Mutex};
use std::thread;

use thiserror::Error;

use crate::limb::{write_limb_padded, BigNumber, Limb, LIMB_BASE, LIMB_DIGITS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParallelError {
    #[error("worker count must be at least 1")]
    NoWorkers,
    #[error("worker {worker} failed in iteration {iteration}: {message}")]
    WorkerPoolFailure {
        worker: usize,
        iteration: usize,
        message: String,
    },
}

/// Hardware parallelism, falling back to 1.
pub fn default_workers() -> usize {
    thread::available_parallelism().map_or(1, |n| n.get())
}

/// Contiguous, balanced split of limb positions across workers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkerAssignment {
    limb_count: usize,
    blocks: Vec<Range<usize>>,
}

impl WorkerAssignment {
    pub fn worker_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn limb_count(&self) -> usize {
        self.limb_count
    }

    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    pub fn block(&self, worker: usize) -> Range<usize> {
        self.blocks[worker].clone()
    }

    /// Worker owning limb position `pos`. The overflow slot `limb_count`
    /// belongs to the owner of the top position.
    pub fn owner_of(&self, pos: usize) -> usize {
        assert!(pos <= self.limb_count, "position {pos} out of range");
        let pos = pos.min(self.limb_count - 1);
        self.blocks.partition_point(|r| r.end <= pos)
    }
}

/// Splits `limb_count` positions into `workers` contiguous blocks whose sizes
/// differ by at most one; the first `limb_count % workers` blocks are the
/// larger ones. Workers beyond `limb_count` get empty blocks.
pub fn plan_assignment(limb_count: usize, workers: usize) -> WorkerAssignment {
    assert!(limb_count >= 1, "need at least one limb");
    assert!(workers >= 1, "need at least one worker");
    let base = limb_count / workers;
    let extra = limb_count % workers;
    let mut start = 0;
    let blocks = (0..workers)
        .map(|w| {
            let len = base + usize::from(w < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect();
    WorkerAssignment { limb_count, blocks }
}

/// Snapshot of the carry flags between iterations.
///
/// `carries[i]` is the carry pending into position `i`; the last entry is the
/// overflow slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarryState {
    pub carries: Vec<bool>,
    pub iteration: usize,
}

impl CarryState {
    pub fn new(limb_count: usize) -> CarryState {
        CarryState {
            carries: vec![false; limb_count + 1],
            iteration: 1,
        }
    }
}

/// Full scan of the carry array: true iff any slot is set.
pub fn carries_pending(state: &CarryState) -> bool {
    state.carries.iter().any(|&c| c)
}

fn any_pending(carries: &[AtomicBool]) -> bool {
    carries.iter().any(|c| c.load(Ordering::Relaxed))
}

/// How the end of the iteration loop is detected.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Termination {
    /// Workers report how many carries they set; the counts are summed at
    /// the barrier.
    #[default]
    Aggregate,
    /// Scan the whole carry array after every iteration.
    FullScan,
}

/// What one worker did in one iteration.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WorkerRecord {
    pub basic_ops: usize,
    pub carries_set: usize,
    /// Slots this worker set; filled only with [`ParallelAdder::record_slots`].
    pub set_slots: Vec<usize>,
    /// Slots this worker read and cleared; filled only with
    /// [`ParallelAdder::record_slots`].
    pub consumed_slots: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationRecord {
    /// 1-based iteration number.
    pub iteration: usize,
    /// One entry per worker, idle workers included.
    pub workers: Vec<WorkerRecord>,
}

impl IterationRecord {
    pub fn basic_ops(&self) -> usize {
        self.workers.iter().map(|w| w.basic_ops).sum()
    }

    pub fn carries_set(&self) -> usize {
        self.workers.iter().map(|w| w.carries_set).sum()
    }

    pub fn ops_per_worker(&self) -> Vec<usize> {
        self.workers.iter().map(|w| w.basic_ops).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelTrace {
    pub worker_count: usize,
    /// Limb count of the longer operand.
    pub limb_count: usize,
    /// Total iterations, counting the initial add and any final step that
    /// materializes the overflow limb.
    pub iterations: usize,
    pub per_iteration: Vec<IterationRecord>,
    /// Whether a carry out of the top position created a new limb.
    pub overflow_limb: bool,
}

impl ParallelTrace {
    pub fn basic_ops(&self) -> usize {
        self.per_iteration.iter().map(|r| r.basic_ops()).sum()
    }

    pub fn carries_set(&self) -> usize {
        self.per_iteration.iter().map(|r| r.carries_set()).sum()
    }

    /// Iterations spent propagating carries between existing positions: the
    /// total minus the initial add and minus the overflow-limb step.
    pub fn propagation_iterations(&self) -> usize {
        self.iterations - 1 - usize::from(self.overflow_limb)
    }
}

/// Configured parallel adder.
#[derive(Debug, Clone)]
pub struct ParallelAdder {
    workers: usize,
    termination: Termination,
    record_slots: bool,
    #[cfg(test)]
    panic_at: Option<(usize, usize)>,
}

impl ParallelAdder {
    pub fn new(workers: usize) -> ParallelAdder {
        ParallelAdder {
            workers,
            termination: Termination::Aggregate,
            record_slots: false,
            #[cfg(test)]
            panic_at: None,
        }
    }

    pub fn termination(mut self, termination: Termination) -> Self {
        self.termination = termination;
        self
    }

    /// Log every carry slot set and consumed into the trace.
    pub fn record_slots(mut self, on: bool) -> Self {
        self.record_slots = on;
        self
    }

    #[cfg(test)]
    fn panic_at(mut self, worker: usize, iteration: usize) -> Self {
        self.panic_at = Some((worker, iteration));
        self
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn add(
        &self,
        a: &BigNumber,
        b: &BigNumber,
    ) -> Result<(BigNumber, ParallelTrace), ParallelError> {
        let run = self.run(a, b, false)?;
        Ok((BigNumber::from_limbs(run.limbs), run.trace))
    }

    /// Adds and renders the canonical decimal sum, with each worker writing
    /// the digits of its own block.
    pub fn add_to_decimal(
        &self,
        a: &BigNumber,
        b: &BigNumber,
    ) -> Result<(String, ParallelTrace), ParallelError> {
        let run = self.run(a, b, true)?;
        let mut digits = run.digits.expect("rendering requested");
        let zeros = digits.iter().take_while(|&&d| d == b'0').count();
        digits.drain(..zeros.min(digits.len() - 1));
        Ok((String::from_utf8(digits).expect("ascii digits"), run.trace))
    }

    fn run(&self, a: &BigNumber, b: &BigNumber, render: bool) -> Result<RunOutput, ParallelError> {
        if self.workers == 0 {
            return Err(ParallelError::NoWorkers);
        }
        let n = a.limb_count().max(b.limb_count());
        let plan = plan_assignment(n, self.workers);
        let active = plan.blocks.iter().filter(|r| !r.is_empty()).count();

        let mut result = vec![Limb::ZERO; n + 1];
        let mut digits = if render {
            vec![0u8; LIMB_DIGITS * (n + 1)]
        } else {
            Vec::new()
        };

        let shared = Shared {
            a: a.limbs(),
            b: b.limbs(),
            n,
            carries: (0..=n).map(|_| AtomicBool::new(false)).collect(),
            barrier: Barrier::new(active),
            pending: AtomicUsize::new(0),
            proceed: AtomicBool::new(false),
            failed: AtomicBool::new(false),
            failure: Mutex::new(None),
            termination: self.termination,
            record_slots: self.record_slots,
            render,
        };

        let mut logs: Vec<Vec<WorkerRecord>> = Vec::with_capacity(active);
        thread::scope(|scope| {
            let mut result_rest: &mut [Limb] = &mut result;
            let mut digit_rest: &mut [u8] = &mut digits;
            let mut handles = Vec::with_capacity(active);
            for (id, block) in plan.blocks[..active].iter().enumerate() {
                // The top block also owns the overflow slot.
                let slots = if block.end == n {
                    block.start..n + 1
                } else {
                    block.clone()
                };
                let (mine, rest) = std::mem::take(&mut result_rest).split_at_mut(slots.len());
                result_rest = rest;
                let text = if render {
                    let cut = digit_rest.len() - LIMB_DIGITS * slots.len();
                    let (rest, mine) = std::mem::take(&mut digit_rest).split_at_mut(cut);
                    digit_rest = rest;
                    mine
                } else {
                    &mut []
                };
                let worker = Worker {
                    id,
                    slots,
                    result: mine,
                    text,
                    own_pending: Vec::new(),
                    boundary_pending: false,
                    log: Vec::new(),
                    #[cfg(test)]
                    panic_at: self.panic_at.and_then(|(w, t)| (w == id).then_some(t)),
                };
                let shared = &shared;
                handles.push(scope.spawn(move || worker.run(shared)));
            }
            for h in handles {
                // Worker bodies catch their own panics.
                logs.push(h.join().expect("worker body unwound past catch_unwind"));
            }
        });

        if let Some(err) = shared
            .failure
            .into_inner()
            .unwrap_or_else(|e| e.into_inner())
        {
            return Err(err);
        }

        let iterations = logs[0].len();
        let per_iteration = (0..iterations)
            .map(|t| IterationRecord {
                iteration: t + 1,
                workers: (0..self.workers)
                    .map(|w| logs.get(w).map(|log| log[t].clone()).unwrap_or_default())
                    .collect(),
            })
            .collect();
        let trace = ParallelTrace {
            worker_count: self.workers,
            limb_count: n,
            iterations,
            per_iteration,
            overflow_limb: result[n] != Limb::ZERO,
        };
        Ok(RunOutput {
            limbs: result,
            digits: render.then_some(digits),
            trace,
        })
    }
}

/// Adds with `workers` threads using the default configuration.
pub fn add_parallel(
    a: &BigNumber,
    b: &BigNumber,
    workers: usize,
) -> Result<(BigNumber, ParallelTrace), ParallelError> {
    ParallelAdder::new(workers).add(a, b)
}

struct RunOutput {
    limbs: Vec<Limb>,
    digits: Option<Vec<u8>>,
    trace: ParallelTrace,
}

struct Shared<'a> {
    a: &'a [Limb],
    b: &'a [Limb],
    n: usize,
    carries: Vec<AtomicBool>,
    barrier: Barrier,
    /// Carries set in the current iteration.
    pending: AtomicUsize,
    proceed: AtomicBool,
    failed: AtomicBool,
    failure: Mutex<Option<ParallelError>>,
    termination: Termination,
    record_slots: bool,
    render: bool,
}

struct Worker<'a> {
    id: usize,
    /// Slot range owned, in absolute positions.
    slots: Range<usize>,
    result: &'a mut [Limb],
    /// Digit bytes for `slots`, most significant slot first.
    text: &'a mut [u8],
    /// Slots inside this block that this worker set last iteration.
    own_pending: Vec<usize>,
    /// Whether the previous worker set `carries[slots.start]` last iteration.
    boundary_pending: bool,
    log: Vec<WorkerRecord>,
    #[cfg(test)]
    panic_at: Option<usize>,
}

impl Worker<'_> {
    fn run(mut self, shared: &Shared<'_>) -> Vec<WorkerRecord> {
        let mut iteration = 1;
        let mut failed = false;
        loop {
            if !failed {
                let outcome =
                    panic::catch_unwind(AssertUnwindSafe(|| self.step(shared, iteration)));
                match outcome {
                    Ok(record) => {
                        shared
                            .pending
                            .fetch_add(record.carries_set, Ordering::Relaxed);
                        self.log.push(record);
                    }
                    Err(payload) => {
                        failed = true;
                        shared.failed.store(true, Ordering::Relaxed);
                        let mut slot = shared.failure.lock().unwrap_or_else(|e| e.into_inner());
                        slot.get_or_insert(ParallelError::WorkerPoolFailure {
                            worker: self.id,
                            iteration,
                            message: panic_message(&payload),
                        });
                    }
                }
            }

            if shared.barrier.wait().is_leader() {
                let set = shared.pending.swap(0, Ordering::Relaxed);
                let more = match shared.termination {
                    Termination::Aggregate => set > 0,
                    Termination::FullScan => any_pending(&shared.carries),
                };
                let go = more && !shared.failed.load(Ordering::Relaxed);
                shared.proceed.store(go, Ordering::Relaxed);
            }
            // No carry is written between the two barriers, so the boundary
            // slot can be sampled here without racing the neighbour.
            let start = self.slots.start;
            self.boundary_pending = start > 0 && shared.carries[start].load(Ordering::Relaxed);
            shared.barrier.wait();

            if !shared.proceed.load(Ordering::Relaxed) {
                break;
            }
            iteration += 1;
        }

        if shared.render && !shared.failed.load(Ordering::Relaxed) {
            self.render();
        }
        self.log
    }

    fn step(&mut self, shared: &Shared<'_>, iteration: usize) -> WorkerRecord {
        #[cfg(test)]
        if self.panic_at == Some(iteration) {
            panic!("injected fault");
        }
        let mut record = WorkerRecord::default();
        if iteration == 1 {
            let positions = self.slots.start..self.slots.end.min(shared.n);
            for pos in positions {
                let x = shared.a.get(pos).map_or(0, |l| l.get());
                let y = shared.b.get(pos).map_or(0, |l| l.get());
                self.store(shared, pos, x + y, &mut record);
            }
        } else {
            let mut work = std::mem::take(&mut self.own_pending);
            if self.boundary_pending {
                work.push(self.slots.start);
            }
            for slot in work {
                let flagged = shared.carries[slot].load(Ordering::Relaxed);
                debug_assert!(flagged, "slot {slot} consumed without a carry");
                if !flagged {
                    continue;
                }
                shared.carries[slot].store(false, Ordering::Relaxed);
                if shared.record_slots {
                    record.consumed_slots.push(slot);
                }
                let current = self.result[slot - self.slots.start].get();
                self.store(shared, slot, current + 1, &mut record);
            }
        }
        record
    }

    /// Stores `sum` at `pos`, truncating and flagging `carries[pos + 1]` when
    /// it reaches the limb base.
    #[inline]
    fn store(&mut self, shared: &Shared<'_>, pos: usize, sum: u64, record: &mut WorkerRecord) {
        record.basic_ops += 1;
        let local = pos - self.slots.start;
        if sum >= LIMB_BASE {
            self.result[local] = Limb::from_sum(sum - LIMB_BASE);
            let next = pos + 1;
            shared.carries[next].store(true, Ordering::Relaxed);
            record.carries_set += 1;
            if shared.record_slots {
                record.set_slots.push(next);
            }
            if next < self.slots.end {
                self.own_pending.push(next);
            }
        } else {
            self.result[local] = Limb::from_sum(sum);
        }
    }

    fn render(&mut self) {
        let count = self.result.len();
        for (i, limb) in self.result.iter().enumerate() {
            let at = LIMB_DIGITS * (count - 1 - i);
            write_limb_padded(&mut self.text[at..at + LIMB_DIGITS], *limb);
        }
    }
}

fn panic_message(payload: &Box<dyn Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_owned()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "worker panicked".to_owned()
    }
}

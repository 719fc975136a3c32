//! Big-integer addition over base-10^18 limbs.
//!
//! Numbers are parsed into 18-digit limbs ([`limb`]) and added either with a
//! sequential ripple-carry loop ([`seqadd`]) or by a pool of workers that
//! resolve carries in barrier-separated iterations ([`paradd`]). A digit-wise
//! reference adder ([`oracle`]) cross-checks both, and [`bench`] times them.

pub mod bench;
pub mod limb;
pub mod oracle;
pub mod paradd;
pub mod seqadd;

pub use limb::{
    canonicalize, parse_decimal, render_decimal, token_count, BigNumber, Limb, ParseError,
    LIMB_BASE, LIMB_DIGITS, LIMB_MAX,
};
pub use oracle::{add_digitwise, add_digitwise_counted, bit_length, BitLengthError, DigitMetrics};
pub use paradd::{
    add_parallel, carries_pending, default_workers, plan_assignment, CarryState, ParallelAdder,
    ParallelError, ParallelTrace, Termination, WorkerAssignment,
};
pub use seqadd::{add_sequential, OpMetrics};

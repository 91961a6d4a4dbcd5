use thiserror::Error;

/// Everything that can go wrong inside the core crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("job {job}: negative lower bound {lo}")]
    NegativeBound { job: usize, lo: i64 },
    #[error("job {job}: lower bound {lo} exceeds upper bound {hi}")]
    InvertedBounds { job: usize, lo: i64, hi: i64 },
    #[error("instance needs at least one machine")]
    NoMachines,
    #[error("instance needs at least one job")]
    NoJobs,
    #[error("job {job}: duration {value} outside its interval [{lo}, {hi}]")]
    OutOfInterval {
        job: usize,
        value: i64,
        lo: i64,
        hi: i64,
    },
    #[error("job {job}: negative duration {value}")]
    NegativeDuration { job: usize, value: i64 },
    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("schedule has {found} machines, instance has {expected}")]
    MachineCountMismatch { expected: usize, found: usize },
    #[error("job {0} is scheduled more than once")]
    DuplicateJob(usize),
    #[error("job {0} is not scheduled")]
    MissingJob(usize),
    #[error("job index {job} out of range for {n} jobs")]
    JobOutOfRange { job: usize, n: usize },
    #[error("arithmetic overflow")]
    Overflow,
    #[error("{n} jobs exceed the enumeration cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("search budget exhausted before any schedule was evaluated")]
    BudgetExhausted,
    #[error("operation needs a single machine, instance has {0}")]
    NotSingleMachine(usize),
    #[error("job {job}: midpoint differs from job 0")]
    UnequalMidpoints { job: usize },
    #[error("job {job}: interval midpoint is not an integer")]
    HalfIntegralMidpoint { job: usize },
    #[error("{jobs} jobs cannot be split evenly over {machines} machines")]
    NotDivisible { jobs: usize, machines: usize },
    #[error("schedule is not balanced")]
    Unbalanced,
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("expected an even number of values, found {0}")]
    OddCount(usize),
    #[error("value count {0} is not divisible by 4")]
    NotQuadruple(usize),
    #[error("4-PP instance has odd quadruplet count {0}")]
    OddQuadrupletCount(usize),
    #[error("3-PARTITION needs 3m values, found {found} for m = {m}")]
    TripletCount { m: usize, found: usize },
    #[error("values sum to {sum}, expected m*B = {expected}")]
    PartitionSum { sum: i64, expected: i64 },
    #[error("value {value} violates B/4 < a < B/2 for B = {b}")]
    PartitionBound { value: i64, b: i64 },
    #[error("values must be positive")]
    NonPositive,
    #[error("value {0} is negative")]
    NegativeValue(i64),
    #[error("invalid search configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("internal invariant violated: {0}")]
    Internal(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

pub mod check;
pub mod kernel;
pub mod simulate;
pub mod specfun;
pub mod verify;

/// Outcome of a run that did not error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A verification report contains failures.
    Failed,
}

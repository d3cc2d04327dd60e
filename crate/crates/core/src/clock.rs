//! Monotonic time source and deadlines.
//!
//! The core crate never reads the wall clock directly. Callers hand in a
//! [`Clock`]; with the `std` feature [`StdClock`] wraps `std::time::Instant`.

use core::time::Duration;

pub trait Clock: Sync {
    /// Time elapsed since an arbitrary fixed epoch. Must be non-decreasing.
    fn now(&self) -> Duration;
}

/// A clock frozen at zero. Deadlines built on it only expire when their
/// budget is zero.
#[derive(Debug, Default, Clone, Copy)]
pub struct FrozenClock;

impl Clock for FrozenClock {
    fn now(&self) -> Duration {
        Duration::ZERO
    }
}

#[cfg(feature = "std")]
#[derive(Debug, Clone, Copy)]
pub struct StdClock {
    epoch: std::time::Instant,
}

#[cfg(feature = "std")]
impl StdClock {
    pub fn new() -> Self {
        StdClock { epoch: std::time::Instant::now() }
    }
}

#[cfg(feature = "std")]
impl Default for StdClock {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(feature = "std")]
impl Clock for StdClock {
    fn now(&self) -> Duration {
        self.epoch.elapsed()
    }
}

/// A point in time on a given clock, or no limit at all.
#[derive(Clone, Copy)]
pub struct Deadline<'c> {
    clock: &'c dyn Clock,
    at: Option<Duration>,
}

impl core::fmt::Debug for Deadline<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Deadline").field("at", &self.at).finish()
    }
}

impl<'c> Deadline<'c> {
    pub fn never(clock: &'c dyn Clock) -> Self {
        Deadline { clock, at: None }
    }

    pub fn after(clock: &'c dyn Clock, budget: Duration) -> Self {
        Deadline { clock, at: Some(clock.now() + budget) }
    }

    pub fn expired(&self) -> bool {
        match self.at {
            Some(at) => self.clock.now() >= at,
            None => false,
        }
    }

    pub fn remaining(&self) -> Option<Duration> {
        self.at.map(|at| at.saturating_sub(self.clock.now()))
    }

    /// The earlier of `self` and now + `budget`.
    pub fn sub(&self, budget: Duration) -> Deadline<'c> {
        let candidate = self.clock.now() + budget;
        let at = match self.at {
            Some(at) if at < candidate => at,
            _ => candidate,
        };
        Deadline { clock: self.clock, at: Some(at) }
    }

    pub fn clock(&self) -> &'c dyn Clock {
        self.clock
    }

    pub fn elapsed(&self) -> Duration {
        self.clock.now()
    }
}

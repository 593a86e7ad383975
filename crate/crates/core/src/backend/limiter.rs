//! Process-wide rate limiting: a concurrent in-flight cap plus a
//! requests-per-interval window, driven through a clock abstraction so tests
//! can assert the window invariant on virtual time.

use std::collections::VecDeque;
use std::sync::{Arc, Condvar, Mutex};
use std::time::{Duration, Instant};

/// Time source for the limiter and retry backoff.
pub trait Clock: Send + Sync {
    /// Monotonic elapsed time since some fixed origin.
    fn now(&self) -> Duration;
    fn sleep(&self, duration: Duration);
}

/// Wall-clock time.
pub struct SystemClock {
    origin: Instant,
}

impl SystemClock {
    pub fn new() -> Self {
        SystemClock { origin: Instant::now() }
    }
}

impl Default for SystemClock {
    fn default() -> Self {
        SystemClock::new()
    }
}

impl Clock for SystemClock {
    fn now(&self) -> Duration {
        self.origin.elapsed()
    }

    fn sleep(&self, duration: Duration) {
        std::thread::sleep(duration);
    }
}

/// A clock whose sleeps advance virtual time instantly. Deterministic for
/// single-threaded tests.
pub struct VirtualClock {
    now: Mutex<Duration>,
}

impl VirtualClock {
    pub fn new() -> Self {
        VirtualClock { now: Mutex::new(Duration::ZERO) }
    }
}

impl Default for VirtualClock {
    fn default() -> Self {
        VirtualClock::new()
    }
}

impl Clock for VirtualClock {
    fn now(&self) -> Duration {
        *self.now.lock().expect("clock lock poisoned")
    }

    fn sleep(&self, duration: Duration) {
        *self.now.lock().expect("clock lock poisoned") += duration;
    }
}

#[derive(Debug, Clone)]
pub struct RateLimiterConfig {
    pub max_in_flight: usize,
    pub max_per_interval: usize,
    pub interval: Duration,
}

impl Default for RateLimiterConfig {
    fn default() -> Self {
        RateLimiterConfig { max_in_flight: 4, max_per_interval: 60, interval: Duration::from_secs(60) }
    }
}

struct LimiterState {
    in_flight: usize,
    dispatches: VecDeque<Duration>,
}

/// Shared across all workers of a process.
pub struct RateLimiter {
    config: RateLimiterConfig,
    clock: Arc<dyn Clock>,
    state: Mutex<LimiterState>,
    released: Condvar,
}

impl RateLimiter {
    pub fn new(config: RateLimiterConfig, clock: Arc<dyn Clock>) -> Self {
        RateLimiter {
            config,
            clock,
            state: Mutex::new(LimiterState { in_flight: 0, dispatches: VecDeque::new() }),
            released: Condvar::new(),
        }
    }

    /// Block until a dispatch slot is available, then claim it. The returned
    /// guard releases the in-flight slot when dropped.
    pub fn acquire(self: &Arc<Self>) -> InFlightGuard {
        loop {
            let wait;
            {
                let mut state = self.state.lock().expect("limiter lock poisoned");
                let now = self.clock.now();
                while let Some(front) = state.dispatches.front() {
                    if now.saturating_sub(*front) >= self.config.interval {
                        state.dispatches.pop_front();
                    } else {
                        break;
                    }
                }
                if state.in_flight < self.config.max_in_flight
                    && state.dispatches.len() < self.config.max_per_interval
                {
                    state.in_flight += 1;
                    state.dispatches.push_back(now);
                    return InFlightGuard { limiter: Arc::clone(self) };
                }
                if state.in_flight >= self.config.max_in_flight {
                    // Wait for a release; re-check afterwards.
                    let (guard, _) = self
                        .released
                        .wait_timeout(state, Duration::from_millis(20))
                        .expect("limiter lock poisoned");
                    drop(guard);
                    continue;
                }
                // Window is full: sleep until the oldest dispatch expires.
                let oldest = *state.dispatches.front().expect("window full implies non-empty");
                wait = (oldest + self.config.interval).saturating_sub(now).max(Duration::from_millis(1));
            }
            self.clock.sleep(wait);
        }
    }

    /// Timestamps of dispatches still inside the current window.
    pub fn recent_dispatches(&self) -> Vec<Duration> {
        self.state.lock().expect("limiter lock poisoned").dispatches.iter().copied().collect()
    }

    pub fn clock(&self) -> &Arc<dyn Clock> {
        &self.clock
    }
}

pub struct InFlightGuard {
    limiter: Arc<RateLimiter>,
}

impl Drop for InFlightGuard {
    fn drop(&mut self) {
        let mut state = self.limiter.state.lock().expect("limiter lock poisoned");
        state.in_flight = state.in_flight.saturating_sub(1);
        drop(state);
        self.limiter.released.notify_one();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_never_exceeds_rate_on_virtual_clock() {
        let clock = Arc::new(VirtualClock::new());
        let limiter = Arc::new(RateLimiter::new(
            RateLimiterConfig { max_in_flight: 8, max_per_interval: 3, interval: Duration::from_secs(1) },
            clock.clone(),
        ));
        let mut dispatch_times = Vec::new();
        for _ in 0..12 {
            let guard = limiter.acquire();
            dispatch_times.push(clock.now());
            drop(guard);
        }
        // No window of one interval contains more than 3 dispatches.
        for (i, t0) in dispatch_times.iter().enumerate() {
            let in_window = dispatch_times[i..]
                .iter()
                .take_while(|t| t.saturating_sub(*t0) < Duration::from_secs(1))
                .count();
            assert!(in_window <= 3, "window starting at {t0:?} saw {in_window} dispatches");
        }
    }

    #[test]
    fn in_flight_cap_blocks_until_release() {
        let clock = Arc::new(SystemClock::new());
        let limiter = Arc::new(RateLimiter::new(
            RateLimiterConfig { max_in_flight: 1, max_per_interval: 100, interval: Duration::from_secs(10) },
            clock,
        ));
        let guard = limiter.acquire();
        let limiter2 = Arc::clone(&limiter);
        let handle = std::thread::spawn(move || {
            let _second = limiter2.acquire();
        });
        std::thread::sleep(Duration::from_millis(30));
        assert!(!handle.is_finished(), "second acquire should block under the cap");
        drop(guard);
        handle.join().unwrap();
    }
}

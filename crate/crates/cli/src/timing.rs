//! Wall-clock timing as the median of repeated runs.

use std::time::Instant;

pub const WARMUPS: usize = 5;
pub const REPETITIONS: usize = 25;

/// Median nanoseconds of `reps` calls to `f` after `warmups` untimed calls.
pub fn median_ns(warmups: usize, reps: usize, mut f: impl FnMut()) -> f64 {
    assert!(reps > 0, "need at least one timed repetition");
    for _ in 0..warmups {
        f();
    }
    let mut times: Vec<f64> = (0..reps)
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed().as_nanos() as f64
        })
        .collect();
    times.sort_by(f64::total_cmp);
    let mid = reps / 2;
    if reps % 2 == 1 {
        times[mid]
    } else {
        0.5 * (times[mid - 1] + times[mid])
    }
}

/// `MemAvailable` from `/proc/meminfo` in bytes, if readable.
pub fn available_memory() -> Option<u64> {
    let text = std::fs::read_to_string("/proc/meminfo").ok()?;
    let line = text.lines().find(|l| l.starts_with("MemAvailable:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_calls() {
        let mut calls = 0;
        let t = median_ns(2, 3, || calls += 1);
        assert_eq!(calls, 5);
        assert!(t >= 0.0);
    }
}

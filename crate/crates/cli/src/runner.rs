//! Bounded worker pool for independent trials.
//!
//! Tasks are indexed; results land in task order no matter which worker
//! finishes first, so the output is deterministic given deterministic tasks.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Runs `task(0..count)` on up to `threads` workers and returns the results
/// in task order.
pub fn run_indexed<T, F>(count: usize, threads: usize, task: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = threads.max(1).min(count.max(1));
    let next = AtomicUsize::new(0);
    let results: Vec<Mutex<Option<T>>> = (0..count).map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let value = task(i);
                *results[i].lock().unwrap() = Some(value);
            });
        }
    });
    results
        .into_iter()
        .map(|m| m.into_inner().unwrap().expect("task completed"))
        .collect()
}

/// Default worker count.
pub fn default_threads() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn results_are_in_task_order() {
        let out = run_indexed(100, 8, |i| {
            // stagger completion to exercise out-of-order finishes
            std::thread::sleep(std::time::Duration::from_micros((100 - i) as u64));
            i * i
        });
        assert_eq!(out, (0..100).map(|i| i * i).collect::<Vec<_>>());
    }

    #[test]
    fn zero_tasks_and_single_thread() {
        let out: Vec<usize> = run_indexed(0, 4, |i| i);
        assert!(out.is_empty());
        let out = run_indexed(5, 1, |i| i + 1);
        assert_eq!(out, vec![1, 2, 3, 4, 5]);
    }
}

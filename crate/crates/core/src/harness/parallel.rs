//! Order-preserving parallel map for sweep cells.

/// Applies `f` to every item, returning results in input order.
///
/// Uses scoped threads with a shared work index; the thread count is
/// `EVE_OPT_THREADS` if set (minimum 1), otherwise the machine's available
/// parallelism. On wasm targets the map runs sequentially. Because cells
/// are pure functions of their configs, the output is identical at any
/// thread count.
pub fn parallel_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    #[cfg(target_arch = "wasm32")]
    {
        items.iter().map(|item| f(item)).collect()
    }
    #[cfg(not(target_arch = "wasm32"))]
    {
        let threads = thread_cap().min(items.len());
        if threads <= 1 {
            return items.iter().map(|item| f(item)).collect();
        }
        use std::sync::atomic::{AtomicUsize, Ordering};
        use std::sync::Mutex;
        let next = AtomicUsize::new(0);
        let slots: Vec<Mutex<Option<U>>> = items.iter().map(|_| Mutex::new(None)).collect();
        std::thread::scope(|scope| {
            for _ in 0..threads {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= items.len() {
                        break;
                    }
                    let result = f(&items[i]);
                    *slots[i].lock().unwrap() = Some(result);
                });
            }
        });
        slots
            .into_iter()
            .map(|slot| slot.into_inner().unwrap().expect("worker filled every slot"))
            .collect()
    }
}

#[cfg(not(target_arch = "wasm32"))]
fn thread_cap() -> usize {
    if let Ok(v) = std::env::var("EVE_OPT_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

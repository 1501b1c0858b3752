//! Epoch-wise minibatch schedules.

use crate::error::{Error, Result};
use crate::rng::{derive_seed, permutation, rng_from_seed};

/// Steps per epoch: `ceil(n / batch_size)`.
pub fn steps_per_epoch(n: usize, batch_size: usize) -> usize {
    n.div_ceil(batch_size)
}

/// Builds every minibatch for a whole run, epoch by epoch.
///
/// Each epoch draws a fresh Fisher-Yates permutation of `0..n` from a
/// stream keyed by `(seed, epoch)` and slices it into consecutive chunks
/// of `batch_size` (the last chunk of an epoch may be shorter). Batches
/// are returned flattened in training order, so a run of `E` epochs
/// produces `E * ceil(n / batch_size)` batches and every example appears
/// exactly once per epoch.
pub fn minibatch_schedule(
    seed: u64,
    n: usize,
    batch_size: usize,
    epochs: u32,
) -> Result<Vec<Vec<usize>>> {
    if n == 0 {
        return Err(Error::Config("minibatch schedule needs n >= 1".into()));
    }
    if batch_size == 0 || batch_size > n {
        return Err(Error::Config(format!(
            "batch_size must be in 1..={n}, got {batch_size}"
        )));
    }
    if epochs == 0 {
        return Err(Error::Config("minibatch schedule needs epochs >= 1".into()));
    }
    let mut batches = Vec::with_capacity(epochs as usize * steps_per_epoch(n, batch_size));
    for epoch in 0..epochs as u64 {
        let mut rng = rng_from_seed(derive_seed(seed, epoch));
        let perm = permutation(&mut rng, n);
        for chunk in perm.chunks(batch_size) {
            batches.push(chunk.to_vec());
        }
    }
    Ok(batches)
}

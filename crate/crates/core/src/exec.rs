//! Grid evaluation strategy.
//!
//! Return-map grids are embarrassingly parallel. The core stays single-threaded and
//! lets callers plug in a pool; results always come back in index order.

use alloc::vec::Vec;

pub trait Executor: Sync {
    fn map_indexed<R, F>(&self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map_indexed<R, F>(&self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}

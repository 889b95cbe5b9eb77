//! Comparator abstraction shared by the sorters and the LIS routines.

use std::cell::Cell;

/// A (possibly inconsistent) strict "less than" on items of type `T`.
///
/// Noisy comparators need not be transitive; callers never compare an
/// item with itself.
pub trait Comparator<T> {
    fn less(&self, a: T, b: T) -> bool;
}

impl<T, F> Comparator<T> for F
where
    F: Fn(T, T) -> bool,
{
    fn less(&self, a: T, b: T) -> bool {
        self(a, b)
    }
}

/// The error-free order on element values.
#[derive(Debug, Clone, Copy, Default)]
pub struct TrueOrder;

impl Comparator<u32> for TrueOrder {
    fn less(&self, a: u32, b: u32) -> bool {
        a < b
    }
}

/// Wraps a comparator and counts how often it is called.
#[derive(Debug)]
pub struct Counting<C> {
    inner: C,
    calls: Cell<u64>,
}

impl<C> Counting<C> {
    pub fn new(inner: C) -> Self {
        Self {
            inner,
            calls: Cell::new(0),
        }
    }

    pub fn calls(&self) -> u64 {
        self.calls.get()
    }

    pub fn reset(&self) {
        self.calls.set(0);
    }
}

impl<T, C: Comparator<T>> Comparator<T> for Counting<C> {
    fn less(&self, a: T, b: T) -> bool {
        self.calls.set(self.calls.get() + 1);
        self.inner.less(a, b)
    }
}

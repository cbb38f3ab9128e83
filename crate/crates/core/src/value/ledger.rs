//! Allocation ledger and the byte-accounting model.
//!
//! Bytes are not measured from the process; every allocation is charged a
//! deterministic size computed from the constants below. The ledger is
//! thread-local: a runtime instance is single-threaded, so each thread sees
//! only its own allocations.
//!
//! | cell kind | charged bytes |
//! |-----------|---------------|
//! | int / double / bool | `CELL_HEADER` |
//! | text / atom | `CELL_HEADER + len` |
//! | list | `CELL_HEADER + LIST_HEADER + n * SLOT` |
//! | dict | `CELL_HEADER + DICT_HEADER + Σ (DICT_ENTRY + key len)` |
//! | native | `CELL_HEADER + descriptor footprint` |
//!
//! Cached text forms are not charged.

use std::cell::Cell;

/// Fixed per-cell cost: share count, kind tag, cached-text pointer and inline scalar.
pub const CELL_HEADER: usize = 32;
/// List spine header (length, capacity, element pointer).
pub const LIST_HEADER: usize = 24;
/// One element slot in a list spine.
pub const SLOT: usize = 8;
/// Dict spine header (hash index plus entry vector).
pub const DICT_HEADER: usize = 48;
/// One dict entry, excluding the key text.
pub const DICT_ENTRY: usize = 32;

/// Bytes charged for an empty list cell.
pub const EMPTY_LIST_BYTES: usize = CELL_HEADER + LIST_HEADER;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AllocationLedger {
    pub live_allocations: u64,
    pub live_bytes: u64,
    pub total_allocations: u64,
}

impl AllocationLedger {
    /// Counter differences `self - earlier`, saturating for the live counters.
    pub fn since(&self, earlier: &AllocationLedger) -> LedgerDelta {
        LedgerDelta {
            allocations: self.total_allocations - earlier.total_allocations,
            live_allocations: self.live_allocations as i64 - earlier.live_allocations as i64,
            live_bytes: self.live_bytes as i64 - earlier.live_bytes as i64,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LedgerDelta {
    pub allocations: u64,
    pub live_allocations: i64,
    pub live_bytes: i64,
}

thread_local! {
    static LEDGER: Cell<AllocationLedger> = const {
        Cell::new(AllocationLedger {
            live_allocations: 0,
            live_bytes: 0,
            total_allocations: 0,
        })
    };
}

/// Current counters for this thread.
pub fn snapshot() -> AllocationLedger {
    LEDGER.with(Cell::get)
}

pub(crate) fn record_alloc(bytes: usize) {
    LEDGER.with(|l| {
        let mut s = l.get();
        s.live_allocations += 1;
        s.total_allocations += 1;
        s.live_bytes += bytes as u64;
        l.set(s);
    });
}

pub(crate) fn record_free(bytes: usize) {
    // try_with: cells may be dropped by other thread-local destructors.
    let _ = LEDGER.try_with(|l| {
        let mut s = l.get();
        debug_assert!(s.live_allocations > 0 && s.live_bytes >= bytes as u64);
        s.live_allocations = s.live_allocations.saturating_sub(1);
        s.live_bytes = s.live_bytes.saturating_sub(bytes as u64);
        l.set(s);
    });
}

/// An allocation changed size in place (e.g. a list spine grew).
pub(crate) fn record_resize(old: usize, new: usize) {
    if old == new {
        return;
    }
    let _ = LEDGER.try_with(|l| {
        let mut s = l.get();
        s.live_bytes = (s.live_bytes + new as u64).saturating_sub(old as u64);
        l.set(s);
    });
}

/// Measures the ledger change across a region of code.
#[derive(Debug, Clone, Copy)]
pub struct LedgerScope {
    start: AllocationLedger,
}

impl LedgerScope {
    pub fn begin() -> Self {
        LedgerScope { start: snapshot() }
    }

    pub fn delta(&self) -> LedgerDelta {
        snapshot().since(&self.start)
    }
}

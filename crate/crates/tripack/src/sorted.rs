//! Helpers for adjacency lists kept in strictly increasing order.
//!
//! All process state stores neighbor sets as sorted `Vec<u32>`, which makes
//! membership a binary search and codegree queries a linear merge. Degrees in
//! the regimes this crate runs at are O(sqrt(n)), so the O(d) insert shift is
//! cheaper in practice than hashing.

/// Inserts `x` keeping `list` sorted. Returns false if already present.
pub fn insert(list: &mut Vec<u32>, x: u32) -> bool {
    match list.binary_search(&x) {
        Ok(_) => false,
        Err(pos) => {
            list.insert(pos, x);
            true
        }
    }
}

/// Removes `x` from a sorted list. Returns false if absent.
pub fn remove(list: &mut Vec<u32>, x: u32) -> bool {
    match list.binary_search(&x) {
        Ok(pos) => {
            list.remove(pos);
            true
        }
        Err(_) => false,
    }
}

pub fn contains(list: &[u32], x: u32) -> bool {
    list.binary_search(&x).is_ok()
}

/// Appends the intersection of two sorted lists to `out` (ascending).
pub fn intersect_into(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

pub fn intersect_count(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                k += 1;
                i += 1;
                j += 1;
            }
        }
    }
    k
}

/// True if the two sorted lists share no element (early exit on first hit).
pub fn disjoint(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

// ----------------------------------------------------------------------

//! The Koszul sign rule. Every sign in the crate that comes from moving graded
//! symbols past each other is produced here.

/// True when `(-1)^(a*b)` is negative.
#[inline]
pub fn odd_pair(a: i32, b: i32) -> bool {
    (a & 1 != 0) && (b & 1 != 0)
}

/// True when `(-1)^n` is negative.
#[inline]
pub fn odd(n: i32) -> bool {
    n & 1 != 0
}

/// Sign of moving a symbol of degree `moving` past symbols of the given degrees.
pub fn pass(moving: i32, past: impl IntoIterator<Item = i32>) -> bool {
    if !odd(moving) {
        return false;
    }
    past.into_iter().fold(false, |acc, d| acc ^ odd(d))
}

/// Koszul sign of reordering symbols with degrees `degrees` into the order
/// `order` (the new sequence is `degrees[order[0]], degrees[order[1]], ...`).
pub fn reorder(degrees: &[i32], order: &[usize]) -> bool {
    let mut neg = false;
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            if order[a] > order[b] && odd_pair(degrees[order[a]], degrees[order[b]]) {
                neg = !neg;
            }
        }
    }
    neg
}

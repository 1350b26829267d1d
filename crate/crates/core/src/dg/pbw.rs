//! Normal ordering in the universal enveloping algebra.

use std::collections::HashMap;
use std::sync::Mutex;

use super::lie::LiePresentation;
use crate::linalg::Scalar;

/// Nondecreasing sequence of Lie basis indices.
pub type Monomial = Vec<u8>;

/// Rewrites words in the PBW basis by `x_j x_i = x_i x_j + [x_j, x_i]` for `j > i`.
pub struct Normalizer<'a> {
    lie: &'a LiePresentation,
    memo: Mutex<HashMap<Vec<u8>, Vec<(Monomial, Scalar)>>>,
}

impl<'a> Normalizer<'a> {
    pub fn new(lie: &'a LiePresentation) -> Normalizer<'a> {
        Normalizer { lie, memo: Mutex::new(HashMap::new()) }
    }

    /// The PBW expansion of an arbitrary word, sorted by monomial.
    pub fn normalize(&self, word: &[u8]) -> Vec<(Monomial, Scalar)> {
        if let Some(hit) = self.memo.lock().unwrap().get(word) {
            return hit.clone();
        }
        let out = match word.windows(2).position(|w| w[0] > w[1]) {
            None => vec![(word.to_vec(), self.lie.field.one())],
            Some(p) => {
                let (j, i) = (word[p], word[p + 1]);
                let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
                let mut swapped = word.to_vec();
                swapped.swap(p, p + 1);
                for (m, c) in self.normalize(&swapped) {
                    add(&mut acc, m, c);
                }
                for (k, c) in self.lie.bracket(j as usize, i as usize).iter() {
                    let mut shorter = Vec::with_capacity(word.len() - 1);
                    shorter.extend_from_slice(&word[..p]);
                    shorter.push(k as u8);
                    shorter.extend_from_slice(&word[p + 2..]);
                    for (m, x) in self.normalize(&shorter) {
                        add(&mut acc, m, &x * c);
                    }
                }
                let mut v: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                v.sort_by(|a, b| a.0.cmp(&b.0));
                v
            }
        };
        self.memo.lock().unwrap().insert(word.to_vec(), out.clone());
        out
    }

    pub fn product(&self, a: &[u8], b: &[u8]) -> Vec<(Monomial, Scalar)> {
        let mut w = a.to_vec();
        w.extend_from_slice(b);
        self.normalize(&w)
    }
}

fn add(acc: &mut HashMap<Monomial, Scalar>, m: Monomial, c: Scalar) {
    match acc.get_mut(&m) {
        Some(x) => *x = &*x + &c,
        None => {
            acc.insert(m, c);
        }
    }
}

/// All monomials of length ≤ `n` in `k` variables, by length then lexicographically.
pub fn monomials(k: usize, n: usize) -> Vec<Monomial> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Monomial> = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for m in &layer {
            let start = m.last().copied().unwrap_or(0);
            for x in start..k as u8 {
                let mut m2 = m.clone();
                m2.push(x);
                next.push(m2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// `"1"` for the empty monomial, otherwise e.g. `"x1^2*x2"`.
pub fn monomial_name(names: &[String], m: &[u8]) -> String {
    if m.is_empty() {
        return "1".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < m.len() {
        let mut j = i;
        while j < m.len() && m[j] == m[i] {
            j += 1;
        }
        let base = &names[m[i] as usize];
        parts.push(if j - i == 1 { base.clone() } else { format!("{base}^{}", j - i) });
        i = j;
    }
    parts.join("*")
}

//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

pub mod privacy;

use bobmpc::algebra::{Fe, Field, UniPoly};

/// Every polynomial of degree ≤ d over a tiny field.
pub fn all_polys(field: Field, d: usize) -> Vec<UniPoly> {
    let p = field.modulus();
    let total = p.pow(d as u32 + 1);
    (0..total)
        .map(|mut k| {
            let coeffs = (0..=d)
                .map(|_| {
                    let c = field.elem(k % p);
                    k /= p;
                    c
                })
                .collect();
            UniPoly::new(field, coeffs, d).unwrap()
        })
        .collect()
}

/// Decoder by exhaustive search: the unique degree-d polynomial within r
/// disagreements, if at least d + 2r + 1 points are given.
pub fn exhaustive_decode(field: Field, d: usize, r: usize, points: &[(Fe, Fe)]) -> Option<UniPoly> {
    if points.len() < d + 2 * r + 1 {
        return None;
    }
    let hits: Vec<UniPoly> = all_polys(field, d)
        .into_iter()
        .filter(|q| points.iter().filter(|(x, y)| q.eval(*x) != *y).count() <= r)
        .collect();
    assert!(hits.len() <= 1, "unique decoding radius violated");
    hits.into_iter().next()
}

/// Simple deterministic permutations of 0..n (all of them).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, left: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..left.len() {
            let v = left.remove(i);
            prefix.push(v);
            rec(prefix, left, out);
            prefix.pop();
            left.insert(i, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out
}

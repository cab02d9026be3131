mod common;

use std::collections::BTreeMap;

use bobmpc::algebra::{interpolate, rs_decode, Fe, Field, SymBivarPoly, UniPoly};
use bobmpc::party::PartySet;
use bobmpc::sharing::{lagrange_point_coeffs, linear_combine, OecSession, Sharing};
use common::{all_polys, exhaustive_decode, permutations};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn rs_decode_agrees_with_exhaustive_search() {
    let f = Field::new(17).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut decoded = 0;
    for _ in 0..1000 {
        let d = rng.gen_range(0..=2);
        let r = rng.gen_range(0..=2);
        let m = rng.gen_range(d + 1..=(d + 2 * r + 3).min(16));
        let q = UniPoly::random(f, d, &mut rng);
        let mut pts: Vec<(Fe, Fe)> = (1..=m as u64).map(|x| (f.elem(x), q.eval(f.elem(x)))).collect();
        let errs = rng.gen_range(0..=r + 1).min(m);
        for k in 0..errs {
            pts[k * 2 % m].1 += f.elem(rng.gen_range(1..17));
        }
        let fast = rs_decode(d, r, &pts).unwrap();
        let slow = exhaustive_decode(f, d, r, &pts);
        assert_eq!(fast, slow, "d={d} r={r} pts={pts:?}");
        decoded += fast.is_some() as usize;
    }
    assert!(decoded > 300);
}

#[test]
fn oec_never_misdecodes_n5() {
    let f = Field::new(17).unwrap();
    let n = 5;
    let t = 1;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let orders = permutations(n);
    for d in 1..=2 {
        for _ in 0..3 {
            let q = UniPoly::random(f, d, &mut rng);
            for bad in 0..n {
                // None: the corrupt party stays silent
                let claims: Vec<Option<Fe>> = std::iter::once(None).chain(f.elements().map(Some)).collect();
                for claim in claims {
                    for order in &orders {
                        let mut s = OecSession::new(f, d, t, PartySet::all(n));
                        let mut out = None;
                        for &p in order {
                            let v = if p == bad { claim } else { Some(q.eval(f.alpha(p))) };
                            if let Some(v) = v {
                                if let Some(o) = s.admit(p, v) {
                                    assert_eq!(o, q);
                                    out.get_or_insert(o);
                                }
                            }
                        }
                        assert!(out.is_some(), "liveness: d < n - 2t");
                    }
                }
            }
        }
    }
}

#[test]
fn embedding_lands_in_enumerated_completion_set() {
    let f = Field::new(17).unwrap();
    let q = UniPoly::new(f, vec![f.elem(4), f.elem(9)], 1).unwrap();
    // symmetric completions of q for t = 1: only r_11 is free
    let completions: Vec<SymBivarPoly> = f
        .elements()
        .map(|r11| {
            SymBivarPoly::from_coeffs(f, vec![vec![f.elem(4), f.elem(9)], vec![f.elem(9), r11]]).unwrap()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let bp = SymBivarPoly::embed(&q, 1, &mut rng).unwrap();
        assert!(completions.contains(&bp));
        assert_eq!(bp.row_at(f.zero()), q);
    }
}

#[test]
fn rows_reinterpolate_the_bivariate() {
    let f = Field::new(101).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for t in 1..=3 {
        let q = UniPoly::random(f, t, &mut rng);
        let bp = SymBivarPoly::embed(&q, t, &mut rng).unwrap();
        let rows: Vec<_> = (0..=t).map(|i| (f.alpha(i), bp.row_poly(i, 8).unwrap())).collect();
        assert_eq!(SymBivarPoly::from_rows(&rows, t).unwrap(), bp);
    }
}

/// Lemma-2 privacy at p = 17, t = 1, n = 5: the row seen by a single corrupt
/// party has the same distribution (over all completions) for every secret.
#[test]
fn single_row_view_is_independent_of_secret() {
    let f = Field::new(17).unwrap();
    for corrupt in 0..5 {
        let alpha = f.alpha(corrupt);
        let mut reference: Option<BTreeMap<Vec<u64>, usize>> = None;
        for s in f.elements() {
            let mut hist = BTreeMap::new();
            for a in f.elements() {
                for b in f.elements() {
                    let bp = SymBivarPoly::from_coeffs(f, vec![vec![s, a], vec![a, b]]).unwrap();
                    let row = bp.row_at(alpha);
                    *hist.entry(row.coeffs().iter().map(|c| c.value()).collect()).or_insert(0) += 1;
                }
            }
            match &reference {
                None => reference = Some(hist),
                Some(r) => assert_eq!(r, &hist),
            }
        }
    }
}

#[test]
fn lagrange_combination_gives_new_point() {
    let f = Field::new(101).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = 7;
    let t = 2;
    let x_poly = UniPoly::random(f, t, &mut rng);
    // sharings of X(1), X(2), X(3) (degree-2 sharings held by 7 parties)
    let pts: Vec<Sharing> = (1..=3).map(|k| Sharing::deal(x_poly.eval(f.elem(k)), t, n, &mut rng)).collect();
    let target = f.elem(9);
    let lam = lagrange_point_coeffs(&[f.elem(1), f.elem(2), f.elem(3)], target).unwrap();
    let refs: Vec<&Sharing> = pts.iter().collect();
    let s = linear_combine(&lam, &refs, f.zero()).unwrap();
    assert_eq!(s.reconstruct().unwrap(), x_poly.eval(target));
    let sum: Fe = lam.iter().fold(f.zero(), |a, b| a + *b);
    assert_eq!(sum, f.one());
}

#[test]
fn exhaustive_poly_enumeration_count() {
    let f = Field::new(17).unwrap();
    assert_eq!(all_polys(f, 1).len(), 289);
}

proptest! {
    #[test]
    fn interpolate_inverts_evaluation(seed in any::<u64>(), d in 0usize..8) {
        let f = Field::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = UniPoly::random(f, d, &mut rng);
        let pts: Vec<_> = (0..=d + 2).map(|i| (f.alpha(i), q.eval(f.alpha(i)))).collect();
        prop_assert_eq!(interpolate(&pts, d).unwrap(), q);
    }

    #[test]
    fn decode_corrects_up_to_r(seed in any::<u64>(), d in 0usize..4, r in 0usize..4) {
        let f = Field::mersenne61();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = UniPoly::random(f, d, &mut rng);
        let m = d + 2 * r + 1 + rng.gen_range(0..3);
        let mut pts: Vec<_> = (0..m).map(|i| (f.alpha(i), q.eval(f.alpha(i)))).collect();
        for k in 0..r {
            pts[(k * 3) % m].1 += f.one();
        }
        prop_assert_eq!(rs_decode(d, r, &pts).unwrap(), Some(q));
    }

    #[test]
    fn combine_commutes_with_reconstruct(seed in any::<u64>(), k in 1usize..5) {
        let f = Field::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let secrets: Vec<Fe> = (0..k).map(|_| f.random(&mut rng)).collect();
        let coeffs: Vec<Fe> = (0..k).map(|_| f.random(&mut rng)).collect();
        let c = f.random(&mut rng);
        let shs: Vec<Sharing> = secrets.iter().map(|s| Sharing::deal(*s, 2, 7, &mut rng)).collect();
        let refs: Vec<&Sharing> = shs.iter().collect();
        let out = linear_combine(&coeffs, &refs, c).unwrap();
        let expect = secrets.iter().zip(&coeffs).fold(c, |a, (s, co)| a + *s * *co);
        prop_assert_eq!(out.reconstruct().unwrap(), expect);
    }
}

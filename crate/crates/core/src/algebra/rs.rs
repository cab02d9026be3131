use super::poly::solve_linear;
use super::{AlgebraError, Fe, UniPoly};

/// Reed-Solomon decoding by Berlekamp-Welch.
///
/// Returns the degree-`d` polynomial that disagrees with at most `r` of the
/// given points, provided at least `d + 2r + 1` points are supplied. Returns
/// `Ok(None)` when there are too few points or no such polynomial exists.
pub fn rs_decode(d: usize, r: usize, points: &[(Fe, Fe)]) -> Result<Option<UniPoly>, AlgebraError> {
    for (i, a) in points.iter().enumerate() {
        if points[..i].iter().any(|b| b.0 == a.0) {
            return Err(AlgebraError::DuplicateX(a.0.value()));
        }
    }
    let m = points.len();
    if m < d + 2 * r + 1 {
        return Ok(None);
    }
    let field = points[0].0.field();
    // unknowns: q_0..q_{d+r}, then e_0..e_{r-1}; E is monic of degree r
    let nq = d + r + 1;
    let cols = nq + r;
    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for &(x, y) in points {
        let mut row = Vec::with_capacity(cols);
        let mut xp = field.one();
        for _ in 0..nq {
            row.push(xp);
            xp *= x;
        }
        let mut xp = field.one();
        for _ in 0..r {
            row.push(-(y * xp));
            xp *= x;
        }
        a.push(row);
        b.push(y * x.pow(r as u64));
    }
    let Some(sol) = solve_linear(a, b, cols) else { return Ok(None) };
    let q = UniPoly::new(field, sol[..nq].to_vec(), d + r)?;
    let mut e_coeffs = sol[nq..].to_vec();
    e_coeffs.push(field.one());
    let e = UniPoly::new(field, e_coeffs, r)?;
    let (quot, rem) = q.div_rem(&e);
    if rem.actual_degree().is_some() {
        return Ok(None);
    }
    let Ok(cand) = quot.with_degree(d) else { return Ok(None) };
    let errors = points.iter().filter(|&&(x, y)| cand.eval(x) != y).count();
    Ok(if errors <= r { Some(cand) } else { None })
}

use rand::Rng;

use super::{AlgebraError, Fe, Field};

/// Dense univariate polynomial with a declared degree bound.
///
/// `coeffs` is low-to-high and always has exactly `degree + 1` entries, so the
/// zero polynomial of any degree is representable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<Fe>,
}

impl UniPoly {
    /// Builds a polynomial of degree bound `degree` from low-to-high coefficients.
    /// Extra trailing zero coefficients are allowed; nonzero ones beyond the bound are not.
    pub fn new(field: Field, mut coeffs: Vec<Fe>, degree: usize) -> Result<UniPoly, AlgebraError> {
        if coeffs.len() > degree + 1 {
            if coeffs[degree + 1..].iter().any(|c| !c.is_zero()) {
                return Err(AlgebraError::DegreeTooHigh { bound: degree });
            }
            coeffs.truncate(degree + 1);
        }
        coeffs.resize(degree + 1, field.zero());
        Ok(UniPoly { field, coeffs })
    }

    pub fn zero(field: Field, degree: usize) -> UniPoly {
        UniPoly { field, coeffs: vec![field.zero(); degree + 1] }
    }

    pub fn constant(c: Fe, degree: usize) -> UniPoly {
        let mut p = UniPoly::zero(c.field(), degree);
        p.coeffs[0] = c;
        p
    }

    /// Uniformly random polynomial of degree at most `degree`.
    pub fn random<R: Rng + ?Sized>(field: Field, degree: usize, rng: &mut R) -> UniPoly {
        UniPoly { field, coeffs: (0..=degree).map(|_| field.random(rng)).collect() }
    }

    /// Random polynomial of degree at most `degree` with constant term `secret`.
    pub fn random_with_constant<R: Rng + ?Sized>(secret: Fe, degree: usize, rng: &mut R) -> UniPoly {
        let mut p = UniPoly::random(secret.field(), degree, rng);
        p.coeffs[0] = secret;
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Index of the highest nonzero coefficient; `None` for the zero polynomial.
    pub fn actual_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + *c;
        }
        acc
    }

    pub fn constant_term(&self) -> Fe {
        self.coeffs[0]
    }

    /// Same polynomial with a different (large enough) degree bound.
    pub fn with_degree(&self, degree: usize) -> Result<UniPoly, AlgebraError> {
        UniPoly::new(self.field, self.coeffs.clone(), degree)
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let d = self.degree_bound().max(o.degree_bound());
        let coeffs = (0..=d).map(|i| self.coeff(i) + o.coeff(i)).collect();
        UniPoly { field: self.field, coeffs }
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        let d = self.degree_bound().max(o.degree_bound());
        let coeffs = (0..=d).map(|i| self.coeff(i) - o.coeff(i)).collect();
        UniPoly { field: self.field, coeffs }
    }

    pub fn scale(&self, c: Fe) -> UniPoly {
        UniPoly { field: self.field, coeffs: self.coeffs.iter().map(|x| *x * c).collect() }
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                coeffs[i + j] += *a * *b;
            }
        }
        UniPoly { field: self.field, coeffs }
    }

    /// Long division; returns (quotient, remainder). Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.actual_degree().expect("division by the zero polynomial");
        let lead_inv = divisor.coeffs[dd].inv().unwrap();
        let mut rem = self.coeffs.clone();
        let qlen = self.coeffs.len().saturating_sub(dd).max(1);
        let mut quot = vec![self.field.zero(); qlen];
        for k in (dd..rem.len()).rev() {
            let c = rem[k] * lead_inv;
            if c.is_zero() {
                continue;
            }
            quot[k - dd] = c;
            for j in 0..=dd {
                let sub = c * divisor.coeffs[j];
                rem[k - dd + j] -= sub;
            }
        }
        rem.truncate(dd.max(1));
        (UniPoly { field: self.field, coeffs: quot }, UniPoly { field: self.field, coeffs: rem })
    }

    fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(self.field.zero())
    }
}

fn check_distinct(points: &[(Fe, Fe)]) -> Result<(), AlgebraError> {
    for (i, a) in points.iter().enumerate() {
        if points[..i].iter().any(|b| b.0 == a.0) {
            return Err(AlgebraError::DuplicateX(a.0.value()));
        }
    }
    Ok(())
}

/// The unique polynomial of degree at most `d` through the first `d + 1` points.
/// Any further points must lie on it.
pub fn interpolate(points: &[(Fe, Fe)], d: usize) -> Result<UniPoly, AlgebraError> {
    if points.len() < d + 1 {
        return Err(AlgebraError::TooFewPoints { needed: d + 1, got: points.len() });
    }
    check_distinct(points)?;
    let field = points[0].0.field();
    let base = &points[..d + 1];
    let mut coeffs = vec![field.zero(); d + 1];
    for (i, &(xi, yi)) in base.iter().enumerate() {
        // basis polynomial prod_{j != i} (x - xj) / (xi - xj), built incrementally
        let mut basis = vec![field.zero(); d + 1];
        basis[0] = field.one();
        let mut len = 1;
        let mut denom = field.one();
        for (j, &(xj, _)) in base.iter().enumerate() {
            if j == i {
                continue;
            }
            for k in (0..len).rev() {
                let b = basis[k];
                basis[k + 1] += b;
                basis[k] = -(b * xj);
            }
            len += 1;
            denom *= xi - xj;
        }
        let scale = yi / denom;
        for k in 0..=d {
            coeffs[k] += basis[k] * scale;
        }
    }
    let poly = UniPoly { field, coeffs };
    for &(x, y) in &points[d + 1..] {
        if poly.eval(x) != y {
            return Err(AlgebraError::Inconsistent);
        }
    }
    Ok(poly)
}

/// Coefficients λ_k with f(target) = Σ λ_k f(xs_k) for every f of degree ≤ |xs| - 1.
pub fn lagrange_coeffs(xs: &[Fe], target: Fe) -> Result<Vec<Fe>, AlgebraError> {
    for (i, a) in xs.iter().enumerate() {
        if xs[..i].contains(a) {
            return Err(AlgebraError::DuplicateX(a.value()));
        }
    }
    let field = target.field();
    let mut out = Vec::with_capacity(xs.len());
    for (i, &xi) in xs.iter().enumerate() {
        let mut num = field.one();
        let mut den = field.one();
        for (j, &xj) in xs.iter().enumerate() {
            if j != i {
                num *= target - xj;
                den *= xi - xj;
            }
        }
        out.push(num / den);
    }
    Ok(out)
}

/// Publicly known evaluation points: α_i for parties, β_j for triple extraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalPoints {
    pub alphas: Vec<Fe>,
    pub betas: Vec<Fe>,
}

impl EvalPoints {
    /// α_i = i and β_j = n + j (1-based), requiring p > n + m.
    pub fn standard(field: Field, n: usize, m: usize) -> Result<EvalPoints, AlgebraError> {
        if (n + m) as u64 >= field.modulus() {
            return Err(AlgebraError::FieldTooSmall { needed: (n + m) as u64 + 1 });
        }
        Ok(EvalPoints {
            alphas: (1..=n).map(|i| field.elem(i as u64)).collect(),
            betas: (1..=m).map(|j| field.elem((n + j) as u64)).collect(),
        })
    }
}

/// Solves the linear system `a · x = b` over F_p. Returns one solution when the
/// system is consistent (free variables set to zero), otherwise `None`.
pub(crate) fn solve_linear(mut a: Vec<Vec<Fe>>, mut b: Vec<Fe>, cols: usize) -> Option<Vec<Fe>> {
    let rows = a.len();
    let field = b.first()?.field();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, piv);
        b.swap(r, piv);
        let inv = a[r][c].inv().unwrap();
        for k in c..cols {
            a[r][k] *= inv;
        }
        b[r] *= inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c];
                for k in c..cols {
                    let s = f * a[r][k];
                    a[i][k] -= s;
                }
                let s = f * b[r];
                b[i] -= s;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if b[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![field.zero(); cols];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = b[row];
    }
    Some(x)
}

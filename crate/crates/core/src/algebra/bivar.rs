use rand::Rng;

use super::{interpolate, AlgebraError, Fe, Field, UniPoly};

/// Symmetric bivariate polynomial F(x, y) = Σ r_ij x^i y^j with r_ij = r_ji.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SymBivarPoly {
    field: Field,
    coeffs: Vec<Vec<Fe>>,
}

impl SymBivarPoly {
    /// From an explicit (t+1)×(t+1) coefficient matrix; rejects asymmetric input.
    pub fn from_coeffs(field: Field, coeffs: Vec<Vec<Fe>>) -> Result<SymBivarPoly, AlgebraError> {
        let k = coeffs.len();
        if k == 0 || coeffs.iter().any(|row| row.len() != k) {
            return Err(AlgebraError::NotSymmetric);
        }
        for i in 0..k {
            for j in 0..i {
                if coeffs[i][j] != coeffs[j][i] {
                    return Err(AlgebraError::NotSymmetric);
                }
            }
        }
        Ok(SymBivarPoly { field, coeffs })
    }

    /// Random symmetric (t,t)-degree F with F(0, y) = q(y).
    pub fn embed<R: Rng + ?Sized>(q: &UniPoly, t: usize, rng: &mut R) -> Result<SymBivarPoly, AlgebraError> {
        if q.actual_degree().unwrap_or(0) > t {
            return Err(AlgebraError::DegreeTooHigh { bound: t });
        }
        let field = q.field();
        let mut c = vec![vec![field.zero(); t + 1]; t + 1];
        let qc = q.with_degree(t)?;
        for j in 0..=t {
            c[0][j] = qc.coeffs()[j];
            c[j][0] = qc.coeffs()[j];
        }
        for i in 1..=t {
            for j in i..=t {
                let v = field.random(rng);
                c[i][j] = v;
                c[j][i] = v;
            }
        }
        Ok(SymBivarPoly { field, coeffs: c })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Vec<Fe>] {
        &self.coeffs
    }

    pub fn eval(&self, x: Fe, y: Fe) -> Fe {
        self.row_at(y).eval(x)
    }

    /// The polynomial x ↦ F(x, y0).
    pub fn row_at(&self, y0: Fe) -> UniPoly {
        let t = self.degree();
        let mut out = Vec::with_capacity(t + 1);
        for i in 0..=t {
            let mut acc = self.field.zero();
            for j in (0..=t).rev() {
                acc = acc * y0 + self.coeffs[i][j];
            }
            out.push(acc);
        }
        UniPoly::new(self.field, out, t).expect("row length equals degree + 1")
    }

    /// Row polynomial F(x, α_i) of party `i` (0-based) among `n` parties.
    pub fn row_poly(&self, i: usize, n: usize) -> Result<UniPoly, AlgebraError> {
        if i >= n {
            return Err(AlgebraError::IndexOutOfRange { index: i, n });
        }
        Ok(self.row_at(self.field.alpha(i)))
    }

    /// Rebuilds F from t+1 rows (y_k, F(x, y_k)), checking symmetry.
    pub fn from_rows(rows: &[(Fe, UniPoly)], t: usize) -> Result<SymBivarPoly, AlgebraError> {
        if rows.len() < t + 1 {
            return Err(AlgebraError::TooFewPoints { needed: t + 1, got: rows.len() });
        }
        let field = rows[0].1.field();
        let mut coeffs = vec![vec![field.zero(); t + 1]; t + 1];
        for i in 0..=t {
            // coefficient i of the row at y is Σ_j r_ij y^j, a degree-t poly in y
            let pts: Vec<(Fe, Fe)> = rows
                .iter()
                .map(|(y, row)| (*y, row.coeffs().get(i).copied().unwrap_or(field.zero())))
                .collect();
            let col = interpolate(&pts, t)?;
            for j in 0..=t {
                coeffs[i][j] = col.coeffs()[j];
            }
        }
        SymBivarPoly::from_coeffs(field, coeffs)
    }
}

use nalgebra::Matrix2;
use num_complex::Complex64;

use super::poly::Poly;
use crate::error::{Error, Result};

/// Ratio of real polynomials. Common factors are never cancelled.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalTF {
    pub num: Poly,
    pub den: Poly,
}

impl RationalTF {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Self { num, den })
    }

    pub fn one() -> Self {
        Self {
            num: Poly::constant(1.0),
            den: Poly::constant(1.0),
        }
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.num.eval(s) / self.den.eval(s)
    }

    /// `|H(jw)|`
    pub fn magnitude(&self, omega: f64) -> f64 {
        self.eval(Complex64::new(0.0, omega)).norm()
    }

    /// `deg(den) - deg(num)`; the zero numerator counts as infinitely proper.
    pub fn relative_degree(&self) -> Option<i64> {
        let dn = self.num.degree()? as i64;
        Some(self.den.degree().unwrap_or(0) as i64 - dn)
    }

    /// `lim_{s -> inf} H(s)` when finite.
    pub fn limit_at_infinity(&self) -> Option<f64> {
        match self.relative_degree() {
            None => Some(0.0),
            Some(r) if r > 0 => Some(0.0),
            Some(0) => Some(self.num.leading() / self.den.leading()),
            Some(_) => None,
        }
    }

    /// Reciprocal `1/H`.
    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }
}

/// 2x2 matrix of polynomials, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix2 {
    pub entries: [[Poly; 2]; 2],
}

impl PolyMatrix2 {
    pub fn new(p11: Poly, p12: Poly, p21: Poly, p22: Poly) -> Self {
        Self {
            entries: [[p11, p12], [p21, p22]],
        }
    }

    pub fn identity() -> Self {
        Self::new(
            Poly::constant(1.0),
            Poly::zero(),
            Poly::zero(),
            Poly::constant(1.0),
        )
    }

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.entries[r][c]
    }

    pub fn det(&self) -> Poly {
        let e = &self.entries;
        &(&e[0][0] * &e[1][1]) - &(&e[0][1] * &e[1][0])
    }

    pub fn adjugate(&self) -> Self {
        let e = &self.entries;
        Self::new(e[1][1].clone(), -&e[0][1], -&e[1][0], e[0][0].clone())
    }

    pub fn det_adj(&self) -> (Poly, Self) {
        (self.det(), self.adjugate())
    }

    pub fn scale_poly(&self, p: &Poly) -> Self {
        let e = &self.entries;
        Self::new(&e[0][0] * p, &e[0][1] * p, &e[1][0] * p, &e[1][1] * p)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = (&self.entries, &other.entries);
        Self::new(
            &a[0][0] + &b[0][0],
            &a[0][1] + &b[0][1],
            &a[1][0] + &b[1][0],
            &a[1][1] + &b[1][1],
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.entries, &other.entries);
        let dot = |r: usize, c: usize| &(&a[r][0] * &b[0][c]) + &(&a[r][1] * &b[1][c]);
        Self::new(dot(0, 0), dot(0, 1), dot(1, 0), dot(1, 1))
    }

    /// Column vector times row vector.
    pub fn outer(col: [&Poly; 2], row: [&Poly; 2]) -> Self {
        Self::new(
            col[0] * row[0],
            col[0] * row[1],
            col[1] * row[0],
            col[1] * row[1],
        )
    }

    /// Product with a column vector.
    pub fn mul_col(&self, v: [&Poly; 2]) -> [Poly; 2] {
        let e = &self.entries;
        [
            &(&e[0][0] * v[0]) + &(&e[0][1] * v[1]),
            &(&e[1][0] * v[0]) + &(&e[1][1] * v[1]),
        ]
    }

    pub fn eval(&self, s: Complex64) -> Matrix2<Complex64> {
        let e = &self.entries;
        Matrix2::new(
            e[0][0].eval(s),
            e[0][1].eval(s),
            e[1][0].eval(s),
            e[1][1].eval(s),
        )
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.entries.iter().flatten().filter_map(Poly::degree).max()
    }
}

/// 2x2 transfer matrix in shared-denominator form `num(s) / den(s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TFMatrix {
    pub num: PolyMatrix2,
    pub den: Poly,
}

impl TFMatrix {
    pub fn new(num: PolyMatrix2, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Self { num, den })
    }

    pub fn entry(&self, r: usize, c: usize) -> RationalTF {
        RationalTF {
            num: self.num.get(r, c).clone(),
            den: self.den.clone(),
        }
    }

    pub fn eval(&self, s: Complex64) -> Matrix2<Complex64> {
        self.num.eval(s) / self.den.eval(s)
    }

    /// Entrywise limit as `s -> inf`, or `None` if any entry is improper.
    pub fn limit_at_infinity(&self) -> Option<Matrix2<f64>> {
        let mut out = Matrix2::zeros();
        for r in 0..2 {
            for c in 0..2 {
                out[(r, c)] = self.entry(r, c).limit_at_infinity()?;
            }
        }
        Some(out)
    }
}

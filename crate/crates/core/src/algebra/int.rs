//! Exact matrices and polynomials over the integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::modp::{ModMatrix, ModPoly};
use crate::error::{Error, Result};

/// Square matrix of arbitrary-precision integers, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::input("matrix dimension must be at least 1"));
        }
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::input("matrix is not square"));
        }
        Ok(IntMatrix { dim, entries: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor for small literal matrices.
    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim >= 1);
        let mut entries = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = BigInt::one();
        }
        IntMatrix { dim, entries }
    }

    pub fn zero(dim: usize) -> Self {
        IntMatrix { dim, entries: vec![BigInt::zero(); dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.dim)
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].clone();
            }
        }
        out
    }

    /// Matrix product; zero entries of `rhs` are skipped, which makes
    /// right-multiplication by sparse generators cheap.
    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zero(n);
        for k in 0..n {
            for j in 0..n {
                let b = &rhs.entries[k * n + j];
                if b.is_zero() {
                    continue;
                }
                for i in 0..n {
                    let a = &self.entries[i * n + k];
                    if !a.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix { dim: self.dim, entries: self.entries.iter().map(|x| -x).collect() }
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> BigInt {
        bareiss_det(self.dim, self.entries.clone())
    }

    /// Inverse over Z; `None` unless the determinant is a unit.
    pub fn inverse(&self) -> Option<IntMatrix> {
        let n = self.dim;
        let mut aug: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRational> =
                    (0..n).map(|j| BigRational::from_integer(self.get(i, j).clone())).collect();
                row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
            aug.swap(col, pivot);
            let inv = aug[col][col].recip();
            for x in aug[col].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..n {
                if r != col && !aug[r][col].is_zero() {
                    let factor = aug[r][col].clone();
                    for c in 0..2 * n {
                        let delta = &factor * &aug[col][c];
                        aug[r][c] -= delta;
                    }
                }
            }
        }
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let x = &aug[i][n + j];
                if !x.is_integer() {
                    return None;
                }
                out.entries[i * n + j] = x.to_integer();
            }
        }
        Some(out)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    /// Reduction into `[0, p)`.
    pub fn reduce(&self, p: u64) -> ModMatrix {
        let modulus = BigInt::from(p);
        let entries = self
            .entries
            .iter()
            .map(|x| {
                let r = x.mod_floor(&modulus);
                u64::try_from(r).expect("residue fits in u64")
            })
            .collect();
        ModMatrix::from_reduced(self.dim, p, entries)
    }

    /// Largest number of decimal digits over all entries.
    pub fn max_digits(&self) -> usize {
        self.entries.iter().map(|x| x.abs().to_string().len()).max().unwrap_or(1)
    }

    /// Companion matrix of a monic polynomial: ones on the subdiagonal,
    /// last column `-c_0, ..., -c_{d-1}`.
    pub fn companion(poly: &IntPoly) -> Result<IntMatrix> {
        if !poly.is_monic() || poly.degree() < 1 {
            return Err(Error::input("companion matrix needs a monic polynomial of degree >= 1"));
        }
        let d = poly.degree();
        let mut m = Self::zero(d);
        for i in 1..d {
            m.set(i, i - 1, BigInt::one());
        }
        for i in 0..d {
            m.set(i, d - 1, -poly.coeffs()[i].clone());
        }
        Ok(m)
    }

    /// Characteristic polynomial `det(T*I - M)` by Berkowitz's division-free
    /// algorithm.
    pub fn charpoly(&self) -> IntPoly {
        charpoly_exact(self)
    }

    /// Parses the text format: first line the dimension, then `dim` rows of
    /// whitespace-separated decimal integers.
    pub fn parse_text(text: &str) -> Result<IntMatrix> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let dim: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix file".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad dimension: {e}")))?;
        let mut rows = Vec::with_capacity(dim);
        for _ in 0..dim {
            let line = lines.next().ok_or_else(|| Error::Parse("too few matrix rows".into()))?;
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<BigInt>().map_err(|e| Error::Parse(format!("bad entry {t:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            if row.len() != dim {
                return Err(Error::Parse(format!("row has {} entries, expected {dim}", row.len())));
            }
            rows.push(row);
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing data after matrix".into()));
        }
        Self::from_rows(rows)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.dim);
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub(crate) fn bareiss_det(n: usize, mut a: Vec<BigInt>) -> BigInt {
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k * n + k].is_zero() {
            match (k + 1..n).find(|&r| !a[r * n + k].is_zero()) {
                Some(r) => {
                    for c in 0..n {
                        a.swap(k * n + c, r * n + c);
                    }
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                a[i * n + j] = v / &prev;
            }
        }
        prev = a[k * n + k].clone();
    }
    sign * &a[n * n - 1]
}

/// Univariate integer polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// Trailing zero coefficients are trimmed; the zero polynomial is `[0]`.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn derivative(&self) -> IntPoly {
        if self.degree() == 0 {
            return IntPoly::new(vec![]);
        }
        IntPoly::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect(),
        )
    }

    /// `coeffs[i] == coeffs[deg - i]` for all `i`.
    pub fn is_palindromic(&self) -> bool {
        let d = self.degree();
        (0..=d).all(|i| self.coeffs[i] == self.coeffs[d - i])
    }

    pub fn reduce(&self, p: u64) -> ModPoly {
        let modulus = BigInt::from(p);
        ModPoly::new(
            p,
            self.coeffs
                .iter()
                .map(|c| u64::try_from(c.mod_floor(&modulus)).expect("residue fits in u64"))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Discriminant `(-1)^{m(m-1)/2} Res(P, P') / lc(P)`; the resultant is the
    /// Sylvester determinant, evaluated by Bareiss elimination.
    pub fn discriminant(&self) -> Result<BigInt> {
        discriminant(self)
    }

    pub fn parse_text(text: &str) -> Result<IntPoly> {
        let coeffs = text
            .split_whitespace()
            .map(|t| t.parse::<BigInt>().map_err(|e| Error::Parse(format!("bad coefficient {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        Ok(IntPoly::new(coeffs))
    }

    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        parts.join(" ")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `det(T*I - M)` via Berkowitz: the characteristic polynomial of each
/// leading principal submatrix is obtained from the previous one by a
/// lower-triangular Toeplitz product, using only ring operations.
pub fn charpoly_exact(m: &IntMatrix) -> IntPoly {
    let n = m.dim();
    // descending coefficients of the charpoly of the leading k x k block
    let mut poly: Vec<BigInt> = vec![BigInt::one()];
    for k in 0..n {
        // block structure of the leading (k+1)x(k+1) submatrix:
        // [[A, c], [r, a]] with A the leading k x k block
        let a = m.get(k, k);
        let mut toeplitz: Vec<BigInt> = Vec::with_capacity(k + 2);
        toeplitz.push(BigInt::one());
        toeplitz.push(-a);
        let mut v: Vec<BigInt> = (0..k).map(|i| m.get(i, k).clone()).collect();
        for step in 0..k {
            let rv: BigInt = (0..k).map(|j| m.get(k, j) * &v[j]).sum();
            toeplitz.push(-rv);
            if step + 1 < k {
                v = (0..k).map(|i| (0..k).map(|j| m.get(i, j) * &v[j]).sum()).collect();
            }
        }
        let mut next = vec![BigInt::zero(); k + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, pj) in poly.iter().enumerate() {
                if i >= j {
                    *slot += &toeplitz[i - j] * pj;
                }
            }
        }
        poly = next;
    }
    poly.reverse();
    IntPoly::new(poly)
}

pub fn discriminant(p: &IntPoly) -> Result<BigInt> {
    let m = p.degree();
    if m < 1 {
        return Err(Error::input("discriminant needs degree >= 1"));
    }
    if !p.is_monic() {
        return Err(Error::input("discriminant expects a monic polynomial"));
    }
    let res = sylvester_resultant(p, &p.derivative());
    Ok(if (m * (m - 1) / 2) % 2 == 1 { -res } else { res })
}

/// Resultant of `f` and `g` as the determinant of their Sylvester matrix.
pub fn sylvester_resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    let (df, dg) = (f.degree(), g.degree());
    let n = df + dg;
    if n == 0 {
        return BigInt::one();
    }
    let mut rows = vec![BigInt::zero(); n * n];
    for r in 0..dg {
        for (i, c) in f.coeffs().iter().rev().enumerate() {
            rows[r * n + r + i] = c.clone();
        }
    }
    for r in 0..df {
        for (i, c) in g.coeffs().iter().rev().enumerate() {
            rows[(dg + r) * n + r + i] = c.clone();
        }
    }
    bareiss_det(n, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Cofactor expansion of det(T*I - M) for 3x3 matrices, written out
    /// symbolically: T^3 - tr T^2 + (sum of principal 2x2 minors) T - det.
    fn cofactor_charpoly3(m: &IntMatrix) -> IntPoly {
        let e = |i: usize, j: usize| m.get(i, j).clone();
        let tr = e(0, 0) + e(1, 1) + e(2, 2);
        let minors = e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0) + e(0, 0) * e(2, 2) - e(0, 2) * e(2, 0)
            + e(1, 1) * e(2, 2)
            - e(1, 2) * e(2, 1);
        let det = e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
            - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
        IntPoly::new(vec![-det, minors, -tr, BigInt::one()])
    }

    fn elementary(n: usize, i: usize, j: usize, sign: i64) -> IntMatrix {
        let mut m = IntMatrix::identity(n);
        m.set(i, j, BigInt::from(sign));
        m
    }

    #[test]
    fn charpoly_identity_and_companion() {
        assert_eq!(IntMatrix::identity(3).charpoly(), IntPoly::from_i64(&[-1, 3, -3, 1]));
        let f = IntPoly::from_i64(&[-1, -1, 0, 1]);
        assert_eq!(IntMatrix::companion(&f).unwrap().charpoly(), f);
    }

    #[test]
    fn charpoly_of_recorded_walk_matches_cofactor_expansion() {
        // E_{01}^+ E_{12}^+ E_{20}^- E_{10}^+ E_{02}^+ E_{21}^- E_{01}^+ E_{12}^+ E_{20}^+ E_{10}^- E_{01}^+ E_{21}^+
        let steps = [
            (0, 1, 1),
            (1, 2, 1),
            (2, 0, -1),
            (1, 0, 1),
            (0, 2, 1),
            (2, 1, -1),
            (0, 1, 1),
            (1, 2, 1),
            (2, 0, 1),
            (1, 0, -1),
            (0, 1, 1),
            (2, 1, 1),
        ];
        let mut x = IntMatrix::identity(3);
        for (i, j, s) in steps {
            x = x.mul(&elementary(3, i, j, s));
        }
        assert_eq!(x.det(), BigInt::one());
        let p = x.charpoly();
        assert_eq!(p, cofactor_charpoly3(&x));
        // frozen from the cofactor oracle
        assert_eq!(p, IntPoly::from_i64(&[-1, 1, -4, 1]));
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(IntPoly::from_i64(&[-1, 0, 1]).discriminant().unwrap(), BigInt::from(4));
        assert_eq!(IntPoly::from_i64(&[1, -2, 1]).discriminant().unwrap(), BigInt::zero());
        assert_eq!(IntPoly::from_i64(&[-1, -1, 0, 1]).discriminant().unwrap(), BigInt::from(-23));
        assert!(IntPoly::from_i64(&[3]).discriminant().is_err());
        assert!(IntPoly::from_i64(&[1, 2]).discriminant().is_err());
    }

    #[test]
    fn inverse_over_z() {
        let m = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]).unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(IntMatrix::from_i64(&[&[2, 0], &[0, 1]]).unwrap().inverse().is_none());
    }

    #[test]
    fn text_round_trip() {
        let m = IntMatrix::from_i64(&[&[1, -2], &[30, 4]]).unwrap();
        assert_eq!(IntMatrix::parse_text(&m.to_text()).unwrap(), m);
        assert!(IntMatrix::parse_text("2\n1 2\n3\n").is_err());
        let p = IntPoly::parse_text("-1 -1 0 1").unwrap();
        assert_eq!(p.degree(), 3);
        assert_eq!(p.to_text(), "-1 -1 0 1");
    }
}

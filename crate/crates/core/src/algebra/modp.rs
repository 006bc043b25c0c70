//! Matrices and polynomials over a prime field F_p, `p < 2^62`.

use std::fmt;

use super::prime::{inv_mod, mul_mod};

#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
fn neg_mod(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

/// Square matrix over F_p with entries reduced into `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    dim: usize,
    p: u64,
    entries: Vec<u64>,
}

impl ModMatrix {
    /// Entries must already be reduced.
    pub fn from_reduced(dim: usize, p: u64, entries: Vec<u64>) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        debug_assert!(entries.iter().all(|&x| x < p));
        ModMatrix { dim, p, entries }
    }

    pub fn from_i64(p: u64, rows: &[&[i64]]) -> Self {
        let dim = rows.len();
        let entries = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), dim);
                r.iter().map(|&x| x.rem_euclid(p as i64) as u64)
            })
            .collect();
        ModMatrix { dim, p, entries }
    }

    pub fn identity(dim: usize, p: u64) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1 % p;
        }
        ModMatrix { dim, p, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.entries[i * self.dim + j] = v % self.p;
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn mul(&self, rhs: &ModMatrix) -> ModMatrix {
        assert_eq!(self.dim, rhs.dim);
        assert_eq!(self.p, rhs.p);
        let (n, p) = (self.dim, self.p);
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.entries[k * n + j];
                    if b != 0 {
                        out[i * n + j] = add_mod(out[i * n + j], mul_mod(a, b, p), p);
                    }
                }
            }
        }
        ModMatrix { dim: n, p, entries: out }
    }

    /// Right-multiplication in place, `self <- self * rhs`.
    pub fn mul_assign_right(&mut self, rhs: &ModMatrix) {
        *self = self.mul(rhs);
    }

    pub fn transpose(&self) -> ModMatrix {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j];
            }
        }
        out
    }

    /// Scales row `i` by `c`.
    pub fn scale_row(&mut self, i: usize, c: u64) {
        let (n, p) = (self.dim, self.p);
        for x in &mut self.entries[i * n..(i + 1) * n] {
            *x = mul_mod(*x, c, p);
        }
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> u64 {
        let (n, p) = (self.dim, self.p);
        let mut a = self.entries.clone();
        let mut det = 1 % p;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return 0;
            };
            if piv != col {
                for c in 0..n {
                    a.swap(col * n + c, piv * n + c);
                }
                det = neg_mod(det, p);
            }
            let pv = a[col * n + col];
            det = mul_mod(det, pv, p);
            let inv = inv_mod(pv, p);
            for r in col + 1..n {
                let f = mul_mod(a[r * n + col], inv, p);
                if f == 0 {
                    continue;
                }
                for c in col..n {
                    let v = mul_mod(f, a[col * n + c], p);
                    a[r * n + c] = sub_mod(a[r * n + c], v, p);
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan, `None` if singular.
    pub fn inverse(&self) -> Option<ModMatrix> {
        let (n, p) = (self.dim, self.p);
        let w = 2 * n;
        let mut a = vec![0u64; n * w];
        for i in 0..n {
            a[i * w..i * w + n].copy_from_slice(&self.entries[i * n..(i + 1) * n]);
            a[i * w + n + i] = 1 % p;
        }
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r * w + col] != 0)?;
            if piv != col {
                for c in 0..w {
                    a.swap(col * w + c, piv * w + c);
                }
            }
            let inv = inv_mod(a[col * w + col], p);
            for c in 0..w {
                a[col * w + c] = mul_mod(a[col * w + c], inv, p);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * w + col];
                if f == 0 {
                    continue;
                }
                for c in 0..w {
                    let v = mul_mod(f, a[col * w + c], p);
                    a[r * w + c] = sub_mod(a[r * w + c], v, p);
                }
            }
        }
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            out[i * n..(i + 1) * n].copy_from_slice(&a[i * w + n..(i + 1) * w]);
        }
        Some(ModMatrix { dim: n, p, entries: out })
    }

    /// Characteristic polynomial `det(T*I - M)`: similarity reduction to
    /// upper Hessenberg form followed by the standard column recurrence.
    pub fn charpoly(&self) -> ModPoly {
        charpoly_mod(self)
    }

    /// Entries packed into 64-bit words for hashing during closures.
    pub fn packed_key(&self) -> Box<[u64]> {
        let bits = (64 - (self.p - 1).leading_zeros()).max(1) as usize;
        let per_word = 64 / bits;
        let mut words = vec![0u64; self.entries.len().div_ceil(per_word)];
        for (idx, &x) in self.entries.iter().enumerate() {
            words[idx / per_word] |= x << ((idx % per_word) * bits);
        }
        words.into_boxed_slice()
    }
}

impl fmt::Display for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.dim)?;
        for row in self.entries.chunks(self.dim) {
            let line: Vec<String> = row.iter().map(u64::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

pub fn charpoly_mod(m: &ModMatrix) -> ModPoly {
    let (n, p) = (m.dim, m.p);
    let mut h = m.entries.clone();
    let at = |i: usize, j: usize| i * n + j;
    for col in 0..n.saturating_sub(2) {
        let Some(piv) = (col + 1..n).find(|&r| h[at(r, col)] != 0) else {
            continue;
        };
        if piv != col + 1 {
            for c in 0..n {
                h.swap(at(piv, c), at(col + 1, c));
            }
            for r in 0..n {
                h.swap(at(r, piv), at(r, col + 1));
            }
        }
        let inv = inv_mod(h[at(col + 1, col)], p);
        for r in col + 2..n {
            let u = mul_mod(h[at(r, col)], inv, p);
            if u == 0 {
                continue;
            }
            // row_r -= u * row_{col+1}; then col_{col+1} += u * col_r
            for c in 0..n {
                let v = mul_mod(u, h[at(col + 1, c)], p);
                h[at(r, c)] = sub_mod(h[at(r, c)], v, p);
            }
            for rr in 0..n {
                let v = mul_mod(u, h[at(rr, r)], p);
                h[at(rr, col + 1)] = add_mod(h[at(rr, col + 1)], v, p);
            }
        }
    }
    // polys[k] = charpoly of the leading k x k block of the Hessenberg form
    let mut polys: Vec<ModPoly> = vec![ModPoly::one(p)];
    for k in 0..n {
        let linear = ModPoly::new(p, vec![neg_mod(h[at(k, k)], p), 1 % p]);
        let mut next = polys[k].mul(&linear);
        let mut sub_prod = 1 % p;
        for i in (0..k).rev() {
            sub_prod = mul_mod(sub_prod, h[at(i + 1, i)], p);
            let coeff = mul_mod(h[at(i, k)], sub_prod, p);
            if coeff != 0 {
                next = next.sub(&polys[i].scale(coeff));
            }
        }
        polys.push(next);
    }
    polys.pop().expect("nonempty")
}

/// Univariate polynomial over F_p, ascending coefficients, trimmed so the
/// leading coefficient is nonzero. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    /// Coefficients are reduced mod `p` and trailing zeros trimmed.
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { p, coeffs }
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        Self::new(p, coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect())
    }

    pub fn zero(p: u64) -> Self {
        ModPoly { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        ModPoly::new(p, vec![1])
    }

    /// The monomial `T`.
    pub fn x(p: u64) -> Self {
        ModPoly::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn constant_term(&self) -> u64 {
        self.coeffs.first().copied().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        self.coeffs.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
    }

    pub fn add(&self, rhs: &ModPoly) -> ModPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n).map(|i| add_mod(self.coeff(i), rhs.coeff(i), self.p)).collect();
        ModPoly::new(self.p, c)
    }

    pub fn sub(&self, rhs: &ModPoly) -> ModPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n).map(|i| sub_mod(self.coeff(i), rhs.coeff(i), self.p)).collect();
        ModPoly::new(self.p, c)
    }

    pub fn scale(&self, c: u64) -> ModPoly {
        let p = self.p;
        ModPoly::new(p, self.coeffs.iter().map(|&x| mul_mod(x, c, p)).collect())
    }

    pub fn mul(&self, rhs: &ModPoly) -> ModPoly {
        if self.is_zero() || rhs.is_zero() {
            return ModPoly::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(a, b, p), p);
            }
        }
        ModPoly::new(p, out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &ModPoly) -> (ModPoly, ModPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        if self.coeffs.len() < d.coeffs.len() {
            return (ModPoly::zero(p), self.clone());
        }
        let mut r = self.coeffs.clone();
        let dl = d.coeffs.len();
        let inv = inv_mod(d.leading(), p);
        let mut q = vec![0u64; r.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let c = mul_mod(r[k + dl - 1], inv, p);
            q[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &dj) in d.coeffs.iter().enumerate() {
                r[k + j] = sub_mod(r[k + j], mul_mod(c, dj, p), p);
            }
        }
        r.truncate(dl - 1);
        (ModPoly::new(p, q), ModPoly::new(p, r))
    }

    pub fn rem(&self, d: &ModPoly) -> ModPoly {
        self.div_rem(d).1
    }

    /// Exact quotient; debug-asserts a zero remainder.
    pub fn div_exact(&self, d: &ModPoly) -> ModPoly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn monic(&self) -> ModPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading(), self.p))
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, rhs: &ModPoly) -> ModPoly {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> ModPoly {
        let p = self.p;
        ModPoly::new(
            p,
            self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| mul_mod(c, i as u64 % p, p)).collect(),
        )
    }

    pub fn mul_mod(&self, rhs: &ModPoly, f: &ModPoly) -> ModPoly {
        self.mul(rhs).rem(f)
    }

    /// `self^e mod f`.
    pub fn pow_mod(&self, mut e: u64, f: &ModPoly) -> ModPoly {
        let mut base = self.rem(f);
        let mut acc = ModPoly::one(self.p).rem(f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, f);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, f);
            }
        }
        acc
    }

    /// `gcd(P, P') == 1`; for monic `P` this is equivalent to the
    /// discriminant being nonzero mod p.
    pub fn is_squarefree(&self) -> bool {
        if self.degree() == 0 {
            return true;
        }
        self.gcd(&self.derivative()).is_one()
    }

    /// Monic normalization of `T^deg * P(1/T)`; requires `P(0) != 0`.
    pub fn reciprocal(&self) -> ModPoly {
        assert!(self.constant_term() != 0, "reciprocal needs a nonzero constant term");
        let mut c = self.coeffs.clone();
        c.reverse();
        ModPoly::new(self.p, c).monic()
    }

    /// Parses whitespace-separated ascending coefficients.
    pub fn parse_text(p: u64, text: &str) -> crate::Result<ModPoly> {
        let coeffs = text
            .split_whitespace()
            .map(|t| {
                t.parse::<i128>()
                    .map(|v| v.rem_euclid(p as i128) as u64)
                    .map_err(|e| crate::Error::Parse(format!("bad coefficient {t:?}: {e}")))
            })
            .collect::<crate::Result<Vec<_>>>()?;
        Ok(ModPoly::new(p, coeffs))
    }

    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self.coeffs.iter().map(u64::to_string).collect();
        parts.join(" ")
    }
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

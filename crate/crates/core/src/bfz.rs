//! The embedding `φ` of the open cyclic locus of `Gr(k,n)` into upper
//! unitriangular matrices, the Grassmann permutation `w`, the unipotent cell
//! criterion, and the Grassmannian shadow of the BFZ twist.
//!
//! Row and column indices in the public API are 1-based, like subsets.

use num_traits::{One, Zero};

use crate::combinatorics::{coeff_subset, sigma_pow, KSubset};
use crate::error::{Error, Result};
use crate::exact::{determinant, GrassPoint, Matrix, Rational};

/// An `n × n` upper unitriangular rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnipotentMatrix {
    m: Matrix,
}

impl UnipotentMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::Dimension(format!(
                "{}x{} is not square",
                m.rows(),
                m.cols()
            )));
        }
        for r in 0..m.rows() {
            if !m.get(r, r).is_one() {
                return Err(Error::Dimension(format!(
                    "diagonal entry ({}, {}) is not 1",
                    r + 1,
                    r + 1
                )));
            }
            if (0..r).any(|c| !m.get(r, c).is_zero()) {
                return Err(Error::Dimension(format!(
                    "row {} has a nonzero entry below the diagonal",
                    r + 1
                )));
            }
        }
        Ok(Self { m })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            m: Matrix::identity(n),
        }
    }

    pub fn n(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    /// Entry `x_{ij}`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        self.m.get(i - 1, j - 1)
    }

    /// The minor on 1-based rows and columns, both taken in increasing order.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<Rational> {
        minor(&self.m, rows, cols)
    }
}

/// Minor of `m` on 1-based row and column sets, each sorted increasingly.
pub fn minor(m: &Matrix, rows: &[usize], cols: &[usize]) -> Result<Rational> {
    if rows.len() != cols.len() {
        return Err(Error::Dimension(format!(
            "{}x{} minor",
            rows.len(),
            cols.len()
        )));
    }
    let sorted = |v: &[usize], bound: usize| -> Result<Vec<usize>> {
        let mut s: Vec<usize> = v.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.len() != v.len() || s.first() == Some(&0) || s.last().is_some_and(|&x| x > bound) {
            return Err(Error::Range(format!(
                "index set {v:?} for a {}x{} matrix",
                m.rows(),
                m.cols()
            )));
        }
        Ok(s.into_iter().map(|x| x - 1).collect())
    };
    let r = sorted(rows, m.rows())?;
    let c = sorted(cols, m.cols())?;
    Ok(determinant(&m.select(&r, &c)))
}

/// The permutation `w(i) = i + k mod n` of `{1, …, n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrassmannPermutation {
    k: usize,
    n: usize,
}

impl GrassmannPermutation {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if n == 0 || k > n {
            return Err(Error::Range(format!(
                "Grassmann permutation for k={k}, n={n}"
            )));
        }
        Ok(Self { k, n })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn apply(&self, i: usize) -> usize {
        sigma_pow(i, -(self.k as i64), self.n)
    }

    pub fn inverse(&self, i: usize) -> usize {
        sigma_pow(i, self.k as i64, self.n)
    }

    /// The permutation matrix sending `e_j` to `e_{w(j)}`.
    pub fn matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n);
        for j in 1..=self.n {
            m.set(self.apply(j) - 1, j - 1, Rational::one());
        }
        m
    }
}

/// `φ(p)_{ij} = [𝒦_i − {i} ∪ {j}] / [𝒦_i]` when `i ≤ j + k − 1` and zero
/// otherwise. The numerator is the determinant of the columns of `𝒦_i` in
/// increasing order with `p_i` replaced in place by `p_j`.
pub fn phi(p: &GrassPoint) -> Result<UnipotentMatrix> {
    let (k, n) = (p.k(), p.n());
    let mut m = Matrix::zeros(n, n);
    for i in 1..=n {
        let coeff = coeff_subset(i, k, n)?;
        let denom = p.plucker(&coeff)?;
        if denom.is_zero() {
            return Err(Error::ZeroMinor(coeff.to_string()));
        }
        let cols: Vec<Vec<Rational>> = coeff.elements().iter().map(|&c| p.column(c)).collect();
        let slot = coeff
            .elements()
            .iter()
            .position(|&c| c == i)
            .expect("i lies in its coefficient subset");
        for j in 1..=n {
            if i > j + k - 1 {
                continue;
            }
            let mut c = cols.clone();
            c[slot] = p.column(j);
            let num = determinant(&Matrix::from_columns(&c)?);
            m.set(i - 1, j - 1, num / &denom);
        }
    }
    UnipotentMatrix::new(m)
}

/// Whether `x` lies in `B_− w B_−`, tested by the minor criterion:
/// `Δ_{[1,i], w⁻¹[1,i]}(x) ≠ 0` for `i < n`, and
/// `Δ_{[1,i], w⁻¹([1,i−1] ∪ {j})}(x) = 0` for `i < j` with `w⁻¹(i) < w⁻¹(j)`.
pub fn cell_membership(x: &UnipotentMatrix, w: &GrassmannPermutation) -> bool {
    let n = x.n();
    if w.n() != n {
        return false;
    }
    let rows = |i: usize| -> Vec<usize> { (1..=i).collect() };
    for i in 1..n {
        let cols: Vec<usize> = (1..=i).map(|a| w.inverse(a)).collect();
        if x.minor(&rows(i), &cols).map_or(true, |v| v.is_zero()) {
            return false;
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            if w.inverse(i) >= w.inverse(j) {
                continue;
            }
            let cols: Vec<usize> = (1..i).chain([j]).map(|a| w.inverse(a)).collect();
            if x.minor(&rows(i), &cols).map_or(true, |v| !v.is_zero()) {
                return false;
            }
        }
    }
    true
}

/// The point of `Gr(k,n)` spanned by the first `k` rows of `w · φ(p)^T`,
/// which is the image of `p` under the BFZ twist.
pub fn bfz_twist_point(p: &GrassPoint) -> Result<GrassPoint> {
    let (k, n) = (p.k(), p.n());
    let w = GrassmannPermutation::new(k, n)?;
    let full = w.matrix().mul(&phi(p)?.matrix().transpose())?;
    let rows: Vec<usize> = (0..k).collect();
    let cols: Vec<usize> = (0..n).collect();
    GrassPoint::new(full.select(&rows, &cols))
}

/// Right-hand side of the relation between the two twists:
/// `twist[I](p) · [𝒦_k](p) / ∏_{i ∈ I} [𝒦_i](p)`, given the twisted value.
pub fn bfz_relation_rhs(p: &GrassPoint, set: &KSubset, twisted: &Rational) -> Result<Rational> {
    let mut v = twisted * p.coefficient_minor(p.k())?;
    for &i in set.elements() {
        let c = p.coefficient_minor(i)?;
        if c.is_zero() {
            return Err(Error::ZeroMinor(coeff_subset(i, p.k(), p.n())?.to_string()));
        }
        v /= c;
    }
    Ok(v)
}

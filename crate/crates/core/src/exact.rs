//! Exact rational linear algebra and the twist on Grassmannian points.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde_json::Value;

use crate::combinatorics::{coeff_subset, sigma_pow, KSubset};
use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `"num/den"` with a positive denominator.
pub fn rational_to_string(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(a, b))
        }
        None => Ok(Rational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at 0-based `(r, c)`.
    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row(&self, r: usize) -> Vec<Rational> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn from_columns(cols: &[Vec<Rational>]) -> Result<Self> {
        let rows = cols.first().map_or(0, |c| c.len());
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::Dimension("ragged columns".into()));
            }
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(l, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// Submatrix on 0-based row and column index lists, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!(
                "determinant of {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(determinant(self))
    }

    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for c in 0..a.cols {
            let Some(p) = (rank..a.rows).find(|&r| !a.get(r, c).is_zero()) else {
                continue;
            };
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, rank * a.cols + j);
            }
            let piv = a.get(rank, c).clone();
            for r in rank + 1..a.rows {
                let f = a.get(r, c) / &piv;
                if f.is_zero() {
                    continue;
                }
                for j in c..a.cols {
                    let v = a.get(r, j) - &f * a.get(rank, j);
                    a.set(r, j, v);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Inverse by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.rows;
        if n != self.cols {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !a.get(r, c).is_zero())
                .ok_or(Error::RankDeficient(n))?;
            for j in 0..n {
                a.data.swap(p * n + j, c * n + j);
                inv.data.swap(p * n + j, c * n + j);
            }
            let piv = a.get(c, c).recip();
            for j in 0..n {
                a.set(c, j, a.get(c, j) * &piv);
                inv.set(c, j, inv.get(c, j) * &piv);
            }
            for r in 0..n {
                if r == c || a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c).clone();
                for j in 0..n {
                    a.set(r, j, a.get(r, j) - &f * a.get(c, j));
                    inv.set(r, j, inv.get(r, j) - &f * inv.get(c, j));
                }
            }
        }
        Ok(inv)
    }

    /// Rows of `"num/den"` strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|r| {
                    Value::Array(
                        self.row(r)
                            .iter()
                            .map(|x| Value::String(rational_to_string(x)))
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let rows = v
            .as_array()
            .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
        let parsed = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?
                    .iter()
                    .map(|x| match x {
                        Value::String(s) => parse_rational(s),
                        Value::Number(n) => parse_rational(&n.to_string()),
                        _ => Err(Error::Parse(
                            "matrix entry must be a string or integer".into(),
                        )),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Fraction-free (Bareiss) elimination on an integer matrix.
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Determinant of a square matrix: rows are cleared of denominators and the
/// resulting integer matrix goes through Bareiss elimination.
pub fn determinant(m: &Matrix) -> Rational {
    let n = m.rows;
    let mut scale = BigInt::one();
    let mut ints = Vec::with_capacity(n);
    for r in 0..n {
        let row = m.row(r);
        let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        ints.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
        scale *= l;
    }
    Rational::new(bareiss_determinant(ints), scale)
}

/// A full-rank `k × n` matrix standing for a point of `Gr(k,n)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GrassPoint {
    m: Matrix,
}

impl GrassPoint {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows == 0 || m.rows > m.cols {
            return Err(Error::Dimension(format!(
                "{}x{} is not a Grassmannian representative",
                m.rows, m.cols
            )));
        }
        if m.rank() != m.rows {
            return Err(Error::RankDeficient(m.rows));
        }
        Ok(Self { m })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(Matrix::from_i64(rows)?)
    }

    pub fn k(&self) -> usize {
        self.m.rows
    }

    pub fn n(&self) -> usize {
        self.m.cols
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    /// Column `p_i`, 1-based.
    pub fn column(&self, i: usize) -> Vec<Rational> {
        self.m.column(i - 1)
    }

    /// The minor on columns `I` taken in increasing order.
    pub fn plucker(&self, set: &KSubset) -> Result<Rational> {
        if set.k() != self.k() || set.n() != self.n() {
            return Err(Error::InvalidSubset(format!(
                "{set} for a {}x{} point",
                self.k(),
                self.n()
            )));
        }
        let rows: Vec<usize> = (0..self.k()).collect();
        let cols: Vec<usize> = set.elements().iter().map(|i| i - 1).collect();
        Ok(determinant(&self.m.select(&rows, &cols)))
    }

    pub fn coefficient_minor(&self, i: usize) -> Result<Rational> {
        self.plucker(&coeff_subset(i, self.k(), self.n())?)
    }

    /// All cyclic minors `[𝒦_i]` nonzero.
    pub fn is_generic(&self) -> bool {
        (1..=self.n()).all(|i| {
            self.coefficient_minor(i)
                .map(|v| !v.is_zero())
                .unwrap_or(false)
        })
    }

    /// `g · p` for `g ∈ GL_k`.
    pub fn left_mul(&self, g: &Matrix) -> Result<Self> {
        Self::new(g.mul(&self.m)?)
    }
}

/// Memoised Plücker coordinates of a fixed point.
pub struct PluckerCache<'a> {
    pt: &'a GrassPoint,
    memo: HashMap<KSubset, Rational>,
}

impl<'a> PluckerCache<'a> {
    pub fn new(pt: &'a GrassPoint) -> Self {
        Self {
            pt,
            memo: HashMap::new(),
        }
    }

    pub fn get(&mut self, set: &KSubset) -> Result<Rational> {
        if let Some(v) = self.memo.get(set) {
            return Ok(v.clone());
        }
        let v = self.pt.plucker(set)?;
        self.memo.insert(set.clone(), v.clone());
        Ok(v)
    }
}

/// Generalized cross product of `k − 1` vectors of length `k`: the vector `w`
/// with `⟨w, v⟩ = det(v_1, …, v_{k−1}, v)` for all `v`.
pub fn cross(vs: &[Vec<Rational>], k: usize) -> Result<Vec<Rational>> {
    if vs.len() + 1 != k || vs.iter().any(|v| v.len() != k) {
        return Err(Error::Dimension(format!(
            "cross product needs {} vectors of length {k}",
            k.saturating_sub(1)
        )));
    }
    if k == 1 {
        return Ok(vec![Rational::one()]);
    }
    let base = Matrix::from_columns(vs)?;
    let cols: Vec<usize> = (0..k - 1).collect();
    Ok((0..k)
        .map(|r| {
            let rows: Vec<usize> = (0..k).filter(|&x| x != r).collect();
            let minor = determinant(&base.select(&rows, &cols));
            if (r + k - 1) % 2 == 0 {
                minor
            } else {
                -minor
            }
        })
        .collect())
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// `ε_i = (−1)^{i(k−i)}` for `i ≤ k − 1`, and `1` otherwise.
pub fn epsilon(i: usize, k: usize) -> i64 {
    if i < k && (i * (k - i)) % 2 == 1 {
        -1
    } else {
        1
    }
}

/// The twist: column `i` is `ε_i · cross(p_{σ^{k−1}(i)}, …, p_{σ(i)})`.
pub fn twist_matrix(p: &GrassPoint) -> Result<GrassPoint> {
    let (k, n) = (p.k(), p.n());
    let mut cols = Vec::with_capacity(n);
    for i in 1..=n {
        let vs: Vec<Vec<Rational>> = (1..k)
            .rev()
            .map(|r| p.column(sigma_pow(i, r as i64, n)))
            .collect();
        let mut t = cross(&vs, k)?;
        if epsilon(i, k) < 0 {
            t.iter_mut().for_each(|x| *x = -x.clone());
        }
        cols.push(t);
    }
    GrassPoint::new(Matrix::from_columns(&cols)?)
}

pub fn twist_plucker(p: &GrassPoint, set: &KSubset) -> Result<Rational> {
    twist_matrix(p)?.plucker(set)
}

/// `h_i = ε_{σ(i)} ε_i [𝒦_{σ²(i)}] ⋯ [𝒦_{σ^{k−1}(i)}]` for `i = 1..n`.
pub fn double_twist_diagonal(p: &GrassPoint) -> Result<Vec<Rational>> {
    let (k, n) = (p.k(), p.n());
    if k < 2 {
        return Err(Error::Range("the double twist diagonal needs k > 1".into()));
    }
    (1..=n)
        .map(|i| {
            let mut h = rat(epsilon(sigma_pow(i, 1, n), k) * epsilon(i, k));
            for s in 2..k {
                h *= p.coefficient_minor(sigma_pow(i, s as i64, n))?;
            }
            Ok(h)
        })
        .collect()
}

/// `(−1)^{k−1}` times the matrix whose column `i` is `h_i · p_{σ^k(i)}`; this
/// is what the twist applied twice should produce.
pub fn double_twist_prediction(p: &GrassPoint) -> Result<Matrix> {
    let (k, n) = (p.k(), p.n());
    let h = double_twist_diagonal(p)?;
    let sign = if (k - 1) % 2 == 0 { rat(1) } else { rat(-1) };
    let cols: Vec<Vec<Rational>> = (1..=n)
        .map(|i| {
            let f = &sign * &h[i - 1];
            p.column(sigma_pow(i, k as i64, n))
                .iter()
                .map(|x| x * &f)
                .collect()
        })
        .collect();
    Matrix::from_columns(&cols)
}

/// `ρ(p)_{ij} = p_{i,σ(j)}`.
pub fn rho(p: &GrassPoint) -> GrassPoint {
    let n = p.n();
    let cols: Vec<Vec<Rational>> = (1..=n).map(|j| p.column(sigma_pow(j, 1, n))).collect();
    GrassPoint {
        m: Matrix::from_columns(&cols).expect("columns of a valid point"),
    }
}

/// Integer entries uniform in `[−9, 9]`, resampled until the point has full
/// rank and every cyclic minor is nonzero.
pub fn random_generic_point<R: Rng + ?Sized>(k: usize, n: usize, rng: &mut R) -> GrassPoint {
    loop {
        let rows: Vec<Vec<i64>> = (0..k)
            .map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect())
            .collect();
        if let Ok(p) = GrassPoint::from_i64(&rows) {
            if p.is_generic() {
                return p;
            }
        }
    }
}

/// Like [`random_generic_point`], but resampled until every Plücker
/// coordinate is nonzero, so that Laurent polynomials in face labels can be
/// evaluated at the point.
pub fn random_nonvanishing_point<R: Rng + ?Sized>(k: usize, n: usize, rng: &mut R) -> GrassPoint {
    loop {
        let p = random_generic_point(k, n, rng);
        if KSubset::all(k, n)
            .iter()
            .all(|s| p.plucker(s).map(|v| !v.is_zero()).unwrap_or(false))
        {
            return p;
        }
    }
}

/// A random invertible `k × k` integer matrix with entries in `[−5, 5]`.
pub fn random_invertible<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Matrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..k)
            .map(|_| (0..k).map(|_| rng.gen_range(-5..=5)).collect())
            .collect();
        let m = Matrix::from_i64(&rows).expect("square");
        if !determinant(&m).is_zero() {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s(n: usize, v: &[usize]) -> KSubset {
        KSubset::new(n, v.iter().copied()).unwrap()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(&Matrix::identity(3)), rat(1));
        assert_eq!(
            determinant(&Matrix::from_i64(&[vec![0, 1], vec![1, 0]]).unwrap()),
            rat(-1)
        );
        assert_eq!(
            determinant(&Matrix::from_i64(&[vec![1, 2], vec![3, 4]]).unwrap()),
            rat(-2)
        );
        assert_eq!(determinant(&Matrix::zeros(0, 0)), rat(1));
        let half = Matrix::from_rows(vec![
            vec![Rational::new(1.into(), 2.into()), rat(1)],
            vec![rat(1), Rational::new(1.into(), 3.into())],
        ])
        .unwrap();
        assert_eq!(determinant(&half), Rational::new((-5).into(), 6.into()));
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        fn cofactor(m: &Matrix) -> Rational {
            let n = m.rows();
            if n == 0 {
                return rat(1);
            }
            (0..n).fold(rat(0), |acc, c| {
                let rows: Vec<usize> = (1..n).collect();
                let cols: Vec<usize> = (0..n).filter(|&x| x != c).collect();
                let term = m.get(0, c) * cofactor(&m.select(&rows, &cols));
                if c % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            })
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=5 {
            for _ in 0..20 {
                let rows: Vec<Vec<i64>> = (0..n)
                    .map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect())
                    .collect();
                let m = Matrix::from_i64(&rows).unwrap();
                assert_eq!(determinant(&m), cofactor(&m));
            }
        }
    }

    fn example_point() -> GrassPoint {
        GrassPoint::from_i64(&[vec![1, 0, 1, 0], vec![0, 1, 1, 2]]).unwrap()
    }

    #[test]
    fn plucker_examples() {
        let p = example_point();
        assert_eq!(p.plucker(&s(4, &[1, 2])).unwrap(), rat(1));
        assert_eq!(p.plucker(&s(4, &[1, 4])).unwrap(), rat(2));
        assert!(p.plucker(&s(4, &[1])).is_err());
    }

    #[test]
    fn cross_products() {
        let e = |i: usize| (0..3).map(|j| rat((i == j) as i64)).collect::<Vec<_>>();
        assert_eq!(cross(&[e(0), e(1)], 3).unwrap(), e(2));
        assert_eq!(
            cross(&[vec![rat(3), rat(5)]], 2).unwrap(),
            vec![rat(-5), rat(3)]
        );
        assert_eq!(cross(&[], 1).unwrap(), vec![rat(1)]);
        assert!(cross(&[e(0)], 3).is_err());
    }

    #[test]
    fn twist_of_two_by_four_example() {
        let t = twist_matrix(&example_point()).unwrap();
        let want = Matrix::from_i64(&[vec![2, 0, -1, -1], vec![0, 1, 0, 1]]).unwrap();
        assert_eq!(t.matrix(), &want);
        assert_eq!(
            twist_plucker(&example_point(), &s(4, &[1, 2])).unwrap(),
            rat(2)
        );
    }

    #[test]
    fn twist_with_k_one_is_all_ones() {
        let p = GrassPoint::from_i64(&[vec![3, -1, 4, 1, 5]]).unwrap();
        let t = twist_matrix(&p).unwrap();
        assert_eq!(t.matrix(), &Matrix::from_i64(&[vec![1; 5]]).unwrap());
    }

    #[test]
    fn rho_has_period_n_and_sign_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_generic_point(3, 6, &mut rng);
        let mut q = p.clone();
        for _ in 0..6 {
            q = rho(&q);
        }
        assert_eq!(q, p);
        let r = rho(&p);
        for set in KSubset::all(3, 6) {
            let lhs = r.plucker(&set).unwrap();
            let rhs = p.plucker(&set.sigma_shift(1)).unwrap();
            // with k = 3 the sign (−1)^{k−1} is +1 regardless of 1 ∈ I
            assert_eq!(lhs, rhs);
        }
        let p = random_generic_point(2, 5, &mut rng);
        let r = rho(&p);
        for set in KSubset::all(2, 5) {
            let rhs = p.plucker(&set.sigma_shift(1)).unwrap();
            let want = if set.contains(1) { -rhs } else { rhs };
            assert_eq!(r.plucker(&set).unwrap(), want);
        }
    }

    #[test]
    fn double_twist_diagonal_for_k_two_is_a_sign() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = random_generic_point(2, 5, &mut rng);
        let h = double_twist_diagonal(&p).unwrap();
        for (idx, x) in h.iter().enumerate() {
            let i = idx + 1;
            assert_eq!(*x, rat(epsilon(sigma_pow(i, 1, 5), 2) * epsilon(i, 2)));
        }
        assert!(double_twist_diagonal(&GrassPoint::from_i64(&[vec![1, 2, 3]]).unwrap()).is_err());
    }

    #[test]
    fn double_twist_entrywise() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for (k, n) in [(2, 5), (3, 6), (3, 7), (4, 8), (5, 8)] {
            let p = random_generic_point(k, n, &mut rng);
            let tt = twist_matrix(&twist_matrix(&p).unwrap()).unwrap();
            assert_eq!(
                tt.matrix(),
                &double_twist_prediction(&p).unwrap(),
                "k={k} n={n}"
            );
        }
    }

    #[test]
    fn double_twist_plucker_identity() {
        use crate::combinatorics::{double_twist_formula, iterated_double_twist};
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for (k, n) in [(2, 4), (2, 6), (3, 6), (3, 8), (4, 8), (6, 8)] {
            let p = random_generic_point(k, n, &mut rng);
            let t2 = twist_matrix(&twist_matrix(&p).unwrap()).unwrap();
            let t4 = twist_matrix(&twist_matrix(&t2).unwrap()).unwrap();
            for set in KSubset::all(k, n) {
                assert_eq!(
                    t2.plucker(&set).unwrap(),
                    double_twist_formula(&set).unwrap().evaluate(&p).unwrap()
                );
                assert_eq!(
                    t4.plucker(&set).unwrap(),
                    iterated_double_twist(&set, 2)
                        .unwrap()
                        .evaluate(&p)
                        .unwrap()
                );
            }
        }
    }

    #[test]
    fn twist_is_periodic_for_k_two() {
        use crate::combinatorics::periodicity_coefficient;
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for n in 4..=7 {
            let p = random_generic_point(2, n, &mut rng);
            let mut q = p.clone();
            for _ in 0..2 * n {
                q = twist_matrix(&q).unwrap();
            }
            for set in KSubset::all(2, n) {
                let c = periodicity_coefficient(&set).unwrap();
                assert_eq!(
                    q.plucker(&set).unwrap(),
                    p.plucker(&set).unwrap() * c.evaluate(&p).unwrap()
                );
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let m =
            Matrix::from_rows(vec![vec![Rational::new(3.into(), (-4).into()), rat(2)]]).unwrap();
        let v = m.to_json();
        assert_eq!(v, serde_json::json!([["-3/4", "2/1"]]));
        assert_eq!(Matrix::from_json(&v).unwrap(), m);
    }

    #[test]
    fn inverse_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = random_invertible(4, &mut rng);
        assert_eq!(g.mul(&g.inverse().unwrap()).unwrap(), Matrix::identity(4));
    }
}

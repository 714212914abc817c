//! Subsets of `{1, …, n}` and the cyclic combinatorics around them.
//!
//! Indices are 1-based throughout, matching the usual labelling of boundary
//! vertices and matrix columns. The cyclic shift `σ` sends `i` to `i − 1`
//! (with `1 ↦ n`).

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::symbolic::Monomial;

/// `σ^m(i)` on `{1, …, n}`; negative `m` shifts upwards.
pub fn sigma_pow(i: usize, m: i64, n: usize) -> usize {
    let n_i = n as i64;
    ((i as i64 - 1 - m).rem_euclid(n_i) + 1) as usize
}

/// A k-element subset of `{1, …, n}`, stored sorted.
///
/// The total order is colexicographic (compare largest elements first), which
/// is the order used for symbol keys in polynomials.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct KSubset {
    n: usize,
    elems: Vec<usize>,
}

impl KSubset {
    /// Builds a subset from arbitrary-order elements; duplicates and
    /// out-of-range values are rejected.
    pub fn new(n: usize, elems: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v: Vec<usize> = elems.into_iter().collect();
        v.sort_unstable();
        for w in v.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidSubset(format!("repeated element {}", w[0])));
            }
        }
        if let Some(&x) = v.iter().find(|&&x| x == 0 || x > n) {
            return Err(Error::InvalidSubset(format!("element {x} outside 1..={n}")));
        }
        Ok(Self { n, elems: v })
    }

    /// Parses `"2,5,6"`, `"2 5 6"` or, when every element is a single digit,
    /// the compact form `"256"`.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parts: Vec<&str> = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        let nums: Vec<usize> = if parts.len() == 1 && n <= 9 && parts[0].len() > 1 {
            parts[0]
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::Parse(format!("bad subset {s:?}")))?
        } else {
            parts
                .iter()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse(format!("bad subset {s:?}: {e}")))?
        };
        Self::new(n, nums)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elems
    }

    pub fn contains(&self, i: usize) -> bool {
        self.elems.binary_search(&i).is_ok()
    }

    /// Applies `σ^m` elementwise.
    pub fn sigma_shift(&self, m: i64) -> Self {
        let mut v: Vec<usize> = self
            .elems
            .iter()
            .map(|&i| sigma_pow(i, m, self.n))
            .collect();
        v.sort_unstable();
        Self {
            n: self.n,
            elems: v,
        }
    }

    pub fn complement(&self) -> Self {
        let elems = (1..=self.n).filter(|i| !self.contains(*i)).collect();
        Self { n: self.n, elems }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let elems = self
            .elems
            .iter()
            .copied()
            .filter(|i| other.contains(*i))
            .collect();
        Self { n: self.n, elems }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut elems: Vec<usize> = self
            .elems
            .iter()
            .chain(other.elems.iter())
            .copied()
            .collect();
        elems.sort_unstable();
        elems.dedup();
        Self { n: self.n, elems }
    }

    pub fn difference(&self, other: &Self) -> Self {
        let elems = self
            .elems
            .iter()
            .copied()
            .filter(|i| !other.contains(*i))
            .collect();
        Self { n: self.n, elems }
    }

    /// Maximal cyclic runs as `(last element, length)`, sorted by last element.
    ///
    /// A run `{σ^{len−1}(e), …, σ(e), e}` ends at `e`, meaning `e + 1` (cyclically)
    /// is not in the set. The full set `{1..n}` is reported as one run ending at `n`.
    pub fn cyclic_runs(&self) -> Vec<(usize, usize)> {
        if self.elems.len() == self.n {
            return if self.n == 0 {
                vec![]
            } else {
                vec![(self.n, self.n)]
            };
        }
        let mut runs = Vec::new();
        for &e in &self.elems {
            if !self.contains(sigma_pow(e, -1, self.n)) {
                let mut len = 1;
                while self.contains(sigma_pow(e, len as i64, self.n)) {
                    len += 1;
                }
                runs.push((e, len));
            }
        }
        runs
    }

    pub fn is_cyclic_interval(&self) -> bool {
        self.cyclic_runs().len() == 1
    }

    /// All k-subsets of `{1..n}` in lexicographic order.
    pub fn all(k: usize, n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(start: usize, k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<KSubset>) {
            if cur.len() == k {
                out.push(KSubset {
                    n,
                    elems: cur.clone(),
                });
                return;
            }
            for x in start..=n {
                if n - x + 1 < k - cur.len() {
                    break;
                }
                cur.push(x);
                rec(x + 1, k, n, cur, out);
                cur.pop();
            }
        }
        rec(1, k, n, &mut cur, &mut out);
        out
    }
}

impl Ord for KSubset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.elems.len().cmp(&other.elems.len()))
            .then_with(|| self.elems.iter().rev().cmp(other.elems.iter().rev()))
    }
}

impl PartialOrd for KSubset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for KSubset {
    /// `[256]` when every index is a single digit, `[2 5 16]` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n <= 9 { "" } else { " " };
        let body: Vec<String> = self.elems.iter().map(|e| e.to_string()).collect();
        write!(f, "[{}]", body.join(sep))
    }
}

impl Serialize for KSubset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elems.serialize(s)
    }
}

/// The coefficient subset `𝒦_i = {σ^{k−1}(i), …, σ(i), i}`.
pub fn coeff_subset(i: usize, k: usize, n: usize) -> Result<KSubset> {
    if i == 0 || i > n || k > n {
        return Err(Error::Range(format!(
            "coefficient index {i} for k={k}, n={n}"
        )));
    }
    KSubset::new(n, (0..k).map(|r| sigma_pow(i, r as i64, n)))
}

/// `I = {σ^p(i), …, i} ∪ {σ^q(j), …, j}` with `p + q + 2 = k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwoIntervalDecomposition {
    pub i: usize,
    pub p: usize,
    pub j: usize,
    pub q: usize,
}

impl TwoIntervalDecomposition {
    pub fn reconstruct(&self, n: usize) -> Result<KSubset> {
        let first = (0..=self.p).map(|r| sigma_pow(self.i, r as i64, n));
        let second = (0..=self.q).map(|r| sigma_pow(self.j, r as i64, n));
        KSubset::new(n, first.chain(second))
    }

    /// Every way of writing the cyclic interval ending at `m` as an initial
    /// piece followed by a terminal piece, both nonempty.
    pub fn interval_splits(m: usize, k: usize, n: usize) -> Vec<Self> {
        (1..k)
            .map(|s| Self {
                i: sigma_pow(m, s as i64, n),
                p: k - s - 1,
                j: m,
                q: s - 1,
            })
            .collect()
    }
}

/// Splits `I` into at most two cyclic intervals.
///
/// Two runs are ordered by their last element. A single cyclic interval is
/// split into all-but-the-last element followed by the last element.
pub fn two_interval_decompose(set: &KSubset) -> Option<TwoIntervalDecomposition> {
    let (k, n) = (set.k(), set.n());
    if k < 2 {
        return None;
    }
    match set.cyclic_runs().as_slice() {
        [(m, _)] => Some(TwoIntervalDecomposition {
            i: sigma_pow(*m, 1, n),
            p: k - 2,
            j: *m,
            q: 0,
        }),
        [(i, l1), (j, l2)] => Some(TwoIntervalDecomposition {
            i: *i,
            p: l1 - 1,
            j: *j,
            q: l2 - 1,
        }),
        _ => None,
    }
}

/// The twisted Plücker coordinate of a two-interval subset as a monomial:
/// `[J] · ∏_{r=1}^{p} [𝒦_{σ^r(i)}] · ∏_{r=1}^{q} [𝒦_{σ^r(j)}]` where
/// `J = {σ^{p+q+1}(i), …, σ^{p+1}(i)} ∪ {σ^{p+q+1}(j), …, σ^{q+1}(j)}`.
pub fn twist_formula_from(d: &TwoIntervalDecomposition, k: usize, n: usize) -> Result<Monomial> {
    let TwoIntervalDecomposition { i, p, j, q } = *d;
    if p + q + 2 != k {
        return Err(Error::Range(format!(
            "p + q + 2 = {} differs from k = {k}",
            p + q + 2
        )));
    }
    let top = (p + q + 1) as i64;
    let first = ((p + 1) as i64..=top).map(|t| sigma_pow(i, t, n));
    let second = ((q + 1) as i64..=top).map(|t| sigma_pow(j, t, n));
    let jset = KSubset::new(n, first.chain(second))?;
    let mut m = Monomial::symbol(jset);
    for r in 1..=p {
        m = m.mul(&Monomial::symbol(coeff_subset(
            sigma_pow(i, r as i64, n),
            k,
            n,
        )?));
    }
    for r in 1..=q {
        m = m.mul(&Monomial::symbol(coeff_subset(
            sigma_pow(j, r as i64, n),
            k,
            n,
        )?));
    }
    Ok(m)
}

/// [`twist_formula_from`] applied to the canonical decomposition of `I`.
pub fn twist_formula_two_interval(set: &KSubset) -> Result<Monomial> {
    let d = two_interval_decompose(set).ok_or_else(|| {
        Error::InvalidSubset(format!("{set} is not a union of two cyclic intervals"))
    })?;
    twist_formula_from(&d, set.k(), set.n())
}

/// The twist applied twice to `[I]`, for `k > 1`:
/// `[σ^k(I)] · ∏_{i ∈ I} [𝒦_{σ²(i)}] ⋯ [𝒦_{σ^{k−1}(i)}]`.
pub fn double_twist_formula(set: &KSubset) -> Result<Monomial> {
    let (k, n) = (set.k(), set.n());
    if k < 2 {
        return Err(Error::Range("the double twist formula needs k > 1".into()));
    }
    let mut m = Monomial::symbol(set.sigma_shift(k as i64));
    for &i in set.elements() {
        for s in 2..k {
            m = m.mul(&Monomial::symbol(coeff_subset(
                sigma_pow(i, s as i64, n),
                k,
                n,
            )?));
        }
    }
    Ok(m)
}

/// The twist applied `2m` times to `[I]`, obtained by substituting
/// [`double_twist_formula`] into every factor `m` times over.
pub fn iterated_double_twist(set: &KSubset, m: usize) -> Result<Monomial> {
    let mut acc = Monomial::symbol(set.clone());
    for _ in 0..m {
        let mut parts = Vec::new();
        for (s, &e) in acc.exponents() {
            for (t, &x) in double_twist_formula(s)?.exponents() {
                parts.push((t.clone(), e * x));
            }
        }
        acc = Monomial::from_parts(acc.coefficient().clone(), parts);
    }
    Ok(acc)
}

/// The monomial `C` with `twist^{2n}[I] = [I] · C`. Every factor of `C` is a
/// coefficient minor `[𝒦_i]`, so the twist is periodic modulo coefficients.
pub fn periodicity_coefficient(set: &KSubset) -> Result<Monomial> {
    let c = iterated_double_twist(set, set.n())?.div(&Monomial::symbol(set.clone()))?;
    if let Some(bad) = c.exponents().keys().find(|s| !s.is_cyclic_interval()) {
        return Err(Error::InvalidSubset(format!(
            "{bad} survives {} double twists of {set}",
            set.n()
        )));
    }
    Ok(c)
}

/// The four indices `a < b < c < d` and the common part `J` of a short
/// Plücker relation `[Jac][Jbd] = [Jab][Jcd] + [Jad][Jbc]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortPlucker {
    pub j: KSubset,
    pub abcd: [usize; 4],
}

impl ShortPlucker {
    pub fn new(j: KSubset, abcd: [usize; 4]) -> Result<Self> {
        let [a, b, c, d] = abcd;
        if !(a < b && b < c && c < d) || abcd.iter().any(|&x| x == 0 || x > j.n() || j.contains(x))
        {
            return Err(Error::InvalidSubset(format!(
                "indices {abcd:?} invalid for J = {j}"
            )));
        }
        Ok(Self { j, abcd })
    }

    fn with(&self, x: usize, y: usize) -> KSubset {
        self.j.union(&KSubset {
            n: self.j.n(),
            elems: vec![x.min(y), x.max(y)],
        })
    }

    /// `(Jac, Jbd, Jab, Jcd, Jad, Jbc)`.
    pub fn subsets(&self) -> [KSubset; 6] {
        let [a, b, c, d] = self.abcd;
        [
            self.with(a, c),
            self.with(b, d),
            self.with(a, b),
            self.with(c, d),
            self.with(a, d),
            self.with(b, c),
        ]
    }
}

/// The label replacing `center` after a quadrilateral move.
///
/// `neighbors` are the four faces around the centre in cyclic order; with
/// centre `Jac` and neighbours `Jab, Jbc, Jcd, Jad` the result is
/// `Jbd = (N1 ∩ N3) ∪ ((N1 ∪ N3) \ center)`.
pub fn quad_target(center: &KSubset, neighbors: &[KSubset; 4]) -> Result<KSubset> {
    let k = center.k();
    let bad = |why: &str| {
        Error::InvalidSubset(format!(
            "not a short Plücker pattern around {center}: {why}"
        ))
    };
    if neighbors.iter().any(|x| x.k() != k || x.n() != center.n()) {
        return Err(bad("size mismatch"));
    }
    if k < 2 {
        return Err(bad("k < 2"));
    }
    for x in neighbors {
        if center.intersection(x).k() != k - 1 {
            return Err(bad("neighbour does not differ by one exchange"));
        }
    }
    let j13 = neighbors[0].intersection(&neighbors[2]);
    let j24 = neighbors[1].intersection(&neighbors[3]);
    if j13 != j24 || j13.k() != k - 2 || center.intersection(&j13) != j13 {
        return Err(bad(
            "opposite neighbours do not share a common (k-2)-subset",
        ));
    }
    let ac = center.difference(&j13);
    let bd13 = neighbors[0].union(&neighbors[2]).difference(center);
    let bd24 = neighbors[1].union(&neighbors[3]).difference(center);
    if bd13 != bd24 || bd13.k() != 2 {
        return Err(bad("opposite pairs disagree"));
    }
    let (a, c) = (ac.elements()[0], ac.elements()[1]);
    let (b, d) = (bd13.elements()[0], bd13.elements()[1]);
    let interleaved = (a < b && b < c && c < d) || (b < a && a < d && d < c);
    if !interleaved {
        return Err(bad("centre indices do not interleave with the others"));
    }
    Ok(j13.union(&bd13))
}

/// `M_{k,n}(i,j) = {1..i} ∪ {i+j+1..j+k}`, the label of face `(i,j)` of the
/// regular diagram.
pub fn regular_label(k: usize, n: usize, i: usize, j: usize) -> Result<KSubset> {
    let ok = (i == 0 && j == 0) || (i < k && (1..=n.saturating_sub(k)).contains(&j));
    if !ok || k == 0 || k >= n {
        return Err(Error::Range(format!(
            "regular label ({i},{j}) for k={k}, n={n}"
        )));
    }
    KSubset::new(n, (1..=i).chain(i + j + 1..=j + k))
}

/// `M*_{n−k,n}(j,i) = {j+1..i+j} ∪ {i+n−k+1..n}`, the label of face `(j,i)`
/// of the dual regular diagram for `Gr(k,n)`.
pub fn regular_star_label(k: usize, n: usize, j: usize, i: usize) -> Result<KSubset> {
    let ok = (i == 0 && j == 0) || (j < n.saturating_sub(k) && (1..=k).contains(&i));
    if !ok || k == 0 || k >= n {
        return Err(Error::Range(format!(
            "dual regular label ({j},{i}) for k={k}, n={n}"
        )));
    }
    KSubset::new(n, (j + 1..=i + j).chain(i + n - k + 1..=n))
}

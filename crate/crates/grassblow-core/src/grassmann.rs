//! Plücker index combinatorics, minors, the multi-projective map and strata.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::rational::{pow, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Params {
    pub s: usize,
    pub p: usize,
    pub n: usize,
}

impl Params {
    pub fn new(s: usize, p: usize, n: usize) -> Result<Self> {
        if p == 0 || p >= n || s == 0 || s >= n {
            return Err(Error::Param(format!(
                "need 0 < p < n and 0 < s < n, got (s,p,n) = ({s},{p},{n})"
            )));
        }
        Ok(Params { s, p, n })
    }

    /// r = min{s, n-s, p, n-p}
    pub fn r(&self) -> usize {
        self.s.min(self.n - self.s).min(self.p).min(self.n - self.p)
    }

    pub fn is_normalized(&self) -> bool {
        2 * self.p <= self.n && self.n <= 2 * self.s
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NormalizationRequired {
                s: self.s,
                p: self.p,
                n: self.n,
            })
        }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.s, self.p, self.n)
    }
}

/// Column-order convention for minors. `Listed` takes columns in the stored
/// (decreasing) order; `Ascending` sorts them first. They differ by
/// (-1)^{p(p-1)/2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignConvention {
    #[default]
    Listed,
    Ascending,
}

/// Strictly decreasing tuple of column labels in 1..n.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexTuple(Vec<usize>);

impl IndexTuple {
    pub fn new(entries: Vec<usize>, n: usize) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Param("empty index tuple".into()));
        }
        if entries.iter().any(|&e| e == 0 || e > n) {
            return Err(Error::Param(format!("index entries {entries:?} outside 1..{n}")));
        }
        if entries.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Param(format!("index {entries:?} is not strictly decreasing")));
        }
        Ok(IndexTuple(entries))
    }

    /// Builds a tuple from any set of distinct labels, sorting them decreasingly.
    pub fn from_set(mut entries: Vec<usize>, n: usize) -> Result<Self> {
        entries.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(entries, n)
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: usize) -> bool {
        self.0.contains(&c)
    }

    pub fn block(&self, s: usize) -> usize {
        self.0.iter().filter(|&&e| e > s).count()
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut out: usize = 1;
    for i in 0..k {
        out = out * (n - i) / (i + 1);
    }
    out
}

/// All p-subsets of 1..n as decreasing tuples, sorted lexicographically.
pub fn enumerate_plucker_indices(p: usize, n: usize) -> Result<Vec<IndexTuple>> {
    if p == 0 || p > n {
        return Err(Error::Param(format!("need 0 < p <= n, got p={p}, n={n}")));
    }
    let mut out = Vec::with_capacity(binomial(n, p));
    let mut current: Vec<usize> = Vec::with_capacity(p);
    fn rec(start: usize, n: usize, p: usize, current: &mut Vec<usize>, out: &mut Vec<IndexTuple>) {
        if current.len() == p {
            let mut e = current.clone();
            e.reverse();
            out.push(IndexTuple(e));
            return;
        }
        for c in start..=n {
            current.push(c);
            rec(c + 1, n, p, current, out);
            current.pop();
        }
    }
    rec(1, n, p, &mut current, &mut out);
    out.sort();
    Ok(out)
}

pub fn block_of_index(index: &IndexTuple, s: usize) -> usize {
    index.block(s)
}

/// |𝕀^k| for k = 0..=p.
pub fn block_sizes(params: &Params) -> Vec<usize> {
    (0..=params.p)
        .map(|k| binomial(params.s, params.p - k) * binomial(params.n - params.s, k))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialKind {
    Plain,
    Star,
    SwapLow,
    SwapHigh,
}

/// I_k = (s+k, ..., s-p+k+1).
pub fn plain_index(params: &Params, k: usize) -> Result<IndexTuple> {
    let Params { s, p, n } = *params;
    if k > p || s + k > n || s + k < p {
        return Err(Error::Param(format!("plain index k={k} out of range for {params}")));
    }
    IndexTuple::new((s + k + 1 - p..=s + k).rev().collect(), n)
}

/// I_k with μ removed and ν inserted, re-sorted.
fn replace_in(base: &IndexTuple, mu: usize, nu: usize, n: usize) -> Result<IndexTuple> {
    if !base.contains(mu) || base.contains(nu) {
        return Err(Error::Param(format!("cannot replace {mu} by {nu} in {base}")));
    }
    let entries: Vec<usize> = base
        .entries()
        .iter()
        .map(|&e| if e == mu { nu } else { e })
        .collect();
    IndexTuple::from_set(entries, n)
}

pub fn special_index(
    kind: SpecialKind,
    params: &Params,
    k: usize,
    mu: usize,
    nu: usize,
) -> Result<IndexTuple> {
    let Params { s, p, n } = *params;
    match kind {
        SpecialKind::Plain => plain_index(params, k),
        SpecialKind::Star => {
            if k == 0 || k >= p || s + k + 1 > n || s + k <= p {
                return Err(Error::Param(format!("star index k={k} out of range for {params}")));
            }
            // (s+k+1, s+k-1, ..., s-p+k+2, s-p+k)
            let mut e = vec![s + k + 1];
            e.extend((s + k + 2 - p..=s + k - 1).rev());
            e.push(s + k - p);
            IndexTuple::new(e, n)
        }
        SpecialKind::SwapLow => {
            let lo = (s + k + 1).checked_sub(p).unwrap_or(0);
            if k > p || mu < lo.max(1) || mu > s || nu < 1 || nu + p > s + k {
                return Err(Error::Param(format!(
                    "swap_low (k,mu,nu)=({k},{mu},{nu}) out of range for {params}"
                )));
            }
            replace_in(&plain_index(params, k)?, mu, nu, n)
        }
        SpecialKind::SwapHigh => {
            if k > p || mu < s + 1 || mu > s + k || nu < s + k + 1 || nu > n {
                return Err(Error::Param(format!(
                    "swap_high (k,mu,nu)=({k},{mu},{nu}) out of range for {params}"
                )));
            }
            replace_in(&plain_index(params, k)?, mu, nu, n)
        }
    }
}

/// Like `special_index` but for any μ in I_k and ν outside it; used by chart recovery.
pub fn swapped_index(params: &Params, k: usize, mu: usize, nu: usize) -> Result<IndexTuple> {
    replace_in(&plain_index(params, k)?, mu, nu, params.n)
}

pub fn plucker_minor(m: &ExactMatrix, index: &IndexTuple, conv: SignConvention) -> Result<Q> {
    if index.len() != m.rows() || index.entries().iter().any(|&c| c > m.cols()) {
        return Err(Error::Param(format!(
            "index {index} incompatible with a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let mut cols: Vec<usize> = index.entries().iter().map(|c| c - 1).collect();
    if conv == SignConvention::Ascending {
        cols.sort_unstable();
    }
    m.select_columns(&cols).determinant()
}

/// Full Plücker vector in `enumerate_plucker_indices` order.
pub fn plucker_vector(m: &ExactMatrix, conv: SignConvention) -> Result<Vec<(IndexTuple, Q)>> {
    enumerate_plucker_indices(m.rows(), m.cols())?
        .into_iter()
        .map(|i| plucker_minor(m, &i, conv).map(|v| (i, v)))
        .collect()
}

/// Scale equality of two coordinate vectors via a_i b_j = a_j b_i for all pairs.
/// The zero vector is only equivalent to itself.
pub fn projectively_equal(a: &[Q], b: &[Q]) -> bool {
    first_projective_mismatch(a, b).is_none()
}

/// Returns the first coordinate pair (i, j) violating cross-ratio equality.
pub fn first_projective_mismatch(a: &[Q], b: &[Q]) -> Option<(usize, usize)> {
    if a.len() != b.len() {
        return Some((0, 0));
    }
    let az = a.iter().all(|v| v.is_zero());
    let bz = b.iter().all(|v| v.is_zero());
    if az != bz {
        return Some((0, 0));
    }
    // comparing against one nonzero pivot pair is equivalent to all pairs
    let Some(k) = a.iter().position(|v| !v.is_zero()) else {
        return None;
    };
    if b[k].is_zero() {
        return Some((k, k));
    }
    for i in 0..a.len() {
        if &a[i] * &b[k] != &a[k] * &b[i] {
            return Some((k, i));
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorStatus {
    Defined,
    TrivialFactor,
    Undefined,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectiveFactor {
    /// None for the full Plücker vector, Some(k) for block k.
    pub block: Option<usize>,
    pub indices: Vec<IndexTuple>,
    pub coords: Vec<Q>,
    pub status: FactorStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiProjectivePoint {
    pub factors: Vec<ProjectiveFactor>,
}

impl MultiProjectivePoint {
    /// Factor-wise scale equality; statuses must agree.
    pub fn equivalent(&self, other: &MultiProjectivePoint) -> bool {
        self.factors.len() == other.factors.len()
            && self.factors.iter().zip(&other.factors).all(|(a, b)| {
                a.block == b.block
                    && a.status == b.status
                    && a.indices == b.indices
                    && (a.status == FactorStatus::Undefined || projectively_equal(&a.coords, &b.coords))
            })
    }
}

fn require_full_rank(m: &ExactMatrix) -> Result<()> {
    let rank = m.rank();
    if rank != m.rows() {
        return Err(Error::Rank {
            expected: m.rows(),
            found: rank,
        });
    }
    Ok(())
}

pub fn canonical_map_image(
    m: &ExactMatrix,
    s: usize,
    conv: SignConvention,
) -> Result<MultiProjectivePoint> {
    let params = Params::new(s, m.rows(), m.cols())?;
    require_full_rank(m)?;
    let full = plucker_vector(m, conv)?;
    let mut factors = vec![ProjectiveFactor {
        block: None,
        indices: full.iter().map(|(i, _)| i.clone()).collect(),
        coords: full.iter().map(|(_, v)| v.clone()).collect(),
        status: FactorStatus::Defined,
    }];
    for k in 0..=params.p {
        let (indices, coords): (Vec<IndexTuple>, Vec<Q>) = full
            .iter()
            .filter(|(i, _)| i.block(s) == k)
            .cloned()
            .unzip();
        let status = if indices.len() <= 1 {
            FactorStatus::TrivialFactor
        } else if coords.iter().all(|v| v.is_zero()) {
            FactorStatus::Undefined
        } else {
            FactorStatus::Defined
        };
        factors.push(ProjectiveFactor {
            block: Some(k),
            indices,
            coords,
            status,
        });
    }
    Ok(MultiProjectivePoint { factors })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumFlag {
    pub l: usize,
    pub in_minus: bool,
    pub in_plus: bool,
    pub in_both: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumReport {
    pub dim_low: usize,
    pub dim_high: usize,
    /// rank of the last n-s columns
    pub rank_high_columns: usize,
    pub open: bool,
    pub flags: Vec<StratumFlag>,
}

/// Dimensions of the intersections of the row space with C^s ⊕ 0 and 0 ⊕ C^{n-s}.
pub fn stratum_classify(m: &ExactMatrix, s: usize) -> Result<StratumReport> {
    let params = Params::new(s, m.rows(), m.cols())?;
    require_full_rank(m)?;
    let Params { p, n, .. } = params;
    // dim(V ∩ W) = dim V + dim W - dim(V + W)
    let mut low_space = ExactMatrix::zeros(s, n);
    for i in 0..s {
        low_space.set(i, i, Q::one());
    }
    let mut high_space = ExactMatrix::zeros(n - s, n);
    for i in 0..n - s {
        high_space.set(i, s + i, Q::one());
    }
    let dim_low = p + s - m.vstack(&low_space)?.rank();
    let dim_high = p + (n - s) - m.vstack(&high_space)?.rank();
    let tail: Vec<usize> = (s..n).collect();
    let rank_high_columns = m.select_columns(&tail).rank();
    let r = params.r();
    let flags = (0..=r.min(p))
        .map(|l| {
            let in_minus = dim_low == p - l;
            let in_plus = dim_high == l;
            StratumFlag {
                l,
                in_minus,
                in_plus,
                in_both: in_minus && in_plus,
            }
        })
        .collect();
    let open = dim_low == p.saturating_sub(n - s) && dim_high == p.saturating_sub(s);
    Ok(StratumReport {
        dim_low,
        dim_high,
        rank_high_columns,
        open,
        flags,
    })
}

/// Dense-orbit witness for normalized parameters.
pub fn generic_point(params: &Params) -> Result<ExactMatrix> {
    params.require_normalized()?;
    let Params { s, p, n } = *params;
    // p <= n-s: (0 | I_p | I_p | 0). Otherwise, with r = n-s, the rows split
    // as [r; p-r] over column blocks 0, [I_r; 0], [0; I_{p-r}], [I_r; 0].
    let mut m = ExactMatrix::zeros(p, n);
    for i in 0..p {
        m.set(i, s - p + i, Q::one());
        if i < n - s {
            m.set(i, s + i, Q::one());
        }
    }
    Ok(m)
}

/// Multiplies columns s+1..n by λ.
pub fn torus_scale(m: &ExactMatrix, s: usize, lambda: &Q) -> Result<ExactMatrix> {
    if lambda.is_zero() {
        return Err(Error::Param("torus parameter must be nonzero".into()));
    }
    if s >= m.cols() {
        return Err(Error::Param(format!("s={s} out of range for {} columns", m.cols())));
    }
    let mut out = m.clone();
    for r in 0..m.rows() {
        for c in s..m.cols() {
            out.set(r, c, m.get(r, c) * lambda);
        }
    }
    Ok(out)
}

/// λ^k for the weight of an index in block k.
pub fn torus_weight(lambda: &Q, k: usize) -> Q {
    pow(lambda, k)
}

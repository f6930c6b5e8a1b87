//! Van der Waerden charts: chart enumeration, the Γ parametrization, recovery of
//! chart coordinates from Plücker ratios, and transition checks.
//!
//! A chart at level l has L = r - l "lower" cascades acting on rows l+1..p and
//! columns s+l+1..n, then l "upper" cascades on rows 1..l and columns 1..s-p+l.
//! Rows 1..l carry an identity block in columns s+1..s+l, rows l+1..p one in
//! columns s-p+l+1..s.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::{
    enumerate_plucker_indices, first_projective_mismatch, plain_index, plucker_minor,
    swapped_index, IndexTuple, Params, SignConvention,
};
use crate::matrix::ExactMatrix;
use crate::rational::{pow, RationalSampler, Q};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChartIndex {
    pub l: usize,
    /// pivot rows i_1..i_r: the first r-l are lower cascades, the rest upper
    pub rows: Vec<usize>,
    /// pivot columns j_1..j_r, paired with `rows`
    pub cols: Vec<usize>,
}

impl ChartIndex {
    pub fn lower_len(&self) -> usize {
        self.rows.len() - self.l
    }

    fn is_lower(&self, k: usize) -> bool {
        k < self.lower_len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cascade {
    pub pivot: Q,
    /// Ω entries keyed by column (pivot and earlier pivot columns excluded)
    pub row_xi: BTreeMap<usize, Q>,
    /// Ξ entries keyed by row (pivot and earlier pivot rows excluded)
    pub col_xi: BTreeMap<usize, Q>,
}

/// Coordinates on one chart: X̃ (rows 1..l, columns s+l+1..n), Ỹ (rows l+1..p,
/// columns 1..s-p+l) and one cascade per pivot.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ChartPoint {
    pub x: BTreeMap<(usize, usize), Q>,
    pub y: BTreeMap<(usize, usize), Q>,
    pub cascades: Vec<Cascade>,
}

impl ChartPoint {
    pub fn coordinate_count(&self) -> usize {
        self.x.len()
            + self.y.len()
            + self
                .cascades
                .iter()
                .map(|c| 1 + c.row_xi.len() + c.col_xi.len())
                .sum::<usize>()
    }
}

#[derive(Debug, Clone, Copy)]
struct Layout {
    s: usize,
    p: usize,
    n: usize,
    r: usize,
    l: usize,
}

impl Layout {
    fn new(params: &Params, l: usize) -> Result<Self> {
        params.require_normalized()?;
        let r = params.r();
        if l > r {
            return Err(Error::Param(format!("chart level l={l} outside 0..={r}")));
        }
        Ok(Layout {
            s: params.s,
            p: params.p,
            n: params.n,
            r,
            l,
        })
    }

    fn lower_len(&self) -> usize {
        self.r - self.l
    }

    fn lower_rows(&self) -> std::ops::RangeInclusive<usize> {
        self.l + 1..=self.p
    }

    fn lower_cols(&self) -> std::ops::RangeInclusive<usize> {
        self.s + self.l + 1..=self.n
    }

    fn upper_rows(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.l
    }

    fn upper_cols(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.s - self.p + self.l
    }

    fn rows_for(&self, lower: bool) -> std::ops::RangeInclusive<usize> {
        if lower {
            self.lower_rows()
        } else {
            self.upper_rows()
        }
    }

    fn cols_for(&self, lower: bool) -> std::ops::RangeInclusive<usize> {
        if lower {
            self.lower_cols()
        } else {
            self.upper_cols()
        }
    }

    /// Column carrying the identity entry of `row`.
    fn identity_col(&self, row: usize) -> usize {
        if row <= self.l {
            self.s + row
        } else {
            self.s - self.p + row
        }
    }

    fn check_chart(&self, tau: &ChartIndex) -> Result<()> {
        let bad = |why: &str| Err(Error::Param(format!("chart {tau:?} invalid: {why}")));
        if tau.l != self.l || tau.rows.len() != self.r || tau.cols.len() != self.r {
            return bad("wrong level or length");
        }
        let lower = self.lower_len();
        let (lr, ur) = tau.rows.split_at(lower);
        let (lc, uc) = tau.cols.split_at(lower);
        let injective_in = |v: &[usize], range: std::ops::RangeInclusive<usize>| {
            v.iter().all(|x| range.contains(x)) && v.iter().collect::<BTreeSet<_>>().len() == v.len()
        };
        if !injective_in(lr, self.lower_rows())
            || !injective_in(lc, self.lower_cols())
            || !injective_in(ur, self.upper_rows())
            || !injective_in(uc, self.upper_cols())
        {
            return bad("pivot rows or columns out of range or repeated");
        }
        Ok(())
    }

    /// Cascade k's earlier pivots within its own family.
    fn earlier(&self, tau: &ChartIndex, k: usize) -> (BTreeSet<usize>, BTreeSet<usize>) {
        let start = if tau.is_lower(k) { 0 } else { tau.lower_len() };
        (
            tau.rows[start..k].iter().copied().collect(),
            tau.cols[start..k].iter().copied().collect(),
        )
    }
}

fn falling(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (n - k + 1..=n).product()
}

/// Number of charts at level l: (p-l)_(r-l) · (n-s-l)_(r-l) · l! · (s-p+l)_(l).
pub fn chart_count(params: &Params, l: usize) -> Result<usize> {
    let lay = Layout::new(params, l)?;
    let lower = lay.lower_len();
    Ok(falling(lay.p - l, lower)
        * falling(lay.n - lay.s - l, lower)
        * falling(l, l)
        * falling(lay.s - lay.p + l, l))
}

pub fn enumerate_charts(params: &Params, l: usize) -> Result<Vec<ChartIndex>> {
    let lay = Layout::new(params, l)?;
    let lower = lay.lower_len();
    let mut out = Vec::new();
    for lr in lay.lower_rows().permutations(lower) {
        for lc in lay.lower_cols().permutations(lower) {
            for ur in lay.upper_rows().permutations(l) {
                for uc in lay.upper_cols().permutations(l) {
                    out.push(ChartIndex {
                        l,
                        rows: lr.iter().chain(&ur).copied().collect(),
                        cols: lc.iter().chain(&uc).copied().collect(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// The chart whose coordinates are read off consecutive P_{I_m} ratios: lower
/// pivots (l+k, s+l+k), upper pivots (l+1-u, s-p+l+1-u).
pub fn base_chart(params: &Params, l: usize) -> Result<ChartIndex> {
    let lay = Layout::new(params, l)?;
    let (s, p) = (lay.s, lay.p);
    let mut rows: Vec<usize> = (1..=lay.lower_len()).map(|k| l + k).collect();
    let mut cols: Vec<usize> = (1..=lay.lower_len()).map(|k| s + l + k).collect();
    rows.extend((1..=l).map(|u| l + 1 - u));
    cols.extend((1..=l).map(|u| s - p + l + 1 - u));
    Ok(ChartIndex { l, rows, cols })
}

fn point_with(
    params: &Params,
    tau: &ChartIndex,
    mut entry: impl FnMut() -> Q,
    mut pivot: impl FnMut() -> Q,
) -> Result<ChartPoint> {
    let lay = Layout::new(params, tau.l)?;
    lay.check_chart(tau)?;
    let mut pt = ChartPoint::default();
    for a in lay.upper_rows() {
        for c in lay.lower_cols() {
            pt.x.insert((a, c), entry());
        }
    }
    for g in lay.lower_rows() {
        for c in lay.upper_cols() {
            pt.y.insert((g, c), entry());
        }
    }
    for k in 0..lay.r {
        let lower = tau.is_lower(k);
        let (prev_rows, prev_cols) = lay.earlier(tau, k);
        let mut cas = Cascade {
            pivot: pivot(),
            ..Default::default()
        };
        for c in lay.cols_for(lower) {
            if c != tau.cols[k] && !prev_cols.contains(&c) {
                cas.row_xi.insert(c, entry());
            }
        }
        for t in lay.rows_for(lower) {
            if t != tau.rows[k] && !prev_rows.contains(&t) {
                cas.col_xi.insert(t, entry());
            }
        }
        pt.cascades.push(cas);
    }
    Ok(pt)
}

/// Seeded random point; pivots are drawn nonzero.
pub fn random_point(params: &Params, tau: &ChartIndex, sampler: &mut RationalSampler) -> Result<ChartPoint> {
    let cell = std::cell::RefCell::new(sampler);
    point_with(params, tau, || cell.borrow_mut().next(), || cell.borrow_mut().next_nonzero())
}

/// All coordinates zero, pivots included.
pub fn zero_point(params: &Params, tau: &ChartIndex) -> Result<ChartPoint> {
    point_with(params, tau, Q::zero, Q::zero)
}

fn check_point_shape(params: &Params, tau: &ChartIndex, pt: &ChartPoint) -> Result<()> {
    let template = zero_point(params, tau)?;
    let same_keys = template.x.keys().eq(pt.x.keys())
        && template.y.keys().eq(pt.y.keys())
        && template.cascades.len() == pt.cascades.len()
        && template.cascades.iter().zip(&pt.cascades).all(|(a, b)| {
            a.row_xi.keys().eq(b.row_xi.keys()) && a.col_xi.keys().eq(b.col_xi.keys())
        });
    if !same_keys {
        return Err(Error::Param(format!("chart point shape does not match chart {tau:?}")));
    }
    Ok(())
}

/// The p×n matrix Γ^τ(pt).
pub fn gamma_eval(params: &Params, tau: &ChartIndex, pt: &ChartPoint) -> Result<ExactMatrix> {
    let lay = Layout::new(params, tau.l)?;
    lay.check_chart(tau)?;
    check_point_shape(params, tau, pt)?;
    let mut m = ExactMatrix::zeros(lay.p, lay.n);
    for row in 1..=lay.p {
        m.set(row - 1, lay.identity_col(row) - 1, Q::one());
    }
    for (&(a, c), v) in pt.x.iter().chain(&pt.y) {
        m.set(a - 1, c - 1, v.clone());
    }
    for lower in [true, false] {
        let mut prod = Q::one();
        for k in (0..lay.r).filter(|&k| tau.is_lower(k) == lower) {
            let cas = &pt.cascades[k];
            prod *= &cas.pivot;
            if prod.is_zero() {
                break;
            }
            let (prev_rows, prev_cols) = lay.earlier(tau, k);
            let xi = |t: usize| -> Q {
                if t == tau.rows[k] {
                    Q::one()
                } else if prev_rows.contains(&t) {
                    Q::zero()
                } else {
                    cas.col_xi[&t].clone()
                }
            };
            let omega = |c: usize| -> Q {
                if c == tau.cols[k] {
                    Q::one()
                } else if prev_cols.contains(&c) {
                    Q::zero()
                } else {
                    cas.row_xi[&c].clone()
                }
            };
            for t in lay.rows_for(lower) {
                let xt = xi(t);
                if xt.is_zero() {
                    continue;
                }
                for c in lay.cols_for(lower) {
                    let oc = omega(c);
                    if !oc.is_zero() {
                        m.add_at(t - 1, c - 1, &(&prod * &xt * oc));
                    }
                }
            }
        }
    }
    Ok(m)
}

fn permutation_sign(seq: &[usize]) -> Q {
    let inversions = (0..seq.len())
        .flat_map(|i| (i + 1..seq.len()).map(move |k| (i, k)))
        .filter(|&(i, k)| seq[i] > seq[k])
        .count();
    crate::rational::sign_of(inversions)
}

/// Sign relating P_I of a level-l normal-form matrix W to det W[R, C], where R
/// lists (ascending) the rows whose identity columns I drops and C (ascending)
/// the columns I adds.
fn frame_sign(lay: &Layout, index: &IndexTuple, conv: SignConvention) -> Result<Q> {
    let owner: BTreeMap<usize, usize> = (1..=lay.p).map(|row| (lay.identity_col(row), row)).collect();
    let dropped: Vec<usize> = owner
        .iter()
        .filter(|(c, _)| !index.contains(**c))
        .map(|(_, &row)| row)
        .sorted()
        .collect();
    let added: Vec<usize> = index
        .entries()
        .iter()
        .copied()
        .filter(|c| !owner.contains_key(c))
        .sorted()
        .collect();
    if dropped.len() != added.len() {
        return Err(Error::Param(format!("index {index} has the wrong length")));
    }
    let mut row_of: BTreeMap<usize, usize> = index
        .entries()
        .iter()
        .filter_map(|c| owner.get(c).map(|&row| (*c, row)))
        .collect();
    for (row, col) in dropped.iter().zip(&added) {
        row_of.insert(*col, *row);
    }
    let mut order: Vec<usize> = index.entries().to_vec();
    if conv == SignConvention::Ascending {
        order.sort_unstable();
    }
    let rows: Vec<usize> = order.iter().map(|c| row_of[c]).collect();
    Ok(permutation_sign(&rows))
}

/// Plücker ratios of `m` normalized to the level-l frame: frame_minor(I) is the
/// signed minor det W[R, C] of the normal-form representative W of m.
struct FrameMinors<'a> {
    lay: Layout,
    params: &'a Params,
    m: &'a ExactMatrix,
    conv: SignConvention,
    scale: Q,
}

impl<'a> FrameMinors<'a> {
    fn new(params: &'a Params, l: usize, m: &'a ExactMatrix, conv: SignConvention) -> Result<Self> {
        let lay = Layout::new(params, l)?;
        if m.rows() != lay.p || m.cols() != lay.n {
            return Err(Error::Param(format!(
                "expected a {}x{} matrix, got {}x{}",
                lay.p,
                lay.n,
                m.rows(),
                m.cols()
            )));
        }
        for k in 0..=lay.r {
            let idx = plain_index(params, k)?;
            if plucker_minor(m, &idx, conv)?.is_zero() {
                return Err(Error::Indeterminate(format!(
                    "P_I{k} = P{idx} vanishes; the point is outside the chart domain"
                )));
            }
        }
        let base = plain_index(params, l)?;
        let scale = frame_sign(&lay, &base, conv)? / plucker_minor(m, &base, conv)?;
        Ok(FrameMinors {
            lay,
            params,
            m,
            conv,
            scale,
        })
    }

    fn get(&self, index: &IndexTuple) -> Result<Q> {
        Ok(plucker_minor(self.m, index, self.conv)? * &self.scale * frame_sign(&self.lay, index, self.conv)?)
    }

    fn plain(&self, k: usize) -> Result<Q> {
        self.get(&plain_index(self.params, k)?)
    }

    fn swapped(&self, k: usize, mu: usize, nu: usize) -> Result<Q> {
        self.get(&swapped_index(self.params, k, mu, nu)?)
    }
}

/// Coordinates of `m` on the base chart of level l.
pub fn recover_at_level(params: &Params, l: usize, m: &ExactMatrix, conv: SignConvention) -> Result<ChartPoint> {
    let fm = FrameMinors::new(params, l, m, conv)?;
    let lay = fm.lay;
    let (s, p, n) = (lay.s, lay.p, lay.n);
    let mut pt = ChartPoint::default();
    for a in lay.upper_rows() {
        for nu in lay.lower_cols() {
            pt.x.insert((a, nu), fm.swapped(l, s + a, nu)?);
        }
    }
    for g in lay.lower_rows() {
        for nu in lay.upper_cols() {
            pt.y.insert((g, nu), fm.swapped(l, s - p + g, nu)?);
        }
    }
    // lower cascades: leading minors of the lower block
    for step in 1..=lay.lower_len() {
        let k = l + step;
        let lead = fm.plain(k)?;
        let pivot = if step == 1 {
            &lead / fm.plain(k - 1)?
        } else {
            &lead * fm.plain(k - 2)? / pow(&fm.plain(k - 1)?, 2)
        };
        let mut cas = Cascade {
            pivot,
            ..Default::default()
        };
        for g in k + 1..=p {
            cas.col_xi.insert(g, fm.swapped(k, s - p + g, s - p + k)? / &lead);
        }
        for nu in s + k + 1..=n {
            cas.row_xi.insert(nu, fm.swapped(k, s + k, nu)? / &lead);
        }
        pt.cascades.push(cas);
    }
    // upper cascades: trailing minors of the upper block
    for step in 1..=l {
        let k = l - step;
        let trail = fm.plain(k)?;
        let pivot = if step == 1 {
            &trail / fm.plain(k + 1)?
        } else {
            &trail * fm.plain(k + 2)? / pow(&fm.plain(k + 1)?, 2)
        };
        let mut cas = Cascade {
            pivot,
            ..Default::default()
        };
        for a in 1..=k {
            cas.col_xi.insert(a, fm.swapped(k, s + a, s + k + 1)? / &trail);
        }
        for nu in 1..=s - p + k {
            cas.row_xi.insert(nu, fm.swapped(k, s - p + k + 1, nu)? / &trail);
        }
        pt.cascades.push(cas);
    }
    Ok(pt)
}

/// Coordinates on the chart τ₀ used for D⁻_j: the base chart of level j-1.
pub fn ratio_coordinates(params: &Params, j: usize, m: &ExactMatrix, conv: SignConvention) -> Result<ChartPoint> {
    let r = params.r();
    if j == 0 || j > r {
        return Err(Error::Param(format!("j={j} outside 1..={r}")));
    }
    recover_at_level(params, j - 1, m, conv)
}

/// Row and column relabelings carrying chart τ onto the base chart of its level.
struct Relabel {
    row: BTreeMap<usize, usize>,
    col: BTreeMap<usize, usize>,
}

impl Relabel {
    fn new(lay: &Layout, tau: &ChartIndex) -> Relabel {
        let lower = lay.lower_len();
        let l = lay.l;
        let (s, p) = (lay.s, lay.p);
        let mut row = BTreeMap::new();
        let mut col = BTreeMap::new();
        let extend = |map: &mut BTreeMap<usize, usize>,
                      pivots: &[usize],
                      targets: Vec<usize>,
                      range: std::ops::RangeInclusive<usize>,
                      rest_targets: Vec<usize>| {
            for (&a, b) in pivots.iter().zip(targets) {
                map.insert(a, b);
            }
            let rest: Vec<usize> = range.filter(|x| !pivots.contains(x)).collect();
            for (a, b) in rest.into_iter().zip(rest_targets) {
                map.insert(a, b);
            }
        };
        extend(
            &mut row,
            &tau.rows[..lower],
            (1..=lower).map(|k| l + k).collect(),
            lay.lower_rows(),
            (l + lower + 1..=p).collect(),
        );
        extend(
            &mut row,
            &tau.rows[lower..],
            (1..=l).map(|u| l + 1 - u).collect(),
            lay.upper_rows(),
            vec![],
        );
        extend(
            &mut col,
            &tau.cols[..lower],
            (1..=lower).map(|k| s + l + k).collect(),
            lay.lower_cols(),
            (s + l + lower + 1..=lay.n).collect(),
        );
        extend(
            &mut col,
            &tau.cols[lower..],
            (1..=l).map(|u| s - p + l + 1 - u).collect(),
            lay.upper_cols(),
            (1..=s - p).collect(),
        );
        // identity columns follow their rows
        for g in 1..=p {
            col.insert(lay.identity_col(g), lay.identity_col(row[&g]));
        }
        Relabel { row, col }
    }

    fn invert(&self) -> Relabel {
        Relabel {
            row: self.row.iter().map(|(a, b)| (*b, *a)).collect(),
            col: self.col.iter().map(|(a, b)| (*b, *a)).collect(),
        }
    }

    fn point(&self, pt: &ChartPoint) -> ChartPoint {
        let cells = |m: &BTreeMap<(usize, usize), Q>| {
            m.iter()
                .map(|(&(a, c), v)| ((self.row[&a], self.col[&c]), v.clone()))
                .collect()
        };
        ChartPoint {
            x: cells(&pt.x),
            y: cells(&pt.y),
            cascades: pt
                .cascades
                .iter()
                .map(|c| Cascade {
                    pivot: c.pivot.clone(),
                    row_xi: c.row_xi.iter().map(|(k, v)| (self.col[k], v.clone())).collect(),
                    col_xi: c.col_xi.iter().map(|(k, v)| (self.row[k], v.clone())).collect(),
                })
                .collect(),
        }
    }

    fn columns(&self, m: &ExactMatrix) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(m.rows(), m.cols());
        for (&from, &to) in &self.col {
            for r in 0..m.rows() {
                out.set(r, to - 1, m.get(r, from - 1).clone());
            }
        }
        out
    }
}

/// Coordinates of `m` on an arbitrary chart τ.
pub fn recover_in_chart(
    params: &Params,
    tau: &ChartIndex,
    m: &ExactMatrix,
    conv: SignConvention,
) -> Result<ChartPoint> {
    let lay = Layout::new(params, tau.l)?;
    lay.check_chart(tau)?;
    let relabel = Relabel::new(&lay, tau);
    let moved = relabel.columns(m);
    let base_pt = recover_at_level(params, tau.l, &moved, conv)?;
    Ok(relabel.invert().point(&base_pt))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionReport {
    pub consistent: bool,
    /// first pair of Plücker indices whose cross-ratio differs
    pub witness: Option<(IndexTuple, IndexTuple)>,
}

pub fn transition_check(
    params: &Params,
    tau_src: &ChartIndex,
    tau_dst: &ChartIndex,
    pt: &ChartPoint,
    conv: SignConvention,
) -> Result<TransitionReport> {
    let src = gamma_eval(params, tau_src, pt)?;
    let recovered = recover_in_chart(params, tau_dst, &src, conv)?;
    let dst = gamma_eval(params, tau_dst, &recovered)?;
    let indices = enumerate_plucker_indices(params.p, params.n)?;
    let a: Vec<Q> = indices.iter().map(|i| plucker_minor(&src, i, conv)).collect::<Result<_>>()?;
    let b: Vec<Q> = indices.iter().map(|i| plucker_minor(&dst, i, conv)).collect::<Result<_>>()?;
    Ok(match first_projective_mismatch(&a, &b) {
        None => TransitionReport {
            consistent: true,
            witness: None,
        },
        Some((i, k)) => TransitionReport {
            consistent: false,
            witness: Some((indices[i].clone(), indices[k].clone())),
        },
    })
}

/// ρ_m = P_{I_m}(Γ) / (P_{I_{j-1}}(Γ) · monomial in the pivots), on a chart of level j-1.
pub fn rho_eval(
    params: &Params,
    j: usize,
    tau: &ChartIndex,
    m: usize,
    pt: &ChartPoint,
    conv: SignConvention,
) -> Result<Q> {
    let r = params.r();
    if j == 0 || j > r || tau.l != j - 1 || m > r {
        return Err(Error::Param(format!(
            "rho needs 1 <= j <= {r}, a chart of level j-1 and m <= {r}; got j={j}, level {}, m={m}",
            tau.l
        )));
    }
    let l = j - 1;
    let gamma = gamma_eval(params, tau, pt)?;
    let lower = tau.lower_len();
    let mut monomial = Q::one();
    if m > l {
        let d = m - l;
        for t in 1..=d {
            monomial *= pow(&pt.cascades[t - 1].pivot, d + 1 - t);
        }
    } else if m < l {
        let d = l - m;
        for u in 1..=d {
            monomial *= pow(&pt.cascades[lower + u - 1].pivot, d + 1 - u);
        }
    }
    if monomial.is_zero() {
        return Err(Error::Domain(format!("pivot monomial for rho_{m} vanishes")));
    }
    let base = plucker_minor(&gamma, &plain_index(params, l)?, conv)?;
    let top = plucker_minor(&gamma, &plain_index(params, m)?, conv)?;
    Ok(top / (base * monomial))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionSweep {
    pub params: Params,
    pub l: usize,
    pub charts: usize,
    pub pairs: usize,
    pub points_per_pair: usize,
    pub consistent: usize,
    pub inconsistent: usize,
    /// sampled points outside the destination chart, redrawn
    pub redrawn: usize,
    /// pairs that never reached `points_per_pair` usable points
    pub starved_pairs: usize,
    pub first_failure: Option<TransitionFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionFailure {
    pub src: ChartIndex,
    pub dst: ChartIndex,
    pub witness: Option<(IndexTuple, IndexTuple)>,
}

impl TransitionSweep {
    pub fn passed(&self) -> bool {
        self.inconsistent == 0 && self.starved_pairs == 0
    }
}

/// Checks every ordered pair of level-l charts (or the first `max_charts`) on
/// `points_per_pair` seeded points each.
pub fn transition_sweep(
    params: &Params,
    l: usize,
    points_per_pair: usize,
    seed: u64,
    conv: SignConvention,
    max_charts: Option<usize>,
) -> Result<TransitionSweep> {
    let mut charts = enumerate_charts(params, l)?;
    if let Some(k) = max_charts {
        charts.truncate(k);
    }
    let indices = enumerate_plucker_indices(params.p, params.n)?;
    let plucker = |m: &ExactMatrix| -> Result<Vec<Q>> {
        indices.iter().map(|i| plucker_minor(m, i, conv)).collect()
    };
    let mut sampler = RationalSampler::new(seed);
    let mut sweep = TransitionSweep {
        params: *params,
        l,
        charts: charts.len(),
        pairs: charts.len() * charts.len(),
        points_per_pair,
        consistent: 0,
        inconsistent: 0,
        redrawn: 0,
        starved_pairs: 0,
        first_failure: None,
    };
    let max_attempts = 20 * points_per_pair.max(1);
    for src in &charts {
        // one shared pool of source points per chart, extended on demand
        let mut pool: Vec<(ExactMatrix, Vec<Q>)> = Vec::new();
        for dst in &charts {
            let mut used = 0;
            let mut attempt = 0;
            while used < points_per_pair && attempt < max_attempts {
                if attempt == pool.len() {
                    let pt = random_point(params, src, &mut sampler)?;
                    let m = gamma_eval(params, src, &pt)?;
                    let v = plucker(&m)?;
                    pool.push((m, v));
                }
                let (m, v) = &pool[attempt];
                attempt += 1;
                let recovered = match recover_in_chart(params, dst, m, conv) {
                    Ok(pt) => pt,
                    Err(Error::Indeterminate(_)) => {
                        sweep.redrawn += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                used += 1;
                let back = plucker(&gamma_eval(params, dst, &recovered)?)?;
                match first_projective_mismatch(v, &back) {
                    None => sweep.consistent += 1,
                    Some((a, b)) => {
                        sweep.inconsistent += 1;
                        if sweep.first_failure.is_none() {
                            sweep.first_failure = Some(TransitionFailure {
                                src: src.clone(),
                                dst: dst.clone(),
                                witness: Some((indices[a].clone(), indices[b].clone())),
                            });
                        }
                    }
                }
            }
            if used < points_per_pair {
                sweep.starved_pairs += 1;
            }
        }
    }
    Ok(sweep)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternEntry {
    pub row: usize,
    pub col: usize,
    #[serde(with = "crate::rational::serde_q")]
    pub expected: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub actual: Q,
}

/// Compares Γ at `pt` with the two-cascade closed form on each block: for a
/// cascade pair with pivots (i1,j1), (i2,j2), entry (i2,j2) equals
/// b1·(ξ_{i2}·ω_{j2} + b2), where ξ, ω are the first cascade's free entries.
pub fn two_cascade_pattern(params: &Params, tau: &ChartIndex, pt: &ChartPoint) -> Result<Vec<PatternEntry>> {
    let gamma = gamma_eval(params, tau, pt)?;
    let lower = tau.lower_len();
    let mut out = Vec::new();
    for start in [0, lower] {
        let end = if start == 0 { lower } else { tau.rows.len() };
        if end < start + 2 {
            continue;
        }
        let (c1, c2) = (&pt.cascades[start], &pt.cascades[start + 1]);
        let (i2, j2) = (tau.rows[start + 1], tau.cols[start + 1]);
        let expected = &c1.pivot * (&c1.col_xi[&i2] * &c1.row_xi[&j2] + &c2.pivot);
        out.push(PatternEntry {
            row: i2,
            col: j2,
            expected,
            actual: gamma.at(i2, j2).clone(),
        });
    }
    Ok(out)
}

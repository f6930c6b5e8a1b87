//! Divisor classes on the blow-up over the spanning set (H, D⁻₁..D⁻ᵣ, D⁺₁..D⁺ᵣ).

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::Params;
use crate::rational::{q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Transform {
    /// p ↦ n-p
    Dual,
    /// s ↦ n-s
    Usd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    pub input: Params,
    pub params: Params,
    pub log: Vec<Transform>,
}

pub fn normalize_parameters(s: usize, p: usize, n: usize) -> Result<Normalization> {
    let input = Params::new(s, p, n)?;
    let mut params = input;
    let mut log = Vec::new();
    if 2 * params.p > n {
        params.p = n - params.p;
        log.push(Transform::Dual);
    }
    if n > 2 * params.s {
        params.s = n - params.s;
        log.push(Transform::Usd);
    }
    debug_assert!(params.is_normalized());
    Ok(Normalization { input, params, log })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Regime {
    /// p < n-s ≤ s
    R1,
    /// p = n-s < s
    R2,
    /// n-s < p < s
    R3,
    /// p = n-s = s
    R4,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

pub fn level_and_regime(params: &Params) -> Result<(usize, Regime)> {
    params.require_normalized()?;
    let Params { s, p, n } = *params;
    let regime = if p < n - s {
        Regime::R1
    } else if p == n - s && n - s < s {
        Regime::R2
    } else if p > n - s {
        Regime::R3
    } else {
        Regime::R4
    };
    Ok((params.r(), regime))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AmbientClass {
    #[serde(with = "crate::rational::serde_q")]
    pub h: Q,
    /// coefficient of D⁻_i at position i-1
    #[serde(with = "crate::rational::serde_q_vec")]
    pub dminus: Vec<Q>,
    #[serde(with = "crate::rational::serde_q_vec")]
    pub dplus: Vec<Q>,
}

impl AmbientClass {
    pub fn zero(r: usize) -> Self {
        AmbientClass {
            h: Q::zero(),
            dminus: vec![Q::zero(); r],
            dplus: vec![Q::zero(); r],
        }
    }

    pub fn hyperplane(r: usize) -> Self {
        let mut c = Self::zero(r);
        c.h = Q::one();
        c
    }

    pub fn boundary_minus(r: usize, i: usize) -> Self {
        let mut c = Self::zero(r);
        c.dminus[i - 1] = Q::one();
        c
    }

    pub fn boundary_plus(r: usize, i: usize) -> Self {
        let mut c = Self::zero(r);
        c.dplus[i - 1] = Q::one();
        c
    }

    pub fn r(&self) -> usize {
        self.dminus.len()
    }

    pub fn is_zero(&self) -> bool {
        self.h.is_zero()
            && self.dminus.iter().all(|v| v.is_zero())
            && self.dplus.iter().all(|v| v.is_zero())
    }

    pub fn add_scaled(&self, other: &AmbientClass, c: &Q) -> AmbientClass {
        assert_eq!(self.r(), other.r(), "classes over different lattices");
        AmbientClass {
            h: &self.h + c * &other.h,
            dminus: self.dminus.iter().zip(&other.dminus).map(|(a, b)| a + c * b).collect(),
            dplus: self.dplus.iter().zip(&other.dplus).map(|(a, b)| a + c * b).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> AmbientClass {
        AmbientClass::zero(self.r()).add_scaled(self, c)
    }

    pub fn to_vec(&self) -> Vec<Q> {
        let mut v = vec![self.h.clone()];
        v.extend(self.dminus.iter().cloned());
        v.extend(self.dplus.iter().cloned());
        v
    }

    fn entry_mut(&mut self, pos: usize) -> &mut Q {
        let r = self.r();
        match pos {
            0 => &mut self.h,
            p if p <= r => &mut self.dminus[p - 1],
            p => &mut self.dplus[p - 1 - r],
        }
    }

    /// Normal form modulo the boundary-coincidence relations of `params`.
    pub fn reduce(&self, params: &Params) -> Result<AmbientClass> {
        let mut out = self.clone();
        for (rel, pivot) in boundary_relations(params)? {
            let v = out.to_vec();
            if v[pivot].is_zero() {
                continue;
            }
            let c = -(&v[pivot] / &rel.to_vec()[pivot]);
            out = out.add_scaled(&rel, &c);
            *out.entry_mut(pivot) = Q::zero();
        }
        Ok(out)
    }
}

impl std::ops::Add for &AmbientClass {
    type Output = AmbientClass;
    fn add(self, rhs: &AmbientClass) -> AmbientClass {
        self.add_scaled(rhs, &Q::one())
    }
}

impl std::ops::Sub for &AmbientClass {
    type Output = AmbientClass;
    fn sub(self, rhs: &AmbientClass) -> AmbientClass {
        self.add_scaled(rhs, &-Q::one())
    }
}

pub(crate) fn format_terms(terms: &[(String, &Q)]) -> String {
    let mut out = String::new();
    for (label, c) in terms {
        if c.is_zero() {
            continue;
        }
        let neg = *c < &Q::zero();
        let mag = if neg { -(*c).clone() } else { (*c).clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            out.push_str(&mag.to_string());
        }
        out.push_str(label);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for AmbientClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(String, &Q)> = vec![("H".into(), &self.h)];
        for (i, c) in self.dminus.iter().enumerate() {
            terms.push((format!("D-{}", i + 1), c));
        }
        for (i, c) in self.dplus.iter().enumerate() {
            terms.push((format!("D+{}", i + 1), c));
        }
        f.write_str(&format_terms(&terms))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BClass {
    pub j: usize,
    pub class: AmbientClass,
    /// B_j is itself a boundary divisor (B₀ = D⁺ᵣ when p = s, Bᵣ = D⁻ᵣ when p = n-s).
    pub coincides_with_boundary: bool,
}

/// B_j = H - Σ_{i≤r-j} (r-j+1-i) D⁺_i - Σ_{i≤j} (j+1-i) D⁻_i, with the top term
/// dropped when B_j coincides with a boundary divisor.
pub fn class_of_b(params: &Params, j: usize) -> Result<BClass> {
    params.require_normalized()?;
    let r = params.r();
    if j > r {
        return Err(Error::Param(format!("B index j={j} outside 0..={r}")));
    }
    let mut class = AmbientClass::hyperplane(r);
    let (plus_len, minus_len, coincides) = if j == 0 && params.p == params.s {
        (r - 1, 0, true)
    } else if j == r && params.p == params.n - params.s {
        (0, r - 1, true)
    } else {
        (r - j, j, false)
    };
    if coincides && j == 0 {
        for i in 1..=plus_len {
            class.dplus[i - 1] = -q((r + 1 - i) as i64);
        }
    } else if coincides {
        for i in 1..=minus_len {
            class.dminus[i - 1] = -q((r + 1 - i) as i64);
        }
    } else {
        for i in 1..=plus_len {
            class.dplus[i - 1] = -q((r - j + 1 - i) as i64);
        }
        for i in 1..=minus_len {
            class.dminus[i - 1] = -q((j + 1 - i) as i64);
        }
    }
    Ok(BClass {
        j,
        class,
        coincides_with_boundary: coincides,
    })
}

/// Relations `rel = 0` identifying the coinciding B classes with their boundary
/// divisors, each with the vector position of its pivot (D⁻ᵣ or D⁺ᵣ).
pub fn boundary_relations(params: &Params) -> Result<Vec<(AmbientClass, usize)>> {
    params.require_normalized()?;
    let r = params.r();
    let mut out = Vec::new();
    if params.p == params.n - params.s {
        let b = class_of_b(params, r)?.class;
        out.push((&AmbientClass::boundary_minus(r, r) - &b, r));
    }
    if params.p == params.s {
        let b = class_of_b(params, 0)?.class;
        out.push((&AmbientClass::boundary_plus(r, r) - &b, 2 * r));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Anticanonical {
    pub regime: Regime,
    /// (m, coefficient of B_m) as displayed for the regime
    pub b_terms: Vec<(usize, i64)>,
    /// −K expanded through class_of_b, before reduction
    pub expanded: AmbientClass,
    /// `expanded` in normal form modulo the boundary relations
    pub reduced: AmbientClass,
}

/// Coefficients of B_m in −K for each regime; every boundary divisor enters with 1.
pub fn anticanonical_b_terms(params: &Params) -> Result<Vec<(usize, i64)>> {
    let (r, regime) = level_and_regime(params)?;
    let Params { s, p, n } = *params;
    let (s, p, n) = (s as i64, p as i64, n as i64);
    let mut terms = Vec::new();
    match regime {
        Regime::R1 | Regime::R2 | Regime::R3 => terms.push((0, s - p + 1)),
        Regime::R4 => {}
    }
    for m in 1..r {
        terms.push((m, 2));
    }
    match regime {
        Regime::R1 => terms.push((r, n - s - p + 1)),
        Regime::R3 => terms.push((r, p - r as i64 + 1)),
        Regime::R2 | Regime::R4 => {}
    }
    Ok(terms)
}

pub fn anticanonical_class(params: &Params) -> Result<Anticanonical> {
    let (r, regime) = level_and_regime(params)?;
    let b_terms = anticanonical_b_terms(params)?;
    let mut expanded = AmbientClass::zero(r);
    for &(m, c) in &b_terms {
        expanded = expanded.add_scaled(&class_of_b(params, m)?.class, &q(c));
    }
    for i in 1..=r {
        expanded = &expanded + &AmbientClass::boundary_minus(r, i);
        expanded = &expanded + &AmbientClass::boundary_plus(r, i);
    }
    let reduced = expanded.reduce(params)?;
    Ok(Anticanonical {
        regime,
        b_terms,
        expanded,
        reduced,
    })
}

/// K itself, in normal form.
pub fn canonical_class(params: &Params) -> Result<AmbientClass> {
    Ok(anticanonical_class(params)?.reduced.scale(&-Q::one()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitPair {
    pub minus: Vec<usize>,
    pub plus: Vec<usize>,
}

/// Pairs (I⁻, I⁺) of subsets of 1..r with min(I⁻) + min(I⁺) ≥ r+2, min ∅ = ∞.
pub fn enumerate_orbit_pairs(r: usize) -> Result<Vec<OrbitPair>> {
    if r == 0 {
        return Err(Error::Param("orbit pairs need r >= 1".into()));
    }
    // subsets of 1..r grouped by their minimum (None for the empty set)
    let subsets_with_min = |m: Option<usize>| -> Vec<Vec<usize>> {
        let Some(m) = m else {
            return vec![vec![]];
        };
        let tail: Vec<usize> = (m + 1..=r).collect();
        (0u64..1 << tail.len())
            .map(|mask| {
                let mut s = vec![m];
                s.extend(tail.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &v)| v));
                s
            })
            .collect()
    };
    let mins: Vec<Option<usize>> = std::iter::once(None).chain((1..=r).map(Some)).collect();
    let mut out = Vec::new();
    for &a in &mins {
        for &b in &mins {
            let ok = match (a, b) {
                (Some(a), Some(b)) => a + b >= r + 2,
                _ => true,
            };
            if !ok {
                continue;
            }
            for minus in subsets_with_min(a) {
                for plus in subsets_with_min(b) {
                    out.push(OrbitPair {
                        minus: minus.clone(),
                        plus,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// All normalized parameter triples with n ≤ max_n, ordered by (n, s, p).
pub fn normalized_triples(max_n: usize) -> Vec<Params> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        for s in 1..n {
            for p in 1..n {
                if 2 * p <= n && n <= 2 * s {
                    out.push(Params { s, p, n });
                }
            }
        }
    }
    out
}

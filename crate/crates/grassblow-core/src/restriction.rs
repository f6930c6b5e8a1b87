//! Classes restricted to a boundary component D±_j.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::Params;
use crate::lattice::{
    anticanonical_class, boundary_relations, class_of_b, format_terms, AmbientClass,
};
use crate::rational::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn name(&self) -> &'static str {
        match self {
            Side::Minus => "minus",
            Side::Plus => "plus",
        }
    }

    pub fn sign(&self) -> char {
        match self {
            Side::Minus => '-',
            Side::Plus => '+',
        }
    }

    pub fn opposite(&self) -> Side {
        match self {
            Side::Minus => Side::Plus,
            Side::Plus => Side::Minus,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minus" | "-" => Ok(Side::Minus),
            "plus" | "+" => Ok(Side::Plus),
            _ => Err(Error::Param(format!("unknown side {s:?}"))),
        }
    }
}

/// Coordinates over (H_res, same-side D_1..D_r, opposite-side D_{r+2-j}..D_r).
/// `d_same[i-1]` includes the self symbol i = j; `d_opp[i-1]` is always zero for
/// i ≤ r+1-j because those divisors miss D±_j.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RestrictedClass {
    pub side: Side,
    pub j: usize,
    #[serde(with = "crate::rational::serde_q")]
    pub h: Q,
    #[serde(with = "crate::rational::serde_q_vec")]
    pub d_same: Vec<Q>,
    #[serde(with = "crate::rational::serde_q_vec")]
    pub d_opp: Vec<Q>,
}

impl RestrictedClass {
    pub fn zero(side: Side, j: usize, r: usize) -> Self {
        RestrictedClass {
            side,
            j,
            h: Q::zero(),
            d_same: vec![Q::zero(); r],
            d_opp: vec![Q::zero(); r],
        }
    }

    pub fn r(&self) -> usize {
        self.d_same.len()
    }

    pub fn hyperplane(side: Side, j: usize, r: usize) -> Self {
        let mut c = Self::zero(side, j, r);
        c.h = Q::one();
        c
    }

    /// Same-side symbol D^{±j}_{±i}; zero outside 1..r.
    pub fn same(side: Side, j: usize, r: usize, i: i64) -> Self {
        let mut c = Self::zero(side, j, r);
        if (1..=r as i64).contains(&i) {
            c.d_same[i as usize - 1] = Q::one();
        }
        c
    }

    /// Opposite-side symbol D^{±j}_{∓i}; zero unless r+2-j ≤ i ≤ r.
    pub fn opp(side: Side, j: usize, r: usize, i: i64) -> Self {
        let mut c = Self::zero(side, j, r);
        if i >= (r + 2) as i64 - j as i64 && i <= r as i64 {
            c.d_opp[i as usize - 1] = Q::one();
        }
        c
    }

    pub fn dimension(r: usize) -> usize {
        1 + 2 * r
    }

    pub fn to_vec(&self) -> Vec<Q> {
        let mut v = vec![self.h.clone()];
        v.extend(self.d_same.iter().cloned());
        v.extend(self.d_opp.iter().cloned());
        v
    }

    pub fn from_vec(side: Side, j: usize, v: &[Q]) -> Self {
        let r = (v.len() - 1) / 2;
        RestrictedClass {
            side,
            j,
            h: v[0].clone(),
            d_same: v[1..=r].to_vec(),
            d_opp: v[r + 1..].to_vec(),
        }
    }

    /// Label of each vector position.
    pub fn labels(side: Side, r: usize) -> Vec<String> {
        let mut out = vec!["H".to_string()];
        out.extend((1..=r).map(|i| format!("D{}{}", side.sign(), i)));
        out.extend((1..=r).map(|i| format!("D{}{}", side.opposite().sign(), i)));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.to_vec().iter().all(|v| v.is_zero())
    }

    pub fn add_scaled(&self, other: &RestrictedClass, c: &Q) -> RestrictedClass {
        assert!(
            self.side == other.side && self.j == other.j && self.r() == other.r(),
            "classes on different boundary components"
        );
        let v: Vec<Q> = self
            .to_vec()
            .iter()
            .zip(other.to_vec())
            .map(|(a, b)| a + c * b)
            .collect();
        Self::from_vec(self.side, self.j, &v)
    }

    pub fn scale(&self, c: &Q) -> RestrictedClass {
        Self::zero(self.side, self.j, self.r()).add_scaled(self, c)
    }
}

impl std::ops::Add for &RestrictedClass {
    type Output = RestrictedClass;
    fn add(self, rhs: &RestrictedClass) -> RestrictedClass {
        self.add_scaled(rhs, &Q::one())
    }
}

impl std::ops::Sub for &RestrictedClass {
    type Output = RestrictedClass;
    fn sub(self, rhs: &RestrictedClass) -> RestrictedClass {
        self.add_scaled(rhs, &-Q::one())
    }
}

impl fmt::Display for RestrictedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = Self::labels(self.side, self.r());
        let v = self.to_vec();
        let terms: Vec<(String, &Q)> = labels.into_iter().zip(v.iter()).collect();
        f.write_str(&format_terms(&terms))
    }
}

fn check_component(params: &Params, j: usize) -> Result<usize> {
    params.require_normalized()?;
    let r = params.r();
    if j == 0 || j > r {
        return Err(Error::Param(format!("boundary component j={j} outside 1..={r}")));
    }
    Ok(r)
}

/// Symbol-wise restriction: opposite-side divisors D_i with i + j ≤ r+1 are dropped.
pub fn restrict(c: &AmbientClass, side: Side, j: usize) -> Result<RestrictedClass> {
    let r = c.r();
    if j == 0 || j > r {
        return Err(Error::Param(format!("boundary component j={j} outside 1..={r}")));
    }
    let (same, opp) = match side {
        Side::Minus => (&c.dminus, &c.dplus),
        Side::Plus => (&c.dplus, &c.dminus),
    };
    let mut out = RestrictedClass::zero(side, j, r);
    out.h = c.h.clone();
    out.d_same = same.clone();
    for i in r + 2 - j..=r {
        out.d_opp[i - 1] = opp[i - 1].clone();
    }
    Ok(out)
}

/// Restricted boundary relations in reduced echelon form, each with its pivot
/// position. Pivot priority: the index-r boundary symbol (same side, then
/// opposite), falling back to H.
pub fn restricted_relations(
    params: &Params,
    side: Side,
    j: usize,
) -> Result<Vec<(RestrictedClass, usize)>> {
    let r = check_component(params, j)?;
    let mut out: Vec<(RestrictedClass, usize)> = Vec::new();
    for (rel, _) in boundary_relations(params)? {
        let mut rr = restrict(&rel, side, j)?;
        for (o, piv) in &out {
            let c = &rr.to_vec()[*piv] / &o.to_vec()[*piv];
            if !c.is_zero() {
                rr = rr.add_scaled(o, &-c);
            }
        }
        let v = rr.to_vec();
        let Some(piv) = [r, 2 * r, 0]
            .into_iter()
            .find(|&pos| !v[pos].is_zero())
            .or_else(|| v.iter().position(|x| !x.is_zero()))
        else {
            continue;
        };
        for (o, _) in out.iter_mut() {
            let c = &o.to_vec()[piv] / &v[piv];
            if !c.is_zero() {
                *o = o.add_scaled(&rr, &-c);
            }
        }
        out.push((rr, piv));
    }
    Ok(out)
}

/// Normal form of a restricted class modulo the restricted boundary relations.
pub fn reduce(params: &Params, c: &RestrictedClass) -> Result<RestrictedClass> {
    let mut out = c.clone();
    for (rel, piv) in restricted_relations(params, c.side, c.j)? {
        let coef = &out.to_vec()[piv] / &rel.to_vec()[piv];
        if !coef.is_zero() {
            out = out.add_scaled(&rel, &-coef);
        }
    }
    Ok(out)
}

/// B̌_m on D±_j: the restriction of B_m.
pub fn check_b(params: &Params, side: Side, j: usize, m: usize) -> Result<RestrictedClass> {
    check_component(params, j)?;
    restrict(&class_of_b(params, m)?.class, side, j)
}

/// B̌_m, or the zero class when m falls outside 0..=r (the trivial-bundle convention).
pub fn check_b_or_zero(params: &Params, side: Side, j: usize, m: i64) -> Result<RestrictedClass> {
    let r = check_component(params, j)?;
    if m < 0 || m > r as i64 {
        return Ok(RestrictedClass::zero(side, j, r));
    }
    check_b(params, side, j, m as usize)
}

/// −K (in ambient normal form) restricted to D±_j by linearity.
pub fn restricted_anticanonical_direct(
    params: &Params,
    side: Side,
    j: usize,
) -> Result<RestrictedClass> {
    check_component(params, j)?;
    restrict(&anticanonical_class(params)?.reduced, side, j)
}

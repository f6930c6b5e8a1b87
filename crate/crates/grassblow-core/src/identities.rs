//! The restricted anticanonical forms and the linear identities among restricted
//! classes, evaluated as exact residual vectors.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::Params;
use crate::lattice::{anticanonical_b_terms, level_and_regime, Regime};
use crate::rational::q;
use crate::restriction::{
    check_b, check_b_or_zero, reduce, restricted_anticanonical_direct, RestrictedClass, Side,
};

/// Which reading of a suspected misprint to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reading {
    Literal,
    Corrected,
}

/// Builds restricted classes on a fixed component from B̌ and boundary symbols.
pub struct Terms<'a> {
    params: &'a Params,
    side: Side,
    j: usize,
    r: usize,
    regime: Regime,
}

impl<'a> Terms<'a> {
    pub fn new(params: &'a Params, side: Side, j: usize) -> Result<Self> {
        let (r, regime) = level_and_regime(params)?;
        if j == 0 || j > r {
            return Err(Error::Param(format!("boundary component j={j} outside 1..={r}")));
        }
        Ok(Terms {
            params,
            side,
            j,
            r,
            regime,
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn zero(&self) -> RestrictedClass {
        RestrictedClass::zero(self.side, self.j, self.r)
    }

    pub fn h(&self) -> RestrictedClass {
        RestrictedClass::hyperplane(self.side, self.j, self.r)
    }

    pub fn b(&self, m: i64) -> RestrictedClass {
        check_b_or_zero(self.params, self.side, self.j, m).expect("component validated")
    }

    pub fn same(&self, i: i64) -> RestrictedClass {
        RestrictedClass::same(self.side, self.j, self.r, i)
    }

    pub fn opp(&self, i: i64) -> RestrictedClass {
        RestrictedClass::opp(self.side, self.j, self.r, i)
    }

    pub fn lin(&self, terms: &[(i64, RestrictedClass)]) -> RestrictedClass {
        terms
            .iter()
            .fold(self.zero(), |acc, (c, t)| acc.add_scaled(t, &q(*c)))
    }

    pub fn same_sum(&self, from: i64, to: i64) -> RestrictedClass {
        (from..=to).fold(self.zero(), |acc, i| &acc + &self.same(i))
    }

    pub fn opp_sum(&self, from: i64, to: i64) -> RestrictedClass {
        (from..=to).fold(self.zero(), |acc, i| &acc + &self.opp(i))
    }

    /// The B̌ part of the restricted −K with the regime's coefficients.
    pub fn anticanonical_base(&self) -> RestrictedClass {
        anticanonical_b_terms(self.params)
            .expect("validated")
            .into_iter()
            .fold(self.zero(), |acc, (m, c)| acc.add_scaled(&self.b(m as i64), &q(c)))
    }

    /// Σ_{i=j+2}^r D_same(i) + Σ_{i=r+2-j}^r D_opp(i)
    pub fn anticanonical_tail(&self) -> RestrictedClass {
        let (j, r) = (self.j as i64, self.r as i64);
        &self.same_sum(j + 2, r) + &self.opp_sum(r + 2 - j, r)
    }
}

fn require_lemma_range(params: &Params) -> Result<()> {
    let r = params.r();
    if r < 3 {
        return Err(Error::Unsupported(format!(
            "restricted forms are tabulated for r >= 3; {params} has r = {r} (nearest stated case: r = 3)"
        )));
    }
    Ok(())
}

/// Right-hand side of the restricted −K in terms of B̌ classes and boundary symbols.
pub fn lemma_form(params: &Params, side: Side, j: usize, reading: Reading) -> Result<RestrictedClass> {
    require_lemma_range(params)?;
    let t = Terms::new(params, side, j)?;
    let (jj, r) = (j as i64, t.r() as i64);
    let regime = t.regime();
    let corrected = reading == Reading::Corrected;
    let middle = match (side, regime) {
        (Side::Minus, Regime::R1 | Regime::R3) => {
            if jj == r && corrected {
                &t.b(r - 1) - &t.b(r)
            } else {
                &t.b(jj) - &t.b(jj + 1)
            }
        }
        (Side::Minus, Regime::R2 | Regime::R4) => {
            if jj <= r - 2 {
                &t.b(jj) - &t.b(jj + 1)
            } else {
                t.b(r - 1)
            }
        }
        (Side::Plus, Regime::R1 | Regime::R3) => {
            if jj == r && corrected {
                &t.b(1) - &t.b(0)
            } else {
                &t.b(r - jj) - &t.b(r - jj - 1)
            }
        }
        (Side::Plus, Regime::R2) => {
            if jj <= r - 1 {
                &t.b(r - jj) - &t.b(r - 1 - jj)
            } else {
                &t.b(1) - &t.b(0)
            }
        }
        (Side::Plus, Regime::R4) => {
            if jj <= r - 2 {
                &t.b(r - jj) - &t.b(r - 1 - jj)
            } else {
                t.b(1)
            }
        }
    };
    Ok(&(&t.anticanonical_base() + &middle) + &t.anticanonical_tail())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictedAnticanonical {
    pub direct: RestrictedClass,
    pub lemma_form: RestrictedClass,
    /// Present when the stated form is a suspected misprint at this (regime, side, j).
    pub lemma_form_corrected: Option<RestrictedClass>,
}

pub fn restricted_anticanonical(params: &Params, side: Side, j: usize) -> Result<RestrictedAnticanonical> {
    require_lemma_range(params)?;
    let direct = restricted_anticanonical_direct(params, side, j)?;
    let literal = lemma_form(params, side, j, Reading::Literal)?;
    let corrected = lemma_form(params, side, j, Reading::Corrected)?;
    Ok(RestrictedAnticanonical {
        direct,
        lemma_form_corrected: (corrected != literal).then_some(corrected),
        lemma_form: literal,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityStatus {
    Holds,
    Discrepancy,
    NotStated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub id: String,
    pub side: Side,
    pub j: usize,
    pub status: IdentityStatus,
    /// lhs - rhs in normal form; None when the identity is not stated for this j
    pub residual: Option<RestrictedClass>,
    /// residual under the alternative reading, when one exists
    pub corrected_residual: Option<RestrictedClass>,
}

struct Stated {
    lhs: RestrictedClass,
    rhs: RestrictedClass,
    rhs_corrected: Option<RestrictedClass>,
}

fn stated(lhs: RestrictedClass, rhs: RestrictedClass) -> Option<Stated> {
    Some(Stated {
        lhs,
        rhs,
        rhs_corrected: None,
    })
}

/// Family names evaluated by the suite, in report order.
pub fn identity_families(r: usize) -> Vec<String> {
    let mut out: Vec<String> = ["anticanonical", "anticanonical-expanded", "sum", "step", "elimination", "b-boundary"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    out.extend((0..=r).map(|m| format!("b-display.{m}")));
    out
}

/// Transcribed closed form of B̌_m on D±_j, written out independently of `restrict`.
fn displayed_b(t: &Terms, side: Side, m: i64) -> RestrictedClass {
    let (j, r) = (t.j as i64, t.r as i64);
    let regime = t.regime();
    let edge_high = m == r && matches!(regime, Regime::R2 | Regime::R4);
    let edge_low = m == 0 && regime == Regime::R4;
    let mut out = t.h();
    match side {
        Side::Minus => {
            if edge_high {
                for i in 1..=r - 1 {
                    out = out.add_scaled(&t.same(i), &q(-(r + 1 - i)));
                }
            } else if edge_low {
                for i in r + 2 - j..=r - 1 {
                    out = out.add_scaled(&t.opp(i), &q(-(r + 1 - i)));
                }
            } else {
                for i in (r + 2 - j).max(1)..=r - m {
                    out = out.add_scaled(&t.opp(i), &q(-(r - m + 1 - i)));
                }
                for i in 1..=m {
                    out = out.add_scaled(&t.same(i), &q(-(m + 1 - i)));
                }
            }
        }
        Side::Plus => {
            if edge_high {
                for i in r + 2 - j..=r - 1 {
                    out = out.add_scaled(&t.opp(i), &q(-(r + 1 - i)));
                }
            } else if edge_low {
                for i in 1..=r - 1 {
                    out = out.add_scaled(&t.same(i), &q(-(r + 1 - i)));
                }
            } else {
                for i in 1..=r - m {
                    out = out.add_scaled(&t.same(i), &q(-(r - m + 1 - i)));
                }
                for i in (r + 2 - j).max(1)..=m {
                    out = out.add_scaled(&t.opp(i), &q(-(m + 1 - i)));
                }
            }
        }
    }
    out
}

fn statements(params: &Params, side: Side, j: usize) -> Result<Vec<(String, Option<Stated>)>> {
    let t = Terms::new(params, side, j)?;
    let (jj, r) = (j as i64, t.r() as i64);
    let regime = t.regime();
    let edge = matches!(regime, Regime::R2 | Regime::R4);
    let direct = restricted_anticanonical_direct(params, side, j)?;
    let mut out: Vec<(String, Option<Stated>)> = Vec::new();

    let literal = lemma_form(params, side, j, Reading::Literal)?;
    let corrected = lemma_form(params, side, j, Reading::Corrected)?;
    out.push((
        "anticanonical".into(),
        Some(Stated {
            lhs: direct.clone(),
            rhs: literal.clone(),
            rhs_corrected: (corrected != literal).then_some(corrected),
        }),
    ));

    let expanded = &(&t.anticanonical_base() + &t.same_sum(1, r)) + &t.opp_sum(r + 2 - jj, r);
    out.push(("anticanonical-expanded".into(), stated(direct, expanded)));

    // Σ_{i<j} D_same(i)
    let sum = if jj >= 2 {
        let lhs = t.same_sum(1, jj - 1);
        match side {
            Side::Minus => {
                let rhs = if regime == Regime::R4 && jj == 2 {
                    t.lin(&[(-1, t.b(jj - 1)), (1, t.opp(r + 2 - jj))])
                } else {
                    t.lin(&[(1, t.b(jj - 2)), (-1, t.b(jj - 1)), (1, t.opp(r + 2 - jj))])
                };
                stated(lhs, rhs)
            }
            Side::Plus => {
                if edge && jj == 2 {
                    let with_opp = t.lin(&[(-1, t.b(r + 1 - jj)), (1, t.opp(r + 2 - jj))]);
                    if regime == Regime::R4 {
                        // written with the boundary symbol of the other side's lattice
                        let as_written = t.lin(&[(-1, t.b(r + 1 - jj)), (1, t.same(r + 2 - jj))]);
                        Some(Stated {
                            lhs,
                            rhs: as_written,
                            rhs_corrected: Some(with_opp),
                        })
                    } else {
                        stated(lhs, with_opp)
                    }
                } else {
                    let rhs = t.lin(&[(1, t.b(r + 2 - jj)), (-1, t.b(r + 1 - jj)), (1, t.opp(r + 2 - jj))]);
                    stated(lhs, rhs)
                }
            }
        }
    } else {
        None
    };
    out.push(("sum".into(), sum));

    // D_same(j+1)
    let step = if jj <= r - 1 {
        let lhs = t.same(jj + 1);
        let rhs = match side {
            Side::Minus => {
                if edge && jj == r - 1 {
                    t.lin(&[(-1, t.b(jj - 1)), (2, t.b(jj))])
                } else if regime == Regime::R4 && jj == 1 {
                    t.lin(&[(-1, t.opp(r)), (2, t.b(jj)), (-1, t.b(jj + 1))])
                } else {
                    t.lin(&[(-1, t.b(jj - 1)), (2, t.b(jj)), (-1, t.b(jj + 1))])
                }
            }
            Side::Plus => {
                if regime == Regime::R2 && jj == 1 {
                    t.lin(&[(-1, t.opp(r)), (2, t.b(r - jj)), (-1, t.b(r - 1 - jj))])
                } else if regime == Regime::R4 && jj == 1 {
                    t.lin(&[(-1, t.b(r - jj - 1)), (2, t.b(r - jj)), (-1, t.opp(r))])
                } else if regime == Regime::R4 && jj == r - 1 {
                    t.lin(&[(2, t.b(r - jj)), (-1, t.b(r - jj + 1))])
                } else {
                    t.lin(&[(-1, t.b(r + 1 - jj)), (2, t.b(r - jj)), (-1, t.b(r - 1 - jj))])
                }
            }
        };
        stated(lhs, rhs)
    } else {
        None
    };
    out.push(("step".into(), step));

    // Σ_{i≤j+1} D_same(i), from subtracting consecutive B̌ displays
    let lhs = t.same_sum(1, jj + 1);
    let elimination = match (side, regime) {
        (Side::Minus, Regime::R1 | Regime::R3) => {
            (jj <= r - 1).then(|| &t.b(jj) - &t.b(jj + 1))
        }
        (Side::Minus, _) => Some(if jj <= r - 2 {
            &t.b(jj) - &t.b(jj + 1)
        } else {
            t.b(r - 1)
        }),
        (Side::Plus, Regime::R1 | Regime::R3) => {
            (jj <= r - 1).then(|| &t.b(r - jj) - &t.b(r - 1 - jj))
        }
        (Side::Plus, Regime::R2) => Some(if jj <= r - 1 {
            &t.b(r - jj) - &t.b(r - 1 - jj)
        } else {
            &t.b(1) - &t.b(0)
        }),
        (Side::Plus, Regime::R4) => Some(if jj <= r - 2 {
            &t.b(r - jj) - &t.b(r - 1 - jj)
        } else {
            t.b(1)
        }),
    };
    out.push(("elimination".into(), elimination.and_then(|rhs| stated(lhs, rhs))));

    // coinciding B̌ classes equal the restricted boundary symbols
    let boundary = if edge {
        let mut lhs = t.b(r);
        let mut rhs = match side {
            Side::Minus => t.same(r),
            Side::Plus => t.opp(r),
        };
        if regime == Regime::R4 {
            lhs = &lhs + &t.b(0);
            rhs = &rhs
                + &match side {
                    Side::Minus => t.opp(r),
                    Side::Plus => t.same(r),
                };
        }
        stated(lhs, rhs)
    } else {
        None
    };
    out.push(("b-boundary".into(), boundary));

    for m in 0..=r {
        let name = format!("b-display.{m}");
        let lhs = check_b(params, side, j, m as usize)?;
        out.push((name.clone(), stated(lhs, displayed_b(&t, side, m))));
    }
    Ok(out)
}

/// Evaluates every identity stated for (regime, side, j).
pub fn identity_suite(params: &Params, side: Side, j: usize) -> Result<Vec<IdentityRecord>> {
    require_lemma_range(params)?;
    let mut records = Vec::new();
    for (family, st) in statements(params, side, j)? {
        let id = format!("{}.{}", side.name(), family);
        let Some(st) = st else {
            records.push(IdentityRecord {
                id,
                side,
                j,
                status: IdentityStatus::NotStated,
                residual: None,
                corrected_residual: None,
            });
            continue;
        };
        let residual = reduce(params, &(&st.lhs - &st.rhs))?;
        let corrected_residual = match &st.rhs_corrected {
            Some(rc) => Some(reduce(params, &(&st.lhs - rc))?),
            None => None,
        };
        let status = if residual.is_zero() {
            IdentityStatus::Holds
        } else {
            IdentityStatus::Discrepancy
        };
        records.push(IdentityRecord {
            id,
            side,
            j,
            status,
            residual: Some(residual),
            corrected_residual,
        });
    }
    Ok(records)
}

/// Whether a residual vector is the zero class.
pub fn residual_vanishes(c: &Option<RestrictedClass>) -> bool {
    c.as_ref().is_some_and(|c| c.to_vec().iter().all(Zero::is_zero))
}

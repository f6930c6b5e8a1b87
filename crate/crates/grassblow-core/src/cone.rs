//! Effective-cone generators on D±_j and exact interior-point certificates.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::Params;
use crate::identities::{lemma_form, Reading};
use crate::lattice::{level_and_regime, Regime};
use crate::matrix::ExactMatrix;
use crate::rational::{frac, q, Q};
use crate::restriction::{check_b, reduce, restricted_anticanonical_direct, RestrictedClass, Side};
use crate::simplex::{solve, LpOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum GeneratorLabel {
    /// same-side boundary symbol D_same(i), i ≠ j
    Same(usize),
    /// opposite-side boundary symbol D_opp(i), r+2-j ≤ i ≤ r
    Opp(usize),
    /// restricted B̌_m
    BCheck(usize),
}

impl GeneratorLabel {
    pub fn render(&self, side: Side) -> String {
        match self {
            GeneratorLabel::Same(i) => format!("D{}{}", side.sign(), i),
            GeneratorLabel::Opp(i) => format!("D{}{}", side.opposite().sign(), i),
            GeneratorLabel::BCheck(m) => format!("B{m}"),
        }
    }
}

impl fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorLabel::Same(i) => write!(f, "d_same[{i}]"),
            GeneratorLabel::Opp(i) => write!(f, "d_opp[{i}]"),
            GeneratorLabel::BCheck(m) => write!(f, "bcheck[{m}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub label: GeneratorLabel,
    pub class: RestrictedClass,
    /// `class` in normal form modulo the restricted boundary relations
    pub reduced: RestrictedClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSet {
    pub params: Params,
    pub side: Side,
    pub j: usize,
    pub generators: Vec<Generator>,
}

impl GeneratorSet {
    pub fn labels(&self) -> Vec<GeneratorLabel> {
        self.generators.iter().map(|g| g.label).collect()
    }

    /// Rank of the matrix whose rows are the reduced generator vectors.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<Q>> = self.generators.iter().map(|g| g.reduced.to_vec()).collect();
        ExactMatrix::from_rows(rows).map_or(0, |m| m.rank())
    }

    /// Rank of the ambient restricted lattice after the relations.
    pub fn lattice_rank(&self) -> usize {
        let r = self.params.r();
        RestrictedClass::dimension(r) - relation_count(&self.params, self.side, self.j)
    }
}

fn relation_count(params: &Params, side: Side, j: usize) -> usize {
    crate::restriction::restricted_relations(params, side, j).map_or(0, |v| v.len())
}

/// Indices m of the B̌ generators for the regime.
pub fn b_generator_range(regime: Regime, r: usize) -> std::ops::RangeInclusive<usize> {
    match regime {
        Regime::R1 | Regime::R3 => 0..=r,
        Regime::R2 => 0..=r - 1,
        Regime::R4 => 1..=r - 1,
    }
}

fn require_standing(params: &Params) -> Result<(usize, Regime)> {
    let (r, regime) = level_and_regime(params)?;
    if r < 3 {
        return Err(Error::Unsupported(format!(
            "{params} has r = {r}; cone certificates assume r >= 3"
        )));
    }
    Ok((r, regime))
}

pub fn generator_set(params: &Params, side: Side, j: usize) -> Result<GeneratorSet> {
    let (r, regime) = require_standing(params)?;
    if j == 0 || j > r {
        return Err(Error::Param(format!("boundary component j={j} outside 1..={r}")));
    }
    let mut labelled: Vec<(GeneratorLabel, RestrictedClass)> = Vec::new();
    for i in (1..=r).filter(|&i| i != j) {
        labelled.push((GeneratorLabel::Same(i), RestrictedClass::same(side, j, r, i as i64)));
    }
    for i in r + 2 - j..=r {
        labelled.push((GeneratorLabel::Opp(i), RestrictedClass::opp(side, j, r, i as i64)));
    }
    for m in b_generator_range(regime, r) {
        labelled.push((GeneratorLabel::BCheck(m), check_b(params, side, j, m)?));
    }
    let generators = labelled
        .into_iter()
        .map(|(label, class)| {
            let reduced = reduce(params, &class)?;
            Ok(Generator {
                label,
                class,
                reduced,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GeneratorSet {
        params: *params,
        side,
        j,
        generators,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateStatus {
    Interior,
    Boundary,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelledCoefficient {
    pub label: GeneratorLabel,
    #[serde(with = "crate::rational::serde_q")]
    pub value: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteriorCertificate {
    pub status: CertificateStatus,
    /// smallest coefficient (the optimal t for LP certificates)
    #[serde(with = "crate::rational::serde_q")]
    pub slack: Q,
    pub coefficients: Vec<LabelledCoefficient>,
    pub generator_rank: usize,
    pub lattice_rank: usize,
    /// the LP was unbounded: the generators are positively dependent and the
    /// certificate is a feasible point scaled to slack ≥ 1
    pub positively_dependent: bool,
}

impl InteriorCertificate {
    fn infeasible(gens: &GeneratorSet) -> Self {
        InteriorCertificate {
            status: CertificateStatus::Infeasible,
            slack: Q::zero(),
            coefficients: Vec::new(),
            generator_rank: gens.rank(),
            lattice_rank: gens.lattice_rank(),
            positively_dependent: false,
        }
    }
}

fn check_target(target: &RestrictedClass, gens: &GeneratorSet) -> Result<()> {
    if target.side != gens.side || target.j != gens.j || target.r() != gens.params.r() {
        return Err(Error::Param(format!(
            "target lives on D{}_{} with r={}, generators on D{}_{} with r={}",
            target.side.sign(),
            target.j,
            target.r(),
            gens.side.sign(),
            gens.j,
            gens.params.r()
        )));
    }
    Ok(())
}

/// Maximize t subject to target = Σ λ_g g and λ_g ≥ t, via λ = t + μ with μ ≥ 0.
pub fn certify_interior(target: &RestrictedClass, gens: &GeneratorSet) -> Result<InteriorCertificate> {
    check_target(target, gens)?;
    let b = reduce(&gens.params, target)?.to_vec();
    let vecs: Vec<Vec<Q>> = gens.generators.iter().map(|g| g.reduced.to_vec()).collect();
    let ng = vecs.len();
    let dim = b.len();
    let a: Vec<Vec<Q>> = (0..dim)
        .map(|row| {
            let mut line: Vec<Q> = vecs.iter().map(|v| v[row].clone()).collect();
            line.push(vecs.iter().map(|v| v[row].clone()).sum());
            line
        })
        .collect();
    let mut cost = vec![Q::zero(); ng];
    cost.push(Q::one());
    let (x, positively_dependent) = match solve(&a, &b, &cost) {
        LpOutcome::Infeasible => return Ok(InteriorCertificate::infeasible(gens)),
        LpOutcome::Optimal { x, .. } => (x, false),
        LpOutcome::Unbounded { x, ray } => {
            let (tx, tr) = (&x[ng], &ray[ng]);
            let step = if tx >= &Q::one() {
                Q::zero()
            } else {
                (Q::one() - tx) / tr
            };
            let point = x.iter().zip(&ray).map(|(xi, ri)| xi + &step * ri).collect();
            (point, true)
        }
    };
    let t = x[ng].clone();
    let coefficients = gens
        .generators
        .iter()
        .zip(&x)
        .map(|(g, mu)| LabelledCoefficient {
            label: g.label,
            value: mu + &t,
        })
        .collect();
    let cert = InteriorCertificate {
        status: if t.is_positive() {
            CertificateStatus::Interior
        } else {
            CertificateStatus::Boundary
        },
        slack: t,
        coefficients,
        generator_rank: gens.rank(),
        lattice_rank: gens.lattice_rank(),
        positively_dependent,
    };
    Ok(cert)
}

/// Independent replay: Σ coeff·generator equals the target in normal form, and
/// every coefficient is at least the stated slack (strictly positive for Interior).
pub fn verify_certificate(
    target: &RestrictedClass,
    gens: &GeneratorSet,
    cert: &InteriorCertificate,
) -> Result<bool> {
    check_target(target, gens)?;
    if cert.status == CertificateStatus::Infeasible {
        return Ok(cert.coefficients.is_empty());
    }
    let by_label: BTreeMap<GeneratorLabel, &Generator> =
        gens.generators.iter().map(|g| (g.label, g)).collect();
    if cert.coefficients.len() != gens.generators.len() {
        return Ok(false);
    }
    let r = gens.params.r();
    let mut sum = RestrictedClass::zero(gens.side, gens.j, r);
    for c in &cert.coefficients {
        let Some(g) = by_label.get(&c.label) else {
            return Ok(false);
        };
        if c.value < cert.slack {
            return Ok(false);
        }
        sum = sum.add_scaled(&g.class, &c.value);
    }
    let min = cert.coefficients.iter().map(|c| c.value.clone()).min().unwrap_or_else(Q::zero);
    let slack_ok = match cert.status {
        CertificateStatus::Interior => cert.slack.is_positive() && min.is_positive(),
        CertificateStatus::Boundary => !cert.slack.is_positive(),
        CertificateStatus::Infeasible => false,
    };
    Ok(slack_ok && reduce(&gens.params, &sum)? == reduce(&gens.params, target)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaCertificate {
    pub found: bool,
    #[serde(with = "opt_q")]
    pub delta1: Option<Q>,
    #[serde(with = "opt_q")]
    pub delta2: Option<Q>,
    pub certificate: InteriorCertificate,
}

mod opt_q {
    use super::*;
    use crate::rational::RationalJson;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Q>, ser: S) -> std::result::Result<S::Ok, S::Error> {
        x.as_ref().map(RationalJson::from).serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<Option<Q>, D::Error> {
        let raw = Option::<RationalJson>::deserialize(de)?;
        raw.map(|r| r.to_q().ok_or_else(|| serde::de::Error::custom("malformed rational")))
            .transpose()
    }
}

const DELTA_DEPTH: u32 = 20;

/// Coefficients over generator labels of a linear combination of labelled terms.
type LabelForm = BTreeMap<GeneratorLabel, Q>;

fn bump(form: &mut LabelForm, label: GeneratorLabel, c: &Q) {
    *form.entry(label).or_insert_with(Q::zero) += c;
}

/// The restricted −K written over generator labels (corrected reading at j = r),
/// together with the two vanishing combinations used to perturb it.
fn delta_forms(r: usize, side: Side, j: usize, b_top: i64, b_zero: i64) -> (LabelForm, Option<LabelForm>, Option<LabelForm>) {
    let (jj, rr) = (j as i64, r as i64);
    // B̌ index as seen from this side: minus uses m, plus mirrors m ↦ r-m
    let bi = |m: i64| -> Option<GeneratorLabel> {
        let idx = match side {
            Side::Minus => m,
            Side::Plus => rr - m,
        };
        (0..=rr).contains(&idx).then_some(GeneratorLabel::BCheck(idx as usize))
    };
    let same = |i: i64| GeneratorLabel::Same(i as usize);
    let opp = |i: i64| GeneratorLabel::Opp(i as usize);
    let mut base = LabelForm::new();
    bump(&mut base, GeneratorLabel::BCheck(0), &q(b_zero));
    for m in 1..r {
        bump(&mut base, GeneratorLabel::BCheck(m), &q(2));
    }
    bump(&mut base, GeneratorLabel::BCheck(r), &q(b_top));
    // B̌_j - B̌_{j+1} (mirrored on the plus side); at j = r use B̌_{r-1} - B̌_r
    let (up, down) = if jj < rr { (jj, jj + 1) } else { (rr - 1, rr) };
    for (m, c) in [(up, 1), (down, -1)] {
        if let Some(l) = bi(m) {
            bump(&mut base, l, &q(c));
        }
    }
    for i in jj + 2..=rr {
        bump(&mut base, same(i), &Q::one());
    }
    for i in rr + 2 - jj..=rr {
        bump(&mut base, opp(i), &Q::one());
    }
    // Σ_{i<j} D_same(i) - (B̌_{j-2} - B̌_{j-1} + D_opp(r+2-j)) = 0
    let first = (jj >= 2).then(|| {
        let mut f = LabelForm::new();
        for i in 1..jj {
            bump(&mut f, same(i), &Q::one());
        }
        for (m, c) in [(jj - 2, -1), (jj - 1, 1)] {
            if let Some(l) = bi(m) {
                bump(&mut f, l, &q(c));
            }
        }
        bump(&mut f, opp(rr + 2 - jj), &-Q::one());
        f
    });
    // D_same(j+1) - (-B̌_{j-1} + 2B̌_j - B̌_{j+1}) = 0
    let second = (jj <= rr - 1).then(|| {
        let mut f = LabelForm::new();
        bump(&mut f, same(jj + 1), &Q::one());
        for (m, c) in [(jj - 1, 1), (jj, -2), (jj + 1, 1)] {
            if let Some(l) = bi(m) {
                bump(&mut f, l, &q(c));
            }
        }
        f
    });
    (base, first, second)
}

/// Perturbs the restricted −K by small multiples of two vanishing combinations
/// until every generator coefficient is strictly positive.
pub fn delta_certificate(params: &Params, side: Side, j: usize) -> Result<DeltaCertificate> {
    let (r, regime) = require_standing(params)?;
    if !matches!(regime, Regime::R1 | Regime::R3) {
        return Err(Error::Unsupported(format!(
            "the explicit perturbation is only set up for R1 and R3, {params} is {regime}"
        )));
    }
    let gens = generator_set(params, side, j)?;
    let target = restricted_anticanonical_direct(params, side, j)?;
    let terms = crate::lattice::anticanonical_b_terms(params)?;
    let coef = |m: usize| terms.iter().find(|(k, _)| *k == m).map_or(0, |(_, c)| *c);
    let (base, first, second) = delta_forms(r, side, j, coef(r), coef(0));
    // the unperturbed form must already equal the tabulated right-hand side
    let lf = lemma_form(params, side, j, Reading::Corrected)?;
    let mut sum = RestrictedClass::zero(side, j, r);
    for g in &gens.generators {
        if let Some(c) = base.get(&g.label) {
            sum = sum.add_scaled(&g.class, c);
        }
    }
    if reduce(params, &sum)? != reduce(params, &lf)? {
        return Err(Error::Domain(format!(
            "unperturbed form on D{}{j} disagrees with the restricted anticanonical class",
            side.sign()
        )));
    }
    let labels = gens.labels();
    let deltas: Vec<Q> = (1..=DELTA_DEPTH).map(|d| frac(1, 1i64 << d)).collect();
    let d1_choices: Vec<Option<Q>> = if first.is_some() {
        deltas.iter().cloned().map(Some).collect()
    } else {
        vec![None]
    };
    let d2_choices: Vec<Option<Q>> = if second.is_some() {
        deltas.iter().cloned().map(Some).collect()
    } else {
        vec![None]
    };
    for d1 in &d1_choices {
        for d2 in &d2_choices {
            let mut form = base.clone();
            if let (Some(f), Some(d)) = (&first, d1) {
                for (l, c) in f {
                    bump(&mut form, *l, &(c * d));
                }
            }
            if let (Some(f), Some(d)) = (&second, d2) {
                for (l, c) in f {
                    bump(&mut form, *l, &(c * d));
                }
            }
            if form.keys().any(|l| !labels.contains(l)) {
                return Err(Error::Unsupported(format!(
                    "perturbation uses symbols outside the generator set on D{}_{j}",
                    side.sign()
                )));
            }
            let coefficients: Vec<LabelledCoefficient> = labels
                .iter()
                .map(|l| LabelledCoefficient {
                    label: *l,
                    value: form.get(l).cloned().unwrap_or_else(Q::zero),
                })
                .collect();
            if coefficients.iter().all(|c| c.value.is_positive()) {
                let slack = coefficients.iter().map(|c| c.value.clone()).min().unwrap_or_else(Q::zero);
                let certificate = InteriorCertificate {
                    status: CertificateStatus::Interior,
                    slack,
                    coefficients,
                    generator_rank: gens.rank(),
                    lattice_rank: gens.lattice_rank(),
                    positively_dependent: false,
                };
                if !verify_certificate(&target, &gens, &certificate)? {
                    return Err(Error::Domain(format!(
                        "perturbed form on D{}_{j} of {params} does not reproduce the restricted anticanonical class",
                        side.sign()
                    )));
                }
                return Ok(DeltaCertificate {
                    found: true,
                    delta1: d1.clone(),
                    delta2: d2.clone(),
                    certificate,
                });
            }
        }
    }
    Ok(DeltaCertificate {
        found: false,
        delta1: None,
        delta2: None,
        certificate: InteriorCertificate {
            status: CertificateStatus::Boundary,
            slack: Q::zero(),
            coefficients: Vec::new(),
            generator_rank: gens.rank(),
            lattice_rank: gens.lattice_rank(),
            positively_dependent: false,
        },
    })
}

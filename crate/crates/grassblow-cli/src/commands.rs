use serde_json::{json, Value};

use grassblow_core::atlas::{chart_count, random_point, transition_sweep, two_cascade_pattern};
use grassblow_core::cone::{
    certify_interior, delta_certificate, generator_set, verify_certificate, CertificateStatus, InteriorCertificate,
};
use grassblow_core::fixtures::Fixtures;
use grassblow_core::identities::{identity_suite, residual_vanishes, IdentityStatus};
use grassblow_core::lattice::{
    anticanonical_class, boundary_relations, canonical_class, class_of_b, enumerate_orbit_pairs, level_and_regime,
    normalize_parameters, normalized_triples, Normalization, Regime,
};
use grassblow_core::grassmann::block_sizes;
use grassblow_core::rational::{RationalJson, RationalSampler, Q};
use grassblow_core::restriction::restricted_anticanonical_direct;
use grassblow_core::{Params, Side};

use crate::report::{add_normalization, header, Failure, Report, EXIT_OK, EXIT_VERIFY};
use crate::Config;

type Outcome = Result<Report, Failure>;

fn rational(x: &Q) -> Value {
    json!(RationalJson::from(x))
}

fn normalized(cfg: &Config) -> Result<Normalization, Failure> {
    let (s, p, n) = cfg.triple.ok_or_else(|| Failure::param("parameters out of range: --s --p --n required"))?;
    Ok(normalize_parameters(s, p, n)?)
}

fn sides(cfg: &Config) -> Vec<Side> {
    cfg.side.map_or(vec![Side::Minus, Side::Plus], |s| vec![s])
}

fn components(cfg: &Config, r: usize) -> Result<Vec<usize>, Failure> {
    match cfg.j {
        Some(j) if j == 0 || j > r => Err(Failure::param(format!("parameters out of range: j={j} outside 1..={r}"))),
        Some(j) => Ok(vec![j]),
        None => Ok((1..=r).collect()),
    }
}

fn sweep_triples(cfg: &Config, min_r: usize) -> Result<Vec<Params>, Failure> {
    let max_n = cfg.max_n.expect("sweep needs max_n");
    if max_n < 2 {
        return Err(Failure::param(format!("parameters out of range: --max-n {max_n} below 2")));
    }
    Ok(normalized_triples(max_n).into_iter().filter(|p| p.r() >= min_r).collect())
}

fn finish(header: serde_json::Map<String, Value>, body: Value, findings: Vec<Value>, failed: bool) -> Report {
    Report {
        header,
        body,
        findings,
        code: if failed { EXIT_VERIFY } else { EXIT_OK },
    }
}

pub fn lattice(cfg: &Config) -> Outcome {
    let mut h = header("lattice", cfg.seed, cfg.sign);
    if cfg.triple.is_none() {
        let triples = sweep_triples(cfg, 1)?;
        h.insert("max_n".into(), json!(cfg.max_n));
        let mut rows = Vec::new();
        let mut findings = Vec::new();
        for p in &triples {
            let (r, regime) = level_and_regime(p)?;
            let k = anticanonical_class(p)?;
            let ok = k.reduced.h == Q::from_integer(p.n.into());
            if !ok {
                findings.push(json!({ "params": p, "problem": "anticanonical degree differs from n" }));
            }
            rows.push(json!({ "params": p, "r": r, "regime": regime, "h_coefficient": rational(&k.reduced.h) }));
        }
        let body = json!({ "triples": rows.len(), "rows": rows });
        let failed = !findings.is_empty();
        return Ok(finish(h, body, findings, failed));
    }
    let norm = normalized(cfg)?;
    add_normalization(&mut h, &norm);
    let p = norm.params;
    let (r, regime) = level_and_regime(&p)?;
    let b_classes = (0..=r)
        .map(|m| {
            let b = class_of_b(&p, m)?;
            Ok(json!({ "m": m, "class": b.class.to_string(), "coincides_with_boundary": b.coincides_with_boundary }))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let k = anticanonical_class(&p)?;
    let relations: Vec<String> = boundary_relations(&p)?.iter().map(|(c, _)| format!("{c} = 0")).collect();
    let body = json!({
        "r": r,
        "regime": regime,
        "block_sizes": block_sizes(&p),
        "b_classes": b_classes,
        "relations": relations,
        "anticanonical": {
            "b_terms": k.b_terms.iter().map(|(m, c)| json!({ "m": m, "coefficient": c })).collect::<Vec<_>>(),
            "expanded": k.expanded.to_string(),
            "reduced": k.reduced.to_string(),
            "h_coefficient": rational(&k.reduced.h),
        },
        "canonical": canonical_class(&p)?.to_string(),
        "orbit_pairs": enumerate_orbit_pairs(r)?.len(),
    });
    let mut findings = Vec::new();
    if k.reduced.h != Q::from_integer(p.n.into()) {
        findings.push(json!({ "params": p, "problem": "anticanonical degree differs from n" }));
    }
    let failed = !findings.is_empty();
    Ok(finish(h, body, findings, failed))
}

fn certificate_json(cert: &InteriorCertificate, side: Side, verified: bool) -> Value {
    json!({
        "status": cert.status,
        "slack": rational(&cert.slack),
        "verified": verified,
        "positively_dependent": cert.positively_dependent,
        "generator_rank": cert.generator_rank,
        "lattice_rank": cert.lattice_rank,
        "coefficients": cert.coefficients.iter()
            .map(|c| json!({ "generator": c.label.render(side), "value": rational(&c.value) }))
            .collect::<Vec<_>>(),
    })
}

/// Certificates for one triple; returns (entries, findings).
fn certify_triple(cfg: &Config, p: &Params) -> Result<(Vec<Value>, Vec<Value>), Failure> {
    let (r, regime) = level_and_regime(p)?;
    let mut entries = Vec::new();
    let mut findings = Vec::new();
    for side in sides(cfg) {
        for j in components(cfg, r)? {
            let gens = generator_set(p, side, j)?;
            let target = restricted_anticanonical_direct(p, side, j)?;
            let cert = certify_interior(&target, &gens)?;
            let verified = verify_certificate(&target, &gens, &cert)?;
            if cert.status != CertificateStatus::Interior || !verified {
                findings.push(json!({ "params": p, "side": side, "j": j, "problem": "no verified interior certificate" }));
            }
            let delta = if matches!(regime, Regime::R1 | Regime::R3) {
                let d = delta_certificate(p, side, j)?;
                if !d.found {
                    findings.push(json!({ "params": p, "side": side, "j": j, "problem": "no perturbation found" }));
                }
                json!({
                    "found": d.found,
                    "delta1": d.delta1.as_ref().map(rational),
                    "delta2": d.delta2.as_ref().map(rational),
                    "slack": rational(&d.certificate.slack),
                })
            } else {
                json!("not applicable in this regime")
            };
            entries.push(json!({
                "side": side,
                "j": j,
                "target": target.to_string(),
                "generators": gens.generators.iter().map(|g| g.label.render(side)).collect::<Vec<_>>(),
                "certificate": certificate_json(&cert, side, verified),
                "perturbation": delta,
            }));
        }
    }
    Ok((entries, findings))
}

pub fn certify(cfg: &Config) -> Outcome {
    let mut h = header("certify", cfg.seed, cfg.sign);
    if cfg.triple.is_none() {
        h.insert("max_n".into(), json!(cfg.max_n));
        let mut rows = Vec::new();
        let mut findings = Vec::new();
        for p in sweep_triples(cfg, 3)? {
            let (entries, f) = certify_triple(cfg, &p)?;
            let interior = entries.iter().filter(|e| e["certificate"]["status"] == json!("interior")).count();
            rows.push(json!({ "params": p, "certificates": entries.len(), "interior": interior }));
            findings.extend(f);
        }
        let failed = !findings.is_empty();
        return Ok(finish(h, json!({ "rows": rows }), findings, failed));
    }
    let norm = normalized(cfg)?;
    add_normalization(&mut h, &norm);
    let p = norm.params;
    let (r, regime) = level_and_regime(&p)?;
    let (entries, findings) = certify_triple(cfg, &p)?;
    let interior = entries.iter().filter(|e| e["certificate"]["status"] == json!("interior")).count();
    let body = json!({ "r": r, "regime": regime, "interior": interior, "certificates": entries });
    let failed = !findings.is_empty();
    Ok(finish(h, body, findings, failed))
}

/// Suite for one triple; returns (records, discrepancy findings, unexpected count).
fn suite_triple(cfg: &Config, fx: &Fixtures, p: &Params) -> Result<(Vec<Value>, Vec<Value>, usize), Failure> {
    let r = p.r();
    let mut records = Vec::new();
    let mut findings = Vec::new();
    let mut unexpected = 0;
    for side in sides(cfg) {
        for j in components(cfg, r)? {
            for rec in identity_suite(p, side, j)? {
                records.push(json!({ "id": rec.id, "side": side, "j": j, "status": rec.status }));
                if rec.status != IdentityStatus::Discrepancy {
                    continue;
                }
                let listed = fx.is_suspected(p, &rec)?;
                let corrected = residual_vanishes(&rec.corrected_residual);
                if !(listed && corrected) {
                    unexpected += 1;
                }
                findings.push(json!({
                    "params": p,
                    "id": rec.id,
                    "side": side,
                    "j": j,
                    "residual": rec.residual.as_ref().map(|c| c.to_string()),
                    "on_suspected_list": listed,
                    "vanishes_when_corrected": corrected,
                }));
            }
        }
    }
    Ok((records, findings, unexpected))
}

pub fn identities(cfg: &Config) -> Outcome {
    let fx = Fixtures::load();
    let mut h = header("identities", cfg.seed, cfg.sign);
    h.insert("fixtures_version".into(), json!(fx.version));
    let count = |recs: &[Value], status: IdentityStatus| recs.iter().filter(|r| r["status"] == json!(status)).count();
    if cfg.triple.is_none() {
        h.insert("max_n".into(), json!(cfg.max_n));
        let mut rows = Vec::new();
        let mut findings = Vec::new();
        let mut unexpected = 0;
        for p in sweep_triples(cfg, 3)? {
            let (records, f, u) = suite_triple(cfg, &fx, &p)?;
            rows.push(json!({
                "params": p,
                "holds": count(&records, IdentityStatus::Holds),
                "discrepancy": count(&records, IdentityStatus::Discrepancy),
                "not_stated": count(&records, IdentityStatus::NotStated),
            }));
            findings.extend(f);
            unexpected += u;
        }
        return Ok(finish(h, json!({ "rows": rows, "unexpected": unexpected }), findings, unexpected > 0));
    }
    let norm = normalized(cfg)?;
    add_normalization(&mut h, &norm);
    let p = norm.params;
    let (r, regime) = level_and_regime(&p)?;
    let (records, findings, unexpected) = suite_triple(cfg, &fx, &p)?;
    let body = json!({
        "r": r,
        "regime": regime,
        "holds": count(&records, IdentityStatus::Holds),
        "discrepancy": count(&records, IdentityStatus::Discrepancy),
        "not_stated": count(&records, IdentityStatus::NotStated),
        "unexpected": unexpected,
        "records": records,
    });
    Ok(finish(h, body, findings, unexpected > 0))
}

pub fn atlas(cfg: &Config) -> Outcome {
    let fx = Fixtures::load();
    let mut h = header("atlas", cfg.seed, cfg.sign);
    let norm = normalized(cfg)?;
    add_normalization(&mut h, &norm);
    let p = norm.params;
    let r = p.r();
    if let Some(l) = cfg.l {
        if l > r {
            return Err(Failure::param(format!("parameters out of range: level l={l} outside 0..={r}")));
        }
    }
    let counts = (0..=r)
        .map(|l| Ok(json!({ "l": l, "charts": chart_count(&p, l)? })))
        .collect::<Result<Vec<_>, Failure>>()?;
    let mut findings = Vec::new();

    let golden = fx.golden_chart;
    let mut rng = RationalSampler::new(cfg.seed);
    let gpt = random_point(&golden.params(), &golden.chart(), &mut rng)?;
    let entries = two_cascade_pattern(&golden.params(), &golden.chart(), &gpt)?;
    let golden_ok = entries.iter().all(|e| e.expected == e.actual);
    if !golden_ok {
        findings.push(json!({ "problem": "golden 4x8 pattern mismatch" }));
    }
    let mut body = json!({
        "r": r,
        "chart_counts": counts,
        "golden": {
            "params": golden.params(),
            "chart": golden.chart(),
            "entries": entries,
            "matches": golden_ok,
        },
    });
    if let Some(l) = cfg.l {
        let sweep = transition_sweep(&p, l, cfg.points, cfg.seed, cfg.sign, None)?;
        if !sweep.passed() {
            findings.push(json!({ "problem": "transition check failed", "detail": sweep.first_failure }));
        }
        body["transitions"] = json!(sweep);
    }
    let failed = !findings.is_empty();
    Ok(finish(h, body, findings, failed))
}

//! Python bindings: parameter normalization, lattice data, the identity suite,
//! interior certificates and atlas checks. Rationals come back as `fractions.Fraction`.

use grassblow_core::atlas;
use grassblow_core::cone::{self, InteriorCertificate};
use grassblow_core::grassmann::{self, Params, SignConvention};
use grassblow_core::identities::{self, IdentityStatus};
use grassblow_core::lattice::{self, Transform};
use grassblow_core::{Error, Side, Q};
use pyo3::exceptions::{PyNotImplementedError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Unsupported(_) => PyNotImplementedError::new_err(e.to_string()),
        Error::Indeterminate(_) | Error::Domain(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, x: &Q) -> PyResult<Bound<'py, PyAny>> {
    let cls = py.import("fractions")?.getattr("Fraction")?;
    let num = py.import("builtins")?.getattr("int")?.call1((x.numer().to_string(),))?;
    let den = py.import("builtins")?.getattr("int")?.call1((x.denom().to_string(),))?;
    cls.call1((num, den))
}

fn parse_side(side: &str) -> PyResult<Side> {
    match side {
        "minus" | "-" => Ok(Side::Minus),
        "plus" | "+" => Ok(Side::Plus),
        _ => Err(PyValueError::new_err(format!("side must be 'minus' or 'plus', got {side:?}"))),
    }
}

fn parse_sign(sign: &str) -> PyResult<SignConvention> {
    match sign {
        "listed" => Ok(SignConvention::Listed),
        "ascending" => Ok(SignConvention::Ascending),
        _ => Err(PyValueError::new_err(format!("sign must be 'listed' or 'ascending', got {sign:?}"))),
    }
}

/// A normalized parameter triple (s, p, n).
#[pyclass(frozen, name = "Triple")]
struct Triple {
    params: Params,
    input: Params,
    transforms: Vec<Transform>,
}

#[pymethods]
impl Triple {
    #[new]
    fn new(s: usize, p: usize, n: usize) -> PyResult<Self> {
        let norm = lattice::normalize_parameters(s, p, n).map_err(to_py)?;
        Ok(Triple {
            params: norm.params,
            input: norm.input,
            transforms: norm.log,
        })
    }

    #[getter]
    fn s(&self) -> usize {
        self.params.s
    }

    #[getter]
    fn p(&self) -> usize {
        self.params.p
    }

    #[getter]
    fn n(&self) -> usize {
        self.params.n
    }

    #[getter]
    fn r(&self) -> usize {
        self.params.r()
    }

    #[getter]
    fn input(&self) -> (usize, usize, usize) {
        (self.input.s, self.input.p, self.input.n)
    }

    /// Applied normalization steps, "DUAL" and/or "USD".
    #[getter]
    fn transforms(&self) -> Vec<&'static str> {
        self.transforms
            .iter()
            .map(|t| match t {
                Transform::Dual => "DUAL",
                Transform::Usd => "USD",
            })
            .collect()
    }

    #[getter]
    fn regime(&self) -> PyResult<String> {
        Ok(lattice::level_and_regime(&self.params).map_err(to_py)?.1.to_string())
    }

    fn block_sizes(&self) -> Vec<usize> {
        grassmann::block_sizes(&self.params)
    }

    /// Coefficients (H, D-1..D-r, D+1..D+r) of the reduced anticanonical class.
    fn anticanonical<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let k = lattice::anticanonical_class(&self.params).map_err(to_py)?;
        k.reduced.to_vec().iter().map(|x| fraction(py, x)).collect()
    }

    fn anticanonical_str(&self) -> PyResult<String> {
        Ok(lattice::anticanonical_class(&self.params).map_err(to_py)?.reduced.to_string())
    }

    fn chart_count(&self, l: usize) -> PyResult<usize> {
        atlas::chart_count(&self.params, l).map_err(to_py)
    }

    /// Identity records for one boundary component, as dicts.
    fn identity_suite<'py>(&self, py: Python<'py>, side: &str, j: usize) -> PyResult<Bound<'py, PyList>> {
        let side = parse_side(side)?;
        let out = PyList::empty(py);
        for rec in identities::identity_suite(&self.params, side, j).map_err(to_py)? {
            let d = PyDict::new(py);
            d.set_item("id", &rec.id)?;
            d.set_item("side", side.name())?;
            d.set_item("j", rec.j)?;
            d.set_item(
                "status",
                match rec.status {
                    IdentityStatus::Holds => "holds",
                    IdentityStatus::Discrepancy => "discrepancy",
                    IdentityStatus::NotStated => "not-stated",
                },
            )?;
            d.set_item("residual", rec.residual.as_ref().map(|c| c.to_string()))?;
            d.set_item("corrected_residual", rec.corrected_residual.as_ref().map(|c| c.to_string()))?;
            out.append(d)?;
        }
        Ok(out)
    }

    /// LP interior certificate for the restricted anticanonical class.
    fn certify<'py>(&self, py: Python<'py>, side: &str, j: usize) -> PyResult<Bound<'py, PyDict>> {
        let side = parse_side(side)?;
        let gens = cone::generator_set(&self.params, side, j).map_err(to_py)?;
        let target = grassblow_core::restriction::restricted_anticanonical_direct(&self.params, side, j).map_err(to_py)?;
        let cert = cone::certify_interior(&target, &gens).map_err(to_py)?;
        let verified = cone::verify_certificate(&target, &gens, &cert).map_err(to_py)?;
        certificate_dict(py, &cert, side, verified)
    }

    /// The two-parameter construction; only defined in the regimes with both extreme B classes.
    fn delta_certificate<'py>(&self, py: Python<'py>, side: &str, j: usize) -> PyResult<Bound<'py, PyDict>> {
        let side = parse_side(side)?;
        let d = cone::delta_certificate(&self.params, side, j).map_err(to_py)?;
        let out = certificate_dict(py, &d.certificate, side, d.found)?;
        out.set_item("delta1", d.delta1.as_ref().map(|x| fraction(py, x)).transpose()?)?;
        out.set_item("delta2", d.delta2.as_ref().map(|x| fraction(py, x)).transpose()?)?;
        Ok(out)
    }

    #[pyo3(signature = (l, points=25, seed=20240917, sign="listed"))]
    fn transition_sweep<'py>(
        &self,
        py: Python<'py>,
        l: usize,
        points: usize,
        seed: u64,
        sign: &str,
    ) -> PyResult<Bound<'py, PyDict>> {
        let sweep = atlas::transition_sweep(&self.params, l, points, seed, parse_sign(sign)?, None).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("charts", sweep.charts)?;
        d.set_item("pairs", sweep.pairs)?;
        d.set_item("consistent", sweep.consistent)?;
        d.set_item("inconsistent", sweep.inconsistent)?;
        d.set_item("starved_pairs", sweep.starved_pairs)?;
        d.set_item("passed", sweep.passed())?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("Triple{}", self.params)
    }
}

fn certificate_dict<'py>(
    py: Python<'py>,
    cert: &InteriorCertificate,
    side: Side,
    verified: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("status", format!("{:?}", cert.status).to_lowercase())?;
    d.set_item("slack", fraction(py, &cert.slack)?)?;
    let coeffs = PyDict::new(py);
    for c in &cert.coefficients {
        coeffs.set_item(c.label.render(side), fraction(py, &c.value)?)?;
    }
    d.set_item("coefficients", coeffs)?;
    d.set_item("verified", verified)?;
    Ok(d)
}

/// Number of pairs of boundary index sets that meet, for level r.
#[pyfunction]
fn orbit_pair_count(r: usize) -> PyResult<usize> {
    Ok(lattice::enumerate_orbit_pairs(r).map_err(to_py)?.len())
}

/// Every normalized triple with n up to `max_n`.
#[pyfunction]
fn normalized_triples(max_n: usize) -> Vec<(usize, usize, usize)> {
    lattice::normalized_triples(max_n).into_iter().map(|p| (p.s, p.p, p.n)).collect()
}

#[pymodule]
fn grassblow(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Triple>()?;
    m.add_function(wrap_pyfunction!(orbit_pair_count, m)?)?;
    m.add_function(wrap_pyfunction!(normalized_triples, m)?)?;
    Ok(())
}

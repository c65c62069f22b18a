//! Python bindings: `System`, `Series` and the main decision procedures.
//!
//! Series arguments accept either a `Series` or a string in the system's
//! variables. Results come back as plain dicts with rendered strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use fps_rewrite::confluence::{check_standard_basis, join, JoinResult};
use fps_rewrite::oracle::{cross_validate, MembershipOracle, DEFAULT_SEED};
use fps_rewrite::tars;
use fps_rewrite::{
    limit_coefficients, Field, MembershipVerdict, OrderKind, RewriteSystem, Ring,
    Series, SystemConfig, TieBreak,
};

pyo3::create_exception!(fps_rewrite_py, FpsError, PyValueError);

fn err(e: fps_rewrite::Error) -> PyErr {
    FpsError::new_err(e.to_string())
}

#[pyclass(name = "Series", module = "fps_rewrite_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PySeries {
    inner: Series,
    ring: Ring,
}

#[pymethods]
impl PySeries {
    /// `None` for exact series.
    #[getter]
    fn precision(&self) -> Option<u32> {
        self.inner.prec().finite()
    }

    /// `(exponents, coefficient)` pairs in storage order.
    fn terms(&self) -> Vec<(Vec<u32>, String)> {
        self.inner
            .terms()
            .map(|(m, c)| (m.exponents().to_vec(), c.to_string()))
            .collect()
    }

    fn truncate(&self, bound: u32) -> PySeries {
        self.wrap(self.inner.truncate(bound))
    }

    /// `None` for the exact zero; the lower bound for truncated zeros is
    /// reported as a string `">= D"`.
    fn valuation(&self) -> Option<String> {
        match self.inner.valuation() {
            fps_rewrite::Valuation::Finite(v) => Some(v.to_string()),
            fps_rewrite::Valuation::Unresolved { at_least } => Some(format!(">= {at_least}")),
            fps_rewrite::Valuation::Infinite => None,
        }
    }

    fn __add__(&self, other: &PySeries) -> PyResult<PySeries> {
        Ok(self.wrap(self.inner.add(&other.inner).map_err(err)?))
    }

    fn __sub__(&self, other: &PySeries) -> PyResult<PySeries> {
        Ok(self.wrap(self.inner.sub(&other.inner).map_err(err)?))
    }

    fn __mul__(&self, other: &PySeries) -> PyResult<PySeries> {
        Ok(self.wrap(self.inner.mul(&other.inner).map_err(err)?))
    }

    fn __neg__(&self) -> PySeries {
        self.wrap(self.inner.neg())
    }

    fn __eq__(&self, other: &PySeries) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.ring.render_residue(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Series({:?})", self.ring.render_residue(&self.inner))
    }
}

impl PySeries {
    fn wrap(&self, inner: Series) -> PySeries {
        PySeries { inner, ring: self.ring.clone() }
    }
}

#[pyclass(name = "System", module = "fps_rewrite_py", frozen)]
pub struct PySystem {
    ring: Ring,
    sys: RewriteSystem,
    precision: u32,
}

impl PySystem {
    fn series(&self, arg: &Bound<'_, PyAny>) -> PyResult<Series> {
        if let Ok(s) = arg.extract::<PyRef<'_, PySeries>>() {
            return Ok(s.inner.clone());
        }
        let text: String = arg.extract()?;
        self.ring.parse(&text).map_err(err)
    }

    fn prec(&self, precision: Option<u32>) -> u32 {
        precision.unwrap_or(self.precision)
    }

    fn residue(&self, s: &Series) -> String {
        self.ring.render_residue(s)
    }

    fn rendered(&self, series: &[Series]) -> Vec<String> {
        series.iter().map(|s| self.ring.render(s)).collect()
    }
}

#[pymethods]
impl PySystem {
    #[new]
    #[pyo3(signature = (vars, generators, order = "deglex", field = "Q", precision = 8))]
    fn new(
        vars: Vec<String>,
        generators: Vec<String>,
        order: &str,
        field: &str,
        precision: u32,
    ) -> PyResult<Self> {
        let cfg = SystemConfig {
            vars,
            order: order.parse::<OrderKind>().map_err(err)?,
            field: field.parse::<Field>().map_err(err)?,
            generators,
            precision,
        };
        Self::from_config(&cfg)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Self::from_config(&SystemConfig::from_json(text).map_err(err)?)
    }

    #[getter]
    fn precision(&self) -> u32 {
        self.precision
    }

    #[getter]
    fn generators(&self) -> Vec<String> {
        self.sys.generators().iter().map(|g| self.ring.render(g.series())).collect()
    }

    fn parse(&self, text: &str) -> PyResult<PySeries> {
        Ok(PySeries {
            inner: self.ring.parse(text).map_err(err)?,
            ring: self.ring.clone(),
        })
    }

    #[pyo3(signature = (f, precision = None, largest_index = false))]
    fn reduce<'py>(
        &self,
        py: Python<'py>,
        f: &Bound<'py, PyAny>,
        precision: Option<u32>,
        largest_index: bool,
    ) -> PyResult<Bound<'py, PyDict>> {
        let tie = if largest_index { TieBreak::LargestIndex } else { TieBreak::SmallestIndex };
        let res = self
            .sys
            .reduce_with(&self.series(f)?, self.prec(precision), tie)
            .map_err(err)?;
        let steps = PyList::empty(py);
        for (k, s) in res.steps.iter().enumerate() {
            let d = PyDict::new(py);
            d.set_item("k", k)?;
            d.set_item("monomial", self.ring.render_monomial(&s.monomial))?;
            d.set_item("generator", s.generator)?;
            d.set_item("quotient", self.ring.render_monomial(&s.quotient))?;
            d.set_item("coeff", s.coeff.to_string())?;
            steps.append(d)?;
        }
        let out = PyDict::new(py);
        out.set_item("precision", res.precision)?;
        out.set_item("normal_form", self.residue(&res.normal_form))?;
        out.set_item("steps", steps)?;
        out.set_item("cofactors", self.rendered(&res.cofactors))?;
        Ok(out)
    }

    #[pyo3(signature = (f, precision = None))]
    fn member(&self, f: &Bound<'_, PyAny>, precision: Option<u32>) -> PyResult<bool> {
        let v = limit_coefficients(&self.series(f)?, &self.sys, self.prec(precision)).map_err(err)?;
        Ok(v.is_member())
    }

    /// Cofactors `f_i` with `f ≡ Σ f_i·s_i (mod (X)^D)`, or `None`.
    #[pyo3(signature = (f, precision = None))]
    fn cofactors(&self, f: &Bound<'_, PyAny>, precision: Option<u32>) -> PyResult<Option<Vec<String>>> {
        let v = limit_coefficients(&self.series(f)?, &self.sys, self.prec(precision)).map_err(err)?;
        Ok(match v {
            MembershipVerdict::InIdealModD { cofactors, .. } => Some(self.rendered(&cofactors)),
            MembershipVerdict::NotInIdealModD { .. } => None,
        })
    }

    #[pyo3(signature = (g, h, precision = None))]
    fn join<'py>(
        &self,
        py: Python<'py>,
        g: &Bound<'py, PyAny>,
        h: &Bound<'py, PyAny>,
        precision: Option<u32>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let res = join(&self.series(g)?, &self.series(h)?, &self.sys, self.prec(precision))
            .map_err(err)?;
        let out = PyDict::new(py);
        out.set_item("joined", res.is_joined())?;
        let eliminated: Vec<String> = res.eliminated().map(|m| self.ring.render_monomial(m)).collect();
        out.set_item("eliminated", eliminated)?;
        match &res {
            JoinResult::Joined { common, .. } => out.set_item("common", self.residue(common))?,
            JoinResult::Diverged { monomial, g, h, .. } => {
                out.set_item("monomial", self.ring.render_monomial(monomial))?;
                out.set_item("g", self.residue(g))?;
                out.set_item("h", self.residue(h))?;
            }
        }
        Ok(out)
    }

    #[pyo3(signature = (precision = None))]
    fn check_sb<'py>(&self, py: Python<'py>, precision: Option<u32>) -> PyResult<Bound<'py, PyDict>> {
        let report = check_standard_basis(&self.sys, self.prec(precision)).map_err(err)?;
        let pairs = PyList::empty(py);
        for p in &report.pairs {
            let d = PyDict::new(py);
            d.set_item("i", p.i)?;
            d.set_item("j", p.j)?;
            d.set_item("s_series", self.ring.render(&p.s_series))?;
            d.set_item("normal_form", self.residue(&p.normal_form))?;
            d.set_item("witness", p.witness.as_ref().map(|w| self.ring.render_monomial(w)))?;
            d.set_item("passed", p.passed)?;
            pairs.append(d)?;
        }
        let out = PyDict::new(py);
        out.set_item("precision", report.precision)?;
        out.set_item("passed", report.passed)?;
        out.set_item("pairs", pairs)?;
        Ok(out)
    }

    /// `δ(f, g)` as a string such as `"1/2"`, `"0"` or `"<= 1/16"`.
    fn delta(&self, f: &Bound<'_, PyAny>, g: &Bound<'_, PyAny>) -> PyResult<String> {
        Ok(self.series(f)?.delta(&self.series(g)?).map_err(err)?.to_string())
    }

    /// Membership decided by linear algebra instead of reduction.
    #[pyo3(signature = (f, precision = None))]
    fn oracle_member(&self, f: &Bound<'_, PyAny>, precision: Option<u32>) -> PyResult<bool> {
        let oracle = MembershipOracle::new(&self.sys, self.prec(precision)).map_err(err)?;
        Ok(oracle.solve(&self.series(f)?).map_err(err)?.is_some())
    }

    /// `(comparisons, disagreement classes)`.
    #[pyo3(signature = (precision = None, trials = 100, seed = DEFAULT_SEED))]
    fn cross_validate(&self, precision: Option<u32>, trials: usize, seed: u64) -> PyResult<(usize, Vec<String>)> {
        let r = cross_validate(&self.sys, self.prec(precision), trials, seed).map_err(err)?;
        let classes = r.disagreements.iter().map(|d| format!("{:?}", d.class)).collect();
        Ok((r.comparisons, classes))
    }

    fn __len__(&self) -> usize {
        self.sys.len()
    }

    fn __repr__(&self) -> String {
        format!("System({:?}, D={})", self.generators(), self.precision)
    }
}

impl PySystem {
    fn from_config(cfg: &SystemConfig) -> PyResult<Self> {
        let (ring, sys) = cfg.build().map_err(err)?;
        Ok(PySystem { ring, sys, precision: cfg.precision })
    }
}

/// Refutation of infinitary confluence for `"cyclic"` or `"nbar"`.
#[pyfunction]
#[pyo3(signature = (system, eps = "2^-10", max_steps = 1000))]
fn tars_demo<'py>(
    py: Python<'py>,
    system: &str,
    eps: &str,
    max_steps: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let eps = tars::parse_eps(eps).map_err(err)?;
    let report = tars::demo(system, &eps, max_steps).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("system", &report.system)?;
    out.set_item("refuted", report.refuted)?;
    out.set_item("normal_forms", report.normal_forms.to_vec())?;
    out.set_item("paths", report.paths.map(|p| p.to_vec()))?;
    out.set_item("reason", report.reason)?;
    Ok(out)
}

#[pymodule]
fn fps_rewrite_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystem>()?;
    m.add_class::<PySeries>()?;
    m.add_function(wrap_pyfunction!(tars_demo, m)?)?;
    m.add("FpsError", m.py().get_type::<FpsError>())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}

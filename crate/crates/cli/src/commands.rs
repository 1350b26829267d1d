use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use koszul_core::barcobar::{bar, cobar, is_twisting_cochain, projection_inclusion, ConvolutionElement, TwistingCochain};
use koszul_core::dg::{validate_algebra, validate_coalgebra, AxiomCheck, DgAlgebra, DgCoalgebra, Family, ValidationReport};
use koszul_core::graded::{intersect, Bidegree, Certification, CochainComplex, GradedSpace, Window};
use koszul_core::hochschild::{duality_report, gerstenhaber_report, BraceStructure, HochschildComplex, Verdict};
use koszul_core::linalg::Field;
use koszul_core::twist::{acyclicity_check, full_window, CellDim};
use serde::Serialize;
use serde_json::{json, Value};

use crate::format::{self, Structure};
use crate::UsageError;

/// Options shared by every command.
#[derive(Clone, Debug)]
pub struct Config {
    pub field: Option<Field>,
    pub window: Option<Window>,
    pub word_bound: Option<u32>,
    pub filtered: bool,
    pub products: bool,
}

impl Config {
    /// Canonical text of the options that affect results, for cache keys.
    pub fn key(&self) -> String {
        format!(
            "field={:?};window={:?};word-bound={:?};filtered={};products={}",
            self.field, self.window, self.word_bound, self.filtered, self.products
        )
    }
}

pub struct Input {
    pub path: PathBuf,
    pub text: String,
}

impl Input {
    pub fn read(path: &Path) -> Result<Input> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
        Ok(Input { path: path.to_path_buf(), text })
    }

    fn parse(&self, cfg: &Config) -> Result<format::Parsed> {
        format::parse(&self.text, cfg.field).map_err(|e| UsageError(format!("{}:{e}", self.path.display())).into())
    }
}

/// A command result: the report payload, a verdict word and the exit status it implies.
pub struct Outcome {
    pub verdict: String,
    pub exit: u8,
    pub field: Field,
    pub report: Value,
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn pass_fail(ok: bool) -> (String, u8) {
    if ok {
        ("PASS".into(), 0)
    } else {
        ("FAIL".into(), 1)
    }
}

fn family(f: Option<&Family>) -> String {
    f.map_or_else(|| "custom".into(), |f| f.to_string())
}

pub fn validate(input: &Input, cfg: &Config) -> Result<Outcome> {
    let parsed = input.parse(cfg)?;
    let (report, field) = match &parsed.structure {
        Structure::Algebra(a) => (validate_algebra(a), a.field()),
        Structure::Coalgebra(c) => (validate_coalgebra(c), c.field()),
        Structure::Lie(g) => {
            let check = match g.check_jacobi() {
                Ok(()) => AxiomCheck { axiom: "Jacobi identity".into(), passed: true, witness: vec![], detail: String::new() },
                Err(e) => AxiomCheck { axiom: "Jacobi identity".into(), passed: false, witness: vec![], detail: e.to_string() },
            };
            (ValidationReport { kind: "lie".into(), checks: vec![check] }, g.field)
        }
        Structure::Tau(_) => bail!(UsageError("a τ file is validated with twist-check".into())),
    };
    let (verdict, exit) = pass_fail(report.passed());
    Ok(Outcome { verdict, exit, field, report: to_value(&report) })
}

fn expect_algebra(s: Structure, path: &Path) -> Result<DgAlgebra> {
    match s {
        Structure::Algebra(a) => Ok(a),
        other => bail!(UsageError(format!("{}: expected an algebra, found a {} file", path.display(), other.kind()))),
    }
}

fn expect_coalgebra(s: Structure, path: &Path) -> Result<DgCoalgebra> {
    match s {
        Structure::Coalgebra(c) => Ok(c),
        other => bail!(UsageError(format!("{}: expected a coalgebra, found a {} file", path.display(), other.kind()))),
    }
}

/// Loads `(C, A, τ)`; without a τ file the projection–inclusion cochain is used.
fn load_pair(c: &Input, a: &Input, tau: Option<&Input>, cfg: &Config) -> Result<(ConvolutionElement, Option<Window>)> {
    let pc = c.parse(cfg)?;
    let pa = a.parse(cfg)?;
    let window = cfg.window.or(pc.window).or(pa.window);
    let cc = Arc::new(expect_coalgebra(pc.structure, &c.path)?);
    let aa = Arc::new(expect_algebra(pa.structure, &a.path)?);
    if cc.field() != aa.field() {
        bail!(UsageError("coalgebra and algebra are over different fields".into()));
    }
    let element = match tau {
        None => projection_inclusion(cc, aa)?,
        Some(t) => {
            let parsed = t.parse(cfg)?;
            let file = match parsed.structure {
                Structure::Tau(f) => f,
                other => bail!(UsageError(format!("{}: expected a tau file, found a {} file", t.path.display(), other.kind()))),
            };
            let cols = format::resolve_tau(&file, &cc, &aa).map_err(UsageError)?;
            ConvolutionElement::new(cc, aa, 1, cols)?
        }
    };
    Ok((element, window))
}

pub fn twist_check(c: &Input, a: &Input, tau: Option<&Input>, cfg: &Config) -> Result<Outcome> {
    let (element, _) = load_pair(c, a, tau, cfg)?;
    let defects = is_twisting_cochain(&element)?;
    let (verdict, exit) = pass_fail(defects.is_valid());
    let report = json!({
        "coalgebra": family(element.coalgebra().family()),
        "algebra": family(element.algebra().family()),
        "twisting": defects.is_valid(),
        "defects": to_value(&defects),
    });
    Ok(Outcome { verdict, exit, field: element.algebra().field(), report })
}

fn word_bound(cfg: &Config, window: Option<&Window>) -> Result<u32> {
    if let Some(n) = cfg.word_bound {
        return Ok(n);
    }
    match window.and_then(|w| w.weights) {
        Some((lo, hi)) => Ok(lo.unsigned_abs().max(hi.unsigned_abs())),
        None => bail!(UsageError("give --word-bound or a window with a weight range".into())),
    }
}

fn nonzero_cells(space: &GradedSpace) -> Vec<CellDim> {
    space.cells(space.is_weighted()).into_iter().map(|(bidegree, v)| CellDim { bidegree, dim: v.len() }).collect()
}

#[derive(Serialize)]
struct CohomologyReport {
    window: Option<Window>,
    certification: Certification,
    cells: Vec<CellDim>,
}

fn complex_cohomology(cx: &CochainComplex, user: Option<&Window>, valid: Option<Window>, cert: Certification) -> Result<CohomologyReport> {
    let mut w = match full_window(cx, None) {
        Some(w) => w,
        None => return Ok(CohomologyReport { window: None, certification: cert, cells: vec![] }),
    };
    if let Some(u) = user {
        w = intersect(&w, u);
    }
    if let Some(v) = valid {
        w = intersect(&w, &v);
    }
    let table = cx.cohomology(&w)?;
    let cells = table.dims().into_iter().filter(|(_, d)| *d > 0).map(|(bidegree, dim)| CellDim { bidegree, dim }).collect();
    Ok(CohomologyReport { window: Some(w), certification: cert, cells })
}

pub fn bar_cmd(input: &Input, cfg: &Config, emit: Option<&Path>) -> Result<Outcome> {
    let parsed = input.parse(cfg)?;
    let window = cfg.window.or(parsed.window);
    let a = Arc::new(expect_algebra(parsed.structure, &input.path)?);
    let n = word_bound(cfg, window.as_ref())?;
    let b = bar(a.clone(), n, window.as_ref(), cfg.filtered)?;
    let c = &b.coalgebra;
    let cx = CochainComplex::new(c.differential_map()?)?;
    let coh = complex_cohomology(&cx, window.as_ref(), b.valid, b.certification)?;
    let validation = validate_coalgebra(c);
    if let Some(path) = emit {
        std::fs::write(path, format::write(&Structure::Coalgebra((**c).clone()), window.as_ref()))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let (verdict, exit) = pass_fail(validation.passed());
    let report = json!({
        "input": family(a.family()),
        "word_bound": n,
        "certification": to_value(&b.certification),
        "valid_window": to_value(&b.valid),
        "basis_size": c.dim(),
        "basis": to_value(&nonzero_cells(c.space())),
        "cohomology": to_value(&coh),
        "validation": to_value(&validation),
    });
    Ok(Outcome { verdict, exit, field: a.field(), report })
}

pub fn cobar_cmd(input: &Input, cfg: &Config, emit: Option<&Path>) -> Result<Outcome> {
    let parsed = input.parse(cfg)?;
    let window = cfg.window.or(parsed.window);
    let c = Arc::new(expect_coalgebra(parsed.structure, &input.path)?);
    let n = word_bound(cfg, window.as_ref())?;
    let o = cobar(c.clone(), n, window.as_ref(), cfg.filtered)?;
    let a = &o.algebra;
    let cx = CochainComplex::new(a.differential_map()?)?;
    let coh = complex_cohomology(&cx, window.as_ref(), o.valid, o.certification)?;
    let validation = validate_algebra(a);
    if let Some(path) = emit {
        std::fs::write(path, format::write(&Structure::Algebra((**a).clone()), window.as_ref()))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let (verdict, exit) = pass_fail(validation.passed());
    let report = json!({
        "input": family(c.family()),
        "word_bound": n,
        "certification": to_value(&o.certification),
        "valid_window": to_value(&o.valid),
        "basis_size": a.dim(),
        "basis": to_value(&nonzero_cells(a.space())),
        "cohomology": to_value(&coh),
        "validation": to_value(&validation),
    });
    Ok(Outcome { verdict, exit, field: c.field(), report })
}

fn weight_bound(cfg: &Config, window: Option<&Window>) -> Result<u32> {
    match window.and_then(|w| w.weights) {
        Some((_, hi)) => Ok(hi.max(0) as u32),
        None => match cfg.word_bound {
            Some(n) => Ok(n),
            None => bail!(UsageError("give a window with a weight range".into())),
        },
    }
}

pub fn acyclicity(c: &Input, a: &Input, tau: Option<&Input>, cfg: &Config) -> Result<Outcome> {
    let (element, window) = load_pair(c, a, tau, cfg)?;
    let bound = weight_bound(cfg, window.as_ref())?;
    let field = element.algebra().field();
    let tau = TwistingCochain::new(element)?;
    let r = acyclicity_check(&tau, Some(bound))?;
    let (verdict, exit) = if r.acyclic { ("ACYCLIC".to_string(), 0) } else { ("NOT ACYCLIC".to_string(), 1) };
    Ok(Outcome { verdict, exit, field, report: to_value(&r) })
}

fn require_window(w: Option<Window>) -> Result<Window> {
    match w {
        Some(w) if w.weights.is_some() => Ok(w),
        _ => bail!(UsageError("give --window with a weight range, e.g. 0..2,-1..4".into())),
    }
}

pub fn hh(input: &Input, cfg: &Config) -> Result<Outcome> {
    let parsed = input.parse(cfg)?;
    let window = require_window(cfg.window.or(parsed.window))?;
    let (s, field) = match &parsed.structure {
        Structure::Algebra(a) => (BraceStructure::from_algebra(a)?, a.field()),
        Structure::Coalgebra(c) => (BraceStructure::from_coalgebra(c)?, c.field()),
        other => bail!(UsageError(format!("hh needs an algebra or a coalgebra, found a {} file", other.kind()))),
    };
    if s.side == koszul_core::hochschild::Side::Algebra && !s.complete {
        bail!(koszul_core::Error::WindowNotCertified(
            "the algebra has undefined or truncated products; cochains into it are not exact".into()
        ));
    }
    let side = format!("{:?}", s.side).to_lowercase();
    let name = family(s.family.as_ref());
    let hc = HochschildComplex::new(s);
    let report = if hc.structure.weight_graded {
        if cfg.products {
            to_value(&gerstenhaber_report(&hc, &window)?)
        } else {
            let table = hc.table(&window)?;
            let cells: Vec<Value> = table
                .cells
                .iter()
                .map(|(b, c)| json!({"bidegree": to_value(b), "dim": c.dim, "certification": to_value(&Certification::Exact)}))
                .collect();
            json!({"structure": name, "side": side, "mode": "graded", "window": to_value(&window), "cells": cells})
        }
    } else if cfg.filtered {
        let (lo, hi) = window.weights.unwrap_or((0, 0));
        let mut cells = Vec::new();
        for t in window.degrees.0..=window.degrees.1 {
            for n in lo.max(0)..=hi {
                let c = hc.filtered_cell(t, n)?;
                cells.push(json!({
                    "bidegree": to_value(&Bidegree::new(t, n)),
                    "dim": c.dim,
                    "by_preimage_bound": [c.by_preimage_bound.0, c.by_preimage_bound.1],
                    "certification": to_value(&c.certification),
                }));
            }
        }
        json!({"structure": name, "side": side, "mode": "filtered", "window": to_value(&window), "cells": cells})
    } else {
        bail!(koszul_core::Error::WindowNotCertified(
            "the differential does not preserve weight; rerun with --filtered".into()
        ));
    };
    Ok(Outcome { verdict: "COMPUTED".into(), exit: 0, field, report })
}

pub fn duality(c: &Input, a: &Input, tau: Option<&Input>, cfg: &Config) -> Result<Outcome> {
    let (element, window) = load_pair(c, a, tau, cfg)?;
    let window = require_window(window)?;
    let field = element.algebra().field();
    let tau = TwistingCochain::new(element)?;
    let r = duality_report(&tau, &window)?;
    let exit = match r.verdict {
        Verdict::Consistent => 0,
        Verdict::Mismatch { .. } | Verdict::PreconditionFailed { .. } => 1,
        Verdict::Inconclusive { .. } => 3,
    };
    Ok(Outcome { verdict: r.verdict.label().into(), exit, field, report: to_value(&r) })
}

use anyhow::{Context, Result};
use pisot_spectra::cut_project::{missing_points, CapSpec};
use pisot_spectra::localconfig::{enumerate, tile_inventory};
use pisot_spectra::spectrum::{density_verdict, generate_ball};
use pisot_spectra::voronoi::covering_radius;
use pisot_spectra::{Alphabet, BaseSpec};
use serde::Serialize;

use crate::reference::*;

/// One computed-vs-reference cell.
#[derive(Debug, Serialize)]
pub struct Cell {
    pub case: String,
    pub quantity: &'static str,
    pub computed: String,
    pub expected: String,
    pub pass: bool,
}

impl Cell {
    fn float(case: &str, quantity: &'static str, computed: f64, expected: f64, tol: f64) -> Self {
        Cell {
            case: case.to_string(),
            quantity,
            computed: format!("{computed:.10}"),
            expected: format!("{expected:.10}"),
            pass: (computed - expected).abs() <= tol,
        }
    }

    fn text(case: &str, quantity: &'static str, computed: impl ToString, expected: impl ToString) -> Self {
        let (computed, expected) = (computed.to_string(), expected.to_string());
        Cell { case: case.to_string(), quantity, pass: computed == expected, computed, expected }
    }
}

pub struct Options {
    pub filter: Option<(String, u32)>,
    pub depth: Option<u32>,
    pub budget: Option<usize>,
}

impl Options {
    fn wants(&self, name: &str, order: u32) -> Result<bool> {
        match &self.filter {
            None => Ok(true),
            Some((n, o)) => {
                let b = BaseSpec::lookup(n, *o)?;
                Ok(b.name.as_deref() == Some(name) && *o == order)
            }
        }
    }
}

fn case(name: &str, order: u32) -> Result<(BaseSpec, Alphabet, String)> {
    let b = BaseSpec::lookup(name, order)?;
    let a = Alphabet::polygonal(b.order);
    let id = b.case_id();
    Ok((b, a, id))
}

pub fn table(id: u8, opts: &Options) -> Result<Vec<Cell>> {
    match id {
        2 => density(opts),
        3 => intervals(opts),
        4 => covering(opts),
        5 => local_configs(opts),
        _ => unreachable!("table id validated by the parser"),
    }
}

fn density(opts: &Options) -> Result<Vec<Cell>> {
    let mut cells = Vec::new();
    for &(name, order, dense, value) in &DENSITY {
        if !opts.wants(name, order)? {
            continue;
        }
        let (b, a, id) = case(name, order)?;
        let v = density_verdict(&b, &a).with_context(|| format!("table 2, {id}"))?;
        let yes_no = |d: bool| if d { "YES" } else { "NO" };
        cells.push(Cell::text(&id, "relative density", yes_no(v.relatively_dense), yes_no(dense)));
        cells.push(Cell::float(&id, "comparison value", v.threshold, value, DENSITY_TOL));
    }
    Ok(cells)
}

fn intervals(opts: &Options) -> Result<Vec<Cell>> {
    let mut cells = Vec::new();
    for &(name, order, k, s, t, missing) in &INTERVALS {
        if !opts.wants(name, order)? {
            continue;
        }
        let (b, a, id) = case(name, order)?;
        let spec = CapSpec::standard(&b, &a).with_context(|| format!("table 3, {id}"))?;
        cells.push(Cell::text(&id, "sigma(omega) exponent", spec.sigma_omega_exponent, k));
        cells.push(Cell::float(&id, "s", spec.prewindow.s, s, INTERVAL_TOL));
        cells.push(Cell::float(&id, "t", spec.prewindow.t, t, INTERVAL_TOL));
        let depth = opts.depth.unwrap_or(if name == "mu" { 1 } else { 2 });
        let g = b.value().powi(depth as i32);
        let patch = generate_ball(&b, &a, (2.0 * g - 1.0) / (b.value() - 1.0)).with_context(|| format!("table 3, {id}"))?;
        let report = missing_points(&spec, &patch, depth).with_context(|| format!("table 3, {id}"))?;
        let class = serde_json::to_value(report.classification)?;
        cells.push(Cell::text(&id, "missing points", class.as_str().unwrap_or_default(), missing));
    }
    Ok(cells)
}

fn covering(opts: &Options) -> Result<Vec<Cell>> {
    let mut cells = Vec::new();
    for &(name, order, region, value, n) in &COVERING {
        if !opts.wants(name, order)? {
            continue;
        }
        let (b, a, id) = case(name, order)?;
        let res = covering_radius(&b, &a, opts.depth.unwrap_or(8)).with_context(|| format!("table 4, {id}"))?;
        cells.push(Cell::float(&id, "R(theta, beta)", res.region_radius, region, REGION_TOL));
        cells.push(Cell::float(&id, "2 r_c", res.covering_diameter(), value, COVERING_TOL));
        let at = res.achieved_at_n.map_or("not reached".to_string(), |m| m.to_string());
        cells.push(Cell::text(&id, "n", at, n));
    }
    Ok(cells)
}

fn local_configs(opts: &Options) -> Result<Vec<Cell>> {
    let budget = opts.budget.unwrap_or(pisot_spectra::localconfig::DEFAULT_CONFIG_BUDGET);
    let mut cells = Vec::new();
    for &(name, order, configs, tiles, exact) in &LOCAL_CONFIGS {
        if !opts.wants(name, order)? {
            continue;
        }
        let (b, a, id) = case(name, order)?;
        let e = enumerate(&b, &a, budget).with_context(|| format!("table 5, {id}"))?;
        let t = tile_inventory(&b, &e).len();
        let shown = |v: usize| if e.complete { v.to_string() } else { format!(">= {v}") };
        let expected = |v: usize| if exact { v.to_string() } else { format!(">= {v}") };
        let pass = |got: usize, want: usize| if exact { e.complete && got == want } else { got >= want };
        for (quantity, got, want) in [("configurations", e.configs.len(), configs), ("tiles", t, tiles)] {
            cells.push(Cell {
                case: id.clone(),
                quantity,
                computed: shown(got),
                expected: expected(want),
                pass: pass(got, want),
            });
        }
    }
    Ok(cells)
}

pub fn render(id: u8, cells: &[Cell]) -> String {
    let mut out = format!("table {id}\n");
    let w = cells.iter().map(|c| c.case.len()).max().unwrap_or(4).max(4);
    let q = cells.iter().map(|c| c.quantity.len()).max().unwrap_or(8).max(8);
    out.push_str(&format!("{:w$}  {:q$}  {:>16}  {:>16}  result\n", "case", "quantity", "computed", "expected"));
    for c in cells {
        out.push_str(&format!(
            "{:w$}  {:q$}  {:>16}  {:>16}  {}\n",
            c.case,
            c.quantity,
            c.computed,
            c.expected,
            if c.pass { "PASS" } else { "FAIL" }
        ));
    }
    out
}

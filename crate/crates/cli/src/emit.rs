use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use num_complex::Complex64;
use pisot_spectra::attractor::{approximate_on_grid, IfsSpec, DEFAULT_APPROX_CAP};
use pisot_spectra::cut_project::{missing_points, CapSpec, WindowSpec};
use pisot_spectra::io;
use pisot_spectra::localconfig::{classify_cells, config_graph, enumerate, tile_inventory, DEFAULT_CONFIG_BUDGET};
use pisot_spectra::spectrum::generate_ball;
use pisot_spectra::voronoi::cells;
use pisot_spectra::{Alphabet, BaseSpec};

use crate::manifest::OutputDir;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Spectrum,
    Attractor,
    Tiling,
    WindowOverlay,
    ConfigGraph,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IfsChoice {
    /// Contraction `β⁻¹`.
    Inverse,
    /// Contraction `σ(β)`, the acceptance window.
    Conjugate,
}

pub struct Params {
    pub radius: Option<f64>,
    pub depth: Option<u32>,
    pub budget: Option<usize>,
    pub ifs: IfsChoice,
    pub classify: bool,
}

/// Grid cells across the attractor's bounding box.
const ATTRACTOR_GRID: f64 = 600.0;

pub fn run(kind: Kind, base: &BaseSpec, p: &Params, out: &mut OutputDir) -> Result<()> {
    let alphabet = Alphabet::polygonal(base.order);
    let id = base.case_id();
    match kind {
        Kind::Spectrum => {
            let r = p.radius.unwrap_or(5.0);
            out.param("radius", r);
            let patch = generate_ball(base, &alphabet, r)?;
            out.write("spectrum.csv", &io::patch_csv(&patch))?;
            out.write_json("spectrum.json", &io::patch_meta(&patch))?;
            out.write("spectrum.svg", &io::spectrum_svg(&patch))?;
            println!("{id}: {} points within radius {r}", patch.len());
        }
        Kind::Attractor => {
            let depth = p.depth.unwrap_or(10);
            let cap = p.budget.unwrap_or(DEFAULT_APPROX_CAP);
            out.param("depth", depth);
            out.param("ifs", format!("{:?}", p.ifs).to_lowercase());
            let spec = match p.ifs {
                IfsChoice::Inverse => IfsSpec::inverse(base, &alphabet)?,
                IfsChoice::Conjugate => IfsSpec::conjugate(base, &alphabet, base.sigma())?,
            };
            let cell = 2.0 * spec.bounding_radius / ATTRACTOR_GRID;
            out.param("grid_cell", cell);
            let approx = approximate_on_grid(&spec, depth, cell, cap)?;
            out.write("attractor.csv", &io::complex_csv(&approx.embedded))?;
            out.write("attractor.svg", &io::attractor_svg(&approx, &id))?;
            println!("{id}: {} attractor points at depth {depth}", approx.embedded.len());
        }
        Kind::Tiling => {
            let r = p.radius.unwrap_or(10.0);
            out.param("radius", r);
            let reach = 2.0 * alphabet.max_modulus() / (base.value() - 1.0);
            let patch = generate_ball(base, &alphabet, r + reach)?;
            let cs = cells(&patch, r)?;
            let classes = if p.classify {
                let budget = p.budget.unwrap_or(DEFAULT_CONFIG_BUDGET);
                out.param("budget", budget);
                let e = enumerate(base, &alphabet, budget)?;
                let tiles = tile_inventory(base, &e);
                out.write_json("tiles.json", &io::tiles_json(&tiles))?;
                Some(classify_cells(&cs, &tiles))
            } else {
                None
            };
            out.write_json("cells.json", &io::cells_json(&patch, &cs))?;
            out.write("tiling.svg", &io::tiling_svg(&cs, classes.as_deref(), &id))?;
            match &classes {
                Some(cl) => {
                    let mut used: Vec<usize> = cl.iter().flatten().copied().collect();
                    used.sort_unstable();
                    used.dedup();
                    let unclassified = cl.iter().filter(|c| c.is_none()).count();
                    println!("{id}: {} cells, {} tile classes, {unclassified} unclassified", cs.len(), used.len());
                }
                None => println!("{id}: {} cells", cs.len()),
            }
        }
        Kind::WindowOverlay => {
            if !base.is_quadratic() {
                bail!(crate::InvalidArgs(format!("window_overlay needs a quadratic base, {id} is cubic")));
            }
            let depth = p.depth.unwrap_or(if base.name.as_deref() == Some("mu") { 1 } else { 2 });
            out.param("depth", depth);
            let spec = CapSpec::standard(base, &alphabet)?;
            let g = base.value().powi(depth as i32);
            let patch = generate_ball(base, &alphabet, (2.0 * g - 1.0) / (base.value() - 1.0))?;
            let report = missing_points(&spec, &patch, depth).with_context(|| format!("missing points for {id}"))?;
            let k = spec.sigma_omega_exponent;
            let conj: Vec<Complex64> = patch.points.iter().map(|x| x.galois_unchecked(k).embed()).collect();
            let missing: Vec<Complex64> = report.points.iter().map(|m| m.point.galois_unchecked(k).embed()).collect();
            let (outline, cloud) = match &spec.window {
                WindowSpec::Polygon { vertices, .. } => (Some(vertices.iter().map(|v| v.embed()).collect::<Vec<_>>()), Vec::new()),
                WindowSpec::Attractor { ifs, .. } => {
                    let cell = 2.0 * ifs.bounding_radius / ATTRACTOR_GRID;
                    (None, approximate_on_grid(ifs, 10, cell, DEFAULT_APPROX_CAP)?.embedded)
                }
            };
            out.write_json("missing.json", &io::MissingReportJson::from(&report))?;
            out.write("window_overlay.svg", &io::window_overlay_svg(outline.as_deref(), &cloud, &conj, &missing, &id))?;
            println!("{id}: {} missing points ({:?})", report.points.len(), report.classification);
        }
        Kind::ConfigGraph => {
            let budget = p.budget.unwrap_or(DEFAULT_CONFIG_BUDGET);
            out.param("budget", budget);
            let e = enumerate(base, &alphabet, budget)?;
            let tiles = tile_inventory(base, &e);
            out.write_json("tiles.json", &io::tiles_json(&tiles))?;
            out.write("tiles.svg", &io::tile_swatches_svg(&tiles, &id))?;
            out.write("configs.dot", &config_graph(&e)?)?;
            println!("{id}: {} configurations, {} tiles", e.configs.len(), tiles.len());
        }
    }
    Ok(())
}

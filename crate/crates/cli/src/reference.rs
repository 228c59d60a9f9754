//! Reference values the `repro` command compares against.

/// `(name, order, relatively dense, comparison value)`.
pub const DENSITY: [(&str, u32, bool, f64); 9] = [
    ("tau", 5, true, 1.618033989),
    ("tau", 10, true, 2.618033989),
    ("tau2", 10, true, 2.618033989),
    ("lambda", 7, true, 2.246979604),
    ("lambda", 14, true, 2.801937736),
    ("delta", 8, true, 2.414213562),
    ("kappa", 9, false, 2.822714843),
    ("kappa", 18, true, 2.879385242),
    ("mu", 12, true, 2.732050808),
];

/// `(name, order, σ(ω) exponent, s, t, missing points)`.
pub const INTERVALS: [(&str, u32, u32, f64, f64, &str); 5] = [
    ("tau", 5, 2, 4.45406, 1.70130, "interior"),
    ("tau", 10, 3, 2.75276, 2.75276, "boundary_only"),
    ("tau2", 10, 3, 1.70130, 1.05146, "boundary_only"),
    ("delta", 8, 3, 2.41421, 1.0, "none"),
    ("mu", 12, 5, 7.46410, 1.15470, "interior"),
];

/// `(name, order, R(θ, β), covering value, n)`.
pub const COVERING: [(&str, u32, f64, f64, u32); 8] = [
    ("tau", 5, 1.6180339895, 0.7639320250, 6),
    ("tau", 10, 1.6180339895, 0.6498393940, 3),
    ("tau2", 10, 1.3763819202, 1.051462225, 1),
    ("lambda", 7, 1.2469796034, 1.109916265, 1),
    ("lambda", 14, 1.2469796034, 1.025716864, 1),
    ("delta", 8, 1.3065629649, 1.082392201, 1),
    ("kappa", 18, 1.4619022000, 1.015426612, 1),
    ("mu", 12, 1.4142135622, 1.035276182, 1),
];

/// `(name, order, configurations, tiles, exact)`; inexact rows are lower bounds.
pub const LOCAL_CONFIGS: [(&str, u32, usize, usize, bool); 8] = [
    ("tau", 5, 7823, 12, true),
    ("tau", 10, 3818, 5, true),
    ("tau2", 10, 20, 5, true),
    ("lambda", 7, 279, 201, false),
    ("lambda", 14, 815, 189, false),
    ("delta", 8, 26, 5, true),
    ("kappa", 18, 881, 154, false),
    ("mu", 12, 1002, 104, false),
];

pub const DENSITY_TOL: f64 = 1e-8;
pub const INTERVAL_TOL: f64 = 1e-5;
pub const REGION_TOL: f64 = 1e-8;
pub const COVERING_TOL: f64 = 1e-6;

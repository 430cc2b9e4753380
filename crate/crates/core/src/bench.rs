//! Locking benchmarks: meshes, loads, sweeps over thickness and refinement,
//! and CSV/SVG output.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::Vector3;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Axis, BoundaryMarker, ChartGeometry, ChartKind, Mesh};
use crate::shell::{
    EdgeMoment, LoadSpec, MaterialParams, MembraneReduction, ShearReduction, ShellConfig, ShellProblem, StrainModel,
};

const TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchmarkName {
    Cylinder,
    Hyperboloid,
    UnibendCylinder,
    HyperbolicParaboloid,
    Hemisphere,
}

impl BenchmarkName {
    pub const ALL: [BenchmarkName; 5] = [
        BenchmarkName::Cylinder,
        BenchmarkName::Hyperboloid,
        BenchmarkName::UnibendCylinder,
        BenchmarkName::HyperbolicParaboloid,
        BenchmarkName::Hemisphere,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BenchmarkName::Cylinder => "cylinder",
            BenchmarkName::Hyperboloid => "hyperboloid",
            BenchmarkName::UnibendCylinder => "unibend_cylinder",
            BenchmarkName::HyperbolicParaboloid => "hyperbolic_paraboloid",
            BenchmarkName::Hemisphere => "hemisphere",
        }
    }

    /// Membrane-dominated problems get loads scaling with `t`, the rest with `t³`.
    pub fn membrane_dominated(self) -> bool {
        self == BenchmarkName::Hemisphere
    }
}

impl FromStr for BenchmarkName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cylinder" => Ok(Self::Cylinder),
            "hyperboloid" => Ok(Self::Hyperboloid),
            "unibend_cylinder" | "unibend" => Ok(Self::UnibendCylinder),
            "hyperbolic_paraboloid" | "hypar" => Ok(Self::HyperbolicParaboloid),
            "hemisphere" => Ok(Self::Hemisphere),
            other => Err(Error::Config(format!("unknown benchmark `{other}`"))),
        }
    }
}

impl fmt::Display for BenchmarkName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

const UNIBEND_RADIUS: f64 = 0.1;
const UNIBEND_WIDTH: f64 = 0.025;
const HEMISPHERE_OPENING: f64 = 0.4 * PI; // 72°

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() < TOL
}

/// Marks a boundary edge by which side of the parameter rectangle it lies on.
fn mark_sides(mesh: &mut Mesh, x: [f64; 2], y: [f64; 2], sides: [BoundaryMarker; 4]) {
    // sides: [x = x0, x = x1, y = y0, y = y1]
    mesh.mark_boundary_by(|a, b| {
        if near(a[0], x[0]) && near(b[0], x[0]) {
            Some(sides[0])
        } else if near(a[0], x[1]) && near(b[0], x[1]) {
            Some(sides[1])
        } else if near(a[1], y[0]) && near(b[1], y[0]) {
            Some(sides[2])
        } else if near(a[1], y[1]) && near(b[1], y[1]) {
            Some(sides[3])
        } else {
            None
        }
    });
}

/// Parameter rectangle, level-0 grid and chart of a benchmark.
fn layout(name: BenchmarkName) -> ([f64; 2], [f64; 2], usize, usize, ChartGeometry, [BoundaryMarker; 4]) {
    use BoundaryMarker::{Clamped, Free, Symmetry};
    match name {
        BenchmarkName::Cylinder => (
            [0.0, FRAC_PI_2],
            [0.0, 1.0],
            2,
            2,
            ChartGeometry::new(ChartKind::Cylinder { radius: 1.0 }),
            [Symmetry(Axis::Y), Symmetry(Axis::X), Symmetry(Axis::Z), Free],
        ),
        BenchmarkName::Hyperboloid => (
            [0.0, FRAC_PI_2],
            [0.0, 1.0],
            2,
            2,
            ChartGeometry::new(ChartKind::Hyperboloid { radius: 1.0 }),
            [Symmetry(Axis::Y), Symmetry(Axis::X), Symmetry(Axis::Z), Free],
        ),
        BenchmarkName::UnibendCylinder => (
            [0.0, FRAC_PI_2],
            [0.0, UNIBEND_WIDTH],
            4,
            2,
            ChartGeometry::new(ChartKind::Cylinder { radius: UNIBEND_RADIUS }),
            [Free, Clamped, Free, Free],
        ),
        BenchmarkName::HyperbolicParaboloid => (
            [-3.0, 0.0],
            [0.0, 1.0],
            4,
            1,
            ChartGeometry::new(ChartKind::HyperbolicParaboloid { alpha: 0.2 }),
            [Free, Symmetry(Axis::X), Clamped, Free],
        ),
        BenchmarkName::Hemisphere => (
            [0.0, FRAC_PI_2],
            [0.0, HEMISPHERE_OPENING],
            2,
            2,
            ChartGeometry::new(ChartKind::Sphere { radius: 10.0 }),
            [Symmetry(Axis::Y), Symmetry(Axis::X), Clamped, Clamped],
        ),
    }
}

/// Structured mesh of the computational subdomain, refined `level` times.
pub fn make_benchmark_mesh(name: BenchmarkName, level: usize, structured: bool) -> Result<(Mesh, ChartGeometry)> {
    if !structured {
        return Err(Error::Config(
            "unstructured benchmark meshes are not generated; import one with --mesh".into(),
        ));
    }
    let (x, y, nx, ny, chart, sides) = layout(name);
    let mut mesh = Mesh::structured_rectangle(x, y, nx, ny)?;
    mark_sides(&mut mesh, x, y, sides);
    for _ in 0..level {
        mesh = mesh.refine_uniform();
    }
    Ok((mesh, chart))
}

pub fn benchmark_material(name: BenchmarkName) -> MaterialParams {
    let (e, nu) = match name {
        BenchmarkName::Cylinder => (3e4, 0.3),
        BenchmarkName::Hyperboloid => (2.85e4, 0.3),
        BenchmarkName::UnibendCylinder => (2e5, 0.0),
        BenchmarkName::HyperbolicParaboloid => (2.85e4, 0.3),
        BenchmarkName::Hemisphere => (6.825e7, 0.3),
    };
    MaterialParams::new(e, nu).expect("benchmark material parameters are valid")
}

/// Loads of a benchmark at thickness `t`.
pub fn benchmark_load(name: BenchmarkName, t: f64) -> LoadSpec {
    let t3 = t.powi(3);
    match name {
        BenchmarkName::Cylinder => LoadSpec::surface(move |p, _, nu| nu * (t3 * (2.0 * p[0]).cos())),
        BenchmarkName::Hyperboloid => {
            LoadSpec::surface(move |p, _, _| Vector3::new(p[0].cos(), p[0].sin(), 0.0) * (t3 * (2.0 * p[0]).cos()))
        }
        BenchmarkName::HyperbolicParaboloid => LoadSpec::surface(move |_, _, nu| nu * (8.0 * t3)),
        BenchmarkName::Hemisphere => LoadSpec::surface(move |p, _, nu| nu * (t / 10.0 * (2.0 * p[0]).cos())),
        BenchmarkName::UnibendCylinder => LoadSpec {
            surface: None,
            edge_moments: vec![EdgeMoment {
                selector: Arc::new(|a, b| near(a[0], 0.0) && near(b[0], 0.0)),
                moment_per_length: (t / UNIBEND_RADIUS).powi(3) / UNIBEND_WIDTH,
            }],
        },
    }
}

/// Where and in which Cartesian direction the deflection is read off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    pub point: [f64; 2],
    pub direction: Vector3<f64>,
}

pub fn benchmark_measurement(name: BenchmarkName) -> Measurement {
    match name {
        // radial direction at θ = 0 is e_x
        BenchmarkName::Cylinder => Measurement {
            point: [0.0, 1.0],
            direction: Vector3::x(),
        },
        // the free edge sits close to a node of the bending mode, so the
        // waist is measured instead
        BenchmarkName::Hyperboloid => Measurement {
            point: [0.0, 0.0],
            direction: Vector3::x(),
        },
        BenchmarkName::UnibendCylinder => Measurement {
            point: [0.0, 0.5 * UNIBEND_WIDTH],
            direction: Vector3::y(),
        },
        BenchmarkName::HyperbolicParaboloid => Measurement {
            point: [0.0, 1.0],
            direction: Vector3::z(),
        },
        BenchmarkName::Hemisphere => Measurement {
            point: [0.0, PI / 5.0],
            direction: Vector3::x(),
        },
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub benchmark: BenchmarkName,
    pub thicknesses: Vec<f64>,
    /// Levels `0..levels` are computed; the reference uses the last one.
    pub levels: usize,
    pub order: usize,
    /// Defaults to `order`.
    pub geometry_order: Option<usize>,
    pub reference_order: usize,
    pub membrane: MembraneReduction,
    pub shear: ShearReduction,
    pub model: StrainModel,
    pub structured: bool,
    pub mesh: Option<PathBuf>,
    pub measurement: Option<Measurement>,
}

impl BenchmarkConfig {
    pub fn new(benchmark: BenchmarkName) -> Self {
        Self {
            benchmark,
            thicknesses: vec![0.1, 0.01, 0.001, 0.0001],
            levels: 3,
            order: 2,
            geometry_order: None,
            reference_order: 4,
            membrane: MembraneReduction::Regge,
            shear: ShearReduction::EdgeTangential,
            model: StrainModel::LinearizedMembrane,
            structured: true,
            mesh: None,
            measurement: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.thicknesses.is_empty() || self.thicknesses.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
            return Err(Error::Config("thickness values must be positive".into()));
        }
        if self.order == 0 || self.reference_order == 0 || self.geometry_order == Some(0) {
            return Err(Error::Config("orders must be >= 1".into()));
        }
        if self.levels == 0 {
            return Err(Error::Config("at least one refinement level is required".into()));
        }
        Ok(())
    }

    fn measurement(&self) -> Measurement {
        self.measurement.unwrap_or_else(|| benchmark_measurement(self.benchmark))
    }

    fn mesh_at(&self, level: usize) -> Result<(Mesh, ChartGeometry)> {
        match &self.mesh {
            Some(path) => {
                let mut mesh = Mesh::read(path)?;
                for _ in 0..level {
                    mesh = mesh.refine_uniform();
                }
                Ok((mesh, layout(self.benchmark).4))
            }
            None => make_benchmark_mesh(self.benchmark, level, self.structured),
        }
    }

    fn reduction_label(&self) -> String {
        self.membrane.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub benchmark: String,
    pub t: f64,
    pub level: usize,
    pub n_elements: usize,
    pub n_dofs: usize,
    pub reduction: String,
    pub value: f64,
    pub reference: f64,
    pub rel_error: f64,
    pub newton_iters: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

pub const CSV_COLUMNS: [&str; 10] = [
    "benchmark",
    "t",
    "level",
    "n_elements",
    "n_dofs",
    "reduction",
    "value",
    "reference",
    "rel_error",
    "newton_iters",
];

/// Result of one solve at a measurement point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSolve {
    pub value: f64,
    pub n_elements: usize,
    pub n_dofs: usize,
    pub iterations: usize,
}

/// Solves one benchmark instance and reads off the measured deflection.
pub fn solve_point(
    config: &BenchmarkConfig,
    t: f64,
    level: usize,
    order: usize,
    geometry_order: usize,
    membrane: MembraneReduction,
    shear: ShearReduction,
) -> Result<PointSolve> {
    let (mesh, chart) = config.mesh_at(level)?;
    let n_elements = mesh.triangles().len();
    let shell = ShellConfig {
        thickness: t,
        order,
        geometry_order,
        membrane,
        shear,
        model: config.model,
    };
    let problem = ShellProblem::new(
        mesh,
        chart,
        benchmark_material(config.benchmark),
        shell,
        benchmark_load(config.benchmark, t),
    )?;
    let report = problem.solve(problem.zero_state())?;
    let m = config.measurement();
    let u = problem.displacement_at(&report.state, m.point)?;
    Ok(PointSolve {
        value: u.dot(&m.direction),
        n_elements,
        n_dofs: problem.n_dofs(),
        iterations: report.iterations,
    })
}

/// Order-`reference_order` solutions with both reductions on the finest level,
/// one per thickness.
pub fn reference_values(config: &BenchmarkConfig) -> Result<Vec<f64>> {
    config.validate()?;
    let level = config.levels - 1;
    let p = config.reference_order;
    config
        .thicknesses
        .par_iter()
        .map(|t| {
            solve_point(config, *t, level, p, p, MembraneReduction::Regge, ShearReduction::EdgeTangential)
                .map(|s| s.value)
        })
        .collect()
}

/// Runs the sweep against precomputed reference values.
pub fn run_benchmark_against(config: &BenchmarkConfig, references: &[f64]) -> Result<ResultTable> {
    config.validate()?;
    if references.len() != config.thicknesses.len() {
        return Err(Error::Config("one reference value per thickness is required".into()));
    }
    let cases: Vec<(usize, usize)> = (0..config.thicknesses.len())
        .flat_map(|i| (0..config.levels).map(move |l| (i, l)))
        .collect();
    let g = config.geometry_order.unwrap_or(config.order);
    let rows = cases
        .par_iter()
        .map(|&(i, level)| {
            let t = config.thicknesses[i];
            let reference = references[i];
            let solved = solve_point(config, t, level, config.order, g, config.membrane, config.shear);
            let (value, n_elements, n_dofs, newton_iters) = match solved {
                Ok(s) => (s.value, s.n_elements, s.n_dofs, s.iterations),
                Err(e) => {
                    eprintln!("{} t={t} level={level}: {e}", config.benchmark);
                    (f64::NAN, 0, 0, 0)
                }
            };
            ResultRow {
                benchmark: config.benchmark.to_string(),
                t,
                level,
                n_elements,
                n_dofs,
                reduction: config.reduction_label(),
                value,
                reference,
                rel_error: (value - reference).abs() / reference.abs(),
                newton_iters,
            }
        })
        .collect();
    Ok(ResultTable { rows })
}

pub fn run_benchmark(config: &BenchmarkConfig) -> Result<ResultTable> {
    let references = reference_values(config)?;
    run_benchmark_against(config, &references)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Svg,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "svg" => Ok(Self::Svg),
            other => Err(Error::Config(format!("unknown output format `{other}`"))),
        }
    }
}

pub fn write_csv<W: Write>(table: &ResultTable, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in &table.rows {
        w.write_record([
            r.benchmark.clone(),
            r.t.to_string(),
            r.level.to_string(),
            r.n_elements.to_string(),
            r.n_dofs.to_string(),
            r.reduction.clone(),
            format!("{:e}", r.value),
            format!("{:e}", r.reference),
            format!("{:e}", r.rel_error),
            r.newton_iters.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<ResultTable> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(CSV_COLUMNS) {
        return Err(Error::Config(format!("unexpected CSV header {header:?}")));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Config(format!("bad number `{s}`: {e}")));
    let int = |s: &str| s.parse::<usize>().map_err(|e| Error::Config(format!("bad integer `{s}`: {e}")));
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        rows.push(ResultRow {
            benchmark: rec[0].to_string(),
            t: num(&rec[1])?,
            level: int(&rec[2])?,
            n_elements: int(&rec[3])?,
            n_dofs: int(&rec[4])?,
            reduction: rec[5].to_string(),
            value: num(&rec[6])?,
            reference: num(&rec[7])?,
            rel_error: num(&rec[8])?,
            newton_iters: int(&rec[9])?,
        });
    }
    Ok(ResultTable { rows })
}

/// Log-log plot of relative error against dofs, one polyline per
/// (thickness, reduction) series.
pub fn render_svg(table: &ResultTable) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const PAD: f64 = 60.0;
    let pts: Vec<&ResultRow> = table
        .rows
        .iter()
        .filter(|r| r.rel_error.is_finite() && r.rel_error > 0.0 && r.n_dofs > 0)
        .collect();
    let mut series: Vec<(f64, String)> = Vec::new();
    for r in &table.rows {
        if !series.iter().any(|(t, red)| *t == r.t && *red == r.reduction) {
            series.push((r.t, r.reduction.clone()));
        }
    }
    let lx = |r: &ResultRow| (r.n_dofs as f64).log10();
    let ly = |r: &ResultRow| r.rel_error.log10();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for r in &pts {
        x0 = x0.min(lx(r));
        x1 = x1.max(lx(r));
        y0 = y0.min(ly(r));
        y1 = y1.max(ly(r));
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let (x1, y1) = (if x1 > x0 { x1 } else { x0 + 1.0 }, if y1 > y0 { y1 } else { y0 + 1.0 });
    let sx = |v: f64| PAD + (v - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |v: f64| H - PAD - (v - y0) / (y1 - y0) * (H - 2.0 * PAD);
    const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#7f7f7f"];
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <line x1=\"{PAD}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{PAD}\" y1=\"{PAD}\" x2=\"{PAD}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <text x=\"{cx}\" y=\"{ty}\" text-anchor=\"middle\" font-size=\"12\">log10 dofs [{x0:.2}, {x1:.2}]</text>\n\
         <text x=\"14\" y=\"{cy}\" font-size=\"12\" transform=\"rotate(-90 14 {cy})\" text-anchor=\"middle\">log10 relative error [{y0:.2}, {y1:.2}]</text>\n",
        b = H - PAD,
        r = W - PAD,
        cx = W / 2.0,
        ty = H - 20.0,
        cy = H / 2.0,
    );
    for (i, (t, red)) in series.iter().enumerate() {
        let mut line: Vec<&&ResultRow> = pts.iter().filter(|r| r.t == *t && r.reduction == *red).collect();
        line.sort_by_key(|r| r.level);
        let coords: Vec<String> = line.iter().map(|r| format!("{:.2},{:.2}", sx(lx(r)), sy(ly(r)))).collect();
        let color = COLORS[i % COLORS.len()];
        s.push_str(&format!(
            "<polyline data-t=\"{t}\" data-reduction=\"{red}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>\n",
            coords.join(" ")
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"{color}\">t={t} regge={red}</text>\n",
            W - PAD - 110.0,
            PAD + 14.0 * i as f64
        ));
    }
    s.push_str("</svg>\n");
    s
}

pub fn emit_table(table: &ResultTable, format: OutputFormat, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    match format {
        OutputFormat::Csv => write_csv(table, file),
        OutputFormat::Svg => {
            let mut file = file;
            file.write_all(render_svg(table).as_bytes())?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for n in BenchmarkName::ALL {
            assert_eq!(n.as_str().parse::<BenchmarkName>().unwrap(), n);
        }
        assert!("plate".parse::<BenchmarkName>().is_err());
    }

    #[test]
    fn cylinder_mesh_sequence() {
        let counts: Vec<usize> = (0..3)
            .map(|l| make_benchmark_mesh(BenchmarkName::Cylinder, l, true).unwrap().0.triangles().len())
            .collect();
        assert_eq!(counts, vec![8, 32, 128]);
        assert!(make_benchmark_mesh(BenchmarkName::Cylinder, 0, false).is_err());
    }

    #[test]
    fn every_boundary_edge_is_marked() {
        for n in BenchmarkName::ALL {
            let (mesh, _) = make_benchmark_mesh(n, 1, true).unwrap();
            for e in 0..mesh.edges().len() {
                assert_eq!(mesh.is_boundary_edge(e), mesh.marker(e).is_some(), "{n}");
            }
            assert!(mesh.counts().euler_relation_holds());
        }
    }

    #[test]
    fn empty_table_is_header_only() {
        let mut buf = Vec::new();
        write_csv(&ResultTable::default(), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), CSV_COLUMNS.join(",") + "\n");
    }
}

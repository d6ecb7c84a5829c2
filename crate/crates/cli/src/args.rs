//! Command-line surface: flags, subcommands, and configuration assembly.

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use spectra_core::geometry::{Configuration, Geometry};

#[derive(Parser, Debug)]
#[command(
    name = "spectra",
    version,
    about = "Bound states of attractive point interactions on flat and hyperbolic manifolds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve det Φ = 0 and report every bound state.
    Spectrum(SpectrumArgs),
    /// Evaluate the sufficient bound-state-count criteria.
    Criteria(CriteriaArgs),
    /// Sweep one parameter and emit a CSV row per grid point.
    Sweep(SweepArgs),
    /// Evaluate heat kernels (with the two-dimensional hyperbolic bounds).
    Heatkernel(HeatkernelArgs),
    /// Evaluate free resolvent kernels and the Krein correction.
    Resolvent(ResolventArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
pub enum GeometryKind {
    Flat2,
    Flat3,
    H2,
    H3,
    Relflat2,
    Relh2,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
pub enum Format {
    Json,
    Csv,
}

/// Geometry + configuration flags shared by the subcommands. A JSON config
/// file and inline flags are mutually exclusive.
#[derive(Args, Debug, Clone)]
pub struct ConfigArgs {
    /// Geometry kind (flat2, flat3, h2, h3, relflat2, relh2).
    #[arg(long, value_enum)]
    pub geometry: Option<GeometryKind>,
    /// Curvature scale κ > 0 (hyperbolic kinds; sectional curvature -κ²).
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Rest mass m > 0 (relativistic kinds).
    #[arg(long)]
    pub mass: Option<f64>,
    /// Binding parameters μ_1,...,μ_N (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub mu: Vec<f64>,
    /// Equal spacing of collinear centers: d_ij = |i-j| * value.
    #[arg(long)]
    pub dist_line: Option<f64>,
    /// CSV file holding the full symmetric distance matrix.
    #[arg(long)]
    pub dist_matrix: Option<String>,
    /// JSON configuration file {"mu": [...], "dist": [[...]], "geometry": {...}}.
    #[arg(long)]
    pub config: Option<String>,
}

impl ConfigArgs {
    pub fn build(&self) -> anyhow::Result<(Geometry, Configuration)> {
        if let Some(path) = &self.config {
            if self.geometry.is_some() || !self.mu.is_empty() {
                bail!("--config excludes the inline geometry/mu flags");
            }
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            return Configuration::parse_json(&text).map_err(|e| anyhow!(e.to_string()));
        }
        let kind = self.geometry.ok_or_else(|| anyhow!("either --config or --geometry is required"))?;
        let geom = self.geometry_for(kind)?;
        if self.mu.is_empty() {
            bail!("--mu is required with inline configuration");
        }
        let n = self.mu.len();
        let dist = match (&self.dist_matrix, self.dist_line) {
            (Some(_), Some(_)) => bail!("--dist-line and --dist-matrix are mutually exclusive"),
            (Some(path), None) => read_distance_csv(path, n)?,
            (None, Some(spacing)) => {
                return Ok((geom, Configuration::collinear(self.mu.clone(), spacing)))
            }
            (None, None) => {
                if n == 1 {
                    vec![vec![0.0]]
                } else {
                    bail!("N > 1 needs --dist-line or --dist-matrix")
                }
            }
        };
        Ok((geom, Configuration::new(self.mu.clone(), dist)))
    }

    pub fn geometry_for(&self, kind: GeometryKind) -> anyhow::Result<Geometry> {
        let kappa = || self.kappa.ok_or_else(|| anyhow!("--kappa is required for this geometry"));
        let mass = || self.mass.ok_or_else(|| anyhow!("--mass is required for this geometry"));
        Ok(match kind {
            GeometryKind::Flat2 => Geometry::Flat2,
            GeometryKind::Flat3 => Geometry::Flat3,
            GeometryKind::H2 => Geometry::Hyperbolic2 { kappa: kappa()? },
            GeometryKind::H3 => Geometry::Hyperbolic3 { kappa: kappa()? },
            GeometryKind::Relflat2 => Geometry::RelFlat2 { m: mass()? },
            GeometryKind::Relh2 => Geometry::RelHyperbolic2 { kappa: kappa()?, m: mass()? },
        })
    }
}

fn read_distance_csv(path: &str, n: usize) -> anyhow::Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    let mut rows = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>().with_context(|| format!("{path}:{}: bad number {c:?}", k + 1)))
            .collect::<anyhow::Result<_>>()?;
        rows.push(row);
    }
    if rows.len() != n {
        bail!("distance matrix in {path} has {} rows for {n} centers", rows.len());
    }
    Ok(rows)
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Output path (stdout when omitted).
    #[arg(long)]
    pub output: Option<String>,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Root bisection tolerance (spectral units).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug)]
pub struct CriteriaArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Minimum pairwise distance for the shortcut form (collinear config).
    #[arg(long)]
    pub d: Option<f64>,
    /// Number of centers for the shortcut form.
    #[arg(long)]
    pub n: Option<usize>,
    /// Also run the exact count and report agreement.
    #[arg(long)]
    pub verify: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
pub enum SweepAxis {
    D,
    Mu,
    Kappa,
    M,
    Nu,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Output path (stdout when omitted); sweeps always emit CSV.
    #[arg(long)]
    pub output: Option<String>,
    /// Swept parameter.
    #[arg(long, value_enum)]
    pub axis: SweepAxis,
    /// Grid as start:stop:steps with an optional :log suffix.
    #[arg(long)]
    pub range: String,
}

#[derive(Args, Debug)]
pub struct HeatkernelArgs {
    /// Geometry kind (non-relativistic only).
    #[arg(long, value_enum)]
    pub geometry: GeometryKind,
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Geodesic distances (comma-separated).
    #[arg(long, value_delimiter = ',', required = true)]
    pub d: Vec<f64>,
    /// Times (comma-separated).
    #[arg(long, value_delimiter = ',', required = true)]
    pub t: Vec<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ResolventArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Spectral parameter ν >= 0.
    #[arg(long)]
    pub nu: f64,
    /// Distances for the free kernel (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub d: Vec<f64>,
    /// Distances from x to each center: evaluates the Krein correction.
    #[arg(long, value_delimiter = ',')]
    pub x_dists: Vec<f64>,
    /// Distances from y to each center (defaults to --x-dists).
    #[arg(long, value_delimiter = ',')]
    pub y_dists: Vec<f64>,
}

/// Parse "start:stop:steps[:log]" into a grid.
pub fn parse_range(spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 && parts.len() != 4 {
        bail!("range must be start:stop:steps[:log], got {spec:?}");
    }
    let start: f64 = parts[0].parse().context("range start")?;
    let stop: f64 = parts[1].parse().context("range stop")?;
    let steps: usize = parts[2].parse().context("range steps")?;
    let log = match parts.get(3) {
        None => false,
        Some(&"log") => true,
        Some(other) => bail!("unknown range suffix {other:?}"),
    };
    if steps == 0 {
        bail!("range needs at least one step");
    }
    if steps == 1 {
        return Ok(vec![start]);
    }
    if log && !(start > 0.0 && stop > 0.0) {
        bail!("log range needs positive endpoints");
    }
    let grid = (0..steps)
        .map(|k| {
            let f = k as f64 / (steps - 1) as f64;
            if log {
                (start.ln() + (stop.ln() - start.ln()) * f).exp()
            } else {
                start + (stop - start) * f
            }
        })
        .collect();
    Ok(grid)
}

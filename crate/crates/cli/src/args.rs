use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ghk_core::BarrierSurface;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "ghk", version, about = "Barrier, stability and geodesic computations on Gibbons-Hawking spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the constant C and the table of R_k.
    Constants {
        /// Largest k in the R_k table.
        #[arg(long, default_value_t = 10)]
        kmax: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sample the lifted k-convexity of a barrier surface.
    Scan {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Number of smallest eigenvalues summed (1, 2 or 3).
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Grid resolution per chart coordinate.
        #[arg(long, default_value_t = 128)]
        grid: usize,
        /// Extra random chart samples.
        #[arg(long, default_value_t = 10_000)]
        random: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Margin curves of the closed-form barrier inequalities.
    Margins {
        #[command(flatten)]
        config: ConfigArg,
        /// Which margin to evaluate.
        #[arg(long, value_enum)]
        family: MarginKind,
        /// Point on the cylinder axis.
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true, default_value = "0,0,0")]
        axis_point: [f64; 3],
        /// Cylinder axis direction, or plane normal (pointing away from the centres).
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true, default_value = "0,0,1")]
        direction: [f64; 3],
        /// First radius/offset (default: half the threshold).
        #[arg(long, allow_hyphen_values = true)]
        from: Option<f64>,
        /// Last radius/offset (default: twice the threshold).
        #[arg(long, allow_hyphen_values = true)]
        to: Option<f64>,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        /// Random points per surface.
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Gaussian curvature profile over the segment between two centres.
    Curvature {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        segment: SegmentArgs,
        /// Number of Chebyshev nodes.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Strong stability test for the invariant sphere over a segment.
    Stability {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        segment: SegmentArgs,
        /// Number of Chebyshev nodes (at least 100).
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Critical points of the potential (circle-invariant closed geodesics).
    Geodesics {
        #[command(flatten)]
        config: ConfigArg,
        /// Random seeds inside the convex hull, beyond midpoints and triple centroids.
        #[arg(long, default_value_t = 1000)]
        random: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Closed form of (M+N) at the midpoint of the three-centre configuration.
    Counterexample {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0.0)]
        m: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct ConfigArg {
    /// Configuration JSON: {"m": <mass>, "points": [{"p": [x, y, z], "c": <multiplicity>}, ...]}.
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    /// Index of the centre placed at t = +a.
    #[arg(long, default_value_t = 0)]
    pub i: usize,
    /// Index of the centre placed at t = -a.
    #[arg(long, default_value_t = 1)]
    pub j: usize,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Exit with status 1 unless the result has this sign.
    #[arg(long, value_enum)]
    pub expect: Option<Expect>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MarginKind {
    /// ⟨∇φ, x⟩ + 4φ on spheres |x| = r (threshold 4/3·max|p_i|).
    Sphere,
    /// ⟨∇φ, ν⟩ + 2φ/r on cylinders (threshold 2·max r_i).
    Cylinder,
    /// -⟨∇φ, n⟩ on planes ⟨x, n⟩ = offset beyond all centres.
    Plane,
    /// min(minor1, -det_aux) on spheres (threshold C·max|p_i|).
    Codim2,
}

/// Surface given as JSON or as a family name plus inline parameters.
#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// JSON object with a "family" field, a path to such a file, or one of
    /// sphere | cylinder | plane | ellipsoid2 | ellipsoidN with inline flags.
    #[arg(long)]
    pub surface: String,
    /// Radius (sphere, cylinder) or ellipsoid parameter r (ellipsoid2).
    #[arg(long)]
    pub r: Option<f64>,
    /// Sphere centre.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub centre: Option<[f64; 3]>,
    /// Point on the cylinder axis.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub point: Option<[f64; 3]>,
    /// Cylinder axis direction.
    #[arg(long = "axis", value_parser = parse_vec3, allow_hyphen_values = true)]
    pub axis: Option<[f64; 3]>,
    /// Plane normal, pointing away from the centres.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub normal: Option<[f64; 3]>,
    #[arg(long, allow_hyphen_values = true)]
    pub offset: Option<f64>,
    /// Half focal distance of the two-foci ellipsoid.
    #[arg(long)]
    pub a: Option<f64>,
    /// Foci of ellipsoidN as "x,y,z;x,y,z;...".
    #[arg(long, allow_hyphen_values = true)]
    pub foci: Option<String>,
    /// Distance-sum level of ellipsoidN.
    #[arg(long)]
    pub level: Option<f64>,
    /// Sampled half-extent of cylinders (axial) and planes.
    #[arg(long)]
    pub extent: Option<f64>,
}

pub fn parse_vec3(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,z, got {s:?}"));
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse::<f64>().map_err(|e| format!("{p:?}: {e}"))?;
        if !o.is_finite() {
            return Err(format!("{p:?} is not finite"));
        }
    }
    Ok(out)
}

fn require(value: Option<f64>, flag: &str, family: &str) -> Result<f64, String> {
    value.ok_or_else(|| format!("--surface {family} needs --{flag}"))
}

impl SurfaceArgs {
    pub fn resolve(&self) -> Result<BarrierSurface, String> {
        let spec = self.surface.trim();
        let surface = if spec.starts_with('{') {
            BarrierSurface::from_json_str(spec).map_err(|e| e.to_string())?
        } else {
            match spec {
                "sphere" => BarrierSurface::Sphere {
                    centre: self.centre.unwrap_or([0.0; 3]),
                    r: require(self.r, "r", spec)?,
                },
                "cylinder" => BarrierSurface::Cylinder {
                    point: self.point.unwrap_or([0.0; 3]),
                    direction: self.axis.unwrap_or([0.0, 0.0, 1.0]),
                    r: require(self.r, "r", spec)?,
                    half_length: self.extent.unwrap_or(10.0),
                },
                "plane" => BarrierSurface::Plane {
                    normal: self.normal.unwrap_or([0.0, 0.0, 1.0]),
                    offset: require(self.offset, "offset", spec)?,
                    half_width: self.extent.unwrap_or(10.0),
                },
                "ellipsoid2" => BarrierSurface::TwoFociEllipsoid {
                    a: require(self.a, "a", spec)?,
                    r: require(self.r, "r", spec)?,
                },
                "ellipsoidN" => {
                    let foci = self
                        .foci
                        .as_deref()
                        .ok_or("--surface ellipsoidN needs --foci")?
                        .split(';')
                        .map(parse_vec3)
                        .collect::<Result<Vec<_>, _>>()?;
                    BarrierSurface::MultiFociEllipsoid {
                        foci,
                        level: require(self.level, "level", spec)?,
                    }
                }
                path => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| format!("--surface {path:?} is neither a family name nor a readable file: {e}"))?;
                    BarrierSurface::from_json_str(&text).map_err(|e| e.to_string())?
                }
            }
        };
        surface.validate().map_err(|e| e.to_string())?;
        Ok(surface)
    }
}

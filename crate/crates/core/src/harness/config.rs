//! JSON configuration.

use crate::bounds::BOUND_IDS;
use crate::error::{Error, Result};
use crate::fields::MagneticField;
use crate::geometry::{Domain, Mask, Point};
use crate::spectral::{BoundaryCondition, SolverOptions, MIN_NODES};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    pub cases: Vec<CaseConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub csv: Option<PathBuf>,
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseConfig {
    pub id: String,
    pub domain: DomainSpec,
    #[serde(default)]
    pub field: FieldSpec,
    #[serde(default)]
    pub bc: BcSpec,
    pub grid: GridSpec,
    #[serde(default)]
    pub bounds: BoundSelection,
    #[serde(default)]
    pub solver: SolverOptions,
    /// Field strengths for `sweep`; each replaces the configured field by a
    /// constant one.
    #[serde(default)]
    pub b0_list: Vec<f64>,
    /// Grid spacings for `converge`.
    #[serde(default)]
    pub h_list: Vec<f64>,
    #[serde(default)]
    pub gap_source: GapSource,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Disc { center: [f64; 2], radius: f64 },
    Rectangle { corner: [f64; 2], width: f64, height: f64 },
    Ellipse { center: [f64; 2], semi_axes: [f64; 2], #[serde(default)] rotation: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
    EquilateralTriangle { side: f64 },
    /// Rows top to bottom, `'#'` marking interior cells.
    Mask { origin: [f64; 2], cell: f64, rows: Vec<String> },
}

impl DomainSpec {
    pub fn build(&self) -> Result<Domain> {
        let p = |a: [f64; 2]| Point::new(a[0], a[1]);
        match self {
            Self::Disc { center, radius } => Domain::disc(p(*center), *radius),
            Self::Rectangle { corner, width, height } => Domain::rectangle(p(*corner), *width, *height),
            Self::Ellipse { center, semi_axes, rotation } => {
                Domain::ellipse(p(*center), (semi_axes[0], semi_axes[1]), *rotation)
            }
            Self::Polygon { vertices } => Domain::polygon(vertices.iter().map(|v| p(*v)).collect()),
            Self::EquilateralTriangle { side } => Domain::equilateral_triangle(*side),
            Self::Mask { origin, cell, rows } => Ok(Domain::mask(Mask::from_rows(p(*origin), *cell, rows)?)),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    Constant {
        b0: f64,
    },
    /// Either inline samples or a CSV file of `r,B` rows.
    Radial {
        #[serde(default)]
        radii: Vec<f64>,
        #[serde(default)]
        values: Vec<f64>,
        csv: Option<PathBuf>,
    },
    /// A CSV file of `x,y,B` rows.
    Grid {
        csv: PathBuf,
    },
}

impl Default for FieldSpec {
    fn default() -> Self {
        Self::Constant { b0: 0.0 }
    }
}

impl FieldSpec {
    /// Relative CSV paths are resolved against `base`.
    pub fn build(&self, base: &Path) -> Result<MagneticField> {
        match self {
            Self::Constant { b0 } if b0.is_finite() => Ok(MagneticField::Constant(*b0)),
            Self::Constant { b0 } => Err(Error::InvalidField(format!("B0 = {b0} is not finite"))),
            Self::Radial { csv: Some(path), .. } => MagneticField::from_radial_csv(&base.join(path)),
            Self::Radial { radii, values, csv: None } => MagneticField::radial(radii.clone(), values.clone()),
            Self::Grid { csv } => MagneticField::from_grid_csv(&base.join(csv)),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BcSpec {
    #[default]
    Dirichlet,
    Neumann,
    Both,
}

impl BcSpec {
    pub fn conditions(self) -> Vec<BoundaryCondition> {
        match self {
            Self::Dirichlet => vec![BoundaryCondition::Dirichlet],
            Self::Neumann => vec![BoundaryCondition::Neumann],
            Self::Both => vec![BoundaryCondition::Dirichlet, BoundaryCondition::Neumann],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub h: Option<f64>,
    /// Approximate number of unknowns; `h = sqrt(|Ω|/nodes)`.
    pub nodes: Option<usize>,
    #[serde(default = "yes")]
    pub extrapolate: bool,
}

fn yes() -> bool {
    true
}

impl GridSpec {
    pub fn spacing(&self, domain: &Domain) -> Result<f64> {
        match (self.h, self.nodes) {
            (Some(h), None) if h > 0.0 && h.is_finite() => Ok(h),
            (None, Some(n)) if n >= MIN_NODES => Ok((domain.area() / n as f64).sqrt()),
            (None, Some(n)) => Err(Error::Config(format!("grid target of {n} nodes is below {MIN_NODES}"))),
            _ => Err(Error::Config("grid needs exactly one of a positive h or a node count".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundSelection {
    /// The keyword `"all"`.
    Keyword(String),
    List(Vec<String>),
}

impl Default for BoundSelection {
    fn default() -> Self {
        Self::Keyword("all".into())
    }
}

impl BoundSelection {
    pub fn ids(&self) -> Result<Vec<String>> {
        match self {
            Self::Keyword(k) if k == "all" => Ok(BOUND_IDS.iter().map(|s| s.to_string()).collect()),
            Self::Keyword(k) => Err(Error::Config(format!("unknown bound selection {k:?}"))),
            Self::List(ids) => {
                if let Some(bad) = ids.iter().find(|id| !BOUND_IDS.contains(&id.as_str())) {
                    return Err(Error::Config(format!("unknown bound {bad:?}; known: {}", BOUND_IDS.join(", "))));
                }
                Ok(ids.clone())
            }
        }
    }
}

/// Source of `Δλ` in the second-type bounds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapSource {
    #[default]
    Computed,
    /// `3π²/diam²`, convex domains only.
    Floor,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.cases.is_empty() {
            return Err(Error::Config("no cases".into()));
        }
        let mut ids: Vec<&str> = self.cases.iter().map(|c| c.id.as_str()).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Config(format!("duplicate case id {:?}", w[0])));
        }
        for c in &self.cases {
            c.bounds.ids()?;
            let domain = c.domain.build()?;
            c.grid.spacing(&domain)?;
            if c.b0_list.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::Config(format!("case {}: b0_list must be ascending", c.id)));
            }
        }
        Ok(())
    }
}

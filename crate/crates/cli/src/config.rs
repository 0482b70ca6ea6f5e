use std::path::PathBuf;

use berezin::groups::{AlgebraVector, GroupElement, HeisenbergElement, Matrix2Element, MatrixGroup};
use berezin::reps::{algebra_for, group_exp, identity_for};
use berezin::{Cx, Space};
use clap::Args;
use serde::Deserialize;

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 20_261_016;

/// Every setting of a run. Flags and the JSON file share the same names; a
/// flag wins over the file.
#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Space: fock, disc or poly.
    #[arg(long, global = true)]
    pub space: Option<String>,
    /// Fock parameter gamma > 0.
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// Disc weight n > 2.
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Polynomial degree m >= 1.
    #[arg(long, global = true)]
    pub m: Option<u32>,
    /// Lie algebra coefficients a1,a2,a3.
    #[arg(long = "X", global = true, value_delimiter = ',', allow_negative_numbers = true)]
    #[serde(rename = "X")]
    pub x: Option<Vec<f64>>,
    /// Point re,im.
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub z: Option<Vec<f64>>,
    /// Group element: a1,a2,a3 on fock, re a,im a,re b,im b on disc and poly.
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub g: Option<Vec<f64>>,
    /// Square symbol grid radius,points per side.
    #[arg(long, global = true, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,
    /// Use truncated coherent states instead of the closed-form symbol.
    #[arg(long, global = true)]
    pub numeric: Option<bool>,
    /// CSV output path; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// SVG plot path.
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    /// Seed of the randomized checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Comma separated check suites.
    #[arg(long, global = true, value_delimiter = ',')]
    pub suite: Option<Vec<String>>,
    /// Contraction experiment: symbol, matrix-element, density or weak.
    #[arg(long, global = true)]
    pub experiment: Option<String>,
    /// Contraction target: su11 or su2.
    #[arg(long, global = true)]
    pub target: Option<String>,
    /// Heisenberg element a1,a2,a3.
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub h: Option<Vec<f64>>,
    /// Matrix element source index.
    #[arg(long, global = true)]
    pub p: Option<usize>,
    /// Matrix element target index.
    #[arg(long, global = true)]
    pub q: Option<usize>,
    /// Contraction indices.
    #[arg(long, global = true, value_delimiter = ',')]
    pub indices: Option<Vec<u32>>,
    /// Fock truncation of the matrix element limit.
    #[arg(long, global = true)]
    pub truncation: Option<usize>,
    /// Centre of the Gaussian test function.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub phi_center: Option<f64>,
    /// Width of the Gaussian test function.
    #[arg(long, global = true)]
    pub phi_width: Option<f64>,
    /// JSON file with the same keys.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

macro_rules! overlay {
    ($flags:expr, $file:expr, $($f:ident),*) => {
        RunConfig { $($f: $flags.$f.or($file.$f),)* config: $flags.config }
    };
}

impl RunConfig {
    /// Reads `--config` if given and fills the unset flags from it.
    pub fn resolve(self) -> Result<Self, CliError> {
        let Some(path) = &self.config else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let file: RunConfig =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Ok(overlay!(
            self, file, space, gamma, n, m, x, z, g, grid, numeric, out, svg, seed, suite, experiment, target, h, p, q,
            indices, truncation, phi_center, phi_width
        ))
    }

    /// The space with its parameter constraints checked.
    pub fn space(&self) -> Result<Space, CliError> {
        let name = self.space.as_deref().ok_or_else(|| CliError::Config("--space is required".into()))?;
        match name {
            "fock" => {
                let gamma = self.gamma.unwrap_or(1.0);
                if !(gamma > 0.0 && gamma.is_finite()) {
                    return Err(CliError::Config(format!("gamma must be positive, got {gamma}")));
                }
                Ok(Space::fock(gamma)?)
            }
            "disc" => {
                let n = self.n.ok_or_else(|| CliError::Config("--n is required for disc".into()))?;
                if n <= 2 {
                    return Err(CliError::Config(format!("disc needs n > 2, got {n}")));
                }
                Ok(Space::disc(n)?)
            }
            "poly" => {
                let m = self.m.ok_or_else(|| CliError::Config("--m is required for poly".into()))?;
                if m < 1 {
                    return Err(CliError::Config("poly needs m >= 1".into()));
                }
                Ok(Space::poly(m)?)
            }
            other => Err(CliError::Config(format!("unknown space `{other}`"))),
        }
    }

    pub fn gamma(&self) -> Result<f64, CliError> {
        let gamma = self.gamma.unwrap_or(1.0);
        if gamma > 0.0 && gamma.is_finite() {
            Ok(gamma)
        } else {
            Err(CliError::Config(format!("gamma must be positive, got {gamma}")))
        }
    }

    pub fn point(&self, space: Option<&Space>) -> Result<Cx<f64>, CliError> {
        let z = match &self.z {
            None => Cx::new(0.0, 0.0),
            Some(v) => Cx::new(*v.first().unwrap_or(&f64::NAN), *v.get(1).unwrap_or(&0.0)),
        };
        if self.z.as_ref().is_some_and(|v| v.len() > 2) || !z.re.is_finite() || !z.im.is_finite() {
            return Err(CliError::Config("--z takes re,im".into()));
        }
        if let Some(space) = space {
            if !space.contains(z) {
                return Err(CliError::Config(format!("z = {z} outside the domain of {}", space.name())));
            }
        }
        Ok(z)
    }

    fn triple(v: &Option<Vec<f64>>, flag: &str, default: Option<[f64; 3]>) -> Result<[f64; 3], CliError> {
        match v {
            None => default.ok_or_else(|| CliError::Config(format!("--{flag} is required"))),
            Some(v) if v.len() == 3 && v.iter().all(|x| x.is_finite()) => Ok([v[0], v[1], v[2]]),
            Some(_) => Err(CliError::Config(format!("--{flag} takes three finite numbers"))),
        }
    }

    /// `X` in the algebra acting on `space`.
    pub fn algebra_vector(&self, space: &Space) -> Result<AlgebraVector<f64>, CliError> {
        let [a1, a2, a3] = Self::triple(&self.x, "X", None)?;
        Ok(AlgebraVector::new(algebra_for(space), a1, a2, a3))
    }

    pub fn heis_vector(&self, default: [f64; 3]) -> Result<AlgebraVector<f64>, CliError> {
        let [a1, a2, a3] = Self::triple(&self.x, "X", Some(default))?;
        Ok(AlgebraVector::heis(a1, a2, a3))
    }

    pub fn heisenberg_element(&self) -> Result<HeisenbergElement<f64>, CliError> {
        let [a1, a2, a3] = Self::triple(&self.h, "h", Some([1.0, 1.0, 1.0]))?;
        Ok(HeisenbergElement::new(a1, a2, a3))
    }

    /// `--g` if given, else `exp(X)` if `--X` is given, else the identity.
    pub fn group_element(&self, space: &Space) -> Result<GroupElement<f64>, CliError> {
        match (&self.g, &self.x) {
            (Some(_), Some(_)) => Err(CliError::Config("give either --g or --X, not both".into())),
            (Some(g), None) => match identity_for(space) {
                GroupElement::Heis(_) => {
                    let [a1, a2, a3] = Self::triple(&self.g, "g", None)?;
                    Ok(GroupElement::Heis(HeisenbergElement::new(a1, a2, a3)))
                }
                GroupElement::Matrix(id) => {
                    if g.len() != 4 {
                        return Err(CliError::Config("--g takes re a,im a,re b,im b on disc and poly".into()));
                    }
                    let e = Matrix2Element::new(Cx::new(g[0], g[1]), Cx::new(g[2], g[3]), id.group)?;
                    Ok(GroupElement::Matrix(e))
                }
            },
            (None, Some(_)) => Ok(group_exp(&self.algebra_vector(space)?)?),
            (None, None) => Ok(identity_for(space)),
        }
    }

    pub fn target(&self) -> Result<MatrixGroup, CliError> {
        match self.target.as_deref().unwrap_or("su11") {
            "su11" => Ok(MatrixGroup::SU11),
            "su2" => Ok(MatrixGroup::SU2),
            other => Err(CliError::Config(format!("unknown target `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("berezin-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.json");
        std::fs::write(&path, r#"{"space": "disc", "n": 5, "gamma": 2.0, "X": [1, 0, 0]}"#).unwrap();
        let flags = RunConfig {
            n: Some(7),
            config: Some(path),
            ..RunConfig::default()
        };
        let c = flags.resolve().unwrap();
        assert_eq!(c.space.as_deref(), Some("disc"));
        assert_eq!(c.n, Some(7));
        assert_eq!(c.gamma, Some(2.0));
        assert_eq!(c.x, Some(vec![1.0, 0.0, 0.0]));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"sapce": "fock"}"#).is_err());
    }
}

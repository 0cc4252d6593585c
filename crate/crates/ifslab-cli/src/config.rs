//! JSON system-definition format.
//!
//! A config describes one iterated function system: the ambient dimension,
//! the affine maps (row-major matrix plus translation), optional declared
//! overlaps, and optional rendering defaults. Unknown fields are rejected
//! so typos surface as parse errors with line/column positions.

use ifslab::{AffineMap, IfsSystem, OverlapSpec};
use serde::Deserialize;

/// One affine map `x ↦ Ax + b`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapConfig {
    /// Row-major entries of the linear part; length must be the square of
    /// the ambient dimension.
    pub matrix: Vec<f64>,
    /// Translation; length must equal the ambient dimension.
    pub translation: Vec<f64>,
    /// Optional display name.
    #[serde(default)]
    pub label: Option<String>,
}

/// A declared overlap: `q` image pieces share a homothetic copy of the
/// attractor at scale `p`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverlapConfig {
    /// Indices of the overlapping maps.
    pub indices: Vec<usize>,
    /// Number of overlapping pieces; must equal `indices.len()`.
    pub q: usize,
    /// Scale of the shared copy, in (0, 1).
    pub p: f64,
}

/// Default sampling parameters for rendering-style subcommands.
#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenderConfig {
    #[serde(default)]
    pub points: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub burn_in: Option<usize>,
    #[serde(default)]
    pub resolution: Option<usize>,
}

/// Top-level system definition.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    /// Optional system name; defaults to the config's source name.
    #[serde(default)]
    pub name: Option<String>,
    /// Ambient dimension of every map.
    pub ambient_dim: usize,
    /// The maps, in order; indices elsewhere refer to this list.
    pub maps: Vec<MapConfig>,
    /// Declared overlaps, if any.
    #[serde(default)]
    pub overlaps: Vec<OverlapConfig>,
    /// Optional rendering defaults.
    #[serde(default)]
    pub render: Option<RenderConfig>,
}

impl SystemConfig {
    /// Parses a config from raw JSON bytes. Error messages carry
    /// serde_json's line/column diagnostics.
    pub fn parse(bytes: &[u8]) -> Result<Self, String> {
        serde_json::from_slice(bytes).map_err(|e| format!("config does not parse: {e}"))
    }

    /// Cross-field validation and conversion into a library system.
    pub fn build_system(&self, fallback_name: &str) -> Result<IfsSystem, String> {
        if self.ambient_dim == 0 {
            return Err("field 'ambient_dim' must be at least 1".to_string());
        }
        if self.maps.is_empty() {
            return Err("field 'maps' must list at least one map".to_string());
        }
        let m = self.ambient_dim;
        let mut maps = Vec::with_capacity(self.maps.len());
        for (i, mc) in self.maps.iter().enumerate() {
            if mc.translation.len() != m {
                return Err(format!(
                    "maps[{i}].translation has {} entries; ambient_dim {m} needs {m}",
                    mc.translation.len()
                ));
            }
            if mc.matrix.len() != m * m {
                return Err(format!(
                    "maps[{i}].matrix has {} entries; ambient_dim {m} needs {}",
                    mc.matrix.len(),
                    m * m
                ));
            }
            let map = AffineMap::from_parts(&mc.matrix, &mc.translation)
                .map_err(|e| format!("maps[{i}]: {e}"))?;
            maps.push(match &mc.label {
                Some(label) => map.with_label(label.clone()),
                None => map,
            });
        }
        let mut overlaps = Vec::with_capacity(self.overlaps.len());
        for (i, oc) in self.overlaps.iter().enumerate() {
            if oc.q != oc.indices.len() {
                return Err(format!(
                    "overlaps[{i}].q is {} but {} indices are listed; q must count \
                     the overlapping maps",
                    oc.q,
                    oc.indices.len()
                ));
            }
            if let Some(bad) = oc.indices.iter().find(|&&ix| ix >= self.maps.len()) {
                return Err(format!(
                    "overlaps[{i}] references map {bad}, but only {} maps exist",
                    self.maps.len()
                ));
            }
            overlaps.push(
                OverlapSpec::new(oc.indices.clone(), oc.p)
                    .map_err(|e| format!("overlaps[{i}]: {e}"))?,
            );
        }
        let system = IfsSystem::new(maps).map_err(|e| format!("invalid system: {e}"))?;
        let system = if overlaps.is_empty() {
            system
        } else {
            system
                .with_overlaps(overlaps)
                .map_err(|e| format!("invalid overlaps: {e}"))?
        };
        Ok(system.with_name(self.name.as_deref().unwrap_or(fallback_name)))
    }
}

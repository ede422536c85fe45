//! Asset catalog: maps `catalog/filename` keys to simulator-ready
//! metadata — extents, native frame, density, precomputed collision
//! proxies, and attribution (license/author) for third-party assets.
//!
//! Convex decomposition itself happens offline; entries only reference
//! the resulting hull files and the compiler copies the reference into
//! the emitted scene.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{BoxExtent, Vec3};
use crate::plan::{Construction, ConstructionKind, IssueSeverity, SchemaIssue, SimulationPlan};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("duplicate catalog key `{0}`")]
    DuplicateKey(String),
    #[error("entry `{key}` has non-positive extents ({x}, {y}, {z})")]
    BadExtents { key: String, x: f64, y: f64, z: f64 },
    #[error("no catalog entry for `{0}`")]
    MissingEntry(String),
    #[error("construction is not asset-kind")]
    NotAnAsset,
}

/// One asset record. Extents are in metres in the asset's native frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub catalog: String,
    pub filename: String,
    pub extents: Vec3,
    /// Mesh baseline orientation; every shipped asset is z-up, +X facing.
    #[serde(default = "default_native_frame")]
    pub native_frame: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
    /// Path to a precomputed convex-hull set used for collision.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collision_proxy: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub license: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub author: Option<String>,
    /// Factory expression for wrapper assets, passed through verbatim.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factory: Option<String>,
}

fn default_native_frame() -> String {
    "z_up_plus_x".to_string()
}

impl CatalogEntry {
    pub fn key(&self) -> String {
        format!("{}/{}", self.catalog, self.filename)
    }

    pub fn box_extent(&self) -> BoxExtent {
        BoxExtent::from_vec(self.extents).expect("catalog extents validated at load")
    }
}

#[derive(Debug, Deserialize)]
struct CatalogFile {
    entries: Vec<CatalogEntry>,
}

/// Immutable after load; share freely.
#[derive(Debug, Clone, Default)]
pub struct AssetCatalog {
    entries: BTreeMap<String, CatalogEntry>,
}

impl AssetCatalog {
    /// An empty catalog, for pipelines that use procedural bodies only.
    pub fn empty() -> AssetCatalog {
        AssetCatalog::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &str) -> Option<&CatalogEntry> {
        self.entries.get(key)
    }

    pub fn entries(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.values()
    }
}

/// Load a catalog document (JSON, one record per asset).
pub fn load_catalog(text: &str) -> Result<AssetCatalog, CatalogError> {
    let file: CatalogFile = serde_json::from_str(text)?;
    let mut entries = BTreeMap::new();
    for entry in file.entries {
        let key = entry.key();
        if entry.extents.x <= 0.0 || entry.extents.y <= 0.0 || entry.extents.z <= 0.0 {
            return Err(CatalogError::BadExtents {
                key,
                x: entry.extents.x,
                y: entry.extents.y,
                z: entry.extents.z,
            });
        }
        if entries.insert(key.clone(), entry).is_some() {
            return Err(CatalogError::DuplicateKey(key));
        }
    }
    Ok(AssetCatalog { entries })
}

/// Exact-key lookup for an asset-kind construction.
pub fn lookup<'c>(
    catalog: &'c AssetCatalog,
    construction: &Construction,
) -> Result<&'c CatalogEntry, CatalogError> {
    if construction.kind != ConstructionKind::Asset {
        return Err(CatalogError::NotAnAsset);
    }
    let (Some(name), Some(filename)) = (&construction.catalog, &construction.filename) else {
        return Err(CatalogError::MissingEntry("<catalog or filename unset>".into()));
    };
    let key = format!("{name}/{filename}");
    catalog.get(&key).ok_or(CatalogError::MissingEntry(key))
}

/// Catalog misses for a plan's asset objects, as needs-clarification
/// issues that merge into the schema-validation output.
pub fn lookup_issues(plan: &SimulationPlan, catalog: &AssetCatalog) -> Vec<SchemaIssue> {
    let mut issues = Vec::new();
    for obj in &plan.objects {
        if obj.construction.kind != ConstructionKind::Asset {
            continue;
        }
        if let Err(CatalogError::MissingEntry(key)) = lookup(catalog, &obj.construction) {
            issues.push(SchemaIssue {
                severity: IssueSeverity::NeedsClarification,
                subject: Some(obj.name.clone()),
                message: format!("asset `{key}` is not in the catalog; refusing to guess extents"),
                default: None,
            });
        }
    }
    issues
}

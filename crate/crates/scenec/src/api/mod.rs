//! Static API validation for generated simulator scripts.
//!
//! Simulator APIs drift between versions, so generated code is checked
//! against a version-specific index before anything executes: imports,
//! classes, functions, method calls, and argument patterns (positional
//! arity plus keyword names). The index is a flat JSON file, one record
//! per symbol with its namespace path and signature bounds, which keeps
//! versions diffable.

mod extract;
mod validate;

pub use extract::{extract_call_sites, CallKind, CallSite, ExtractError, Extraction};
pub use validate::{validate_calls, ApiFinding, ApiReport, Finding};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("index parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("method `{0}` names no class in the index")]
    OrphanMethod(String),
    #[error("record `{path}`: min_args {min} exceeds max_args {max}")]
    BadArgRange { path: String, min: usize, max: usize },
}

/// Positional-arity bounds and accepted keyword names.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub min_args: usize,
    pub max_args: usize,
    #[serde(default)]
    pub keywords: BTreeSet<String>,
}

impl Signature {
    pub fn exact(n: usize) -> Signature {
        Signature { min_args: n, max_args: n, keywords: BTreeSet::new() }
    }

    pub fn with_keywords(mut self, keywords: &[&str]) -> Signature {
        self.keywords = keywords.iter().map(|s| s.to_string()).collect();
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClassEntry {
    pub constructor: Signature,
    pub methods: BTreeMap<String, Signature>,
}

/// A version-specific inventory of importable modules, classes (with
/// methods), and functions.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ApiIndex {
    pub version: String,
    pub modules: BTreeSet<String>,
    pub classes: BTreeMap<String, ClassEntry>,
    pub functions: BTreeMap<String, Signature>,
}

#[derive(Debug, Deserialize, Serialize)]
struct IndexRecord {
    kind: String,
    path: String,
    #[serde(default)]
    min_args: usize,
    #[serde(default)]
    max_args: usize,
    #[serde(default)]
    keywords: Vec<String>,
}

#[derive(Debug, Deserialize)]
struct IndexFile {
    version: String,
    records: Vec<IndexRecord>,
}

/// Load an API index document.
pub fn load_api_index(text: &str) -> Result<ApiIndex, IndexError> {
    let file: IndexFile = serde_json::from_str(text)?;
    let mut index = ApiIndex { version: file.version, ..ApiIndex::default() };
    // Classes may appear after their methods in the file; two passes.
    for record in &file.records {
        if record.min_args > record.max_args {
            return Err(IndexError::BadArgRange {
                path: record.path.clone(),
                min: record.min_args,
                max: record.max_args,
            });
        }
        let signature = Signature {
            min_args: record.min_args,
            max_args: record.max_args,
            keywords: record.keywords.iter().cloned().collect(),
        };
        match record.kind.as_str() {
            "module" => {
                if !index.modules.insert(record.path.clone()) {
                    return Err(IndexError::DuplicateSymbol(record.path.clone()));
                }
            }
            "class" => {
                let entry = ClassEntry { constructor: signature, methods: BTreeMap::new() };
                if index.classes.insert(record.path.clone(), entry).is_some() {
                    return Err(IndexError::DuplicateSymbol(record.path.clone()));
                }
            }
            "function" => {
                if index.functions.insert(record.path.clone(), signature).is_some() {
                    return Err(IndexError::DuplicateSymbol(record.path.clone()));
                }
            }
            "method" => {} // second pass
            other => {
                return Err(IndexError::Parse(<serde_json::Error as serde::de::Error>::custom(
                    format!("unknown record kind `{other}`"),
                )))
            }
        }
    }
    for record in &file.records {
        if record.kind != "method" {
            continue;
        }
        let (class_path, method) = record
            .path
            .rsplit_once('.')
            .ok_or_else(|| IndexError::OrphanMethod(record.path.clone()))?;
        let class = index
            .classes
            .get_mut(class_path)
            .ok_or_else(|| IndexError::OrphanMethod(record.path.clone()))?;
        let signature = Signature {
            min_args: record.min_args,
            max_args: record.max_args,
            keywords: record.keywords.iter().cloned().collect(),
        };
        if class.methods.insert(method.to_string(), signature).is_some() {
            return Err(IndexError::DuplicateSymbol(record.path.clone()));
        }
    }
    Ok(index)
}

impl ApiIndex {
    /// Symbols present in exactly one of the two indices.
    pub fn diff_symbols(&self, other: &ApiIndex) -> Vec<String> {
        let collect = |index: &ApiIndex| -> BTreeSet<String> {
            let mut set: BTreeSet<String> = index.modules.iter().cloned().collect();
            set.extend(index.functions.keys().cloned());
            for (class, entry) in &index.classes {
                set.insert(class.clone());
                for method in entry.methods.keys() {
                    set.insert(format!("{class}.{method}"));
                }
            }
            set
        };
        let a = collect(self);
        let b = collect(other);
        a.symmetric_difference(&b).cloned().collect()
    }
}

/// The API index the script emitter targets, bundled with the crate.
pub fn bundled_index_json() -> &'static str {
    include_str!("../../assets/api_index.json")
}

//! Classify extracted call sites against an API index.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{ApiIndex, CallKind, CallSite, Extraction, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Finding {
    UnknownSymbol,
    BadArity,
    UnknownKeyword,
    /// The recognizer could not resolve the site (unknown receiver,
    /// dynamic construct); reported, never silently passed.
    Unanalyzable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiFinding {
    pub finding: Finding,
    pub site: CallSite,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ApiReport {
    pub index_version: String,
    pub sites_checked: usize,
    pub findings: Vec<ApiFinding>,
}

impl ApiReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Check every site. Sites classify as ok, unknown symbol, bad arity,
/// unknown keyword, or unanalyzable; only non-ok classifications are
/// reported.
pub fn validate_calls(extraction: &Extraction, index: &ApiIndex) -> ApiReport {
    let mut report = ApiReport {
        index_version: index.version.clone(),
        sites_checked: extraction.sites.len(),
        findings: Vec::new(),
    };
    let aliases: BTreeMap<&str, &str> = extraction
        .aliases
        .iter()
        .map(|(a, m)| (a.as_str(), m.as_str()))
        .collect();
    // Variable -> class path, for ctor-bound receivers.
    let mut bindings: BTreeMap<&str, String> = BTreeMap::new();
    for (var, site_index) in &extraction.assignments {
        let site = &extraction.sites[*site_index];
        if site.kind == CallKind::Construct {
            if let Some(path) = resolve_path(&site.name, &aliases) {
                if index.classes.contains_key(&path) {
                    bindings.insert(var.as_str(), path);
                }
            }
        }
    }

    for site in &extraction.sites {
        match site.kind {
            CallKind::Import => {
                let path = resolve_path(&site.name, &aliases).unwrap_or_else(|| site.name.clone());
                let known = index.modules.contains(&path)
                    || index.classes.contains_key(&path)
                    || index.functions.contains_key(&path);
                if !known {
                    report.findings.push(ApiFinding {
                        finding: Finding::UnknownSymbol,
                        site: site.clone(),
                        message: format!("import `{path}` is not in the API index"),
                    });
                }
            }
            CallKind::Construct => {
                let path = resolve_path(&site.name, &aliases).unwrap_or_else(|| site.name.clone());
                match index.classes.get(&path) {
                    Some(entry) => check_signature(site, &path, &entry.constructor, &mut report),
                    None => report.findings.push(ApiFinding {
                        finding: Finding::UnknownSymbol,
                        site: site.clone(),
                        message: format!("class `{path}` is not in the API index"),
                    }),
                }
            }
            CallKind::Call => {
                let path = resolve_path(&site.name, &aliases).unwrap_or_else(|| site.name.clone());
                match index.functions.get(&path) {
                    Some(signature) => check_signature(site, &path, signature, &mut report),
                    None => report.findings.push(ApiFinding {
                        finding: Finding::UnknownSymbol,
                        site: site.clone(),
                        message: format!("function `{path}` is not in the API index"),
                    }),
                }
            }
            CallKind::MethodCall => {
                let receiver = site.receiver.as_deref().unwrap_or("");
                // A lowercase two-segment chain may actually be a
                // function on an aliased module.
                if let Some(path) = resolve_path(&site.name, &aliases) {
                    if let Some(signature) = index.functions.get(&path) {
                        check_signature(site, &path, signature, &mut report);
                        continue;
                    }
                }
                let Some(class_path) = bindings.get(receiver) else {
                    report.findings.push(ApiFinding {
                        finding: Finding::Unanalyzable,
                        site: site.clone(),
                        message: format!(
                            "receiver `{receiver}` is not bound to a known class; cannot analyze"
                        ),
                    });
                    continue;
                };
                let method = site.name.rsplit('.').next().unwrap_or("");
                let entry = &index.classes[class_path];
                match entry.methods.get(method) {
                    Some(signature) => {
                        let path = format!("{class_path}.{method}");
                        check_signature(site, &path, signature, &mut report);
                    }
                    None => report.findings.push(ApiFinding {
                        finding: Finding::UnknownSymbol,
                        site: site.clone(),
                        message: format!("`{class_path}` has no method `{method}`"),
                    }),
                }
            }
        }
    }
    report
}

/// Expand a leading alias; `None` when the name has no alias and is
/// returned unchanged by the caller.
fn resolve_path(name: &str, aliases: &BTreeMap<&str, &str>) -> Option<String> {
    let (head, rest) = match name.split_once('.') {
        Some((head, rest)) => (head, Some(rest)),
        None => (name, None),
    };
    match (aliases.get(head), rest) {
        (Some(module), Some(rest)) => Some(format!("{module}.{rest}")),
        (Some(module), None) => Some((*module).to_string()),
        (None, _) => Some(name.to_string()),
    }
}

fn check_signature(site: &CallSite, path: &str, signature: &Signature, report: &mut ApiReport) {
    if site.arg_count < signature.min_args || site.arg_count > signature.max_args {
        let expected = if signature.min_args == signature.max_args {
            format!("{}", signature.min_args)
        } else {
            format!("{}..{}", signature.min_args, signature.max_args)
        };
        report.findings.push(ApiFinding {
            finding: Finding::BadArity,
            site: site.clone(),
            message: format!(
                "`{path}` takes {expected} positional argument(s), got {}",
                site.arg_count
            ),
        });
    }
    for keyword in &site.keywords {
        if !signature.keywords.contains(keyword) {
            report.findings.push(ApiFinding {
                finding: Finding::UnknownKeyword,
                site: site.clone(),
                message: format!("`{path}` accepts no keyword `{keyword}`"),
            });
        }
    }
}

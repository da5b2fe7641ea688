//! Flat `key = value` config files merged under command-line flags.

use std::path::Path;

use anyhow::{Context, Result};

use crate::UsageError;

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| UsageError(format!("config line {}: expected key = value", i + 1)))?;
        let key = k.trim().trim_start_matches("--");
        if key.is_empty() {
            return Err(UsageError(format!("config line {}: empty key", i + 1)).into());
        }
        out.push((key.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

fn has_flag(args: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    let prefix = format!("--{key}=");
    args.iter().any(|a| *a == flag || a.starts_with(&prefix))
}

/// Appends every config entry whose flag is absent from `args`. Boolean
/// entries become bare flags (`true`) or are dropped (`false`).
pub fn merge(mut args: Vec<String>) -> Result<Vec<String>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .with_context(|| format!("reading config {path}"))?;
    for (key, value) in parse(&text)? {
        if key == "config" || has_flag(&args, &key) {
            continue;
        }
        match value.as_str() {
            "true" => args.push(format!("--{key}")),
            "false" => {}
            _ => {
                args.push(format!("--{key}"));
                args.push(value);
            }
        }
    }
    Ok(args)
}

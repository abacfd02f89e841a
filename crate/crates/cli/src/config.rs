//! `key = value` files, applied as trailing `--key=value` flags so that they
//! override anything given on the command line.

use std::ffi::OsString;
use std::path::Path;

use crate::CliError;

pub fn parse(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected `key = value`", i + 1)))?;
        let key = k.trim().replace('_', "-");
        let val = v.trim().trim_matches('"').to_string();
        if key.is_empty() || key.starts_with('-') {
            return Err(CliError::Config(format!("config line {}: bad key `{}`", i + 1, k.trim())));
        }
        if key == "config" {
            return Err(CliError::Config("config files cannot include other config files".into()));
        }
        out.push((key, val));
    }
    Ok(out)
}

fn config_path(argv: &[OsString]) -> Option<OsString> {
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--" {
            return None;
        }
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

pub fn merge(mut argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&argv) else { return Ok(argv) };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.to_string_lossy())))?;
    for (k, v) in parse(&text)? {
        argv.push(format!("--{k}={v}").into());
    }
    Ok(argv)
}

//! Key-value config files that mirror the command-line flags.
//!
//! ```text
//! # comment
//! code = mock
//! k = 256
//! N = 4096
//! exact = true
//! ```
//!
//! Entries are spliced in right after the subcommand, so flags given on the
//! command line override them.

use std::path::Path;

use anyhow::{bail, Context, Result};

pub const SUBCOMMANDS: [&str; 4] = ["build", "verify", "bound", "rdldc"];

/// Turns config lines into `--key value` arguments.
pub fn parse(text: &str) -> Result<Vec<String>> {
    let mut args = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("line {}: expected `key = value`, got {raw:?}", lineno + 1);
        };
        let (key, value) = (key.trim().trim_start_matches("--"), value.trim());
        if key.is_empty() || key.contains(char::is_whitespace) {
            bail!("line {}: bad key {key:?}", lineno + 1);
        }
        match value {
            "true" => args.push(format!("--{key}")),
            "false" => {}
            _ => {
                args.push(format!("--{key}"));
                args.push(value.to_string());
            }
        }
    }
    Ok(args)
}

/// Removes `--config FILE` from `argv` and splices the file's entries after the subcommand.
pub fn expand(argv: Vec<String>) -> Result<Vec<String>> {
    let mut out = Vec::with_capacity(argv.len());
    let mut path = None;
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            path = Some(it.next().context("--config needs a file")?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            out.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(out);
    };
    let text = std::fs::read_to_string(Path::new(&path)).with_context(|| format!("reading config {path}"))?;
    let extra = parse(&text).with_context(|| format!("in config {path}"))?;
    let at = out.iter().position(|a| SUBCOMMANDS.contains(&a.as_str())).map_or(out.len(), |i| i + 1);
    out.splice(at..at, extra);
    Ok(out)
}

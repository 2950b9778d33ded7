//! `--config FILE` expansion.
//!
//! The file holds `key = value` lines named after the long flags of the
//! subcommand. Its entries are spliced into the argument list right after
//! the subcommand name, so anything given on the command line comes later
//! and wins.

use std::ffi::OsString;
use std::path::Path;

use clap::Command;
use qwalk3::{Error, Result};

pub fn expand(argv: Vec<OsString>, cli: &Command) -> Result<Vec<OsString>> {
    let Some(sub_pos) = argv
        .iter()
        .skip(1)
        .position(|a| cli.find_subcommand(a).is_some())
        .map(|p| p + 1)
    else {
        return Ok(argv);
    };
    let sub = cli
        .find_subcommand(&argv[sub_pos])
        .expect("position found above");

    let mut rest = Vec::new();
    let mut config = None;
    let mut iter = argv[sub_pos + 1..].iter();
    while let Some(a) = iter.next() {
        let text = a.to_string_lossy();
        if text == "--config" {
            let path = iter
                .next()
                .ok_or_else(|| Error::Config("--config needs a file".into()))?;
            config = Some(path.clone());
        } else if let Some(path) = text.strip_prefix("--config=") {
            config = Some(path.into());
        } else {
            rest.push(a.clone());
        }
    }

    let mut out: Vec<OsString> = argv[..=sub_pos].to_vec();
    if let Some(path) = config {
        let text = qwalk3::format::read_text(Path::new(&path))
            .map_err(|e| Error::Config(e.to_string()))?;
        out.extend(file_args(&text, sub)?);
    }
    out.extend(rest);
    Ok(out)
}

fn file_args(text: &str, sub: &Command) -> Result<Vec<OsString>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("config line {}: expected key = value", i + 1)))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        let value = value.trim();
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()))
            .ok_or_else(|| Error::Config(format!("config line {}: unknown key '{key}'", i + 1)))?;
        if key == "config" {
            return Err(Error::Config("config files cannot include other config files".into()));
        }
        if arg.get_action().takes_values() {
            out.push(format!("--{key}").into());
            out.push(value.into());
        } else {
            match value {
                "true" => out.push(format!("--{key}").into()),
                "false" => {}
                other => {
                    return Err(Error::Config(format!(
                        "config line {}: '{key}' is a switch, expected true or false, got '{other}'",
                        i + 1
                    )))
                }
            }
        }
    }
    Ok(out)
}

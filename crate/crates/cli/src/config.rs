//! `--config PATH` files: one `key = value` per line, `#` comments. Keys are
//! long flag names of the chosen subcommand (`t_end` and `t-end` both work).
//! The pairs are spliced in right after the subcommand, so flags given on the
//! command line take precedence.

use std::ffi::OsString;
use std::path::Path;

use clap::CommandFactory;

use crate::args::Cli;
use crate::CliError;

const SUBCOMMANDS: [&str; 4] = ["integrate", "portrait", "classify", "elliptic"];

/// A parsed `key = value` pair with its line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

pub fn parse(text: &str) -> Result<Vec<Entry>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("config line {}: expected key = value", i + 1)));
        };
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", i + 1)));
        }
        out.push(Entry {
            line: i + 1,
            key,
            value: v.trim().to_string(),
        });
    }
    Ok(out)
}

fn config_path(argv: &[OsString]) -> Result<Option<(usize, usize, OsString)>, CliError> {
    for (i, a) in argv.iter().enumerate().skip(1) {
        let s = a.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            let path = argv
                .get(i + 1)
                .ok_or_else(|| CliError::Usage("config: missing path".into()))?;
            return Ok(Some((i, 2, path.clone())));
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Ok(Some((i, 1, OsString::from(p))));
        }
    }
    Ok(None)
}

/// Turns config entries into flags for `sub`, rejecting unknown keys.
pub fn to_flags(sub: &str, entries: &[Entry]) -> Result<Vec<OsString>, CliError> {
    let cmd = Cli::command();
    let sc = cmd
        .find_subcommand(sub)
        .ok_or_else(|| CliError::Usage(format!("unknown subcommand '{sub}'")))?;
    let mut flags = Vec::new();
    for e in entries {
        let arg = sc
            .get_arguments()
            .find(|a| a.get_long() == Some(e.key.as_str()) && a.get_id() != "config")
            .ok_or_else(|| {
                CliError::Usage(format!("{}: unknown config key (line {}) for '{sub}'", e.key, e.line))
            })?;
        let flag = OsString::from(format!("--{}", e.key));
        if arg.get_action().takes_values() {
            flags.push(flag);
            flags.extend(e.value.split_whitespace().map(OsString::from));
        } else {
            match e.value.as_str() {
                "true" | "1" | "yes" => flags.push(flag),
                "false" | "0" | "no" => {}
                other => {
                    return Err(CliError::Usage(format!(
                        "{}: expected true or false, got '{other}' (config line {})",
                        e.key, e.line
                    )))
                }
            }
        }
    }
    Ok(flags)
}

/// Removes `--config PATH` from `argv` and inserts the file's flags after the
/// subcommand. Without a config, `argv` is returned unchanged.
pub fn expand(mut argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some((at, width, path)) = config_path(&argv)? else {
        return Ok(argv);
    };
    argv.drain(at..at + width);
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| CliError::Usage(format!("config: cannot read {}: {e}", Path::new(&path).display())))?;
    let entries = parse(&text)?;
    let Some(pos) = argv
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()))
    else {
        // let clap report the missing subcommand
        return Ok(argv);
    };
    let sub = argv[pos].to_string_lossy().into_owned();
    let flags = to_flags(&sub, &entries)?;
    argv.splice(pos + 1..pos + 1, flags);
    Ok(argv)
}

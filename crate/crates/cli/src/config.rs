//! `key=value` configuration files. Keys are long flag names without the
//! leading dashes; blank lines and `#` comments are ignored.

use std::ffi::OsString;
use std::path::Path;

use crate::CliError;

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("config line {}: expected key=value", lineno + 1)));
        };
        let key = key.trim();
        if key.is_empty() || key == "config" || key.starts_with('-') {
            return Err(CliError::Usage(format!("config line {}: bad key {key:?}", lineno + 1)));
        }
        out.push((key.replace('_', "-"), value.trim().to_string()));
    }
    Ok(out)
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

/// Appends the entries of the `--config` file, if any, after the user's
/// arguments so that they take precedence.
pub fn expand_args(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path))?;
    let mut out = args;
    for (key, value) in parse_config(&text)? {
        out.push(format!("--{key}").into());
        out.push(value.into());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_and_comments() {
        let cfg = parse_config("# sweep\nn = 5\nomega_a=19.5 # detuned\n\n").unwrap();
        assert_eq!(cfg, vec![("n".into(), "5".into()), ("omega-a".into(), "19.5".into())]);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_config("n 5").is_err());
        assert!(parse_config("=5").is_err());
        assert!(parse_config("config=x").is_err());
    }

    #[test]
    fn finds_config_flag() {
        let args: Vec<OsString> = ["giantatom", "bound", "--config=a.cfg"].iter().map(Into::into).collect();
        assert_eq!(config_path(&args), Some("a.cfg".into()));
        let args: Vec<OsString> = ["giantatom", "bound", "--n", "3"].iter().map(Into::into).collect();
        assert_eq!(expand_args(args.clone()).unwrap(), args);
    }
}

//! Flat `key = value` run configuration, merged with command-line flags.
//!
//! A config file holds an optional `command` key and one key per long flag
//! (without the leading dashes). Flags given on the command line win over
//! file values. The merged [`RunConfig`] is turned back into a canonical
//! argument vector so that a single parser validates both sources.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RunConfig {
    pub command: Option<String>,
    pub params: BTreeMap<String, String>,
    /// Bare tokens that are neither the command nor flag values.
    pub positionals: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

impl RunConfig {
    /// Parse the file format. Blank lines and lines starting with `#` are
    /// skipped; keys and values are trimmed.
    pub fn parse_str(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ConfigError(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(ConfigError(format!("line {}: empty key", lineno + 1)));
            }
            if key == "command" {
                cfg.command = Some(value.to_string());
            } else if cfg.params.insert(key.to_string(), value.to_string()).is_some() {
                return Err(ConfigError(format!("line {}: duplicate key `{key}`", lineno + 1)));
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse_str(&text)
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        if let Some(cmd) = &self.command {
            out.push_str(&format!("command = {cmd}\n"));
        }
        for (k, v) in &self.params {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }

    /// Split raw arguments (without the program name) into a command, flag
    /// values and leftovers. A flag without a value is recorded as `true`.
    pub fn from_args(args: &[String]) -> Self {
        let mut cfg = RunConfig::default();
        let mut i = 0;
        while i < args.len() {
            let tok = &args[i];
            if let Some(flag) = tok.strip_prefix("--") {
                if let Some((k, v)) = flag.split_once('=') {
                    cfg.params.insert(k.to_string(), v.to_string());
                } else if i + 1 < args.len() && !args[i + 1].starts_with("--") {
                    cfg.params.insert(flag.to_string(), args[i + 1].clone());
                    i += 1;
                } else {
                    cfg.params.insert(flag.to_string(), "true".to_string());
                }
            } else if cfg.command.is_none() {
                cfg.command = Some(tok.clone());
            } else {
                cfg.positionals.push(tok.clone());
            }
            i += 1;
        }
        cfg
    }

    /// Layer `over` on top of `self`; `over` wins.
    pub fn merged(mut self, over: RunConfig) -> Self {
        if over.command.is_some() {
            self.command = over.command;
        }
        self.params.extend(over.params);
        self.positionals.extend(over.positionals);
        self
    }

    /// Resolve `--config` (if any) and merge it under the command line.
    pub fn resolve(args: &[String]) -> Result<Self, ConfigError> {
        let mut cli = Self::from_args(args);
        match cli.params.remove("config") {
            Some(path) => Ok(Self::load(Path::new(&path))?.merged(cli)),
            None => Ok(cli),
        }
    }

    /// Canonical argument vector, program name included.
    pub fn to_argv(&self, program: &str) -> Vec<String> {
        let mut argv = vec![program.to_string()];
        if let Some(cmd) = &self.command {
            argv.push(cmd.clone());
        }
        for (k, v) in &self.params {
            argv.push(format!("--{k}={v}"));
        }
        argv.extend(self.positionals.iter().cloned());
        argv
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn round_trip() {
        let cfg = RunConfig::from_args(&strings(&[
            "simulate", "--set", "sphere", "--d=8", "--N", "256", "--assert",
        ]));
        let again = RunConfig::parse_str(&cfg.to_file_string()).unwrap();
        assert_eq!(again, cfg);
        assert_eq!(cfg.params["assert"], "true");
        assert_eq!(cfg.params["d"], "8");
    }

    #[test]
    fn negative_values_are_values() {
        let cfg = RunConfig::from_args(&strings(&["bound", "--u", "-1"]));
        assert_eq!(cfg.params["u"], "-1");
    }

    #[test]
    fn flags_win_over_file() {
        let file = RunConfig::parse_str("command = simulate\nd = 4\nq = 3\n").unwrap();
        let cli = RunConfig::from_args(&strings(&["--d", "16"]));
        let m = file.merged(cli);
        assert_eq!(m.command.as_deref(), Some("simulate"));
        assert_eq!(m.params["d"], "16");
        assert_eq!(m.params["q"], "3");
    }

    #[test]
    fn malformed_lines_are_errors() {
        assert!(RunConfig::parse_str("just words").is_err());
        assert!(RunConfig::parse_str("a = 1\na = 2").is_err());
        assert!(RunConfig::parse_str(" = 2").is_err());
        let ok = RunConfig::parse_str("# comment\n\n a = b = c ").unwrap();
        assert_eq!(ok.params["a"], "b = c");
    }
}

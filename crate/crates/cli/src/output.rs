use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, Result};

/// Prints `value` as one JSON line, or as an indented key/value listing
/// when `pretty` is set.
pub fn emit<T: Serialize>(value: &T, pretty: bool) -> Result<()> {
    let json = serde_json::to_value(value).map_err(|e| CliError::Internal(e.to_string()))?;
    let text = if pretty {
        let mut out = String::new();
        render_table(&json, "", &mut out);
        out
    } else {
        format!("{json}\n")
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    lock.write_all(text.as_bytes())
        .and_then(|_| lock.flush())
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn render_table(value: &Value, indent: &str, out: &mut String) {
    let Value::Object(map) = value else {
        out.push_str(&format!("{indent}{value}\n"));
        return;
    };
    let width = map.keys().map(|k| k.chars().count()).max().unwrap_or(0);
    for (key, v) in map {
        match v {
            Value::Object(inner) if !inner.is_empty() => {
                out.push_str(&format!("{indent}{key}:\n"));
                render_table(v, &format!("{indent}  "), out);
            }
            Value::Array(items) => {
                let items: Vec<String> = items.iter().map(scalar).collect();
                out.push_str(&format!("{indent}{key:<width$}  {}\n", items.join(", ")));
            }
            other => out.push_str(&format!("{indent}{key:<width$}  {}\n", scalar(other))),
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_owned(),
        Value::Number(n) => match n.as_f64() {
            Some(f) if n.is_f64() => format!("{f:.4}"),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

/// Writes `value` as pretty JSON to `path`.
pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Internal(e.to_string()))?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

pub fn finish(mut w: BufWriter<File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Every line of a UTF-8 text file, without line terminators.
pub fn read_lines(path: &Path) -> Result<Vec<String>> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| match e.kind() {
            std::io::ErrorKind::InvalidData => CliError::format(path, format!("line {}: invalid UTF-8", i + 1)),
            _ => CliError::io(path, e),
        })?;
        out.push(line.strip_suffix('\r').map(str::to_owned).unwrap_or(line));
    }
    Ok(out)
}

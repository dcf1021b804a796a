//! JSON/CSV input and output.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;
use unitdist_core::geometry::{CircleRecord, Point3};

use crate::error::{LabError, Result};

/// JSON pointer (`/steps/2/metric`) for a deserialization path.
pub fn json_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    out
}

/// Deserializes `value`, reporting errors as `(pointer, message)` with
/// `prefix` prepended to the pointer.
pub fn from_value<T: DeserializeOwned>(value: Value, prefix: &str) -> std::result::Result<T, (String, String)> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let pointer = format!("{prefix}{}", json_pointer(e.path()));
        (pointer, e.into_inner().to_string())
    })
}

pub fn read_value(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|source| LabError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| LabError::Input {
        path: path.to_path_buf(),
        pointer: String::new(),
        message: e.to_string(),
    })
}

fn decode<T: DeserializeOwned>(path: &Path, value: Value, prefix: &str) -> Result<T> {
    from_value(value, prefix).map_err(|(pointer, message)| LabError::Input {
        path: path.to_path_buf(),
        pointer,
        message,
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let v = read_value(path)?;
    decode(path, v, "")
}

/// A bare JSON array, or the `field` member of an object (such as a family
/// file written by `gen`).
fn read_list<T: DeserializeOwned>(path: &Path, field: &str) -> Result<Vec<T>> {
    match read_value(path)? {
        v @ Value::Array(_) => decode(path, v, ""),
        Value::Object(mut m) => {
            let v = m.remove(field).unwrap_or(Value::Array(vec![]));
            decode(path, v, &format!("/{field}"))
        }
        _ => Err(LabError::Input {
            path: path.to_path_buf(),
            pointer: String::new(),
            message: format!("expected an array or an object with {field:?}"),
        }),
    }
}

pub fn read_points(path: &Path) -> Result<Vec<Point3>> {
    read_list(path, "points")
}

pub fn read_circles(path: &Path) -> Result<Vec<CircleRecord>> {
    read_list(path, "circles")
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output types serialize");
    s.push('\n');
    s
}

/// Minimal CSV: every field is a number, a boolean or a rational string
/// without commas, so no quoting is needed.
pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    let io = |source| LabError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    fs::write(path, contents).map_err(io)
}

/// Resolves `p` against `base` unless it is absolute.
pub fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

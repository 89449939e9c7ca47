//! Polygon vertex files: one `x y` pair per line, `#` starts a comment.

use std::fs;
use std::path::Path;

use trilat_core::Vec2;

use crate::AppError;

/// Parses vertex text. `path` is only used in error messages.
pub fn parse_vertices(text: &str, path: &Path) -> Result<Vec<Vec2>, AppError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| AppError::Parse { path: path.to_path_buf(), line: i + 1, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(err(format!("expected two coordinates, found {}", fields.len())));
        }
        let parse = |s: &str| s.parse::<f64>().map_err(|e| err(format!("bad coordinate {s:?}: {e}")));
        let (x, y) = (parse(fields[0])?, parse(fields[1])?);
        if !(x.is_finite() && y.is_finite()) {
            return Err(err("coordinates must be finite".into()));
        }
        out.push(Vec2::new(x, y));
    }
    Ok(out)
}

pub fn read_vertices(path: &Path) -> Result<Vec<Vec2>, AppError> {
    let text = fs::read_to_string(path).map_err(|source| AppError::Io { path: path.to_path_buf(), source })?;
    parse_vertices(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blank_lines() {
        let text = "# unit square\n0 0\n1 0 # corner\n\n  1 1\n0 1\n";
        let v = parse_vertices(text, Path::new("sq")).unwrap();
        assert_eq!(v, vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)]);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_vertices("0 0\n1\n", Path::new("p.txt")).unwrap_err();
        assert_eq!(err.to_string(), "p.txt:2: expected two coordinates, found 1");
        let err = parse_vertices("0 0\n1 x\n", Path::new("p.txt")).unwrap_err();
        assert!(err.to_string().starts_with("p.txt:2: bad coordinate \"x\""));
        assert!(parse_vertices("inf 0", Path::new("p")).is_err());
    }
}

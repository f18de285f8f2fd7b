//! Terms files: one exact rational per line, `#` header lines ignored on
//! input.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::arith::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

pub fn write_terms(terms: &[Rational], header: &[(String, String)]) -> String {
    let mut out = String::new();
    for (k, v) in header {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    for t in terms {
        out.push_str(&format_rational(t));
        out.push('\n');
    }
    out
}

pub fn read_terms(text: &str) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let column = line.len() - line.trim_start().len() + 1;
        let value = parse_rational(trimmed).map_err(|e| match e {
            Error::Parse { message, .. } => Error::parse(i + 1, column, message),
            other => other,
        })?;
        out.push(value);
    }
    Ok(out)
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => std::env::current_dir()?,
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(format!("not a file path: {}", path.display())))?
        .to_string_lossy()
        .into_owned();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(Error::from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{rat, ratio};

    #[test]
    fn round_trip_with_header() {
        let terms = vec![rat(1), rat(0), ratio(-5, 64)];
        let text = write_terms(&terms, &[("mode".into(), "zero".into())]);
        assert_eq!(text, "# mode: zero\n1\n0\n-5/64\n");
        assert_eq!(read_terms(&text).unwrap(), terms);
    }

    #[test]
    fn positioned_errors() {
        match read_terms("# h\n1\n  0.5\n").unwrap_err() {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (3, 3)),
            e => panic!("{e}"),
        }
    }
}

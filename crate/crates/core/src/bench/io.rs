use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::problems::QapInstance;
use crate::stiefel::Mat;

struct Tokens<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        Self { text, pos: 0 }
    }

    /// Next whitespace-delimited token and its byte offset.
    fn next_token(&mut self) -> Option<(usize, &'a str)> {
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= bytes.len() {
            return None;
        }
        let start = self.pos;
        while self.pos < bytes.len() && !bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        Some((start, &self.text[start..self.pos]))
    }
}

fn parse_number(offset: usize, tok: &str) -> Result<f64> {
    tok.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Parse {
            offset,
            message: format!("malformed number '{tok}'"),
        })
}

/// Parses QAPLIB text: `n`, then `A` and `B` row-major, whitespace-separated.
pub fn parse_qaplib_str(text: &str, name: &str) -> Result<QapInstance> {
    let mut toks = Tokens::new(text);
    let (off, tok) = toks.next_token().ok_or(Error::Parse {
        offset: 0,
        message: "empty file, expected the dimension n".into(),
    })?;
    let n: usize = tok.parse().ok().filter(|&n| n > 0).ok_or_else(|| Error::Parse {
        offset: off,
        message: format!("expected a positive integer dimension, found '{tok}'"),
    })?;
    let expected = 2 * n * n;
    let mut vals = Vec::with_capacity(expected);
    while let Some((off, tok)) = toks.next_token() {
        if vals.len() == expected {
            return Err(Error::Parse {
                offset: off,
                message: format!("unexpected trailing token '{tok}' after {expected} values"),
            });
        }
        vals.push(parse_number(off, tok)?);
    }
    if vals.len() != expected {
        return Err(Error::Parse {
            offset: text.len(),
            message: format!(
                "expected {expected} matrix entries (2 x {n}x{n}), found {}",
                vals.len()
            ),
        });
    }
    let a = Mat::from_row_slice(n, n, &vals[..n * n]);
    let b = Mat::from_row_slice(n, n, &vals[n * n..]);
    QapInstance::new(name, a, b)
}

/// Reads a QAPLIB `.dat` file; the instance is named after the file stem.
pub fn parse_qaplib(path: &Path) -> Result<QapInstance> {
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_qaplib_str(&text, &name)
}

fn fmt_entry(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:?}")
    }
}

/// QAPLIB text for `inst`.
pub fn emit_qaplib(inst: &QapInstance) -> String {
    let n = inst.n();
    let mut s = format!("{n}\n\n");
    for m in [&inst.a, &inst.b] {
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| fmt_entry(m[(i, j)])).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s.push('\n');
    }
    s
}

/// `name value` lines mapping instance names to best-known objectives.
pub fn load_best_known(path: &Path) -> Result<HashMap<String, f64>> {
    let text = std::fs::read_to_string(path)?;
    let mut map = HashMap::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        if !trimmed.is_empty() && !trimmed.starts_with('#') {
            let mut parts = trimmed.split_whitespace();
            let (Some(name), Some(val), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse {
                    offset,
                    message: format!("expected 'name value', found '{trimmed}'"),
                });
            };
            map.insert(name.to_string(), parse_number(offset, val)?);
        }
        offset += line.len();
    }
    Ok(map)
}

/// Dense matrix: one row per line, entries separated by whitespace.
pub fn parse_dense_matrix(text: &str) -> Result<Mat> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let mut toks = Tokens::new(line);
        let mut row = Vec::new();
        while let Some((off, tok)) = toks.next_token() {
            row.push(parse_number(offset + off, tok)?);
        }
        if !row.is_empty() {
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(Error::Parse {
                        offset,
                        message: format!("row has {} entries, expected {}", row.len(), first.len()),
                    });
                }
            }
            rows.push(row);
        }
        offset += line.len();
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            offset: 0,
            message: "empty matrix file".into(),
        });
    }
    let (n, r) = (rows.len(), rows[0].len());
    Ok(Mat::from_row_iterator(n, r, rows.into_iter().flatten()))
}

pub fn read_dense_matrix(path: &Path) -> Result<Mat> {
    parse_dense_matrix(&std::fs::read_to_string(path)?)
}

/// Writes `m` row by row with 17 significant digits.
pub fn write_dense_matrix<W: Write>(m: &Mat, mut w: W) -> std::io::Result<()> {
    for row in m.row_iter() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Whitespace-separated positive integer labels.
pub fn parse_labels(text: &str) -> Result<Vec<usize>> {
    let mut toks = Tokens::new(text);
    let mut out = Vec::new();
    while let Some((off, tok)) = toks.next_token() {
        out.push(tok.parse().map_err(|_| Error::Parse {
            offset: off,
            message: format!("malformed label '{tok}'"),
        })?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_small_fixture() {
        let inst = parse_qaplib_str("2\n0 1\n1 0\n0 2\n2 0\n", "tiny").unwrap();
        assert_eq!(inst.n(), 2);
        assert_eq!(inst.a, Mat::from_row_slice(2, 2, &[0., 1., 1., 0.]));
        assert_eq!(inst.b, Mat::from_row_slice(2, 2, &[0., 2., 2., 0.]));
        assert_eq!(inst.name, "tiny");
    }

    #[test]
    fn emitted_tokens_match_input() {
        let text = "3\n\n 0 1 2\n1 0 4\n2 4 0\n\n0 7 3\n7 0 1\n3 1 0\n";
        let inst = parse_qaplib_str(text, "r").unwrap();
        let out = emit_qaplib(&inst);
        let a: Vec<&str> = text.split_whitespace().collect();
        let b: Vec<&str> = out.split_whitespace().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn truncated_file_names_the_expected_count() {
        let err = parse_qaplib_str("2\n0 1\n1 0\n0 2\n", "t").unwrap_err();
        match err {
            Error::Parse { message, .. } => assert!(message.contains("expected 8"), "{message}"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn malformed_token_reports_offset() {
        let err = parse_qaplib_str("2\n0 x\n1 0\n0 2\n2 0\n", "t").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                offset: 4,
                message: "malformed number 'x'".into()
            }
        );
        assert!(parse_qaplib_str("0\n", "t").is_err());
        assert!(parse_qaplib_str("1\n1 2 3\n", "t").is_err());
    }

    #[test]
    fn dense_matrix_round_trip() {
        let m = Mat::from_row_slice(2, 3, &[1.0, -2.5, 1e-17, 0.1, 3.0, 4.0]);
        let mut buf = Vec::new();
        write_dense_matrix(&m, &mut buf).unwrap();
        assert_eq!(parse_dense_matrix(std::str::from_utf8(&buf).unwrap()).unwrap(), m);
        assert!(parse_dense_matrix("1 2\n3\n").is_err());
    }

    #[test]
    fn best_known_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("best.txt");
        std::fs::write(&p, "# comment\nnug12 578\nchr12a 9552\n").unwrap();
        let m = load_best_known(&p).unwrap();
        assert_eq!(m["nug12"], 578.0);
        std::fs::write(&p, "nug12\n").unwrap();
        assert!(load_best_known(&p).is_err());
    }
}

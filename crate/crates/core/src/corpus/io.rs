use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{normalize, Dataset, Label, TextPair};
use crate::error::{Error, Result};

pub const TSV_HEADER: &str = "text_a\ttext_b\tlabel";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Tsv,
    Jsonl,
}

impl Format {
    /// Guesses the format from a file extension; `.jsonl`/`.json` map to
    /// JSONL and everything else to TSV.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("json") => Format::Jsonl,
            _ => Format::Tsv,
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "tsv" => Ok(Format::Tsv),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(format!("unknown format {other:?} (expected tsv or jsonl)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Tsv => "tsv",
            Format::Jsonl => "jsonl",
        })
    }
}

#[derive(Deserialize)]
struct JsonRecordIn {
    text_a: String,
    text_b: String,
    label: serde_json::Value,
}

#[derive(Serialize)]
struct JsonRecordOut<'a> {
    text_a: &'a str,
    text_b: &'a str,
    label: u8,
}

/// Reads a dataset file. The source name is the file stem.
pub fn ingest(path: &Path, format: Format) -> Result<Dataset> {
    let bytes = fs::read(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    read_dataset(&bytes, format, name)
}

/// Parses dataset bytes. Blank lines are skipped; line numbers in errors are
/// 1-based and count every physical line.
pub fn read_dataset(bytes: &[u8], format: Format, source_name: impl Into<String>) -> Result<Dataset> {
    let mut pairs = Vec::new();
    let mut seen_first = false;

    for (i, raw) in bytes.split(|&b| b == b'\n').enumerate() {
        let line_no = i + 1;
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        let line = std::str::from_utf8(raw).map_err(|_| parse_err(line_no, "invalid UTF-8"))?;
        if line.trim().is_empty() {
            continue;
        }
        let first = !seen_first;
        seen_first = true;

        let (a, b, label) = match format {
            Format::Tsv => {
                let cols: Vec<&str> = line.split('\t').collect();
                if cols.len() != 3 {
                    return Err(parse_err(line_no, &format!("expected 3 columns, found {}", cols.len())));
                }
                if first && is_header(cols[2]) {
                    continue;
                }
                let label = cols[2].parse::<Label>().map_err(|_| parse_err(line_no, "invalid label"))?;
                (cols[0].to_owned(), cols[1].to_owned(), label)
            }
            Format::Jsonl => {
                let rec: JsonRecordIn = serde_json::from_str(line)
                    .map_err(|e| parse_err(line_no, &format!("malformed JSON record ({e})")))?;
                let label = json_label(&rec.label).ok_or_else(|| parse_err(line_no, "invalid label"))?;
                (rec.text_a, rec.text_b, label)
            }
        };

        let (a, b) = (normalize(&a), normalize(&b));
        if a.is_empty() || b.is_empty() {
            return Err(parse_err(line_no, "empty text"));
        }
        pairs.push(TextPair { index: pairs.len(), text_a: a.to_owned(), text_b: b.to_owned(), label });
    }

    Ok(Dataset::from_pairs_unchecked(source_name.into(), pairs))
}

/// Writes a dataset. TSV output always carries a header row, so an empty
/// dataset produces a header-only file.
pub fn write_dataset<W: Write>(dataset: &Dataset, format: Format, mut out: W) -> Result<()> {
    match format {
        Format::Tsv => {
            writeln!(out, "{TSV_HEADER}")?;
            for p in dataset {
                for text in [&p.text_a, &p.text_b] {
                    if text.contains(['\t', '\n', '\r']) {
                        return Err(Error::Serialize {
                            index: p.index,
                            message: "TSV text cannot contain tabs or line breaks".into(),
                        });
                    }
                }
                writeln!(out, "{}\t{}\t{}", p.text_a, p.text_b, p.label)?;
            }
        }
        Format::Jsonl => {
            for p in dataset {
                let rec = JsonRecordOut { text_a: &p.text_a, text_b: &p.text_b, label: p.label.as_u8() };
                serde_json::to_writer(&mut out, &rec)?;
                out.write_all(b"\n")?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn is_header(third_col: &str) -> bool {
    third_col.trim().parse::<f64>().is_err()
}

fn json_label(v: &serde_json::Value) -> Option<Label> {
    match v {
        serde_json::Value::Number(n) => {
            n.as_u64().and_then(|n| u8::try_from(n).ok()).and_then(|n| Label::try_from(n).ok())
        }
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

fn parse_err(line: usize, message: &str) -> Error {
    Error::Parse { line, message: message.to_owned() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn three_row_tsv() {
        let data =
            "苹果手机通讯录如何删除\t苹果手机电话簿如何删除\t1\n猫喜欢吃什么水果\t牛喜欢吃什么水果\t0\na\tb\t1\n";
        let ds = read_dataset(data.as_bytes(), Format::Tsv, "x").unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.iter().map(|p| p.index).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(ds[1].label, Label::Mismatch);
    }

    #[test]
    fn header_is_detected_from_third_column() {
        let data = "text_a\ttext_b\tlabel\nx\ty\t0\n";
        let ds = read_dataset(data.as_bytes(), Format::Tsv, "x").unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds[0].text_a, "x");
    }

    #[test]
    fn invalid_label_names_the_line() {
        let data = "a\tb\t1\nc\td\t2\n";
        let err = read_dataset(data.as_bytes(), Format::Tsv, "x").unwrap_err();
        assert_eq!(err.to_string(), "invalid label at line 2");
    }

    #[test]
    fn wrong_column_count() {
        let err = read_dataset(b"a\tb\n", Format::Tsv, "x").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn invalid_utf8_names_the_line() {
        let mut data = b"a\tb\t1\n".to_vec();
        data.extend_from_slice(b"\xff\xfe\tb\t1\n");
        let err = read_dataset(&data, Format::Tsv, "x").unwrap_err();
        assert_eq!(err.to_string(), "invalid UTF-8 at line 2");
    }

    #[test]
    fn empty_file_is_empty_dataset() {
        assert!(read_dataset(b"", Format::Tsv, "x").unwrap().is_empty());
        assert!(read_dataset(b"", Format::Jsonl, "x").unwrap().is_empty());
    }

    #[test]
    fn header_only_tsv_is_empty_dataset() {
        let mut buf = Vec::new();
        write_dataset(&Dataset::default(), Format::Tsv, &mut buf).unwrap();
        assert_eq!(buf, format!("{TSV_HEADER}\n").into_bytes());
        assert!(read_dataset(&buf, Format::Tsv, "x").unwrap().is_empty());
    }

    #[test]
    fn jsonl_accepts_numeric_and_string_labels() {
        let data = "{\"text_a\":\"a\",\"text_b\":\"b\",\"label\":1}\n\n{\"text_a\":\"c\",\"text_b\":\"d\",\"label\":\"0\",\"extra\":3}\n";
        let ds = read_dataset(data.as_bytes(), Format::Jsonl, "x").unwrap();
        assert_eq!(ds.labels(), vec![Label::Match, Label::Mismatch]);
    }

    #[test]
    fn jsonl_bad_label() {
        let data = "{\"text_a\":\"a\",\"text_b\":\"b\",\"label\":2}\n";
        let err = read_dataset(data.as_bytes(), Format::Jsonl, "x").unwrap_err();
        assert_eq!(err.to_string(), "invalid label at line 1");
    }

    #[test]
    fn crlf_and_surrounding_whitespace() {
        let ds = read_dataset(b" a \t b\t1\r\n", Format::Tsv, "x").unwrap();
        assert_eq!((ds[0].text_a.as_str(), ds[0].text_b.as_str()), ("a", "b"));
    }

    #[test]
    fn tsv_rejects_embedded_tab() {
        let ds = Dataset::from_records("x", vec![("a\tb", "c", Label::Match)]).unwrap();
        assert!(write_dataset(&ds, Format::Tsv, Vec::new()).is_err());
        assert!(write_dataset(&ds, Format::Jsonl, Vec::new()).is_ok());
    }

    fn text() -> impl Strategy<Value = String> {
        // Non-whitespace at both ends, no tabs or newlines inside.
        "[a-z猫牛苹果0-9]([a-z猫牛苹果 0-9]{0,8}[a-z猫牛苹果0-9])?"
    }

    proptest! {
        #[test]
        fn round_trip_both_formats(rows in prop::collection::vec((text(), text(), any::<bool>()), 0..20)) {
            let ds = Dataset::from_records("rt", rows.iter().map(|(a, b, l)| (a, b, Label::from(*l)))).unwrap();
            for format in [Format::Tsv, Format::Jsonl] {
                let mut buf = Vec::new();
                write_dataset(&ds, format, &mut buf).unwrap();
                let back = read_dataset(&buf, format, "rt").unwrap();
                prop_assert_eq!(&back, &ds);
            }
        }
    }
}

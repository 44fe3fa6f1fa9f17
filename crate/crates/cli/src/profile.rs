//! Reader for `r,value` CSV profiles.

use std::io::Read;

use anyhow::{anyhow, bail, Context, Result};

/// Parses a profile with header `r,value`; lines starting with `#` are skipped.
pub fn read_profile<R: Read>(input: R) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input);
    let header_line = reader.position().line();
    let headers = reader.headers().context("reading CSV header")?.clone();
    if headers.iter().collect::<Vec<_>>() != ["r", "value"] {
        bail!(
            "line {}: expected header 'r,value', found '{}'",
            header_line.max(1),
            headers.iter().collect::<Vec<_>>().join(",")
        );
    }
    let mut samples = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            anyhow!("line {line}: {e}")
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            bail!("line {line}: expected 2 fields, found {}", record.len());
        }
        let field = |i: usize, name: &str| -> Result<f64> {
            let text = &record[i];
            text.parse::<f64>()
                .map_err(|_| anyhow!("line {line}: invalid {name} '{text}'"))
        };
        samples.push((field(0, "r")?, field(1, "value")?));
    }
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments() {
        let text = "# profile\nr,value\n0.5,1.25\n# mid\n1, 2e-3\n";
        let samples = read_profile(text.as_bytes()).unwrap();
        assert_eq!(samples, vec![(0.5, 1.25), (1.0, 2e-3)]);
    }

    #[test]
    fn reports_line_numbers() {
        let err = read_profile("r,value\n0.1,1\n0.2,abc\n".as_bytes()).unwrap_err();
        assert_eq!(err.to_string(), "line 3: invalid value 'abc'");
        let err = read_profile("r,value\n0.1,1,4\n".as_bytes()).unwrap_err();
        assert_eq!(err.to_string(), "line 2: expected 2 fields, found 3");
        let err = read_profile("# c\nradius,value\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("expected header"), "{err}");
    }

    #[test]
    fn rejects_locale_decimal_comma() {
        let err = read_profile("r,value\n\"0,5\",1\n".as_bytes()).unwrap_err();
        assert_eq!(err.to_string(), "line 2: invalid r '0,5'");
    }
}

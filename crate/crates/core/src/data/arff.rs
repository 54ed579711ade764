//! ARFF subset reader/writer: `@relation`, `@attribute <name> numeric|{..}`,
//! `@data` CSV rows, `?` missing, `%` comments. Sparse ARFF and date/string
//! attributes are out of scope.

use std::fs;
use std::path::Path;

use crate::data::{
    impute, partition_targets, FeatureDescriptor, FeatureKind, MultiTargetDataset, TargetSpec,
};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub fn load_arff(path: impl AsRef<Path>, targets: &TargetSpec) -> Result<MultiTargetDataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut descriptors: Vec<FeatureDescriptor> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut in_data = false;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if !in_data {
            let lower = line.to_ascii_lowercase();
            if lower.starts_with("@relation") {
                continue;
            } else if lower.starts_with("@attribute") {
                descriptors.push(parse_attribute(path, lineno, line)?);
            } else if lower.starts_with("@data") {
                if descriptors.is_empty() {
                    return Err(Error::parse(path, lineno, "@data before any @attribute"));
                }
                in_data = true;
            } else {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("unrecognized header line `{line}`"),
                ));
            }
        } else {
            let fields = split_csv_line(line);
            if fields.len() != descriptors.len() {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!(
                        "row has {} values, expected {}",
                        fields.len(),
                        descriptors.len()
                    ),
                ));
            }
            let mut row = Vec::with_capacity(fields.len());
            for (j, field) in fields.iter().enumerate() {
                row.push(parse_value(path, lineno, field, &descriptors[j].kind)?);
            }
            rows.push(row);
        }
    }

    if !in_data {
        return Err(Error::parse(path, 0, "missing @data section"));
    }
    if rows.is_empty() {
        return Err(Error::EmptyData);
    }
    let mut values = Matrix::from_rows(&rows)?;
    impute(&mut values, &descriptors)?;
    partition_targets(values, descriptors, targets)
}

fn parse_attribute(path: &Path, lineno: usize, line: &str) -> Result<FeatureDescriptor> {
    let rest = line["@attribute".len()..].trim();
    let (name, spec) = if let Some(stripped) = rest.strip_prefix('\'') {
        let end = stripped
            .find('\'')
            .ok_or_else(|| Error::parse(path, lineno, "unterminated quoted attribute name"))?;
        (stripped[..end].to_string(), stripped[end + 1..].trim())
    } else if let Some(stripped) = rest.strip_prefix('"') {
        let end = stripped
            .find('"')
            .ok_or_else(|| Error::parse(path, lineno, "unterminated quoted attribute name"))?;
        (stripped[..end].to_string(), stripped[end + 1..].trim())
    } else {
        let mut it = rest.splitn(2, char::is_whitespace);
        let name = it
            .next()
            .ok_or_else(|| Error::parse(path, lineno, "attribute without a name"))?;
        (name.to_string(), it.next().unwrap_or("").trim())
    };
    if spec.is_empty() {
        return Err(Error::parse(
            path,
            lineno,
            format!("attribute `{name}` has no type"),
        ));
    }
    let lower = spec.to_ascii_lowercase();
    if lower == "numeric" || lower == "real" || lower == "integer" {
        Ok(FeatureDescriptor::numeric(name))
    } else if spec.starts_with('{') && spec.ends_with('}') {
        let values: Vec<String> = spec[1..spec.len() - 1]
            .split(',')
            .map(|v| v.trim().trim_matches('\'').trim_matches('"').to_string())
            .collect();
        FeatureDescriptor::nominal(name, values)
            .map_err(|e| Error::parse(path, lineno, e.to_string()))
    } else {
        Err(Error::parse(
            path,
            lineno,
            format!("unsupported attribute type `{spec}`"),
        ))
    }
}

fn parse_value(path: &Path, lineno: usize, field: &str, kind: &FeatureKind) -> Result<f64> {
    let field = field.trim();
    if field == "?" {
        return Ok(f64::NAN);
    }
    match kind {
        FeatureKind::Numeric => field
            .parse::<f64>()
            .map_err(|_| Error::parse(path, lineno, format!("bad numeric value `{field}`"))),
        FeatureKind::Nominal(values) => {
            let bare = field.trim_matches('\'').trim_matches('"');
            values
                .iter()
                .position(|v| v == bare)
                .map(|c| c as f64)
                .ok_or_else(|| {
                    Error::parse(path, lineno, format!("value `{bare}` not in nominal set"))
                })
        }
    }
}

/// Split a data row on commas, honoring single/double quotes.
fn split_csv_line(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut quote: Option<char> = None;
    for ch in line.chars() {
        match (ch, quote) {
            (q @ ('\'' | '"'), None) => quote = Some(q),
            (q, Some(open)) if q == open => quote = None,
            (',', None) => fields.push(std::mem::take(&mut cur)),
            _ => cur.push(ch),
        }
    }
    fields.push(cur);
    fields
}

/// Serialize a dataset back to ARFF (features followed by targets).
pub fn write_arff(dataset: &MultiTargetDataset, relation: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("@relation {relation}\n\n"));
    for desc in &dataset.feature_descriptors {
        match &desc.kind {
            FeatureKind::Numeric => {
                out.push_str(&format!("@attribute {} numeric\n", desc.name));
            }
            FeatureKind::Nominal(values) => {
                out.push_str(&format!("@attribute {} {{{}}}\n", desc.name, values.join(",")));
            }
        }
    }
    for name in &dataset.target_names {
        out.push_str(&format!("@attribute {name} numeric\n"));
    }
    out.push_str("\n@data\n");
    for i in 0..dataset.n() {
        let mut fields: Vec<String> = Vec::with_capacity(dataset.d() + dataset.m());
        for (j, desc) in dataset.feature_descriptors.iter().enumerate() {
            let v = dataset.features.get(i, j);
            match &desc.kind {
                FeatureKind::Numeric => fields.push(fmt_value(v)),
                FeatureKind::Nominal(values) => fields.push(values[v as usize].clone()),
            }
        }
        for j in 0..dataset.m() {
            fields.push(fmt_value(dataset.targets.get(i, j)));
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn fmt_value(v: f64) -> String {
    // shortest representation that round-trips
    let mut buf = ryu_like(v);
    if buf.ends_with(".0") {
        buf.truncate(buf.len() - 2);
    }
    buf
}

fn ryu_like(v: f64) -> String {
    let s = format!("{v}");
    debug_assert_eq!(s.parse::<f64>().ok(), Some(v));
    s
}

/// Read a target-name sidecar: a Mulan-style XML label list or a plain text
/// file with one attribute name per line.
pub fn load_target_sidecar(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let trimmed = text.trim_start();
    let names: Vec<String> = if trimmed.starts_with('<') {
        let mut names = Vec::new();
        let mut rest = text.as_str();
        while let Some(pos) = rest.find("name=") {
            rest = &rest[pos + 5..];
            let open = rest.chars().next();
            if let Some(q @ ('"' | '\'')) = open {
                if let Some(end) = rest[1..].find(q) {
                    names.push(rest[1..1 + end].to_string());
                    rest = &rest[1 + end..];
                    continue;
                }
            }
            break;
        }
        names
    } else {
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(String::from)
            .collect()
    };
    if names.is_empty() {
        return Err(Error::parse(path, 0, "sidecar lists no target names"));
    }
    Ok(names)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn minimal_arff() {
        let f = write_tmp(
            "@relation tiny\n@attribute x numeric\n@attribute y numeric\n@data\n1.0,2.0\n",
        );
        let ds = load_arff(f.path(), &TargetSpec::TrailingCount(1)).unwrap();
        assert_eq!((ds.n(), ds.d(), ds.m()), (1, 1, 1));
        assert_eq!(ds.features.get(0, 0), 1.0);
        assert_eq!(ds.targets.get(0, 0), 2.0);
    }

    #[test]
    fn nominal_and_missing() {
        let f = write_tmp(
            "% comment\n@relation t\n@attribute c {red,blue}\n@attribute x numeric\n@attribute y numeric\n@data\nred,1.0,4.0\n?,3.0,5.0\nred,?,6.0\n",
        );
        let ds = load_arff(f.path(), &TargetSpec::TrailingCount(1)).unwrap();
        assert_eq!((ds.n(), ds.d(), ds.m()), (3, 2, 1));
        // mode of {red, red} is red = code 0
        assert_eq!(ds.features.get(1, 0), 0.0);
        // mean of {1.0, 3.0}
        assert_eq!(ds.features.get(2, 1), 2.0);
    }

    #[test]
    fn named_targets() {
        let f = write_tmp(
            "@relation t\n@attribute a numeric\n@attribute b numeric\n@attribute c numeric\n@data\n1,2,3\n",
        );
        let ds = load_arff(f.path(), &TargetSpec::Names(vec!["b".into()])).unwrap();
        assert_eq!(ds.target_names, vec!["b".to_string()]);
        assert_eq!(ds.d(), 2);
        assert!(load_arff(f.path(), &TargetSpec::Names(vec!["zz".into()])).is_err());
    }

    #[test]
    fn rejects_nominal_target() {
        let f = write_tmp("@relation t\n@attribute a numeric\n@attribute c {x,y}\n@data\n1,x\n");
        assert!(matches!(
            load_arff(f.path(), &TargetSpec::TrailingCount(1)),
            Err(Error::NonNumericTarget(_))
        ));
    }

    #[test]
    fn rejects_empty_data() {
        let f = write_tmp("@relation t\n@attribute a numeric\n@attribute b numeric\n@data\n");
        assert!(matches!(
            load_arff(f.path(), &TargetSpec::TrailingCount(1)),
            Err(Error::EmptyData)
        ));
    }

    #[test]
    fn rejects_malformed_header() {
        let f = write_tmp("@relation t\n@attr bogus\n@data\n1\n");
        assert!(load_arff(f.path(), &TargetSpec::TrailingCount(1)).is_err());
    }

    #[test]
    fn roundtrip_is_identical() {
        let f = write_tmp(
            "@relation t\n@attribute c {red,blue}\n@attribute x numeric\n@attribute y numeric\n@data\nblue,0.125,4.0\nred,3.25,-5.5\n",
        );
        let ds = load_arff(f.path(), &TargetSpec::TrailingCount(1)).unwrap();
        let serialized = write_arff(&ds, "t");
        let f2 = write_tmp(&serialized);
        let ds2 = load_arff(f2.path(), &TargetSpec::TrailingCount(1)).unwrap();
        assert_eq!(ds, ds2);
    }

    #[test]
    fn sidecar_formats() {
        let xml = write_tmp(
            "<?xml version=\"1.0\"?>\n<labels><label name=\"t1\"/><label name=\"t2\"/></labels>\n",
        );
        assert_eq!(load_target_sidecar(xml.path()).unwrap(), vec!["t1", "t2"]);
        let txt = write_tmp("t1\nt2\n");
        assert_eq!(load_target_sidecar(txt.path()).unwrap(), vec!["t1", "t2"]);
    }
}

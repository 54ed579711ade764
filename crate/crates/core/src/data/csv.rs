//! CSV ingestion: RFC-4180-style with a header row. The trailing `m` columns
//! are targets and must be numeric; non-numeric feature columns become
//! nominal with categories in first-appearance order.

use std::fs;
use std::path::Path;

use crate::data::{impute, partition_targets, FeatureDescriptor, MultiTargetDataset, TargetSpec};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub fn load_csv(path: impl AsRef<Path>, target_count: usize) -> Result<MultiTargetDataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(path, 0, "missing header row"))?;
    let names: Vec<String> = parse_record(header).into_iter().collect();
    let cols = names.len();
    if target_count == 0 || target_count >= cols {
        return Err(Error::InvalidArgument(format!(
            "target count {target_count} out of range for {cols} columns"
        )));
    }

    let mut raw: Vec<Vec<Option<String>>> = Vec::new();
    for (lineno, line) in lines {
        let fields = parse_record(line);
        if fields.len() != cols {
            return Err(Error::parse(
                path,
                lineno + 1,
                format!("row has {} values, expected {cols}", fields.len()),
            ));
        }
        raw.push(
            fields
                .into_iter()
                .map(|f| {
                    let t = f.trim().to_string();
                    if t.is_empty() || t == "?" {
                        None
                    } else {
                        Some(t)
                    }
                })
                .collect(),
        );
    }
    if raw.is_empty() {
        return Err(Error::EmptyData);
    }

    // Column typing: numeric when every observed value parses as f64.
    let mut descriptors = Vec::with_capacity(cols);
    let mut values = Matrix::zeros(raw.len(), cols);
    for j in 0..cols {
        let numeric = raw
            .iter()
            .filter_map(|r| r[j].as_deref())
            .all(|v| v.parse::<f64>().is_ok());
        if j >= cols - target_count && !numeric {
            return Err(Error::NonNumericTarget(names[j].clone()));
        }
        if numeric {
            descriptors.push(FeatureDescriptor::numeric(&names[j]));
            for (i, row) in raw.iter().enumerate() {
                let v = row[j]
                    .as_deref()
                    .map_or(f64::NAN, |s| s.parse::<f64>().unwrap());
                values.set(i, j, v);
            }
        } else {
            // first-appearance category order
            let mut categories: Vec<String> = Vec::new();
            for row in &raw {
                if let Some(v) = row[j].as_deref() {
                    if !categories.iter().any(|c| c == v) {
                        categories.push(v.to_string());
                    }
                }
            }
            for (i, row) in raw.iter().enumerate() {
                let code = row[j].as_deref().map_or(f64::NAN, |v| {
                    categories.iter().position(|c| c == v).unwrap() as f64
                });
                values.set(i, j, code);
            }
            descriptors.push(FeatureDescriptor::nominal(&names[j], categories)?);
        }
    }
    impute(&mut values, &descriptors)?;
    partition_targets(values, descriptors, &TargetSpec::TrailingCount(target_count))
}

/// Feature rows for prediction, parsed against a trained model's schema.
/// Rows may carry extra trailing columns (e.g. the original targets), which
/// are ignored. Unseen nominal values get an out-of-vocabulary code that
/// trees route like any unseen category; missing values are rejected since
/// no imputation statistics exist at prediction time.
pub fn load_feature_rows(
    path: impl AsRef<Path>,
    descriptors: &[FeatureDescriptor],
) -> Result<Matrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let d = descriptors.len();
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    lines
        .next()
        .ok_or_else(|| Error::parse(path, 0, "missing header row"))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in lines {
        let fields = parse_record(line);
        if fields.len() < d {
            return Err(Error::parse(
                path,
                lineno + 1,
                format!("row has {} values, expected at least {d}", fields.len()),
            ));
        }
        let mut row = Vec::with_capacity(d);
        for (desc, field) in descriptors.iter().zip(&fields) {
            let v = field.trim();
            if v.is_empty() || v == "?" {
                return Err(Error::parse(
                    path,
                    lineno + 1,
                    format!("missing value in column `{}`", desc.name),
                ));
            }
            match &desc.kind {
                crate::data::FeatureKind::Numeric => {
                    row.push(v.parse::<f64>().map_err(|_| {
                        Error::parse(
                            path,
                            lineno + 1,
                            format!("non-numeric value `{v}` in column `{}`", desc.name),
                        )
                    })?);
                }
                crate::data::FeatureKind::Nominal(categories) => {
                    let code = categories
                        .iter()
                        .position(|c| c == v)
                        .unwrap_or(categories.len());
                    row.push(code as f64);
                }
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyData);
    }
    Matrix::from_rows(&rows)
}

/// Split one CSV record, honoring double quotes with `""` escapes.
fn parse_record(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut in_quotes = false;
    let mut chars = line.chars().peekable();
    while let Some(ch) = chars.next() {
        match ch {
            '"' if in_quotes => {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    cur.push('"');
                } else {
                    in_quotes = false;
                }
            }
            '"' => in_quotes = true,
            ',' if !in_quotes => fields.push(std::mem::take(&mut cur)),
            _ => cur.push(ch),
        }
    }
    fields.push(cur);
    fields
}

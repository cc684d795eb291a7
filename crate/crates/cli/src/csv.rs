//! CSV series artifacts.
//!
//! Layout: `#`-prefixed metadata comment lines, one header line
//! (`step,value` or `step,<name_0>,...,<name_{n-1}>`), then one row per
//! step. Values use the shortest round-trip decimal form, so raw phrase
//! counts print as integers.

use ecalab_core::ComplexitySeries;

use crate::error::CliError;

/// Renders metadata, header, and rows into CSV text.
///
/// All series must share one step grid (start, stride, length).
pub fn write_series_csv(
    meta: &[String],
    columns: &[String],
    series: &[&ComplexitySeries],
) -> Result<String, CliError> {
    assert_eq!(columns.len(), series.len(), "one column name per series");
    let first = series
        .first()
        .ok_or_else(|| CliError::Usage("nothing to write: no series".into()))?;
    for s in series {
        if s.start_step() != first.start_step()
            || s.stride() != first.stride()
            || s.len() != first.len()
        {
            return Err(CliError::Usage(
                "all series in one CSV must share the same step grid".into(),
            ));
        }
    }
    let mut out = String::new();
    for line in meta {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str("step");
    for name in columns {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for i in 0..first.len() {
        out.push_str(&first.step_at(i).to_string());
        for s in series {
            out.push(',');
            out.push_str(&format_value(s.values()[i]));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Shortest decimal that round-trips the value; integers print bare.
pub fn format_value(v: f64) -> String {
    format!("{v}")
}

/// A parsed CSV series document.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvDoc {
    pub comments: Vec<String>,
    /// Column names excluding the leading `step`.
    pub columns: Vec<String>,
    pub steps: Vec<f64>,
    /// One value vector per column.
    pub values: Vec<Vec<f64>>,
}

/// Parses CSV text written by [`write_series_csv`].
pub fn parse_series_csv(text: &str) -> Result<CsvDoc, CliError> {
    let mut comments = Vec::new();
    let mut columns: Option<Vec<String>> = None;
    let mut steps = Vec::new();
    let mut values: Vec<Vec<f64>> = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            comments.push(comment.trim().to_string());
            continue;
        }
        let lineno = index + 1;
        match &columns {
            None => {
                let mut fields = line.split(',');
                if fields.next() != Some("step") {
                    return Err(CliError::Data(format!(
                        "line {lineno}: header must start with 'step'"
                    )));
                }
                let names: Vec<String> = fields.map(str::to_string).collect();
                if names.is_empty() {
                    return Err(CliError::Data(format!(
                        "line {lineno}: header has no value columns"
                    )));
                }
                values = vec![Vec::new(); names.len()];
                columns = Some(names);
            }
            Some(names) => {
                let fields: Vec<&str> = line.split(',').collect();
                if fields.len() != names.len() + 1 {
                    return Err(CliError::Data(format!(
                        "line {lineno}: expected {} fields, found {}",
                        names.len() + 1,
                        fields.len()
                    )));
                }
                let parse = |f: &str| {
                    f.parse::<f64>().map_err(|_| {
                        CliError::Data(format!("line {lineno}: {f:?} is not a number"))
                    })
                };
                steps.push(parse(fields[0])?);
                for (column, field) in values.iter_mut().zip(&fields[1..]) {
                    column.push(parse(field)?);
                }
            }
        }
    }
    let columns = columns.ok_or_else(|| CliError::Data("missing CSV header".into()))?;
    Ok(CsvDoc {
        comments,
        columns,
        steps,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_comments_header_and_rows() {
        let a = ComplexitySeries::new(5, 2, vec![1.0, 2.5, 3.0], None);
        let b = ComplexitySeries::new(5, 2, vec![4.0, 5.0, 6.25], None);
        let text = write_series_csv(
            &["rule: 110".into()],
            &["left".into(), "right".into()],
            &[&a, &b],
        )
        .unwrap();
        assert_eq!(
            text,
            "# rule: 110\nstep,left,right\n5,1,4\n7,2.5,5\n9,3,6.25\n"
        );
    }

    #[test]
    fn rejects_mismatched_grids() {
        let a = ComplexitySeries::new(0, 1, vec![1.0], None);
        let b = ComplexitySeries::new(1, 1, vec![1.0], None);
        assert!(write_series_csv(&[], &["a".into(), "b".into()], &[&a, &b]).is_err());
    }

    #[test]
    fn parse_round_trips_written_output() {
        let a = ComplexitySeries::new(0, 1, vec![10.0, 9.5, 9.0], None);
        let text = write_series_csv(&["width: 4".into()], &["value".into()], &[&a]).unwrap();
        let doc = parse_series_csv(&text).unwrap();
        assert_eq!(doc.comments, ["width: 4"]);
        assert_eq!(doc.columns, ["value"]);
        assert_eq!(doc.steps, [0.0, 1.0, 2.0]);
        assert_eq!(doc.values, [[10.0, 9.5, 9.0]]);
    }

    #[test]
    fn parse_rejects_ragged_rows() {
        assert!(parse_series_csv("step,value\n0,1,2\n").is_err());
        assert!(parse_series_csv("time,value\n0,1\n").is_err());
        assert!(parse_series_csv("step,value\n0,abc\n").is_err());
    }
}

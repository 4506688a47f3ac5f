//! Sweep tables as CSV: one header row, one row per θ, `\n` line endings and
//! numbers with 12 significant digits.

use varbound_core::SweepRow;

use crate::error::CliError;

/// Renders `v` with 12 significant digits, fixed notation for moderate
/// exponents and scientific otherwise.
pub fn sig12(v: f64) -> String {
    if v == 0.0 {
        return "0.00000000000".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.11e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-5..15).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        sci
    }
}

pub fn weight_label(lambda: f64) -> String {
    format!("{lambda:.6}")
}

/// Header and numeric rows of a sweep table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SweepTable {
    pub fn from_rows(rows: &[SweepRow]) -> Self {
        let mut header: Vec<String> = [
            "theta", "var_a", "var_b", "product", "robertson", "schrodinger", "mbp", "milne",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        if let Some(first) = rows.first() {
            header.extend(first.report.callebaut.iter().map(|(l, _)| format!("callebaut_{}", weight_label(*l))));
            if let Some(opt) = &first.optimized {
                header.extend(opt.l1.iter().map(|(l, _)| format!("l1_{}", weight_label(*l))));
                header.push("l2".to_string());
            }
        }
        let rows = rows
            .iter()
            .map(|row| {
                let r = &row.report;
                let mut values = vec![
                    row.theta, r.variance_a, r.variance_b, r.product, r.robertson, r.schrodinger, r.mbp, r.milne,
                ];
                values.extend(r.callebaut.iter().map(|&(_, v)| v));
                if let Some(opt) = &row.optimized {
                    values.extend(opt.l1.iter().map(|(_, o)| o.best_value));
                    values.push(opt.l2.best_value);
                }
                values
            })
            .collect();
        Self { header, rows }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Internal(format!("csv encoding failed: {e}"));
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&v| sig12(v))).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Internal(format!("csv encoding failed: {e}")))?;
        String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
    }

    pub fn from_csv(text: &str) -> Result<Self, CliError> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let bad = |e: csv::Error| CliError::Input(format!("malformed sweep csv: {e}"));
        let header: Vec<String> = r.headers().map_err(bad)?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for (line, record) in r.records().enumerate() {
            let record = record.map_err(bad)?;
            let values = record
                .iter()
                .map(|field| {
                    field.parse::<f64>().map_err(|e| {
                        CliError::Input(format!("malformed sweep csv: row {} field {field:?}: {e}", line + 1))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(values);
        }
        Ok(Self { header, rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use varbound_core::{spin1_operators, sweep, theta_state, SweepSpec, Weight};

    #[test]
    fn sig12_examples() {
        assert_eq!(sig12(0.1875), "0.187500000000");
        assert_eq!(sig12(0.125), "0.125000000000");
        assert_eq!(sig12(0.0625), "0.0625000000000");
        assert_eq!(sig12(1.0), "1.00000000000");
        assert_eq!(sig12(0.0), "0.00000000000");
        assert_eq!(sig12(-0.0), "0.00000000000");
        assert_eq!(sig12(3.14159265358979), "3.14159265359");
        assert_eq!(sig12(9.999999999999999), "10.0000000000");
        assert_eq!(sig12(1.5e-20), "1.50000000000e-20");
        assert_eq!(sig12(-2.0), "-2.00000000000");
    }

    proptest! {
        #[test]
        fn sig12_round_trips(v in prop_oneof![-1e3f64..1e3, 1e-30f64..1e30]) {
            let back: f64 = sig12(v).parse().unwrap();
            prop_assert!((back - v).abs() <= 5e-12 * v.abs());
        }
    }

    #[test]
    fn table_round_trip() {
        let (lx, ly, _) = spin1_operators();
        let ws = vec![Weight::new(1.0 / 3.0).unwrap(), Weight::new(0.5).unwrap()];
        let rows = sweep(&lx, &ly, theta_state, &SweepSpec { steps: 19, ..SweepSpec::standard(ws) }).unwrap();
        let table = SweepTable::from_rows(&rows);
        let text = table.to_csv().unwrap();
        assert!(text.starts_with(
            "theta,var_a,var_b,product,robertson,schrodinger,mbp,milne,callebaut_0.333333,callebaut_0.500000\n"
        ));
        assert!(!text.contains('\r'));
        let back = SweepTable::from_csv(&text).unwrap();
        assert_eq!(back.header, table.header);
        // half a unit in the 12th significant digit
        for (a, b) in back.rows.iter().zip(&table.rows) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() <= 5e-12 * y.abs(), "{x} vs {y}");
            }
        }
        assert_eq!(back.to_csv().unwrap(), text);
    }

    #[test]
    fn rejects_garbage() {
        assert!(SweepTable::from_csv("theta,x\n0.1,abc\n").is_err());
    }
}

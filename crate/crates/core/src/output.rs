//! Machine-readable records emitted by the command-line tool.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::combinatorics::VolumeRow;

/// One JSON record per command invocation.
///
/// Exact rationals appear as `"p/q"` strings; the key order of every map is
/// preserved, so parsing and re-serializing a record is byte-identical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub parameters: Value,
    pub results: Value,
    pub seed: u64,
    pub elapsed_ms: u64,
}

impl OutputRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// Rows as CSV with columns `family,n,k,value_num,value_den`.
pub fn volume_rows_csv(rows: &[VolumeRow]) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["family", "n", "k", "value_num", "value_den"])?;
    for row in rows {
        for (k, v) in row.values.iter().enumerate() {
            w.write_record([
                row.family.to_string(),
                row.n.to_string(),
                k.to_string(),
                v.numer().to_string(),
                v.denom().to_string(),
            ])?;
        }
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf-8"))
}

/// Generic CSV from a header and string rows.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chambers::Family;
    use crate::combinatorics::intrinsic_volume_rows;
    use serde_json::json;

    #[test]
    fn csv_layout() {
        let rows = intrinsic_volume_rows(Family::B, 2).unwrap();
        let csv = volume_rows_csv(&rows).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "family,n,k,value_num,value_den");
        assert_eq!(lines[1], "B,1,0,1,2");
        assert_eq!(&lines[3..], ["B,2,0,3,8", "B,2,1,1,2", "B,2,2,1,8"]);
    }

    #[test]
    fn json_round_trip() {
        let rows = intrinsic_volume_rows(Family::D, 3).unwrap();
        let rec = OutputRecord {
            command: "table".into(),
            parameters: json!({"family": "D", "n_max": 3, "z": -0.1234567890123}),
            results: serde_json::to_value(&rows).unwrap(),
            seed: 0,
            elapsed_ms: 3,
        };
        let s = rec.to_json();
        assert!(s.contains("\"1/4\""));
        let back = OutputRecord::from_json(&s).unwrap();
        assert_eq!(back, rec);
        assert_eq!(back.to_json(), s);
    }
}

//! Float formatting shared by the JSON and CSV writers: 17 significant
//! digits, so output is deterministic and parses back to the same bits.

use std::io;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter};

pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

struct FixedDigits;

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(float(value).as_bytes())
        } else {
            CompactFormatter.write_null(writer)
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedDigits);
    value.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(out).expect("JSON is UTF-8")
}

pub fn csv_row(values: impl IntoIterator<Item = f64>) -> String {
    values.into_iter().map(float).collect::<Vec<_>>().join(",")
}

use std::io::Write;

use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Arrays of objects (or a `rows`/`checks`/`criteria` array) become one row per element;
/// any other object becomes key,value rows.
fn to_csv(v: &Value) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let rows = ["rows", "checks", "criteria"]
        .iter()
        .find_map(|k| v.get(*k).filter(|r| r.is_array()))
        .unwrap_or(v);
    match rows {
        Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
            let headers: Vec<String> = items[0].as_object().unwrap().keys().cloned().collect();
            w.write_record(&headers)?;
            for it in items {
                let obj = it.as_object().unwrap();
                w.write_record(headers.iter().map(|h| obj.get(h).map(cell).unwrap_or_default()))?;
            }
        }
        Value::Object(map) => {
            w.write_record(["key", "value"])?;
            for (k, x) in map {
                w.write_record([k.as_str(), cell(x).as_str()])?;
            }
        }
        other => {
            w.write_record(["value"])?;
            w.write_record([cell(other)])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
            s.push('\n');
            s
        }
        Format::Csv => to_csv(v).unwrap_or_else(|e| format!("csv error: {e}\n")),
    }
}

pub fn emit(v: &Value, format: Format, out: Option<&std::path::Path>) -> std::io::Result<()> {
    let text = render(v, format);
    match out {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

/// Exact rational p/q in lowest terms.
pub fn ratio(p: i64, q: i64) -> String {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    let g = gcd(p, q).max(1);
    let (mut p, mut q) = (p / g, q / g);
    if q < 0 {
        p = -p;
        q = -q;
    }
    if q == 1 {
        p.to_string()
    } else {
        format!("{p}/{q}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn ratios_reduce() {
        assert_eq!(ratio(2, 28), "1/14");
        assert_eq!(ratio(-3, 12), "-1/4");
        assert_eq!(ratio(4, -2), "-2");
    }

    #[test]
    fn csv_rows() {
        let v = json!({"rows": [{"a": 1, "b": "x"}, {"a": 2, "b": "y"}]});
        assert_eq!(render(&v, Format::Csv), "a,b\n1,x\n2,y\n");
        let v = json!({"k": 1.5});
        assert_eq!(render(&v, Format::Csv), "key,value\nk,1.5\n");
    }
}

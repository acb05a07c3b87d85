use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};

pub const REPORT_SCHEMA: u32 = 1;

/// Sets longer than this are summarized instead of printed in full.
pub const INLINE_LIMIT: usize = 64;

#[derive(Debug, Default, Serialize)]
pub struct CacheStats {
    pub dir: Option<PathBuf>,
    pub hits: usize,
    pub misses: usize,
    pub writes: usize,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: &'static str,
    pub inputs: Value,
    pub results: Value,
    pub timing: Value,
    pub cache: CacheStats,
}

impl RunReport {
    pub fn new(command: &'static str, inputs: Value) -> Self {
        RunReport {
            schema: REPORT_SCHEMA,
            command,
            inputs,
            results: Value::Null,
            timing: json!({}),
            cache: CacheStats::default(),
        }
    }
}

/// A sorted integer set, inline when small.
pub fn set_value(values: &[i128], dump: Option<&PathBuf>) -> Value {
    if values.len() <= INLINE_LIMIT {
        json!({ "size": values.len(), "values": values })
    } else {
        json!({
            "size": values.len(),
            "min": values.first(),
            "max": values.last(),
            "path": dump,
        })
    }
}

pub fn set_text(values: &[i128], dump: Option<&PathBuf>) -> String {
    if values.len() <= INLINE_LIMIT {
        let items: Vec<String> = values.iter().map(i128::to_string).collect();
        format!("{{{}}} ({} elements)", items.join(", "), values.len())
    } else {
        let mut s = format!(
            "{} elements, min {}, max {}",
            values.len(),
            values.first().unwrap(),
            values.last().unwrap()
        );
        if let Some(path) = dump {
            s.push_str(&format!(", full set in {}", path.display()));
        }
        s
    }
}

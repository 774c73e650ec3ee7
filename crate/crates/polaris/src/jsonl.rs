//! Line-delimited JSON submission dumps with Pushshift field names.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use polaris_core::{Corpus, CorpusBuilder, RawSubmission};
use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};

const CHUNK_LINES: usize = 1 << 16;

#[derive(Deserialize)]
struct Line {
    id: String,
    author: String,
    created_utc: Timestamp,
    #[serde(default)]
    body: Option<String>,
    #[serde(default)]
    link_id: Option<String>,
    #[serde(default)]
    parent_id: Option<String>,
}

// Dumps carry integer seconds, occasionally as floats or digit strings.
#[derive(Deserialize)]
#[serde(untagged)]
enum Timestamp {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Timestamp {
    fn seconds(&self) -> Option<i64> {
        match self {
            Timestamp::Int(v) => Some(*v),
            Timestamp::Float(v) if v.is_finite() && v.fract() == 0.0 => Some(*v as i64),
            Timestamp::Float(_) => None,
            Timestamp::Text(s) => s.trim().parse().ok(),
        }
    }
}

/// Drop a reddit `t1_` (comment) or `t3_` (post) fullname prefix.
pub fn strip_prefix(id: &str) -> &str {
    id.strip_prefix("t1_").or_else(|| id.strip_prefix("t3_")).unwrap_or(id)
}

/// Parse one record, or `None` if it is malformed.
pub fn parse_line(line: &str) -> Option<RawSubmission> {
    let l: Line = serde_json::from_str(line).ok()?;
    Some(RawSubmission {
        id: l.id,
        author: l.author,
        created_utc: l.created_utc.seconds()?,
        body: l.body.unwrap_or_default(),
        link_id: l.link_id.map(|s| strip_prefix(&s).to_string()),
        parent_id: l.parent_id.map(|s| strip_prefix(&s).to_string()),
    })
}

/// Read a dump into a corpus without periods. Chunks are parsed in parallel and
/// fed to the builder in file order, so the result does not depend on threads.
pub fn read_corpus(path: &Path) -> Result<Corpus> {
    let file = File::open(path).map_err(|e| Error::io("ingest", path, e))?;
    let mut reader = BufReader::with_capacity(1 << 20, file);
    let mut builder = CorpusBuilder::new();
    let mut chunk: Vec<String> = Vec::with_capacity(CHUNK_LINES);
    loop {
        chunk.clear();
        for _ in 0..CHUNK_LINES {
            let mut line = String::new();
            let n = reader.read_line(&mut line).map_err(|e| Error::io("ingest", path, e))?;
            if n == 0 {
                break;
            }
            chunk.push(line);
        }
        if chunk.is_empty() {
            break;
        }
        let parsed: Vec<Option<Option<RawSubmission>>> = chunk
            .par_iter()
            .map(|l| if l.trim().is_empty() { None } else { Some(parse_line(l)) })
            .collect();
        for p in parsed.into_iter().flatten() {
            match p {
                Some(raw) => {
                    // validation failures are counted by the builder
                    let _ = builder.push(raw);
                }
                None => builder.count_malformed(1),
            }
        }
        if chunk.len() < CHUNK_LINES {
            break;
        }
    }
    Ok(builder.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefixes_and_timestamps() {
        let c = parse_line(r#"{"id":"b","author":"x","created_utc":"17","body":"hi","link_id":"t3_a","parent_id":"t1_c"}"#)
            .unwrap();
        assert_eq!((c.created_utc, c.link_id.as_deref(), c.parent_id.as_deref()), (17, Some("a"), Some("c")));
        assert!(parse_line(r#"{"id":"b","author":"x","body":"hi"}"#).is_none());
        assert!(parse_line(r#"{"id":"b","author":"x","created_utc":1.5}"#).is_none());
        assert_eq!(parse_line(r#"{"id":"b","author":"x","created_utc":2.0}"#).unwrap().created_utc, 2);
        assert!(parse_line("not json").is_none());
    }
}

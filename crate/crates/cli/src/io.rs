use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use plap_core::{GraphSpec, SignedGraph};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Raw bytes of a graph file, or of stdin for `-`.
pub fn read_source(path: &str) -> Result<Vec<u8>, CliError> {
    if path == "-" {
        let mut buf = Vec::new();
        io::stdin()
            .read_to_end(&mut buf)
            .map_err(|source| CliError::Io {
                path: path.into(),
                source,
            })?;
        return Ok(buf);
    }
    fs::read(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

fn byte_offset(bytes: &[u8], line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut offset = 0;
    for (i, l) in bytes.split(|&b| b == b'\n').enumerate() {
        if i + 1 == line {
            return (offset + column.saturating_sub(1)).min(bytes.len());
        }
        offset += l.len() + 1;
    }
    bytes.len()
}

pub fn parse_spec(bytes: &[u8]) -> Result<GraphSpec, CliError> {
    serde_json::from_slice(bytes).map_err(|e| CliError::Json {
        offset: byte_offset(bytes, e.line(), e.column()),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub struct LoadedGraph {
    pub graph: SignedGraph,
    pub digest: String,
}

pub fn load_graph(path: &str) -> Result<LoadedGraph, CliError> {
    let bytes = read_source(path)?;
    let spec = parse_spec(&bytes)?;
    let graph = spec.validate().map_err(CliError::Graph)?;
    Ok(LoadedGraph {
        graph,
        digest: sha256_hex(&bytes),
    })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn graph_json(g: &SignedGraph) -> String {
    serde_json::to_string_pretty(&g.to_spec()).expect("graph spec serializes")
}

/// Writes to a file, or to stdout for `-`.
pub fn write_output(path: &str, contents: &str) -> Result<(), CliError> {
    if path == "-" {
        let mut out = io::stdout().lock();
        out.write_all(contents.as_bytes())
            .and_then(|_| out.write_all(b"\n"))
            .map_err(|source| CliError::Io {
                path: path.into(),
                source,
            })?;
        return Ok(());
    }
    let mut text = contents.to_string();
    text.push('\n');
    fs::write(Path::new(path), text).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

//! Graph and coloring files.
//!
//! Graphs are read from DIMACS `.col` files (`p edge n m` header, `e i j`
//! lines with 1-based vertices, `c` comment lines) or from JSON objects
//! `{"n": 4, "edges": [[0, 1], ...]}` with 0-based vertices. The format is
//! chosen by extension; anything that is not `.json` is parsed as DIMACS.
//!
//! A coloring file stores a Gram matrix: `{"n": 4, "t": 2.0, "gram": [[...]]}`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use vclab_core::{Graph, SymMatrix};

use crate::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct JsonGraph {
    n: usize,
    edges: Vec<[usize; 2]>,
}

pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = k + 1;
        let bad = |msg: &str| Error::Parse {
            line: lineno,
            message: msg.to_string(),
        };
        let mut parts = line.split_whitespace();
        match parts.next() {
            None | Some("c") => {}
            Some("p") => {
                if header.is_some() {
                    return Err(bad("second problem line"));
                }
                let kind = parts.next().ok_or_else(|| bad("missing problem kind"))?;
                if kind != "edge" && kind != "col" {
                    return Err(bad("expected `p edge n m`"));
                }
                let n = parse_num(parts.next(), lineno)?;
                let m = parse_num(parts.next(), lineno)?;
                header = Some((n, m));
            }
            Some("e") => {
                let (n, _) = header.ok_or_else(|| bad("edge before problem line"))?;
                let i = parse_num(parts.next(), lineno)?;
                let j = parse_num(parts.next(), lineno)?;
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(bad("vertex out of range (DIMACS vertices are 1-based)"));
                }
                if i == j {
                    return Err(bad("loop"));
                }
                edges.push((i - 1, j - 1));
            }
            Some(other) => return Err(bad(&format!("unknown line type `{other}`"))),
        }
    }
    let (n, _) = header.ok_or(Error::Parse {
        line: 0,
        message: "missing `p edge n m` line".into(),
    })?;
    Ok(Graph::new(n, edges)?)
}

fn parse_num(tok: Option<&str>, line: usize) -> Result<usize> {
    tok.and_then(|t| t.parse().ok()).ok_or(Error::Parse {
        line,
        message: "expected a nonnegative integer".into(),
    })
}

pub fn write_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.order(), g.size());
    for &(i, j) in g.edges() {
        out.push_str(&format!("e {} {}\n", i + 1, j + 1));
    }
    out
}

pub fn parse_json_graph(text: &str) -> Result<Graph> {
    let jg: JsonGraph = serde_json::from_str(text)?;
    Ok(Graph::new(jg.n, jg.edges.iter().map(|e| (e[0], e[1])))?)
}

pub fn write_json_graph(g: &Graph) -> String {
    let jg = JsonGraph {
        n: g.order(),
        edges: g.edges().iter().map(|&(i, j)| [i, j]).collect(),
    };
    serde_json::to_string(&jg).expect("graph serializes")
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = read(path)?;
    let parsed = if is_json(path) {
        parse_json_graph(&text)
    } else {
        parse_dimacs(&text)
    };
    parsed.map_err(|e| e.at(path))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_graph(path: &Path, g: &Graph) -> Result<()> {
    let text = if is_json(path) {
        write_json_graph(g) + "\n"
    } else {
        write_dimacs(g)
    };
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// SHA-256 of the canonical JSON form, so DIMACS and JSON copies of the
/// same labeled graph share a digest.
pub fn graph_digest(g: &Graph) -> String {
    format!("{:x}", Sha256::digest(write_json_graph(g).as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColoringFile {
    pub n: usize,
    pub t: f64,
    pub gram: Vec<Vec<f64>>,
}

impl ColoringFile {
    pub fn from_gram(t: f64, gram: &SymMatrix) -> Self {
        let n = gram.size();
        Self {
            n,
            t,
            gram: (0..n).map(|i| gram.row(i).to_vec()).collect(),
        }
    }

    pub fn to_gram(&self) -> Result<SymMatrix> {
        if self.gram.len() != self.n || self.gram.iter().any(|r| r.len() != self.n) {
            return Err(Error::Parse {
                line: 0,
                message: format!("gram must be {0} x {0}", self.n),
            });
        }
        Ok(SymMatrix::from_rows(&self.gram)?)
    }
}

pub fn read_coloring(path: &Path) -> Result<ColoringFile> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| Error::from(e).at(path))
}

pub fn write_coloring(path: &Path, c: &ColoringFile) -> Result<()> {
    let text = crate::cert::to_canonical_json(&serde_json::to_value(c)?);
    fs::write(path, text + "\n").map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_round_trip() {
        let g = Graph::kneser(5, 2).unwrap();
        let text = write_dimacs(&g);
        assert!(text.starts_with("p edge 10 15\n"));
        assert_eq!(parse_dimacs(&text).unwrap(), g);
    }

    #[test]
    fn dimacs_comments_and_errors() {
        let g = parse_dimacs("c triangle\np edge 3 3\ne 1 2\ne 2 3\n\ne 1 3\n").unwrap();
        assert_eq!(g, Graph::complete(3).unwrap());
        assert!(matches!(parse_dimacs("e 1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_dimacs("p edge 2 1\ne 0 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_dimacs("p edge 2 1\ne 1 1\n").is_err());
        assert!(parse_dimacs("c nothing\n").is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::cycle(5).unwrap();
        let text = write_json_graph(&g);
        assert_eq!(text, r#"{"n":5,"edges":[[0,1],[0,4],[1,2],[2,3],[3,4]]}"#);
        assert_eq!(parse_json_graph(&text).unwrap(), g);
        assert!(parse_json_graph(r#"{"n":2,"edges":[[0,2]]}"#).is_err());
    }

    #[test]
    fn digest_is_format_independent() {
        let g = Graph::complete(4).unwrap();
        let a = graph_digest(&parse_dimacs(&write_dimacs(&g)).unwrap());
        let b = graph_digest(&parse_json_graph(&write_json_graph(&g)).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.len(), 64);
        assert_ne!(a, graph_digest(&Graph::cycle(4).unwrap()));
    }

    #[test]
    fn coloring_shape_checked() {
        let c = ColoringFile {
            n: 2,
            t: 2.0,
            gram: vec![vec![1.0, -1.0]],
        };
        assert!(c.to_gram().is_err());
        let m = SymMatrix::identity(2);
        assert_eq!(ColoringFile::from_gram(2.0, &m).to_gram().unwrap(), m);
    }
}

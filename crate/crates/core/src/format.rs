//! Text formats for graphs.
//!
//! `BRG1`: a header line `BRG1 <k_num> <k_den> <n> <d>`, then `n` lines, the
//! `i`-th listing the `kd` out-neighbors of `y_i` as sorted, space-separated,
//! 0-based indices.
//!
//! `LAY1`: a header line `LAY1 <k_num> <k_den> <m> <h>`, then `h` `BRG1`
//! blocks, block `i` being the layer `X_{i-1} → X_i`.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::graph::{BipartiteDigraph, Direction, GraphError, GraphParams, LayeredGraph, Ratio};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: GraphError,
    },
    #[error("only graphs with biregular layers can be written as LAY1")]
    NotBiregular,
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl FormatError {
    /// True for a degree violation, the error reported for duplicated or
    /// missing neighbors.
    pub fn is_degree_violation(&self) -> bool {
        matches!(
            self,
            FormatError::Invalid {
                source: GraphError::DegreeViolation { .. },
                ..
            }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphFile {
    Bipartite(BipartiteDigraph),
    Layered(LayeredGraph),
}

pub fn write_bipartite(g: &BipartiteDigraph) -> String {
    let mut out = String::new();
    push_block(&mut out, g);
    out
}

fn push_block(out: &mut String, g: &BipartiteDigraph) {
    let p = g.params();
    let _ = writeln!(out, "BRG1 {} {} {} {}", p.k().num(), p.k().den(), p.n(), p.d());
    for y in 0..p.n() {
        let row: Vec<String> = g.out_neighbors(y).iter().map(|z| z.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
}

pub fn write_layered(g: &LayeredGraph) -> Result<String, FormatError> {
    let params = g.biregular_params().ok_or(FormatError::NotBiregular)?;
    let k = params[0].k();
    let mut out = String::new();
    let _ = writeln!(out, "LAY1 {} {} {} {}", k.num(), k.den(), g.layer_sizes()[0], g.h());
    for (p, adj) in params.iter().zip(g.layers()) {
        let layer = BipartiteDigraph::from_adjacency(*p, adj.clone()).expect("stored layers are biregular");
        push_block(&mut out, &layer);
    }
    Ok(out)
}

pub fn write_graph(g: &GraphFile, path: &Path) -> Result<(), FormatError> {
    let text = match g {
        GraphFile::Bipartite(b) => write_bipartite(b),
        GraphFile::Layered(l) => write_layered(l)?,
    };
    std::fs::write(path, text)?;
    Ok(())
}

pub fn read_graph(path: &Path) -> Result<GraphFile, FormatError> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn parse_graph(text: &str) -> Result<GraphFile, FormatError> {
    let mut lines = Lines::new(text);
    let (line, header) = lines.next_line().ok_or(FormatError::Parse {
        line: 1,
        message: "empty file".into(),
    })?;
    let graph = match header.split_whitespace().next() {
        Some("BRG1") => GraphFile::Bipartite(parse_block(&mut lines, line, header)?),
        Some("LAY1") => GraphFile::Layered(parse_layered(&mut lines, line, header)?),
        _ => {
            return Err(FormatError::Parse {
                line,
                message: "expected a BRG1 or LAY1 header".into(),
            })
        }
    };
    if let Some((line, _)) = lines.next_line() {
        return Err(FormatError::Parse {
            line,
            message: "trailing content after the graph".into(),
        });
    }
    Ok(graph)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
        }
    }

    /// Next non-blank line with its 1-based number.
    fn next_line(&mut self) -> Option<(usize, &'a str)> {
        self.inner
            .by_ref()
            .find(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| (i + 1, l))
    }
}

fn header_fields(line: usize, header: &str, tag: &str) -> Result<[u64; 4], FormatError> {
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 5 || fields[0] != tag {
        return Err(FormatError::Parse {
            line,
            message: format!("expected `{tag} <k_num> <k_den> <a> <b>`"),
        });
    }
    let mut values = [0u64; 4];
    for (slot, text) in values.iter_mut().zip(&fields[1..]) {
        *slot = text.parse().map_err(|_| FormatError::Parse {
            line,
            message: format!("`{text}` is not a non-negative integer"),
        })?;
    }
    Ok(values)
}

fn parse_block(lines: &mut Lines, line: usize, header: &str) -> Result<BipartiteDigraph, FormatError> {
    let [k_num, k_den, n, d] = header_fields(line, header, "BRG1")?;
    let params = GraphParams::family(k_num, k_den, n as usize, d as usize)
        .map_err(|source| FormatError::Invalid { line, source })?;
    let mut rows = Vec::with_capacity(params.n());
    for y in 0..params.n() {
        let (row_line, text) = lines.next_line().ok_or(FormatError::Parse {
            line: line + y + 1,
            message: format!("missing neighbor list of vertex {y}"),
        })?;
        let mut row = Vec::with_capacity(params.kd());
        for token in text.split_whitespace() {
            let z: usize = token.parse().map_err(|_| FormatError::Parse {
                line: row_line,
                message: format!("`{token}` is not a vertex index"),
            })?;
            if z >= params.kn() {
                return Err(FormatError::Parse {
                    line: row_line,
                    message: format!("vertex index {z} out of range 0..{}", params.kn()),
                });
            }
            row.push(z);
        }
        row.sort_unstable();
        row.dedup();
        if row.len() != params.kd() || text.split_whitespace().count() != params.kd() {
            return Err(FormatError::Invalid {
                line: row_line,
                source: GraphError::DegreeViolation {
                    side: Direction::Out,
                    vertex: y,
                    expected: params.kd(),
                    found: row.len(),
                },
            });
        }
        rows.push(row);
    }
    BipartiteDigraph::from_out_lists(params, rows).map_err(|source| FormatError::Invalid { line, source })
}

fn parse_layered(lines: &mut Lines, line: usize, header: &str) -> Result<LayeredGraph, FormatError> {
    let [k_num, k_den, m, h] = header_fields(line, header, "LAY1")?;
    let k = Ratio::new(k_num, k_den).map_err(|source| FormatError::Invalid { line, source })?;
    if h == 0 {
        return Err(FormatError::Parse {
            line,
            message: "h must be at least 1".into(),
        });
    }
    let mut expected_n = m;
    let mut layers = Vec::with_capacity(h as usize);
    for i in 1..=h {
        let (block_line, block_header) = lines.next_line().ok_or(FormatError::Parse {
            line,
            message: format!("missing block for layer {i}"),
        })?;
        let [bk_num, bk_den, n, _] = header_fields(block_line, block_header, "BRG1")?;
        let block_k = Ratio::new(bk_num, bk_den).map_err(|source| FormatError::Invalid {
            line: block_line,
            source,
        })?;
        if block_k != k || n != expected_n {
            return Err(FormatError::Parse {
                line: block_line,
                message: format!("layer {i} must be G({k}, {expected_n}, d), found G({block_k}, {n}, d)"),
            });
        }
        let layer = parse_block(lines, block_line, block_header)?;
        expected_n = layer.params().kn() as u64;
        layers.push(layer);
    }
    LayeredGraph::from_biregular(layers).map_err(|source| FormatError::Invalid { line, source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bipartite_round_trip() {
        let p = GraphParams::validate(3, 2, 4, 2).unwrap();
        let g = BipartiteDigraph::cyclic(p);
        let text = write_bipartite(&g);
        assert!(text.starts_with("BRG1 3 2 4 2\n0 1 2\n"));
        assert_eq!(parse_graph(&text).unwrap(), GraphFile::Bipartite(g));
    }

    #[test]
    fn file_round_trip() {
        let p = GraphParams::validate(1, 1, 3, 1).unwrap();
        let g = GraphFile::Bipartite(BipartiteDigraph::circulant(p).unwrap());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.brg1");
        write_graph(&g, &path).unwrap();
        assert_eq!(read_graph(&path).unwrap(), g);
    }

    #[test]
    fn layered_round_trip() {
        let k = Ratio::integer(2).unwrap();
        let l1 = BipartiteDigraph::circulant(GraphParams::family_with(k, 2, 2).unwrap()).unwrap();
        let l2 = BipartiteDigraph::circulant(GraphParams::family_with(k, 4, 2).unwrap()).unwrap();
        let g = LayeredGraph::from_biregular(vec![l1, l2]).unwrap();
        let text = write_layered(&g).unwrap();
        assert!(text.starts_with("LAY1 2 1 2 2\nBRG1 2 1 2 2\n"));
        assert_eq!(parse_graph(&text).unwrap(), GraphFile::Layered(g));
    }

    #[test]
    fn duplicate_neighbor_is_degree_violation() {
        let err = parse_graph("BRG1 1 1 3 2\n0 0\n1 2\n0 2\n").unwrap_err();
        assert!(err.is_degree_violation(), "{err}");
        let err = parse_graph("BRG1 1 1 3 2\n0 1\n1 2\n1 2\n").unwrap_err();
        assert!(err.is_degree_violation(), "{err}");
        let err = parse_graph("BRG1 1 1 3 2\n0 1 2\n1 2\n0 2\n").unwrap_err();
        assert!(err.is_degree_violation(), "{err}");
    }

    #[test]
    fn malformed_input_names_the_line() {
        match parse_graph("BRG1 1 1 3 1\n0\nx\n2\n") {
            Err(FormatError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse_graph("BRG1 1 1 3 1\n0\n5\n2\n") {
            Err(FormatError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_graph("BRG2 1 1 3 1\n"), Err(FormatError::Parse { line: 1, .. })));
        assert!(matches!(parse_graph(""), Err(FormatError::Parse { .. })));
        assert!(matches!(
            parse_graph("BRG1 1 1 1 1\n0\n0\n"),
            Err(FormatError::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn layered_size_mismatch() {
        let text = "LAY1 1 1 2 2\nBRG1 1 1 2 1\n0\n1\nBRG1 1 1 3 1\n0\n1\n2\n";
        match parse_graph(text) {
            Err(FormatError::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("{other:?}"),
        }
        let text = "LAY1 1 1 2 2\nBRG1 1 1 2 1\n0\n1\n";
        assert!(matches!(parse_graph(text), Err(FormatError::Parse { .. })));
    }

    #[test]
    fn non_biregular_layered_cannot_be_written() {
        let adj = crate::graph::Adjacency::from_lists(1, vec![vec![0], vec![0]]).unwrap();
        let g = LayeredGraph::new(vec![2, 1], vec![adj]).unwrap();
        assert!(matches!(write_layered(&g), Err(FormatError::NotBiregular)));
    }
}

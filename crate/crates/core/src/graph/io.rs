//! Edge-list text format: a header line `n m`, then `m` lines `u v`
//! (1-indexed, `u < v` on output), whitespace separated, LF terminated.

use std::fmt::Write as _;

use super::Graph;
use crate::error::{Error, Result};

pub fn serialize_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(16 * (g.m() + 1));
    writeln!(out, "{} {}", g.n(), g.m()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

fn parse_pair(line: &str, line_no: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("missing {what}"),
        })?;
        tok.parse::<usize>().map_err(|e| Error::Parse {
            line: line_no,
            message: format!("bad {what} {tok:?}: {e}"),
        })
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line: line_no,
            message: "trailing fields".into(),
        });
    }
    Ok((a, b))
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header".into(),
    })?;
    let (n, m) = parse_pair(header, hline)?;
    let mut g = Graph::empty(n);
    let mut seen = 0usize;
    for (line_no, line) in lines {
        let (u, v) = parse_pair(line, line_no)?;
        for x in [u, v] {
            if x == 0 || x > n {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("vertex {x} out of range 1..={n}"),
                });
            }
        }
        if u == v {
            return Err(Error::Parse {
                line: line_no,
                message: format!("self-loop at {u}"),
            });
        }
        if !g.add_edge(u, v)? {
            return Err(Error::Parse {
                line: line_no,
                message: format!("duplicate edge {u} {v}"),
            });
        }
        seen += 1;
    }
    if seen != m {
        return Err(Error::Parse {
            line: hline,
            message: format!("header declares {m} edges, found {seen}"),
        });
    }
    Ok(g)
}

//! SMESH v1: plain-text exchange format for meridian meshes.
//!
//! ```text
//! SMESH v1
//! nodes 3
//! 0 0 1
//! 1 0.5 0.5
//! 2 0 0
//! triangles 1
//! 0 0 1 2
//! boundary 3
//! 0 1 steklov
//! 1 2 steklov
//! 2 0 axis
//! ```
//!
//! Node ids are sequential from zero; coordinates round-trip exactly
//! (shortest-representation decimal). Lines starting with `#` and blank
//! lines are ignored. Boundary groups are an in-memory attribute of
//! generated meshes and are not serialized; parsed meshes carry tags only.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Tag;

use super::{BoundaryEdge, Mesh2D};

pub fn mesh_to_string(mesh: &Mesh2D) -> String {
    let mut out = String::with_capacity(32 * mesh.nodes.len());
    out.push_str("SMESH v1\n");
    out.push_str(&format!("nodes {}\n", mesh.nodes.len()));
    for (i, p) in mesh.nodes.iter().enumerate() {
        out.push_str(&format!("{i} {} {}\n", p[0], p[1]));
    }
    out.push_str(&format!("triangles {}\n", mesh.triangles.len()));
    for (i, t) in mesh.triangles.iter().enumerate() {
        out.push_str(&format!("{i} {} {} {}\n", t[0], t[1], t[2]));
    }
    out.push_str(&format!("boundary {}\n", mesh.boundary_edges.len()));
    for e in &mesh.boundary_edges {
        out.push_str(&format!("{} {} {}\n", e.a, e.b, e.tag));
    }
    out
}

pub fn write_mesh(mesh: &Mesh2D, path: &Path) -> Result<()> {
    fs::write(path, mesh_to_string(mesh))?;
    Ok(())
}

pub fn read_mesh(path: &Path) -> Result<Mesh2D> {
    mesh_from_str(&fs::read_to_string(path)?)
}

/// Content lines with their 1-based line numbers, comments and blanks
/// stripped.
struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        Lines {
            iter: text.lines().enumerate(),
            last_line: 0,
        }
    }

    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (idx, raw) in self.iter.by_ref() {
            self.last_line = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            return Some((idx + 1, line));
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.next_content().ok_or_else(|| Error::Parse {
            line: self.last_line + 1,
            reason: format!("unexpected end of file while reading {what}"),
        })
    }
}

fn parse_count(line: usize, text: &str, keyword: &str) -> Result<usize> {
    let mut parts = text.split_whitespace();
    let head = parts.next().unwrap_or("");
    if head != keyword {
        return Err(Error::Parse {
            line,
            reason: format!("expected `{keyword} <count>`, found `{text}`"),
        });
    }
    let count = parts
        .next()
        .ok_or_else(|| Error::Parse {
            line,
            reason: format!("`{keyword}` is missing its count"),
        })?
        .parse::<usize>()
        .map_err(|e| Error::Parse {
            line,
            reason: format!("bad {keyword} count: {e}"),
        })?;
    if parts.next().is_some() {
        return Err(Error::Parse {
            line,
            reason: format!("trailing fields after `{keyword} <count>`"),
        });
    }
    Ok(count)
}

fn parse_index(line: usize, field: &str, what: &str, limit: usize) -> Result<usize> {
    let idx = field.parse::<usize>().map_err(|e| Error::Parse {
        line,
        reason: format!("bad {what}: {e}"),
    })?;
    if idx >= limit {
        return Err(Error::Parse {
            line,
            reason: format!("{what} {idx} out of range (have {limit})"),
        });
    }
    Ok(idx)
}

pub fn mesh_from_str(text: &str) -> Result<Mesh2D> {
    let mut lines = Lines::new(text);

    let (line, header) = lines.expect("the header")?;
    if header != "SMESH v1" {
        return Err(Error::Parse {
            line,
            reason: format!("expected header `SMESH v1`, found `{header}`"),
        });
    }

    let (line, decl) = lines.expect("the node count")?;
    let n_nodes = parse_count(line, decl, "nodes")?;
    let mut nodes = Vec::with_capacity(n_nodes);
    for expected in 0..n_nodes {
        let (line, row) = lines.expect("a node line")?;
        let fields: Vec<&str> = row.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line,
                reason: format!("node line needs `id r z`, found {} fields", fields.len()),
            });
        }
        let id = fields[0].parse::<usize>().map_err(|e| Error::Parse {
            line,
            reason: format!("bad node id: {e}"),
        })?;
        if id != expected {
            return Err(Error::Parse {
                line,
                reason: format!("node ids must be sequential: expected {expected}, found {id}"),
            });
        }
        let mut coord = [0.0; 2];
        for (k, field) in fields[1..].iter().enumerate() {
            coord[k] = field.parse::<f64>().map_err(|e| Error::Parse {
                line,
                reason: format!("bad coordinate `{field}`: {e}"),
            })?;
            if !coord[k].is_finite() {
                return Err(Error::Parse {
                    line,
                    reason: format!("coordinate `{field}` is not finite"),
                });
            }
        }
        nodes.push(coord);
    }

    let (line, decl) = lines.expect("the triangle count")?;
    let n_tris = parse_count(line, decl, "triangles")?;
    let mut triangles = Vec::with_capacity(n_tris);
    for expected in 0..n_tris {
        let (line, row) = lines.expect("a triangle line")?;
        let fields: Vec<&str> = row.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line,
                reason: format!(
                    "triangle line needs `id a b c`, found {} fields",
                    fields.len()
                ),
            });
        }
        let id = parse_index(line, fields[0], "triangle id", n_tris)?;
        if id != expected {
            return Err(Error::Parse {
                line,
                reason: format!(
                    "triangle ids must be sequential: expected {expected}, found {id}"
                ),
            });
        }
        let mut tri = [0usize; 3];
        for (k, field) in fields[1..].iter().enumerate() {
            tri[k] = parse_index(line, field, "node index", n_nodes)?;
        }
        triangles.push(tri);
    }

    let (line, decl) = lines.expect("the boundary count")?;
    let n_edges = parse_count(line, decl, "boundary")?;
    let mut boundary_edges = Vec::with_capacity(n_edges);
    for _ in 0..n_edges {
        let (line, row) = lines.expect("a boundary line")?;
        let fields: Vec<&str> = row.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line,
                reason: format!(
                    "boundary line needs `a b tag`, found {} fields",
                    fields.len()
                ),
            });
        }
        let a = parse_index(line, fields[0], "node index", n_nodes)?;
        let b = parse_index(line, fields[1], "node index", n_nodes)?;
        let tag = fields[2]
            .parse::<Tag>()
            .map_err(|reason| Error::Parse { line, reason })?;
        boundary_edges.push(BoundaryEdge {
            a,
            b,
            tag,
            group: None,
        });
    }

    if let Some((line, extra)) = lines.next_content() {
        return Err(Error::Parse {
            line,
            reason: format!("unexpected trailing content `{extra}`"),
        });
    }

    Ok(Mesh2D {
        nodes,
        triangles,
        boundary_edges,
    })
}

//! Lossless text persistence of graphs.
//!
//! A graph is a directory with two tab-separated files:
//!
//! * `vertices.tsv`: header `id weight x1 .. xd`, then one line per vertex in
//!   id order; floats carry 17 significant digits and an unrevealed
//!   coordinate is written as `-`;
//! * `edges.tsv`: one `u v` line per edge with `u < v`, sorted, no header.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{GirgError, Result};
use crate::geometry::TorusPoint;
use crate::graph::{GirgGraph, VertexId};
use crate::weights::WeightSequence;

pub const VERTEX_FILE: &str = "vertices.tsv";
pub const EDGE_FILE: &str = "edges.tsv";
const ABSENT: &str = "-";

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `g` into directory `dir`, creating it if needed.
pub fn export_graph(g: &GirgGraph, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut out = BufWriter::new(File::create(dir.join(VERTEX_FILE))?);
    write!(out, "id\tweight")?;
    for axis in 1..=g.dim() {
        write!(out, "\tx{axis}")?;
    }
    writeln!(out)?;
    for (v, (w, p)) in g.weights().as_slice().iter().zip(g.positions()).enumerate() {
        write!(out, "{v}\t{}", float(*w))?;
        for axis in 0..g.dim() {
            match p.coord(axis) {
                Some(x) => write!(out, "\t{}", float(x))?,
                None => write!(out, "\t{ABSENT}")?,
            }
        }
        writeln!(out)?;
    }
    out.flush()?;

    let mut out = BufWriter::new(File::create(dir.join(EDGE_FILE))?);
    for (u, v) in g.edges() {
        writeln!(out, "{u}\t{v}")?;
    }
    out.flush()?;
    Ok(())
}

struct LineError {
    path: PathBuf,
}

impl LineError {
    fn at(&self, line: usize, message: impl Into<String>) -> GirgError {
        GirgError::Parse {
            path: self.path.clone(),
            line,
            message: message.into(),
        }
    }
}

/// Reads a graph written by [`export_graph`].
pub fn import_graph(dir: &Path) -> Result<GirgGraph> {
    let path = dir.join(VERTEX_FILE);
    let err = LineError { path: path.clone() };
    let mut lines = BufReader::new(File::open(&path)?).lines();
    let header = match lines.next() {
        Some(h) => h?,
        None => return Err(err.at(1, "missing header")),
    };
    let columns: Vec<&str> = header.split('\t').collect();
    if columns.len() < 3 || columns[0] != "id" || columns[1] != "weight" {
        return Err(err.at(1, format!("unexpected header {header:?}")));
    }
    let dim = columns.len() - 2;
    for (axis, name) in columns[2..].iter().enumerate() {
        if *name != format!("x{}", axis + 1) {
            return Err(err.at(1, format!("unexpected column {name:?}")));
        }
    }
    let mut weights = Vec::new();
    let mut positions = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != dim + 2 {
            return Err(err.at(
                line_no,
                format!("expected {} fields, found {}", dim + 2, fields.len()),
            ));
        }
        let id: usize = fields[0]
            .parse()
            .map_err(|_| err.at(line_no, format!("bad vertex id {:?}", fields[0])))?;
        if id != weights.len() {
            return Err(err.at(line_no, format!("expected vertex {}, found {id}", weights.len())));
        }
        let w: f64 = fields[1]
            .parse()
            .map_err(|_| err.at(line_no, format!("bad weight {:?}", fields[1])))?;
        if !(w > 0.0 && w.is_finite()) {
            return Err(err.at(line_no, format!("weight must be positive, got {w}")));
        }
        let mut coords = Vec::with_capacity(dim);
        let mut absent = false;
        for field in &fields[2..] {
            if *field == ABSENT {
                absent = true;
                continue;
            }
            if absent {
                return Err(err.at(line_no, "coordinate after an absent one"));
            }
            let x: f64 = field
                .parse()
                .map_err(|_| err.at(line_no, format!("bad coordinate {field:?}")))?;
            if !(0.0..1.0).contains(&x) {
                return Err(err.at(line_no, format!("coordinate {x} outside [0, 1)")));
            }
            coords.push(x);
        }
        weights.push(w);
        positions.push(TorusPoint::new(coords));
    }

    let path = dir.join(EDGE_FILE);
    let err = LineError { path: path.clone() };
    let n = weights.len();
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    for (i, line) in BufReader::new(File::open(&path)?).lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let mut fields = line.split('\t');
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(err.at(line_no, "expected two fields"));
        };
        let parse = |s: &str| {
            s.parse::<VertexId>()
                .map_err(|_| err.at(line_no, format!("bad vertex {s:?}")))
        };
        let (u, v) = (parse(a)?, parse(b)?);
        if u >= v {
            return Err(err.at(line_no, format!("edge ({u}, {v}) is not ordered u < v")));
        }
        if v as usize >= n {
            return Err(err.at(line_no, format!("vertex {v} out of range for n = {n}")));
        }
        if let Some(&last) = edges.last() {
            if last == (u, v) {
                return Err(err.at(line_no, format!("duplicate edge ({u}, {v})")));
            }
            if last > (u, v) {
                return Err(err.at(line_no, format!("edge ({u}, {v}) out of order")));
            }
        }
        edges.push((u, v));
    }
    Ok(GirgGraph::from_sorted_unique(
        dim,
        WeightSequence::new(weights)?,
        positions,
        &edges,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_graph_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let g = GirgGraph::unembedded(3, &[]).unwrap();
        export_graph(&g, dir.path()).unwrap();
        assert_eq!(import_graph(dir.path()).unwrap(), g);
        let none = GirgGraph::unembedded(0, &[]).unwrap();
        export_graph(&none, dir.path()).unwrap();
        assert_eq!(import_graph(dir.path()).unwrap(), none);
    }

    #[test]
    fn partial_positions_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = GirgGraph::from_edges(
            2,
            WeightSequence::new(vec![1.0, 2.5, 1.0 / 3.0]).unwrap(),
            vec![
                TorusPoint::new(vec![0.1, 0.7]),
                TorusPoint::new(vec![0.30000000000000004]),
                TorusPoint::new(vec![0.999_999_999_999_999_9, 1e-300]),
            ],
            &[(2, 0), (1, 2)],
        )
        .unwrap();
        export_graph(&g, dir.path()).unwrap();
        let text = fs::read_to_string(dir.path().join(VERTEX_FILE)).unwrap();
        assert!(text.starts_with("id\tweight\tx1\tx2\n0\t1.0000000000000000e0\t"));
        assert!(text.contains("\t-\n"));
        assert_eq!(fs::read_to_string(dir.path().join(EDGE_FILE)).unwrap(), "0\t2\n1\t2\n");
        assert_eq!(import_graph(dir.path()).unwrap(), g);
    }

    fn write_files(dir: &Path, vertices: &str, edges: &str) {
        fs::write(dir.join(VERTEX_FILE), vertices).unwrap();
        fs::write(dir.join(EDGE_FILE), edges).unwrap();
    }

    fn parse_line(e: GirgError) -> (String, usize) {
        match e {
            GirgError::Parse { path, line, .. } => {
                (path.file_name().unwrap().to_string_lossy().into_owned(), line)
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn malformed_files_name_the_line() {
        let dir = tempfile::tempdir().unwrap();
        let vertices = "id\tweight\tx1\n0\t1\t0.5\n1\t1\t0.25\n2\t1\t0.75\n";
        write_files(dir.path(), vertices, "0\t1\n0\t2\n0\t2\n");
        assert_eq!(parse_line(import_graph(dir.path()).unwrap_err()), ("edges.tsv".into(), 3));
        write_files(dir.path(), vertices, "0\t2\n0\t1\n");
        assert_eq!(parse_line(import_graph(dir.path()).unwrap_err()), ("edges.tsv".into(), 2));
        write_files(dir.path(), vertices, "1\t0\n");
        assert_eq!(parse_line(import_graph(dir.path()).unwrap_err()), ("edges.tsv".into(), 1));
        write_files(dir.path(), vertices, "0\t3\n");
        assert_eq!(parse_line(import_graph(dir.path()).unwrap_err()), ("edges.tsv".into(), 1));
        write_files(dir.path(), "id\tweight\tx1\n0\t1\tfoo\n", "");
        assert_eq!(parse_line(import_graph(dir.path()).unwrap_err()), ("vertices.tsv".into(), 2));
        write_files(dir.path(), "id\tweight\tx1\n0\t1\t0.5\n2\t1\t0.5\n", "");
        assert_eq!(parse_line(import_graph(dir.path()).unwrap_err()), ("vertices.tsv".into(), 3));
        write_files(dir.path(), "id\tweight\tx1\tx2\n0\t1\t-\t0.5\n", "");
        assert_eq!(parse_line(import_graph(dir.path()).unwrap_err()), ("vertices.tsv".into(), 2));
        write_files(dir.path(), "vertex\tweight\n", "");
        assert_eq!(parse_line(import_graph(dir.path()).unwrap_err()), ("vertices.tsv".into(), 1));
    }
}

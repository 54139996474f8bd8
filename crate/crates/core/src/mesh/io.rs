//! ASCII OFF and OBJ reading and writing.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::mesh::{MeshError, TriMesh};
use crate::{Real, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Off,
    Obj,
}

impl MeshFormat {
    /// Guesses the format from the file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "off" => Some(MeshFormat::Off),
            "obj" => Some(MeshFormat::Obj),
            _ => None,
        }
    }
}

impl FromStr for MeshFormat {
    type Err = MeshError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "off" => Ok(MeshFormat::Off),
            "obj" => Ok(MeshFormat::Obj),
            other => Err(MeshError::Parse { line: 0, msg: format!("unknown mesh format '{other}'") }),
        }
    }
}

pub fn load_mesh<T: Real>(path: &Path, format: MeshFormat) -> Result<TriMesh<T>, MeshError> {
    let text = fs::read_to_string(path).map_err(|e| MeshError::Io { path: path.display().to_string(), source: e })?;
    let mesh = parse_mesh(&text, format)?;
    Ok(match path.file_stem().and_then(|s| s.to_str()) {
        Some(stem) => mesh.with_name(stem),
        None => mesh,
    })
}

pub fn parse_mesh<T: Real>(text: &str, format: MeshFormat) -> Result<TriMesh<T>, MeshError> {
    let (positions, faces) = match format {
        MeshFormat::Off => parse_off(text)?,
        MeshFormat::Obj => parse_obj(text)?,
    };
    let positions = positions
        .into_iter()
        .map(|[x, y, z]| Vec3::new(T::lit(x), T::lit(y), T::lit(z)))
        .collect();
    TriMesh::new(positions, faces)
}

type RawMesh = (Vec<[f64; 3]>, Vec<[usize; 3]>);

fn parse_err(line: usize, msg: impl Into<String>) -> MeshError {
    MeshError::Parse { line, msg: msg.into() }
}

fn parse_f64(tok: Option<&str>, line: usize) -> Result<f64, MeshError> {
    let tok = tok.ok_or_else(|| parse_err(line, "missing coordinate"))?;
    tok.parse::<f64>().map_err(|_| parse_err(line, format!("bad number '{tok}'")))
}

fn parse_off(text: &str) -> Result<RawMesh, MeshError> {
    // (1-based line number, content) with comments and blanks dropped
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    // The counts may share the header line ("OFF 12 20 0").
    let rest = header
        .strip_prefix("OFF")
        .ok_or_else(|| parse_err(ln, "missing OFF header"))?
        .trim();
    let (ln, counts) = if rest.is_empty() {
        lines.next().ok_or_else(|| parse_err(ln, "missing counts line"))?
    } else {
        (ln, rest)
    };
    let nums: Vec<usize> = counts
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| parse_err(ln, format!("bad count '{t}'"))))
        .collect::<Result<_, _>>()?;
    if nums.len() < 2 {
        return Err(parse_err(ln, "counts line needs 'V F [E]'"));
    }
    let (nv, nf) = (nums[0], nums[1]);

    let mut positions = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, l) = lines.next().ok_or_else(|| parse_err(ln, "unexpected end of vertex block"))?;
        let mut it = l.split_whitespace();
        positions.push([parse_f64(it.next(), ln)?, parse_f64(it.next(), ln)?, parse_f64(it.next(), ln)?]);
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (ln, l) = lines.next().ok_or_else(|| parse_err(ln, "unexpected end of face block"))?;
        let idx: Vec<usize> = l
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| parse_err(ln, format!("bad index '{t}'"))))
            .collect::<Result<_, _>>()?;
        match idx.as_slice() {
            [3, a, b, c, ..] => faces.push([*a, *b, *c]),
            [n, ..] => return Err(parse_err(ln, format!("only triangles are supported, got {n}-gon"))),
            [] => return Err(parse_err(ln, "empty face line")),
        }
    }
    Ok((positions, faces))
}

fn parse_obj(text: &str) -> Result<RawMesh, MeshError> {
    let mut positions = Vec::new();
    let mut faces = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        let mut it = l.split_whitespace();
        match it.next() {
            Some("v") => {
                positions.push([parse_f64(it.next(), ln)?, parse_f64(it.next(), ln)?, parse_f64(it.next(), ln)?])
            }
            Some("f") => {
                let idx: Vec<usize> = it
                    .map(|t| {
                        // "i", "i/t", "i//n" and "i/t/n" all lead with the vertex index
                        let head = t.split('/').next().unwrap_or("");
                        match head.parse::<usize>() {
                            Ok(k) if k >= 1 => Ok(k - 1),
                            _ => Err(parse_err(ln, format!("bad face index '{t}' (OBJ is 1-based)"))),
                        }
                    })
                    .collect::<Result<_, _>>()?;
                if idx.len() != 3 {
                    return Err(parse_err(ln, format!("only triangles are supported, got {} vertices", idx.len())));
                }
                faces.push([idx[0], idx[1], idx[2]]);
            }
            _ => {}
        }
    }
    Ok((positions, faces))
}

pub fn format_mesh<T: Real>(mesh: &TriMesh<T>, format: MeshFormat) -> String {
    let mut s = String::with_capacity(mesh.vertex_count() * 60 + mesh.face_count() * 20);
    match format {
        MeshFormat::Off => {
            s.push_str("OFF\n");
            let _ = writeln!(s, "{} {} 0", mesh.vertex_count(), mesh.face_count());
            for p in mesh.positions() {
                let _ = writeln!(s, "{} {} {}", p.x, p.y, p.z);
            }
            for [a, b, c] in mesh.faces() {
                let _ = writeln!(s, "3 {a} {b} {c}");
            }
        }
        MeshFormat::Obj => {
            if let Some(name) = mesh.name() {
                let _ = writeln!(s, "o {name}");
            }
            for p in mesh.positions() {
                let _ = writeln!(s, "v {} {} {}", p.x, p.y, p.z);
            }
            for [a, b, c] in mesh.faces() {
                let _ = writeln!(s, "f {} {} {}", a + 1, b + 1, c + 1);
            }
        }
    }
    s
}

pub fn save_mesh<T: Real>(mesh: &TriMesh<T>, path: &Path, format: MeshFormat) -> Result<(), MeshError> {
    fs::write(path, format_mesh(mesh, format)).map_err(|e| MeshError::Io { path: path.display().to_string(), source: e })
}

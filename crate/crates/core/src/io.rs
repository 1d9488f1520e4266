//! OBJ and OFF mesh file reading and writing.
//!
//! Only the triangle subset of each format is supported: OBJ files consist
//! of `v x y z` and 1-based `f i j k` lines (plus `#` comments), OFF files of
//! the `OFF` header, a counts line, vertex lines, and 0-based `3 i j k` face
//! lines. Coordinates are written with shortest round-trip formatting, so
//! saving and loading reproduces positions bit-exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::mesh::{validate_soup, TriMesh};
use crate::{Error, Result, Vec3};

/// Supported mesh file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Off,
}

impl MeshFormat {
    /// Guess the format from a file extension.
    pub fn from_path(path: &Path) -> Result<MeshFormat> {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .as_deref()
        {
            Some("obj") => Ok(MeshFormat::Obj),
            Some("off") => Ok(MeshFormat::Off),
            other => Err(Error::InvalidInput(format!(
                "cannot infer mesh format from extension {:?} (use .obj or .off)",
                other.unwrap_or("")
            ))),
        }
    }
}

/// Parse a mesh file into raw positions and faces without validating.
pub fn read_raw(path: &Path, format: MeshFormat) -> Result<(Vec<Vec3>, Vec<[usize; 3]>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    match format {
        MeshFormat::Obj => parse_obj(path, &text),
        MeshFormat::Off => parse_off(path, &text),
    }
}

/// Load and validate a mesh.
pub fn load_mesh(path: &Path, format: MeshFormat) -> Result<TriMesh> {
    let (positions, faces) = read_raw(path, format)?;
    TriMesh::from_raw(positions, faces)
}

/// Write a mesh in the requested format.
pub fn save_mesh(mesh: &TriMesh, path: &Path, format: MeshFormat) -> Result<()> {
    let text = match format {
        MeshFormat::Obj => format_obj(mesh.positions(), mesh.faces()),
        MeshFormat::Off => format_off(mesh.positions(), mesh.faces()),
    };
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn parse_f64(path: &Path, line_no: usize, token: &str) -> Result<f64> {
    token
        .parse()
        .map_err(|_| Error::parse(path, line_no, format!("invalid number '{token}'")))
}

fn parse_index(path: &Path, line_no: usize, token: &str) -> Result<usize> {
    token
        .parse()
        .map_err(|_| Error::parse(path, line_no, format!("invalid vertex index '{token}'")))
}

fn parse_obj(path: &Path, text: &str) -> Result<(Vec<Vec3>, Vec<[usize; 3]>)> {
    let mut positions = Vec::new();
    let mut faces = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let keyword = tokens.next().unwrap();
        let rest: Vec<&str> = tokens.collect();
        match keyword {
            "v" => {
                if rest.len() != 3 {
                    return Err(Error::parse(
                        path,
                        line_no,
                        format!("expected 3 coordinates, found {}", rest.len()),
                    ));
                }
                positions.push(Vec3::new(
                    parse_f64(path, line_no, rest[0])?,
                    parse_f64(path, line_no, rest[1])?,
                    parse_f64(path, line_no, rest[2])?,
                ));
            }
            "f" => {
                if rest.len() != 3 {
                    return Err(Error::parse(path, line_no, "non-triangle face"));
                }
                let mut tri = [0usize; 3];
                for (k, token) in rest.iter().enumerate() {
                    if token.contains('/') {
                        return Err(Error::parse(
                            path,
                            line_no,
                            "texture/normal face indices are not supported",
                        ));
                    }
                    let one_based = parse_index(path, line_no, token)?;
                    if one_based == 0 {
                        return Err(Error::parse(path, line_no, "face index 0 in 1-based file"));
                    }
                    tri[k] = one_based - 1;
                }
                faces.push(tri);
            }
            other => {
                return Err(Error::parse(
                    path,
                    line_no,
                    format!("unsupported OBJ element '{other}'"),
                ));
            }
        }
    }
    Ok((positions, faces))
}

fn parse_off(path: &Path, text: &str) -> Result<(Vec<Vec3>, Vec<[usize; 3]>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line_no, header) = lines
        .next()
        .ok_or_else(|| Error::parse(path, 1, "empty OFF file"))?;
    if header != "OFF" {
        return Err(Error::parse(path, line_no, "missing OFF header"));
    }

    let (line_no, counts) = lines
        .next()
        .ok_or_else(|| Error::parse(path, line_no, "missing counts line"))?;
    let tokens: Vec<&str> = counts.split_whitespace().collect();
    if tokens.len() != 3 {
        return Err(Error::parse(path, line_no, "counts line must be 'V F E'"));
    }
    let nv = parse_index(path, line_no, tokens[0])?;
    let nf = parse_index(path, line_no, tokens[1])?;

    let mut positions = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| Error::parse(path, 0, "unexpected end of file in vertex list"))?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(Error::parse(path, line_no, "vertex line must have 3 coordinates"));
        }
        positions.push(Vec3::new(
            parse_f64(path, line_no, tokens[0])?,
            parse_f64(path, line_no, tokens[1])?,
            parse_f64(path, line_no, tokens[2])?,
        ));
    }

    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| Error::parse(path, 0, "unexpected end of file in face list"))?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.first() != Some(&"3") {
            return Err(Error::parse(path, line_no, "non-triangle face"));
        }
        if tokens.len() != 4 {
            return Err(Error::parse(path, line_no, "face line must be '3 i j k'"));
        }
        faces.push([
            parse_index(path, line_no, tokens[1])?,
            parse_index(path, line_no, tokens[2])?,
            parse_index(path, line_no, tokens[3])?,
        ]);
    }

    Ok((positions, faces))
}

fn format_obj(positions: &[Vec3], faces: &[[usize; 3]]) -> String {
    let mut out = String::new();
    for p in positions {
        writeln!(out, "v {} {} {}", p.x, p.y, p.z).unwrap();
    }
    for f in faces {
        writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1).unwrap();
    }
    out
}

fn format_off(positions: &[Vec3], faces: &[[usize; 3]]) -> String {
    let mut out = String::from("OFF\n");
    writeln!(out, "{} {} 0", positions.len(), faces.len()).unwrap();
    for p in positions {
        writeln!(out, "{} {} {}", p.x, p.y, p.z).unwrap();
    }
    for f in faces {
        writeln!(out, "3 {} {} {}", f[0], f[1], f[2]).unwrap();
    }
    out
}

/// Read raw data and report findings instead of failing on structural issues.
pub fn inspect_mesh_file(path: &Path, format: MeshFormat) -> Result<crate::mesh::ValidationReport> {
    let (positions, faces) = read_raw(path, format)?;
    Ok(validate_soup(&positions, &faces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::{self, ShapeKind, ShapeSpec};

    fn tempdir() -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!("geoflow-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn off_tetrahedron_round_trip() {
        let text = "OFF\n4 4 0\n1 1 1\n1 -1 -1\n-1 1 -1\n-1 -1 1\n3 0 1 2\n3 0 3 1\n3 0 2 3\n3 1 3 2\n";
        let path = tempdir().join("tetra.off");
        fs::write(&path, text).unwrap();
        let mesh = load_mesh(&path, MeshFormat::Off).unwrap();
        assert_eq!(mesh.vertex_count(), 4);
        assert_eq!(mesh.face_count(), 4);
        assert_eq!(mesh.edge_count(), 6);
        assert!(mesh.is_closed());
    }

    #[test]
    fn obj_quad_face_is_an_error() {
        let path = tempdir().join("quad.obj");
        fs::write(
            &path,
            "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n",
        )
        .unwrap();
        let err = load_mesh(&path, MeshFormat::Obj).unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 5);
                assert_eq!(message, "non-triangle face");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn obj_two_triangles_boundary_loop() {
        let path = tempdir().join("two.obj");
        fs::write(
            &path,
            "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3\nf 1 3 4\n",
        )
        .unwrap();
        let mesh = load_mesh(&path, MeshFormat::Obj).unwrap();
        assert_eq!(mesh.boundary_loops().len(), 1);
        assert_eq!(mesh.boundary_loops()[0].len(), 4);
    }

    #[test]
    fn save_load_preserves_positions_bitwise() {
        let mesh = shapes::generate(&ShapeSpec::new(ShapeKind::Icosphere { radius: 1.0 }, 1)).unwrap();
        for format in [MeshFormat::Obj, MeshFormat::Off] {
            let path = tempdir().join(match format {
                MeshFormat::Obj => "sphere.obj",
                MeshFormat::Off => "sphere.off",
            });
            save_mesh(&mesh, &path, format).unwrap();
            let reloaded = load_mesh(&path, format).unwrap();
            assert_eq!(reloaded.faces(), mesh.faces());
            assert_eq!(reloaded.positions(), mesh.positions());
        }
    }

    #[test]
    fn one_third_is_written_with_full_precision() {
        let mesh = TriMesh::from_raw(
            vec![
                Vec3::new(1.0 / 3.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2]],
        )
        .unwrap();
        let path = tempdir().join("third.obj");
        save_mesh(&mesh, &path, MeshFormat::Obj).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let first = text.lines().next().unwrap();
        let digits = first
            .split_whitespace()
            .nth(1)
            .unwrap()
            .chars()
            .filter(|c| c.is_ascii_digit())
            .count();
        assert!(digits >= 9, "expected >= 9 significant digits, got: {first}");
        let reloaded = load_mesh(&path, MeshFormat::Obj).unwrap();
        assert_eq!(reloaded.positions()[0].x, 1.0 / 3.0);
    }

    #[test]
    fn unwritable_path_reports_io_error() {
        let mesh = shapes::generate(&ShapeSpec::new(ShapeKind::Icosphere { radius: 1.0 }, 0)).unwrap();
        let err = save_mesh(
            &mesh,
            Path::new("/nonexistent-dir/mesh.obj"),
            MeshFormat::Obj,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn unsupported_obj_keyword_names_the_line() {
        let path = tempdir().join("vn.obj");
        fs::write(&path, "v 0 0 0\nvn 0 0 1\n").unwrap();
        let err = read_raw(&path, MeshFormat::Obj).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }
}

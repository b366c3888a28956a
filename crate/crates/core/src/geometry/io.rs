//! Readers for OBJ, OFF, PLY (ascii and binary little-endian) and XYZ, plus a
//! plain XYZ writer.

use super::{GeometryError, OrientedPointCloud, Result, Shape, TriangleMesh};
use crate::Vec3;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Off,
    Ply,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloudFormat {
    Xyz,
    Ply,
}

/// Any supported input format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Obj,
    Off,
    Ply,
    Xyz,
}

impl InputFormat {
    pub fn from_extension(path: &Path) -> Option<InputFormat> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        ext.parse().ok()
    }
}

impl std::str::FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "obj" => Ok(InputFormat::Obj),
            "off" => Ok(InputFormat::Off),
            "ply" => Ok(InputFormat::Ply),
            "xyz" => Ok(InputFormat::Xyz),
            other => Err(format!(
                "unknown format `{other}` (expected obj|off|ply|xyz)"
            )),
        }
    }
}

impl std::fmt::Display for InputFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            InputFormat::Obj => "obj",
            InputFormat::Off => "off",
            InputFormat::Ply => "ply",
            InputFormat::Xyz => "xyz",
        })
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| GeometryError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_err(path: &Path, message: impl Into<String>) -> GeometryError {
    GeometryError::Parse {
        path: path.display().to_string(),
        message: message.into(),
    }
}

fn utf8<'a>(path: &Path, bytes: &'a [u8]) -> Result<&'a str> {
    std::str::from_utf8(bytes).map_err(|_| parse_err(path, "file is not valid UTF-8 text"))
}

pub fn load_mesh(path: impl AsRef<Path>, format: MeshFormat) -> Result<TriangleMesh> {
    let path = path.as_ref();
    let bytes = read(path)?;
    let (vertices, faces) = match format {
        MeshFormat::Obj => parse_obj(path, utf8(path, &bytes)?)?,
        MeshFormat::Off => parse_off(path, utf8(path, &bytes)?)?,
        MeshFormat::Ply => {
            let ply = parse_ply(path, &bytes)?;
            let faces = ply
                .faces
                .ok_or_else(|| parse_err(path, "ply has no face element"))?;
            (ply.positions, faces)
        }
    };
    let mut triangles = Vec::new();
    for face in &faces {
        triangulate_fan(face, &mut triangles);
    }
    TriangleMesh::new(vertices, triangles)
}

pub fn load_point_cloud(path: impl AsRef<Path>, format: CloudFormat) -> Result<OrientedPointCloud> {
    let path = path.as_ref();
    let bytes = read(path)?;
    let (points, normals) = match format {
        CloudFormat::Xyz => parse_xyz(path, utf8(path, &bytes)?)?,
        CloudFormat::Ply => {
            let ply = parse_ply(path, &bytes)?;
            (ply.positions, ply.normals)
        }
    };
    OrientedPointCloud::new(points, normals)
}

/// Loads a mesh (OBJ, OFF, PLY with faces) or an oriented cloud (XYZ, PLY
/// without faces).
pub fn load_shape(path: impl AsRef<Path>, format: InputFormat) -> Result<Shape> {
    let path = path.as_ref();
    match format {
        InputFormat::Obj => load_mesh(path, MeshFormat::Obj).map(Shape::Mesh),
        InputFormat::Off => load_mesh(path, MeshFormat::Off).map(Shape::Mesh),
        InputFormat::Xyz => load_point_cloud(path, CloudFormat::Xyz).map(Shape::Cloud),
        InputFormat::Ply => {
            let bytes = read(path)?;
            let ply = parse_ply(path, &bytes)?;
            match ply.faces {
                Some(faces) if !faces.is_empty() => {
                    let mut triangles = Vec::new();
                    for face in &faces {
                        triangulate_fan(face, &mut triangles);
                    }
                    TriangleMesh::new(ply.positions, triangles).map(Shape::Mesh)
                }
                _ => OrientedPointCloud::new(ply.positions, ply.normals).map(Shape::Cloud),
            }
        }
    }
}

/// Reads the first three columns of every non-empty line of an XYZ file.
pub fn load_xyz_points(path: impl AsRef<Path>) -> Result<Vec<Vec3>> {
    let path = path.as_ref();
    let bytes = read(path)?;
    Ok(parse_xyz(path, utf8(path, &bytes)?)?.0)
}

/// Writes `v` and `f` records (1-based indices).
pub fn write_obj(path: impl AsRef<Path>, mesh: &TriangleMesh) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for v in mesh.vertices() {
        writeln!(out, "v {} {} {}", v.x, v.y, v.z).unwrap();
    }
    for t in mesh.triangles() {
        writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1).unwrap();
    }
    std::fs::write(path, out).map_err(|source| GeometryError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes one point per line followed by the optional extra columns.
pub fn write_xyz(path: impl AsRef<Path>, points: &[Vec3], extra: &[&[f64]]) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for (i, p) in points.iter().enumerate() {
        write!(out, "{} {} {}", p.x, p.y, p.z).unwrap();
        for col in extra {
            write!(out, " {}", col[i]).unwrap();
        }
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|source| GeometryError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn triangulate_fan(face: &[usize], out: &mut Vec<[usize; 3]>) {
    for k in 1..face.len().saturating_sub(1) {
        out.push([face[0], face[k], face[k + 1]]);
    }
}

fn parse_f64(path: &Path, line_no: usize, tok: Option<&str>) -> Result<f64> {
    let tok = tok.ok_or_else(|| parse_err(path, format!("line {line_no}: missing number")))?;
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(path, format!("line {line_no}: bad number `{tok}`")))?;
    if !v.is_finite() {
        return Err(parse_err(path, format!("line {line_no}: non-finite value")));
    }
    Ok(v)
}

fn parse_obj(path: &Path, text: &str) -> Result<(Vec<Vec3>, Vec<Vec<usize>>)> {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.split('#').next().unwrap_or("");
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("v") => {
                let x = parse_f64(path, line_no, toks.next())?;
                let y = parse_f64(path, line_no, toks.next())?;
                let z = parse_f64(path, line_no, toks.next())?;
                vertices.push(Vec3::new(x, y, z));
            }
            Some("f") => {
                let mut face = Vec::new();
                for tok in toks {
                    let idx = tok.split('/').next().unwrap_or("");
                    let i: i64 = idx.parse().map_err(|_| {
                        parse_err(path, format!("line {line_no}: bad face index `{tok}`"))
                    })?;
                    let resolved = if i > 0 {
                        i - 1
                    } else if i < 0 {
                        vertices.len() as i64 + i
                    } else {
                        -1
                    };
                    if resolved < 0 || resolved >= vertices.len() as i64 {
                        return Err(parse_err(
                            path,
                            format!("line {line_no}: face index {i} out of range"),
                        ));
                    }
                    face.push(resolved as usize);
                }
                if face.len() < 3 {
                    return Err(parse_err(
                        path,
                        format!("line {line_no}: face with fewer than 3 vertices"),
                    ));
                }
                faces.push(face);
            }
            _ => {}
        }
    }
    Ok((vertices, faces))
}

fn parse_off(path: &Path, text: &str) -> Result<(Vec<Vec3>, Vec<Vec<usize>>)> {
    // Tokenise everything after stripping comments; OFF allows the counts to
    // follow the header keyword on the same line.
    let mut toks = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split_whitespace());
    match toks.next() {
        Some("OFF") => {}
        Some(other) => {
            return Err(parse_err(
                path,
                format!("expected OFF header, found `{other}`"),
            ))
        }
        None => return Err(parse_err(path, "empty file")),
    }
    let mut next_usize = |what: &str| -> Result<usize> {
        let t = toks
            .next()
            .ok_or_else(|| parse_err(path, format!("missing {what}")))?;
        t.parse()
            .map_err(|_| parse_err(path, format!("bad {what} `{t}`")))
    };
    let nv = next_usize("vertex count")?;
    let nf = next_usize("face count")?;
    let _ne = next_usize("edge count")?;
    let mut coords = Vec::with_capacity(nv);
    for i in 0..nv {
        let mut c = [0.0; 3];
        for slot in &mut c {
            let t = toks
                .next()
                .ok_or_else(|| parse_err(path, format!("vertex {i} truncated")))?;
            *slot = t
                .parse()
                .map_err(|_| parse_err(path, format!("vertex {i}: bad number `{t}`")))?;
        }
        coords.push(Vec3::new(c[0], c[1], c[2]));
    }
    let mut faces = Vec::with_capacity(nf);
    for f in 0..nf {
        let t = toks
            .next()
            .ok_or_else(|| parse_err(path, format!("face {f} truncated")))?;
        let k: usize = t
            .parse()
            .map_err(|_| parse_err(path, format!("face {f}: bad count `{t}`")))?;
        let mut face = Vec::with_capacity(k);
        for _ in 0..k {
            let t = toks
                .next()
                .ok_or_else(|| parse_err(path, format!("face {f} truncated")))?;
            let i: usize = t
                .parse()
                .map_err(|_| parse_err(path, format!("face {f}: bad index `{t}`")))?;
            if i >= nv {
                return Err(parse_err(path, format!("face {f}: index {i} out of range")));
            }
            face.push(i);
        }
        if k < 3 {
            return Err(parse_err(
                path,
                format!("face {f} has fewer than 3 vertices"),
            ));
        }
        faces.push(face);
    }
    Ok((coords, faces))
}

type XyzData = (Vec<Vec3>, Option<Vec<Vec3>>);

fn parse_xyz(path: &Path, text: &str) -> Result<XyzData> {
    let mut points = Vec::new();
    let mut normals = Vec::new();
    let mut columns = None;
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let vals: Vec<&str> = line.split_whitespace().collect();
        let n = vals.len();
        if n < 3 {
            return Err(parse_err(
                path,
                format!("line {line_no}: expected at least 3 columns"),
            ));
        }
        let has_normal = n >= 6;
        match columns {
            None => columns = Some(has_normal),
            Some(c) if c != has_normal => {
                return Err(parse_err(
                    path,
                    format!("line {line_no}: inconsistent column count"),
                ))
            }
            _ => {}
        }
        let mut it = vals.iter().copied();
        let x = parse_f64(path, line_no, it.next())?;
        let y = parse_f64(path, line_no, it.next())?;
        let z = parse_f64(path, line_no, it.next())?;
        points.push(Vec3::new(x, y, z));
        if has_normal {
            let nx = parse_f64(path, line_no, it.next())?;
            let ny = parse_f64(path, line_no, it.next())?;
            let nz = parse_f64(path, line_no, it.next())?;
            normals.push(Vec3::new(nx, ny, nz));
        }
    }
    let normals = if columns == Some(true) {
        Some(normals)
    } else {
        None
    };
    Ok((points, normals))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Scalar {
    I8,
    U8,
    I16,
    U16,
    I32,
    U32,
    F32,
    F64,
}

impl Scalar {
    fn parse(name: &str) -> Option<Scalar> {
        Some(match name {
            "char" | "int8" => Scalar::I8,
            "uchar" | "uint8" => Scalar::U8,
            "short" | "int16" => Scalar::I16,
            "ushort" | "uint16" => Scalar::U16,
            "int" | "int32" => Scalar::I32,
            "uint" | "uint32" => Scalar::U32,
            "float" | "float32" => Scalar::F32,
            "double" | "float64" => Scalar::F64,
            _ => return None,
        })
    }

    fn size(self) -> usize {
        match self {
            Scalar::I8 | Scalar::U8 => 1,
            Scalar::I16 | Scalar::U16 => 2,
            Scalar::I32 | Scalar::U32 | Scalar::F32 => 4,
            Scalar::F64 => 8,
        }
    }

    fn read_le(self, b: &[u8]) -> f64 {
        match self {
            Scalar::I8 => b[0] as i8 as f64,
            Scalar::U8 => b[0] as f64,
            Scalar::I16 => i16::from_le_bytes([b[0], b[1]]) as f64,
            Scalar::U16 => u16::from_le_bytes([b[0], b[1]]) as f64,
            Scalar::I32 => i32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64,
            Scalar::U32 => u32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64,
            Scalar::F32 => f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64,
            Scalar::F64 => f64::from_le_bytes(b[..8].try_into().unwrap()),
        }
    }
}

#[derive(Debug, Clone)]
enum Property {
    Scalar {
        name: String,
        ty: Scalar,
    },
    List {
        name: String,
        count: Scalar,
        item: Scalar,
    },
}

#[derive(Debug, Clone)]
struct Element {
    name: String,
    count: usize,
    properties: Vec<Property>,
}

struct PlyData {
    positions: Vec<Vec3>,
    normals: Option<Vec<Vec3>>,
    faces: Option<Vec<Vec<usize>>>,
}

enum Body<'a> {
    Ascii(std::iter::Peekable<std::str::SplitAsciiWhitespace<'a>>),
    Binary { data: &'a [u8], pos: usize },
}

impl Body<'_> {
    fn value(&mut self, ty: Scalar) -> Option<f64> {
        match self {
            Body::Ascii(toks) => toks.next()?.parse().ok(),
            Body::Binary { data, pos } => {
                let n = ty.size();
                let slice = data.get(*pos..*pos + n)?;
                *pos += n;
                Some(ty.read_le(slice))
            }
        }
    }
}

fn parse_ply(path: &Path, bytes: &[u8]) -> Result<PlyData> {
    const END: &[u8] = b"end_header";
    let end = bytes
        .windows(END.len())
        .position(|w| w == END)
        .ok_or_else(|| parse_err(path, "missing end_header"))?;
    let mut body_start = end + END.len();
    if bytes.get(body_start) == Some(&b'\r') {
        body_start += 1;
    }
    if bytes.get(body_start) == Some(&b'\n') {
        body_start += 1;
    }
    let header = utf8(path, &bytes[..end])?;
    let mut lines = header.lines().map(str::trim);
    if lines.next() != Some("ply") {
        return Err(parse_err(path, "missing `ply` magic"));
    }
    let mut ascii = None;
    let mut elements: Vec<Element> = Vec::new();
    for line in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            [] | ["comment", ..] | ["obj_info", ..] => {}
            ["format", "ascii", _] => ascii = Some(true),
            ["format", "binary_little_endian", _] => ascii = Some(false),
            ["format", other, ..] => {
                return Err(parse_err(path, format!("unsupported ply format `{other}`")))
            }
            ["element", name, count] => elements.push(Element {
                name: name.to_string(),
                count: count
                    .parse()
                    .map_err(|_| parse_err(path, format!("bad element count `{count}`")))?,
                properties: Vec::new(),
            }),
            ["property", "list", count, item, name] => {
                let el = elements
                    .last_mut()
                    .ok_or_else(|| parse_err(path, "property before element"))?;
                let count = Scalar::parse(count)
                    .ok_or_else(|| parse_err(path, format!("bad list count type `{count}`")))?;
                let item = Scalar::parse(item)
                    .ok_or_else(|| parse_err(path, format!("bad list item type `{item}`")))?;
                el.properties.push(Property::List {
                    name: name.to_string(),
                    count,
                    item,
                });
            }
            ["property", ty, name] => {
                let el = elements
                    .last_mut()
                    .ok_or_else(|| parse_err(path, "property before element"))?;
                let ty =
                    Scalar::parse(ty).ok_or_else(|| parse_err(path, format!("bad type `{ty}`")))?;
                el.properties.push(Property::Scalar {
                    name: name.to_string(),
                    ty,
                });
            }
            _ => {
                return Err(parse_err(
                    path,
                    format!("unrecognised header line `{line}`"),
                ))
            }
        }
    }
    let ascii = ascii.ok_or_else(|| parse_err(path, "missing format line"))?;
    let mut body = if ascii {
        Body::Ascii(
            utf8(path, &bytes[body_start..])?
                .split_ascii_whitespace()
                .peekable(),
        )
    } else {
        Body::Binary {
            data: &bytes[body_start..],
            pos: 0,
        }
    };

    let truncated = || parse_err(path, "unexpected end of ply data");
    let mut positions = Vec::new();
    let mut normals: Option<Vec<Vec3>> = None;
    let mut faces = None;
    for el in &elements {
        let scalar_index = |n: &str| {
            el.properties
                .iter()
                .filter(|p| matches!(p, Property::Scalar { .. }))
                .position(|p| matches!(p, Property::Scalar { name, .. } if name == n))
        };
        match el.name.as_str() {
            "vertex" => {
                let (ix, iy, iz) = match (scalar_index("x"), scalar_index("y"), scalar_index("z")) {
                    (Some(a), Some(b), Some(c)) => (a, b, c),
                    _ => return Err(parse_err(path, "vertex element lacks x/y/z")),
                };
                let nidx = match (scalar_index("nx"), scalar_index("ny"), scalar_index("nz")) {
                    (Some(a), Some(b), Some(c)) => Some((a, b, c)),
                    _ => None,
                };
                let mut ns = Vec::new();
                let mut scalars = Vec::new();
                for _ in 0..el.count {
                    scalars.clear();
                    for p in &el.properties {
                        match p {
                            Property::Scalar { ty, .. } => {
                                scalars.push(body.value(*ty).ok_or_else(truncated)?)
                            }
                            Property::List { count, item, .. } => {
                                let k = body.value(*count).ok_or_else(truncated)? as usize;
                                for _ in 0..k {
                                    body.value(*item).ok_or_else(truncated)?;
                                }
                            }
                        }
                    }
                    positions.push(Vec3::new(scalars[ix], scalars[iy], scalars[iz]));
                    if let Some((a, b, c)) = nidx {
                        ns.push(Vec3::new(scalars[a], scalars[b], scalars[c]));
                    }
                }
                if nidx.is_some() {
                    normals = Some(ns);
                }
            }
            "face" => {
                let mut fs = Vec::with_capacity(el.count);
                for _ in 0..el.count {
                    let mut face = None;
                    for p in &el.properties {
                        match p {
                            Property::Scalar { ty, .. } => {
                                body.value(*ty).ok_or_else(truncated)?;
                            }
                            Property::List { name, count, item } => {
                                let k = body.value(*count).ok_or_else(truncated)? as usize;
                                let mut idx = Vec::with_capacity(k);
                                for _ in 0..k {
                                    let v = body.value(*item).ok_or_else(truncated)?;
                                    if v < 0.0 {
                                        return Err(parse_err(path, "negative face index"));
                                    }
                                    idx.push(v as usize);
                                }
                                if name == "vertex_indices" || name == "vertex_index" {
                                    face = Some(idx);
                                }
                            }
                        }
                    }
                    let face =
                        face.ok_or_else(|| parse_err(path, "face element lacks vertex_indices"))?;
                    fs.push(face);
                }
                faces = Some(fs);
            }
            _ => {
                for _ in 0..el.count {
                    for p in &el.properties {
                        match p {
                            Property::Scalar { ty, .. } => {
                                body.value(*ty).ok_or_else(truncated)?;
                            }
                            Property::List { count, item, .. } => {
                                let k = body.value(*count).ok_or_else(truncated)? as usize;
                                for _ in 0..k {
                                    body.value(*item).ok_or_else(truncated)?;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    if positions.iter().any(|p| !p.iter().all(|c| c.is_finite())) {
        return Err(parse_err(path, "non-finite vertex coordinate"));
    }
    if let Some(fs) = &faces {
        let n = positions.len();
        for f in fs {
            if f.len() < 3 || f.iter().any(|&i| i >= n) {
                return Err(parse_err(path, "face with bad vertex indices"));
            }
        }
    }
    Ok(PlyData {
        positions,
        normals,
        faces,
    })
}

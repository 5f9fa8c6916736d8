//! Point-cloud file I/O: whitespace-separated XYZ text and the PLY 1.0
//! subset (ascii and binary_little_endian, `vertex` element with float or
//! double x/y/z). Binary PLY stores coordinates as 64-bit floats so the
//! write → parse round trip is exact.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Ordered point list; order is preserved exactly through parse/write.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Point3>,
}

impl PointCloud {
    pub fn new(points: Vec<Point3>) -> Self {
        PointCloud { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Parse whitespace-separated XYZ text. Lines starting with `#` and blank
/// lines are skipped; extra fields beyond the third are ignored.
pub fn parse_xyz(bytes: &[u8]) -> Result<PointCloud> {
    let mut points = Vec::new();
    for (idx, raw) in bytes.split(|&b| b == b'\n').enumerate() {
        let line_no = idx + 1;
        let line = std::str::from_utf8(raw)
            .map_err(|_| Error::MalformedLine(line_no))?
            .trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let mut coord = [0.0f64; 3];
        for c in coord.iter_mut() {
            let field = fields.next().ok_or(Error::MalformedLine(line_no))?;
            *c = field
                .parse::<f64>()
                .map_err(|_| Error::MalformedLine(line_no))?;
            if !c.is_finite() {
                return Err(Error::MalformedLine(line_no));
            }
        }
        points.push(Point3::new(coord[0], coord[1], coord[2]));
    }
    if points.is_empty() {
        return Err(Error::EmptyCloud);
    }
    Ok(PointCloud::new(points))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum ScalarType {
    I8,
    U8,
    I16,
    U16,
    I32,
    U32,
    F32,
    F64,
}

impl ScalarType {
    fn from_token(tok: &str) -> Option<Self> {
        Some(match tok {
            "char" | "int8" => ScalarType::I8,
            "uchar" | "uint8" => ScalarType::U8,
            "short" | "int16" => ScalarType::I16,
            "ushort" | "uint16" => ScalarType::U16,
            "int" | "int32" => ScalarType::I32,
            "uint" | "uint32" => ScalarType::U32,
            "float" | "float32" => ScalarType::F32,
            "double" | "float64" => ScalarType::F64,
            _ => return None,
        })
    }

    fn size(self) -> usize {
        match self {
            ScalarType::I8 | ScalarType::U8 => 1,
            ScalarType::I16 | ScalarType::U16 => 2,
            ScalarType::I32 | ScalarType::U32 | ScalarType::F32 => 4,
            ScalarType::F64 => 8,
        }
    }

    fn read_le(self, bytes: &[u8]) -> f64 {
        match self {
            ScalarType::I8 => bytes[0] as i8 as f64,
            ScalarType::U8 => bytes[0] as f64,
            ScalarType::I16 => i16::from_le_bytes([bytes[0], bytes[1]]) as f64,
            ScalarType::U16 => u16::from_le_bytes([bytes[0], bytes[1]]) as f64,
            ScalarType::I32 => {
                i32::from_le_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]) as f64
            }
            ScalarType::U32 => {
                u32::from_le_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]) as f64
            }
            ScalarType::F32 => {
                f32::from_le_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]) as f64
            }
            ScalarType::F64 => f64::from_le_bytes([
                bytes[0], bytes[1], bytes[2], bytes[3], bytes[4], bytes[5], bytes[6], bytes[7],
            ]),
        }
    }
}

#[derive(Debug, Clone)]
enum Property {
    Scalar { name: String, ty: ScalarType },
    List { count_ty: ScalarType, item_ty: ScalarType },
}

#[derive(Debug, Clone)]
struct Element {
    name: String,
    count: usize,
    props: Vec<Property>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum PlyFormat {
    Ascii,
    BinaryLittleEndian,
}

struct PlyHeader {
    format: PlyFormat,
    elements: Vec<Element>,
    body_start: usize,
}

fn next_line<'a>(bytes: &'a [u8], pos: &mut usize) -> Option<&'a [u8]> {
    if *pos >= bytes.len() {
        return None;
    }
    let rest = &bytes[*pos..];
    let end = rest.iter().position(|&b| b == b'\n').unwrap_or(rest.len());
    let mut line = &rest[..end];
    *pos += end + 1;
    if line.last() == Some(&b'\r') {
        line = &line[..line.len() - 1];
    }
    Some(line)
}

fn parse_header(bytes: &[u8]) -> Result<PlyHeader> {
    let mut pos = 0;
    let magic = next_line(bytes, &mut pos).ok_or(Error::BadMagic)?;
    if magic != b"ply" {
        return Err(Error::BadMagic);
    }
    let mut format = None;
    let mut elements: Vec<Element> = Vec::new();
    loop {
        let raw = next_line(bytes, &mut pos)
            .ok_or_else(|| Error::InvalidHeader("missing end_header".into()))?;
        let line = std::str::from_utf8(raw)
            .map_err(|_| Error::InvalidHeader("non-UTF-8 header line".into()))?;
        let mut tok = line.split_whitespace();
        match tok.next() {
            None => continue,
            Some("comment") | Some("obj_info") => continue,
            Some("format") => {
                let kind = tok.next().unwrap_or("");
                format = Some(match kind {
                    "ascii" => PlyFormat::Ascii,
                    "binary_little_endian" => PlyFormat::BinaryLittleEndian,
                    other => return Err(Error::UnsupportedFormat(other.to_string())),
                });
            }
            Some("element") => {
                let name = tok
                    .next()
                    .ok_or_else(|| Error::InvalidHeader("element without name".into()))?;
                let count: usize = tok
                    .next()
                    .and_then(|c| c.parse().ok())
                    .ok_or_else(|| Error::InvalidHeader("element without count".into()))?;
                elements.push(Element {
                    name: name.to_string(),
                    count,
                    props: Vec::new(),
                });
            }
            Some("property") => {
                let elem = elements
                    .last_mut()
                    .ok_or_else(|| Error::InvalidHeader("property before element".into()))?;
                let first = tok
                    .next()
                    .ok_or_else(|| Error::InvalidHeader("property without type".into()))?;
                if first == "list" {
                    let count_ty = tok
                        .next()
                        .and_then(ScalarType::from_token)
                        .ok_or_else(|| Error::InvalidHeader("bad list count type".into()))?;
                    let item_ty = tok
                        .next()
                        .and_then(ScalarType::from_token)
                        .ok_or_else(|| Error::InvalidHeader("bad list item type".into()))?;
                    elem.props.push(Property::List { count_ty, item_ty });
                } else {
                    let ty = ScalarType::from_token(first)
                        .ok_or_else(|| Error::InvalidHeader("unknown property type".into()))?;
                    let name = tok
                        .next()
                        .ok_or_else(|| Error::InvalidHeader("property without name".into()))?;
                    elem.props.push(Property::Scalar {
                        name: name.to_string(),
                        ty,
                    });
                }
            }
            Some("end_header") => break,
            Some(other) => {
                return Err(Error::InvalidHeader(format!("unknown keyword {other:?}")))
            }
        }
    }
    let format = format.ok_or_else(|| Error::InvalidHeader("missing format line".into()))?;
    Ok(PlyHeader {
        format,
        elements,
        body_start: pos,
    })
}

/// Column indices of the x/y/z properties in the vertex element.
fn coord_columns(elem: &Element) -> Result<[usize; 3]> {
    let find = |want: &'static str| -> Result<usize> {
        for (idx, prop) in elem.props.iter().enumerate() {
            if let Property::Scalar { name, ty } = prop {
                if name == want {
                    return match ty {
                        ScalarType::F32 | ScalarType::F64 => Ok(idx),
                        _ => Err(Error::MissingProperty(want)),
                    };
                }
            }
        }
        Err(Error::MissingProperty(want))
    };
    Ok([find("x")?, find("y")?, find("z")?])
}

/// Parse a PLY file, keeping only vertex positions. Elements and
/// properties other than vertex x/y/z are skipped.
pub fn parse_ply(bytes: &[u8]) -> Result<PointCloud> {
    let header = parse_header(bytes)?;
    let body = &bytes[header.body_start.min(bytes.len())..];
    let vertex = header
        .elements
        .iter()
        .find(|e| e.name == "vertex")
        .ok_or(Error::MissingProperty("x"))?;
    let cols = coord_columns(vertex)?;

    let mut points = Vec::new();
    match header.format {
        PlyFormat::Ascii => {
            let text = std::str::from_utf8(body).map_err(|_| Error::TruncatedBody)?;
            let mut toks = text.split_whitespace();
            let mut take = |n: &mut dyn FnMut(&str) -> Result<()>| -> Result<()> {
                let t = toks.next().ok_or(Error::TruncatedBody)?;
                n(t)
            };
            for elem in &header.elements {
                let is_vertex = elem.name == "vertex";
                for row in 0..elem.count {
                    let mut coord = [0.0f64; 3];
                    for (pidx, prop) in elem.props.iter().enumerate() {
                        match prop {
                            Property::Scalar { .. } => {
                                take(&mut |t| {
                                    let v: f64 =
                                        t.parse().map_err(|_| Error::TruncatedBody)?;
                                    if is_vertex {
                                        for (axis, &c) in cols.iter().enumerate() {
                                            if c == pidx {
                                                coord[axis] = v;
                                            }
                                        }
                                    }
                                    Ok(())
                                })?;
                            }
                            Property::List { .. } => {
                                let mut n = 0usize;
                                take(&mut |t| {
                                    n = t.parse().map_err(|_| Error::TruncatedBody)?;
                                    Ok(())
                                })?;
                                for _ in 0..n {
                                    take(&mut |_| Ok(()))?;
                                }
                            }
                        }
                    }
                    if is_vertex {
                        let p = Point3::new(coord[0], coord[1], coord[2]);
                        if !p.is_finite() {
                            return Err(Error::NonFiniteCoordinate(row));
                        }
                        points.push(p);
                    }
                }
            }
        }
        PlyFormat::BinaryLittleEndian => {
            fn take<'a>(body: &'a [u8], off: &mut usize, n: usize) -> Result<&'a [u8]> {
                let end = off.checked_add(n).ok_or(Error::TruncatedBody)?;
                if end > body.len() {
                    return Err(Error::TruncatedBody);
                }
                let slice = &body[*off..end];
                *off = end;
                Ok(slice)
            }
            let mut off = 0usize;
            for elem in &header.elements {
                let is_vertex = elem.name == "vertex";
                for row in 0..elem.count {
                    let mut coord = [0.0f64; 3];
                    for (pidx, prop) in elem.props.iter().enumerate() {
                        match prop {
                            Property::Scalar { ty, .. } => {
                                let v = ty.read_le(take(body, &mut off, ty.size())?);
                                if is_vertex {
                                    for (axis, &c) in cols.iter().enumerate() {
                                        if c == pidx {
                                            coord[axis] = v;
                                        }
                                    }
                                }
                            }
                            Property::List { count_ty, item_ty } => {
                                let n = count_ty.read_le(take(body, &mut off, count_ty.size())?);
                                if !(0.0..=u32::MAX as f64).contains(&n) {
                                    return Err(Error::TruncatedBody);
                                }
                                let n = n as usize;
                                take(
                                    body,
                                    &mut off,
                                    n.checked_mul(item_ty.size()).ok_or(Error::TruncatedBody)?,
                                )?;
                            }
                        }
                    }
                    if is_vertex {
                        let p = Point3::new(coord[0], coord[1], coord[2]);
                        if !p.is_finite() {
                            return Err(Error::NonFiniteCoordinate(row));
                        }
                        points.push(p);
                    }
                }
            }
        }
    }
    Ok(PointCloud::new(points))
}

/// Write a cloud as PLY with double-precision x/y/z. Binary mode is the
/// lossless boundary the codec tests rely on.
pub fn write_ply(cloud: &PointCloud, binary: bool) -> Result<Vec<u8>> {
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let format = if binary {
        "binary_little_endian"
    } else {
        "ascii"
    };
    let mut out = format!(
        "ply\nformat {format} 1.0\nelement vertex {}\n\
         property double x\nproperty double y\nproperty double z\nend_header\n",
        cloud.len()
    )
    .into_bytes();
    for p in &cloud.points {
        if binary {
            out.extend_from_slice(&p.x.to_le_bytes());
            out.extend_from_slice(&p.y.to_le_bytes());
            out.extend_from_slice(&p.z.to_le_bytes());
        } else {
            out.extend_from_slice(format!("{} {} {}\n", p.x, p.y, p.z).as_bytes());
        }
    }
    Ok(out)
}

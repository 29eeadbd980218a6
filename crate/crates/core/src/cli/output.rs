use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, Result};
use crate::grafting::PleatedSurfaceMesh;
use crate::hyperbolic::DomeMesh;
use crate::moebius::{MoebiusMap, PointCP1};
use crate::surface::{Holonomy, Letter};

/// Number formatting shared by every output: 17 significant digits.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Pretty JSON formatter writing every float with 17 significant digits.
struct Digits17<'a>(PrettyFormatter<'a>);

impl Formatter for Digits17<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(num(value).as_bytes())
    }
    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut buf, Digits17(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Numeric(format!("serialization: {e}")))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io_err =
        |e: io::Error| Error::Precondition(format!("cannot write {}: {e}", path.display()));
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(io_err)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

pub fn complex_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Matrix entries as `[[re, im]; 4]` in the order a, b, c, d.
pub fn matrix(m: &MoebiusMap) -> [[f64; 2]; 4] {
    m.entries().map(complex_pair)
}

#[derive(Debug, Clone, Serialize)]
pub struct MeshEdge {
    pub ends: [usize; 2],
    pub weight: f64,
}

/// Mesh schema shared by domes and pleated surfaces: vertices in Poincare
/// ball coordinates, faces as vertex index lists, weighted bending edges.
/// Dome vertices are ideal and also carry their affine coordinate.
#[derive(Debug, Clone, Serialize)]
pub struct MeshJson {
    pub kind: &'static str,
    pub vertices: Vec<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ideal: Option<Vec<Option<[f64; 2]>>>,
    pub faces: Vec<Vec<usize>>,
    pub edges: Vec<MeshEdge>,
}

impl MeshJson {
    pub fn from_dome(mesh: &DomeMesh) -> Self {
        MeshJson {
            kind: "dome",
            vertices: mesh.vertices.iter().map(|v| v.to_sphere()).collect(),
            ideal: Some(
                mesh.vertices
                    .iter()
                    .map(|v| v.to_complex().map(complex_pair))
                    .collect(),
            ),
            faces: mesh.faces.iter().map(|f| f.vertices.clone()).collect(),
            edges: mesh
                .edges
                .iter()
                .map(|e| MeshEdge {
                    ends: e.ends,
                    weight: e.weight,
                })
                .collect(),
        }
    }

    /// Face polygons get their own vertex copies; edges index the vertices
    /// of the segment's copy in the face on the leaf's right.
    pub fn from_pleated(mesh: &PleatedSurfaceMesh) -> Self {
        let mut vertices = Vec::new();
        let mut faces: Vec<Vec<usize>> = Vec::new();
        for (i, f) in mesh.faces.iter().enumerate() {
            let start = vertices.len();
            vertices.extend(mesh.face_vertices(i).iter().map(|p| p.to_ball()));
            faces.push((start..start + f.polygon.len()).collect());
        }
        let mut edges = Vec::new();
        for e in &mesh.edges {
            let face = e.faces[0];
            let base: usize = faces[face][0];
            let poly = &mesh.faces[face].polygon;
            let find = |z: Complex64| {
                (0..poly.len())
                    .min_by(|&a, &b| (poly[a] - z).norm().total_cmp(&(poly[b] - z).norm()))
                    .map(|k| base + k)
                    .unwrap_or(base)
            };
            edges.push(MeshEdge {
                ends: [find(e.segment[0]), find(e.segment[1])],
                weight: e.weight,
            });
        }
        MeshJson {
            kind: "pleated",
            vertices,
            ideal: None,
            faces,
            edges,
        }
    }

    /// Wavefront OBJ with polygon faces fanned into triangles.
    pub fn to_obj(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {} mesh, Poincare ball coordinates", self.kind);
        for v in &self.vertices {
            let _ = writeln!(out, "v {} {} {}", num(v[0]), num(v[1]), num(v[2]));
        }
        for f in &self.faces {
            for k in 1..f.len().saturating_sub(1) {
                let _ = writeln!(out, "f {} {} {}", f[0] + 1, f[k] + 1, f[k + 1] + 1);
            }
        }
        out
    }
}

/// `re,im` rows for the finite points; points at infinity are skipped.
pub fn points_csv(points: &[PointCP1]) -> String {
    let mut out = String::from("re,im\n");
    for z in points.iter().filter_map(|p| p.to_complex()) {
        let _ = writeln!(out, "{},{}", num(z.re), num(z.im));
    }
    out
}

/// Generator rows: name, the four complex entries and the trace.
pub fn holonomy_csv(rows: &[(&str, &Holonomy)]) -> String {
    let mut out = String::from(
        "representation,word,a_re,a_im,b_re,b_im,c_re,c_im,d_re,d_im,trace_re,trace_im\n",
    );
    for (label, h) in rows {
        for (i, g) in h.generators.iter().enumerate() {
            let name = generator_name(i);
            let mut cells = vec![label.to_string(), name];
            for z in g.entries().iter().chain(std::iter::once(&g.trace())) {
                cells.push(num(z.re));
                cells.push(num(z.im));
            }
            let _ = writeln!(out, "{}", cells.join(","));
        }
    }
    out
}

pub fn generator_name(i: usize) -> String {
    Letter::new(i, false).to_string()
}

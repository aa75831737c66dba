//! Text exporters: CSV polylines, OBJ grid meshes with a sibling channel
//! CSV, and flat JSON reports. All output is deterministic.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::curves::Polyline3;
use crate::error::{GeomError, Result};
use crate::geom::Vec3;

/// Triangle mesh with named per-vertex scalar channels.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MeshData {
    pub vertices: Vec<Vec3>,
    /// 0-based vertex indices.
    pub faces: Vec<[usize; 3]>,
    pub channels: Vec<(String, Vec<f64>)>,
}

impl MeshData {
    /// Triangulated `nu × nv` vertex grid (row-major in `u`). Each quad is
    /// split along its `(i, j) → (i+1, j+1)` diagonal, giving
    /// `2(nu − 1)(nv − 1)` triangles.
    pub fn grid(vertices: Vec<Vec3>, nu: usize, nv: usize) -> Result<Self> {
        if nu < 2 || nv < 2 || vertices.len() != nu * nv {
            return Err(GeomError::DegenerateGrid(format!(
                "{} vertices do not form a {nu}x{nv} grid",
                vertices.len()
            )));
        }
        let idx = |i: usize, j: usize| i * nv + j;
        let mut faces = Vec::with_capacity(2 * (nu - 1) * (nv - 1));
        for i in 0..nu - 1 {
            for j in 0..nv - 1 {
                faces.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
                faces.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
            }
        }
        Ok(Self { vertices, faces, channels: Vec::new() })
    }

    pub fn with_channel(mut self, name: &str, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.vertices.len() {
            return Err(GeomError::InvalidArgument(format!(
                "channel '{name}' has {} values for {} vertices",
                values.len(),
                self.vertices.len()
            )));
        }
        self.channels.push((name.to_string(), values));
        Ok(self)
    }
}

/// Scientific notation with 17 significant digits, enough to round-trip every `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_string(c: &Polyline3) -> String {
    let mut out = String::from("s,x,y,z\n");
    for smp in &c.samples {
        let p = smp.p;
        out.push_str(&format!("{},{},{},{}\n", fmt_f64(smp.s), fmt_f64(p.x), fmt_f64(p.y), fmt_f64(p.z)));
    }
    out
}

/// Writes `s,x,y,z` rows, one per sample.
pub fn write_csv(c: &Polyline3, path: &Path) -> Result<()> {
    fs::write(path, csv_string(c))?;
    Ok(())
}

pub fn obj_string(mesh: &MeshData) -> String {
    let mut out = String::new();
    for v in &mesh.vertices {
        out.push_str(&format!("v {} {} {}\n", fmt_f64(v.x), fmt_f64(v.y), fmt_f64(v.z)));
    }
    for f in &mesh.faces {
        out.push_str(&format!("f {} {} {}\n", f[0] + 1, f[1] + 1, f[2] + 1));
    }
    out
}

/// `<out>.channels.csv`, next to the OBJ file.
pub fn channels_path(obj: &Path) -> PathBuf {
    let mut name = obj.as_os_str().to_owned();
    name.push(".channels.csv");
    PathBuf::from(name)
}

pub fn channels_string(mesh: &MeshData) -> String {
    let mut out = String::from("vertex");
    for (name, _) in &mesh.channels {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for i in 0..mesh.vertices.len() {
        out.push_str(&(i + 1).to_string());
        for (_, values) in &mesh.channels {
            out.push(',');
            out.push_str(&fmt_f64(values[i]));
        }
        out.push('\n');
    }
    out
}

/// Writes the mesh as OBJ and, when it carries channels, the channel CSV
/// at [`channels_path`].
pub fn write_obj(mesh: &MeshData, path: &Path) -> Result<()> {
    let n = mesh.vertices.len();
    if let Some(f) = mesh.faces.iter().find(|f| f.iter().any(|&i| i >= n)) {
        return Err(GeomError::InvalidArgument(format!("face {f:?} indexes past {n} vertices")));
    }
    fs::write(path, obj_string(mesh))?;
    if !mesh.channels.is_empty() {
        fs::write(channels_path(path), channels_string(mesh))?;
    }
    Ok(())
}

/// JSON number, or `null` for non-finite values.
pub fn json_number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// Flat JSON object; keys come out sorted.
pub fn report_json_string(report: &Map<String, Value>) -> String {
    let mut s = serde_json::to_string_pretty(&Value::Object(report.clone())).expect("JSON values are serializable");
    s.push('\n');
    s
}

/// Writes the report to `path`, or to standard output when `path` is `None`.
pub fn write_report_json(report: &Map<String, Value>, path: Option<&Path>) -> Result<()> {
    let text = report_json_string(report);
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::CurveSample;

    #[test]
    fn csv_rows_and_round_trip() {
        let c = Polyline3::new(
            vec![
                CurveSample { s: 0.0, p: Vec3::new(0.1, 1.0 / 3.0, -2e-300) },
                CurveSample { s: 1.0, p: Vec3::new(std::f64::consts::PI, 1e10, 7.0) },
            ],
            false,
        );
        let text = csv_string(&c);
        assert_eq!(text.lines().count(), 3);
        assert!(text.ends_with('\n'));
        for (line, smp) in text.lines().skip(1).zip(&c.samples) {
            let v: Vec<f64> = line.split(',').map(|t| t.parse().unwrap()).collect();
            assert_eq!(v, vec![smp.s, smp.p.x, smp.p.y, smp.p.z]);
        }
        assert_eq!(csv_string(&Polyline3::default()), "s,x,y,z\n");
    }

    #[test]
    fn obj_grid_counts() {
        let m = MeshData::grid(vec![Vec3::ZERO, Vec3::X, Vec3::Y, Vec3::new(1.0, 1.0, 0.0)], 2, 2).unwrap();
        assert_eq!(m.faces, vec![[0, 2, 3], [0, 3, 1]]);
        let text = obj_string(&m);
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 4);
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 2);
        assert!(text.contains("f 1 3 4\n"));
        let big = MeshData::grid(vec![Vec3::ZERO; 64 * 64], 64, 64).unwrap();
        assert_eq!(big.faces.len(), 7938);
        assert!(MeshData::grid(vec![Vec3::ZERO; 5], 2, 2).is_err());
    }

    #[test]
    fn obj_and_channels_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.obj");
        let m = MeshData::grid(vec![Vec3::ZERO, Vec3::X, Vec3::Y, Vec3::Z], 2, 2)
            .unwrap()
            .with_channel("K", vec![0.0, 1.0, 2.0, 3.0])
            .unwrap();
        write_obj(&m, &path).unwrap();
        let ch = fs::read_to_string(channels_path(&path)).unwrap();
        assert_eq!(ch.lines().next(), Some("vertex,K"));
        assert_eq!(ch.lines().count(), 5);
        assert!(m.clone().with_channel("H", vec![1.0]).is_err());
    }

    #[test]
    fn json_keys_sorted() {
        let mut r = Map::new();
        r.insert("theta_mean_rad".into(), json_number(0.5));
        r.insert("K_mean".into(), json_number(-4.0));
        r.insert("c_hat".into(), json_number(f64::NAN));
        let s = report_json_string(&r);
        let (k, c, t) = (s.find("K_mean").unwrap(), s.find("c_hat").unwrap(), s.find("theta").unwrap());
        assert!(k < c && c < t);
        assert!(s.contains("\"c_hat\": null"));
    }
}

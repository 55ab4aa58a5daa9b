//! File formats: legacy ASCII VTK, the radii trace CSV and the flat
//! key-value configuration.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use tumour_core::{AdaptiveMesh, SimConfig};

use crate::error::CliError;
use crate::post::MODES;

/// A nodal scalar field with its name.
pub type Field<'a> = (&'a str, &'a [f64]);

/// Renders an unstructured grid of triangles with the given point data, in
/// the order given.
pub fn vtk_string(vertices: &[[f64; 2]], triangles: &[[usize; 3]], fields: &[Field]) -> String {
    let mut s = String::new();
    s.push_str("# vtk DataFile Version 3.0\ntumour\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(s, "POINTS {} double", vertices.len());
    for p in vertices {
        let _ = writeln!(s, "{:?} {:?} 0", p[0], p[1]);
    }
    let _ = writeln!(s, "CELLS {} {}", triangles.len(), 4 * triangles.len());
    for t in triangles {
        let _ = writeln!(s, "3 {} {} {}", t[0], t[1], t[2]);
    }
    let _ = writeln!(s, "CELL_TYPES {}", triangles.len());
    for _ in triangles {
        s.push_str("5\n");
    }
    if !fields.is_empty() {
        let _ = writeln!(s, "POINT_DATA {}", vertices.len());
        for (name, values) in fields {
            let _ = writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default");
            for v in values.iter() {
                let _ = writeln!(s, "{v:?}");
            }
        }
    }
    s
}

pub fn write_vtk(mesh: &AdaptiveMesh, fields: &[Field], path: &Path) -> Result<(), CliError> {
    for (name, values) in fields {
        if values.len() != mesh.num_vertices() {
            return Err(CliError::Config(format!(
                "field {name} has {} values for {} vertices",
                values.len(),
                mesh.num_vertices()
            )));
        }
    }
    fs::write(path, vtk_string(mesh.vertices(), mesh.triangles(), fields)).map_err(CliError::io(path))
}

/// Contents of a legacy VTK file as written by [`write_vtk`].
#[derive(Debug, Clone, PartialEq)]
pub struct VtkData {
    pub points: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
    pub fields: Vec<(String, Vec<f64>)>,
}

/// Reads back the subset of the legacy format produced by [`write_vtk`].
pub fn read_vtk(path: &Path) -> Result<VtkData, CliError> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    let bad = |reason: &str| CliError::Vtk { path: path.to_path_buf(), reason: reason.to_string() };
    let mut tokens = text.lines().skip(4).flat_map(str::split_whitespace);
    let mut next = || tokens.next().ok_or_else(|| bad("unexpected end of file"));
    let number = |t: &str| t.parse::<f64>().map_err(|_| bad(&format!("expected a number, found {t:?}")));
    let count = |t: &str| t.parse::<usize>().map_err(|_| bad(&format!("expected a count, found {t:?}")));

    let mut data = VtkData { points: Vec::new(), triangles: Vec::new(), fields: Vec::new() };
    let mut n_points = 0;
    while let Ok(keyword) = next() {
        match keyword {
            "POINTS" => {
                n_points = count(next()?)?;
                next()?;
                for _ in 0..n_points {
                    data.points.push([number(next()?)?, number(next()?)?, number(next()?)?]);
                }
            }
            "CELLS" => {
                let n = count(next()?)?;
                next()?;
                for _ in 0..n {
                    if next()? != "3" {
                        return Err(bad("only triangles are supported"));
                    }
                    data.triangles.push([count(next()?)?, count(next()?)?, count(next()?)?]);
                }
            }
            "CELL_TYPES" => {
                let n = count(next()?)?;
                for _ in 0..n {
                    if next()? != "5" {
                        return Err(bad("only triangles are supported"));
                    }
                }
            }
            "POINT_DATA" => {
                if count(next()?)? != n_points {
                    return Err(bad("point data size differs from the number of points"));
                }
            }
            "SCALARS" => {
                let name = next()?.to_string();
                next()?;
                next()?;
                if next()? != "LOOKUP_TABLE" {
                    return Err(bad("missing lookup table"));
                }
                next()?;
                let values = (0..n_points).map(|_| number(next()?)).collect::<Result<Vec<_>, _>>()?;
                data.fields.push((name, values));
            }
            other => return Err(bad(&format!("unexpected keyword {other:?}"))),
        }
    }
    Ok(data)
}

/// One line of the radii and energy trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub t: f64,
    pub r_inner: Option<f64>,
    pub r_outer: Option<f64>,
    /// Fourier amplitudes of the outer radius, modes 1 to 8.
    pub amplitudes: Option<[f64; MODES]>,
    pub energy: f64,
}

pub const CSV_HEADER: &str = "t,r_inner,r_outer,amp_m1,amp_m2,amp_m3,amp_m4,amp_m5,amp_m6,amp_m7,amp_m8,energy";

/// Formats a row; absent radii and amplitudes are left empty.
pub fn csv_row(row: &TraceRow) -> String {
    let opt = |v: Option<f64>| v.map_or(String::new(), |v| format!("{v:?}"));
    let mut s = format!("{:?},{},{}", row.t, opt(row.r_inner), opt(row.r_outer));
    for m in 0..MODES {
        s.push(',');
        s.push_str(&opt(row.amplitudes.map(|a| a[m])));
    }
    let _ = write!(s, ",{:?}", row.energy);
    s
}

pub fn write_csv(rows: &[TraceRow], path: &Path) -> Result<(), CliError> {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for row in rows {
        s.push_str(&csv_row(row));
        s.push('\n');
    }
    fs::write(path, s).map_err(CliError::io(path))
}

pub fn config_to_string(cfg: &SimConfig) -> Result<String, CliError> {
    toml::to_string(cfg).map_err(|e| CliError::Config(e.to_string()))
}

pub fn config_from_str(text: &str) -> Result<SimConfig, CliError> {
    let cfg: SimConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn read_config(path: &Path) -> Result<SimConfig, CliError> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    config_from_str(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_config(cfg: &SimConfig, path: &Path) -> Result<(), CliError> {
    fs::write(path, config_to_string(cfg)?).map_err(CliError::io(path))
}

/// Applies `key=value` overrides. Values are read as TOML scalars, falling
/// back to a bare string.
pub fn apply_overrides(cfg: &SimConfig, overrides: &[String]) -> Result<SimConfig, CliError> {
    let mut table: toml::Table = toml::Table::try_from(cfg).map_err(|e| CliError::Config(e.to_string()))?;
    for item in overrides {
        let (key, raw) = item
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("override {item:?} is not of the form key=value")))?;
        let key = key.trim().replace('-', "_");
        if !table.contains_key(&key) {
            return Err(CliError::Config(format!("unknown parameter {key:?}")));
        }
        let raw = raw.trim();
        let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(raw.to_string()));
        let value = match (&table[&key], value) {
            (toml::Value::Float(_), toml::Value::Integer(i)) => toml::Value::Float(i as f64),
            (_, v) => v,
        };
        table.insert(key, value);
    }
    let cfg: SimConfig = table.try_into().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

//! Cell-set exports: rational rectangle lists, float CSV, and PLY voxel
//! meshes for three-dimensional sets.

use std::collections::HashMap;

use num::ToPrimitive;

use crate::cellset::CellSet;
use crate::error::{Error, Result};
use crate::rational::format_ratio;

/// Line-oriented rational rectangle list:
///
/// ```text
/// cells 1
/// d 3
/// depth 2
/// 0/1 1/4 0/1 1/4 0/1 1/4
/// ```
///
/// Each rectangle line alternates `lo hi` per axis.
pub fn write_cells_rects(cells: &CellSet) -> String {
    let mut out = String::new();
    out.push_str("cells 1\n");
    out.push_str(&format!("d {}\n", cells.d()));
    out.push_str(&format!("depth {}\n", cells.depth()));
    for rect in cells.rects() {
        let mut fields = Vec::with_capacity(2 * cells.d());
        for (lo, hi) in rect.lo().iter().zip(rect.hi()) {
            fields.push(format_ratio(lo));
            fields.push(format_ratio(hi));
        }
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    out
}

/// Float CSV with a header row `lo1,hi1,...,lod,hid`.
pub fn write_cells_csv(cells: &CellSet) -> String {
    let mut out = String::new();
    let header: Vec<String> = (1..=cells.d())
        .flat_map(|j| [format!("lo{j}"), format!("hi{j}")])
        .collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for rect in cells.rects() {
        let mut fields = Vec::with_capacity(2 * cells.d());
        for (lo, hi) in rect.lo().iter().zip(rect.hi()) {
            fields.push(lo.to_f64().unwrap().to_string());
            fields.push(hi.to_f64().unwrap().to_string());
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// ASCII PLY voxel mesh: one cube (8 vertices, 6 quad faces) per cell.
/// With `weld` set, coincident vertices are shared across cubes.
pub fn write_ply(cells: &CellSet, weld: bool) -> Result<String> {
    if cells.d() != 3 {
        return Err(Error::UnsupportedConfiguration(format!(
            "PLY export needs d = 3, got d = {}",
            cells.d()
        )));
    }
    let mut vertices: Vec<[f64; 3]> = Vec::new();
    let mut faces: Vec<[usize; 4]> = Vec::new();
    let mut lookup: HashMap<[u64; 3], usize> = HashMap::new();

    for rect in cells.rects() {
        let lo: Vec<f64> = rect.lo().iter().map(|v| v.to_f64().unwrap()).collect();
        let hi: Vec<f64> = rect.hi().iter().map(|v| v.to_f64().unwrap()).collect();
        let mut ids = [0usize; 8];
        for (corner, id) in ids.iter_mut().enumerate() {
            let v = [
                if corner & 1 == 0 { lo[0] } else { hi[0] },
                if corner & 2 == 0 { lo[1] } else { hi[1] },
                if corner & 4 == 0 { lo[2] } else { hi[2] },
            ];
            *id = if weld {
                let key = [v[0].to_bits(), v[1].to_bits(), v[2].to_bits()];
                *lookup.entry(key).or_insert_with(|| {
                    vertices.push(v);
                    vertices.len() - 1
                })
            } else {
                vertices.push(v);
                vertices.len() - 1
            };
        }
        // Quad faces of the cube, outward order.
        faces.push([ids[0], ids[1], ids[3], ids[2]]); // z = lo
        faces.push([ids[4], ids[6], ids[7], ids[5]]); // z = hi
        faces.push([ids[0], ids[4], ids[5], ids[1]]); // y = lo
        faces.push([ids[2], ids[3], ids[7], ids[6]]); // y = hi
        faces.push([ids[0], ids[2], ids[6], ids[4]]); // x = lo
        faces.push([ids[1], ids[5], ids[7], ids[3]]); // x = hi
    }

    let mut out = String::new();
    out.push_str("ply\nformat ascii 1.0\n");
    out.push_str(&format!("element vertex {}\n", vertices.len()));
    out.push_str("property float x\nproperty float y\nproperty float z\n");
    out.push_str(&format!("element face {}\n", faces.len()));
    out.push_str("property list uchar int vertex_indices\nend_header\n");
    for v in &vertices {
        out.push_str(&format!("{} {} {}\n", v[0], v[1], v[2]));
    }
    for f in &faces {
        out.push_str(&format!("4 {} {} {} {}\n", f[0], f[1], f[2], f[3]));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellset::{hutchinson_iterate, DEFAULT_CELL_BUDGET};
    use crate::constructions::sierpinski_tau;

    fn depth_one() -> CellSet {
        let t = sierpinski_tau(3, 2).unwrap();
        hutchinson_iterate(&t, 1, DEFAULT_CELL_BUDGET).unwrap()
    }

    #[test]
    fn rect_lines_are_rational_and_counted() {
        let text = write_cells_rects(&depth_one());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "cells 1");
        assert_eq!(lines[1], "d 3");
        assert_eq!(lines[2], "depth 1");
        assert_eq!(lines.len(), 3 + 4);
        assert_eq!(lines[3], "0/1 1/2 0/1 1/2 0/1 1/2");
    }

    #[test]
    fn csv_has_header_and_rows() {
        let text = write_cells_csv(&depth_one());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "lo1,hi1,lo2,hi2,lo3,hi3");
        assert_eq!(lines.len(), 1 + 4);
    }

    #[test]
    fn ply_counts_and_welding() {
        let cells = depth_one();
        let plain = write_ply(&cells, false).unwrap();
        assert!(plain.contains("element vertex 32"));
        assert!(plain.contains("element face 24"));
        let welded = write_ply(&cells, true).unwrap();
        // The four cubes share corners of the 3x3x3 lattice of half-steps:
        // welding can only reduce the count.
        let count: usize = welded
            .lines()
            .find_map(|l| l.strip_prefix("element vertex "))
            .unwrap()
            .parse()
            .unwrap();
        assert!(count < 32);
    }

    #[test]
    fn ply_requires_three_dimensions() {
        let unit = CellSet::unit_cube(2);
        assert!(write_ply(&unit, false).is_err());
    }
}

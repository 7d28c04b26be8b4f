//! GMX: the grid-measure text format, mirroring TMX with a resolution
//! vector instead of level counts.
//!
//! ```text
//! gmx 1
//! d 3
//! r 2 2 2
//! 1 1 1 1/4
//! ...
//! ```

use num::One;

use super::{expect_keyword, numbered_lines, parse_usize, parse_usize_list};
use crate::error::{Error, Result};
use crate::grid::GridMeasure;
use crate::rational::{format_ratio, parse_ratio};

pub const GMX_VERSION: u32 = 1;

pub fn write_gmx(mu: &GridMeasure) -> String {
    let mut out = String::new();
    out.push_str(&format!("gmx {GMX_VERSION}\n"));
    out.push_str(&format!("d {}\n", mu.d()));
    let r: Vec<String> = mu.resolution().iter().map(|v| v.to_string()).collect();
    out.push_str(&format!("r {}\n", r.join(" ")));
    for (cell, mass) in mu.cells() {
        for c in cell {
            out.push_str(&format!("{c} "));
        }
        out.push_str(&format_ratio(mass));
        out.push('\n');
    }
    out
}

pub fn parse_gmx(text: &str) -> Result<GridMeasure> {
    let mut lines = numbered_lines(text);

    let (no, version) = expect_keyword(lines.next(), "gmx")?;
    let version = parse_usize(no, version, "version")?;
    if version != GMX_VERSION as usize {
        return Err(Error::parse(no, format!("unsupported gmx version {version}")));
    }
    let (no, d_text) = expect_keyword(lines.next(), "d")?;
    let d = parse_usize(no, d_text, "dimension")?;
    let (no, r_text) = expect_keyword(lines.next(), "r")?;
    let resolution = parse_usize_list(no, r_text, "resolution")?;
    if resolution.len() != d {
        return Err(Error::parse(
            no,
            format!("`r` lists {} resolutions for dimension {d}", resolution.len()),
        ));
    }

    let mut cells = Vec::new();
    let mut previous: Option<Vec<usize>> = None;
    for (no, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != d + 1 {
            return Err(Error::parse(
                no,
                format!("cell needs {d} indices and a mass, found {} tokens", tokens.len()),
            ));
        }
        let mut cell = Vec::with_capacity(d);
        for tok in &tokens[..d] {
            cell.push(parse_usize(no, tok, "cell index")?);
        }
        let mass = parse_ratio(tokens[d])
            .ok_or_else(|| Error::parse(no, format!("bad rational `{}`", tokens[d])))?;
        if let Some(prev) = &previous {
            if *prev >= cell {
                return Err(Error::parse(
                    no,
                    format!("cells out of order or duplicated at {cell:?}"),
                ));
            }
        }
        previous = Some(cell.clone());
        cells.push((cell, mass));
    }
    let mu = GridMeasure::new(resolution, cells).map_err(|e| Error::parse(0, e.to_string()))?;
    let total = mu.total_mass();
    if !total.is_one() {
        return Err(Error::parse(0, format!("total mass {total} is not 1")));
    }
    Ok(mu)
}

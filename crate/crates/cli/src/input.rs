//! Preset strings and input loading. An input argument is either a preset
//! (`sierpinski:d=3,N=2`, `rotation:N=3,cycle=231`, `example-5-1`,
//! `modsum:d=3,k=4`, `dense:d=3,N=3,k=2`, `lambda:d=3,r=1`) or a path to a
//! TMX/GMX/CSV file.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use dsm_core::chaos::SampleCloud;
use dsm_core::constructions::{
    dense_dimension_tau, example_5_1, modsum_grid_measure, rotation_tau, sierpinski_tau,
};
use dsm_core::formats::{parse_cloud_csv, parse_gmx, parse_tmx};
use dsm_core::grid::GridMeasure;
use dsm_core::matrix::{Permutation, TransformationMatrix};

use crate::CliError;

pub enum Preset {
    Matrix(TransformationMatrix),
    Measure(GridMeasure),
}

/// Recognizes and builds a preset; `None` means "treat as a path".
pub fn parse_preset(input: &str) -> Result<Option<Preset>, CliError> {
    if input == "example-5-1" {
        return Ok(Some(Preset::Matrix(example_5_1().map_err(CliError::Core)?)));
    }
    let Some((name, params)) = input.split_once(':') else {
        return Ok(None);
    };
    if !matches!(name, "sierpinski" | "rotation" | "modsum" | "dense" | "lambda") {
        return Ok(None);
    }
    let mut fields: BTreeMap<String, String> = BTreeMap::new();
    for part in params.split(',') {
        let (key, value) = part.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("preset parameter `{part}` is not key=value"))
        })?;
        fields.insert(key.to_string(), value.to_string());
    }
    let take_int = |fields: &BTreeMap<String, String>, key: &str| -> Result<usize, CliError> {
        let value = fields
            .get(key)
            .ok_or_else(|| CliError::Usage(format!("preset `{name}` needs `{key}=`")))?;
        value
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("bad integer `{value}` for `{key}`")))
    };
    let preset = match name {
        "sierpinski" => Preset::Matrix(
            sierpinski_tau(take_int(&fields, "d")?, take_int(&fields, "N")?)
                .map_err(CliError::Core)?,
        ),
        "rotation" => {
            let n = take_int(&fields, "N")?;
            let cycle_text = fields
                .get("cycle")
                .ok_or_else(|| CliError::Usage("preset `rotation` needs `cycle=`".into()))?;
            let cycle = parse_cycle(cycle_text)?;
            Preset::Matrix(rotation_tau(n, &cycle).map_err(CliError::Core)?)
        }
        "modsum" => Preset::Measure(
            modsum_grid_measure(take_int(&fields, "d")?, take_int(&fields, "k")?)
                .map_err(CliError::Core)?,
        ),
        "dense" => Preset::Matrix(
            dense_dimension_tau(
                take_int(&fields, "d")?,
                take_int(&fields, "N")?,
                take_int(&fields, "k")?,
            )
            .map_err(CliError::Core)?,
        ),
        "lambda" => {
            let d = take_int(&fields, "d")?;
            let r = if fields.contains_key("r") {
                take_int(&fields, "r")?
            } else {
                1
            };
            if d == 0 || r == 0 {
                return Err(CliError::Usage("lambda preset needs d >= 1, r >= 1".into()));
            }
            Preset::Measure(GridMeasure::uniform(vec![r; d]))
        }
        _ => unreachable!(),
    };
    Ok(Some(preset))
}

/// One-line permutation: either a digit string (`231`) or dash-separated
/// values (`2-3-1`) for cycles on ten or more points.
fn parse_cycle(text: &str) -> Result<Permutation, CliError> {
    let values: Vec<usize> = if text.contains('-') {
        text.split('-')
            .map(|t| t.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::Usage(format!("bad cycle `{text}`")))?
    } else {
        text.chars()
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| CliError::Usage(format!("bad cycle `{text}`")))?
    };
    Permutation::new(values).map_err(CliError::Core)
}

fn read_file(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })
}

pub fn load_matrix(input: &str) -> Result<TransformationMatrix, CliError> {
    match parse_preset(input)? {
        Some(Preset::Matrix(t)) => Ok(t),
        Some(Preset::Measure(_)) => Err(CliError::Usage(format!(
            "`{input}` is a measure preset; a transformation matrix is needed here"
        ))),
        None => parse_tmx(&read_file(input)?).map_err(CliError::Core),
    }
}

pub fn load_measure(input: &str) -> Result<GridMeasure, CliError> {
    match parse_preset(input)? {
        Some(Preset::Measure(mu)) => Ok(mu),
        Some(Preset::Matrix(_)) => Err(CliError::Usage(format!(
            "`{input}` is a matrix preset; a grid measure is needed here"
        ))),
        None => parse_gmx(&read_file(input)?).map_err(CliError::Core),
    }
}

pub fn load_cloud(path: &str) -> Result<SampleCloud, CliError> {
    parse_cloud_csv(&read_file(path)?).map_err(CliError::Core)
}

pub fn is_csv_path(path: &str) -> bool {
    Path::new(path)
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

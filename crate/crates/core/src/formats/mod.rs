//! Text formats. Everything is line-oriented, exact-rational where the
//! value is exact, and written in a canonical order so that equal values
//! serialize to identical bytes.

mod cells;
mod cloud;
mod gmx;
mod ifsp_dump;
mod tmx;

pub use cells::{write_cells_csv, write_cells_rects, write_ply};
pub use cloud::{parse_cloud_csv, write_cloud_csv};
pub use gmx::{parse_gmx, write_gmx, GMX_VERSION};
pub use ifsp_dump::write_ifsp_dump;
pub use tmx::{parse_tmx, parse_tmx_raw, write_tmx, TMX_VERSION};

use crate::error::{Error, Result};

/// Splits a header line `<keyword> <rest>` and checks the keyword.
fn expect_keyword<'a>(
    line: Option<(usize, &'a str)>,
    keyword: &str,
) -> Result<(usize, &'a str)> {
    match line {
        Some((no, text)) => {
            let mut parts = text.splitn(2, ' ');
            let head = parts.next().unwrap_or("");
            if head != keyword {
                return Err(Error::parse(
                    no,
                    format!("expected `{keyword} ...`, found `{text}`"),
                ));
            }
            Ok((no, parts.next().unwrap_or("").trim()))
        }
        None => Err(Error::parse(0, format!("missing `{keyword}` header line"))),
    }
}

fn parse_usize(line: usize, token: &str, what: &str) -> Result<usize> {
    token
        .parse::<usize>()
        .map_err(|_| Error::parse(line, format!("bad {what} `{token}`")))
}

fn parse_usize_list(line: usize, text: &str, what: &str) -> Result<Vec<usize>> {
    if text.is_empty() {
        return Err(Error::parse(line, format!("missing {what}")));
    }
    text.split_whitespace()
        .map(|tok| parse_usize(line, tok, what))
        .collect()
}

/// Numbered, non-empty lines of a document.
fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.is_empty())
}

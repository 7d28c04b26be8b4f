//! TMX: the transformation-matrix text format.
//!
//! ```text
//! tmx 1
//! d 3
//! m 2 2 2
//! 1 1 1 1/4
//! 1 2 2 1/4
//! 2 1 2 1/4
//! 2 2 1 1/4
//! ```
//!
//! Entries are the positive masses, one per line, keys in lexicographic
//! order, rationals always as `numerator/denominator`. The strict parser
//! rejects duplicate keys and total mass different from one; the raw parser
//! keeps the structural checks but defers the mass check so that a
//! diagnostic report can be produced.

use num::One;

use super::{expect_keyword, numbered_lines, parse_usize, parse_usize_list};
use crate::error::{Error, Result};
use crate::matrix::{Dims, MultiIndex, TransformationMatrix};
use crate::rational::{format_ratio, parse_ratio};

pub const TMX_VERSION: u32 = 1;

pub fn write_tmx(t: &TransformationMatrix) -> String {
    let mut out = String::new();
    out.push_str(&format!("tmx {TMX_VERSION}\n"));
    out.push_str(&format!("d {}\n", t.d()));
    let m: Vec<String> = t.dims().m().iter().map(|v| v.to_string()).collect();
    out.push_str(&format!("m {}\n", m.join(" ")));
    for (index, mass) in t.entries() {
        for level in index.levels() {
            out.push_str(&format!("{level} "));
        }
        out.push_str(&format_ratio(mass));
        out.push('\n');
    }
    out
}

/// Structural parse: header plus entries, duplicate keys rejected, masses
/// must be positive. The total-mass condition is *not* enforced here.
pub fn parse_tmx_raw(text: &str) -> Result<TransformationMatrix> {
    let mut lines = numbered_lines(text);

    let (no, version) = expect_keyword(lines.next(), "tmx")?;
    let version = parse_usize(no, version, "version")?;
    if version != TMX_VERSION as usize {
        return Err(Error::parse(no, format!("unsupported tmx version {version}")));
    }
    let (no, d_text) = expect_keyword(lines.next(), "d")?;
    let d = parse_usize(no, d_text, "dimension")?;
    let (no, m_text) = expect_keyword(lines.next(), "m")?;
    let m = parse_usize_list(no, m_text, "level count")?;
    if m.len() != d {
        return Err(Error::parse(
            no,
            format!("`m` lists {} level counts for dimension {d}", m.len()),
        ));
    }
    let dims = Dims::new(m).map_err(|e| Error::parse(no, e.to_string()))?;

    let mut entries = Vec::new();
    let mut previous: Option<MultiIndex> = None;
    for (no, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != d + 1 {
            return Err(Error::parse(
                no,
                format!("entry needs {d} indices and a mass, found {} tokens", tokens.len()),
            ));
        }
        let mut levels = Vec::with_capacity(d);
        for tok in &tokens[..d] {
            levels.push(parse_usize(no, tok, "index")?);
        }
        let index = MultiIndex::new(levels);
        let mass = parse_ratio(tokens[d])
            .ok_or_else(|| Error::parse(no, format!("bad rational `{}`", tokens[d])))?;
        if let Some(prev) = &previous {
            if *prev >= index {
                return Err(Error::parse(
                    no,
                    format!("entries out of order or duplicated at {index}"),
                ));
            }
        }
        previous = Some(index.clone());
        entries.push((index, mass));
    }
    TransformationMatrix::new(dims, entries).map_err(|e| match e {
        Error::Parse { .. } => e,
        other => Error::parse(0, other.to_string()),
    })
}

/// Strict parse: additionally requires total mass exactly one.
pub fn parse_tmx(text: &str) -> Result<TransformationMatrix> {
    let t = parse_tmx_raw(text)?;
    let total = t.total_mass();
    if !total.is_one() {
        return Err(Error::parse(0, format!("total mass {total} is not 1")));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{example_5_1, sierpinski_tau};

    #[test]
    fn canonical_bytes_for_the_tetra_matrix() {
        let t = sierpinski_tau(3, 2).unwrap();
        let text = write_tmx(&t);
        assert_eq!(
            text,
            "tmx 1\nd 3\nm 2 2 2\n1 1 1 1/4\n1 2 2 1/4\n2 1 2 1/4\n2 2 1 1/4\n"
        );
    }

    #[test]
    fn round_trips_are_identities() {
        for t in [sierpinski_tau(3, 3).unwrap(), example_5_1().unwrap()] {
            let text = write_tmx(&t);
            let back = parse_tmx(&text).unwrap();
            assert_eq!(back, t);
            assert_eq!(write_tmx(&back), text);
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad_version = "tmx 2\nd 3\nm 2 2 2\n";
        match parse_tmx(bad_version).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
        let bad_entry = "tmx 1\nd 3\nm 2 2 2\n1 1 1 1/4\n1 2 2 nope\n";
        match parse_tmx(bad_entry).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicates_and_disorder_are_rejected() {
        let dup = "tmx 1\nd 3\nm 2 2 2\n1 1 1 1/2\n1 1 1 1/2\n";
        assert!(parse_tmx(dup).is_err());
        let disorder = "tmx 1\nd 3\nm 2 2 2\n2 1 1 1/2\n1 1 1 1/2\n";
        assert!(parse_tmx(disorder).is_err());
    }

    #[test]
    fn strict_parser_rejects_wrong_mass() {
        let short = "tmx 1\nd 3\nm 2 2 2\n1 1 1 1/2\n";
        assert!(parse_tmx_raw(short).is_ok());
        match parse_tmx(short).unwrap_err() {
            Error::Parse { message, .. } => assert!(message.contains("total mass")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_mass_lines_are_rejected() {
        let zero = "tmx 1\nd 3\nm 2 2 2\n1 1 1 0/1\n";
        assert!(parse_tmx_raw(zero).is_err());
    }
}

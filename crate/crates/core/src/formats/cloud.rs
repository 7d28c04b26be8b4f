//! Sample-cloud CSV: a comment line with the generator metadata, a header
//! row, then one float row per point. Floats use the shortest
//! round-tripping decimal representation.
//!
//! ```text
//! # seed=7 algo=chacha8 burn_in=64
//! x1,x2,x3
//! 0.5,0.25,0.125
//! ```

use crate::chaos::SampleCloud;
use crate::error::{Error, Result};

pub fn write_cloud_csv(cloud: &SampleCloud) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# seed={} algo={} burn_in={}\n",
        cloud.seed(),
        cloud.algo(),
        cloud.burn_in()
    ));
    let header: Vec<String> = (1..=cloud.d()).map(|j| format!("x{j}")).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for point in cloud.iter_points() {
        let row: Vec<String> = point.iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_cloud_csv(text: &str) -> Result<SampleCloud> {
    let mut seed = 0u64;
    let mut algo = String::from("unknown");
    let mut burn_in = 0usize;
    let mut d = None;
    let mut points = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let no = no + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            for field in comment.split_whitespace() {
                if let Some((key, value)) = field.split_once('=') {
                    match key {
                        "seed" => {
                            seed = value
                                .parse()
                                .map_err(|_| Error::parse(no, format!("bad seed `{value}`")))?
                        }
                        "algo" => algo = value.to_string(),
                        "burn_in" => {
                            burn_in = value
                                .parse()
                                .map_err(|_| Error::parse(no, format!("bad burn_in `{value}`")))?
                        }
                        _ => {}
                    }
                }
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if d.is_none() && fields.iter().all(|f| f.starts_with('x')) {
            d = Some(fields.len());
            continue;
        }
        let expected = d.ok_or_else(|| Error::parse(no, "missing header row"))?;
        if fields.len() != expected {
            return Err(Error::parse(
                no,
                format!("row has {} fields, header has {expected}", fields.len()),
            ));
        }
        for field in fields {
            let value: f64 = field
                .parse()
                .map_err(|_| Error::parse(no, format!("bad float `{field}`")))?;
            points.push(value);
        }
    }
    let d = d.ok_or_else(|| Error::parse(0, "missing header row"))?;
    SampleCloud::new(d, points, seed, burn_in, algo)
        .map_err(|e| Error::parse(0, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::{chaos_game, DEFAULT_BURN_IN};
    use crate::constructions::sierpinski_tau;

    #[test]
    fn round_trip_preserves_every_sample() {
        let t = sierpinski_tau(3, 2).unwrap();
        let cloud = chaos_game(&t, 50, 9, DEFAULT_BURN_IN).unwrap();
        let text = write_cloud_csv(&cloud);
        let back = parse_cloud_csv(&text).unwrap();
        assert_eq!(back.d(), 3);
        assert_eq!(back.len(), 50);
        assert_eq!(back.seed(), 9);
        assert_eq!(back.algo(), "chacha8");
        assert_eq!(back.burn_in(), DEFAULT_BURN_IN);
        for (a, b) in cloud.iter_points().zip(back.iter_points()) {
            assert_eq!(a, b, "floats must round-trip exactly");
        }
    }

    #[test]
    fn ragged_rows_are_rejected_with_line_numbers() {
        let text = "# seed=1 algo=x burn_in=0\nx1,x2\n0.5,0.5\n0.5\n";
        match parse_cloud_csv(text).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
    }
}

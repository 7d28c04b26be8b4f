//! Line-oriented diagnostic dump of an induced function system, rational
//! valued:
//!
//! ```text
//! ifsp 1
//! d 3
//! maps 4
//! map 1 1 1 prob 1/4 offset 0/1 0/1 0/1 scale 1/2 1/2 1/2
//! ```

use crate::ifsp::Ifsp;
use crate::rational::format_ratio;

pub fn write_ifsp_dump(system: &Ifsp) -> String {
    let mut out = String::new();
    out.push_str("ifsp 1\n");
    out.push_str(&format!("d {}\n", system.d()));
    out.push_str(&format!("maps {}\n", system.len()));
    for m in system.maps() {
        out.push_str("map");
        for level in m.index.levels() {
            out.push_str(&format!(" {level}"));
        }
        out.push_str(&format!(" prob {}", format_ratio(&m.prob)));
        out.push_str(" offset");
        for v in m.map.offset() {
            out.push_str(&format!(" {}", format_ratio(v)));
        }
        out.push_str(" scale");
        for v in m.map.scale() {
            out.push_str(&format!(" {}", format_ratio(v)));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::sierpinski_tau;
    use crate::ifsp::build_ifsp;

    #[test]
    fn dump_lists_every_map_with_its_data() {
        let system = build_ifsp(&sierpinski_tau(3, 2).unwrap()).unwrap();
        let text = write_ifsp_dump(&system);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "ifsp 1");
        assert_eq!(lines[2], "maps 4");
        assert_eq!(
            lines[3],
            "map 1 1 1 prob 1/4 offset 0/1 0/1 0/1 scale 1/2 1/2 1/2"
        );
        assert_eq!(lines.len(), 3 + 4);
    }
}

//! Two-column text dumps of radial fields.
//!
//! ```text
//! # r value
//! # decay Z 2
//! 0.00000000000000000e0 1.00000000000000000e0
//! ```
//! The `# decay` line is optional; other `#` lines and blank lines are skipped.

use std::io::{BufRead, Write};

use super::field::RadialField;
use super::grid::RadialGrid;
use crate::barriers::{BarrierProfile, Family};
use crate::error::{Error, Result};

pub const DUMP_HEADER: &str = "# r value";

pub fn write_dump<W: Write>(field: &RadialField, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{DUMP_HEADER}")?;
    if let Some(tag) = field.decay_tag() {
        let family = match tag.family {
            Family::W => "W",
            Family::Z => "Z",
        };
        writeln!(out, "# decay {family} {:e}", tag.rate)?;
    }
    for (r, v) in field.nodes().iter().zip(field.values()) {
        writeln!(out, "{r:.17e} {v:.17e}")?;
    }
    Ok(())
}

pub fn dump_to_string(field: &RadialField) -> String {
    let mut buf = Vec::new();
    write_dump(field, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("dump is ASCII")
}

pub fn read_dump<R: BufRead>(input: R) -> Result<RadialField> {
    let mut nodes = Vec::new();
    let mut values = Vec::new();
    let mut tag = None;
    let mut last_line = 0;
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            detail: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            let mut words = comment.split_whitespace();
            if words.next() == Some("decay") {
                tag = Some(parse_tag(words.collect(), line_no)?);
            }
            continue;
        }
        let cols: Vec<&str> = trimmed.split_whitespace().collect();
        if cols.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                detail: format!("expected 2 columns, found {}", cols.len()),
            });
        }
        let parse = |s: &str| -> Result<f64> {
            let x: f64 = s.parse().map_err(|_| Error::Parse {
                line: line_no,
                detail: format!("not a number: {s:?}"),
            })?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(Error::Parse {
                    line: line_no,
                    detail: format!("non-finite value: {s:?}"),
                })
            }
        };
        let r = parse(cols[0])?;
        let v = parse(cols[1])?;
        if let Some(&prev) = nodes.last() {
            if r <= prev {
                return Err(Error::Parse {
                    line: line_no,
                    detail: format!("radius {r} does not increase"),
                });
            }
        }
        nodes.push(r);
        values.push(v);
    }
    let grid = RadialGrid::from_nodes(nodes).map_err(|e| Error::Parse {
        line: last_line,
        detail: e.to_string(),
    })?;
    Ok(RadialField::new(grid, values)?.with_decay_tag(tag))
}

fn parse_tag(words: Vec<&str>, line: usize) -> Result<BarrierProfile> {
    let bad = |detail: String| Error::Parse { line, detail };
    if words.len() != 2 {
        return Err(bad("decay line needs a family and a rate".into()));
    }
    let family = match words[0] {
        "W" | "w" => Family::W,
        "Z" | "z" => Family::Z,
        other => return Err(bad(format!("unknown decay family {other:?}"))),
    };
    let rate: f64 = words[1]
        .parse()
        .map_err(|_| bad(format!("bad decay rate {:?}", words[1])))?;
    BarrierProfile::new(family, rate).map_err(|e| bad(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let g = RadialGrid::graded(20.0, 40, 1.05).unwrap();
        let tag = BarrierProfile::new(Family::W, 1.5).unwrap();
        let f = RadialField::from_fn(&g, |r| (-r).exp() / 3.0)
            .unwrap()
            .with_decay_tag(Some(tag));
        let text = dump_to_string(&f);
        assert!(text.starts_with("# r value\n"));
        let back = read_dump(text.as_bytes()).unwrap();
        assert_eq!(back.values(), f.values());
        assert_eq!(back.nodes(), f.nodes());
        assert_eq!(back.decay_tag(), Some(tag));
    }

    #[test]
    fn reports_line_of_corruption() {
        let g = RadialGrid::uniform(1.0, 16).unwrap();
        let f = RadialField::zeros(&g);
        let mut lines: Vec<String> = dump_to_string(&f).lines().map(String::from).collect();
        lines[5] = "0.3 oops".into();
        let err = read_dump(lines.join("\n").as_bytes()).unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 6,
                detail: "not a number: \"oops\"".into()
            }
        );
        lines[5] = "0.3".into();
        assert!(matches!(
            read_dump(lines.join("\n").as_bytes()),
            Err(Error::Parse { line: 6, .. })
        ));
    }
}

//! Plain-text design and labeling files.
//!
//! A design file starts with a header line `v t k b`, followed by `b` lines of
//! `k` space-separated points. Lines starting with `#` are comments. Writers
//! always emit the canonical form: ascending points, lexicographic blocks.
//!
//! A labeling file is one line of `v` ranks; position `p` holds the rank of
//! point `p`.

use std::fmt::Write as _;

use crate::design::{Design, Labeling};
use crate::error::{Error, Result};

/// Comment prefix that [`construction_tag`] recognises.
pub const CONSTRUCTION_TAG: &str = "# construction:";

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_numbers(line: usize, s: &str) -> Result<Vec<u32>> {
    s.split_whitespace()
        .map(|tok| {
            tok.parse::<u32>().map_err(|e| Error::Parse {
                line,
                message: format!("{tok:?}: {e}"),
            })
        })
        .collect()
}

pub fn read_design(text: &str) -> Result<Design> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header \"v t k b\"".into(),
    })?;
    let h = parse_numbers(hline, header)?;
    let [v, t, k, b] = h[..] else {
        return Err(Error::Parse {
            line: hline,
            message: format!("header needs 4 fields \"v t k b\", found {}", h.len()),
        });
    };
    let mut blocks = Vec::with_capacity(b as usize);
    let mut last_line = hline;
    for (line, s) in lines {
        last_line = line;
        if blocks.len() == b as usize {
            return Err(Error::Parse {
                line,
                message: format!("header declares {b} blocks but more lines follow"),
            });
        }
        let block = parse_numbers(line, s)?;
        if block.len() != k as usize {
            return Err(Error::Parse {
                line,
                message: format!("expected {k} points, found {}", block.len()),
            });
        }
        blocks.push(block);
    }
    if blocks.len() != b as usize {
        return Err(Error::Parse {
            line: last_line,
            message: format!("header declares {b} blocks, found {}", blocks.len()),
        });
    }
    Design::new(v, t, k, blocks)
}

pub fn write_design(design: &Design) -> String {
    let mut out = format!(
        "{} {} {} {}\n",
        design.v(),
        design.t(),
        design.k(),
        design.block_count()
    );
    for block in design.blocks() {
        let line: Vec<String> = block.iter().map(u32::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Canonical file with a leading `# construction: <tag>` comment.
pub fn write_design_tagged(design: &Design, tag: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{CONSTRUCTION_TAG} {tag}");
    out.push_str(&write_design(design));
    out
}

/// The `# construction:` comment of a design file, if present.
pub fn construction_tag(text: &str) -> Option<&str> {
    text.lines()
        .map(str::trim)
        .find_map(|l| l.strip_prefix(CONSTRUCTION_TAG))
        .map(str::trim)
}

pub fn read_labeling(text: &str) -> Result<Labeling> {
    let mut lines = content_lines(text);
    let (line, s) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty labeling file".into(),
    })?;
    if let Some((extra, _)) = lines.next() {
        return Err(Error::Parse {
            line: extra,
            message: "labeling file must hold a single line of ranks".into(),
        });
    }
    Labeling::new(parse_numbers(line, s)?)
}

pub fn write_labeling(labeling: &Labeling) -> String {
    let ranks: Vec<String> = labeling.ranks().iter().map(u32::to_string).collect();
    format!("{}\n", ranks.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FANO: &str = "\
# the Fano plane
7 2 3 7
0 1 6
0 2 4
0 3 5
1 2 3
1 4 5
2 5 6
3 4 6
";

    #[test]
    fn reads_fano() {
        let d = read_design(FANO).unwrap();
        assert_eq!((d.v(), d.t(), d.k(), d.block_count()), (7, 2, 3, 7));
        assert!(crate::design::validate(&d).is_steiner);
        assert_eq!(write_design(&d), FANO.lines().skip(1).map(|l| format!("{l}\n")).collect::<String>());
    }

    #[test]
    fn canonicalizes_unsorted_input() {
        let d = read_design("5 2 3 2\n4 3 2\n\n2 0 1\n").unwrap();
        assert_eq!(write_design(&d), "5 2 3 2\n0 1 2\n2 3 4\n");
    }

    #[test]
    fn count_mismatch_is_a_parse_error() {
        let text = FANO.replace("7 2 3 7", "7 2 3 8");
        match read_design(&text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 9);
                assert!(message.contains("declares 8"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let text = FANO.replace("7 2 3 7", "7 2 3 6");
        assert!(matches!(read_design(&text), Err(Error::Parse { line: 9, .. })));
    }

    #[test]
    fn bad_tokens_report_their_line() {
        match read_design("4 2 3 1\n0 x 2\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(read_design("4 2 3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(read_design("4 2 3 1\n0 1\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn construction_tag_round_trip() {
        let d = read_design(FANO).unwrap();
        let text = write_design_tagged(&d, "catalog:STS7");
        assert_eq!(construction_tag(&text), Some("catalog:STS7"));
        assert_eq!(read_design(&text).unwrap(), d);
        assert_eq!(construction_tag(FANO), None);
    }

    #[test]
    fn labeling_files() {
        let l = read_labeling("# ranks\n2 0 1\n").unwrap();
        assert_eq!(l.ranks(), &[2, 0, 1]);
        assert_eq!(write_labeling(&l), "2 0 1\n");
        assert!(read_labeling("0 1\n1 0\n").is_err());
        assert!(read_labeling("0 0\n").is_err());
    }
}

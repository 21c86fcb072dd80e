use crate::design::{Design, Labeling};
use crate::error::{Error, Result};

pub const CATALOG_NAMES: [&str; 3] = ["STS7", "STS9", "S348"];

fn parse(v: u32, t: u32, k: u32, rows: &str) -> Result<Design> {
    let blocks = rows
        .split_whitespace()
        .map(|w| w.bytes().map(|c| (c - b'0') as u32).collect())
        .collect();
    Design::new(v, t, k, blocks)
}

/// Fixed small systems with the identity labeling. Names are matched
/// case-insensitively.
pub fn catalog(name: &str) -> Result<(Design, Labeling)> {
    let design = match name.to_ascii_uppercase().as_str() {
        "STS7" => parse(7, 2, 3, "016 024 035 123 145 256 346")?,
        "STS9" => parse(
            9,
            2,
            3,
            "018 027 036 045 126 135 147 234 258 378 468 567",
        )?,
        "S348" => parse(
            8,
            3,
            4,
            "0127 0136 0145 0235 0246 0347 0567 1234 1256 1357 1467 2367 2457 3456",
        )?,
        _ => return Err(Error::UnknownCatalog(name.to_string())),
    };
    let v = design.v();
    Ok((design, Labeling::identity(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::validate;
    use crate::metrics::metric_report;

    #[test]
    fn catalog_metrics() {
        for (name, expect) in [("STS7", (6, 13)), ("STS9", (9, 18)), ("S348", (10, 18))] {
            let (d, l) = catalog(name).unwrap();
            assert!(validate(&d).is_steiner, "{name}");
            let r = metric_report(&d, &l).unwrap();
            assert_eq!((r.min_sum, r.max_sum), expect, "{name}");
        }
    }

    #[test]
    fn names() {
        assert!(catalog("sts7").is_ok());
        assert_eq!(
            catalog("STS13").unwrap_err(),
            Error::UnknownCatalog("STS13".into())
        );
    }
}

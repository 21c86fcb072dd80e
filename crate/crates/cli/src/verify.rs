use serde::Serialize;
use steiner_core::design::binomial;
use steiner_core::metrics::sts_admissible;
use steiner_core::search::ValidBounds;
use steiner_core::{metric_report, validate, Design, Labeling, MetricReport, Result};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub checks: Vec<Check>,
    pub metrics: Option<MetricReport>,
}

fn check(out: &mut Vec<Check>, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
    out.push(Check {
        name: name.into(),
        pass,
        detail: detail.into(),
    });
}

/// Parsed `# construction:` tag, e.g. `sw-general v=19` or
/// `sum-class t=2 v=11 sigma=-3`.
struct Tag<'a> {
    name: &'a str,
    fields: Vec<(&'a str, i64)>,
}

impl<'a> Tag<'a> {
    fn parse(s: &'a str) -> Self {
        let mut it = s.split_whitespace();
        let name = it.next().unwrap_or("");
        let fields = it
            .filter_map(|f| {
                let (k, v) = f.split_once('=')?;
                Some((k, v.parse().ok()?))
            })
            .collect();
        Tag { name, fields }
    }

    fn get(&self, key: &str) -> Option<i64> {
        self.fields.iter().find(|(k, _)| *k == key).map(|&(_, v)| v)
    }
}

/// Claims a construction makes about its own identity labeling.
fn construction_checks(out: &mut Vec<Check>, tag: &Tag, design: &Design, r: &MetricReport) {
    let v = design.v() as i64;
    let ge = |out: &mut Vec<Check>, name: &str, got: i64, bound: i64| {
        check(out, name, got >= bound, format!("{got} ≥ {bound}"))
    };
    let le = |out: &mut Vec<Check>, name: &str, got: i64, bound: i64| {
        check(out, name, got <= bound, format!("{got} ≤ {bound}"))
    };
    match tag.name {
        "sw-special" => {
            ge(out, "MinSum ≥ v−2", r.min_sum, v - 2);
            le(out, "MaxSum ≤ 2v+2", r.max_sum, 2 * v + 2);
        }
        "sw-general" => {
            ge(out, "MinSum ≥ v−5", r.min_sum, v - 5);
            le(out, "MaxSum ≤ 2v+2", r.max_sum, 2 * v + 2);
            le(out, "DiffSum ≤ v+7", r.diff_sum, v + 7);
        }
        "fourpack" => {
            check(out, "MinSum = v+2", r.min_sum == v + 2, format!("{}", r.min_sum));
            check(out, "MaxSum = 3v−6", r.max_sum == 3 * v - 6, format!("{}", r.max_sum));
        }
        "sum-class" => {
            if let (Some(t), Some(sigma)) = (tag.get("t"), tag.get("sigma")) {
                check(out, "MinSum = v+σ", r.min_sum == v + sigma, format!("{}", r.min_sum));
                check(out, "MaxSum = tv+σ", r.max_sum == t * v + sigma, format!("{}", r.max_sum));
                check(out, "DiffSum = (t−1)v", r.diff_sum == (t - 1) * v, format!("{}", r.diff_sum));
            }
        }
        _ => {}
    }
}

/// Every check that applies to `design` under `labeling`. Construction
/// claims are only checked against the identity labeling.
pub fn verify(design: &Design, labeling: &Labeling, tag: Option<&str>) -> Result<VerifyReport> {
    labeling.check_for(design)?;
    let mut checks = Vec::new();
    let status = validate(design);
    let detail = match &status.conflict {
        Some(c) => format!("subset {:?} lies in blocks #{} and #{}", c.subset, c.blocks[0], c.blocks[1]),
        None => format!("{} blocks", status.block_count),
    };
    check(&mut checks, "packing", status.is_packing, detail);
    let (v, t, k) = (design.v(), design.t(), design.k());
    if t == 2 && k == 3 && sts_admissible(v) {
        check(
            &mut checks,
            "valid STS",
            status.is_steiner,
            format!("{} uncovered pairs", status.uncovered_t_subsets),
        );
    }
    if status.is_steiner {
        let r = binomial(v as u64 - 1, t as u64 - 1) / binomial(k as u64 - 1, t as u64 - 1);
        let ok = status.replication.iter().all(|&x| x == r);
        check(&mut checks, "replication", ok, format!("every point in {r} blocks"));
    }
    if design.is_empty() || !status.is_packing {
        let pass = checks.iter().all(|c| c.pass);
        return Ok(VerifyReport { pass, checks, metrics: None });
    }

    let report = metric_report(design, labeling)?;
    let rev = metric_report(design, &labeling.reverse())?;
    let kv = k as i64 * (v as i64 - 1);
    check(
        &mut checks,
        "reversal identity",
        report.max_sum == kv - rev.min_sum,
        format!("MaxSum {} = {kv} − {}", report.max_sum, rev.min_sum),
    );

    let b = ValidBounds::of(design);
    if let Some(a) = b.alpha {
        let bound = k as i64 * a as i64 - binomial(k as u64, 2) as i64;
        check(
            &mut checks,
            "MinSum ≤ kα − C(k,2)",
            report.min_sum <= bound,
            format!("{} ≤ {bound} (α = {a})", report.min_sum),
        );
    }
    if let Some(u) = b.minsum_upper {
        check(&mut checks, "MinSum upper bound", report.min_sum <= u, format!("{} ≤ {u}", report.min_sum));
    }
    if let Some(l) = b.maxsum_lower {
        check(&mut checks, "MaxSum lower bound", report.max_sum >= l, format!("{} ≥ {l}", report.max_sum));
    }
    check(
        &mut checks,
        "DiffSum lower bound",
        report.diff_sum >= b.diffsum_lower,
        format!("{} ≥ {}", report.diff_sum, b.diffsum_lower),
    );
    if let (Some(l), Some(r)) = (b.ratiosum_lower, report.ratio_sum) {
        check(&mut checks, "RatioSum lower bound", r >= l, format!("{r} ≥ {l}"));
    }
    if let Some(tag) = tag {
        if *labeling == Labeling::identity(v) {
            construction_checks(&mut checks, &Tag::parse(tag), design, &report);
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        pass,
        checks,
        metrics: Some(report),
    })
}

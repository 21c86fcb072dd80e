use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use steiner_core::constructions::{
    bose, catalog, fourpack, skolem, sum_class_packing, sw_complete_general, sw_complete_special,
    SumClassParams,
};
use steiner_core::independence::{
    greedy_independent_set, indep_bounds, independent_pair, labeling_from_pair, max_independent_set,
};
use steiner_core::io::{construction_tag, read_design, read_labeling, write_design_tagged, write_labeling};
use steiner_core::metrics::basic_bounds;
use steiner_core::search::{
    anneal_labeling, bb_labeling, exhaustive_labeling, table_rows, table_search_outcome, AnnealConfig,
    BbConfig, Objective, SearchResult, TableStatus, EXHAUSTIVE_CAP,
};
use steiner_core::storage::{frc_rate, recovery_uniformity, AccessProfile, ProfileFile, RecoveryReport};
use steiner_core::{metric_report, validate, Design, Labeling, LoadReport};

use crate::manifest::Recorder;
use crate::verify::verify;
use crate::{
    CliError, Command, ConstructArgs, IndependenceArgs, LabelArgs, Outcome, SimulateArgs, TableArgs,
};

type Res<T> = Result<T, CliError>;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    manifest: &'a crate::manifest::RunManifest,
    result: T,
}

fn emit<T: Serialize>(rec: Recorder, result: T) -> Res<()> {
    let manifest = rec.finish();
    let json = serde_json::to_string_pretty(&Envelope {
        manifest: &manifest,
        result,
    })
    .map_err(|e| CliError::new("serialize", e.to_string()))?;
    println!("{json}");
    Ok(())
}

fn read_file(rec: &mut Recorder, path: &Path) -> Res<String> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))?;
    rec.input(path, text.as_bytes());
    Ok(text)
}

fn write_file(rec: &mut Recorder, path: &Path, text: &str) -> Res<()> {
    fs::write(path, text).map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))?;
    rec.output(path, text.as_bytes());
    Ok(())
}

fn load_design(rec: &mut Recorder, path: &Path) -> Res<(Design, Option<String>)> {
    let text = read_file(rec, path)?;
    let design = read_design(&text)?;
    Ok((design, construction_tag(&text).map(str::to_string)))
}

fn load_labeling(rec: &mut Recorder, path: Option<&Path>, design: &Design) -> Res<Labeling> {
    let Some(path) = path else {
        return Ok(Labeling::identity(design.v()));
    };
    let labeling = read_labeling(&read_file(rec, path)?)?;
    labeling.check_for(design)?;
    Ok(labeling)
}

pub fn run(command: Command, args: Vec<String>) -> Res<Outcome> {
    let mut rec = Recorder::new(args);
    match command {
        Command::Construct(a) => construct(rec, a),
        Command::Metrics { design, labeling } => {
            let (d, _) = load_design(&mut rec, &design)?;
            let l = load_labeling(&mut rec, labeling.as_deref(), &d)?;
            emit(rec, metric_report(&d, &l)?)?;
            Ok(Outcome::Pass)
        }
        Command::Bounds { t, k, v } => {
            emit(rec, basic_bounds(t, k, v)?)?;
            Ok(Outcome::Pass)
        }
        Command::Independence(a) => {
            rec.seed(a.seed);
            independence(rec, a)
        }
        Command::Label(a) => label(rec, a),
        Command::Table(a) => table(rec, a),
        Command::Simulate(a) => simulate(rec, a),
        Command::Verify { design, labeling } => {
            let (d, tag) = load_design(&mut rec, &design)?;
            let l = load_labeling(&mut rec, labeling.as_deref(), &d)?;
            let report = verify(&d, &l, tag.as_deref())?;
            let pass = report.pass;
            emit(rec, report)?;
            Ok(if pass { Outcome::Pass } else { Outcome::Fail })
        }
    }
}

#[derive(Serialize)]
struct ConstructSummary {
    construction: String,
    v: u32,
    t: u32,
    k: u32,
    b: usize,
    is_packing: bool,
    is_steiner: bool,
}

fn need_v(a: &ConstructArgs) -> Res<u32> {
    a.v.ok_or_else(|| CliError::new("usage", format!("construction {} needs an order v", a.name)))
}

fn construct(mut rec: Recorder, a: ConstructArgs) -> Res<Outcome> {
    let (design, labeling, tag) = if let Some(name) = a.name.strip_prefix("catalog:") {
        let (d, l) = catalog(name)?;
        (d, l, format!("catalog name={}", name.to_ascii_uppercase()))
    } else {
        let v = need_v(&a)?;
        match a.name.as_str() {
            "sum-class" => {
                let (params, tag) = match (a.sigma, a.class) {
                    (_, Some(c)) => (SumClassParams::raw(a.t, v, c), format!("sum-class t={} v={v} class={c}", a.t)),
                    (s, None) => {
                        let s = s.unwrap_or(0);
                        (SumClassParams::signed(a.t, v, s), format!("sum-class t={} v={v} sigma={s}", a.t))
                    }
                };
                (sum_class_packing(&params)?, Labeling::identity(v), tag)
            }
            "fourpack" => (fourpack(v)?, Labeling::identity(v), format!("fourpack v={v}")),
            "sw-special" => {
                let (d, l) = sw_complete_special(v)?;
                (d, l, format!("sw-special v={v}"))
            }
            "sw-general" => {
                let (d, l) = sw_complete_general(v)?;
                (d, l, format!("sw-general v={v}"))
            }
            "bose" => (bose(v)?, Labeling::identity(v), format!("bose v={v}")),
            "skolem" => (skolem(v)?, Labeling::identity(v), format!("skolem v={v}")),
            other => {
                return Err(CliError::new(
                    "usage",
                    format!(
                        "unknown construction {other:?}; expected sum-class, fourpack, sw-special, sw-general, bose, skolem or catalog:<name>"
                    ),
                ))
            }
        }
    };
    let text = write_design_tagged(&design, &tag);
    if let Some(path) = &a.labeling_out {
        write_file(&mut rec, path, &write_labeling(&labeling))?;
    }
    let Some(out) = &a.out else {
        print!("{text}");
        return Ok(Outcome::Pass);
    };
    write_file(&mut rec, out, &text)?;
    let status = validate(&design);
    emit(
        rec,
        ConstructSummary {
            construction: tag,
            v: design.v(),
            t: design.t(),
            k: design.k(),
            b: design.block_count(),
            is_packing: status.is_packing,
            is_steiner: status.is_steiner,
        },
    )?;
    Ok(Outcome::Pass)
}

fn independence(mut rec: Recorder, a: IndependenceArgs) -> Res<Outcome> {
    let (d, _) = load_design(&mut rec, &a.design)?;
    #[derive(Serialize)]
    #[serde(tag = "mode", rename_all = "lowercase")]
    enum Witness {
        Exact {
            alpha: u32,
            set: Vec<u32>,
            bounds: steiner_core::independence::IndepBounds,
        },
        Greedy {
            size: usize,
            set: Vec<u32>,
        },
        Pair {
            pair: steiner_core::IndependentPair,
            #[serde(skip_serializing_if = "Option::is_none")]
            bounds: Option<steiner_core::independence::IndepBounds>,
        },
    }
    let w = if a.mode.greedy {
        let set = greedy_independent_set(&d, a.seed);
        Witness::Greedy { size: set.len(), set }
    } else if a.mode.pair {
        let pair = independent_pair(&d);
        let bounds = max_independent_set(&d)
            .ok()
            .map(|s| indep_bounds(&d, s.len() as u32, Some(&pair)));
        Witness::Pair { pair, bounds }
    } else {
        let set = max_independent_set(&d)?;
        let alpha = set.len() as u32;
        Witness::Exact {
            alpha,
            bounds: indep_bounds(&d, alpha, None),
            set,
        }
    };
    emit(rec, w)?;
    Ok(Outcome::Pass)
}

fn label(mut rec: Recorder, a: LabelArgs) -> Res<Outcome> {
    let (d, _) = load_design(&mut rec, &a.design)?;
    let objective: Objective = a.objective.parse()?;
    let result = if a.from_pair {
        let pair = independent_pair(&d);
        let l = labeling_from_pair(&d, &pair)?;
        SearchResult::new(&d, l, objective, "from-pair")?
    } else if a.exact {
        if d.v() <= EXHAUSTIVE_CAP {
            exhaustive_labeling(&d, objective)?
        } else {
            let mut c = BbConfig::default();
            if let Some(n) = a.node_budget {
                c.node_budget = n;
            }
            bb_labeling(&d, objective, &c)?
        }
    } else {
        rec.seed(a.seed);
        anneal_labeling(&d, objective, &AnnealConfig::new(a.seed, a.budget))?
    };
    if let Some(path) = &a.out {
        write_file(&mut rec, path, &write_labeling(&result.labeling))?;
    }
    emit(rec, result)?;
    Ok(Outcome::Pass)
}

fn parse_range(s: &str) -> Res<(u32, u32)> {
    let bad = || CliError::new("usage", format!("--v-range must look like a..b, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let lo = a.trim().parse().map_err(|_| bad())?;
    let hi = b.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn table(mut rec: Recorder, a: TableArgs) -> Res<Outcome> {
    let (lo, hi) = parse_range(&a.v_range)?;
    rec.seed(a.seed);
    let mut outcomes = Vec::new();
    for row in table_rows().into_iter().filter(|r| (lo..=hi).contains(&r.v)) {
        outcomes.push(table_search_outcome(row.v, row.target_min, row.target_max, a.seed, a.budget)?);
    }
    if a.json {
        emit(rec, &outcomes)?;
        return Ok(Outcome::Pass);
    }
    let mut csv = String::from("v,target_min,target_max,status,min_sum,max_sum,steps,restarts,seed\n");
    for o in &outcomes {
        let status = match o.status {
            TableStatus::Hit => "hit",
            TableStatus::Miss => "miss",
            TableStatus::Timeout => "timeout",
        };
        let (mn, mx) = o
            .found
            .as_ref()
            .map(|(_, r)| (r.report.min_sum.to_string(), r.report.max_sum.to_string()))
            .unwrap_or_default();
        let _ = writeln!(
            csv,
            "{},{},{},{status},{mn},{mx},{},{},{}",
            o.row.v, o.row.target_min, o.row.target_max, o.steps, o.restarts, o.seed
        );
    }
    print!("{csv}");
    Ok(Outcome::Pass)
}

fn simulate(mut rec: Recorder, a: SimulateArgs) -> Res<Outcome> {
    let (d, _) = load_design(&mut rec, &a.design)?;
    let l = load_labeling(&mut rec, Some(&a.labeling), &d)?;
    let profile = match AccessProfile::from_spec(&a.profile, d.v()) {
        Ok(p) => p,
        Err(_) if Path::new(&a.profile).is_file() => {
            let text = read_file(&mut rec, Path::new(&a.profile))?;
            let file: ProfileFile = serde_json::from_str(&text)
                .map_err(|e| CliError::new("profile", format!("{}: {e}", a.profile)))?;
            AccessProfile::from_file_form(&file, d.v())?
        }
        Err(e) => return Err(e.into()),
    };
    let load = steiner_core::storage::access_load(&d, &l, &profile)?;
    if a.csv {
        print!("{}", load.to_csv());
        return Ok(Outcome::Pass);
    }
    #[derive(Serialize)]
    struct Simulation {
        profile: steiner_core::storage::ProfileKind,
        load: LoadReport,
        #[serde(skip_serializing_if = "Option::is_none")]
        frc_rate: Option<u32>,
        recovery: RecoveryReport,
    }
    let frc = a.frc_rate.map(|k| frc_rate(&d, k)).transpose()?;
    emit(
        rec,
        Simulation {
            profile: profile.kind,
            load,
            frc_rate: frc,
            recovery: recovery_uniformity(&d),
        },
    )?;
    Ok(Outcome::Pass)
}

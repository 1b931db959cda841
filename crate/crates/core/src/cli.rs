//! File formats, pipeline orchestration and the JSON report.
//!
//! Simplicial input: one simplex per line as whitespace-separated vertex
//! ids; `#` starts a comment. Voxel input: a `dims X Y Z` header followed by
//! one `x y z` line per black voxel.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::builders::{
    cubical_chain_complex, cubical_from_voxels, simplicial_chain_complex, simplicial_from_facets, CubicalComplex,
    SimplicialComplex,
};
use crate::chain::Chain;
use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::homology::{compute_integer_homology, HomologyReport};
use crate::oracle::{homology_via_snf, within_cap, OracleHomology, DEFAULT_CELL_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Simplicial,
    Voxel3d,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input_path: PathBuf,
    pub format: InputFormat,
    pub preprocess: bool,
    pub emit_cycles: bool,
    pub cross_check: bool,
    pub oracle_cell_cap: usize,
    /// `None` writes to standard output.
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(input_path: impl Into<PathBuf>, format: InputFormat) -> Self {
        RunConfig {
            input_path: input_path.into(),
            format,
            preprocess: true,
            emit_cycles: false,
            cross_check: false,
            oracle_cell_cap: DEFAULT_CELL_CAP,
            output_path: None,
        }
    }
}

/// Exit status of a successful run.
pub const EXIT_OK: i32 = 0;
/// Input could not be read or parsed.
pub const EXIT_INPUT_ERROR: i32 = 1;
/// Cross-check requested and the oracle disagreed.
pub const EXIT_MISMATCH: i32 = 2;

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub report: Value,
    pub warnings: Vec<String>,
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

pub fn parse_simplicial_str(text: &str) -> Result<SimplicialComplex> {
    let mut facets = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let mut facet = Vec::new();
        for tok in line.split_whitespace() {
            let v: usize = tok.parse().map_err(|_| Error::Parse {
                line: n + 1,
                msg: format!("malformed vertex id {tok:?}"),
            })?;
            facet.push(v);
        }
        let mut sorted = facet.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Parse {
                line: n + 1,
                msg: format!("duplicate vertex {}", w[0]),
            });
        }
        facets.push(facet);
    }
    if facets.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "no simplices in input".into(),
        });
    }
    simplicial_from_facets(&facets)
}

pub fn parse_simplicial(path: &Path) -> Result<SimplicialComplex> {
    parse_simplicial_str(&fs::read_to_string(path)?)
}

pub fn parse_voxel3d_str(text: &str) -> Result<CubicalComplex> {
    let mut dims: Option<(usize, usize, usize)> = None;
    let mut voxels = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let err = |msg: String| Error::Parse { line: n + 1, msg };
        match dims {
            None => {
                if toks.len() != 4 || toks[0] != "dims" {
                    return Err(err("expected header \"dims X Y Z\"".into()));
                }
                let parse = |t: &str| t.parse::<usize>().map_err(|_| err(format!("malformed dimension {t:?}")));
                dims = Some((parse(toks[1])?, parse(toks[2])?, parse(toks[3])?));
            }
            Some(_) => {
                if toks.len() != 3 {
                    return Err(err(format!("expected \"x y z\", found {} tokens", toks.len())));
                }
                let parse = |t: &str| t.parse::<i64>().map_err(|_| err(format!("malformed coordinate {t:?}")));
                voxels.push((parse(toks[0])?, parse(toks[1])?, parse(toks[2])?));
            }
        }
    }
    let dims = dims.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "missing \"dims X Y Z\" header".into(),
    })?;
    cubical_from_voxels(dims, &voxels)
}

pub fn parse_voxel3d(path: &Path) -> Result<CubicalComplex> {
    parse_voxel3d_str(&fs::read_to_string(path)?)
}

/// Reads and builds the chain complex named by `config`.
pub fn load_complex(config: &RunConfig) -> Result<ChainComplex> {
    Ok(match config.format {
        InputFormat::Simplicial => simplicial_chain_complex(&parse_simplicial(&config.input_path)?),
        InputFormat::Voxel3d => cubical_chain_complex(&parse_voxel3d(&config.input_path)?),
    })
}

fn cycle_json(cc: &ChainComplex, c: &Chain) -> Value {
    Value::Array(
        c.iter()
            .map(|(id, v)| json!({ "label": cc.label(id), "coeff": v.to_string() }))
            .collect(),
    )
}

/// Whether the report agrees with the oracle on every `β_q` and `T_(q,p)`.
pub fn matches_oracle(report: &HomologyReport, oracle: &OracleHomology) -> bool {
    if report.betti != oracle.betti {
        return false;
    }
    let counts = oracle.torsion_counts();
    let zero = vec![0; report.betti.len()];
    for (p, expected) in &counts {
        let Some(table) = p.try_into().ok().and_then(|p: u64| report.torsion.get(&p)) else {
            return false;
        };
        if &table.t != expected {
            return false;
        }
    }
    report.torsion.iter().all(|(p, table)| {
        counts.contains_key(&(*p).into()) || table.t == zero
    })
}

/// Serializes a report as the CLI's JSON object.
pub fn report_json(cc: &ChainComplex, report: &HomologyReport, emit_cycles: bool) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("betti".into(), json!(report.betti));
    obj.insert("lambda".into(), json!(report.lambda.to_string()));
    let torsion: Map<String, Value> = report
        .torsion
        .iter()
        .map(|(p, t)| (p.to_string(), json!({ "beta_p": t.beta_p, "T": t.t })))
        .collect();
    obj.insert("torsion".into(), Value::Object(torsion));
    if emit_cycles {
        let z: Vec<Value> = report.cycles_z.iter().map(|c| cycle_json(cc, c)).collect();
        let mod_p: Map<String, Value> = report
            .cycles_mod_p
            .iter()
            .map(|(p, cs)| (p.to_string(), Value::Array(cs.iter().map(|c| cycle_json(cc, c)).collect())))
            .collect();
        obj.insert("cycles".into(), json!({ "Z": z, "mod_p": mod_p }));
    }
    obj.insert("euler".into(), json!(report.euler_characteristic()));
    obj
}

fn oracle_json(oracle: &OracleHomology, matched: bool) -> Value {
    let factors: BTreeMap<String, Vec<String>> = oracle
        .factors
        .iter()
        .enumerate()
        .map(|(q, fs)| (q.to_string(), fs.iter().map(ToString::to_string).collect()))
        .collect();
    json!({
        "match": matched,
        "oracle_betti": oracle.betti,
        "oracle_factors": factors,
    })
}

/// Runs the pipeline on an in-memory complex.
pub fn run_complex(cc: ChainComplex, config: &RunConfig) -> Result<RunOutcome> {
    let cc = Arc::new(cc);
    let report = compute_integer_homology(&cc, config.preprocess)?;
    let mut obj = report_json(&cc, &report, config.emit_cycles);
    let mut warnings = Vec::new();
    let mut exit_code = EXIT_OK;
    if config.cross_check {
        if within_cap(&cc, config.oracle_cell_cap) {
            let oracle = homology_via_snf(&cc)?;
            let matched = matches_oracle(&report, &oracle);
            if !matched {
                exit_code = EXIT_MISMATCH;
            }
            obj.insert("cross_check".into(), oracle_json(&oracle, matched));
        } else {
            warnings.push(format!(
                "complex has {} cells, above the oracle cap of {}; cross-check skipped",
                cc.total_size(),
                config.oracle_cell_cap
            ));
            obj.insert("cross_check".into(), Value::Null);
        }
    }
    Ok(RunOutcome {
        exit_code,
        report: Value::Object(obj),
        warnings,
    })
}

/// Reads the input, computes the report and writes it out.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    if config.oracle_cell_cap == 0 {
        return Err(Error::Parse {
            line: 0,
            msg: "oracle cell cap must be positive".into(),
        });
    }
    let outcome = run_complex(load_complex(config)?, config)?;
    let text = render(&outcome.report);
    match &config.output_path {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(outcome)
}

/// Pretty JSON with a trailing newline.
pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("JSON values always serialize");
    s.push('\n');
    s
}

//! Command implementations behind the `relext` binary: JSON wire
//! formats, the content-addressed result cache, and the command
//! dispatcher with its exit-code contract
//! (0 success, 2 parse, 3 hypothesis, 4 budget, 5 internal).

pub mod cache;
pub mod spec;

use std::fmt;
use std::path::{Path, PathBuf};

use serde_json::json;

use relext_core::abgrp::{AbGroup, AbMap};
use relext_core::ext::{classify, enumerate_classes, FExtension};
use relext_core::grp::{abelianization, is_ab_surjective, Hom};
use relext_core::universal::{
    commuting_pair_obstruction, five_term_check, h2_vanishing_test, hopf_surjective,
    order_lifting_obstruction, schur_tower, universal_extension, ObstructionKind,
    ObstructionReport, Witness,
};
use relext_core::{Config, Error};

use spec::{build_extension, build_hom, extension_to_spec, ExtSpec, HomSpec};

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Io(String),
    Core(Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                Error::Hypothesis(_) => 3,
                Error::Budget(_) | Error::SizeLimit { .. } => 4,
                Error::Internal(_) => 5,
                _ => 2,
            },
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        CliError::Core(e)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub verify: bool,
    pub no_cache: bool,
    pub budget_order: Option<usize>,
    pub slow: bool,
    pub require_ab_surjective: bool,
}

#[derive(Debug, Clone)]
pub enum ObstructionMode {
    Pair(u32, u32),
    Order(u32),
    Hom(PathBuf),
}

#[derive(Debug, Clone)]
pub enum Command {
    Multiplier { hom: PathBuf },
    Universal { hom: PathBuf, out: PathBuf },
    Tower { hom: PathBuf, max_steps: usize },
    Obstruction { input: PathBuf, mode: ObstructionMode },
    FiveTerm { ext: PathBuf },
    Classes { hom: PathBuf, coeff: Vec<u64> },
}

/// A command result: the line printed to stdout and, for commands that
/// produce a file, its destination and contents.
pub struct Output {
    pub stdout: String,
    pub artifact: Option<(PathBuf, String)>,
}

fn config(opts: &Options) -> Config {
    let mut cfg = Config::default();
    // bar-complex runs above order 24 take minutes; they are opt-in
    cfg.bar_cap = if opts.slow { 128 } else { 24 };
    if let Some(n) = opts.budget_order {
        cfg.order_cap = n;
        cfg.tower_order_cap = n;
    }
    cfg
}

fn read_canonical_json(path: &Path) -> Result<(String, serde_json::Value), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Ok((value.to_string(), value))
}

fn from_value<T: serde::de::DeserializeOwned>(
    value: &serde_json::Value,
    path: &Path,
) -> Result<T, CliError> {
    serde_json::from_value(value.clone())
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn load_hom(path: &Path, cfg: &Config) -> Result<(String, Hom), CliError> {
    let (canon, value) = read_canonical_json(path)?;
    let spec: HomSpec = from_value(&value, path)?;
    Ok((canon, build_hom(&spec, cfg)?))
}

fn check_ab_surjective(f: &Hom, opts: &Options) -> Result<(), CliError> {
    if opts.require_ab_surjective && !is_ab_surjective(f) {
        return Err(CliError::Core(Error::Hypothesis(
            "the map is not surjective on abelianizations".into(),
        )));
    }
    Ok(())
}

fn factors_json(g: &AbGroup) -> serde_json::Value {
    json!(g.invariant_factors())
}

/// H₁ of the mapping cone: the cokernel of the induced map on
/// abelianizations.
fn relative_h1(f: &Hom) -> Result<AbGroup, Error> {
    let (gab, gco) = abelianization(f.target());
    let (gamab, gamco) = abelianization(f.source());
    let mut matrix = vec![vec![0i64; gamab.rank()]; gab.rank()];
    for j in 0..gamab.rank() {
        let gen = gamab.generator(j);
        let gamma = f
            .source()
            .elements()
            .find(|&x| gamco[x as usize] == gen)
            .ok_or_else(|| Error::Internal("abelianization coordinates not surjective".into()))?;
        for (i, &r) in gco[f.apply(gamma) as usize].residues().iter().enumerate() {
            matrix[i][j] = r as i64;
        }
    }
    Ok(AbMap::new(gamab, gab, matrix)?.cokernel())
}

fn cmd_multiplier(f: &Hom, opts: &Options, cfg: &Config) -> Result<Output, CliError> {
    check_ab_surjective(f, opts)?;
    let (h2, method) = if f.is_surjective() {
        let (a, _, _) = hopf_surjective(f, cfg)?;
        if opts.verify {
            let x = universal_extension(f, cfg, true)?;
            if x.a.invariant_factors() != a.invariant_factors() {
                return Err(CliError::Core(Error::Internal(
                    "Hopf and cone multipliers disagree".into(),
                )));
            }
        }
        (a, "hopf")
    } else {
        let rc = relext_core::bar::relative_complex(f, cfg)?;
        (relext_core::bar::homology(&rc, 2)?.group, "cone")
    };
    let h1 = relative_h1(f)?;
    let out = json!({
        "h1_rel": factors_json(&h1),
        "method": method,
        "relative_h2": factors_json(&h2),
    });
    Ok(Output { stdout: out.to_string(), artifact: None })
}

fn cmd_universal(
    f: &Hom,
    out_path: &Path,
    opts: &Options,
    cfg: &Config,
) -> Result<Output, CliError> {
    check_ab_surjective(f, opts)?;
    let x = universal_extension(f, cfg, opts.verify)?;
    let artifact = serde_json::to_string_pretty(&extension_to_spec(&x))
        .expect("extension spec serializes");
    let out = json!({
        "kernel": factors_json(&x.a),
        "u_order": x.e.order(),
    });
    Ok(Output {
        stdout: out.to_string(),
        artifact: Some((out_path.to_path_buf(), artifact)),
    })
}

fn cmd_tower(f: &Hom, max_steps: usize, opts: &Options, cfg: &Config) -> Result<Output, CliError> {
    check_ab_surjective(f, opts)?;
    let t = schur_tower(f, max_steps, cfg)?;
    let stages: Vec<serde_json::Value> = t
        .stages
        .iter()
        .map(|x| json!({"kernel": factors_json(&x.a), "order": x.e.order()}))
        .collect();
    let out = json!({
        "stabilized": t.stabilized,
        "stages": stages,
        "u_infinity_order": t.top().order(),
    });
    Ok(Output { stdout: out.to_string(), artifact: None })
}

fn load_extension_or_universal(
    path: &Path,
    opts: &Options,
    cfg: &Config,
) -> Result<(String, FExtension), CliError> {
    let (canon, value) = read_canonical_json(path)?;
    if let Ok(spec) = serde_json::from_value::<ExtSpec>(value.clone()) {
        return Ok((canon, build_extension(&spec, cfg)?));
    }
    let spec: HomSpec = from_value(&value, path)?;
    let f = build_hom(&spec, cfg)?;
    check_ab_surjective(&f, opts)?;
    Ok((canon, universal_extension(&f, cfg, opts.verify)?))
}

fn report_json(r: &ObstructionReport) -> serde_json::Value {
    let kind = match r.kind {
        ObstructionKind::CommutingPair => "commuting_pair",
        ObstructionKind::ElementOrder => "element_order",
        ObstructionKind::HomLift => "hom_lift",
    };
    let witness = match &r.witness {
        None => serde_json::Value::Null,
        Some(Witness::Pair(x, y)) => json!({"pair": [x, y]}),
        Some(Witness::Element(x)) => json!({"element": x}),
        Some(Witness::Map(h)) => json!({"map": h.image_table()}),
    };
    json!({
        "kind": kind,
        "value": r.value.as_ref().map(|v| v.residues().to_vec()),
        "vanishes": r.vanishes,
        "witness": witness,
    })
}

fn cmd_obstruction(
    x: &FExtension,
    mode: &ObstructionMode,
    g_hom: Option<&Hom>,
    cfg: &Config,
) -> Result<Output, CliError> {
    let report = match mode {
        ObstructionMode::Pair(a, b) => commuting_pair_obstruction(x, *a, *b)?,
        ObstructionMode::Order(a) => order_lifting_obstruction(x, *a)?,
        ObstructionMode::Hom(_) => {
            let g = g_hom.expect("hom loaded for hom mode");
            if g.target() != x.f.target() {
                return Err(CliError::Parse(
                    "the lift candidate does not land in the extension's base group".into(),
                ));
            }
            h2_vanishing_test(g, x, cfg)?
        }
    };
    Ok(Output { stdout: report_json(&report).to_string(), artifact: None })
}

fn cmd_five_term(x: &FExtension, cfg: &Config) -> Result<Output, CliError> {
    let r = five_term_check(x, cfg)?;
    let out = json!({
        "connecting_iso": r.connecting_iso,
        "exact": r.exact(),
        "exact_at_a": r.exact_at_a,
        "exact_at_h1_e": r.exact_at_h1_e,
        "exact_at_h2_g": r.exact_at_h2_g,
        "groups": {
            "a": factors_json(&r.a),
            "h1_e": factors_json(&r.h1_e),
            "h1_g": factors_json(&r.h1_g),
            "h2_e": factors_json(&r.h2_e),
            "h2_g": factors_json(&r.h2_g),
        },
        "surjective_end": r.surjective_end,
    });
    Ok(Output { stdout: out.to_string(), artifact: None })
}

fn cmd_classes(f: &Hom, coeff: &[u64], opts: &Options, cfg: &Config) -> Result<Output, CliError> {
    check_ab_surjective(f, opts)?;
    if coeff.is_empty() || coeff.iter().any(|&d| d < 2) {
        return Err(CliError::Parse("coefficient moduli must all be at least 2".into()));
    }
    let a = AbGroup::from_moduli(coeff);
    let classes = enumerate_classes(f, &a, cfg)?;
    let reps: Vec<serde_json::Value> = classes
        .iter()
        .map(|x| {
            let z = classify(x);
            let n = f.target().order() as u32;
            let mut c_entries = Vec::new();
            for g in 0..n {
                for h in 0..n {
                    let v = z.c_at(g, h);
                    if !v.is_zero() {
                        c_entries.push(json!([g, h, v.residues()]));
                    }
                }
            }
            let mut w_entries = Vec::new();
            for gamma in 0..f.source().order() as u32 {
                let v = z.w_at(gamma);
                if !v.is_zero() {
                    w_entries.push(json!([gamma, v.residues()]));
                }
            }
            json!({"c": c_entries, "w": w_entries})
        })
        .collect();
    let out = json!({
        "classes": reps,
        "coeff": factors_json(&a),
        "count": classes.len(),
    });
    Ok(Output { stdout: out.to_string(), artifact: None })
}

fn flags_fingerprint(opts: &Options) -> String {
    format!(
        "verify={} slow={} budget={:?} require_ab={}",
        opts.verify, opts.slow, opts.budget_order, opts.require_ab_surjective
    )
}

/// Run a command, consulting and updating the result cache unless
/// `--no-cache` is set.
pub fn run(cmd: &Command, opts: &Options) -> Result<Output, CliError> {
    let cfg = config(opts);
    // canonicalize every input up front so the cache key is stable
    // across JSON formatting differences
    let mut parts: Vec<String> = vec![flags_fingerprint(opts)];
    let computed: Result<Output, CliError>;
    match cmd {
        Command::Multiplier { hom } => {
            let (canon, f) = load_hom(hom, &cfg)?;
            parts.extend(["multiplier".into(), canon]);
            if let Some(out) = cache_get(&parts, opts) {
                return Ok(out);
            }
            computed = cmd_multiplier(&f, opts, &cfg);
        }
        Command::Universal { hom, out } => {
            let (canon, f) = load_hom(hom, &cfg)?;
            parts.extend(["universal".into(), canon]);
            if let Some(mut hit) = cache_get(&parts, opts) {
                if let Some((_, body)) = hit.artifact.take() {
                    hit.artifact = Some((out.clone(), body));
                }
                return Ok(hit);
            }
            computed = cmd_universal(&f, out, opts, &cfg);
        }
        Command::Tower { hom, max_steps } => {
            let (canon, f) = load_hom(hom, &cfg)?;
            parts.extend(["tower".into(), format!("max_steps={max_steps}"), canon]);
            if let Some(out) = cache_get(&parts, opts) {
                return Ok(out);
            }
            computed = cmd_tower(&f, *max_steps, opts, &cfg);
        }
        Command::Obstruction { input, mode } => {
            let (canon, x) = load_extension_or_universal(input, opts, &cfg)?;
            let (mode_part, g_hom) = match mode {
                ObstructionMode::Pair(a, b) => (format!("pair={a},{b}"), None),
                ObstructionMode::Order(a) => (format!("order={a}"), None),
                ObstructionMode::Hom(path) => {
                    let (gc, g) = load_hom(path, &cfg)?;
                    (format!("hom={gc}"), Some(g))
                }
            };
            parts.extend(["obstruction".into(), mode_part, canon]);
            if let Some(out) = cache_get(&parts, opts) {
                return Ok(out);
            }
            computed = cmd_obstruction(&x, mode, g_hom.as_ref(), &cfg);
        }
        Command::FiveTerm { ext } => {
            let (canon, value) = read_canonical_json(ext)?;
            let spec: ExtSpec = from_value(&value, ext)?;
            let x = build_extension(&spec, &cfg)?;
            parts.extend(["five-term".into(), canon]);
            if let Some(out) = cache_get(&parts, opts) {
                return Ok(out);
            }
            computed = cmd_five_term(&x, &cfg);
        }
        Command::Classes { hom, coeff } => {
            let (canon, f) = load_hom(hom, &cfg)?;
            let coeff_part = format!(
                "coeff={}",
                coeff.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
            );
            parts.extend(["classes".into(), coeff_part, canon]);
            if let Some(out) = cache_get(&parts, opts) {
                return Ok(out);
            }
            computed = cmd_classes(&f, coeff, opts, &cfg);
        }
    }
    let out = computed?;
    if !opts.no_cache {
        let refs: Vec<&str> = parts.iter().map(|s| s.as_str()).collect();
        cache::store(
            &cache::key(&refs),
            &cache::Envelope {
                stdout: out.stdout.clone(),
                artifact: out.artifact.as_ref().map(|(_, body)| body.clone()),
            },
        );
    }
    Ok(out)
}

fn cache_get(parts: &[String], opts: &Options) -> Option<Output> {
    if opts.no_cache {
        return None;
    }
    let refs: Vec<&str> = parts.iter().map(|s| s.as_str()).collect();
    let env = cache::lookup(&cache::key(&refs))?;
    Some(Output {
        stdout: env.stdout,
        // destination is re-bound by the caller for artifact commands
        artifact: env.artifact.map(|body| (PathBuf::new(), body)),
    })
}

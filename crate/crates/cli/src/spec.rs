//! Wire formats: JSON specifications for groups, homomorphisms and
//! extensions, and their translation to and from the core types.

use serde::{Deserialize, Serialize};

use relext_core::abgrp::AbGroup;
use relext_core::ext::{generating_set, FExtension};
use relext_core::grp::{
    alternating_group, cyclic_group, dihedral_group, group_from_permutations, group_from_table,
    hom_from_generator_images, klein_four_group, quaternion_group, symmetric_group,
    trivial_group, Group, Hom,
};
use relext_core::Config;

use crate::CliError;

/// A finite group given by permutation generators, a full
/// multiplication table, or a name from the fixed catalogue
/// (`trivial`, `cyclic:n`, `dihedral:n`, `quaternion:8`, `sym:n`,
/// `alt:n`, `klein`).
#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// A homomorphism between two [`GroupSpec`]s given on generators of
/// the source.
#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct HomSpec {
    pub source: GroupSpec,
    pub target: GroupSpec,
    pub gens: Vec<u32>,
    pub images: Vec<u32>,
}

/// A central f-extension: the total group E, the kernel's invariant
/// factors, the kernel embedding (image of each kernel element in lex
/// order), and the projection / structure homomorphisms.
#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct ExtSpec {
    pub group: GroupSpec,
    pub kernel: Vec<u64>,
    pub iota: Vec<u32>,
    pub pi: HomSpec,
    pub psi: HomSpec,
}

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

fn named_group(name: &str, cfg: &Config) -> Result<Group, CliError> {
    let (base, arg) = match name.split_once(':') {
        Some((b, a)) => (b, Some(a)),
        None => (name, None),
    };
    let n = |required: bool| -> Result<Option<usize>, CliError> {
        match arg {
            Some(s) => s
                .parse::<usize>()
                .map(Some)
                .map_err(|_| parse_err(format!("bad parameter in group name '{name}'"))),
            None if required => Err(parse_err(format!("group name '{name}' needs a parameter"))),
            None => Ok(None),
        }
    };
    match base {
        "trivial" => Ok(trivial_group()),
        "klein" => Ok(klein_four_group()),
        "cyclic" => Ok(cyclic_group(n(true)?.unwrap())),
        "dihedral" => Ok(dihedral_group(n(true)?.unwrap())),
        "quaternion" => {
            if n(true)?.unwrap() != 8 {
                return Err(parse_err("only quaternion:8 is in the catalogue"));
            }
            Ok(quaternion_group())
        }
        "sym" => symmetric_group(n(true)?.unwrap(), cfg).map_err(CliError::Core),
        "alt" => alternating_group(n(true)?.unwrap(), cfg).map_err(CliError::Core),
        _ => Err(parse_err(format!("unknown group name '{name}'"))),
    }
}

pub fn build_group(spec: &GroupSpec, cfg: &Config) -> Result<Group, CliError> {
    let fields = [
        ("degree", spec.degree.is_some()),
        ("generators", spec.generators.is_some()),
        ("table", spec.table.is_some()),
        ("name", spec.name.is_some()),
    ];
    let allow: &[&str] = match spec.kind.as_str() {
        "permutation" => &["degree", "generators"],
        "table" => &["table"],
        "named" => &["name"],
        other => return Err(parse_err(format!("unknown group spec type '{other}'"))),
    };
    for (f, present) in fields {
        if allow.contains(&f) != present {
            return Err(parse_err(format!(
                "group spec of type '{}' {} field '{}'",
                spec.kind,
                if present { "does not take" } else { "requires" },
                f
            )));
        }
    }
    let g = match spec.kind.as_str() {
        "permutation" => group_from_permutations(
            spec.degree.unwrap(),
            spec.generators.as_ref().unwrap(),
            cfg,
        )
        .map_err(CliError::Core)?,
        "table" => group_from_table(spec.table.clone().unwrap(), cfg).map_err(CliError::Core)?,
        "named" => named_group(spec.name.as_ref().unwrap(), cfg)?,
        _ => unreachable!(),
    };
    // named groups bypass the constructors' budget checks
    if g.order() > cfg.order_cap {
        return Err(CliError::Core(relext_core::Error::SizeLimit {
            cap: cfg.order_cap,
            reached: g.order(),
        }));
    }
    Ok(g)
}

pub fn group_to_spec(g: &Group) -> GroupSpec {
    let n = g.order();
    let table = (0..n as u32)
        .map(|a| (0..n as u32).map(|b| g.mul(a, b)).collect())
        .collect();
    GroupSpec {
        kind: "table".into(),
        degree: None,
        generators: None,
        table: Some(table),
        name: None,
    }
}

pub fn build_hom(spec: &HomSpec, cfg: &Config) -> Result<Hom, CliError> {
    let source = build_group(&spec.source, cfg)?;
    let target = build_group(&spec.target, cfg)?;
    hom_from_generator_images(&source, &target, &spec.gens, &spec.images, cfg)
        .map_err(CliError::Core)
}

pub fn hom_to_spec(h: &Hom) -> HomSpec {
    let gens = generating_set(h.source());
    let images = gens.iter().map(|&g| h.apply(g)).collect();
    HomSpec {
        source: group_to_spec(h.source()),
        target: group_to_spec(h.target()),
        gens,
        images,
    }
}

pub fn build_extension(spec: &ExtSpec, cfg: &Config) -> Result<FExtension, CliError> {
    let e = build_group(&spec.group, cfg)?;
    let pi = build_hom(&spec.pi, cfg)?;
    let psi = build_hom(&spec.psi, cfg)?;
    if pi.source() != &e || psi.target() != &e {
        return Err(parse_err("extension homomorphisms do not match the total group"));
    }
    let a = AbGroup::from_invariant_factors(spec.kernel.clone()).map_err(CliError::Core)?;
    let f = pi.compose(&psi);
    FExtension::new(f, a, e, spec.iota.clone(), pi, psi).map_err(CliError::Core)
}

pub fn extension_to_spec(x: &FExtension) -> ExtSpec {
    ExtSpec {
        group: group_to_spec(&x.e),
        kernel: x.a.invariant_factors().to_vec(),
        iota: x.iota.clone(),
        pi: hom_to_spec(&x.pi),
        psi: hom_to_spec(&x.psi),
    }
}

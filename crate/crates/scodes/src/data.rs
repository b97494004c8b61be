//! Facts and packing data, with environment overrides.

use std::path::{Path, PathBuf};

use scodes_core::bounds::{Engine, FactTable};
use scodes_core::constructions::{find_parallelism, packing_from_table, DPacking, PackingTable};
use scodes_core::gfq::Field;

use crate::codefile::parse_packing;
use crate::error::CliError;

pub const FACTS_ENV: &str = "SCODES_FACTS";
pub const PACKINGS_ENV: &str = "SCODES_PACKINGS";

/// Names always available without a data directory.
pub const BUILTIN_PACKINGS: &[&str] = &["parallelism-4-2", "cosets-5-2", "cosets-6-2"];

pub fn load_facts(path: &Path) -> Result<FactTable, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    FactTable::parse(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// The bound engine: no facts, the file named by `SCODES_FACTS`, or the built-in table.
pub fn engine(no_facts: bool) -> Result<Engine, CliError> {
    if no_facts {
        return Ok(Engine::pure());
    }
    match std::env::var_os(FACTS_ENV) {
        Some(p) if !p.is_empty() => Ok(Engine::with_facts(load_facts(Path::new(&p))?)),
        _ => Ok(Engine::new()),
    }
}

fn data_file(name: &str) -> Option<PathBuf> {
    let direct = PathBuf::from(name);
    if direct.is_file() {
        return Some(direct);
    }
    let dir = PathBuf::from(std::env::var_os(PACKINGS_ENV).filter(|d| !d.is_empty())?);
    ["", ".table", ".scode"].iter().map(|ext| dir.join(format!("{name}{ext}"))).find(|p| p.is_file())
}

fn packing_from_file(field: &Field, path: &Path) -> Result<DPacking, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let bad = |e: String| CliError::Data(format!("{}: {e}", path.display()));
    let p = if path.extension().is_some_and(|x| x == "table") {
        let t = PackingTable::parse(&text).map_err(|e| bad(e.to_string()))?;
        packing_from_table(field, &t).map_err(|e| bad(e.to_string()))?
    } else {
        parse_packing(&text).map_err(|e| bad(e.to_string()))?
    };
    if p.field != *field {
        return Err(bad(format!("packing is over GF({}), not GF({})", p.field.q(), field.q())));
    }
    p.check_distances().map_err(|e| bad(e.to_string()))?;
    Ok(p)
}

/// Resolves a packing by path, by name inside `SCODES_PACKINGS`, or by built-in name.
pub fn packing(field: &Field, name: &str) -> Result<DPacking, CliError> {
    if let Some(path) = data_file(name) {
        return packing_from_file(field, &path);
    }
    let built = match name {
        "parallelism-4-2" => find_parallelism(field, 4, 2).map(|p| p.into_packing()),
        "cosets-5-2" => packing_from_table(field, &PackingTable::cosets_5_2()),
        "cosets-6-2" => packing_from_table(field, &PackingTable::cosets_6_2()),
        _ => {
            return Err(CliError::Data(format!(
                "no packing {name:?}: not a file, not in ${PACKINGS_ENV}, not one of {BUILTIN_PACKINGS:?}"
            )))
        }
    };
    built.map_err(CliError::from)
}

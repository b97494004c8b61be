use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use scodes_core::bounds::label;
use scodes_core::constructions::{assemble_coset_8_4_4, combine, echelon_ferrers, lifted_mrd, partial_spread, skeleton_greedy, Cdc, Certify, SkeletonCode};
use scodes_core::divisible::{divisible_exists, sharp_floor, sqr_bases, sqr_expand};
use scodes_core::gfq::{Field, FieldSpec};
use scodes_core::provenance::Direction;
use scodes_core::verify::{self, Mode, VerificationReport};

use crate::codefile::{read_code, write_code};
use crate::error::CliError;
use crate::{data, recipes, table};

/// Codes above this size are verified by sampling unless `--exact` is given.
pub const EXACT_LIMIT: usize = 6000;
const DEFAULT_PAIRS: u64 = 200_000;

#[derive(Parser, Debug)]
#[command(name = "scodes", version, about = "Bounds and constructions for constant-dimension subspace codes")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Best known bound on A_q(n,d;k).
    Bound(BoundArgs),
    /// Build a code, verify it and write it as a code file.
    Construct(Box<ConstructArgs>),
    /// Recompute the minimum distance of a code file.
    Verify(VerifyArgs),
    /// Table of lower and upper bounds.
    Table(TableArgs),
    /// S_q(r)-adic expansion of an integer.
    Expand(ExpandArgs),
    /// Largest m such that a - m*b is the size of a q^r-divisible multiset of points.
    Sharpfloor(SharpArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dir {
    Upper,
    Lower,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "upper")]
    pub dir: Dir,
    /// Print the provenance tree.
    #[arg(long)]
    pub explain: bool,
    /// Ignore the facts table.
    #[arg(long)]
    pub no_facts: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Recipe {
    Lmrd,
    Linkage,
    ImprovedLinkage,
    GenLinkage,
    Ef,
    Spread,
    Coset,
    Insert1,
    Insert2,
    Assemble,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    pub recipe: Recipe,
    #[arg(long, default_value_t = 2)]
    pub q: u64,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Width of the first block for the linkage recipes (default k).
    #[arg(long)]
    pub n1: Option<usize>,
    /// Pivot vectors for `ef`, comma separated (default: greedy).
    #[arg(long)]
    pub skeleton: Option<String>,
    /// Packing for `coset`: a file, a name in $SCODES_PACKINGS, or a built-in name.
    #[arg(long)]
    pub packing: Option<String>,
    /// Second packing for `coset` (default: the first).
    #[arg(long)]
    pub packing2: Option<String>,
    /// Four block widths n1,n2,n3,n4 for the inserting recipes.
    #[arg(long, value_delimiter = ',')]
    pub widths: Option<Vec<usize>>,
    #[arg(long)]
    pub k1: Option<usize>,
    #[arg(long)]
    pub k2: Option<usize>,
    #[arg(long)]
    pub d1: Option<usize>,
    #[arg(long)]
    pub d2: Option<usize>,
    /// Code files to combine with `assemble`.
    #[arg(long = "from")]
    pub from: Vec<PathBuf>,
    /// Output file (default: standard output).
    #[arg(short = 'o', long = "out")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub check: CheckArgs,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Check this many random pairs instead of all pairs.
    #[arg(long)]
    pub sample: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Check all pairs regardless of size.
    #[arg(long, conflicts_with = "sample")]
    pub exact: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub file: PathBuf,
    /// Required minimum distance (default: the header's d).
    #[arg(long)]
    pub expect_d: Option<usize>,
    #[command(flatten)]
    pub check: CheckArgs,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub n_max: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long, value_enum, default_value = "md")]
    pub format: table::Format,
    #[arg(long)]
    pub no_facts: bool,
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub value: BigInt,
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub r: u32,
}

#[derive(Args, Debug)]
pub struct SharpArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: BigInt,
    #[arg(long, allow_hyphen_values = true)]
    pub b: BigInt,
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub r: u32,
}

fn field(q: u64) -> Result<Field, CliError> {
    FieldSpec::of_order(q).map_err(|e| CliError::Param(format!("q={q}: {e}")))
}

fn need<T: Copy>(v: Option<T>, name: &str, recipe: Recipe) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Param(format!("{recipe:?} needs --{name}").to_lowercase()))
}

pub fn run(cli: Cli, out: &mut dyn std::io::Write) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Data(e.to_string());
    match cli.cmd {
        Cmd::Bound(a) => {
            field(a.q)?;
            let e = data::engine(a.no_facts)?;
            let dir = match a.dir {
                Dir::Upper => Direction::Upper,
                Dir::Lower => Direction::Lower,
            };
            let r = e.best(dir, a.q, a.n, a.d, a.k)?;
            writeln!(out, "{}", r.value).map_err(io)?;
            if a.explain {
                write!(out, "{}", r.explain()).map_err(io)?;
            }
        }
        Cmd::Construct(a) => {
            let c = construct(&a)?;
            let report = check(&c, &a.check)?;
            let text = write_code(&c).ok_or_else(|| CliError::Param(format!("code has {} words; too many to list", c.size())))?;
            let summary = format!("{}, {}", c.rule(), summarize(&c, &report));
            if report.min_distance.is_some_and(|m| m < c.d()) {
                return Err(CliError::Verify(summary));
            }
            match &a.out {
                Some(path) => {
                    std::fs::write(path, text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
                    writeln!(out, "wrote {}: {summary}", path.display()).map_err(io)?;
                }
                None => {
                    out.write_all(text.as_bytes()).map_err(io)?;
                    eprintln!("{summary}");
                }
            }
        }
        Cmd::Verify(a) => {
            let c = read_code(&a.file).map_err(|e| CliError::Data(e.to_string()))?;
            let report = check(&c, &a.check)?;
            let want = a.expect_d.unwrap_or(c.d());
            let summary = summarize(&c, &report);
            writeln!(out, "{summary}").map_err(io)?;
            let hist: Vec<String> = report.histogram.iter().map(|(d, n)| format!("{d}:{n}")).collect();
            writeln!(out, "distances {}", hist.join(" ")).map_err(io)?;
            if report.min_distance.is_some_and(|m| m < want) {
                return Err(CliError::Verify(format!("minimum distance {} < {want}", report.min_distance.unwrap())));
            }
        }
        Cmd::Table(a) => {
            field(a.q)?;
            let e = data::engine(a.no_facts)?;
            let rows = table::rows(&e, a.q, a.n_max, a.d)?;
            write!(out, "{}", table::render(&rows, a.q, a.d, a.format)).map_err(io)?;
        }
        Cmd::Expand(a) => {
            field(a.q)?;
            let x = sqr_expand(&a.value, a.q, a.r);
            let bases: Vec<String> = sqr_bases(a.q, a.r).sigma.iter().map(BigInt::to_string).collect();
            let coeffs: Vec<String> = x.coefficients().iter().map(BigInt::to_string).collect();
            writeln!(out, "bases {}", bases.join(" ")).map_err(io)?;
            writeln!(out, "coefficients {}", coeffs.join(" ")).map_err(io)?;
            let ok = if divisible_exists(&a.value, a.q, a.r) { "yes" } else { "no" };
            writeln!(out, "realizable {ok}").map_err(io)?;
        }
        Cmd::Sharpfloor(a) => {
            field(a.q)?;
            if a.b == BigInt::from(0) {
                return Err(CliError::Param("b must be nonzero".into()));
            }
            match sharp_floor(&a.a, &a.b, a.q, a.r) {
                Some(v) => writeln!(out, "{v}").map_err(io)?,
                None => writeln!(out, "-inf").map_err(io)?,
            }
        }
    }
    Ok(())
}

fn construct(a: &ConstructArgs) -> Result<Cdc, CliError> {
    let f = field(a.q)?;
    let r = a.recipe;
    let nkd = || -> Result<(usize, usize, usize), CliError> { Ok((need(a.n, "n", r)?, need(a.k, "k", r)?, need(a.d, "d", r)?)) };
    let widths = || -> Result<[usize; 4], CliError> {
        let w = a.widths.as_ref().ok_or_else(|| CliError::Param("this recipe needs --widths n1,n2,n3,n4".into()))?;
        match w[..] {
            [a, b, c, d] => Ok([a, b, c, d]),
            _ => Err(CliError::Param(format!("--widths needs four values, got {}", w.len()))),
        }
    };
    let c = match r {
        Recipe::Lmrd => {
            let (n, k, d) = nkd()?;
            lifted_mrd(&f, n, k, d)?
        }
        Recipe::Linkage => {
            let (n, k, d) = nkd()?;
            recipes::linkage_code(&f, n, d, k, a.n1)?
        }
        Recipe::ImprovedLinkage => {
            let (n, k, d) = nkd()?;
            recipes::improved_linkage_code(&f, n, d, k, a.n1)?
        }
        Recipe::GenLinkage => {
            let (n, k, d) = nkd()?;
            recipes::generalized_linkage_code(&f, n, d, k, a.n1)?
        }
        Recipe::Ef => {
            let d = need(a.d, "d", r)?;
            let s = match &a.skeleton {
                Some(list) => SkeletonCode::parse(list, d)?,
                None => skeleton_greedy(a.q, need(a.n, "n", r)?, need(a.k, "k", r)?, d)?,
            };
            if a.n.is_some_and(|n| n != s.n) || a.k.is_some_and(|k| k != s.k) {
                return Err(CliError::Param(format!("skeleton vectors have n={} k={}", s.n, s.k)));
            }
            echelon_ferrers(&f, &s, d)?
        }
        Recipe::Spread => partial_spread(&f, need(a.n, "n", r)?, need(a.k, "k", r)?)?,
        Recipe::Coset => {
            let name = a.packing.as_deref().ok_or_else(|| CliError::Param("coset needs --packing".into()))?;
            let p1 = data::packing(&f, name)?;
            let p2 = match &a.packing2 {
                Some(n2) => data::packing(&f, n2)?,
                None => p1.clone(),
            };
            let d = a.d.unwrap_or(p1.d_inner.min(p2.d_inner));
            recipes::coset(&f, &p1, &p2, d)?
        }
        Recipe::Insert1 => recipes::insert1(
            &f,
            widths()?,
            need(a.k1, "k1", r)?,
            need(a.k2, "k2", r)?,
            need(a.d1, "d1", r)?,
            need(a.d2, "d2", r)?,
        )?,
        Recipe::Insert2 => recipes::insert2(&f, widths()?, need(a.k1, "k1", r)?, need(a.k2, "k2", r)?, need(a.d, "d", r)?)?,
        Recipe::Assemble if a.from.is_empty() => {
            let (n, k, d) = (a.n.unwrap_or(8), a.k.unwrap_or(4), a.d.unwrap_or(4));
            if (a.q, n, k, d) != (2, 8, 4, 4) {
                return Err(CliError::Param("without --from, assemble only knows q=2 n=8 k=4 d=4".into()));
            }
            assemble_coset_8_4_4(&f)?
        }
        Recipe::Assemble => {
            let parts = a.from.iter().map(|p| read_code(p).map_err(|e| CliError::Data(e.to_string()))).collect::<Result<Vec<_>, _>>()?;
            let d = a.d.unwrap_or_else(|| parts.iter().map(Cdc::d).min().unwrap_or(2));
            combine(&parts, d, Certify::BruteForce)?
        }
    };
    if let (Some(n), Some(k)) = (a.n, a.k) {
        if (c.n(), c.k()) != (n, k) {
            return Err(CliError::Param(format!("recipe produced an ({}, {}) code, not ({n}, {k})", c.n(), c.k())));
        }
    }
    Ok(c)
}

fn check(c: &Cdc, a: &CheckArgs) -> Result<VerificationReport, CliError> {
    let words = c.words().ok_or_else(|| CliError::Param(format!("code has {} words; too many to verify explicitly", c.size())))?;
    let mode = match a.sample {
        Some(pairs) => Mode::Sampled { pairs, seed: a.seed },
        None if a.exact || words.len() <= EXACT_LIMIT => Mode::Exact { cap: usize::MAX },
        None => Mode::Sampled { pairs: DEFAULT_PAIRS, seed: a.seed },
    };
    verify::min_distance(c, mode).map_err(|e| CliError::Param(e.to_string()))
}

fn summarize(c: &Cdc, r: &VerificationReport) -> String {
    let how = if r.certified {
        format!("exact, {} pairs", r.pairs_checked)
    } else {
        format!("sampled, {} pairs, seed {}", r.pairs_checked, r.seed.unwrap_or(0))
    };
    let md = r.min_distance.map_or_else(|| "none".to_string(), |m| m.to_string());
    format!("{} words in {}, minimum distance {md} ({how})", r.size, label(c.q(), c.n(), c.d(), c.k()))
}

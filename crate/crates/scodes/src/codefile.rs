//! The `SCODE 1` text format for codes and packings.
//!
//! ```text
//! SCODE 1
//! q=2 p=2 e=1 n=4 k=2 d=4 count=1
//! 1 0 0 0
//! 0 1 0 0
//!
//! ```
//!
//! Packing files add `outer=<d>` to the header and open each part with a `part=<i>` line.

use std::fmt::Write as _;
use std::path::Path;

use scodes_core::constructions::{Cdc, DPacking};
use scodes_core::gfq::{Field, FieldSpec};
use scodes_core::spaces::{MatGF, Subspace};

#[derive(Debug)]
pub struct FormatError {
    pub line: usize,
    pub msg: String,
}

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.msg)
        } else {
            write!(f, "line {}: {}", self.line, self.msg)
        }
    }
}

impl std::error::Error for FormatError {}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError { line, msg: msg.into() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Header {
    pub field: Field,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub count: usize,
    pub outer: Option<usize>,
}

fn header_line(field: &Field, n: usize, k: usize, d: usize, count: usize, outer: Option<usize>) -> String {
    let mut s = format!("q={} p={} e={} n={n} k={k} d={d} count={count}", field.q(), field.p(), field.e());
    if field.e() > 1 {
        let m: Vec<String> = field.modulus().iter().map(u32::to_string).collect();
        let _ = write!(s, " mod={}", m.join(","));
    }
    if let Some(o) = outer {
        let _ = write!(s, " outer={o}");
    }
    s
}

fn push_word(out: &mut String, w: &Subspace) {
    let m = w.matrix();
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(u32::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out.push('\n');
}

/// Serializes an explicit code; `None` for codes known only by size.
pub fn write_code(c: &Cdc) -> Option<String> {
    let words = c.words()?;
    let mut out = String::from("SCODE 1\n");
    out.push_str(&header_line(c.field(), c.n(), c.k(), c.d(), words.len(), None));
    out.push('\n');
    for w in words {
        push_word(&mut out, w);
    }
    Some(out)
}

pub fn write_packing(p: &DPacking) -> String {
    let count = p.parts.iter().map(Vec::len).sum();
    let mut out = String::from("SCODE 1\n");
    out.push_str(&header_line(&p.field, p.n, p.k, p.d_inner, count, Some(p.d_outer)));
    out.push('\n');
    for (i, part) in p.parts.iter().enumerate() {
        let _ = writeln!(out, "part={i}");
        for w in part {
            push_word(&mut out, w);
        }
    }
    out
}

fn parse_header(line: &str, no: usize) -> Result<Header, FormatError> {
    let mut q = None;
    let (mut p, mut e, mut n, mut k, mut d, mut count, mut outer) = (None, None, None, None, None, None, None);
    let mut modulus: Option<Vec<u32>> = None;
    for tok in line.split_whitespace() {
        let Some((key, val)) = tok.split_once('=') else {
            return err(no, format!("expected key=value, got {tok:?}"));
        };
        if key == "mod" {
            let m = val.split(',').map(str::parse).collect::<Result<Vec<u32>, _>>();
            modulus = Some(m.or_else(|_| err(no, format!("bad modulus {val:?}")))?);
            continue;
        }
        let v: u64 = val.parse().or_else(|_| err(no, format!("bad value for {key}: {val:?}")))?;
        let slot = match key {
            "q" => &mut q,
            "p" => &mut p,
            "e" => &mut e,
            "n" => &mut n,
            "k" => &mut k,
            "d" => &mut d,
            "count" => &mut count,
            "outer" => &mut outer,
            _ => return err(no, format!("unknown header key {key:?}")),
        };
        *slot = Some(v);
    }
    let need = |v: Option<u64>, name: &str| v.map_or_else(|| err(no, format!("header lacks {name}=")), Ok);
    let (q, p, e) = (need(q, "q")?, need(p, "p")?, need(e, "e")?);
    let e32 = u32::try_from(e).or_else(|_| err(no, "degree too large"))?;
    if p.checked_pow(e32) != Some(q) {
        return err(no, format!("q={q} is not p^e for p={p}, e={e}"));
    }
    if e > 1 && modulus.is_none() {
        return err(no, "extension fields need mod=");
    }
    let field = FieldSpec::new(p, e32, modulus.as_deref()).or_else(|x| err(no, format!("bad field: {x}")))?;
    Ok(Header {
        field,
        n: need(n, "n")? as usize,
        k: need(k, "k")? as usize,
        d: need(d, "d")? as usize,
        count: need(count, "count")? as usize,
        outer: outer.map(|o| o as usize),
    })
}

struct Parsed {
    header: Header,
    /// Words tagged with their part index; plain codes use part 0 throughout.
    words: Vec<(usize, Subspace)>,
    parts: usize,
}

fn parse_any(text: &str, packing: bool) -> Result<Parsed, FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.starts_with('#'));
    match lines.next() {
        Some((_, "SCODE 1")) => {}
        Some((no, l)) => return err(no, format!("expected 'SCODE 1', got {l:?}")),
        None => return err(0, "empty file"),
    }
    let (no, h) = lines.by_ref().find(|(_, l)| !l.is_empty()).ok_or(FormatError { line: 0, msg: "missing header".into() })?;
    let header = parse_header(h, no)?;
    if packing != header.outer.is_some() {
        return err(no, if packing { "packing header lacks outer=" } else { "outer= only belongs in packing files" });
    }
    let (n, k) = (header.n, header.k);
    if k > n {
        return err(no, format!("k={k} exceeds n={n}"));
    }
    let q = header.field.q();
    let mut words = Vec::new();
    let mut part: Option<usize> = if packing { None } else { Some(0) };
    let mut parts = if packing { 0 } else { 1 };
    let mut rows: Vec<u32> = Vec::new();
    let mut start = 0;
    let flush = |rows: &mut Vec<u32>, start: usize, part: Option<usize>, words: &mut Vec<(usize, Subspace)>| -> Result<(), FormatError> {
        if rows.is_empty() {
            return Ok(());
        }
        if rows.len() != k * n {
            return err(start, format!("codeword has {} entries, expected {k} rows of {n}", rows.len()));
        }
        let part = part.map_or_else(|| err(start, "codeword before the first part= line"), Ok)?;
        let m = MatGF::new(&header.field, k, n, std::mem::take(rows)).or_else(|e| err(start, e.to_string()))?;
        let u = m.row_space();
        if u.k() != k {
            return err(start, format!("codeword has rank {} < k={k}", u.k()));
        }
        words.push((part, u));
        Ok(())
    };
    for (no, l) in lines {
        if l.is_empty() {
            flush(&mut rows, start, part, &mut words)?;
            continue;
        }
        if let Some(i) = l.strip_prefix("part=") {
            if !packing {
                return err(no, "part= only belongs in packing files");
            }
            flush(&mut rows, start, part, &mut words)?;
            let i: usize = i.trim().parse().or_else(|_| err(no, format!("bad part index {i:?}")))?;
            if i != parts {
                return err(no, format!("expected part={parts}, got part={i}"));
            }
            part = Some(i);
            parts += 1;
            continue;
        }
        if rows.is_empty() {
            start = no;
        }
        let row: Vec<u32> = l
            .split_whitespace()
            .map(|t| t.parse::<u32>().ok().filter(|&v| v < q))
            .collect::<Option<_>>()
            .map_or_else(|| err(no, format!("entries must be integers in [0,{q})")), Ok)?;
        if row.len() != n {
            return err(no, format!("row has {} entries, expected n={n}", row.len()));
        }
        rows.extend(row);
    }
    flush(&mut rows, start, part, &mut words)?;
    if words.len() != header.count {
        return err(0, format!("header declares count={} but the file holds {} codewords", header.count, words.len()));
    }
    Ok(Parsed { header, words, parts })
}

pub fn parse_code(text: &str) -> Result<Cdc, FormatError> {
    let p = parse_any(text, false)?;
    let h = &p.header;
    let words: Vec<Subspace> = p.words.into_iter().map(|(_, w)| w).collect();
    let mut seen = std::collections::BTreeSet::new();
    if let Some(w) = words.iter().find(|w| !seen.insert(*w)) {
        return err(0, format!("repeated codeword {w:?}"));
    }
    Cdc::from_words(&h.field, h.n, h.k, h.d, words, "code file").or_else(|e| err(0, e.to_string()))
}

pub fn parse_packing(text: &str) -> Result<DPacking, FormatError> {
    let p = parse_any(text, true)?;
    let h = &p.header;
    let mut parts = vec![Vec::new(); p.parts];
    for (i, w) in p.words {
        parts[i].push(w);
    }
    DPacking::new(&h.field, h.n, h.k, h.outer.unwrap_or(0), h.d, parts).or_else(|e| err(0, e.to_string()))
}

pub fn read_code(path: &Path) -> Result<Cdc, FormatError> {
    let text = std::fs::read_to_string(path).or_else(|e| err(0, format!("{}: {e}", path.display())))?;
    parse_code(&text).map_err(|e| FormatError { msg: format!("{}: {}", path.display(), e.msg), ..e })
}
